//! The verification families, each producing a list of [`CheckReport`]s. The command-line
//! front end and the acceptance test both run these.

use serde_json::json;
use thiserror::Error;

use crate::bsmod::relations::{orientation_witness, relation_suite};
use crate::bsmod::{hom_dim_at_degree, predicted_hom_dim, BsError};
use crate::coxeter::{hilbert, longest, longest_length, reduced_words, CoxeterError, Parabolic, Word};
use crate::exprgraph::{
    build_expanded, build_expanded_from_word, canonical_vertex, classify_cycles, Canonical, GraphError, ParabolicGraph,
};
use crate::hecke::{b_gen, b_parabolic, b_word, HeckeElt, HeckeError, LaurentPoly};
use crate::induced::{epsilon_symmetry, hecke_side_rank, verify_homs_in_tj, InducedError, Membrane};
use crate::poly_core::{demazure, demazure_word, dual_bases, partial_parabolic, reflect, Monomial, MultiPoly, PolyError};
use crate::report::CheckReport;
use crate::thick::{
    hom_to_r_certificate, summand_rank, verify_a_properties, verify_aborted_trivalents, verify_aborted_v, verify_split,
    verify_xi, very_thick_action_check, ProjectorFamily, ThickError,
};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bimodule(#[from] BsError),
    #[error(transparent)]
    Thick(#[from] ThickError),
    #[error(transparent)]
    Induced(#[from] InducedError),
}

pub type SuiteResult = Result<Vec<CheckReport>, SuiteError>;

/// Suite names accepted by [`run_suite`].
pub const SUITES: &[&str] = &["demazure", "hecke", "graph", "relations", "orientation", "zidem", "aborts", "aprops", "ranks", "split", "frobenius", "tj"];

/// Parameters shared by the suites.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub n: usize,
    pub parabolic: Parabolic,
    pub seed: u64,
    pub degree_window: Option<(i32, i32)>,
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> SuiteResult {
    let j = &cfg.parabolic;
    match name {
        "demazure" => demazure_suite(cfg.n, 12),
        "hecke" => hecke_suite(cfg.n),
        "graph" => graph_suite(cfg.n),
        "relations" => relations_suite(cfg.n as u8),
        "orientation" => orientation_suite(),
        "zidem" => zidem_suite(j, 20, cfg.seed),
        "aborts" => aborts_suite(j),
        "aprops" => Ok(verify_a_properties(j)?),
        "ranks" => ranks_suite(cfg.n, match cfg.n { 0..=2 => 6, 3 => 5, _ => 4 }, j, cfg.degree_window),
        "split" => split_suite(j, cfg.seed),
        "frobenius" => frobenius_suite(j),
        "tj" => tj_suite(j, 3),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

/// Monomials in `f_1..f_n` with exponent sum at most `max`.
fn monomials_up_to(n: usize, max: u32) -> Vec<MultiPoly> {
    let vars: Vec<usize> = (1..=n).collect();
    (0..=max)
        .flat_map(|d| Monomial::all_of_degree(&vars, d))
        .map(|m| MultiPoly::monomial(m, crate::poly_core::coeff(1)))
        .collect()
}

fn tally(name: &str, params: serde_json::Value, failures: Vec<serde_json::Value>) -> CheckReport {
    let ok = failures.is_empty();
    let r = CheckReport::new(name, params, ok);
    if ok {
        r
    } else {
        r.with_witness(json!(failures.into_iter().take(5).collect::<Vec<_>>()))
    }
}

/// Nil-Hecke relations on monomials of degree at most `max_degree` (with `deg f_i = 2`),
/// twisted Leibniz on pairs of monomials of joint degree at most `max_degree`, and
/// independence of `∂_J` from the reduced word for connected `|J| <= 3`.
pub fn demazure_suite(n: usize, max_degree: u32) -> SuiteResult {
    let top = max_degree / 2;
    let monos = monomials_up_to(n, top);
    let params = json!({ "n": n, "max_degree": max_degree });
    let mut out = Vec::new();

    let mut bad = Vec::new();
    for i in 1..=n {
        for p in &monos {
            if !demazure(i, &demazure(i, p)?)?.is_zero() {
                bad.push(json!({ "i": i, "p": p.to_string() }));
            }
        }
    }
    out.push(tally("demazure squares to zero", params.clone(), bad));

    let mut bad = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for p in &monos {
                let holds = if j == i + 1 {
                    demazure(i, &demazure(j, &demazure(i, p)?)?)? == demazure(j, &demazure(i, &demazure(j, p)?)?)?
                } else {
                    demazure(i, &demazure(j, p)?)? == demazure(j, &demazure(i, p)?)?
                };
                if !holds {
                    bad.push(json!({ "i": i, "j": j, "p": p.to_string() }));
                }
            }
        }
    }
    out.push(tally("demazure braid relations", params.clone(), bad));

    let mut bad = Vec::new();
    let small = monomials_up_to(n, top);
    for i in 1..=n {
        for f in &small {
            let df = demazure(i, f)?;
            let sf = reflect(i, f)?;
            let fdeg = f.total_degree().unwrap_or(0);
            for g in monos.iter().filter(|g| g.total_degree().unwrap_or(0) + fdeg <= top) {
                let lhs = demazure(i, &(f * g))?;
                let rhs = &(&df * g) + &(&sf * &demazure(i, g)?);
                if lhs != rhs {
                    bad.push(json!({ "i": i, "f": f.to_string(), "g": g.to_string() }));
                }
            }
        }
    }
    out.push(tally("twisted Leibniz rule", params, bad));

    for j in connected_subsets(n, 3) {
        let d = longest_length(&j) as u32;
        let words = reduced_words(&longest(&j, j.max_index()).0);
        let tests: Vec<MultiPoly> = monomials_up_to(n, d + 1).into_iter().filter(|p| p.total_degree() >= Some(d)).collect();
        let mut bad = Vec::new();
        for p in &tests {
            let first = demazure_word(&words[0], p)?;
            for w in &words[1..] {
                if demazure_word(w, p)? != first {
                    bad.push(json!({ "word": w.to_string(), "p": p.to_string() }));
                }
            }
            if partial_parabolic(&j, p)? != first {
                bad.push(json!({ "word": "partial_parabolic", "p": p.to_string() }));
            }
        }
        out.push(tally(
            "parabolic Demazure independent of the reduced word",
            json!({ "J": j.indices(), "words": words.len() }),
            bad,
        ));
    }
    Ok(out)
}

fn connected_subsets(n: usize, max_size: usize) -> Vec<Parabolic> {
    let mut out = Vec::new();
    for size in 1..=max_size.min(n) {
        for lo in 1..=n + 1 - size {
            out.push(Parabolic::interval(lo, lo + size - 1));
        }
    }
    out
}

/// All subsets of `1..=n`, as parabolics.
fn all_subsets(n: usize) -> Vec<Parabolic> {
    (0u32..1 << n)
        .map(|mask| Parabolic::new((1..=n).filter(|k| mask & (1 << (k - 1)) != 0)))
        .collect()
}

/// Quadratic, distant and braid relations of the `b_i`, the absorption and distant
/// relations of the `b_J`, `ε(b_J) = v^{d_J}`, and `ω` being an involution.
pub fn hecke_suite(n: usize) -> SuiteResult {
    let two = LaurentPoly::quantum_two();
    let params = json!({ "n": n });
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for i in 1..=n {
        let bi = b_gen(i, n);
        if bi.mul(&bi) != bi.scale(&two) {
            bad.push(json!({ "relation": "quadratic", "i": i }));
        }
        for j in 1..=n {
            let bj = b_gen(j, n);
            if i.abs_diff(j) >= 2 && bi.mul(&bj) != bj.mul(&bi) {
                bad.push(json!({ "relation": "distant", "i": i, "j": j }));
            }
            if i.abs_diff(j) == 1 {
                let l = bi.mul(&bj).mul(&bi).add(&bj);
                let r = bj.mul(&bi).mul(&bj).add(&bi);
                if l != r {
                    bad.push(json!({ "relation": "braid", "i": i, "j": j }));
                }
            }
        }
    }
    out.push(tally("generator relations", params.clone(), bad));

    let subsets = all_subsets(n);
    let mut bad = Vec::new();
    for jj in &subsets {
        let bj = b_parabolic(jj, n);
        for &i in jj.indices() {
            let bi = b_gen(i, n);
            if bi.mul(&bj) != bj.scale(&two) || bj.mul(&bi) != bj.scale(&two) {
                bad.push(json!({ "relation": "absorb", "J": jj.indices(), "i": i }));
            }
        }
        for kk in &subsets {
            let bk = b_parabolic(kk, n);
            if jj.is_subset(kk) {
                let scaled = bk.scale(&hilbert(jj));
                if bj.mul(&bk) != scaled || bk.mul(&bj) != scaled {
                    bad.push(json!({ "relation": "nested", "J": jj.indices(), "K": kk.indices() }));
                }
            }
            if jj.is_distant_from(kk) {
                let joint = b_parabolic(&jj.union(kk), n);
                if bj.mul(&bk) != bk.mul(&bj) || bj.mul(&bk) != joint {
                    bad.push(json!({ "relation": "distant", "J": jj.indices(), "K": kk.indices() }));
                }
            }
        }
        if bj.epsilon() != LaurentPoly::monomial(longest_length(jj) as i32, 1) {
            bad.push(json!({ "relation": "trace", "J": jj.indices() }));
        }
    }
    out.push(tally("parabolic relations", params.clone(), bad));

    let mut bad = Vec::new();
    let words: Vec<Word> = ["", "1", "12", "121", "213", "3121", "1232"]
        .iter()
        .map(|s| s.parse::<Word>())
        .collect::<Result<_, _>>()?;
    for (k, w) in words.iter().filter(|w| w.max_letter() <= n).enumerate() {
        let c = LaurentPoly::from_pairs([(k as i32 - 2, 1), (1, 3)]);
        let x: HeckeElt = b_word(w, n)?.scale(&c);
        if x.omega().omega() != x {
            bad.push(json!({ "word": w.to_string() }));
        }
        // ω bars the coefficient and reverses the word, and the trace does not see the reversal.
        if x.omega().epsilon() != &c.bar() * &b_word(w, n)?.epsilon() {
            bad.push(json!({ "word": w.to_string(), "relation": "trace of omega" }));
        }
    }
    out.push(tally("omega is an involution compatible with the trace", params, bad));
    Ok(out)
}

/// Reduced-word graphs of the longest elements of `[1..k]`, canonical words, and the cycle
/// census on the named examples.
pub fn graph_suite(max_size: usize) -> SuiteResult {
    let mut out = Vec::new();
    for k in 1..=max_size.min(4) {
        let j = Parabolic::interval(1, k);
        let (w, _) = longest(&j, k);
        let g = build_expanded(&w);
        let params = json!({ "J": j.indices() });
        out.push(CheckReport::new("reduced-word graph connected", params.clone(), g.is_connected()));
        let expected = [1usize, 2, 16, 768][k - 1];
        out.push(
            CheckReport::new("reduced-word count", params.clone(), g.vertices().len() == expected)
                .with_witness(json!({ "count": g.vertices().len(), "expected": expected })),
        );
        let unique = ParabolicGraph::build(&j).is_ok();
        out.push(CheckReport::new("unique source and sink", params, unique));
    }
    let i5 = Parabolic::interval(1, 5);
    let named = [
        (Canonical::SourceRight, None, "121321432154321"),
        (Canonical::SinkRight, None, "545345234512345"),
        (Canonical::SourceRight, Some(3), "123451234121321"),
        (Canonical::SourceLeft, None, "123451234123121"),
    ];
    for (which, i, word) in named {
        let got = canonical_vertex(&i5, which, i)?;
        out.push(
            CheckReport::new("canonical vertex", json!({ "J": i5.indices(), "which": format!("{which:?}"), "i": i }), got.to_string() == word)
                .with_witness(json!({ "got": got.to_string(), "expected": word })),
        );
    }
    let census = |s: &str| -> Result<_, SuiteError> { Ok(classify_cycles(&build_expanded_from_word(&s.parse()?)?)) };
    out.push(CheckReport::new("distant hexagon", json!({ "word": "135" }), census("135")?.distant_hexagons == 1));
    out.push(CheckReport::new("distant octagon", json!({ "word": "1214" }), census("1214")?.distant_octagons == 1));
    out.push(CheckReport::new("Zamolodchikov cycle", json!({ "word": "121321" }), census("121321")?.zamolodchikov == 1));
    Ok(out)
}

/// Every relation with colours in `1..=n`, plus the three-colour distant sliding relation,
/// which first has room at `n = 5`.
pub fn relations_suite(n: u8) -> SuiteResult {
    let mut out = Vec::new();
    let mut rels = relation_suite(n)?;
    if n < 5 {
        rels.extend(relation_suite(5)?.into_iter().filter(|r| r.name == "distslide4").take(1));
    }
    for r in rels {
        let nvars = r.colours.iter().copied().max().unwrap_or(1).max(n) as usize;
        let c = r.check(nvars)?;
        out.push(CheckReport::new(c.name, json!({ "colours": c.colours }), c.holds && c.bimodule).with_witness(
            json!({ "holds": c.holds, "bimodule_maps": c.bimodule }),
        ));
    }
    Ok(out)
}

/// The two unoriented paths `212321 → 321232` give different morphisms.
pub fn orientation_suite() -> SuiteResult {
    let wit = orientation_witness(&"212321".parse()?, &"321232".parse()?)?;
    Ok(vec![CheckReport::new(
        "orientation matters",
        json!({ "from": "212321", "to": "321232" }),
        wit.morphisms_differ(),
    )
    .with_witness(json!({ "paths": [wit.paths.0.moves().len(), wit.paths.1.moves().len()] }))])
}

/// `z z̄ z = z`, the projector family, its rank, and the up-down corollaries.
pub fn zidem_suite(parabolic: &Parabolic, samples: usize, seed: u64) -> SuiteResult {
    let family = ProjectorFamily::new(parabolic)?;
    let mut out = family.check_idempotent()?;
    out.extend(family.check_consistency(samples, seed)?);
    let order = family.group_order();
    let est = summand_rank(&family, family.source(), 3, seed)?;
    out.push(
        CheckReport::new("rank of phi_ss is |W_J|", json!({ "J": parabolic.indices(), "seed": seed }), est.rank == order && est.agreeing >= 3)
            .with_witness(json!({ "trials": est.trials, "expected": order })),
    );
    out.extend(family.check_up_down()?);
    Ok(out)
}

pub fn aborts_suite(parabolic: &Parabolic) -> SuiteResult {
    let mut out = verify_aborted_v(parabolic)?;
    out.extend(verify_aborted_trivalents(parabolic)?);
    Ok(out)
}

fn all_words(alphabet: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in 1..=alphabet as u8 {
                let mut x = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Hom dimensions between Bott-Samelson bimodules against the Hecke prediction, for all word
/// pairs over `1..=n` of total length at most `max_total` and `|m| <= max_total`, and the
/// `HOM(C, R)` certificate for `J`.
pub fn ranks_suite(n: usize, max_total: usize, parabolic: &Parabolic, window: Option<(i32, i32)>) -> SuiteResult {
    let words = all_words(n, max_total);
    let mut bad = Vec::new();
    let mut pairs = 0;
    for x in &words {
        for y in words.iter().filter(|y| x.len() + y.len() <= max_total) {
            pairs += 1;
            let total = (x.len() + y.len()) as i32;
            for m in -(max_total as i32)..=max_total as i32 {
                // Below -total both sides vanish, and odd parity mismatches vanish too.
                if m < -total || (m - total) % 2 != 0 {
                    continue;
                }
                let got = hom_dim_at_degree(x, y, m, n)? as i64;
                let want = predicted_hom_dim(x, y, m, n)?;
                if got != want {
                    bad.push(json!({ "x": x.to_string(), "y": y.to_string(), "m": m, "got": got, "want": want }));
                }
            }
        }
    }
    let mut out = vec![tally("Hom dimensions match the Hecke pairing", json!({ "n": n, "max_total": max_total, "pairs": pairs }), bad)];
    if !parabolic.is_empty() && parabolic.is_connected() {
        let family = ProjectorFamily::new(parabolic)?;
        let d = longest_length(parabolic) as i32;
        let (lo, hi) = window.unwrap_or((-d, d + 4));
        out.extend(hom_to_r_certificate(&family, lo, hi)?);
    }
    Ok(out)
}

/// `C ⊗ B_i ≅ C{1} ⊕ C{-1}` for every `i ∈ J`.
pub fn split_suite(parabolic: &Parabolic, seed: u64) -> SuiteResult {
    let family = ProjectorFamily::new(parabolic)?;
    let mut out = Vec::new();
    for &i in parabolic.indices() {
        out.extend(verify_split(&family, i, seed)?);
    }
    Ok(out)
}

/// Dual bases, the thick dot, and the very thick merge.
pub fn frobenius_suite(parabolic: &Parabolic) -> SuiteResult {
    let bases = dual_bases(parabolic)?;
    let mut bad = Vec::new();
    for (r, g) in bases.basis.iter().enumerate() {
        for (q, h) in bases.dual.iter().enumerate() {
            let c = partial_parabolic(parabolic, &(g * h))?;
            let want = if r == q { MultiPoly::one() } else { MultiPoly::zero() };
            if c != want {
                bad.push(json!({ "r": r, "q": q, "value": c.to_string() }));
            }
        }
    }
    let mut out = vec![tally("dual bases are dual", json!({ "J": parabolic.indices(), "size": bases.len() }), bad)];
    let family = ProjectorFamily::new(parabolic)?;
    out.extend(verify_xi(&family)?);
    out.extend(very_thick_action_check(&family)?);
    Ok(out)
}

/// Hecke-side agreement for all word pairs of length at most `max_len` over `1..=max(J)+1`,
/// the membrane checks, and the bimodule cross-check where `d(i) + d(j) + d_J <= 5`.
pub fn tj_suite(parabolic: &Parabolic, max_len: usize) -> SuiteResult {
    let alphabet = parabolic.max_index() + 1;
    let words = all_words(alphabet, max_len);
    let d = longest_length(parabolic);
    let mut out = Vec::new();
    let (mut bad, mut bad_sym) = (Vec::new(), Vec::new());
    for i in &words {
        for j in &words {
            for r in verify_homs_in_tj(parabolic, i, j, None)? {
                if !r.passed() {
                    bad.push(json!({ "i": i.to_string(), "j": j.to_string() }));
                }
            }
            if !epsilon_symmetry(parabolic, i, j)? {
                bad_sym.push(json!({ "i": i.to_string(), "j": j.to_string() }));
            }
        }
    }
    let params = json!({ "J": parabolic.indices(), "max_len": max_len, "alphabet": alphabet });
    out.push(tally("T_J rank agrees with the Hecke side", params.clone(), bad));
    out.push(tally("trace symmetry behind the T_J rank", params, bad_sym));

    if !parabolic.is_empty() && parabolic.is_connected() {
        let membrane = Membrane::new(parabolic)?;
        for &i in parabolic.indices() {
            out.push(membrane.check_absorb_action(i)?);
        }
        out.push(membrane.check_invariant_slide()?);
        if d <= 5 {
            let small = all_words(alphabet, 5 - d);
            let mut bad = Vec::new();
            let mut pairs = 0;
            for i in &small {
                for j in small.iter().filter(|j| i.len() + j.len() + d <= 5) {
                    pairs += 1;
                    // The lowest nonzero degree and the four above it with the right parity.
                    let lo = hecke_side_rank(parabolic, i, j)?.min_exp().unwrap_or(0);
                    for r in verify_homs_in_tj(parabolic, i, j, Some((lo, lo + 4)))? {
                        if !r.passed() {
                            bad.push(r.to_json());
                        }
                    }
                }
            }
            out.push(tally(
                "T_J rank agrees with the bimodule side",
                json!({ "J": parabolic.indices(), "pairs": pairs }),
                bad,
            ));
        }
    }
    Ok(out)
}
