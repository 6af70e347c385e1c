//! The summand `C` picked out by the projectors: its thick dot, its rank, its Hom spaces to
//! `R`, and the splitting of `C ⊗ B_i`.

use std::collections::HashMap;

use serde_json::json;

use super::projector::{random_rank, ProjectorFamily, RankEstimate};
use super::trivalent::{a_thick, Anchor, Side};
use super::ThickError;
use crate::bsmod::{graded_dim, hom_space, label_degree, right_mul_label, BSMorphism, Coords, Diagram, Gen};
use crate::coxeter::Word;
use crate::hecke::LaurentPoly;
use crate::linalg::{rank, rank_mod_p, solve, sparse_from, SparseRow};
use crate::poly_core::{coeff, Coeff, Monomial, MultiPoly};
use crate::report::CheckReport;

/// Dots on every strand: `B_word → R`.
pub fn all_dots(word: &Word) -> Diagram {
    if word.is_empty() {
        return Diagram::id(word);
    }
    Diagram::Tensor(word.letters().iter().map(|&c| Diagram::Gen(Gen::Counit(c))).collect())
}

/// `ξ_J` realized on `B_{s^R_J}`: project to `B_via`, then put a dot on every strand.
pub fn xi(family: &ProjectorFamily, via: &Word) -> Result<BSMorphism, ThickError> {
    let phi = family.transition(family.source(), via)?;
    Ok(all_dots(via).eval_after(&phi)?)
}

/// The upside-down thick dot `R → B_{s^R_J}`.
pub fn xi_bar(family: &ProjectorFamily) -> Result<BSMorphism, ThickError> {
    let s = family.source();
    let units = all_dots(s).vflip()?.eval()?;
    Ok(family.transition(s, s)?.after(&units)?)
}

/// Numeric rank of `φ_{x,x}` over the fraction field.
pub fn summand_rank(family: &ProjectorFamily, x: &Word, trials: usize, seed: u64) -> Result<RankEstimate, ThickError> {
    Ok(random_rank(&*family.transition(x, x)?, family.nvars(), trials, seed))
}

/// Flatten a morphism into one sparse row, indexing (column, row, monomial) on the fly.
fn flatten(m: &BSMorphism, index: &mut HashMap<(u32, u32, Monomial), usize>) -> SparseRow {
    let mut entries = Vec::new();
    for (e, col) in m.columns().iter().enumerate() {
        for (f, p) in col {
            for (mono, c) in p.terms() {
                let next = index.len();
                let k = *index.entry((e as u32, *f, *mono)).or_insert(next);
                entries.push((k, c.clone()));
            }
        }
    }
    sparse_from(entries)
}

/// `dim HOM(C, R)` in degree `m`: the span of `ψ ∘ φ_{s,s}` over a basis of
/// `Hom^m(B_s, R)`.
pub fn hom_to_r_dim(family: &ProjectorFamily, m: i32) -> Result<usize, ThickError> {
    let s = family.source();
    let space = hom_space(s, &Word::empty(), m, family.nvars())?;
    let phi = family.transition(s, s)?;
    let mut index = HashMap::new();
    let rows: Vec<SparseRow> = space
        .basis
        .iter()
        .map(|psi| psi.after(&phi).map(|c| flatten(&c, &mut index)))
        .collect::<Result<_, _>>()?;
    Ok(rank(rows))
}

/// Upper bound for `dim HOM(C, R)` in degree `m`: the solutions of "right-linear and fixed
/// by `φ_{s,s}`" have dimension `unknowns - rank_Q`, and `rank_p <= rank_Q`.
pub fn hom_to_r_upper_bound(family: &ProjectorFamily, m: i32) -> Result<usize, ThickError> {
    let s = family.source();
    let d = s.len();
    let vars: Vec<usize> = (1..=family.nvars()).collect();
    let mut unknowns: HashMap<(u32, Monomial), usize> = HashMap::new();
    let mut by_label: Vec<Vec<(Monomial, usize)>> = vec![Vec::new(); 1 << d];
    for e in 0..1u32 << d {
        let twice = m + label_degree(e, d);
        if twice < 0 || twice % 2 != 0 {
            continue;
        }
        for mono in Monomial::all_of_degree(&vars, (twice / 2) as u32) {
            let k = unknowns.len();
            unknowns.insert((e, mono), k);
            by_label[e as usize].push((mono, k));
        }
    }
    type Key = (usize, u32, Monomial);
    let mut rows: HashMap<Key, Vec<(usize, Coeff)>> = HashMap::new();
    // ψ(e_E · f_v) = ψ(e_E) f_v
    for &v in &vars {
        let fv = Monomial::var(v);
        for e in 0..1u32 << d {
            for (e2, c) in right_mul_label(s, e, &MultiPoly::var(v)) {
                for (mono, k) in &by_label[e2 as usize] {
                    for (cm, cc) in c.terms() {
                        rows.entry((v, e, mono.mul(cm))).or_default().push((*k, cc.clone()));
                    }
                }
            }
            for (mono, k) in &by_label[e as usize] {
                rows.entry((v, e, mono.mul(&fv))).or_default().push((*k, -coeff(1)));
            }
        }
    }
    // ψ = ψ ∘ φ
    let phi = family.transition(s, s)?;
    for (e_out, col) in phi.columns().iter().enumerate() {
        let e_out = e_out as u32;
        for (mono, k) in &by_label[e_out as usize] {
            rows.entry((0, e_out, *mono)).or_default().push((*k, coeff(1)));
        }
        for (e_in, poly) in col {
            for (mono, k) in &by_label[*e_in as usize] {
                for (pm, pc) in poly.terms() {
                    rows.entry((0, e_out, mono.mul(pm))).or_default().push((*k, -pc.clone()));
                }
            }
        }
    }
    let mut keys: Vec<Key> = rows.keys().cloned().collect();
    keys.sort();
    let sparse = keys.into_iter().map(|k| sparse_from(rows.remove(&k).unwrap()));
    let r = rank_mod_p(sparse).ok_or_else(|| ThickError::Solve("denominator vanishes modulo the prime".into()))?;
    Ok(unknowns.len() - r)
}

/// Number of monomials of polynomial degree `k` in `n` variables.
fn monomial_count(n: usize, k: i32) -> usize {
    if k < 0 {
        return 0;
    }
    Monomial::all_of_degree(&(1..=n).collect::<Vec<_>>(), k as u32).len()
}

/// Degree-wise dimensions of `HOM(C, R)` against `v^{d_J}` times the Hilbert series of `R`.
///
/// The maps `g·ξ_J` give the lower bound: `ξ_J` sends the 1-tensor to 1, so they are
/// independent for independent `g`. [`hom_to_r_upper_bound`] gives the upper bound.
pub fn hom_to_r_certificate(family: &ProjectorFamily, lo: i32, hi: i32) -> Result<Vec<CheckReport>, ThickError> {
    let d = family.source().len() as i32;
    let expected = LaurentPoly::monomial(d, 1);
    let s = family.source();
    let mut one = Coords::new();
    one.insert(0, MultiPoly::one());
    let xi_normalized = *xi(family, s)?.column(0) == one;
    let mut out = Vec::new();
    for m in lo..=hi {
        let lower = if (m - d) % 2 == 0 && xi_normalized { monomial_count(family.nvars(), (m - d) / 2) } else { 0 };
        let upper = hom_to_r_upper_bound(family, m)?;
        let want = graded_dim(&expected, m, family.nvars());
        out.push(
            CheckReport::new(
                "HOM(C,R) dimension",
                json!({ "J": family.parabolic().indices(), "degree": m }),
                lower as i64 == want && upper as i64 == want,
            )
            .with_witness(json!({ "lower": lower, "upper": upper, "predicted": want })),
        );
    }
    Ok(out)
}

/// The graded rank of `HOM(C, R)` as a free module, recovered from the degree-wise
/// dimensions in `[lo, hi]` by multiplying with `(1 - v^2)^n`. The dimensions are the
/// modular upper bounds, which [`hom_to_r_certificate`] shows to be exact.
pub fn graded_class(family: &ProjectorFamily, lo: i32, hi: i32) -> Result<LaurentPoly, ThickError> {
    let n = family.nvars() as i64;
    let dims: Vec<i64> = (lo..=hi).map(|m| hom_to_r_upper_bound(family, m).map(|x| x as i64)).collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    for (idx, m) in (lo..=hi).enumerate() {
        let mut acc = 0i64;
        let mut binom = 1i64;
        for k in 0..=n {
            let back = idx as i64 - 2 * k;
            if back < 0 {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            acc += sign * binom * dims[back as usize];
            binom = binom * (n - k) / (k + 1);
        }
        pairs.push((m, acc));
    }
    Ok(LaurentPoly::from_pairs(pairs))
}

/// The two orthogonal idempotents splitting the realized `C ⊗ B_i`.
#[derive(Debug, Clone)]
pub struct SplitCBi {
    pub index: usize,
    /// Factors through `C{-1}`: projection `a_i` of degree `-1`.
    pub e_plus: BSMorphism,
    /// Factors through `C{+1}`: projection `a_i ∘ f_i` of degree `+1`.
    pub e_minus: BSMorphism,
    pub coefficients: (Coeff, Coeff),
    /// Degrees of the projections onto the two copies of `C`.
    pub projection_degrees: (i32, i32),
}

/// Split `C ⊗ B_i` on `B_{s^R_J i}` using `a_i`, its flip and `f_i` in the region between.
pub fn split_cbi(family: &ProjectorFamily, i: usize) -> Result<SplitCBi, ThickError> {
    let s = family.source().clone();
    let wi = Word::new(vec![i as u8]);
    let a = a_thick(family.parabolic(), i, Side::Right, Anchor::Source)?;
    let a_up = a.diagram().vflip()?;
    let p = family.transition(&s, &s)?.tensor(&BSMorphism::identity(wi.clone()))?;
    let mid = Diagram::layer(&s, Gen::Poly(MultiPoly::var(i)), &wi);
    let through = a.block()?.then(a_up);
    let x = p.after(&through.clone().then(mid.clone()).eval_after(&p)?)?;
    let y = p.after(&mid.then(through).eval_after(&p)?)?;
    let mut eqs = Vec::new();
    for (e, col) in p.columns().iter().enumerate() {
        let label = e as u32;
        let mut keys: Vec<(u32, Monomial)> = Vec::new();
        for m in [&p, &x, &y] {
            for (f, poly) in m.column(label) {
                keys.extend(poly.terms().iter().map(|(mono, _)| (*f, *mono)));
            }
        }
        keys.sort();
        keys.dedup();
        for (f, mono) in keys {
            let at = |m: &BSMorphism| m.column(label).get(&f).map(|q| q.coefficient(&mono)).unwrap_or_else(|| coeff(0));
            let rhs = col.get(&f).map(|q| q.coefficient(&mono)).unwrap_or_else(|| coeff(0));
            eqs.push((sparse_from([(0, at(&x)), (1, at(&y))]), rhs));
        }
    }
    let c = solve(2, eqs).ok_or_else(|| ThickError::Solve(format!("splitting C⊗B_{i}")))?;
    Ok(SplitCBi {
        index: i,
        e_plus: x.scale(&c[0]),
        e_minus: y.scale(&c[1]),
        coefficients: (c[0].clone(), c[1].clone()),
        projection_degrees: (a.morphism().degree(), a.morphism().degree() + 2),
    })
}

/// Idempotency, orthogonality, completeness and ranks of [`split_cbi`].
pub fn verify_split(family: &ProjectorFamily, i: usize, seed: u64) -> Result<Vec<CheckReport>, ThickError> {
    let sp = split_cbi(family, i)?;
    let s = family.source();
    let p = family.transition(s, s)?.tensor(&BSMorphism::identity(Word::new(vec![i as u8])))?;
    let (ep, em) = (&sp.e_plus, &sp.e_minus);
    let params = json!({ "J": family.parabolic().indices(), "i": i });
    let order = family.group_order();
    let rp = random_rank(ep, family.nvars(), 3, seed);
    let rm = random_rank(em, family.nvars(), 3, seed + 1);
    Ok(vec![
        CheckReport::new("e+ + e- = id on C⊗B_i", params.clone(), ep.add(em)? == p),
        CheckReport::new("e+ idempotent", params.clone(), ep.after(ep)? == *ep),
        CheckReport::new("e- idempotent", params.clone(), em.after(em)? == *em),
        CheckReport::new("e+ e- = 0", params.clone(), ep.after(em)?.is_zero()),
        CheckReport::new("e- e+ = 0", params.clone(), em.after(ep)?.is_zero()),
        CheckReport::new("rank e+ = |W_J|", params.clone(), rp.rank == order && rp.agreeing >= 3)
            .with_witness(json!({ "ranks": rp.trials })),
        CheckReport::new("rank e- = |W_J|", params.clone(), rm.rank == order && rm.agreeing >= 3)
            .with_witness(json!({ "ranks": rm.trials })),
        CheckReport::new("projection degrees are -1 and +1", params, sp.projection_degrees == (-1, 1)),
    ])
}

/// `ξ_J` is nonzero, sends the 1-tensor to 1, and does not depend on the word used.
pub fn verify_xi(family: &ProjectorFamily) -> Result<Vec<CheckReport>, ThickError> {
    let s = family.source().clone();
    let base = xi(family, &s)?;
    let mut one = Coords::new();
    one.insert(0, MultiPoly::one());
    let params = json!({ "J": family.parabolic().indices() });
    let mut out = vec![
        CheckReport::new("xi nonzero", params.clone(), !base.is_zero()),
        CheckReport::new("xi sends the 1-tensor to 1", params.clone(), *base.column(0) == one),
    ];
    let mut same = true;
    for x in family.classes() {
        same &= xi(family, &x)? == base;
    }
    out.push(CheckReport::new("xi independent of the word", params, same));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Parabolic;
    use crate::report::all_passed;

    #[test]
    fn one_colour_summand_is_everything() {
        let fam = ProjectorFamily::new(&Parabolic::new([1])).unwrap();
        let x: Word = "1".parse().unwrap();
        assert_eq!(summand_rank(&fam, &x, 3, 0).unwrap().rank, 2);
        assert_eq!(xi(&fam, &x).unwrap(), Gen::Counit(1).morphism().unwrap());
        assert!(all_passed(&verify_split(&fam, 1, 0).unwrap()));
    }

    #[test]
    fn two_colour_summand() {
        let fam = ProjectorFamily::new(&Parabolic::interval(1, 2)).unwrap();
        assert!(all_passed(&verify_xi(&fam).unwrap()));
        assert!(all_passed(&hom_to_r_certificate(&fam, -3, 7).unwrap()));
        assert_eq!(graded_class(&fam, -3, 7).unwrap(), LaurentPoly::monomial(3, 1));
        for m in [3, 5, 6] {
            assert_eq!(hom_to_r_upper_bound(&fam, m).unwrap(), hom_to_r_dim(&fam, m).unwrap());
        }
        for i in [1, 2] {
            let r = verify_split(&fam, i, 5).unwrap();
            assert!(all_passed(&r), "{:?}", r.iter().map(|x| x.to_json()).collect::<Vec<_>>());
        }
    }
}
