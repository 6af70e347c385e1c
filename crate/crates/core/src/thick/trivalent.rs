//! Thick trivalent vertices `a_i`: the degree `-1` maps `B_x B_i → B_x` (or `B_i B_x → B_x`)
//! for `x` a canonical word of `w_J` and `i ∈ J`.

use std::sync::Arc;

use serde_json::json;

use super::projector::{path_morphism, ProjectorFamily};
use super::ThickError;
use crate::bsmod::{normal_form, path_diagram, six_side_maps, BSElement, BSMorphism, Diagram, Gen};
use crate::coxeter::{Parabolic, Word};
use crate::exprgraph::{canonical_vertex, commutation_path, flip_letter, Canonical};
use crate::poly_core::{demazure, MultiPoly};
use crate::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// The extra strand enters on the right.
    Right,
    /// The extra strand enters on the left.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Anchor {
    Source,
    Sink,
}

/// One generator placed between identity strands.
#[derive(Debug, Clone)]
struct Step {
    prefix: Word,
    gen: Gen,
    suffix: Word,
}

impl Step {
    fn diagram(&self) -> Diagram {
        Diagram::layer(&self.prefix, self.gen.clone(), &self.suffix)
    }

    fn embed(&self, prefix: &Word, suffix: &Word) -> Step {
        Step { prefix: prefix.concat(&self.prefix), gen: self.gen.clone(), suffix: self.suffix.concat(suffix) }
    }

    fn relabel(&self, f: &impl Fn(u8) -> u8) -> Step {
        Step { prefix: self.prefix.relabel(f), gen: self.gen.relabel(f), suffix: self.suffix.relabel(f) }
    }

    fn hflip(&self) -> Step {
        Step { prefix: self.suffix.omega(), gen: self.gen.hflip(), suffix: self.prefix.omega() }
    }
}

/// Tracks the current word while generators are stacked.
struct Builder {
    word: Vec<u8>,
    steps: Vec<Step>,
}

impl Builder {
    fn new(word: &Word) -> Self {
        Builder { word: word.letters().to_vec(), steps: Vec::new() }
    }

    fn push(&mut self, pos: usize, gen: Gen) {
        let src = gen.source();
        let end = pos + src.len();
        debug_assert_eq!(&self.word[pos..end], src.letters());
        let step = Step {
            prefix: Word::new(self.word[..pos].to_vec()),
            gen: gen.clone(),
            suffix: Word::new(self.word[end..].to_vec()),
        };
        let mut next = self.word[..pos].to_vec();
        next.extend_from_slice(gen.target().letters());
        next.extend_from_slice(&self.word[end..]);
        self.word = next;
        self.steps.push(step);
    }

    /// Cross the letter at `pos + 1` to the left over the letter at `pos`.
    fn cross_left(&mut self, pos: usize) {
        let (a, b) = (self.word[pos], self.word[pos + 1]);
        self.push(pos, Gen::Cross(a, b));
    }
}

fn source_right_word(p: u8, q: u8) -> Word {
    canonical_vertex(&Parabolic::interval(p as usize, q as usize), Canonical::SourceRight, None)
        .expect("intervals are connected")
}

/// `a^R_{s^R_J, i}` for `J = [p..q]`: one six-valent vertex to the right of the map for the
/// interval `[p..q-1]` and index `i - 1`.
fn source_right_steps(p: u8, q: u8, i: u8) -> Vec<Step> {
    let s = source_right_word(p, q);
    let n = s.len();
    let mut b = Builder::new(&s.concat(&Word::new(vec![i])));
    if i == p {
        b.push(n - 1, Gen::Merge(p));
        return b.steps;
    }
    // The tail of s is q (q-1) ... p. Move the new i left past (i-2) ... p.
    let mut pos = n;
    for _ in 0..(i - 1 - p) {
        b.cross_left(pos - 1);
        pos -= 1;
    }
    b.push(pos - 2, Gen::Six(i, i - 1));
    let mut at = pos - 2;
    for _ in 0..(q - i) {
        b.cross_left(at - 1);
        at -= 1;
    }
    let tail = Word::new(b.word[at + 1..].to_vec());
    let inner = source_right_steps(p, q - 1, i - 1);
    b.steps.extend(inner.iter().map(|st| st.embed(&Word::empty(), &tail)));
    b.steps
}

/// A thick trivalent vertex with its construction.
#[derive(Debug, Clone)]
pub struct ThickTrivalent {
    pub parabolic: Parabolic,
    pub index: usize,
    pub side: Side,
    pub anchor: Anchor,
    /// The word `x` with boundary `x·i → x` (right) or `i·x → x` (left).
    pub anchor_word: Word,
    steps: Vec<Step>,
    morphism: Arc<BSMorphism>,
}

impl ThickTrivalent {
    pub fn morphism(&self) -> &BSMorphism {
        &self.morphism
    }

    pub fn source(&self) -> &Word {
        self.morphism.source()
    }

    /// As a diagram of generators.
    pub fn diagram(&self) -> Diagram {
        Diagram::Compose(self.steps.iter().map(Step::diagram).collect())
    }

    /// As a single precomputed block that can still be flipped upside down.
    pub fn block(&self) -> Result<Diagram, ThickError> {
        let flipped = self.diagram().vflip()?.eval()?;
        Ok(Diagram::Matrix(self.morphism.clone(), Some(Arc::new(flipped))))
    }

    /// The terms obtained by placing a dot on the incoming strand and resolving it through
    /// the six-valent vertices one at a time. Term `k` is the "aborted" version of the map in
    /// which the dot reaches the `k`-th six-valent vertex and splits off there; the dot then
    /// passes on unchanged through all earlier vertices. Only defined for right-facing maps.
    pub fn dot_resolution(&self) -> Result<Vec<Diagram>, ThickError> {
        if self.side != Side::Right {
            return Err(ThickError::Solve("dot resolution is built for right-facing vertices".into()));
        }
        let x = &self.anchor_word;
        let mut out = Vec::new();
        for (k, st) in self.steps.iter().enumerate() {
            if let Gen::Six(c, d) = st.gen {
                let pos = st.prefix.len();
                let (wc, wd) = (Word::new(vec![c]), Word::new(vec![d]));
                let split_off = Diagram::layer(&Word::empty(), Gen::Counit(c), &wd)
                    .then(Gen::Split(d))
                    .then(Diagram::layer(&wd, Gen::Unit(c), &wd));
                debug_assert_eq!(x.slice(pos, pos + 2), wc.concat(&wd));
                let mut parts = vec![Diagram::layer(&x.slice(0, pos), split_off, &x.slice(pos + 2, x.len()))];
                parts.extend(self.steps[k + 1..].iter().map(Step::diagram));
                out.push(Diagram::Compose(parts));
            }
        }
        Ok(out)
    }
}

/// Canonical word of a connected index set for the given side and anchor.
pub(crate) fn anchor_word(parabolic: &Parabolic, side: Side, anchor: Anchor) -> Result<Word, ThickError> {
    let which = match (side, anchor) {
        (Side::Right, Anchor::Source) => Canonical::SourceRight,
        (Side::Right, Anchor::Sink) => Canonical::SinkRight,
        (Side::Left, Anchor::Source) => Canonical::SourceLeft,
        (Side::Left, Anchor::Sink) => Canonical::SinkLeft,
    };
    Ok(canonical_vertex(parabolic, which, None)?)
}

/// The thick trivalent vertex `a_i` for `J`. For disconnected `J` it acts on the component
/// of `i` and by the identity on the others, which sit on the far side from `i`.
pub fn a_thick(parabolic: &Parabolic, i: usize, side: Side, anchor: Anchor) -> Result<ThickTrivalent, ThickError> {
    if !parabolic.contains(i) {
        return Err(ThickError::NotInParabolic { index: i, parabolic: parabolic.to_string() });
    }
    let components = parabolic.components();
    let own = components.iter().find(|c| c.contains(i)).expect("i lies in some component");
    let (p, q) = own.bounds()?;
    let (p, q) = (p as u8, q as u8);
    let sigma = flip_letter(p as usize, q as usize);
    let mut steps = match anchor {
        Anchor::Source => source_right_steps(p, q, i as u8),
        Anchor::Sink => source_right_steps(p, q, sigma(i as u8)).iter().map(|s| s.relabel(&sigma)).collect(),
    };
    if side == Side::Left {
        steps = steps.iter().map(Step::hflip).collect();
    }
    let mut others = Word::empty();
    for c in components.iter().filter(|c| *c != own) {
        others = others.concat(&anchor_word(c, side, anchor)?);
    }
    let own_word = anchor_word(own, side, anchor)?;
    let (anchor_word, steps) = match side {
        Side::Right => (others.concat(&own_word), steps.iter().map(|s| s.embed(&others, &Word::empty())).collect()),
        Side::Left => (own_word.concat(&others), steps.iter().map(|s| s.embed(&Word::empty(), &others)).collect()),
    };
    let steps: Vec<Step> = steps;
    let diagram = Diagram::Compose(steps.iter().map(Step::diagram).collect());
    let morphism = Arc::new(diagram.eval()?);
    Ok(ThickTrivalent { parabolic: parabolic.clone(), index: i, side, anchor, anchor_word, steps, morphism })
}

/// All aborted versions of `a_i` at the given anchor.
pub fn aborted_trivalents(parabolic: &Parabolic, i: usize, anchor: Anchor) -> Result<Vec<Diagram>, ThickError> {
    a_thick(parabolic, i, Side::Right, anchor)?.dot_resolution()
}

fn w1(i: usize) -> Word {
    Word::new(vec![i as u8])
}

/// Polynomials used to probe the realized action.
fn probe_polys(parabolic: &Parabolic, i: usize) -> Vec<MultiPoly> {
    let (p, q) = (parabolic.indices()[0], parabolic.max_index());
    let fi = MultiPoly::var(i);
    let (fp, fq) = (MultiPoly::var(p), MultiPoly::var(q));
    vec![
        MultiPoly::one(),
        fi.clone(),
        fp.clone(),
        &fi * &fq,
        &(&fi * &fi) + &(&fp * &fq),
        &(&fp * &fq) * &fi,
    ]
}

struct Kit {
    j: Vec<usize>,
    anchor: Anchor,
    word: Word,
}

impl Kit {
    fn params(&self, extra: serde_json::Value) -> serde_json::Value {
        let mut v = json!({ "J": self.j, "anchor": format!("{:?}", self.anchor).to_lowercase() });
        if let (Some(obj), Some(more)) = (v.as_object_mut(), extra.as_object()) {
            for (k, x) in more {
                obj.insert(k.clone(), x.clone());
            }
        }
        v
    }
}

/// The identities satisfied by the thick trivalent vertices, at both anchors, for all
/// `i, j ∈ J`, plus the realized action `f ⊗ g ⊗ h ↦ f ⊗ ∂_i(g) h`.
pub fn verify_a_properties(parabolic: &Parabolic) -> Result<Vec<CheckReport>, ThickError> {
    let family = ProjectorFamily::new(parabolic)?;
    let idx = parabolic.indices().to_vec();
    let mut out = Vec::new();
    for anchor in [Anchor::Source, Anchor::Sink] {
        let word = anchor_word(parabolic, Side::Right, anchor)?;
        let kit = Kit { j: idx.clone(), anchor, word: word.clone() };
        let mut right = std::collections::HashMap::new();
        for &i in &idx {
            right.insert(i, a_thick(parabolic, i, Side::Right, anchor)?.block()?);
        }
        let a = |i: usize| right[&i].clone();
        let x = &kit.word;

        for &i in &idx {
            let lhs = Diagram::layer(&Word::empty(), a(i), &w1(i)).then(a(i));
            let rhs = Diagram::layer(x, Gen::Merge(i as u8), &Word::empty()).then(a(i));
            out.push(CheckReport::new("a_i squared", kit.params(json!({ "i": i })), lhs.eval()? == rhs.eval()?));
        }
        for &i in &idx {
            for &j in &idx {
                let (wi, wj) = (w1(i), w1(j));
                if i.abs_diff(j) == 1 {
                    let lhs = Diagram::layer(&Word::empty(), a(i), &wj.concat(&wi))
                        .then(Diagram::layer(&Word::empty(), a(j), &wi))
                        .then(a(i));
                    let rhs = Diagram::layer(x, Gen::Six(i as u8, j as u8), &Word::empty())
                        .then(Diagram::layer(&Word::empty(), a(j), &wi.concat(&wj)))
                        .then(Diagram::layer(&Word::empty(), a(i), &wj))
                        .then(a(j));
                    let (l, r) = (lhs.eval()?, rhs.eval()?);
                    out.push(CheckReport::new("a6", kit.params(json!({ "i": i, "j": j })), l == r));
                    let below = family.transition(x, x)?.tensor(&BSMorphism::identity(wi.concat(&wj).concat(&wi)))?;
                    out.push(CheckReport::new(
                        "a6 on the summand",
                        kit.params(json!({ "i": i, "j": j })),
                        l.after(&below)? == r.after(&below)?,
                    ));
                } else if i.abs_diff(j) > 1 {
                    let lhs = Diagram::layer(&Word::empty(), a(i), &wj).then(a(j));
                    let rhs = Diagram::layer(x, Gen::Cross(i as u8, j as u8), &Word::empty())
                        .then(Diagram::layer(&Word::empty(), a(j), &wi))
                        .then(a(i));
                    out.push(CheckReport::new("a4", kit.params(json!({ "i": i, "j": j })), lhs.eval()? == rhs.eval()?));
                }
            }
        }

        // Left-facing vertices live on the mirrored word; conjugate them by crossings.
        let mirrored = anchor_word(parabolic, Side::Left, anchor)?;
        let to_left = path_diagram(&commutation_path(x, &mirrored)?);
        let to_right = path_diagram(&commutation_path(&mirrored, x)?);
        for &j in &idx {
            let left = a_thick(parabolic, j, Side::Left, anchor)?;
            let lj = Diagram::layer(&w1(j), to_left.clone(), &Word::empty()).then(left.diagram()).then(to_right.clone());
            let lj = Diagram::matrix(lj.eval()?);
            for &i in &idx {
                let lhs = Diagram::layer(&Word::empty(), lj.clone(), &w1(i)).then(a(i));
                let rhs = Diagram::layer(&w1(j), a(i), &Word::empty()).then(lj.clone());
                out.push(CheckReport::new("aopp", kit.params(json!({ "i": i, "j": j })), lhs.eval()? == rhs.eval()?));
            }
        }

        let (below, name) = match anchor {
            Anchor::Sink => (family.z(), "a_i with a dot after z"),
            Anchor::Source => (family.zbar(), "a_i with a dot after zbar"),
        };
        for &i in &idx {
            let dotted = Diagram::layer(x, Gen::Unit(i as u8), &Word::empty()).then(a(i));
            out.push(CheckReport::new(name, kit.params(json!({ "i": i })), dotted.eval_after(below)? == *below));
        }

        let proj = family.transition(x, x)?;
        for &i in &idx {
            let ai = a(i).eval()?;
            let mut ok = true;
            let mut witness = None;
            let d = x.len();
            for g in probe_polys(parabolic, i) {
                for h in [MultiPoly::one(), MultiPoly::var(*idx.last().unwrap())] {
                    let mut slots = vec![MultiPoly::one(); d + 2];
                    slots[d] = g.clone();
                    slots[d + 1] = h.clone();
                    let input = normal_form(&x.concat(&w1(i)), &slots);
                    let got = proj.apply(&ai.apply(&input));
                    let want = BSElement::one_tensor(x.clone()).right_mul(&(&demazure(i, &g)? * &h));
                    if got != want && ok {
                        ok = false;
                        witness = Some(json!({ "g": g.to_string(), "h": h.to_string() }));
                    }
                }
            }
            let mut r = CheckReport::new("a_i acts by the Demazure operator", kit.params(json!({ "i": i })), ok);
            if let Some(wv) = witness {
                r = r.with_witness(wv);
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// A dotted `a_i` is the identity plus its aborted versions, and every aborted version dies
/// against `z` (sink anchor) or `z̄` (source anchor).
pub fn verify_aborted_trivalents(parabolic: &Parabolic) -> Result<Vec<CheckReport>, ThickError> {
    let family = ProjectorFamily::new(parabolic)?;
    let mut out = Vec::new();
    for anchor in [Anchor::Sink, Anchor::Source] {
        let below = match anchor {
            Anchor::Sink => family.z(),
            Anchor::Source => family.zbar(),
        };
        for &i in parabolic.indices() {
            let a = a_thick(parabolic, i, Side::Right, anchor)?;
            let x = a.anchor_word.clone();
            let terms = a.dot_resolution()?;
            let params = |k: Option<usize>| {
                let mut v = json!({ "J": parabolic.indices(), "i": i, "anchor": format!("{anchor:?}").to_lowercase() });
                if let Some(k) = k {
                    v["abort"] = json!(k);
                }
                v
            };
            let dotted = Diagram::layer(&x, Gen::Unit(i as u8), &Word::empty()).then(a.diagram()).eval()?;
            let mut sum = BSMorphism::identity(x.clone());
            for t in &terms {
                sum = sum.add(&t.eval()?)?;
            }
            out.push(CheckReport::new("dotted a_i resolves into aborted terms", params(None), dotted == sum));
            for (k, t) in terms.iter().enumerate() {
                out.push(CheckReport::new("aborted a_i vanishes", params(Some(k)), t.eval_after(below)?.is_zero()));
            }
        }
    }
    Ok(out)
}

/// `Q_x`: follow `V_J` from `s^R_J` up to its `k`-th braid move and replace that move by the
/// projection onto the single strand.
pub fn abort_morphism(parabolic: &Parabolic, k: usize) -> Result<Diagram, ThickError> {
    let family = ProjectorFamily::new(parabolic)?;
    abort_in(&family, k)
}

fn abort_in(family: &ProjectorFamily, k: usize) -> Result<Diagram, ThickError> {
    let steps = family.v_steps();
    let step = steps
        .get(k)
        .ok_or_else(|| ThickError::ResourceBound(format!("abort point {k} of {} on V_J", steps.len())))?;
    let prefix = super::projector::sub_path(family.v_path(), 0, step.index);
    let pos = family.v_path().moves()[step.index].pos;
    let l = step.before.letters();
    let (a, b) = (l[pos], l[pos + 1]);
    let w = &step.before;
    Ok(path_diagram(&prefix).then(Diagram::layer(&w.slice(0, pos), six_side_maps(a, b).0, &w.slice(pos + 3, w.len()))))
}

/// `Q_x ∘ z̄ = 0` at every abort point of `V_J`.
pub fn verify_aborted_v(parabolic: &Parabolic) -> Result<Vec<CheckReport>, ThickError> {
    let family = ProjectorFamily::new(parabolic)?;
    let mut out = Vec::new();
    for k in 0..family.v_steps().len() {
        let q = abort_in(&family, k)?;
        out.push(CheckReport::new(
            "aborted V_J vanishes against zbar",
            json!({ "J": parabolic.indices(), "abort": k }),
            q.eval_after(family.zbar())?.is_zero(),
        ));
    }
    Ok(out)
}

/// The path morphism of an arbitrary oriented path `s^R_J ⇓ t^R_J` other than `V_J`.
pub fn z_along(parabolic: &Parabolic, via: &Word) -> Result<BSMorphism, ThickError> {
    let family = ProjectorFamily::new(parabolic)?;
    let g = family.graph();
    let first = g
        .oriented_path(family.source(), via)
        .ok_or_else(|| ThickError::Solve(format!("no oriented path to {via}")))?;
    let second = g
        .oriented_path(via, family.sink())
        .ok_or_else(|| ThickError::Solve(format!("no oriented path from {via}")))?;
    path_morphism(&first.then(&second)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn base_cases() {
        let a = a_thick(&Parabolic::new([1]), 1, Side::Right, Anchor::Source).unwrap();
        assert_eq!(*a.morphism(), Gen::Merge(1).morphism().unwrap());
        let a = a_thick(&Parabolic::interval(1, 2), 2, Side::Right, Anchor::Source).unwrap();
        assert_eq!(a.source(), &w("1212"));
        assert_eq!(a.morphism().degree(), -1);
        assert!(a_thick(&Parabolic::interval(1, 2), 3, Side::Right, Anchor::Source).is_err());
    }

    #[test]
    fn left_vertex_is_mirror() {
        let a = a_thick(&Parabolic::interval(1, 2), 1, Side::Left, Anchor::Sink).unwrap();
        assert_eq!(a.source(), &w("1212"));
        assert_eq!(a.anchor_word, w("212"));
    }

    #[test]
    fn two_colour_properties() {
        let j = Parabolic::interval(1, 2);
        let reports = verify_a_properties(&j).unwrap();
        for r in &reports {
            assert!(r.passed(), "{:?}", r.to_json());
        }
        assert!(all_passed(&verify_aborted_v(&j).unwrap()));
    }

    #[test]
    fn disconnected_acts_on_one_component() {
        let j = Parabolic::new([1, 3]);
        let a = a_thick(&j, 1, Side::Right, Anchor::Source).unwrap();
        assert_eq!(a.source(), &w("311"));
        assert_eq!(*a.morphism(), BSMorphism::identity(w("3")).tensor(&Gen::Merge(1).morphism().unwrap()).unwrap());
    }
}
