//! The very thick merge `C ⊗ C → C`, built from a chain of thick trivalent vertices, and the
//! relations it satisfies against the thick dot and the Frobenius structure of `R^J ⊂ R`.
//!
//! Everything here is checked on elements. The realized maps are bimodule maps, and
//! `C ⊗ C` is generated as a right module by the `1_s g_r ⊗ 1_s`, so the resolution of the
//! identity is checked on exactly those generators.

use std::collections::HashMap;

use serde_json::json;

use super::projector::ProjectorFamily;
use super::summand::{xi, xi_bar};
use super::trivalent::{a_thick, Anchor, Side};
use super::ThickError;
use crate::bsmod::{label_degree, normal_form, BSElement, BSMorphism, Diagram, Gen, MAX_WORD_LEN};
use crate::coxeter::Word;
use crate::poly_core::{dual_bases, partial_parabolic, DualBasisPair, MultiPoly};
use crate::report::CheckReport;

/// A single element of `B_word` as a morphism out of `R`.
fn element_morphism(x: &BSElement) -> BSMorphism {
    let len = x.word().len();
    let degree = x
        .coords()
        .iter()
        .find_map(|(l, p)| p.homogeneous_degree().map(|d| label_degree(*l, len) + d))
        .unwrap_or(0);
    BSMorphism::from_columns_unchecked(Word::empty(), x.word().clone(), degree, vec![x.coords().clone()])
}

fn morphism_element(m: &BSMorphism) -> BSElement {
    BSElement::from_coords(m.target().clone(), m.column(0).clone())
}

/// `1_s g ⊗ 1_s h ⊗ ...`: one polynomial after each copy of `s`.
fn pure_tensor(s: &Word, copies: &[MultiPoly]) -> BSElement {
    let d = s.len();
    let word = (0..copies.len()).fold(Word::empty(), |w, _| w.concat(s));
    let mut slots = vec![MultiPoly::one(); d * copies.len() + 1];
    for (k, g) in copies.iter().enumerate() {
        slots[d * (k + 1)] = g.clone();
    }
    normal_form(&word, &slots)
}

/// The merge `B_s ⊗ B_s → B_s` absorbing the second copy one strand at a time.
pub fn very_thick_merge(family: &ProjectorFamily) -> Result<Diagram, ThickError> {
    let s = family.source();
    let mut blocks: HashMap<u8, Diagram> = HashMap::new();
    let mut out: Option<Diagram> = None;
    for k in 0..s.len() {
        let c = s.letters()[k];
        if !blocks.contains_key(&c) {
            blocks.insert(c, a_thick(family.parabolic(), c as usize, Side::Right, Anchor::Source)?.block()?);
        }
        let rest = s.slice(k + 1, s.len());
        let layer = Diagram::layer(&Word::empty(), blocks[&c].clone(), &rest);
        out = Some(match out {
            None => layer,
            Some(d) => d.then(layer),
        });
    }
    Ok(out.unwrap_or_else(|| Diagram::id(s)))
}

struct VeryThick<'a> {
    family: &'a ProjectorFamily,
    bases: DualBasisPair,
    merge: Diagram,
    split: Diagram,
    phi: Diagram,
}

impl<'a> VeryThick<'a> {
    fn new(family: &'a ProjectorFamily) -> Result<Self, ThickError> {
        let merge = very_thick_merge(family)?;
        let split = merge.vflip()?;
        let s = family.source();
        let phi = Diagram::matrix((*family.transition(s, s)?).clone());
        Ok(VeryThick { family, bases: dual_bases(family.parabolic())?, merge, split, phi })
    }

    fn s(&self) -> &Word {
        self.family.source()
    }

    fn run(&self, d: &Diagram, x: &BSElement) -> Result<BSElement, ThickError> {
        Ok(morphism_element(&d.eval_after(&element_morphism(x))?))
    }

    /// `φ ⊗ φ` on `B_s ⊗ B_s`.
    fn phi2(&self) -> Diagram {
        let s = self.s();
        Diagram::layer(&Word::empty(), self.phi.clone(), s).then(Diagram::layer(s, self.phi.clone(), &Word::empty()))
    }

    fn mid(&self, g: &MultiPoly) -> Diagram {
        Diagram::layer(self.s(), Gen::Poly(g.clone()), self.s())
    }

    fn one(&self) -> BSElement {
        BSElement::one_tensor(self.s().clone())
    }

    fn params(&self) -> serde_json::Value {
        json!({ "J": self.family.parabolic().indices() })
    }

    /// `Σ_r g_r · x · g*_r`, or with `∂_J(g*_r f)` on the right when `f` is given.
    fn frobenius_sum(&self, x: &BSElement, f: Option<&MultiPoly>) -> Result<BSElement, ThickError> {
        let mut acc = BSElement::zero(x.word().clone());
        for (g, h) in self.bases.basis.iter().zip(&self.bases.dual) {
            let right = match f {
                Some(f) => partial_parabolic(self.family.parabolic(), &(h * f))?,
                None => h.clone(),
            };
            acc = acc.add(&x.left_mul(g).right_mul(&right));
        }
        Ok(acc)
    }

    fn probes(&self) -> Vec<MultiPoly> {
        let idx = self.family.parabolic().indices();
        let (p, q) = (idx[0], *idx.last().unwrap());
        let fp = MultiPoly::var(p);
        let fpq = &fp * &MultiPoly::var(p + 1);
        let top = self.bases.basis[self.bases.longest_index()].clone();
        vec![
            MultiPoly::one(),
            fp.clone(),
            fpq.clone(),
            &fpq * &(&fp + &MultiPoly::var(p + 1)),
            top.clone(),
            &top * &MultiPoly::var(q),
        ]
    }

    fn action(&self) -> Result<CheckReport, ThickError> {
        let then_phi = self.merge.clone().then(self.phi.clone());
        let mut failures = Vec::new();
        for g in self.probes() {
            for h in [MultiPoly::one(), MultiPoly::var(self.family.parabolic().max_index())] {
                let got = self.run(&then_phi, &pure_tensor(self.s(), &[g.clone(), h.clone()]))?;
                let want = self.one().right_mul(&(&partial_parabolic(self.family.parabolic(), &g)? * &h));
                if got != want {
                    failures.push(json!({ "g": g.to_string(), "h": h.to_string() }));
                }
            }
        }
        let r = CheckReport::new("very thick merge acts by the parabolic Demazure operator", self.params(), failures.is_empty());
        Ok(if failures.is_empty() { r } else { r.with_witness(json!(failures)) })
    }

    fn beta(&self) -> Result<Vec<CheckReport>, ThickError> {
        let image = morphism_element(&xi_bar(self.family)?);
        let beta = self.frobenius_sum(&self.one(), None)?;
        let mut out = vec![CheckReport::new("thick unit picks out beta", self.params(), image == beta)];
        let mut central = true;
        for k in 1..=self.family.nvars() {
            let f = MultiPoly::var(k);
            central &= beta.left_mul(&f) == beta.right_mul(&f);
        }
        out.push(CheckReport::new("beta is central", self.params(), central));
        Ok(out)
    }

    fn resolution(&self) -> Result<CheckReport, ThickError> {
        let mut ok = true;
        for g in &self.bases.basis {
            let input = pure_tensor(self.s(), &[g.clone(), MultiPoly::one()]);
            let mut acc = BSElement::zero(input.word().clone());
            for (gr, hr) in self.bases.basis.iter().zip(&self.bases.dual) {
                let d = self
                    .mid(hr)
                    .then(self.merge.clone())
                    .then(self.split.clone())
                    .then(self.mid(gr))
                    .then(self.phi2());
                acc = acc.add(&self.run(&d, &input)?);
            }
            ok &= acc == input;
        }
        Ok(CheckReport::new("identity of C⊗C resolves through the very thick merge", self.params(), ok))
    }

    fn unit(&self) -> Result<Vec<CheckReport>, ThickError> {
        let s = self.s();
        let unit = Diagram::matrix(xi_bar(self.family)?);
        let right = Diagram::layer(s, unit.clone(), &Word::empty()).then(self.merge.clone()).then(self.phi.clone());
        let left = Diagram::layer(&Word::empty(), unit, s).then(self.merge.clone()).then(self.phi.clone());
        let mut ok = (true, true);
        for g in self.probes() {
            let x = self.one().right_mul(&g);
            ok.0 &= self.run(&right, &x)? == x;
            ok.1 &= self.run(&left, &x)? == x;
        }
        Ok(vec![
            CheckReport::new("thick unit on the right", self.params(), ok.0),
            CheckReport::new("thick unit on the left", self.params(), ok.1),
        ])
    }

    fn broken(&self) -> Result<CheckReport, ThickError> {
        let s = self.s();
        let cap = Diagram::matrix(xi(self.family, s)?).then(Diagram::matrix(xi_bar(self.family)?));
        let mut ok = true;
        for g in self.probes() {
            let x = self.one().right_mul(&g);
            ok &= self.run(&cap, &x)? == self.frobenius_sum(&x, None)?;
        }
        Ok(CheckReport::new("broken thick line is the Frobenius sum", self.params(), ok))
    }

    fn coxeter(&self) -> Result<CheckReport, ThickError> {
        let idx = self.family.parabolic().indices();
        let (p, q) = (idx[0], *idx.last().unwrap());
        let mut ok = true;
        for f in [MultiPoly::var(p), MultiPoly::var(q), &MultiPoly::var(p) * &MultiPoly::var(q)] {
            ok &= self.one().left_mul(&f) == self.frobenius_sum(&self.one(), Some(&f))?;
        }
        Ok(CheckReport::new("polynomials slide through the thick line", self.params(), ok))
    }

    fn assoc(&self) -> Result<CheckReport, ThickError> {
        let s = self.s();
        let lhs = Diagram::layer(&Word::empty(), self.merge.clone(), s).then(self.merge.clone()).then(self.phi.clone());
        let rhs = Diagram::layer(s, self.merge.clone(), &Word::empty()).then(self.merge.clone()).then(self.phi.clone());
        let n = self.bases.len();
        let mut ok = true;
        for a in 0..n {
            let b = (a * 5 + 1) % n;
            let copies = [self.bases.basis[a].clone(), self.bases.dual[b].clone(), MultiPoly::one()];
            let x = pure_tensor(s, &copies);
            ok &= self.run(&lhs, &x)? == self.run(&rhs, &x)?;
        }
        Ok(CheckReport::new("very thick merge is associative", self.params(), ok))
    }
}

/// All very thick checks for one parabolic. Associativity lives on `B_s^{⊗3}` and is left
/// out when that word is longer than a morphism may be.
pub fn very_thick_action_check(family: &ProjectorFamily) -> Result<Vec<CheckReport>, ThickError> {
    let vt = VeryThick::new(family)?;
    let mut out = vec![vt.action()?];
    out.extend(vt.beta()?);
    out.push(vt.resolution()?);
    out.extend(vt.unit()?);
    out.push(vt.broken()?);
    out.push(vt.coxeter()?);
    if 3 * family.source().len() <= MAX_WORD_LEN {
        out.push(vt.assoc()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Parabolic;

    #[test]
    fn two_colour_very_thick() {
        let fam = ProjectorFamily::new(&Parabolic::interval(1, 2)).unwrap();
        for r in very_thick_action_check(&fam).unwrap() {
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn one_colour_merge_is_the_trivalent() {
        let fam = ProjectorFamily::new(&Parabolic::new([2])).unwrap();
        assert_eq!(very_thick_merge(&fam).unwrap().eval().unwrap(), Gen::Merge(2).morphism().unwrap());
        for r in very_thick_action_check(&fam).unwrap() {
            assert!(r.passed(), "{}", r.to_json());
        }
    }
}
