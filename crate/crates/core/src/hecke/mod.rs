//! The Hecke algebra of `S_{n+1}` over `Z[v, v^{-1}]` in the standard basis.
//!
//! Normalization: `H_s H_w = H_{sw}` if `sw > w`, otherwise `H_{sw} + (v^{-1} - v) H_w`;
//! the Kazhdan-Lusztig generator is `b_s = H_s + v`.

mod laurent;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use laurent::LaurentPoly;

use crate::coxeter::{eval, hilbert, longest_length, parabolic_elements, CoxeterError, Parabolic, Perm, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("Laurent polynomial division is not exact")]
    InexactDivision,
    #[error("elements live in different ranks ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

/// `Σ a_w H_w`.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElt {
    rank: usize,
    support: BTreeMap<Perm, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero(rank: usize) -> Self {
        HeckeElt { rank, support: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::standard(Perm::identity(rank), LaurentPoly::one())
    }

    /// `c · H_w`.
    pub fn standard(w: Perm, c: LaurentPoly) -> Self {
        let mut e = HeckeElt::zero(w.rank());
        e.add_term(w, &c);
        e
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn support(&self) -> &BTreeMap<Perm, LaurentPoly> {
        &self.support
    }

    pub fn coeff(&self, w: &Perm) -> LaurentPoly {
        self.support.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    fn add_term(&mut self, w: Perm, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.support.entry(w.clone()).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.support.remove(&w);
        }
    }

    pub fn add(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (w, c) in &other.support {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> HeckeElt {
        self.add(&other.scale(&LaurentPoly::monomial(0, -1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> HeckeElt {
        let mut out = HeckeElt::zero(self.rank);
        for (w, a) in &self.support {
            out.add_term(w.clone(), &(a * c));
        }
        out
    }

    /// `H_{s_i} · self`.
    pub fn left_mul_simple(&self, i: usize) -> HeckeElt {
        let mut out = HeckeElt::zero(self.rank);
        let corr = LaurentPoly::from_pairs([(-1, 1), (1, -1)]);
        for (u, c) in &self.support {
            let su = u.mul_left(i);
            out.add_term(su, c);
            if u.has_left_descent(i) {
                out.add_term(u.clone(), &(c * &corr));
            }
        }
        out
    }

    pub fn mul(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero(self.rank);
        for (w, a) in &self.support {
            let mut acc = other.scale(a);
            for &i in w.reduced_word().letters().iter().rev() {
                acc = acc.left_mul_simple(i as usize);
            }
            out = out.add(&acc);
        }
        out
    }

    /// The trace: coefficient of `H_e`.
    pub fn epsilon(&self) -> LaurentPoly {
        self.coeff(&Perm::identity(self.rank))
    }

    /// The antilinear anti-involution fixing every `b_s`.
    pub fn omega(&self) -> HeckeElt {
        let mut out = HeckeElt::zero(self.rank);
        for (w, a) in &self.support {
            // ω(H_{i_1} ... H_{i_d}) = ω(H_{i_d}) ... ω(H_{i_1}) with ω(H_s) = H_s + v - v^{-1}.
            let mut acc = HeckeElt::standard(Perm::identity(self.rank), a.bar());
            for &i in w.reduced_word().letters() {
                let inv = HeckeElt::standard(Perm::identity(self.rank), LaurentPoly::from_pairs([(1, 1), (-1, -1)]));
                let hs = HeckeElt::standard(Perm::identity(self.rank).mul_right(i as usize), LaurentPoly::one());
                acc = hs.add(&inv).mul(&acc);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Exact division of every coefficient.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<HeckeElt, HeckeError> {
        let mut out = HeckeElt::zero(self.rank);
        for (w, a) in &self.support {
            out.add_term(w.clone(), &a.div_exact(d)?);
        }
        Ok(out)
    }
}

impl fmt::Display for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .support
            .iter()
            .map(|(w, c)| format!("({})*H{}", c, w))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElt({})", self)
    }
}

/// `b_i = H_{s_i} + v`.
pub fn b_gen(i: usize, rank: usize) -> HeckeElt {
    let e = Perm::identity(rank);
    HeckeElt::standard(e.mul_right(i), LaurentPoly::one())
        .add(&HeckeElt::standard(e, LaurentPoly::v()))
}

/// `b_{i_1} ... b_{i_d}`.
pub fn b_word(word: &Word, rank: usize) -> Result<HeckeElt, HeckeError> {
    eval(word, rank)?;
    let mut acc = HeckeElt::one(rank);
    for &i in word.letters() {
        acc = acc.mul(&b_gen(i as usize, rank));
    }
    Ok(acc)
}

/// `b_J = Σ_{w ∈ W_J} v^{d_J - l(w)} H_w`.
pub fn b_parabolic(parabolic: &Parabolic, rank: usize) -> HeckeElt {
    let d = longest_length(parabolic) as i32;
    let mut out = HeckeElt::zero(rank.max(parabolic.max_index()));
    for (w, l) in parabolic_elements(parabolic, rank) {
        out.add_term(w, &LaurentPoly::monomial(d - l as i32, 1));
    }
    out
}

/// `(x, y) = ε(y ω(x))`.
pub fn pairing(x: &HeckeElt, y: &HeckeElt) -> LaurentPoly {
    y.mul(&x.omega()).epsilon()
}

/// Graded rank of `Hom(B_x, B_y)` as a free left `R`-module.
pub fn hom_rank_bs(x: &Word, y: &Word, rank: usize) -> Result<LaurentPoly, HeckeError> {
    Ok(pairing(&b_word(x, rank)?, &b_word(y, rank)?))
}

/// Graded rank of `Hom_{T_J}(i, j)`: `v^{-d_J} ε(b_J b_{ω(i)} b_j)`.
///
/// This equals `[J]^{-1} v^{-d_J}` times the graded rank of `Hom(B_i B_J, B_j B_J)`,
/// which is what the bimodule realization measures.
pub fn tj_rank(parabolic: &Parabolic, i: &Word, j: &Word, rank: usize) -> Result<LaurentPoly, HeckeError> {
    let bj = b_parabolic(parabolic, rank);
    let e = bj.mul(&b_word(&i.omega(), rank)?).mul(&b_word(j, rank)?).epsilon();
    Ok(e.shift(-(longest_length(parabolic) as i32)))
}

/// The variant `v^{-d_J} ε(b_J b_i b_{ω(j)})`, kept for comparison with [`tj_rank`];
/// the two agree when `i = j` but not in general.
pub fn tj_rank_literal(parabolic: &Parabolic, i: &Word, j: &Word, rank: usize) -> Result<LaurentPoly, HeckeError> {
    tj_rank(parabolic, &i.omega(), &j.omega(), rank)
}

/// Renormalized product `x ∘ y = x y / [J]` of the Hecke algebroid.
pub fn algebroid_compose(x: &HeckeElt, y: &HeckeElt, parabolic: &Parabolic) -> Result<HeckeElt, HeckeError> {
    if x.rank() != y.rank() {
        return Err(HeckeError::RankMismatch(x.rank(), y.rank()));
    }
    x.mul(y).div_exact(&hilbert(parabolic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn b(s: &str, n: usize) -> HeckeElt {
        b_word(&w(s), n).unwrap()
    }

    #[test]
    fn quadratic_and_braid() {
        let two = LaurentPoly::quantum_two();
        assert_eq!(b("11", 3), b("1", 3).scale(&two));
        assert_eq!(b("13", 3), b("31", 3));
        assert_eq!(b("121", 3).add(&b("2", 3)), b("212", 3).add(&b("1", 3)));
    }

    #[test]
    fn traces() {
        assert_eq!(b("1", 2).epsilon(), LaurentPoly::v());
        assert_eq!(b("12", 2).epsilon(), LaurentPoly::monomial(2, 1));
        assert_eq!(b("11", 2).epsilon(), LaurentPoly::from_pairs([(2, 1), (0, 1)]));
        let j = Parabolic::new([1, 2]);
        assert_eq!(b_parabolic(&j, 3).epsilon(), LaurentPoly::monomial(3, 1));
    }

    #[test]
    fn omega_examples() {
        let vb1 = b("1", 2).scale(&LaurentPoly::v());
        assert_eq!(vb1.omega(), b("1", 2).scale(&LaurentPoly::monomial(-1, 1)));
        assert_eq!(b("12", 2).omega(), b("21", 2));
        let x = b("121", 3).add(&b("3", 3).scale(&LaurentPoly::monomial(2, 5)));
        assert_eq!(x.omega().omega(), x);
    }

    #[test]
    fn parabolic_elements_and_pairing() {
        assert_eq!(b_parabolic(&Parabolic::new([2]), 3), b("2", 3));
        assert_eq!(b_parabolic(&Parabolic::empty(), 3), HeckeElt::one(3));
        let j = Parabolic::new([1, 2]);
        let bj = b_parabolic(&j, 2);
        assert_eq!(b("1", 2).mul(&bj), bj.scale(&LaurentPoly::quantum_two()));
        assert_eq!(
            pairing(&b("1", 2), &b("1", 2)),
            LaurentPoly::from_pairs([(2, 1), (0, 1)])
        );
        assert_eq!(pairing(&HeckeElt::one(2), &HeckeElt::one(2)), LaurentPoly::one());
    }

    #[test]
    fn tj_rank_examples() {
        let e = Word::empty();
        assert_eq!(tj_rank(&Parabolic::new([1]), &e, &e, 2).unwrap(), LaurentPoly::one());
        assert_eq!(
            tj_rank(&Parabolic::empty(), &w("1"), &w("1"), 2).unwrap(),
            LaurentPoly::from_pairs([(2, 1), (0, 1)])
        );
        assert_eq!(tj_rank(&Parabolic::new([1, 2]), &e, &e, 2).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn algebroid_division() {
        let j = Parabolic::new([1]);
        let bj = b_parabolic(&j, 1);
        assert_eq!(algebroid_compose(&bj, &bj, &j).unwrap(), bj);
    }
}
