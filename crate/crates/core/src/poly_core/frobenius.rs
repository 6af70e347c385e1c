//! `R` as a Frobenius extension of `R^J`: the operator `∂_J`, dual bases and the element `β`.

use num_traits::Zero;

use super::action::demazure_word;
use super::poly::{Coeff, Monomial, MultiPoly};
use super::PolyError;
use crate::coxeter::{longest, parabolic_elements, Parabolic, Perm, Word};
use crate::linalg::{solve, sparse_from, SparseRow};

/// `∂_J = ∂_{w_J}`, evaluated along a reduced word of the longest element.
pub fn partial_parabolic(parabolic: &Parabolic, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
    if parabolic.is_empty() {
        return Ok(p.clone());
    }
    let (w, _) = longest(parabolic, parabolic.max_index());
    demazure_word(&w.reduced_word(), p)
}

/// Bases `g_r` of `R` over `R^J` and `g*_r` with `∂_J(g_r g*_q) = δ_{rq}`.
#[derive(Clone, Debug)]
pub struct DualBasisPair {
    pub parabolic: Parabolic,
    /// Elements `r ∈ W_J`, in order of increasing length.
    pub elements: Vec<Perm>,
    pub basis: Vec<MultiPoly>,
    pub dual: Vec<MultiPoly>,
}

impl DualBasisPair {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Position of the longest element.
    pub fn longest_index(&self) -> usize {
        self.basis.len() - 1
    }
}

/// Staircase exponent bounds for one connected piece: the `m`-th variable (1-based) may
/// appear with exponent at most `m`, or at most `k + 1 - m` when `reverse` is set.
fn staircase(component: &Parabolic, reverse: bool) -> Vec<Vec<(usize, u8)>> {
    let vars = component.indices();
    let k = vars.len();
    let mut out: Vec<Vec<(usize, u8)>> = vec![Vec::new()];
    for (pos, &v) in vars.iter().enumerate() {
        let bound = if reverse { k - pos } else { pos + 1 };
        let mut next = Vec::new();
        for prefix in &out {
            for e in 0..=bound as u8 {
                let mut p = prefix.clone();
                p.push((v, e));
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn candidate_basis(parabolic: &Parabolic, reverse: bool) -> Vec<Monomial> {
    let mut monos = vec![Monomial::one()];
    for comp in parabolic.components() {
        let mut next = Vec::new();
        for m in &monos {
            for exps in staircase(&comp, reverse) {
                let mut mm = *m;
                for (v, e) in exps {
                    mm = mm.with_exp(v, e);
                }
                next.push(mm);
            }
        }
        monos = next;
    }
    monos.sort_by_key(|m| (m.total(), std::cmp::Reverse(*m)));
    monos
}

fn solve_duals(parabolic: &Parabolic, basis: &[MultiPoly], d: u32) -> Result<Vec<MultiPoly>, PolyError> {
    let vars = parabolic.indices();
    let mut duals = Vec::with_capacity(basis.len());
    for q in 0..basis.len() {
        let deg_q = basis[q].total_degree().unwrap_or(0);
        let target = d - deg_q;
        let unknowns = Monomial::all_of_degree(vars, target);
        // Constraint images: ∂_J(g_r · m) for every unknown monomial m.
        let mut eqs: Vec<(SparseRow, Coeff)> = Vec::new();
        for (r, g) in basis.iter().enumerate() {
            let images: Result<Vec<MultiPoly>, PolyError> = unknowns
                .iter()
                .map(|m| partial_parabolic(parabolic, &g.mul_monomial(m, &Coeff::from_integer(1.into()))))
                .collect();
            let images = images?;
            let mut monos: Vec<Monomial> = images
                .iter()
                .flat_map(|p| p.terms().iter().map(|(m, _)| *m))
                .collect();
            monos.sort();
            monos.dedup();
            if !monos.contains(&Monomial::one()) {
                monos.push(Monomial::one());
            }
            for mono in monos {
                let row = sparse_from(
                    images.iter().enumerate().map(|(k, p)| (k, p.coefficient(&mono))),
                );
                let rhs = if r == q && mono.is_one() {
                    Coeff::from_integer(1.into())
                } else {
                    Coeff::zero()
                };
                eqs.push((row, rhs));
            }
        }
        let x = solve(unknowns.len(), eqs)
            .ok_or_else(|| PolyError::NoDualBasis(parabolic.to_string()))?;
        duals.push(MultiPoly::from_terms(
            unknowns.iter().zip(x).map(|(m, c)| (*m, c)),
        ));
    }
    Ok(duals)
}

/// Dual bases of `R` over `R^J` built from staircase monomials.
pub fn dual_bases(parabolic: &Parabolic) -> Result<DualBasisPair, PolyError> {
    let mut elements: Vec<(Perm, usize)> = parabolic_elements(parabolic, parabolic.max_index());
    elements.sort_by_key(|(_, l)| *l);
    let d = elements.last().map(|(_, l)| *l as u32).unwrap_or(0);
    for reverse in [false, true] {
        let basis: Vec<MultiPoly> = candidate_basis(parabolic, reverse)
            .into_iter()
            .map(|m| MultiPoly::monomial(m, Coeff::from_integer(1.into())))
            .collect();
        let degrees_match = basis
            .iter()
            .zip(&elements)
            .all(|(g, (_, l))| g.total_degree().unwrap_or(0) as usize == *l);
        if !degrees_match {
            continue;
        }
        if let Ok(dual) = solve_duals(parabolic, &basis, d) {
            return Ok(DualBasisPair {
                parabolic: parabolic.clone(),
                elements: elements.into_iter().map(|(w, _)| w).collect(),
                basis,
                dual,
            });
        }
    }
    Err(PolyError::NoDualBasis(parabolic.to_string()))
}

/// An element of `R ⊗_{R^J} R` as a sum of pure tensors.
#[derive(Clone, Debug, Default)]
pub struct ParabolicTensor {
    pub terms: Vec<(MultiPoly, MultiPoly)>,
}

impl ParabolicTensor {
    pub fn new(terms: Vec<(MultiPoly, MultiPoly)>) -> Self {
        ParabolicTensor { terms }
    }

    pub fn left_mul(&self, f: &MultiPoly) -> Self {
        ParabolicTensor::new(self.terms.iter().map(|(a, b)| (f * a, b.clone())).collect())
    }

    pub fn right_mul(&self, f: &MultiPoly) -> Self {
        ParabolicTensor::new(self.terms.iter().map(|(a, b)| (a.clone(), b * f)).collect())
    }

    /// Left coefficients on the basis `1 ⊗ g_s`: `Σ_r a_r ∂_J(b_r g*_s)`.
    pub fn normal_form(&self, bases: &DualBasisPair) -> Result<Vec<MultiPoly>, PolyError> {
        let mut out = vec![MultiPoly::zero(); bases.len()];
        for (a, b) in &self.terms {
            for (s, gs) in bases.dual.iter().enumerate() {
                let c = partial_parabolic(&bases.parabolic, &(b * gs))?;
                out[s] += &(a * &c);
            }
        }
        Ok(out)
    }
}

/// `β = Σ_r g_r ⊗ g*_r`.
pub fn beta(bases: &DualBasisPair) -> ParabolicTensor {
    ParabolicTensor::new(
        bases
            .basis
            .iter()
            .zip(&bases.dual)
            .map(|(g, h)| (g.clone(), h.clone()))
            .collect(),
    )
}

/// A reduced word for `w_J`.
pub fn longest_word(parabolic: &Parabolic) -> Word {
    longest(parabolic, parabolic.max_index()).0.reduced_word()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::ratio;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn check_delta(b: &DualBasisPair) {
        for (r, g) in b.basis.iter().enumerate() {
            for (q, h) in b.dual.iter().enumerate() {
                let v = partial_parabolic(&b.parabolic, &(g * h)).unwrap();
                let want = if r == q { MultiPoly::one() } else { MultiPoly::zero() };
                assert_eq!(v, want, "r={r} q={q}");
            }
        }
    }

    #[test]
    fn singleton_dual_basis() {
        let b = dual_bases(&Parabolic::new([1])).unwrap();
        assert_eq!(b.basis, vec![p("1"), p("f1")]);
        assert_eq!(b.dual, vec![p("1/2*f1"), p("1/2")]);
        check_delta(&b);
    }

    #[test]
    fn empty_dual_basis() {
        let b = dual_bases(&Parabolic::empty()).unwrap();
        assert_eq!(b.basis, vec![p("1")]);
        assert_eq!(b.dual, vec![p("1")]);
    }

    #[test]
    fn rank_two_dual_basis() {
        let b = dual_bases(&Parabolic::new([1, 2])).unwrap();
        let degs: Vec<i32> = b.basis.iter().map(|g| g.homogeneous_degree().unwrap()).collect();
        assert_eq!(degs, vec![0, 2, 2, 4, 4, 6]);
        let ddegs: Vec<i32> = b.dual.iter().map(|g| g.homogeneous_degree().unwrap()).collect();
        assert_eq!(ddegs, vec![6, 4, 4, 2, 2, 0]);
        check_delta(&b);
    }

    #[test]
    fn disconnected_and_rank_three() {
        check_delta(&dual_bases(&Parabolic::new([1, 3])).unwrap());
        check_delta(&dual_bases(&Parabolic::new([1, 2, 3])).unwrap());
    }

    #[test]
    fn beta_singleton_and_centrality() {
        let b = dual_bases(&Parabolic::new([1])).unwrap();
        let beta1 = beta(&b);
        // ½(1⊗f1 + f1⊗1) in normal form: coefficient ½f1 on 1⊗1 and ½ on 1⊗f1.
        let nf = beta1.normal_form(&b).unwrap();
        assert_eq!(nf, vec![p("1/2*f1"), MultiPoly::constant(ratio(1, 2))]);
        let b12 = dual_bases(&Parabolic::new([1, 2])).unwrap();
        let be = beta(&b12);
        for k in 1..=3 {
            let f = MultiPoly::var(k);
            assert_eq!(
                be.left_mul(&f).normal_form(&b12).unwrap(),
                be.right_mul(&f).normal_form(&b12).unwrap()
            );
        }
    }
}
