//! Degree-wise dimensions of bimodule Hom spaces, solved directly and predicted from the
//! Hecke algebra.

use std::collections::HashMap;

use super::element::{label_degree, right_mul_label, Coords, Label};
use super::morphism::BSMorphism;
use super::BsError;
use crate::coxeter::Word;
use crate::hecke::{hom_rank_bs, HeckeError, LaurentPoly};
use crate::linalg::{kernel_basis, nullity, sparse_from, SparseRow};
use crate::poly_core::{Monomial, MultiPoly};

/// Largest number of unknown coefficients a single Hom solve may use.
pub const MAX_HOM_UNKNOWNS: usize = 20_000;

/// A rational basis of the degree-`degree` bimodule maps `B_source → B_target`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Word,
    pub target: Word,
    pub degree: i32,
    pub basis: Vec<BSMorphism>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

struct System {
    unknowns: Vec<(Label, Label, Monomial)>,
    rows: Vec<SparseRow>,
}

fn build_system(x: &Word, y: &Word, m: i32, nvars: usize) -> Result<System, BsError> {
    let (dx, dy) = (x.len(), y.len());
    if dx > 12 || dy > 12 {
        return Err(BsError::TooLarge(dx.max(dy)));
    }
    let vars: Vec<usize> = (1..=nvars).collect();
    let mut unknowns = Vec::new();
    let mut index: HashMap<(Label, Label), Vec<(Monomial, usize)>> = HashMap::new();
    for e in 0..1u32 << dx {
        for f in 0..1u32 << dy {
            let twice = m + label_degree(e, dx) - label_degree(f, dy);
            if twice < 0 || twice % 2 != 0 {
                continue;
            }
            for mono in Monomial::all_of_degree(&vars, (twice / 2) as u32) {
                index.entry((e, f)).or_default().push((mono, unknowns.len()));
                unknowns.push((e, f, mono));
            }
            if unknowns.len() > MAX_HOM_UNKNOWNS {
                return Err(BsError::ResourceBound(unknowns.len()));
            }
        }
    }
    // φ(E·f_v) = φ(E)·f_v, expanded in the target basis.
    let mut rows: HashMap<(usize, Label, Label, Monomial), Vec<(usize, crate::poly_core::Coeff)>> = HashMap::new();
    for v in 1..=nvars {
        let fv = MultiPoly::var(v);
        let tgt_mul: Vec<Coords> = (0..1u32 << dy).map(|f| right_mul_label(y, f, &fv)).collect();
        for e in 0..1u32 << dx {
            for (e2, c) in right_mul_label(x, e, &fv) {
                for f in 0..1u32 << dy {
                    for (mono, k) in index.get(&(e2, f)).into_iter().flatten() {
                        for (cm, cc) in c.terms() {
                            rows.entry((v, e, f, mono.mul(cm))).or_default().push((*k, cc.clone()));
                        }
                    }
                }
            }
            for f in 0..1u32 << dy {
                for (mono, k) in index.get(&(e, f)).into_iter().flatten() {
                    for (f2, d) in &tgt_mul[f as usize] {
                        for (dm, dc) in d.terms() {
                            rows.entry((v, e, *f2, mono.mul(dm))).or_default().push((*k, -dc.clone()));
                        }
                    }
                }
            }
        }
    }
    let mut keys: Vec<_> = rows.keys().cloned().collect();
    keys.sort();
    let rows = keys.into_iter().map(|k| sparse_from(rows.remove(&k).unwrap())).collect();
    Ok(System { unknowns, rows })
}

/// Dimension over `Q` of the degree-`m` bimodule maps `B_x → B_y` with `R = Q[f_1..f_nvars]`.
pub fn hom_dim_at_degree(x: &Word, y: &Word, m: i32, nvars: usize) -> Result<usize, BsError> {
    let sys = build_system(x, y, m, nvars)?;
    Ok(nullity(sys.unknowns.len(), sys.rows))
}

/// A basis of the degree-`m` bimodule maps `B_x → B_y`.
pub fn hom_space(x: &Word, y: &Word, m: i32, nvars: usize) -> Result<HomSpace, BsError> {
    let sys = build_system(x, y, m, nvars)?;
    let kernel = kernel_basis(sys.unknowns.len(), sys.rows);
    let basis = kernel
        .into_iter()
        .map(|vec| {
            let mut columns = vec![Coords::new(); 1 << x.len()];
            for ((e, f, mono), c) in sys.unknowns.iter().zip(vec) {
                if c != crate::poly_core::coeff(0) {
                    super::element::add_into(&mut columns[*e as usize], *f, &MultiPoly::monomial(*mono, c));
                }
            }
            BSMorphism::from_columns(x.clone(), y.clone(), m, columns)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HomSpace { source: x.clone(), target: y.clone(), degree: m, basis })
}

/// `Σ_k p_k h_{m-k}` with `p` the graded rank of `Hom(B_x, B_y)` and `h` the Hilbert series of `R`.
pub fn predicted_hom_dim(x: &Word, y: &Word, m: i32, nvars: usize) -> Result<i64, HeckeError> {
    let p = hom_rank_bs(x, y, nvars)?;
    Ok(graded_dim(&p, m, nvars))
}

/// Degree-`m` dimension of a free graded module with graded rank `p` over `Q[f_1..f_n]`.
pub fn graded_dim(p: &LaurentPoly, m: i32, nvars: usize) -> i64 {
    let lo = p.min_exp().unwrap_or(0);
    if m < lo {
        return 0;
    }
    let h = LaurentPoly::hilbert_series_of_polys(nvars, (m - lo) as usize);
    p.terms().filter(|(k, _)| *k <= m).map(|(k, c)| c * h[(m - k) as usize]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(hom_dim_at_degree(&w("1"), &w("1"), 0, 1).unwrap(), 1);
        assert_eq!(hom_dim_at_degree(&Word::empty(), &w("1"), 1, 1).unwrap(), 1);
        assert_eq!(hom_dim_at_degree(&w("1"), &Word::empty(), -1, 1).unwrap(), 0);
    }

    #[test]
    fn predictions_match_small_cases() {
        for (x, y) in [("1", "1"), ("", "1"), ("1", "11"), ("12", "21"), ("121", "212")] {
            let (x, y) = (w(x), w(y));
            for m in -3..=3 {
                let got = hom_dim_at_degree(&x, &y, m, 2).unwrap() as i64;
                assert_eq!(got, predicted_hom_dim(&x, &y, m, 2).unwrap(), "{x} -> {y} at {m}");
            }
        }
    }

    #[test]
    fn hom_space_elements_are_bimodule_maps() {
        let space = hom_space(&w("1"), &w("11"), 1, 2).unwrap();
        assert_eq!(space.dim() as i64, predicted_hom_dim(&w("1"), &w("11"), 1, 2).unwrap());
        assert!(space.basis.iter().all(|m| m.is_bimodule_map(2)));
    }
}
