//! The reflection action of `S_{n+1}` on the simple roots and the Demazure operators.
//!
//! Convention: `s_i(f_i) = -f_i`, `s_i(f_j) = f_j + f_i` for `|i - j| = 1`, and `s_i` fixes
//! every other `f_j`.

use num_traits::One;

use super::poly::{coeff, ratio, Coeff, Monomial, MultiPoly, MAX_VARS};
use super::PolyError;
use crate::coxeter::{is_reduced, Word};

fn check_index(i: usize) -> Result<(), PolyError> {
    if i == 0 || i > MAX_VARS {
        Err(PolyError::IndexOutOfRange(i))
    } else {
        Ok(())
    }
}

fn binomial_row(n: u8) -> Vec<Coeff> {
    let mut row: Vec<i64> = vec![1];
    for _ in 0..n {
        let mut next = vec![1; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row.into_iter().map(coeff).collect()
}

/// `s_i(P)`.
pub fn reflect(i: usize, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
    check_index(i)?;
    let mut out: Vec<(Monomial, Coeff)> = Vec::new();
    for (m, c) in p.terms() {
        let ei = m.exp(i);
        let el = if i > 1 { m.exp(i - 1) } else { 0 };
        let er = if i < MAX_VARS { m.exp(i + 1) } else { 0 };
        if el == 0 && er == 0 {
            let c = if ei % 2 == 1 { -c } else { c.clone() };
            out.push((*m, c));
            continue;
        }
        let bl = binomial_row(el);
        let br = binomial_row(er);
        let sign = if ei % 2 == 1 { -Coeff::one() } else { Coeff::one() };
        for a in 0..=el {
            for b in 0..=er {
                let mut mono = m.with_exp(i, ei + a + b);
                if el > 0 {
                    mono = mono.with_exp(i - 1, el - a);
                }
                if er > 0 {
                    mono = mono.with_exp(i + 1, er - b);
                }
                out.push((mono, c * &bl[a as usize] * &br[b as usize] * &sign));
            }
        }
    }
    Ok(MultiPoly::from_terms(out))
}

/// `∂_i(P) = (P - s_i P) / f_i`.
pub fn demazure(i: usize, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
    let diff = p - &reflect(i, p)?;
    diff.div_var(i)
}

/// `∂_{i_1} ∘ ... ∘ ∂_{i_d}(P)` for a reduced word `i_1 ... i_d`.
pub fn demazure_word(word: &Word, p: &MultiPoly) -> Result<MultiPoly, PolyError> {
    if !is_reduced(word) {
        return Err(PolyError::NotReduced(word.to_string()));
    }
    let mut acc = p.clone();
    for &i in word.letters().iter().rev() {
        if acc.is_zero() {
            break;
        }
        acc = demazure(i as usize, &acc)?;
    }
    Ok(acc)
}

/// Split `P = P0 + f_i P1` with both parts `s_i`-invariant.
pub fn invariant_split(i: usize, p: &MultiPoly) -> Result<(MultiPoly, MultiPoly), PolyError> {
    let half = ratio(1, 2);
    let s = reflect(i, p)?;
    let p0 = (p + &s).scale(&half);
    let p1 = ((p - &s).div_var(i)?).scale(&half);
    Ok((p0, p1))
}

/// Whether `P` is fixed by every `s_j`, `j ∈ J`.
pub fn is_invariant(parabolic: &[usize], p: &MultiPoly) -> Result<bool, PolyError> {
    for &j in parabolic {
        if reflect(j, p)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `P` is `s_i`-invariant, without building `s_i(P)` when `P` avoids `f_i`.
pub fn is_fixed_by(i: usize, p: &MultiPoly) -> bool {
    if p.terms().iter().all(|(m, _)| m.exp(i) == 0) {
        let touches = p.terms().iter().any(|(m, _)| {
            (i > 1 && m.exp(i - 1) > 0) || (i < MAX_VARS && m.exp(i + 1) > 0)
        });
        if !touches {
            return true;
        }
    }
    reflect(i, p).map(|s| s == *p).unwrap_or(false)
}

/// `P` with every variable outside `vars` set to zero.
pub fn restrict_to(vars: &[usize], p: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(p.terms().iter().filter_map(|(m, c)| {
        let keep = (1..=MAX_VARS).all(|k| m.exp(k) == 0 || vars.contains(&k));
        if keep {
            Some((*m, c.clone()))
        } else {
            None
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflect(1, &p("f1")).unwrap(), p("-f1"));
        assert_eq!(reflect(1, &p("f3")).unwrap(), p("f3"));
        assert_eq!(reflect(1, &p("f2")).unwrap(), p("f1 + f2"));
        assert_eq!(reflect(2, &p("f1*f3")).unwrap(), p("f1*f3 + f1*f2 + f2*f3 + f2^2"));
        assert!(reflect(0, &p("f1")).is_err());
    }

    #[test]
    fn demazure_examples() {
        assert_eq!(demazure(1, &p("f1")).unwrap(), p("2"));
        assert_eq!(demazure(1, &p("f1^2")).unwrap(), MultiPoly::zero());
        assert_eq!(demazure(1, &p("f2")).unwrap(), p("-1"));
        assert_eq!(demazure(1, &p("f1*f2")).unwrap(), p("2*f2 + f1"));
    }

    #[test]
    fn split_examples() {
        assert_eq!(invariant_split(1, &p("f1")).unwrap(), (MultiPoly::zero(), p("1")));
        assert_eq!(invariant_split(1, &p("5")).unwrap(), (p("5"), MultiPoly::zero()));
        let (a, b) = invariant_split(1, &p("f2")).unwrap();
        assert_eq!(a, p("f2 + 1/2*f1"));
        assert_eq!(b, p("-1/2"));
        assert_eq!(&a + &(&p("f1") * &b), p("f2"));
    }

    #[test]
    fn invariance_examples() {
        assert!(is_invariant(&[1], &p("f1^2")).unwrap());
        assert!(!is_invariant(&[1], &p("f1")).unwrap());
        assert!(is_fixed_by(1, &p("f1^2 + f3")));
        assert!(!is_fixed_by(1, &p("f2")));
    }
}
