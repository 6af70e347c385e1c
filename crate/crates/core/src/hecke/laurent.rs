//! Laurent polynomials in `v` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::HeckeError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c · v^e`.
    pub fn monomial(e: i32, c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(e, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in pairs {
            out.add_term(e, c);
        }
        out
    }

    /// `[2] = v + v^{-1}`.
    pub fn quantum_two() -> Self {
        Self::from_pairs([(1, 1), (-1, 1)])
    }

    fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// The bar involution `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly::from_pairs(self.terms().map(|(e, c)| (-e, c)))
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly::from_pairs(self.terms().map(|(e, c)| (e + k, c)))
    }

    pub fn scale(&self, k: i64) -> Self {
        LaurentPoly::from_pairs(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.bar()
    }

    /// Exact division; errors if the divisor does not divide or is zero.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, HeckeError> {
        let (dlo, dhi) = match (divisor.min_exp(), divisor.max_exp()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(HeckeError::InexactDivision),
        };
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(top) = rem.max_exp() {
            let c = rem.coeff(top);
            if top - dhi < rem.min_exp().unwrap() - dlo || c % lead != 0 {
                return Err(HeckeError::InexactDivision);
            }
            let q = LaurentPoly::monomial(top - dhi, c / lead);
            rem = &rem - &(&q * divisor);
            quot = &quot + &q;
        }
        Ok(quot)
    }

    /// Series coefficients of `(1 - v^2)^{-n}` at `v^0, v^1, ..., v^max`.
    pub fn hilbert_series_of_polys(n: usize, max: usize) -> Vec<i64> {
        let mut out = vec![0i64; max + 1];
        out[0] = 1;
        for _ in 0..n {
            // Multiply by 1/(1 - v^2): running sum with stride 2.
            for k in 2..=max {
                out[k] += out[k - 2];
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let neg = c < 0;
            let a = c.unsigned_abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let var = match e {
                0 => String::new(),
                1 => "v".to_string(),
                _ => format!("v^{}", e),
            };
            if var.is_empty() {
                write!(f, "{}", a)?;
            } else if a == 1 {
                write!(f, "{}", var)?;
            } else {
                write!(f, "{}*{}", a, var)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let two = LaurentPoly::quantum_two();
        assert_eq!(two.to_string(), "v + v^-1");
        let sq = &two * &two;
        assert_eq!(sq.to_string(), "v^2 + 2 + v^-2");
        assert_eq!(sq.div_exact(&two).unwrap(), two);
        assert!(LaurentPoly::one().div_exact(&two).is_err());
        assert_eq!(sq.at_one(), 4);
        assert!(sq.is_palindromic());
        assert_eq!((&two - &two), LaurentPoly::zero());
    }

    #[test]
    fn series_of_polynomial_ring() {
        assert_eq!(LaurentPoly::hilbert_series_of_polys(1, 4), vec![1, 0, 1, 0, 1]);
        assert_eq!(LaurentPoly::hilbert_series_of_polys(2, 4), vec![1, 0, 2, 0, 3]);
        assert_eq!(LaurentPoly::hilbert_series_of_polys(0, 2), vec![1, 0, 0]);
    }
}
