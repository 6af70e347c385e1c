//! Sparse multivariate polynomials over the rationals in the simple roots `f_1, f_2, ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::PolyError;

/// Exact rational coefficient.
pub type Coeff = BigRational;

/// Largest number of variables a polynomial may mention.
pub const MAX_VARS: usize = 8;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector; slot `k - 1` holds the exponent of `f_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u8; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    /// The variable `f_k` (1-based).
    pub fn var(k: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[k - 1] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u8]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVariables(exps.len()));
        }
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Ok(Monomial(e))
    }

    /// Exponent of `f_k` (1-based); zero outside the supported range.
    pub fn exp(&self, k: usize) -> u8 {
        if k == 0 || k > MAX_VARS {
            0
        } else {
            self.0[k - 1]
        }
    }

    pub fn exponents(&self) -> &[u8; MAX_VARS] {
        &self.0
    }

    pub fn with_exp(mut self, k: usize, e: u8) -> Self {
        self.0[k - 1] = e;
        self
    }

    /// Total polynomial degree (half the grading degree).
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Highest variable index with nonzero exponent, or 0.
    pub fn top_var(&self) -> usize {
        (0..MAX_VARS).rev().find(|&k| self.0[k] != 0).map_or(0, |k| k + 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Monomial(e)
    }

    /// Divide by `f_k`, if possible.
    pub fn div_var(&self, k: usize) -> Option<Monomial> {
        let mut e = self.0;
        if e[k - 1] == 0 {
            return None;
        }
        e[k - 1] -= 1;
        Some(Monomial(e))
    }

    /// All monomials of total degree `deg` in the variables `vars`, in increasing order.
    pub fn all_of_degree(vars: &[usize], deg: u32) -> Vec<Monomial> {
        fn rec(vars: &[usize], deg: u32, cur: Monomial, out: &mut Vec<Monomial>) {
            match vars.split_first() {
                None => {
                    if deg == 0 {
                        out.push(cur);
                    }
                }
                Some((&v, rest)) => {
                    if rest.is_empty() {
                        out.push(cur.with_exp(v, deg as u8));
                        return;
                    }
                    for e in 0..=deg {
                        rec(rest, deg - e, cur.with_exp(v, e as u8), out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(vars, deg, Monomial::one(), &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with `f_1 > f_2 > ...`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for k in 1..=MAX_VARS {
            let e = self.exp(k);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "f{}", k)?;
            } else {
                write!(f, "f{}^{}", k, e)?;
            }
        }
        Ok(())
    }
}

/// Polynomial in `f_1, ..., f_MAX_VARS` with exact rational coefficients.
///
/// Terms are kept sorted by increasing graded-lex monomial with no zero coefficients,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Coeff)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(coeff(n))
    }

    /// The simple root `f_k` (1-based).
    pub fn var(k: usize) -> Self {
        Self::monomial(Monomial::var(k), Coeff::one())
    }

    pub fn monomial(m: Monomial, c: Coeff) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(it: I) -> Self {
        let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in it {
            *acc.entry(m).or_insert_with(Coeff::zero) += c;
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Coeff::zero(),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Coeff::zero(),
        }
    }

    /// Largest total polynomial degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.total())
    }

    /// Grading degree (`deg f_i = 2`) if homogeneous; zero has no degree.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let first = self.terms.first()?.0.total();
        if self.terms.iter().all(|(m, _)| m.total() == first) {
            Some(2 * first as i32)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Part of grading degree `grade` (odd grades are always zero).
    pub fn homogeneous_part(&self, grade: i32) -> MultiPoly {
        if grade < 0 || grade % 2 != 0 {
            return MultiPoly::zero();
        }
        let d = (grade / 2) as u32;
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total() == d)
                .cloned()
                .collect(),
        }
    }

    /// Highest variable index occurring, or 0.
    pub fn top_var(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.top_var()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Coeff) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        // Multiplying by a monomial preserves the graded-lex order.
        MultiPoly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Rename variables: `f_k ↦ f_{map(k)}`.
    pub fn relabel_vars(&self, map: impl Fn(usize) -> usize) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut out = Monomial::one();
            for k in 1..=MAX_VARS {
                let e = m.exp(k);
                if e > 0 {
                    let t = map(k);
                    out = out.with_exp(t, out.exp(t) + e);
                }
            }
            (out, c.clone())
        }))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division by `f_k`; fails if some term is not divisible.
    pub fn div_var(&self, k: usize) -> Result<MultiPoly, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            match m.div_var(k) {
                Some(q) => terms.push((q, c.clone())),
                None => return Err(PolyError::InexactDivision { var: k }),
            }
        }
        Ok(MultiPoly { terms })
    }

    /// Substitute the given rational values for `f_1, f_2, ...`; missing values count as 0.
    pub fn evaluate(&self, point: &[Coeff]) -> Coeff {
        let mut total = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for k in 1..=MAX_VARS {
                let e = m.exp(k);
                if e == 0 {
                    continue;
                }
                match point.get(k - 1) {
                    Some(x) => t *= num_traits::pow(x.clone(), e as usize),
                    None => {
                        t = Coeff::zero();
                        break;
                    }
                }
            }
            total += t;
        }
        total
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for (m, c) in &b[j..] {
            out.push((*m, if negate { -c } else { c.clone() }));
        }
        MultiPoly { terms: out }
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing graded-lex order, e.g. `f1^2*f2 - 1/2*f2 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", a, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for MultiPoly {
    type Err = PolyError;

    /// Parse the textual format produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| PolyError::Parse(format!("{msg} in {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        // Split into signed terms.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && compact[..i].ends_with('^')) {
                if !cur.is_empty() {
                    pieces.push((neg, std::mem::take(&mut cur)));
                } else if i != 0 {
                    return Err(bad("dangling sign"));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(bad("dangling sign"));
        }
        pieces.push((neg, cur));

        let mut terms = Vec::new();
        for (neg, body) in pieces {
            let mut c = Coeff::one();
            let mut m = Monomial::one();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('f') {
                    let (idx, e) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u8>().map_err(|_| bad("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let k: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                    if k == 0 || k > MAX_VARS {
                        return Err(PolyError::TooManyVariables(k));
                    }
                    m = m.mul(&Monomial::var(k).with_exp(k, e));
                } else {
                    let q = match factor.split_once('/') {
                        Some((p, q)) => {
                            let p: BigInt = p.parse().map_err(|_| bad("bad numerator"))?;
                            let q: BigInt = q.parse().map_err(|_| bad("bad denominator"))?;
                            if q.is_zero() {
                                return Err(bad("zero denominator"));
                            }
                            BigRational::new(p, q)
                        }
                        None => BigRational::from_integer(
                            factor.parse::<BigInt>().map_err(|_| bad("bad coefficient"))?,
                        ),
                    };
                    c *= q;
                }
            }
            terms.push((m, if neg { -c } else { c }));
        }
        Ok(MultiPoly::from_terms(terms))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.merge(rhs, true)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.merge(&rhs, false)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self.merge(&rhs, true)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.merge(rhs, false);
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        if rhs.is_zero() {
            return;
        }
        *self = self.merge(rhs, true);
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m, c);
        }
        let mut acc: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                    }
                }
            }
        }
        MultiPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn grlex_order_prefers_degree_then_f1() {
        let f1 = Monomial::var(1);
        let f2 = Monomial::var(2);
        assert!(f1 > f2);
        assert!(f2.mul(&f2) > f1);
        assert!(f1.mul(&f2) > f2.mul(&f2));
    }

    #[test]
    fn display_parse_roundtrip() {
        let a = p("f1^2*f2 - 1/2*f2 + 3");
        assert_eq!(a.to_string(), "f1^2*f2 - 1/2*f2 + 3");
        assert_eq!(p(&a.to_string()), a);
        assert_eq!(p("-f1 + f1").to_string(), "0");
        assert_eq!(p("2*f1*f1"), p("2*f1^2"));
    }

    #[test]
    fn arithmetic_basics() {
        let a = p("f1 + f2");
        let b = p("f1 - f2");
        assert_eq!(&a * &b, p("f1^2 - f2^2"));
        assert_eq!(&a - &a, MultiPoly::zero());
        assert_eq!(a.pow(2), p("f1^2 + 2*f1*f2 + f2^2"));
        assert_eq!(p("f1*f2 + f1").div_var(1).unwrap(), p("f2 + 1"));
        assert!(p("f1 + f2").div_var(1).is_err());
    }

    #[test]
    fn homogeneity() {
        assert_eq!(p("f1*f2 + f3^2").homogeneous_degree(), Some(4));
        assert_eq!(p("f1 + 1").homogeneous_degree(), None);
        assert_eq!(p("f1 + 1").homogeneous_part(2), p("f1"));
        assert_eq!(p("7").homogeneous_degree(), Some(0));
    }

    #[test]
    fn monomials_of_degree_are_counted() {
        assert_eq!(Monomial::all_of_degree(&[1, 2, 3], 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(&[1], 4).len(), 1);
        assert_eq!(Monomial::all_of_degree(&[], 0).len(), 1);
        assert_eq!(Monomial::all_of_degree(&[], 1).len(), 0);
    }

    #[test]
    fn evaluation() {
        let a = p("f1^2*f2 - 1/2*f2 + 3");
        assert_eq!(a.evaluate(&[coeff(2), coeff(4)]), coeff(17));
    }
}
