//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly_core::Coeff;

/// A sparse vector as sorted `(column, value)` pairs without zeros.
pub type SparseRow = Vec<(usize, Coeff)>;

/// Build a sparse row from possibly unsorted, possibly repeated entries.
pub fn sparse_from(entries: impl IntoIterator<Item = (usize, Coeff)>) -> SparseRow {
    let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
    for (c, v) in entries {
        *acc.entry(c).or_insert_with(Coeff::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// `row - factor * other`.
fn axpy(row: &SparseRow, factor: &Coeff, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, -(factor * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form built incrementally; every stored pivot row has leading entry 1.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the stored pivots until its leading column is new.
    fn reduce_leading(&self, mut row: SparseRow) -> SparseRow {
        while let Some((c, v)) = row.first().cloned() {
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => break,
            }
        }
        row
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce_leading(row);
        match row.first().cloned() {
            None => false,
            Some((c, v)) => {
                let inv = Coeff::one() / v;
                let row = row.into_iter().map(|(k, x)| (k, x * &inv)).collect();
                self.pivots.insert(c, row);
                true
            }
        }
    }

    /// Whether `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce_leading(row).is_empty()
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Back-substitute to the reduced echelon form.
    fn reduced(&self) -> BTreeMap<usize, SparseRow> {
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            // Clear every later pivot column; `done` rows are already fully reduced.
            let mut k = 1;
            while k < r.len() {
                let (col, v) = r[k].clone();
                if let Some(p) = done.get(&col) {
                    r = axpy(&r, &v, p);
                    k = r.iter().position(|(cc, _)| *cc > col).unwrap_or(r.len());
                } else {
                    k += 1;
                }
            }
            done.insert(c, r);
        }
        done
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solve `A x = b` for `x` with `ncols` unknowns. Each equation is a row of `A` together
/// with its right-hand side. Free unknowns are set to zero. `None` if inconsistent.
pub fn solve(ncols: usize, equations: impl IntoIterator<Item = (SparseRow, Coeff)>) -> Option<Vec<Coeff>> {
    let mut e = Echelon::new();
    for (mut row, rhs) in equations {
        if !rhs.is_zero() {
            row.push((ncols, rhs));
        }
        e.insert(row);
    }
    if e.pivots.contains_key(&ncols) {
        return None;
    }
    let reduced = e.reduced();
    let mut x = vec![Coeff::zero(); ncols];
    for (c, row) in reduced {
        if let Some((last, v)) = row.last() {
            if *last == ncols {
                x[c] = v.clone();
            }
        }
    }
    Some(x)
}

/// A basis of the nullspace of the matrix whose rows are given, as dense vectors.
pub fn nullspace(ncols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Vec<Vec<Coeff>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let reduced = e.reduced();
    let free: Vec<usize> = (0..ncols).filter(|c| !reduced.contains_key(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Coeff::zero(); ncols];
            v[f] = Coeff::one();
            for (&c, row) in &reduced {
                for (k, x) in row {
                    if *k == f {
                        v[c] = -x.clone();
                    }
                }
            }
            v
        })
        .collect()
}

/// Rank of a dense rational matrix.
pub fn dense_rank(rows: &[Vec<Coeff>]) -> usize {
    rank(rows.iter().map(|r| {
        r.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.clone()))
            .collect::<SparseRow>()
    }))
}

/// The prime `2^61 - 1` used for modular ranks.
pub const MOD_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MOD_PRIME - 2)
}

/// Reduce a rational modulo [`MOD_PRIME`]; `None` when the denominator vanishes there.
pub fn reduce_mod(c: &Coeff) -> Option<u64> {
    use num_bigint::BigInt;
    let p = BigInt::from(MOD_PRIME);
    let residue = |x: &BigInt| -> u64 {
        let r = ((x % &p) + &p) % &p;
        u64::try_from(r).expect("residue fits in u64")
    };
    let den = residue(c.denom());
    if den == 0 {
        return None;
    }
    Some(mul_mod(residue(c.numer()), inv_mod(den)))
}

/// Rank over `F_p` of the reductions of the rows, or `None` if some entry has a
/// denominator divisible by `p`. It never exceeds the rank over `Q`.
pub fn rank_mod_p(rows: impl IntoIterator<Item = SparseRow>) -> Option<usize> {
    let rows: Vec<SparseRow> = rows.into_iter().collect();
    echelon_mod_p(&rows).map(|p| p.len())
}

/// Modular echelon form of the rows, keyed by leading column, each with leading entry 1.
fn echelon_mod_p(rows: &[SparseRow]) -> Option<BTreeMap<usize, Vec<(usize, u64)>>> {
    let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for row in rows {
        let mut r: Vec<(usize, u64)> = Vec::with_capacity(row.len());
        for (k, c) in row {
            let v = reduce_mod(c)?;
            if v != 0 {
                r.push((*k, v));
            }
        }
        while let Some(&(c, v)) = r.first() {
            let Some(p) = pivots.get(&c) else { break };
            r = axpy_mod(&r, v, p);
        }
        if let Some(&(c, v)) = r.first() {
            let inv = inv_mod(v);
            pivots.insert(c, r.into_iter().map(|(k, x)| (k, mul_mod(x, inv))).collect());
        }
    }
    Some(pivots)
}

/// The rational `a/b` with `|a|, b < sqrt(p/2)` congruent to `x`, if there is one.
fn reconstruct(x: u64) -> Option<Coeff> {
    let bound: i128 = 1 << 30;
    let (mut r0, mut r1) = (MOD_PRIME as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Coeff::new(num.into(), den.into()))
}

/// Nullity of the rows over `Q`, computed modulo [`MOD_PRIME`] and certified. The modular
/// nullity bounds the rational one from above; a kernel basis of that size is lifted by
/// rational reconstruction and checked exactly against every row. When the lift fails the
/// rank is recomputed over `Q`.
pub fn nullity(ncols: usize, rows: Vec<SparseRow>) -> usize {
    certified_kernel(ncols, &rows).map(|k| k.len()).unwrap_or_else(|| ncols - rank(rows))
}

/// A basis of the kernel over `Q`, taken from the certified modular computation when it
/// lifts and from exact elimination otherwise.
pub fn kernel_basis(ncols: usize, rows: Vec<SparseRow>) -> Vec<Vec<Coeff>> {
    match certified_kernel(ncols, &rows) {
        Some(kernel) => kernel
            .into_iter()
            .map(|v| {
                let mut dense = vec![Coeff::zero(); ncols];
                for (k, c) in v {
                    dense[k] = c;
                }
                dense
            })
            .collect(),
        None => nullspace(ncols, rows),
    }
}

fn certified_kernel(ncols: usize, rows: &[SparseRow]) -> Option<Vec<Vec<(usize, Coeff)>>> {
    let pivots = echelon_mod_p(rows)?;
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains_key(c)).collect();
    let mut kernel = Vec::with_capacity(free.len());
    let mut x = vec![0u64; ncols];
    for &f in &free {
        x.iter_mut().for_each(|v| *v = 0);
        x[f] = 1;
        for (&c, row) in pivots.iter().rev() {
            let mut acc = 0u64;
            for &(k, v) in &row[1..] {
                if x[k] != 0 {
                    acc = (acc + mul_mod(v, x[k])) % MOD_PRIME;
                }
            }
            x[c] = if acc == 0 { 0 } else { MOD_PRIME - acc };
        }
        let mut lifted = Vec::new();
        for (k, &v) in x.iter().enumerate() {
            if v != 0 {
                lifted.push((k, reconstruct(v)?));
            }
        }
        kernel.push(lifted);
    }
    let int_rows: Option<Vec<Vec<(usize, i128)>>> = rows.iter().map(|r| integer_vector(r)).collect();
    let mut dense = vec![Coeff::zero(); ncols];
    let mut dense_int = vec![0i128; ncols];
    for vec in &kernel {
        let killed = match (&int_rows, integer_vector(vec)) {
            (Some(int_rows), Some(iv)) => {
                for &(k, v) in &iv {
                    dense_int[k] = v;
                }
                let killed = int_rows.iter().zip(rows).all(|(r, exact)| {
                    r.iter()
                        .try_fold(0i128, |acc, &(k, v)| v.checked_mul(dense_int[k]).and_then(|p| acc.checked_add(p)))
                        .map_or_else(|| exact_dot(exact, vec), |d| d == 0)
                });
                for &(k, _) in &iv {
                    dense_int[k] = 0;
                }
                killed
            }
            _ => {
                for (k, v) in vec {
                    dense[*k] = v.clone();
                }
                let killed = rows.iter().all(|r| r.iter().map(|(k, v)| v * &dense[*k]).sum::<Coeff>().is_zero());
                for (k, _) in vec {
                    dense[*k] = Coeff::zero();
                }
                killed
            }
        };
        if !killed {
            return None;
        }
    }
    Some(kernel)
}

/// A positive multiple of the vector with small integer entries, if the lcm of the
/// denominators and the scaled entries fit.
fn integer_vector(v: &[(usize, Coeff)]) -> Option<Vec<(usize, i128)>> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let mut lcm: i128 = 1;
    for (_, c) in v {
        let d = c.denom().to_i128()?;
        lcm = lcm.lcm(&d);
        if lcm > 1 << 62 {
            return None;
        }
    }
    v.iter()
        .map(|(k, c)| {
            let n = c.numer().to_i128()?.checked_mul(lcm / c.denom().to_i128()?)?;
            (n.abs() < 1 << 62).then_some((*k, n))
        })
        .collect()
}

/// Exact check of one row against one vector, used when the integer dot product overflows.
fn exact_dot(row: &SparseRow, vec: &[(usize, Coeff)]) -> bool {
    let lookup: BTreeMap<usize, &Coeff> = vec.iter().map(|(k, v)| (*k, v)).collect();
    row.iter().filter_map(|(k, v)| lookup.get(k).map(|x| v * *x)).sum::<Coeff>().is_zero()
}

fn axpy_mod(row: &[(usize, u64)], factor: u64, other: &[(usize, u64)]) -> Vec<(usize, u64)> {
    let neg = |x: u64| if x == 0 { 0 } else { MOD_PRIME - x };
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        if j >= other.len() || (i < row.len() && row[i].0 < other[j].0) {
            out.push(row[i]);
            i += 1;
        } else if i >= row.len() || other[j].0 < row[i].0 {
            out.push((other[j].0, neg(mul_mod(factor, other[j].1))));
            j += 1;
        } else {
            let v = (row[i].1 + neg(mul_mod(factor, other[j].1))) % MOD_PRIME;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::{coeff, ratio};

    fn row(v: &[i64]) -> SparseRow {
        sparse_from(v.iter().enumerate().map(|(k, &x)| (k, coeff(x))))
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(vec![row(&[1, 2]), row(&[2, 4])]), 1);
        assert_eq!(rank(vec![row(&[1, 2, 3]), row(&[0, 1, 1]), row(&[1, 3, 4])]), 2);
        assert_eq!(rank(Vec::<SparseRow>::new()), 0);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        // x + y = 3, x - y = 1
        let x = solve(2, vec![(row(&[1, 1]), coeff(3)), (row(&[1, -1]), coeff(1))]).unwrap();
        assert_eq!(x, vec![coeff(2), coeff(1)]);
        assert!(solve(1, vec![(row(&[1]), coeff(1)), (row(&[2]), coeff(1))]).is_none());
        let x = solve(2, vec![(row(&[2, 0]), coeff(1))]).unwrap();
        assert_eq!(x, vec![ratio(1, 2), coeff(0)]);
    }

    #[test]
    fn nullspace_vectors_are_killed() {
        let rows = vec![row(&[1, 2, 3]), row(&[0, 1, 1])];
        let ns = nullspace(3, rows.clone());
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: Coeff = r.iter().map(|(k, v)| v * &ns[0][*k]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn modular_rank_matches_rational_rank() {
        let rows = vec![row(&[1, 2, 3]), row(&[0, 1, 1]), row(&[1, 3, 4]), row(&[2, 0, 7])];
        assert_eq!(rank_mod_p(rows.clone()), Some(rank(rows)));
        assert_eq!(reduce_mod(&ratio(1, 2)).map(|h| (h * 2) % MOD_PRIME), Some(1));
        assert_eq!(reduce_mod(&coeff(-1)), Some(MOD_PRIME - 1));
    }

    #[test]
    fn certified_nullity_matches_rational() {
        let rows = vec![row(&[3, 2, 3, 0]), row(&[0, 1, 1, 5]), row(&[3, 3, 4, 5])];
        assert_eq!(nullity(4, rows.clone()), 4 - rank(rows.clone()));
        assert_eq!(reconstruct(reduce_mod(&ratio(-7, 12)).unwrap()), Some(ratio(-7, 12)));
        // Entries beyond the reconstruction bound fall back to exact elimination.
        let big = vec![sparse_from([(0, coeff(1)), (1, coeff(1 << 40))])];
        assert_eq!(nullity(2, big), 1);
        let kernel = kernel_basis(4, rows.clone());
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            for r in &rows {
                assert!(r.iter().map(|(k, c)| c * &v[*k]).sum::<Coeff>().is_zero());
            }
        }
    }
}
