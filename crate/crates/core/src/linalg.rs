//! Rank and nullspace of rational matrices.
//!
//! * [`rank_exact`]: fraction-free (Bareiss) elimination over the integers
//!   after clearing row denominators, plus an exact rational nullspace.
//! * [`rank_mod_p`]: rank of the same integer matrix modulo a prime. It never
//!   exceeds the rational rank, so a full-rank result is itself exact.
//! * [`rank_float`]: SVD rank with a relative tolerance.
//!
//! The [`RankBackend`] trait puts these behind names selectable at runtime.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, to_f64, Q};

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Q]) -> Vec<Q> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Q::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Each row scaled to coprime integers.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let d = common_denominator(row);
                let ints: Vec<BigInt> = row
                    .iter()
                    .map(|x| (x * Q::from_integer(d.clone())).to_integer())
                    .collect();
                let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                if g.is_zero() || g.is_one() {
                    ints
                } else {
                    ints.into_iter().map(|x| x / &g).collect()
                }
            })
            .collect()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| to_f64(self.get(r, c)))
    }
}

/// Row echelon form from fraction-free elimination.
struct Echelon {
    /// The first `rank` rows are in echelon form.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let n_rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n_rows {
            break;
        }
        // smallest nonzero entry keeps intermediate growth down
        let Some(p) = (r..n_rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let mut v = pivot * &row[j];
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

/// Rank and a basis of the right nullspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRank {
    pub rank: usize,
    /// Basis vectors scaled to coprime integers, one per free column in
    /// increasing column order.
    pub nullspace: Vec<Vec<Q>>,
}

pub fn rank_exact(m: &QMatrix) -> ExactRank {
    let ech = bareiss(m.integer_rows(), m.cols());
    let rank = ech.pivots.len();
    let nullspace = nullspace_from_echelon(&ech, m.cols());
    ExactRank { rank, nullspace }
}

/// Exact rank without the nullspace.
pub fn rank_bareiss(m: &QMatrix) -> usize {
    bareiss(m.integer_rows(), m.cols()).pivots.len()
}

fn nullspace_from_echelon(ech: &Echelon, cols: usize) -> Vec<Vec<Q>> {
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Q::zero(); cols];
        x[free] = Q::one();
        for (t, &p) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[t];
            let mut s = Q::zero();
            for j in p + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s += Q::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = -s / Q::from_integer(row[p].clone());
        }
        basis.push(primitive(x));
    }
    basis
}

/// Scales a rational vector to coprime integers.
fn primitive(x: Vec<Q>) -> Vec<Q> {
    let d = common_denominator(&x);
    let ints: Vec<BigInt> = x
        .iter()
        .map(|v| (v * Q::from_integer(d.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return x;
    }
    ints.into_iter().map(|v| Q::from_integer(v / &g)).collect()
}

/// Primes below `2^62` used for modular rank.
pub const PRIMES: [u64; 3] = [
    4_611_686_018_427_387_847,
    4_611_686_018_427_387_817,
    4_611_686_018_427_387_787,
];

fn mod_p(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().expect("residue fits");
    r.rem_euclid(p as i128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Rank of an integer matrix over `GF(p)`; a lower bound for its rational rank.
pub fn rank_mod_p(rows: &[Vec<BigInt>], cols: usize, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| mod_p(x, p)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pr = &top[rank];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..cols {
                if pr[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, pr[j], p)) % p;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Numerical rank: singular values above `tol`, by default
/// `max(rows, cols) * eps * sigma_max`.
pub fn rank_float(m: &DMatrix<f64>, tol: Option<f64>) -> Result<usize> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if m.is_empty() {
        return Ok(0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let tol = tol.unwrap_or(m.nrows().max(m.ncols()) as f64 * f64::EPSILON * smax);
    Ok(sv.iter().filter(|&&s| s > tol).count())
}

/// Result of a rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    /// True when `rank` is the exact rational rank.
    pub exact: bool,
}

/// A rank algorithm selectable by name.
pub trait RankBackend: Send + Sync {
    fn name(&self) -> &'static str;
    fn rank(&self, m: &QMatrix) -> Result<RankOutcome>;
}

/// Plain Bareiss elimination.
pub struct BareissBackend;

impl RankBackend for BareissBackend {
    fn name(&self) -> &'static str {
        "bareiss"
    }
    fn rank(&self, m: &QMatrix) -> Result<RankOutcome> {
        Ok(RankOutcome {
            rank: rank_bareiss(m),
            exact: true,
        })
    }
}

/// Modular rank first; falls back to Bareiss unless a prime already shows
/// full rank.
pub struct ExactBackend;

impl RankBackend for ExactBackend {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn rank(&self, m: &QMatrix) -> Result<RankOutcome> {
        let full = m.rows().min(m.cols());
        let ints = m.integer_rows();
        if PRIMES
            .iter()
            .any(|&p| rank_mod_p(&ints, m.cols(), p) == full)
        {
            return Ok(RankOutcome {
                rank: full,
                exact: true,
            });
        }
        Ok(RankOutcome {
            rank: bareiss(ints, m.cols()).pivots.len(),
            exact: true,
        })
    }
}

/// SVD of the matrix rounded to `f64`.
pub struct FloatBackend {
    pub tol: Option<f64>,
}

impl RankBackend for FloatBackend {
    fn name(&self) -> &'static str {
        "float"
    }
    fn rank(&self, m: &QMatrix) -> Result<RankOutcome> {
        Ok(RankOutcome {
            rank: rank_float(&m.to_f64(), self.tol)?,
            exact: false,
        })
    }
}

pub struct RankRegistry {
    backends: BTreeMap<&'static str, Box<dyn RankBackend>>,
}

impl Default for RankRegistry {
    fn default() -> Self {
        let mut r = Self {
            backends: BTreeMap::new(),
        };
        r.register(Box::new(ExactBackend));
        r.register(Box::new(BareissBackend));
        r.register(Box::new(FloatBackend { tol: None }));
        r
    }
}

impl RankRegistry {
    pub fn register(&mut self, backend: Box<dyn RankBackend>) {
        self.backends.insert(backend.name(), backend);
    }

    pub fn get(&self, name: &str) -> Option<&dyn RankBackend> {
        self.backends.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.backends.keys().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn zero_matrix() {
        let z = QMatrix::zeros(3, 6);
        let r = rank_exact(&z);
        assert_eq!(r.rank, 0);
        assert_eq!(r.nullspace.len(), 6);
    }

    #[test]
    fn identity_and_duplicate_rows() {
        let id = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rank_exact(&id).rank, 3);
        assert_eq!(rank_float(&id.to_f64(), None).unwrap(), 3);
        let dup = m(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(rank_exact(&dup).rank, 2);
        assert_eq!(rank_float(&dup.to_f64(), None).unwrap(), 2);
    }

    #[test]
    fn skipped_columns_stay_exact() {
        // column 1 has no pivot; later divisions must still be exact
        let a = m(&[&[2, 4, 1, 3], &[4, 8, 5, 1], &[6, 12, 3, 7], &[1, 2, 0, 5]]);
        let r = rank_exact(&a);
        assert_eq!(r.rank, 3);
        for v in &r.nullspace {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rational_entries() {
        let a = QMatrix::from_rows(vec![
            vec![q_frac(1, 2), q_frac(1, 3)],
            vec![q_frac(3, 4), q_frac(1, 2)],
        ]);
        assert_eq!(rank_exact(&a).rank, 1);
        assert_eq!(rank_exact(&a).nullspace, vec![vec![q(-2), q(3)]]);
    }

    #[test]
    fn non_finite_rejected() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, f64::NAN]);
        assert_eq!(rank_float(&a, None), Err(Error::NonFinite));
    }

    #[test]
    fn registry_names() {
        let reg = RankRegistry::default();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            vec!["bareiss", "exact", "float"]
        );
    }

    /// Rank by brute-force over minors for tiny matrices: the largest `r` with
    /// a nonzero `r x r` minor, determinants by Leibniz expansion.
    fn rank_by_minors(a: &[Vec<i64>]) -> usize {
        fn det(mat: &[Vec<i128>]) -> i128 {
            let n = mat.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = mat[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != j)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * mat[0][j] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|s| s.count_ones() as usize == k)
                .map(|s| (0..n).filter(|i| s & (1 << i) != 0).collect())
                .collect()
        }
        let (r, c) = (a.len(), a[0].len());
        for k in (1..=r.min(c)).rev() {
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<i128>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| a[i][j] as i128).collect())
                        .collect();
                    if det(&sub) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    proptest! {
        #[test]
        fn bareiss_matches_minor_rank(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-3i64..=3, 16),
        ) {
            let a: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let qm = QMatrix::from_rows(a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
            let expected = rank_by_minors(&a);
            let exact = rank_exact(&qm);
            prop_assert_eq!(exact.rank, expected);
            prop_assert_eq!(exact.nullspace.len(), cols - expected);
            for v in &exact.nullspace {
                prop_assert!(qm.mul_vec(v).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(ExactBackend.rank(&qm).unwrap().rank, expected);
            prop_assert_eq!(rank_float(&qm.to_f64(), None).unwrap(), expected);
        }
    }
}
