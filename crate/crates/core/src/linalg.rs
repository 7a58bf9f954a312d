//! Exact ranks over ℚ and certified lower bounds from prime fields.
//!
//! Small systems use fraction-free (Bareiss) elimination over the integers
//! or sparse elimination over ℚ. Larger ones are reduced modulo primes; the
//! rank of an integer matrix modulo any prime never exceeds its rank over
//! ℚ, so those results are lower bounds and are flagged as not exact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::{common_denominator, Scalar};

/// Primes used for modular ranks.
pub const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_294_967_291];

/// Work budget (`min(r,c)² · max(r,c)` scaled by entry size) for exact
/// dense elimination.
pub const EXACT_DENSE_WORK: u128 = 8_000_000;

/// Row count up to which sparse systems are eliminated exactly over ℚ.
pub const EXACT_SPARSE_ROWS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    /// `false` when `rank` is a modular lower bound.
    pub exact: bool,
}

/// Fraction-free Gaussian elimination; pivots are the first nonzero entry
/// in column order.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = pivot_row[col].clone();
        for row in bottom.iter_mut() {
            let f = row[col].clone();
            for j in col..ncols {
                let v = &p * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}

/// Rows scaled by their own common denominators.
pub fn integer_rows(rows: &[Vec<Scalar>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let den = common_denominator(row);
            row.iter().map(|v| v.numer() * (&den / v.denom())).collect()
        })
        .collect()
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_big(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}

fn reduce_i64(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

/// Rank of an integer matrix over `F_p`.
pub fn modular_rank(rows: &[Vec<BigInt>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|v| reduce_big(v, p)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][col], p);
        for x in a[rank][col..ncols].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for j in col..ncols {
                row[j] = sub_mod(row[j], mul_mod(f, pivot_row[j], p), p);
            }
        }
        rank += 1;
    }
    rank
}

fn dense_work(rows: &[Vec<BigInt>]) -> u128 {
    let r = rows.len() as u128;
    let c = rows.first().map_or(0, Vec::len) as u128;
    let bits = rows.iter().flatten().map(|v| v.bits()).max().unwrap_or(0) as u128;
    r.min(c).pow(2) * r.max(c) * (bits / 64 + 1)
}

/// Exact Bareiss when the work estimate is small, otherwise the larger of
/// the modular ranks.
pub fn integer_rank(rows: Vec<Vec<BigInt>>) -> RankResult {
    if dense_work(&rows) <= EXACT_DENSE_WORK {
        RankResult {
            rank: bareiss_rank(rows),
            exact: true,
        }
    } else {
        RankResult {
            rank: PRIMES
                .iter()
                .map(|&p| modular_rank(&rows, p))
                .max()
                .unwrap_or(0),
            exact: false,
        }
    }
}

pub fn rational_rank(rows: &[Vec<Scalar>]) -> RankResult {
    integer_rank(integer_rows(rows))
}

/// Sparse integer row: `(column, coefficient)` pairs, any order, no duplicates required.
pub type SparseRow = Vec<(usize, i64)>;

trait Field {
    type E: Clone;
    fn lift(&self, v: i64) -> Self::E;
    fn is_zero(&self, v: &Self::E) -> bool;
    fn inv(&self, v: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - f·b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
}

struct Rationals;

impl Field for Rationals {
    type E = Scalar;
    fn lift(&self, v: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, v: &Scalar) -> bool {
        v.is_zero()
    }
    fn inv(&self, v: &Scalar) -> Scalar {
        v.recip()
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn sub_mul(&self, a: &Scalar, f: &Scalar, b: &Scalar) -> Scalar {
        a - f * b
    }
    fn neg_mul(&self, f: &Scalar, b: &Scalar) -> Scalar {
        -(f * b)
    }
}

struct PrimeField(u64);

impl Field for PrimeField {
    type E = u64;
    fn lift(&self, v: i64) -> u64 {
        reduce_i64(v, self.0)
    }
    fn is_zero(&self, v: &u64) -> bool {
        *v == 0
    }
    fn inv(&self, v: &u64) -> u64 {
        inv_mod(*v, self.0)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        sub_mod(*a, mul_mod(*f, *b, self.0), self.0)
    }
    fn neg_mul(&self, f: &u64, b: &u64) -> u64 {
        sub_mod(0, mul_mod(*f, *b, self.0), self.0)
    }
}

/// Incremental echelon form: each stored row is monic at its leading column.
fn sparse_rank_in<F: Field>(field: &F, rows: &[SparseRow]) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, F::E)>> = HashMap::new();
    for raw in rows {
        let mut merged: std::collections::BTreeMap<usize, i64> = Default::default();
        for &(c, v) in raw {
            *merged.entry(c).or_default() += v;
        }
        let mut row: Vec<(usize, F::E)> = merged
            .into_iter()
            .map(|(c, v)| (c, field.lift(v)))
            .filter(|(_, v)| !field.is_zero(v))
            .collect();
        while let Some((lead, _)) = row.first() {
            let Some(pivot) = pivots.get(lead) else {
                break;
            };
            let f = row[0].1.clone();
            row = sparse_axpy(field, &row, &f, pivot);
        }
        if let Some((lead, v)) = row.first().cloned() {
            let inv = field.inv(&v);
            let monic = row.iter().map(|(c, x)| (*c, field.mul(x, &inv))).collect();
            pivots.insert(lead, monic);
        }
    }
    pivots.len()
}

/// `row - f · pivot`, both sorted by column.
fn sparse_axpy<F: Field>(
    field: &F,
    row: &[(usize, F::E)],
    f: &F::E,
    pivot: &[(usize, F::E)],
) -> Vec<(usize, F::E)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_pivot {
            out.push((pivot[j].0, field.neg_mul(f, &pivot[j].1)));
            j += 1;
        } else {
            let v = field.sub_mul(&row[i].1, f, &pivot[j].1);
            if !field.is_zero(&v) {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank over ℚ of sparse integer rows.
pub fn sparse_rank_exact(rows: &[SparseRow]) -> usize {
    sparse_rank_in(&Rationals, rows)
}

/// Rank over `F_p` of sparse integer rows.
pub fn sparse_rank_modular(rows: &[SparseRow], p: u64) -> usize {
    sparse_rank_in(&PrimeField(p), rows)
}

/// Exact for at most [`EXACT_SPARSE_ROWS`] rows, modular lower bound beyond.
pub fn sparse_rank(rows: &[SparseRow]) -> RankResult {
    if rows.len() <= EXACT_SPARSE_ROWS {
        RankResult {
            rank: sparse_rank_exact(rows),
            exact: true,
        }
    } else {
        RankResult {
            rank: PRIMES
                .iter()
                .map(|&p| sparse_rank_modular(rows, p))
                .max()
                .unwrap_or(0),
            exact: false,
        }
    }
}

/// Largest absolute value among the entries, as a size diagnostic.
pub fn max_abs(rows: &[Vec<BigInt>]) -> BigInt {
    rows.iter()
        .flatten()
        .map(|v| v.abs())
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    /// Rank over ℚ via plain rational Gauss elimination.
    fn rational_oracle(rows: &[Vec<BigInt>]) -> usize {
        let mut a: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|v| Scalar::from_integer(v.clone())).collect())
            .collect();
        let ncols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            let Some(piv) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, piv);
            let pivot_row = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let f = &row[col] / &pivot_row[col];
                    for (x, p) in row.iter_mut().zip(&pivot_row).take(ncols) {
                        *x -= &f * p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_ranks() {
        assert_eq!(bareiss_rank(big(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(big(&[&[0, 1, 2], &[0, 0, 3], &[0, 2, 7]])), 2);
        assert_eq!(bareiss_rank(Vec::new()), 0);
        assert_eq!(modular_rank(&big(&[&[2, 0], &[0, 2]]), 2), 0);
        assert_eq!(modular_rank(&big(&[&[2, 0], &[0, 2]]), PRIMES[0]), 2);
        let sparse = vec![vec![(0, 1), (5, 2)], vec![(5, 4), (0, 2)], vec![(3, 1)]];
        assert_eq!(sparse_rank_exact(&sparse), 2);
        assert_eq!(sparse_rank_modular(&sparse, PRIMES[1]), 2);
    }

    proptest! {
        #[test]
        fn bareiss_matches_rational_oracle(
            rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..7)
        ) {
            let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            let expected = rational_oracle(&m);
            prop_assert_eq!(bareiss_rank(m.clone()), expected);
            prop_assert!(modular_rank(&m, PRIMES[1]) <= expected);
            prop_assert_eq!(modular_rank(&m, PRIMES[0]), expected);
            let sparse: Vec<SparseRow> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, &v)| (c, v)).collect())
                .collect();
            prop_assert_eq!(sparse_rank_exact(&sparse), expected);
            prop_assert_eq!(sparse_rank_modular(&sparse, PRIMES[0]), expected);
        }
    }
}
