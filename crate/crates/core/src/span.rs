//! Brute-force oracles: centralizer dimensions on `V^{⊗m}`, the dimension
//! of the invariant polynomials of a given multidegree, and the span of the
//! trace monomials in that multidegree.
//!
//! Group invariance is imposed infinitesimally. Since every `GL_{d_i}` is
//! connected, a polynomial (or operator) is invariant exactly when the Lie
//! algebra `⊕ gl(d_i)` annihilates it. The diagonal part of the Lie algebra
//! acts by torus weights, so only weight-zero unknowns survive; the
//! off-diagonal generators `E_ab` (`a ≠ b`) give the remaining equations.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{integer_rank, integer_rows, sparse_rank, SparseRow};
use crate::matrix::{RatMatrix, Scalar};
use crate::monomial::{enumerate_generators, EnumerationFilter, GirthBound};
use crate::perm::{all_permutations, DimensionVector, MultiDegree, Permutation};
use crate::plan::{evaluate_with_plan, plan_contraction};
use crate::tensor::{EndoTuple, InputSampler, LocalGroupElement};

/// Column limit for the dense centralizer computations, `(dim V)^{2m}`.
pub const REP_COLUMN_LIMIT: u128 = 100_000;
/// Limit on weight-zero monomials in the invariant-space system.
pub const INVARIANT_MONOMIAL_LIMIT: u128 = 10_000;
/// Limit on raw monomials enumerated per label before weight filtering.
pub const RAW_MONOMIAL_LIMIT: u128 = 5_000_000;
/// Limit on candidate trace monomials in a span computation.
pub const CANDIDATE_LIMIT: u128 = 5_000;

/// How a reported dimension relates to the true one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Exact,
    /// The true value is at least this (rank modulo a prime, or a rank at
    /// finitely many sample points).
    LowerBound,
    /// The true value is at most this (a nullity computed modulo a prime).
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension {
    pub value: usize,
    pub certainty: Certainty,
}

impl Dimension {
    fn exact(value: usize) -> Self {
        Dimension {
            value,
            certainty: Certainty::Exact,
        }
    }
}

/// A matrix acting on `V^{⊗m}`.
///
/// Basis layout: tensor slot `(i, j)` (wire `i`, copy `j`) holds a digit in
/// `[d_i]`; slots are ordered wire-major then copy-major and flattened
/// row-major with slot `(1, 1)` outermost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrix {
    pub dims: DimensionVector,
    pub m: usize,
    pub matrix: RatMatrix,
}

impl RepMatrix {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn compose(&self, other: &RepMatrix) -> Result<RepMatrix> {
        if self.dims != other.dims || self.m != other.m {
            return Err(Error::DimensionMismatch(
                "representations of different spaces".into(),
            ));
        }
        Ok(RepMatrix {
            dims: self.dims.clone(),
            m: self.m,
            matrix: self.matrix.matmul(&other.matrix)?,
        })
    }
}

fn slot_dims(d: &DimensionVector, m: usize) -> Vec<usize> {
    d.dims()
        .iter()
        .flat_map(|&di| std::iter::repeat_n(di, m))
        .collect()
}

fn to_digits(mut flat: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for s in (0..radices.len()).rev() {
        out[s] = flat % radices[s];
        flat /= radices[s];
    }
    out
}

fn from_digits(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&x, &r)| acc * r + x)
}

fn rep_size(d: &DimensionVector, m: usize) -> Result<usize> {
    let size = (d.dim_v() as u128)
        .checked_pow(m as u32)
        .unwrap_or(u128::MAX);
    let cols = size.saturating_mul(size);
    if cols > REP_COLUMN_LIMIT {
        return Err(Error::GuardExceeded {
            what: "flattened operators on V^{⊗m}",
            size: cols,
            limit: REP_COLUMN_LIMIT,
            advice: "use smaller local dimensions or fewer tensor copies",
        });
    }
    Ok(size as usize)
}

/// Images of basis vectors under `ρ(σ)`: slot `(i, j)` receives the digit
/// previously at `(i, σ_i^{-1}(j))`.
fn rho_images(sigma: &[Permutation], d: &DimensionVector, m: usize) -> Vec<usize> {
    let radices = slot_dims(d, m);
    let size: usize = radices.iter().product();
    let inverses: Vec<Permutation> = sigma.iter().map(Permutation::inverse).collect();
    (0..size)
        .map(|b| {
            let digits = to_digits(b, &radices);
            let mut image = vec![0; digits.len()];
            for (i, inv) in inverses.iter().enumerate() {
                for j in 0..m {
                    image[i * m + j] = digits[i * m + inv.apply(j)];
                }
            }
            from_digits(&image, &radices)
        })
        .collect()
}

fn check_sigma(sigma: &[Permutation], d: &DimensionVector, m: usize) -> Result<()> {
    if sigma.len() != d.n() {
        return Err(Error::SizeMismatch {
            what: "permutations vs wires",
            expected: d.n(),
            found: sigma.len(),
        });
    }
    if let Some(bad) = sigma.iter().find(|s| s.len() != m) {
        return Err(Error::SizeMismatch {
            what: "permutation size vs tensor copies",
            expected: m,
            found: bad.len(),
        });
    }
    Ok(())
}

/// The permutation matrix of `ρ(σ_1, …, σ_n)` on `V^{⊗m}`.
pub fn rho_matrix(sigma: &[Permutation], d: &DimensionVector, m: usize) -> Result<RepMatrix> {
    check_sigma(sigma, d, m)?;
    let size = rep_size(d, m)?;
    let mut matrix = RatMatrix::zeros(size, size);
    for (b, image) in rho_images(sigma, d, m).into_iter().enumerate() {
        matrix.set(image, b, Scalar::one());
    }
    Ok(RepMatrix {
        dims: d.clone(),
        m,
        matrix,
    })
}

/// `μ(g) = ⊗_i g_i^{⊗m}` in the same basis layout.
pub fn mu_matrix(g: &LocalGroupElement, m: usize) -> Result<RepMatrix> {
    let d = g.dims()?;
    rep_size(&d, m)?;
    let mut matrix = RatMatrix::identity(1);
    for f in g.factors() {
        for _ in 0..m {
            matrix = matrix.kron(f);
        }
    }
    Ok(RepMatrix { dims: d, m, matrix })
}

fn all_sigma_tuples(n: usize, m: usize) -> Vec<Vec<Permutation>> {
    let perms: Vec<Permutation> = all_permutations(m)
        .into_iter()
        .map(Permutation::from_zero_based)
        .collect();
    let mut tuples: Vec<Vec<Permutation>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut next = t.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    tuples
}

/// Dimension of the span of `ρ(S_m^n)` inside `End(V^{⊗m})`.
pub fn span_dimension_rho(d: &DimensionVector, m: usize) -> Result<Dimension> {
    let size = rep_size(d, m)?;
    let rows: Vec<Vec<BigInt>> = all_sigma_tuples(d.n(), m)
        .par_iter()
        .map(|sigma| {
            let mut row = vec![BigInt::zero(); size * size];
            for (b, image) in rho_images(sigma, d, m).into_iter().enumerate() {
                row[image * size + b] = BigInt::one();
            }
            row
        })
        .collect();
    let r = integer_rank(rows);
    Ok(Dimension {
        value: r.rank,
        certainty: if r.exact {
            Certainty::Exact
        } else {
            Certainty::LowerBound
        },
    })
}

/// Per-wire digit occupation across the `m` copies.
fn occupation(digits: &[usize], d: &DimensionVector, m: usize) -> Vec<u8> {
    let mut w = Vec::with_capacity(d.dims().iter().sum());
    for (i, &di) in d.dims().iter().enumerate() {
        let mut counts = vec![0u8; di];
        for j in 0..m {
            counts[digits[i * m + j]] += 1;
        }
        w.extend(counts);
    }
    w
}

/// Off-diagonal generators `(wire, a, b)`, `a ≠ b`.
fn off_diagonal(d: &DimensionVector) -> Vec<(usize, usize, usize)> {
    let mut gens = Vec::new();
    for (i, &di) in d.dims().iter().enumerate() {
        for a in 0..di {
            for b in 0..di {
                if a != b {
                    gens.push((i, a, b));
                }
            }
        }
    }
    gens
}

/// Dimension of the operators on `V^{⊗m}` commuting with `μ(GL_d)`, from
/// the linear system `[X, L] = 0` over the Lie algebra generators `L`.
pub fn commutant_dimension_mu(d: &DimensionVector, m: usize) -> Result<Dimension> {
    let size = rep_size(d, m)?;
    let radices = slot_dims(d, m);
    let digits: Vec<Vec<usize>> = (0..size).map(|b| to_digits(b, &radices)).collect();
    let mut by_weight: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    for (b, dg) in digits.iter().enumerate() {
        by_weight.entry(occupation(dg, d, m)).or_default().push(b);
    }
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    let mut groups: Vec<&Vec<usize>> = by_weight.values().collect();
    groups.sort();
    for group in groups {
        for &u in group {
            for &v in group {
                unknowns.push((u, v));
            }
        }
    }
    let gens = off_diagonal(d);
    let key = |g: usize, r: usize, c: usize| (g * size + r) * size + c;
    let rows: Vec<SparseRow> = unknowns
        .par_iter()
        .map(|&(u, v)| {
            let mut row = Vec::new();
            for (g, &(i, a, b)) in gens.iter().enumerate() {
                for j in 0..m {
                    let s = i * m + j;
                    if digits[v][s] == a {
                        let mut w = digits[v].clone();
                        w[s] = b;
                        row.push((key(g, u, from_digits(&w, &radices)), 1));
                    }
                    if digits[u][s] == b {
                        let mut w = digits[u].clone();
                        w[s] = a;
                        row.push((key(g, from_digits(&w, &radices), v), -1));
                    }
                }
            }
            row
        })
        .collect();
    let r = sparse_rank(&rows);
    Ok(Dimension {
        value: unknowns.len() - r.rank,
        certainty: if r.exact {
            Certainty::Exact
        } else {
            Certainty::UpperBound
        },
    })
}

/// Multisets of size `k` from `0..n`, as sorted vectors.
fn multisets(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x as u32);
            rec(n, k, x, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

fn multiset_count(n: u128, k: u128) -> u128 {
    // binom(n + k - 1, k)
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n + i) / (i + 1);
    }
    acc
}

/// Entry-variable layout for invariant polynomials: variable
/// `x_{j,r,c} = A_j[r, c]` has id `j·(dim V)² + r·dim V + c`.
struct EntryVars<'a> {
    d: &'a DimensionVector,
    dv: usize,
    digits: Vec<Vec<usize>>,
    strides: Vec<usize>,
}

impl<'a> EntryVars<'a> {
    fn new(d: &'a DimensionVector) -> Self {
        let dv = d.dim_v();
        EntryVars {
            d,
            dv,
            digits: (0..dv).map(|x| d.digits(x)).collect(),
            strides: d.strides(),
        }
    }

    fn split(&self, var: u32) -> (usize, usize, usize) {
        let v = var as usize;
        let sq = self.dv * self.dv;
        (v / sq, (v % sq) / self.dv, v % self.dv)
    }

    fn id(&self, j: usize, r: usize, c: usize) -> u32 {
        (j * self.dv * self.dv + r * self.dv + c) as u32
    }

    /// Torus weight: `e_{r_i} − e_{c_i}` on every wire.
    fn weight(&self, vars: &[u32]) -> Vec<i32> {
        let mut w = vec![0i32; self.d.dims().iter().sum()];
        for &v in vars {
            let (_, r, c) = self.split(v);
            let mut offset = 0;
            for (i, &di) in self.d.dims().iter().enumerate() {
                w[offset + self.digits[r][i]] += 1;
                w[offset + self.digits[c][i]] -= 1;
                offset += di;
            }
        }
        w
    }

    /// `E_ab` on wire `i` applied to one variable:
    /// `[r_i = a]·x_{r(i←b),c} − [c_i = b]·x_{r,c(i←a)}`.
    fn derive(&self, var: u32, i: usize, a: usize, b: usize) -> Vec<(u32, i64)> {
        let (j, r, c) = self.split(var);
        let mut out = Vec::with_capacity(2);
        let (ri, ci) = (self.digits[r][i], self.digits[c][i]);
        if ri == a {
            let r2 = r - a * self.strides[i] + b * self.strides[i];
            out.push((self.id(j, r2, c), 1));
        }
        if ci == b {
            let c2 = c - b * self.strides[i] + a * self.strides[i];
            out.push((self.id(j, r, c2), -1));
        }
        out
    }
}

/// Weight-zero monomials of multidegree `alpha` in the entry variables.
fn weight_zero_monomials(alpha: &MultiDegree, vars: &EntryVars) -> Result<Vec<Vec<u32>>> {
    let sq = vars.dv * vars.dv;
    // the last label is looked up by weight, so only the others multiply out
    let per_label: Vec<u128> = alpha
        .degrees
        .iter()
        .map(|&a| multiset_count(sq as u128, a as u128))
        .collect();
    let prefix: u128 = per_label
        .iter()
        .take(per_label.len().saturating_sub(1))
        .fold(1u128, |acc, &x| acc.saturating_mul(x));
    let largest = per_label.iter().copied().max().unwrap_or(1);
    if prefix.max(largest) > RAW_MONOMIAL_LIMIT {
        return Err(Error::GuardExceeded {
            what: "raw monomials of the requested multidegree",
            size: prefix.max(largest),
            limit: RAW_MONOMIAL_LIMIT,
            advice: "lower |alpha| or the local dimensions",
        });
    }
    let mut lists: Vec<Vec<(Vec<u32>, Vec<i32>)>> = Vec::new();
    for (j, &a) in alpha.degrees.iter().enumerate() {
        let shift = (j * sq) as u32;
        lists.push(
            multisets(sq, a)
                .into_iter()
                .map(|ms| {
                    let ids: Vec<u32> = ms.into_iter().map(|x| x + shift).collect();
                    let w = vars.weight(&ids);
                    (ids, w)
                })
                .collect(),
        );
    }
    let last = lists.pop().unwrap_or_default();
    let mut last_by_weight: HashMap<Vec<i32>, Vec<usize>> = HashMap::new();
    for (idx, (_, w)) in last.iter().enumerate() {
        last_by_weight.entry(w.clone()).or_default().push(idx);
    }
    let zero = vec![0i32; vars.d.dims().iter().sum()];
    // partial products over all but the last label
    let mut partial: Vec<(Vec<u32>, Vec<i32>)> = vec![(Vec::new(), zero.clone())];
    for list in &lists {
        let mut next = Vec::with_capacity(partial.len() * list.len());
        for (ids, w) in &partial {
            for (ids2, w2) in list {
                let mut ids3 = ids.clone();
                ids3.extend_from_slice(ids2);
                let w3: Vec<i32> = w.iter().zip(w2).map(|(x, y)| x + y).collect();
                next.push((ids3, w3));
            }
        }
        partial = next;
    }
    let mut count: u128 = 0;
    for (_, w) in &partial {
        let need: Vec<i32> = w.iter().map(|x| -x).collect();
        count += last_by_weight.get(&need).map_or(0, |v| v.len() as u128);
    }
    if count > INVARIANT_MONOMIAL_LIMIT {
        return Err(Error::GuardExceeded {
            what: "weight-zero monomials in the invariance system",
            size: count,
            limit: INVARIANT_MONOMIAL_LIMIT,
            advice: "lower |alpha| or the local dimensions",
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    for (ids, w) in &partial {
        let need: Vec<i32> = w.iter().map(|x| -x).collect();
        if let Some(matches) = last_by_weight.get(&need) {
            for &idx in matches {
                let mut full = ids.clone();
                full.extend_from_slice(&last[idx].0);
                out.push(full);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Dimension of the `GL_d`-invariant polynomials on `End(V)^{⊕m}` that are
/// homogeneous of multidegree `alpha` (`m = alpha.len()`), as the nullity of
/// the derivation system on weight-zero monomials.
pub fn invariant_space_dimension(alpha: &MultiDegree, d: &DimensionVector) -> Result<Dimension> {
    if alpha.total() == 0 {
        return Ok(Dimension::exact(1));
    }
    let vars = EntryVars::new(d);
    let monomials = weight_zero_monomials(alpha, &vars)?;
    let gens = off_diagonal(d);
    // image monomials are interned to column ids per generator
    let images: Vec<Vec<(usize, Vec<u32>, i64)>> = monomials
        .par_iter()
        .map(|mono| {
            let mut terms = Vec::new();
            for (g, &(i, a, b)) in gens.iter().enumerate() {
                for t in 0..mono.len() {
                    for (nv, coeff) in vars.derive(mono[t], i, a, b) {
                        let mut img = mono.clone();
                        img[t] = nv;
                        img.sort_unstable();
                        terms.push((g, img, coeff));
                    }
                }
            }
            terms
        })
        .collect();
    let mut columns: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let rows: Vec<SparseRow> = images
        .into_iter()
        .map(|terms| {
            terms
                .into_iter()
                .map(|(g, img, coeff)| {
                    let next = columns.len();
                    (*columns.entry((g, img)).or_insert(next), coeff)
                })
                .collect()
        })
        .collect();
    let r = sparse_rank(&rows);
    Ok(Dimension {
        value: monomials.len() - r.rank,
        certainty: if r.exact {
            Certainty::Exact
        } else {
            Certainty::UpperBound
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSpan {
    pub dimension: Dimension,
    pub candidates: usize,
    /// Sample points used for the reported rank.
    pub samples: usize,
    /// Rank at half as many points; equal to `dimension.value` when stable.
    pub half_rank: usize,
    pub stable: bool,
}

/// Rank of the evaluation matrix of all girth-filtered canonical trace
/// monomials of multidegree `alpha` at `2N` random points, `N` the number of
/// candidates; `stable` records that the first `N` points give the same rank.
pub fn trace_span_dimension(
    alpha: &MultiDegree,
    d: &DimensionVector,
    seed: u64,
) -> Result<TraceSpan> {
    if alpha.total() == 0 {
        return Ok(TraceSpan {
            dimension: Dimension::exact(1),
            candidates: 1,
            samples: 0,
            half_rank: 1,
            stable: true,
        });
    }
    let filter = EnumerationFilter {
        connected_only: false,
        girth: GirthBound::Square,
    };
    let candidates = enumerate_generators(alpha, d, filter)?;
    if candidates.len() as u128 > CANDIDATE_LIMIT {
        return Err(Error::GuardExceeded {
            what: "candidate trace monomials",
            size: candidates.len() as u128,
            limit: CANDIDATE_LIMIT,
            advice: "lower |alpha|",
        });
    }
    let n = candidates.len().max(1);
    let mut sampler = InputSampler::new(seed);
    let points: Vec<EndoTuple> = (0..2 * n)
        .map(|_| sampler.endotuple(d, alpha.m()))
        .collect();
    let rows: Vec<Vec<Scalar>> = candidates
        .par_iter()
        .map(|t| {
            let plan = plan_contraction(t, d, None)?;
            points
                .iter()
                .map(|p| evaluate_with_plan(t, p, &plan))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let half: Vec<Vec<Scalar>> = rows.iter().map(|r| r[..n].to_vec()).collect();
    let half_rank = integer_rank(integer_rows(&half));
    let full_rank = integer_rank(integer_rows(&rows));
    Ok(TraceSpan {
        dimension: Dimension {
            value: full_rank.rank,
            certainty: Certainty::LowerBound,
        },
        candidates: candidates.len(),
        samples: 2 * n,
        half_rank: half_rank.rank,
        stable: half_rank.rank == full_rank.rank,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub alpha: MultiDegree,
    pub d: DimensionVector,
    pub m: usize,
    pub oracle_dim: usize,
    pub span_dim: usize,
    #[serde(rename = "match")]
    pub matches: bool,
    pub seed: u64,
    pub samples: usize,
    pub candidates: usize,
    pub oracle_certainty: Certainty,
    pub stable: bool,
}

/// Compares the invariant-space oracle with the trace-monomial span.
///
/// The span is a lower bound on the true invariant dimension and the
/// oracle an upper bound (or exact), so `match` certifies equality.
pub fn verify_generation(
    alpha: &MultiDegree,
    d: &DimensionVector,
    seed: u64,
) -> Result<VerifyReport> {
    let oracle = invariant_space_dimension(alpha, d)?;
    let span = trace_span_dimension(alpha, d, seed)?;
    Ok(VerifyReport {
        alpha: alpha.clone(),
        d: d.clone(),
        m: alpha.m(),
        oracle_dim: oracle.value,
        span_dim: span.dimension.value,
        matches: oracle.value == span.dimension.value,
        seed,
        samples: span.samples,
        candidates: span.candidates,
        oracle_certainty: oracle.certainty,
        stable: span.stable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub span_rho: Dimension,
    pub commutant_mu: Dimension,
    pub invariant_dim: Dimension,
    pub trace_span_dim: Dimension,
}

/// All four dimensions for `(alpha, d)` with `m = alpha.len()` copies.
pub fn dimension_report(
    alpha: &MultiDegree,
    d: &DimensionVector,
    seed: u64,
) -> Result<DimensionReport> {
    let m = alpha.m();
    Ok(DimensionReport {
        span_rho: span_dimension_rho(d, m)?,
        commutant_mu: commutant_dimension_mu(d, m)?,
        invariant_dim: invariant_space_dimension(alpha, d)?,
        trace_span_dim: trace_span_dimension(alpha, d, seed)?.dimension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::random_group_element;

    fn dv(d: &[usize]) -> DimensionVector {
        DimensionVector::new(d.to_vec()).unwrap()
    }

    fn p(s: &str, k: usize) -> Permutation {
        Permutation::parse_cycles(s, k).unwrap()
    }

    #[test]
    fn rho_examples() {
        let d = dv(&[2]);
        let id = rho_matrix(&[p("id", 2)], &d, 2).unwrap();
        assert_eq!(id.matrix, RatMatrix::identity(4));
        let swap = rho_matrix(&[p("(12)", 2)], &d, 2).unwrap();
        let expected = RatMatrix::from_i64(4, 4, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(swap.matrix, expected);
    }

    #[test]
    fn rho_is_a_homomorphism() {
        let d = dv(&[2, 2]);
        let perms = all_permutations(3);
        for a in 0..perms.len() {
            for b in [0, 3, 5] {
                let s = vec![Permutation::from_zero_based(perms[a].clone()), p("(12)", 3)];
                let t = vec![
                    Permutation::from_zero_based(perms[b].clone()),
                    p("(123)", 3),
                ];
                let st: Vec<Permutation> = s
                    .iter()
                    .zip(&t)
                    .map(|(x, y)| x.compose(y).unwrap())
                    .collect();
                let lhs = rho_matrix(&s, &d, 3)
                    .unwrap()
                    .compose(&rho_matrix(&t, &d, 3).unwrap())
                    .unwrap();
                assert_eq!(lhs, rho_matrix(&st, &d, 3).unwrap());
            }
        }
    }

    #[test]
    fn mu_is_a_homomorphism_and_commutes_with_rho() {
        let d = dv(&[2, 2]);
        let g = random_group_element(&d, 1).unwrap();
        let h = random_group_element(&d, 2).unwrap();
        let gh = LocalGroupElement::new(
            g.factors()
                .iter()
                .zip(h.factors())
                .map(|(a, b)| a.matmul(b).unwrap())
                .collect(),
        )
        .unwrap();
        let lhs = mu_matrix(&g, 2)
            .unwrap()
            .compose(&mu_matrix(&h, 2).unwrap())
            .unwrap();
        assert_eq!(lhs, mu_matrix(&gh, 2).unwrap());
        let r = rho_matrix(&[p("(12)", 2), p("id", 2)], &d, 2).unwrap();
        let mg = mu_matrix(&g, 2).unwrap();
        assert_eq!(r.compose(&mg).unwrap(), mg.compose(&r).unwrap());
    }

    #[test]
    fn centralizer_dimensions() {
        assert_eq!(span_dimension_rho(&dv(&[2]), 2).unwrap().value, 2);
        assert_eq!(span_dimension_rho(&dv(&[2, 2]), 2).unwrap().value, 4);
        assert_eq!(span_dimension_rho(&dv(&[3, 2]), 1).unwrap().value, 1);
        assert_eq!(
            commutant_dimension_mu(&dv(&[2]), 2).unwrap(),
            Dimension::exact(2)
        );
        assert_eq!(
            commutant_dimension_mu(&dv(&[2, 2]), 1).unwrap(),
            Dimension::exact(1)
        );
        assert_eq!(
            commutant_dimension_mu(&dv(&[2, 2]), 2).unwrap(),
            Dimension::exact(4)
        );
        assert!(matches!(
            span_dimension_rho(&dv(&[3, 3]), 3),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn invariant_oracle_small_cases() {
        assert_eq!(
            invariant_space_dimension(&MultiDegree::new(vec![1]), &dv(&[3]))
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            invariant_space_dimension(&MultiDegree::new(vec![1]), &dv(&[2, 2]))
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            invariant_space_dimension(&MultiDegree::new(vec![0, 0]), &dv(&[2]))
                .unwrap()
                .value,
            1
        );
        // classical n = 1: Tr(A)^2 and Tr(A^2)
        assert_eq!(
            invariant_space_dimension(&MultiDegree::new(vec![2]), &dv(&[2]))
                .unwrap()
                .value,
            2
        );
    }

    #[test]
    fn trace_span_small_cases() {
        let s = trace_span_dimension(&MultiDegree::new(vec![1]), &dv(&[2, 2]), 1).unwrap();
        assert_eq!((s.dimension.value, s.candidates), (1, 1));
        let s = trace_span_dimension(&MultiDegree::new(vec![2]), &dv(&[2]), 1).unwrap();
        assert_eq!(s.dimension.value, 2);
        assert!(s.stable);
    }

    #[test]
    fn verify_examples() {
        for (alpha, d) in [
            (vec![1, 1], vec![2, 2]),
            (vec![2], vec![2, 2]),
            (vec![3], vec![2, 2]),
        ] {
            let r = verify_generation(&MultiDegree::new(alpha), &dv(&d), 7).unwrap();
            assert!(r.matches, "{r:?}");
        }
    }
}
