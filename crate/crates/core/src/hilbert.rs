//! Hilbert series of the necklace-graded rings, their Hadamard products,
//! rational reconstruction, pole analysis and degree bounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{integer_rank, integer_rows, inv_mod, mul_mod, reduce_big, sub_mod};
use crate::matrix::{common_denominator, Scalar, ScalarRepr};
use crate::monomial::{enumerate_generators, EnumerationFilter, GirthBound};
use crate::perm::{binomial, necklace_count, DimensionVector, MultiDegree};
use crate::plan::{evaluate_with_plan, plan_contraction};
use crate::tensor::{EndoTuple, InputSampler};

/// Truncated power series `c_0 + c_1 t + … + c_N t^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Scalar>,
}

impl PowerSeries {
    /// A series of order `coeffs.len() - 1`; needs at least one coefficient.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("a power series needs at least c_0".into()));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_integers(coeffs: Vec<BigInt>) -> Self {
        PowerSeries {
            coeffs: coeffs.into_iter().map(Scalar::from_integer).collect(),
        }
    }

    /// `1/(1−t)` to order `n`.
    pub fn geometric(n: usize) -> Self {
        PowerSeries {
            coeffs: vec![Scalar::one(); n + 1],
        }
    }

    pub fn zero(n: usize) -> Self {
        PowerSeries {
            coeffs: vec![Scalar::zero(); n + 1],
        }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn truncate(&self, n: usize) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs[..=n.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=n)
                .map(|j| &self.coeffs[j] + &other.coeffs[j])
                .collect(),
        }
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<ScalarRepr>,
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            n: self.order(),
            coeffs: self.coeffs.iter().cloned().map(ScalarRepr).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.n + 1 {
            return Err(serde::de::Error::custom(format!(
                "series of order {} needs {} coefficients, found {}",
                raw.n,
                raw.n + 1,
                raw.coeffs.len()
            )));
        }
        Ok(PowerSeries {
            coeffs: raw.coeffs.into_iter().map(|s| s.0).collect(),
        })
    }
}

/// `P(t)/Q(t)` with `Q(0) = 1`; coefficient lists are constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Vec<Scalar>,
    den: Vec<Scalar>,
}

fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Scalar::zero());
    }
    p
}

impl RationalFunction {
    /// Normalizes the denominator to constant term 1.
    pub fn new(num: Vec<Scalar>, den: Vec<Scalar>) -> Result<Self> {
        let c0 = den.first().cloned().unwrap_or_else(Scalar::zero);
        if c0.is_zero() {
            return Err(Error::Parse(
                "denominator must have a nonzero constant term".into(),
            ));
        }
        Ok(RationalFunction {
            num: trim(num.iter().map(|c| c / &c0).collect()),
            den: trim(den.iter().map(|c| c / &c0).collect()),
        })
    }

    pub fn num(&self) -> &[Scalar] {
        &self.num
    }

    pub fn den(&self) -> &[Scalar] {
        &self.den
    }

    pub fn den_degree(&self) -> usize {
        self.den.len() - 1
    }

    pub fn num_degree(&self) -> usize {
        self.num.len() - 1
    }

    pub fn numerator_is_one(&self) -> bool {
        self.num.len() == 1 && self.num[0].is_one()
    }

    /// Power-series expansion to order `n`.
    pub fn expand(&self, n: usize) -> PowerSeries {
        let mut s: Vec<Scalar> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut v = self.num.get(j).cloned().unwrap_or_else(Scalar::zero);
            for i in 1..=j.min(self.den_degree()) {
                v -= &self.den[i] * &s[j - i];
            }
            s.push(v);
        }
        PowerSeries { coeffs: s }
    }

    /// `∏ (1 − t^a)^{e_a}` as a rational function `1 / …`.
    pub fn from_factor_exponents(exponents: &BTreeMap<usize, usize>) -> Self {
        let mut den = vec![BigInt::one()];
        for (&a, &e) in exponents {
            for _ in 0..e {
                den = poly_mul(&den, &one_minus_t_pow(a));
            }
        }
        RationalFunction {
            num: vec![Scalar::one()],
            den: den.into_iter().map(Scalar::from_integer).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    num: Vec<ScalarRepr>,
    den: Vec<ScalarRepr>,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson {
            num: self.num.iter().cloned().map(ScalarRepr).collect(),
            den: self.den.iter().cloned().map(ScalarRepr).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RationalJson::deserialize(deserializer)?;
        RationalFunction::new(
            raw.num.into_iter().map(|s| s.0).collect(),
            raw.den.into_iter().map(|s| s.0).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

fn render_poly(p: &[Scalar]) -> String {
    let mut terms = Vec::new();
    for (j, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let body = match (j, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "t".to_string(),
            (1, false) => format!("{mag}*t"),
            (_, true) => format!("t^{j}"),
            (_, false) => format!("{mag}*t^{j}"),
        };
        terms.push((sign, body));
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (sign, body)) in terms.into_iter().enumerate() {
        match (idx, sign) {
            (0, "-") => out.push('-'),
            (0, _) => {}
            (_, s) => out.push_str(&format!(" {s} ")),
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for RationalFunction {
    /// Shows the denominator as a product of `(1−t^a)` factors when it is one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = render_poly(&self.num);
        let num = if self.num.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({num})")
        } else {
            num
        };
        if self.den_degree() == 0 {
            return f.write_str(&num);
        }
        let report = check_pole_orders(self, self.den_degree());
        if report.ok && report.exact_product {
            let factors: Vec<String> = report
                .exponents
                .iter()
                .map(|(&a, &e)| {
                    let base = if a == 1 {
                        "(1-t)".to_string()
                    } else {
                        format!("(1-t^{a})")
                    };
                    if e == 1 {
                        base
                    } else {
                        format!("{base}^{e}")
                    }
                })
                .collect();
            if factors.len() == 1 && !factors[0].ends_with(|c: char| c.is_ascii_digit()) {
                write!(f, "{num}/{}", factors[0])
            } else {
                write!(f, "{num}/({})", factors.join(""))
            }
        } else {
            write!(f, "{num}/({})", render_poly(&self.den))
        }
    }
}

fn add_shifted(c: &mut [BigInt], k: usize) {
    for j in k..c.len() {
        let (lo, hi) = c.split_at_mut(j);
        hi[0] += &lo[j - k];
    }
}

/// Series of `∏_{k=1}^{d²} (1 − t^k)^{−n_m(k)}` to order `n`, with `n_m(k)`
/// the number of `m`-ary necklaces of length `k`.
pub fn hs_single(m: usize, d: usize, n: usize) -> Result<PowerSeries> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidDimensions("hs_single needs m, d >= 1".into()));
    }
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::one();
    for k in 1..=(d * d).min(n.max(1)) {
        let mult = necklace_count(m as u64, k as u64)
            .to_usize()
            .ok_or(Error::GuardExceeded {
                what: "necklace multiplicity",
                size: u128::MAX,
                limit: usize::MAX as u128,
                advice: "lower m or d",
            })?;
        for _ in 0..mult {
            add_shifted(&mut c, k);
        }
    }
    Ok(PowerSeries::from_integers(c))
}

/// Termwise product, truncated to the shorter order.
pub fn hadamard(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    let n = a.order().min(b.order());
    PowerSeries {
        coeffs: (0..=n).map(|j| &a.coeffs[j] * &b.coeffs[j]).collect(),
    }
}

/// Iterated Hadamard product of `hs_single(m, d_i, n)` over the wires.
pub fn hs_local(m: usize, d: &DimensionVector, n: usize) -> Result<PowerSeries> {
    let parts: Vec<PowerSeries> = d
        .dims()
        .par_iter()
        .map(|&di| hs_single(m, di, n))
        .collect::<Result<_>>()?;
    Ok(parts
        .iter()
        .skip(1)
        .fold(parts[0].clone(), |acc, s| hadamard(&acc, s)))
}

/// Truncation order used when none is given: `4 (dim V)² + 8`.
pub fn default_order(d: &DimensionVector) -> usize {
    4 * d.dim_v() * d.dim_v() + 8
}

/// Largest order tried by [`reconstruct_local`].
pub const MAX_ORDER: usize = 4096;

/// Reconstructs `hs_local(m, d)`, doubling the truncation order from
/// `start` (or [`default_order`]) until the result is conclusive or the
/// order would pass `max_order`. Returns the last order used.
pub fn reconstruct_local(
    m: usize,
    d: &DimensionVector,
    start: Option<usize>,
    max_order: usize,
) -> Result<(usize, PowerSeries, Reconstruction)> {
    let mut n = start.unwrap_or_else(|| default_order(d)).max(1);
    loop {
        let series = hs_local(m, d, n)?;
        let rec = reconstruct_rational(&series, n);
        if matches!(rec, Reconstruction::Found { .. }) || n * 2 > max_order {
            return Ok((n, series, rec));
        }
        n *= 2;
    }
}

/// Primes for the modular recurrence search.
const BM_PRIMES: [u64; 3] = [
    2_305_843_009_213_693_951,
    4_611_686_018_427_387_847,
    1_000_000_000_000_000_009,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Reconstruction {
    Found {
        function: RationalFunction,
        /// Length of the minimal recurrence (`max(deg Q, deg P + 1)`).
        recurrence_length: usize,
    },
    Inconclusive {
        reason: String,
        /// Recurrence length seen so far, when one was found.
        #[serde(skip_serializing_if = "Option::is_none")]
        recurrence_length: Option<usize>,
    },
}

impl Reconstruction {
    pub fn function(&self) -> Option<&RationalFunction> {
        match self {
            Reconstruction::Found { function, .. } => Some(function),
            Reconstruction::Inconclusive { .. } => None,
        }
    }
}

/// Berlekamp–Massey over `F_p`: returns `(L, C)` with `C(0) = 1`, `deg C ≤ L`.
fn berlekamp_massey(s: &[u64], p: u64) -> (usize, Vec<u64>) {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let (mut l, mut shift, mut bd) = (0usize, 1usize, 1u64);
    for n in 0..s.len() {
        let mut disc = s[n];
        for i in 1..=l.min(c.len() - 1) {
            disc = (disc + mul_mod(c[i], s[n - i], p)) % p;
        }
        if disc == 0 {
            shift += 1;
            continue;
        }
        let coef = mul_mod(disc, inv_mod(bd, p), p);
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + shift] = sub_mod(c[i + shift], mul_mod(coef, bi, p), p);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            bd = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.resize(l + 1, 0);
    (l, c)
}

/// Chinese remaindering of residues modulo pairwise coprime moduli.
fn crt(residues: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for &(r, p) in residues {
        let pb = BigInt::from(p);
        let cur = reduce_big(&value, p);
        let inv = inv_mod(reduce_big(&modulus, p), p);
        let t = mul_mod(sub_mod(r, cur, p), inv, p);
        value += &modulus * BigInt::from(t);
        modulus *= pb;
    }
    (value, modulus)
}

/// Rational number `a/b ≡ u (mod M)` with `|a|, b ≤ sqrt(M/2)`, if one exists.
fn rational_reconstruction(u: &BigInt, modulus: &BigInt) -> Option<Scalar> {
    let bound = (modulus / 2u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), u.mod_floor(modulus));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Scalar::new(r1, s1))
}

/// Minimal linear recurrence of the series, lifted from prime fields and
/// then checked exactly against every coefficient.
///
/// Gives `Inconclusive` when the recurrence is longer than `cap`, when
/// fewer than `2L + 2` coefficients are available (the recurrence would not
/// be pinned down), or when no lift reproduces the series.
pub fn reconstruct_rational(s: &PowerSeries, cap: usize) -> Reconstruction {
    let den = common_denominator(&s.coeffs);
    let ints: Vec<BigInt> = s
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let n = s.order();
    let runs: Vec<(usize, Vec<u64>, u64)> = BM_PRIMES
        .par_iter()
        .map(|&p| {
            let residues: Vec<u64> = ints.iter().map(|v| reduce_big(v, p)).collect();
            let (l, c) = berlekamp_massey(&residues, p);
            (l, c, p)
        })
        .collect();
    let l = runs.iter().map(|r| r.0).max().unwrap_or(0);
    if l > cap {
        return Reconstruction::Inconclusive {
            reason: format!("recurrence length {l} exceeds the cap {cap}"),
            recurrence_length: Some(l),
        };
    }
    if n < 2 * l + 2 {
        return Reconstruction::Inconclusive {
            reason: format!(
                "order {n} is below 2L+2 = {} for the recurrence length L = {l}; raise N",
                2 * l + 2
            ),
            recurrence_length: Some(l),
        };
    }
    let agreeing: Vec<&(usize, Vec<u64>, u64)> = runs.iter().filter(|r| r.0 == l).collect();
    let mut c: Vec<Scalar> = Vec::with_capacity(l + 1);
    for i in 0..=l {
        let residues: Vec<(u64, u64)> = agreeing.iter().map(|r| (r.1[i], r.2)).collect();
        let (value, modulus) = crt(&residues);
        match rational_reconstruction(&value, &modulus) {
            Some(q) => c.push(q),
            None => {
                return Reconstruction::Inconclusive {
                    reason: "recurrence coefficients too large to lift from the prime fields"
                        .into(),
                    recurrence_length: Some(l),
                }
            }
        }
    }
    // exact check over the integers: Σ_i c̃_i s_{j-i} = 0 for all j ≥ L
    let cden = common_denominator(&c);
    let cint: Vec<BigInt> = c.iter().map(|v| v.numer() * (&cden / v.denom())).collect();
    let fits = (l..=n).into_par_iter().all(|j| {
        let mut acc = BigInt::zero();
        for (i, ci) in cint.iter().enumerate() {
            if !ci.is_zero() {
                acc += ci * &ints[j - i];
            }
        }
        acc.is_zero()
    });
    if !fits {
        return Reconstruction::Inconclusive {
            reason: "lifted recurrence does not reproduce the series".into(),
            recurrence_length: Some(l),
        };
    }
    let num: Vec<Scalar> = (0..l)
        .map(|j| (0..=j).fold(Scalar::zero(), |acc, i| acc + &c[i] * &s.coeffs[j - i]))
        .collect();
    // a common factor of P and Q would give a shorter recurrence, so P/Q is reduced
    match RationalFunction::new(num, c) {
        Ok(function) => Reconstruction::Found {
            function,
            recurrence_length: l,
        },
        Err(e) => Reconstruction::Inconclusive {
            reason: e.to_string(),
            recurrence_length: Some(l),
        },
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_minus_t_pow(a: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); a + 1];
    p[0] = BigInt::one();
    p[a] = -BigInt::one();
    p
}

/// Exact division by a monic polynomial; `None` if the remainder is nonzero.
fn divide_monic(p: &[Scalar], q: &[BigInt]) -> Option<Vec<Scalar>> {
    let dq = q.len() - 1;
    if p.len() <= dq {
        return None;
    }
    let mut rem = p.to_vec();
    let mut quot = vec![Scalar::zero(); p.len() - dq];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dq].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            if !qj.is_zero() {
                rem[k + j] -= &lead * Scalar::from_integer(qj.clone());
            }
        }
        quot[k] = lead;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Cyclotomic polynomials `Φ_1, …, Φ_bound`, constant term first.
pub fn cyclotomic_polynomials(bound: usize) -> Vec<Vec<BigInt>> {
    let mut phis: Vec<Vec<BigInt>> = vec![Vec::new()];
    for k in 1..=bound {
        // t^k − 1 divided by Φ_j for proper divisors j
        let mut p: Vec<Scalar> = vec![Scalar::zero(); k + 1];
        p[0] = -Scalar::one();
        p[k] = Scalar::one();
        for j in (1..k).filter(|j| k % j == 0) {
            p = divide_monic(&p, &phis[j]).expect("cyclotomic divisor");
        }
        phis.push(p.into_iter().map(|c| c.to_integer()).collect());
    }
    phis
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleReport {
    pub ok: bool,
    pub bound: usize,
    /// Multiplicity of each cyclotomic factor `Φ_k` in the denominator.
    pub cyclotomic: BTreeMap<usize, usize>,
    /// Exponents `e_a` with `Q | ∏_{a ≤ bound} (1 − t^a)^{e_a}`.
    pub exponents: BTreeMap<usize, usize>,
    /// Whether `Q` equals that product exactly.
    pub exact_product: bool,
    /// Part of the denominator not built from `Φ_k`, `k ≤ bound`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<ScalarRepr>>,
}

/// Checks whether every pole of `f` is a root of unity of order at most
/// `bound`, by stripping cyclotomic factors from the denominator.
pub fn check_pole_orders(f: &RationalFunction, bound: usize) -> PoleReport {
    let phis = cyclotomic_polynomials(bound);
    let mut rest = f.den.clone();
    let mut cyclotomic = BTreeMap::new();
    for k in (1..=bound).rev() {
        let mut count = 0;
        while rest.len() > 1 {
            match divide_monic(&rest, &phis[k]) {
                Some(q) => {
                    rest = q;
                    count += 1;
                }
                None => break,
            }
        }
        if count > 0 {
            cyclotomic.insert(k, count);
        }
    }
    let ok = rest.len() == 1;
    // greedy cover: (1 − t^a) contributes Φ_k for every k | a
    let mut exponents = BTreeMap::new();
    if ok {
        for k in (1..=bound).rev() {
            let need = cyclotomic.get(&k).copied().unwrap_or(0);
            let have: usize = exponents
                .iter()
                .filter(|(&a, _)| a % k == 0)
                .map(|(_, &e)| e)
                .sum();
            if need > have {
                exponents.insert(k, need - have);
            }
        }
    }
    let exact_product = ok && RationalFunction::from_factor_exponents(&exponents).den == f.den;
    PoleReport {
        ok,
        bound,
        cyclotomic,
        exponents,
        exact_product,
        residual: (!ok).then(|| rest.into_iter().map(ScalarRepr).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: usize,
    pub d: DimensionVector,
    /// `m · (dim V)²`.
    pub segre: u64,
    /// `(dim V)²`, stated for `m = 1` only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_m1: Option<u64>,
    /// `∏ binom(d_i + 1, 2)`, stated when every `d_i ≤ 3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub small_dim: Option<u64>,
    /// Per-wire girth bound `d_i²`.
    pub girth: Vec<u64>,
    /// Per-wire girth bound `binom(d_i + 1, 2)` when every `d_i ≤ 3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub girth_small_dim: Option<Vec<u64>>,
}

pub fn degree_bounds(m: usize, d: &DimensionVector) -> BoundReport {
    let dv = d.dim_v() as u64;
    let small = d.dims().iter().all(|&di| di <= 3);
    BoundReport {
        m,
        d: d.clone(),
        segre: m as u64 * dv * dv,
        final_m1: (m == 1).then_some(dv * dv),
        small_dim: small.then(|| {
            d.dims()
                .iter()
                .map(|&di| binomial(di as u64 + 1, 2))
                .product()
        }),
        girth: d.dims().iter().map(|&di| (di * di) as u64).collect(),
        girth_small_dim: small.then(|| {
            d.dims()
                .iter()
                .map(|&di| binomial(di as u64 + 1, 2))
                .collect()
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGeneration {
    pub degree: usize,
    pub candidates: usize,
    /// Rank of all degree-`k` trace monomials.
    pub span_rank: usize,
    /// Rank of the disconnected ones (products of lower-degree monomials).
    pub product_rank: usize,
    pub new_generators: bool,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalBoundReport {
    pub d: DimensionVector,
    pub max_degree: usize,
    pub seed: u64,
    pub degrees: Vec<DegreeGeneration>,
    /// Largest degree needing a new generator, if any.
    pub largest_new_generator_degree: Option<usize>,
    pub bounds: BoundReport,
    /// Whether the observed degree is within the small-dimension bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_small_dim: Option<bool>,
    pub within_final_bound: bool,
}

/// For one matrix (`m = 1`) and each degree `k ≤ max_degree`, compares the
/// evaluation rank of all trace monomials with that of the products of
/// lower-degree ones. Evidence for the degree bounds, not a proof.
pub fn verify_bound_empirically(
    d: &DimensionVector,
    max_degree: usize,
    seed: u64,
) -> Result<EmpiricalBoundReport> {
    let filter = EnumerationFilter {
        connected_only: false,
        girth: GirthBound::Square,
    };
    let mut degrees = Vec::new();
    for k in 1..=max_degree {
        let candidates = enumerate_generators(&MultiDegree::new(vec![k]), d, filter)?;
        let n = candidates.len().max(1);
        let mut sampler = InputSampler::new(seed.wrapping_add(k as u64));
        let points: Vec<EndoTuple> = (0..2 * n).map(|_| sampler.endotuple(d, 1)).collect();
        let rows: Vec<Vec<Scalar>> = candidates
            .par_iter()
            .map(|t| {
                let plan = plan_contraction(t, d, None)?;
                points
                    .iter()
                    .map(|p| evaluate_with_plan(t, p, &plan))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let products: Vec<Vec<Scalar>> = candidates
            .iter()
            .zip(&rows)
            .filter(|(t, _)| !t.is_connected())
            .map(|(_, r)| r.clone())
            .collect();
        let half: Vec<Vec<Scalar>> = rows.iter().map(|r| r[..n].to_vec()).collect();
        let span_rank = integer_rank(integer_rows(&rows)).rank;
        let product_rank = if products.is_empty() {
            0
        } else {
            integer_rank(integer_rows(&products)).rank
        };
        degrees.push(DegreeGeneration {
            degree: k,
            candidates: candidates.len(),
            span_rank,
            product_rank,
            new_generators: span_rank > product_rank,
            stable: integer_rank(integer_rows(&half)).rank == span_rank,
        });
    }
    let largest = degrees
        .iter()
        .filter(|g| g.new_generators)
        .map(|g| g.degree)
        .max();
    let bounds = degree_bounds(1, d);
    let observed = largest.unwrap_or(0) as u64;
    Ok(EmpiricalBoundReport {
        d: d.clone(),
        max_degree,
        seed,
        degrees,
        largest_new_generator_degree: largest,
        within_small_dim: bounds.small_dim.map(|b| observed <= b),
        within_final_bound: observed <= bounds.final_m1.unwrap_or(u64::MAX),
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::scalar;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .iter()
            .map(|v| v.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn single_examples() {
        assert_eq!(ints(&hs_single(1, 1, 6).unwrap()), vec![1; 7]);
        assert_eq!(
            ints(&hs_single(1, 2, 6).unwrap()),
            vec![1, 1, 2, 3, 5, 6, 9]
        );
        assert_eq!(ints(&hs_single(2, 1, 5).unwrap()), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn hadamard_examples() {
        let s = hs_single(1, 2, 6).unwrap();
        assert_eq!(hadamard(&s, &PowerSeries::geometric(6)), s);
        assert_eq!(hadamard(&s, &PowerSeries::zero(6)), PowerSeries::zero(6));
        assert_eq!(ints(&hadamard(&s, &s)), vec![1, 1, 4, 9, 25, 36, 81]);
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        assert_eq!(hs_local(1, &d, 6).unwrap(), hadamard(&s, &s));
        let ones = DimensionVector::new(vec![1, 1, 1]).unwrap();
        assert_eq!(hs_local(1, &ones, 5).unwrap(), PowerSeries::geometric(5));
    }

    #[test]
    fn reconstruct_simple_cases() {
        let geo = reconstruct_rational(&PowerSeries::geometric(10), 10);
        let f = geo.function().unwrap();
        assert_eq!(f.den(), &[scalar(1), scalar(-1)]);
        assert!(f.numerator_is_one());

        let s = hs_single(1, 2, 30).unwrap();
        let f = reconstruct_rational(&s, 20).function().unwrap().clone();
        let mut e = BTreeMap::new();
        for a in 1..=4 {
            e.insert(a, 1);
        }
        assert_eq!(f, RationalFunction::from_factor_exponents(&e));
        assert_eq!(f.to_string(), "1/((1-t)(1-t^2)(1-t^3)(1-t^4))");

        let short = reconstruct_rational(&hs_single(1, 2, 12).unwrap(), 20);
        assert!(matches!(short, Reconstruction::Inconclusive { .. }));
        let capped = reconstruct_rational(&s, 5);
        assert!(matches!(capped, Reconstruction::Inconclusive { .. }));
    }

    #[test]
    fn pole_check_examples() {
        let mut e = BTreeMap::new();
        e.insert(4, 1);
        let f = RationalFunction::from_factor_exponents(&e);
        let r = check_pole_orders(&f, 4);
        assert!(r.ok && r.exact_product);
        assert!(!check_pole_orders(&f, 3).ok);
        let fib = RationalFunction::new(vec![scalar(1)], vec![scalar(1), scalar(-1), scalar(-1)])
            .unwrap();
        let r = check_pole_orders(&fib, 30);
        assert!(!r.ok);
        assert!(r.residual.is_some());
    }

    #[test]
    fn bounds_examples() {
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        let b = degree_bounds(1, &d);
        assert_eq!((b.segre, b.final_m1, b.small_dim), (16, Some(16), Some(9)));
        assert_eq!(b.girth, vec![4, 4]);
        assert_eq!(b.girth_small_dim, Some(vec![3, 3]));
        let b2 = degree_bounds(2, &d);
        assert_eq!((b2.segre, b2.final_m1), (32, None));
        let b3 = degree_bounds(1, &DimensionVector::new(vec![2, 3]).unwrap());
        assert_eq!((b3.segre, b3.small_dim), (36, Some(18)));
        assert_eq!(
            degree_bounds(1, &DimensionVector::new(vec![4, 2]).unwrap()).small_dim,
            None
        );
    }

    #[test]
    fn json_formats() {
        let s = hs_single(1, 2, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"N":3,"coeffs":["1","1","2","3"]}"#
        );
        let f = RationalFunction::new(vec![scalar(2)], vec![scalar(2), scalar(-2)]).unwrap();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"num":["1"],"den":["1","-1"]}"#
        );
        assert!(serde_json::from_str::<PowerSeries>(r#"{"N":3,"coeffs":["1"]}"#).is_err());
    }
}
