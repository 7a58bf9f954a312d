//! Permutations, ordered multisets, multidegrees and necklace combinatorics.
//!
//! Indices are 1-based at every boundary (constructors taking one-line
//! notation, cycle strings, serialized forms). Internally a [`Permutation`]
//! stores 0-based images, and [`Permutation::apply`] works on 0-based points.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection of `{1, …, k}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut zero_based = Vec::with_capacity(k);
        for &img in images {
            if img == 0 || img > k {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} outside 1..={k}"
                )));
            }
            if seen[img - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} appears twice"
                )));
            }
            seen[img - 1] = true;
            zero_based.push(img - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        Permutation { images }
    }

    /// Builds a permutation on `k` points from 1-based cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<Option<usize>> = vec![None; k];
        let mut seen = vec![false; k];
        for cycle in cycles {
            for &x in cycle {
                if x == 0 || x > k {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {x} outside 1..={k}"
                    )));
                }
                if seen[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears in more than one cycle position"
                    )));
                }
                seen[x - 1] = true;
            }
            for (t, &x) in cycle.iter().enumerate() {
                let next = cycle[(t + 1) % cycle.len()];
                images[x - 1] = Some(next - 1);
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| img.unwrap_or(i))
            .collect();
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1 2)(3)"` on `k` points.
    ///
    /// Entries inside a cycle are whitespace separated; a cycle written
    /// without whitespace, like `"(12)"`, is read digit by digit. `"id"`,
    /// `"()"` and the empty string denote the identity.
    pub fn parse_cycles(s: &str, k: usize) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "id" || trimmed == "()" {
            return Ok(Permutation::identity(k));
        }
        let mut cycles = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if rest_trim.is_empty() {
                break;
            }
            if !rest_trim.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in cycle string {s:?}")));
            }
            let close = rest_trim
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = rest_trim[1..close].trim();
            let entries: Vec<usize> = if body.is_empty() {
                Vec::new()
            } else if body.contains(char::is_whitespace) || body.contains(',') {
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad cycle entry {t:?} in {s:?}")))
                    })
                    .collect::<Result<_>>()?
            } else if body.len() > 1 {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad cycle entry {c:?} in {s:?}")))
                    })
                    .collect::<Result<_>>()?
            } else {
                vec![body
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad cycle entry {body:?} in {s:?}")))?]
            };
            if !entries.is_empty() {
                cycles.push(entries);
            }
            rest = &rest_trim[close + 1..];
        }
        Permutation::from_cycles(k, &cycles)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of the 0-based point `p`.
    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                what: "permutation composition",
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Conjugates by a relabeling: returns `π⁻¹ ∘ self ∘ π`, where `pi[q]`
    /// is the old point placed at new point `q`.
    pub(crate) fn relabel(&self, pi: &[usize], pi_inv: &[usize]) -> Permutation {
        Permutation {
            images: pi.iter().map(|&old| pi_inv[self.images[old]]).collect(),
        }
    }

    pub fn cycles(&self) -> CycleDecomposition {
        let k = self.len();
        let mut visited = vec![false; k];
        let mut cycles = Vec::new();
        for start in 0..k {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        CycleDecomposition { cycles }
    }

    pub fn max_cycle_len(&self) -> usize {
        self.cycles().cycles.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles().cycles.len()
    }

    /// Cycle notation with whitespace-separated entries, e.g. `(1 2)(3)`.
    pub fn to_cycle_string(&self) -> String {
        self.cycles().to_string()
    }

    /// Compact cycle notation as used in monomial rendering: non-trivial
    /// cycles only, entries concatenated, `id` for the identity.
    pub fn to_compact_string(&self) -> String {
        let dec = self.cycles();
        let parts: Vec<String> = dec
            .cycles
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let sep = if self.len() > 9 { " " } else { "" };
                let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", body.join(sep))
            })
            .collect();
        if parts.is_empty() {
            "id".to_string()
        } else {
            parts.concat()
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycles())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_line(&images).map_err(serde::de::Error::custom)
    }
}

/// Disjoint cycles of a permutation, fixed points included as 1-cycles.
///
/// Each cycle starts at its minimal element and cycles are sorted by their
/// minimal element. Points are stored 0-based; `Display` prints 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    /// 1-based cycles.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|x| x + 1).collect())
            .collect()
    }

    pub fn to_permutation(&self) -> Permutation {
        let k: usize = self.cycles.iter().map(Vec::len).sum();
        let mut images = vec![0; k];
        for c in &self.cycles {
            for (t, &x) in c.iter().enumerate() {
                images[x] = c[(t + 1) % c.len()];
            }
        }
        Permutation { images }
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

pub fn cycle_decomposition(p: &Permutation) -> CycleDecomposition {
    p.cycles()
}

/// Ordered multiset `(m_1, …, m_|M|)` of labels drawn from `{1, …, m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedMultiset {
    entries: Vec<usize>,
    m: usize,
}

impl OrderedMultiset {
    pub fn new(entries: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > m) {
            return Err(Error::InvalidMultiset(format!(
                "label {bad} outside 1..={m}"
            )));
        }
        Ok(OrderedMultiset { entries, m })
    }

    /// Infers `m` as the largest label present (1 for the empty multiset).
    pub fn from_entries(entries: Vec<usize>) -> Result<Self> {
        let m = entries.iter().copied().max().unwrap_or(1).max(1);
        OrderedMultiset::new(entries, m)
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub(crate) fn with_m(mut self, m: usize) -> Result<Self> {
        if self.entries.iter().any(|&e| e > m) {
            return Err(Error::InvalidMultiset(format!(
                "labels exceed the requested label count {m}"
            )));
        }
        self.m = m;
        Ok(self)
    }

    pub fn multidegree(&self) -> MultiDegree {
        let mut degrees = vec![0; self.m];
        for &e in &self.entries {
            degrees[e - 1] += 1;
        }
        MultiDegree { degrees }
    }

    pub fn is_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Occurrence counts of each label `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree {
    pub degrees: Vec<usize>,
}

impl MultiDegree {
    pub fn new(degrees: Vec<usize>) -> Self {
        MultiDegree { degrees }
    }

    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.degrees.len()
    }

    /// Weakly increasing label sequence with label `i` repeated `degrees[i-1]` times.
    pub fn sorted_labels(&self) -> Vec<usize> {
        self.degrees
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i + 1, a))
            .collect()
    }

    /// Parses a comma-separated list such as `"2,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        parse_usize_list(s).map(MultiDegree::new)
    }

    /// All multidegrees with `m` labels and total degree exactly `total`,
    /// in lexicographically decreasing order of the first entry.
    pub fn all_with_total(m: usize, total: usize) -> Vec<MultiDegree> {
        fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiDegree>) {
            if cur.len() + 1 == m {
                cur.push(left);
                out.push(MultiDegree::new(cur.clone()));
                cur.pop();
                return;
            }
            for a in (0..=left).rev() {
                cur.push(a);
                rec(m, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if m == 0 {
            return out;
        }
        rec(m, total, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Local dimensions `(d_1, …, d_n)` of `V = V_1 ⊗ … ⊗ V_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DimensionVector {
    dims: Vec<usize>,
}

impl DimensionVector {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimensions(
                "at least one tensor factor required".into(),
            ));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidDimensions(
                "every d_i must be at least 1".into(),
            ));
        }
        Ok(DimensionVector { dims })
    }

    pub fn parse(s: &str) -> Result<Self> {
        DimensionVector::new(parse_usize_list(s)?)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    /// `dim V = ∏ d_i`.
    pub fn dim_v(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major stride of wire `i` inside a flattened multi-index (wire 1 outermost).
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }

    /// Splits a flat index into its per-wire digits.
    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = flat % self.dims[i];
            flat /= self.dims[i];
        }
        out
    }
}

impl<'de> Deserialize<'de> for DimensionVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dims = Vec::<usize>::deserialize(deserializer)?;
        DimensionVector::new(dims).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub(crate) fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let s = s
        .trim()
        .trim_start_matches(['(', '['])
        .trim_end_matches([')', ']']);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("expected a non-negative integer, got {t:?}")))
        })
        .collect()
}

/// Euler's totient.
pub fn euler_totient(n: u64) -> u64 {
    assert!(n >= 1, "totient is defined for n >= 1");
    let mut result = n;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Number of `m`-ary necklaces of length `k`: `(1/k) Σ_{ℓ | k} φ(ℓ) m^{k/ℓ}`.
pub fn necklace_count(m: u64, k: u64) -> BigUint {
    assert!(m >= 1 && k >= 1, "necklace_count needs m, k >= 1");
    let base = BigUint::from(m);
    let mut sum = BigUint::zero();
    for l in (1..=k).filter(|l| k.is_multiple_of(*l)) {
        sum += BigUint::from(euler_totient(l)) * base.pow((k / l) as u32);
    }
    let (q, r) = sum.div_rem(&BigUint::from(k));
    assert!(r.is_zero(), "totient sum not divisible by k");
    q
}

/// Lexicographically minimal representatives of every rotation class of
/// length-`k` words over `{1, …, m}`, in lexicographic order.
///
/// Generated with the Fredricksen–Kessler–Maiorana prenecklace recursion,
/// keeping the prenecklaces whose period divides `k`.
pub fn enumerate_necklaces(m: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(m >= 1 && k >= 1);
    let mut out = Vec::new();
    let mut a = vec![0usize; k + 1];
    fn gen(t: usize, p: usize, k: usize, m: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if t > k {
            if k.is_multiple_of(p) {
                out.push(a[1..=k].iter().map(|x| x + 1).collect());
            }
            return;
        }
        a[t] = a[t - p];
        gen(t + 1, p, k, m, a, out);
        for j in (a[t - p] + 1)..m {
            a[t] = j;
            gen(t + 1, t, k, m, a, out);
        }
    }
    gen(1, 1, k, m, &mut a, &mut out);
    out
}

/// Minimal rotation of a word (its necklace representative).
pub fn min_rotation<T: Ord + Clone>(word: &[T]) -> Vec<T> {
    (0..word.len().max(1))
        .map(|s| {
            word[s..]
                .iter()
                .chain(word[..s].iter())
                .cloned()
                .collect::<Vec<T>>()
        })
        .min()
        .unwrap_or_default()
}

/// Binomial coefficient as u64.
pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Iterator over all permutations of `0..k` in lexicographic order.
pub(crate) fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub(crate) fn factorial(k: usize) -> u128 {
    (1..=k as u128).product::<u128>().max(One::one())
}
