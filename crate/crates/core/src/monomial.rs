//! Generalized trace monomials `Tr^M_σ`.
//!
//! A monomial is an ordered multiset `M` of labels together with `n`
//! permutations of the positions `{1, …, |M|}`, one per tensor factor
//! ("wire"). Position `p` holds the input `A_{M[p]}`; on wire `i` the
//! column index of position `p` is joined to the row index of position
//! `σ_i(p)`. On simple tensors this is the product over wires of products
//! over cycles of traces of matrix products taken in cycle order.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{
    all_permutations, binomial, factorial, min_rotation, DimensionVector, MultiDegree,
    OrderedMultiset, Permutation,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceMonomial {
    multiset: OrderedMultiset,
    sigma: Vec<Permutation>,
}

/// Per-wire largest cycle length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GirthTuple {
    pub sizes: Vec<usize>,
}

impl GirthTuple {
    /// Componentwise maximum.
    pub fn join(&self, other: &GirthTuple) -> GirthTuple {
        GirthTuple {
            sizes: self
                .sizes
                .iter()
                .zip(&other.sizes)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }
}

/// Which girth bound to enforce when filtering monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GirthBound {
    #[default]
    Off,
    /// `s_i ≤ d_i²`.
    Square,
    /// `s_i ≤ binom(d_i + 1, 2)`, claimed only when every `d_i ≤ 3`.
    SmallDim,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationFilter {
    pub connected_only: bool,
    pub girth: GirthBound,
}

/// Upper limit on `(|M|!)^n` tuples visited by [`enumerate_generators`].
pub const ENUMERATION_LIMIT: u128 = 20_000_000;

impl TraceMonomial {
    pub fn new(multiset: OrderedMultiset, sigma: Vec<Permutation>) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::InvalidDimensions(
                "a monomial needs at least one wire".into(),
            ));
        }
        for s in &sigma {
            if s.len() != multiset.len() {
                return Err(Error::SizeMismatch {
                    what: "permutation domain vs |M|",
                    expected: multiset.len(),
                    found: s.len(),
                });
            }
        }
        Ok(TraceMonomial { multiset, sigma })
    }

    /// Convenience constructor from 1-based labels and cycle strings.
    pub fn parse(labels: &[usize], m: usize, cycles: &[&str]) -> Result<Self> {
        let ms = OrderedMultiset::new(labels.to_vec(), m)?;
        let sigma = cycles
            .iter()
            .map(|c| Permutation::parse_cycles(c, labels.len()))
            .collect::<Result<Vec<_>>>()?;
        TraceMonomial::new(ms, sigma)
    }

    /// The empty monomial (`|M| = 0`), which evaluates to 1.
    pub fn unit(n: usize, m: usize) -> Self {
        TraceMonomial {
            multiset: OrderedMultiset::new(Vec::new(), m.max(1)).expect("empty multiset"),
            sigma: vec![Permutation::identity(0); n.max(1)],
        }
    }

    pub fn multiset(&self) -> &OrderedMultiset {
        &self.multiset
    }

    pub fn labels(&self) -> &[usize] {
        self.multiset.entries()
    }

    pub fn sigma(&self) -> &[Permutation] {
        &self.sigma
    }

    /// `|M|`, the polynomial degree.
    pub fn degree(&self) -> usize {
        self.multiset.len()
    }

    /// Number of tensor factors.
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn m(&self) -> usize {
        self.multiset.m()
    }

    pub fn multidegree(&self) -> MultiDegree {
        self.multiset.multidegree()
    }

    pub fn girth(&self) -> GirthTuple {
        GirthTuple {
            sizes: self.sigma.iter().map(Permutation::max_cycle_len).collect(),
        }
    }

    /// Whether every wire's girth is within the chosen bound.
    pub fn girth_filter(&self, d: &DimensionVector, use_small_dim: bool) -> Result<bool> {
        let bounds = girth_bounds(d, use_small_dim)?;
        if bounds.len() != self.n() {
            return Err(Error::SizeMismatch {
                what: "dimension vector vs wires",
                expected: self.n(),
                found: bounds.len(),
            });
        }
        Ok(self.girth().sizes.iter().zip(&bounds).all(|(s, b)| s <= b))
    }

    fn with_m(self, m: usize) -> Result<Self> {
        Ok(TraceMonomial {
            multiset: self.multiset.with_m(m)?,
            sigma: self.sigma,
        })
    }

    /// Positions relabeled so that new position `q` is old position `pi[q]`.
    fn relabel(&self, pi: &[usize]) -> TraceMonomial {
        let mut pi_inv = vec![0; pi.len()];
        for (q, &old) in pi.iter().enumerate() {
            pi_inv[old] = q;
        }
        let labels = pi.iter().map(|&old| self.labels()[old]).collect();
        TraceMonomial {
            multiset: OrderedMultiset::new(labels, self.m()).expect("labels unchanged"),
            sigma: self.sigma.iter().map(|s| s.relabel(pi, &pi_inv)).collect(),
        }
    }

    fn sigma_key(&self) -> Vec<Vec<usize>> {
        self.sigma.iter().map(|s| s.zero_based().to_vec()).collect()
    }

    /// Serialization order key: labels first, then one-line images per wire.
    pub fn encoding(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        (
            self.labels().to_vec(),
            self.sigma.iter().map(Permutation::one_line).collect(),
        )
    }

    /// Representative with the smallest encoding among all position
    /// relabelings that sort `M`. Relabeling conjugates every `σ_i` by the
    /// same bijection, which does not change the polynomial.
    pub fn canonicalize(&self) -> TraceMonomial {
        let sorting = sorting_relabelings(self.labels());
        let mut best: Option<TraceMonomial> = None;
        for pi in sorting {
            let cand = self.relabel(&pi);
            if best
                .as_ref()
                .is_none_or(|b| cand.sigma_key() < b.sigma_key())
            {
                best = Some(cand);
            }
        }
        best.unwrap_or_else(|| self.clone())
    }

    pub fn is_canonical(&self) -> bool {
        &self.canonicalize() == self
    }

    /// Disjoint union `Tr^{M⊔M'}_{σ⊔σ'}`: the second block is shifted past
    /// the first.
    pub fn product(&self, other: &TraceMonomial) -> Result<TraceMonomial> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                what: "wires in product",
                expected: self.n(),
                found: other.n(),
            });
        }
        if self.m() != other.m() {
            return Err(Error::SizeMismatch {
                what: "label count in product",
                expected: self.m(),
                found: other.m(),
            });
        }
        let shift = self.degree();
        let labels: Vec<usize> = self
            .labels()
            .iter()
            .chain(other.labels())
            .copied()
            .collect();
        let sigma = self
            .sigma
            .iter()
            .zip(&other.sigma)
            .map(|(a, b)| {
                let images = a
                    .zero_based()
                    .iter()
                    .copied()
                    .chain(b.zero_based().iter().map(|x| x + shift))
                    .collect();
                Permutation::from_zero_based(images)
            })
            .collect();
        TraceMonomial::new(OrderedMultiset::new(labels, self.m())?, sigma)
    }

    /// Position-connectivity classes: positions `p`, `q` are joined when they
    /// lie in a common cycle of some `σ_i`. Each class is returned as its own
    /// canonical monomial, ordered by smallest position. Their product equals
    /// this monomial as a function on all of `End(V)^{⊕m}`.
    pub fn components(&self) -> Vec<TraceMonomial> {
        let k = self.degree();
        if k == 0 {
            return vec![self.clone()];
        }
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for s in &self.sigma {
            for p in 0..k {
                let (a, b) = (find(&mut parent, p), find(&mut parent, s.apply(p)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of: HashMap<usize, usize> = HashMap::new();
        for p in 0..k {
            let root = find(&mut parent, p);
            let g = *group_of.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(p);
        }
        groups
            .into_iter()
            .map(|positions| self.restrict(&positions).canonicalize())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Sub-monomial on a union of connectivity classes.
    fn restrict(&self, positions: &[usize]) -> TraceMonomial {
        let mut new_index = vec![usize::MAX; self.degree()];
        for (q, &p) in positions.iter().enumerate() {
            new_index[p] = q;
        }
        let labels = positions.iter().map(|&p| self.labels()[p]).collect();
        let sigma = self
            .sigma
            .iter()
            .map(|s| {
                Permutation::from_zero_based(
                    positions.iter().map(|&p| new_index[s.apply(p)]).collect(),
                )
            })
            .collect();
        TraceMonomial {
            multiset: OrderedMultiset::new(labels, self.m()).expect("labels unchanged"),
            sigma,
        }
    }

    /// Per wire, the label words read along each cycle.
    fn cycle_words(&self) -> Vec<Vec<Vec<usize>>> {
        self.sigma
            .iter()
            .map(|s| {
                s.cycles()
                    .cycles
                    .iter()
                    .map(|c| c.iter().map(|&p| self.labels()[p]).collect())
                    .collect()
            })
            .collect()
    }

    /// Canonical form under independent label-preserving relabelings on each
    /// wire. Two monomials with equal `segre_canonicalize` agree on every
    /// tuple of simple tensors, because there each wire contributes the
    /// product of traces over its cycle words and nothing else.
    pub fn segre_canonicalize(&self) -> TraceMonomial {
        let mut sorted_labels = self.labels().to_vec();
        sorted_labels.sort_unstable();
        let words = self.cycle_words();
        build_from_wire_words(&sorted_labels, self.m(), &words)
    }

    /// Finest factorization valid on simple tensors.
    ///
    /// Splits `M` into the largest number of blocks such that on every wire
    /// the cycles can be grouped, block by block, with matching label
    /// multisets. On simple inputs each wire factor only sees cycle words,
    /// so equal labels may be exchanged wire by wire; the product of the
    /// returned factors therefore agrees with `self` on simple tensors
    /// (but not, in general, on all of `End(V)^{⊕m}`; see [`Self::components`]).
    /// Factors are canonical and ordered by the block holding position 1.
    pub fn factor(&self) -> Vec<TraceMonomial> {
        if self.degree() == 0 {
            return vec![self.clone()];
        }
        let words = self.cycle_words();
        let m = self.m();
        let counts: Vec<Vec<Vec<u16>>> = words
            .iter()
            .map(|w| w.iter().map(|c| label_counts(c, m)).collect())
            .collect();
        let full: Vec<u64> = counts.iter().map(|c| (1u64 << c.len()) - 1).collect();
        let mut memo = HashMap::new();
        let (_, blocks) = best_split(&counts, &full, &mut memo);
        blocks
            .into_iter()
            .map(|masks| {
                let block_words: Vec<Vec<Vec<usize>>> = masks
                    .iter()
                    .zip(&words)
                    .map(|(&mask, w)| {
                        w.iter()
                            .enumerate()
                            .filter(|(j, _)| mask >> j & 1 == 1)
                            .map(|(_, c)| c.clone())
                            .collect()
                    })
                    .collect();
                let mut labels: Vec<usize> = block_words[0].iter().flatten().copied().collect();
                labels.sort_unstable();
                build_from_wire_words(&labels, m, &block_words).canonicalize()
            })
            .collect()
    }

    /// Text rendering such as `Tr^{(1,1,2)}_{(12),(23)}`.
    pub fn render(&self) -> String {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        let sig: Vec<String> = self
            .sigma
            .iter()
            .map(Permutation::to_compact_string)
            .collect();
        format!("Tr^{{({})}}_{{{}}}", labels.join(","), sig.join(","))
    }
}

impl fmt::Display for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    #[serde(rename = "M")]
    labels: Vec<usize>,
    sigma: Vec<String>,
    /// Only written when it exceeds the largest label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
}

impl Serialize for TraceMonomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MonomialJson {
            labels: self.labels().to_vec(),
            sigma: self
                .sigma
                .iter()
                .map(Permutation::to_cycle_string)
                .collect(),
            m: (self.labels().iter().max().copied().unwrap_or(0) < self.m()).then_some(self.m()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TraceMonomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MonomialJson::deserialize(deserializer)?;
        let build = || -> Result<TraceMonomial> {
            let ms = match raw.m {
                Some(m) => OrderedMultiset::new(raw.labels.clone(), m)?,
                None => OrderedMultiset::from_entries(raw.labels.clone())?,
            };
            let k = ms.len();
            let sigma = raw
                .sigma
                .iter()
                .map(|s| Permutation::parse_cycles(s, k))
                .collect::<Result<Vec<_>>>()?;
            TraceMonomial::new(ms, sigma)
        };
        build().map_err(serde::de::Error::custom)
    }
}

fn label_counts(word: &[usize], m: usize) -> Vec<u16> {
    let mut c = vec![0u16; m];
    for &l in word {
        c[l - 1] += 1;
    }
    c
}

fn sum_counts(counts: &[Vec<u16>], mask: u64, m: usize) -> Vec<u16> {
    let mut total = vec![0u16; m];
    for (j, c) in counts.iter().enumerate() {
        if mask >> j & 1 == 1 {
            for (t, v) in total.iter_mut().zip(c) {
                *t += v;
            }
        }
    }
    total
}

fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    // all non-empty submasks, in decreasing numeric order
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
            return None;
        }
        sub = (sub - 1) & mask;
        Some(cur)
    })
}

type Blocks = Vec<Vec<u64>>;

/// Maximum number of blocks into which the remaining cycles (per wire, as
/// bitmasks) can be grouped with equal label content across wires.
fn best_split(
    counts: &[Vec<Vec<u16>>],
    remaining: &[u64],
    memo: &mut HashMap<Vec<u64>, (usize, Blocks)>,
) -> (usize, Blocks) {
    if remaining[0] == 0 {
        return (0, Vec::new());
    }
    if let Some(hit) = memo.get(remaining) {
        return hit.clone();
    }
    let m = counts[0].first().map_or(1, Vec::len);
    let first = remaining[0].trailing_zeros();
    let mut best: (usize, Blocks) = (0, Vec::new());
    let mut sub0: Vec<u64> = submasks(remaining[0])
        .filter(|s| s >> first & 1 == 1)
        .collect();
    // smaller blocks first so ties keep the finest early split
    sub0.sort_by_key(|s| (s.count_ones(), *s));
    for s0 in sub0 {
        let target = sum_counts(&counts[0], s0, m);
        let mut choices: Vec<Vec<u64>> = vec![vec![s0]];
        for (w, wire_counts) in counts.iter().enumerate().skip(1) {
            let options: Vec<u64> = submasks(remaining[w])
                .filter(|&s| sum_counts(wire_counts, s, m) == target)
                .collect();
            let mut next = Vec::new();
            for prefix in &choices {
                for &o in &options {
                    let mut p = prefix.clone();
                    p.push(o);
                    next.push(p);
                }
            }
            choices = next;
            if choices.is_empty() {
                break;
            }
        }
        for choice in choices {
            let rest: Vec<u64> = remaining.iter().zip(&choice).map(|(r, c)| r & !c).collect();
            let (count, mut blocks) = best_split(counts, &rest, memo);
            if count + 1 > best.0 {
                blocks.insert(0, choice.clone());
                best = (count + 1, blocks);
            }
        }
    }
    memo.insert(remaining.to_vec(), best.clone());
    best
}

/// Builds a monomial on sorted `labels` whose wire `i` has exactly the
/// given cycle words, placing words in a canonical order.
fn build_from_wire_words(labels: &[usize], m: usize, words: &[Vec<Vec<usize>>]) -> TraceMonomial {
    let k = labels.len();
    let mut first_slot = HashMap::new();
    for (q, &l) in labels.iter().enumerate().rev() {
        first_slot.insert(l, q);
    }
    let sigma = words
        .iter()
        .map(|wire| {
            let mut canon: Vec<Vec<usize>> = wire.iter().map(|w| min_rotation(w)).collect();
            canon.sort();
            let mut next_slot = first_slot.clone();
            let mut images = vec![0; k];
            for word in &canon {
                let slots: Vec<usize> = word
                    .iter()
                    .map(|l| {
                        let s = next_slot.get_mut(l).expect("label present");
                        let q = *s;
                        *s += 1;
                        q
                    })
                    .collect();
                for t in 0..slots.len() {
                    images[slots[t]] = slots[(t + 1) % slots.len()];
                }
            }
            Permutation::from_zero_based(images)
        })
        .collect();
    TraceMonomial {
        multiset: OrderedMultiset::new(labels.to_vec(), m).expect("valid labels"),
        sigma,
    }
}

/// All bijections `pi` (new position → old position) whose relabeling
/// sorts `labels` weakly increasing.
fn sorting_relabelings(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut by_label: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (p, &l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().push(p);
    }
    let mut result: Vec<Vec<usize>> = vec![Vec::new()];
    for positions in by_label.values() {
        let orders = all_permutations(positions.len());
        let mut next = Vec::with_capacity(result.len() * orders.len());
        for prefix in &result {
            for ord in &orders {
                let mut p = prefix.clone();
                p.extend(ord.iter().map(|&i| positions[i]));
                next.push(p);
            }
        }
        result = next;
    }
    result
}

/// Per-wire girth bounds `d_i²`, or `binom(d_i+1, 2)` in small-dimension mode.
pub fn girth_bounds(d: &DimensionVector, use_small_dim: bool) -> Result<Vec<usize>> {
    if use_small_dim {
        if let Some(&big) = d.dims().iter().find(|&&di| di > 3) {
            return Err(Error::BoundUnavailable(format!(
                "the binom(d+1,2) girth bound needs every d_i <= 3, got d_i = {big}"
            )));
        }
        Ok(d.dims()
            .iter()
            .map(|&di| binomial(di as u64 + 1, 2) as usize)
            .collect())
    } else {
        Ok(d.dims().iter().map(|&di| di * di).collect())
    }
}

/// Restitution of the multilinear `Tr_σ` along `alpha`: positions keep
/// their permutations and receive labels `1…1 2…2 …`, label `i` repeated
/// `alpha[i]` times.
pub fn restitution(sigma: &[Permutation], alpha: &MultiDegree) -> Result<TraceMonomial> {
    let k = alpha.total();
    for s in sigma {
        if s.len() != k {
            return Err(Error::SizeMismatch {
                what: "restitution: |alpha| vs permutation size",
                expected: k,
                found: s.len(),
            });
        }
    }
    let ms = OrderedMultiset::new(alpha.sorted_labels(), alpha.m().max(1))?;
    TraceMonomial::new(ms, sigma.to_vec())
}

/// All canonical monomials of multidegree `alpha` on `d.n()` wires, in
/// encoding order, optionally restricted to position-connected ones and to
/// those within a girth bound.
pub fn enumerate_generators(
    alpha: &MultiDegree,
    d: &DimensionVector,
    filter: EnumerationFilter,
) -> Result<Vec<TraceMonomial>> {
    let k = alpha.total();
    let n = d.n();
    if k == 0 {
        return Ok(Vec::new());
    }
    let tuples = factorial(k).checked_pow(n as u32).unwrap_or(u128::MAX);
    if tuples > ENUMERATION_LIMIT {
        return Err(Error::GuardExceeded {
            what: "permutation tuple enumeration",
            size: tuples,
            limit: ENUMERATION_LIMIT,
            advice: "lower |alpha| or the number of tensor factors",
        });
    }
    let bounds = match filter.girth {
        GirthBound::Off => None,
        GirthBound::Square => Some(girth_bounds(d, false)?),
        GirthBound::SmallDim => Some(girth_bounds(d, true)?),
    };
    let labels = alpha.sorted_labels();
    let m = alpha.m().max(1);
    let stabilizer = sorting_relabelings(&labels);
    let perms: Vec<Permutation> = all_permutations(k)
        .into_iter()
        .map(Permutation::from_zero_based)
        .collect();
    let ms = OrderedMultiset::new(labels, m)?;

    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut reps: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let key: Vec<Vec<usize>> = idx
            .iter()
            .map(|&i| perms[i].zero_based().to_vec())
            .collect();
        if !seen.contains(&key) {
            let mono = TraceMonomial {
                multiset: ms.clone(),
                sigma: idx.iter().map(|&i| perms[i].clone()).collect(),
            };
            let mut orbit_min = key.clone();
            for pi in &stabilizer {
                let img = mono.relabel(pi).sigma_key();
                if img < orbit_min {
                    orbit_min = img.clone();
                }
                seen.insert(img);
            }
            reps.insert(orbit_min);
        }
        // odometer
        let mut w = n;
        loop {
            if w == 0 {
                break;
            }
            w -= 1;
            idx[w] += 1;
            if idx[w] < perms.len() {
                break;
            }
            idx[w] = 0;
            if w == 0 {
                w = usize::MAX;
                break;
            }
        }
        if w == usize::MAX {
            break;
        }
    }

    let mut out = Vec::new();
    for key in reps {
        let mono = TraceMonomial {
            multiset: ms.clone(),
            sigma: key.into_iter().map(Permutation::from_zero_based).collect(),
        };
        if let Some(b) = &bounds {
            if mono.girth().sizes.iter().zip(b).any(|(s, bi)| s > bi) {
                continue;
            }
        }
        if filter.connected_only && !mono.is_connected() {
            continue;
        }
        out.push(mono.with_m(m)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(labels: &[usize], m: usize, cycles: &[&str]) -> TraceMonomial {
        TraceMonomial::parse(labels, m, cycles).unwrap()
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!(mono(&[1], 1, &["id"]).multidegree().degrees, vec![1]);
        assert_eq!(
            mono(&[1, 2, 1], 2, &["(12)", "(23)"]).multidegree().degrees,
            vec![2, 1]
        );
        assert_eq!(
            mono(&[2, 1, 1], 2, &["(12)", "(23)"]).multidegree().degrees,
            vec![2, 1]
        );
    }

    #[test]
    fn girth_examples() {
        assert_eq!(mono(&[1, 1], 1, &["id", "id"]).girth().sizes, vec![1, 1]);
        assert_eq!(
            mono(&[1, 1, 1], 1, &["(12)(3)", "(1)(23)"]).girth().sizes,
            vec![2, 2]
        );
        assert_eq!(
            mono(&[1, 1, 1], 1, &["(123)", "id"]).girth().sizes,
            vec![3, 1]
        );
    }

    #[test]
    fn girth_filter_examples() {
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        assert!(mono(&[1, 1, 1], 1, &["(12)", "(23)"])
            .girth_filter(&d, false)
            .unwrap());
        let long = mono(&[1; 5], 1, &["(12345)", "id"]);
        assert!(!long.girth_filter(&d, false).unwrap());
        let three = mono(&[1; 3], 1, &["(123)", "(132)"]);
        assert!(three.girth_filter(&d, true).unwrap());
        let four = mono(&[1; 4], 1, &["(1234)", "id"]);
        assert!(four.girth_filter(&d, false).unwrap());
        assert!(!four.girth_filter(&d, true).unwrap());
        let big = DimensionVector::new(vec![4, 2]).unwrap();
        assert!(matches!(
            three.girth_filter(&big, true),
            Err(Error::BoundUnavailable(_))
        ));
    }

    #[test]
    fn canonicalize_sorts_multiset() {
        let t = mono(&[2, 1, 1], 2, &["(12)", "(23)"]);
        let c = t.canonicalize();
        assert_eq!(c.labels(), &[1, 1, 2]);
        assert_eq!(c.canonicalize(), c);
        // exhaustive oracle: minimum over all sorting relabelings, computed by hand
        let mut best = None::<Vec<Vec<usize>>>;
        for pi in all_permutations(3) {
            let labels: Vec<usize> = pi.iter().map(|&o| t.labels()[o]).collect();
            if labels != vec![1, 1, 2] {
                continue;
            }
            let key = t.relabel(&pi).sigma_key();
            if best.as_ref().is_none_or(|b| &key < b) {
                best = Some(key);
            }
        }
        assert_eq!(c.sigma_key(), best.unwrap());
        let single = mono(&[1], 1, &["id"]);
        assert_eq!(single.canonicalize(), single);
    }

    #[test]
    fn factoring_pair() {
        let t = mono(&[1, 2, 1], 2, &["(12)(3)", "(1)(23)"]);
        let f = t.factor();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], mono(&[1, 2], 2, &["(12)", "(12)"]));
        assert_eq!(f[1], mono(&[1], 2, &["id", "id"]));
        let prod = f[0].product(&f[1]).unwrap();
        assert_eq!(prod.segre_canonicalize(), t.segre_canonicalize());

        let u = mono(&[2, 1, 1], 2, &["(12)(3)", "(1)(23)"]);
        assert_eq!(u.factor(), vec![u.canonicalize()]);

        // position connectivity sees the first monomial as connected too
        assert!(t.is_connected());
        assert!(u.is_connected());
    }

    #[test]
    fn identity_monomial_splits_into_degree_one_factors() {
        let t = mono(&[1, 1, 1], 1, &["id", "id"]);
        assert_eq!(t.factor().len(), 3);
        assert_eq!(t.components().len(), 3);
        for f in t.factor() {
            assert_eq!(f.degree(), 1);
        }
    }

    #[test]
    fn product_examples() {
        let a = mono(&[1, 2], 2, &["(12)", "(12)"]);
        let b = mono(&[1], 2, &["id", "id"]);
        let ab = a.product(&b).unwrap();
        assert_eq!(ab.labels(), &[1, 2, 1]);
        assert_eq!(ab.sigma()[0].to_cycle_string(), "(1 2)(3)");
        let unit = TraceMonomial::unit(2, 2);
        assert_eq!(a.product(&unit).unwrap(), a);
        assert_eq!(
            a.product(&b).unwrap().canonicalize(),
            b.product(&a).unwrap().canonicalize()
        );
        let other_n = mono(&[1], 2, &["id"]);
        assert!(a.product(&other_n).is_err());
        assert!(a.product(&mono(&[1], 3, &["id", "id"])).is_err());
    }

    #[test]
    fn restitution_examples() {
        let c3 = Permutation::parse_cycles("(123)", 3).unwrap();
        let r = restitution(&[c3.clone(), c3.clone()], &MultiDegree::new(vec![3])).unwrap();
        assert_eq!(r.labels(), &[1, 1, 1]);
        assert_eq!(r.sigma(), &[c3.clone(), c3]);
        let s1 = Permutation::parse_cycles("(12)", 3).unwrap();
        let s2 = Permutation::parse_cycles("(23)", 3).unwrap();
        let r = restitution(&[s1, s2], &MultiDegree::new(vec![2, 1])).unwrap();
        assert_eq!(r, mono(&[1, 1, 2], 2, &["(12)", "(23)"]));
        let id = Permutation::identity(3);
        let r = restitution(&[id], &MultiDegree::new(vec![1, 1, 1])).unwrap();
        assert_eq!(r.labels(), &[1, 2, 3]);
        assert!(restitution(&[Permutation::identity(2)], &MultiDegree::new(vec![3])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let d1 = DimensionVector::new(vec![2]).unwrap();
        let d22 = DimensionVector::new(vec![2, 2]).unwrap();
        let one =
            enumerate_generators(&MultiDegree::new(vec![1]), &d1, Default::default()).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0], mono(&[1], 1, &["id"]));
        let conn = EnumerationFilter {
            connected_only: true,
            ..Default::default()
        };
        let two = enumerate_generators(&MultiDegree::new(vec![2]), &d1, conn).unwrap();
        assert_eq!(two, vec![mono(&[1, 1], 1, &["(12)"])]);
        let mixed =
            enumerate_generators(&MultiDegree::new(vec![1, 1]), &d22, Default::default()).unwrap();
        assert_eq!(mixed.len(), 4);
        assert!(
            enumerate_generators(&MultiDegree::new(vec![0]), &d1, Default::default())
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn enumeration_counts_orbits() {
        // simultaneous-conjugation orbits of S_4 on S_4 x S_4: sum of centralizer orders
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        let all = enumerate_generators(&MultiDegree::new(vec![4]), &d, Default::default()).unwrap();
        assert_eq!(all.len(), 24 + 4 + 8 + 3 + 4);
        let sorted = {
            let mut s = all.clone();
            s.sort_by_key(TraceMonomial::encoding);
            s
        };
        assert_eq!(all, sorted);
        assert!(all.iter().all(TraceMonomial::is_canonical));
    }

    #[test]
    fn json_round_trip() {
        let t = mono(&[1, 1, 2], 2, &["(12)", "(23)"]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"M":[1,1,2],"sigma":["(1 2)(3)","(1)(2 3)"]}"#);
        let back: TraceMonomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.render(), "Tr^{(1,1,2)}_{(12),(23)}");
        assert!(
            serde_json::from_str::<TraceMonomial>(r#"{"M":[1,2],"sigma":["(1 2 3)"]}"#).is_err()
        );
    }
}
