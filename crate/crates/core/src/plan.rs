//! Contraction planning for trace monomials on dense inputs.
//!
//! Every pair (wire `i`, position `q`) names one index of size `d_i`.
//! Position `p` contributes the tensor `A_{M[p]}` whose row index on wire
//! `i` is `(i, p)` and whose column index is `(i, σ_i(p))`. Each index
//! occurs exactly twice, so the monomial is a closed tensor network; a plan
//! is an ordered list of pairwise contractions ending with one scalar.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Scalar;
use crate::monomial::TraceMonomial;
use crate::perm::DimensionVector;
use crate::tensor::{EndoTuple, IntegerInputs};

/// Index `(wire, position)`, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexLabel {
    pub wire: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PlanStep {
    /// Sums the indices private to one tensor (fixed points of some `σ_i`).
    Trace {
        slot: usize,
        summed: Vec<IndexLabel>,
        result: Vec<IndexLabel>,
        cost: u64,
    },
    /// Contracts `rhs` into `lhs`; the result occupies slot `lhs`.
    Contract {
        lhs: usize,
        rhs: usize,
        summed: Vec<IndexLabel>,
        result: Vec<IndexLabel>,
        cost: u64,
    },
}

impl PlanStep {
    pub fn cost(&self) -> u64 {
        match self {
            PlanStep::Trace { cost, .. } | PlanStep::Contract { cost, .. } => *cost,
        }
    }

    pub fn result(&self) -> &[IndexLabel] {
        match self {
            PlanStep::Trace { result, .. } | PlanStep::Contract { result, .. } => result,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionPlan {
    #[serde(rename = "M")]
    pub labels: Vec<usize>,
    /// One-line images (1-based) per wire.
    pub sigma: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    /// Index sets of the loaded tensors, one per position.
    pub tensors: Vec<Vec<IndexLabel>>,
    pub steps: Vec<PlanStep>,
    pub peak_size: u64,
    pub cost: u64,
    /// `|M| · (dim V)^{|M|}`, the multiplication count of the direct sum.
    pub naive_cost: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_hint: Option<Vec<usize>>,
}

impl ContractionPlan {
    fn matches(&self, t: &TraceMonomial, d: &DimensionVector) -> bool {
        self.labels == t.labels()
            && self.sigma == t.sigma().iter().map(|s| s.one_line()).collect::<Vec<_>>()
            && self.dims == d.dims()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

type Id = usize;

struct Network {
    k: usize,
    dims: Vec<usize>,
    /// Initial (diagonal-merged) index ids per position.
    tensors: Vec<Vec<Id>>,
    /// Ids with both ends inside one loaded tensor.
    private: Vec<Vec<Id>>,
}

impl Network {
    fn new(t: &TraceMonomial, d: &DimensionVector) -> Self {
        let k = t.degree();
        let mut tensors = Vec::with_capacity(k);
        let mut private = Vec::with_capacity(k);
        for p in 0..k {
            let mut ids = Vec::new();
            let mut own = Vec::new();
            for (i, s) in t.sigma().iter().enumerate() {
                let row = i * k + p;
                let col = i * k + s.apply(p);
                ids.push(row);
                if col == row {
                    own.push(row);
                } else {
                    ids.push(col);
                }
            }
            tensors.push(ids);
            private.push(own);
        }
        Network {
            k,
            dims: d.dims().to_vec(),
            tensors,
            private,
        }
    }

    fn dim(&self, id: Id) -> usize {
        self.dims[id / self.k]
    }

    fn size(&self, ids: &[Id]) -> u64 {
        ids.iter()
            .fold(1u64, |acc, &id| acc.saturating_mul(self.dim(id) as u64))
    }

    fn label(&self, id: Id) -> IndexLabel {
        IndexLabel {
            wire: id / self.k + 1,
            position: id % self.k + 1,
        }
    }

    fn labels(&self, ids: &[Id]) -> Vec<IndexLabel> {
        ids.iter().map(|&id| self.label(id)).collect()
    }
}

fn contract_ids(lhs: &[Id], rhs: &[Id]) -> (Vec<Id>, Vec<Id>) {
    let shared: Vec<Id> = lhs.iter().copied().filter(|id| rhs.contains(id)).collect();
    let result = lhs
        .iter()
        .chain(rhs)
        .copied()
        .filter(|id| !shared.contains(id))
        .collect();
    (result, shared)
}

fn naive_cost(k: usize, d: &DimensionVector) -> u64 {
    (k as u64).saturating_mul((d.dim_v() as u64).saturating_pow(k as u32))
}

/// Greedy plan: at each step contract the pair of live tensors with the
/// smallest result, breaking ties by cost and then by `(lhs, rhs)`.
/// `rank_hint` (ranks of the inputs, when known) is recorded in the plan.
pub fn plan_contraction(
    t: &TraceMonomial,
    d: &DimensionVector,
    rank_hint: Option<&[usize]>,
) -> Result<ContractionPlan> {
    if d.n() != t.n() {
        return Err(Error::SizeMismatch {
            what: "dimension vector vs wires",
            expected: t.n(),
            found: d.n(),
        });
    }
    let net = Network::new(t, d);
    let mut steps = Vec::new();
    let mut live: Vec<Option<Vec<Id>>> = Vec::with_capacity(net.k);
    let mut peak = 0u64;
    for p in 0..net.k {
        let ids = &net.tensors[p];
        peak = peak.max(net.size(ids));
        if net.private[p].is_empty() {
            live.push(Some(ids.clone()));
        } else {
            let result: Vec<Id> = ids
                .iter()
                .copied()
                .filter(|id| !net.private[p].contains(id))
                .collect();
            steps.push(PlanStep::Trace {
                slot: p,
                summed: net.labels(&net.private[p]),
                result: net.labels(&result),
                cost: net.size(ids),
            });
            live.push(Some(result));
        }
    }
    loop {
        let slots: Vec<usize> = (0..live.len()).filter(|&s| live[s].is_some()).collect();
        if slots.len() < 2 {
            break;
        }
        let mut best: Option<(u64, u64, usize, usize)> = None;
        for (ai, &a) in slots.iter().enumerate() {
            for &b in &slots[ai + 1..] {
                let (la, lb) = (live[a].as_ref().unwrap(), live[b].as_ref().unwrap());
                let (result, shared) = contract_ids(la, lb);
                let size = net.size(&result);
                let cost = size.saturating_mul(net.size(&shared));
                let key = (size, cost, a, b);
                if best.is_none_or(|bk| key < bk) {
                    best = Some(key);
                }
            }
        }
        let (size, cost, a, b) = best.expect("at least one pair");
        let lb = live[b].take().unwrap();
        let la = live[a].take().unwrap();
        let (result, shared) = contract_ids(&la, &lb);
        peak = peak.max(size);
        steps.push(PlanStep::Contract {
            lhs: a,
            rhs: b,
            summed: net.labels(&shared),
            result: net.labels(&result),
            cost,
        });
        live[a] = Some(result);
    }
    if net.k == 0 {
        peak = 1;
    }
    Ok(ContractionPlan {
        labels: t.labels().to_vec(),
        sigma: t.sigma().iter().map(|s| s.one_line()).collect(),
        dims: d.dims().to_vec(),
        tensors: net.tensors.iter().map(|ids| net.labels(ids)).collect(),
        cost: steps
            .iter()
            .fold(0u64, |acc, s| acc.saturating_add(s.cost())),
        steps,
        peak_size: peak,
        naive_cost: naive_cost(net.k, d),
        rank_hint: rank_hint.map(<[usize]>::to_vec),
    })
}

/// Largest network handled by [`optimal_contraction_cost`].
pub const OPTIMAL_PLAN_LIMIT: usize = 8;

/// Minimum total cost over all contraction trees (subset dynamic program),
/// with the same cost model as [`plan_contraction`].
pub fn optimal_contraction_cost(t: &TraceMonomial, d: &DimensionVector) -> Result<u64> {
    let k = t.degree();
    if k > OPTIMAL_PLAN_LIMIT {
        return Err(Error::GuardExceeded {
            what: "exhaustive contraction search",
            size: k as u128,
            limit: OPTIMAL_PLAN_LIMIT as u128,
            advice: "use the greedy planner",
        });
    }
    if d.n() != t.n() {
        return Err(Error::SizeMismatch {
            what: "dimension vector vs wires",
            expected: t.n(),
            found: d.n(),
        });
    }
    if k == 0 {
        return Ok(0);
    }
    let net = Network::new(t, d);
    let full = (1usize << k) - 1;
    // external ids of each subset: those occurring in exactly one member tensor
    let ext: Vec<Vec<Id>> = (0..=full)
        .map(|s| {
            let mut count: HashMap<Id, usize> = HashMap::new();
            for p in (0..k).filter(|p| s >> p & 1 == 1) {
                for &id in &net.tensors[p] {
                    if !net.private[p].contains(&id) {
                        *count.entry(id).or_default() += 1;
                    }
                }
            }
            let mut ids: Vec<Id> = count
                .into_iter()
                .filter(|&(_, c)| c == 1)
                .map(|(id, _)| id)
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    let mut best = vec![u64::MAX; full + 1];
    for p in 0..k {
        best[1 << p] = if net.private[p].is_empty() {
            0
        } else {
            net.size(&net.tensors[p])
        };
    }
    for s in 1..=full {
        if s.count_ones() < 2 {
            continue;
        }
        let low = s & s.wrapping_neg();
        // enumerate splits with the lowest element on the left to halve work
        let mut a = (s - 1) & s;
        while a > 0 {
            if a & low != 0 {
                let b = s & !a;
                if best[a] != u64::MAX && best[b] != u64::MAX {
                    let mut union = ext[a].clone();
                    for &id in &ext[b] {
                        if !union.contains(&id) {
                            union.push(id);
                        }
                    }
                    let c = best[a]
                        .saturating_add(best[b])
                        .saturating_add(net.size(&union));
                    if c < best[s] {
                        best[s] = c;
                    }
                }
            }
            a = (a - 1) & s;
        }
    }
    Ok(best[full])
}

struct DenseTensor {
    ids: Vec<Id>,
    data: Vec<BigInt>,
}

fn strides_for(ids: &[Id], net: &Network) -> Vec<usize> {
    let mut strides = vec![1; ids.len()];
    for j in (0..ids.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * net.dim(ids[j + 1]);
    }
    strides
}

fn stride_of(ids: &[Id], strides: &[usize], id: Id) -> usize {
    ids.iter().position(|&x| x == id).map_or(0, |j| strides[j])
}

/// `out[result] = Σ_{summed} lhs · rhs`, or a partial trace when `rhs` is absent.
fn contract_dense(
    net: &Network,
    lhs: &DenseTensor,
    rhs: Option<&DenseTensor>,
    result: &[Id],
) -> DenseTensor {
    let mut union: Vec<Id> = result.to_vec();
    for &id in lhs.ids.iter().chain(rhs.map_or(&[][..], |r| &r.ids[..])) {
        if !union.contains(&id) {
            union.push(id);
        }
    }
    let ls = strides_for(&lhs.ids, net);
    let rs = rhs.map(|r| strides_for(&r.ids, net));
    let os = strides_for(result, net);
    let dims: Vec<usize> = union.iter().map(|&id| net.dim(id)).collect();
    let sl: Vec<usize> = union
        .iter()
        .map(|&id| stride_of(&lhs.ids, &ls, id))
        .collect();
    let sr: Vec<usize> = match (rhs, &rs) {
        (Some(r), Some(rs)) => union.iter().map(|&id| stride_of(&r.ids, rs, id)).collect(),
        _ => vec![0; union.len()],
    };
    let so: Vec<usize> = union.iter().map(|&id| stride_of(result, &os, id)).collect();
    let out_size: usize = result.iter().map(|&id| net.dim(id)).product();
    let mut out = vec![BigInt::zero(); out_size];
    let mut counter = vec![0usize; union.len()];
    let (mut ol, mut orr, mut oo) = (0usize, 0usize, 0usize);
    loop {
        let a = &lhs.data[ol];
        if !a.is_zero() {
            match rhs {
                Some(r) => {
                    let b = &r.data[orr];
                    if !b.is_zero() {
                        out[oo] += a * b;
                    }
                }
                None => out[oo] += a,
            }
        }
        // odometer over the union, innermost index last
        let mut j = union.len();
        loop {
            if j == 0 {
                return DenseTensor {
                    ids: result.to_vec(),
                    data: out,
                };
            }
            j -= 1;
            counter[j] += 1;
            ol += sl[j];
            orr += sr[j];
            oo += so[j];
            if counter[j] < dims[j] {
                break;
            }
            ol -= sl[j] * dims[j];
            orr -= sr[j] * dims[j];
            oo -= so[j] * dims[j];
            counter[j] = 0;
        }
    }
}

fn load_tensor(
    net: &Network,
    t: &TraceMonomial,
    p: usize,
    matrix: &[BigInt],
    d: &DimensionVector,
) -> DenseTensor {
    let ids = net.tensors[p].clone();
    let dv = d.dim_v();
    let strides = d.strides();
    let size: usize = ids.iter().map(|&id| net.dim(id)).product();
    let mut data = Vec::with_capacity(size);
    let mut vals = vec![0usize; ids.len()];
    for flat in 0..size {
        let mut rest = flat;
        for j in (0..ids.len()).rev() {
            let dj = net.dim(ids[j]);
            vals[j] = rest % dj;
            rest /= dj;
        }
        let value = |id: Id| vals[ids.iter().position(|&x| x == id).unwrap()];
        let (mut row, mut col) = (0, 0);
        for (i, s) in t.sigma().iter().enumerate() {
            row += value(i * net.k + p) * strides[i];
            col += value(i * net.k + s.apply(p)) * strides[i];
        }
        data.push(matrix[row * dv + col].clone());
    }
    DenseTensor { ids, data }
}

fn ids_from_labels(net: &Network, labels: &[IndexLabel]) -> Vec<Id> {
    labels
        .iter()
        .map(|l| (l.wire - 1) * net.k + (l.position - 1))
        .collect()
}

/// Executes `plan`; the result equals [`crate::tensor::evaluate`] exactly.
pub fn evaluate_with_plan(
    t: &TraceMonomial,
    inputs: &EndoTuple,
    plan: &ContractionPlan,
) -> Result<Scalar> {
    let ii = IntegerInputs::new(t, inputs)?;
    if !plan.matches(t, &ii.dims) {
        return Err(Error::PlanMismatch);
    }
    if t.degree() == 0 {
        return Ok(Scalar::one());
    }
    let net = Network::new(t, &ii.dims);
    let mut live: Vec<Option<DenseTensor>> = (0..net.k)
        .map(|p| {
            Some(load_tensor(
                &net,
                t,
                p,
                &ii.ints[t.labels()[p] - 1],
                &ii.dims,
            ))
        })
        .collect();
    for step in &plan.steps {
        match step {
            PlanStep::Trace { slot, result, .. } => {
                let x = live
                    .get_mut(*slot)
                    .and_then(Option::take)
                    .ok_or(Error::PlanMismatch)?;
                let ids = ids_from_labels(&net, result);
                live[*slot] = Some(contract_dense(&net, &x, None, &ids));
            }
            PlanStep::Contract {
                lhs, rhs, result, ..
            } => {
                let b = live
                    .get_mut(*rhs)
                    .and_then(Option::take)
                    .ok_or(Error::PlanMismatch)?;
                let a = live
                    .get_mut(*lhs)
                    .and_then(Option::take)
                    .ok_or(Error::PlanMismatch)?;
                let ids = ids_from_labels(&net, result);
                live[*lhs] = Some(contract_dense(&net, &a, Some(&b), &ids));
            }
        }
    }
    let mut remaining = live.into_iter().flatten();
    let last = remaining.next().ok_or(Error::PlanMismatch)?;
    if remaining.next().is_some() || !last.ids.is_empty() {
        return Err(Error::PlanMismatch);
    }
    Ok(Scalar::new(last.data[0].clone(), ii.denominator(t)))
}

/// Plans and evaluates in one call.
pub fn evaluate_planned(t: &TraceMonomial, inputs: &EndoTuple) -> Result<Scalar> {
    let d = match inputs.dims() {
        Some(d) => d.clone(),
        None => DimensionVector::new(vec![1; t.n()])?,
    };
    let plan = plan_contraction(t, &d, None)?;
    evaluate_with_plan(t, inputs, &plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{evaluate, random_endotuple};

    fn mono(labels: &[usize], m: usize, cycles: &[&str]) -> TraceMonomial {
        TraceMonomial::parse(labels, m, cycles).unwrap()
    }

    #[test]
    fn single_tensor_is_one_trace() {
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        let plan = plan_contraction(&mono(&[1], 1, &["id", "id"]), &d, None).unwrap();
        assert_eq!(plan.steps.len(), 1);
        assert!(matches!(plan.steps[0], PlanStep::Trace { .. }));
        assert!(plan.cost <= plan.naive_cost);
    }

    #[test]
    fn cycle_gives_matrix_chain() {
        for dim in 1..=3 {
            let d = DimensionVector::new(vec![dim]).unwrap();
            for k in 2..=4 {
                let cyc = format!(
                    "({})",
                    (1..=k).map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
                );
                let t = mono(&vec![1; k], 1, &[&cyc]);
                let plan = plan_contraction(&t, &d, None).unwrap();
                assert_eq!(plan.peak_size, (dim * dim) as u64);
                for (s, step) in plan.steps.iter().enumerate() {
                    match step {
                        PlanStep::Contract { lhs, rhs, .. } => assert_eq!((*lhs, *rhs), (0, s + 1)),
                        _ => panic!("unexpected trace"),
                    }
                }
                assert_eq!(plan.cost, optimal_contraction_cost(&t, &d).unwrap());
            }
        }
    }

    #[test]
    fn plan_matches_naive() {
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        let t = mono(&[1, 1, 2], 2, &["(12)", "(23)"]);
        let inputs = random_endotuple(&d, 2, 11);
        let plan = plan_contraction(&t, &d, Some(&[4, 4])).unwrap();
        assert_eq!(
            evaluate_with_plan(&t, &inputs, &plan).unwrap(),
            evaluate(&t, &inputs).unwrap()
        );
        let other = mono(&[1, 1, 2], 2, &["(12)", "id"]);
        assert_eq!(
            evaluate_with_plan(&other, &inputs, &plan),
            Err(Error::PlanMismatch)
        );
    }

    #[test]
    fn plan_round_trips_through_json() {
        let d = DimensionVector::new(vec![2, 3]).unwrap();
        let t = mono(&[1, 2, 2], 2, &["(123)", "(12)"]);
        let plan = plan_contraction(&t, &d, None).unwrap();
        let s = serde_json::to_string(&plan).unwrap();
        assert_eq!(serde_json::from_str::<ContractionPlan>(&s).unwrap(), plan);
    }
}
