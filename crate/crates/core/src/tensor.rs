//! Endomorphisms of `V = V_1 ⊗ … ⊗ V_n`, exact evaluation of trace
//! monomials and local conjugation.
//!
//! Multi-indices are row-major with wire 1 outermost, so the flat index of
//! `(r_1, …, r_n)` is `Σ r_i · ∏_{j>i} d_j`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{scalar, RatMatrix, Scalar, ScalarRepr};
use crate::monomial::TraceMonomial;
use crate::perm::DimensionVector;

/// Retry budget for drawing invertible group elements.
pub const MAX_RETRIES: usize = 100;

/// An element of `End(V)` stored as a dense `dim V × dim V` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomorphism {
    dims: DimensionVector,
    matrix: RatMatrix,
}

impl Endomorphism {
    pub fn new(dims: DimensionVector, matrix: RatMatrix) -> Result<Self> {
        let dv = dims.dim_v();
        if matrix.rows() != dv || matrix.cols() != dv {
            return Err(Error::SizeMismatch {
                what: "endomorphism entries",
                expected: dv * dv,
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(Endomorphism { dims, matrix })
    }

    pub fn identity(dims: &DimensionVector) -> Self {
        Endomorphism {
            matrix: RatMatrix::identity(dims.dim_v()),
            dims: dims.clone(),
        }
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// Entry at row multi-index `r` and column multi-index `c`.
    pub fn entry(&self, r: &[usize], c: &[usize]) -> &Scalar {
        self.matrix
            .get(flat_index(&self.dims, r), flat_index(&self.dims, c))
    }

    /// `α·self + β·other`.
    pub fn linear_combination(
        &self,
        alpha: &Scalar,
        other: &Endomorphism,
        beta: &Scalar,
    ) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(
                "linear combination of different spaces".into(),
            ));
        }
        let data = self
            .matrix
            .data()
            .iter()
            .zip(other.matrix.data())
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let dv = self.dims.dim_v();
        Endomorphism::new(self.dims.clone(), RatMatrix::from_vec(dv, dv, data)?)
    }
}

fn flat_index(d: &DimensionVector, digits: &[usize]) -> usize {
    digits
        .iter()
        .zip(d.dims())
        .fold(0, |acc, (&r, &di)| acc * di + r)
}

#[derive(Serialize, Deserialize)]
struct EndoJson {
    dims: Vec<usize>,
    entries: Vec<Vec<ScalarRepr>>,
}

impl Serialize for Endomorphism {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EndoJson {
            dims: self.dims.dims().to_vec(),
            entries: self
                .matrix
                .to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(ScalarRepr).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Endomorphism {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = EndoJson::deserialize(deserializer)?;
        let build = || -> Result<Endomorphism> {
            let dims = DimensionVector::new(raw.dims.clone())?;
            let rows = raw
                .entries
                .iter()
                .map(|r| r.iter().map(|s| s.0.clone()).collect())
                .collect();
            Endomorphism::new(dims, RatMatrix::from_rows(rows)?)
        };
        build().map_err(serde::de::Error::custom)
    }
}

/// `m` endomorphisms of one space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EndoTuple {
    members: Vec<Endomorphism>,
}

impl EndoTuple {
    pub fn new(members: Vec<Endomorphism>) -> Result<Self> {
        if let Some(first) = members.first() {
            if members.iter().any(|e| e.dims != first.dims) {
                return Err(Error::DimensionMismatch(
                    "tuple members act on different spaces".into(),
                ));
            }
        }
        Ok(EndoTuple { members })
    }

    pub fn members(&self) -> &[Endomorphism] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dims(&self) -> Option<&DimensionVector> {
        self.members.first().map(Endomorphism::dims)
    }

    pub fn replace(&self, j: usize, e: Endomorphism) -> Result<Self> {
        let mut members = self.members.clone();
        members[j] = e;
        EndoTuple::new(members)
    }
}

impl<'de> Deserialize<'de> for EndoTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<Endomorphism>::deserialize(deserializer)?;
        EndoTuple::new(members).map_err(serde::de::Error::custom)
    }
}

/// A simple tensor `A_1 ⊗ … ⊗ A_n`, factor `i` of size `d_i × d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleEndo {
    factors: Vec<RatMatrix>,
}

impl SimpleEndo {
    pub fn new(factors: Vec<RatMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDimensions(
                "a simple tensor needs at least one factor".into(),
            ));
        }
        if let Some(bad) = factors.iter().find(|f| !f.is_square() || f.rows() == 0) {
            return Err(Error::DimensionMismatch(format!(
                "factor of shape {}x{} is not a non-empty square matrix",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(SimpleEndo { factors })
    }

    pub fn factors(&self) -> &[RatMatrix] {
        &self.factors
    }

    pub fn dims(&self) -> DimensionVector {
        DimensionVector::new(self.factors.iter().map(RatMatrix::rows).collect())
            .expect("factors are non-empty squares")
    }
}

#[derive(Serialize, Deserialize)]
struct SimpleJson {
    factors: Vec<Vec<Vec<ScalarRepr>>>,
}

fn matrix_to_json(m: &RatMatrix) -> Vec<Vec<ScalarRepr>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(ScalarRepr).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<ScalarRepr>]) -> Result<RatMatrix> {
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| s.0.clone()).collect())
            .collect(),
    )
}

impl Serialize for SimpleEndo {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SimpleJson {
            factors: self.factors.iter().map(matrix_to_json).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimpleEndo {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SimpleJson::deserialize(deserializer)?;
        let build = || -> Result<SimpleEndo> {
            SimpleEndo::new(
                raw.factors
                    .iter()
                    .map(|f| matrix_from_json(f))
                    .collect::<Result<_>>()?,
            )
        };
        build().map_err(serde::de::Error::custom)
    }
}

/// `(g_1, …, g_n) ∈ GL_{d_1} × … × GL_{d_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGroupElement {
    factors: Vec<RatMatrix>,
}

impl LocalGroupElement {
    pub fn new(factors: Vec<RatMatrix>) -> Result<Self> {
        for f in &factors {
            if !f.is_square() {
                return Err(Error::DimensionMismatch(
                    "group factors must be square".into(),
                ));
            }
            if f.determinant()?.is_zero() {
                return Err(Error::Singular);
            }
        }
        Ok(LocalGroupElement { factors })
    }

    pub fn identity(d: &DimensionVector) -> Self {
        LocalGroupElement {
            factors: d.dims().iter().map(|&di| RatMatrix::identity(di)).collect(),
        }
    }

    pub fn factors(&self) -> &[RatMatrix] {
        &self.factors
    }

    pub fn dims(&self) -> Result<DimensionVector> {
        DimensionVector::new(self.factors.iter().map(RatMatrix::rows).collect())
    }

    /// `⊗ g_i` acting on `V`.
    pub fn expand(&self) -> RatMatrix {
        kron_all(&self.factors)
    }

    pub fn inverse(&self) -> Result<LocalGroupElement> {
        Ok(LocalGroupElement {
            factors: self
                .factors
                .iter()
                .map(RatMatrix::inverse)
                .collect::<Result<_>>()?,
        })
    }
}

impl Serialize for LocalGroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SimpleJson {
            factors: self.factors.iter().map(matrix_to_json).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LocalGroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SimpleJson::deserialize(deserializer)?;
        let build = || -> Result<LocalGroupElement> {
            LocalGroupElement::new(
                raw.factors
                    .iter()
                    .map(|f| matrix_from_json(f))
                    .collect::<Result<_>>()?,
            )
        };
        build().map_err(serde::de::Error::custom)
    }
}

fn kron_all(factors: &[RatMatrix]) -> RatMatrix {
    factors
        .iter()
        .fold(RatMatrix::identity(1), |acc, f| acc.kron(f))
}

/// Kronecker product of the factors in wire order `1…n`.
pub fn kron_expand(s: &SimpleEndo) -> Endomorphism {
    Endomorphism {
        dims: s.dims(),
        matrix: kron_all(&s.factors),
    }
}

fn random_entry(rng: &mut ChaCha8Rng) -> Scalar {
    let num = rng.gen_range(-3i64..=3);
    let exp = rng.gen_range(0u32..=2);
    crate::matrix::ratio(num, 1 << exp)
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RatMatrix {
    let data = (0..rows * cols).map(|_| random_entry(rng)).collect();
    RatMatrix::from_vec(rows, cols, data).expect("sized data")
}

/// Deterministic stream of random inputs; every draw advances one ChaCha8
/// generator seeded from a 64-bit value. Entries are `a / 2^e` with
/// `a ∈ {-3, …, 3}` and `e ∈ {0, 1, 2}`.
#[derive(Clone, Debug)]
pub struct InputSampler {
    rng: ChaCha8Rng,
}

impl InputSampler {
    pub fn new(seed: u64) -> Self {
        InputSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> RatMatrix {
        random_matrix(&mut self.rng, rows, cols)
    }

    pub fn endomorphism(&mut self, d: &DimensionVector) -> Endomorphism {
        let dv = d.dim_v();
        Endomorphism {
            dims: d.clone(),
            matrix: self.matrix(dv, dv),
        }
    }

    pub fn endotuple(&mut self, d: &DimensionVector, m: usize) -> EndoTuple {
        EndoTuple {
            members: (0..m).map(|_| self.endomorphism(d)).collect(),
        }
    }

    pub fn simple(&mut self, d: &DimensionVector) -> SimpleEndo {
        SimpleEndo {
            factors: d.dims().iter().map(|&di| self.matrix(di, di)).collect(),
        }
    }

    pub fn simple_tuple(&mut self, d: &DimensionVector, m: usize) -> Vec<SimpleEndo> {
        (0..m).map(|_| self.simple(d)).collect()
    }

    pub fn group_element(&mut self, d: &DimensionVector) -> Result<LocalGroupElement> {
        let mut factors = Vec::with_capacity(d.n());
        for &di in d.dims() {
            let mut found = None;
            for _ in 0..MAX_RETRIES {
                let g = self.matrix(di, di);
                if !g.determinant()?.is_zero() {
                    found = Some(g);
                    break;
                }
            }
            factors.push(found.ok_or(Error::RetriesExhausted(MAX_RETRIES))?);
        }
        Ok(LocalGroupElement { factors })
    }
}

pub fn random_endotuple(d: &DimensionVector, m: usize, seed: u64) -> EndoTuple {
    InputSampler::new(seed).endotuple(d, m)
}

pub fn random_simple_tuple(d: &DimensionVector, m: usize, seed: u64) -> Vec<SimpleEndo> {
    InputSampler::new(seed).simple_tuple(d, m)
}

pub fn random_group_element(d: &DimensionVector, seed: u64) -> Result<LocalGroupElement> {
    InputSampler::new(seed).group_element(d)
}

fn check_labels(t: &TraceMonomial, available: usize) -> Result<()> {
    match t.labels().iter().max() {
        Some(&l) if l > available => Err(Error::LabelOutOfRange {
            label: l,
            available,
        }),
        _ => Ok(()),
    }
}

/// Product over wires of products over cycles of traces of factor products.
pub fn evaluate_simple(t: &TraceMonomial, inputs: &[SimpleEndo]) -> Result<Scalar> {
    check_labels(t, inputs.len())?;
    if t.degree() == 0 {
        return Ok(Scalar::one());
    }
    let n = t.n();
    for s in inputs {
        if s.factors.len() != n {
            return Err(Error::SizeMismatch {
                what: "simple tensor factors vs wires",
                expected: n,
                found: s.factors.len(),
            });
        }
    }
    let dims = inputs[0].dims();
    if inputs.iter().any(|s| s.dims() != dims) {
        return Err(Error::DimensionMismatch(
            "simple inputs act on different spaces".into(),
        ));
    }
    let mut result = Scalar::one();
    for (i, sigma) in t.sigma().iter().enumerate() {
        for cycle in sigma.cycles().cycles {
            let mut prod = inputs[t.labels()[cycle[0]] - 1].factors[i].clone();
            for &p in &cycle[1..] {
                prod = prod.matmul(&inputs[t.labels()[p] - 1].factors[i])?;
            }
            result *= prod.trace();
        }
    }
    Ok(result)
}

/// Inputs with denominators cleared: `A_j = ints[j] / dens[j]`.
pub(crate) struct IntegerInputs {
    pub dims: DimensionVector,
    pub ints: Vec<Vec<BigInt>>,
    pub dens: Vec<BigInt>,
}

impl IntegerInputs {
    pub fn new(t: &TraceMonomial, inputs: &EndoTuple) -> Result<Self> {
        check_labels(t, inputs.len())?;
        let dims = match inputs.dims() {
            Some(d) => d.clone(),
            None if t.degree() == 0 => DimensionVector::new(vec![1; t.n()])?,
            None => {
                return Err(Error::LabelOutOfRange {
                    label: 1,
                    available: 0,
                })
            }
        };
        if dims.n() != t.n() {
            return Err(Error::SizeMismatch {
                what: "tensor factors vs wires",
                expected: t.n(),
                found: dims.n(),
            });
        }
        let (ints, dens) = inputs
            .members()
            .iter()
            .map(|e| e.matrix.to_integer_form())
            .unzip();
        Ok(IntegerInputs { dims, ints, dens })
    }

    /// `∏_p den_{M[p]}`.
    pub fn denominator(&self, t: &TraceMonomial) -> BigInt {
        t.labels()
            .iter()
            .fold(BigInt::one(), |acc, &l| acc * &self.dens[l - 1])
    }
}

/// Direct index sum over all `r_{i,p}`. Cost `(dim V)^{|M|}` terms.
pub fn evaluate(t: &TraceMonomial, inputs: &EndoTuple) -> Result<Scalar> {
    let ii = IntegerInputs::new(t, inputs)?;
    let k = t.degree();
    if k == 0 {
        return Ok(Scalar::one());
    }
    let d = &ii.dims;
    let dv = d.dim_v();
    let strides = d.strides();
    let digits: Vec<Vec<usize>> = (0..dv).map(|x| d.digits(x)).collect();
    // column flat index of position p given the flat row indices of all positions
    let col_of = |rows: &[usize], p: usize| -> usize {
        t.sigma()
            .iter()
            .enumerate()
            .map(|(i, s)| digits[rows[s.apply(p)]][i] * strides[i])
            .sum()
    };
    let inner = dv.pow((k - 1) as u32);
    let partials: Vec<BigInt> = (0..dv)
        .into_par_iter()
        .map(|first| {
            let mut rows = vec![0usize; k];
            rows[0] = first;
            let mut acc = BigInt::zero();
            for idx in 0..inner {
                let mut rest = idx;
                for slot in rows[1..].iter_mut().rev() {
                    *slot = rest % dv;
                    rest /= dv;
                }
                let mut prod = BigInt::one();
                for p in 0..k {
                    let a = &ii.ints[t.labels()[p] - 1][rows[p] * dv + col_of(&rows, p)];
                    if a.is_zero() {
                        prod = BigInt::zero();
                        break;
                    }
                    prod *= a;
                }
                acc += prod;
            }
            acc
        })
        .collect();
    let total: BigInt = partials.into_iter().sum();
    Ok(Scalar::new(total, ii.denominator(t)))
}

/// Replaces each `A_j` by `(⊗g_i) A_j (⊗g_i)^{-1}`.
pub fn local_conjugate(inputs: &EndoTuple, g: &LocalGroupElement) -> Result<EndoTuple> {
    let Some(d) = inputs.dims() else {
        return Ok(inputs.clone());
    };
    if &g.dims()? != d {
        return Err(Error::DimensionMismatch(format!(
            "group element acts on {:?}, inputs on {:?}",
            g.dims()?.dims(),
            d.dims()
        )));
    }
    let big = g.expand();
    let big_inv = g.inverse()?.expand();
    let members = inputs
        .members
        .iter()
        .map(|e| {
            Ok(Endomorphism {
                dims: d.clone(),
                matrix: big.matmul(&e.matrix)?.matmul(&big_inv)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EndoTuple { members })
}

/// `∏_i d_i^{#cycles(σ_i)}`, the value on identity inputs.
pub fn identity_value(t: &TraceMonomial, d: &DimensionVector) -> Scalar {
    t.sigma()
        .iter()
        .zip(d.dims())
        .fold(scalar(1), |acc, (s, &di)| {
            acc * scalar((di as i64).pow(s.num_cycles() as u32))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ratio;

    fn mono(labels: &[usize], m: usize, cycles: &[&str]) -> TraceMonomial {
        TraceMonomial::parse(labels, m, cycles).unwrap()
    }

    #[test]
    fn trace_of_single_matrix() {
        let a = SimpleEndo::new(vec![RatMatrix::from_i64(2, 2, &[1, 2, 3, 4])]).unwrap();
        let t = mono(&[1], 1, &["id"]);
        assert_eq!(
            evaluate_simple(&t, std::slice::from_ref(&a)).unwrap(),
            scalar(5)
        );
        let tuple = EndoTuple::new(vec![kron_expand(&a)]).unwrap();
        assert_eq!(evaluate(&t, &tuple).unwrap(), scalar(5));
    }

    #[test]
    fn identity_inputs() {
        let d = DimensionVector::new(vec![2, 3]).unwrap();
        let t = mono(&[1, 1, 2], 2, &["(12)", "id"]);
        let id = Endomorphism::identity(&d);
        let tuple = EndoTuple::new(vec![id.clone(), id]).unwrap();
        assert_eq!(evaluate(&t, &tuple).unwrap(), scalar(2 * 2 * 27));
        assert_eq!(identity_value(&t, &d), scalar(108));
        let simple = SimpleEndo::new(vec![RatMatrix::identity(2), RatMatrix::identity(3)]).unwrap();
        assert_eq!(
            evaluate_simple(&t, &[simple.clone(), simple]).unwrap(),
            scalar(108)
        );
    }

    #[test]
    fn classical_square_trace() {
        let d = DimensionVector::new(vec![3]).unwrap();
        let tuple = random_endotuple(&d, 1, 7);
        let a = tuple.members()[0].matrix();
        let t = mono(&[1, 1], 1, &["(12)"]);
        assert_eq!(evaluate(&t, &tuple).unwrap(), a.matmul(a).unwrap().trace());
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let s = SimpleEndo::new(vec![RatMatrix::identity(2), RatMatrix::identity(2)]).unwrap();
        assert_eq!(kron_expand(&s).matrix(), &RatMatrix::identity(4));
    }

    #[test]
    fn empty_monomial_is_one() {
        let d = DimensionVector::new(vec![2]).unwrap();
        let t = TraceMonomial::unit(1, 1);
        assert_eq!(
            evaluate(&t, &random_endotuple(&d, 1, 1)).unwrap(),
            scalar(1)
        );
        assert_eq!(
            evaluate_simple(&t, &random_simple_tuple(&d, 1, 1)).unwrap(),
            scalar(1)
        );
    }

    #[test]
    fn label_out_of_range() {
        let d = DimensionVector::new(vec![2]).unwrap();
        let t = mono(&[1, 2], 2, &["(12)"]);
        assert_eq!(
            evaluate(&t, &random_endotuple(&d, 1, 1)),
            Err(Error::LabelOutOfRange {
                label: 2,
                available: 1
            })
        );
    }

    #[test]
    fn determinism() {
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        assert_eq!(random_endotuple(&d, 2, 42), random_endotuple(&d, 2, 42));
        assert_ne!(random_endotuple(&d, 2, 42), random_endotuple(&d, 2, 43));
        assert_eq!(
            random_group_element(&d, 5).unwrap(),
            random_group_element(&d, 5).unwrap()
        );
    }

    #[test]
    fn conjugation_with_scalars_is_trivial() {
        let d = DimensionVector::new(vec![2, 2]).unwrap();
        let tuple = random_endotuple(&d, 2, 3);
        let g = LocalGroupElement::new(vec![
            RatMatrix::identity(2).scale(&ratio(3, 2)),
            RatMatrix::identity(2).scale(&scalar(-5)),
        ])
        .unwrap();
        assert_eq!(local_conjugate(&tuple, &g).unwrap(), tuple);
        assert_eq!(
            local_conjugate(&tuple, &LocalGroupElement::identity(&d)).unwrap(),
            tuple
        );
        let sing = LocalGroupElement::new(vec![RatMatrix::zeros(2, 2), RatMatrix::identity(2)]);
        assert_eq!(sing, Err(Error::Singular));
    }

    #[test]
    fn json_formats() {
        let d = DimensionVector::new(vec![2]).unwrap();
        let e = Endomorphism::new(
            d,
            RatMatrix::from_rows(vec![
                vec![ratio(1, 2), scalar(0)],
                vec![scalar(-3), ratio(7, 4)],
            ])
            .unwrap(),
        )
        .unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"dims":[2],"entries":[["1/2","0"],["-3","7/4"]]}"#);
        assert_eq!(serde_json::from_str::<Endomorphism>(&s).unwrap(), e);
        let bad = r#"{"dims":[2,2],"entries":[["1","0"],["0","1"]]}"#;
        assert!(serde_json::from_str::<Endomorphism>(bad).is_err());
        let simple: SimpleEndo =
            serde_json::from_str(r#"{"factors":[[["1","2"],["3","4"]],[[1]]]}"#).unwrap();
        assert_eq!(simple.dims().dims(), &[2, 1]);
    }
}
