//! Trace-monomial invariants of tuples of endomorphisms of `V_1 ⊗ … ⊗ V_n`
//! under local conjugation, with exact brute-force oracles.
//!
//! * [`perm`]: permutations, ordered multisets, multidegrees, necklaces.
//! * [`monomial`]: the monomials `Tr^M_σ`, canonical forms, factorization,
//!   enumeration.
//! * [`tensor`] and [`plan`]: exact evaluation, local conjugation and a
//!   contraction planner.
//! * [`span`]: centralizer and invariant-space oracles, generation checks.
//! * [`hilbert`]: Hilbert series, rational reconstruction, pole analysis,
//!   degree bounds.

pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod perm;
pub mod plan;
pub mod span;
pub mod tensor;

pub use error::{Error, Result};
pub use hilbert::{
    check_pole_orders, default_order, degree_bounds, hadamard, hs_local, hs_single,
    reconstruct_local, reconstruct_rational, verify_bound_empirically, BoundReport,
    EmpiricalBoundReport, PoleReport, PowerSeries, RationalFunction, Reconstruction, MAX_ORDER,
};
pub use matrix::{parse_scalar, RatMatrix, Scalar};
pub use monomial::{
    enumerate_generators, restitution, EnumerationFilter, GirthBound, GirthTuple, TraceMonomial,
};
pub use perm::{
    enumerate_necklaces, min_rotation, necklace_count, CycleDecomposition, DimensionVector,
    MultiDegree, OrderedMultiset, Permutation,
};
pub use plan::{
    evaluate_planned, evaluate_with_plan, optimal_contraction_cost, plan_contraction,
    ContractionPlan, PlanStep,
};
pub use span::{
    commutant_dimension_mu, dimension_report, invariant_space_dimension, mu_matrix, rho_matrix,
    span_dimension_rho, trace_span_dimension, verify_generation, Certainty, Dimension,
    DimensionReport, RepMatrix, TraceSpan, VerifyReport,
};
pub use tensor::{
    evaluate, evaluate_simple, identity_value, kron_expand, local_conjugate, random_endotuple,
    random_group_element, random_simple_tuple, EndoTuple, Endomorphism, InputSampler,
    LocalGroupElement, SimpleEndo,
};
