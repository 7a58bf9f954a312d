//! Shared fixtures for the benchmarks.

use localinv_core::{DimensionVector, TraceMonomial};

pub fn dims(d: &[usize]) -> DimensionVector {
    DimensionVector::new(d.to_vec()).expect("valid dimensions")
}

/// A connected degree-`k` monomial on two wires with long cycles on both.
pub fn long_cycle_monomial(k: usize) -> TraceMonomial {
    let labels: Vec<usize> = (0..k).map(|p| p % 2 + 1).collect();
    let forward = format!(
        "({})",
        (1..=k).map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
    );
    let backward = format!(
        "({})",
        (1..=k)
            .rev()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    TraceMonomial::parse(&labels, 2, &[&forward, &backward]).expect("valid monomial")
}
