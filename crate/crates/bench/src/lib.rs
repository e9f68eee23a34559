//! Fixtures shared by the construction benchmarks.

use blockgate::{standard_gate, GateSpec, QuditDim};

/// CNOT on wires `(2, k - 1)` of a `k`-qubit register.
pub fn cnot_fixture(k: usize) -> (GateSpec, Vec<usize>) {
    let gate = standard_gate("cnot", QuditDim::QUBIT).expect("catalog gate");
    (gate, vec![2, k - 1])
}
