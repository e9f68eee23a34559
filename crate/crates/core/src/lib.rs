//! Block-matrix construction of quantum gates on arbitrary wires.
//!
//! A gate acting on non-adjacent qubits (or qudits) of a `k`-wire register is
//! usually expanded by surrounding it with chains of adjacent SWAPs. This
//! crate builds the same `d^k`-dimensional operator directly by tiling
//! identity-padded sub-blocks of the gate, keeps the SWAP-chain construction
//! around as a reference oracle, and evaluates quantum-computational-logic
//! truth probabilities on top of both.
//!
//! ```
//! use blockgate::{embed_binary, standard_gate, swap_chain_oracle, QuditDim};
//!
//! let cnot = standard_gate("cnot", QuditDim::QUBIT)?;
//! let block = embed_binary(&cnot, 6, 2, 5)?;
//! let oracle = swap_chain_oracle(&cnot, 6, &[2, 5])?;
//! assert_eq!(oracle.adjacent_swaps, 4);
//! assert!(block.approx_eq(&oracle.operator, 1e-12));
//! # Ok::<(), blockgate::Error>(())
//! ```

pub mod circuit;
pub mod embed;
pub mod error;
pub mod gates;
pub mod harness;
pub mod linalg;
pub mod qcl;
pub mod random;

pub use circuit::{
    build_circuit_operator, parse_circuit, parse_circuit_report, parse_ket, CircuitSpec,
    Diagnostics, Location, ParseDiagnostic, Severity,
};
pub use embed::{
    adjacent_swap_schedule, binary_core, compose_swaps, count_adjacent_swaps, embed, embed_adjacent,
    embed_binary, embed_nary, swap_chain_oracle, swap_first_last, swap_pair, ComposedSwaps,
    GatePlacement, OracleResult, WirePositions,
};
pub use error::{Error, Result};
pub use gates::{projector, qudit_swap, standard_gate, GateSpec, QuditDim};
pub use linalg::{
    dagger, is_unitary, kron, matmul, trace, Complex, ComplexMatrix, MatrixJson, EPSILON,
};
pub use qcl::{
    apply_channel, lambda_operator, mt_probability, mt_probability_fast, truth_probability,
    DensityOperator, StateVector, TargetMask,
};
