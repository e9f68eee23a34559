//! The naive SWAP-chain construction.

use super::{embed_adjacent, GatePlacement};
use crate::error::{Error, Result};
use crate::gates::{qudit_swap, GateSpec};
use crate::linalg::{matmul, ComplexMatrix};

/// Adjacent transpositions that bring the listed wires next to each other.
///
/// Entry `s` stands for the swap of wires `s` and `s + 1`, in application
/// order. The listed wires end up on `α, α+1, …` with `α` the smallest
/// position, each bubbled leftwards in listed order.
pub fn adjacent_swap_schedule(positions: &[usize]) -> Result<Vec<usize>> {
    if positions.is_empty() {
        return Err(Error::InvalidPlacement("no wire positions given".into()));
    }
    for (i, &p) in positions.iter().enumerate() {
        if p == 0 {
            return Err(Error::InvalidPlacement("wire positions are 1-based".into()));
        }
        if positions[..i].contains(&p) {
            return Err(Error::InvalidPlacement(format!("duplicate wire position {p}")));
        }
    }
    let base = *positions.iter().min().expect("non-empty");
    let top = *positions.iter().max().expect("non-empty");
    let mut layout: Vec<usize> = (1..=top).collect();
    let mut schedule = Vec::new();
    for (i, &w) in positions.iter().enumerate() {
        let target = base + i;
        let mut slot = layout.iter().position(|&x| x == w).expect("wire present") + 1;
        while slot > target {
            schedule.push(slot - 1);
            layout.swap(slot - 2, slot - 1);
            slot -= 1;
        }
    }
    Ok(schedule)
}

/// Number of adjacent swaps, there and back, for strictly increasing positions.
pub fn count_adjacent_swaps(positions: &[usize]) -> Result<usize> {
    if positions.is_empty() {
        return Err(Error::InvalidPlacement("no wire positions given".into()));
    }
    if positions[0] == 0 {
        return Err(Error::InvalidPlacement("wire positions are 1-based".into()));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPlacement(format!(
            "positions must be strictly increasing, got {positions:?}"
        )));
    }
    let first = positions[0];
    Ok(2 * positions.iter().enumerate().skip(1).map(|(i, &a)| a - (first + i)).sum::<usize>())
}

/// Operator built by the SWAP-chain construction.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub operator: ComplexMatrix,
    /// Adjacent swaps applied, both directions counted.
    pub adjacent_swaps: usize,
}

/// Builds the operator from adjacent swaps only: move the wires together,
/// apply the gate, move them back. Every step is a full-size product.
pub fn swap_chain_oracle(gate: &GateSpec, k: usize, positions: &[usize]) -> Result<OracleResult> {
    let placement = GatePlacement::new(gate.clone(), k, positions.to_vec())?;
    let d = gate.d();
    let schedule = adjacent_swap_schedule(placement.positions())?;
    let base = *positions.iter().min().expect("non-empty");
    let swap = GateSpec::derived("swap", d, 2, qudit_swap(d));

    let mut steps: Vec<Step> = schedule.iter().map(|&s| Step::Swap(s)).collect();
    steps.push(Step::Gate);
    steps.extend(schedule.iter().rev().map(|&s| Step::Swap(s)));

    let mut operator: Option<ComplexMatrix> = None;
    for step in steps {
        let factor = match step {
            Step::Swap(s) => embed_adjacent(&swap, s, k)?,
            Step::Gate => embed_adjacent(gate, base, k)?,
        };
        operator = Some(match operator {
            None => factor,
            Some(acc) => matmul(&factor, &acc)?,
        });
    }
    Ok(OracleResult {
        operator: operator.expect("at least the gate step"),
        adjacent_swaps: 2 * schedule.len(),
    })
}

#[derive(Clone, Copy)]
enum Step {
    Swap(usize),
    Gate,
}
