//! Randomized verification and construction timing against the SWAP-chain oracle.

use std::time::Instant;

use rand::Rng;

use crate::circuit::CircuitSpec;
use crate::embed::{embed, embed_binary, embed_nary, swap_chain_oracle, GatePlacement};
use crate::error::Result;
use crate::gates::{GateSpec, QuditDim};
use crate::linalg::{matmul, ComplexMatrix};
use crate::random::{random_gate, random_positions, trial_rng};

/// Largest entrywise disagreement tolerated between block path and oracle.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub index: usize,
    pub arity: usize,
    pub positions: Vec<usize>,
    /// Max deviation of [`embed_nary`] from the oracle.
    pub nary_deviation: f64,
    /// Max deviation of [`embed_binary`] from the oracle, for binary gates.
    pub binary_deviation: Option<f64>,
    pub adjacent_swaps: usize,
}

impl TrialOutcome {
    pub fn max_deviation(&self) -> f64 {
        self.nary_deviation.max(self.binary_deviation.unwrap_or(0.0))
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= VERIFY_TOLERANCE
    }
}

/// Checks `gate` on `positions` through every block path against the oracle.
pub fn compare_with_oracle(gate: &GateSpec, k: usize, positions: &[usize]) -> Result<(f64, Option<f64>, usize)> {
    let placement = GatePlacement::new(gate.clone(), k, positions.to_vec())?;
    let oracle = swap_chain_oracle(gate, k, positions)?;
    let nary = embed_nary(gate, placement.wires())?.max_abs_diff(&oracle.operator)?;
    let binary = match positions {
        &[m, q] => Some(embed_binary(gate, k, m, q)?.max_abs_diff(&oracle.operator)?),
        _ => None,
    };
    Ok((nary, binary, oracle.adjacent_swaps))
}

/// One seeded trial: a random unitary of `arity` on random distinct wires.
pub fn random_trial(d: QuditDim, k: usize, arity: usize, seed: u64, index: usize) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, index as u64);
    let gate = random_gate(d, arity, &mut rng)?;
    let positions = random_positions(k, arity, &mut rng);
    let (nary_deviation, binary_deviation, adjacent_swaps) = compare_with_oracle(&gate, k, &positions)?;
    Ok(TrialOutcome { index, arity, positions, nary_deviation, binary_deviation, adjacent_swaps })
}

/// `trials` seeded trials with arity drawn from `2..=min(3, k)` (1 when `k = 1`).
pub fn verify_random(d: QuditDim, k: usize, trials: usize, seed: u64) -> Result<Vec<TrialOutcome>> {
    d.space(k)?;
    (0..trials)
        .map(|i| {
            let max_arity = k.min(3);
            let arity = if max_arity < 2 {
                1
            } else {
                trial_rng(seed ^ 0x5eed, i as u64).random_range(2..=max_arity)
            };
            random_trial(d, k, arity, seed, i)
        })
        .collect()
}

/// Circuit operator assembled from SWAP-chain oracles, with the total swap count.
pub fn circuit_oracle_operator(spec: &CircuitSpec) -> Result<(ComplexMatrix, usize)> {
    let side = spec.d.space(spec.k)?;
    let mut acc = ComplexMatrix::identity(side);
    let mut swaps = 0;
    for step in &spec.steps {
        let r = swap_chain_oracle(step.gate(), spec.k, step.positions())?;
        swaps += r.adjacent_swaps;
        acc = matmul(&r.operator, &acc)?;
    }
    Ok((acc, swaps))
}

#[derive(Debug, Clone)]
pub struct BenchTrial {
    pub block_secs: f64,
    pub oracle_secs: f64,
    pub adjacent_swaps: usize,
    pub max_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub k: usize,
    pub d: QuditDim,
    pub gate: String,
    pub positions: Vec<usize>,
    pub trials: Vec<BenchTrial>,
}

impl BenchReport {
    pub fn median_block_secs(&self) -> f64 {
        median(self.trials.iter().map(|t| t.block_secs))
    }

    pub fn median_oracle_secs(&self) -> f64 {
        median(self.trials.iter().map(|t| t.oracle_secs))
    }

    /// Median block time over median oracle time.
    pub fn ratio(&self) -> f64 {
        self.median_block_secs() / self.median_oracle_secs()
    }

    pub fn max_deviation(&self) -> f64 {
        self.trials.iter().map(|t| t.max_deviation).fold(0.0, f64::max)
    }

    pub fn adjacent_swaps(&self) -> usize {
        self.trials.first().map_or(0, |t| t.adjacent_swaps)
    }
}

fn median(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Times block construction against the oracle `repeat` times.
///
/// Block timing covers [`embed`] only; oracle timing covers every
/// adjacent-swap construction and full-size product it performs.
pub fn bench_construction(gate: &GateSpec, k: usize, positions: &[usize], repeat: usize) -> Result<BenchReport> {
    let placement = GatePlacement::new(gate.clone(), k, positions.to_vec())?;
    let mut trials = Vec::with_capacity(repeat);
    for _ in 0..repeat.max(1) {
        let start = Instant::now();
        let block = embed(&placement)?;
        let block_secs = start.elapsed().as_secs_f64();

        let start = Instant::now();
        let oracle = swap_chain_oracle(gate, k, positions)?;
        let oracle_secs = start.elapsed().as_secs_f64();

        let max_deviation = block.max_abs_diff(&oracle.operator)?;
        trials.push(BenchTrial {
            block_secs,
            oracle_secs,
            adjacent_swaps: oracle.adjacent_swaps,
            max_deviation,
        });
    }
    Ok(BenchReport {
        k,
        d: gate.d(),
        gate: gate.name().to_string(),
        positions: positions.to_vec(),
        trials,
    })
}
