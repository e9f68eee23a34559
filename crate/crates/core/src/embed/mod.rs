//! Operators for gates placed on arbitrary wires of a `k`-wire register.
//!
//! Wires are 1-based; wire 1 is the leftmost tensor factor, i.e. the most
//! significant digit of the `d`-ary basis index. The i-th listed position
//! receives the gate's i-th input.
//!
//! [`embed_adjacent`], [`swap_first_last`], [`swap_pair`] and
//! [`embed_binary`] assemble their result from Kronecker blocks only and
//! never multiply full-size matrices. [`swap_chain_oracle`] is the naive
//! construction from adjacent transpositions, kept as a reference.

mod oracle;
mod swap;

pub use oracle::{adjacent_swap_schedule, count_adjacent_swaps, swap_chain_oracle, OracleResult};
pub use swap::{compose_swaps, swap_first_last, swap_pair, ComposedSwaps};

use crate::error::{Error, Result};
use crate::gates::{qudit_swap, GateSpec, QuditDim};
use crate::linalg::{dagger, identity_sandwich, matmul, ComplexMatrix};

/// Ordered, distinct, 1-based wire indices within a `k`-wire register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WirePositions {
    k: usize,
    d: QuditDim,
    positions: Vec<usize>,
}

impl WirePositions {
    pub fn new(k: usize, d: QuditDim, positions: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPlacement("register needs at least one wire".into()));
        }
        if positions.is_empty() {
            return Err(Error::InvalidPlacement("no wire positions given".into()));
        }
        for (i, &p) in positions.iter().enumerate() {
            if p == 0 || p > k {
                return Err(Error::InvalidPlacement(format!(
                    "wire position {p} outside 1..={k}"
                )));
            }
            if positions[..i].contains(&p) {
                return Err(Error::InvalidPlacement(format!("duplicate wire position {p}")));
            }
        }
        d.space(k)?;
        Ok(WirePositions { k, d, positions })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> QuditDim {
        self.d
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// `Some(m)` when the positions read `m, m+1, …` in order.
    pub fn adjacent_start(&self) -> Option<usize> {
        let m = self.positions[0];
        self.positions.iter().enumerate().all(|(i, &p)| p == m + i).then_some(m)
    }
}

/// A gate together with the wires it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct GatePlacement {
    gate: GateSpec,
    wires: WirePositions,
}

impl GatePlacement {
    pub fn new(gate: GateSpec, k: usize, positions: Vec<usize>) -> Result<Self> {
        let wires = WirePositions::new(k, gate.d(), positions)?;
        Self::from_parts(gate, wires)
    }

    pub fn from_parts(gate: GateSpec, wires: WirePositions) -> Result<Self> {
        if gate.arity() != wires.positions.len() {
            return Err(Error::InvalidPlacement(format!(
                "gate `{}` takes {} wire(s) but {} position(s) were given",
                gate.name(),
                gate.arity(),
                wires.positions.len()
            )));
        }
        if gate.d() != wires.d {
            return Err(Error::InvalidPlacement(format!(
                "gate `{}` has d = {} but the register has d = {}",
                gate.name(),
                gate.d(),
                wires.d
            )));
        }
        Ok(GatePlacement { gate, wires })
    }

    pub fn gate(&self) -> &GateSpec {
        &self.gate
    }

    pub fn wires(&self) -> &WirePositions {
        &self.wires
    }

    pub fn k(&self) -> usize {
        self.wires.k
    }

    pub fn positions(&self) -> &[usize] {
        &self.wires.positions
    }
}

/// `I_{d^(m−1)} ⊗ U ⊗ I_{d^(k−n−m+1)}` for a gate on wires `m..m+n`.
pub fn embed_adjacent(gate: &GateSpec, m: usize, k: usize) -> Result<ComplexMatrix> {
    let n = gate.arity();
    if m == 0 || m - 1 + n > k {
        return Err(Error::InvalidPlacement(format!(
            "{n}-wire gate starting at wire {m} does not fit in {k} wire(s)"
        )));
    }
    let d = gate.d();
    d.space(k)?;
    Ok(identity_sandwich(d.space(m - 1)?, gate.matrix(), d.space(k + 1 - n - m)?))
}

/// Middle factor for a binary gate whose inputs sit `n` wires apart.
///
/// A `d`×`d` grid whose block (i, j) is `I_{d^(n−1)} ⊗ U_ij`, where `U_ij`
/// are the `d`×`d` sub-blocks of the gate. Note this is generally not
/// `I_{d^(n−1)} ⊗ U`.
pub fn binary_core(gate: &GateSpec, n: usize) -> Result<ComplexMatrix> {
    if gate.arity() != 2 {
        return Err(Error::InvalidPlacement(format!(
            "gate `{}` is not binary (arity {})",
            gate.name(),
            gate.arity()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidPlacement("binary gate inputs must be distinct wires".into()));
    }
    let d = gate.d();
    let pad = d.space(n - 1)?;
    d.space(n + 1)?;
    Ok(ComplexMatrix::from_blocks(d.get(), pad * d.get(), |i, j| {
        identity_sandwich(pad, &gate.sub_block(i, j), 1)
    }))
}

/// A binary gate with its first input on wire `m` and its second on `q`.
///
/// For `q < m` the gate is first conjugated by the adjacent SWAP so that the
/// first input still lands on wire `m`.
pub fn embed_binary(gate: &GateSpec, k: usize, m: usize, q: usize) -> Result<ComplexMatrix> {
    if gate.arity() != 2 {
        return Err(Error::InvalidPlacement(format!(
            "gate `{}` is not binary (arity {})",
            gate.name(),
            gate.arity()
        )));
    }
    if m == q {
        return Err(Error::InvalidPlacement(format!("duplicate wire position {m}")));
    }
    for p in [m, q] {
        if p == 0 || p > k {
            return Err(Error::InvalidPlacement(format!("wire position {p} outside 1..={k}")));
        }
    }
    let d = gate.d();
    d.space(k)?;
    if m > q {
        let swap = qudit_swap(d);
        let flipped = matmul(&matmul(&swap, gate.matrix())?, &swap)?;
        let flipped = GateSpec::derived(gate.name(), d, 2, flipped);
        return embed_binary(&flipped, k, q, m);
    }
    let core = binary_core(gate, q - m)?;
    Ok(identity_sandwich(d.space(m - 1)?, &core, d.space(k - q)?))
}

/// A gate of any arity on arbitrary wires, as `Π† · (U ⊗ I) · Π`.
///
/// `Π` is a product of [`swap_pair`] operators moving the listed wires to the
/// front of the register in order.
pub fn embed_nary(gate: &GateSpec, wires: &WirePositions) -> Result<ComplexMatrix> {
    let placement = GatePlacement::from_parts(gate.clone(), wires.clone())?;
    let k = wires.k();
    let d = wires.d();
    if let Some(m) = wires.adjacent_start() {
        return embed_adjacent(gate, m, k);
    }
    let n = gate.arity();
    let mut layout: Vec<usize> = (1..=k).collect();
    let mut perm: Option<ComplexMatrix> = None;
    for (i, &w) in placement.positions().iter().enumerate() {
        let slot = layout.iter().position(|&x| x == w).expect("wire present in layout");
        if slot == i {
            continue;
        }
        let step = swap_pair(k, i + 1, slot + 1, d)?;
        perm = Some(match perm {
            None => step,
            Some(p) => matmul(&step, &p)?,
        });
        layout.swap(i, slot);
    }
    let perm = perm.expect("non-adjacent placement needs at least one swap");
    let front = identity_sandwich(1, gate.matrix(), d.space(k - n)?);
    matmul(&dagger(&perm), &matmul(&front, &perm)?)
}

/// Block-path operator for a placement: adjacent, binary or n-ary as fits.
pub fn embed(placement: &GatePlacement) -> Result<ComplexMatrix> {
    let gate = placement.gate();
    let k = placement.k();
    if let Some(m) = placement.wires().adjacent_start() {
        return embed_adjacent(gate, m, k);
    }
    match placement.positions() {
        &[m, q] => embed_binary(gate, k, m, q),
        _ => embed_nary(gate, placement.wires()),
    }
}
