//! Truth probabilities of quantum computational logic.
//!
//! A qubit register is *true* when its target wires all read 1. The standard
//! convention targets the last wire only; the multi-target variant takes an
//! explicit [`TargetMask`].

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gates::{projector, GateSpec, QuditDim};
use crate::linalg::{
    dagger, identity_sandwich, kron, matmul, trace, trace_of_product, unitarity_deviation, Complex,
    ComplexMatrix, EPSILON, ONE, ZERO,
};

/// Beyond this slack an out-of-range probability is an error, not a rounding artifact.
pub const PROBABILITY_SLACK: f64 = 1e-8;

/// Normalized pure state of `k` wires of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d: QuditDim,
    k: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(d: QuditDim, k: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        let side = d.space(k)?;
        if amplitudes.len() != side {
            return Err(Error::InvalidState(format!(
                "{k} wire(s) with d = {d} need {side} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > EPSILON {
            return Err(Error::InvalidState(format!("state has norm {norm}, expected 1")));
        }
        Ok(StateVector { d, k, amplitudes })
    }

    /// Computational basis state `|x₁ … x_k⟩`.
    pub fn basis(d: QuditDim, digits: &[usize]) -> Result<Self> {
        let k = digits.len();
        if k == 0 {
            return Err(Error::InvalidState("basis state needs at least one wire".into()));
        }
        let side = d.space(k)?;
        let mut index = 0;
        for &x in digits {
            if x >= d.get() {
                return Err(Error::IndexOutOfRange { index: x, d: d.get() });
            }
            index = index * d.get() + x;
        }
        let mut amplitudes = vec![ZERO; side];
        amplitudes[index] = ONE;
        Ok(StateVector { d, k, amplitudes })
    }

    pub fn d(&self) -> QuditDim {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }
}

/// Mixed state of `k` wires: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    d: QuditDim,
    k: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(d: QuditDim, k: usize, matrix: ComplexMatrix) -> Result<Self> {
        let side = d.space(k)?;
        if matrix.rows() != side || matrix.cols() != side {
            return Err(Error::InvalidState(format!(
                "density operator for {k} wire(s) with d = {d} must be {side}x{side}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_hermitian(EPSILON) {
            return Err(Error::InvalidState("density operator is not Hermitian".into()));
        }
        let tr = trace(&matrix)?;
        if (tr - ONE).norm() > EPSILON {
            return Err(Error::InvalidState(format!("density operator has trace {tr}")));
        }
        if let Some(i) = (0..side).find(|&i| matrix.get(i, i).re < -EPSILON) {
            return Err(Error::InvalidState(format!("negative population at index {i}")));
        }
        let purity: f64 = matrix.entries().iter().map(|z| z.norm_sqr()).sum();
        if purity > 1.0 + EPSILON {
            return Err(Error::InvalidState(format!("Tr(ρ²) = {purity} exceeds 1")));
        }
        Ok(DensityOperator { d, k, matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(state: &StateVector) -> Self {
        let psi = ComplexMatrix::column(&state.amplitudes).expect("non-empty state");
        let matrix = matmul(&psi, &dagger(&psi)).expect("column times row");
        DensityOperator { d: state.d, k: state.k, matrix }
    }

    pub fn d(&self) -> QuditDim {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl From<&StateVector> for DensityOperator {
    fn from(state: &StateVector) -> Self {
        DensityOperator::pure(state)
    }
}

impl From<StateVector> for DensityOperator {
    fn from(state: StateVector) -> Self {
        DensityOperator::pure(&state)
    }
}

/// Wires whose output must read 1 for the register to count as true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetMask {
    k: usize,
    targets: BTreeSet<usize>,
}

impl TargetMask {
    pub fn new(k: usize, targets: impl IntoIterator<Item = usize>) -> Result<Self> {
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        if targets.is_empty() {
            return Err(Error::InvalidPlacement("target mask is empty".into()));
        }
        if let Some(&t) = targets.iter().find(|&&t| t == 0 || t > k) {
            return Err(Error::InvalidPlacement(format!("target wire {t} outside 1..={k}")));
        }
        Ok(TargetMask { k, targets })
    }

    /// The standard convention: only wire `k` is a target.
    pub fn last_wire(k: usize) -> Result<Self> {
        Self::new(k, [k])
    }

    /// Both wires of a binary gate that is not of control-target type.
    pub fn binary_default(k: usize, m: usize, q: usize) -> Result<Self> {
        Self::new(k, [m, q])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().copied()
    }

    pub fn contains(&self, wire: usize) -> bool {
        self.targets.contains(&wire)
    }

    /// `𝒫₁ ⊗ … ⊗ 𝒫_k` with `P₁` on targets and `I` elsewhere.
    pub fn projector(&self) -> ComplexMatrix {
        let p1 = projector(QuditDim::QUBIT, 1, 1).expect("qubit index");
        let id = ComplexMatrix::identity(2);
        (1..=self.k).fold(ComplexMatrix::identity(1), |acc, w| {
            kron(&acc, if self.contains(w) { &p1 } else { &id })
        })
    }
}

fn require_qubits(rho: &DensityOperator) -> Result<()> {
    if rho.d != QuditDim::QUBIT {
        return Err(Error::Unsupported(format!(
            "truth probabilities are defined for qubits, got d = {}",
            rho.d
        )));
    }
    Ok(())
}

fn require_unitary_on(u: &ComplexMatrix, rho: &DensityOperator) -> Result<()> {
    if u.rows() != rho.matrix.rows() || u.cols() != rho.matrix.cols() {
        return Err(Error::DimensionMismatch {
            left_rows: u.rows(),
            left_cols: u.cols(),
            right_rows: rho.matrix.rows(),
            right_cols: rho.matrix.cols(),
        });
    }
    let deviation = unitarity_deviation(u)?;
    if deviation > EPSILON {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Turns a trace into a probability, clamping rounding noise into [0, 1].
fn probability(value: Complex) -> Result<f64> {
    if value.im.abs() > PROBABILITY_SLACK {
        return Err(Error::ComplexProbability { imag: value.im });
    }
    if value.re < -PROBABILITY_SLACK || value.re > 1.0 + PROBABILITY_SLACK {
        return Err(Error::ProbabilityOutOfRange { value: value.re });
    }
    Ok(value.re.clamp(0.0, 1.0))
}

/// `U ρ U†`.
pub fn apply_channel(u: &ComplexMatrix, rho: &DensityOperator) -> Result<DensityOperator> {
    require_unitary_on(u, rho)?;
    let evolved = matmul(&matmul(u, &rho.matrix)?, &dagger(u))?;
    DensityOperator::new(rho.d, rho.k, evolved)
}

/// `Tr((I ⊗ P₁) ρ)`: probability that the last wire reads 1.
pub fn truth_probability(rho: &DensityOperator) -> Result<f64> {
    require_qubits(rho)?;
    let mask = TargetMask::last_wire(rho.k)?;
    probability(trace_of_product(&mask.projector(), &rho.matrix)?)
}

/// `Tr[(⊗ᵢ 𝒫ᵢ) U ρ U†]` for the wires in `mask`.
pub fn mt_probability(u: &ComplexMatrix, rho: &DensityOperator, mask: &TargetMask) -> Result<f64> {
    require_qubits(rho)?;
    if mask.k != rho.k {
        return Err(Error::InvalidPlacement(format!(
            "target mask covers {} wire(s), state has {}",
            mask.k, rho.k
        )));
    }
    let evolved = apply_channel(u, rho)?;
    probability(trace_of_product(&mask.projector(), &evolved.matrix)?)
}

/// `U†(P₁ ⊗ I ⊗ P₁)U` for a binary qubit gate whose inputs are `n` wires apart.
///
/// Only the lower sub-blocks `U₂₁`, `U₂₂` enter: block (i, j) of the result
/// is `I_{2^(n−1)} ⊗ (U₂ᵢ† P₁ U₂ⱼ)`.
pub fn lambda_operator(gate: &GateSpec, n: usize) -> Result<ComplexMatrix> {
    if gate.arity() != 2 || gate.d() != QuditDim::QUBIT {
        return Err(Error::Unsupported(format!(
            "Λ is defined for binary qubit gates, got arity {} with d = {}",
            gate.arity(),
            gate.d()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidPlacement("gate inputs must be distinct wires".into()));
    }
    let pad = QuditDim::QUBIT.space(n - 1)?;
    let p1 = projector(QuditDim::QUBIT, 1, 1)?;
    let lower = [gate.sub_block(1, 0), gate.sub_block(1, 1)];
    let mut blocks = Vec::with_capacity(4);
    for left in &lower {
        for right in &lower {
            let core = matmul(&matmul(&dagger(left), &p1)?, right)?;
            blocks.push(identity_sandwich(pad, &core, 1));
        }
    }
    Ok(ComplexMatrix::from_blocks(2, 2 * pad, |i, j| blocks[2 * i + j].clone()))
}

/// Probability that wires `m` and `q` both read 1 after the binary gate acts
/// on them, evaluated as `Tr[(I ⊗ Λ ⊗ I) ρ]` without embedding the gate.
pub fn mt_probability_fast(
    gate: &GateSpec,
    k: usize,
    m: usize,
    q: usize,
    rho: &DensityOperator,
) -> Result<f64> {
    require_qubits(rho)?;
    if m == 0 || m >= q || q > k {
        return Err(Error::InvalidPlacement(format!(
            "need 1 <= m < q <= k, got m = {m}, q = {q}, k = {k}"
        )));
    }
    if rho.k != k {
        return Err(Error::InvalidState(format!("state has {} wire(s), expected {k}", rho.k)));
    }
    let lambda = lambda_operator(gate, q - m)?;
    let padded = identity_sandwich(1 << (m - 1), &lambda, 1 << (k - q));
    probability(trace_of_product(&padded, &rho.matrix)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::swap_pair;
    use crate::gates::standard_gate;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn basis_rho(digits: &[usize]) -> DensityOperator {
        DensityOperator::pure(&StateVector::basis(QuditDim::QUBIT, digits).unwrap())
    }

    #[test]
    fn identity_channel_is_noop() {
        let rho = basis_rho(&[1, 0]);
        let out = apply_channel(&ComplexMatrix::identity(4), &rho).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn swap_channel_moves_population() {
        let swap = swap_pair(2, 1, 2, QuditDim::QUBIT).unwrap();
        let out = apply_channel(&swap, &basis_rho(&[1, 0])).unwrap();
        assert_eq!(out, basis_rho(&[0, 1]));
    }

    #[test]
    fn sqrt_swap_channel_coherences() {
        let g = standard_gate("sqrt_swap", QuditDim::QUBIT).unwrap();
        let out = apply_channel(g.matrix(), &basis_rho(&[1, 0])).unwrap();
        let m = out.matrix();
        assert!((m.get(1, 2).norm() - 0.5).abs() < 1e-15);
        assert!((m.get(2, 1).norm() - 0.5).abs() < 1e-15);
        assert!((m.get(1, 1).re - 0.5).abs() < 1e-15);
        assert!((m.get(2, 2).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn channel_rejects_bad_operators() {
        let rho = basis_rho(&[0, 0]);
        assert!(matches!(
            apply_channel(&ComplexMatrix::identity(2), &rho),
            Err(Error::DimensionMismatch { .. })
        ));
        let scaled = ComplexMatrix::identity(4).scale(c(2.0, 0.0));
        assert!(matches!(apply_channel(&scaled, &rho), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn truth_of_single_qubits() {
        assert_eq!(truth_probability(&basis_rho(&[0])).unwrap(), 0.0);
        let psi = StateVector::new(QuditDim::QUBIT, 1, vec![c(0.6, 0.0), c(0.0, -0.8)]).unwrap();
        let p = truth_probability(&psi.into()).unwrap();
        assert!((p - 0.64).abs() < 1e-12);
    }

    #[test]
    fn truth_depends_on_last_wire_only() {
        assert_eq!(truth_probability(&basis_rho(&[1, 0])).unwrap(), 0.0);
        assert_eq!(truth_probability(&basis_rho(&[0, 1])).unwrap(), 1.0);
    }

    #[test]
    fn truth_requires_qubits() {
        let s = StateVector::basis(QuditDim::QUTRIT, &[2]).unwrap();
        assert!(matches!(truth_probability(&s.into()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn multi_target_swap_examples() {
        let swap = swap_pair(2, 1, 2, QuditDim::QUBIT).unwrap();
        let both = TargetMask::new(2, [1, 2]).unwrap();
        assert_eq!(mt_probability(&swap, &basis_rho(&[1, 1]), &both).unwrap(), 1.0);
        assert_eq!(mt_probability(&swap, &basis_rho(&[1, 0]), &both).unwrap(), 0.0);
    }

    #[test]
    fn multi_target_sqrt_swap_half() {
        let g = standard_gate("sqrt_swap", QuditDim::QUBIT).unwrap();
        let second = TargetMask::new(2, [2]).unwrap();
        let p = mt_probability(g.matrix(), &basis_rho(&[1, 0]), &second).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_of_swap() {
        let swap = standard_gate("swap", QuditDim::QUBIT).unwrap();
        let p1 = projector(QuditDim::QUBIT, 1, 1).unwrap();
        for n in 1..=4 {
            let expected = kron(&kron(&p1, &ComplexMatrix::identity(1 << (n - 1))), &p1);
            assert_eq!(lambda_operator(&swap, n).unwrap(), expected, "n = {n}");
        }
    }

    #[test]
    fn lambda_of_identity() {
        let id = GateSpec::new("id2", QuditDim::QUBIT, 2, ComplexMatrix::identity(4)).unwrap();
        let l = lambda_operator(&id, 2).unwrap();
        let p1 = projector(QuditDim::QUBIT, 1, 1).unwrap();
        assert_eq!(l.block(0, 0, 4), ComplexMatrix::zeros(4, 4));
        assert_eq!(l.block(0, 1, 4), ComplexMatrix::zeros(4, 4));
        assert_eq!(l.block(1, 1, 4), kron(&ComplexMatrix::identity(2), &p1));
    }

    #[test]
    fn lambda_of_sqrt_swap_on_one_zero() {
        let g = standard_gate("sqrt_swap", QuditDim::QUBIT).unwrap();
        let l = lambda_operator(&g, 1).unwrap();
        let t = trace_of_product(&l, basis_rho(&[1, 0]).matrix()).unwrap();
        assert!(t.norm() < 1e-15);
    }

    #[test]
    fn fast_path_swap_on_basis_state() {
        let swap = standard_gate("swap", QuditDim::QUBIT).unwrap();
        assert_eq!(mt_probability_fast(&swap, 3, 1, 3, &basis_rho(&[1, 0, 1])).unwrap(), 1.0);
        assert_eq!(mt_probability_fast(&swap, 3, 1, 3, &basis_rho(&[1, 1, 0])).unwrap(), 0.0);
    }

    #[test]
    fn fast_path_rejects_bad_placement() {
        let swap = standard_gate("swap", QuditDim::QUBIT).unwrap();
        let rho = basis_rho(&[1, 0, 1]);
        assert!(mt_probability_fast(&swap, 3, 3, 1, &rho).is_err());
        assert!(mt_probability_fast(&swap, 3, 1, 4, &rho).is_err());
        assert!(mt_probability_fast(&swap, 4, 1, 3, &rho).is_err());
    }

    #[test]
    fn density_validation() {
        let d = QuditDim::QUBIT;
        let half = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(DensityOperator::new(d, 1, half).is_ok());
        assert!(DensityOperator::new(d, 1, ComplexMatrix::identity(2)).is_err());
        let skew = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.0, 0.1)], vec![c(0.0, 0.1), c(0.5, 0.0)]]).unwrap();
        assert!(DensityOperator::new(d, 1, skew).is_err());
        let negative = ComplexMatrix::from_real_rows(&[&[1.5, 0.0], &[0.0, -0.5]]).unwrap();
        assert!(DensityOperator::new(d, 1, negative).is_err());
        let too_coherent = ComplexMatrix::from_real_rows(&[&[0.5, 0.9], &[0.9, 0.5]]).unwrap();
        assert!(DensityOperator::new(d, 1, too_coherent).is_err());
    }

    #[test]
    fn state_validation() {
        let d = QuditDim::QUBIT;
        assert!(StateVector::new(d, 1, vec![ONE, ONE]).is_err());
        assert!(StateVector::new(d, 2, vec![ONE, ZERO]).is_err());
        assert!(StateVector::basis(d, &[0, 2]).is_err());
    }

    #[test]
    fn mask_validation() {
        assert!(TargetMask::new(3, []).is_err());
        assert!(TargetMask::new(3, [0]).is_err());
        assert!(TargetMask::new(3, [4]).is_err());
        assert_eq!(TargetMask::new(3, [3, 1, 3]).unwrap().targets().collect::<Vec<_>>(), vec![1, 3]);
    }
}
