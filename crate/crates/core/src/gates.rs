//! Gate catalog for qubits and qudits.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use crate::error::{Error, Result};
use crate::linalg::{self, checked_side, Complex, ComplexMatrix, EPSILON, ONE, ZERO};

/// Local dimension of a wire, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuditDim(usize);

impl QuditDim {
    pub const QUBIT: QuditDim = QuditDim(2);
    pub const QUTRIT: QuditDim = QuditDim(3);

    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(QuditDim(d))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// `d^wires`, subject to the size guard.
    pub fn space(self, wires: usize) -> Result<usize> {
        checked_side(self.0, wires)
    }
}

impl fmt::Display for QuditDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Name given to gates supplied as raw matrices.
pub const CUSTOM_GATE: &str = "custom";

/// A unitary acting on `arity` wires of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    name: String,
    d: QuditDim,
    arity: usize,
    matrix: ComplexMatrix,
}

impl GateSpec {
    /// Validates shape (`d^arity` square) and unitarity within [`EPSILON`].
    pub fn new(name: impl Into<String>, d: QuditDim, arity: usize, matrix: ComplexMatrix) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidPlacement("gate arity must be at least 1".into()));
        }
        let side = d.space(arity)?;
        if matrix.rows() != side || matrix.cols() != side {
            return Err(Error::MalformedMatrix(format!(
                "a {arity}-wire gate with d = {d} needs a {side}x{side} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = linalg::unitarity_deviation(&matrix)?;
        if deviation > EPSILON {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(GateSpec { name: name.into(), d, arity, matrix })
    }

    /// Wraps a raw matrix, inferring the arity from its side length.
    pub fn custom(d: QuditDim, matrix: ComplexMatrix) -> Result<Self> {
        let side = matrix.rows();
        let mut arity = 0;
        let mut s = 1usize;
        while s < side {
            s = s.saturating_mul(d.get());
            arity += 1;
        }
        if s != side || arity == 0 {
            return Err(Error::MalformedMatrix(format!(
                "side {side} is not a positive power of d = {d}"
            )));
        }
        GateSpec::new(CUSTOM_GATE, d, arity, matrix)
    }

    /// Skips validation for matrices derived from an already validated gate.
    pub(crate) fn derived(name: impl Into<String>, d: QuditDim, arity: usize, matrix: ComplexMatrix) -> Self {
        GateSpec { name: name.into(), d, arity, matrix }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn d(&self) -> QuditDim {
        self.d
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The `d`×`d` sub-block (`i`, `j`) of a binary gate, 0-based.
    pub fn sub_block(&self, i: usize, j: usize) -> ComplexMatrix {
        let side = self.matrix.rows() / self.d.get();
        self.matrix.block(i, j, side)
    }
}

/// `|b_j⟩⟨b_k|` in `C^d`.
pub fn projector(d: QuditDim, j: usize, k: usize) -> Result<ComplexMatrix> {
    let n = d.get();
    for index in [j, k] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, d: n });
        }
    }
    let mut m = ComplexMatrix::zeros(n, n);
    m.set(j, k, ONE);
    Ok(m)
}

/// SWAP of two adjacent qudits: block (i, j) is `|b_j⟩⟨b_i|`.
pub fn qudit_swap(d: QuditDim) -> ComplexMatrix {
    let n = d.get();
    ComplexMatrix::from_blocks(n, n, |i, j| projector(d, j, i).expect("indices below d"))
}

/// Gate names understood by [`standard_gate`] for `d`.
pub fn catalog_names(d: QuditDim) -> &'static [&'static str] {
    match d.get() {
        2 => &["identity", "pauli_x", "swap", "sqrt_swap", "cnot", "toffoli", "fredkin"],
        3 => &["identity", "swap", "sqrt_swap"],
        _ => &["identity", "swap"],
    }
}

fn canonical_name(name: &str) -> String {
    let lower = name.trim().to_ascii_lowercase().replace('-', "_");
    match lower.as_str() {
        "i" | "id" => "identity".into(),
        "x" | "not" => "pauli_x".into(),
        "cx" => "cnot".into(),
        "ccx" | "ccnot" => "toffoli".into(),
        "cswap" => "fredkin".into(),
        "sqrtswap" | "√swap" => "sqrt_swap".into(),
        _ => lower,
    }
}

static CATALOG: LazyLock<Mutex<HashMap<(String, QuditDim), GateSpec>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Looks up a catalog gate by case-insensitive name.
pub fn standard_gate(name: &str, d: QuditDim) -> Result<GateSpec> {
    let key = (canonical_name(name), d);
    if let Some(g) = CATALOG.lock().expect("catalog lock").get(&key) {
        return Ok(g.clone());
    }
    let gate = build_standard(&key.0, d)
        .ok_or_else(|| Error::UnknownGate { name: name.to_string(), d: d.get() })??;
    CATALOG.lock().expect("catalog lock").insert(key, gate.clone());
    Ok(gate)
}

fn build_standard(name: &str, d: QuditDim) -> Option<Result<GateSpec>> {
    let (arity, matrix) = match (name, d.get()) {
        ("identity", n) => (1, ComplexMatrix::identity(n)),
        ("swap", _) => (2, qudit_swap(d)),
        ("pauli_x", 2) => (1, permutation(&[1, 0])),
        ("cnot", 2) => (2, permutation(&[0, 1, 3, 2])),
        ("toffoli", 2) => (3, permutation(&[0, 1, 2, 3, 4, 5, 7, 6])),
        ("fredkin", 2) => (3, permutation(&[0, 1, 2, 3, 4, 6, 5, 7])),
        ("sqrt_swap", 2) => (2, sqrt_swap_qubit()),
        ("sqrt_swap", 3) => (2, sqrt_swap_qutrit()),
        _ => return None,
    };
    Some(GateSpec::new(name, d, arity, matrix))
}

/// Permutation matrix sending basis state `i` to `image[i]`.
fn permutation(image: &[usize]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(image.len(), image.len());
    for (col, &row) in image.iter().enumerate() {
        m.set(row, col, ONE);
    }
    m
}

const HALF_PLUS: Complex = Complex::new(0.5, 0.5);
const HALF_MINUS: Complex = Complex::new(0.5, -0.5);

fn sqrt_swap_qubit() -> ComplexMatrix {
    let (a, b) = (HALF_PLUS, HALF_MINUS);
    ComplexMatrix::from_rows(&[
        vec![ONE, ZERO, ZERO, ZERO],
        vec![ZERO, a, b, ZERO],
        vec![ZERO, b, a, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
    ])
    .expect("4x4 literal")
}

/// The two-qutrit square root of SWAP, tiled from its nine 3×3 blocks.
fn sqrt_swap_qutrit() -> ComplexMatrix {
    let (a, b) = (HALF_PLUS, HALF_MINUS);
    let diag = |x: Complex, y: Complex, z: Complex| {
        let mut m = ComplexMatrix::zeros(3, 3);
        m.set(0, 0, x);
        m.set(1, 1, y);
        m.set(2, 2, z);
        m
    };
    let single = |r: usize, c: usize| {
        let mut m = ComplexMatrix::zeros(3, 3);
        m.set(r, c, b);
        m
    };
    let blocks = [
        [diag(ONE, a, a), single(1, 0), single(2, 0)],
        [single(0, 1), diag(a, ONE, a), single(2, 1)],
        [single(0, 2), single(1, 2), diag(a, a, ONE)],
    ];
    ComplexMatrix::from_blocks(3, 3, |i, j| blocks[i][j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, kron, matmul, matvec};

    fn basis(d: usize, i: usize) -> Vec<Complex> {
        let mut v = vec![ZERO; d];
        v[i] = ONE;
        v
    }

    fn kron_vec(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
        a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
    }

    #[test]
    fn qubit_projectors_and_ladders() {
        let d = QuditDim::QUBIT;
        let l0 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let p1 = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(projector(d, 0, 1).unwrap(), l0);
        assert_eq!(projector(d, 1, 1).unwrap(), p1);
    }

    #[test]
    fn qutrit_projector_entry() {
        let p = projector(QuditDim::QUTRIT, 2, 0).unwrap();
        assert_eq!(p.get(2, 0), ONE);
        assert_eq!(p.nonzero_count(), 1);
    }

    #[test]
    fn projector_index_out_of_range() {
        assert_eq!(
            projector(QuditDim::QUBIT, 2, 0).unwrap_err(),
            Error::IndexOutOfRange { index: 2, d: 2 }
        );
    }

    #[test]
    fn qudit_dim_rejects_one() {
        assert_eq!(QuditDim::new(1).unwrap_err(), Error::InvalidDimension(1));
    }

    #[test]
    fn qubit_swap_literal() {
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(*standard_gate("swap", QuditDim::QUBIT).unwrap().matrix(), expected);
        assert_eq!(qudit_swap(QuditDim::QUBIT), expected);
    }

    #[test]
    fn qubit_sqrt_swap_middle_block() {
        let g = standard_gate("SQRT_SWAP", QuditDim::QUBIT).unwrap();
        let m = g.matrix();
        assert_eq!(m.get(1, 1), HALF_PLUS);
        assert_eq!(m.get(1, 2), HALF_MINUS);
        assert_eq!(m.get(2, 1), HALF_MINUS);
        assert_eq!(m.get(2, 2), HALF_PLUS);
        assert_eq!(m.get(0, 0), ONE);
        assert_eq!(m.get(3, 3), ONE);
    }

    #[test]
    fn qutrit_sqrt_swap_squares_to_swap() {
        let g = standard_gate("sqrt_swap", QuditDim::QUTRIT).unwrap();
        let sq = matmul(g.matrix(), g.matrix()).unwrap();
        assert!(sq.approx_eq(&qudit_swap(QuditDim::QUTRIT), EPSILON));
    }

    #[test]
    fn qudit_swap_block_layout() {
        for d in 2..=6 {
            let dim = QuditDim::new(d).unwrap();
            let s = qudit_swap(dim);
            for i in 0..d {
                for j in 0..d {
                    assert_eq!(s.block(i, j, d), projector(dim, j, i).unwrap());
                }
            }
        }
    }

    #[test]
    fn qudit_swap_exchanges_basis_pairs() {
        for d in 2..=6 {
            let s = qudit_swap(QuditDim::new(d).unwrap());
            for x in 0..d {
                for y in 0..d {
                    let input = kron_vec(&basis(d, x), &basis(d, y));
                    let expected = kron_vec(&basis(d, y), &basis(d, x));
                    assert_eq!(matvec(&s, &input).unwrap(), expected);
                }
            }
            assert_eq!(matmul(&s, &s).unwrap(), ComplexMatrix::identity(d * d));
        }
        assert!(is_unitary(&qudit_swap(QuditDim::new(5).unwrap()), EPSILON).unwrap());
    }

    #[test]
    fn catalog_is_unitary_with_expected_arity() {
        for d in 2..=4 {
            let dim = QuditDim::new(d).unwrap();
            for name in catalog_names(dim) {
                let g = standard_gate(name, dim).unwrap();
                assert_eq!(g.matrix().rows(), d.pow(g.arity() as u32));
                assert!(is_unitary(g.matrix(), EPSILON).unwrap(), "{name} d={d}");
            }
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let g = standard_gate("CNOT", QuditDim::QUBIT).unwrap();
        let input = kron_vec(&basis(2, 1), &basis(2, 0));
        let out = matvec(g.matrix(), &input).unwrap();
        assert_eq!(out, kron_vec(&basis(2, 1), &basis(2, 1)));
    }

    #[test]
    fn fredkin_is_controlled_swap() {
        let g = standard_gate("fredkin", QuditDim::QUBIT).unwrap();
        let swap = qudit_swap(QuditDim::QUBIT);
        let p0 = projector(QuditDim::QUBIT, 0, 0).unwrap();
        let p1 = projector(QuditDim::QUBIT, 1, 1).unwrap();
        let expected = kron(&p0, &ComplexMatrix::identity(4)).add(&kron(&p1, &swap)).unwrap();
        assert_eq!(*g.matrix(), expected);
    }

    #[test]
    fn unknown_or_unsupported_gates() {
        assert!(matches!(
            standard_gate("hadamard", QuditDim::QUBIT),
            Err(Error::UnknownGate { .. })
        ));
        assert!(matches!(
            standard_gate("cnot", QuditDim::QUTRIT),
            Err(Error::UnknownGate { d: 3, .. })
        ));
        assert!(standard_gate("sqrt_swap", QuditDim::new(4).unwrap()).is_err());
    }

    #[test]
    fn custom_gate_validation() {
        let shear = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(GateSpec::custom(QuditDim::QUBIT, shear), Err(Error::NotUnitary { .. })));
        let wrong = ComplexMatrix::identity(3);
        assert!(GateSpec::custom(QuditDim::QUBIT, wrong).is_err());
        let g = GateSpec::custom(QuditDim::QUBIT, ComplexMatrix::identity(8)).unwrap();
        assert_eq!(g.arity(), 3);
    }
}
