use crate::error::{Error, Result};
use crate::gates::{projector, QuditDim};
use crate::linalg::{identity_sandwich, matmul, ComplexMatrix};

/// SWAP of the first and last of `n` wires.
///
/// A `d`×`d` grid whose block (i, j) is `I_{d^(n−2)} ⊗ |b_j⟩⟨b_i|`; for
/// qubits this is `[[P₀, L₁], [L₀, P₁]]` with identity-padded entries.
pub fn swap_first_last(n: usize, d: QuditDim) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidPlacement(format!(
            "first/last swap needs at least 2 wires, got {n}"
        )));
    }
    d.space(n)?;
    let pad = d.space(n - 2)?;
    let dd = d.get();
    Ok(ComplexMatrix::from_blocks(dd, pad * dd, |i, j| {
        identity_sandwich(pad, &projector(d, j, i).expect("indices below d"), 1)
    }))
}

fn check_pair(k: usize, m: usize, q: usize) -> Result<()> {
    if m == 0 || q > k {
        return Err(Error::InvalidPlacement(format!(
            "swap ({m}, {q}) outside wires 1..={k}"
        )));
    }
    if m >= q {
        return Err(Error::InvalidPlacement(format!(
            "swap pair needs m < q, got ({m}, {q})"
        )));
    }
    Ok(())
}

/// Exchanges wires `m < q` of a `k`-wire register.
pub fn swap_pair(k: usize, m: usize, q: usize, d: QuditDim) -> Result<ComplexMatrix> {
    check_pair(k, m, q)?;
    d.space(k)?;
    let core = swap_first_last(q - m + 1, d)?;
    Ok(identity_sandwich(d.space(m - 1)?, &core, d.space(k - q)?))
}

/// Product of two wire swaps, with the path that produced it.
#[derive(Debug, Clone)]
pub struct ComposedSwaps {
    pub matrix: ComplexMatrix,
    /// True when the factored form was used instead of two full-size swaps.
    pub fast_path: bool,
}

/// `swap_pair(first) · swap_pair(second)`.
///
/// When `first` starts no earlier than `second` and spans at least as many
/// wires, the product is computed on the window they cover only and then
/// padded; otherwise the two full operators are multiplied.
pub fn compose_swaps(
    k: usize,
    d: QuditDim,
    first: (usize, usize),
    second: (usize, usize),
) -> Result<ComposedSwaps> {
    let (m, q) = first;
    let (m2, q2) = second;
    check_pair(k, m, q)?;
    check_pair(k, m2, q2)?;
    d.space(k)?;
    let (n, n2) = (q - m, q2 - m2);
    if m >= m2 && n >= n2 {
        let shift = m - m2;
        let outer = identity_sandwich(d.space(shift)?, &swap_first_last(n + 1, d)?, 1);
        let inner = identity_sandwich(1, &swap_first_last(n2 + 1, d)?, d.space(shift + n - n2)?);
        let window = matmul(&outer, &inner)?;
        let matrix = identity_sandwich(d.space(m2 - 1)?, &window, d.space(k - q)?);
        return Ok(ComposedSwaps { matrix, fast_path: true });
    }
    let matrix = matmul(&swap_pair(k, m, q, d)?, &swap_pair(k, m2, q2, d)?)?;
    Ok(ComposedSwaps { matrix, fast_path: false })
}
