#![allow(dead_code)]

use blockgate::{Complex, ComplexMatrix, GateSpec};

pub fn digits(mut index: usize, d: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

pub fn undigits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Entry (r, c) is `U[sub(r), sub(c)]` when the untouched digits of `r` and `c`
/// agree, where `sub` reads the digits on `positions` in listed order.
pub fn reference_embedding(gate: &GateSpec, k: usize, positions: &[usize]) -> ComplexMatrix {
    let d = gate.d().get();
    let side = d.pow(k as u32);
    let mut out = ComplexMatrix::zeros(side, side);
    for r in 0..side {
        let rd = digits(r, d, k);
        for c in 0..side {
            let cd = digits(c, d, k);
            let spectators_agree = (0..k)
                .filter(|w| !positions.contains(&(w + 1)))
                .all(|w| rd[w] == cd[w]);
            if !spectators_agree {
                continue;
            }
            let sr: Vec<usize> = positions.iter().map(|&p| rd[p - 1]).collect();
            let sc: Vec<usize> = positions.iter().map(|&p| cd[p - 1]).collect();
            out.set(r, c, gate.matrix().get(undigits(&sr, d), undigits(&sc, d)));
        }
    }
    out
}

/// Permutation matrix exchanging digits `m` and `q`.
pub fn reference_swap(k: usize, m: usize, q: usize, d: usize) -> ComplexMatrix {
    let side = d.pow(k as u32);
    let mut out = ComplexMatrix::zeros(side, side);
    for c in 0..side {
        let mut x = digits(c, d, k);
        x.swap(m - 1, q - 1);
        out.set(undigits(&x, d), c, Complex::new(1.0, 0.0));
    }
    out
}

pub fn basis_column(op: &ComplexMatrix, col: usize) -> Vec<Complex> {
    (0..op.rows()).map(|r| op.get(r, col)).collect()
}

/// Index of the single unit entry in column `col`, if the column is a basis ket.
pub fn image_of_basis(op: &ComplexMatrix, col: usize) -> Option<usize> {
    let column = basis_column(op, col);
    let ones: Vec<usize> = column
        .iter()
        .enumerate()
        .filter(|(_, z)| (**z - Complex::new(1.0, 0.0)).norm() < 1e-12)
        .map(|(i, _)| i)
        .collect();
    let rest_zero = column.iter().filter(|z| z.norm() > 1e-12).count() == 1;
    (ones.len() == 1 && rest_zero).then(|| ones[0])
}
