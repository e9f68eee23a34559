//! Seeded random unitaries, states and placements for verification runs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::gates::{GateSpec, QuditDim, CUSTOM_GATE};
use crate::linalg::{Complex, ComplexMatrix};
use crate::qcl::{DensityOperator, StateVector};

pub const DEFAULT_SEED: u64 = 42;

/// Independent stream for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitary from modified Gram–Schmidt on the columns of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex>> =
            (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
        let mut degenerate = false;
        for j in 0..n {
            for i in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj: Complex = done[i].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in rest[0].iter_mut().zip(&done[i]) {
                    *x -= proj * a;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            cols[j].iter_mut().for_each(|z| *z /= norm);
        }
        if degenerate {
            continue;
        }
        let mut m = ComplexMatrix::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m.set(i, j, z);
            }
        }
        return m;
    }
}

pub fn random_gate<R: Rng + ?Sized>(d: QuditDim, arity: usize, rng: &mut R) -> Result<GateSpec> {
    let side = d.space(arity)?;
    GateSpec::new(CUSTOM_GATE, d, arity, random_unitary(side, rng))
}

pub fn random_state<R: Rng + ?Sized>(d: QuditDim, k: usize, rng: &mut R) -> Result<StateVector> {
    let side = d.space(k)?;
    let mut amps: Vec<Complex> = (0..side).map(|_| gaussian(rng)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    StateVector::new(d, k, amps)
}

/// Convex mixture of `rank` random pure states.
pub fn random_density<R: Rng + ?Sized>(
    d: QuditDim,
    k: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let rank = rank.max(1);
    let weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut acc: Option<ComplexMatrix> = None;
    for w in weights {
        let pure = DensityOperator::pure(&random_state(d, k, rng)?);
        let term = pure.matrix().scale(Complex::new(w / total, 0.0));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    let mut m = acc.expect("rank >= 1");
    // Symmetrize away rounding so the Hermitian check is exact.
    let n = m.rows();
    for i in 0..n {
        let z = m.get(i, i);
        m.set(i, i, Complex::new(z.re, 0.0));
        for j in i + 1..n {
            let z = m.get(i, j);
            m.set(j, i, z.conj());
        }
    }
    DensityOperator::new(d, k, m)
}

/// `count` distinct wires of `1..=k` in random order.
pub fn random_positions<R: Rng + ?Sized>(k: usize, count: usize, rng: &mut R) -> Vec<usize> {
    sample(rng, k, count).into_iter().map(|i| i + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, EPSILON};

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = trial_rng(DEFAULT_SEED, 0);
        for n in [1, 2, 4, 8, 9, 27] {
            assert!(is_unitary(&random_unitary(n, &mut rng), EPSILON).unwrap());
        }
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = random_unitary(4, &mut trial_rng(7, 3));
        let b = random_unitary(4, &mut trial_rng(7, 3));
        let c = random_unitary(4, &mut trial_rng(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn densities_validate() {
        let mut rng = trial_rng(1, 0);
        for rank in 1..4 {
            random_density(QuditDim::QUBIT, 3, rank, &mut rng).unwrap();
        }
    }

    #[test]
    fn positions_are_distinct_and_in_range() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..50 {
            let p = random_positions(6, 3, &mut rng);
            assert_eq!(p.len(), 3);
            assert!(p.iter().all(|&x| (1..=6).contains(&x)));
            assert!(p[0] != p[1] && p[1] != p[2] && p[0] != p[2]);
        }
    }
}
