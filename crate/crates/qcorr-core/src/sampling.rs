//! Reproducible random states, observables and unitaries.
//!
//! Streams are defined exactly so that alternate implementations can
//! regenerate them: draw `u64`s from the caller's generator (the CLI and the
//! test suites use ChaCha8 keyed by the run seed), map to uniforms in (0, 1]
//! via `((x >> 11) + 1) * 2^-53`, and convert pairs to standard normals with
//! the Box-Muller transform `sqrt(-2 ln u1) * cos(2π u2)`. Complex Ginibre
//! entries take two normals each, in row-major entry order.

use alloc::vec::Vec;
use num_complex::Complex64;
use rand_core::RngCore;

use crate::linalg::{ComplexMatrix, Ket};
use crate::states::DensityMatrix;

/// Identifier of the stream recipe above, recorded in CLI output metadata.
pub const PRNG_ALGORITHM: &str = "chacha8;u64>>11+1/2^53;box-muller;ginibre-row-major";

fn uniform01<R: RngCore>(rng: &mut R) -> f64 {
    // In (0, 1]; never zero, so the log below is finite.
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
}

/// Standard normal via Box-Muller.
pub fn standard_normal<R: RngCore>(rng: &mut R) -> f64 {
    let u1 = uniform01(rng);
    let u2 = uniform01(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

fn complex_normal<R: RngCore>(rng: &mut R) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Ginibre matrix: independent standard complex normal entries.
pub fn ginibre<R: RngCore>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::new(rows, cols, entries).expect("finite normal entries")
}

/// Haar-like random normalized state vector.
pub fn random_ket<R: RngCore>(dim: usize, rng: &mut R) -> Ket {
    let amps: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    Ket::new(amps)
        .expect("finite amplitudes")
        .normalize()
        .expect("normal vector is nonzero with probability one")
}

/// Random Hermitian matrix (G + G†)/2, exactly Hermitian.
pub fn random_hermitian<R: RngCore>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, dim, rng).hermitian_part()
}

/// Random density matrix of the given rank: GG†/tr(GG†) with G of shape
/// dim x rank. Rank 1 yields a random pure-state projector.
pub fn random_density<R: RngCore>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    assert!(rank >= 1 && rank <= dim, "rank must be in 1..=dim");
    let g = ginibre(dim, rank, rng);
    let w = g.mul(&g.adjoint());
    let trace = w.trace().re;
    DensityMatrix::new(w.scale_re(1.0 / trace)).expect("Gram matrix is a valid density")
}

/// Random unitary via Gram-Schmidt on a Ginibre matrix (two passes for
/// orthogonality at machine precision).
pub fn random_unitary<R: RngCore>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    let mut cols: Vec<Ket> = (0..dim)
        .map(|k| {
            let amps = (0..dim).map(|i| g.get(i, k)).collect();
            Ket::new(amps).expect("finite")
        })
        .collect();
    for k in 0..dim {
        for _pass in 0..2 {
            for j in 0..k {
                let proj = cols[j].inner(&cols[k]);
                let shifted = cols[k].sub(&cols[j].scale(proj));
                cols[k] = shifted;
            }
        }
        cols[k] = cols[k]
            .normalize()
            .expect("Ginibre columns are independent with probability one");
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j].amplitudes()[i])
}
