//! State vectors.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::DEFAULT_TOL;

/// Complex state vector. Need not be normalized; the `normalized` flag
/// records whether the norm was 1 within [`DEFAULT_TOL`] at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
    normalized: bool,
}

impl Ket {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::from_vec_unchecked(amplitudes))
    }

    pub(crate) fn from_vec_unchecked(amplitudes: Vec<Complex64>) -> Self {
        let norm = libm::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum());
        let normalized = (norm - 1.0).abs() <= DEFAULT_TOL;
        Self { amplitudes, normalized }
    }

    /// Computational basis vector e_index.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, bound: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps, normalized: true })
    }

    pub fn from_re(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// Inner product ⟨self|other⟩ (conjugate-linear in self).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(Self::from_vec_unchecked(
            self.amplitudes.iter().map(|z| z / n).collect(),
        ))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_vec_unchecked(self.amplitudes.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::from_vec_unchecked(
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::from_vec_unchecked(
            self.amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Kronecker product, leftmost factor varying slowest.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Self::from_vec_unchecked(amps)
    }

    /// Outer product |self⟩⟨other|.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), other.dim(), |i, j| {
            self.amplitudes[i] * other.amplitudes[j].conj()
        })
    }

    pub fn conj(&self) -> Self {
        Self::from_vec_unchecked(self.amplitudes.iter().map(|z| z.conj()).collect())
    }

    /// Distance treating global phase as irrelevant: min over phases of
    /// ‖self - e^{iφ} other‖.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let ip = self.inner(other);
        let cross = 2.0 * ip.norm();
        let d2 = self.norm_sqr() + other.norm_sqr() - cross;
        libm::sqrt(d2.max(0.0))
    }

    /// Multiplies by the global phase making the largest-magnitude amplitude
    /// real positive (ties: lowest index). Deterministic output convention
    /// for decompositions and file round-trips.
    pub fn with_canonical_phase(&self) -> Self {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for (i, z) in self.amplitudes.iter().enumerate() {
            let m = z.norm();
            if m > best_mag + 1e-15 {
                best = i;
                best_mag = m;
            }
        }
        if best_mag <= 1e-300 {
            return self.clone();
        }
        let phase = self.amplitudes[best] / best_mag;
        self.scale(phase.conj())
    }
}
