//! Dense complex matrix kernel: tensor products, partial traces, Hermitian
//! and unitary eigendecompositions, density validation.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

mod eig;
mod ket;
mod matrix;
mod partition;
pub(crate) mod svd;

pub use eig::{hermitian_eig, hermitian_eig_tol, unitary_fractional_power, unitary_fractional_power_tol, HermitianEig};
pub(crate) use eig::{from_phases, unitary_eig};
pub use ket::Ket;
pub use matrix::ComplexMatrix;
pub use partition::Partition;

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronecker product under the leftmost-slowest index convention:
/// (a ⊗ b)[(i*rb + k), (j*cb + l)] = a[i][j] * b[k][l].
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a.get(i / rb, j / cb) * b.get(i % rb, j % cb)
    })
}

/// Kronecker product of a sequence of factors, left to right.
pub fn tensor_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    assert!(!factors.is_empty(), "tensor_all needs at least one factor");
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = tensor(&acc, f);
    }
    acc
}

/// Traces out the factors not named in `keep`, preserving the order of the
/// kept factors. The total trace is preserved: tr(result) = tr(w).
pub fn partial_trace(w: &ComplexMatrix, p: &Partition, keep: &[usize]) -> Result<ComplexMatrix> {
    if !w.is_square() {
        return Err(Error::NotSquare { rows: w.rows(), cols: w.cols() });
    }
    if w.rows() != p.total_dim() {
        return Err(Error::DimensionMismatch { expected: p.total_dim(), got: w.rows() });
    }
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let n = p.factors();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&f| f >= n) {
        return Err(Error::IndexOutOfRange { index: bad, bound: n });
    }
    let traced: Vec<usize> = (0..n).filter(|f| !kept.contains(f)).collect();
    if traced.is_empty() {
        return Ok(w.clone());
    }

    let kept_dims: Vec<usize> = kept.iter().map(|&f| p.factor_dim(f)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&f| p.factor_dim(f)).collect();
    let kdim: usize = kept_dims.iter().product();
    let tdim: usize = traced_dims.iter().product();

    let unravel = |mut idx: usize, dims: &[usize]| -> Vec<usize> {
        let mut out = alloc::vec![0usize; dims.len()];
        for k in (0..dims.len()).rev() {
            out[k] = idx % dims[k];
            idx /= dims[k];
        }
        out
    };
    let compose = |kd: &[usize], td: &[usize]| -> usize {
        let mut composite = 0usize;
        let mut ki = 0usize;
        let mut ti = 0usize;
        for f in 0..n {
            let digit = if kept.binary_search(&f).is_ok() {
                let d = kd[ki];
                ki += 1;
                d
            } else {
                let d = td[ti];
                ti += 1;
                d
            };
            composite = composite * p.factor_dim(f) + digit;
        }
        composite
    };

    let mut out = ComplexMatrix::zeros(kdim, kdim);
    for rk in 0..kdim {
        let rdigits = unravel(rk, &kept_dims);
        for ck in 0..kdim {
            let cdigits = unravel(ck, &kept_dims);
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..tdim {
                let tdigits = unravel(t, &traced_dims);
                acc += w.get(compose(&rdigits, &tdigits), compose(&cdigits, &tdigits));
            }
            out.set(rk, ck, acc);
        }
    }
    Ok(out)
}

/// Structural report from [`validate_density`]; `ok` iff every deviation is
/// within the requested tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub ok: bool,
}

/// Checks hermiticity, unit trace and positivity of a candidate density
/// matrix. Failures are carried in the report, not raised as errors.
pub fn validate_density(w: &ComplexMatrix, tol: f64) -> Result<DensityReport> {
    if !w.is_square() {
        return Err(Error::NotSquare { rows: w.rows(), cols: w.cols() });
    }
    let hermiticity_deviation = w.hermiticity_deviation();
    let trace_deviation = (w.trace().re - 1.0).abs().max(w.trace().im.abs());
    let herm = w.hermitian_part();
    let eig = hermitian_eig_tol(&herm, 1.0).expect("hermitian part is hermitian");
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let ok = hermiticity_deviation <= tol && trace_deviation <= tol && min_eigenvalue >= -tol;
    Ok(DensityReport { hermiticity_deviation, trace_deviation, min_eigenvalue, ok })
}
