//! Eigendecompositions for Hermitian and unitary matrices.
//!
//! Both solvers are cyclic Jacobi variants: deterministic for a fixed input,
//! accurate to near machine precision at desk-scale dimensions, and free of
//! external dependencies. The unitary solver reduces to two commuting
//! Hermitian problems, (U + U†)/2 and (U - U†)/2i, diagonalizing the second
//! inside each eigenspace cluster of the first.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Ket};
use crate::DEFAULT_TOL;

/// Result of a Hermitian eigendecomposition: eigenvalues descending,
/// eigenvectors orthonormal and index-aligned.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Ket>,
}

/// Diagonalizes a Hermitian matrix with the default structural tolerance.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    hermitian_eig_tol(m, DEFAULT_TOL)
}

pub fn hermitian_eig_tol(m: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let dev = m.hermiticity_deviation();
    if dev > tol {
        return Err(Error::NonHermitian { deviation: dev });
    }
    let (values, vectors) = jacobi_hermitian(&m.hermitian_part());
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| column(&vectors, k))
        .collect();
    Ok(HermitianEig { eigenvalues, eigenvectors })
}

fn column(m: &ComplexMatrix, k: usize) -> Ket {
    let amps = (0..m.rows()).map(|i| m.get(i, k)).collect();
    Ket::from_vec_unchecked(amps)
}

/// Cyclic complex Jacobi on an exactly Hermitian matrix. Returns unsorted
/// eigenvalues and the accumulated unitary whose columns are eigenvectors.
fn jacobi_hermitian(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale == 0.0 || n == 1 {
        let vals = (0..n).map(|i| a.get(i, i).re).collect();
        return (vals, v);
    }
    let threshold = scale * 1e-15;
    for _sweep in 0..100 {
        let mut off: f64 = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, threshold);
            }
        }
    }
    let vals = (0..n).map(|i| a.get(i, i).re).collect();
    (vals, v)
}

/// One Jacobi rotation zeroing a[p][q]; updates a <- J†aJ and v <- vJ where
/// the (p,q) block of J is [[c, s e^{iφ}], [-s e^{-iφ}, c]].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, threshold: f64) {
    let apq = a.get(p, q);
    let mag = apq.norm();
    if mag <= threshold * 1e-2 {
        return;
    }
    let phase = apq / mag;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;
    let n = a.dim();

    // Column update M <- MJ: col_p' = c col_p - s e^{-iφ} col_q,
    // col_q' = s e^{iφ} col_p + c col_q.
    let se_m = phase.conj() * s;
    let se_p = phase * s;
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * c - aiq * se_m);
        a.set(i, q, aip * se_p + aiq * c);
    }
    // Row update M <- J†M: row_p' = c row_p - s e^{iφ} row_q,
    // row_q' = s e^{-iφ} row_p + c row_q.
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c - aqj * se_p);
        a.set(q, j, apj * se_m + aqj * c);
    }
    // Pin the rotated pivot pair to exact values.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let app_new = a.get(p, p).re;
    let aqq_new = a.get(q, q).re;
    a.set(p, p, Complex64::new(app_new, 0.0));
    a.set(q, q, Complex64::new(aqq_new, 0.0));

    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * c - viq * se_m);
        v.set(i, q, vip * se_p + viq * c);
    }
}

/// Eigenphases (in (-π, π]) and orthonormal eigenvectors of a unitary.
#[derive(Debug, Clone)]
pub(crate) struct UnitaryEig {
    pub phases: Vec<f64>,
    pub eigenvectors: Vec<Ket>,
}

pub(crate) fn unitary_eig(u: &ComplexMatrix, tol: f64) -> Result<UnitaryEig> {
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    let dev = u.unitarity_deviation();
    if dev > tol {
        return Err(Error::NonUnitary { deviation: dev });
    }
    let n = u.dim();
    let adj = u.adjoint();
    // Commuting Hermitian parts: U = A + iB with A = (U+U†)/2, B = (U-U†)/2i.
    let a = u.add(&adj).scale_re(0.5);
    let b = u.sub(&adj).scale(Complex64::new(0.0, -0.5));
    let base = hermitian_eig_tol(&a, 1e-6)?;

    let mut phases = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && (base.eigenvalues[end] - base.eigenvalues[start]).abs() <= 1e-8 {
            end += 1;
        }
        let cluster = &base.eigenvectors[start..end];
        let resolved = if cluster.len() == 1 {
            cluster.to_vec()
        } else {
            // Diagonalize the compression of B on the cluster to split
            // conjugate phase pairs sharing the same cosine.
            let k = cluster.len();
            let bvj: Vec<Ket> = cluster.iter().map(|vj| b.mul_ket(vj)).collect();
            let mut bk = ComplexMatrix::zeros(k, k);
            for (i, vi) in cluster.iter().enumerate() {
                for (j, bv) in bvj.iter().enumerate() {
                    bk.set(i, j, vi.inner(bv));
                }
            }
            let sub = hermitian_eig_tol(&bk.hermitian_part(), 1e-6)?;
            sub.eigenvectors
                .iter()
                .map(|w| {
                    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); n];
                    for (j, vj) in cluster.iter().enumerate() {
                        let wj = w.amplitudes()[j];
                        for (slot, &vamp) in amps.iter_mut().zip(vj.amplitudes()) {
                            *slot += wj * vamp;
                        }
                    }
                    Ket::from_vec_unchecked(amps)
                })
                .collect()
        };
        for vec in resolved {
            let uv = u.mul_ket(&vec);
            let lambda = vec.inner(&uv);
            let mut theta = libm::atan2(lambda.im, lambda.re);
            if theta <= -PI {
                theta = PI;
            }
            phases.push(theta);
            eigenvectors.push(vec);
        }
        start = end;
    }
    Ok(UnitaryEig { phases, eigenvectors })
}

/// u^t for t in [0, 1] via eigenphases taken in (-π, π]: u^0 = I, u^1 = u,
/// and the path t ↦ u^t is continuous.
pub fn unitary_fractional_power(u: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    unitary_fractional_power_tol(u, t, DEFAULT_TOL)
}

pub fn unitary_fractional_power_tol(u: &ComplexMatrix, t: f64, tol: f64) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t });
    }
    let eig = unitary_eig(u, tol)?;
    Ok(from_phases(&eig, t, u.dim()))
}

pub(crate) fn from_phases(eig: &UnitaryEig, t: f64, n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for (theta, v) in eig.phases.iter().zip(&eig.eigenvectors) {
        let w = Complex64::new(0.0, theta * t).exp();
        let amps = v.amplitudes();
        for i in 0..n {
            let wi = w * amps[i];
            for (j, amp) in amps.iter().enumerate() {
                let val = out.get(i, j) + wi * amp.conj();
                out.set(i, j, val);
            }
        }
    }
    out
}
