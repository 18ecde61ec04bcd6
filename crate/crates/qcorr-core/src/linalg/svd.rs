//! One-sided Jacobi singular value decomposition.
//!
//! Orthogonalizes the columns of the input by right rotations; the relative
//! convergence criterion keeps the computed left vectors orthonormal even for
//! small singular values, which matters for Schmidt coefficients near the
//! drop cutoff.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, Ket};

#[derive(Debug, Clone)]
pub(crate) struct Svd {
    /// Singular values, descending, only those above the cutoff.
    pub values: Vec<f64>,
    /// Left singular vectors (length = rows), index-aligned with `values`.
    pub left: Vec<Ket>,
    /// Right singular vectors (length = cols), such that
    /// m = Σ σ_k |left_k⟩⟨right_k|.
    pub right: Vec<Ket>,
}

/// Computes the SVD, discarding singular values `<= cutoff`.
pub(crate) fn svd(m: &ComplexMatrix, cutoff: f64) -> Svd {
    let rows = m.rows();
    let cols = m.cols();
    let mut work = m.clone();
    let mut v = ComplexMatrix::identity(cols);

    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let (app, aqq, apq) = gram_entries(&work, p, q);
                if apq.norm() <= 1e-14 * libm::sqrt(app * aqq) || apq.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let mag = apq.norm();
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let se_m = phase.conj() * s;
                let se_p = phase * s;
                for i in 0..rows {
                    let aip = work.get(i, p);
                    let aiq = work.get(i, q);
                    work.set(i, p, aip * c - aiq * se_m);
                    work.set(i, q, aip * se_p + aiq * c);
                }
                for i in 0..cols {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c - viq * se_m);
                    v.set(i, q, vip * se_p + viq * c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut entries: Vec<(f64, usize)> = (0..cols)
        .map(|k| {
            let norm_sqr: f64 = (0..rows).map(|i| work.get(i, k).norm_sqr()).sum();
            (libm::sqrt(norm_sqr), k)
        })
        .collect();
    entries.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite norms"));

    let mut values = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (sigma, k) in entries {
        if sigma <= cutoff {
            break;
        }
        let u_amps: Vec<Complex64> = (0..rows).map(|i| work.get(i, k) / sigma).collect();
        // ψ reconstruction pairs the left vector with the conjugate of the
        // accumulated rotation column.
        let r_amps: Vec<Complex64> = (0..cols).map(|i| v.get(i, k).conj()).collect();
        let u = Ket::from_vec_unchecked(u_amps);
        let r = Ket::from_vec_unchecked(r_amps);
        // Canonical phase on the left vector, compensated on the right so
        // the rank-one term is unchanged.
        let u_fixed = u.with_canonical_phase();
        let idx = dominant_index(&u);
        let w = u.amplitudes()[idx] / u_fixed.amplitudes()[idx];
        let r_fixed = r.scale(w);
        values.push(sigma);
        left.push(u_fixed);
        right.push(r_fixed);
    }
    Svd { values, left, right }
}

fn dominant_index(k: &Ket) -> usize {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in k.amplitudes().iter().enumerate() {
        let m = z.norm();
        if m > best_mag + 1e-15 {
            best = i;
            best_mag = m;
        }
    }
    best
}

fn gram_entries(m: &ComplexMatrix, p: usize, q: usize) -> (f64, f64, Complex64) {
    let mut app = 0.0;
    let mut aqq = 0.0;
    let mut apq = Complex64::new(0.0, 0.0);
    for i in 0..m.rows() {
        let a = m.get(i, p);
        let b = m.get(i, q);
        app += a.norm_sqr();
        aqq += b.norm_sqr();
        apq += a.conj() * b;
    }
    (app, aqq, apq)
}
