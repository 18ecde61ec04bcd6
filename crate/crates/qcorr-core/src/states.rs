//! Density matrices and pure-state services: purity, eigen-mixtures,
//! Schmidt decomposition, relative states.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig_tol, partial_trace, svd::svd, validate_density, ComplexMatrix, Ket, Partition};
use crate::DEFAULT_TOL;

/// Below this squared-overlap the relative state is refused rather than
/// amplified out of noise. Shared with the conditional-distribution
/// threshold for coherence across modules.
pub const RELATIVE_STATE_THRESHOLD: f64 = 1e-12;

/// Eigen-mixture terms with weight at or below this are dropped.
const WEIGHT_CUTOFF: f64 = 1e-12;

/// Schmidt coefficients at or below this are dropped.
const SCHMIDT_CUTOFF: f64 = 1e-12;

/// Validated density matrix: Hermitian, unit trace, positive semidefinite
/// (all within the construction tolerance).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let report = validate_density(&matrix, tol)?;
        if !report.ok {
            return Err(Error::InvalidDensity {
                hermiticity: report.hermiticity_deviation,
                trace_deviation: report.trace_deviation,
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(Self { matrix })
    }

    /// |k⟩⟨k| / ‖k‖²; normalization is absorbed.
    pub fn from_ket(k: &Ket) -> Result<Self> {
        let n2 = k.norm_sqr();
        if n2 <= 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            matrix: k.outer(k).scale_re(1.0 / n2),
        })
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// tr(w²) ∈ [1/d, 1]; equals 1 (within tolerance) iff the state is a
    /// one-dimensional projector.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// Spectral mixture w = Σ wᵢ |Ψⁱ⟩⟨Ψⁱ| with positive weights descending;
    /// zero-weight terms dropped.
    pub fn eigen_mixture(&self) -> Vec<(f64, Ket)> {
        let eig = hermitian_eig_tol(&self.matrix.hermitian_part(), 1.0)
            .expect("density matrices are hermitian");
        eig.eigenvalues
            .into_iter()
            .zip(eig.eigenvectors)
            .filter(|(w, _)| *w > WEIGHT_CUTOFF)
            .collect()
    }

    /// Reduced state on the kept factors.
    pub fn reduce(&self, p: &Partition, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, p, keep)?;
        // Partial traces of valid densities stay valid; skip revalidation.
        Ok(DensityMatrix { matrix: m })
    }
}

/// Biorthogonal expansion of a bipartite pure state: coefficients
/// nonnegative descending, squares summing to 1, bases orthonormal.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Ket>,
    pub right_basis: Vec<Ket>,
}

impl SchmidtForm {
    /// Rebuilds Σ cᵢ |lᵢ⟩⊗|rᵢ⟩.
    pub fn reconstruct(&self) -> Ket {
        let da = self.left_basis[0].dim();
        let db = self.right_basis[0].dim();
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); da * db];
        for ((c, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for (i, la) in l.amplitudes().iter().enumerate() {
                for (j, ra) in r.amplitudes().iter().enumerate() {
                    amps[i * db + j] += c * la * ra;
                }
            }
        }
        Ket::from_vec_unchecked(amps)
    }
}

/// Schmidt decomposition of a normalized bipartite pure state.
pub fn schmidt(psi: &Ket, p: &Partition) -> Result<SchmidtForm> {
    if p.factors() != 2 {
        return Err(Error::RequiresTwoFactors { got: p.factors() });
    }
    if psi.dim() != p.total_dim() {
        return Err(Error::DimensionMismatch { expected: p.total_dim(), got: psi.dim() });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let (da, db) = (p.factor_dim(0), p.factor_dim(1));
    // Amplitude matrix M[i][j] = ψ[i*db + j].
    let m = ComplexMatrix::from_fn(da, db, |i, j| psi.amplitudes()[i * db + j]);
    let decomposition = svd(&m, SCHMIDT_CUTOFF);
    Ok(SchmidtForm {
        coefficients: decomposition.values,
        left_basis: decomposition.left,
        right_basis: decomposition.right,
    })
}

/// The unique factor-1 state whose observable means reproduce those of the
/// global state conditioned on factor 2 sitting in |χ⟩: proportional to the
/// partial inner product ⟨χ|Ψ⟩ on factor 2. Refuses when the overlap
/// ⟨Ψ|(1⊗|χ⟩⟨χ|)|Ψ⟩ is below [`RELATIVE_STATE_THRESHOLD`].
pub fn relative_state(psi: &Ket, chi: &Ket, p: &Partition) -> Result<Ket> {
    if p.factors() != 2 {
        return Err(Error::RequiresTwoFactors { got: p.factors() });
    }
    if psi.dim() != p.total_dim() {
        return Err(Error::DimensionMismatch { expected: p.total_dim(), got: psi.dim() });
    }
    let (da, db) = (p.factor_dim(0), p.factor_dim(1));
    if chi.dim() != db {
        return Err(Error::DimensionMismatch { expected: db, got: chi.dim() });
    }
    for k in [psi, chi] {
        let n = k.norm();
        if (n - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
    }
    let mut amps = Vec::with_capacity(da);
    for i in 0..da {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, cj) in chi.amplitudes().iter().enumerate() {
            acc += cj.conj() * psi.amplitudes()[i * db + j];
        }
        amps.push(acc);
    }
    let phi = Ket::from_vec_unchecked(amps);
    let overlap = phi.norm_sqr();
    if overlap <= RELATIVE_STATE_THRESHOLD {
        return Err(Error::RelativeStateUndefined { overlap });
    }
    Ok(phi.normalize()?.with_canonical_phase())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor;
    use crate::operators::singlet_ket;
    use crate::sampling::{random_density, random_hermitian, random_ket, random_unitary};
    use alloc::vec;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn density_from_ket_cases() {
        let e0 = Ket::basis(2, 0).unwrap();
        let w = DensityMatrix::from_ket(&e0).unwrap();
        assert!((w.matrix().get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(w.matrix().get(1, 1).norm() < 1e-15);

        // Normalization absorbed.
        let scaled = Ket::new(vec![c(0.0, 0.0), c(3.0, 0.0)]).unwrap();
        let w = DensityMatrix::from_ket(&scaled).unwrap();
        assert!((w.matrix().get(1, 1).re - 1.0).abs() < 1e-15);

        let bell = Ket::from_re(&[
            core::f64::consts::FRAC_1_SQRT_2,
            0.0,
            0.0,
            core::f64::consts::FRAC_1_SQRT_2,
        ])
        .unwrap();
        let w = DensityMatrix::from_ket(&bell).unwrap();
        assert!((w.purity() - 1.0).abs() < 1e-12);

        let zero = Ket::new(vec![c(0.0, 0.0); 2]).unwrap();
        assert!(matches!(DensityMatrix::from_ket(&zero), Err(Error::ZeroVector)));
    }

    #[test]
    fn purity_cases() {
        let pure = DensityMatrix::from_ket(&Ket::basis(2, 0).unwrap()).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-15);
        assert!((DensityMatrix::maximally_mixed(2).purity() - 0.5).abs() < 1e-15);
        // Two-term mixture with weights 1/3 and 2/3: purity 1/9 + 4/9 = 5/9.
        let e0 = Ket::basis(2, 0).unwrap();
        let e1 = Ket::basis(2, 1).unwrap();
        let w = e0
            .outer(&e0)
            .scale_re(1.0 / 3.0)
            .add(&e1.outer(&e1).scale_re(2.0 / 3.0));
        let w = DensityMatrix::new(w).unwrap();
        assert!((w.purity() - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_mixture_cases() {
        let pure = DensityMatrix::from_ket(&Ket::basis(3, 1).unwrap()).unwrap();
        let mix = pure.eigen_mixture();
        assert_eq!(mix.len(), 1);
        assert!((mix[0].0 - 1.0).abs() < 1e-12);

        let diag = ComplexMatrix::from_rows(&[&[(0.7, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (0.3, 0.0)]])
            .unwrap();
        let w = DensityMatrix::new(diag).unwrap();
        let mix = w.eigen_mixture();
        assert_eq!(mix.len(), 2);
        assert!((mix[0].0 - 0.7).abs() < 1e-12);
        assert!((mix[1].0 - 0.3).abs() < 1e-12);
        assert!(mix[0].1.distance_up_to_phase(&Ket::basis(2, 0).unwrap()) < 1e-12);
        assert!(mix[1].1.distance_up_to_phase(&Ket::basis(2, 1).unwrap()) < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let w = random_density(4, 4, &mut rng);
            let mix = w.eigen_mixture();
            let mut rebuilt = ComplexMatrix::zeros(4, 4);
            for (weight, ket) in &mix {
                rebuilt = rebuilt.add(&ket.outer(ket).scale_re(*weight));
            }
            assert!(rebuilt.max_abs_diff(w.matrix()) < 1e-10);
        }
    }

    #[test]
    fn purity_one_iff_projector_onto_top_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let pure = random_density(3, 1, &mut rng);
            assert!((pure.purity() - 1.0).abs() < 1e-10);
            let top = &pure.eigen_mixture()[0].1;
            assert!(pure.matrix().max_abs_diff(&top.outer(top)) < 1e-10);

            let mixed = random_density(3, 3, &mut rng);
            assert!(mixed.purity() < 1.0 - 1e-6);
            let top = &mixed.eigen_mixture()[0].1;
            assert!(mixed.matrix().max_abs_diff(&top.outer(top)) > 1e-6);
        }
    }

    #[test]
    fn schmidt_product_state_single_coefficient() {
        let plus = Ket::from_re(&[core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2])
            .unwrap();
        let psi = Ket::basis(2, 0).unwrap().tensor(&plus);
        let p = Partition::bipartite(2, 2).unwrap();
        let form = schmidt(&psi, &p).unwrap();
        assert_eq!(form.coefficients.len(), 1);
        assert!((form.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(form.reconstruct().sub(&psi).norm() < 1e-12);
    }

    #[test]
    fn schmidt_bell_and_singlet_coefficients() {
        let p = Partition::bipartite(2, 2).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for psi in [Ket::from_re(&[s, 0.0, 0.0, s]).unwrap(), singlet_ket()] {
            let form = schmidt(&psi, &p).unwrap();
            assert_eq!(form.coefficients.len(), 2);
            for coeff in &form.coefficients {
                assert!((coeff - s).abs() < 1e-12);
            }
            // Coefficients squared equal reduced-state eigenvalues.
            let w = DensityMatrix::from_ket(&psi).unwrap();
            let reduced = w.reduce(&p, &[0]).unwrap();
            let eig = crate::linalg::hermitian_eig(reduced.matrix()).unwrap();
            for (c2, lam) in form
                .coefficients
                .iter()
                .map(|v| v * v)
                .zip(eig.eigenvalues.iter())
            {
                assert!((c2 - lam).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn schmidt_random_states_reconstruct_and_match_reduced_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let p = Partition::bipartite(3, 4).unwrap();
        for _ in 0..10 {
            let psi = random_ket(12, &mut rng);
            let form = schmidt(&psi, &p).unwrap();
            assert!(form.reconstruct().sub(&psi).norm() <= 1e-10);
            let total: f64 = form.coefficients.iter().map(|v| v * v).sum();
            assert!((total - 1.0).abs() < 1e-10);
            // Both bases orthonormal.
            for basis in [&form.left_basis, &form.right_basis] {
                for (i, a) in basis.iter().enumerate() {
                    for (j, b) in basis.iter().enumerate() {
                        let expected = if i == j { 1.0 } else { 0.0 };
                        assert!((a.inner(b) - c(expected, 0.0)).norm() < 1e-10);
                    }
                }
            }
            // The two reduced matrices share their nonzero spectrum.
            let w = DensityMatrix::from_ket(&psi).unwrap();
            let left = w.reduce(&p, &[0]).unwrap();
            let right = w.reduce(&p, &[1]).unwrap();
            let le = crate::linalg::hermitian_eig(left.matrix()).unwrap().eigenvalues;
            let re = crate::linalg::hermitian_eig(right.matrix()).unwrap().eigenvalues;
            for (a, b) in le.iter().zip(re.iter()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn schmidt_coefficients_invariant_under_local_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let p = Partition::bipartite(2, 3).unwrap();
        for _ in 0..5 {
            let psi = random_ket(6, &mut rng);
            let u = random_unitary(2, &mut rng);
            let v = random_unitary(3, &mut rng);
            let moved = tensor(&u, &v).mul_ket(&psi);
            let a = schmidt(&psi, &p).unwrap().coefficients;
            let b = schmidt(&moved, &p).unwrap().coefficients;
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn schmidt_rejects_bad_input() {
        let p3 = Partition::new(vec![2, 2, 2]).unwrap();
        let psi = random_ket(8, &mut ChaCha8Rng::seed_from_u64(35));
        assert!(matches!(
            schmidt(&psi, &p3),
            Err(Error::RequiresTwoFactors { got: 3 })
        ));
        let p = Partition::bipartite(2, 2).unwrap();
        let unnorm = Ket::from_re(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(schmidt(&unnorm, &p), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn relative_state_product_and_singlet() {
        let p = Partition::bipartite(2, 2).unwrap();
        let e0 = Ket::basis(2, 0).unwrap();
        let e1 = Ket::basis(2, 1).unwrap();

        let product = e0.tensor(&e0);
        let phi = relative_state(&product, &e0, &p).unwrap();
        assert!(phi.sub(&e0).norm() < 1e-12);

        // Contracting the singlet against e0 on factor 2 leaves |1⟩ up to
        // phase; the canonical-phase convention makes it exactly |1⟩.
        let phi = relative_state(&singlet_ket(), &e0, &p).unwrap();
        assert!(phi.sub(&e1).norm() < 1e-12);

        // Orthogonal branch refused.
        let res = relative_state(&product, &e1, &p);
        assert!(matches!(res, Err(Error::RelativeStateUndefined { .. })));
    }

    #[test]
    fn relative_state_mean_value_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let p = Partition::bipartite(3, 2).unwrap();
        for _ in 0..5 {
            let psi = random_ket(6, &mut rng);
            let chi = random_ket(2, &mut rng);
            let phi = match relative_state(&psi, &chi, &p) {
                Ok(phi) => phi,
                Err(Error::RelativeStateUndefined { .. }) => continue,
                Err(e) => panic!("unexpected error {e:?}"),
            };
            let proj = chi.outer(&chi);
            let overlap = {
                let lifted = tensor(&ComplexMatrix::identity(3), &proj);
                psi.inner(&lifted.mul_ket(&psi)).re
            };
            for _ in 0..20 {
                let a = random_hermitian(3, &mut rng);
                let lhs = phi.inner(&a.mul_ket(&phi)).re;
                let lifted = tensor(&a, &proj);
                let rhs = psi.inner(&lifted.mul_ket(&psi)).re / overlap;
                assert!((lhs - rhs).abs() < 1e-9, "mean contract violated");
            }
        }
    }
}
