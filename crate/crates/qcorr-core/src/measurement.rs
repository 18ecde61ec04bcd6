//! Measurement as correlation-building between a specimen and an apparatus:
//! the correlating unitary, the final entangled state, the Born outcome
//! table, the continuous pure-to-mixed specimen evolution, and the
//! phase-sensitive cross observables that outlive specimen-internal
//! statistics.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::correlations::{Axis, JointDistribution};
use crate::error::{Error, Result};
use crate::linalg::{from_phases, unitary_eig, unitary_fractional_power, ComplexMatrix, Ket, Partition};
use crate::states::DensityMatrix;
use crate::DEFAULT_TOL;

/// Specimen-apparatus pair with the correlating unitary.
///
/// The unitary is the controlled cyclic shift
/// |sᵢ⟩⊗|aⱼ⟩ → |sᵢ⟩⊗|a_{(j+i) mod apparatus_dim}⟩: an exact permutation
/// matrix whose restriction to the ready column sends |sᵢ⟩⊗|a_ready⟩ to
/// |sᵢ⟩⊗|a_{ready+i}⟩, and which reduces to CNOT at dimensions (2, 2).
#[derive(Debug, Clone)]
pub struct MeasurementSetup {
    specimen_dim: usize,
    apparatus_dim: usize,
    ready_index: usize,
    unitary: ComplexMatrix,
}

/// Builds the setup; the apparatus needs at least one pointer state per
/// specimen level.
pub fn build_setup(
    specimen_dim: usize,
    apparatus_dim: usize,
    ready_index: usize,
) -> Result<MeasurementSetup> {
    if specimen_dim < 2 {
        return Err(Error::DimensionTooSmall { dim: specimen_dim });
    }
    if apparatus_dim < specimen_dim {
        return Err(Error::ApparatusTooSmall { specimen: specimen_dim, apparatus: apparatus_dim });
    }
    if ready_index >= apparatus_dim {
        return Err(Error::IndexOutOfRange { index: ready_index, bound: apparatus_dim });
    }
    let dim = specimen_dim * apparatus_dim;
    let mut unitary = ComplexMatrix::zeros(dim, dim);
    for i in 0..specimen_dim {
        for j in 0..apparatus_dim {
            let from = i * apparatus_dim + j;
            let to = i * apparatus_dim + (j + i) % apparatus_dim;
            unitary.set(to, from, Complex64::new(1.0, 0.0));
        }
    }
    Ok(MeasurementSetup { specimen_dim, apparatus_dim, ready_index, unitary })
}

impl MeasurementSetup {
    pub fn specimen_dim(&self) -> usize {
        self.specimen_dim
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus_dim
    }

    pub fn ready_index(&self) -> usize {
        self.ready_index
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn partition(&self) -> Partition {
        Partition::bipartite(self.specimen_dim, self.apparatus_dim)
            .expect("both dimensions are at least 2")
    }

    /// Apparatus basis index of the pointer state registering specimen
    /// level `outcome`.
    pub fn pointer_index(&self, outcome: usize) -> usize {
        (self.ready_index + outcome) % self.apparatus_dim
    }

    fn check_alphas(&self, alphas: &[Complex64]) -> Result<()> {
        if alphas.len() != self.specimen_dim {
            return Err(Error::DimensionMismatch {
                expected: self.specimen_dim,
                got: alphas.len(),
            });
        }
        let norm = libm::sqrt(alphas.iter().map(|a| a.norm_sqr()).sum());
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    fn check_state(&self, state: &Ket) -> Result<()> {
        let dim = self.specimen_dim * self.apparatus_dim;
        if state.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: state.dim() });
        }
        Ok(())
    }

    /// Uncorrelated pre-measurement product state (Σ αᵢ|sᵢ⟩) ⊗ |a_ready⟩.
    pub fn initial_state(&self, alphas: &[Complex64]) -> Result<Ket> {
        self.check_alphas(alphas)?;
        let specimen = Ket::new(alphas.to_vec())?;
        let ready = Ket::basis(self.apparatus_dim, self.ready_index)?;
        Ok(specimen.tensor(&ready))
    }

    /// Runs the measurement interaction to completion: Σ αᵢ|sᵢ⟩⊗|aᵢ⟩,
    /// exact because the unitary is a permutation.
    pub fn final_state(&self, alphas: &[Complex64]) -> Result<Ket> {
        let initial = self.initial_state(alphas)?;
        Ok(self.unitary.mul_ket(&initial))
    }

    /// Joint table over specimen levels and pointer outcomes. Apparatus
    /// outcomes are pointer-relative: outcome k labels the basis state
    /// (ready + k) mod apparatus_dim, so a completed measurement is
    /// diagonal with entries |αᵢ|².
    pub fn outcome_distribution(&self, final_state: &Ket) -> Result<JointDistribution> {
        self.check_state(final_state)?;
        let mut probs = Vec::with_capacity(self.specimen_dim * self.apparatus_dim);
        for i in 0..self.specimen_dim {
            for k in 0..self.apparatus_dim {
                let j = self.pointer_index(k);
                let amp = final_state.amplitudes()[i * self.apparatus_dim + j];
                probs.push(amp.norm_sqr());
            }
        }
        let axes = alloc::vec![
            Axis {
                observable: String::from("S"),
                outcomes: (0..self.specimen_dim).map(|i| alloc::format!("s{i}")).collect(),
            },
            Axis {
                observable: String::from("A"),
                outcomes: (0..self.apparatus_dim).map(|k| alloc::format!("a{k}")).collect(),
            },
        ];
        JointDistribution::new(axes, probs)
    }

    /// Reduced specimen state after tracing out the apparatus: the
    /// post-measurement mixture Σ|αᵢ|²|sᵢ⟩⟨sᵢ| for a completed
    /// measurement, with no interference terms.
    pub fn specimen_post_state(&self, final_state: &Ket) -> Result<DensityMatrix> {
        self.check_state(final_state)?;
        let w = DensityMatrix::from_ket(final_state)?;
        w.reduce(&self.partition(), &[0])
    }

    /// Mirror of [`MeasurementSetup::specimen_post_state`] on the apparatus
    /// side.
    pub fn apparatus_post_state(&self, final_state: &Ket) -> Result<DensityMatrix> {
        self.check_state(final_state)?;
        let w = DensityMatrix::from_ket(final_state)?;
        w.reduce(&self.partition(), &[1])
    }

    /// ⟨F| S_ij ⊗ A_ij |F⟩ with S_ij = |sᵢ⟩⟨sⱼ| + |sⱼ⟩⟨sᵢ| and A_ij the
    /// matching pointer-state flip: equals 2·Re(αᵢ*αⱼ) on a completed
    /// measurement, so it sees the relative phases that no specimen-only
    /// or apparatus-only statistic retains.
    pub fn cross_phase_correlation(&self, final_state: &Ket, i: usize, j: usize) -> Result<f64> {
        self.check_state(final_state)?;
        if i >= self.specimen_dim {
            return Err(Error::IndexOutOfRange { index: i, bound: self.specimen_dim });
        }
        if j >= self.specimen_dim {
            return Err(Error::IndexOutOfRange { index: j, bound: self.specimen_dim });
        }
        if i == j {
            return Err(Error::IdenticalIndices { index: i });
        }
        // ⟨F|(S⊗A)|F⟩ expanded over the four nonzero matrix elements of
        // S_ij⊗A_ij in the product basis.
        let da = self.apparatus_dim;
        let ai = self.pointer_index(i);
        let aj = self.pointer_index(j);
        let amp = final_state.amplitudes();
        let f_iai = amp[i * da + ai];
        let f_iaj = amp[i * da + aj];
        let f_jai = amp[j * da + ai];
        let f_jaj = amp[j * da + aj];
        let value = f_iai.conj() * f_jaj
            + f_jaj.conj() * f_iai
            + f_iaj.conj() * f_jai
            + f_jai.conj() * f_iaj;
        Ok(value.re)
    }

    /// State and specimen purity along the continuous interpolation U^t of
    /// the measurement interaction applied to the pre-measurement product
    /// state: purity runs from 1 at t = 0 to Σ|αᵢ|⁴ at t = 1.
    pub fn evolve_partial(&self, alphas: &[Complex64], t: f64) -> Result<(Ket, f64)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange { name: "t", value: t });
        }
        let initial = self.initial_state(alphas)?;
        let ut = unitary_fractional_power(&self.unitary, t)?;
        let state = ut.mul_ket(&initial);
        let purity = self.specimen_post_state(&state)?.purity();
        Ok((state, purity))
    }

    /// Samples (t, purity, cross correlation between levels 0 and 1) along
    /// an even grid of the interpolation; the eigendecomposition of the
    /// unitary is reused across grid points.
    pub fn decoherence_trace(
        &self,
        alphas: &[Complex64],
        steps: usize,
    ) -> Result<Vec<(f64, f64, f64)>> {
        if steps < 1 {
            return Err(Error::ParameterOutOfRange { name: "steps", value: steps as f64 });
        }
        let initial = self.initial_state(alphas)?;
        let eig = unitary_eig(&self.unitary, DEFAULT_TOL)?;
        let dim = self.unitary.dim();
        let mut out = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let t = k as f64 / steps as f64;
            let ut = from_phases(&eig, t, dim);
            let state = ut.mul_ket(&initial);
            let purity = self.specimen_post_state(&state)?.purity();
            let cross = self.cross_phase_correlation(&state, 0, 1)?;
            out.push((t, purity, cross));
        }
        Ok(out)
    }

    /// Applies the inverse interaction; for a state produced by
    /// [`MeasurementSetup::final_state`] this recovers the uncorrelated
    /// product state exactly.
    pub fn undo(&self, final_state: &Ket) -> Result<Ket> {
        self.check_state(final_state)?;
        Ok(self.unitary.adjoint().mul_ket(final_state))
    }
}
