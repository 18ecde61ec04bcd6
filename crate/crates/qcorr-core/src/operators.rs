//! Observables: the Hermitian operator basis used by correlation tables,
//! Pauli operators, projectors, rotated qubit bases and the singlet
//! projector.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Ket};
use crate::DEFAULT_TOL;

/// Eigenvalues closer than this are merged into one spectral projector.
/// Well above numerical noise, well below every gap in shipped examples.
pub const SPECTRAL_MERGE_TOL: f64 = 1e-8;

/// Hermitian matrix with its spectral decomposition cached as
/// (eigenvalue, projector) pairs, distinct eigenvalues merged, sorted
/// descending.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: Vec<SpectralLine>,
}

#[derive(Debug, Clone)]
pub struct SpectralLine {
    pub eigenvalue: f64,
    pub projector: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let eig = crate::linalg::hermitian_eig_tol(&matrix, tol)?;
        let mut spectrum: Vec<SpectralLine> = Vec::new();
        let mut k = 0usize;
        let n = eig.eigenvalues.len();
        while k < n {
            let anchor = eig.eigenvalues[k];
            let mut projector = eig.eigenvectors[k].outer(&eig.eigenvectors[k]);
            let mut count = 1usize;
            let mut sum = anchor;
            while k + count < n && (eig.eigenvalues[k + count] - anchor).abs() <= SPECTRAL_MERGE_TOL
            {
                let v = &eig.eigenvectors[k + count];
                projector = projector.add(&v.outer(v));
                sum += eig.eigenvalues[k + count];
                count += 1;
            }
            spectrum.push(SpectralLine {
                eigenvalue: sum / count as f64,
                projector,
            });
            k += count;
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            spectrum: alloc::vec![SpectralLine {
                eigenvalue: 1.0,
                projector: ComplexMatrix::identity(dim),
            }],
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Distinct eigenvalues with their projectors, descending.
    pub fn spectrum(&self) -> &[SpectralLine] {
        &self.spectrum
    }

    pub fn outcome_count(&self) -> usize {
        self.spectrum.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisPart {
    Real,
    Imag,
}

/// Index into the canonical Hermitian operator basis of a d-dimensional
/// factor: symmetric (`Real`) and antisymmetric (`Imag`) combinations of
/// |mu⟩⟨nu|, with mu <= nu and the antisymmetric part only for mu < nu.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    mu: usize,
    nu: usize,
    part: BasisPart,
}

impl BasisIndex {
    pub fn new(mu: usize, nu: usize, part: BasisPart) -> Result<Self> {
        if mu > nu || (part == BasisPart::Imag && mu == nu) {
            return Err(Error::InvalidBasisIndex { mu, nu });
        }
        Ok(Self { mu, nu, part })
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn part(&self) -> BasisPart {
        self.part
    }

    /// Canonical enumeration for one factor: ascending (mu, nu)
    /// lexicographic with mu <= nu, real part before imaginary part. The
    /// list has exactly d^2 elements and its order is part of the on-disk
    /// correlation-table contract.
    pub fn enumerate(dim: usize) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(dim * dim);
        for mu in 0..dim {
            for nu in mu..dim {
                out.push(BasisIndex { mu, nu, part: BasisPart::Real });
                if nu > mu {
                    out.push(BasisIndex { mu, nu, part: BasisPart::Imag });
                }
            }
        }
        out
    }

    /// Position of this index in [`BasisIndex::enumerate`] for the given
    /// dimension.
    pub fn position(&self, dim: usize) -> usize {
        // Entries before row mu: row r contributes 1 + 2*(dim-1-r).
        let mut pos = 0usize;
        for r in 0..self.mu {
            pos += 1 + 2 * (dim - 1 - r);
        }
        if self.nu > self.mu {
            pos += 1 + 2 * (self.nu - self.mu - 1);
            if self.part == BasisPart::Imag {
                pos += 1;
            }
        }
        pos
    }

    /// The basis operator as a matrix: ½(|mu⟩⟨nu| + |nu⟩⟨mu|) for the real
    /// part, (1/2i)(|mu⟩⟨nu| - |nu⟩⟨mu|) for the imaginary part.
    pub fn to_matrix(&self, dim: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        match self.part {
            BasisPart::Real => {
                if self.mu == self.nu {
                    m.set(self.mu, self.mu, Complex64::new(1.0, 0.0));
                } else {
                    m.set(self.mu, self.nu, Complex64::new(0.5, 0.0));
                    m.set(self.nu, self.mu, Complex64::new(0.5, 0.0));
                }
            }
            BasisPart::Imag => {
                // 1/(2i) = -i/2.
                m.set(self.mu, self.nu, Complex64::new(0.0, -0.5));
                m.set(self.nu, self.mu, Complex64::new(0.0, 0.5));
            }
        }
        m
    }

    /// Short label such as "r01" or "i01", used in file output.
    pub fn label(&self) -> String {
        let tag = match self.part {
            BasisPart::Real => 'r',
            BasisPart::Imag => 'i',
        };
        alloc::format!("{tag}{}{}", self.mu, self.nu)
    }
}

/// The d^2 canonical basis observables spanning all d x d Hermitian
/// matrices, in enumeration order.
pub fn hermitian_basis(dim: usize) -> Result<Vec<Observable>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim });
    }
    BasisIndex::enumerate(dim)
        .iter()
        .map(|idx| Observable::new(idx.to_matrix(dim)))
        .collect()
}

/// The basis matrices alone, without spectral decompositions.
pub fn hermitian_basis_matrices(dim: usize) -> Result<Vec<ComplexMatrix>> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim });
    }
    Ok(BasisIndex::enumerate(dim)
        .iter()
        .map(|idx| idx.to_matrix(dim))
        .collect())
}

/// Raw 2x2 Pauli matrix for axis 'x', 'y' or 'z'.
pub fn pauli_matrix(axis: char) -> ComplexMatrix {
    let (a, b, c, d) = match axis {
        'x' => ((0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)),
        'y' => ((0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)),
        'z' => ((1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)),
        other => panic!("unknown Pauli axis {other:?}"),
    };
    ComplexMatrix::from_rows(&[&[a, b], &[c, d]]).expect("2x2 shape")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn as_char(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }
}

/// Pauli observable with spectrum {+1, -1}.
pub fn pauli(axis: PauliAxis) -> Observable {
    Observable::new(pauli_matrix(axis.as_char())).expect("Pauli matrices are hermitian")
}

/// ¼(1 - σx⊗σx - σy⊗σy - σz⊗σz): the rank-one projector onto the
/// two-qubit state of zero total spin.
pub fn singlet_projector() -> Observable {
    let mut m = ComplexMatrix::identity(4);
    for axis in ['x', 'y', 'z'] {
        let s = pauli_matrix(axis);
        m = m.sub(&crate::linalg::tensor(&s, &s));
    }
    Observable::new(m.scale_re(0.25)).expect("singlet projector is hermitian")
}

/// The singlet state (|01⟩ - |10⟩)/√2.
pub fn singlet_ket() -> Ket {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    Ket::from_re(&[0.0, s, -s, 0.0]).expect("fixed amplitudes")
}

/// Orthonormal rotated qubit pair: ketR = cosθ e0 + sinθ e1,
/// ketG = -sinθ e0 + cosθ e1.
pub fn rotated_qubit_pair(theta: f64) -> (Ket, Ket) {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let r = Ket::from_re(&[c, s]).expect("finite");
    let g = Ket::from_re(&[-s, c]).expect("finite");
    (r, g)
}

/// Normalized rank-one projector |k⟩⟨k| / ‖k‖².
pub fn projector(k: &Ket) -> Result<Observable> {
    let n2 = k.norm_sqr();
    if n2 <= 1e-300 {
        return Err(Error::ZeroVector);
    }
    Observable::new(k.outer(k).scale_re(1.0 / n2))
}

/// Decomposes a Hermitian matrix over the canonical basis; the basis is
/// orthogonal under the trace inner product, so coefficients come from
/// tr(h·A_k)/tr(A_k²).
pub fn basis_coefficients(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let dim = h.dim();
    let mats = hermitian_basis_matrices(dim)?;
    Ok(mats
        .iter()
        .map(|a| {
            let num = h.trace_product(a).re;
            let den = a.trace_product(a).re;
            num / den
        })
        .collect())
}
