//! The Hardy construction end to end: a two-qubit state engineered so three
//! of the four two-observable joint distributions carry an exact zero while
//! the fourth does not. The conventional conditional distributions built
//! from these tables then imply p(2R|2'G) = 1, flatly contradicting the
//! nonzero p(2G,2'G) — the inconsistency this module certifies.
//!
//! Per side, observable 1 is the computational basis and observable 2 the
//! real rotation by θ, with eigenvectors labeled R and G. The construction
//! requires the two bases per side to be neither identical nor orthogonal,
//! so angles at multiples of π/2 are refused.

use alloc::string::String;
use num_complex::Complex64;

use crate::correlations::{conditional, joint_distribution, JointDistribution, ProjectiveAxis};
use crate::error::{Error, Result};
use crate::linalg::Ket;
use crate::operators::{projector, rotated_qubit_pair};
use crate::states::DensityMatrix;

/// The paradox witness probability p(2G,2'G) must exceed this to count as
/// nonzero, guarding against near-degenerate angles.
pub const WITNESS_FLOOR: f64 = 1e-6;

/// A Hardy state with its defining angles and the basis overlap
/// cosθ·cosθ′.
#[derive(Debug, Clone)]
pub struct HardyInstance {
    theta_unprimed: f64,
    theta_primed: f64,
    state: Ket,
    overlap: f64,
}

impl HardyInstance {
    pub fn theta_unprimed(&self) -> f64 {
        self.theta_unprimed
    }

    pub fn theta_primed(&self) -> f64 {
        self.theta_primed
    }

    pub fn state(&self) -> &Ket {
        &self.state
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_ket(&self.state).expect("hardy state is normalized")
    }

    /// Eigenbasis (R, G) of observable 1 or 2 on the given side.
    pub fn side_basis(&self, side: Side, which: usize) -> (Ket, Ket) {
        let theta = match side {
            Side::Unprimed => self.theta_unprimed,
            Side::Primed => self.theta_primed,
        };
        match which {
            1 => (
                Ket::basis(2, 0).expect("qubit"),
                Ket::basis(2, 1).expect("qubit"),
            ),
            2 => rotated_qubit_pair(theta),
            other => panic!("observable index {other} out of range, use 1 or 2"),
        }
    }

    /// Projective axis for observable 1 or 2 on one side, outcomes labeled
    /// R and G.
    pub fn axis(&self, side: Side, which: usize) -> ProjectiveAxis {
        let theta = match side {
            Side::Unprimed => self.theta_unprimed,
            Side::Primed => self.theta_primed,
        };
        side_axis(theta, side, which)
    }
}

fn side_axis(theta: f64, side: Side, which: usize) -> ProjectiveAxis {
    let (r, g) = match which {
        1 => (
            Ket::basis(2, 0).expect("qubit"),
            Ket::basis(2, 1).expect("qubit"),
        ),
        2 => rotated_qubit_pair(theta),
        other => panic!("observable index {other} out of range, use 1 or 2"),
    };
    let name = match side {
        Side::Unprimed => alloc::format!("{which}"),
        Side::Primed => alloc::format!("{which}'"),
    };
    ProjectiveAxis::new(
        name,
        alloc::vec![
            (String::from("R"), projector(&r).expect("unit vector").matrix().clone()),
            (String::from("G"), projector(&g).expect("unit vector").matrix().clone()),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Unprimed,
    Primed,
}

/// Builds the normalized state proportional to
/// |2R,2'R⟩ - |1R,1'R⟩⟨1R,1'R|2R,2'R⟩ and verifies its zero pattern.
pub fn hardy_state(theta_unprimed: f64, theta_primed: f64) -> Result<HardyInstance> {
    for theta in [theta_unprimed, theta_primed] {
        if !theta.is_finite() {
            return Err(Error::ParameterOutOfRange { name: "theta", value: theta });
        }
        // sinθcosθ = 0 at multiples of π/2: bases identical or orthogonal.
        if libm::fabs(libm::sin(theta) * libm::cos(theta)) <= 1e-12 {
            return Err(Error::DegenerateAngle { theta });
        }
    }
    let (r2, _) = rotated_qubit_pair(theta_unprimed);
    let (r2p, _) = rotated_qubit_pair(theta_primed);
    let anchor = Ket::basis(2, 0)
        .expect("qubit")
        .tensor(&Ket::basis(2, 0).expect("qubit"));
    let target = r2.tensor(&r2p);
    let overlap = anchor.inner(&target).re;
    let raw = target.sub(&anchor.scale(Complex64::new(overlap, 0.0)));
    let state = raw.normalize()?;

    let instance = HardyInstance {
        theta_unprimed,
        theta_primed,
        state,
        overlap,
    };
    // The three orthogonality constraints hold by construction; check them
    // at machine precision before handing the instance out.
    let (r1, g1) = instance.side_basis(Side::Unprimed, 1);
    let (_, g2) = instance.side_basis(Side::Unprimed, 2);
    let (r1p, g1p) = instance.side_basis(Side::Primed, 1);
    let (_, g2p) = instance.side_basis(Side::Primed, 2);
    let zeros = [
        r1.tensor(&r1p).inner(&instance.state),
        g1.tensor(&g2p).inner(&instance.state),
        g2.tensor(&g1p).inner(&instance.state),
    ];
    for z in zeros {
        debug_assert!(z.norm() <= 1e-12, "zero pattern violated: {z}");
    }
    Ok(instance)
}

/// The four joint tables over observable choices (1,1'), (1,2'), (2,1'),
/// (2,2').
#[derive(Debug, Clone)]
pub struct HardyTables {
    pub t11: JointDistribution,
    pub t12: JointDistribution,
    pub t21: JointDistribution,
    pub t22: JointDistribution,
}

pub fn hardy_joint_tables(h: &HardyInstance) -> Result<HardyTables> {
    tables_for(&h.density(), h.theta_unprimed, h.theta_primed)
}

fn tables_for(w: &DensityMatrix, theta_u: f64, theta_p: f64) -> Result<HardyTables> {
    let table = |a: usize, b: usize| -> Result<JointDistribution> {
        joint_distribution(
            w,
            &[side_axis(theta_u, Side::Unprimed, a), side_axis(theta_p, Side::Primed, b)],
        )
    };
    Ok(HardyTables {
        t11: table(1, 1)?,
        t12: table(1, 2)?,
        t21: table(2, 1)?,
        t22: table(2, 2)?,
    })
}

/// The three certainty conditionals forced by the zero pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalChain {
    /// p(1R | 2'G), forced to 1 by p(1G,2'G) = 0.
    pub p_1r_given_2pg: f64,
    /// p(1'G | 1R), forced to 1 by p(1R,1'R) = 0.
    pub p_1pg_given_1r: f64,
    /// p(2R | 1'G), forced to 1 by p(2G,1'G) = 0.
    pub p_2r_given_1pg: f64,
}

/// Everything needed to exhibit the inconsistency: the three zeros, the
/// nonzero witness, the certainty chain, and the contradicted implication.
#[derive(Debug, Clone, PartialEq)]
pub struct ParadoxReport {
    pub p_1r_1pr: f64,
    pub p_1g_2pg: f64,
    pub p_2g_1pg: f64,
    /// p(2G,2'G), the witness that must stay nonzero.
    pub witness: f64,
    pub chain: ConditionalChain,
    /// What the chain implies: p(2R|2'G) = 1.
    pub implied_p_2r_given_2pg: f64,
    /// What the state actually gives: p(2G|2'G) > 0.
    pub measured_p_2g_given_2pg: f64,
    pub inconsistent: bool,
}

/// Computes the zero pattern, witness and conditional chain at tolerance
/// `tol`; the verdict requires zeros within `tol`, chain certainties within
/// `tol` of 1, and a witness above [`WITNESS_FLOOR`].
pub fn paradox_report(h: &HardyInstance, tol: f64) -> Result<ParadoxReport> {
    report_from_tables(&hardy_joint_tables(h)?, tol)
}

/// Like [`paradox_report`] but applied to an arbitrary two-qubit state with
/// the same observable family; useful to show the zeros are special to the
/// Hardy state.
pub fn paradox_report_for_state(
    w: &DensityMatrix,
    theta_unprimed: f64,
    theta_primed: f64,
    tol: f64,
) -> Result<ParadoxReport> {
    report_from_tables(&tables_for(w, theta_unprimed, theta_primed)?, tol)
}

fn report_from_tables(tables: &HardyTables, tol: f64) -> Result<ParadoxReport> {
    // Outcome order per axis is (R, G).
    let p_1r_1pr = tables.t11.prob(&[0, 0]);
    let p_1g_2pg = tables.t12.prob(&[1, 1]);
    let p_2g_1pg = tables.t21.prob(&[1, 1]);
    let witness = tables.t22.prob(&[1, 1]);

    let chain = ConditionalChain {
        p_1r_given_2pg: conditional(&tables.t12, 1, 1)?.prob(&[0]),
        p_1pg_given_1r: conditional(&tables.t11, 0, 0)?.prob(&[1]),
        p_2r_given_1pg: conditional(&tables.t21, 1, 1)?.prob(&[0]),
    };
    let measured_p_2g_given_2pg = conditional(&tables.t22, 1, 1)?.prob(&[1]);

    let zeros_ok = p_1r_1pr <= tol && p_1g_2pg <= tol && p_2g_1pg <= tol;
    let chain_ok = (chain.p_1r_given_2pg - 1.0).abs() <= tol
        && (chain.p_1pg_given_1r - 1.0).abs() <= tol
        && (chain.p_2r_given_1pg - 1.0).abs() <= tol;
    let inconsistent = zeros_ok && chain_ok && witness > WITNESS_FLOOR;

    Ok(ParadoxReport {
        p_1r_1pr,
        p_1g_2pg,
        p_2g_1pg,
        witness,
        chain,
        implied_p_2r_given_2pg: 1.0,
        measured_p_2g_given_2pg,
        inconsistent,
    })
}

/// Maximizer of the witness probability over the angle family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParadoxMaximum {
    pub theta_unprimed: f64,
    pub theta_primed: f64,
    pub p_max: f64,
}

/// Witness probability straight from the state machinery:
/// |⟨2G,2'G|Ψ⟩|².
fn witness_probability(theta_u: f64, theta_p: f64) -> Result<f64> {
    let h = hardy_state(theta_u, theta_p)?;
    let (_, g2) = h.side_basis(Side::Unprimed, 2);
    let (_, g2p) = h.side_basis(Side::Primed, 2);
    let amp = g2.tensor(&g2p).inner(h.state());
    Ok(amp.norm_sqr())
}

/// Deterministic grid search over (0, π/2)² with one local refinement
/// pass. Ties resolve to the lowest lexicographic grid index.
pub fn maximize_paradox(grid_size: usize) -> Result<ParadoxMaximum> {
    if grid_size < 8 {
        return Err(Error::ParameterOutOfRange { name: "grid_size", value: grid_size as f64 });
    }
    let half_pi = core::f64::consts::FRAC_PI_2;
    let sweep = |lo_u: f64, hi_u: f64, lo_p: f64, hi_p: f64| -> (f64, f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for i in 0..grid_size {
            let tu = lo_u + (hi_u - lo_u) * (i as f64 + 1.0) / (grid_size as f64 + 1.0);
            for j in 0..grid_size {
                let tp = lo_p + (hi_p - lo_p) * (j as f64 + 1.0) / (grid_size as f64 + 1.0);
                let Ok(p) = witness_probability(tu, tp) else {
                    continue;
                };
                if p > best.0 {
                    best = (p, tu, tp);
                }
            }
        }
        (best.1, best.2, best.0)
    };
    let (tu, tp, _) = sweep(0.0, half_pi, 0.0, half_pi);
    let spacing = half_pi / (grid_size as f64 + 1.0);
    let (tu, tp, p_max) = sweep(
        (tu - spacing).max(0.0),
        (tu + spacing).min(half_pi),
        (tp - spacing).max(0.0),
        (tp + spacing).min(half_pi),
    );
    Ok(ParadoxMaximum { theta_unprimed: tu, theta_primed: tp, p_max })
}

/// Closed form for the witness probability used by the demos:
/// c²sin²θ·sin²θ′/(1-c²) with c = cosθ·cosθ′.
pub fn witness_closed_form(theta_u: f64, theta_p: f64) -> f64 {
    let c = libm::cos(theta_u) * libm::cos(theta_p);
    let s2 = libm::sin(theta_u) * libm::sin(theta_u);
    let s2p = libm::sin(theta_p) * libm::sin(theta_p);
    c * c * s2 * s2p / (1.0 - c * c)
}
