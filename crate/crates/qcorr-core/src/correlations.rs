//! Means of product observables and joint/marginal/conditional outcome
//! distributions, with triviality and marginal-consistency checks.
//!
//! The two faces of a correlation — the mean of a product observable, and
//! the joint distribution over spectral outcomes — are connected by tested
//! invariants: distribution marginals coincide with means of the matching
//! projector tuples.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{tensor_all, ComplexMatrix, Partition};
use crate::operators::Observable;
use crate::states::DensityMatrix;

/// Conditioning on outcomes with probability at or below this refuses
/// rather than dividing by noise.
pub const CONDITIONAL_THRESHOLD: f64 = 1e-12;

/// Probabilities in [-NEG_NOISE_BAND, 0) are clamped to zero; anything
/// below the band is a hard error, distinguishing rounding from genuinely
/// invalid input.
const NEG_NOISE_BAND: f64 = 1e-8;

/// Real mean with the leftover imaginary residue of the trace, reported so
/// callers can audit that their observable tuple was Hermitian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealMean {
    pub value: f64,
    pub imag_residue: f64,
}

/// tr(w · O₁⊗O₂⊗…) for one operator per subsystem (use identity matrices as
/// placeholders for untouched factors).
pub fn product_mean(w: &DensityMatrix, p: &Partition, ops: &[&ComplexMatrix]) -> Result<RealMean> {
    if ops.len() != p.factors() {
        return Err(Error::DimensionMismatch { expected: p.factors(), got: ops.len() });
    }
    for (k, op) in ops.iter().enumerate() {
        if !op.is_square() || op.rows() != p.factor_dim(k) {
            return Err(Error::DimensionMismatch {
                expected: p.factor_dim(k),
                got: op.rows(),
            });
        }
    }
    if w.dim() != p.total_dim() {
        return Err(Error::DimensionMismatch { expected: p.total_dim(), got: w.dim() });
    }
    let big = tensor_all(ops);
    let tr = w.matrix().trace_product(&big);
    Ok(RealMean { value: tr.re, imag_residue: tr.im.abs() })
}

/// One subsystem's measurement context: an observable label plus its
/// outcome labels and projectors, eigenvalue-sorted descending with
/// degenerate eigenvalues merged.
#[derive(Debug, Clone)]
pub struct ProjectiveAxis {
    pub observable: String,
    pub outcomes: Vec<(String, ComplexMatrix)>,
}

impl ProjectiveAxis {
    pub fn new(observable: String, outcomes: Vec<(String, ComplexMatrix)>) -> Self {
        Self { observable, outcomes }
    }

    /// Labels outcomes by their eigenvalues, rounded to 12 significant
    /// digits so labels stay stable under last-ulp jitter.
    pub fn from_observable(label: &str, obs: &Observable) -> Self {
        let outcomes = obs
            .spectrum()
            .iter()
            .map(|line| (format_eigenvalue(line.eigenvalue), line.projector.clone()))
            .collect();
        Self { observable: String::from(label), outcomes }
    }

    pub fn dim(&self) -> usize {
        self.outcomes.first().map_or(0, |(_, p)| p.rows())
    }

    fn completeness_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (_, p) in &self.outcomes {
            sum = sum.add(p);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
    }
}

/// Rounds to 12 significant digits and prints the shortest representation.
pub fn format_eigenvalue(x: f64) -> String {
    if x == 0.0 {
        return String::from("0");
    }
    let exp = libm::floor(libm::log10(libm::fabs(x)));
    let scale = libm::pow(10.0, 11.0 - exp);
    let y = libm::round(x * scale) / scale;
    if y == 0.0 {
        String::from("0")
    } else {
        alloc::format!("{y}")
    }
}

/// Axis metadata carried by a distribution: which observable, which
/// outcome labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub observable: String,
    pub outcomes: Vec<String>,
}

/// Probability table over tuples of per-subsystem outcomes, indexed with
/// the leftmost axis varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(axes: Vec<Axis>, probs: Vec<f64>) -> Result<Self> {
        let size: usize = axes.iter().map(|a| a.outcomes.len()).product();
        if probs.len() != size || axes.is_empty() {
            return Err(Error::DimensionMismatch { expected: size, got: probs.len() });
        }
        let mut clamped = Vec::with_capacity(probs.len());
        let mut sum = 0.0;
        for &p in &probs {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if p < -NEG_NOISE_BAND {
                return Err(Error::NegativeProbability { value: p });
            }
            let v = p.max(0.0);
            clamped.push(v);
            sum += v;
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::UnnormalizedDistribution { sum });
        }
        Ok(Self { axes, probs: clamped })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.outcomes.len()).collect()
    }

    pub fn ravel(&self, outcome: &[usize]) -> usize {
        assert_eq!(outcome.len(), self.axes.len());
        let mut idx = 0usize;
        for (&o, axis) in outcome.iter().zip(&self.axes) {
            debug_assert!(o < axis.outcomes.len());
            idx = idx * axis.outcomes.len() + o;
        }
        idx
    }

    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let mut out = alloc::vec![0usize; self.axes.len()];
        for k in (0..self.axes.len()).rev() {
            let n = self.axes[k].outcomes.len();
            out[k] = idx % n;
            idx /= n;
        }
        out
    }

    pub fn prob(&self, outcome: &[usize]) -> f64 {
        self.probs[self.ravel(outcome)]
    }

    /// Probability by outcome labels, for readable assertions and lookups.
    pub fn prob_by_labels(&self, labels: &[&str]) -> Result<f64> {
        let mut outcome = Vec::with_capacity(labels.len());
        if labels.len() != self.axes.len() {
            return Err(Error::DimensionMismatch { expected: self.axes.len(), got: labels.len() });
        }
        for (label, axis) in labels.iter().zip(&self.axes) {
            let pos = axis
                .outcomes
                .iter()
                .position(|o| o == label)
                .ok_or(Error::IndexOutOfRange { index: usize::MAX, bound: axis.outcomes.len() })?;
            outcome.push(pos);
        }
        Ok(self.prob(&outcome))
    }
}

/// Born table: p(outcome tuple) = tr(w · P₁⊗P₂⊗…) over spectral projectors.
pub fn joint_distribution(w: &DensityMatrix, axes: &[ProjectiveAxis]) -> Result<JointDistribution> {
    if axes.is_empty() {
        return Err(Error::SingleAxis);
    }
    let dims: Vec<usize> = axes.iter().map(|a| a.dim()).collect();
    let p = Partition::new(dims)?;
    if w.dim() != p.total_dim() {
        return Err(Error::DimensionMismatch { expected: p.total_dim(), got: w.dim() });
    }
    for axis in axes {
        let dev = axis.completeness_deviation();
        if dev > 1e-8 {
            return Err(Error::IncompleteProjectors { deviation: dev });
        }
    }
    let shape: Vec<usize> = axes.iter().map(|a| a.outcomes.len()).collect();
    let total: usize = shape.iter().product();
    let mut probs = Vec::with_capacity(total);
    let mut outcome = alloc::vec![0usize; axes.len()];
    for flat in 0..total {
        let mut rem = flat;
        for k in (0..axes.len()).rev() {
            outcome[k] = rem % shape[k];
            rem /= shape[k];
        }
        let ops: Vec<&ComplexMatrix> = axes
            .iter()
            .zip(&outcome)
            .map(|(axis, &o)| &axis.outcomes[o].1)
            .collect();
        let mean = product_mean(w, &p, &ops)?;
        probs.push(mean.value);
    }
    let meta = axes
        .iter()
        .map(|a| Axis {
            observable: a.observable.clone(),
            outcomes: a.outcomes.iter().map(|(l, _)| l.clone()).collect(),
        })
        .collect();
    JointDistribution::new(meta, probs)
}

/// Sums out all axes not listed in `keep` (order of kept axes preserved).
pub fn marginal(jd: &JointDistribution, keep: &[usize]) -> Result<JointDistribution> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let n = jd.axes().len();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
        return Err(Error::IndexOutOfRange { index: bad, bound: n });
    }
    if kept.len() == n {
        return Ok(jd.clone());
    }
    let shape = jd.shape();
    let kept_shape: Vec<usize> = kept.iter().map(|&k| shape[k]).collect();
    let out_size: usize = kept_shape.iter().product();
    let mut probs = alloc::vec![0.0f64; out_size];
    for flat in 0..jd.probs().len() {
        let full = jd.unravel(flat);
        let mut idx = 0usize;
        for (&k, &dim) in kept.iter().zip(&kept_shape) {
            idx = idx * dim + full[k];
        }
        probs[idx] += jd.probs()[flat];
    }
    let axes = kept.iter().map(|&k| jd.axes()[k].clone()).collect();
    JointDistribution::new(axes, probs)
}

/// Distribution over the remaining axes given one axis pinned to one
/// outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    pub given_axis: Axis,
    pub given_outcome: String,
    pub axes: Vec<Axis>,
    pub probs: Vec<f64>,
}

impl ConditionalDistribution {
    pub fn prob(&self, outcome: &[usize]) -> f64 {
        let mut idx = 0usize;
        for (&o, axis) in outcome.iter().zip(&self.axes) {
            idx = idx * axis.outcomes.len() + o;
        }
        self.probs[idx]
    }

    pub fn prob_by_labels(&self, labels: &[&str]) -> Result<f64> {
        if labels.len() != self.axes.len() {
            return Err(Error::DimensionMismatch { expected: self.axes.len(), got: labels.len() });
        }
        let mut outcome = Vec::with_capacity(labels.len());
        for (label, axis) in labels.iter().zip(&self.axes) {
            let pos = axis
                .outcomes
                .iter()
                .position(|o| o == label)
                .ok_or(Error::IndexOutOfRange { index: usize::MAX, bound: axis.outcomes.len() })?;
            outcome.push(pos);
        }
        Ok(self.prob(&outcome))
    }
}

/// Conventional conditional: joint over the marginal probability of the
/// conditioning outcome. Refuses when that probability is at or below
/// [`CONDITIONAL_THRESHOLD`].
pub fn conditional(
    jd: &JointDistribution,
    axis: usize,
    outcome: usize,
) -> Result<ConditionalDistribution> {
    let n = jd.axes().len();
    if axis >= n {
        return Err(Error::IndexOutOfRange { index: axis, bound: n });
    }
    if n < 2 {
        return Err(Error::SingleAxis);
    }
    let axis_outcomes = jd.axes()[axis].outcomes.len();
    if outcome >= axis_outcomes {
        return Err(Error::IndexOutOfRange { index: outcome, bound: axis_outcomes });
    }
    let on_axis = marginal(jd, &[axis])?;
    let weight = on_axis.probs()[outcome];
    if weight <= CONDITIONAL_THRESHOLD {
        return Err(Error::ConditionalUndefined { probability: weight });
    }
    let rest: Vec<usize> = (0..n).filter(|&k| k != axis).collect();
    let shape = jd.shape();
    let rest_size: usize = rest.iter().map(|&k| shape[k]).product();
    let mut probs = alloc::vec![0.0f64; rest_size];
    for flat in 0..jd.probs().len() {
        let full = jd.unravel(flat);
        if full[axis] != outcome {
            continue;
        }
        let mut idx = 0usize;
        for &k in &rest {
            idx = idx * shape[k] + full[k];
        }
        probs[idx] = jd.probs()[flat] / weight;
    }
    Ok(ConditionalDistribution {
        given_axis: jd.axes()[axis].clone(),
        given_outcome: jd.axes()[axis].outcomes[outcome].clone(),
        axes: rest.iter().map(|&k| jd.axes()[k].clone()).collect(),
        probs,
    })
}

/// Verdict of the factorization test, with the largest deviation
/// |p(tuple) - ∏ marginals|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialityReport {
    pub trivial: bool,
    pub max_deviation: f64,
}

/// A joint distribution is trivial when it is the product of its own
/// single-axis marginals.
pub fn is_trivial(jd: &JointDistribution, tol: f64) -> Result<TrivialityReport> {
    let n = jd.axes().len();
    if n < 2 {
        return Err(Error::SingleAxis);
    }
    let marginals: Vec<JointDistribution> =
        (0..n).map(|k| marginal(jd, &[k])).collect::<Result<_>>()?;
    let mut max_deviation: f64 = 0.0;
    for flat in 0..jd.probs().len() {
        let full = jd.unravel(flat);
        let mut product = 1.0;
        for (k, &o) in full.iter().enumerate() {
            product *= marginals[k].probs()[o];
        }
        max_deviation = max_deviation.max((jd.probs()[flat] - product).abs());
    }
    Ok(TrivialityReport { trivial: max_deviation <= tol, max_deviation })
}

/// Result of checking that a subsystem's outcome distribution ignores which
/// observables its partners measure.
#[derive(Debug, Clone)]
pub struct MarginalConsistencyReport {
    /// One marginal table per partner choice, index-aligned with the input.
    pub marginals: Vec<JointDistribution>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Computes the target subsystem's marginal under every partner-observable
/// choice and reports the largest pairwise deviation; passes at 1e-10.
///
/// `partner_choices` lists, per choice, the axes of the non-target
/// subsystems in ascending subsystem order.
pub fn marginal_consistency_report(
    w: &DensityMatrix,
    target: usize,
    target_axis: &ProjectiveAxis,
    partner_choices: &[Vec<ProjectiveAxis>],
) -> Result<MarginalConsistencyReport> {
    let mut marginals = Vec::with_capacity(partner_choices.len());
    for partners in partner_choices {
        if target > partners.len() {
            return Err(Error::IndexOutOfRange { index: target, bound: partners.len() + 1 });
        }
        let mut axes: Vec<ProjectiveAxis> = Vec::with_capacity(partners.len() + 1);
        axes.extend_from_slice(&partners[..target]);
        axes.push(target_axis.clone());
        axes.extend_from_slice(&partners[target..]);
        let jd = joint_distribution(w, &axes)?;
        marginals.push(marginal(&jd, &[target])?);
    }
    let mut max_deviation: f64 = 0.0;
    for a in &marginals {
        for b in &marginals {
            for (x, y) in a.probs().iter().zip(b.probs()) {
                max_deviation = max_deviation.max((x - y).abs());
            }
        }
    }
    Ok(MarginalConsistencyReport { marginals, max_deviation, pass: max_deviation <= 1e-10 })
}
