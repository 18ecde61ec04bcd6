//! Property tests over randomly sampled states and operators. Inputs are
//! generated from a seeded ChaCha8 stream so every failure reproduces from
//! the printed seed.

use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcorr_core::correlations::{is_trivial, joint_distribution, marginal, ProjectiveAxis};
use qcorr_core::linalg::{hermitian_eig, partial_trace, tensor, ComplexMatrix, Partition};
use qcorr_core::operators::Observable;
use qcorr_core::sampling::{random_density, random_hermitian, random_ket, random_unitary};
use qcorr_core::ssc::{correlation_table, reconstruct_density};
use qcorr_core::states::{schmidt, DensityMatrix};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_respects_trace_and_mixed_products(seed in any::<u64>(), da in 2usize..4, db in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(da, &mut rng);
        let b = random_hermitian(db, &mut rng);
        let c = random_hermitian(da, &mut rng);
        let d = random_hermitian(db, &mut rng);
        let tr = tensor(&a, &b).trace();
        let expected = a.trace() * b.trace();
        prop_assert!((tr - expected).norm() <= 1e-12);
        let lhs = tensor(&a, &b).mul(&tensor(&c, &d));
        let rhs = tensor(&a.mul(&c), &b.mul(&d));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Partition::bipartite(2, 3).unwrap();
        let w1 = random_density(6, 6, &mut rng);
        let w2 = random_density(6, 3, &mut rng);
        let lambda = 0.4;
        let blend = w1.matrix().scale_re(lambda).add(&w2.matrix().scale_re(1.0 - lambda));
        let direct = partial_trace(&blend, &p, &[0]).unwrap();
        let separate = partial_trace(w1.matrix(), &p, &[0])
            .unwrap()
            .scale_re(lambda)
            .add(&partial_trace(w2.matrix(), &p, &[0]).unwrap().scale_re(1.0 - lambda));
        prop_assert!(direct.max_abs_diff(&separate) <= 1e-12);
        prop_assert!((direct.trace() - blend.trace()).norm() <= 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian(dim, &mut rng);
        let eig = hermitian_eig(&m).unwrap();
        let mut rebuilt = ComplexMatrix::zeros(dim, dim);
        for (lam, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
            rebuilt = rebuilt.add(&v.outer(v).scale_re(*lam));
        }
        prop_assert!(rebuilt.sub(&m).frobenius_norm() <= 1e-10 * m.frobenius_norm().max(1.0));
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace().re).abs() <= 1e-10);
    }

    #[test]
    fn schmidt_reconstructs_and_squares_to_one(seed in any::<u64>(), da in 2usize..4, db in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Partition::bipartite(da, db).unwrap();
        let psi = random_ket(da * db, &mut rng);
        let form = schmidt(&psi, &p).unwrap();
        prop_assert!(form.reconstruct().sub(&psi).norm() <= 1e-10);
        let total: f64 = form.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        for w in form.coefficients.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn correlation_table_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Partition::bipartite(2, 2).unwrap();
        let w = random_density(4, 4, &mut rng);
        let rebuilt = reconstruct_density(&correlation_table(&w, &p).unwrap()).unwrap();
        prop_assert!(rebuilt.matrix().sub(w.matrix()).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn product_states_yield_trivial_tables(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_density(2, 2, &mut rng);
        let b = random_density(2, 2, &mut rng);
        let w = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
        let oa = Observable::new(random_hermitian(2, &mut rng)).unwrap();
        let ob = Observable::new(random_hermitian(2, &mut rng)).unwrap();
        let axes = [
            ProjectiveAxis::from_observable("A", &oa),
            ProjectiveAxis::from_observable("B", &ob),
        ];
        let jd = joint_distribution(&w, &axes).unwrap();
        let report = is_trivial(&jd, 1e-9).unwrap();
        prop_assert!(report.trivial, "deviation {}", report.max_deviation);
    }

    #[test]
    fn local_unitaries_leave_partner_marginals_alone(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_density(4, 4, &mut rng);
        let u = random_unitary(2, &mut rng);
        let lifted = tensor(&ComplexMatrix::identity(2), &u);
        let moved = DensityMatrix::new(lifted.mul(w.matrix()).mul(&lifted.adjoint())).unwrap();
        let oa = Observable::new(random_hermitian(2, &mut rng)).unwrap();
        let ob = Observable::new(random_hermitian(2, &mut rng)).unwrap();
        let axes = [
            ProjectiveAxis::from_observable("A", &oa),
            ProjectiveAxis::from_observable("B", &ob),
        ];
        let before = marginal(&joint_distribution(&w, &axes).unwrap(), &[0]).unwrap();
        let after = marginal(&joint_distribution(&moved, &axes).unwrap(), &[0]).unwrap();
        for (x, y) in before.probs().iter().zip(after.probs()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn unitary_interpolation_square_root_squares_back(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(dim, &mut rng);
        let half = qcorr_core::linalg::unitary_fractional_power(&u, 0.5).unwrap();
        prop_assert!(half.mul(&half).max_abs_diff(&u) <= 1e-10);
        prop_assert!(half.unitarity_deviation() <= 1e-10);
    }
}
