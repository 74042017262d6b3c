use std::f64::consts::PI;

use cvqnn::bench::{aggregate, RunResult, Strategy};
use cvqnn::data::{target, uniform_grid};
use cvqnn::fock::{expectation, matrix_exp, quadrature_x_op, CutoffConfig, FockVector, GateMatrix};
use cvqnn::gates::{displacement, kerr, rotation, squeeze};
use cvqnn::mlp::{param_count, Activation, MlpArchitecture, MlpNetwork};
use cvqnn::optim::{adam_step, mse, AdamConfig, TrainState};
use cvqnn::TargetKind;
use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;

fn cfg(dim: usize) -> CutoffConfig {
    CutoffConfig::new(dim).unwrap()
}

fn anti_hermitian(dim: usize, entries: &[(f64, f64)]) -> GateMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |r, c| {
        let (re, im) = entries[r * dim + c];
        Complex::new(re, im)
    });
    // entries of A lie in [−1.5, 1.5], so |G| ≤ 3 entrywise
    GateMatrix::from_matrix(&a - a.adjoint()).unwrap()
}

fn random_state(dim: usize, raw: &[(f64, f64)]) -> Option<FockVector<f64>> {
    let v = DVector::from_iterator(dim, raw.iter().map(|&(re, im)| Complex::new(re, im)));
    let norm = v.norm();
    if norm < 1e-3 {
        return None;
    }
    FockVector::from_amplitudes(v / Complex::new(norm, 0.0)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn matrix_exp_of_anti_hermitian_is_unitary(
        dim in 2usize..8,
        raw in prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 64),
    ) {
        let g = anti_hermitian(dim, &raw);
        let u = matrix_exp(&g).unwrap();
        prop_assert!(u.unitarity_error() < 1e-12, "{}", u.unitarity_error());
        let inv = matrix_exp(&g.scale(Complex::new(-1.0, 0.0))).unwrap();
        let product = u.compose(&inv).unwrap();
        prop_assert!(product.distance(&GateMatrix::identity(cfg(dim))) < 1e-12);
    }

    #[test]
    fn non_anti_hermitian_generators_are_rejected(dim in 2usize..6, shift in 0.01f64..2.0) {
        let g = GateMatrix::identity(cfg(dim)).scale(Complex::new(shift, 0.0));
        prop_assert!(matrix_exp(&g).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gates_are_unitary_at_default_cutoff(
        alpha in -1.0f64..1.0,
        xi in -1.0f64..1.0,
        theta in -PI..PI,
        chi in -PI..PI,
    ) {
        let c = CutoffConfig::default();
        for g in [displacement(alpha, c), squeeze(xi, c), rotation(theta, c), kerr(chi, c)] {
            prop_assert!(g.unitarity_error() < 1e-12);
        }
    }

    #[test]
    fn gates_preserve_norm(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
        alpha in -1.0f64..1.0,
        xi in -0.8f64..0.8,
        theta in -PI..PI,
    ) {
        let c = cfg(12);
        if let Some(state) = random_state(12, &raw) {
            for g in [displacement(alpha, c), squeeze(xi, c), rotation(theta, c), kerr(theta, c)] {
                let out = g.apply(&state).unwrap();
                prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn expectation_ignores_global_phase(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10),
        phi in -PI..PI,
    ) {
        let c = cfg(10);
        if let Some(state) = random_state(10, &raw) {
            let x = quadrature_x_op::<f64>(c);
            let a = expectation(&x, &state).unwrap();
            let b = expectation(&x, &state.with_global_phase(phi)).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_gates_commute(theta in -PI..PI, chi in -PI..PI) {
        let c = cfg(30);
        let ab = rotation(theta, c).compose(&kerr(chi, c)).unwrap();
        let ba = kerr(chi, c).compose(&rotation(theta, c)).unwrap();
        prop_assert_eq!(ab, ba);
    }
}

proptest! {
    #[test]
    fn mse_is_permutation_invariant(
        pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..40),
        rotate in 0usize..40,
    ) {
        let (p, t): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let base = mse(&p, &t).unwrap();
        prop_assert!(base >= 0.0);
        let k = rotate % pairs.len();
        let mut rp = p.clone();
        let mut rt = t.clone();
        rp.rotate_left(k);
        rt.rotate_left(k);
        prop_assert!((mse(&rp, &rt).unwrap() - base).abs() <= 1e-12 * base.max(1.0));
        prop_assert_eq!(mse(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn grid_is_sorted_symmetric_and_spans_the_interval(n in 2usize..500) {
        let g = uniform_grid::<f64>(n).unwrap();
        prop_assert_eq!(g.len(), n);
        prop_assert_eq!(g[0], -1.0);
        prop_assert_eq!(g[n - 1], 1.0);
        for i in 0..n {
            prop_assert_eq!(g[i], -g[n - 1 - i]);
            if i > 0 {
                prop_assert!(g[i] > g[i - 1]);
            }
        }
    }

    #[test]
    fn heaviside_is_a_monotone_step(a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (ylo, yhi) = (target(TargetKind::Heaviside, lo), target(TargetKind::Heaviside, hi));
        prop_assert!(ylo == 0.0 || ylo == 1.0);
        prop_assert!(ylo <= yhi);
        prop_assert!((target(TargetKind::Sine, a) + target(TargetKind::Sine, -a)).abs() < 1e-15);
    }

    #[test]
    fn param_count_matches_network_layout(widths in prop::collection::vec(1usize..6, 0..4)) {
        let arch = MlpArchitecture::new(widths.clone(), Activation::Tanh).unwrap();
        let net = MlpNetwork::<f64>::zeros(arch);
        prop_assert_eq!(net.to_flat().len(), param_count(&widths));
        prop_assert_eq!(net.forward(0.3), 0.0);
    }

    #[test]
    fn zero_gradient_leaves_parameters(params in prop::collection::vec(-5.0f64..5.0, 1..10)) {
        let state = TrainState::new(params.clone());
        let zeros = vec![0.0; params.len()];
        let next = adam_step(&state, &zeros, &AdamConfig::default()).unwrap();
        prop_assert_eq!(&next.parameters, &params);
        prop_assert_eq!(next.step_count, 1);
    }

    #[test]
    fn aggregate_mean_lies_between_min_and_max(mses in prop::collection::vec(0.0f64..10.0, 1..20)) {
        let runs: Vec<RunResult> = mses
            .iter()
            .enumerate()
            .map(|(seed, &m)| RunResult {
                model_id: "qnn-l1".into(),
                target: TargetKind::Sine,
                strategy: Strategy::Layers,
                layers: 1,
                params: 5,
                activation: "quantum".into(),
                seed: seed as u64,
                train_mse: m,
                test_mse: m,
                leakage_flag: false,
                runtime_seconds: 0.0,
                fit_curve: Vec::new(),
            })
            .collect();
        let rows = aggregate(&runs);
        prop_assert_eq!(rows.len(), 1);
        let max = mses.iter().copied().fold(0.0, f64::max);
        let r = &rows[0];
        prop_assert!(r.min_mse <= r.mean_mse + 1e-15 && r.mean_mse <= max + 1e-15);
        prop_assert!(r.std_mse >= 0.0);
        prop_assert_eq!(r.n_seeds, mses.len());
    }
}
