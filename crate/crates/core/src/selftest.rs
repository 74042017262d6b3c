//! Fast analytic checks of the simulator and the classical networks, used
//! as a smoke test of a build.

use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::PARAMETER_MATCHED_CONFIGS;
use crate::fock::{expectation, number_op, quadrature_x_op, CutoffConfig, FockVector};
use crate::gates::{displacement, kerr, rotation, squeeze};
use crate::mlp::{flatten, param_count, Activation, MlpArchitecture, MlpNetwork};
use crate::qnn::{encode, forward, gradient, QnnParams, PARAMS_PER_LAYER};

const SEED: u64 = 0x5e1f;

pub const UNITARITY_TOL: f64 = 1e-12;
pub const COHERENT_TOL: f64 = 1e-6;
pub const ENCODE_TOL: f64 = 1e-9;
pub const SQUEEZE_TOL: f64 = 1e-6;
/// Stronger squeezing leaves more than 1e-6 of the variance in the truncated
/// tail at D = 30.
pub const SQUEEZE_PARAMS: [f64; 2] = [0.1, 0.5];
pub const QNN_FD_STEP: f64 = 1e-5;
pub const QNN_FD_TOL: f64 = 1e-4;
pub const MLP_FD_STEP: f64 = 1e-6;
pub const MLP_FD_TOL: f64 = 1e-5;

/// Outcome of one check: `Ok` carries a short summary, `Err` the reason.
pub type CheckResult = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub run: fn(CutoffConfig) -> CheckResult,
}

pub const CHECKS: [Check; 7] = [
    Check { name: "gate-unitarity", run: gate_unitarity },
    Check { name: "coherent-photon-number", run: coherent_photon_number },
    Check { name: "encode-quadrature", run: encode_quadrature },
    Check { name: "squeezed-variance", run: squeezed_variance },
    Check { name: "qnn-gradient", run: qnn_gradient },
    Check { name: "mlp-gradient", run: mlp_gradient },
    Check { name: "parameter-counts", run: parameter_counts },
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Runs every check at `cutoff`. A panicking check counts as a failure.
pub fn run_all(cutoff: CutoffConfig) -> Vec<CheckReport> {
    CHECKS
        .iter()
        .map(|check| {
            let start = Instant::now();
            let outcome = catch_unwind(AssertUnwindSafe(|| (check.run)(cutoff)))
                .unwrap_or_else(|payload| {
                    let msg = payload
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "unknown panic".into());
                    Err(format!("panicked: {msg}"))
                });
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckReport {
                name: check.name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Result<f64, String> {
    let err = (got - want).abs();
    if err < tol {
        Ok(err)
    } else {
        Err(format!("{label}: got {got:.12e}, expected {want:.12e} (|Δ| {err:.3e} ≥ {tol:e})"))
    }
}

fn gate_unitarity(cfg: CutoffConfig) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for draw in 0..100 {
        let gates = [
            ("D", displacement(rng.random_range(-1.5..1.5), cfg)),
            ("S", squeeze(rng.random_range(-1.0..1.0), cfg)),
            ("R", rotation(rng.random_range(-PI..PI), cfg)),
            ("K", kerr(rng.random_range(-1.0..1.0), cfg)),
        ];
        for (label, g) in gates {
            let err = g.unitarity_error();
            if !(err < UNITARITY_TOL) {
                return Err(format!("draw {draw}: {label} has ‖U†U − I‖ = {err:.3e}"));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!("400 gates, worst ‖U†U − I‖ {worst:.1e}"))
}

fn coherent_photon_number(cfg: CutoffConfig) -> CheckResult {
    let n = number_op::<f64>(cfg);
    let mut worst = 0.0f64;
    for alpha in [0.1, 0.5, 1.0] {
        let state = displacement(alpha, cfg)
            .apply(&FockVector::vacuum(cfg))
            .map_err(|e| e.to_string())?;
        let got = expectation(&n, &state).map_err(|e| e.to_string())?;
        worst = worst.max(within(&format!("α={alpha}"), got, alpha * alpha, COHERENT_TOL)?);
    }
    Ok(format!("worst |⟨n⟩ − α²| {worst:.1e}"))
}

fn encode_quadrature(cfg: CutoffConfig) -> CheckResult {
    let x_op = quadrature_x_op::<f64>(cfg);
    let mut worst = 0.0f64;
    for i in 0..=10 {
        let x = -1.0 + 0.2 * i as f64;
        let got = expectation(&x_op, &encode(x, cfg)).map_err(|e| e.to_string())?;
        worst = worst.max(within(&format!("x={x:.1}"), got, SQRT_2 * x, ENCODE_TOL)?);
    }
    Ok(format!("11 inputs, worst |⟨X⟩ − √2x| {worst:.1e}"))
}

fn squeezed_variance(cfg: CutoffConfig) -> CheckResult {
    let x_op = quadrature_x_op::<f64>(cfg);
    let x2 = x_op.compose(&x_op).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for r in SQUEEZE_PARAMS {
        let state = squeeze(r, cfg)
            .apply(&FockVector::vacuum(cfg))
            .map_err(|e| e.to_string())?;
        let mean = expectation(&x_op, &state).map_err(|e| e.to_string())?;
        let second = expectation(&x2, &state).map_err(|e| e.to_string())?;
        let want = (-2.0 * r).exp() / 2.0;
        worst = worst.max(within(&format!("r={r}"), second - mean * mean, want, SQUEEZE_TOL)?);
    }
    Ok(format!("worst |Var(X) − e^(−2r)/2| {worst:.1e}"))
}

/// Components with `|g_fd|` below this are compared absolutely.
pub const SMALL_COMPONENT: f64 = 1e-3;
pub const SMALL_COMPONENT_ABS_TOL: f64 = 1e-7;

/// Componentwise comparison: relative error below `rel_tol`, or absolute
/// error below [`SMALL_COMPONENT_ABS_TOL`] for tiny components. Returns the
/// worst relative error on the ordinary components.
fn compare_gradient(analytic: &[f64], numeric: &[f64], rel_tol: f64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (k, (a, b)) in analytic.iter().zip(numeric).enumerate() {
        let d = (a - b).abs();
        if b.abs() < SMALL_COMPONENT {
            if !(d < SMALL_COMPONENT_ABS_TOL) {
                return Err(format!("component {k}: {a:e} vs {b:e}, absolute error {d:.3e}"));
            }
        } else {
            let rel = d / b.abs();
            if !(rel < rel_tol) {
                return Err(format!("component {k}: {a:e} vs {b:e}, relative error {rel:.3e}"));
            }
            worst = worst.max(rel);
        }
    }
    Ok(worst)
}

fn qnn_gradient(cfg: CutoffConfig) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst = 0.0f64;
    for draw in 0..20 {
        let layers = 1 + draw % 3;
        let params = QnnParams::<f64>::random(layers, &mut rng).map_err(|e| e.to_string())?;
        let x: f64 = rng.random_range(-1.0..1.0);
        let analytic = gradient(x, &params, cfg);
        let flat = params.to_flat();
        let numeric: Vec<f64> = (0..flat.len())
            .map(|k| {
                let eval = |delta: f64| {
                    let mut p = flat.clone();
                    p[k] += delta;
                    forward(x, &QnnParams::from_flat(&p).expect("same length"), cfg)
                };
                (eval(QNN_FD_STEP) - eval(-QNN_FD_STEP)) / (2.0 * QNN_FD_STEP)
            })
            .collect();
        let err = compare_gradient(&analytic, &numeric, QNN_FD_TOL)
            .map_err(|e| format!("draw {draw} (L={layers}, x={x:.3}): {e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("20 circuits, worst relative error {worst:.1e}"))
}

fn mlp_gradient(_cfg: CutoffConfig) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    for act in Activation::ALL {
        for draw in 0..20 {
            let depth = rng.random_range(1..=3);
            let widths: Vec<usize> = (0..depth).map(|_| rng.random_range(1..=4)).collect();
            let arch = MlpArchitecture::new(widths, act).map_err(|e| e.to_string())?;
            // biases too, so no pre-activation sits on the ReLU kink
            let flat: Vec<f64> = (0..arch.param_count())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let net = MlpNetwork::from_flat(arch.clone(), &flat).map_err(|e| e.to_string())?;
            let x: f64 = rng.random_range(-1.0..1.0);
            let y: f64 = rng.random_range(-1.0..1.0);
            let analytic = flatten(&net.backward(x, y));
            let numeric: Vec<f64> = (0..flat.len())
                .map(|k| {
                    let eval = |delta: f64| {
                        let mut p = flat.clone();
                        p[k] += delta;
                        let n = MlpNetwork::from_flat(arch.clone(), &p).expect("same length");
                        let e = n.forward(x) - y;
                        e * e
                    };
                    (eval(MLP_FD_STEP) - eval(-MLP_FD_STEP)) / (2.0 * MLP_FD_STEP)
                })
                .collect();
            let err = compare_gradient(&analytic, &numeric, MLP_FD_TOL)
                .map_err(|e| format!("{act} draw {draw}: {e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("60 networks, worst relative error {worst:.1e}"))
}

fn parameter_counts(_cfg: CutoffConfig) -> CheckResult {
    let mut n = 0;
    for (count, configs) in PARAMETER_MATCHED_CONFIGS {
        for widths in configs {
            let got = param_count(widths);
            if got != count {
                return Err(format!("{widths:?}: {got} parameters, expected {count}"));
            }
            n += 1;
        }
    }
    for layers in 1..=5 {
        let p = QnnParams::<f64>::zeros(layers).map_err(|e| e.to_string())?;
        if p.num_params() != PARAMS_PER_LAYER * layers {
            return Err(format!("QNN L={layers}: {} parameters", p.num_params()));
        }
    }
    Ok(format!("{n} classical and 5 quantum configurations"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_at_default_cutoff() {
        for report in run_all(CutoffConfig::default()) {
            assert!(report.passed, "{}: {}", report.name, report.detail);
        }
    }

    #[test]
    fn squeezing_fails_at_cutoff_two() {
        let reports = run_all(CutoffConfig::new(2).unwrap());
        let squeeze = reports.iter().find(|r| r.name == "squeezed-variance").unwrap();
        assert!(!squeeze.passed);
        assert!(reports.iter().any(|r| r.passed));
    }

    #[test]
    fn names_are_unique() {
        let mut names = check_names();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }
}
