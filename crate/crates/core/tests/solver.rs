use dncoupling::discretization_1d::{assemble, build_fem_blocks, build_fvm_blocks, GridSpec1D};
use dncoupling::dn_solver::*;
use dncoupling::experiments::spec::{SpecEntries, SweepSpec};
use dncoupling::experiments::sweep::run_sweep;
use dncoupling::materials::Material;
use dncoupling::rate_theory::{sigma_exact, RateInputs};

fn preset(name: &str) -> Material {
    Material::preset(name).unwrap()
}

#[test]
fn air_steel_observed_rate_matches_formula() {
    let g = GridSpec1D::from_dx1_r(1.0 / 1100.0, 100.0).unwrap();
    let dt = 40.0 / 39.0;
    let (rate, trace) = measure_rate_1d(&g, &preset("air"), &preset("steel"), dt, 1e-10, 100).unwrap();
    let s = sigma_exact(&RateInputs::new(dt, g, preset("air"), preset("steel")).unwrap()).unwrap();
    assert!(trace.converged);
    assert!((rate / s - 1.0).abs() <= 1e-6, "observed {rate:e}, formula {s:e}");
}

#[test]
fn water_steel_dx1_sweep_columns_agree() {
    for r in ["1", "0.01"] {
        let text = format!("var = dx1\nrange = 1/50 1/3 48 inverse\ndt = 10\nr = {r}\nmat1 = water\nmodes = formula, observed_1d");
        let t = run_sweep(&SweepSpec::from_entries(&SpecEntries::parse(&text).unwrap()).unwrap());
        assert!(!t.has_errors());
        for row in &t.rows {
            assert!((row.values[1] / row.values[0] - 1.0).abs() <= 1e-6, "r = {r}, dx1 = {}: {:?}", row.x, row.values);
        }
    }
}

#[test]
fn air_steel_dt_curves_are_monotone() {
    for r in [1.0, 100.0] {
        let inp = RateInputs::from_dx1_r(1.0, 1.0 / 1100.0, r, preset("air"), preset("steel")).unwrap();
        let s: Vec<f64> = (1..=39).map(|k| sigma_exact(&inp.with_dt(k as f64 * 40.0 / 39.0).unwrap()).unwrap()).collect();
        assert!(s.windows(2).all(|w| w[1] > w[0]), "r = {r}");
    }
}

#[test]
fn converged_dn_step_equals_monolithic_step() {
    let cases = [
        (GridSpec1D::new(9, 9).unwrap(), "air", "steel", 1.0),
        (GridSpec1D::from_dx1_r(1.0 / 100.0, 0.1).unwrap(), "water", "steel", 0.5),
        (GridSpec1D::from_dx1_r(1.0 / 200.0, 10.0).unwrap(), "air", "water", 10.0),
    ];
    for (g, a, b, dt) in cases {
        let (m1, m2) = (preset(a), preset(b));
        let (b1, b2) = (build_fvm_blocks(&g, &m1).unwrap(), build_fem_blocks(&g, &m2).unwrap());
        let prev = StateVector::from_fn(&g, |x| (3.0 * x).sin() + 1.0 - x * x);
        let cfg = DNConfig { tol: 1e-12, ..DNConfig::with_dt(dt) };
        let (dn, trace) = dn_time_step(&b1, &b2, &cfg, &prev).unwrap();
        let mono = monolithic_step(&assemble(&b1, &b2, dt).unwrap(), &prev).unwrap();
        assert!(trace.converged);
        let diff: f64 = dn.to_vec().iter().zip(mono.to_vec()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!(diff <= 10.0 * cfg.tol * (1.0 + mono.norm()), "{a}-{b}: {diff:e}");
    }
}

#[test]
fn reference_and_update_rates_agree() {
    let g = GridSpec1D::from_dx1_r(1.0 / 300.0, 1.0).unwrap();
    let (m1, m2) = (preset("water"), preset("steel"));
    let (b1, b2) = (build_fvm_blocks(&g, &m1).unwrap(), build_fem_blocks(&g, &m2).unwrap());
    let prev = StateVector::interface_hat(&g);
    let cfg = DNConfig { tol: 1e-13, initial_interface: InterfaceInit::Zero, ..DNConfig::with_dt(0.5) };
    let (_, trace) = dn_time_step(&b1, &b2, &cfg, &prev).unwrap();
    let mono = monolithic_step(&assemble(&b1, &b2, 0.5).unwrap(), &prev).unwrap();
    let a = observed_rate(&trace).unwrap();
    let b = reference_rate(&trace, &[mono.u_gamma]).unwrap();
    assert!((a / b - 1.0).abs() < 1e-4, "{a} vs {b}");
}

#[test]
fn divergent_pairing_is_flagged() {
    // Steel on the finite volume side against air: rate far above one.
    let g = GridSpec1D::new(19, 19).unwrap();
    let (rate, trace) = measure_rate_1d(&g, &preset("steel"), &preset("air"), 1.0, 1e-10, 30).unwrap();
    assert!(rate > 1.0);
    assert!(!trace.converged);
    assert!(trace.diverged() || trace.iters == 30);
}
