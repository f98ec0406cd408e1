use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dncoupling::discretization_1d::GridSpec1D;
use dncoupling::materials::Material;
use dncoupling::rate_theory::*;

fn preset(name: &str) -> Material {
    Material::preset(name).unwrap()
}

#[test]
fn s1_hand_evaluation() {
    let m = Material::new(1.0, 1.0, 1.0).unwrap();
    let inp = RateInputs::new(1.0, GridSpec1D::new(2, 2).unwrap(), m, m).unwrap();
    // sin^2 = 3/4 at both nodes; denominators 10/9 and 28/9.
    assert_relative_eq!(sums_s(&inp).s1, 513.0 / 560.0, max_relative = 1e-14);
}

#[test]
fn s2_with_constant_denominator() {
    let g = GridSpec1D::new(2, 9).unwrap();
    let m2 = Material::from_lambda_alpha(1.0, 6.0 / (g.dx2 * g.dx2)).unwrap();
    let inp = RateInputs::new(1.0, g, preset("air"), m2).unwrap();
    let c = 2.0 * m2.alpha * g.dx2 * g.dx2 + 6.0;
    assert_relative_eq!(sums_s(&inp).s2, 1.0 / (2.0 * g.dx2 * c), max_relative = 1e-13);
}

#[test]
fn inverse_entries_at_zero_time_step() {
    let g = GridSpec1D::new(7, 5).unwrap();
    let m1 = Material::from_lambda_alpha(2.0, 3.0).unwrap();
    let inp = RateInputs { dt: 0.0, grid: g, mat1: m1, mat2: preset("steel") };
    let e = inverse_entries(&inp);
    assert_relative_eq!(e.alpha1_nn, 1.0 / 3.0, max_relative = 1e-13);
    assert!(e.alpha1_nm1n.abs() < 1e-14);
}

#[test]
fn sigma_matches_schur_for_estimator_figure_materials() {
    let m1 = Material::from_lambda_alpha(0.3, 0.3).unwrap();
    let m2 = Material::from_lambda_alpha(1.0, 2.0).unwrap();
    for dt in [1e-3, 0.1, 1.0, 10.0] {
        let inp = RateInputs::new(dt, GridSpec1D::new(4, 4).unwrap(), m1, m2).unwrap();
        assert_relative_eq!(sigma_exact(&inp).unwrap(), sigma_schur(&inp).unwrap(), max_relative = 1e-12);
    }
}

#[test]
fn random_sweep_against_direct_schur() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n1 = rng.gen_range(2..200);
        let n2 = rng.gen_range(1..200);
        let dt = 10f64.powf(rng.gen_range(-4.0..4.0));
        let mut mat = || Material::from_lambda_alpha(10f64.powf(rng.gen_range(-2.0..2.0)), 10f64.powf(rng.gen_range(0.0..7.0))).unwrap();
        let (m1, m2) = (mat(), mat());
        let inp = RateInputs::new(dt, GridSpec1D::new(n1, n2).unwrap(), m1, m2).unwrap();
        let a = sigma_exact(&inp).unwrap();
        let b = sigma_schur(&inp).unwrap();
        assert!((a - b).abs() <= 1e-10 * b, "n1={n1} n2={n2} dt={dt}: {a} vs {b}");
        assert!(schur_s2_direct(&inp).unwrap() > 0.0);
        assert_relative_eq!(schur_s1(&inp), schur_s1_direct(&inp).unwrap(), max_relative = 1e-9, epsilon = 1e-300);
    }
}

#[test]
fn zero_first_conductivity_gives_zero_rate() {
    let m1 = Material::from_parts_unchecked(0.0, 1.0, 1.0);
    let inp = RateInputs::new(1.0, GridSpec1D::new(5, 5).unwrap(), m1, preset("steel")).unwrap();
    assert_eq!(sigma_exact(&inp).unwrap(), 0.0);
    assert_eq!(schur_s1(&inp), 0.0);
}

#[test]
fn temporal_limit_is_approached() {
    let inp = RateInputs::from_dx1_r(1e-12, 1.0 / 1100.0, 100.0, preset("air"), preset("steel")).unwrap();
    assert!(sigma_exact(&inp).unwrap() < 1e-6);
}

/// Table value for air-steel at a very fine fluid grid. The discrete rate
/// settles at a level below `lambda_1 / lambda_2`, so this does not hold.
#[test]
fn air_steel_fine_grid_reaches_tabulated_spatial_limit() {
    let inp = RateInputs::from_dx1_r(10.0, 1e-6, 1.0, preset("air"), preset("steel")).unwrap();
    let s = sigma_exact(&inp).unwrap();
    assert!((s / 4.9693e-4 - 1.0).abs() <= 0.01, "sigma = {s:e}, ratio {:.4}", s / 4.9693e-4);
}

#[test]
fn beta_of_identical_materials_is_one() {
    for m in ["air", "water", "steel"] {
        assert_relative_eq!(semidiscrete_beta(1.0, &preset(m), &preset(m)).unwrap(), 1.0, max_relative = 1e-14);
    }
}

#[test]
fn closed_sums_at_scale() {
    for n in [1usize, 9, 100, 1000, 10000] {
        let c = closed_sum_checks(n, 1.0 / (n as f64 + 1.0)).unwrap();
        assert!(c.max_abs_error() <= 1e-10, "n = {n}: {}", c.max_abs_error());
    }
    let c = closed_sum_checks(9, 0.1).unwrap();
    assert_relative_eq!(c.sin2, 5.0, epsilon = 1e-12);
    assert_relative_eq!(c.cos2, 4.0, epsilon = 1e-12);
    assert!(c.cos.abs() < 1e-12);
}
