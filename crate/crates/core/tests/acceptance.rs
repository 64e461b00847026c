//! Acceptance suite: every release-gating property of the construction, one
//! test per criterion, each printing a PASS/FAIL line with the measured
//! value against its pinned tolerance.
//!
//! Run with `cargo test -p hopfion-core --test acceptance -- --nocapture`.

use std::time::Instant;

use hopfion_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Winding pairs realising q = 0.25, 0.5, 0.75 with integer windings.
const Q_WINDINGS: [(f64, i64, i64); 3] = [(0.25, 4, 1), (0.5, 2, 1), (0.75, 4, 3)];

/// Spec with `n_fields` fields sharing ratio q: windings (j m, j n) and an
/// even exponent split.
fn const_q_spec(m: i64, n: i64, n_fields: usize) -> ModelSpec {
    let alpha = SCALING_EXPONENT_SUM / n_fields as f64;
    let alphas = vec![alpha; n_fields];
    let ms: Vec<i64> = (1..=n_fields as i64).map(|j| j * m).collect();
    let ns: Vec<i64> = (1..=n_fields as i64).map(|j| j * n).collect();
    ModelSpec::new(alphas, ms, ns, Scale::new(1.0).unwrap()).unwrap()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

#[test]
fn c01_reduced_quadrature_matches_closed_form() {
    let start = Instant::now();
    let tol = 1e-8;
    let mut worst = 0.0_f64;
    for &(_, m, n) in &Q_WINDINGS {
        for fields in 1..=3 {
            let spec = const_q_spec(m, n, fields);
            let (k, _) = integration_constants(&spec).unwrap();
            let e_red = energy_reduced(&spec, &vec![k; fields]).unwrap();
            let e_cl = energy_closed(&spec).unwrap();
            worst = worst.max((e_red - e_cl).abs() / e_cl);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "1",
        worst < tol && elapsed < 1.0,
        &format!(
            "max |E_reduced - E_closed| / E_closed = {worst:.3e} (tol {tol:.0e}), {elapsed:.3} s"
        ),
    );
}

#[test]
fn c02_profile_route_matches_closed_form() {
    let tol = 1e-6;
    let mut worst = 0.0_f64;
    for &(_, m, n) in &Q_WINDINGS {
        for fields in 1..=3 {
            let spec = const_q_spec(m, n, fields);
            let e_cl = energy_closed(&spec).unwrap();
            let sol = HopfionSolution::closed_form(spec).unwrap();
            let e_prof = energy_profile(&sol).unwrap();
            worst = worst.max((e_prof - e_cl).abs() / e_cl);
        }
    }
    report(
        "2",
        worst < tol,
        &format!("max |E_profile - E_closed| / E_closed = {worst:.3e} (tol {tol:.0e})"),
    );
}

#[test]
fn c03_grid_route_agreement_and_prefactor_consistency() {
    let start = Instant::now();
    let tol = 1e-3;
    let res = GridResolution::default(); // 256 x 64 x 8
    let mut ratios = Vec::new();
    let mut worst = 0.0_f64;
    for fields in 1..=2 {
        let spec = const_q_spec(2, 1, fields);
        let e_cl = energy_closed(&spec).unwrap();
        let sol = HopfionSolution::closed_form(spec).unwrap();
        let e_grid = energy_grid(&sol, &res).unwrap();
        worst = worst.max((e_grid - e_cl).abs() / e_cl);
        ratios.push(e_grid / e_cl);
    }
    let ratio_spread = (ratios[0] - ratios[1]).abs();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "3",
        worst < tol && ratio_spread < tol && elapsed < 60.0,
        &format!(
            "max |E_grid - E_closed| / E_closed = {worst:.3e}, ratio spread = {ratio_spread:.3e} \
             (tol {tol:.0e}), {elapsed:.1} s"
        ),
    );
}

#[test]
fn c04_closed_profile_satisfies_the_shape_equation() {
    // adjudicates the square-root form of the closed profile: the rootless
    // variant is off at order one and violates s in [0, 1]
    let tol = 1e-10;
    let mut worst = 0.0_f64;
    for (q, m, n) in [(0.2, 5i64, 1i64), (0.5, 2, 1), (0.8, 5, 4)] {
        let spec = ModelSpec::new(vec![0.75], vec![m], vec![n], Scale::new(1.0).unwrap()).unwrap();
        let (k, _) = integration_constants(&spec).unwrap();
        let profile = closed_form_profile(q).unwrap();
        let etas: Vec<f64> = (0..200)
            .map(|i| 10f64.powf(-2.0 + 3.0 * i as f64 / 199.0))
            .collect();
        worst = worst.max(shape_ode_residual(&profile, &spec, &[k], 0, &etas));
    }
    report(
        "4",
        worst < tol,
        &format!(
            "max shape-equation residual over 200 log-spaced eta = {worst:.3e} (tol {tol:.0e})"
        ),
    );
}

#[test]
fn c05_k_identities_on_arbitrary_smooth_fields() {
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0005);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let field = PolynomialField::random(&mut rng);
        for _ in 0..50 {
            let p = CartesianPoint::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let grad = field.grad(&p);
            let (kdu, kdus) = k_contractions(&grad);
            let scale = {
                let k = k_vector(&grad);
                let k_norm = (k.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
                let g_norm = (grad.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
                k_norm * g_norm + 1e-30
            };
            worst = worst.max(kdu.norm() / scale);
            worst = worst.max(kdus.im.abs() / scale);
        }
    }
    report(
        "5",
        worst < tol,
        &format!("max normalised identity violation = {worst:.3e} (tol {tol:.0e})"),
    );
}

#[test]
fn c06_eom_conservation_and_current_families() {
    let tol = 1e-5;
    let spec = ModelSpec::new(
        vec![0.375, 0.375],
        vec![2, 4],
        vec![1, 2],
        Scale::new(1.0).unwrap(),
    )
    .unwrap();
    let sol = HopfionSolution::closed_form(spec).unwrap();
    let perturbed = sol.perturbed(0.01);
    let sampler = RegionSampler::default();

    let mut failures = Vec::new();
    let mut lines = Vec::new();

    for j in 0..2 {
        let clean = eom_residual(&sol, j, &sampler, None)
            .unwrap()
            .max_abs_residual;
        let dirty = eom_residual(&perturbed, j, &sampler, None)
            .unwrap()
            .max_abs_residual;
        lines.push(format!(
            "field {}: |div calK| residual {clean:.3e} (perturbed {dirty:.3e}, x{:.0})",
            j + 1,
            dirty / clean
        ));
        if clean >= tol {
            failures.push(format!("EOM residual field {} = {clean:.3e}", j + 1));
        }
        if dirty < 10.0 * clean {
            failures.push(format!(
                "perturbation sensitivity field {}: {dirty:.3e} < 10 x {clean:.3e}",
                j + 1
            ));
        }
    }

    for (i, g) in [
        (0, CurrentG::Component(0)),
        (0, CurrentG::ModulusSquared(0)),
        (1, CurrentG::ModulusSquared(1)),
        (0, CurrentG::Pair(0, 1)),
    ] {
        let r = current_divergence(&sol, i, &g, &sampler, None)
            .unwrap()
            .max_abs_residual;
        lines.push(format!("current {}: residual {r:.3e}", g.describe()));
        if r >= tol {
            failures.push(format!("current {} residual = {r:.3e}", g.describe()));
        }
    }

    let pass = failures.is_empty();
    println!(
        "criterion 6: {} - tol {tol:.0e}; {}",
        if pass { "PASS" } else { "FAIL" },
        lines.join("; ")
    );
    assert!(
        pass,
        "criterion 6: {}  [the u_1 u_2* family is not conserved: its divergence \
         calK . grad u_2* is nonzero on the solution by direct computation, so only \
         generators built from a current's own field pass]",
        failures.join("; ")
    );
}

#[test]
fn c07_hopf_charge_converges_to_minus_nm() {
    let tol = 0.02;
    let mut all_pass = true;
    let mut details = Vec::new();
    for (m, n) in [(2i64, 1i64), (3, 2)] {
        let start = Instant::now();
        let spec = ModelSpec::new(vec![0.75], vec![m], vec![n], Scale::new(1.0).unwrap()).unwrap();
        let sol = HopfionSolution::closed_form(spec).unwrap();
        let exact = hopf_analytic(m, n) as f64;
        let coarse = hopf_numeric(
            &sol,
            0,
            &HopfResolution {
                n_eta: 64,
                n_xi: 32,
                n_phi: 32,
                eta_max: 15.0,
            },
        )
        .unwrap();
        let fine = hopf_numeric(&sol, 0, &HopfResolution::default()).unwrap(); // 128 x 64 x 64
        let err_coarse = (coarse - exact).abs() / exact.abs();
        let err_fine = (fine - exact).abs() / exact.abs();
        let elapsed = start.elapsed().as_secs_f64();
        let ok = err_fine < tol && err_fine < err_coarse && elapsed < 120.0;
        all_pass &= ok;
        details.push(format!(
            "({m},{n}): Q = {fine:.4} vs {exact} (rel err {err_fine:.3e}, coarse {err_coarse:.3e}), {elapsed:.1} s"
        ));
    }
    report("7", all_pass, &format!("tol 2%; {}", details.join("; ")));
}

#[test]
fn c08_vk_inequality_and_analytic_ratio() {
    let tol = 1e-8;
    let mut worst = 0.0_f64;
    let mut min_ratio = f64::INFINITY;
    for i in 1..=50 {
        // q = i / 51 realised exactly by windings (51, i)
        let spec = ModelSpec::new(vec![0.75], vec![51], vec![i], Scale::new(1.0).unwrap()).unwrap();
        let q = i as f64 / 51.0;
        let e = energy_closed(&spec).unwrap();
        let (m, n) = spec.winding(0);
        let bound = vk_bound(&spec, &[hopf_analytic(m, n)]);
        let ratio = e / bound;
        min_ratio = min_ratio.min(ratio);
        worst = worst.max((ratio - vk_ratio_analytic(q)).abs());
    }
    // all-equal charges reduce to the standard single-charge bound
    let spec_eq = ModelSpec::new(
        vec![0.375, 0.375],
        vec![2, 2],
        vec![1, 1],
        Scale::new(1.0).unwrap(),
    )
    .unwrap();
    let standard = (std::f64::consts::TAU).powi(2) * 4.0 * 2.0_f64.powf(0.75) * 2.0_f64.powf(0.75);
    let reduction_err = (vk_bound(&spec_eq, &[-2, -2]) - standard).abs() / standard;
    report(
        "8",
        min_ratio >= 1.0 && worst < tol && reduction_err < 1e-12,
        &format!(
            "min ratio {min_ratio:.6} >= 1, max |ratio - sqrt(1+q)/(sqrt(2) q^(1/4))| = {worst:.3e} \
             (tol {tol:.0e}), equal-charge reduction err {reduction_err:.1e}"
        ),
    );
}

#[test]
fn c09_scale_and_charge_scaling() {
    let tol_exact = 1e-10;
    let tol_grid = 1e-3;
    let res = GridResolution {
        n_eta: 96,
        n_xi: 16,
        n_phi: 4,
        eta_max: 12.0,
    };

    let mut worst_exact = 0.0_f64;
    let mut worst_grid = 0.0_f64;
    let base = ModelSpec::new(vec![0.75], vec![2], vec![1], Scale::new(1.0).unwrap()).unwrap();
    let e_closed_ref = energy_closed(&base).unwrap();
    let (k, _) = integration_constants(&base).unwrap();
    let e_reduced_ref = energy_reduced(&base, &[k]).unwrap();
    let sol_ref = HopfionSolution::closed_form(base.clone()).unwrap();
    let e_profile_ref = energy_profile(&sol_ref).unwrap();
    let e_grid_ref = energy_grid(&sol_ref, &res).unwrap();
    for a in [0.5, 2.0] {
        let spec = base.with_scale(Scale::new(a).unwrap());
        let sol = HopfionSolution::closed_form(spec.clone()).unwrap();
        worst_exact =
            worst_exact.max((energy_closed(&spec).unwrap() - e_closed_ref).abs() / e_closed_ref);
        worst_exact = worst_exact
            .max((energy_reduced(&spec, &[k]).unwrap() - e_reduced_ref).abs() / e_reduced_ref);
        worst_exact =
            worst_exact.max((energy_profile(&sol).unwrap() - e_profile_ref).abs() / e_profile_ref);
        worst_grid =
            worst_grid.max((energy_grid(&sol, &res).unwrap() - e_grid_ref).abs() / e_grid_ref);
    }

    let scaling = charge_scaling_check(&base, 4.0).unwrap();
    let lambda_err = (scaling.ratio - scaling.expected).abs();
    let unit = charge_scaling_check(&base, 1.0).unwrap();
    let unit_err = (unit.ratio - 1.0).abs();

    report(
        "9",
        worst_exact < tol_exact && worst_grid < tol_grid && lambda_err < tol_exact && unit_err < tol_exact,
        &format!(
            "scale spread: exact routes {worst_exact:.3e} (tol {tol_exact:.0e}), grid {worst_grid:.3e} \
             (tol {tol_grid:.0e}); charge scaling lambda=4: |ratio - 4^(3/4)| = {lambda_err:.3e}"
        ),
    );
}

#[test]
fn c10_boundary_conditions_and_unit_norm() {
    let tol_pole = 1e-8;
    let tol_norm = 1e-12;
    let mut worst_pole = 0.0_f64;
    let mut worst_norm = 0.0_f64;
    for &(q, m, n) in &Q_WINDINGS {
        let _ = q;
        let spec = const_q_spec(m, n, 2);
        let sol = HopfionSolution::closed_form(spec).unwrap();
        for field in 0..2 {
            // eta -> 0: n -> (0, 0, 1)
            let p = ToroidalPoint::new(1e-10, 0.7, 1.3).unwrap();
            let v = sol.eval_n(field, &p);
            worst_pole =
                worst_pole.max((v[0].powi(2) + v[1].powi(2) + (v[2] - 1.0).powi(2)).sqrt());
            // eta -> infinity: n -> (0, 0, -1)
            let p = ToroidalPoint::new(25.0, -0.4, 2.9).unwrap();
            let v = sol.eval_n(field, &p);
            worst_pole =
                worst_pole.max((v[0].powi(2) + v[1].powi(2) + (v[2] + 1.0).powi(2)).sqrt());
            // |n| = 1 everywhere, extremes included
            let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0010);
            for _ in 0..2000 {
                let p = ToroidalPoint::new(
                    rng.gen_range(0.0..20.0),
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
                .unwrap();
                let v = sol.eval_n(field, &p);
                worst_norm =
                    worst_norm.max(((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs());
            }
        }
    }
    report(
        "10",
        worst_pole < tol_pole && worst_norm < tol_norm,
        &format!(
            "max pole deviation = {worst_pole:.3e} (tol {tol_pole:.0e}), \
             max ||n| - 1| = {worst_norm:.3e} (tol {tol_norm:.0e})"
        ),
    );
}

/// Cross-check kept alongside the criteria: the field reconstructed from the
/// CP^1 lift agrees with the stereographic evaluation everywhere sampled.
#[test]
fn lift_consistency_spot_check() {
    let spec = ModelSpec::new(vec![0.75], vec![2], vec![1], Scale::new(1.0).unwrap()).unwrap();
    let sol = HopfionSolution::closed_form(spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0011);
    for _ in 0..200 {
        let p = ToroidalPoint::new(
            rng.gen_range(0.05..4.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )
        .unwrap();
        let lift = cp1_lift(&sol, 0, &p).unwrap();
        let from_lift = lift.unit_vector();
        let direct = sol.eval_n(0, &p);
        for c in 0..3 {
            assert!((from_lift[c] - direct[c]).abs() < 1e-10);
        }
        let u_lift = u_from_unit_vector(from_lift);
        let u_direct = sol.eval_u(0, &p).unwrap();
        assert!((u_lift - u_direct).norm() < 1e-9 * (1.0 + u_direct.norm()));
    }
}
