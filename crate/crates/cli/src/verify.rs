//! `hopfion verify`: the full invariant suite against one configuration.
//! Prints one line per check and exits nonzero if any fails.

use clap::Args;
use hopfion_core::dynamics::k_identity_residual;
use hopfion_core::{
    cal_k, charge_scaling_check, current_divergence, energy_closed, energy_grid, energy_profile,
    energy_reduced, eom_residual, hopf_analytic, hopf_numeric, jet, shape_ode_residual, vk_bound,
    vk_ratio_analytic, CurrentG, GridResolution, HopfResolution, HopfionSolution, RegionSampler,
    Scale, PROFILE_ETA_MAX,
};

use crate::config::{RunConfig, SpecArgs};
use crate::CliError;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, measured: f64, tol: f64) {
        let pass = measured < tol;
        if !pass {
            self.failures += 1;
        }
        println!(
            "{:<44} measured {:>12.3e}  tol {:>8.1e}  {}",
            name,
            measured,
            tol,
            if pass { "PASS" } else { "FAIL" }
        );
    }

    fn check_ge(&mut self, name: &str, measured: f64, limit: f64) {
        let pass = measured >= limit;
        if !pass {
            self.failures += 1;
        }
        println!(
            "{:<44} measured {:>12.3e}  min {:>8.1e}  {}",
            name,
            measured,
            limit,
            if pass { "PASS" } else { "FAIL" }
        );
    }
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.spec)?;
    let spec = cfg.spec()?;
    let (sol, k) = cfg.solution()?;
    let const_q = spec.q_ratio().q_abs();
    if let Some(amp) = cfg.perturb {
        println!(
            "NOTE: profiles perturbed by f -> f (1 + {amp} sin eta); residual checks should fail"
        );
    }

    let mut suite = Suite { failures: 0 };

    // boundary conditions of every profile
    let mut worst_boundary = 0.0_f64;
    for prof in sol.profiles() {
        worst_boundary = worst_boundary
            .max(prof.s(1e-6))
            .max(prof.one_minus_s(PROFILE_ETA_MAX));
    }
    suite.check(
        "boundary conditions (s at 0 / 1 at inf)",
        worst_boundary,
        1e-8,
    );

    // first-order shape equation
    let etas: Vec<f64> = (1..=100).map(|j| 0.08 * j as f64).collect();
    let mut worst_ode = 0.0_f64;
    let mut ode_tol = f64::INFINITY;
    for (j, prof) in sol.profiles().iter().enumerate() {
        worst_ode = worst_ode.max(shape_ode_residual(prof, &spec, &k, j, &etas));
        ode_tol = ode_tol.min(if prof.is_closed_form() { 1e-10 } else { 1e-8 });
    }
    suite.check("shape-equation residual", worst_ode, ode_tol);

    // algebraic identities of the K construction on random smooth fields
    let worst_identity = k_identity_residual(10, 30, 0xc11_0001);
    suite.check(
        "K identities on random smooth fields",
        worst_identity,
        1e-10,
    );

    // the product-weighted currents satisfy the same identities on the solution
    let id_sampler = RegionSampler {
        count: 50,
        ..Default::default()
    };
    let mut worst_cal = 0.0_f64;
    for p in id_sampler.points() {
        for j in 0..spec.n_fields() {
            let kk = cal_k(&sol, j, &p)?;
            let jj = jet(&sol, j, &p)?;
            let mut along_u = num_complex::Complex64::new(0.0, 0.0);
            let mut along_us = num_complex::Complex64::new(0.0, 0.0);
            for (kc, gc) in kk.iter().zip(jj.grad.iter()) {
                along_u += kc * gc;
                along_us += kc * gc.conj();
            }
            let scale = (kk.iter().map(|c| c.norm_sqr()).sum::<f64>()
                * jj.grad.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sqrt()
                + 1e-30;
            worst_cal = worst_cal
                .max(along_u.norm() / scale)
                .max(along_us.im.abs() / scale);
        }
    }
    suite.check("calK identities on the solution", worst_cal, 1e-9);

    // equation of motion and conserved families; the configuration must sit
    // at least a factor ten below its own 1%-distortion probe, which is what
    // separates a solution from a near miss
    let sampler = RegionSampler::default();
    let probe = sol.perturbed(0.01);
    let mut worst_eom = 0.0_f64;
    let mut probe_floor = f64::INFINITY;
    let mut worst_current = 0.0_f64;
    for j in 0..spec.n_fields() {
        worst_eom = worst_eom.max(eom_residual(&sol, j, &sampler, None)?.max_abs_residual);
        probe_floor = probe_floor.min(eom_residual(&probe, j, &sampler, None)?.max_abs_residual);
        for g in [CurrentG::Component(j), CurrentG::ModulusSquared(j)] {
            worst_current = worst_current
                .max(current_divergence(&sol, j, &g, &sampler, None)?.max_abs_residual);
        }
    }
    suite.check(
        "EOM residual |div calK| (all fields)",
        worst_eom,
        (probe_floor / 10.0).min(1e-5),
    );
    suite.check("conserved currents u_i, |u_i|^2", worst_current, 1e-5);

    // energy route agreement
    let e_reduced = energy_reduced(&spec, &k)?;
    let e_profile = energy_profile(&sol)?;
    if let Some(_q) = const_q {
        let e_closed = energy_closed(&spec)?;
        suite.check(
            "route agreement |E_reduced/E_closed - 1|",
            (e_reduced - e_closed).abs() / e_closed,
            1e-8,
        );
        suite.check(
            "route agreement |E_profile/E_closed - 1|",
            (e_profile - e_closed).abs() / e_closed,
            1e-6,
        );
    } else {
        suite.check(
            "route agreement |E_profile/E_reduced - 1|",
            (e_profile - e_reduced).abs() / e_reduced,
            1e-5,
        );
    }

    if !cfg.quick {
        // 3-D grid route
        let res = match cfg.grid.as_deref() {
            Some([ne, nx, np]) => GridResolution {
                n_eta: *ne,
                n_xi: *nx,
                n_phi: *np,
                eta_max: 12.0,
            },
            _ => GridResolution::default(),
        };
        let e_grid = energy_grid(&sol, &res)?;
        let reference = match const_q {
            Some(_) => energy_closed(&spec)?,
            None => e_reduced,
        };
        suite.check(
            "grid route |E_grid/E_ref - 1|",
            (e_grid - reference).abs() / reference,
            1e-3,
        );

        // Hopf charges against -n m
        if const_q.is_some() {
            let hres = HopfResolution {
                n_eta: 128,
                n_xi: 16,
                n_phi: 16,
                eta_max: 15.0,
            };
            let mut worst_q = 0.0_f64;
            for i in 0..spec.n_fields() {
                let (m, n) = spec.winding(i);
                let exact = hopf_analytic(m, n) as f64;
                let q_num = hopf_numeric(&sol, i, &hres)?;
                worst_q = worst_q.max((q_num - exact).abs() / exact.abs());
            }
            suite.check("Hopf charge vs -n m (relative)", worst_q, 0.02);
        }
    }

    if let Some(q) = const_q {
        // topological lower bound
        let charges: Vec<i64> = (0..spec.n_fields())
            .map(|i| {
                let (m, n) = spec.winding(i);
                hopf_analytic(m, n)
            })
            .collect();
        let bound = vk_bound(&spec, &charges);
        let ratio = energy_closed(&spec)? / bound;
        suite.check_ge("energy bound ratio E / bound >= 1", ratio, 1.0);
        suite.check(
            "bound ratio vs sqrt(1+q)/(sqrt(2) q^(1/4))",
            (ratio - vk_ratio_analytic(q)).abs(),
            1e-8,
        );

        // charge scaling
        let scaling = charge_scaling_check(&spec, 4.0)?;
        suite.check(
            "charge scaling lambda=4: |ratio - 4^(3/4)|",
            (scaling.ratio - scaling.expected).abs(),
            1e-10,
        );
    }

    // scale independence of the scale-free routes
    let mut worst_scale = 0.0_f64;
    for a in [0.5, 2.0] {
        let spec_a = spec.with_scale(Scale::new(a)?);
        let e_r = energy_reduced(&spec_a, &k)?;
        worst_scale = worst_scale.max((e_r - e_reduced).abs() / e_reduced);
        if const_q.is_some() {
            let sol_a = HopfionSolution::closed_form(spec_a)?;
            let e_p = match cfg.perturb {
                Some(amp) => energy_profile(&sol_a.perturbed(amp))?,
                None => energy_profile(&sol_a)?,
            };
            worst_scale = worst_scale.max((e_p - e_profile).abs() / e_profile);
        }
    }
    suite.check("scale independence (1-D routes)", worst_scale, 1e-10);

    if suite.failures == 0 {
        println!("all checks PASS");
        Ok(())
    } else {
        Err(CliError::ChecksFailed(suite.failures))
    }
}
