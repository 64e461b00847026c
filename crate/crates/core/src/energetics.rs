//! Total energy by independent routes: closed form, reduced 1-D quadrature
//! with the shape functions eliminated, quadrature over the constructed
//! profiles, and a full 3-D grid over the toroidal chart.
//!
//! On the constant-ratio branch all four must agree; their mutual spreads
//! are the main correctness probe of the whole construction. Energies are
//! dimensionless (the model is scale invariant, so no unit enters).

use rayon::prelude::*;

use crate::ansatz::{HopfionSolution, ModelSpec, PROFILE_ETA_MAX};
use crate::dynamics::{jet_all, k_contractions};
use crate::error::{Error, Result};
use crate::quad;
use crate::toroidal::{volume_weight, ToroidalPoint};

const TWO_PI: f64 = std::f64::consts::TAU;

/// (2 pi)^2 * 4 * 2^(1/4): prefactor of the closed-form energy and of the
/// reduced quadrature when the integration constants are normalised so that
/// the quadrature form of the general solution meets the soliton boundary
/// conditions (the convention used throughout this crate).
fn closed_prefactor() -> f64 {
    TWO_PI * TWO_PI * 4.0 * 2.0_f64.powf(0.25)
}

/// (2 pi)^2 * 8 * 2^(3/4): prefactor of the profile-route energy integral.
fn profile_prefactor() -> f64 {
    TWO_PI * TWO_PI * 8.0 * 2.0_f64.powf(0.75)
}

/// Closed-form energy of the constant-ratio branch:
/// `E = (2 pi)^2 4 * 2^(1/4) prod_i |m_i|^(2 alpha_i) sqrt(1 + |q|) sqrt(|q|)`.
pub fn energy_closed(spec: &ModelSpec) -> Result<f64> {
    let q = spec.q_ratio().q_abs().ok_or(Error::NonConstantRatio)?;
    if q >= 1.0 {
        return Err(Error::UnsupportedBranch { q_abs: q });
    }
    Ok(closed_prefactor() * spec.prod_m_pow_2alpha() * ((1.0 + q) * q).sqrt())
}

/// Reduced-route integrand with the endpoint-regular grouping
/// `sinh(eta) prod_i (m_i^2 sinh^2 eta + n_i^2)^(-2 alpha_i)`;
/// it vanishes linearly at eta = 0 and decays like exp(-2 eta).
fn reduced_integrand(spec: &ModelSpec) -> impl Fn(f64) -> f64 + '_ {
    move |eta: f64| {
        let sh = eta.sinh();
        let sh2 = sh * sh;
        let mut prod = sh;
        for i in 0..spec.n_fields() {
            let (m, n) = spec.winding(i);
            let m2 = (m * m) as f64;
            let n2 = (n * n) as f64;
            prod *= (m2 * sh2 + n2).powf(-2.0 * spec.alpha(i));
        }
        prod
    }
}

/// Energy with the shape functions eliminated through the first-order
/// equation: a single quadrature valid for arbitrary windings,
/// `E = (2 pi)^2 4 * 2^(1/4) * prod_i k_i^(4 alpha_i) * int_0^inf ...`.
pub fn energy_reduced(spec: &ModelSpec, k: &[f64]) -> Result<f64> {
    if k.len() != spec.n_fields() {
        return Err(Error::ShapeMismatch {
            detail: format!("{} constants for {} fields", k.len(), spec.n_fields()),
        });
    }
    if let Some(&bad) = k.iter().find(|&&ki| !(ki.is_finite() && ki > 0.0)) {
        return Err(Error::InvalidProfile {
            detail: format!("integration constants must be positive, got {bad}"),
        });
    }
    let lambda: f64 = k
        .iter()
        .zip(spec.alphas())
        .map(|(&ki, &a)| ki.powf(4.0 * a))
        .product();
    let f = reduced_integrand(spec);
    let head = quad::adaptive(&f, 0.0, PROFILE_ETA_MAX, 1e-11, 1e-300)?;
    let tail = quad::adaptive_to_infinity(&f, PROFILE_ETA_MAX, 1e-8, 1e-300)?;
    Ok(closed_prefactor() * lambda * (head.value + tail.value))
}

/// Per-field factor of the eta-reduced energy density in the s-variable:
/// `(f f')^2 / (1+f^2)^4 * (m^2 + n^2/sinh^2) = (m s'/2)^2 + (n/2)^2 (s'/sinh)^2`.
fn profile_field_factor(sol: &HopfionSolution, i: usize, eta: f64) -> f64 {
    let prof = sol.profile(i);
    let (m, n) = sol.spec().winding(i);
    let a = 0.5 * m as f64 * prof.ds(eta);
    let b = 0.5 * n as f64 * prof.ds_over_sinh(eta);
    a * a + b * b
}

/// Energy integrated over the constructed shape profiles:
/// `E = (2 pi)^2 8 * 2^(3/4) int sinh(eta) prod_i [field factor]^(alpha_i)`.
pub fn energy_profile(sol: &HopfionSolution) -> Result<f64> {
    let spec = sol.spec();
    let f = |eta: f64| {
        let mut prod = eta.sinh();
        for i in 0..spec.n_fields() {
            prod *= profile_field_factor(sol, i, eta).powf(spec.alpha(i));
        }
        prod
    };
    let head = quad::adaptive(&f, 0.0, PROFILE_ETA_MAX, 1e-10, 1e-300)?;
    let tail = quad::adaptive_to_infinity(&f, PROFILE_ETA_MAX, 1e-8, 1e-300)?;
    Ok(profile_prefactor() * (head.value + tail.value))
}

/// Static energy density at a point, in the cancellation-free s-form
/// `8^(3/4) (tau/a)^3 prod_i [(m_i s_i')^2 + n_i^2 (s_i'/sinh)^2]^(alpha_i)`.
/// Finite everywhere including the axis and the focal ring.
pub fn energy_density(sol: &HopfionSolution, p: &ToroidalPoint) -> f64 {
    let spec = sol.spec();
    let inv_h = p.tau() / spec.scale().get();
    let mut density = 8.0_f64.powf(0.75) * inv_h.powi(3);
    for i in 0..spec.n_fields() {
        density *= (4.0 * profile_field_factor(sol, i, p.eta)).powf(spec.alpha(i));
    }
    density
}

/// Resolution of the 3-D grid route.
#[derive(Debug, Clone, Copy)]
pub struct GridResolution {
    pub n_eta: usize,
    pub n_xi: usize,
    pub n_phi: usize,
    pub eta_max: f64,
}

impl Default for GridResolution {
    fn default() -> Self {
        // the energy density decays like exp(-2 eta); a 12-wide window keeps
        // the truncation below 1e-12 relative while the midpoint nodes
        // resolve the support
        GridResolution {
            n_eta: 256,
            n_xi: 64,
            n_phi: 8,
            eta_max: 12.0,
        }
    }
}

/// Energy density from the K-contractions of the jets (the full field-theory
/// route); errors if a fractional-power base stops being real positive.
pub fn grid_density(sol: &HopfionSolution, p: &ToroidalPoint) -> Result<f64> {
    let spec = sol.spec();
    let jets = jet_all(sol, p)?;
    let mut density = 8.0_f64.powf(0.75);
    for (i, jet_i) in jets.iter().enumerate() {
        let (_, kdus) = k_contractions(&jet_i.grad);
        if kdus.im.abs() > 1e-10 * kdus.re.abs().max(1e-300) {
            return Err(Error::NonPositiveEnergyFactor { value: kdus.im });
        }
        if kdus.re <= 0.0 {
            return Err(Error::NonPositiveEnergyFactor { value: kdus.re });
        }
        let s = sol.profile(i).s(p.eta);
        density *= kdus.re.powf(spec.alpha(i)) * s.powf(4.0 * spec.alpha(i));
    }
    Ok(density)
}

/// Full 3-D product quadrature of the field-theory energy density over the
/// toroidal chart (midpoint in eta, uniform periodic grids in the angles).
/// Rows are reduced in index order, so the value is independent of the
/// number of worker threads.
pub fn energy_grid(sol: &HopfionSolution, res: &GridResolution) -> Result<f64> {
    let h_eta = res.eta_max / res.n_eta as f64;
    let w_xi = TWO_PI / res.n_xi as f64;
    let w_phi = TWO_PI / res.n_phi as f64;
    let scale = sol.spec().scale();

    let rows: Result<Vec<f64>> = (0..res.n_eta)
        .into_par_iter()
        .map(|ie| {
            let eta = (ie as f64 + 0.5) * h_eta;
            let mut row = 0.0;
            for ix in 0..res.n_xi {
                let xi = -std::f64::consts::PI + (ix as f64 + 0.5) * w_xi;
                for ip in 0..res.n_phi {
                    let phi = (ip as f64 + 0.5) * w_phi;
                    let p = ToroidalPoint { eta, xi, phi };
                    let d = grid_density(sol, &p)?;
                    row += d * volume_weight(&p, scale);
                }
            }
            Ok(row * h_eta * w_xi * w_phi)
        })
        .collect();
    Ok(quad::pairwise_sum(&rows?))
}

/// Energy of the non-interacting sum model: each field carries the full
/// exponent 3/4 on its own, so the total is the sum of single-field
/// closed-form energies.
pub fn energy_sum_model(windings: &[(i64, i64)]) -> Result<f64> {
    let mut total = 0.0;
    for &(m, n) in windings {
        if m == 0 || n == 0 {
            return Err(Error::ZeroWinding { index: 0 });
        }
        let q = (n as f64 / m as f64).abs();
        if q >= 1.0 {
            return Err(Error::UnsupportedBranch { q_abs: q });
        }
        total += closed_prefactor() * (m.unsigned_abs() as f64).powf(1.5) * ((1.0 + q) * q).sqrt();
    }
    Ok(total)
}

/// Energies by every applicable route plus their relative spreads.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub e_closed: Option<f64>,
    pub e_reduced: f64,
    pub e_profile: f64,
    pub e_grid: Option<f64>,
    pub spread_reduced_closed: Option<f64>,
    pub spread_profile_closed: Option<f64>,
    pub spread_grid_closed: Option<f64>,
    pub spread_profile_reduced: f64,
}

impl EnergyReport {
    /// Evaluate all routes; the grid route runs only when a resolution is
    /// supplied (it is the expensive one).
    pub fn compute(sol: &HopfionSolution, grid: Option<&GridResolution>) -> Result<Self> {
        let spec = sol.spec();
        let e_closed = match energy_closed(spec) {
            Ok(v) => Some(v),
            Err(Error::NonConstantRatio) | Err(Error::UnsupportedBranch { .. }) => None,
            Err(e) => return Err(e),
        };
        let k: Vec<f64> = sol.profiles().iter().map(|p| p.constants().0).collect();
        let e_reduced = energy_reduced(spec, &k)?;
        let e_profile = energy_profile(sol)?;
        let e_grid = match grid {
            Some(res) => Some(energy_grid(sol, res)?),
            None => None,
        };
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
        Ok(EnergyReport {
            spread_reduced_closed: e_closed.map(|ec| rel(e_reduced, ec)),
            spread_profile_closed: e_closed.map(|ec| rel(e_profile, ec)),
            spread_grid_closed: match (e_grid, e_closed) {
                (Some(g), Some(ec)) => Some(rel(g, ec)),
                _ => None,
            },
            spread_profile_reduced: rel(e_profile, e_reduced),
            e_closed,
            e_reduced,
            e_profile,
            e_grid,
        })
    }
}
