//! K-tensors, equation-of-motion currents and residual-based verification.
//!
//! For a static field all contractions are Euclidean spatial ones:
//!
//! ```text
//! K_k = (grad u* . grad u) d_k u - (grad u . grad u) d_k u*
//! ```
//!
//! which satisfies, for any smooth field, the algebraic identities
//! `K . grad u = 0` and `Im(K . grad u*) = 0`; `K . grad u*` equals
//! `|grad u|^4 - |grad u . grad u|^2 >= 0` and is the per-field energy
//! factor. The sign convention (positive spatial contraction) is pinned by
//! positivity of the energy density.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::HopfionSolution;
use crate::error::{Error, Result};
use crate::toroidal::{frame, scale_factors, to_toroidal, CartesianPoint, ToroidalPoint};

/// Fields evaluated closer to the axis than this have essentially divergent
/// gradients; jets refuse to evaluate there.
pub const MIN_JET_ETA: f64 = 1e-6;

/// Default finite-difference step in units of the scale `a`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

type C3 = [Complex64; 3];

/// Value and orthonormal-frame gradient of one complex field at a point.
#[derive(Debug, Clone, Copy)]
pub struct FieldJet {
    pub u: Complex64,
    /// (eta, xi, phi) orthonormal-frame components of grad u.
    pub grad: C3,
}

impl FieldJet {
    /// Gradient rotated into Cartesian components.
    pub fn grad_cartesian(&self, fr: &crate::toroidal::Frame) -> C3 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let basis = [fr.e_eta, fr.e_xi, fr.e_phi];
        for (frame_c, e) in self.grad.iter().zip(basis.iter()) {
            for (o, ec) in out.iter_mut().zip(e.iter()) {
                *o += frame_c * ec;
            }
        }
        out
    }
}

/// Analytic jet of field `i` at a toroidal point.
pub fn jet(sol: &HopfionSolution, i: usize, p: &ToroidalPoint) -> Result<FieldJet> {
    if p.eta < MIN_JET_ETA {
        return Err(Error::AxisPoint { eta: p.eta });
    }
    let prof = sol.profile(i);
    let s = prof.s(p.eta);
    if s <= 0.0 {
        return Err(Error::AxisPoint { eta: p.eta });
    }
    let f = (prof.one_minus_s(p.eta) / s).sqrt();
    let fp = -prof.ds(p.eta) / (2.0 * f * s * s);
    let (m, n) = sol.spec().winding(i);
    let sf = scale_factors(p, sol.spec().scale());
    let phase = Complex64::from_polar(1.0, sol.phase(i, p));
    let i_unit = Complex64::new(0.0, 1.0);
    Ok(FieldJet {
        u: f * phase,
        grad: [
            phase * (fp / sf.h_eta),
            i_unit * phase * (m as f64 * f / sf.h_xi),
            i_unit * phase * (n as f64 * f / sf.h_phi),
        ],
    })
}

pub fn jet_all(sol: &HopfionSolution, p: &ToroidalPoint) -> Result<Vec<FieldJet>> {
    (0..sol.spec().n_fields()).map(|i| jet(sol, i, p)).collect()
}

fn dot(a: &C3, b: &C3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn conj3(a: &C3) -> C3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

pub fn vec_norm(a: &C3) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

/// The K-vector of one field, from any complex gradient (not only jets of a
/// solution; the identities below hold for arbitrary smooth fields).
pub fn k_vector(grad: &C3) -> C3 {
    let a: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
    let b: Complex64 = grad.iter().map(|g| g * g).sum();
    [
        a * grad[0] - b * grad[0].conj(),
        a * grad[1] - b * grad[1].conj(),
        a * grad[2] - b * grad[2].conj(),
    ]
}

/// K . grad u (identically zero) and K . grad u* (real, non-negative).
pub fn k_contractions(grad: &C3) -> (Complex64, Complex64) {
    let k = k_vector(grad);
    (dot(&k, grad), dot(&k, &conj3(grad)))
}

/// Real positive energy factor K . grad u* = A^2 - |B|^2, computed directly
/// in real arithmetic.
pub fn energy_factor(grad: &C3) -> f64 {
    let a: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
    let b: Complex64 = grad.iter().map(|g| g * g).sum();
    a * a - b.norm_sqr()
}

/// Relative tolerance on the imaginary part of quantities raised to
/// fractional powers.
const IMAG_TOL: f64 = 1e-10;

/// The product-weighted current of field `j`,
/// `calK_j = [prod_{i != j} h_i^{alpha_i}] (K_j . grad u_j*)^{alpha_j - 1}
///            / (1 + |u_j|^2)^{4 alpha_j - 2} * K_j`,
/// with `h_i = (K_i . grad u_i*) / (1 + |u_i|^2)^4`. The fractional powers
/// act on factors that are checked to be real and positive.
pub fn cal_k(sol: &HopfionSolution, j: usize, p: &ToroidalPoint) -> Result<C3> {
    let jets = jet_all(sol, p)?;
    cal_k_from_jets(sol, j, p, &jets)
}

fn cal_k_from_jets(
    sol: &HopfionSolution,
    j: usize,
    p: &ToroidalPoint,
    jets: &[FieldJet],
) -> Result<C3> {
    let spec = sol.spec();
    let mut scalar = 1.0_f64;
    for (i, jet_i) in jets.iter().enumerate() {
        // complex contraction with an explicit reality check before powf
        let (_, kdu_star) = k_contractions(&jet_i.grad);
        if kdu_star.im.abs() > IMAG_TOL * kdu_star.re.abs().max(1e-300) {
            return Err(Error::NonPositiveEnergyFactor { value: kdu_star.im });
        }
        let factor = kdu_star.re;
        if factor <= 0.0 {
            return Err(Error::NonPositiveEnergyFactor { value: factor });
        }
        let alpha = spec.alpha(i);
        let s_i = sol.profile(i).s(p.eta);
        if i == j {
            scalar *= factor.powf(alpha - 1.0) * s_i.powf(4.0 * alpha - 2.0);
        } else {
            scalar *= factor.powf(alpha) * s_i.powf(4.0 * alpha);
        }
    }
    let kj = k_vector(&jets[j].grad);
    Ok([scalar * kj[0], scalar * kj[1], scalar * kj[2]])
}

/// calK of field `j` in Cartesian components at a Cartesian point.
pub fn cal_k_cartesian(sol: &HopfionSolution, j: usize, c: &CartesianPoint) -> Result<C3> {
    let p = to_toroidal(c, sol.spec().scale())?;
    let k = cal_k(sol, j, &p)?;
    let fr = frame(&p);
    Ok(rotate(&k, &fr))
}

fn rotate(v: &C3, fr: &crate::toroidal::Frame) -> C3 {
    let basis = [fr.e_eta, fr.e_xi, fr.e_phi];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (comp, e) in v.iter().zip(basis.iter()) {
        for (o, ec) in out.iter_mut().zip(e.iter()) {
            *o += comp * ec;
        }
    }
    out
}

/// Deterministic sampler of toroidal points in a band of eta, used by the
/// residual checks. A fixed seed makes every report reproducible.
#[derive(Debug, Clone)]
pub struct RegionSampler {
    pub eta_range: (f64, f64),
    pub count: usize,
    pub seed: u64,
}

impl Default for RegionSampler {
    fn default() -> Self {
        RegionSampler {
            eta_range: (0.35, 2.5),
            count: 100,
            seed: 0x7042_1137,
        }
    }
}

impl RegionSampler {
    pub fn points(&self) -> Vec<ToroidalPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count)
            .map(|_| {
                ToroidalPoint::new(
                    rng.gen_range(self.eta_range.0..self.eta_range.1),
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
                .expect("sampler ranges are valid")
            })
            .collect()
    }
}

/// Outcome of a divergence check: the largest finite-difference divergence
/// over the sample, normalised by max |field| / h.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub sample_points: usize,
    pub worst_point: ToroidalPoint,
    /// Residual recomputed with half the step; when it stops shrinking the
    /// stencil has hit the roundoff floor.
    pub residual_at_half_step: f64,
}

fn divergence_fd<F>(field: &F, c: &CartesianPoint, h: f64) -> Result<Complex64>
where
    F: Fn(&CartesianPoint) -> Result<C3>,
{
    let mut div = Complex64::new(0.0, 0.0);
    for axis in 0..3 {
        let mut plus = *c;
        let mut minus = *c;
        match axis {
            0 => {
                plus.x += h;
                minus.x -= h;
            }
            1 => {
                plus.y += h;
                minus.y -= h;
            }
            _ => {
                plus.z += h;
                minus.z -= h;
            }
        }
        let fp = field(&plus)?;
        let fm = field(&minus)?;
        div += (fp[axis] - fm[axis]) / (2.0 * h);
    }
    Ok(div)
}

fn divergence_residual<F>(
    field: &F,
    points: &[ToroidalPoint],
    scale: crate::toroidal::Scale,
    h: f64,
) -> Result<ResidualReport>
where
    F: Fn(&CartesianPoint) -> Result<C3>,
{
    if h <= 100.0 * f64::EPSILON * scale.get() {
        return Err(Error::StepTooSmall { h });
    }
    let mut report = ResidualReport {
        max_abs_residual: 0.0,
        sample_points: points.len(),
        worst_point: points[0],
        residual_at_half_step: 0.0,
    };
    let mut max_div = 0.0_f64;
    let mut max_div_half = 0.0_f64;
    let mut max_mag = 0.0_f64;
    for p in points {
        let c = crate::toroidal::to_cartesian(p, scale)?;
        let mag = vec_norm(&field(&c)?);
        let div = divergence_fd(field, &c, h)?.norm();
        let div_half = divergence_fd(field, &c, 0.5 * h)?.norm();
        if div > max_div {
            max_div = div;
            report.worst_point = *p;
        }
        max_div_half = max_div_half.max(div_half);
        max_mag = max_mag.max(mag);
    }
    report.max_abs_residual = max_div * h / max_mag;
    report.residual_at_half_step = max_div_half * (0.5 * h) / max_mag;
    Ok(report)
}

/// Finite-difference check of the field equation `div calK_j = 0`.
///
/// The residual is `max |div calK| * h / max |calK|`, so a field whose
/// components change by order one across the stencil scores about 1.
pub fn eom_residual(
    sol: &HopfionSolution,
    j: usize,
    sampler: &RegionSampler,
    h_step: Option<f64>,
) -> Result<ResidualReport> {
    let scale = sol.spec().scale();
    let h = h_step.unwrap_or(DEFAULT_FD_STEP * scale.get());
    let field = |c: &CartesianPoint| cal_k_cartesian(sol, j, c);
    divergence_residual(&field, &sampler.points(), scale, h)
}

/// Generators for the conserved-current family of field `i`: polynomials in
/// the field values up to degree two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentG {
    /// G = u_t
    Component(usize),
    /// G = |u_t|^2
    ModulusSquared(usize),
    /// G = u_a u_b*
    Pair(usize, usize),
}

impl CurrentG {
    pub fn describe(&self) -> String {
        match self {
            CurrentG::Component(t) => format!("u_{}", t + 1),
            CurrentG::ModulusSquared(t) => format!("|u_{}|^2", t + 1),
            CurrentG::Pair(a, b) => format!("u_{} u_{}*", a + 1, b + 1),
        }
    }

    fn dg_du(&self, i: usize, us: &[Complex64]) -> Complex64 {
        match *self {
            CurrentG::Component(t) if i == t => Complex64::new(1.0, 0.0),
            CurrentG::ModulusSquared(t) if i == t => us[t].conj(),
            CurrentG::Pair(a, b) if i == a => us[b].conj(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    fn dg_dustar(&self, i: usize, us: &[Complex64]) -> Complex64 {
        match *self {
            CurrentG::ModulusSquared(t) if i == t => us[t],
            CurrentG::Pair(a, b) if i == b => us[a],
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Current of the family generated by `g` for field `i`:
/// `J = calK_i dG/du_i - calK_i* dG/du_i*`, evaluated in Cartesian
/// components at a Cartesian point.
pub fn current_cartesian(
    sol: &HopfionSolution,
    i: usize,
    g: &CurrentG,
    c: &CartesianPoint,
) -> Result<C3> {
    let p = to_toroidal(c, sol.spec().scale())?;
    let jets = jet_all(sol, &p)?;
    let us: Vec<Complex64> = jets.iter().map(|j| j.u).collect();
    let k = cal_k_from_jets(sol, i, &p, &jets)?;
    let fr = frame(&p);
    let kc = rotate(&k, &fr);
    let gu = g.dg_du(i, &us);
    let gus = g.dg_dustar(i, &us);
    Ok([
        kc[0] * gu - kc[0].conj() * gus,
        kc[1] * gu - kc[1].conj() * gus,
        kc[2] * gu - kc[2].conj() * gus,
    ])
}

/// Divergence residual of the family current, same normalisation as
/// [`eom_residual`].
pub fn current_divergence(
    sol: &HopfionSolution,
    i: usize,
    g: &CurrentG,
    sampler: &RegionSampler,
    h_step: Option<f64>,
) -> Result<ResidualReport> {
    let scale = sol.spec().scale();
    let h = h_step.unwrap_or(DEFAULT_FD_STEP * scale.get());
    let field = |c: &CartesianPoint| current_cartesian(sol, i, g, c);
    divergence_residual(&field, &sampler.points(), scale, h)
}

/// Worst normalised violation of the K identities over a seeded family of
/// random polynomial fields. The identities are algebraic, so the result is
/// roundoff-sized for any smooth field, solution or not.
pub fn k_identity_residual(n_fields: usize, points_per_field: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n_fields {
        let field = PolynomialField::random(&mut rng);
        for _ in 0..points_per_field {
            let p = CartesianPoint::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let grad = field.grad(&p);
            let (kdu, kdus) = k_contractions(&grad);
            let scale = vec_norm(&k_vector(&grad)) * vec_norm(&grad) + 1e-30;
            worst = worst.max(kdu.norm() / scale).max(kdus.im.abs() / scale);
        }
    }
    worst
}

/// A smooth complex test field, polynomial in the Cartesian coordinates,
/// with its analytic gradient. The K identities are algebraic and must hold
/// on these fields exactly as on solutions.
#[derive(Debug, Clone)]
pub struct PolynomialField {
    pub c0: Complex64,
    pub lin: C3,
    pub quad: [[Complex64; 3]; 3],
}

#[allow(clippy::needless_range_loop)] // three-axis index algebra reads clearest as written
impl PolynomialField {
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let mut quad = [[Complex64::new(0.0, 0.0); 3]; 3];
        for r in 0..3 {
            for s in r..3 {
                let v = c();
                quad[r][s] = v;
                quad[s][r] = v;
            }
        }
        PolynomialField {
            c0: c(),
            lin: [c(), c(), c()],
            quad,
        }
    }

    pub fn eval(&self, p: &CartesianPoint) -> Complex64 {
        let x = [p.x, p.y, p.z];
        let mut v = self.c0;
        for r in 0..3 {
            v += self.lin[r] * x[r];
            for s in 0..3 {
                v += self.quad[r][s] * x[r] * x[s];
            }
        }
        v
    }

    pub fn grad(&self, p: &CartesianPoint) -> C3 {
        let x = [p.x, p.y, p.z];
        let mut g = self.lin;
        for r in 0..3 {
            for s in 0..3 {
                g[r] += (self.quad[r][s] + self.quad[s][r]) * x[s];
            }
        }
        g
    }
}
