//! Model parameters, shape profiles and field evaluation.
//!
//! Each of the N unit fields is represented through a complex scalar
//! `u_i = f_i(eta) exp(i (m_i xi + n_i phi))`, with the shape functions
//! stored as `s(eta) = 1/(1 + f^2)` on [0, 1]. Working with `s` avoids the
//! overflow of `f` near the symmetry axis and is the variable in which the
//! reduced first-order shape equation
//!
//! ```text
//! ds_j/deta = (Lambda / k_j) * sinh(eta) * prod_i (m_i^2 sinh^2(eta) + n_i^2)^(-2 alpha_i)
//! ```
//!
//! (`Lambda = prod_i k_i^(4 alpha_i)`) takes its simplest form. Soliton
//! boundary conditions are `s -> 0` as `eta -> 0` (field points to the north
//! pole) and `s -> 1` as `eta -> infinity` (south pole).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::toroidal::{Scale, ToroidalPoint};

/// Required sum of the coupling exponents; it makes the static energy
/// scale invariant and evades the Derrick obstruction.
pub const SCALING_EXPONENT_SUM: f64 = 0.75;

const SCALING_TOL: f64 = 1e-12;
const BOUNDARY_TOL: f64 = 1e-6;

/// Upper end of tabulated profiles; beyond it the far-field limit is used.
/// The neglected tail of the shape integral is O(exp(-2 eta_max)).
pub const PROFILE_ETA_MAX: f64 = 30.0;

/// Parameters of one multi-field problem: coupling exponents `alpha_i`,
/// winding numbers `(m_i, n_i)` and the coordinate scale.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    alphas: Vec<f64>,
    m: Vec<i64>,
    n: Vec<i64>,
    scale: Scale,
}

impl ModelSpec {
    /// Validate raw parameters into a spec.
    ///
    /// Fails when the exponent sum breaks the scaling condition or any
    /// winding number vanishes (the soliton boundary conditions would force
    /// the trivial sector).
    pub fn new(alphas: Vec<f64>, m: Vec<i64>, n: Vec<i64>, scale: Scale) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != m.len() || alphas.len() != n.len() {
            return Err(Error::ShapeMismatch {
                detail: format!(
                    "got {} exponents, {} m windings, {} n windings",
                    alphas.len(),
                    m.len(),
                    n.len()
                ),
            });
        }
        if let Some(bad) = alphas.iter().find(|a| !a.is_finite()) {
            return Err(Error::ShapeMismatch {
                detail: format!("non-finite exponent {bad}"),
            });
        }
        let sum: f64 = alphas.iter().sum();
        if (sum - SCALING_EXPONENT_SUM).abs() > SCALING_TOL {
            return Err(Error::ScalingCondition { sum });
        }
        for (i, (&mi, &ni)) in m.iter().zip(&n).enumerate() {
            if mi == 0 || ni == 0 {
                return Err(Error::ZeroWinding { index: i });
            }
        }
        Ok(ModelSpec {
            alphas,
            m,
            n,
            scale,
        })
    }

    pub fn n_fields(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha(&self, i: usize) -> f64 {
        self.alphas[i]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn winding(&self, i: usize) -> (i64, i64) {
        (self.m[i], self.n[i])
    }

    pub fn m(&self) -> &[i64] {
        &self.m
    }

    pub fn n(&self) -> &[i64] {
        &self.n
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn with_scale(&self, scale: Scale) -> Self {
        let mut s = self.clone();
        s.scale = scale;
        s
    }

    /// Winding ratios q_i = n_i / m_i and whether all q_i^2 agree.
    pub fn q_ratio(&self) -> QRatio {
        let per_field: Vec<f64> = self
            .m
            .iter()
            .zip(&self.n)
            .map(|(&m, &n)| n as f64 / m as f64)
            .collect();
        // exact integer test: n_i^2 m_j^2 == n_j^2 m_i^2
        let (m0, n0) = (self.m[0], self.n[0]);
        let constant = self
            .m
            .iter()
            .zip(&self.n)
            .all(|(&m, &n)| n * n * m0 * m0 == n0 * n0 * m * m);
        QRatio {
            per_field,
            const_q2: constant.then(|| (n0 as f64 / m0 as f64).powi(2)),
        }
    }

    /// prod_i |m_i|^(2 alpha_i), the winding factor of the closed-form energy.
    pub fn prod_m_pow_2alpha(&self) -> f64 {
        self.m
            .iter()
            .zip(&self.alphas)
            .map(|(&m, &a)| (m.unsigned_abs() as f64).powf(2.0 * a))
            .product()
    }
}

/// The per-field winding ratios and the constant-ratio flag.
#[derive(Debug, Clone)]
pub struct QRatio {
    pub per_field: Vec<f64>,
    /// Common q^2 when all fields share it.
    pub const_q2: Option<f64>,
}

impl QRatio {
    pub fn is_constant(&self) -> bool {
        self.const_q2.is_some()
    }

    /// |q| on the constant-ratio branch.
    pub fn q_abs(&self) -> Option<f64> {
        self.const_q2.map(f64::sqrt)
    }
}

/// Parameters of the shape-equation right-hand side
/// `W(eta) = coeff * sinh(eta) * prod_i (m_i^2 sinh^2 eta + n_i^2)^(-2 alpha_i)`.
#[derive(Debug, Clone)]
struct ShapeRhs {
    coeff: f64,
    /// (m^2, n^2, 2 alpha) per field
    terms: Vec<(f64, f64, f64)>,
}

impl ShapeRhs {
    fn new(spec: &ModelSpec, coeff: f64) -> Self {
        let terms = spec
            .m
            .iter()
            .zip(&spec.n)
            .zip(&spec.alphas)
            .map(|((&m, &n), &a)| ((m * m) as f64, (n * n) as f64, 2.0 * a))
            .collect();
        ShapeRhs { coeff, terms }
    }

    /// W(eta); regular at eta = 0 where it vanishes linearly.
    fn w(&self, eta: f64) -> f64 {
        self.coeff * eta.sinh() * self.product(eta)
    }

    /// W(eta) / sinh(eta), regular down to the axis.
    fn w_over_sinh(&self, eta: f64) -> f64 {
        self.coeff * self.product(eta)
    }

    fn product(&self, eta: f64) -> f64 {
        let sh2 = eta.sinh().powi(2);
        self.terms
            .iter()
            .map(|&(m2, n2, two_a)| (m2 * sh2 + n2).powf(-two_a))
            .product()
    }
}

/// Nodes of a tabulated profile together with the tail integral
/// `T(eta) = int_eta^inf W`, so that `s = l - T`.
#[derive(Debug, Clone)]
struct ProfileTable {
    etas: Vec<f64>,
    tail: Vec<f64>,
    rhs: ShapeRhs,
}

impl ProfileTable {
    /// Hermite-interpolated tail value; slopes are exact (T' = -W).
    fn tail_at(&self, eta: f64) -> f64 {
        if eta <= 0.0 {
            return self.tail[0];
        }
        let last = *self.etas.last().unwrap();
        if eta >= last {
            // far-field limit; the real tail is O(exp(-2 eta_max))
            return 0.0;
        }
        let hi = self
            .etas
            .partition_point(|&x| x <= eta)
            .min(self.etas.len() - 1);
        let lo = hi - 1;
        let (x0, x1) = (self.etas[lo], self.etas[hi]);
        let (y0, y1) = (self.tail[lo], self.tail[hi]);
        let (d0, d1) = (-self.rhs.w(x0), -self.rhs.w(x1));
        let h = x1 - x0;
        let t = (eta - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (h00 * y0 + h01 * y1 + h * (h10 * d0 + h11 * d1)).max(0.0)
    }
}

/// One shape function f_j(eta), stored through s = 1/(1 + f^2).
///
/// `k` and `l` are the integration constants of the underlying first-order
/// equation; for tabulated profiles `l` is expressed in the far-anchored
/// convention where the admissible value is exactly 1 (see
/// [`general_profile`]).
#[derive(Debug, Clone)]
pub struct ShapeProfile {
    kind: ProfileKind,
    k: f64,
    l: f64,
}

#[derive(Debug, Clone)]
enum ProfileKind {
    ClosedForm {
        q: f64,
    },
    Tabulated {
        table: ProfileTable,
    },
    Perturbed {
        base: Box<ShapeProfile>,
        amplitude: f64,
    },
}

impl ShapeProfile {
    /// s(eta) = 1/(1 + f^2), monotone from 0 to 1.
    pub fn s(&self, eta: f64) -> f64 {
        match &self.kind {
            ProfileKind::ClosedForm { q } => {
                let sh2 = eta.sinh().powi(2);
                let r = (q * q + sh2).sqrt();
                sh2 * (1.0 + q) / ((r + q * eta.cosh()) * r)
            }
            ProfileKind::Tabulated { table } => (self.l - table.tail_at(eta)).clamp(0.0, 1.0),
            ProfileKind::Perturbed { .. } => {
                let (s, _) = self.perturbed_pair(eta);
                s
            }
        }
    }

    /// 1 - s(eta) = f^2/(1 + f^2), computed without cancellation for large eta.
    pub fn one_minus_s(&self, eta: f64) -> f64 {
        match &self.kind {
            ProfileKind::ClosedForm { q } => {
                let r = (q * q + eta.sinh().powi(2)).sqrt();
                q * (1.0 + q) / (r * (eta.cosh() + r))
            }
            ProfileKind::Tabulated { table } => {
                (table.tail_at(eta) + (self.l - 1.0)).clamp(0.0, 1.0)
            }
            ProfileKind::Perturbed { .. } => {
                let (_, oms) = self.perturbed_pair(eta);
                oms
            }
        }
    }

    /// ds/deta, analytic in every representation.
    pub fn ds(&self, eta: f64) -> f64 {
        match &self.kind {
            ProfileKind::ClosedForm { q } => {
                let r3 = (q * q + eta.sinh().powi(2)).powf(1.5);
                q * (1.0 + q) * eta.sinh() / r3
            }
            ProfileKind::Tabulated { table } => table.rhs.w(eta),
            ProfileKind::Perturbed { .. } => self.perturbed_ds(eta, false),
        }
    }

    /// ds/deta / sinh(eta), regular down to the axis; needed by energy
    /// densities where the angular winding contributes n^2 / sinh^2.
    pub fn ds_over_sinh(&self, eta: f64) -> f64 {
        match &self.kind {
            ProfileKind::ClosedForm { q } => {
                let r3 = (q * q + eta.sinh().powi(2)).powf(1.5);
                q * (1.0 + q) / r3
            }
            ProfileKind::Tabulated { table } => table.rhs.w_over_sinh(eta),
            ProfileKind::Perturbed { .. } => self.perturbed_ds(eta, true),
        }
    }

    /// f(eta); infinite on the axis.
    pub fn f(&self, eta: f64) -> f64 {
        let s = self.s(eta);
        if s <= 0.0 {
            f64::INFINITY
        } else {
            (self.one_minus_s(eta) / s).sqrt()
        }
    }

    /// f'(eta) from the chain rule f' = -s' / (2 f s^2).
    pub fn f_prime(&self, eta: f64) -> f64 {
        let s = self.s(eta);
        let f = self.f(eta);
        if s <= 0.0 || !f.is_finite() || f == 0.0 {
            return f64::NEG_INFINITY;
        }
        -self.ds(eta) / (2.0 * f * s * s)
    }

    pub fn constants(&self) -> (f64, f64) {
        (self.k, self.l)
    }

    fn with_constants(mut self, k: f64, l: f64) -> Self {
        self.k = k;
        self.l = l;
        self
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.kind, ProfileKind::ClosedForm { .. })
    }

    /// Wrap with a multiplicative distortion f -> f (1 + amplitude sin eta);
    /// used as a sensitivity fixture for residual checks.
    pub fn perturbed(&self, amplitude: f64) -> ShapeProfile {
        ShapeProfile {
            kind: ProfileKind::Perturbed {
                base: Box::new(self.clone()),
                amplitude,
            },
            k: self.k,
            l: self.l,
        }
    }

    fn perturbed_parts(&self, eta: f64) -> Option<(&ShapeProfile, f64, f64, f64, f64)> {
        if let ProfileKind::Perturbed { base, amplitude } = &self.kind {
            let w = 1.0 + amplitude * eta.sin();
            let g = w * w;
            let gp = 2.0 * w * amplitude * eta.cos();
            let sb = base.s(eta);
            Some((base, g, gp, sb, base.one_minus_s(eta)))
        } else {
            None
        }
    }

    fn perturbed_pair(&self, eta: f64) -> (f64, f64) {
        let (_, g, _, sb, omsb) = self.perturbed_parts(eta).expect("perturbed kind");
        if sb <= 0.0 {
            return (0.0, 1.0);
        }
        let f2 = (omsb / sb) * g;
        (1.0 / (1.0 + f2), f2 / (1.0 + f2))
    }

    fn perturbed_ds(&self, eta: f64, over_sinh: bool) -> f64 {
        let (base, g, gp, sb, omsb) = self.perturbed_parts(eta).expect("perturbed kind");
        if sb <= 0.0 {
            return if over_sinh {
                base.ds_over_sinh(eta)
            } else {
                base.ds(eta)
            };
        }
        let f2 = omsb / sb;
        let sp = 1.0 / (1.0 + f2 * g);
        if over_sinh {
            let df2_over_sinh = -base.ds_over_sinh(eta) / (sb * sb);
            let gp_over_sinh = gp / eta.sinh();
            -(df2_over_sinh * g + f2 * gp_over_sinh) * sp * sp
        } else {
            let df2 = -base.ds(eta) / (sb * sb);
            -(df2 * g + f2 * gp) * sp * sp
        }
    }
}

/// The closed-form profile of the constant-ratio branch:
/// `1/(1 + f^2) = [1 - |q| cosh(eta) / sqrt(q^2 + sinh^2 eta)] / (1 - |q|)`.
///
/// Stored in the algebraically equivalent cancellation-free form
/// `s = sinh^2(eta) (1 + |q|) / [(r + |q| cosh eta) r]`, r = sqrt(q^2 + sinh^2 eta).
/// Only 0 < |q| < 1 admits this branch.
pub fn closed_form_profile(q: f64) -> Result<ShapeProfile> {
    let q_abs = q.abs();
    if !(0.0..1.0).contains(&q_abs) || q_abs == 0.0 {
        return Err(Error::UnsupportedBranch { q_abs });
    }
    Ok(ShapeProfile {
        kind: ProfileKind::ClosedForm { q: q_abs },
        k: (q_abs * (1.0 + q_abs)).sqrt(),
        l: 1.0 / (1.0 - q_abs),
    })
}

/// Integration constants of the constant-ratio branch.
///
/// `l = -1/(|q| - 1)` is fixed by the boundary conditions. `k` (common to
/// every field) is fixed by requiring the quadrature form of the general
/// solution to reproduce the closed form:
/// `k = prod_i |m_i|^(2 alpha_i) * sqrt(|q| (1 + |q|))`.
pub fn integration_constants(spec: &ModelSpec) -> Result<(f64, f64)> {
    let ratio = spec.q_ratio();
    let q2 = ratio.const_q2.ok_or(Error::NonConstantRatio)?;
    let q = q2.sqrt();
    if q >= 1.0 {
        return Err(Error::UnsupportedBranch { q_abs: q });
    }
    let k = spec.prod_m_pow_2alpha() * (q * (1.0 + q)).sqrt();
    let l = 1.0 / (1.0 - q);
    Ok((k, l))
}

/// Equal integration constants that satisfy both soliton boundary conditions
/// for arbitrary windings: `k = T0^(-1/2)` with `T0` the full shape integral.
/// On the constant-ratio branch this reproduces [`integration_constants`].
pub fn boundary_matched_constants(spec: &ModelSpec) -> Result<Vec<f64>> {
    let unit = ShapeRhs::new(spec, 1.0);
    let t0 = shape_tail_integral(&unit, 0.0)?;
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::InvalidProfile {
            detail: format!("shape integral evaluated to {t0}"),
        });
    }
    Ok(vec![1.0 / t0.sqrt(); spec.n_fields()])
}

fn shape_tail_integral(rhs: &ShapeRhs, from: f64) -> Result<f64> {
    let split = PROFILE_ETA_MAX.max(from + 1.0);
    let f = |eta: f64| rhs.w(eta);
    let head = quad::adaptive(&f, from, split, 1e-12, 1e-300)?;
    let tail = quad::adaptive_to_infinity(&f, split, 1e-10, 1e-300)?;
    Ok(head.value + tail.value)
}

/// Right-hand side of the first-order shape equation for field `j`,
/// `ds_j/deta = (Lambda / k_j) sinh(eta) prod_i (m_i^2 sinh^2 + n_i^2)^(-2 alpha_i)`,
/// with `Lambda = prod k_i^(4 alpha_i)`.
pub fn shape_equation_rhs(spec: &ModelSpec, k: &[f64], j: usize, eta: f64) -> f64 {
    let lambda: f64 = k
        .iter()
        .zip(spec.alphas())
        .map(|(&ki, &a)| ki.powf(4.0 * a))
        .product();
    ShapeRhs::new(spec, lambda / k[j]).w(eta)
}

/// Build the profile of field `j` by quadrature of the general solution.
///
/// Semantics: `s_j(eta) = l_j - T_j(eta)` where `T_j` is the tail integral of
/// the shape-equation right-hand side, so `l_j` is the far-field value of
/// `s_j` and the soliton boundary conditions demand `l_j = 1` together with
/// `T_j(0) = 1`. Constants that miss either boundary are rejected. (On the
/// constant-ratio branch the textbook antiderivative convention instead
/// reports `l = -1/(|q|-1)`; the two bookkeepings describe one profile.)
pub fn general_profile(spec: &ModelSpec, j: usize, k: &[f64], l_j: f64) -> Result<ShapeProfile> {
    if j >= spec.n_fields() || k.len() != spec.n_fields() {
        return Err(Error::ShapeMismatch {
            detail: format!(
                "field index {j}, {} constants for {} fields",
                k.len(),
                spec.n_fields()
            ),
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
    let rhs = ShapeRhs::new(spec, lambda / k[j]);

    let etas = profile_grid();
    let n = etas.len();
    let mut tail = vec![0.0; n];
    let top = quad::adaptive_to_infinity(&|e| rhs.w(e), etas[n - 1], 1e-10, 1e-300)?;
    tail[n - 1] = top.value;
    for i in (0..n - 1).rev() {
        let (cell, _, _) = quad::kronrod_panel(&|e| rhs.w(e), etas[i], etas[i + 1]);
        tail[i] = tail[i + 1] + cell;
    }

    // boundary validation before any clamping
    let s_far = l_j - tail[n - 1];
    if (s_far - 1.0).abs() > BOUNDARY_TOL {
        return Err(Error::InvalidProfile {
            detail: format!("far-field value s(eta_max) = {s_far}, boundary requires 1"),
        });
    }
    let s_origin = l_j - tail[0];
    if s_origin < -BOUNDARY_TOL {
        return Err(Error::InvalidProfile {
            detail: format!("s(0) = {s_origin} < 0, no admissible shape for these constants"),
        });
    }
    if s_origin > BOUNDARY_TOL {
        return Err(Error::InvalidProfile {
            detail: format!(
                "s(0) = {s_origin} > 0, the eta -> 0 boundary condition is unreachable"
            ),
        });
    }

    Ok(ShapeProfile {
        kind: ProfileKind::Tabulated {
            table: ProfileTable { etas, tail, rhs },
        },
        k: k[j],
        l: l_j,
    })
}

/// Node grid for tabulated profiles: dense near the axis, then fine uniform
/// spacing out to `PROFILE_ETA_MAX`. With exact nodal slopes the cubic
/// interpolation error stays below 1e-9.
fn profile_grid() -> Vec<f64> {
    let mut etas = Vec::with_capacity(15200);
    let n0 = 20;
    for i in 0..n0 {
        etas.push(0.01 * i as f64 / n0 as f64);
    }
    let n1 = 150;
    let (lo, hi) = (0.01_f64, 0.1_f64);
    let ratio = (hi / lo).powf(1.0 / n1 as f64);
    let mut x = lo;
    for _ in 0..n1 {
        etas.push(x);
        x *= ratio;
    }
    let n2 = ((PROFILE_ETA_MAX - hi) / 0.002).ceil() as usize;
    for i in 0..=n2 {
        etas.push(hi + (PROFILE_ETA_MAX - hi) * i as f64 / n2 as f64);
    }
    etas
}

/// A complete multi-hopfion configuration: validated spec plus one shape
/// profile per field.
#[derive(Debug, Clone)]
pub struct HopfionSolution {
    spec: ModelSpec,
    profiles: Vec<ShapeProfile>,
    qratio: QRatio,
}

impl HopfionSolution {
    /// Closed-form solution on the constant-ratio branch (|q| < 1). Every
    /// field carries the same shape function: the profile depends only on q.
    pub fn closed_form(spec: ModelSpec) -> Result<Self> {
        let qratio = spec.q_ratio();
        let q = qratio.q_abs().ok_or(Error::NonConstantRatio)?;
        let (k, l) = integration_constants(&spec)?;
        let profile = closed_form_profile(q)?.with_constants(k, l);
        let profiles = vec![profile; spec.n_fields()];
        Ok(HopfionSolution {
            spec,
            profiles,
            qratio,
        })
    }

    /// Solution with tabulated profiles built from explicit integration
    /// constants (general windings).
    pub fn from_constants(spec: ModelSpec, k: &[f64]) -> Result<Self> {
        let qratio = spec.q_ratio();
        let profiles = (0..spec.n_fields())
            .map(|j| general_profile(&spec, j, k, 1.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(HopfionSolution {
            spec,
            profiles,
            qratio,
        })
    }

    /// Solution with boundary-matched constants for arbitrary windings.
    pub fn general(spec: ModelSpec) -> Result<Self> {
        let k = boundary_matched_constants(&spec)?;
        Self::from_constants(spec, &k)
    }

    /// Distorted copy (f -> f (1 + amplitude sin eta)); no longer solves the
    /// field equations, which residual checks must detect.
    pub fn perturbed(&self, amplitude: f64) -> Self {
        HopfionSolution {
            spec: self.spec.clone(),
            profiles: self
                .profiles
                .iter()
                .map(|p| p.perturbed(amplitude))
                .collect(),
            qratio: self.qratio.clone(),
        }
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn profile(&self, i: usize) -> &ShapeProfile {
        &self.profiles[i]
    }

    pub fn profiles(&self) -> &[ShapeProfile] {
        &self.profiles
    }

    pub fn q_ratio(&self) -> &QRatio {
        &self.qratio
    }

    /// Phase of field `i` at a point: m_i xi + n_i phi.
    pub fn phase(&self, i: usize, p: &ToroidalPoint) -> f64 {
        let (m, n) = self.spec.winding(i);
        m as f64 * p.xi + n as f64 * p.phi
    }

    /// Complex field u_i = f_i(eta) exp(i (m_i xi + n_i phi)).
    ///
    /// The modulus diverges on the axis (eta = 0), which is reported as the
    /// north-pole limit rather than returned as infinity.
    pub fn eval_u(&self, i: usize, p: &ToroidalPoint) -> Result<Complex64> {
        let s = self.profiles[i].s(p.eta);
        if s <= 0.0 {
            return Err(Error::AxisLimit);
        }
        let f = (self.profiles[i].one_minus_s(p.eta) / s).sqrt();
        Ok(Complex64::from_polar(f, self.phase(i, p)))
    }

    /// Unit vector n_i via stereographic projection; total (the poles are the
    /// finite limits (0,0,1) at the axis and (0,0,-1) on the focal ring).
    pub fn eval_n(&self, i: usize, p: &ToroidalPoint) -> [f64; 3] {
        let s = self.profiles[i].s(p.eta);
        let oms = self.profiles[i].one_minus_s(p.eta);
        let amp = 2.0 * (s * oms).sqrt();
        let theta = self.phase(i, p);
        let n3 = if s <= 0.5 {
            1.0 - 2.0 * s
        } else {
            2.0 * oms - 1.0
        };
        [amp * theta.cos(), amp * theta.sin(), n3]
    }
}

/// Inverse stereographic projection: u = (n1 + i n2) / (1 - n3).
pub fn u_from_unit_vector(n: [f64; 3]) -> Complex64 {
    Complex64::new(n[0], n[1]) / (1.0 - n[2])
}

/// Largest deviation of a profile from the first-order shape equation over
/// the given sample points, measured in the f f'/(1+f^2)^2 normalisation.
///
/// The left side is differentiated by a five-point stencil of the stored
/// s(eta), so closed forms are genuinely tested against the equation rather
/// than against their own derivative formula.
pub fn shape_ode_residual(
    profile: &ShapeProfile,
    spec: &ModelSpec,
    k: &[f64],
    j: usize,
    etas: &[f64],
) -> f64 {
    let mut worst: f64 = 0.0;
    for &eta in etas {
        let h = (eta / 4.0).min(1e-4 * (1.0 + eta));
        let ds_fd = (-profile.s(eta + 2.0 * h) + 8.0 * profile.s(eta + h)
            - 8.0 * profile.s(eta - h)
            + profile.s(eta - 2.0 * h))
            / (12.0 * h);
        let rhs = shape_equation_rhs(spec, k, j, eta);
        worst = worst.max(0.5 * (ds_fd - rhs).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec_n1() -> ModelSpec {
        ModelSpec::new(vec![0.75], vec![2], vec![1], Scale::new(1.0).unwrap()).unwrap()
    }

    fn spec_n2() -> ModelSpec {
        ModelSpec::new(
            vec![0.375, 0.375],
            vec![2, 4],
            vec![1, 2],
            Scale::new(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(spec_n1().q_ratio().is_constant());
        let q = spec_n2().q_ratio();
        assert_eq!(q.const_q2, Some(0.25));

        let err = ModelSpec::new(
            vec![0.5, 0.5],
            vec![1, 1],
            vec![1, 1],
            Scale::new(1.0).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ScalingCondition { .. }));

        let err =
            ModelSpec::new(vec![0.75], vec![0], vec![1], Scale::new(1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ZeroWinding { index: 0 }));
    }

    #[test]
    fn closed_profile_boundaries_and_value() {
        let p = closed_form_profile(0.5).unwrap();
        // eta -> 0: s -> 0 quadratically
        assert!(p.s(1e-8) < 1e-14);
        assert!(p.s(0.0) == 0.0);
        // eta -> infinity: s -> 1
        assert!(p.one_minus_s(40.0) < 1e-30);
        // direct evaluation at eta = 1, q = 1/2
        assert_relative_eq!(p.s(1.0), 0.7917727846585375, epsilon = 1e-13);
        // f decreasing, f -> infinity at the axis
        assert!(p.f(0.0).is_infinite());
        assert!(p.f(1.0) < p.f(0.5));
    }

    #[test]
    fn unsupported_branch_is_rejected() {
        assert!(matches!(
            closed_form_profile(1.0),
            Err(Error::UnsupportedBranch { .. })
        ));
        assert!(matches!(
            closed_form_profile(1.7),
            Err(Error::UnsupportedBranch { .. })
        ));
        assert!(matches!(
            closed_form_profile(0.0),
            Err(Error::UnsupportedBranch { .. })
        ));
    }

    #[test]
    fn integration_constants_match_reported_values() {
        let (k, l) = integration_constants(&spec_n1()).unwrap();
        assert_relative_eq!(l, 2.0, epsilon = 1e-15); // -1/(1/2 - 1)
        assert_relative_eq!(
            k,
            2.0_f64.powf(1.5) * (0.5_f64 * 1.5).sqrt(),
            epsilon = 1e-15
        );
        // k is common to all fields by construction; check the N = 2 value too
        let (k2, l2) = integration_constants(&spec_n2()).unwrap();
        assert_relative_eq!(l2, 2.0, epsilon = 1e-15);
        assert_relative_eq!(
            k2,
            8.0_f64.powf(0.75) * (0.5_f64 * 1.5).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn general_profile_reproduces_closed_form() {
        for (q, m, n) in [(0.25, 4, 1), (0.5, 2, 1), (0.75, 4, 3)] {
            let spec =
                ModelSpec::new(vec![0.75], vec![m], vec![n], Scale::new(1.0).unwrap()).unwrap();
            let (k, _) = integration_constants(&spec).unwrap();
            let tab = general_profile(&spec, 0, &[k], 1.0).unwrap();
            let closed = closed_form_profile(q).unwrap();
            for i in 0..50 {
                let eta = 0.02 + 0.24 * i as f64;
                assert!(
                    (tab.s(eta) - closed.s(eta)).abs() < 1e-8,
                    "q={q} eta={eta}: {} vs {}",
                    tab.s(eta),
                    closed.s(eta)
                );
            }
        }
    }

    #[test]
    fn boundary_matched_constants_recover_const_ratio_k() {
        let spec = spec_n2();
        let (k, _) = integration_constants(&spec).unwrap();
        let kb = boundary_matched_constants(&spec).unwrap();
        for ki in &kb {
            assert_relative_eq!(*ki, k, max_relative = 1e-9);
        }
    }

    #[test]
    fn invalid_constants_are_rejected() {
        let spec = spec_n1();
        let (k, _) = integration_constants(&spec).unwrap();
        // too large k: s(0) < 0
        let err = general_profile(&spec, 0, &[2.0 * k], 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile { .. }));
        // too small k: eta -> 0 boundary unreachable
        let err = general_profile(&spec, 0, &[0.5 * k], 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile { .. }));
        // wrong far-field anchor
        let err = general_profile(&spec, 0, &[k], 2.0).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile { .. }));
    }

    #[test]
    fn general_windings_profile_is_valid_and_solves_the_ode() {
        // no constant ratio here: q_1 = 1, q_2 = 1/3
        let spec = ModelSpec::new(
            vec![0.375, 0.375],
            vec![1, 3],
            vec![1, 1],
            Scale::new(1.0).unwrap(),
        )
        .unwrap();
        assert!(!spec.q_ratio().is_constant());
        let k = boundary_matched_constants(&spec).unwrap();
        let sol = HopfionSolution::from_constants(spec.clone(), &k).unwrap();

        for j in 0..2 {
            let prof = sol.profile(j);
            // monotone and inside [0, 1]
            let mut prev = -1e-12;
            for i in 0..=300 {
                let eta = 12.0 * i as f64 / 300.0;
                let s = prof.s(eta);
                assert!((0.0..=1.0).contains(&s));
                assert!(s >= prev - 1e-12, "not monotone at eta={eta}");
                prev = s;
            }
            // five-point-differenced table satisfies the shape equation
            let etas: Vec<f64> = (1..=200).map(|i| 0.05 * i as f64).collect();
            let res = shape_ode_residual(prof, &spec, &k, j, &etas);
            assert!(res < 1e-8, "ode residual {res}");
        }
    }

    #[test]
    fn shape_is_universal_across_field_count() {
        // same q: profiles identical for any admissible (N, alpha) split
        let s1 = HopfionSolution::closed_form(spec_n1()).unwrap();
        let s2 = HopfionSolution::closed_form(spec_n2()).unwrap();
        let s3 = HopfionSolution::closed_form(
            ModelSpec::new(
                vec![0.25, 0.25, 0.25],
                vec![2, 4, 6],
                vec![1, 2, 3],
                Scale::new(1.0).unwrap(),
            )
            .unwrap(),
        )
        .unwrap();
        for i in 0..=100 {
            let eta = 0.08 * i as f64;
            let a = s1.profile(0).s(eta);
            assert_eq!(a, s2.profile(1).s(eta));
            assert_eq!(a, s3.profile(2).s(eta));
        }
    }

    #[test]
    fn closed_profile_satisfies_shape_equation() {
        for (q, m, n) in [(0.2, 5i64, 1i64), (0.5, 2, 1), (0.8, 5, 4)] {
            let spec =
                ModelSpec::new(vec![0.75], vec![m], vec![n], Scale::new(1.0).unwrap()).unwrap();
            let (k, _) = integration_constants(&spec).unwrap();
            let prof = closed_form_profile(q).unwrap();
            let etas: Vec<f64> = (0..200)
                .map(|i| 10f64.powf(-2.0 + 3.0 * i as f64 / 199.0))
                .collect();
            let res = shape_ode_residual(&prof, &spec, &[k], 0, &etas);
            assert!(res < 1e-10, "q={q}: residual {res}");
        }
    }

    #[test]
    fn field_evaluation() {
        let sol = HopfionSolution::closed_form(spec_n1()).unwrap();
        let p = ToroidalPoint::new(1.0, 0.0, 0.0).unwrap();
        let u = sol.eval_u(0, &p).unwrap();
        // zero phase: real positive, modulus f(eta)
        assert!(u.im.abs() < 1e-15 && u.re > 0.0);
        assert_relative_eq!(u.norm(), sol.profile(0).f(1.0), epsilon = 1e-14);

        // modulus independent of the angles
        let p2 = ToroidalPoint::new(1.0, 1.3, 2.1).unwrap();
        assert_relative_eq!(
            sol.eval_u(0, &p2).unwrap().norm(),
            u.norm(),
            epsilon = 1e-13
        );

        // phase winds by 2 pi n as phi goes around
        let (m, n) = sol.spec().winding(0);
        for step in 0..8 {
            let phi = std::f64::consts::TAU * step as f64 / 8.0;
            let p = ToroidalPoint::new(1.0, 0.7, phi).unwrap();
            let expect = (m as f64 * 0.7 + n as f64 * phi).rem_euclid(std::f64::consts::TAU);
            let got = sol
                .eval_u(0, &p)
                .unwrap()
                .arg()
                .rem_euclid(std::f64::consts::TAU);
            assert_relative_eq!(got, expect, epsilon = 1e-12);
        }

        // axis is the north-pole limit
        let axis = ToroidalPoint::new(0.0, 1.0, 0.0).unwrap();
        assert!(matches!(sol.eval_u(0, &axis), Err(Error::AxisLimit)));
        assert_eq!(sol.eval_n(0, &axis), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn unit_vector_limits_and_norm() {
        let sol = HopfionSolution::closed_form(spec_n1()).unwrap();
        // eta -> infinity: n -> (0, 0, -1)
        let far = ToroidalPoint::new(25.0, 0.3, 0.4).unwrap();
        let n = sol.eval_n(0, &far);
        assert!((n[2] + 1.0).abs() < 1e-8);
        // eta -> 0: n -> (0, 0, 1)
        let near = ToroidalPoint::new(1e-5, 0.3, 0.4).unwrap();
        let n = sol.eval_n(0, &near);
        assert!((n[2] - 1.0).abs() < 1e-8);
        // n3 depends only on eta
        let pa = ToroidalPoint::new(0.9, 0.1, 0.2).unwrap();
        let pb = ToroidalPoint::new(0.9, -2.0, 4.0).unwrap();
        assert_eq!(sol.eval_n(0, &pa)[2], sol.eval_n(0, &pb)[2]);
    }

    #[test]
    fn stereographic_round_trip() {
        let sol = HopfionSolution::closed_form(spec_n2()).unwrap();
        for i in 0..50 {
            let eta = 0.1 + 0.08 * i as f64;
            let p = ToroidalPoint::new(eta, 0.9 - 0.05 * i as f64, 0.13 * i as f64).unwrap();
            for field in 0..2 {
                let u = sol.eval_u(field, &p).unwrap();
                let back = u_from_unit_vector(sol.eval_n(field, &p));
                assert!((u - back).norm() <= 1e-12 * (1.0 + u.norm()));
            }
        }
    }
}
