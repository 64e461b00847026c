//! The toroidal coordinate chart, its inverse, metric scale factors and
//! volume weight.
//!
//! The chart maps (eta, xi, phi) to
//!
//! ```text
//! x = (a / tau) sinh(eta) cos(phi)
//! y = (a / tau) sinh(eta) sin(phi)        tau = cosh(eta) - cos(xi)
//! z = (a / tau) sin(xi)
//! ```
//!
//! Surfaces of constant eta are nested tori around the focal ring of radius
//! `a` in the z = 0 plane; eta -> infinity collapses onto the ring and the
//! single point eta = 0, xi = 0 is spatial infinity. The coordinate factor is
//! called `tau` throughout because `q` is reserved for the winding ratio.

use crate::error::{Error, Result};

const TWO_PI: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// Length scale of the chart, the radius of the focal ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale(f64);

impl Scale {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Scale(a))
        } else {
            Err(Error::InvalidScale { value: a })
        }
    }

    #[inline]
    pub fn get(&self) -> f64 {
        self.0
    }
}

/// A point in the Cartesian chart, same length unit as [`Scale`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CartesianPoint { x, y, z }
    }

    pub fn dist(&self, other: &CartesianPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// A point in the toroidal chart.
///
/// `eta >= 0`, `xi` is wrapped to [-pi, pi), `phi` to [0, 2*pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToroidalPoint {
    pub eta: f64,
    pub xi: f64,
    pub phi: f64,
}

fn wrap_to(value: f64, lo: f64, span: f64) -> f64 {
    let mut v = (value - lo) % span;
    if v < 0.0 {
        v += span;
    }
    lo + v
}

impl ToroidalPoint {
    pub fn new(eta: f64, xi: f64, phi: f64) -> Result<Self> {
        if !eta.is_finite() || eta < 0.0 || !xi.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidPoint {
                detail: format!("eta={eta}, xi={xi}, phi={phi}"),
            });
        }
        Ok(ToroidalPoint {
            eta,
            xi: wrap_to(xi, -PI, TWO_PI),
            phi: wrap_to(phi, 0.0, TWO_PI),
        })
    }

    /// The coordinate factor tau = cosh(eta) - cos(xi).
    ///
    /// Positive everywhere except the excluded point eta = 0, xi = 0.
    #[inline]
    pub fn tau(&self) -> f64 {
        self.eta.cosh() - self.xi.cos()
    }

    /// True at the single excluded point that represents spatial infinity.
    pub fn is_point_at_infinity(&self) -> bool {
        self.tau() <= 0.0
    }
}

/// Forward map of the chart.
pub fn to_cartesian(p: &ToroidalPoint, a: Scale) -> Result<CartesianPoint> {
    let tau = p.tau();
    if tau <= 0.0 {
        return Err(Error::PointAtInfinity);
    }
    let r = a.get() / tau;
    let sh = p.eta.sinh();
    Ok(CartesianPoint {
        x: r * sh * p.phi.cos(),
        y: r * sh * p.phi.sin(),
        z: r * p.xi.sin(),
    })
}

/// Inverse map, built from the distances d1, d2 to the focal circle:
/// eta = ln(d1/d2), xi = atan2(2 a z, rho^2 + z^2 - a^2), phi = atan2(y, x).
///
/// Points close to the focal ring (d2 -> 0) lose relative accuracy in eta;
/// the result is still finite and round-trips through [`to_cartesian`]. The
/// ring itself is rejected. On the z axis phi is canonicalised to 0.
pub fn to_toroidal(c: &CartesianPoint, a: Scale) -> Result<ToroidalPoint> {
    let a_val = a.get();
    let rho = c.x.hypot(c.y);
    let d1sq = (rho + a_val) * (rho + a_val) + c.z * c.z;
    let d2sq = (rho - a_val) * (rho - a_val) + c.z * c.z;
    if d2sq == 0.0 {
        return Err(Error::FocalRing);
    }
    let eta = 0.5 * (d1sq / d2sq).ln();
    let xi = (2.0 * a_val * c.z).atan2(rho * rho + c.z * c.z - a_val * a_val);
    let phi = if rho == 0.0 { 0.0 } else { c.y.atan2(c.x) };
    ToroidalPoint::new(eta, xi, phi)
}

/// Jacobian weight of the chart: d^3x = volume_weight * d eta d xi d phi,
/// equal to (a/tau)^3 sinh(eta).
pub fn volume_weight(p: &ToroidalPoint, a: Scale) -> f64 {
    let tau = p.tau();
    let r = a.get() / tau;
    r * r * r * p.eta.sinh()
}

/// Orthogonal scale factors h_eta = h_xi = a/tau, h_phi = a sinh(eta)/tau.
///
/// The gradient of a scalar F in the orthonormal frame is
/// (dF/deta / h_eta, dF/dxi / h_xi, dF/dphi / h_phi).
#[derive(Debug, Clone, Copy)]
pub struct ScaleFactors {
    pub h_eta: f64,
    pub h_xi: f64,
    pub h_phi: f64,
}

impl ScaleFactors {
    /// h_phi vanishes on the symmetry axis, where the phi direction degenerates.
    pub fn on_axis(&self) -> bool {
        self.h_phi == 0.0
    }
}

pub fn scale_factors(p: &ToroidalPoint, a: Scale) -> ScaleFactors {
    let tau = p.tau();
    let h = a.get() / tau;
    ScaleFactors {
        h_eta: h,
        h_xi: h,
        h_phi: h * p.eta.sinh(),
    }
}

/// Right-handed orthonormal frame (e_eta, e_xi, e_phi) in Cartesian components.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub e_eta: [f64; 3],
    pub e_xi: [f64; 3],
    pub e_phi: [f64; 3],
}

pub fn frame(p: &ToroidalPoint) -> Frame {
    let tau = p.tau();
    let (c, s) = (p.eta.cosh(), p.eta.sinh());
    let (cx, sx) = (p.xi.cos(), p.xi.sin());
    let (cp, sp) = (p.phi.cos(), p.phi.sin());
    let inv_tau = 1.0 / tau;
    // d r / d eta and d r / d xi, normalised by a/tau^2 analytically.
    let e_eta = [
        (1.0 - c * cx) * cp * inv_tau,
        (1.0 - c * cx) * sp * inv_tau,
        -sx * s * inv_tau,
    ];
    let e_xi = [
        -s * sx * cp * inv_tau,
        -s * sx * sp * inv_tau,
        (c * cx - 1.0) * inv_tau,
    ];
    let e_phi = [-sp, cp, 0.0];
    Frame { e_eta, e_xi, e_phi }
}

impl Frame {
    /// Assemble a Cartesian vector from orthonormal-frame components.
    pub fn to_cartesian_vector(&self, v: [f64; 3]) -> [f64; 3] {
        [
            v[0] * self.e_eta[0] + v[1] * self.e_xi[0] + v[2] * self.e_phi[0],
            v[0] * self.e_eta[1] + v[1] * self.e_xi[1] + v[2] * self.e_phi[1],
            v[0] * self.e_eta[2] + v[1] * self.e_xi[2] + v[2] * self.e_phi[2],
        ]
    }
}
