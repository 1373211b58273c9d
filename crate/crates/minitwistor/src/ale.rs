//! Bridge between ALE surfaces of type A_{l-1} and the hyperelliptic cone
//! surfaces: the affine model x y = prod (z - a_i) with its real structure,
//! and the explicit isomorphism onto u v = -f over the matched branch
//! configuration (a direct relabeling for odd l, a Moebius change of the base
//! coordinate for even l).

use num_complex::Complex64;

use crate::curve::BranchConfig;
use crate::error::{Error, Result};
use crate::surface::SurfacePoint;

/// The surface x y = prod_{i=1}^{2l} (z - a_i) with the antiholomorphic
/// involution tau(x, y, z) = ((-1)^l conj y, (-1)^l conj x, conj z).
#[derive(Clone, Debug)]
pub struct AleConfig {
    l: usize,
    a: Vec<f64>,
    /// Pole of the base Moebius map for even l; must lie strictly between
    /// a_1 and a_2.
    beta: f64,
}

impl AleConfig {
    pub fn new(l: usize, a: Vec<f64>, beta: Option<f64>) -> Result<AleConfig> {
        if l == 0 || a.len() != 2 * l {
            return Err(Error::InvalidConfig(format!(
                "need 2l = {} parameters, got {}",
                2 * l,
                a.len()
            )));
        }
        if a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "surface parameters must be strictly increasing".into(),
            ));
        }
        let beta = beta.unwrap_or(0.5 * (a[0] + a[1]));
        if l % 2 == 0 && (beta <= a[0] || beta >= a[1]) {
            return Err(Error::InvalidConfig(format!(
                "beta = {beta} must lie strictly between a_1 = {} and a_2 = {}",
                a[0], a[1]
            )));
        }
        Ok(AleConfig { l, a, beta })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// prod (z - a_i).
    pub fn rhs(&self, z: Complex64) -> Complex64 {
        self.a
            .iter()
            .map(|&ai| z - ai)
            .product()
    }

    /// The base Moebius map psi(z) = 1/(beta - z) used for even l.
    pub fn psi(&self, z: Complex64) -> Complex64 {
        1.0 / (self.beta - z)
    }

    /// Inverse of psi.
    pub fn psi_inv(&self, t: Complex64) -> Complex64 {
        self.beta - 1.0 / t
    }

    /// Branch configuration of the matched cone surface u v = -f.
    pub fn curve_config(&self) -> Result<BranchConfig> {
        if self.l % 2 == 1 {
            BranchConfig::new(self.a.clone())
        } else {
            // psi is increasing on each side of its pole; the images of
            // a_2 < ... < a_{2l} are increasing and negative, and psi(a_1)
            // is the largest branch point
            let mut b: Vec<f64> = self.a[1..].iter().map(|&ai| self.psi(ai.into()).re).collect();
            b.push(self.psi(self.a[0].into()).re);
            BranchConfig::new(b)
        }
    }

    /// Closed-form scaling constant of the even-l map: c = (-prod (beta -
    /// a_i))^{-1/2}, positive because beta separates a_1 from the rest.
    pub fn c_constant(&self) -> f64 {
        if self.l % 2 == 1 {
            return 1.0;
        }
        let prod: f64 = self.a.iter().map(|&ai| self.beta - ai).product();
        (-prod).powf(-0.5)
    }

    /// The same constant recovered numerically from the defining identity
    /// c^2 prod (z - a_i) = -f(psi(z)) (beta - z)^{2l} at a sample point.
    pub fn c_numeric(&self) -> Result<f64> {
        if self.l % 2 == 1 {
            return Ok(1.0);
        }
        let cfg = self.curve_config()?;
        let z = Complex64::new(self.beta + 0.321, 0.413);
        let num = -cfg.f_complex(self.psi(z)) * (self.beta - z).powu(2 * self.l as u32);
        let den = self.rhs(z);
        let c2 = num / den;
        if c2.im.abs() > 1e-8 * c2.norm() || c2.re <= 0.0 {
            return Err(Error::NoSolution(format!(
                "scaling identity yields c^2 = {c2}, not a positive real"
            )));
        }
        Ok(c2.re.sqrt())
    }
}

/// A point of the ALE model surface.
#[derive(Clone, Copy, Debug)]
pub struct AlePoint {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl AlePoint {
    /// |x y - prod (z - a_i)|, the surface residual.
    pub fn residual(&self, acfg: &AleConfig) -> f64 {
        (self.x * self.y - acfg.rhs(self.z)).norm()
    }

    /// The real structure of the ALE model.
    pub fn tau(&self, acfg: &AleConfig) -> AlePoint {
        let s = if acfg.l % 2 == 1 { -1.0 } else { 1.0 };
        AlePoint {
            x: s * self.y.conj(),
            y: s * self.x.conj(),
            z: self.z.conj(),
        }
    }
}

/// A surface point over z with the x-coordinate prescribed.
pub fn ale_point(acfg: &AleConfig, z: Complex64, x: Complex64) -> Result<AlePoint> {
    if x.norm() == 0.0 {
        return Err(Error::InvalidConfig("x = 0 does not determine a chart point".into()));
    }
    Ok(AlePoint {
        x,
        y: acfg.rhs(z) / x,
        z,
    })
}

/// The isomorphism onto the cone surface u v = -f of the matched branch
/// configuration: (x, -y, z) for odd l, and the Moebius-twisted map
/// (-c x / (beta - z)^l, -c y / (beta - z)^l, psi(z)) for even l.
pub fn ale_map(acfg: &AleConfig, cfg: &BranchConfig, p: &AlePoint) -> Result<SurfacePoint> {
    if acfg.l % 2 == 1 {
        SurfacePoint::from_uv(cfg, p.z, p.x, -p.y)
    } else {
        let d = Complex64::new(acfg.beta, 0.0) - p.z;
        if d.norm() < 1e-12 {
            return Err(Error::InvalidConfig(
                "the Moebius pole maps to the line at infinity".into(),
            ));
        }
        let c = acfg.c_constant();
        let s = c / d.powu(acfg.l as u32);
        SurfacePoint::from_uv(cfg, acfg.psi(p.z), -s * p.x, -s * p.y)
    }
}
