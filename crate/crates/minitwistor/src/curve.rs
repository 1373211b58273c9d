//! The hyperelliptic curve w^2 = -f(z), f = prod (z - b_j) over the 2g+2
//! ordered real branch points, with explicit sheet bookkeeping.
//!
//! Branch cuts run along the g+1 real intervals K_i = [lambda_i, lambda'_i].
//! Sheet + is the analytic branch of w = sqrt(-f) on the cut plane normalized
//! to be positive on K_{g+1} approached from the upper half-plane. On K_i the
//! upper-edge value of sheet + is (-1)^(g+1-i) sqrt(-f): the sign alternates
//! between consecutive circles, which is forced by analyticity across the gaps.

use crate::error::{Error, Result};
use crate::numerics::{integrate_adaptive, Poly};
use crate::tol;
use num_complex::Complex64;

pub const MAX_GENUS: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct BranchConfig {
    genus: usize,
    branch_points: Vec<f64>,
}

impl BranchConfig {
    pub fn new(branch_points: Vec<f64>) -> Result<Self> {
        let n = branch_points.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "need an even number >= 4 of branch points, got {n}"
            )));
        }
        if branch_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "branch points must be strictly increasing".into(),
            ));
        }
        if !branch_points.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidConfig("branch points must be finite".into()));
        }
        let genus = n / 2 - 1;
        if genus > MAX_GENUS {
            return Err(Error::InvalidConfig(format!("genus {genus} too large")));
        }
        Ok(BranchConfig { genus, branch_points })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn branch_points(&self) -> &[f64] {
        &self.branch_points
    }

    /// lambda_i, 1-based circle index.
    pub fn lambda(&self, i: usize) -> f64 {
        self.branch_points[2 * (i - 1)]
    }

    /// lambda'_i, 1-based circle index.
    pub fn lambda_p(&self, i: usize) -> f64 {
        self.branch_points[2 * i - 1]
    }

    /// K_i = [lambda_i, lambda'_i], 1-based, i in 1..=g+1.
    pub fn k_interval(&self, i: usize) -> (f64, f64) {
        (self.lambda(i), self.lambda_p(i))
    }

    /// Gap between K_i and K_{i+1}, 1-based, i in 1..=g.
    pub fn gap_interval(&self, i: usize) -> (f64, f64) {
        (self.lambda_p(i), self.lambda(i + 1))
    }

    pub fn min_gap(&self) -> f64 {
        self.branch_points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn f_poly(&self) -> Poly {
        Poly::from_roots(&self.branch_points)
    }

    pub fn f_real(&self, x: f64) -> f64 {
        self.branch_points.iter().map(|b| x - b).product()
    }

    pub fn f_complex(&self, z: Complex64) -> Complex64 {
        self.branch_points
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, b| acc * (z - b))
    }

    /// -f(z)/((z-lambda_i)(lambda'_i - z)) restricted to circle i: the positive
    /// analytic factor under the Chebyshev parameterization.
    pub fn circle_rest(&self, i: usize, x: f64) -> f64 {
        let (a, b) = self.k_interval(i);
        self.branch_points
            .iter()
            .filter(|&&v| v != a && v != b)
            .map(|v| x - v)
            .product()
    }

    /// Plain text record: line 1 genus, line 2 branch points.
    pub fn to_text(&self) -> String {
        let pts: Vec<String> = self.branch_points.iter().map(|x| format!("{x}")).collect();
        format!("{}\n{}\n", self.genus, pts.join(" "))
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let g: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidConfig("empty config".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::InvalidConfig(format!("bad genus line: {e}")))?;
        let pts: Vec<f64> = lines
            .next()
            .ok_or_else(|| Error::InvalidConfig("missing branch point line".into()))?
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidConfig(format!("bad branch point: {e}")))?;
        let cfg = BranchConfig::new(pts)?;
        if cfg.genus != g {
            return Err(Error::InvalidConfig(format!(
                "genus line says {g} but {} branch points imply {}",
                cfg.branch_points.len(),
                cfg.genus
            )));
        }
        Ok(cfg)
    }

    /// Sign of sheet + on the upper edge of K_i: (-1)^(g+1-i).
    pub fn sheet_sign(&self, i: usize) -> f64 {
        if (self.genus + 1 - i) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Canonical test configs.
pub fn g1_config() -> BranchConfig {
    BranchConfig::new(vec![-2.0, -1.0, 1.0, 2.0]).unwrap()
}
pub fn g2_config() -> BranchConfig {
    BranchConfig::new(vec![-5.0, -4.0, -2.0, -1.0, 1.0, 2.0]).unwrap()
}
pub fn g3_config() -> BranchConfig {
    BranchConfig::new(vec![-7.0, -6.0, -4.0, -3.0, -1.0, 0.0, 2.0, 3.0]).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheet {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub z: Complex64,
    pub w: Complex64,
    pub sheet: Sheet,
}

/// w on sheet + as a single analytic branch on the cut plane:
/// w_+(z) = -i * prod_i sqrt(z - lambda_i) sqrt(z - lambda'_i)
/// with principal square roots (each pair has its cut exactly on K_i).
pub fn w_plus(cfg: &BranchConfig, z: Complex64) -> Complex64 {
    let mut prod = Complex64::new(0.0, -1.0);
    for b in cfg.branch_points() {
        prod *= (z - b).sqrt();
    }
    prod
}

pub fn eval_w(cfg: &BranchConfig, z: Complex64, sheet: Sheet) -> Complex64 {
    let w = w_plus(cfg, z);
    match sheet {
        Sheet::Plus => w,
        Sheet::Minus => -w,
    }
}

impl CurvePoint {
    pub fn new(cfg: &BranchConfig, z: Complex64, sheet: Sheet) -> CurvePoint {
        CurvePoint { z, w: eval_w(cfg, z, sheet), sheet }
    }

    /// Build from explicit (z, w); validates the equation and tags the sheet.
    pub fn from_zw(cfg: &BranchConfig, z: Complex64, w: Complex64) -> Result<CurvePoint> {
        let f = cfg.f_complex(z);
        let scale = f.norm().max(1.0);
        if (w * w + f).norm() > 1e3 * tol::EPS_CURVE * scale {
            return Err(Error::InvalidConfig(format!(
                "point off the curve: |w^2 + f| = {:.3e}",
                (w * w + f).norm()
            )));
        }
        let wp = w_plus(cfg, z);
        let sheet = if wp.norm() < 1e-12 || (w - wp).norm() <= (w + wp).norm() {
            Sheet::Plus
        } else {
            Sheet::Minus
        };
        Ok(CurvePoint { z, w, sheet })
    }

    /// Ramification point by flat index 0..2g+2 (even -> r_i, odd -> r'_i).
    pub fn ramification(cfg: &BranchConfig, idx: usize) -> CurvePoint {
        CurvePoint {
            z: Complex64::new(cfg.branch_points()[idx], 0.0),
            w: Complex64::new(0.0, 0.0),
            sheet: Sheet::Plus,
        }
    }

    /// Hyperelliptic involution tau(z, w) = (z, -w).
    pub fn tau(&self) -> CurvePoint {
        CurvePoint {
            z: self.z,
            w: -self.w,
            sheet: match self.sheet {
                Sheet::Plus => Sheet::Minus,
                Sheet::Minus => Sheet::Plus,
            },
        }
    }

    pub fn is_ramification(&self, cfg: &BranchConfig) -> bool {
        let scale = cfg.min_gap();
        cfg.branch_points()
            .iter()
            .any(|b| (self.z - b).norm() < 1e-9 * scale)
            && self.w.norm() < 1e-6
    }
}

/// Point of a real circle Sigma^sigma_i at Chebyshev angle phi in [0, 2pi):
/// z = c - h cos(phi), w real, w > 0 on the sheet-+ upper edge for phi in
/// (0, pi). phi = 0 is r_i, phi = pi is r'_i; tau acts by phi -> 2pi - phi.
pub fn circle_point(cfg: &BranchConfig, i: usize, phi: f64) -> CurvePoint {
    let (a, b) = cfg.k_interval(i);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let z = c - h * phi.cos();
    let rest = cfg.circle_rest(i, z).max(0.0);
    let w = cfg.sheet_sign(i) * h * phi.sin() * rest.sqrt();
    let sheet = if phi.sin() >= 0.0 { Sheet::Plus } else { Sheet::Minus };
    // |w| = h |sin phi| sqrt(rest) = sqrt(-f); the sheet-sign convention makes
    // w_+ equal to sheet_sign * sqrt(-f) on the upper edge.
    CurvePoint { z: Complex64::new(z, 0.0), w: Complex64::new(w, 0.0), sheet }
}

/// Recover the Chebyshev angle of a real circle point.
pub fn circle_angle(cfg: &BranchConfig, i: usize, p: &CurvePoint) -> f64 {
    let (a, b) = cfg.k_interval(i);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let t = ((c - p.z.re) / h).clamp(-1.0, 1.0);
    let phi = t.acos();
    let upper = cfg.sheet_sign(i) * p.w.re >= 0.0;
    if upper {
        phi
    } else {
        (2.0 * std::f64::consts::PI - phi) % (2.0 * std::f64::consts::PI)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleId {
    /// Real circle Sigma^sigma_i, i in 1..=g+1.
    Circle(usize),
    /// A_i over the gap between K_i and K_{i+1}, i in 1..=g.
    ACycle(usize),
}

#[derive(Clone, Debug)]
pub struct CyclePath {
    pub id: CycleId,
    /// (z-interval, traversed on the edge with this sign of w relative to
    /// sqrt(|f|); orientation by the interval order a < b means increasing z).
    pub segments: Vec<(f64, f64, f64)>,
}

impl CyclePath {
    pub fn new(cfg: &BranchConfig, id: CycleId) -> CyclePath {
        let segments = match id {
            CycleId::Circle(i) => {
                let (a, b) = cfg.k_interval(i);
                let s = cfg.sheet_sign(i);
                // out on the sheet-+ upper edge, back on the lower edge
                vec![(a, b, s), (b, a, -s)]
            }
            CycleId::ACycle(i) => {
                let (a, b) = cfg.gap_interval(i);
                let s = cfg.sheet_sign(i); // sign of Im(w_+)/|w| on the gap is -(-1)^(g+1-i)... fixed below
                vec![(a, b, s), (b, a, -s)]
            }
        };
        CyclePath { id, segments }
    }
}

/// Integral of z^(j-1)/sqrt(pos(z)) over [a, b] where pos has simple zeros at
/// the endpoints among the branch points: Chebyshev substitution makes the
/// integrand analytic.
fn edge_integral(cfg: &BranchConfig, a: f64, b: f64, j: usize, minus_f: bool) -> Result<f64> {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let rest: Vec<f64> = cfg
        .branch_points()
        .iter()
        .copied()
        .filter(|&v| v != a && v != b)
        .collect();
    let sign = if minus_f { -1.0 } else { 1.0 };
    let mut f = |t: f64| {
        let z = c - h * t.cos();
        // pos(z)/((z-a)(b-z)) = sign * prod over remaining factors; the sign
        // makes it positive on (a, b).
        let r: f64 = rest.iter().map(|v| z - v).product::<f64>() * -sign;
        Complex64::new(z.powi(j as i32 - 1) / r.sqrt(), 0.0)
    };
    let v = integrate_adaptive(&mut f, 0.0, std::f64::consts::PI, tol::EPS_QUAD, 1.0)?;
    Ok(v.re)
}

/// Integral of the holomorphic basis vector over a homology cycle, with the
/// frozen orientation conventions. Circles give real vectors, A-cycles pure
/// imaginary ones.
pub fn integrate_basis(cfg: &BranchConfig, path: &CyclePath) -> Result<Vec<Complex64>> {
    let g = cfg.genus();
    let mut out = Vec::with_capacity(g);
    match path.id {
        CycleId::Circle(i) => {
            let (a, b) = cfg.k_interval(i);
            let s = cfg.sheet_sign(i);
            for j in 1..=g {
                let v = edge_integral(cfg, a, b, j, true)?;
                out.push(Complex64::new(2.0 * s * v, 0.0));
            }
        }
        CycleId::ACycle(i) => {
            let (a, b) = cfg.gap_interval(i);
            // On the gap, sheet + has w = -i (-1)^(g+1-i) sqrt(f), so
            // 1/w = i (-1)^(g+1-i) / sqrt(f).
            let s = cfg.sheet_sign(i);
            for j in 1..=g {
                let v = edge_integral(cfg, a, b, j, false)?;
                out.push(Complex64::new(0.0, 2.0 * s * v));
            }
        }
    }
    Ok(out)
}

/// Basis integrand vector omega = (z^(j-1)/w)_{j=1..g}.
pub fn holomorphic_basis(cfg: &BranchConfig, p: &CurvePoint) -> Result<Vec<Complex64>> {
    if p.w.norm() < 1e-13 {
        return Err(Error::RamificationPoint);
    }
    let g = cfg.genus();
    let mut out = Vec::with_capacity(g);
    let mut zp = Complex64::new(1.0, 0.0);
    for _ in 0..g {
        out.push(zp / p.w);
        zp *= p.z;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    CPg2,
    CPg3,
}

#[derive(Clone, Debug)]
pub struct EmbeddedPoint {
    pub coords: Vec<Complex64>,
    pub ambient: Ambient,
}

/// Projective embedding by (1, z, ..., z^(g+1), w) resp. (..., w, y) with
/// y = 0 on the branch curve.
pub fn embed(cfg: &BranchConfig, p: &CurvePoint, ambient: Ambient) -> EmbeddedPoint {
    let g = cfg.genus();
    let mut coords = Vec::with_capacity(g + 4);
    let mut zp = Complex64::new(1.0, 0.0);
    for _ in 0..=(g + 1) {
        coords.push(zp);
        zp *= p.z;
    }
    coords.push(p.w);
    if ambient == Ambient::CPg3 {
        coords.push(Complex64::new(0.0, 0.0));
    }
    EmbeddedPoint { coords, ambient }
}
