//! Period lattice, Abel map, and torus arithmetic on the Jacobian.
//!
//! The lattice is generated by the g real circle periods (circles 1..g) and
//! the g pure-imaginary A-cycle periods, so the Jacobian splits into real and
//! imaginary fractional coordinates. With the frozen sheet conventions the
//! g+1 circle period vectors sum to zero.
//!
//! Fast Abel evaluation on the real circles goes through precomputed
//! cumulative tables in the Chebyshev angle; off-circle points use canonical
//! path integration: along the real axis from r_1 with semicircular detours
//! over intervening branch cuts, then straight to the target.

use crate::curve::{
    circle_angle, integrate_basis, w_plus, BranchConfig, CurvePoint, CyclePath,
    CycleId,
};
use crate::error::{Error, Result};
use crate::numerics::{gl8, integrate_adaptive, integrate_gl};
use crate::tol;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

const TABLE_KNOTS: usize = 4096;

/// Point of the Jacobian torus in fractional coordinates with respect to the
/// generator columns: x along the real block, y along the imaginary block,
/// each entry in [0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct JacPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn frac(t: f64) -> f64 {
    let mut v = t - t.floor();
    if v >= 1.0 {
        v = 0.0;
    }
    v
}

fn wrap_diff(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

impl JacPoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> JacPoint {
        JacPoint {
            x: x.into_iter().map(frac).collect(),
            y: y.into_iter().map(frac).collect(),
        }
    }

    pub fn zero(g: usize) -> JacPoint {
        JacPoint { x: vec![0.0; g], y: vec![0.0; g] }
    }

    /// Wrap-around distance on the torus (Euclidean over wrapped coordinates).
    pub fn dist(&self, other: &JacPoint) -> f64 {
        let s: f64 = self
            .x
            .iter()
            .zip(&other.x)
            .chain(self.y.iter().zip(&other.y))
            .map(|(a, b)| {
                let d = wrap_diff(*a, *b);
                d * d
            })
            .sum();
        s.sqrt()
    }

    pub fn neg(&self) -> JacPoint {
        JacPoint::new(
            self.x.iter().map(|v| -v).collect(),
            self.y.iter().map(|v| -v).collect(),
        )
    }

    pub fn add(&self, other: &JacPoint) -> JacPoint {
        JacPoint::new(
            self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn scale(&self, k: f64) -> JacPoint {
        JacPoint::new(
            self.x.iter().map(|v| k * v).collect(),
            self.y.iter().map(|v| k * v).collect(),
        )
    }
}

/// Multiplication by 2 on the torus.
pub fn doubling(p: &JacPoint) -> JacPoint {
    p.scale(2.0)
}

/// Real 2-torsion element of the identity component, encoded by which real
/// generators enter with coefficient 1/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionElement {
    pub bits: Vec<bool>,
}

impl TorsionElement {
    pub fn from_index(g: usize, idx: usize) -> TorsionElement {
        TorsionElement {
            bits: (0..g).map(|i| (idx >> i) & 1 == 1).collect(),
        }
    }

    /// The element (1/2) sum bits_i Pi_i as a torus point.
    pub fn as_jac(&self) -> JacPoint {
        let g = self.bits.len();
        JacPoint::new(
            self.bits.iter().map(|&b| if b { 0.5 } else { 0.0 }).collect(),
            vec![0.0; g],
        )
    }

    /// Imaginary half-lattice displacement selecting a real component of the
    /// Jacobian.
    pub fn component_offset(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b { 0.5 } else { 0.0 }).collect()
    }
}

/// Cumulative Abel table along one real circle in the Chebyshev angle.
struct CircleTable {
    base: Vec<Complex64>,
    /// cum[k][j] = integral of the (true, sheet-signed) basis velocity from 0
    /// to 2 pi k / knots.
    cum: Vec<Vec<f64>>,
    full: Vec<f64>,
}

#[derive(Debug)]
pub struct PeriodLattice {
    cfg: BranchConfig,
    circle_periods: Vec<Vec<Complex64>>,
    a_periods: Vec<Vec<Complex64>>,
    real_block: DMatrix<f64>,
    imag_block: DMatrix<f64>,
    real_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    imag_lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    pub imag_condition: f64,
    tables: Vec<CircleTable>,
    /// Raw Abel values of the ramification points, flat index 0..2g+2.
    half_table: Vec<Vec<Complex64>>,
}

impl std::fmt::Debug for CircleTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CircleTable({} knots)", self.cum.len() - 1)
    }
}

/// Abel basis velocity along circle i: d a_j / d phi = s_i z^(j-1) /
/// sqrt(rest(z)), analytic in phi.
pub fn circle_velocity(cfg: &BranchConfig, i: usize, phi: f64, out: &mut [f64]) {
    let (a, b) = cfg.k_interval(i);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let z = c - h * phi.cos();
    let rest = cfg.circle_rest(i, z).max(f64::MIN_POSITIVE);
    let s = cfg.sheet_sign(i) / rest.sqrt();
    let mut zp = 1.0;
    for o in out.iter_mut() {
        *o = s * zp;
        zp *= z;
    }
}

fn build_table(cfg: &BranchConfig, i: usize, base: Vec<Complex64>) -> CircleTable {
    let g = cfg.genus();
    let h = 2.0 * PI / TABLE_KNOTS as f64;
    let mut cum = Vec::with_capacity(TABLE_KNOTS + 1);
    cum.push(vec![0.0; g]);
    let mut v = vec![0.0; g];
    for k in 0..TABLE_KNOTS {
        let mut acc = cum[k].clone();
        for j in 0..g {
            let mut f = |phi: f64| {
                circle_velocity(cfg, i, phi, &mut v);
                Complex64::new(v[j], 0.0)
            };
            acc[j] += integrate_gl(&mut f, k as f64 * h, (k + 1) as f64 * h, gl8()).re;
        }
        cum.push(acc);
    }
    let full = cum[TABLE_KNOTS].clone();
    CircleTable { base, cum, full }
}

impl CircleTable {
    fn increment(&self, cfg: &BranchConfig, i: usize, phi: f64, out: &mut [f64]) {
        let g = out.len();
        let twopi = 2.0 * PI;
        let mut p = phi % twopi;
        if p < 0.0 {
            p += twopi;
        }
        let winds = ((phi - p) / twopi).round();
        let h = twopi / TABLE_KNOTS as f64;
        let k = ((p / h).floor() as usize).min(TABLE_KNOTS - 1);
        let mut v = vec![0.0; g];
        for j in 0..g {
            let mut f = |s: f64| {
                circle_velocity(cfg, i, s, &mut v);
                Complex64::new(v[j], 0.0)
            };
            out[j] = self.cum[k][j]
                + integrate_gl(&mut f, k as f64 * h, p, gl8()).re
                + winds * self.full[j];
        }
    }
}

/// Straight-line or arc segments of the canonical Abel path, with flags for
/// inverse-square-root endpoint singularities at ramification points.
enum Seg {
    Line { z0: Complex64, z1: Complex64, s0: bool, s1: bool },
    Arc { i: usize, th0: f64, th1: f64, s0: bool, s1: bool },
}

impl Seg {
    fn at(&self, cfg: &BranchConfig, t: f64) -> (Complex64, Complex64) {
        match *self {
            Seg::Line { z0, z1, .. } => (z0 + (z1 - z0) * t, z1 - z0),
            Seg::Arc { i, th0, th1, .. } => {
                let (a, b) = cfg.k_interval(i);
                let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
                let th = th0 + (th1 - th0) * t;
                let e = Complex64::new(0.0, th).exp();
                (c + h * e, Complex64::new(0.0, h * (th1 - th0)) * e)
            }
        }
    }

    fn sings(&self) -> (bool, bool) {
        match *self {
            Seg::Line { s0, s1, .. } | Seg::Arc { s0, s1, .. } => (s0, s1),
        }
    }
}

/// Integrate F over the unit parameter interval, substituting t^2 at flagged
/// endpoints to absorb inverse-square-root singularities.
fn integrate_unit(
    f: &mut dyn FnMut(f64) -> Complex64,
    s0: bool,
    s1: bool,
) -> Result<Complex64> {
    let half = 0.5f64;
    let left = if s0 {
        let mut g = |t: f64| f(t * t) * 2.0 * t;
        integrate_adaptive(&mut g, 0.0, half.sqrt(), tol::EPS_QUAD, 1.0)?
    } else {
        integrate_adaptive(f, 0.0, half, tol::EPS_QUAD, 1.0)?
    };
    let right = if s1 {
        let mut g = |t: f64| f(1.0 - t * t) * 2.0 * t;
        integrate_adaptive(&mut g, 0.0, half.sqrt(), tol::EPS_QUAD, 1.0)?
    } else {
        integrate_adaptive(f, half, 1.0, tol::EPS_QUAD, 1.0)?
    };
    Ok(left + right)
}

/// Integrate the basis vector along a path of segments on sheet +.
fn path_basis(cfg: &BranchConfig, segs: &[Seg]) -> Result<Vec<Complex64>> {
    let g = cfg.genus();
    let mut acc = vec![Complex64::new(0.0, 0.0); g];
    for seg in segs {
        let (s0, s1) = seg.sings();
        for (j, a) in acc.iter_mut().enumerate() {
            let mut f = |t: f64| {
                let (z, dz) = seg.at(cfg, t);
                z.powu(j as u32) / w_plus(cfg, z) * dz
            };
            *a += integrate_unit(&mut f, s0, s1)?;
        }
    }
    Ok(acc)
}

fn is_branch(cfg: &BranchConfig, x: f64) -> bool {
    let s = cfg.min_gap();
    cfg.branch_points().iter().any(|b| (x - b).abs() < 1e-12 * s.max(1.0))
}

/// Route from r_1 along the real axis (detouring over cuts) to the point of
/// the route with real part x; returns segments and the route endpoint.
fn route_to(cfg: &BranchConfig, x: f64) -> (Vec<Seg>, Complex64) {
    let g = cfg.genus();
    let mut segs = Vec::new();
    let l1 = cfg.lambda(1);
    if x <= l1 {
        let z1 = Complex64::new(x, 0.0);
        if x < l1 {
            segs.push(Seg::Line {
                z0: Complex64::new(l1, 0.0),
                z1,
                s0: true,
                s1: is_branch(cfg, x),
            });
        }
        return (segs, z1);
    }
    for i in 1..=(g + 1) {
        let (a, b) = cfg.k_interval(i);
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        if x <= b {
            // ends on the detour arc over cut i; z = c + h e^{i theta}
            let theta_end = ((x - c) / h).clamp(-1.0, 1.0).acos();
            segs.push(Seg::Arc {
                i,
                th0: PI,
                th1: theta_end,
                s0: true,
                s1: theta_end < 1e-12,
            });
            let end = Complex64::new(c + h * theta_end.cos(), h * theta_end.sin());
            return (segs, end);
        }
        segs.push(Seg::Arc { i, th0: PI, th1: 0.0, s0: true, s1: true });
        let next = if i <= g { cfg.lambda(i + 1) } else { f64::INFINITY };
        if x < next || i == g + 1 {
            let z1 = Complex64::new(x, 0.0);
            if x > b {
                segs.push(Seg::Line {
                    z0: Complex64::new(b, 0.0),
                    z1,
                    s0: true,
                    s1: is_branch(cfg, x),
                });
            }
            return (segs, z1);
        }
        segs.push(Seg::Line {
            z0: Complex64::new(b, 0.0),
            z1: Complex64::new(next, 0.0),
            s0: true,
            s1: true,
        });
    }
    unreachable!()
}

pub fn period_lattice(cfg: &BranchConfig) -> Result<PeriodLattice> {
    let g = cfg.genus();
    let mut circle_periods = Vec::with_capacity(g + 1);
    for i in 1..=(g + 1) {
        circle_periods.push(integrate_basis(cfg, &CyclePath::new(cfg, CycleId::Circle(i)))?);
    }
    let mut a_periods = Vec::with_capacity(g);
    for i in 1..=g {
        a_periods.push(integrate_basis(cfg, &CyclePath::new(cfg, CycleId::ACycle(i)))?);
    }
    let real_block = DMatrix::from_fn(g, g, |j, i| circle_periods[i][j].re);
    let imag_block = DMatrix::from_fn(g, g, |j, i| a_periods[i][j].im);
    let real_lu = real_block.clone().lu();
    let imag_lu = imag_block.clone().lu();
    if real_lu.determinant().abs() < 1e-300 || imag_lu.determinant().abs() < 1e-300 {
        return Err(Error::InvalidConfig("degenerate period blocks".into()));
    }
    let sv = imag_block.clone().svd(false, false).singular_values;
    let imag_condition = sv[0] / sv[sv.len() - 1];

    // raw Abel values of the left ramification points via canonical paths
    let mut half_table: Vec<Vec<Complex64>> = vec![Vec::new(); 2 * g + 2];
    let mut tables = Vec::with_capacity(g + 1);
    for i in 1..=(g + 1) {
        let (segs, _) = route_to(cfg, cfg.lambda(i));
        let base = path_basis(cfg, &segs)?;
        half_table[2 * (i - 1)] = base.clone();
        let table = build_table(cfg, i, base.clone());
        // r'_i is the angle-pi point of circle i
        let mut inc = vec![0.0; g];
        table.increment(cfg, i, PI, &mut inc);
        half_table[2 * i - 1] = base
            .iter()
            .zip(&inc)
            .map(|(b, d)| b + Complex64::new(*d, 0.0))
            .collect();
        tables.push(table);
    }

    Ok(PeriodLattice {
        cfg: cfg.clone(),
        circle_periods,
        a_periods,
        real_block,
        imag_block,
        real_lu,
        imag_lu,
        imag_condition,
        tables,
        half_table,
    })
}

impl PeriodLattice {
    pub fn cfg(&self) -> &BranchConfig {
        &self.cfg
    }

    pub fn genus(&self) -> usize {
        self.cfg.genus()
    }

    /// Period vector of circle i, 1-based, i in 1..=g+1 (real).
    pub fn circle_period(&self, i: usize) -> &[Complex64] {
        &self.circle_periods[i - 1]
    }

    /// Period vector of A-cycle i, 1-based (pure imaginary).
    pub fn a_period(&self, i: usize) -> &[Complex64] {
        &self.a_periods[i - 1]
    }

    pub fn real_block(&self) -> &DMatrix<f64> {
        &self.real_block
    }

    pub fn imag_block(&self) -> &DMatrix<f64> {
        &self.imag_block
    }

    /// Reduce a raw Abel vector to fractional torus coordinates.
    pub fn reduce(&self, raw: &[Complex64]) -> JacPoint {
        let re = DVector::from_iterator(raw.len(), raw.iter().map(|v| v.re));
        let im = DVector::from_iterator(raw.len(), raw.iter().map(|v| v.im));
        let x = self.real_lu.solve(&re).expect("real block is invertible");
        let y = self.imag_lu.solve(&im).expect("imag block is invertible");
        JacPoint::new(x.iter().copied().collect(), y.iter().copied().collect())
    }

    /// Representative raw vector of a torus point in the fundamental domain.
    pub fn lift(&self, p: &JacPoint) -> Vec<Complex64> {
        let g = self.genus();
        let mut out = vec![Complex64::new(0.0, 0.0); g];
        for (i, (&xi, &yi)) in p.x.iter().zip(&p.y).enumerate() {
            for j in 0..g {
                out[j] += Complex64::new(
                    xi * self.real_block[(j, i)],
                    yi * self.imag_block[(j, i)],
                );
            }
        }
        out
    }

    /// Raw Abel value of a ramification point by flat index 0..2g+2
    /// (even: r_i, odd: r'_i).
    pub fn half_period_raw(&self, idx: usize) -> &[Complex64] {
        &self.half_table[idx]
    }

    /// Abel images of all ramification points as torus points.
    pub fn half_period_table(&self) -> Vec<JacPoint> {
        (0..self.half_table.len())
            .map(|i| self.reduce(&self.half_table[i]))
            .collect()
    }

    /// Raw Abel value on circle i at Chebyshev angle phi (fast table path).
    pub fn abel_circle_raw(&self, i: usize, phi: f64) -> Vec<Complex64> {
        let g = self.genus();
        let mut inc = vec![0.0; g];
        self.tables[i - 1].increment(&self.cfg, i, phi, &mut inc);
        self.tables[i - 1]
            .base
            .iter()
            .zip(&inc)
            .map(|(b, d)| b + Complex64::new(*d, 0.0))
            .collect()
    }

    pub fn abel_circle(&self, i: usize, phi: f64) -> JacPoint {
        self.reduce(&self.abel_circle_raw(i, phi))
    }

    /// Which circle (if any) a point lies on.
    pub fn on_circle(&self, p: &CurvePoint) -> Option<usize> {
        let scale = self.cfg.min_gap().max(1.0);
        if p.z.im.abs() > 1e-10 * scale || p.w.im.abs() > 1e-8 * (1.0 + p.w.norm()) {
            return None;
        }
        (1..=(self.genus() + 1)).find(|&i| {
            let (a, b) = self.cfg.k_interval(i);
            p.z.re >= a - 1e-10 * scale && p.z.re <= b + 1e-10 * scale
        })
    }
}

/// Raw Abel value (canonical-path representative) of a general curve point.
pub fn abel_raw(lat: &PeriodLattice, p: &CurvePoint) -> Result<Vec<Complex64>> {
    let cfg = lat.cfg();
    if let Some(i) = lat.on_circle(p) {
        let phi = circle_angle(cfg, i, p);
        return Ok(lat.abel_circle_raw(i, phi));
    }
    if p.z.im < 0.0 {
        let q = CurvePoint::from_zw(cfg, p.z.conj(), p.w.conj())?;
        let v = abel_raw(lat, &q)?;
        return Ok(v.iter().map(|c| c.conj()).collect());
    }
    let (mut segs, end) = route_to(cfg, p.z.re);
    if (p.z - end).norm() > 1e-14 {
        segs.push(Seg::Line {
            z0: end,
            z1: p.z,
            s0: is_branch(cfg, end.re) && end.im == 0.0,
            s1: false,
        });
    }
    let v = path_basis(cfg, &segs)?;
    // select the sheet by comparing w with the analytic branch
    let wp = w_plus(cfg, p.z);
    if (p.w - wp).norm() <= (p.w + wp).norm() {
        Ok(v)
    } else {
        Ok(v.iter().map(|c| -c).collect())
    }
}

/// Abel map to the Jacobian torus, base point r_1.
pub fn abel(lat: &PeriodLattice, p: &CurvePoint) -> Result<JacPoint> {
    Ok(lat.reduce(&abel_raw(lat, p)?))
}

/// Abel image of a divisor (sum over points).
pub fn abel_divisor(lat: &PeriodLattice, pts: &[CurvePoint]) -> Result<JacPoint> {
    let g = lat.genus();
    let mut acc = vec![Complex64::new(0.0, 0.0); g];
    for p in pts {
        for (a, v) in acc.iter_mut().zip(abel_raw(lat, p)?) {
            *a += v;
        }
    }
    Ok(lat.reduce(&acc))
}
