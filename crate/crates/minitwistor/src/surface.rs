//! The compact surface T in CP_{g+3}: double cover of the cone over the
//! rational normal curve branched along Sigma, with its real structure,
//! S^1-action, minitwistor lines, and the two quadric coverings per boundary
//! data.
//!
//! Affine model: uv = -f(z) with u = y + iw, v = y - iw, so y^2 = -f - w^2.
//! The real structure is sigma(z, u, v) = (conj z, conj v, conj u); the
//! S^1-action is (z, u, v) -> (z, e^{i theta} u, e^{-i theta} v), which on
//! hyperplane coefficients rotates the (c_w, c_y) pair.
//!
//! A real hyperplane with (c_w, c_y) = r(cos theta, sin theta), r > 0, can be
//! rotated to the frame c_y = 0, where its section is the graph w = W(z) =
//! -P(z)/r over the curve locus and the intersection with T is governed by
//! R(z) = -f(z) - W(z)^2. Membership in the minitwistor-line family is
//! exactly the factorization R = S^2 q with S carrying one double root per
//! band K_1..K_g and q a concave-down quadratic with roots in the last band.

use crate::curve::BranchConfig;
use crate::error::{Error, Result};
use crate::numerics::Poly;
use crate::seifert::{BoundaryData, RealHyperplane};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Finite,
    /// The cone singularity with u dominant at infinity.
    PInf,
    /// The cone singularity with v dominant at infinity.
    PBarInf,
}

#[derive(Clone, Copy, Debug)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub chart: Chart,
}

impl SurfacePoint {
    pub fn from_uv(cfg: &BranchConfig, z: Complex64, u: Complex64, v: Complex64) -> Result<SurfacePoint> {
        let f = cfg.f_complex(z);
        let scale = f.norm().max(u.norm() * v.norm()).max(1.0);
        if (u * v + f).norm() > 1e4 * crate::tol::EPS_CURVE * scale {
            return Err(Error::InvalidConfig(format!(
                "point off the surface: |uv + f| = {:.3e}",
                (u * v + f).norm()
            )));
        }
        Ok(SurfacePoint { z, u, v, chart: Chart::Finite })
    }

    pub fn from_wy(cfg: &BranchConfig, z: Complex64, w: Complex64, y: Complex64) -> Result<SurfacePoint> {
        let i = Complex64::new(0.0, 1.0);
        SurfacePoint::from_uv(cfg, z, y + i * w, y - i * w)
    }

    pub fn infinity(bar: bool) -> SurfacePoint {
        SurfacePoint {
            z: Complex64::new(f64::INFINITY, 0.0),
            u: Complex64::new(0.0, 0.0),
            v: Complex64::new(0.0, 0.0),
            chart: if bar { Chart::PBarInf } else { Chart::PInf },
        }
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(0.0, -0.5) * (self.u - self.v)
    }

    pub fn y(&self) -> Complex64 {
        0.5 * (self.u + self.v)
    }

    pub fn sigma(&self) -> SurfacePoint {
        match self.chart {
            Chart::Finite => SurfacePoint {
                z: self.z.conj(),
                u: self.v.conj(),
                v: self.u.conj(),
                chart: Chart::Finite,
            },
            // sigma exchanges the two singular points
            Chart::PInf => SurfacePoint::infinity(true),
            Chart::PBarInf => SurfacePoint::infinity(false),
        }
    }

    pub fn is_sigma_fixed(&self) -> bool {
        let s = self.sigma();
        let scale = 1.0 + self.u.norm() + self.v.norm();
        self.chart == Chart::Finite
            && (self.z - s.z).norm() + (self.u - s.u).norm() + (self.v - s.v).norm()
                < 1e-8 * scale
    }
}

/// The two lifts of a cone point (z, w); they coincide when y = 0.
pub fn lift_to_t(cfg: &BranchConfig, z: Complex64, w: Complex64) -> (SurfacePoint, SurfacePoint) {
    let y2 = -cfg.f_complex(z) - w * w;
    let y = y2.sqrt();
    let i = Complex64::new(0.0, 1.0);
    let a = SurfacePoint { z, u: y + i * w, v: y - i * w, chart: Chart::Finite };
    let b = SurfacePoint { z, u: -y + i * w, v: -y - i * w, chart: Chart::Finite };
    (a, b)
}

/// S^1-action on points.
pub fn s1_act_point(theta: f64, x: &SurfacePoint) -> SurfacePoint {
    let e = Complex64::new(0.0, theta).exp();
    match x.chart {
        Chart::Finite => SurfacePoint { z: x.z, u: e * x.u, v: x.v / e, chart: Chart::Finite },
        _ => *x,
    }
}

/// S^1-action on hyperplane coefficients (c_0, ..., c_{g+1}, c_w, c_y): the
/// polynomial part is fixed and (c_w, c_y) rotates so that the incidence
/// pairing with rotated points is preserved.
pub fn s1_act_coeffs(theta: f64, c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let (cw, cy) = (c[n - 2], c[n - 1]);
    let mut out = c.to_vec();
    out[n - 2] = cw * theta.cos() + cy * theta.sin();
    out[n - 1] = cy * theta.cos() - cw * theta.sin();
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum LineKind {
    Regular,
    Irregular { lambda: f64 },
    Boundary,
}

/// Data of the rotated frame c_y = 0 in which the line is the graph
/// w = -P(z)/r.
#[derive(Clone, Debug)]
pub struct RotatedFrame {
    /// Rotated polynomial part, ascending, length g+2.
    pub p: Vec<f64>,
    /// Rotated c_w (positive).
    pub r: f64,
    /// Node z-values, one per band K_1..K_g.
    pub nodes_z: Vec<f64>,
    /// The residual quadratic q with R = S^2 q, ascending coefficients.
    pub q: [f64; 3],
    pub z_xi: f64,
    pub z_eta: f64,
}

impl RotatedFrame {
    pub fn w_of_z(&self, z: f64) -> f64 {
        -self.p.iter().rev().fold(0.0, |acc, c| acc * z + c) / self.r
    }

    pub fn q_of_z(&self, z: f64) -> f64 {
        self.q[0] + self.q[1] * z + self.q[2] * z * z
    }

    pub fn s_of_z(&self, z: f64) -> f64 {
        self.nodes_z.iter().map(|n| z - n).product()
    }
}

#[derive(Clone, Debug)]
pub struct MinitwistorLine {
    /// Normalized real coefficients (c_0, ..., c_{g+1}, c_w, c_y).
    pub coeffs: Vec<f64>,
    pub kind: LineKind,
    /// Rotation angle bringing the coefficients to the c_y = 0 frame.
    pub theta: f64,
    pub frame: Option<RotatedFrame>,
    /// Tangency nodes in the original frame (y = 0 in the rotated frame).
    pub nodes: Vec<SurfacePoint>,
    /// Sampled real circle in the original frame (single point for boundary
    /// kind, empty for irregular).
    pub real_circle: Vec<SurfacePoint>,
}

impl MinitwistorLine {
    /// c . m-hat on T: P(z) + c_w w + c_y y.
    pub fn eval(&self, x: &SurfacePoint) -> Complex64 {
        let n = self.coeffs.len();
        let mut p = Complex64::new(0.0, 0.0);
        for &c in self.coeffs[..n - 2].iter().rev() {
            p = p * x.z + c;
        }
        p + self.coeffs[n - 2] * x.w() + self.coeffs[n - 1] * x.y()
    }
}

/// Pull a CP_{g+2} hyperplane (Seifert output) back to CP_{g+3} (c_y = 0).
pub fn pullback_coeffs(h: &RealHyperplane) -> Vec<f64> {
    let mut c = h.coeffs.clone();
    c.push(0.0);
    c
}

fn polish_double_root(r: &Poly, rp: &Poly, z0: f64) -> f64 {
    // Newton on R' (simple zero at a double root of R)
    let rpp = rp.derivative();
    let mut z = z0;
    for _ in 0..40 {
        let d = rp.eval(z);
        let dd = rpp.eval(z);
        if dd == 0.0 {
            break;
        }
        let step = d / dd;
        z -= step;
        if step.abs() < 1e-15 * (1.0 + z.abs()) {
            break;
        }
    }
    let _ = r;
    z
}

/// Classify a real hyperplane of CP_{g+3} and build the line structure.
pub fn build_line(cfg: &BranchConfig, coeffs: &[f64], circle_samples: usize) -> Result<MinitwistorLine> {
    let g = cfg.genus();
    if coeffs.len() != g + 4 {
        return Err(Error::InvalidConfig(format!(
            "expected {} coefficients, got {}",
            g + 4,
            coeffs.len()
        )));
    }
    let nrm = coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if nrm == 0.0 {
        return Err(Error::InvalidConfig("zero hyperplane".into()));
    }
    let c: Vec<f64> = coeffs.iter().map(|v| v / nrm).collect();
    let (cw, cy) = (c[g + 2], c[g + 3]);
    let r = cw.hypot(cy);
    let scale = cfg.min_gap();

    if r < 1e-12 {
        // axis candidate: P must split into band roots rho_1..rho_g plus a
        // conic parameter lambda in the last band
        let p = Poly(c[..g + 2].to_vec());
        let roots = p.roots();
        let mut lambda = None;
        let mut hit = vec![false; g];
        let mut nodes = Vec::new();
        for z in &roots {
            if z.im.abs() > 1e-8 * scale {
                return Err(Error::NotInFamily("axis candidate with complex root".into()));
            }
            let x = z.re;
            let mut placed = false;
            for i in 1..=g {
                let (a, b) = cfg.k_interval(i);
                if x >= a - 1e-9 && x <= b + 1e-9 {
                    if hit[i - 1] {
                        return Err(Error::NotInFamily("two roots in one band".into()));
                    }
                    hit[i - 1] = true;
                    // the component over a band root passes the ramification
                    // lifts when the root is a branch point; record the node
                    // as the (doubled) cone point
                    let w = Complex64::new(0.0, 0.0);
                    let y2 = -cfg.f_real(x);
                    let y = Complex64::new(y2.max(0.0).sqrt(), 0.0);
                    nodes.push(SurfacePoint::from_wy(cfg, Complex64::new(x, 0.0), w, y)
                        .unwrap_or(SurfacePoint {
                            z: Complex64::new(x, 0.0),
                            u: y,
                            v: y,
                            chart: Chart::Finite,
                        }));
                    placed = true;
                    break;
                }
            }
            if !placed {
                let (a, b) = cfg.k_interval(g + 1);
                if x >= a - 1e-9 && x <= b + 1e-9 && lambda.is_none() {
                    lambda = Some(x);
                } else {
                    return Err(Error::NotInFamily("axis root outside the bands".into()));
                }
            }
        }
        let lambda = lambda.ok_or_else(|| Error::NotInFamily("axis without conic parameter".into()))?;
        if !hit.iter().all(|&h| h) {
            return Err(Error::NotInFamily("axis missing a band root".into()));
        }
        return Ok(MinitwistorLine {
            coeffs: c,
            kind: LineKind::Irregular { lambda },
            theta: 0.0,
            frame: None,
            nodes,
            real_circle: Vec::new(),
        });
    }

    let theta = cy.atan2(cw);
    let rc = s1_act_coeffs(theta, &c);
    debug_assert!(rc[g + 3].abs() < 1e-12);
    let p = Poly(rc[..g + 2].to_vec());
    // R(z) = -f - (P/r)^2, leading coefficient strictly negative
    let f = cfg.f_poly();
    let p2 = p.mul(&p).scale(1.0 / (r * r));
    let big_r = f.scale(-1.0).add(&p2.scale(-1.0));
    let rp = big_r.derivative();
    let roots = big_r.roots();
    if roots.len() != 2 * g + 2 {
        return Err(Error::NotInFamily("degenerate restriction".into()));
    }
    // cluster: two roots per band K_1..K_g (a coalescing pair), two in the
    // last band
    let mut nodes_z = Vec::with_capacity(g);
    let mut last_band = Vec::new();
    let mut buckets: Vec<Vec<Complex64>> = vec![Vec::new(); g + 1];
    let margin = 0.26 * scale;
    for z in &roots {
        let mut placed = false;
        for i in 1..=(g + 1) {
            let (a, b) = cfg.k_interval(i);
            if z.re >= a - margin && z.re <= b + margin && z.im.abs() < margin {
                buckets[i - 1].push(*z);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::NotInFamily(format!("intersection off the bands at {z}")));
        }
    }
    for i in 1..=g {
        if buckets[i - 1].len() != 2 {
            return Err(Error::NotInFamily(format!(
                "band {i} carries {} roots, expected a double point",
                buckets[i - 1].len()
            )));
        }
        let (a, b) = (buckets[i - 1][0], buckets[i - 1][1]);
        if (a - b).norm() > 1e-4 * scale.max(1.0) {
            return Err(Error::NotInFamily(format!("band {i} roots do not coalesce")));
        }
        let zn = polish_double_root(&big_r, &rp, 0.5 * (a.re + b.re));
        // double-root certificate: R and R' vanish, R'' < 0
        let cs = big_r.0.iter().map(|c| c.abs()).fold(0.0, f64::max)
            * (1.0 + zn.abs()).powi(2 * g as i32 + 2);
        if big_r.eval(zn).abs() > crate::tol::EPS_NODE * cs {
            return Err(Error::NotInFamily("node certificate failed".into()));
        }
        if rp.derivative().eval(zn) >= 0.0 {
            return Err(Error::NotInFamily("node concavity certificate failed".into()));
        }
        nodes_z.push(zn);
    }
    if buckets[g].len() != 2 {
        return Err(Error::NotInFamily("last band must carry the two circle endpoints".into()));
    }
    last_band.extend_from_slice(&buckets[g]);

    // deflate the double roots: residual quadratic q
    let mut defl: Vec<f64> = Vec::with_capacity(2 * g);
    for &zn in &nodes_z {
        defl.push(zn);
        defl.push(zn);
    }
    let q_poly = big_r.deflate(&defl);
    if q_poly.0.len() < 3 {
        return Err(Error::NotInFamily("unexpected deflation degree".into()));
    }
    let q = [q_poly.0[0], q_poly.0[1], q_poly.0[2]];
    if q[2] >= 0.0 {
        return Err(Error::NotInFamily("residual quadratic not concave".into()));
    }
    let disc = q[1] * q[1] - 4.0 * q[2] * q[0];
    if disc < -1e-9 * (q[1] * q[1] + q[2].abs() * q[0].abs() + 1e-300) {
        return Err(Error::NotInFamily("circle endpoints not real".into()));
    }
    let sq = disc.max(0.0).sqrt();
    let mut z_xi = (-q[1] + sq) / (2.0 * q[2]);
    let mut z_eta = (-q[1] - sq) / (2.0 * q[2]);
    if z_xi > z_eta {
        std::mem::swap(&mut z_xi, &mut z_eta);
    }
    {
        let (a, b) = cfg.k_interval(g + 1);
        if z_xi < a - 1e-6 * scale || z_eta > b + 1e-6 * scale {
            return Err(Error::NotInFamily("circle endpoints outside the last band".into()));
        }
    }
    let boundary = (z_eta - z_xi).abs() < 1e-6 * scale.max(1.0);
    let frame = RotatedFrame { p: p.0.clone(), r, nodes_z: nodes_z.clone(), q, z_xi, z_eta };

    // nodes in the original frame: rotated-frame points (z, W(z), 0) pushed
    // back by the inverse rotation
    let nodes: Vec<SurfacePoint> = nodes_z
        .iter()
        .map(|&zn| {
            let w = frame.w_of_z(zn);
            let rotated = SurfacePoint {
                z: Complex64::new(zn, 0.0),
                u: Complex64::new(0.0, w),
                v: Complex64::new(0.0, -w),
                chart: Chart::Finite,
            };
            s1_act_point(-theta, &rotated)
        })
        .collect();

    // closed-form real circle: z in [z_xi, z_eta], w = W(z), y = +/- S sqrt(q)
    let mut real_circle = Vec::new();
    if boundary {
        let z = 0.5 * (z_xi + z_eta);
        let w = frame.w_of_z(z);
        let rotated = SurfacePoint {
            z: Complex64::new(z, 0.0),
            u: Complex64::new(0.0, w),
            v: Complex64::new(0.0, -w),
            chart: Chart::Finite,
        };
        real_circle.push(s1_act_point(-theta, &rotated));
    } else {
        let n = circle_samples.max(4);
        for k in 0..n {
            // angle parameterization: z sweeps the arc twice, y switching sign
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let z = 0.5 * (z_xi + z_eta) - 0.5 * (z_eta - z_xi) * t.cos();
            let w = frame.w_of_z(z);
            let y = t.sin().signum() * (frame.s_of_z(z).abs()) * frame.q_of_z(z).max(0.0).sqrt()
                * frame.s_of_z(z).signum();
            let rotated = SurfacePoint {
                z: Complex64::new(z, 0.0),
                u: Complex64::new(y, w),
                v: Complex64::new(y, -w),
                chart: Chart::Finite,
            };
            real_circle.push(s1_act_point(-theta, &rotated));
        }
    }

    Ok(MinitwistorLine {
        coeffs: c,
        kind: if boundary { LineKind::Boundary } else { LineKind::Regular },
        theta,
        frame: Some(frame),
        nodes,
        real_circle,
    })
}

/// A point of CP_1 in homogeneous coordinates.
#[derive(Clone, Copy, Debug)]
pub struct Cp1(pub Complex64, pub Complex64);

impl Cp1 {
    pub fn finite(v: Complex64) -> Cp1 {
        Cp1(v, Complex64::new(1.0, 0.0))
    }

    pub fn zero() -> Cp1 {
        Cp1(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn inf() -> Cp1 {
        Cp1(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Chordal (Fubini-Study) distance, scale-invariant.
    pub fn dist(&self, other: &Cp1) -> f64 {
        let num = (self.0 * other.1 - other.0 * self.1).norm();
        let d1 = (self.0.norm_sqr() + self.1.norm_sqr()).sqrt();
        let d2 = (other.0.norm_sqr() + other.1.norm_sqr()).sqrt();
        num / (d1 * d2).max(1e-300)
    }

    /// The target real structure component map t -> 1/conj(t).
    pub fn conj_recip(&self) -> Cp1 {
        Cp1(self.1.conj(), self.0.conj())
    }
}

/// Degree-(g+1) quadric covering attached to boundary data k (hatted variant
/// swaps the role of the endpoints of the last band).
#[derive(Clone, Debug)]
pub struct QuadricCover {
    pub k: BoundaryData,
    pub hatted: bool,
    /// p_k: roots at z(rho_1..rho_g) and one endpoint of the last band.
    pub p: Poly,
    /// The complementary factor, p * p_bar = f.
    pub p_bar: Poly,
}

pub fn quadric_cover(cfg: &BranchConfig, k: &BoundaryData, hatted: bool) -> QuadricCover {
    let g = cfg.genus();
    let mut roots = Vec::with_capacity(g + 1);
    let mut co_roots = Vec::with_capacity(g + 1);
    for i in 1..=g {
        roots.push(k.rho_point(cfg, i).z.re);
        let phi = k.rho_prime_angle(i);
        co_roots.push(crate::curve::circle_point(cfg, i, phi).z.re);
    }
    let (a, b) = cfg.k_interval(g + 1);
    if hatted {
        roots.push(b);
        co_roots.push(a);
    } else {
        roots.push(a);
        co_roots.push(b);
    }
    QuadricCover {
        k: k.clone(),
        hatted,
        p: Poly::from_roots(&roots),
        p_bar: Poly::from_roots(&co_roots),
    }
}

impl QuadricCover {
    /// The two pencil maps: phi_1 = [p(z) : u] = [-v : p_bar(z)],
    /// phi_2 = [-p_bar(z) : u] = [v : p(z)].
    pub fn project(&self, x: &SurfacePoint) -> (Cp1, Cp1) {
        match x.chart {
            Chart::PInf => return (Cp1::zero(), Cp1::zero()),
            Chart::PBarInf => return (Cp1::inf(), Cp1::inf()),
            Chart::Finite => {}
        }
        let pv = self.p.eval_c(x.z);
        let pb = self.p_bar.eval_c(x.z);
        // pick the representation with the better-conditioned pair
        let phi1 = if x.u.norm().max(pv.norm()) >= pb.norm().max(x.v.norm()) {
            Cp1(pv, x.u)
        } else {
            Cp1(-x.v, pb)
        };
        let phi2 = if x.u.norm().max(pb.norm()) >= pv.norm().max(x.v.norm()) {
            Cp1(-pb, x.u)
        } else {
            Cp1(x.v, pv)
        };
        (phi1, phi2)
    }

    /// The g+1 sigma-fixed points over the real target point (a, 1/conj a):
    /// roots of p + |a|^2 p_bar, one per band.
    pub fn real_fiber(&self, cfg: &BranchConfig, a: Complex64) -> Result<Vec<SurfacePoint>> {
        let r2 = a.norm_sqr();
        let h = self.p.add(&self.p_bar.scale(r2));
        let roots = h.roots();
        let g = cfg.genus();
        let mut out = Vec::new();
        for z in &roots {
            if z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
                return Err(Error::NoSolution(format!("complex fiber root {z}")));
            }
            let zr = Complex64::new(z.re, 0.0);
            let u = self.p.eval_c(zr) / a;
            let v = -a * self.p_bar.eval_c(zr);
            out.push(SurfacePoint::from_uv(cfg, zr, u, v)?);
        }
        if out.len() != g + 1 {
            return Err(Error::NoSolution("real fiber size mismatch".into()));
        }
        out.sort_by(|p, q| p.z.re.total_cmp(&q.z.re));
        Ok(out)
    }

    /// The boundary minitwistor line over the real target point with
    /// parameter a = r e^{i psi}: hyperplane coefficients
    /// (r p_bar - r^{-1} p, c_w, c_y) with c_w = -2 sin psi, c_y = 2 cos psi.
    pub fn boundary_section(&self, cfg: &BranchConfig, a: Complex64) -> Result<(Vec<f64>, Vec<SurfacePoint>)> {
        let r = a.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::InvalidConfig("ruling parameter must be finite nonzero".into()));
        }
        let psi = a.im.atan2(a.re);
        let poly = self.p_bar.scale(r).add(&self.p.scale(-1.0 / r));
        let g = cfg.genus();
        let mut coeffs = vec![0.0; g + 4];
        for (j, c) in poly.0.iter().enumerate() {
            coeffs[j] = *c;
        }
        coeffs[g + 2] = -2.0 * psi.sin();
        coeffs[g + 3] = 2.0 * psi.cos();
        let nrm = coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
        for c in coeffs.iter_mut() {
            *c /= nrm;
        }
        let nodes = self.real_fiber(cfg, a)?;
        Ok((coeffs, nodes))
    }
}

/// Ramification curve points by flat index, lifted to T (y = w = 0).
pub fn ramification_on_t(cfg: &BranchConfig, idx: usize) -> SurfacePoint {
    let z = Complex64::new(cfg.branch_points()[idx], 0.0);
    SurfacePoint { z, u: Complex64::new(0.0, 0.0), v: Complex64::new(0.0, 0.0), chart: Chart::Finite }
}
