//! The Einstein-Weyl structure carried by the line-family components M_k:
//! coordinate charts into hyperplane coefficient space, spacelike geodesics
//! through disk anchors, the axis foliations, the conformal metric of
//! signature (+, +, -), and the surfaces swept by lines through a fixed
//! surface point.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{circle_point, BranchConfig};
use crate::error::{Error, Result};
use crate::jacobian::PeriodLattice;
use crate::numerics::Poly;
use crate::seifert::{
    angle_dist, axis_hyperplane, hyperplane_from_divisor, solve_seifert_angles, wrap_2pi,
    BoundaryData, Branch, SeifertKind, SeifertPoint,
};
use crate::surface::{
    build_line, pullback_coeffs, s1_act_coeffs, LineKind, MinitwistorLine, RotatedFrame,
};

/// Position of a point of M_k: either an interior Seifert point (a regular
/// line) or a point of one of the two axis circles, given by the conic
/// parameter lambda in the last band.
#[derive(Clone, Debug)]
pub enum EwPosition {
    Interior(SeifertPoint),
    Axis {
        k: BoundaryData,
        prime: bool,
        lambda: f64,
    },
}

#[derive(Clone, Debug)]
pub struct EwPoint {
    pub pos: EwPosition,
    /// Rotation angle of the circle action; ignored on the axis, which is
    /// fixed by the action.
    pub theta: f64,
}

/// Chart of M_k into CP_{g+3}: the Seifert hyperplane, normalized to c_w > 0,
/// rotated by theta. Axis points map to their reducible hyperplane, which is
/// rotation invariant.
pub fn ew_chart(lat: &PeriodLattice, pt: &EwPoint) -> Result<Vec<f64>> {
    match &pt.pos {
        EwPosition::Interior(sp) => {
            let h = hyperplane_from_divisor(lat, sp)?;
            let mut c = pullback_coeffs(&h);
            let n = c.len();
            if c[n - 2].abs() < 1e-12 {
                return Err(Error::DegeneratePoint(
                    "interior chart point with c_w = 0".into(),
                ));
            }
            if c[n - 2] < 0.0 {
                for v in c.iter_mut() {
                    *v = -*v;
                }
            }
            Ok(s1_act_coeffs(-pt.theta, &c))
        }
        EwPosition::Axis { k, prime, lambda } => {
            let h = axis_hyperplane(lat.cfg(), k, *prime, *lambda);
            Ok(pullback_coeffs(&h))
        }
    }
}

fn proj_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut dm = 0.0f64;
    let mut dp = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        dm += (x - y) * (x - y);
        dp += (x + y) * (x + y);
    }
    dm.sqrt().min(dp.sqrt())
}

/// Warm-started evaluator for the Seifert hyperplane at (xi, eta), with the
/// overall coefficient sign tracked by continuity along the calls.
struct IncidenceTracker<'a> {
    lat: &'a PeriodLattice,
    k: BoundaryData,
    angles: Vec<f64>,
    prev: Option<Vec<f64>>,
}

impl<'a> IncidenceTracker<'a> {
    fn new(lat: &'a PeriodLattice, k: &BoundaryData) -> IncidenceTracker<'a> {
        let g = lat.genus();
        let angles = (1..=g).map(|i| k.rho_angle(i)).collect();
        IncidenceTracker {
            lat,
            k: k.clone(),
            angles,
            prev: None,
        }
    }

    /// Unit coefficients (c_0, ..., c_{g+1}, c_w, 0) of the interior line.
    fn coeffs(&mut self, xi: f64, eta: f64) -> Result<Vec<f64>> {
        let sol = solve_seifert_angles(self.lat, xi, eta, &self.angles)?;
        let sp = SeifertPoint {
            k: self.k.clone(),
            branch: Branch::Plus,
            angles: sol.clone(),
            xi_angle: wrap_2pi(xi),
            eta_angle: wrap_2pi(eta),
            kind: SeifertKind::Interior,
        };
        let h = hyperplane_from_divisor(self.lat, &sp)?;
        self.angles = sol;
        let mut c = pullback_coeffs(&h);
        if let Some(prev) = &self.prev {
            let dot: f64 = prev.iter().zip(&c).map(|(a, b)| a * b).sum();
            if dot < 0.0 {
                for v in c.iter_mut() {
                    *v = -*v;
                }
            }
        }
        self.prev = Some(c.clone());
        Ok(c)
    }
}

/// Signed value of the line at the cone point (z0, w0): P(z0) + c_w w0.
fn incidence(coeffs: &[f64], z0: f64, w0: f64) -> f64 {
    let n = coeffs.len();
    let p = coeffs[..n - 2].iter().rev().fold(0.0, |acc, c| acc * z0 + c);
    p + coeffs[n - 2] * w0
}

/// One sample of an incidence curve in M_k.
#[derive(Clone, Debug)]
pub struct GeoSample {
    pub xi: f64,
    pub eta: f64,
    /// Tangency angles of the underlying Seifert point.
    pub angles: Vec<f64>,
    /// Sign-continuous unit coefficients in CP_{g+3}.
    pub coeffs: Vec<f64>,
    pub theta: f64,
}

/// Secant refinement of the incidence zero in eta at fixed xi.
fn march_eta(
    tr: &mut IncidenceTracker,
    xi: f64,
    eta_guess: f64,
    z0: f64,
    w0: f64,
) -> Result<(f64, Vec<f64>)> {
    let mut x0 = eta_guess;
    let c0 = tr.coeffs(xi, x0)?;
    let mut g0 = incidence(&c0, z0, w0);
    let mut x1 = x0 + 1e-6;
    let mut c1 = tr.coeffs(xi, x1)?;
    let mut g1 = incidence(&c1, z0, w0);
    for _ in 0..60 {
        if g1.abs() < 1e-13 {
            return Ok((x1, c1));
        }
        let denom = g1 - g0;
        if denom == 0.0 {
            break;
        }
        let mut step = -g1 * (x1 - x0) / denom;
        if step.abs() > 0.3 {
            step = 0.3 * step.signum();
        }
        let x2 = x1 + step;
        let c2 = tr.coeffs(xi, x2)?;
        let g2 = incidence(&c2, z0, w0);
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g2;
        c1 = c2;
        if step.abs() < 1e-13 {
            return Ok((x1, c1));
        }
    }
    if g1.abs() < 1e-10 {
        Ok((x1, c1))
    } else {
        Err(Error::NoConvergence(format!(
            "incidence secant stalled at residual {:.3e}",
            g1
        )))
    }
}

/// Trace the closed 1-parameter family of lines through the cone point
/// (z0, w0), parameterized by the xi angle over a full turn. Returns the
/// samples and the projective closure gap after the turn.
fn trace_incidence_curve(
    lat: &PeriodLattice,
    k: &BoundaryData,
    z0: f64,
    w0: f64,
    steps: usize,
) -> Result<(Vec<GeoSample>, f64)> {
    let g = lat.genus();
    let mut last_err: Option<Error> = None;
    'starts: for &xi0 in &[0.7371, 1.9113, 2.8437, 4.1029, 5.3071] {
        let mut tr = IncidenceTracker::new(lat, k);
        let eta0 = 2.0 * PI - xi0;
        // coarse scan of the full double row for a sign change of the
        // incidence value; skipped (near-singular) evaluations reset the
        // bracket so the sign change is always genuine
        let nscan = 256usize;
        let mut prev: Option<(f64, f64)> = None;
        let mut bracket = None;
        for j in 0..nscan {
            let eta = eta0 - 4.0 * PI * (j as f64 + 0.5) / nscan as f64;
            match tr.coeffs(xi0, eta) {
                Ok(c) => {
                    let gv = incidence(&c, z0, w0);
                    if let Some((pe, pg)) = prev {
                        if pg.signum() != gv.signum() {
                            bracket = Some((pe, pg, eta, gv));
                            break;
                        }
                    }
                    prev = Some((eta, gv));
                }
                Err(_) => {
                    prev = None;
                }
            }
        }
        let Some((mut e1, mut g1, mut e2, mut g2)) = bracket else {
            last_err = Some(Error::NoConvergence(
                "no incidence bracket on the scanned row".into(),
            ));
            continue 'starts;
        };
        // bisection to machine accuracy
        let mut eta = 0.5 * (e1 + e2);
        let mut coeffs = Vec::new();
        for _ in 0..80 {
            eta = 0.5 * (e1 + e2);
            let c = match tr.coeffs(xi0, eta) {
                Ok(c) => c,
                Err(e) => {
                    last_err = Some(e);
                    continue 'starts;
                }
            };
            let gm = incidence(&c, z0, w0);
            coeffs = c;
            if gm.signum() == g1.signum() {
                e1 = eta;
                g1 = gm;
            } else {
                e2 = eta;
                g2 = gm;
            }
            if (e2 - e1).abs() < 1e-14 {
                break;
            }
        }
        let _ = g2;
        let mut samples: Vec<GeoSample> = Vec::with_capacity(steps);
        let record = |samples: &mut Vec<GeoSample>, tr: &IncidenceTracker, xi: f64, eta: f64, c: Vec<f64>| {
            let theta = if c[g + 2] >= 0.0 { 0.0 } else { PI };
            samples.push(GeoSample {
                xi: wrap_2pi(xi),
                eta: wrap_2pi(eta),
                angles: tr.angles.clone(),
                coeffs: c,
                theta,
            });
        };
        record(&mut samples, &tr, xi0, eta, coeffs);
        let h = 2.0 * PI / steps as f64;
        let mut deta = 0.0f64;
        let mut ok = true;
        for s in 1..steps {
            let xi = xi0 + h * s as f64;
            let guess = eta + deta;
            let solved = march_eta(&mut tr, xi, guess, z0, w0).or_else(|_| {
                // a near-exact hit of the singular configuration: shift the
                // sample slightly off the uniform grid
                march_eta(&mut tr, xi + 0.37 * h, guess, z0, w0).map(|r| (r.0, r.1))
            });
            match solved {
                Ok((enew, cnew)) => {
                    deta = enew - eta;
                    eta = enew;
                    record(&mut samples, &tr, xi, eta, cnew);
                }
                Err(e) => {
                    last_err = Some(e);
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue 'starts;
        }
        match march_eta(&mut tr, xi0 + 2.0 * PI, eta + deta, z0, w0) {
            Ok((_ec, cc)) => {
                let gap = proj_dist(&samples[0].coeffs, &cc);
                return Ok((samples, gap));
            }
            Err(e) => {
                last_err = Some(e);
                continue 'starts;
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::NoConvergence("incidence trace failed".into())))
}

/// A traced spacelike geodesic with its certificates.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub k: BoundaryData,
    /// Cone anchor (z0, w0) in the interior of the last-band disk.
    pub anchor: (f64, f64),
    pub samples: Vec<GeoSample>,
    pub closure_gap: f64,
    /// Largest projective distance between consecutive samples.
    pub max_step: f64,
    /// Smallest projective distance between well-separated samples.
    pub min_separation: f64,
    pub simple: bool,
    /// (sample index, prime) of each axis crossing: prime = false for the
    /// rho axis, true for the rho' axis.
    pub crossings: Vec<(usize, bool)>,
}

/// The spacelike geodesic of M_k through the two lifts of a cone anchor in
/// the open disk over the last band: the closed family of lines whose
/// rotated graph passes through (z0, w0).
pub fn geodesic_spacelike(
    lat: &PeriodLattice,
    k: &BoundaryData,
    z0: f64,
    w0: f64,
    steps: usize,
) -> Result<Geodesic> {
    let cfg = lat.cfg();
    let g = cfg.genus();
    let (a, b) = cfg.k_interval(g + 1);
    let width = b - a;
    if z0 <= a + 1e-9 * width || z0 >= b - 1e-9 * width {
        return Err(Error::DegenerateAnchor(format!(
            "anchor z = {z0} is not interior to the last band [{a}, {b}]"
        )));
    }
    let fz = cfg.f_real(z0);
    if fz >= 0.0 || w0 * w0 >= -fz * (1.0 - 1e-10) {
        return Err(Error::DegenerateAnchor(
            "anchor lies on or outside the boundary sphere (the two lifts coincide)".into(),
        ));
    }
    let (samples, closure_gap) = trace_incidence_curve(lat, k, z0, w0, steps)?;
    let n = samples.len();
    let mut crossings = Vec::new();
    for i in 0..n {
        let c1 = samples[i].coeffs[g + 2];
        let c2 = samples[(i + 1) % n].coeffs[g + 2];
        if c1 == 0.0 || c1.signum() != c2.signum() {
            let pick = if c1.abs() <= c2.abs() { i } else { (i + 1) % n };
            let ang = &samples[pick].angles;
            let d_rho = (1..=g)
                .map(|j| angle_dist(ang[j - 1], k.rho_angle(j)))
                .fold(0.0f64, f64::max);
            let d_prime = (1..=g)
                .map(|j| angle_dist(ang[j - 1], k.rho_prime_angle(j)))
                .fold(0.0f64, f64::max);
            crossings.push((i, d_prime < d_rho));
        }
    }
    let mut max_step = 0.0f64;
    for i in 0..n {
        max_step = max_step.max(proj_dist(&samples[i].coeffs, &samples[(i + 1) % n].coeffs));
    }
    let mut min_separation = f64::INFINITY;
    let guard = 16usize.min(n / 4);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (j - i).min(n - (j - i));
            if d < guard {
                continue;
            }
            min_separation = min_separation.min(proj_dist(&samples[i].coeffs, &samples[j].coeffs));
        }
    }
    let simple = min_separation > 1e-4;
    Ok(Geodesic {
        k: k.clone(),
        anchor: (z0, w0),
        samples,
        closure_gap,
        max_step,
        min_separation,
        simple,
        crossings,
    })
}

/// The incidence row m-hat(z, w, y) = (1, z, ..., z^{g+1}, w, y).
fn mhat_row(g: usize, z: f64, w: f64, y: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(g + 4);
    let mut zp = 1.0;
    for _ in 0..=(g + 1) {
        row.push(zp);
        zp *= z;
    }
    row.push(w);
    row.push(y);
    row
}

/// Orthonormal basis of the 3-dimensional tangent space of the line family
/// at a regular line, in the rotated (c_y = 0) coefficient frame: the
/// nullspace of the node incidence rows and the scale direction.
fn rotated_tangent_basis(g: usize, rc: &[f64], frame: &RotatedFrame) -> Result<Vec<Vec<f64>>> {
    let n = g + 4;
    let mut a = DMatrix::zeros(n, n);
    let mut row = 0usize;
    for &zn in &frame.nodes_z {
        let r = mhat_row(g, zn, frame.w_of_z(zn), 0.0);
        let nrm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        for j in 0..n {
            a[(row, j)] = r[j] / nrm;
        }
        row += 1;
    }
    for j in 0..n {
        a[(row, j)] = rc[j];
    }
    let svd = a.svd(false, true);
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    if svd.singular_values[idx[3]] < 1e-6 {
        return Err(Error::DegeneratePoint(
            "node constraints are nearly dependent".into(),
        ));
    }
    Ok((0..3)
        .map(|t| (0..n).map(|j| vt[(idx[t], j)]).collect())
        .collect())
}

/// Quadratic form representative of the conformal metric, evaluated on a
/// tangent direction in the rotated frame: the residual pair of circle
/// intersections of the perturbed line is real and distinct exactly when the
/// value is positive.
fn q_form(frame: &RotatedFrame, dr: &[f64]) -> f64 {
    let g = frame.nodes_z.len();
    let a: Vec<f64> = (0..g + 2)
        .map(|j| dr[j] - dr[g + 2] / frame.r * frame.p[j])
        .collect();
    let bpoly = Poly(a).deflate(&frame.nodes_z);
    let dy = dr[g + 3];
    let dz = frame.z_eta - frame.z_xi;
    (-frame.q[2]) * dz * dz * dy * dy - 4.0 * bpoly.eval(frame.z_xi) * bpoly.eval(frame.z_eta)
}

#[derive(Clone, Debug)]
pub struct ConformalMetric {
    /// Orthonormal tangent basis in the original coefficient frame.
    pub basis: Vec<Vec<f64>>,
    /// Gram matrix of the metric on the basis, normalized so the rotation
    /// generator has squared length +1.
    pub matrix: Matrix3<f64>,
    /// Raw (unnormalized) squared length of the rotation generator.
    pub theta_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalType {
    Spacelike,
    Null,
    Timelike,
}

/// The conformal metric of the line family at a regular line.
pub fn conformal_metric(cfg: &BranchConfig, line: &MinitwistorLine) -> Result<ConformalMetric> {
    if line.kind != LineKind::Regular {
        return Err(Error::DegeneratePoint(
            "conformal metric requires a regular line".into(),
        ));
    }
    let frame = line
        .frame
        .as_ref()
        .ok_or_else(|| Error::DegeneratePoint("line carries no rotated frame".into()))?;
    let g = cfg.genus();
    if frame.r < 1e-8 || (frame.z_eta - frame.z_xi).abs() < 1e-6 * cfg.min_gap().max(1.0) {
        return Err(Error::DegeneratePoint(
            "line is too close to the axis or the boundary".into(),
        ));
    }
    let rc = s1_act_coeffs(line.theta, &line.coeffs);
    let basis_rot = rotated_tangent_basis(g, &rc, frame)?;
    let mut m = Matrix3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let plus: Vec<f64> = basis_rot[i]
                .iter()
                .zip(&basis_rot[j])
                .map(|(a, b)| a + b)
                .collect();
            let minus: Vec<f64> = basis_rot[i]
                .iter()
                .zip(&basis_rot[j])
                .map(|(a, b)| a - b)
                .collect();
            let q = 0.25 * (q_form(frame, &plus) - q_form(frame, &minus));
            m[(i, j)] = q;
            m[(j, i)] = q;
        }
    }
    let dz = frame.z_eta - frame.z_xi;
    let theta_norm = (-frame.q[2]) * dz * dz * frame.r * frame.r;
    if theta_norm <= 0.0 {
        return Err(Error::DegeneratePoint("rotation direction is not spacelike".into()));
    }
    m /= theta_norm;
    let basis = basis_rot
        .iter()
        .map(|v| s1_act_coeffs(-line.theta, v))
        .collect();
    Ok(ConformalMetric {
        basis,
        matrix: m,
        theta_norm,
    })
}

/// Signature (positive, negative) of a symmetric 3x3 matrix.
pub fn signature(m: &Matrix3<f64>) -> (usize, usize) {
    let ev = m.symmetric_eigen().eigenvalues;
    let pos = ev.iter().filter(|&&v| v > 1e-10).count();
    let neg = ev.iter().filter(|&&v| v < -1e-10).count();
    (pos, neg)
}

/// Causal type of a tangent direction (original-frame coefficients) at a
/// regular line, with the normalized quadratic form value.
pub fn causal_type(
    cfg: &BranchConfig,
    line: &MinitwistorLine,
    delta: &[f64],
) -> Result<(f64, CausalType)> {
    if line.kind != LineKind::Regular {
        return Err(Error::DegeneratePoint("causal type requires a regular line".into()));
    }
    let frame = line
        .frame
        .as_ref()
        .ok_or_else(|| Error::DegeneratePoint("line carries no rotated frame".into()))?;
    let g = cfg.genus();
    let dr = s1_act_coeffs(line.theta, delta);
    let dz = frame.z_eta - frame.z_xi;
    let theta_norm = (-frame.q[2]) * dz * dz * frame.r * frame.r;
    let q = q_form(frame, &dr) / theta_norm;
    let scale: f64 = dr[..g + 4].iter().map(|v| v * v).sum();
    let kind = if q.abs() < 1e-9 * scale.max(1e-300) {
        CausalType::Null
    } else if q > 0.0 {
        CausalType::Spacelike
    } else {
        CausalType::Timelike
    };
    Ok((q, kind))
}

/// One leaf of the axis foliation: the chord graph w = -P(z)/c_w over
/// [z_lo, z_hi] in the last-band disk.
#[derive(Clone, Debug)]
struct Leaf {
    p: Vec<f64>,
    cw: f64,
    z_lo: f64,
    z_hi: f64,
}

impl Leaf {
    fn w_of(&self, z: f64) -> f64 {
        -self.p.iter().rev().fold(0.0, |acc, c| acc * z + c) / self.cw
    }
}

#[derive(Clone, Debug)]
pub struct FoliationReport {
    pub xi_angle: f64,
    /// Leaves realized per family.
    pub leaves: [usize; 2],
    /// Minimum vertical separation of adjacent leaves away from the base
    /// point, per family.
    pub min_separation: [f64; 2],
    /// Fraction of interior disk cells met by the leaves, per family.
    pub coverage: [f64; 2],
    pub interior_cells: usize,
}

/// The two leaf families through a fixed boundary point xi: the row of lines
/// with xi in their boundary pair, split at the half turn. Each family
/// should foliate the last-band disk away from the base point.
pub fn foliation_check(
    lat: &PeriodLattice,
    k: &BoundaryData,
    xi: f64,
    arcs: usize,
    grid: usize,
) -> Result<FoliationReport> {
    let cfg = lat.cfg();
    let g = cfg.genus();
    let (a, b) = cfg.k_interval(g + 1);
    let mut wmax = 0.0f64;
    for t in 0..=400 {
        let z = a + (b - a) * t as f64 / 400.0;
        wmax = wmax.max((-cfg.f_real(z)).max(0.0).sqrt());
    }
    let base = circle_point(cfg, g + 1, xi);
    let (zb, wb) = (base.z.re, base.w.re);
    let mut tr = IncidenceTracker::new(lat, k);
    let eta0 = 2.0 * PI - xi;
    let mut families: [Vec<Leaf>; 2] = [Vec::new(), Vec::new()];
    for j in 0..(2 * arcs) {
        let eta = eta0 - 4.0 * PI * (j as f64 + 0.5) / (2 * arcs) as f64;
        let Ok(c) = tr.coeffs(xi, eta) else { continue };
        let z_eta = circle_point(cfg, g + 1, wrap_2pi(eta)).z.re;
        let leaf = Leaf {
            p: c[..g + 2].to_vec(),
            cw: c[g + 2],
            z_lo: zb.min(z_eta),
            z_hi: zb.max(z_eta),
        };
        families[if j < arcs { 0 } else { 1 }].push(leaf);
    }
    if families[0].len() < arcs / 2 || families[1].len() < arcs / 2 {
        return Err(Error::NoConvergence("too many skipped leaves".into()));
    }

    // coverage: cell grid over the bounding box of the disk, marked by an
    // adaptively refined walk along each leaf
    let nx = grid;
    let ny = grid;
    let cell_of = |z: f64, w: f64| -> Option<(usize, usize)> {
        let fx = (z - a) / (b - a);
        let fy = (w + wmax) / (2.0 * wmax);
        if !(0.0..1.0).contains(&fx) || !(0.0..1.0).contains(&fy) {
            return None;
        }
        Some(((fx * nx as f64) as usize, (fy * ny as f64) as usize))
    };
    let mut interior = vec![false; nx * ny];
    let mut interior_cells = 0usize;
    for ix in 0..nx {
        for iy in 0..ny {
            let z = a + (b - a) * (ix as f64 + 0.5) / nx as f64;
            let w = -wmax + 2.0 * wmax * (iy as f64 + 0.5) / ny as f64;
            if w * w < -cfg.f_real(z) {
                interior[ix * ny + iy] = true;
                interior_cells += 1;
            }
        }
    }
    let mut coverage = [0.0f64; 2];
    let mut min_separation = [f64::INFINITY; 2];
    let excl = 0.05 * (b - a);
    for fam in 0..2 {
        let mut covered = vec![false; nx * ny];
        for leaf in &families[fam] {
            // uniform seeds plus bisection until cell-adjacent
            let m = 48usize;
            let mut stack: Vec<(f64, f64, usize)> = Vec::new();
            for t in 0..m {
                let z1 = leaf.z_lo + (leaf.z_hi - leaf.z_lo) * t as f64 / m as f64;
                let z2 = leaf.z_lo + (leaf.z_hi - leaf.z_lo) * (t + 1) as f64 / m as f64;
                stack.push((z1, z2, 0));
            }
            while let Some((z1, z2, depth)) = stack.pop() {
                let w1 = leaf.w_of(z1);
                let w2 = leaf.w_of(z2);
                let c1 = cell_of(z1, w1);
                let c2 = cell_of(z2, w2);
                if let Some((ix, iy)) = c1 {
                    covered[ix * ny + iy] = true;
                }
                if let Some((ix, iy)) = c2 {
                    covered[ix * ny + iy] = true;
                }
                let split = match (c1, c2) {
                    (Some((x1, y1)), Some((x2, y2))) => {
                        x1.abs_diff(x2) > 1 || y1.abs_diff(y2) > 1
                    }
                    _ => true,
                };
                if split && depth < 26 && (z2 - z1) > 1e-13 * (b - a) {
                    let zm = 0.5 * (z1 + z2);
                    stack.push((z1, zm, depth + 1));
                    stack.push((zm, z2, depth + 1));
                }
            }
        }
        let mut hit = 0usize;
        for i in 0..nx * ny {
            if interior[i] && covered[i] {
                hit += 1;
            }
        }
        coverage[fam] = hit as f64 / interior_cells.max(1) as f64;

        for pair in families[fam].windows(2) {
            let lo = pair[0].z_lo.max(pair[1].z_lo);
            let hi = pair[0].z_hi.min(pair[1].z_hi);
            if hi <= lo {
                continue;
            }
            for t in 0..=64 {
                let z = lo + (hi - lo) * t as f64 / 64.0;
                let w0 = pair[0].w_of(z);
                let w1 = pair[1].w_of(z);
                // exclude the neighborhood of the shared base point
                if (z - zb).hypot(w0 - wb) < excl || (z - zb).hypot(w1 - wb) < excl {
                    continue;
                }
                min_separation[fam] = min_separation[fam].min((w0 - w1).abs());
            }
        }
    }
    Ok(FoliationReport {
        xi_angle: wrap_2pi(xi),
        leaves: [families[0].len(), families[1].len()],
        min_separation,
        coverage,
        interior_cells,
    })
}

/// The 2-parameter family of lines through a sigma-fixed point of the last
/// boundary sphere, sampled as rotation slices of incidence curves.
#[derive(Clone, Debug)]
pub struct NullSurface {
    /// The surface point (z, w, y) with w^2 + y^2 = -f(z).
    pub anchor: (f64, f64, f64),
    pub slices: Vec<(f64, Vec<GeoSample>)>,
}

pub fn null_surface(
    lat: &PeriodLattice,
    k: &BoundaryData,
    z_q: f64,
    alpha: f64,
    n_theta: usize,
    n_xi: usize,
) -> Result<NullSurface> {
    let cfg = lat.cfg();
    let g = cfg.genus();
    let (a, b) = cfg.k_interval(g + 1);
    if z_q <= a || z_q >= b {
        return Err(Error::DegenerateAnchor("point not over the last band".into()));
    }
    let fz = cfg.f_real(z_q);
    if fz >= 0.0 {
        return Err(Error::DegenerateAnchor("point not on the boundary sphere".into()));
    }
    let rr = (-fz).sqrt();
    let (wq, yq) = (rr * alpha.cos(), rr * alpha.sin());
    let mut slices = Vec::new();
    for j in 0..n_theta {
        let th = 2.0 * PI * (j as f64 + 0.37) / n_theta as f64;
        // the +theta-rotated point must be an interior cone anchor
        let wp = wq * th.cos() + yq * th.sin();
        if wp * wp >= -fz * (1.0 - 1e-6) {
            continue;
        }
        let Ok((samps, _gap)) = trace_incidence_curve(lat, k, z_q, wp, n_xi) else {
            continue;
        };
        let rotated: Vec<GeoSample> = samps
            .into_iter()
            .map(|mut s| {
                s.coeffs = s1_act_coeffs(-th, &s.coeffs);
                s.theta = wrap_2pi(s.theta + th);
                s
            })
            .collect();
        slices.push((th, rotated));
    }
    if slices.len() < n_theta / 2 {
        return Err(Error::NoConvergence("too few rotation slices traced".into()));
    }
    Ok(NullSurface {
        anchor: (z_q, wq, yq),
        slices,
    })
}

#[derive(Clone, Debug)]
pub struct ZollRecord {
    pub anchor: (f64, f64),
    pub closure_gap: f64,
    pub min_separation: f64,
    pub simple: bool,
    pub crossings_ok: bool,
}

#[derive(Clone, Debug)]
pub struct ZollReport {
    pub k_index: usize,
    pub records: Vec<ZollRecord>,
    pub max_gap: f64,
    pub all_simple: bool,
    pub all_crossings: bool,
    /// Smallest singular value of the normalized incidence constraints
    /// restricted to the tangent space, over the sampled lines.
    pub min_transversality: f64,
}

/// Random-anchor geodesic suite for one component M_k.
pub fn zoll_suite(
    lat: &PeriodLattice,
    k: &BoundaryData,
    trials: usize,
    steps: usize,
    seed: u64,
) -> Result<ZollReport> {
    let cfg = lat.cfg();
    let g = cfg.genus();
    let (a, b) = cfg.k_interval(g + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(trials);
    let mut max_gap = 0.0f64;
    let mut min_trans = f64::INFINITY;
    for _ in 0..trials {
        let z0 = a + (b - a) * (0.08 + 0.84 * rng.gen::<f64>());
        let s = -0.85 + 1.7 * rng.gen::<f64>();
        let w0 = s * (-cfg.f_real(z0)).max(0.0).sqrt();
        let geo = geodesic_spacelike(lat, k, z0, w0, steps)?;
        let y0 = (-cfg.f_real(z0) - w0 * w0).max(0.0).sqrt();
        let stride = (steps / 8).max(1);
        for sample in geo.samples.iter().step_by(stride) {
            let Ok(line) = build_line(cfg, &sample.coeffs, 8) else { continue };
            if line.kind != LineKind::Regular {
                continue;
            }
            let Ok(met) = conformal_metric(cfg, &line) else { continue };
            let rows = [mhat_row(g, z0, w0, y0), mhat_row(g, z0, w0, -y0)];
            let mut m2 = DMatrix::zeros(2, 3);
            for (i, r) in rows.iter().enumerate() {
                let nrm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
                for j in 0..3 {
                    let dot: f64 = r.iter().zip(&met.basis[j]).map(|(x, y)| x * y).sum();
                    m2[(i, j)] = dot / nrm;
                }
            }
            let sv = m2.svd(false, false).singular_values;
            let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
            min_trans = min_trans.min(smin);
        }
        let crossings_ok =
            geo.crossings.len() == 2 && geo.crossings[0].1 != geo.crossings[1].1;
        max_gap = max_gap.max(geo.closure_gap);
        records.push(ZollRecord {
            anchor: (z0, w0),
            closure_gap: geo.closure_gap,
            min_separation: geo.min_separation,
            simple: geo.simple,
            crossings_ok,
        });
    }
    Ok(ZollReport {
        k_index: k.k(),
        all_simple: records.iter().all(|r| r.simple),
        all_crossings: records.iter().all(|r| r.crossings_ok),
        records,
        max_gap,
        min_transversality: min_trans,
    })
}
