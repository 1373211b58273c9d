//! Seifert surfaces of real tangency data.
//!
//! A point of the Seifert surface with boundary data k consists of tangency
//! points p_i on the circles 1..g and a pair (xi, eta) on circle g+1 subject
//! to the Abel constraint 2 sum a(p_i) + a(xi) + a(eta) = 0 mod lattice.
//! Interior solves are seeded by continuation from the singular configuration
//! p_i = rho_i at eta = tau(xi), which fixes the sheet of the double cover
//! deterministically. The unique real hyperplane through the divisor
//! 2p_1 + ... + 2p_g + xi + eta is recovered as an SVD nullspace.

use crate::curve::{circle_point, BranchConfig, CurvePoint};
use crate::error::{Error, Result};
use crate::jacobian::{circle_velocity, JacPoint, PeriodLattice};
use crate::tol;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

pub fn wrap_2pi(phi: f64) -> f64 {
    let twopi = 2.0 * PI;
    let mut p = phi % twopi;
    if p < 0.0 {
        p += twopi;
    }
    p
}

/// Angular wrap-around distance on [0, 2pi).
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = wrap_2pi(a - b);
    d.min(2.0 * PI - d)
}

/// Boundary data: the choice tuple (rho_2, ..., rho_g), rho_1 = r_1 fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryData {
    g: usize,
    k: usize,
    /// prime[i] says rho_{i+1} = r'_{i+1} (0-based circle index); prime[0] is
    /// always false.
    prime: Vec<bool>,
}

impl BoundaryData {
    pub fn new(g: usize, k: usize) -> Result<BoundaryData> {
        let count = 1usize << (g.saturating_sub(1));
        if k < 1 || k > count {
            return Err(Error::InvalidConfig(format!(
                "k must be in 1..={count} for genus {g}, got {k}"
            )));
        }
        let mut prime = vec![false; g];
        for i in 1..g {
            prime[i] = ((k - 1) >> (i - 1)) & 1 == 1;
        }
        Ok(BoundaryData { g, k, prime })
    }

    pub fn count(g: usize) -> usize {
        1usize << (g.saturating_sub(1))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// Chebyshev angle of rho_i on circle i (1-based, i <= g): 0 for r_i,
    /// pi for r'_i.
    pub fn rho_angle(&self, i: usize) -> f64 {
        if self.prime[i - 1] {
            PI
        } else {
            0.0
        }
    }

    /// Angle of the complementary choice rho'_i.
    pub fn rho_prime_angle(&self, i: usize) -> f64 {
        PI - self.rho_angle(i)
    }

    pub fn rho_point(&self, cfg: &BranchConfig, i: usize) -> CurvePoint {
        circle_point(cfg, i, self.rho_angle(i))
    }

    /// Flat ramification index of rho_i (even = r_i, odd = r'_i).
    pub fn rho_flat_index(&self, i: usize) -> usize {
        if self.prime[i - 1] {
            2 * i - 1
        } else {
            2 * (i - 1)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeifertKind {
    Interior,
    Boundary,
    Singular,
}

#[derive(Clone, Debug)]
pub struct SeifertPoint {
    pub k: BoundaryData,
    pub branch: Branch,
    /// Chebyshev angles of the tangency points p_i on circles 1..g.
    pub angles: Vec<f64>,
    pub xi_angle: f64,
    pub eta_angle: f64,
    pub kind: SeifertKind,
}

impl SeifertPoint {
    pub fn tangencies(&self, cfg: &BranchConfig) -> Vec<CurvePoint> {
        self.angles
            .iter()
            .enumerate()
            .map(|(i, &phi)| circle_point(cfg, i + 1, phi))
            .collect()
    }

    pub fn xi(&self, cfg: &BranchConfig) -> CurvePoint {
        circle_point(cfg, cfg.genus() + 1, self.xi_angle)
    }

    pub fn eta(&self, cfg: &BranchConfig) -> CurvePoint {
        circle_point(cfg, cfg.genus() + 1, self.eta_angle)
    }

    /// Residual of the Abel constraint on the torus.
    pub fn constraint_residual(&self, lat: &PeriodLattice) -> f64 {
        let g = lat.genus();
        let mut acc = vec![Complex64::new(0.0, 0.0); g];
        for (i, &phi) in self.angles.iter().enumerate() {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i + 1, phi)) {
                *a += 2.0 * v;
            }
        }
        for phi in [self.xi_angle, self.eta_angle] {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(g + 1, phi)) {
                *a += v;
            }
        }
        lat.reduce(&acc).dist(&JacPoint::zero(g))
    }
}

#[derive(Clone, Debug)]
pub struct RealHyperplane {
    /// (c_0, ..., c_{g+1}, c_w), real, normalized to unit length.
    pub coeffs: Vec<f64>,
    /// Smallest singular value of the fitting system (relative).
    pub residual: f64,
    /// (second smallest singular value) / (smallest).
    pub gap_ratio: f64,
}

impl RealHyperplane {
    /// Evaluate c . m(z, w) = P(z) + c_w w.
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let n = self.coeffs.len();
        let mut p = Complex64::new(0.0, 0.0);
        for &c in self.coeffs[..n - 1].iter().rev() {
            p = p * z + c;
        }
        p + self.coeffs[n - 1] * w
    }

    /// Polynomial part P(z) as ascending coefficients.
    pub fn poly_part(&self) -> Vec<f64> {
        self.coeffs[..self.coeffs.len() - 1].to_vec()
    }

    pub fn c_w(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }
}

/// Fractional x-coordinates of a raw Abel vector, with the residual wrapped
/// to the nearest lattice point relative to a target.
fn x_coords(lat: &PeriodLattice, raw: &[Complex64]) -> DVector<f64> {
    let re = DVector::from_iterator(raw.len(), raw.iter().map(|v| v.re));
    lat.real_block()
        .clone()
        .lu()
        .solve(&re)
        .expect("real block invertible")
}

/// Solve sum_i a(p_i) = target over (p_1, ..., p_g) with p_i on circle i, by
/// a damped Newton iteration in the Chebyshev angles. The target's imaginary
/// component must be that of the product-of-circles component.
pub fn invert_real_torus(
    lat: &PeriodLattice,
    target: &JacPoint,
    guess: &[f64],
) -> Result<Vec<f64>> {
    let g = lat.genus();
    assert_eq!(guess.len(), g);
    // component check: the imaginary part of sum_i a(p_i) is independent of
    // the angles
    let probe = {
        let mut acc = vec![Complex64::new(0.0, 0.0); g];
        for i in 1..=g {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i, 0.0)) {
                *a += v;
            }
        }
        lat.reduce(&acc)
    };
    let ydist: f64 = probe
        .y
        .iter()
        .zip(&target.y)
        .map(|(a, b)| {
            let d = (a - b).rem_euclid(1.0);
            d.min(1.0 - d).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    if ydist > 1e3 * tol::EPS_LAT {
        return Err(Error::WrongComponent);
    }

    let residual_jacobian = |phi: &[f64]| -> (Vec<f64>, DMatrix<f64>) {
        let mut acc = vec![Complex64::new(0.0, 0.0); g];
        for (i, &p) in phi.iter().enumerate() {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i + 1, p)) {
                *a += v;
            }
        }
        let x = x_coords(lat, &acc);
        let mut r = vec![0.0; g];
        for j in 0..g {
            let d = x[j] - target.x[j];
            r[j] = d - d.round();
        }
        let mut jac = DMatrix::zeros(g, g);
        let mut v = vec![0.0; g];
        for (i, &p) in phi.iter().enumerate() {
            circle_velocity(lat.cfg(), i + 1, p, &mut v);
            let col = lat
                .real_block()
                .clone()
                .lu()
                .solve(&DVector::from_column_slice(&v))
                .expect("real block invertible");
            for j in 0..g {
                jac[(j, i)] = col[j];
            }
        }
        (r, jac)
    };

    let mut seed = guess.to_vec();
    for attempt in 0..=tol::NEWTON_RESTARTS {
        let mut fj = residual_jacobian;
        match crate::numerics::newton_system(&mut fj, &seed, 1e-12, tol::NEWTON_MAX_STEPS) {
            Ok(sol) => {
                let (r, _) = residual_jacobian(&sol);
                let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
                if rn < tol::EPS_LAT {
                    return Ok(sol.iter().map(|&p| wrap_2pi(p)).collect());
                }
            }
            Err(_) => {}
        }
        // deterministic jitter for restarts
        for (i, s) in seed.iter_mut().enumerate() {
            *s = guess[i] + 0.21 * (attempt as f64 + 1.0) * if i % 2 == 0 { 1.0 } else { -1.0 };
        }
    }
    Err(Error::NoConvergence("torus inversion".into()))
}

/// Newton solve of the doubled constraint 2 sum a(p_i) + a(xi) + a(eta) = 0
/// mod lattice, in the angles of the p_i. The residual is wrapped modulo the
/// half lattice, so every branch solves it; the warm start selects the
/// branch.
pub(crate) fn solve_seifert_angles(
    lat: &PeriodLattice,
    xi_angle: f64,
    eta_angle: f64,
    guess: &[f64],
) -> Result<Vec<f64>> {
    let g = lat.genus();
    let mut half = vec![0.0; g];
    {
        let mut acc = vec![Complex64::new(0.0, 0.0); g];
        for phi in [xi_angle, eta_angle] {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(g + 1, phi)) {
                *a += 0.5 * v;
            }
        }
        let x = x_coords(lat, &acc);
        half.copy_from_slice(x.as_slice());
    }
    let residual_jacobian = |phi: &[f64]| -> (Vec<f64>, DMatrix<f64>) {
        let mut acc = vec![Complex64::new(0.0, 0.0); g];
        for (i, &p) in phi.iter().enumerate() {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i + 1, p)) {
                *a += v;
            }
        }
        let x = x_coords(lat, &acc);
        let mut r = vec![0.0; g];
        for j in 0..g {
            let d = x[j] + half[j];
            r[j] = d - (2.0 * d).round() * 0.5;
        }
        let mut jac = DMatrix::zeros(g, g);
        let mut v = vec![0.0; g];
        for (i, &p) in phi.iter().enumerate() {
            circle_velocity(lat.cfg(), i + 1, p, &mut v);
            let col = lat
                .real_block()
                .clone()
                .lu()
                .solve(&DVector::from_column_slice(&v))
                .expect("real block invertible");
            for j in 0..g {
                jac[(j, i)] = col[j];
            }
        }
        (r, jac)
    };
    let mut fj = residual_jacobian;
    let sol = crate::numerics::newton_system(&mut fj, guess, 1e-13, tol::NEWTON_MAX_STEPS)
        .map_err(|_| Error::NoConvergence("seifert angle solve".into()))?;
    let (r, _) = residual_jacobian(&sol);
    let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rn < tol::EPS_LAT {
        Ok(sol.iter().map(|&p| wrap_2pi(p)).collect())
    } else {
        Err(Error::NoConvergence(format!("seifert residual {rn:.3e}")))
    }
}

/// Interior/boundary Seifert point by continuation from the singular
/// configuration at eta = tau(xi). The branch selects the seed rho vs rho'.
pub fn seifert_point(
    lat: &PeriodLattice,
    k: &BoundaryData,
    xi_angle: f64,
    eta_angle: f64,
    branch: Branch,
) -> Result<SeifertPoint> {
    let g = lat.genus();
    let xi_angle = wrap_2pi(xi_angle);
    let eta_angle = wrap_2pi(eta_angle);
    let eta0 = wrap_2pi(2.0 * PI - xi_angle);
    // continue eta from tau(xi) to the requested angle, always walking in the
    // decreasing direction (deterministic sheet selection)
    let delta = {
        let d = wrap_2pi(eta_angle - eta0);
        if d == 0.0 {
            0.0
        } else {
            d - 2.0 * PI
        }
    };
    let mut angles: Vec<f64> = (1..=g)
        .map(|i| match branch {
            Branch::Plus => k.rho_angle(i),
            Branch::Minus => k.rho_prime_angle(i),
        })
        .collect();
    let mut s = 0.0f64;
    let mut step = 1.0 / 16.0;
    let mut fails = 0usize;
    while s < 1.0 - 1e-12 {
        let s_next = (s + step).min(1.0);
        let eta = eta0 + s_next * delta;
        match solve_seifert_angles(lat, xi_angle, eta, &angles) {
            Ok(sol) => {
                // reject jumps: continuation must stay on the tracked sheet
                let max_jump = sol
                    .iter()
                    .zip(&angles)
                    .map(|(a, b)| angle_dist(*a, *b))
                    .fold(0.0f64, f64::max);
                if max_jump > 1.2 && step > 1e-4 {
                    step *= 0.5;
                    continue;
                }
                angles = sol;
                s = s_next;
                step = (step * 1.7).min(0.25);
            }
            Err(_) => {
                fails += 1;
                if fails > 60 {
                    return Err(Error::NoConvergence("seifert continuation".into()));
                }
                step *= 0.5;
                if step < 1e-6 {
                    return Err(Error::NoConvergence("seifert continuation stalled".into()));
                }
            }
        }
    }
    let kind = if angle_dist(eta_angle, eta0) < 1e-9 {
        SeifertKind::Singular
    } else if angle_dist(eta_angle, xi_angle) < 1e-9 {
        SeifertKind::Boundary
    } else {
        SeifertKind::Interior
    };
    Ok(SeifertPoint {
        k: k.clone(),
        branch,
        angles,
        xi_angle,
        eta_angle,
        kind,
    })
}

/// The real hyperplane through the divisor 2p_1 + ... + 2p_g + xi + eta:
/// value and z-derivative rows at each tangency, value rows at xi and eta;
/// coefficients from the SVD nullspace of the (2g+2) x (g+3) system.
pub fn hyperplane_from_divisor(lat: &PeriodLattice, sp: &SeifertPoint) -> Result<RealHyperplane> {
    let cfg = lat.cfg();
    let g = cfg.genus();
    let n = g + 3;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * g + 2);
    let fp = cfg.f_poly().derivative();
    for p in sp.tangencies(cfg) {
        let (z, w) = (p.z.re, p.w.re);
        let mut val = vec![0.0; n];
        let mut der = vec![0.0; n];
        let mut zp = 1.0;
        for j in 0..=(g + 1) {
            val[j] = zp;
            zp *= z;
        }
        let mut zp = 1.0;
        for j in 1..=(g + 1) {
            der[j] = j as f64 * zp;
            zp *= z;
        }
        val[g + 2] = w;
        if w.abs() < 1e-10 {
            return Err(Error::DegenerateNullspace);
        }
        der[g + 2] = -fp.eval(z) / (2.0 * w);
        rows.push(val);
        rows.push(der);
    }
    for p in [sp.xi(cfg), sp.eta(cfg)] {
        let (z, w) = (p.z.re, p.w.re);
        let mut val = vec![0.0; n];
        let mut zp = 1.0;
        for j in 0..=(g + 1) {
            val[j] = zp;
            zp *= z;
        }
        val[g + 2] = w;
        rows.push(val);
    }
    nullspace_hyperplane(&rows)
}

/// Shared SVD nullspace extraction with scaling-robust row normalization.
pub fn nullspace_hyperplane(rows: &[Vec<f64>]) -> Result<RealHyperplane> {
    let m = rows.len();
    let n = rows[0].len();
    let mut a = DMatrix::zeros(m, n);
    for (i, r) in rows.iter().enumerate() {
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        for j in 0..n {
            a[(i, j)] = r[j] / norm;
        }
    }
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    let smallest = sv[0];
    let second = sv[1];
    if second < 1e-3 {
        return Err(Error::DegenerateNullspace);
    }
    let gap_ratio = second / smallest.max(1e-300);
    // row of V^T for the smallest singular value
    let idx = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    let mut coeffs: Vec<f64> = (0..n).map(|j| vt[(idx, j)]).collect();
    let nrm = coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
    // fix an overall sign: make the largest-magnitude coefficient positive
    let lead = coeffs
        .iter()
        .cloned()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap();
    let sgn = if lead < 0.0 { -1.0 } else { 1.0 };
    for c in coeffs.iter_mut() {
        *c *= sgn / nrm;
    }
    Ok(RealHyperplane { coeffs, residual: smallest, gap_ratio })
}

/// The reducible hyperplane of a singular Seifert point: P(z) =
/// prod_i (z - z(rho_i)) * (z - lambda) with c_w = 0, lambda in K_{g+1}.
pub fn axis_hyperplane(
    cfg: &BranchConfig,
    k: &BoundaryData,
    prime: bool,
    lambda: f64,
) -> RealHyperplane {
    let g = cfg.genus();
    let mut roots: Vec<f64> = (1..=g)
        .map(|i| {
            let phi = if prime { k.rho_prime_angle(i) } else { k.rho_angle(i) };
            circle_point(cfg, i, phi).z.re
        })
        .collect();
    roots.push(lambda);
    let p = crate::numerics::Poly::from_roots(&roots);
    let mut coeffs = p.0.clone();
    coeffs.push(0.0); // c_w
    let nrm = coeffs.iter().map(|v| v * v).sum::<f64>().sqrt();
    for c in coeffs.iter_mut() {
        *c /= nrm;
    }
    RealHyperplane { coeffs, residual: 0.0, gap_ratio: f64::INFINITY }
}

/// Sampled boundary circle S^1(rho_1, ..., rho_g, last) in the torus
/// W_{1..g}: the set { s - a(q) : q on circle g+1 } with s = sum a(rho_i) +
/// a(last). Returns torus samples and the recovered tangency angles.
pub struct BoundaryCircle {
    pub k: BoundaryData,
    pub last_prime: bool,
    pub q_angles: Vec<f64>,
    pub points: Vec<JacPoint>,
    pub tangency_angles: Vec<Vec<f64>>,
}

pub fn boundary_circle(
    lat: &PeriodLattice,
    k: &BoundaryData,
    last_prime: bool,
    samples: usize,
) -> Result<BoundaryCircle> {
    let g = lat.genus();
    let mut s_raw = vec![Complex64::new(0.0, 0.0); g];
    for i in 1..=g {
        for (a, v) in s_raw.iter_mut().zip(lat.abel_circle_raw(i, k.rho_angle(i))) {
            *a += v;
        }
    }
    let last_angle = if last_prime { PI } else { 0.0 };
    for (a, v) in s_raw.iter_mut().zip(lat.abel_circle_raw(g + 1, last_angle)) {
        *a += v;
    }
    let mut q_angles = Vec::with_capacity(samples);
    let mut points = Vec::with_capacity(samples);
    let mut tangency_angles = Vec::with_capacity(samples);
    // continuation seed: at q = last, the circle point is sum a(rho_i)
    let mut guess: Vec<f64> = (1..=g).map(|i| k.rho_angle(i)).collect();
    for n in 0..samples {
        let phi_q = wrap_2pi(last_angle + 2.0 * PI * n as f64 / samples as f64);
        let raw_q = lat.abel_circle_raw(g + 1, phi_q);
        let v: Vec<Complex64> = s_raw.iter().zip(&raw_q).map(|(a, b)| a - b).collect();
        let target = lat.reduce(&v);
        let sol = invert_real_torus(lat, &target, &guess)?;
        guess = sol.clone();
        q_angles.push(phi_q);
        points.push(target);
        tangency_angles.push(sol);
    }
    Ok(BoundaryCircle {
        k: k.clone(),
        last_prime,
        q_angles,
        points,
        tangency_angles,
    })
}

/// Census of the Seifert surfaces with per-surface sampling statistics.
pub struct SurfaceReport {
    pub k: BoundaryData,
    pub solves: usize,
    pub successes: usize,
    pub min_gap_ratio: f64,
    pub max_residual: f64,
    pub max_constraint: f64,
}

pub fn enumerate_seifert(lat: &PeriodLattice, grid: usize) -> Result<Vec<SurfaceReport>> {
    let g = lat.genus();
    let mut out = Vec::new();
    for kk in 1..=BoundaryData::count(g) {
        let k = BoundaryData::new(g, kk)?;
        let mut solves = 0usize;
        let mut successes = 0usize;
        let mut min_gap = f64::INFINITY;
        let mut max_resid = 0.0f64;
        let mut max_con = 0.0f64;
        for branch in [Branch::Plus, Branch::Minus] {
            for a in 0..grid {
                let xi = 2.0 * PI * (a as f64 + 0.5) / grid as f64;
                // sweep eta by warm-started continuation along the row
                let eta0 = wrap_2pi(2.0 * PI - xi);
                let mut angles: Vec<f64> = (1..=g)
                    .map(|i| match branch {
                        Branch::Plus => k.rho_angle(i),
                        Branch::Minus => k.rho_prime_angle(i),
                    })
                    .collect();
                for b in 1..grid {
                    let eta = eta0 - 2.0 * PI * b as f64 / grid as f64;
                    solves += 1;
                    match solve_seifert_angles(lat, xi, eta, &angles) {
                        Ok(sol) => {
                            angles = sol.clone();
                            let sp = SeifertPoint {
                                k: k.clone(),
                                branch,
                                angles: sol,
                                xi_angle: xi,
                                eta_angle: wrap_2pi(eta),
                                kind: SeifertKind::Interior,
                            };
                            max_con = max_con.max(sp.constraint_residual(lat));
                            if angle_dist(sp.eta_angle, xi) > 0.05 {
                                if let Ok(h) = hyperplane_from_divisor(lat, &sp) {
                                    min_gap = min_gap.min(h.gap_ratio);
                                    max_resid = max_resid.max(h.residual);
                                    successes += 1;
                                }
                            } else {
                                successes += 1;
                            }
                        }
                        Err(_) => {}
                    }
                }
            }
        }
        out.push(SurfaceReport {
            k,
            solves,
            successes,
            min_gap_ratio: min_gap,
            max_residual: max_resid,
            max_constraint: max_con,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::abel_divisor;
    use crate::curve::{g1_config, g2_config};
    use crate::jacobian::period_lattice;
    use crate::numerics::Poly;

    fn g2_lat() -> PeriodLattice {
        period_lattice(&g2_config()).unwrap()
    }

    #[test]
    fn boundary_data_indexing() {
        assert_eq!(BoundaryData::count(1), 1);
        assert_eq!(BoundaryData::count(2), 2);
        assert_eq!(BoundaryData::count(3), 4);
        let k2 = BoundaryData::new(2, 2).unwrap();
        assert_eq!(k2.rho_angle(1), 0.0);
        assert_eq!(k2.rho_angle(2), PI);
        assert!(BoundaryData::new(2, 3).is_err());
    }

    #[test]
    fn torus_inversion_round_trip() {
        let lat = g2_lat();
        let truth = [1.234, 4.956];
        let mut acc = vec![Complex64::new(0.0, 0.0); 2];
        for (i, &p) in truth.iter().enumerate() {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i + 1, p)) {
                *a += v;
            }
        }
        let target = lat.reduce(&acc);
        let guess = [1.334, 4.856];
        let sol = invert_real_torus(&lat, &target, &guess).unwrap();
        assert!(angle_dist(sol[0], truth[0]) < 1e-9);
        assert!(angle_dist(sol[1], truth[1]) < 1e-9);
    }

    #[test]
    fn torus_inversion_rejects_wrong_component() {
        let lat = g2_lat();
        let mut acc = vec![Complex64::new(0.0, 0.0); 2];
        for i in 1..=2 {
            for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i, 1.0)) {
                *a += v;
            }
        }
        let mut t = lat.reduce(&acc);
        t.y[0] = (t.y[0] + 0.5).rem_euclid(1.0);
        match invert_real_torus(&lat, &t, &[1.0, 1.0]) {
            Err(Error::WrongComponent) => {}
            other => panic!("expected WrongComponent, got {other:?}"),
        }
    }

    #[test]
    fn singular_configuration_recovers_rho() {
        let lat = g2_lat();
        for kk in 1..=2 {
            let k = BoundaryData::new(2, kk).unwrap();
            let xi = 0.9;
            let sp = seifert_point(&lat, &k, xi, 2.0 * PI - xi, Branch::Plus).unwrap();
            assert_eq!(sp.kind, SeifertKind::Singular);
            for i in 1..=2 {
                assert!(
                    angle_dist(sp.angles[i - 1], k.rho_angle(i)) < 1e-7,
                    "k={kk} i={i}: {:.3e}",
                    angle_dist(sp.angles[i - 1], k.rho_angle(i))
                );
            }
            let sm = seifert_point(&lat, &k, xi, 2.0 * PI - xi, Branch::Minus).unwrap();
            for i in 1..=2 {
                assert!(angle_dist(sm.angles[i - 1], k.rho_prime_angle(i)) < 1e-7);
            }
        }
    }

    #[test]
    fn interior_point_constraint_and_hyperplane() {
        let lat = g2_lat();
        let k = BoundaryData::new(2, 1).unwrap();
        let sp = seifert_point(&lat, &k, 0.8, 2.4, Branch::Plus).unwrap();
        assert_eq!(sp.kind, SeifertKind::Interior);
        assert!(sp.constraint_residual(&lat) < 1e-8);
        // no tangency is at a ramification point
        for &a in &sp.angles {
            assert!(a.sin().abs() > 1e-3, "tangency at ramification, phi = {a}");
        }
        let h = hyperplane_from_divisor(&lat, &sp).unwrap();
        assert!(h.residual < 1e-8, "residual {:.3e}", h.residual);
        assert!(h.gap_ratio > 1e4, "gap {:.3e}", h.gap_ratio);
        // restriction divisor: P(z)^2 + c_w^2 f(z) has double roots at the
        // tangency z-values and simple roots at z(xi), z(eta)
        let cfg = g2_config();
        let p = Poly(h.poly_part());
        let p2 = p.mul(&p);
        let mut n = cfg.f_poly().scale(h.c_w() * h.c_w()).add(&p2);
        let lead = n.0.last().copied().unwrap();
        for c in n.0.iter_mut() {
            *c /= lead;
        }
        let tzs: Vec<f64> = sp.tangencies(&cfg).iter().map(|p| p.z.re).collect();
        let simple = [sp.xi(&cfg).z.re, sp.eta(&cfg).z.re];
        let mut all = Vec::new();
        for &t in &tzs {
            all.push(t);
            all.push(t);
        }
        all.extend_from_slice(&simple);
        let q = Poly::from_roots(&all);
        for (a, b) in n.0.iter().zip(q.0.iter()) {
            assert!((a - b).abs() < 1e-5, "coeff mismatch {a} vs {b}");
        }
        // Abel's theorem cross-check on the full intersection divisor
        let roots = n.roots();
        let mut div = Vec::new();
        for r in &roots {
            let pw = crate::curve::w_plus(&cfg, *r);
            // choose the sheet on which the hyperplane vanishes
            let v_plus = h.eval(*r, pw).norm();
            let v_minus = h.eval(*r, -pw).norm();
            let w = if v_plus <= v_minus { pw } else { -pw };
            div.push(CurvePoint::from_zw(&cfg, *r, w).unwrap());
        }
        let cls = abel_divisor(&lat, &div).unwrap();
        assert!(
            cls.dist(&JacPoint::zero(2)) < 1e-6,
            "hyperplane class {:.3e}",
            cls.dist(&JacPoint::zero(2))
        );
    }

    #[test]
    fn genus_one_seifert_point() {
        let lat = period_lattice(&g1_config()).unwrap();
        let k = BoundaryData::new(1, 1).unwrap();
        let sp = seifert_point(&lat, &k, 1.1, 3.3, Branch::Plus).unwrap();
        assert!(sp.constraint_residual(&lat) < 1e-8);
        let h = hyperplane_from_divisor(&lat, &sp).unwrap();
        assert!(h.gap_ratio > 1e4);
    }

    #[test]
    fn boundary_circles_meet_in_two_points() {
        let lat = g2_lat();
        let k = BoundaryData::new(2, 1).unwrap();
        let c0 = boundary_circle(&lat, &k, false, 160).unwrap();
        let c1 = boundary_circle(&lat, &k, true, 160).unwrap();
        // the two intersection points are sum a(rho_i) and sum a(rho'_i)
        let g = 2;
        let special: Vec<JacPoint> = [false, true]
            .iter()
            .map(|&pr| {
                let mut acc = vec![Complex64::new(0.0, 0.0); g];
                for i in 1..=g {
                    let phi = if pr { k.rho_prime_angle(i) } else { k.rho_angle(i) };
                    for (a, v) in acc.iter_mut().zip(lat.abel_circle_raw(i, phi)) {
                        *a += v;
                    }
                }
                lat.reduce(&acc)
            })
            .collect();
        for s in &special {
            let d0 = c0.points.iter().map(|p| p.dist(s)).fold(f64::INFINITY, f64::min);
            let d1 = c1.points.iter().map(|p| p.dist(s)).fold(f64::INFINITY, f64::min);
            assert!(d0 < 0.05 && d1 < 0.05, "special point missed: {d0:.3e} {d1:.3e}");
        }
        // apart from neighborhoods of the special points the circles are
        // disjoint
        for p in &c0.points {
            let near_special = special.iter().any(|s| p.dist(s) < 0.15);
            if near_special {
                continue;
            }
            let d = c1.points.iter().map(|q| p.dist(q)).fold(f64::INFINITY, f64::min);
            assert!(d > 10.0 * tol::EPS_LAT, "unexpected intersection, d = {d:.3e}");
        }
    }

    #[test]
    fn boundary_circle_invariant_under_negation() {
        let lat = g2_lat();
        let k = BoundaryData::new(2, 2).unwrap();
        let c = boundary_circle(&lat, &k, false, 128).unwrap();
        for p in c.points.iter().step_by(8) {
            let n = p.neg();
            let d = c.points.iter().map(|q| q.dist(&n)).fold(f64::INFINITY, f64::min);
            assert!(d < 0.05, "negation image off the circle: {d:.3e}");
        }
    }

    #[test]
    fn circles_of_distinct_k_are_disjoint() {
        let lat = g2_lat();
        let k1 = BoundaryData::new(2, 1).unwrap();
        let k2 = BoundaryData::new(2, 2).unwrap();
        for last in [false, true] {
            let a = boundary_circle(&lat, &k1, last, 96).unwrap();
            for last2 in [false, true] {
                let b = boundary_circle(&lat, &k2, last2, 96).unwrap();
                let mut dmin = f64::INFINITY;
                for p in &a.points {
                    for q in &b.points {
                        dmin = dmin.min(p.dist(q));
                    }
                }
                assert!(dmin > 10.0 * tol::EPS_LAT, "k circles touch: {dmin:.3e}");
            }
        }
    }

    #[test]
    fn axis_hyperplane_splits_into_lines() {
        let cfg = g2_config();
        let k = BoundaryData::new(2, 1).unwrap();
        let h = axis_hyperplane(&cfg, &k, false, 1.5);
        assert_eq!(h.c_w(), 0.0);
        // vanishes at both lifts over each rho and over lambda
        for i in 1..=2 {
            let p = k.rho_point(&cfg, i);
            assert!(h.eval(p.z, p.w).norm() < 1e-10);
        }
        let q = circle_point(&cfg, 3, 1.8);
        assert!(h.eval(q.z, q.w).norm() > 1e-3);
    }

    #[test]
    fn census_counts() {
        for (cfg, expect) in [(g1_config(), 1usize), (g2_config(), 2usize)] {
            let lat = period_lattice(&cfg).unwrap();
            let reports = enumerate_seifert(&lat, 8).unwrap();
            assert_eq!(reports.len(), expect);
            for r in &reports {
                assert!(r.successes * 100 >= r.solves * 99, "{}/{}", r.successes, r.solves);
                assert!(r.max_constraint < 1e-7);
            }
        }
    }
}
