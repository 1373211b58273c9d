//! Shared helpers for the integration suite: an independent period oracle
//! (plain Gauss-Chebyshev at high order, no adaptive machinery) and random
//! sampling utilities.

#![allow(dead_code)]

use minitwistor::curve::BranchConfig;
use minitwistor::jacobian::{JacPoint, PeriodLattice};
use minitwistor::seifert::{seifert_point, BoundaryData, Branch, SeifertPoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Gauss-Chebyshev value of int_a^b z^(j-1) / sqrt(sign * f) dz where the
/// square-root factor (z - a)(b - z) is absorbed into the weight.
fn gc_period(bp: &[f64], a: f64, b: f64, j: usize, sign: f64, n: usize) -> f64 {
    let rest: Vec<f64> = bp
        .iter()
        .copied()
        .filter(|&v| v != a && v != b)
        .collect();
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = 0.0;
    for k in 0..n {
        let t = PI * (k as f64 + 0.5) / n as f64;
        let z = c - h * t.cos();
        let val: f64 = -sign * rest.iter().map(|&v| z - v).product::<f64>();
        acc += z.powi(j as i32 - 1) / val.sqrt();
    }
    acc * PI / n as f64
}

/// Independent period columns: g+1 circle columns (real values) followed by
/// g gap columns (coefficients of i), each of length g.
pub fn oracle_columns(cfg: &BranchConfig, n: usize) -> Vec<Vec<f64>> {
    let bp = cfg.branch_points();
    let g = cfg.genus();
    let mut cols = Vec::with_capacity(2 * g + 1);
    for i in 0..=g {
        let (a, b) = (bp[2 * i], bp[2 * i + 1]);
        cols.push((1..=g).map(|j| 2.0 * gc_period(bp, a, b, j, -1.0, n)).collect());
    }
    for i in 0..g {
        let (a, b) = (bp[2 * i + 1], bp[2 * i + 2]);
        cols.push((1..=g).map(|j| -2.0 * gc_period(bp, a, b, j, 1.0, n)).collect());
    }
    cols
}

/// Random interior Seifert point: xi uniform, eta a strictly interior
/// continuation distance, branch by a coin flip.
pub fn random_seifert(
    lat: &PeriodLattice,
    k: &BoundaryData,
    rng: &mut ChaCha8Rng,
) -> SeifertPoint {
    loop {
        let xi = 2.0 * PI * rng.gen::<f64>();
        // keep eta well away from the singular configuration eta = tau(xi)
        let d = 2.0 * PI * (0.15 + 0.7 * rng.gen::<f64>());
        let eta = 2.0 * PI - xi - d;
        let branch = if rng.gen::<bool>() { Branch::Plus } else { Branch::Minus };
        if let Ok(sp) = seifert_point(lat, k, xi, eta, branch) {
            return sp;
        }
    }
}

/// A point of the boundary circle S^1(rho_1..rho_g, last) at parameter phi.
pub fn circle_track(
    lat: &PeriodLattice,
    k: &BoundaryData,
    last_prime: bool,
    phi: f64,
) -> JacPoint {
    let g = lat.genus();
    let mut s = JacPoint::zero(g);
    for i in 1..=g {
        s = s.add(&lat.abel_circle(i, k.rho_angle(i)));
    }
    let last = if last_prime { PI } else { 0.0 };
    s = s.add(&lat.abel_circle(g + 1, last));
    s.add(&lat.abel_circle(g + 1, phi).neg())
}

/// The two designated torus points sum a(rho_i) and sum a(rho'_i) over the
/// first g circles; by theory these are the intersection points of the two
/// boundary circles attached to k.
pub fn designated_points(lat: &PeriodLattice, k: &BoundaryData) -> (JacPoint, JacPoint) {
    let g = lat.genus();
    let mut da = JacPoint::zero(g);
    let mut db = JacPoint::zero(g);
    for i in 1..=g {
        da = da.add(&lat.abel_circle(i, k.rho_angle(i)));
        db = db.add(&lat.abel_circle(i, k.rho_prime_angle(i)));
    }
    (da, db)
}

/// Distance from a torus point to the boundary circle track (coarse scan plus
/// golden-ratio refinement in the circle parameter).
pub fn track_distance(
    lat: &PeriodLattice,
    k: &BoundaryData,
    last_prime: bool,
    target: &JacPoint,
) -> f64 {
    let coarse = 1024;
    let mut best = (f64::INFINITY, 0.0);
    for n in 0..coarse {
        let phi = 2.0 * PI * n as f64 / coarse as f64;
        let d = circle_track(lat, k, last_prime, phi).dist(target);
        if d < best.0 {
            best = (d, phi);
        }
    }
    let (mut lo, mut hi) = (best.1 - 2.0 * PI / coarse as f64, best.1 + 2.0 * PI / coarse as f64);
    let gr = 0.5 * (5.0f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - gr * (hi - lo);
        let m2 = lo + gr * (hi - lo);
        let d1 = circle_track(lat, k, last_prime, m1).dist(target);
        let d2 = circle_track(lat, k, last_prime, m2).dist(target);
        if d1 < d2 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let phi = 0.5 * (lo + hi);
    circle_track(lat, k, last_prime, phi).dist(target)
}

/// Count the intersection points of the two boundary circles attached to k
/// (last endpoint unprimed vs primed) by coarse scan plus local refinement.
pub fn circle_intersections(lat: &PeriodLattice, k: &BoundaryData, coarse: usize) -> Vec<JacPoint> {
    let track_a: Vec<JacPoint> = (0..coarse)
        .map(|n| circle_track(lat, k, false, 2.0 * PI * n as f64 / coarse as f64))
        .collect();
    let track_b: Vec<JacPoint> = (0..coarse)
        .map(|n| circle_track(lat, k, true, 2.0 * PI * n as f64 / coarse as f64))
        .collect();
    let dmin = |i: usize| -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (j, q) in track_b.iter().enumerate() {
            let d = track_a[i].dist(q);
            if d < best.0 {
                best = (d, j);
            }
        }
        best
    };
    let step = 2.0 * PI / coarse as f64;
    let mut hits: Vec<JacPoint> = Vec::new();
    for i in 0..coarse {
        let (d, j) = dmin(i);
        let (dp, _) = dmin((i + 1) % coarse);
        let (dm, _) = dmin((i + coarse - 1) % coarse);
        // local minimum of the distance profile close to an actual crossing
        if d <= dp && d < dm && d < 4.0 * step {
            let mut phi = 2.0 * PI * i as f64 / coarse as f64;
            let mut psi = 2.0 * PI * j as f64 / coarse as f64;
            let mut h = step;
            let mut best = d;
            for _ in 0..60 {
                for (dp_, dq_) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
                    let cand = circle_track(lat, k, false, phi + dp_)
                        .dist(&circle_track(lat, k, true, psi + dq_));
                    if cand < best {
                        best = cand;
                        phi += dp_;
                        psi += dq_;
                    }
                }
                h *= 0.6;
            }
            if best < 1e-6 {
                let p = circle_track(lat, k, false, phi);
                if hits.iter().all(|q| q.dist(&p) > 1e-3) {
                    hits.push(p);
                }
            }
        }
    }
    hits
}
