//! Shared numerical kernels: Gauss-Legendre quadrature (plain and adaptive),
//! real polynomials with companion-matrix roots, and scalar root finding.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
fn gl_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n and P_n' by recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gl_rule(16))
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gl_rule(32))
}

pub fn gl8() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gl_rule(8))
}

/// Fixed-order Gauss-Legendre integral of a complex-valued function over [a, b].
pub fn integrate_gl(f: &mut dyn FnMut(f64) -> Complex64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        acc += f(c + h * x) * *w;
    }
    acc * h
}

/// Adaptive Gauss-Legendre: bisects until the 16- vs 32-point estimates agree
/// to `tol` relative to `scale`.
pub fn integrate_adaptive(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    scale: f64,
) -> Result<Complex64> {
    fn rec(
        f: &mut dyn FnMut(f64) -> Complex64,
        a: f64,
        b: f64,
        tol: f64,
        scale: f64,
        depth: usize,
    ) -> Result<Complex64> {
        let coarse = integrate_gl(f, a, b, gl16());
        let fine = integrate_gl(f, a, b, gl32());
        let err = (fine - coarse).norm();
        if err <= tol * scale.max(fine.norm()) {
            return Ok(fine);
        }
        if depth == 0 {
            return Err(Error::QuadratureFailure(err));
        }
        let m = 0.5 * (a + b);
        Ok(rec(f, a, m, tol, scale, depth - 1)? + rec(f, m, b, tol, scale, depth - 1)?)
    }
    rec(f, a, b, tol, scale, 30)
}

/// Real polynomial, coefficients ascending: c[0] + c[1] z + ...
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for r in roots {
            // multiply by (z - r)
            let mut next = vec![0.0; c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        Poly(c)
    }

    pub fn degree(&self) -> usize {
        let mut d = self.0.len();
        while d > 1 && self.0[d - 1] == 0.0 {
            d -= 1;
        }
        d - 1
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut c = vec![0.0; n];
        for (i, v) in self.0.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in other.0.iter().enumerate() {
            c[i] += v;
        }
        Poly(c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut c = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c)
    }

    /// All complex roots via the companion matrix of the monic normalization.
    pub fn roots(&self) -> Vec<Complex64> {
        let d = self.degree();
        if d == 0 {
            return vec![];
        }
        let lead = self.0[d];
        let mut m = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            m[(i, d - 1)] = -self.0[i] / lead;
        }
        m.complex_eigenvalues().iter().copied().collect()
    }

    /// Least-squares division by a monic divisor built from the given roots.
    /// Returns the quotient; the remainder is expected to be numerically zero
    /// (caller checks if it matters).
    pub fn deflate(&self, roots: &[f64]) -> Poly {
        let mut q = self.0.clone();
        for &r in roots {
            // synthetic division by (z - r)
            let mut carry = 0.0;
            for c in q.iter_mut().rev() {
                let tmp = *c + carry * r;
                *c = carry;
                carry = tmp;
            }
            // carry now holds the remainder; the quotient occupies the low
            // slots and the top slot is zero
            q.pop();
            if q.is_empty() {
                q.push(0.0);
            }
        }
        Poly(q)
    }
}

/// Brent-style bracketed root find (bisection + secant safeguard).
pub fn brent(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::NoConvergence(format!(
            "root not bracketed on [{a}, {b}] (f = {fa:.3e}, {fb:.3e})"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        // secant candidate
        let s = if fb != fa { b - fb * (b - a) / (fb - fa) } else { m };
        let x = if s > a.min(b) && s < a.max(b) { s } else { m };
        let fx = f(x);
        if fx == 0.0 || (b - a).abs() < tol {
            return Ok(x);
        }
        if fa * fx < 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    Ok(0.5 * (a + b))
}

/// Dense Newton solve for a small square real system with numerically
/// supplied Jacobian. `fj` returns (residual, jacobian).
pub fn newton_system(
    fj: &mut dyn FnMut(&[f64]) -> (Vec<f64>, DMatrix<f64>),
    x0: &[f64],
    tol: f64,
    max_steps: usize,
) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    for _ in 0..max_steps {
        let (r, jac) = fj(&x);
        let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rn < tol {
            return Ok(x);
        }
        let rhs = nalgebra::DVector::from_vec(r);
        let Some(step) = jac.lu().solve(&rhs) else {
            return Err(Error::NoConvergence("singular Jacobian".into()));
        };
        // Damped line search on the residual norm.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, s)| xi - lambda * s).collect();
            let (rc, _) = fj(&cand);
            let rcn = rc.iter().map(|v| v * v).sum::<f64>().sqrt();
            if rcn < rn {
                x = cand;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence("line search stalled".into()));
        }
    }
    let (r, _) = fj(&x);
    let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rn < tol {
        Ok(x)
    } else {
        Err(Error::NoConvergence(format!("residual {rn:.3e} after {max_steps} steps")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // degree-31 monomial is exact for 16-point GL
        let mut f = |x: f64| Complex64::new(x.powi(7) - 3.0 * x.powi(2) + 1.0, 0.0);
        let v = integrate_gl(&mut f, -1.0, 2.0, gl16());
        // antiderivative x^8/8 - x^3 + x
        let exact = |x: f64| x.powi(8) / 8.0 - x.powi(3) + x;
        assert_relative_eq!(v.re, exact(2.0) - exact(-1.0), max_relative = 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let mut f = |x: f64| Complex64::new(1.0 / (1e-4 + x * x), 0.0);
        let v = integrate_adaptive(&mut f, -1.0, 1.0, 1e-12, 0.0).unwrap();
        let a = 1e-2f64; // exact value is (2/a) atan(1/a)
        assert_relative_eq!(v.re, 2.0 / a * (1.0 / a).atan(), max_relative = 1e-10);
    }

    #[test]
    fn poly_roots_and_deflation() {
        let p = Poly::from_roots(&[-2.0, 0.5, 3.0]);
        let mut roots: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        assert_relative_eq!(roots[0], -2.0, max_relative = 1e-12);
        assert_relative_eq!(roots[1], 0.5, max_relative = 1e-12);
        assert_relative_eq!(roots[2], 3.0, max_relative = 1e-12);
        let q = p.deflate(&[0.5]);
        assert_eq!(q.degree(), 2);
        assert!(q.eval(-2.0).abs() < 1e-12 && q.eval(3.0).abs() < 1e-12);
    }

    #[test]
    fn brent_finds_bracketed_root() {
        let mut f = |x: f64| x.cos() - x;
        let r = brent(&mut f, 0.0, 1.0, 1e-14).unwrap();
        assert_relative_eq!(r.cos(), r, epsilon = 1e-12);
    }

    #[test]
    fn newton_solves_2d_system() {
        let mut fj = |x: &[f64]| {
            let r = vec![x[0] * x[0] + x[1] * x[1] - 1.0, x[1] - x[0]];
            let jac = DMatrix::from_row_slice(2, 2, &[2.0 * x[0], 2.0 * x[1], -1.0, 1.0]);
            (r, jac)
        };
        let x = newton_system(&mut fj, &[1.0, 0.3], 1e-13, 50).unwrap();
        let s = 0.5f64.sqrt();
        assert_relative_eq!(x[0], s, max_relative = 1e-10);
        assert_relative_eq!(x[1], s, max_relative = 1e-10);
    }
}
