//! Root finding helpers shared by the algebraic and period-map layers.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Real roots of `c[0]·x^d + c[1]·x^(d-1) + … + c[d]` from the companion-matrix
/// eigenvalues, sorted ascending and polished by Newton steps.
///
/// Eigenvalues with imaginary part above `imag_tol · max(1, |z|)` are dropped.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let lead = coeffs[0];
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        comp[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    let mut roots: Vec<f64> = comp
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= imag_tol * z.norm().max(1.0))
        .map(|z| polish(coeffs, z.re))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// Value and derivative of a polynomial by Horner's rule.
pub fn horner(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// A few Newton steps, keeping the best iterate.
pub fn polish(coeffs: &[f64], x0: f64) -> f64 {
    let mut x = x0;
    let mut best = (horner(coeffs, x).0.abs(), x);
    for _ in 0..8 {
        let (p, dp) = horner(coeffs, x);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        x -= p / dp;
        let r = horner(coeffs, x).0.abs();
        if r < best.0 {
            best = (r, x);
        } else {
            break;
        }
    }
    best.1
}

/// Brent's method on a bracketing interval `[a, b]`.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoBracket(format!(
            "f({a}) = {fa} and f({b}) = {fb} do not bracket a root"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NonConvergence {
        method: "brent",
        achieved: (c - b).abs(),
    })
}

/// Golden-section minimisation on `[a, b]`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while (b - a).abs() > xtol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
