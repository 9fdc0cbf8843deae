//! Elliptic integrals, Jacobi functions and an adaptive quadrature oracle.
//!
//! Parameters follow the `m = k²` convention. Legendre forms are reduced to
//! Carlson's symmetric integrals `R_F`, `R_D`, `R_J` and evaluated by the
//! duplication theorem, which gives close to full double precision.
//!
//! ```
//! use halfelastica::ellint::{complete_k, complete_pi};
//! let k = complete_k(0.4).unwrap();
//! assert!((complete_pi(0.0, 0.4).unwrap() - k).abs() < 1e-15);
//! ```

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};

/// Below this value of `1 - m` the complete integrals use their logarithmic expansions.
pub const LOG_REGIME: f64 = 1e-12;

/// A point at which Legendre integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParameter {
    /// Parameter `m = k²`.
    pub m: f64,
    /// Characteristic of the third kind.
    pub n: f64,
    /// Amplitude in radians.
    pub phi: f64,
}

/// Carlson's symmetric integral of the first kind, `R_F(x, y, z)`.
///
/// At most one argument may be zero; all must be non-negative.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || (x + y).min(x + z).min(y + z) == 0.0 {
        return Err(domain(
            "carlson_rf",
            format!("invalid arguments ({x}, {y}, {z})"),
        ));
    }
    const TOL: f64 = 5e-4;
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = (x + y + z) / 3.0;
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let s = 1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0;
            return Ok(s / ave.sqrt());
        }
    }
}

/// Carlson's degenerate integral `R_C(x, y)` for `y > 0`.
pub fn carlson_rc(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y <= 0.0 {
        return Err(domain(
            "carlson_rc",
            format!("invalid arguments ({x}, {y})"),
        ));
    }
    const TOL: f64 = 5e-4;
    let (mut x, mut y) = (x, y);
    loop {
        let lam = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        let ave = (x + y + y) / 3.0;
        let s = (y - ave) / ave;
        if s.abs() < TOL {
            let poly = 1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)));
            return Ok(poly / ave.sqrt());
        }
    }
}

/// Carlson's symmetric integral of the second kind, `R_D(x, y, z)`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0 {
        return Err(domain(
            "carlson_rd",
            format!("invalid arguments ({x}, {y}, {z})"),
        ));
    }
    const TOL: f64 = 5e-4;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = 0.2 * (x + y + 3.0 * z);
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < TOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            let poly = 1.0
                + ed * (-C1 + C5 * ed - C6 * dz * ee)
                + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea));
            return Ok(3.0 * sum + fac * poly / (ave * ave.sqrt()));
        }
    }
}

/// Carlson's symmetric integral of the third kind, `R_J(x, y, z, p)` for `p > 0`.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 || p <= 0.0 || (x + y).min(x + z).min(y + z) == 0.0 {
        return Err(domain(
            "carlson_rj",
            format!("invalid arguments ({x}, {y}, {z}, {p})"),
        ));
    }
    const TOL: f64 = 5e-4;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.75 * C3;
    const C6: f64 = 1.5 * C4;
    const C7: f64 = 0.5 * C2;
    const C8: f64 = C3 + C3;
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lam).powi(2);
        sum += fac * carlson_rc(alpha, beta)?;
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        let ave = 0.2 * (x + y + z + p + p);
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        let dp = (ave - p) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < TOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            let poly = 1.0
                + ed * (-C1 + C5 * ed - C6 * ee)
                + eb * (C7 + dp * (-C8 + dp * C4))
                + dp * ea * (C2 - dp * C3)
                - C2 * dp * ec;
            return Ok(3.0 * sum + fac * poly / (ave * ave.sqrt()));
        }
    }
}

fn check_m(func: &'static str, m: f64) -> Result<()> {
    if !(0.0..1.0).contains(&m) {
        return Err(domain(func, format!("parameter m = {m} outside [0, 1)")));
    }
    Ok(())
}

fn check_n(func: &'static str, n: f64) -> Result<()> {
    if !(n < 1.0) {
        return Err(domain(func, format!("characteristic n = {n} must be < 1")));
    }
    Ok(())
}

fn check_phi(func: &'static str, phi: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_2 + 1e-15).contains(&phi) {
        return Err(domain(func, format!("amplitude {phi} outside [0, pi/2]")));
    }
    Ok(())
}

/// `ln(4 / sqrt(1 - m))`, the leading term of `K` as `m -> 1`.
fn log_term(mc: f64) -> f64 {
    (4.0 / mc.sqrt()).ln()
}

/// Complete elliptic integral of the first kind `K(m)`.
pub fn complete_k(m: f64) -> Result<f64> {
    check_m("complete_k", m)?;
    let mc = 1.0 - m;
    if mc < LOG_REGIME {
        let l = log_term(mc);
        return Ok(l + 0.25 * mc * (l - 1.0));
    }
    carlson_rf(0.0, mc, 1.0)
}

/// Complete elliptic integral of the second kind `E(m)`, `0 <= m <= 1`.
pub fn complete_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(domain(
            "complete_e",
            format!("parameter m = {m} outside [0, 1]"),
        ));
    }
    let mc = 1.0 - m;
    if mc == 0.0 {
        return Ok(1.0);
    }
    if mc < LOG_REGIME {
        let l = log_term(mc);
        return Ok(1.0 + 0.5 * mc * (l - 0.5));
    }
    Ok(carlson_rf(0.0, mc, 1.0)? - m / 3.0 * carlson_rd(0.0, mc, 1.0)?)
}

/// Complete elliptic integral of the third kind `Π(n, m)`.
///
/// Sign convention: `Π(n, m) = ∫ dθ / ((1 - n sin²θ) √(1 - m sin²θ))`.
pub fn complete_pi(n: f64, m: f64) -> Result<f64> {
    check_n("complete_pi", n)?;
    check_m("complete_pi", m)?;
    let mc = 1.0 - m;
    if mc < LOG_REGIME {
        let l = log_term(mc);
        let tail = if n < 0.0 {
            let r = (-n).sqrt();
            r * r.atan()
        } else {
            let r = n.sqrt();
            -r * r.atanh()
        };
        return Ok((l + tail) / (1.0 - n));
    }
    let rf = carlson_rf(0.0, mc, 1.0)?;
    if n == 0.0 {
        return Ok(rf);
    }
    if n < 0.0 {
        // The direct form cancels for large |n|; map to N = (m − n)/(1 − n) in (m, 1).
        let big = (m - n) / (1.0 - n);
        let pi_big = rf + big / 3.0 * carlson_rj(0.0, mc, 1.0, mc / (1.0 - n))?;
        return Ok(-n * mc / ((1.0 - n) * (m - n)) * pi_big + m / (m - n) * rf);
    }
    Ok(rf + n / 3.0 * carlson_rj(0.0, mc, 1.0, 1.0 - n)?)
}

/// Incomplete integral of the first kind `F(phi, m)`, `0 <= phi <= pi/2`.
pub fn incomplete_f(phi: f64, m: f64) -> Result<f64> {
    check_m("incomplete_f", m)?;
    check_phi("incomplete_f", phi)?;
    if phi == 0.0 {
        return Ok(0.0);
    }
    let (s, c) = phi.sin_cos();
    Ok(s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)?)
}

/// Incomplete integral of the second kind `E(phi, m)`, `0 <= phi <= pi/2`.
pub fn incomplete_e(phi: f64, m: f64) -> Result<f64> {
    check_m("incomplete_e", m)?;
    check_phi("incomplete_e", phi)?;
    if phi == 0.0 {
        return Ok(0.0);
    }
    let (s, c) = phi.sin_cos();
    let (x, y) = (c * c, 1.0 - m * s * s);
    Ok(s * carlson_rf(x, y, 1.0)? - m * s.powi(3) / 3.0 * carlson_rd(x, y, 1.0)?)
}

/// Incomplete integral of the third kind `Π(n, phi, m)`, `0 <= phi <= pi/2`.
pub fn incomplete_pi(n: f64, phi: f64, m: f64) -> Result<f64> {
    check_n("incomplete_pi", n)?;
    check_m("incomplete_pi", m)?;
    check_phi("incomplete_pi", phi)?;
    if phi == 0.0 {
        return Ok(0.0);
    }
    let (s, c) = phi.sin_cos();
    let (x, y) = (c * c, 1.0 - m * s * s);
    let rf = carlson_rf(x, y, 1.0)?;
    if n == 0.0 {
        return Ok(s * rf);
    }
    let rj = carlson_rj(x, y, 1.0, 1.0 - n * s * s)?;
    Ok(s * rf + n * s.powi(3) / 3.0 * rj)
}

/// Jacobi amplitude `am(u, m)` by the arithmetic-geometric mean.
pub fn jacobi_am(u: f64, m: f64) -> Result<f64> {
    check_m("jacobi_am", m)?;
    if m == 0.0 {
        return Ok(u);
    }
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > 1e-16 && a.len() < 64 {
        let an = *a.last().unwrap();
        let next_a = 0.5 * (an + b);
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
        a.push(next_a);
    }
    let levels = a.len() - 1;
    let mut phi = 2f64.powi(levels as i32) * a[levels] * u;
    for k in (1..=levels).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    Ok(phi)
}

/// Jacobi elliptic sine `sn(u, m) = sin(am(u, m))`.
pub fn jacobi_sn(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_am(u, m)?.sin())
}

/// Inverse of `sn` on `[0, K(m)]`: returns `u` with `sn(u, m) = x`, `x ∈ [0, 1]`.
pub fn inverse_sn(x: f64, m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("inverse_sn", format!("argument {x} outside [0, 1]")));
    }
    incomplete_f(x.asin(), m)
}

// Kronrod 15-point nodes and weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod quadrature of a smooth integrand.
///
/// Stops when the summed error estimate falls below `tol · max(1, |I|)`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_SEGMENTS: usize = 20_000;
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        err: e,
    });
    let (mut total, mut err) = (v, e);
    while err > tol * total.abs().max(1.0) {
        if heap.len() >= MAX_SEGMENTS || !total.is_finite() {
            return Err(Error::NonConvergence {
                method: "gauss_kronrod",
                achieved: err,
            });
        }
        let seg = heap.pop().unwrap();
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.err;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            err: e2,
        });
    }
    // Re-sum to shed the drift of the running update.
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Adaptive quadrature oracle on `(a, b)`.
///
/// The substitution `x = (a+b)/2 - (b-a)/2·cos t` absorbs inverse square-root
/// singularities at either endpoint, so integrands such as `1/√((x-a)(b-x))`
/// are handled without special treatment. The integrand is never evaluated at
/// the endpoints themselves.
pub fn quad_oracle<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    gauss_kronrod(
        |t: f64| {
            let (s, c) = t.sin_cos();
            f(mid - half * c) * half * s
        },
        0.0,
        PI,
        tol,
    )
}
