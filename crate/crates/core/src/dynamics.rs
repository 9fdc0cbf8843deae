//! Curvature dynamics: the Euler–Lagrange flow of the Blaschke invariant `μ`,
//! its first integral, the wavelength and the phase-portrait taxonomy.
//!
//! `μ` solves `μ̈ = 2μ̇²/μ − μ − 2λμ⁴ − μ⁵` and conserves
//! `μ̇² + μ²·Q_{λ,c}(μ) = 0`.

use std::f64::consts::PI;

use crate::ellint::{complete_k, complete_pi, gauss_kronrod, incomplete_pi, inverse_sn};
use crate::error::{domain, Result};
use crate::moduli::{
    a_lower, c_from_roots, e3_e4_from_roots, eta_pm, roots_from_modulus, ModulusPoint, QuarticData,
    Region, LAMBDA_CRIT,
};
use crate::ode::{integrate_on_grid, uniform_grid, StepControl};

/// Samples per period used when none is requested.
pub const DEFAULT_SAMPLES: usize = 2048;

/// Orbit types of the phase portrait.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitType {
    StableEquilibrium,
    UnstableEquilibrium,
    Closed,
    NonClosedFirstKind,
    NonClosedSecondKind,
    ExceptionalFirstKind,
    ExceptionalSecondKind,
}

/// One sample of the curvature solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuSample {
    pub s: f64,
    pub mu: f64,
    pub mu_dot: f64,
}

/// A periodic Blaschke invariant sampled over arclength.
#[derive(Debug, Clone, PartialEq)]
pub struct MuSolution {
    pub modulus: ModulusPoint,
    pub quartic: QuarticData,
    pub wavelength: f64,
    pub samples: Vec<MuSample>,
}

impl MuSolution {
    /// Largest `|μ̇² + μ²Q(μ)|` over the samples.
    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| conservation_residual(&self.quartic, s.mu, s.mu_dot).abs())
            .fold(0.0, f64::max)
    }
}

/// Integration settings for the curvature flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub samples_per_period: usize,
    pub step: StepControl,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            samples_per_period: DEFAULT_SAMPLES,
            step: StepControl::default(),
        }
    }
}

/// Elliptic data entering the wavelength and the inverse function `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveModuli {
    pub alpha: f64,
    pub m: f64,
    pub n: f64,
    pub g: f64,
}

impl WaveModuli {
    pub fn new(q: &QuarticData) -> Self {
        let QuarticData { e1, e2, e3, e4, .. } = *q;
        let alpha = (e2 - e1) / (e2 - e4);
        WaveModuli {
            alpha,
            m: (e1 - e2) * (e3 - e4) / ((e1 - e3) * (e2 - e4)),
            n: e4 * alpha / e1,
            g: 2.0 / ((e1 - e3) * (e2 - e4)).sqrt(),
        }
    }
}

/// The vector field `(y, 2(y²/x − x/2 − λx⁴ − x⁵/2))` on `x > 0`.
pub fn phase_field(lambda: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) {
        return Err(domain("phase_field", format!("x = {x} must be positive")));
    }
    Ok((y, accel(lambda, x, y)))
}

#[inline]
fn accel(lambda: f64, x: f64, y: f64) -> f64 {
    let x3 = x * x * x;
    2.0 * y * y / x - x - 2.0 * lambda * x3 * x - x3 * x * x
}

/// The level `c` of the first integral through `(x, y)`.
pub fn energy_level(lambda: f64, x: f64, y: f64) -> f64 {
    let x2 = x * x;
    (y * y / x2 + x2 * (x2 + 4.0 * lambda * x + 4.0 * lambda * lambda) - 1.0) / (4.0 * x2)
}

/// `μ̇² + μ²Q(μ)`, zero along exact solutions.
pub fn conservation_residual(q: &QuarticData, mu: f64, mu_dot: f64) -> f64 {
    mu_dot * mu_dot + mu * mu * q.q(mu)
}

/// Curvatures of the closed constant-curvature critical curves.
///
/// An equilibrium `η` yields a closed circle exactly when `η > 1`.
pub fn closed_circles(lambda: f64) -> Vec<f64> {
    match eta_pm(lambda) {
        Err(_) => Vec::new(),
        Ok((em, ep)) if em == ep => vec![ep * ep],
        Ok((em, ep)) => [em, ep]
            .into_iter()
            .filter(|e| *e > 1.0)
            .map(|e| e * e)
            .collect(),
    }
}

/// Orbit type of the integral curve through `(x0, y0)`.
///
/// Levels are compared with the saddle and center levels to a relative
/// tolerance of `1e-10`. Without equilibria every orbit leaves through the
/// origin and is reported as [`OrbitType::NonClosedFirstKind`].
pub fn classify_orbit(lambda: f64, x0: f64, y0: f64) -> OrbitType {
    let (em, ep) = match eta_pm(lambda) {
        Ok(v) if lambda < LAMBDA_CRIT => v,
        _ => return OrbitType::NonClosedFirstKind,
    };
    let tol = 1e-10;
    let level = energy_level(lambda, x0, y0);
    let saddle = energy_level(lambda, em, 0.0);
    let center = energy_level(lambda, ep, 0.0);
    let near = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0);
    if near(level, center) && x0 > em {
        return OrbitType::StableEquilibrium;
    }
    if near(level, saddle) {
        if (x0 - em).abs() <= 1e-8 * em && y0.abs() <= 1e-8 {
            return OrbitType::UnstableEquilibrium;
        }
        return if x0 > em {
            OrbitType::ExceptionalFirstKind
        } else {
            OrbitType::ExceptionalSecondKind
        };
    }
    if level > saddle {
        OrbitType::NonClosedFirstKind
    } else if x0 > em {
        OrbitType::Closed
    } else {
        OrbitType::NonClosedSecondKind
    }
}

/// Period of small oscillations about the center `η₊`.
pub fn center_period(lambda: f64) -> Result<f64> {
    let ep = eta_pm(lambda)?.1;
    let stiffness = ep.powi(4) - 3.0;
    if stiffness <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * PI / stiffness.sqrt())
}

/// Wavelength `ω` in closed form.
pub fn wavelength(p: &ModulusPoint) -> Result<f64> {
    let q = roots_from_modulus(p)?;
    wavelength_of(&q)
}

/// Wavelength from precomputed roots.
pub fn wavelength_of(q: &QuarticData) -> Result<f64> {
    let w = WaveModuli::new(q);
    let k = complete_k(w.m)?;
    let pi = complete_pi(w.n, w.m)?;
    Ok(2.0 * w.g / q.e1 * (w.alpha / w.n * k - (w.alpha - w.n) / w.n * pi))
}

/// `2∫ F(μ) dμ / (μ√(−Q(μ)))` over `[e₂, e₁]` by quadrature.
///
/// The substitution `μ = e₂ + (e₁ − e₂)sin²φ` removes both endpoint
/// singularities, leaving a smooth integrand on `[0, π/2]`.
pub fn half_period_integral<F: Fn(f64) -> f64>(q: &QuarticData, f: F, tol: f64) -> Result<f64> {
    let QuarticData { e1, e2, e3, e4, .. } = *q;
    let d = e1 - e2;
    let v = gauss_kronrod(
        |phi: f64| {
            let s = phi.sin();
            let mu = e2 + d * s * s;
            f(mu) / (mu * ((mu - e3) * (mu - e4)).sqrt())
        },
        0.0,
        PI / 2.0,
        tol,
    )?;
    Ok(4.0 * v)
}

/// Wavelength by quadrature of its defining integral.
pub fn wavelength_quadrature(p: &ModulusPoint) -> Result<f64> {
    let q = roots_from_modulus(p)?;
    half_period_integral(&q, |_| 1.0, 1e-14)
}

/// The arclength `h(μ) ∈ [0, ω/2]` at which `μ` is first reached.
pub fn h_inverse(p: &ModulusPoint, mu: f64) -> Result<f64> {
    let q = roots_from_modulus(p)?;
    let QuarticData { e1, e2, e4, .. } = q;
    if !(mu >= e2 && mu <= e1) {
        return Err(domain(
            "h_inverse",
            format!("mu = {mu} outside [{e2}, {e1}]"),
        ));
    }
    let w = WaveModuli::new(&q);
    let omega = wavelength_of(&q)?;
    let x = ((e2 - e4) * (e1 - mu) / ((e1 - e2) * (mu - e4)))
        .sqrt()
        .min(1.0);
    let u = inverse_sn(x, w.m)?;
    let phi = x.asin();
    let bracket = w.alpha / w.n * u - (w.alpha - w.n) / w.n * incomplete_pi(w.n, phi, w.m)?;
    Ok(omega / 2.0 - w.g / q.e1 * bracket)
}

/// Right-hand side of the curvature flow, `(μ, μ̇) ↦ (μ̇, μ̈)`.
pub fn flow(lambda: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_, y| [y[1], accel(lambda, y[0], y[1])]
}

/// Quartic data for the degenerate constant solution `μ ≡ η`.
fn constant_quartic(lambda: f64, eta: f64) -> QuarticData {
    let (e3, e4) = e3_e4_from_roots(eta, eta);
    QuarticData {
        lambda,
        e1: eta,
        e2: eta,
        e3,
        e4,
        c: c_from_roots(eta, eta),
    }
}

fn constant_solution(p: &ModulusPoint, eta: f64, omega: f64, n: usize, periods: f64) -> MuSolution {
    let length = if omega.is_finite() {
        omega * periods
    } else {
        periods
    };
    let samples = uniform_grid(length, n)
        .into_iter()
        .map(|s| MuSample {
            s,
            mu: eta,
            mu_dot: 0.0,
        })
        .collect();
    MuSolution {
        modulus: *p,
        quartic: constant_quartic(p.lambda, eta),
        wavelength: omega,
        samples,
    }
}

/// Number of grid intervals for `periods` periods at `per_period` samples each.
pub fn grid_size(per_period: usize, periods: f64) -> usize {
    ((per_period as f64 * periods).round() as usize).max(1)
}

/// Integrates the curvature flow from `μ(0) = e₂`, `μ̇(0) = 0` over `periods` wavelengths.
///
/// Points on (or within `1e-12` of) the upper boundary give the constant
/// solution `η₊`; on the lower boundary for `λ > −1` the saddle `η₋`, whose
/// wavelength is infinite. In that case the grid spans `periods` units of
/// arclength.
pub fn solve_mu(p: &ModulusPoint, periods: f64, opts: &SolveOptions) -> Result<MuSolution> {
    let n = grid_size(opts.samples_per_period, periods);
    if let Ok((em, ep)) = eta_pm(p.lambda) {
        if p.region == Region::BoundaryPlus || (p.e2 - ep).abs() <= 1e-12 {
            return Ok(constant_solution(
                p,
                ep,
                center_period(p.lambda)?,
                n,
                periods,
            ));
        }
        let lower = p.lambda > -1.0 && a_lower(p.lambda).is_ok_and(|a| (p.e2 - a).abs() <= 1e-12);
        if p.region == Region::BoundaryMinus || lower {
            return Ok(constant_solution(p, em, f64::INFINITY, n, periods));
        }
    }
    let q = roots_from_modulus(p)?;
    let omega = wavelength_of(&q)?;
    let grid = uniform_grid(omega * periods, n);
    let ys = integrate_on_grid(flow(p.lambda), [q.e2, 0.0], &grid, &opts.step)?;
    let samples = grid
        .iter()
        .zip(ys)
        .map(|(&s, y)| MuSample {
            s,
            mu: y[0],
            mu_dot: y[1],
        })
        .collect();
    Ok(MuSolution {
        modulus: *p,
        quartic: q,
        wavelength: omega,
        samples,
    })
}

/// `n` points `(μ, μ̇)` over one period: the modified invariant signature.
pub fn signature(p: &ModulusPoint, n: usize) -> Result<Vec<(f64, f64)>> {
    let opts = SolveOptions {
        samples_per_period: n.max(1),
        ..SolveOptions::default()
    };
    let sol = solve_mu(p, 1.0, &opts)?;
    Ok(sol.samples[..n.max(1)]
        .iter()
        .map(|s| (s.mu, s.mu_dot))
        .collect())
}
