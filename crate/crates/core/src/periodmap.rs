//! The period map on the time-like region and the BT-strings it detects.
//!
//! For `p` in `T`, `P(p)` is `−Θ(ω)/2π` shifted by `1` on `T₋`, `1/2` on the
//! exceptional locus and `0` on `T₊`. A BT-curve closes exactly when `P(p)` is
//! rational; `q = m/n` then gives the wave number `n` and turning number `m`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::curvegen::{
    angular_rate_crest, bt_curve, curve_quartic, hausdorff, rotate, symmetry_angle, CurveKind,
};
use crate::dynamics::SolveOptions;
use crate::dynamics::{wavelength_of, WaveModuli};
use crate::ellint::{complete_k, complete_pi, gauss_kronrod};
use crate::error::{domain, Error, Result};
use crate::moduli::{
    a_lower, chi, classify_region, eta_pm, exceptional_c, ModulusPoint, QuarticData, Region,
    LAMBDA_CRIT, LAMBDA_EXC,
};
use crate::numeric::brent;

/// Characteristic number `m/n` of a BT-string.
pub type Rational = Ratio<i64>;

/// Points per scan of `(a(λ), η₊(λ))` when bracketing solutions of `P = q`.
pub const SCAN_POINTS: usize = 512;

/// Relative inset of the scan from the ends of `(a(λ), η₊(λ))`.
pub const SCAN_INSET: f64 = 1e-7;

/// Coefficients of the closed form of `−Θ(ω)/2π` in complete elliptic integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticCoeffs {
    pub quartic: QuarticData,
    pub g: f64,
    pub m: f64,
    /// `NaN` on the exceptional locus, where it diverges.
    pub n1: f64,
    pub n2: f64,
    pub a: f64,
    /// `NaN` on the exceptional locus, where it diverges.
    pub b: f64,
    pub c: f64,
    pub valid_n1b: bool,
}

impl EllipticCoeffs {
    /// `A + B/(1 − n₁) + C/(1 − n₂)`.
    pub fn q_function(&self) -> f64 {
        self.a + self.b / (1.0 - self.n1) + self.c / (1.0 - self.n2)
    }

    /// Closed form of [`q_function`](Self::q_function): `−g·e₂(e₂ + 2λ)/(1 + 4c·e₂²)`.
    pub fn q_function_closed(&self) -> f64 {
        let q = &self.quartic;
        -self.g * q.e2 * (q.e2 + 2.0 * q.lambda) / (1.0 + 4.0 * q.c * q.e2 * q.e2)
    }

    /// Closed form of `B + C`.
    pub fn b_plus_c_closed(&self) -> f64 {
        let QuarticData {
            lambda, e1, e4, c, ..
        } = self.quartic;
        let delta = e1 + 2.0 * lambda;
        self.g * (e1 - e4) * (e4 * (8.0 * c * lambda * e1 - 1.0) - delta)
            / (e1 * e1 * delta * delta * (1.0 + 4.0 * c * e4 * e4))
    }

    /// The finite part `R` of the expansion of the closed form as `m → 1`.
    pub fn r_term(&self) -> f64 {
        let w = |n: f64| {
            let r = (-n).sqrt();
            r * r.atan() / (1.0 - n)
        };
        w(self.n1) * self.b + w(self.n2) * self.c
    }

    /// `(2√|c|/π)·B·Π(n₁, m)`, the term that jumps by `∓1/2` across the exceptional locus.
    pub fn jump_term(&self) -> Result<f64> {
        if !self.valid_n1b {
            return Err(domain("jump_term", "undefined on the exceptional locus"));
        }
        Ok(self.scale() * self.b * complete_pi(self.n1, self.m)?)
    }

    /// The closed form `(2√|c|/π)(A·K(m) + B·Π(n₁, m) + C·Π(n₂, m))`, without `B` on the locus.
    pub fn integral(&self) -> Result<f64> {
        let mut sum = self.a * complete_k(self.m)? + self.c * complete_pi(self.n2, self.m)?;
        if self.valid_n1b {
            sum += self.b * complete_pi(self.n1, self.m)?;
        }
        Ok(self.scale() * sum)
    }

    fn scale(&self) -> f64 {
        2.0 * self.quartic.c.abs().sqrt() / PI
    }
}

fn require_t(p: &ModulusPoint, func: &'static str) -> Result<()> {
    if p.region.is_t() {
        Ok(())
    } else {
        Err(Error::RegionMismatch {
            expected: func,
            found: p.region.label().to_string(),
        })
    }
}

/// Coefficients of the closed form at a time-like point.
///
/// Exceptional points are snapped onto the locus; `n₁` and `B` are then left unset.
pub fn elliptic_coeffs(p: &ModulusPoint) -> Result<EllipticCoeffs> {
    require_t(p, "T")?;
    let q = curve_quartic(p)?;
    Ok(coeffs_of(&q, p.region == Region::E))
}

fn coeffs_of(q: &QuarticData, exceptional: bool) -> EllipticCoeffs {
    let QuarticData {
        lambda,
        e1,
        e2,
        e4,
        c,
        ..
    } = *q;
    let w = WaveModuli::new(q);
    let s = c.abs().sqrt();
    let g = w.g;
    // 1 − 2√|c|e₁ vanishes on the locus; 1 + 4c·e₁² = e₁²(e₁ + 2λ)² keeps it accurate.
    let delta = e1 + 2.0 * lambda;
    let minus1 = e1 * e1 * delta * delta / (1.0 + 2.0 * s * e1);
    // 1 + 4√|c|λ also vanishes there: 1 + 16cλ² = δ(e₁²δ − 8c·e₁ + 4cδ).
    let b_factor =
        delta * (e1 * e1 * delta - 8.0 * c * e1 + 4.0 * c * delta) / (1.0 - 4.0 * s * lambda);
    let (n1, b) = if exceptional {
        (f64::NAN, f64::NAN)
    } else {
        (
            (1.0 - 2.0 * s * e4) * (e2 - e1) / (minus1 * (e2 - e4)),
            -g * b_factor * (e1 - e4) / (4.0 * s * (1.0 - 2.0 * s * e4) * minus1),
        )
    };
    EllipticCoeffs {
        quartic: *q,
        g,
        m: w.m,
        n1,
        n2: (1.0 + 2.0 * s * e4) * (e2 - e1) / ((1.0 + 2.0 * s * e1) * (e2 - e4)),
        a: -g * e4 * (e4 + 2.0 * lambda) / (1.0 + 4.0 * c * e4 * e4),
        b,
        c: g * (1.0 - 4.0 * s * lambda) * (e1 - e4)
            / (4.0 * s * (1.0 + 2.0 * s * e4) * (1.0 + 2.0 * s * e1)),
        valid_n1b: !exceptional,
    }
}

/// Offset added to `−Θ(ω)/2π` in each part of the time-like region.
pub fn region_offset(region: Region) -> f64 {
    match region {
        Region::Tminus => 1.0,
        Region::E => 0.5,
        _ => 0.0,
    }
}

/// The period map by its closed form in complete elliptic integrals.
pub fn period_map(p: &ModulusPoint) -> Result<f64> {
    Ok(elliptic_coeffs(p)?.integral()? + region_offset(p.region))
}

/// `Θ(ω)` of the BT-curve by adaptive quadrature over one wavelength.
pub fn theta_period(p: &ModulusPoint) -> Result<f64> {
    require_t(p, "T")?;
    let q = curve_quartic(p)?;
    let exceptional = p.region == Region::E;
    let rate = angular_rate_crest(CurveKind::BT, &q, exceptional);
    // The integrand is symmetric about φ = π/2, where next to the locus it has a
    // peak of width ψ₀ in ψ = π/2 − φ. The substitution ψ = ψ₀·sinh u flattens it.
    let s = q.c.abs().sqrt();
    let psi0 =
        q.e1 * (q.e1 + 2.0 * q.lambda).abs() / (2.0 * s * (2.0 * q.e1 * (q.e1 - q.e2)).sqrt());
    let half = if exceptional || psi0 > 0.05 {
        gauss_kronrod(&rate, 0.0, FRAC_PI_2, 1e-14)?
    } else {
        let top = (FRAC_PI_2 / psi0).asinh();
        gauss_kronrod(
            |u: f64| {
                let (sh, ch) = (u.sinh(), u.cosh());
                rate(psi0 * sh) * psi0 * ch
            },
            0.0,
            top,
            1e-14,
        )?
    };
    Ok(2.0 * half)
}

/// The period map from the quadrature of `Θ`; independent of the closed form.
pub fn period_map_oracle(p: &ModulusPoint) -> Result<f64> {
    Ok(-theta_period(p)? / (2.0 * PI) + region_offset(p.region))
}

/// The point `(λ, e₂)` tagged with its part of `T`.
///
/// Points strictly inside `T` but within the tagging tolerance of `L` or of the
/// boundary keep a time-like tag, so that `P_λ` can be evaluated up to the ends
/// of `(a(λ), η₊(λ))`.
pub fn time_like_point(lambda: f64, e2: f64) -> Result<ModulusPoint> {
    let p = classify_region(lambda, e2);
    if p.region.is_t() {
        return Ok(p);
    }
    let inside = matches!(
        p.region,
        Region::L | Region::BoundaryMinus | Region::BoundaryPlus
    ) && lambda < LAMBDA_CRIT
        && e2 * e2 + 2.0 * lambda * e2 + 1.0 > 0.0
        && e2.powi(4) + 2.0 * lambda * e2.powi(3) + 1.0 < 0.0;
    if !inside {
        return Err(Error::OutsideModuli { lambda, e2 });
    }
    let region = if lambda >= LAMBDA_EXC || e2 > exceptional_c(lambda)? {
        Region::Tplus
    } else {
        Region::Tminus
    };
    Ok(ModulusPoint { lambda, e2, region })
}

/// `P_λ` on `(a(λ), η₊(λ))`.
pub fn period_map_at(lambda: f64, e2: f64) -> Result<f64> {
    period_map(&time_like_point(lambda, e2)?)
}

/// The interval `J_λ` of characteristic numbers realised by BT-strings.
pub fn j_interval(lambda: f64) -> Result<(f64, f64)> {
    if !(lambda < LAMBDA_CRIT) {
        return Err(domain(
            "j_interval",
            format!("lambda = {lambda} >= -2/27^(1/4)"),
        ));
    }
    let x = chi(lambda)?;
    Ok(if lambda <= -1.0 {
        (1.0, x)
    } else {
        (x, f64::INFINITY)
    })
}

/// The interval `(a(λ), η₊(λ))` swept by `e₂` at fixed multiplier.
pub fn e2_interval(lambda: f64) -> Result<(f64, f64)> {
    Ok((a_lower(lambda)?, eta_pm(lambda)?.1))
}

/// `P_λ` at `n` interior points of `(a(λ), η₊(λ))`, inset as in the string search.
pub fn scan_period(lambda: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(domain("scan_period", "at least two points are needed"));
    }
    let (a, b) = e2_interval(lambda)?;
    let inset = SCAN_INSET * (b - a);
    let (lo, hi) = (a + inset, b - inset);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let e2 = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            Ok((e2, period_map_at(lambda, e2)?))
        })
        .collect()
}

/// Geometric invariants of the isomonodromic family of `q` at a point of its fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyInvariants {
    pub wave_number: i64,
    pub turning_number: i64,
    /// Homotopy class in the punctured disk: `m − n` below the locus, `m` on or above it.
    pub punctured_class: i64,
    /// `j[q] = (n + n mod 2)/2 − δ₁ₙ`.
    pub j: i64,
    pub isotopy_count: i64,
    /// Poincaré radius `r_q` of the limiting circle at the fiber endpoint.
    pub limiting_radius: f64,
    /// Limit `4qπr_q/(1 − r_q²)` of the wavelength at the fiber endpoint.
    pub limiting_wavelength: f64,
}

/// A BT-string with characteristic number `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringRecord {
    pub q: Rational,
    pub modulus: ModulusPoint,
    pub period: f64,
    pub wavelength: f64,
    pub length: f64,
    pub invariants: FamilyInvariants,
}

impl StringRecord {
    pub fn wave_number(&self) -> i64 {
        self.invariants.wave_number
    }

    pub fn turning_number(&self) -> i64 {
        self.invariants.turning_number
    }
}

fn require_q(q: Rational) -> Result<()> {
    if *q.denom() <= 0 || *q.numer() <= 0 {
        return Err(domain(
            "rational",
            format!("{q} must be a positive fraction"),
        ));
    }
    Ok(())
}

fn q_value(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `j[q] = (n + n mod 2)/2 − δ₁ₙ`.
pub fn j_count(n: i64) -> i64 {
    (n + n % 2) / 2 - i64::from(n == 1)
}

/// Invariants of the family of `q` at the fiber point `p`.
pub fn family_invariants(q: Rational, p: &ModulusPoint) -> Result<FamilyInvariants> {
    require_q(q)?;
    let (m, n) = (*q.numer(), *q.denom());
    let (_, e_star) = fiber_endpoint(q)?;
    // The limiting circle has curvature e*², hence radius 1/(e*² + √(e*⁴ − 1)).
    let r = 1.0 / (e_star * e_star + (e_star.powi(4) - 1.0).sqrt());
    let j = j_count(n);
    Ok(FamilyInvariants {
        wave_number: n,
        turning_number: m,
        punctured_class: if p.region == Region::Tminus { m - n } else { m },
        j,
        isotopy_count: 2 * j + 1,
        limiting_radius: r,
        limiting_wavelength: 4.0 * q_value(q) * PI * r / (1.0 - r * r),
    })
}

fn string_record(q: Rational, p: ModulusPoint, period: f64) -> Result<StringRecord> {
    let wavelength = wavelength_of(&curve_quartic(&p)?)?;
    Ok(StringRecord {
        q,
        modulus: p,
        period,
        wavelength,
        length: *q.denom() as f64 * wavelength,
        invariants: family_invariants(q, &p)?,
    })
}

/// All solutions of `P_λ(e₂) = q`, ordered by `e₂`.
///
/// Every sign change of `P_λ − q` on a uniform scan is refined with Brent's
/// method; monotonicity of `P_λ` is not assumed.
pub fn find_strings(lambda: f64, q: Rational) -> Result<Vec<StringRecord>> {
    require_q(q)?;
    let target = q_value(q);
    let (lo, hi) = j_interval(lambda)?;
    if !(target > lo && target < hi) {
        return Err(Error::OutOfInterval { q: target, lo, hi });
    }
    let scan = scan_period(lambda, SCAN_POINTS)?;
    let f = |e2: f64| period_map_at(lambda, e2).map_or(f64::NAN, |v| v - target);
    let roots: Vec<f64> = scan
        .par_windows(2)
        .filter(|w| (w[0].1 - target).signum() != (w[1].1 - target).signum())
        .map(|w| brent(f, w[0].0, w[1].0, 1e-15))
        .collect::<Result<_>>()?;
    if roots.is_empty() {
        return Err(Error::NoBracket(format!(
            "P({lambda}, e2) = {q} has no sign change on the scan"
        )));
    }
    roots
        .into_iter()
        .map(|e2| {
            let p = classify_region(lambda, e2);
            string_record(q, p, period_map(&p)?)
        })
        .collect()
}

/// The first solution of `P_λ(e₂) = q`.
pub fn find_string(lambda: f64, q: Rational) -> Result<StringRecord> {
    find_strings(lambda, q).map(|v| v[0])
}

/// How far a generated string is from closing up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureDefect {
    /// `|γ(nω) − γ(0)|` in the Euclidean norm of the ambient coordinates.
    pub position: f64,
    /// Largest entry of `F(nω) − F(0)` for the frame `F = (γ, T, N)`.
    pub frame: f64,
    /// Hausdorff distance in the disk between the trajectory and its rotation by `2πm/n`.
    pub symmetry: f64,
}

/// Generates the string over `n` wavelengths and measures closure and symmetry.
///
/// The symmetry check uses `symmetry_samples` points per wavelength.
pub fn closure_defect(
    record: &StringRecord,
    opts: &SolveOptions,
    symmetry_samples: usize,
) -> Result<ClosureDefect> {
    let n = record.wave_number();
    let curve = bt_curve(&record.modulus, n as f64, opts)?;
    let (first, last) = (&curve.samples[0], &curve.samples[curve.samples.len() - 1]);
    let position = (last.gamma - first.gamma).euclidean_norm();
    let frame = (last.frame() - first.frame()).amax();
    let stride = (opts.samples_per_period / symmetry_samples.max(1)).max(1);
    let pts: Vec<(f64, f64)> = curve
        .samples
        .iter()
        .step_by(stride)
        .map(|s| s.poincare)
        .collect();
    let angle = symmetry_angle(record.turning_number(), n);
    let turned: Vec<(f64, f64)> = pts.iter().map(|&z| rotate(z, angle)).collect();
    Ok(ClosureDefect {
        position,
        frame,
        symmetry: hausdorff(&pts, &turned),
    })
}

/// Endpoint `(λ*, e*)` of the fiber of `q` on the upper boundary `e₂ = η₊(λ)`.
///
/// Solves `χ = q` in closed form: `e*⁴ = (3q² − 1)/(q² − 1)`.
pub fn fiber_endpoint(q: Rational) -> Result<(f64, f64)> {
    let x = q_value(q);
    if !(x > 1.0) {
        return Err(domain("fiber_endpoint", format!("q = {q} must exceed 1")));
    }
    let e = ((3.0 * x * x - 1.0) / (x * x - 1.0)).powf(0.25);
    Ok((-(1.0 + e.powi(4)) / (2.0 * e.powi(3)), e))
}

/// Point where the fiber of `q` meets the exceptional locus.
pub fn fiber_exceptional_crossing(q: Rational) -> Result<ModulusPoint> {
    let target = q_value(q);
    let (lambda_end, _) = fiber_endpoint(q)?;
    if lambda_end >= LAMBDA_EXC {
        return Err(domain(
            "fiber_exceptional_crossing",
            format!("the fiber of {q} ends before the exceptional locus"),
        ));
    }
    let on_locus = |l: f64| -> f64 {
        exceptional_c(l)
            .and_then(|e2| {
                let p = ModulusPoint {
                    lambda: l,
                    e2,
                    region: Region::E,
                };
                period_map(&p)
            })
            .map_or(f64::NAN, |v| v - target)
    };
    let l = brent(on_locus, lambda_end, LAMBDA_EXC - 1e-9, 1e-15)?;
    Ok(ModulusPoint {
        lambda: l,
        e2: exceptional_c(l)?,
        region: Region::E,
    })
}

/// Points of the fiber `P = q`, ordered by `e₂` from near `(−1, 1)` to near `(λ*, e*)`.
///
/// The fiber folds back in `λ` when it enters `λ > −1`, so it is parametrized by
/// `e₂` instead: each of the `steps − 1` interior heights is solved independently
/// for `λ`, keeping the root nearest the previous point. The crossing with the
/// exceptional locus is inserted exactly.
pub fn trace_fiber(q: Rational, steps: usize) -> Result<Vec<ModulusPoint>> {
    require_q(q)?;
    if steps < 2 {
        return Err(domain("trace_fiber", "at least two steps are needed"));
    }
    let target = q_value(q);
    let (lambda_end, e_end) = fiber_endpoint(q)?;
    let candidates: Vec<Vec<f64>> = (1..steps)
        .into_par_iter()
        .map(|i| fiber_lambdas(1.0 + (e_end - 1.0) * i as f64 / steps as f64, target))
        .collect();
    let mut pts = Vec::with_capacity(steps);
    let mut prev = (-1.0, 1.0);
    for (i, roots) in candidates.into_iter().enumerate() {
        let e2 = 1.0 + (e_end - 1.0) * (i + 1) as f64 / steps as f64;
        let Some(&lambda) = roots.iter().min_by(|a, b| {
            let da = (*a - prev.0).hypot(e2 - prev.1);
            let db = (*b - prev.0).hypot(e2 - prev.1);
            da.total_cmp(&db)
        }) else {
            return Err(Error::NoBracket(format!(
                "fiber continuation of {q} failed at e2 = {e2}; last point ({}, {})",
                prev.0, prev.1
            )));
        };
        pts.push(time_like_point(lambda, e2)?);
        prev = (lambda, e2);
    }
    if lambda_end < LAMBDA_EXC {
        let x = fiber_exceptional_crossing(q)?;
        let k = pts.iter().position(|p| p.e2 > x.e2).unwrap_or(pts.len());
        pts.insert(k, x);
    }
    Ok(pts)
}

/// Multipliers `λ` with `P(λ, e₂) = target`, for `e₂ > 1`.
fn fiber_lambdas(e2: f64, target: f64) -> Vec<f64> {
    const N: usize = 64;
    // At fixed e₂ > 1 the time-like multipliers lie between L and the boundary.
    let lo = -(e2 * e2 + 1.0) / (2.0 * e2);
    let hi = (-(e2.powi(4) + 1.0) / (2.0 * e2.powi(3))).min(LAMBDA_CRIT);
    let inset = SCAN_INSET * (hi - lo);
    let (lo, hi) = (lo + inset, hi - inset);
    let f = |l: f64| period_map_at(l, e2).map_or(f64::NAN, |v| v - target);
    let grid: Vec<(f64, f64)> = (0..N)
        .map(|i| {
            let l = lo + (hi - lo) * i as f64 / (N - 1) as f64;
            (l, f(l))
        })
        .collect();
    grid.windows(2)
        .filter(|w| w[0].1.is_finite() && w[1].1.is_finite() && w[0].1.signum() != w[1].1.signum())
        .filter_map(|w| brent(f, w[0].0, w[1].0, 1e-15).ok())
        .collect()
}

/// Leading coefficient `k` in `P_λ(η₊ − h) ≈ χ(λ) + k·h²`.
///
/// `P_λ` is even in the oscillation amplitude at the centre, so its slope
/// vanishes at `η₊`; the sign of `k` tells whether `P_λ` increases (`k < 0`)
/// or decreases (`k > 0`) into its upper limit.
pub fn upper_end_curvature(lambda: f64) -> Result<f64> {
    let (_, b) = e2_interval(lambda)?;
    let x = chi(lambda)?;
    let k = |h: f64| -> Result<f64> { Ok((period_map_at(lambda, b - h)? - x) / (h * h)) };
    let h = 1e-3;
    Ok(2.0 * k(h)? - k(2.0 * h)?)
}

/// Multiplier separating `P_λ` with an interior minimum from strictly decreasing `P_λ`.
///
/// Bisection on the sign of [`upper_end_curvature`] over `[lo, hi]`.
pub fn monotonicity_transition(lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let f = |l: f64| upper_end_curvature(l).unwrap_or(f64::NAN);
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo.signum() != fhi.signum() && flo.is_finite() && fhi.is_finite()) {
        return Err(Error::NoBracket(format!(
            "upper-end curvature has the same sign at {lo} and {hi}"
        )));
    }
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
