//! The moduli space of B-curves and its algebraic invariants.
//!
//! A point `(λ, e₂)` determines the quartic
//! `Q(x) = x⁴ + 4λx³ + 4(λ² − c)x² − 1` with roots `e₁ > e₂ > e₃ > 0 > e₄`.
//! Roots are computed from companion-matrix eigenvalues; the Cardano formula
//! for `e₁` is kept as an independent cross-check.

use std::fmt;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numeric::{brent, polish, real_roots};

/// Upper end of the admissible multipliers, `−2/∜27`.
pub const LAMBDA_CRIT: f64 = -0.877_382_675_301_661_7;

/// Upper end of the multipliers crossing the exceptional locus, `−∜(φ⁵)/2`.
pub const LAMBDA_EXC: f64 = -0.912_440_501_729_504_7;

/// Absolute tolerance used when tagging points on `L`, `E` or the boundary.
pub const REGION_TOL: f64 = 1e-9;

/// Region of the moduli space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Space-like momentum.
    S,
    /// Light-like momentum.
    L,
    /// Time-like momentum, below the exceptional locus.
    Tminus,
    /// The exceptional locus.
    E,
    /// Time-like momentum, above the exceptional locus.
    Tplus,
    /// On the lower boundary `e₂ = η₋(λ)`.
    BoundaryMinus,
    /// On the upper boundary `e₂ = η₊(λ)`.
    BoundaryPlus,
    /// Not in the moduli space.
    Outside,
}

impl Region {
    /// Short label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Region::S => "S",
            Region::L => "L",
            Region::Tminus => "T-",
            Region::E => "E",
            Region::Tplus => "T+",
            Region::BoundaryMinus => "BoundaryMinus",
            Region::BoundaryPlus => "BoundaryPlus",
            Region::Outside => "Outside",
        }
    }

    /// True for the three time-like regions.
    pub fn is_t(self) -> bool {
        matches!(self, Region::Tminus | Region::E | Region::Tplus)
    }

    /// True for points of the open moduli space.
    pub fn in_moduli(self) -> bool {
        matches!(self, Region::S | Region::L) || self.is_t()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A point `(λ, e₂)` of the moduli space with its region tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusPoint {
    pub lambda: f64,
    pub e2: f64,
    pub region: Region,
}

impl ModulusPoint {
    /// Classifies `(lambda, e2)`; same as [`classify_region`].
    pub fn new(lambda: f64, e2: f64) -> Self {
        classify_region(lambda, e2)
    }

    /// Fails unless the point lies in the open moduli space.
    pub fn require_moduli(&self) -> Result<()> {
        if self.region.in_moduli() {
            Ok(())
        } else {
            Err(Error::OutsideModuli {
                lambda: self.lambda,
                e2: self.e2,
            })
        }
    }
}

/// Roots `e₁ > e₂ > e₃ > 0 > e₄` of `Q` and the causal constant `c = ξ·ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticData {
    pub lambda: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub c: f64,
}

impl QuarticData {
    /// `Q_{λ,c}(x)`.
    pub fn q(&self, x: f64) -> f64 {
        quartic_q(self.lambda, self.c, x)
    }

    /// The four roots in decreasing order.
    pub fn roots(&self) -> [f64; 4] {
        [self.e1, self.e2, self.e3, self.e4]
    }

    /// `1 + 4c·e₁²`, which vanishes on the exceptional locus.
    pub fn exceptional_defect(&self) -> f64 {
        1.0 + 4.0 * self.c * self.e1 * self.e1
    }
}

/// Boundary and locus functions attached to a multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusFunctions {
    pub eta_minus: f64,
    pub eta_plus: f64,
    pub a_lower: f64,
    /// Height of `L`, defined for `λ ≤ −1`.
    pub b0: Option<f64>,
    /// Height of the exceptional locus, defined for `λ < LAMBDA_EXC`.
    pub c_exc: Option<f64>,
    pub chi: f64,
}

/// `Q_{λ,c}(x) = x⁴ + 4λx³ + 4(λ² − c)x² − 1`.
pub fn quartic_q(lambda: f64, c: f64, x: f64) -> f64 {
    let x2 = x * x;
    x2 * (x2 + 4.0 * lambda * x + 4.0 * (lambda * lambda - c)) - 1.0
}

/// `P_λ(x) = x⁴ + 2λx³ + 1`, whose positive roots are the equilibria.
pub fn quartic_p(lambda: f64, x: f64) -> f64 {
    x * x * x * (x + 2.0 * lambda) + 1.0
}

/// The two positive roots `η₋ ≤ η₊` of `P_λ`.
pub fn eta_pm(lambda: f64) -> Result<(f64, f64)> {
    if !(lambda <= LAMBDA_CRIT) {
        return Err(domain(
            "eta_pm",
            format!("lambda = {lambda} exceeds -2/27^(1/4)"),
        ));
    }
    // P_λ has its only positive critical point at x = −3λ/2.
    let xm = -1.5 * lambda;
    // Within rounding of the double root the split would be pure noise.
    if quartic_p(lambda, xm) >= -16.0 * f64::EPSILON {
        return Ok((xm, xm));
    }
    let coeffs = [1.0, 2.0 * lambda, 0.0, 0.0, 1.0];
    let roots = real_roots(&coeffs, 1e-7);
    let pick = |lo: f64, hi: f64| -> Result<f64> {
        let guess = roots.iter().copied().find(|r| *r > lo && *r < hi);
        match guess {
            Some(g) if quartic_p(lambda, g).abs() < 1e-12 * g.powi(4).max(1.0) => Ok(g),
            _ => brent(|x| quartic_p(lambda, x), lo, hi, 1e-15),
        }
    };
    Ok((pick(0.0, xm)?, pick(xm, -2.0 * lambda)?))
}

/// Coefficients of the cubic whose roots are `e₁, e₃, e₄`.
fn e1_cubic(lambda: f64, e2: f64) -> [f64; 4] {
    let e22 = e2 * e2;
    [e22, e22 * e2 + 4.0 * e22 * lambda, 1.0, e2]
}

/// `e₁` as the largest real root of its cubic, via the companion matrix.
pub fn e1_companion(lambda: f64, e2: f64) -> Result<f64> {
    let coeffs = e1_cubic(lambda, e2);
    real_roots(&coeffs, 1e-7)
        .last()
        .copied()
        .ok_or_else(|| domain("e1_companion", "cubic has no real root"))
}

/// `e₁` from Cardano's formula with the principal cube root.
pub fn e1_cardano(lambda: f64, e2: f64) -> f64 {
    let l = lambda;
    let e = e2;
    let b_lin = e + 4.0 * l;
    let cube = e.powi(3) * b_lin.powi(3);
    let a = cube + 9.0 * e * e - 18.0 * l * e;
    let b = e * e * cube + 2.0 * e.powi(4) - 20.0 * l * e.powi(3) - 4.0 * l * l * e * e + 1.0;
    let z = -8.0 * (Complex64::new(a, 0.0) + 3.0 * Complex64::new(3.0 * b, 0.0).sqrt());
    (-b_lin * e + z.cbrt().re) / (3.0 * e)
}

/// `λ` reconstructed from `e₁, e₂`.
pub fn lambda_from_roots(e1: f64, e2: f64) -> f64 {
    let (p, q) = (e1 * e1, e2 * e2);
    -(e1 * p * q + p * q * e2 + e1 + e2) / (4.0 * p * q)
}

/// `c` reconstructed from `e₁, e₂`.
pub fn c_from_roots(e1: f64, e2: f64) -> f64 {
    let (p, q) = (e1 * e1, e2 * e2);
    let pq = p * q;
    let num = -2.0 * pq * pq * e1 * e2 + p * p * p * q * q + p * p * q * q * q
        - 2.0 * (p * pq + pq * q)
        + (e1 + e2).powi(2);
    num / (16.0 * pq * pq)
}

/// `e₃` and `e₄` from `e₁, e₂`.
pub fn e3_e4_from_roots(e1: f64, e2: f64) -> (f64, f64) {
    let (p, q) = (e1 * e1, e2 * e2);
    let s = (4.0 * e1 * p * e2 * q + (e1 + e2).powi(2)).sqrt();
    let t = e1 + e2 + s;
    (t / (2.0 * p * q), -2.0 * e1 * e2 / t)
}

/// Roots of `Q` without a region check; requires `e₂ > 0` and `P_λ(e₂) < 0`.
pub fn quartic_data(lambda: f64, e2: f64) -> Result<QuarticData> {
    if !(e2 > 0.0 && quartic_p(lambda, e2) < 0.0) {
        return Err(Error::OutsideModuli { lambda, e2 });
    }
    let e1 = polish(&e1_cubic(lambda, e2), e1_companion(lambda, e2)?);
    let (e3, e4) = e3_e4_from_roots(e1, e2);
    Ok(QuarticData {
        lambda,
        e1,
        e2,
        e3,
        e4,
        c: c_from_roots(e1, e2),
    })
}

/// Roots and causal constant of a moduli point.
pub fn roots_from_modulus(p: &ModulusPoint) -> Result<QuarticData> {
    p.require_moduli()?;
    quartic_data(p.lambda, p.e2)
}

/// `b₀(λ) = −λ + √(λ² − 1)`, the height of `L`, for `λ ≤ −1`.
pub fn b0(lambda: f64) -> Result<f64> {
    if !(lambda <= -1.0) {
        return Err(domain("b0", format!("lambda = {lambda} > -1")));
    }
    Ok(-lambda + (lambda * lambda - 1.0).sqrt())
}

/// Lower end `a(λ)` of the time-like interval `(a(λ), η₊(λ))`.
pub fn a_lower(lambda: f64) -> Result<f64> {
    if !(lambda < LAMBDA_CRIT) {
        return Err(domain(
            "a_lower",
            format!("lambda = {lambda} >= -2/27^(1/4)"),
        ));
    }
    if lambda <= -1.0 {
        b0(lambda)
    } else {
        Ok(eta_pm(lambda)?.0)
    }
}

/// `χ(λ) = (η₊⁴ − 1)/√(η₊⁸ − 4η₊⁴ + 3)`.
pub fn chi(lambda: f64) -> Result<f64> {
    if !(lambda < LAMBDA_CRIT) {
        return Err(domain("chi", format!("lambda = {lambda} >= -2/27^(1/4)")));
    }
    let e4 = eta_pm(lambda)?.1.powi(4);
    Ok((e4 - 1.0) / ((e4 - 1.0) * (e4 - 3.0)).sqrt())
}

/// Closed-form height of the exceptional locus.
///
/// This is Cardano's formula for the cubic `4λ²x³ + 8λ³x² + x − 2λ`, obtained
/// by substituting `e₁ = −2λ`.
pub fn exceptional_c_closed_form(lambda: f64) -> f64 {
    let l = lambda;
    let disc = Complex64::new(768.0 * l.powi(8) - 528.0 * l.powi(4) - 3.0, 0.0).sqrt();
    let z = Complex64::new(-64.0 * l.powi(9) + 72.0 * l.powi(5), 0.0)
        - Complex64::new(0.0, 3.0 * l.powi(3)) * disc;
    -2.0 * l / 3.0 + z.cbrt().re / (3.0 * l * l)
}

/// The height `c(λ)` of the exceptional locus over `λ < −∜(φ⁵)/2`.
///
/// The closed form is refined by Newton steps on `e₁ + 2λ = 0`, which has a
/// simple zero there (`1 + 4c·e₁²` has a double one).
pub fn exceptional_c(lambda: f64) -> Result<f64> {
    if !(lambda < LAMBDA_EXC) {
        return Err(domain(
            "exceptional_c",
            format!("lambda = {lambda} >= -phi^(5/4)/2"),
        ));
    }
    let cubic = [
        4.0 * lambda * lambda,
        8.0 * lambda.powi(3),
        1.0,
        -2.0 * lambda,
    ];
    let x = polish(&cubic, exceptional_c_closed_form(lambda));
    let q = quartic_data(lambda, x)?;
    if (q.e1 + 2.0 * lambda).abs() > 1e-9 * lambda.abs().max(1.0) {
        return Err(Error::NonConvergence {
            method: "exceptional_c",
            achieved: (q.e1 + 2.0 * lambda).abs(),
        });
    }
    Ok(x)
}

/// Energy level of the saddle `(η₋, 0)`: the `c` with `Q_{λ,c}(η₋) = 0`.
pub fn saddle_level(lambda: f64) -> Result<f64> {
    let em = eta_pm(lambda)?.0;
    let e2 = em * em;
    Ok((e2 * e2 + 4.0 * lambda * e2 * em + 4.0 * lambda * lambda * e2 - 1.0) / (4.0 * e2))
}

/// The root of `Q_{λ,c₊}` above `η₊`, where the separatrix meets the axis.
pub fn separatrix_root(lambda: f64) -> Result<f64> {
    let c = saddle_level(lambda)?;
    let coeffs = [1.0, 4.0 * lambda, 4.0 * (lambda * lambda - c), 0.0, -1.0];
    let ep = eta_pm(lambda)?.1;
    real_roots(&coeffs, 1e-7)
        .into_iter()
        .rfind(|r| *r > ep)
        .ok_or_else(|| domain("separatrix_root", "no root above eta_plus"))
}

/// All boundary and locus functions at once.
pub fn locus_functions(lambda: f64) -> Result<LocusFunctions> {
    let (eta_minus, eta_plus) = eta_pm(lambda)?;
    Ok(LocusFunctions {
        eta_minus,
        eta_plus,
        a_lower: a_lower(lambda)?,
        b0: b0(lambda).ok(),
        c_exc: exceptional_c(lambda).ok(),
        chi: chi(lambda)?,
    })
}

/// Region of `(λ, e₂)`; total.
pub fn classify_region(lambda: f64, e2: f64) -> ModulusPoint {
    let region = region_of(lambda, e2);
    ModulusPoint { lambda, e2, region }
}

fn region_of(lambda: f64, e2: f64) -> Region {
    if !(e2 > 0.0) || !lambda.is_finite() || !e2.is_finite() || lambda > LAMBDA_CRIT {
        return Region::Outside;
    }
    let p = quartic_p(lambda, e2);
    if p.abs() <= REGION_TOL {
        return if e2 <= -1.5 * lambda {
            Region::BoundaryMinus
        } else {
            Region::BoundaryPlus
        };
    }
    if p > 0.0 {
        return Region::Outside;
    }
    let l = e2 * e2 + 2.0 * lambda * e2 + 1.0;
    if l.abs() <= REGION_TOL {
        return Region::L;
    }
    if l < 0.0 {
        return Region::S;
    }
    if lambda >= LAMBDA_EXC {
        return Region::Tplus;
    }
    match quartic_data(lambda, e2) {
        Ok(q) => {
            let d = q.e1 + 2.0 * lambda;
            if d.abs() <= REGION_TOL {
                Region::E
            } else if d > 0.0 {
                Region::Tminus
            } else {
                Region::Tplus
            }
        }
        Err(_) => Region::Outside,
    }
}
