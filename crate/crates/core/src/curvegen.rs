//! Curves on the hyperboloid `⟨γ,γ⟩ = −1` built from the Blaschke invariant.
//!
//! The three momentum types have explicit parameterizations in terms of
//! `μ` and an angle-like function `Θ`. `Θ` is integrated together with `μ`
//! so that both share one adaptive step sequence.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix3;

use crate::dynamics::{grid_size, half_period_integral, SolveOptions};
use crate::ellint::{complete_e, complete_k};
use crate::error::{domain, Error, Result};
use crate::moduli::{
    b0, eta_pm, exceptional_c, quartic_data, roots_from_modulus, saddle_level, ModulusPoint,
    QuarticData, Region,
};
use crate::ode::{integrate_on_grid, uniform_grid};

/// A vector of Minkowski space `ℝ^{1,2}`, `⟨x,y⟩ = −x₁y₁ + x₂y₂ + x₃y₃`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MinkowskiVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MinkowskiVector {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MinkowskiVector { x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MinkowskiVector::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Minkowski inner product.
    pub fn dot(self, o: Self) -> f64 {
        -self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    /// Cross product defined by `⟨x × y, w⟩ = det(x, y, w)`.
    pub fn cross(self, o: Self) -> Self {
        MinkowskiVector::new(
            -(self.x2 * o.x3 - self.x3 * o.x2),
            self.x3 * o.x1 - self.x1 * o.x3,
            self.x1 * o.x2 - self.x2 * o.x1,
        )
    }

    /// Euclidean length of the coordinate vector.
    pub fn euclidean_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn transform(self, m: &Matrix3<f64>) -> Self {
        let v = m * nalgebra::Vector3::new(self.x1, self.x2, self.x3);
        MinkowskiVector::new(v[0], v[1], v[2])
    }
}

impl Add for MinkowskiVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        MinkowskiVector::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for MinkowskiVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        MinkowskiVector::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for MinkowskiVector {
    type Output = Self;
    fn neg(self) -> Self {
        MinkowskiVector::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<MinkowskiVector> for f64 {
    type Output = MinkowskiVector;
    fn mul(self, v: MinkowskiVector) -> MinkowskiVector {
        MinkowskiVector::new(self * v.x1, self * v.x2, self * v.x3)
    }
}

/// Causal type of the momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Light-like momentum.
    BL,
    /// Space-like momentum.
    BS,
    /// Time-like momentum.
    BT,
}

impl CurveKind {
    pub fn of(region: Region) -> Option<Self> {
        match region {
            Region::L => Some(CurveKind::BL),
            Region::S => Some(CurveKind::BS),
            r if r.is_t() => Some(CurveKind::BT),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CurveKind::BL => "BL",
            CurveKind::BS => "BS",
            CurveKind::BT => "BT",
        }
    }
}

/// One point of a generated curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub mu: f64,
    pub mu_dot: f64,
    pub theta: f64,
    pub gamma: MinkowskiVector,
    pub tangent: MinkowskiVector,
    pub poincare: (f64, f64),
}

impl CurveSample {
    /// The Frenet frame `(γ, γ̇, γ × γ̇)` as matrix columns.
    pub fn frame(&self) -> Matrix3<f64> {
        frame_matrix(self.gamma, self.tangent)
    }
}

/// A curve sampled on a uniform arclength grid starting at `s = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSamples {
    pub modulus: ModulusPoint,
    pub quartic: QuarticData,
    pub kind: CurveKind,
    pub wavelength: f64,
    pub samples: Vec<CurveSample>,
}

impl CurveSamples {
    /// The constant momentum of this family in its standard position.
    pub fn expected_momentum(&self) -> MinkowskiVector {
        standard_momentum(self.kind, self.quartic.c)
    }

    /// Largest deviation of the recomputed momentum from its standard value.
    pub fn max_momentum_drift(&self) -> Result<f64> {
        let xi = self.expected_momentum();
        let mut worst = 0.0f64;
        for s in &self.samples {
            let m = momentum(s.gamma, s.tangent, s.mu, s.mu_dot, self.modulus.lambda)?;
            worst = worst.max((m - xi).euclidean_norm());
        }
        Ok(worst)
    }

    /// Index of the sample at `s = k·ω`, if the grid contains it.
    pub fn period_index(&self, k: usize) -> Option<usize> {
        let n = self.samples.len() - 1;
        let total = self.samples[n].s;
        let per = total / self.wavelength;
        let idx = (k as f64 * n as f64 / per).round() as usize;
        (idx <= n
            && (self.samples[idx].s - k as f64 * self.wavelength).abs() < 1e-9 * total.max(1.0))
        .then_some(idx)
    }
}

/// Classes of monodromy matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonodromyClass {
    /// `HP(t)`, fixing a light-like vector.
    Parabolic(f64),
    /// `HR(t)`, fixing a space-like vector.
    HyperbolicRotation(f64),
    /// Rotation by an angle about a time-like vector.
    EllipticRotation(f64),
}

/// A monodromy `ℱ(ω)ℱ(0)⁻¹` with its expected class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub matrix: Matrix3<f64>,
    pub class: MonodromyClass,
}

/// The standard momentum of each family.
pub fn standard_momentum(kind: CurveKind, c: f64) -> MinkowskiVector {
    match kind {
        CurveKind::BL => std::f64::consts::FRAC_1_SQRT_2 * MinkowskiVector::new(1.0, 0.0, 1.0),
        CurveKind::BS => MinkowskiVector::new(0.0, 0.0, -c.sqrt()),
        CurveKind::BT => MinkowskiVector::new((-c).sqrt(), 0.0, 0.0),
    }
}

/// Parabolic element `HP(t)`.
pub fn hp(t: f64) -> Matrix3<f64> {
    let h = 0.5 * t * t;
    Matrix3::new(1.0 + h, t, -h, t, 1.0, -t, h, t, 1.0 - h)
}

/// Hyperbolic rotation `HR(t)`.
pub fn hr(t: f64) -> Matrix3<f64> {
    let (sh, ch) = (t.sinh(), t.cosh());
    Matrix3::new(ch, sh, 0.0, sh, ch, 0.0, 0.0, 0.0, 1.0)
}

/// Rotation by `t` in the `(x₂, x₃)` plane.
pub fn er(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// The Minkowski form `diag(−1, 1, 1)`.
pub fn minkowski_form() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, 1.0, 1.0))
}

/// Frame matrix with columns `γ`, `T`, `γ × T`.
pub fn frame_matrix(gamma: MinkowskiVector, tangent: MinkowskiVector) -> Matrix3<f64> {
    let n = gamma.cross(tangent);
    Matrix3::new(
        gamma.x1, tangent.x1, n.x1, gamma.x2, tangent.x2, n.x2, gamma.x3, tangent.x3, n.x3,
    )
}

/// Poincaré disk coordinates `(x₂, x₃)/(1 + x₁)` of a hyperboloid point.
pub fn to_poincare(x: MinkowskiVector) -> Result<(f64, f64)> {
    let norm = x.dot(x);
    if !(x.x1 > 0.0) || (norm + 1.0).abs() > 1e-8 * x.x1 * x.x1 {
        return Err(domain(
            "to_poincare",
            format!("{x:?} is not on the upper hyperboloid"),
        ));
    }
    Ok((x.x2 / (1.0 + x.x1), x.x3 / (1.0 + x.x1)))
}

/// Inverse of [`to_poincare`].
pub fn from_poincare(u: f64, v: f64) -> Result<MinkowskiVector> {
    let r2 = u * u + v * v;
    if !(r2 < 1.0) {
        return Err(domain(
            "from_poincare",
            format!("({u}, {v}) outside the unit disk"),
        ));
    }
    let d = 1.0 - r2;
    Ok(MinkowskiVector::new(
        (1.0 + r2) / d,
        2.0 * u / d,
        2.0 * v / d,
    ))
}

/// The momentum `ξ = γ/(2μ) + μ̇γ̇/(2μ²) − (λ + μ/2) γ × γ̇`.
pub fn momentum(
    gamma: MinkowskiVector,
    tangent: MinkowskiVector,
    mu: f64,
    mu_dot: f64,
    lambda: f64,
) -> Result<MinkowskiVector> {
    if !(mu > 0.0) {
        return Err(domain("momentum", format!("mu = {mu} must be positive")));
    }
    Ok((0.5 / mu) * gamma + (0.5 * mu_dot / (mu * mu)) * tangent
        - (lambda + 0.5 * mu) * gamma.cross(tangent))
}

/// `υ⁺_λ(e₂) = 1/(2√c·e₂ + √(1 + 4c·e₂²))` on the space-like region.
pub fn upsilon_plus(lambda: f64, e2: f64) -> Result<f64> {
    let c = quartic_data(lambda, e2)?.c;
    upsilon_from_level(c, e2)
}

fn upsilon_from_level(c: f64, e2: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(domain(
            "upsilon_plus",
            format!("causal constant c = {c} must be positive"),
        ));
    }
    Ok(1.0 / (2.0 * c.sqrt() * e2 + (1.0 + 4.0 * c * e2 * e2).sqrt()))
}

/// Limit `υ*_λ` of `υ⁺_λ` at the lower boundary `e₂ = η₋`.
pub fn upsilon_star(lambda: f64) -> Result<f64> {
    let em = eta_pm(lambda)?.0;
    upsilon_from_level(saddle_level(lambda)?, em)
}

/// Inner and outer radii `(r′, r″)` of the annulus containing a BT trajectory.
pub fn annulus_radii(q: &QuarticData) -> (f64, f64) {
    let s = (-q.c).sqrt();
    let inner = q.e1 * (q.e1 + 2.0 * q.lambda).abs() / (1.0 + 2.0 * s * q.e1);
    let outer = (1.0 + 4.0 * q.c * q.e2 * q.e2).sqrt() / (1.0 + 2.0 * s * q.e2);
    (inner, outer)
}

/// Position on the curvature wave, parameterized by `μ = e₂ + (e₁ − e₂) sin²φ`.
///
/// `φ` advances by `π` per wavelength and stays regular at the turning points,
/// so `e₁ − μ` and `μ̇` keep full relative accuracy there.
#[derive(Debug, Clone, Copy)]
struct Phase {
    mu: f64,
    mu_dot: f64,
    /// `e₁ − μ`.
    gap: f64,
    sin: f64,
    cos: f64,
    /// `√((μ − e₃)(μ − e₄))`.
    w: f64,
}

#[derive(Debug, Clone, Copy)]
struct Wave {
    q: QuarticData,
    kind: CurveKind,
    spread: f64,
    /// `e₁ + 2λ`; `1 + 4c·e₁² = e₁²(e₁ + 2λ)²` on the whole moduli space.
    delta: f64,
    s: f64,
    exceptional: bool,
}

impl Wave {
    fn new(q: QuarticData, kind: CurveKind, exceptional: bool) -> Self {
        Wave {
            q,
            kind,
            spread: q.e1 - q.e2,
            delta: if exceptional {
                0.0
            } else {
                q.e1 + 2.0 * q.lambda
            },
            s: q.c.abs().sqrt(),
            exceptional,
        }
    }

    fn at(&self, phi: f64) -> Phase {
        let (sin, cos) = phi.sin_cos();
        self.at_sin_cos(sin, cos)
    }

    fn at_sin_cos(&self, sin: f64, cos: f64) -> Phase {
        let mu = self.q.e2 + self.spread * sin * sin;
        let w = ((mu - self.q.e3) * (mu - self.q.e4)).sqrt();
        Phase {
            mu,
            mu_dot: mu * self.spread * sin * cos * w,
            gap: self.spread * cos * cos,
            sin,
            cos,
            w,
        }
    }

    fn phi_rate(&self, ph: &Phase) -> f64 {
        0.5 * ph.mu * ph.w
    }

    /// `1 + 4cμ²`, written so that its double zero on the exceptional locus is resolved.
    fn radicand(&self, mu: f64, gap: f64) -> f64 {
        match self.kind {
            CurveKind::BT => {
                let e1 = self.q.e1;
                e1 * e1 * self.delta * self.delta + 4.0 * self.s * self.s * gap * (e1 + mu)
            }
            _ => 1.0 + 4.0 * self.q.c * mu * mu,
        }
    }

    fn theta_rate(&self, mu: f64, gap: f64) -> f64 {
        let (l, s) = (self.q.lambda, self.s);
        let mu2 = mu * mu;
        match self.kind {
            CurveKind::BL => -mu2 * (mu + 2.0 * l),
            CurveKind::BS => 2.0 * s * mu2 * (mu + 2.0 * l) / self.radicand(mu, gap),
            CurveKind::BT if self.exceptional => -8.0 * s * l * l * mu2 / (mu - 2.0 * l),
            CurveKind::BT => 2.0 * s * mu2 * (self.delta - gap) / self.radicand(mu, gap),
        }
    }

    /// `(ϱ, dϱ/ds)` for a time-like wave; signed through the origin on the exceptional locus.
    fn radial(&self, ph: &Phase) -> (f64, f64) {
        let s = self.s;
        let mu = ph.mu;
        if self.exceptional {
            let e1 = self.q.e1;
            let root = self.spread.sqrt();
            let rho = root * ph.cos * (e1 + mu).sqrt() / mu;
            let rho_dot = -root * ph.sin * ph.w / (4.0 * s * s * mu * (e1 + mu).sqrt());
            (rho, rho_dot)
        } else {
            let r = self.radicand(mu, ph.gap).sqrt();
            (r / (2.0 * s * mu), -ph.mu_dot / (2.0 * s * mu * mu * r))
        }
    }
}

/// Integrand of `Θ` as a function of `μ` for the family of `q`.
///
/// For time-like points the denominator uses the factored form of `1 + 4cμ²`,
/// which stays accurate next to the exceptional locus.
pub fn angular_rate(kind: CurveKind, q: &QuarticData, exceptional: bool) -> impl Fn(f64) -> f64 {
    let wave = Wave::new(*q, kind, exceptional);
    move |mu| wave.theta_rate(mu, wave.q.e1 - mu)
}

/// Integrand of `Θ` in the phase variable: `dΘ/dφ` with `μ = e₂ + (e₁ − e₂) sin²φ`.
///
/// Integrating over `[0, π]` gives `Θ(ω)`. The gap `e₁ − μ = (e₁ − e₂)cos²φ` is
/// evaluated without cancellation.
pub fn angular_rate_phase(
    kind: CurveKind,
    q: &QuarticData,
    exceptional: bool,
) -> impl Fn(f64) -> f64 {
    let wave = Wave::new(*q, kind, exceptional);
    move |phi| {
        let ph = wave.at(phi);
        wave.theta_rate(ph.mu, ph.gap) / wave.phi_rate(&ph)
    }
}

/// `dΘ/dφ` at `φ = π/2 − ψ`, measured from the crest `μ = e₁`.
///
/// Takes `ψ` directly so that `e₁ − μ = (e₁ − e₂)sin²ψ` keeps full relative
/// accuracy for small `ψ`.
pub fn angular_rate_crest(
    kind: CurveKind,
    q: &QuarticData,
    exceptional: bool,
) -> impl Fn(f64) -> f64 {
    let wave = Wave::new(*q, kind, exceptional);
    move |psi: f64| {
        let (sin, cos) = psi.sin_cos();
        let ph = wave.at_sin_cos(cos, sin);
        wave.theta_rate(ph.mu, ph.gap) / wave.phi_rate(&ph)
    }
}

/// Roots used for curve generation; exceptional points are snapped onto the locus.
pub fn curve_quartic(p: &ModulusPoint) -> Result<QuarticData> {
    if p.region == Region::E {
        quartic_data(p.lambda, exceptional_c(p.lambda)?)
    } else {
        roots_from_modulus(p)
    }
}

/// Samples `(s, phase, Θ)`.
type WaveRows = Vec<(f64, Phase, f64)>;

/// Integrates `(φ, Θ)` on a uniform grid of `periods` wavelengths.
fn integrate_wave(
    p: &ModulusPoint,
    kind: CurveKind,
    periods: f64,
    opts: &SolveOptions,
) -> Result<(Wave, f64, WaveRows)> {
    let q = curve_quartic(p)?;
    let omega = crate::dynamics::wavelength_of(&q)?;
    let wave = Wave::new(q, kind, p.region == Region::E);
    let grid = uniform_grid(omega * periods, grid_size(opts.samples_per_period, periods));
    let ys = integrate_on_grid(
        |_, y: &[f64; 2]| {
            let ph = wave.at(y[0]);
            [wave.phi_rate(&ph), wave.theta_rate(ph.mu, ph.gap)]
        },
        [0.0, 0.0],
        &grid,
        &opts.step,
    )?;
    let rows = grid
        .iter()
        .zip(ys)
        .map(|(&s, y)| (s, wave.at(y[0]), y[1]))
        .collect();
    Ok((wave, omega, rows))
}

fn require_kind(p: &ModulusPoint, kind: CurveKind) -> Result<()> {
    if CurveKind::of(p.region) == Some(kind) {
        Ok(())
    } else {
        Err(Error::RegionMismatch {
            expected: kind.label(),
            found: p.region.label().to_string(),
        })
    }
}

fn assemble(
    p: &ModulusPoint,
    kind: CurveKind,
    periods: f64,
    opts: &SolveOptions,
    point: impl Fn(&Wave, &Phase, f64) -> (MinkowskiVector, MinkowskiVector),
) -> Result<CurveSamples> {
    require_kind(p, kind)?;
    let (wave, omega, rows) = integrate_wave(p, kind, periods, opts)?;
    let mut samples = Vec::with_capacity(rows.len());
    for (s, ph, theta) in rows {
        let (gamma, tangent) = point(&wave, &ph, theta);
        samples.push(CurveSample {
            s,
            mu: ph.mu,
            mu_dot: ph.mu_dot,
            theta,
            gamma,
            tangent,
            poincare: to_poincare(gamma)?,
        });
    }
    Ok(CurveSamples {
        modulus: *p,
        quartic: wave.q,
        kind,
        wavelength: omega,
        samples,
    })
}

/// The standard BL-curve of a point on `L`, with momentum `(1, 0, 1)/√2`.
pub fn bl_curve(p: &ModulusPoint, periods: f64, opts: &SolveOptions) -> Result<CurveSamples> {
    let k = 1.0 / (2.0 * 2f64.sqrt());
    let r2 = 2f64.sqrt();
    assemble(p, CurveKind::BL, periods, opts, |wave, ph, th| {
        let (mu, mu_dot) = (ph.mu, ph.mu_dot);
        let (im, im2) = (1.0 / mu, 1.0 / (mu * mu));
        let t2 = 2.0 * th * th;
        let gamma = k * MinkowskiVector::new(
            t2 * im + 2.0 * mu + im,
            2.0 * r2 * th * im,
            t2 * im + 2.0 * mu - im,
        );
        let d_mu = k * MinkowskiVector::new(
            -t2 * im2 + 2.0 - im2,
            -2.0 * r2 * th * im2,
            -t2 * im2 + 2.0 + im2,
        );
        let d_th = k * MinkowskiVector::new(4.0 * th * im, 2.0 * r2 * im, 4.0 * th * im);
        let th_dot = wave.theta_rate(mu, ph.gap);
        (gamma, mu_dot * d_mu + th_dot * d_th)
    })
}

/// The standard BS-curve of a point in `S`, with momentum `(0, 0, −√c)`.
pub fn bs_curve(p: &ModulusPoint, periods: f64, opts: &SolveOptions) -> Result<CurveSamples> {
    assemble(p, CurveKind::BS, periods, opts, |wave, ph, th| {
        let (mu, sc) = (ph.mu, wave.s);
        let r = wave.radicand(mu, ph.gap).sqrt();
        let f = r / (2.0 * sc * mu);
        let g = 1.0 / (2.0 * sc * mu);
        let df = -1.0 / (2.0 * sc * mu * mu * r);
        let dg = -1.0 / (2.0 * sc * mu * mu);
        let (sh, ch) = (th.sinh(), th.cosh());
        let gamma = MinkowskiVector::new(f * ch, f * sh, g);
        let d_mu = MinkowskiVector::new(df * ch, df * sh, dg);
        let d_th = MinkowskiVector::new(f * sh, f * ch, 0.0);
        (gamma, ph.mu_dot * d_mu + wave.theta_rate(mu, ph.gap) * d_th)
    })
}

/// The standard BT-curve of a point in `T`, with momentum `(√|c|, 0, 0)`.
pub fn bt_curve(p: &ModulusPoint, periods: f64, opts: &SolveOptions) -> Result<CurveSamples> {
    assemble(p, CurveKind::BT, periods, opts, |wave, ph, th| {
        let (mu, sc) = (ph.mu, wave.s);
        let (rho, rho_dot) = wave.radial(ph);
        let (sn, cs) = th.sin_cos();
        let th_dot = wave.theta_rate(mu, ph.gap);
        let gamma = MinkowskiVector::new(1.0 / (2.0 * sc * mu), -rho * cs, rho * sn);
        let tangent = MinkowskiVector::new(
            -ph.mu_dot / (2.0 * sc * mu * mu),
            -rho_dot * cs + rho * sn * th_dot,
            rho_dot * sn + rho * cs * th_dot,
        );
        (gamma, tangent)
    })
}

/// The standard curve of any point of the moduli space.
pub fn generate_curve(p: &ModulusPoint, periods: f64, opts: &SolveOptions) -> Result<CurveSamples> {
    match CurveKind::of(p.region) {
        Some(CurveKind::BL) => bl_curve(p, periods, opts),
        Some(CurveKind::BS) => bs_curve(p, periods, opts),
        Some(CurveKind::BT) => bt_curve(p, periods, opts),
        None => Err(Error::OutsideModuli {
            lambda: p.lambda,
            e2: p.e2,
        }),
    }
}

/// Samples `(s, ϱ(s))` of the radial function of a time-like point.
pub fn radial_function(
    p: &ModulusPoint,
    periods: f64,
    opts: &SolveOptions,
) -> Result<Vec<(f64, f64)>> {
    require_kind(p, CurveKind::BT)?;
    let (wave, _, rows) = integrate_wave(p, CurveKind::BT, periods, opts)?;
    Ok(rows
        .iter()
        .map(|(s, ph, _)| (*s, wave.radial(ph).0))
        .collect())
}

/// Samples `(s, Θ(s))` of the angular function of a time-like point.
pub fn angular_function(
    p: &ModulusPoint,
    periods: f64,
    opts: &SolveOptions,
) -> Result<Vec<(f64, f64)>> {
    require_kind(p, CurveKind::BT)?;
    let (_, _, rows) = integrate_wave(p, CurveKind::BT, periods, opts)?;
    Ok(rows.into_iter().map(|(s, _, th)| (s, th)).collect())
}

/// `Θ(ω)` of the standard BL-curve with multiplier `λ < −1`, in closed form.
///
/// With `a = √(λ² − 1)`, `b = √(λ² + 1)` and `m = (λ² − √(λ⁴ − 1))/(λ² + √(λ⁴ − 1))`,
/// `Θ(ω) = 2(a + b)(K(m) − E(m))`, which is positive.
pub fn bl_theta_period(lambda: f64) -> Result<f64> {
    if !(lambda < -1.0) {
        return Err(domain(
            "bl_theta_period",
            format!("lambda = {lambda} must be < -1"),
        ));
    }
    let l2 = lambda * lambda;
    let r = (l2 * l2 - 1.0).sqrt();
    let m = (l2 - r) / (l2 + r);
    let (a, b) = ((l2 - 1.0).sqrt(), (l2 + 1.0).sqrt());
    Ok(2.0 * (a + b) * (complete_k(m)? - complete_e(m)?))
}

/// `Θ(ω)` of the standard BL-curve by quadrature of `−μ²(μ + 2λ)` over one wavelength.
pub fn bl_theta_period_quadrature(lambda: f64) -> Result<f64> {
    let p = ModulusPoint::new(lambda, b0(lambda)?);
    require_kind(&p, CurveKind::BL)?;
    let q = curve_quartic(&p)?;
    half_period_integral(&q, angular_rate(CurveKind::BL, &q, false), 1e-14)
}

/// A frame path obtained by integrating the Frenet system from the identity frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetPath {
    pub modulus: ModulusPoint,
    pub wavelength: f64,
    pub s: Vec<f64>,
    pub frames: Vec<Matrix3<f64>>,
}

impl FrenetPath {
    /// Hyperboloid points `ℱ·e₁`.
    pub fn gamma(&self, k: usize) -> MinkowskiVector {
        let f = &self.frames[k];
        MinkowskiVector::new(f[(0, 0)], f[(1, 0)], f[(2, 0)])
    }

    /// The Lorentz transform `A` with `A·ℱ_oracle(0) = ℱ_curve(0)`.
    pub fn alignment(&self, curve: &CurveSamples) -> Matrix3<f64> {
        curve.samples[0].frame()
            * self.frames[0]
                .try_inverse()
                .unwrap_or_else(Matrix3::identity)
    }

    /// Largest Euclidean distance between the aligned oracle and the curve.
    pub fn max_deviation(&self, curve: &CurveSamples) -> f64 {
        let a = self.alignment(curve);
        self.frames
            .iter()
            .zip(&curve.samples)
            .map(|(f, c)| {
                let g = MinkowskiVector::new(f[(0, 0)], f[(1, 0)], f[(2, 0)]).transform(&a);
                (g - c.gamma).euclidean_norm()
            })
            .fold(0.0, f64::max)
    }

    /// `ℱ(kω)ℱ(0)⁻¹` transported to the coordinates of `curve`.
    pub fn monodromy(&self, curve: &CurveSamples, k: usize) -> Option<Matrix3<f64>> {
        let idx = curve.period_index(k)?;
        let a = self.alignment(curve);
        let m = self.frames[idx] * self.frames[0].try_inverse()?;
        Some(a * m * a.try_inverse()?)
    }
}

/// Integrates `ℱ' = ℱ·K(s)` with `κ = μ²` from the identity frame at `(1, 0, 0)`.
///
/// The result is independent of the closed-form parameterizations and serves
/// as their oracle.
pub fn frenet_oracle(p: &ModulusPoint, periods: f64, opts: &SolveOptions) -> Result<FrenetPath> {
    p.require_moduli()?;
    let q = curve_quartic(p)?;
    let omega = crate::dynamics::wavelength_of(&q)?;
    let grid = uniform_grid(omega * periods, grid_size(opts.samples_per_period, periods));
    frenet_path(p, Matrix3::identity(), &grid, opts)
}

/// Integrates the Frenet system from `frame0` at `s = grid[0] = 0` with `μ(0) = e₂`.
///
/// The grid may run backwards.
pub fn frenet_path(
    p: &ModulusPoint,
    frame0: Matrix3<f64>,
    grid: &[f64],
    opts: &SolveOptions,
) -> Result<FrenetPath> {
    p.require_moduli()?;
    let q = curve_quartic(p)?;
    let omega = crate::dynamics::wavelength_of(&q)?;
    let lambda = p.lambda;
    let mut y0 = [0.0; 11];
    // Column-major frame, then (μ, μ̇).
    for j in 0..3 {
        for i in 0..3 {
            y0[3 * j + i] = frame0[(i, j)];
        }
    }
    y0[9] = q.e2;
    let ys = integrate_on_grid(
        |_, y: &[f64; 11]| {
            let (mu, v) = (y[9], y[10]);
            let kappa = mu * mu;
            let mut d = [0.0; 11];
            for i in 0..3 {
                let (g, t, n) = (y[i], y[3 + i], y[6 + i]);
                d[i] = t;
                d[3 + i] = g + kappa * n;
                d[6 + i] = -kappa * t;
            }
            let mu3 = kappa * mu;
            d[9] = v;
            d[10] = 2.0 * v * v / mu - mu - 2.0 * lambda * mu3 * mu - mu3 * kappa;
            d
        },
        y0,
        grid,
        &opts.step,
    )?;
    let frames = ys
        .iter()
        .map(|y| Matrix3::new(y[0], y[3], y[6], y[1], y[4], y[7], y[2], y[5], y[8]))
        .collect();
    Ok(FrenetPath {
        modulus: *p,
        wavelength: omega,
        s: grid.to_vec(),
        frames,
    })
}

/// Monodromy `ℱ(ω)ℱ(0)⁻¹` of a closed-form curve that spans at least one period.
pub fn monodromy(curve: &CurveSamples) -> Result<Monodromy> {
    let idx = curve
        .period_index(1)
        .ok_or_else(|| domain("monodromy", "curve does not cover one full period"))?;
    let f0 = curve.samples[0].frame();
    let f1 = curve.samples[idx].frame();
    let inv = f0
        .try_inverse()
        .ok_or_else(|| domain("monodromy", "singular frame"))?;
    let theta = curve.samples[idx].theta;
    let class = match curve.kind {
        CurveKind::BL => MonodromyClass::Parabolic(2f64.sqrt() * theta),
        CurveKind::BS => MonodromyClass::HyperbolicRotation(theta),
        CurveKind::BT => MonodromyClass::EllipticRotation(-theta),
    };
    Ok(Monodromy {
        matrix: f1 * inv,
        class,
    })
}

impl MonodromyClass {
    /// The matrix predicted by the class.
    pub fn matrix(self) -> Matrix3<f64> {
        match self {
            MonodromyClass::Parabolic(t) => hp(t),
            MonodromyClass::HyperbolicRotation(t) => hr(t),
            MonodromyClass::EllipticRotation(t) => er(t),
        }
    }
}

/// Trapezoidal estimate of `∫(√κ + λ) ds = ∫(μ + λ) ds` over the sampled range.
pub fn bending_energy(curve: &CurveSamples, lambda: f64) -> Result<f64> {
    bending_energy_of(curve.samples.iter().map(|s| (s.s, s.mu)), lambda)
}

/// Trapezoidal energy of any sampled Blaschke invariant `(s, μ)`.
pub fn bending_energy_of(
    samples: impl IntoIterator<Item = (f64, f64)>,
    lambda: f64,
) -> Result<f64> {
    let mut total = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for (s, mu) in samples {
        if !(mu > 0.0) {
            return Err(domain(
                "bending_energy",
                format!("non-convex sample mu = {mu} at s = {s}"),
            ));
        }
        if let Some((s0, m0)) = prev {
            total += 0.5 * (s - s0) * (m0 + mu + 2.0 * lambda);
        }
        prev = Some((s, mu));
    }
    Ok(total)
}

/// Rotation by `2π·k/n` of a Poincaré point.
pub fn rotate(z: (f64, f64), angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (c * z.0 - s * z.1, s * z.0 + c * z.1)
}

/// Largest distance from each point of `a` to the nearest point of `b`.
pub fn directed_hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two sampled trajectories.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Turning angle `2π·m/n` used by rotational symmetry checks.
pub fn symmetry_angle(m: i64, n: i64) -> f64 {
    2.0 * PI * m as f64 / n as f64
}
