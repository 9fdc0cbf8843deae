use std::path::Path;

use halfelastica::curvegen::{bt_curve, generate_curve, CurveKind};
use halfelastica::dynamics::{self, center_period, closed_circles, wavelength, SolveOptions};
use halfelastica::moduli::{
    classify_region, eta_pm, roots_from_modulus, saddle_level, separatrix_root, LAMBDA_CRIT,
};
use halfelastica::periodmap::{
    self, closure_defect, e2_interval, fiber_endpoint, fiber_exceptional_crossing, j_interval,
    trace_fiber, Rational, StringRecord,
};
use halfelastica::ModulusPoint;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{to_json, Cell, Table, SCHEMA};
use crate::svg;
use crate::{Format, RunConfig};

/// Text to emit and the exit code to return after emitting it.
pub struct Outcome {
    pub text: String,
    pub code: u8,
    pub warning: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            code: 0,
            warning: None,
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn lambda_of(cfg: &RunConfig) -> Result<f64, CliError> {
    cfg.lambda
        .ok_or_else(|| CliError::Usage("--lambda is required".into()))
}

fn point_of(cfg: &RunConfig) -> Result<ModulusPoint, CliError> {
    let lambda = lambda_of(cfg)?;
    let e2 = cfg
        .e2
        .ok_or_else(|| CliError::Usage("--e2 is required".into()))?;
    Ok(classify_region(lambda, e2))
}

fn moduli_point(cfg: &RunConfig) -> Result<ModulusPoint, CliError> {
    let p = point_of(cfg)?;
    p.require_moduli()?;
    Ok(p)
}

/// Parses `m/n` with positive integers and reduces it.
pub fn parse_q(text: &str) -> Result<(Rational, bool), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "q must be \"m/n\" with positive integers, got {text:?}"
        ))
    };
    let (m, n) = text.trim().split_once('/').ok_or_else(bad)?;
    let m: i64 = m.trim().parse().map_err(|_| bad())?;
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    if m <= 0 || n <= 0 {
        return Err(bad());
    }
    let q = Rational::new(m, n);
    Ok((q, *q.numer() != m))
}

fn q_of(cfg: &RunConfig) -> Result<(Rational, Option<String>), CliError> {
    let text = cfg
        .q
        .as_deref()
        .ok_or_else(|| CliError::Usage("--q is required".into()))?;
    let (q, reduced) = parse_q(text)?;
    let note = reduced.then(|| format!("q = {text} reduced to {q}"));
    Ok((q, note))
}

fn format_of(cfg: &RunConfig, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = cfg.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "format {f:?} is not available for this command"
        )))
    }
}

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions {
        samples_per_period: cfg.samples as usize,
        ..SolveOptions::default()
    }
}

fn periods_of(cfg: &RunConfig) -> Result<f64, CliError> {
    if cfg.periods.is_finite() && cfg.periods > 0.0 {
        Ok(cfg.periods)
    } else {
        Err(CliError::Usage(format!(
            "--periods must be positive, got {}",
            cfg.periods
        )))
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    schema: &'static str,
    lambda: f64,
    e2: f64,
    region: String,
    e1: Option<f64>,
    e3: Option<f64>,
    e4: Option<f64>,
    c: Option<f64>,
    eta_minus: Option<f64>,
    eta_plus: Option<f64>,
    wavelength: Option<f64>,
}

pub fn classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    format_of(cfg, Format::Json, &[Format::Json])?;
    let p = point_of(cfg)?;
    let etas = eta_pm(p.lambda).ok();
    let inside = p.region.in_moduli();
    let roots = if inside {
        Some(roots_from_modulus(&p)?)
    } else {
        None
    };
    let report = ClassifyReport {
        schema: SCHEMA,
        lambda: p.lambda,
        e2: p.e2,
        region: p.region.to_string(),
        e1: roots.map(|q| q.e1),
        e3: roots.map(|q| q.e3),
        e4: roots.map(|q| q.e4),
        c: roots.map(|q| q.c),
        eta_minus: etas.map(|e| e.0),
        eta_plus: etas.map(|e| e.1),
        wavelength: if inside { Some(wavelength(&p)?) } else { None },
    };
    let text = to_json(&report)?;
    if inside {
        Ok(Outcome::ok(text))
    } else {
        Ok(Outcome {
            text,
            code: 2,
            warning: Some(format!(
                "({}, {}) is not in the moduli space (region {})",
                p.lambda, p.e2, p.region
            )),
        })
    }
}

#[derive(Serialize)]
struct CurveRow {
    s: f64,
    mu: f64,
    mu_dot: f64,
    x1: f64,
    x2: f64,
    x3: f64,
    u: f64,
    v: f64,
    theta: f64,
}

#[derive(Serialize)]
struct CurveReport {
    schema: &'static str,
    lambda: f64,
    e2: f64,
    region: String,
    kind: &'static str,
    c: f64,
    wavelength: f64,
    periods: f64,
    samples: Vec<CurveRow>,
}

pub fn curve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = format_of(cfg, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])?;
    let p = moduli_point(cfg)?;
    let periods = periods_of(cfg)?;
    let curve = generate_curve(&p, periods, &solve_options(cfg))?;
    let rows = curve.samples.iter().map(|s| CurveRow {
        s: s.s,
        mu: s.mu,
        mu_dot: s.mu_dot,
        x1: s.gamma.x1,
        x2: s.gamma.x2,
        x3: s.gamma.x3,
        u: s.poincare.0,
        v: s.poincare.1,
        theta: s.theta,
    });
    let text = match format {
        Format::Svg => svg::render_curve(&curve),
        Format::Csv => {
            let mut t = Table::new(&["s", "mu", "mu_dot", "x1", "x2", "x3", "u", "v", "theta"])?;
            for r in rows {
                t.row(&[r.s, r.mu, r.mu_dot, r.x1, r.x2, r.x3, r.u, r.v, r.theta].map(Cell::Num))?;
            }
            t.finish()?
        }
        Format::Json => to_json(&CurveReport {
            schema: SCHEMA,
            lambda: p.lambda,
            e2: p.e2,
            region: p.region.to_string(),
            kind: curve.kind.label(),
            c: curve.quartic.c,
            wavelength: curve.wavelength,
            periods,
            samples: rows.collect(),
        })?,
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct SignaturePoint {
    mu: f64,
    mu_dot: f64,
}

#[derive(Serialize)]
struct SignatureReport {
    schema: &'static str,
    lambda: f64,
    e2: f64,
    region: String,
    wavelength: f64,
    points: Vec<SignaturePoint>,
}

pub fn signature(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = format_of(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let p = moduli_point(cfg)?;
    let pts = dynamics::signature(&p, cfg.samples as usize)?;
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["mu", "mu_dot"])?;
            for (mu, mu_dot) in pts {
                t.row(&[Cell::Num(mu), Cell::Num(mu_dot)])?;
            }
            t.finish()?
        }
        _ => to_json(&SignatureReport {
            schema: SCHEMA,
            lambda: p.lambda,
            e2: p.e2,
            region: p.region.to_string(),
            wavelength: wavelength(&p)?,
            points: pts
                .into_iter()
                .map(|(mu, mu_dot)| SignaturePoint { mu, mu_dot })
                .collect(),
        })?,
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct ScanPoint {
    e2: f64,
    #[serde(rename = "P")]
    p: f64,
}

#[derive(Serialize)]
struct ScanReport {
    schema: &'static str,
    lambda: f64,
    e2_interval: (f64, f64),
    j_interval: (f64, f64),
    points: Vec<ScanPoint>,
}

pub fn scan_period(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = format_of(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let lambda = lambda_of(cfg)?;
    let scan = periodmap::scan_period(lambda, cfg.samples as usize)?;
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["e2", "P"])?;
            for (e2, v) in scan {
                t.row(&[Cell::Num(e2), Cell::Num(v)])?;
            }
            t.finish()?
        }
        _ => to_json(&ScanReport {
            schema: SCHEMA,
            lambda,
            e2_interval: e2_interval(lambda)?,
            j_interval: j_interval(lambda)?,
            points: scan
                .into_iter()
                .map(|(e2, p)| ScanPoint { e2, p })
                .collect(),
        })?,
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct Closure {
    position: f64,
    frame: f64,
    symmetry: f64,
}

#[derive(Serialize)]
struct StringReport {
    schema: &'static str,
    q: String,
    lambda: f64,
    e2: f64,
    region: String,
    period: f64,
    wavelength: f64,
    length: f64,
    wave_number: i64,
    turning_number: i64,
    punctured_class: i64,
    j: i64,
    isotopy_count: i64,
    limiting_radius: f64,
    limiting_wavelength: f64,
    solutions: usize,
    closure: Closure,
}

fn interval_error(err: halfelastica::Error, q: Rational) -> CliError {
    match err {
        halfelastica::Error::OutOfInterval { lo, hi, .. } => CliError::OutOfInterval {
            q: q.to_string(),
            lo,
            hi,
        },
        other => other.into(),
    }
}

pub fn find_string(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = format_of(cfg, Format::Json, &[Format::Json, Format::Svg])?;
    let lambda = lambda_of(cfg)?;
    let (q, note) = q_of(cfg)?;
    let all = periodmap::find_strings(lambda, q).map_err(|e| interval_error(e, q))?;
    let rec: StringRecord = all[0];
    let target = *q.numer() as f64 / *q.denom() as f64;
    if (rec.period - target).abs() > cfg.tol {
        return Err(CliError::Numeric(format!(
            "period map residual {:e} exceeds --tol {:e}",
            (rec.period - target).abs(),
            cfg.tol
        )));
    }
    let opts = solve_options(cfg);
    let text = match format {
        Format::Svg => {
            let curve = bt_curve(&rec.modulus, rec.wave_number() as f64, &opts)?;
            svg::render_curve(&curve)
        }
        _ => {
            let d = closure_defect(&rec, &opts, 256)?;
            let inv = rec.invariants;
            to_json(&StringReport {
                schema: SCHEMA,
                q: q.to_string(),
                lambda,
                e2: rec.modulus.e2,
                region: rec.modulus.region.to_string(),
                period: rec.period,
                wavelength: rec.wavelength,
                length: rec.length,
                wave_number: inv.wave_number,
                turning_number: inv.turning_number,
                punctured_class: inv.punctured_class,
                j: inv.j,
                isotopy_count: inv.isotopy_count,
                limiting_radius: inv.limiting_radius,
                limiting_wavelength: inv.limiting_wavelength,
                solutions: all.len(),
                closure: Closure {
                    position: d.position,
                    frame: d.frame,
                    symmetry: d.symmetry,
                },
            })?
        }
    };
    Ok(Outcome {
        text,
        code: 0,
        warning: note,
    })
}

#[derive(Serialize)]
struct FiberPoint {
    lambda: f64,
    e2: f64,
    region: String,
}

#[derive(Serialize)]
struct FiberReport {
    schema: &'static str,
    q: String,
    endpoint: FiberPoint,
    exceptional: Option<FiberPoint>,
    points: Vec<FiberPoint>,
}

fn fiber_point(p: &ModulusPoint) -> FiberPoint {
    FiberPoint {
        lambda: p.lambda,
        e2: p.e2,
        region: p.region.to_string(),
    }
}

pub fn fiber(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = format_of(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let (q, note) = q_of(cfg)?;
    let pts = trace_fiber(q, cfg.samples as usize)?;
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["lambda", "e2", "region"])?;
            for p in &pts {
                let label = p.region.to_string();
                t.row(&[Cell::Num(p.lambda), Cell::Num(p.e2), Cell::Text(&label)])?;
            }
            t.finish()?
        }
        _ => {
            let (lambda, e2) = fiber_endpoint(q)?;
            to_json(&FiberReport {
                schema: SCHEMA,
                q: q.to_string(),
                endpoint: FiberPoint {
                    lambda,
                    e2,
                    region: classify_region(lambda, e2).region.to_string(),
                },
                exceptional: fiber_exceptional_crossing(q).ok().map(|p| fiber_point(&p)),
                points: pts.iter().map(fiber_point).collect(),
            })?
        }
    };
    Ok(Outcome {
        text,
        code: 0,
        warning: note,
    })
}

const PORTRAIT_ORBITS: usize = 12;

#[derive(Serialize)]
struct Orbit {
    e2: f64,
    region: String,
    kind: Option<&'static str>,
    wavelength: f64,
}

#[derive(Serialize)]
struct PortraitReport {
    schema: &'static str,
    lambda: f64,
    eta_minus: Option<f64>,
    eta_plus: Option<f64>,
    saddle_level: Option<f64>,
    separatrix_root: Option<f64>,
    center_period: Option<f64>,
    closed_circle_curvatures: Vec<f64>,
    orbits: Vec<Orbit>,
}

/// Minima `e₂` of the sampled periodic orbits, evenly spaced inside `(η₋, η₊)`.
fn portrait_levels(lambda: f64) -> Vec<ModulusPoint> {
    match eta_pm(lambda) {
        Ok((em, ep)) if lambda < LAMBDA_CRIT => (1..=PORTRAIT_ORBITS)
            .map(|i| {
                classify_region(
                    lambda,
                    em + (ep - em) * i as f64 / (PORTRAIT_ORBITS + 1) as f64,
                )
            })
            .filter(|p| p.region.in_moduli())
            .collect(),
        _ => Vec::new(),
    }
}

pub fn phase_portrait(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let format = format_of(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let lambda = lambda_of(cfg)?;
    let levels = portrait_levels(lambda);
    let text = match format {
        Format::Csv => {
            let mut t = Table::new(&["e2", "region", "mu", "mu_dot"])?;
            for p in &levels {
                let label = p.region.to_string();
                for (mu, mu_dot) in dynamics::signature(p, cfg.samples as usize)? {
                    t.row(&[
                        Cell::Num(p.e2),
                        Cell::Text(&label),
                        Cell::Num(mu),
                        Cell::Num(mu_dot),
                    ])?;
                }
            }
            t.finish()?
        }
        _ => {
            let etas = eta_pm(lambda).ok();
            let orbits = levels
                .iter()
                .map(|p| {
                    Ok(Orbit {
                        e2: p.e2,
                        region: p.region.to_string(),
                        kind: CurveKind::of(p.region).map(CurveKind::label),
                        wavelength: wavelength(p)?,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            to_json(&PortraitReport {
                schema: SCHEMA,
                lambda,
                eta_minus: etas.map(|e| e.0),
                eta_plus: etas.map(|e| e.1),
                saddle_level: etas.and(saddle_level(lambda).ok()),
                separatrix_root: etas.and(separatrix_root(lambda).ok()),
                center_period: etas.and(center_period(lambda).ok()),
                closed_circle_curvatures: closed_circles(lambda),
                orbits,
            })?
        }
    };
    Ok(Outcome::ok(text))
}
