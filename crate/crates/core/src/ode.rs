//! Adaptive Dormand–Prince 5(4) integration with output on a prescribed grid.

use crate::error::{Error, Result};

/// Step-size control for [`integrate_on_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on accepted plus rejected steps per grid interval.
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-12,
            atol: 1e-12,
            max_steps: 100_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince step; returns the new state and the scaled error norm.
fn dp_step<const N: usize, F>(
    f: &F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    ctrl: &StepControl,
) -> ([f64; N], [f64; N], f64)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = *k1;
    for stage in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[stage] = f(t + C[stage] * h, &ys);
    }
    // Stage 7 is evaluated at the fifth-order solution (FSAL).
    let mut y_new = *y;
    for (j, kj) in k.iter().enumerate().take(6) {
        for i in 0..N {
            y_new[i] += h * A[6][j] * kj[i];
        }
    }
    let k7 = f(t + h, &y_new);
    k[6] = k7;
    let mut err = 0.0f64;
    for i in 0..N {
        let mut e = 0.0;
        for (j, kj) in k.iter().enumerate() {
            e += E[j] * kj[i];
        }
        let scale = ctrl.atol + ctrl.rtol * y[i].abs().max(y_new[i].abs());
        err = err.max((h * e / scale).abs());
    }
    (y_new, k7, err)
}

/// Integrates `y' = f(t, y)` from `grid[0]` and returns the state at every grid point.
///
/// Steps are adaptive inside each grid interval and always land on the grid.
pub fn integrate_on_grid<const N: usize, F>(
    f: F,
    y0: [f64; N],
    grid: &[f64],
    ctrl: &StepControl,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(grid.len());
    if grid.is_empty() {
        return Ok(out);
    }
    let mut t = grid[0];
    let mut y = y0;
    let mut k1 = f(t, &y);
    out.push(y);
    let span = (grid[grid.len() - 1] - grid[0]).abs();
    let mut h = (span / grid.len() as f64).max(1e-6) * 0.5;
    if grid.len() > 1 && grid[1] < grid[0] {
        h = -h;
    }
    for &target in &grid[1..] {
        let mut steps = 0usize;
        while (target - t).abs() > 1e-15 * (1.0 + t.abs()) {
            steps += 1;
            if steps > ctrl.max_steps {
                return Err(Error::NonConvergence {
                    method: "dormand_prince",
                    achieved: h.abs(),
                });
            }
            let remaining = target - t;
            let last = h.abs() >= remaining.abs();
            let step = if last { remaining } else { h };
            let (y_new, k_new, err) = dp_step(&f, t, &y, &k1, step, ctrl);
            if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                t = if last { target } else { t + step };
                y = y_new;
                k1 = k_new;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).min(5.0)
                };
                if !last || grow < 1.0 {
                    h = step * grow;
                }
            } else {
                let shrink = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).max(0.1)
                } else {
                    0.1
                };
                h = step * shrink;
                if h.abs() < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::NonConvergence {
                        method: "dormand_prince",
                        achieved: err,
                    });
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Uniform grid `0, L/n, …, L` with `n + 1` points.
pub fn uniform_grid(length: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| length * i as f64 / n as f64).collect()
}
