//! Hastings–McLeod solution of `q'' = x q + 2 q^3` and the Tracy–Widom
//! distribution `F_2(t) = exp(-int_t^inf (x - t) q(x)^2 dx)` built from it.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::airy::{airy, airy_pair};
use crate::error::{param, Result, RmtError};
use crate::quadrature::integrate;

pub const DEFAULT_X0: f64 = 8.0;
pub const DEFAULT_X_MIN: f64 = -6.0;
pub const DEFAULT_STEP: f64 = 1e-3;
/// Default distribution grid `[-6, 5]` with spacing 0.01.
pub const DEFAULT_T_RANGE: (f64, f64, f64) = (-6.0, 5.0, 0.01);

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-16;
const HALVING_TOL: f64 = 1e-6;

/// State `(q, q', A, B)` with `A' = q^2`, `B' = x q^2`.
type State = [f64; 4];

fn rhs(x: f64, y: &State) -> State {
    let q2 = y[0] * y[0];
    [y[1], x * y[0] + 2.0 * q2 * y[0], q2, x * q2]
}

fn axpy(y: &State, h: f64, ks: &[(&State, f64)]) -> State {
    let mut out = *y;
    for (k, c) in ks {
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand–Prince 5(4) step; returns the 5th-order solution and an error estimate.
fn dp45_step(x: f64, y: &State, h: f64) -> (State, f64) {
    let k1 = rhs(x, y);
    let k2 = rhs(x + h / 5.0, &axpy(y, h, &[(&k1, 1.0 / 5.0)]));
    let k3 = rhs(x + 3.0 * h / 10.0, &axpy(y, h, &[(&k1, 3.0 / 40.0), (&k2, 9.0 / 40.0)]));
    let k4 = rhs(x + 4.0 * h / 5.0, &axpy(y, h, &[(&k1, 44.0 / 45.0), (&k2, -56.0 / 15.0), (&k3, 32.0 / 9.0)]));
    let k5 = rhs(
        x + 8.0 * h / 9.0,
        &axpy(y, h, &[(&k1, 19372.0 / 6561.0), (&k2, -25360.0 / 2187.0), (&k3, 64448.0 / 6561.0), (&k4, -212.0 / 729.0)]),
    );
    let k6 = rhs(
        x + h,
        &axpy(
            y,
            h,
            &[(&k1, 9017.0 / 3168.0), (&k2, -355.0 / 33.0), (&k3, 46732.0 / 5247.0), (&k4, 49.0 / 176.0), (&k5, -5103.0 / 18656.0)],
        ),
    );
    let y5 = axpy(
        y,
        h,
        &[(&k1, 35.0 / 384.0), (&k3, 500.0 / 1113.0), (&k4, 125.0 / 192.0), (&k5, -2187.0 / 6784.0), (&k6, 11.0 / 84.0)],
    );
    let k7 = rhs(x + h, &y5);
    let e = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
    let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let mut err = 0.0f64;
    for i in 0..4 {
        let ei: f64 = ks.iter().zip(e).map(|(k, c)| c * k[i]).sum::<f64>() * h;
        let sc = ATOL + RTOL * y[i].abs().max(y5[i].abs());
        err = err.max((ei / sc).abs());
    }
    (y5, err)
}

/// Advance from `x` to `x_end` with adaptive substeps; `h` carries the last accepted step size.
fn advance(x: f64, y: State, x_end: f64, h: &mut f64) -> Result<State> {
    let dir = (x_end - x).signum();
    let (mut x, mut y) = (x, y);
    let mut guard = 0usize;
    while (x_end - x) * dir > 0.0 {
        guard += 1;
        if guard > 1_000_000 {
            return Err(RmtError::Convergence(format!("Painlevé integration stalled near x = {x}")));
        }
        let remaining = x_end - x;
        let mut step = h.abs().min(remaining.abs()) * dir;
        loop {
            let (y_new, err) = dp45_step(x, &y, step);
            if err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                x = if (step - remaining).abs() <= 1e-15 * remaining.abs().max(1.0) { x_end } else { x + step };
                y = y_new;
                let grow = if err > 0.0 { (0.9 * err.powf(-0.2)).min(5.0) } else { 5.0 };
                // only let the carried step grow after full-size steps
                if step.abs() >= h.abs() * 0.999 {
                    *h = step.abs() * grow;
                }
                break;
            }
            step *= if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.1) } else { 0.1 };
            if step.abs() < 1e-14 {
                return Err(RmtError::Convergence(format!("Painlevé step size underflow at x = {x}")));
            }
        }
    }
    Ok(y)
}

/// `q` and its running integrals on the grid `x_i = x0 - i * step` down to `x_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PainleveSolution {
    pub x0: f64,
    pub step: f64,
    pub x: Vec<f64>,
    pub q: Vec<f64>,
    pub dq: Vec<f64>,
    /// `int_x^inf q^2`
    pub i0: Vec<f64>,
    /// `int_x^inf s q(s)^2 ds`
    pub i1: Vec<f64>,
}

fn integrate_grid(x0: f64, x_min: f64, step: f64) -> Result<PainleveSolution> {
    let n = ((x0 - x_min) / step).round() as usize;
    let (a0, ap0) = airy_pair(x0)?;
    // beyond x0 the nonlinearity is below 1e-20, so q = Ai there
    let tail0 = integrate(|s| airy(s).unwrap_or(0.0).powi(2), x0, 15.0, 1e-30, 1e-12)?.value;
    let tail1 = integrate(|s| s * airy(s).unwrap_or(0.0).powi(2), x0, 15.0, 1e-30, 1e-12)?.value;
    let mut sol = PainleveSolution {
        x0,
        step,
        x: Vec::with_capacity(n + 1),
        q: Vec::with_capacity(n + 1),
        dq: Vec::with_capacity(n + 1),
        i0: Vec::with_capacity(n + 1),
        i1: Vec::with_capacity(n + 1),
    };
    let mut y: State = [a0, ap0, 0.0, 0.0];
    let mut h = step;
    let mut x = x0;
    for i in 0..=n {
        if i > 0 {
            let xe = x0 - step * i as f64;
            y = advance(x, y, xe, &mut h)?;
            x = xe;
        }
        sol.x.push(x);
        sol.q.push(y[0]);
        sol.dq.push(y[1]);
        sol.i0.push(tail0 - y[2]);
        sol.i1.push(tail1 - y[3]);
    }
    Ok(sol)
}

/// Integrate backward from `(Ai(x0), Ai'(x0))` at `x0` to `x_min` and report
/// the solution on a grid of spacing `step`. The grid is recomputed at half
/// spacing and the two must agree to 1e-6.
pub fn painleve2_solve(x0: f64, x_min: f64, step: f64) -> Result<PainleveSolution> {
    if !(x0 >= 8.0 && x0 <= 15.0) {
        return param(format!("right boundary {x0} must lie in [8, 15]"));
    }
    if !(x_min <= -6.0 && x_min >= -12.0) {
        return param(format!("left end {x_min} must lie in [-12, -6]"));
    }
    if !(step > 0.0 && step <= 0.1) || ((x0 - x_min) / step - ((x0 - x_min) / step).round()).abs() > 1e-6 {
        return param(format!("step {step} must be in (0, 0.1] and divide x0 - x_min"));
    }
    let sol = integrate_grid(x0, x_min, step)?;
    let fine = integrate_grid(x0, x_min, step / 2.0)?;
    let mut worst = (0.0f64, x0);
    for (i, &q) in sol.q.iter().enumerate() {
        let d = (q - fine.q[2 * i]).abs();
        if d > worst.0 {
            worst = (d, sol.x[i]);
        }
    }
    if worst.0 > HALVING_TOL {
        return Err(RmtError::Convergence(format!(
            "step halving changed q by {:.3e} at x = {} (step {step})",
            worst.0, worst.1
        )));
    }
    if let Some(i) = sol.q.iter().position(|&q| !(q > 0.0)) {
        return Err(RmtError::Convergence(format!("q lost positivity at x = {}", sol.x[i])));
    }
    Ok(sol)
}

/// Tabulated `F_2` together with the Painlevé solution it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F2Table {
    pub t: Vec<f64>,
    pub f: Vec<f64>,
    pub solution: PainleveSolution,
}

/// Value of [`f2_cdf`]; `clamped` is set when `t` was outside the table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F2Value {
    pub value: f64,
    pub clamped: bool,
}

impl F2Table {
    /// Table on the default grid from the default solver settings.
    pub fn default_table() -> Result<Self> {
        let (a, b, dt) = DEFAULT_T_RANGE;
        Self::build(a, b, dt, DEFAULT_STEP)
    }

    pub fn build(t_min: f64, t_max: f64, dt: f64, step: f64) -> Result<Self> {
        if !(t_min < t_max && dt > 0.0) || t_max > DEFAULT_X0 {
            return param(format!("bad distribution grid [{t_min}, {t_max}] step {dt}"));
        }
        let x_min = DEFAULT_X_MIN.min(t_min.floor());
        let solution = painleve2_solve(DEFAULT_X0, x_min, step)?;
        let count = ((t_max - t_min) / dt).round() as usize;
        let t: Vec<f64> = (0..=count).map(|i| t_min + dt * i as f64).collect();
        let f = t.iter().map(|&ti| solution.f2_at(ti)).collect();
        Ok(Self { t, f, solution })
    }

    /// CSV `t,F2`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,F2\n");
        for (t, f) in self.t.iter().zip(&self.f) {
            let _ = writeln!(out, "{t},{f}");
        }
        out
    }

    /// CSV `x,q` of the Painlevé solution, ascending in `x`.
    pub fn q_csv(&self) -> String {
        let mut out = String::from("x,q\n");
        for (x, q) in self.solution.x.iter().zip(&self.solution.q).rev() {
            let _ = writeln!(out, "{x},{q}");
        }
        out
    }

    /// Smallest grid `t` with `F_2(t) >= p`, refined by linear interpolation.
    pub fn quantile(&self, p: f64) -> Option<f64> {
        let i = self.f.iter().position(|&f| f >= p)?;
        if i == 0 {
            return Some(self.t[0]);
        }
        let (f0, f1) = (self.f[i - 1], self.f[i]);
        Some(self.t[i - 1] + (p - f0) / (f1 - f0) * (self.t[i] - self.t[i - 1]))
    }
}

impl PainleveSolution {
    /// Linear interpolation of a grid column at `x` (grid is descending).
    fn interp(&self, col: &[f64], x: f64) -> f64 {
        let pos = (self.x0 - x) / self.step;
        let i = (pos.floor() as usize).min(self.x.len() - 2);
        let w = pos - i as f64;
        col[i] * (1.0 - w) + col[i + 1] * w
    }

    pub fn q_at(&self, x: f64) -> f64 {
        self.interp(&self.q, x)
    }

    fn f2_at(&self, t: f64) -> f64 {
        let i0 = self.interp(&self.i0, t);
        let i1 = self.interp(&self.i1, t);
        (-(i1 - t * i0)).exp().clamp(0.0, 1.0)
    }
}

/// `F_2(t)` by linear interpolation in the table; outside the grid the end
/// value is returned with the clamp flag set.
pub fn f2_cdf(table: &F2Table, t: f64) -> F2Value {
    let (lo, hi) = (table.t[0], *table.t.last().expect("nonempty grid"));
    if t.is_nan() {
        return F2Value { value: f64::NAN, clamped: true };
    }
    if t <= lo || t >= hi {
        let value = if t <= lo { table.f[0] } else { *table.f.last().expect("nonempty grid") };
        return F2Value { value, clamped: t < lo || t > hi };
    }
    let dt = (hi - lo) / (table.t.len() - 1) as f64;
    let pos = (t - lo) / dt;
    let i = (pos.floor() as usize).min(table.t.len() - 2);
    let w = pos - i as f64;
    F2Value { value: table.f[i] * (1.0 - w) + table.f[i + 1] * w, clamped: false }
}
