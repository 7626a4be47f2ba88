//! The Airy function `Ai` on `[-15, 15]`.

use std::f64::consts::PI;

use crate::error::{Result, RmtError};

/// Accuracy window of [`airy`] and [`airy_prime`].
pub const AIRY_WINDOW: (f64, f64) = (-15.0, 15.0);

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`.
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0) = 3^{-1/3} / Gamma(1/3)`.
pub const AIP0_NEG: f64 = 0.258_819_403_792_806_8;

const SERIES_LIMIT: f64 = 5.0;
const ODE_STEP: f64 = 2.5e-4;

pub fn airy(x: f64) -> Result<f64> {
    Ok(airy_pair(x)?.0)
}

pub fn airy_prime(x: f64) -> Result<f64> {
    Ok(airy_pair(x)?.1)
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> Result<(f64, f64)> {
    if !(x >= AIRY_WINDOW.0 && x <= AIRY_WINDOW.1) {
        return Err(RmtError::Domain(format!("Airy evaluation at {x} outside [-15, 15]")));
    }
    Ok(if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        asymptotic(x)
    } else {
        backward_ode(x)
    })
}

/// `Ai = Ai(0) f - (-Ai'(0)) g` with the two power series solutions of `u'' = x u`.
pub(crate) fn maclaurin(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let x3 = x2 * x;
    // f = sum a_k x^{3k}, g = sum b_k x^{3k+1}; p = x^{3k}, prev_p = x^{3k-3}
    let (mut a, mut b, mut p, mut prev_p) = (1.0, 1.0, 1.0, 0.0);
    let (mut f, mut g, mut df, mut dg) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..400usize {
        let kf = k as f64;
        let terms = [a * p, b * p * x, 3.0 * kf * a * x2 * prev_p, (3.0 * kf + 1.0) * b * p];
        f += terms[0];
        g += terms[1];
        df += terms[2];
        dg += terms[3];
        let size: f64 = terms.iter().map(|t| t.abs()).sum();
        if k > 3 && size <= 1e-18 * (f.abs() + g.abs() + df.abs() + dg.abs()) {
            break;
        }
        a /= (3.0 * kf + 2.0) * (3.0 * kf + 3.0);
        b /= (3.0 * kf + 3.0) * (3.0 * kf + 4.0);
        prev_p = p;
        p *= x3;
    }
    (AI0 * f - AIP0_NEG * g, AI0 * df - AIP0_NEG * dg)
}

/// Large-`x` expansion `Ai ~ e^{-z} / (2 sqrt(pi) x^{1/4}) sum (-1)^k u_k z^{-k}`, `z = 2/3 x^{3/2}`.
fn asymptotic(x: f64) -> (f64, f64) {
    let z = 2.0 / 3.0 * x.powf(1.5);
    let pre = (-z).exp() / (2.0 * PI.sqrt());
    let (mut s, mut sp) = (1.0, 1.0);
    let mut u = 1.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        zk *= -z;
        let term = u / zk;
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        s += term;
        sp += -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    (pre * x.powf(-0.25) * s, -pre * x.powf(0.25) * sp)
}

/// Classical RK4 on `u'' = x u` from the series value at -5 down to `x`.
fn backward_ode(x: f64) -> (f64, f64) {
    let (mut u, mut v) = maclaurin(-SERIES_LIMIT);
    let mut t = -SERIES_LIMIT;
    let span = t - x;
    let steps = (span / ODE_STEP).ceil() as usize;
    let h = -span / steps as f64;
    for _ in 0..steps {
        let k1 = (v, t * u);
        let k2 = (v + 0.5 * h * k1.1, (t + 0.5 * h) * (u + 0.5 * h * k1.0));
        let k3 = (v + 0.5 * h * k2.1, (t + 0.5 * h) * (u + 0.5 * h * k2.0));
        let k4 = (v + h * k3.1, (t + h) * (u + h * k3.0));
        u += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        v += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        t += h;
    }
    (u, v)
}
