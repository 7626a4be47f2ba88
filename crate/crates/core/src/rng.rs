//! Per-trial random streams and the fixed normal generators used by every sampler.
//!
//! A trial's stream is a ChaCha8 generator keyed by the experiment seed with
//! the trial index as its stream id, so trials never share state and a trial
//! can be regenerated in isolation. Real normals come from the Marsaglia polar
//! method; complex standard normals are `(x + iy)/sqrt(2)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub type TrialRng = ChaCha8Rng;

/// Independent stream for `(seed, trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform on the open interval (-1, 1).
fn symmetric_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Standard normal pair by the Marsaglia polar method.
pub fn normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = symmetric_unit(rng);
        let v = symmetric_unit(rng);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// Buffered source of standard normals; consumes both variates of each polar pair.
pub struct NormalSource<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> NormalSource<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(x) = self.spare.take() {
            return x;
        }
        let (a, b) = normal_pair(&mut self.rng);
        self.spare = Some(b);
        a
    }

    /// Standard complex Gaussian with `E|z|^2 = 1`.
    pub fn next_complex(&mut self) -> Complex64 {
        let x = self.next_normal();
        let y = self.next_normal();
        Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn rng(&mut self) -> &mut R {
        &mut self.rng
    }
}
