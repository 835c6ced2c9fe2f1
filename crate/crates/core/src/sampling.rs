//! Seeded random parameters and states, and the batch comparison of the
//! hand-written equations of motion against the bracket engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Vec2, Vec3};
use crate::control::ControlLift;
use crate::error::Result;
use crate::poisson::{ham_vector_field, HamiltonianField, NumericGradient};
use crate::systems::{self, ReducedState, Variant, VehicleParams, STATE_DIM};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vec3(rng: &mut impl Rng, lo: f64, hi: f64) -> Vec3 {
    Vec3::new(rng.random_range(lo..hi), rng.random_range(lo..hi), rng.random_range(lo..hi))
}

fn vec2(rng: &mut impl Rng, lo: f64, hi: f64) -> Vec2 {
    Vec2::new(rng.random_range(lo..hi), rng.random_range(lo..hi))
}

/// Uniform direction on the unit sphere.
pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = vec3(rng, -1.0, 1.0);
        let n2 = v.norm_squared();
        if n2 > 1e-4 && n2 <= 1.0 {
            return v * (1.0 / n2.sqrt());
        }
    }
}

/// Ī, m, J in `[0.5, 3)`, mgh in `[0, 2)` and a random unit χ.
pub fn random_params(rng: &mut impl Rng) -> VehicleParams {
    let ibar = vec3(rng, 0.5, 3.0);
    let mass = vec3(rng, 0.5, 3.0);
    let jrot = vec2(rng, 0.5, 3.0);
    let mgh = rng.random_range(0.0..2.0);
    let chi = random_unit(rng);
    VehicleParams::new(ibar, mass, jrot)
        .and_then(|p| p.with_gravity(mgh, chi))
        .expect("sampled parameters are in range")
}

/// Every active component uniform in `[−1, 1)`.
pub fn random_state(rng: &mut impl Rng, variant: Variant) -> ReducedState {
    let c: [f64; STATE_DIM] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    let c = std::array::from_fn(|i| if variant.slot_active(i) { c[i] } else { 0.0 });
    ReducedState::from_components(variant, c).expect("finite sample")
}

/// `‖a − b‖∞ / max(‖a‖∞, ‖b‖∞)`, and 0 when both vanish.
pub fn relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    let inf = |x: &[f64]| x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = inf(a).max(inf(b));
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientMode {
    Analytic,
    FiniteDifference,
}

impl GradientMode {
    /// Acceptance threshold on the maximum relative deviation.
    pub fn threshold(self) -> f64 {
        match self {
            GradientMode::Analytic => 1e-12,
            GradientMode::FiniteDifference => 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub variant: Variant,
    pub mode: GradientMode,
    pub samples: usize,
    pub seed: u64,
    pub max_relative_deviation: f64,
    pub worst_sample: usize,
    pub threshold: f64,
    pub passed: bool,
}

/// Draws `n` (params, state) pairs from `seed` and compares the hand-written
/// vector field against the bracket engine at each.
///
/// Sample `k` uses its own stream seeded from `(seed, k)`, so the result does
/// not depend on how the batch is scheduled.
pub fn oracle_batch(variant: Variant, n: usize, seed: u64, mode: GradientMode) -> Result<OracleReport> {
    let devs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut r = rng(seed);
            r.set_stream(k as u64);
            let params = random_params(&mut r);
            let state = random_state(&mut r, variant);
            let eom = systems::vector_field(&state, &params, &ControlLift::zero())?;
            let h = HamiltonianField::new(params, variant);
            let bracket = match mode {
                GradientMode::Analytic => ham_vector_field(&h, &state)?,
                GradientMode::FiniteDifference => ham_vector_field(&NumericGradient(h), &state)?,
            };
            Ok(relative_deviation(&eom.components(), &bracket.components()))
        })
        .collect::<Result<_>>()?;

    let (mut worst, mut worst_sample) = (0.0f64, 0usize);
    for (k, &d) in devs.iter().enumerate() {
        if d > worst {
            worst = d;
            worst_sample = k;
        }
    }
    let threshold = mode.threshold();
    Ok(OracleReport {
        variant,
        mode,
        samples: n,
        seed,
        max_relative_deviation: worst,
        worst_sample,
        threshold,
        passed: worst <= threshold,
    })
}
