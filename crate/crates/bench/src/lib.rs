//! Fixed inputs shared by the benchmarks.

use rotorsim_core::hamjac::{CandidateValues, GridPoint, HjSystem};
use rotorsim_core::{ReducedState, Vec2, Vec3, VehicleParams};

pub fn params() -> VehicleParams {
    VehicleParams::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(1.0, 2.0, 3.0), Vec2::new(1.0, 1.0))
        .expect("valid parameters")
}

pub fn gravity_params() -> VehicleParams {
    params().with_gravity(0.5, Vec3::E3).expect("valid gravity")
}

pub fn coincident_state() -> ReducedState {
    ReducedState::coincident(
        Vec3::new(1.0, 0.5, -0.2),
        Vec3::new(0.3, 1.0, 0.0),
        Vec2::ZERO,
        Vec2::new(0.1, -0.1),
    )
    .expect("finite state")
}

pub fn noncoincident_state() -> ReducedState {
    ReducedState::noncoincident(
        Vec3::new(1.0, 0.5, -0.2),
        Vec3::new(0.3, 1.0, 0.0),
        Vec3::new(0.0, 0.6, 0.8),
        Vec2::ZERO,
        Vec2::new(0.1, -0.1),
    )
    .expect("finite state")
}

/// An `n`-point grid along a line in (Π, P) space.
pub fn hj_grid(n: usize) -> Vec<GridPoint> {
    (0..n)
        .map(|index| {
            let s = index as f64 / n as f64;
            GridPoint {
                index,
                pi: Vec3::new(1.0 - s, s, 0.5 * s),
                p: Vec3::new(0.2, -s, 1.0),
                gamma: None,
            }
        })
        .collect()
}

pub fn zero_candidate() -> CandidateValues {
    CandidateValues::zero(HjSystem::Coincident)
}
