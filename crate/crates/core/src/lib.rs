//! Reduced controlled dynamics of an underwater vehicle carrying two internal
//! rotors.
//!
//! The vehicle state lives on se(3)* × T*ℝ² when the centers of buoyancy and
//! gravity coincide, and on se(3)* ⊛ ℝ³ × T*ℝ² when they do not. The crate
//! provides
//!
//! * the vehicle Hamiltonian, its Legendre transform and the hand-written
//!   equations of motion ([`systems`]),
//! * generic Lie-Poisson bracket engines used as an independent oracle
//!   ([`poisson`]),
//! * control lifts and laws ([`control`]),
//! * fixed-step integrators with conservation monitors ([`integrate`]),
//! * the reduced Hamilton-Jacobi residuals and a grid checker ([`hamjac`]).

pub mod algebra;
pub mod control;
pub mod error;
pub mod hamjac;
pub mod integrate;
pub mod poisson;
pub mod sampling;
pub mod systems;

pub use algebra::{Vec2, Vec3};
pub use control::{ControlLaw, ControlLift, LiftSample};
pub use error::{Error, Result};
pub use hamjac::{CandidateOneForm, CandidateValues, GridPoint, HjReport, HjSystem};
pub use integrate::{IntegratorSpec, Method, Trajectory};
pub use poisson::{Gradient, HamiltonianField, ScalarField};
pub use systems::{CasimirKind, RawInertias, ReducedState, StateDerivative, Variant, VehicleParams};
