//! Control lifts injected additively into the reduced equations of motion,
//! and the control laws that produce them.

use serde::{Deserialize, Serialize};

use crate::algebra::{Vec2, Vec3};
use crate::error::{Error, Result};
use crate::systems::ReducedState;

/// Vertical-lift components `(U_Π, U_P, [U_Γ], U_θ, U_l)`.
///
/// `u_gamma` is only meaningful for variants that carry `Γ`; `None` means the
/// lift has no Γ-component at all.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlLift {
    #[serde(default)]
    pub u_pi: Vec3,
    #[serde(default)]
    pub u_p: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_gamma: Option<Vec3>,
    #[serde(default)]
    pub u_theta: Vec2,
    #[serde(default)]
    pub u_l: Vec2,
}

impl ControlLift {
    pub const fn zero() -> Self {
        ControlLift {
            u_pi: Vec3::ZERO,
            u_p: Vec3::ZERO,
            u_gamma: None,
            u_theta: Vec2::ZERO,
            u_l: Vec2::ZERO,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u_pi.is_finite()
            && self.u_p.is_finite()
            && self.u_gamma.is_none_or(Vec3::is_finite)
            && self.u_theta.is_finite()
            && self.u_l.is_finite()
    }

    /// True when the lift acts on the coalgebra part `(Π, P, Γ)`. Such lifts
    /// move the state off its coadjoint orbit.
    pub fn acts_on_coalgebra(&self) -> bool {
        self.u_pi != Vec3::ZERO
            || self.u_p != Vec3::ZERO
            || self.u_gamma.is_some_and(|g| g != Vec3::ZERO)
    }

    fn lerp(&self, other: &ControlLift, w: f64) -> ControlLift {
        let mix3 = |a: Vec3, b: Vec3| a + (b - a) * w;
        let mix2 = |a: Vec2, b: Vec2| a + (b - a) * w;
        let u_gamma = match (self.u_gamma, other.u_gamma) {
            (None, None) => None,
            (a, b) => Some(mix3(a.unwrap_or_default(), b.unwrap_or_default())),
        };
        ControlLift {
            u_pi: mix3(self.u_pi, other.u_pi),
            u_p: mix3(self.u_p, other.u_p),
            u_gamma,
            u_theta: mix2(self.u_theta, other.u_theta),
            u_l: mix2(self.u_l, other.u_l),
        }
    }
}

/// One knot of a tabulated control law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSample {
    pub t: f64,
    pub lift: ControlLift,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControlLaw {
    #[default]
    Zero,
    Constant { lift: ControlLift },
    /// Rotor-momentum feedback `U_l = −gain ⊙ (l − l_ref)`; all other lift
    /// components vanish.
    RotorFeedback { gain: Vec2, l_ref: Vec2 },
    /// Piecewise-linear interpolation between knots, held constant outside
    /// the tabulated time range.
    TableLookup { samples: Vec<LiftSample> },
}

impl ControlLaw {
    /// Checks the law's own invariants (finite entries, non-empty and
    /// strictly increasing table).
    pub fn validate(&self) -> Result<()> {
        match self {
            ControlLaw::Zero => Ok(()),
            ControlLaw::Constant { lift } => {
                if lift.is_finite() {
                    Ok(())
                } else {
                    Err(Error::non_finite("constant control lift"))
                }
            }
            ControlLaw::RotorFeedback { gain, l_ref } => {
                if gain.is_finite() && l_ref.is_finite() {
                    Ok(())
                } else {
                    Err(Error::non_finite("rotor feedback gains"))
                }
            }
            ControlLaw::TableLookup { samples } => {
                if samples.is_empty() {
                    return Err(Error::InvalidInput("control table is empty".into()));
                }
                if samples.iter().any(|s| !s.t.is_finite() || !s.lift.is_finite()) {
                    return Err(Error::non_finite("control table"));
                }
                if samples.windows(2).any(|w| w[1].t <= w[0].t) {
                    return Err(Error::InvalidInput(
                        "control table times must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Whether some lift produced by this law may act on `(Π, P, Γ)`.
    pub fn acts_on_coalgebra(&self) -> bool {
        match self {
            ControlLaw::Zero | ControlLaw::RotorFeedback { .. } => false,
            ControlLaw::Constant { lift } => lift.acts_on_coalgebra(),
            ControlLaw::TableLookup { samples } => samples.iter().any(|s| s.lift.acts_on_coalgebra()),
        }
    }

    /// Whether every lift produced by this law is zero, so the flow is the
    /// free Hamiltonian one.
    pub fn is_identically_zero(&self) -> bool {
        match self {
            ControlLaw::Zero => true,
            ControlLaw::Constant { lift } => lift_is_zero(lift),
            ControlLaw::RotorFeedback { gain, .. } => *gain == Vec2::ZERO,
            ControlLaw::TableLookup { samples } => samples.iter().all(|s| lift_is_zero(&s.lift)),
        }
    }
}

fn lift_is_zero(lift: &ControlLift) -> bool {
    !lift.acts_on_coalgebra() && lift.u_theta == Vec2::ZERO && lift.u_l == Vec2::ZERO
}

fn check_lift_variant(lift: &ControlLift, state: &ReducedState) -> Result<()> {
    let variant = state.variant();
    if lift.u_gamma.is_some() && !variant.has_gravity() {
        return Err(Error::mismatch("a variant carrying Gamma", variant));
    }
    if !variant.has_rotors() && (lift.u_theta != Vec2::ZERO || lift.u_l != Vec2::ZERO) {
        return Err(Error::mismatch("a variant with rotors", variant));
    }
    Ok(())
}

/// Evaluates the control law at time `t` and state `state`.
pub fn evaluate(law: &ControlLaw, t: f64, state: &ReducedState) -> Result<ControlLift> {
    let lift = match law {
        ControlLaw::Zero => ControlLift::zero(),
        ControlLaw::Constant { lift } => *lift,
        ControlLaw::RotorFeedback { gain, l_ref } => {
            if !state.variant().has_rotors() {
                return Err(Error::mismatch("a variant with rotors", state.variant()));
            }
            ControlLift {
                u_l: -gain.hadamard(state.l() - *l_ref),
                ..ControlLift::zero()
            }
        }
        ControlLaw::TableLookup { samples } => interpolate(samples, t)?,
    };
    check_lift_variant(&lift, state)?;
    Ok(lift)
}

fn interpolate(samples: &[LiftSample], t: f64) -> Result<ControlLift> {
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InvalidInput("control table is empty".into())),
    };
    if t <= first.t {
        return Ok(first.lift);
    }
    if t >= last.t {
        return Ok(last.lift);
    }
    // first knot strictly after t; exists because t < last.t
    let hi = samples.partition_point(|s| s.t <= t);
    let (a, b) = (&samples[hi - 1], &samples[hi]);
    let w = (t - a.t) / (b.t - a.t);
    Ok(a.lift.lerp(&b.lift, w))
}
