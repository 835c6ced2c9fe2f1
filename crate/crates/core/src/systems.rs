//! Vehicle-rotor models: parameters, Hamiltonians, Legendre transforms,
//! the reduced equations of motion and their Casimirs.
//!
//! Four model variants share one state layout. The coincident model lives on
//! se(3)* × ℝ² × ℝ² with coordinates `(Π, P, θ, l)`; the non-coincident model
//! adds the advected gravity direction `Γ`. The Kirchhoff variants drop the
//! rotors and are the rotor-free limits of the two vehicle models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{coad_se3, coad_se3r, Vec2, Vec3};
use crate::control::ControlLift;
use crate::error::{Error, Result};
use crate::poisson::Gradient;

/// Smallest admissible inertia, mass or rotor inertia.
pub const MIN_PARAM: f64 = 1e-12;

/// Tolerance on `|χ| = 1` when the gravity moment is non-zero.
pub const CHI_UNIT_TOL: f64 = 1e-12;

/// Number of scalar slots in the flattened state `(Π, P, Γ, θ, l)`.
pub const STATE_DIM: usize = 13;

/// Offsets of each block inside the flattened state.
pub mod slot {
    pub const PI: usize = 0;
    pub const P: usize = 3;
    pub const GAMMA: usize = 6;
    pub const THETA: usize = 9;
    pub const L: usize = 11;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "coincident")]
    Coincident,
    #[serde(rename = "noncoincident")]
    NonCoincident,
    #[serde(rename = "kirchhoff-coincident")]
    KirchhoffCoincident,
    #[serde(rename = "kirchhoff-noncoincident")]
    KirchhoffNonCoincident,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Coincident,
        Variant::NonCoincident,
        Variant::KirchhoffCoincident,
        Variant::KirchhoffNonCoincident,
    ];

    /// Whether the advected direction `Γ` is part of the state.
    pub fn has_gravity(self) -> bool {
        matches!(self, Variant::NonCoincident | Variant::KirchhoffNonCoincident)
    }

    /// Whether the rotor variables `(θ, l)` are part of the state.
    pub fn has_rotors(self) -> bool {
        matches!(self, Variant::Coincident | Variant::NonCoincident)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Coincident => "coincident",
            Variant::NonCoincident => "noncoincident",
            Variant::KirchhoffCoincident => "kirchhoff-coincident",
            Variant::KirchhoffNonCoincident => "kirchhoff-noncoincident",
        }
    }

    /// The rotor-free model obtained by removing the internal rotors.
    pub fn kirchhoff_limit(self) -> Variant {
        if self.has_gravity() {
            Variant::KirchhoffNonCoincident
        } else {
            Variant::KirchhoffCoincident
        }
    }

    /// Whether flattened slot `i` carries a state coordinate in this variant.
    pub fn slot_active(self, i: usize) -> bool {
        match i {
            0..=5 => true,
            6..=8 => self.has_gravity(),
            9..=12 => self.has_rotors(),
            _ => false,
        }
    }

    pub fn active_slots(self) -> impl Iterator<Item = usize> {
        (0..STATE_DIM).filter(move |&i| self.slot_active(i))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown model variant `{s}`")))
    }
}

/// Validated physical parameters of the vehicle and its rotors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VehicleParams {
    ibar: Vec3,
    mass: Vec3,
    jrot: Vec2,
    mgh: f64,
    chi: Vec3,
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParam {
            field,
            value,
            reason: "must be finite",
        });
    }
    if value <= MIN_PARAM {
        return Err(Error::InvalidParam {
            field,
            value,
            reason: "must be strictly positive",
        });
    }
    Ok(())
}

impl VehicleParams {
    /// Parameters without a gravity offset (`mgh = 0`, `χ = e₃`).
    pub fn new(ibar: Vec3, mass: Vec3, jrot: Vec2) -> Result<Self> {
        for (field, value) in [("ibar[0]", ibar.x), ("ibar[1]", ibar.y), ("ibar[2]", ibar.z)] {
            check_positive(field, value)?;
        }
        for (field, value) in [("mass[0]", mass.x), ("mass[1]", mass.y), ("mass[2]", mass.z)] {
            check_positive(field, value)?;
        }
        for (field, value) in [("jrot[0]", jrot.a), ("jrot[1]", jrot.b)] {
            check_positive(field, value)?;
        }
        Ok(VehicleParams {
            ibar,
            mass,
            jrot,
            mgh: 0.0,
            chi: Vec3::E3,
        })
    }

    /// Adds the buoyancy-gravity moment `mgh` along the unit direction `chi`.
    pub fn with_gravity(mut self, mgh: f64, chi: Vec3) -> Result<Self> {
        if !mgh.is_finite() {
            return Err(Error::InvalidParam {
                field: "mgh",
                value: mgh,
                reason: "must be finite",
            });
        }
        for (field, value) in [("chi[0]", chi.x), ("chi[1]", chi.y), ("chi[2]", chi.z)] {
            if !value.is_finite() {
                return Err(Error::InvalidParam {
                    field,
                    value,
                    reason: "must be finite",
                });
            }
        }
        if mgh != 0.0 && (chi.norm() - 1.0).abs() > CHI_UNIT_TOL {
            return Err(Error::InvalidParam {
                field: "chi",
                value: chi.norm(),
                reason: "must be a unit vector",
            });
        }
        self.mgh = mgh;
        self.chi = chi;
        Ok(self)
    }

    pub fn ibar(&self) -> Vec3 {
        self.ibar
    }

    pub fn mass(&self) -> Vec3 {
        self.mass
    }

    pub fn jrot(&self) -> Vec2 {
        self.jrot
    }

    pub fn mgh(&self) -> f64 {
        self.mgh
    }

    pub fn chi(&self) -> Vec3 {
        self.chi
    }

    /// The Γ-gradient of the potential, `mgh·χ`.
    pub fn gravity_vector(&self) -> Vec3 {
        self.chi * self.mgh
    }
}

/// Body-fluid inertias and the per-axis rotor inertias before they are
/// folded into effective inertias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawInertias {
    /// Body-fluid principal inertias `(I₁, I₂, I₃)`.
    pub inertia: Vec3,
    /// `rotor[i]` holds the inertia of rotor `i+1` about the three principal axes.
    pub rotor: [Vec3; 2],
}

/// Folds the rotors into the body inertias:
/// `Īᵢ = Iᵢ + J₁ᵢ + J₂ᵢ − Jᵢᵢ` for `i = 1, 2` and `Ī₃ = I₃ + J₁₃ + J₂₃`.
pub fn derive_effective_inertia(raw: &RawInertias) -> Result<Vec3> {
    let [j1, j2] = raw.rotor;
    for (field, value) in [
        ("inertia[0]", raw.inertia.x),
        ("inertia[1]", raw.inertia.y),
        ("inertia[2]", raw.inertia.z),
    ] {
        check_positive(field, value)?;
    }
    for (field, value) in [
        ("rotor[0][0]", j1.x),
        ("rotor[0][1]", j1.y),
        ("rotor[0][2]", j1.z),
        ("rotor[1][0]", j2.x),
        ("rotor[1][1]", j2.y),
        ("rotor[1][2]", j2.z),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidParam {
                field,
                value,
                reason: "must be finite and non-negative",
            });
        }
    }
    let i = raw.inertia;
    // rotor i spins about axis i, so only the other rotor adds to that axis
    let ibar = Vec3::new(i.x + j2.x, i.y + j1.y, i.z + j1.z + j2.z);
    for (field, value) in [("ibar[0]", ibar.x), ("ibar[1]", ibar.y), ("ibar[2]", ibar.z)] {
        check_positive(field, value)?;
    }
    Ok(ibar)
}

/// A point of the reduced phase space. Blocks absent from the variant are
/// held at zero and cannot be set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedState {
    variant: Variant,
    pi: Vec3,
    p: Vec3,
    gamma: Vec3,
    theta: Vec2,
    l: Vec2,
}

impl ReducedState {
    /// General constructor; the optional blocks must be present exactly when
    /// the variant carries them.
    pub fn new(
        variant: Variant,
        pi: Vec3,
        p: Vec3,
        gamma: Option<Vec3>,
        theta: Option<Vec2>,
        l: Option<Vec2>,
    ) -> Result<Self> {
        if gamma.is_some() != variant.has_gravity() {
            return Err(Error::InvalidInput(format!(
                "variant {variant} {} a gravity direction Gamma",
                if variant.has_gravity() { "requires" } else { "does not carry" }
            )));
        }
        if theta.is_some() != variant.has_rotors() || l.is_some() != variant.has_rotors() {
            return Err(Error::InvalidInput(format!(
                "variant {variant} {} rotor variables (theta, l)",
                if variant.has_rotors() { "requires" } else { "does not carry" }
            )));
        }
        let state = ReducedState {
            variant,
            pi,
            p,
            gamma: gamma.unwrap_or_default(),
            theta: theta.unwrap_or_default(),
            l: l.unwrap_or_default(),
        };
        if !state.is_finite() {
            return Err(Error::non_finite("reduced state"));
        }
        Ok(state)
    }

    pub fn coincident(pi: Vec3, p: Vec3, theta: Vec2, l: Vec2) -> Result<Self> {
        Self::new(Variant::Coincident, pi, p, None, Some(theta), Some(l))
    }

    pub fn noncoincident(pi: Vec3, p: Vec3, gamma: Vec3, theta: Vec2, l: Vec2) -> Result<Self> {
        Self::new(Variant::NonCoincident, pi, p, Some(gamma), Some(theta), Some(l))
    }

    pub fn kirchhoff_coincident(pi: Vec3, p: Vec3) -> Result<Self> {
        Self::new(Variant::KirchhoffCoincident, pi, p, None, None, None)
    }

    pub fn kirchhoff_noncoincident(pi: Vec3, p: Vec3, gamma: Vec3) -> Result<Self> {
        Self::new(Variant::KirchhoffNonCoincident, pi, p, Some(gamma), None, None)
    }

    /// The all-zero state of a variant.
    pub fn zero(variant: Variant) -> Self {
        ReducedState {
            variant,
            pi: Vec3::ZERO,
            p: Vec3::ZERO,
            gamma: Vec3::ZERO,
            theta: Vec2::ZERO,
            l: Vec2::ZERO,
        }
    }

    /// Builds a state from its flattened coordinates. Inactive slots must be zero.
    pub fn from_components(variant: Variant, c: [f64; STATE_DIM]) -> Result<Self> {
        if let Some(i) = (0..STATE_DIM).find(|&i| !variant.slot_active(i) && c[i] != 0.0) {
            return Err(Error::InvalidInput(format!(
                "slot {i} is not part of the {variant} state"
            )));
        }
        let state = Self::from_components_unchecked(variant, c);
        if !state.is_finite() {
            return Err(Error::non_finite("reduced state"));
        }
        Ok(state)
    }

    pub(crate) fn from_components_unchecked(variant: Variant, c: [f64; STATE_DIM]) -> Self {
        let v3 = |o: usize| Vec3::new(c[o], c[o + 1], c[o + 2]);
        let v2 = |o: usize| Vec2::new(c[o], c[o + 1]);
        let mut state = ReducedState {
            variant,
            pi: v3(slot::PI),
            p: v3(slot::P),
            gamma: v3(slot::GAMMA),
            theta: v2(slot::THETA),
            l: v2(slot::L),
        };
        if !variant.has_gravity() {
            state.gamma = Vec3::ZERO;
        }
        if !variant.has_rotors() {
            state.theta = Vec2::ZERO;
            state.l = Vec2::ZERO;
        }
        state
    }

    pub fn components(&self) -> [f64; STATE_DIM] {
        let mut c = [0.0; STATE_DIM];
        c[slot::PI..slot::PI + 3].copy_from_slice(&self.pi.to_array());
        c[slot::P..slot::P + 3].copy_from_slice(&self.p.to_array());
        c[slot::GAMMA..slot::GAMMA + 3].copy_from_slice(&self.gamma.to_array());
        c[slot::THETA..slot::THETA + 2].copy_from_slice(&self.theta.to_array());
        c[slot::L..slot::L + 2].copy_from_slice(&self.l.to_array());
        c
    }

    /// Returns a copy with flattened slot `i` shifted by `delta`. Inactive
    /// slots are left untouched.
    pub fn perturbed(&self, i: usize, delta: f64) -> Self {
        let mut c = self.components();
        if self.variant.slot_active(i) {
            c[i] += delta;
        }
        Self::from_components_unchecked(self.variant, c)
    }

    /// `self + h·d` on every active slot.
    pub fn advanced(&self, d: &StateDerivative, h: f64) -> Self {
        let mut c = self.components();
        let dc = d.components();
        for i in self.variant.active_slots() {
            c[i] += h * dc[i];
        }
        Self::from_components_unchecked(self.variant, c)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn pi(&self) -> Vec3 {
        self.pi
    }

    pub fn p(&self) -> Vec3 {
        self.p
    }

    /// Advected gravity direction; zero for variants without it.
    pub fn gamma(&self) -> Vec3 {
        self.gamma
    }

    /// Rotor angles, unwrapped; zero for rotor-free variants.
    pub fn theta(&self) -> Vec2 {
        self.theta
    }

    /// Rotor momenta; zero for rotor-free variants.
    pub fn l(&self) -> Vec2 {
        self.l
    }

    pub fn is_finite(&self) -> bool {
        self.pi.is_finite()
            && self.p.is_finite()
            && self.gamma.is_finite()
            && self.theta.is_finite()
            && self.l.is_finite()
    }

    /// Drops the rotor variables, giving the state of the Kirchhoff limit.
    pub fn without_rotors(&self) -> Self {
        let mut s = *self;
        s.variant = self.variant.kirchhoff_limit();
        s.theta = Vec2::ZERO;
        s.l = Vec2::ZERO;
        s
    }
}

/// Time derivative of a reduced state, in the same layout.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StateDerivative {
    pub pi: Vec3,
    pub p: Vec3,
    pub gamma: Vec3,
    pub theta: Vec2,
    pub l: Vec2,
}

impl StateDerivative {
    pub fn components(&self) -> [f64; STATE_DIM] {
        let mut c = [0.0; STATE_DIM];
        c[slot::PI..slot::PI + 3].copy_from_slice(&self.pi.to_array());
        c[slot::P..slot::P + 3].copy_from_slice(&self.p.to_array());
        c[slot::GAMMA..slot::GAMMA + 3].copy_from_slice(&self.gamma.to_array());
        c[slot::THETA..slot::THETA + 2].copy_from_slice(&self.theta.to_array());
        c[slot::L..slot::L + 2].copy_from_slice(&self.l.to_array());
        c
    }

    pub fn from_components(c: [f64; STATE_DIM]) -> Self {
        let v3 = |o: usize| Vec3::new(c[o], c[o + 1], c[o + 2]);
        let v2 = |o: usize| Vec2::new(c[o], c[o + 1]);
        StateDerivative {
            pi: v3(slot::PI),
            p: v3(slot::P),
            gamma: v3(slot::GAMMA),
            theta: v2(slot::THETA),
            l: v2(slot::L),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Body velocities and rotor rates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct VelocityState {
    pub omega: Vec3,
    pub v: Vec3,
    pub thetadot: Vec2,
}

/// Conjugate momenta returned by the forward Legendre transform.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Momenta {
    pub pi: Vec3,
    pub p: Vec3,
    pub l: Vec2,
}

/// Momenta to velocities. For the rotor models
/// `Ωᵢ = (Πᵢ − lᵢ)/Īᵢ` (i = 1, 2), `Ω₃ = Π₃/Ī₃`, `v = M⁻¹P`,
/// `θ̇ᵢ = lᵢ/Jᵢ − Ωᵢ`. The Kirchhoff variants carry `l = 0`.
pub fn legendre_inverse(state: &ReducedState, params: &VehicleParams) -> VelocityState {
    let (pi, p, l) = (state.pi, state.p, state.l);
    let ibar = params.ibar;
    let omega = Vec3::new((pi.x - l.a) / ibar.x, (pi.y - l.b) / ibar.y, pi.z / ibar.z);
    let v = Vec3::new(p.x / params.mass.x, p.y / params.mass.y, p.z / params.mass.z);
    // with l = 0 this is θ̇ = −Ω, which the forward map sends back to l = 0
    let thetadot = Vec2::new(l.a / params.jrot.a - omega.x, l.b / params.jrot.b - omega.y);
    VelocityState { omega, v, thetadot }
}

/// Velocities to momenta, the fiber derivative of the vehicle-rotor
/// Lagrangian: `Πᵢ = ĪᵢΩᵢ + Jᵢ(Ωᵢ + θ̇ᵢ)`, `Π₃ = Ī₃Ω₃`, `P = Mv`,
/// `lᵢ = Jᵢ(Ωᵢ + θ̇ᵢ)`.
pub fn legendre_forward(vel: &VelocityState, params: &VehicleParams) -> Momenta {
    let VelocityState { omega, v, thetadot } = *vel;
    let ibar = params.ibar;
    let j = params.jrot;
    let l = Vec2::new(j.a * (omega.x + thetadot.a), j.b * (omega.y + thetadot.b));
    Momenta {
        pi: Vec3::new(ibar.x * omega.x + l.a, ibar.y * omega.y + l.b, ibar.z * omega.z),
        p: params.mass.hadamard(v),
        l,
    }
}

/// Total energy of the reduced state:
/// `½[Σᵢ₌₁,₂ (Πᵢ−lᵢ)²/Īᵢ + Π₃²/Ī₃ + Σₖ Pₖ²/mₖ + Σᵢ lᵢ²/Jᵢ] (+ mgh Γ·χ)`.
pub fn hamiltonian(state: &ReducedState, params: &VehicleParams) -> f64 {
    let (pi, p, l) = (state.pi, state.p, state.l);
    let ibar = params.ibar;
    let m = params.mass;
    let mut twice = (pi.x - l.a).powi(2) / ibar.x
        + (pi.y - l.b).powi(2) / ibar.y
        + pi.z * pi.z / ibar.z
        + p.x * p.x / m.x
        + p.y * p.y / m.y
        + p.z * p.z / m.z;
    if state.variant.has_rotors() {
        twice += l.a * l.a / params.jrot.a + l.b * l.b / params.jrot.b;
    }
    let mut h = 0.5 * twice;
    if state.variant.has_gravity() {
        h += params.mgh * state.gamma.dot(params.chi);
    }
    h
}

/// Analytic gradient of the Hamiltonian: `∇_Π h = Ω`, `∇_P h = v`,
/// `∇_Γ h = mgh·χ`, `∂h/∂θ = 0`, `∂h/∂lᵢ = −(Πᵢ−lᵢ)/Īᵢ + lᵢ/Jᵢ`.
pub fn grad_hamiltonian(state: &ReducedState, params: &VehicleParams) -> Gradient {
    let vel = legendre_inverse(state, params);
    let d_l = if state.variant.has_rotors() {
        let l = state.l;
        Vec2::new(
            -(state.pi.x - l.a) / params.ibar.x + l.a / params.jrot.a,
            -(state.pi.y - l.b) / params.ibar.y + l.b / params.jrot.b,
        )
    } else {
        Vec2::ZERO
    };
    Gradient {
        d_pi: vel.omega,
        d_p: vel.v,
        d_gamma: if state.variant.has_gravity() {
            params.gravity_vector()
        } else {
            Vec3::ZERO
        },
        d_theta: Vec2::ZERO,
        d_l,
    }
}

fn expect_variant(state: &ReducedState, expected: Variant) -> Result<()> {
    if state.variant != expected {
        return Err(Error::mismatch(expected.name(), state.variant));
    }
    Ok(())
}

fn rotor_rates(state: &ReducedState, params: &VehicleParams) -> Vec2 {
    let (pi, l) = (state.pi, state.l);
    Vec2::new(
        -(pi.x - l.a) / params.ibar.x + l.a / params.jrot.a,
        -(pi.y - l.b) / params.ibar.y + l.b / params.jrot.b,
    )
}

/// Controlled reduced equations of motion, coincident centers:
///
/// ```text
/// Π̇ = Π×Ω + P×v + U_Π
/// Ṗ = P×Ω + U_P
/// θ̇ = (−(Π₁−l₁)/Ī₁ + l₁/J₁, −(Π₂−l₂)/Ī₂ + l₂/J₂) + U_θ
/// l̇ = U_l
/// ```
pub fn eom_coincident(
    state: &ReducedState,
    params: &VehicleParams,
    lift: &ControlLift,
) -> Result<StateDerivative> {
    expect_variant(state, Variant::Coincident)?;
    if lift.u_gamma.is_some() {
        return Err(Error::mismatch(
            "a lift without U_Gamma",
            Variant::Coincident,
        ));
    }
    let vel = legendre_inverse(state, params);
    let (dpi, dp) = coad_se3(vel.omega, vel.v, state.pi, state.p);
    Ok(StateDerivative {
        pi: dpi + lift.u_pi,
        p: dp + lift.u_p,
        gamma: Vec3::ZERO,
        theta: rotor_rates(state, params) + lift.u_theta,
        l: lift.u_l,
    })
}

/// Controlled reduced equations of motion, non-coincident centers. As the
/// coincident system with the gravity torque `mgh Γ×χ` in `Π̇` and
/// `Γ̇ = Γ×Ω + U_Γ`.
pub fn eom_noncoincident(
    state: &ReducedState,
    params: &VehicleParams,
    lift: &ControlLift,
) -> Result<StateDerivative> {
    expect_variant(state, Variant::NonCoincident)?;
    let vel = legendre_inverse(state, params);
    let (dpi, dp, dgamma) = coad_se3r(
        vel.omega,
        vel.v,
        params.gravity_vector(),
        state.pi,
        state.p,
        state.gamma,
    );
    Ok(StateDerivative {
        pi: dpi + lift.u_pi,
        p: dp + lift.u_p,
        gamma: dgamma + lift.u_gamma.unwrap_or_default(),
        theta: rotor_rates(state, params) + lift.u_theta,
        l: lift.u_l,
    })
}

/// Rotor-free Kirchhoff equations (heavy-top type on se(3)*, or on
/// se(3)* ⊛ ℝ³ with the gravity torque).
pub fn eom_kirchhoff(state: &ReducedState, params: &VehicleParams) -> Result<StateDerivative> {
    let vel = legendre_inverse(state, params);
    match state.variant {
        Variant::KirchhoffCoincident => {
            let (dpi, dp) = coad_se3(vel.omega, vel.v, state.pi, state.p);
            Ok(StateDerivative {
                pi: dpi,
                p: dp,
                ..Default::default()
            })
        }
        Variant::KirchhoffNonCoincident => {
            let (dpi, dp, dgamma) = coad_se3r(
                vel.omega,
                vel.v,
                params.gravity_vector(),
                state.pi,
                state.p,
                state.gamma,
            );
            Ok(StateDerivative {
                pi: dpi,
                p: dp,
                gamma: dgamma,
                ..Default::default()
            })
        }
        other => Err(Error::mismatch("a kirchhoff variant", other)),
    }
}

/// Dispatches to the equations of motion of the state's variant. Rotor-free
/// variants accept lifts on `(Π, P, Γ)` only.
pub fn vector_field(
    state: &ReducedState,
    params: &VehicleParams,
    lift: &ControlLift,
) -> Result<StateDerivative> {
    match state.variant {
        Variant::Coincident => eom_coincident(state, params, lift),
        Variant::NonCoincident => eom_noncoincident(state, params, lift),
        Variant::KirchhoffCoincident | Variant::KirchhoffNonCoincident => {
            if lift.u_theta != Vec2::ZERO || lift.u_l != Vec2::ZERO {
                return Err(Error::mismatch("a variant with rotors", state.variant));
            }
            if lift.u_gamma.is_some() && !state.variant.has_gravity() {
                return Err(Error::mismatch("a lift without U_Gamma", state.variant));
            }
            let mut d = eom_kirchhoff(state, params)?;
            d.pi += lift.u_pi;
            d.p += lift.u_p;
            d.gamma += lift.u_gamma.unwrap_or_default();
            Ok(d)
        }
    }
}

/// The Casimir functions of the two coalgebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CasimirKind {
    /// `|P|²`
    PP,
    /// `Π·P`, a Casimir of se(3)* only.
    PiP,
    /// `|Γ|²`
    GG,
    /// `P·Γ`
    PG,
}

impl CasimirKind {
    pub const ALL: [CasimirKind; 4] = [CasimirKind::PP, CasimirKind::PiP, CasimirKind::GG, CasimirKind::PG];

    pub fn symbol(self) -> &'static str {
        match self {
            CasimirKind::PP => "|P|²",
            CasimirKind::PiP => "Π·P",
            CasimirKind::GG => "|Γ|²",
            CasimirKind::PG => "P·Γ",
        }
    }

    /// CSV column name.
    pub fn column(self) -> &'static str {
        match self {
            CasimirKind::PP => "C_PP",
            CasimirKind::PiP => "C_PiP",
            CasimirKind::GG => "C_GG",
            CasimirKind::PG => "C_PG",
        }
    }

    /// The Casimirs of the coalgebra underlying `variant`.
    pub fn for_variant(variant: Variant) -> &'static [CasimirKind] {
        if variant.has_gravity() {
            &[CasimirKind::PP, CasimirKind::GG, CasimirKind::PG]
        } else {
            &[CasimirKind::PP, CasimirKind::PiP]
        }
    }

    pub fn value(self, state: &ReducedState) -> f64 {
        match self {
            CasimirKind::PP => state.p.dot(state.p),
            CasimirKind::PiP => state.pi.dot(state.p),
            CasimirKind::GG => state.gamma.dot(state.gamma),
            CasimirKind::PG => state.p.dot(state.gamma),
        }
    }

    pub fn gradient(self, state: &ReducedState) -> Gradient {
        let mut g = Gradient::default();
        match self {
            CasimirKind::PP => g.d_p = state.p * 2.0,
            CasimirKind::PiP => {
                g.d_pi = state.p;
                g.d_p = state.pi;
            }
            CasimirKind::GG => g.d_gamma = state.gamma * 2.0,
            CasimirKind::PG => {
                g.d_p = state.gamma;
                g.d_gamma = state.p;
            }
        }
        g
    }
}

/// Casimir values of the state's coalgebra, in the fixed order of
/// [`CasimirKind::for_variant`].
pub fn casimirs(state: &ReducedState) -> Vec<(CasimirKind, f64)> {
    CasimirKind::for_variant(state.variant)
        .iter()
        .map(|&k| (k, k.value(state)))
        .collect()
}
