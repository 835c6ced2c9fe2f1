//! Poisson bracket engines on the reduced phase space and the Hamiltonian
//! vector field generated from them.
//!
//! The bracket on se(3)* × T*ℝ² is the heavy-top Lie-Poisson bracket plus
//! the canonical bracket on the rotor variables:
//!
//! ```text
//! {F,K} = −Π·(∇_ΠF × ∇_ΠK) − P·(∇_ΠF × ∇_PK − ∇_ΠK × ∇_PF)
//!         + Σᵢ (∂F/∂θᵢ ∂K/∂lᵢ − ∂K/∂θᵢ ∂F/∂lᵢ)
//! ```
//!
//! On se(3)* ⊛ ℝ³ × T*ℝ² the term `−Γ·(∇_ΠF × ∇_ΓK − ∇_ΠK × ∇_ΓF)` is added.
//! Everything here works from gradients, so the engine is independent of the
//! hand-written equations of motion in [`crate::systems`] and serves as their
//! oracle.

use serde::Serialize;

use crate::algebra::{Vec2, Vec3};
use crate::error::{Error, Result};
use crate::systems::{self, slot, ReducedState, StateDerivative, Variant, VehicleParams, STATE_DIM};

/// Relative central-difference step used when a field has no analytic
/// gradient.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Partial derivatives of a scalar field with respect to `(Π, P, Γ, θ, l)`.
/// Blocks that the state variant does not carry are ignored by the brackets.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Gradient {
    pub d_pi: Vec3,
    pub d_p: Vec3,
    pub d_gamma: Vec3,
    pub d_theta: Vec2,
    pub d_l: Vec2,
}

impl Gradient {
    pub fn components(&self) -> [f64; STATE_DIM] {
        systems::StateDerivative {
            pi: self.d_pi,
            p: self.d_p,
            gamma: self.d_gamma,
            theta: self.d_theta,
            l: self.d_l,
        }
        .components()
    }

    pub fn from_components(c: [f64; STATE_DIM]) -> Self {
        let d = StateDerivative::from_components(c);
        Gradient {
            d_pi: d.pi,
            d_p: d.p,
            d_gamma: d.gamma,
            d_theta: d.theta,
            d_l: d.l,
        }
    }

    /// Unit gradient of the coordinate function in flattened slot `i`.
    pub fn unit(i: usize) -> Self {
        let mut c = [0.0; STATE_DIM];
        c[i] = 1.0;
        Self::from_components(c)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// Zeroes the blocks the variant does not carry.
    pub fn restricted_to(&self, variant: Variant) -> Self {
        let mut c = self.components();
        for (i, ci) in c.iter_mut().enumerate() {
            if !variant.slot_active(i) {
                *ci = 0.0;
            }
        }
        Self::from_components(c)
    }

    fn scaled_sum(&self, a: f64, other: &Gradient, b: f64) -> Gradient {
        let x = self.components();
        let y = other.components();
        Self::from_components(std::array::from_fn(|i| a * x[i] + b * y[i]))
    }
}

/// A smooth function on the reduced phase space.
pub trait ScalarField: Sync {
    fn value(&self, state: &ReducedState) -> f64;

    /// Analytic gradient, when the field knows it. Fields returning `None`
    /// are differentiated numerically.
    fn gradient(&self, _state: &ReducedState) -> Option<Gradient> {
        None
    }

    /// The model variant this field is tied to, if any.
    fn variant(&self) -> Option<Variant> {
        None
    }
}

impl<F: ScalarField + ?Sized> ScalarField for &F {
    fn value(&self, state: &ReducedState) -> f64 {
        (**self).value(state)
    }

    fn gradient(&self, state: &ReducedState) -> Option<Gradient> {
        (**self).gradient(state)
    }

    fn variant(&self) -> Option<Variant> {
        (**self).variant()
    }
}

/// Central finite-difference gradient over the active slots of `state`.
///
/// Slot `i` is probed with step `h·max(1, |xᵢ|)`.
pub fn fd_gradient<F: ScalarField + ?Sized>(f: &F, state: &ReducedState, h: f64) -> Result<Gradient> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let x = state.components();
    let mut grad = [0.0; STATE_DIM];
    for i in state.variant().active_slots() {
        let step = h * x[i].abs().max(1.0);
        let up = state.perturbed(i, step);
        let down = state.perturbed(i, -step);
        let width = up.components()[i] - down.components()[i];
        let (fu, fd) = (f.value(&up), f.value(&down));
        if !fu.is_finite() || !fd.is_finite() {
            return Err(Error::non_finite(format!(
                "finite-difference probe of slot {i}"
            )));
        }
        grad[i] = (fu - fd) / width;
    }
    Ok(Gradient::from_components(grad))
}

/// Analytic gradient when available, central differences otherwise.
pub fn gradient_of<F: ScalarField + ?Sized>(f: &F, state: &ReducedState) -> Result<Gradient> {
    let g = match f.gradient(state) {
        Some(g) => g,
        None => fd_gradient(f, state, DEFAULT_FD_STEP)?,
    };
    if !g.is_finite() {
        return Err(Error::non_finite("field gradient"));
    }
    Ok(g)
}

/// Bracket of two functions given their gradients at `state`. The Γ term is
/// included when the variant carries Γ, the canonical rotor term when it
/// carries rotors.
pub fn bracket_from_gradients(state: &ReducedState, gf: &Gradient, gk: &Gradient) -> f64 {
    let variant = state.variant();
    let mut b = -state.pi().dot(gf.d_pi.cross(gk.d_pi))
        - state.p().dot(gf.d_pi.cross(gk.d_p) - gk.d_pi.cross(gf.d_p));
    if variant.has_gravity() {
        b -= state
            .gamma()
            .dot(gf.d_pi.cross(gk.d_gamma) - gk.d_pi.cross(gf.d_gamma));
    }
    if variant.has_rotors() {
        b += gf.d_theta.dot(gk.d_l) - gk.d_theta.dot(gf.d_l);
    }
    b
}

/// Heavy-top Lie-Poisson bracket on se(3)* plus the canonical rotor bracket.
pub fn bracket_se3<F, K>(f: &F, k: &K, state: &ReducedState) -> Result<f64>
where
    F: ScalarField + ?Sized,
    K: ScalarField + ?Sized,
{
    if state.variant().has_gravity() {
        return Err(Error::mismatch("a state on se(3)*", state.variant()));
    }
    let gf = gradient_of(f, state)?;
    let gk = gradient_of(k, state)?;
    Ok(bracket_from_gradients(state, &gf, &gk))
}

/// Semidirect-product Lie-Poisson bracket on se(3)* ⊛ ℝ³ plus the canonical
/// rotor bracket.
pub fn bracket_se3r<F, K>(f: &F, k: &K, state: &ReducedState) -> Result<f64>
where
    F: ScalarField + ?Sized,
    K: ScalarField + ?Sized,
{
    if !state.variant().has_gravity() {
        return Err(Error::mismatch("a state on se(3)* ⊛ ℝ³", state.variant()));
    }
    let gf = gradient_of(f, state)?;
    let gk = gradient_of(k, state)?;
    Ok(bracket_from_gradients(state, &gf, &gk))
}

/// Bracket dispatching on the state's coalgebra.
pub fn bracket<F, K>(f: &F, k: &K, state: &ReducedState) -> Result<f64>
where
    F: ScalarField + ?Sized,
    K: ScalarField + ?Sized,
{
    if state.variant().has_gravity() {
        bracket_se3r(f, k, state)
    } else {
        bracket_se3(f, k, state)
    }
}

/// Hamiltonian vector field: component `i` is `{xᵢ, H}` for every active
/// coordinate function `xᵢ`.
pub fn ham_vector_field<H>(h: &H, state: &ReducedState) -> Result<StateDerivative>
where
    H: ScalarField + ?Sized,
{
    if let Some(v) = h.variant() {
        if v != state.variant() {
            return Err(Error::mismatch(v.name(), state.variant()));
        }
    }
    let gh = gradient_of(h, state)?;
    let mut out = [0.0; STATE_DIM];
    for i in state.variant().active_slots() {
        out[i] = bracket_from_gradients(state, &Gradient::unit(i), &gh);
    }
    Ok(StateDerivative::from_components(out))
}

/// The coordinate function reading flattened slot `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coordinate(pub usize);

impl Coordinate {
    pub fn pi(i: usize) -> Self {
        Coordinate(slot::PI + i)
    }

    pub fn p(i: usize) -> Self {
        Coordinate(slot::P + i)
    }

    pub fn gamma(i: usize) -> Self {
        Coordinate(slot::GAMMA + i)
    }

    pub fn theta(i: usize) -> Self {
        Coordinate(slot::THETA + i)
    }

    pub fn l(i: usize) -> Self {
        Coordinate(slot::L + i)
    }
}

impl ScalarField for Coordinate {
    fn value(&self, state: &ReducedState) -> f64 {
        state.components()[self.0]
    }

    fn gradient(&self, _state: &ReducedState) -> Option<Gradient> {
        Some(Gradient::unit(self.0))
    }
}

/// The vehicle Hamiltonian of one model variant, with its analytic gradient.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonianField {
    pub params: VehicleParams,
    pub variant: Variant,
}

impl HamiltonianField {
    pub fn new(params: VehicleParams, variant: Variant) -> Self {
        HamiltonianField { params, variant }
    }
}

impl ScalarField for HamiltonianField {
    fn value(&self, state: &ReducedState) -> f64 {
        systems::hamiltonian(state, &self.params)
    }

    fn gradient(&self, state: &ReducedState) -> Option<Gradient> {
        Some(systems::grad_hamiltonian(state, &self.params))
    }

    fn variant(&self) -> Option<Variant> {
        Some(self.variant)
    }
}

impl ScalarField for systems::CasimirKind {
    fn value(&self, state: &ReducedState) -> f64 {
        systems::CasimirKind::value(*self, state)
    }

    fn gradient(&self, state: &ReducedState) -> Option<Gradient> {
        Some(systems::CasimirKind::gradient(*self, state))
    }
}

/// Hides the analytic gradient of the wrapped field so that brackets fall
/// back to finite differences.
#[derive(Debug, Clone, Copy)]
pub struct NumericGradient<F>(pub F);

impl<F: ScalarField> ScalarField for NumericGradient<F> {
    fn value(&self, state: &ReducedState) -> f64 {
        self.0.value(state)
    }

    fn variant(&self) -> Option<Variant> {
        self.0.variant()
    }
}

/// A closure-backed field without analytic gradient.
pub struct FnField<F>(pub F);

impl<F: Fn(&ReducedState) -> f64 + Sync> ScalarField for FnField<F> {
    fn value(&self, state: &ReducedState) -> f64 {
        (self.0)(state)
    }
}

/// `coeff · Πᵢ xᵢ^powers[i]` over the flattened coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub powers: [u8; STATE_DIM],
}

impl Monomial {
    pub fn new(coeff: f64, powers: [u8; STATE_DIM]) -> Self {
        Monomial { coeff, powers }
    }
}

impl ScalarField for Monomial {
    fn value(&self, state: &ReducedState) -> f64 {
        let x = state.components();
        self.powers
            .iter()
            .zip(x)
            .fold(self.coeff, |acc, (&k, xi)| acc * xi.powi(k as i32))
    }

    fn gradient(&self, state: &ReducedState) -> Option<Gradient> {
        let x = state.components();
        let grad = std::array::from_fn(|i| {
            let k = self.powers[i];
            if k == 0 {
                return 0.0;
            }
            (0..STATE_DIM).fold(self.coeff * k as f64, |acc, j| {
                let e = if j == i { k - 1 } else { self.powers[j] };
                acc * x[j].powi(e as i32)
            })
        });
        Some(Gradient::from_components(grad))
    }
}

/// Pointwise product of two fields; analytic by the product rule when both
/// factors are.
#[derive(Debug, Clone, Copy)]
pub struct Product<A, B>(pub A, pub B);

impl<A: ScalarField, B: ScalarField> ScalarField for Product<A, B> {
    fn value(&self, state: &ReducedState) -> f64 {
        self.0.value(state) * self.1.value(state)
    }

    fn gradient(&self, state: &ReducedState) -> Option<Gradient> {
        let ga = self.0.gradient(state)?;
        let gb = self.1.gradient(state)?;
        Some(ga.scaled_sum(self.1.value(state), &gb, self.0.value(state)))
    }
}

/// An affine function `offset + Σ coeffs[i]·xᵢ`.
///
/// Brackets of affine functions are again affine, which gives an exact rule
/// for nested brackets of coordinate functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub coeffs: [f64; STATE_DIM],
    pub offset: f64,
}

impl LinearField {
    pub fn coordinate(i: usize) -> Self {
        let mut coeffs = [0.0; STATE_DIM];
        coeffs[i] = 1.0;
        LinearField { coeffs, offset: 0.0 }
    }

    fn as_gradient(&self) -> Gradient {
        Gradient::from_components(self.coeffs)
    }
}

impl ScalarField for LinearField {
    fn value(&self, state: &ReducedState) -> f64 {
        let x = state.components();
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.offset, |acc, (c, xi)| acc + c * xi)
    }

    fn gradient(&self, _state: &ReducedState) -> Option<Gradient> {
        Some(self.as_gradient())
    }
}

/// `{F, K}` for affine `F, K` on the phase space of `variant`, as an affine
/// function.
pub fn linear_bracket(f: &LinearField, k: &LinearField, variant: Variant) -> LinearField {
    let gf = f.as_gradient().restricted_to(variant);
    let gk = k.as_gradient().restricted_to(variant);
    let on_pi = -gf.d_pi.cross(gk.d_pi);
    let on_p = -(gf.d_pi.cross(gk.d_p) - gk.d_pi.cross(gf.d_p));
    let on_gamma = -(gf.d_pi.cross(gk.d_gamma) - gk.d_pi.cross(gf.d_gamma));
    let offset = gf.d_theta.dot(gk.d_l) - gk.d_theta.dot(gf.d_l);
    let g = Gradient {
        d_pi: on_pi,
        d_p: on_p,
        d_gamma: on_gamma,
        d_theta: Vec2::ZERO,
        d_l: Vec2::ZERO,
    }
    .restricted_to(variant);
    LinearField {
        coeffs: g.components(),
        offset,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::ControlLift;
    use crate::systems::CasimirKind;

    fn params() -> VehicleParams {
        VehicleParams::new(Vec3::new(1.0, 2.0, 3.0), Vec3::new(1.0, 2.0, 3.0), Vec2::new(1.0, 1.0)).unwrap()
    }

    fn sample_state(variant: Variant) -> ReducedState {
        let c = [0.3, -0.8, 1.2, 0.5, 0.1, -0.4, 0.2, -0.6, 0.77, 1.5, -2.5, 0.35, -0.15];
        let c = std::array::from_fn(|i| if variant.slot_active(i) { c[i] } else { 0.0 });
        ReducedState::from_components(variant, c).unwrap()
    }

    #[test]
    fn self_bracket_vanishes() {
        let s = sample_state(Variant::Coincident);
        let h = HamiltonianField::new(params(), Variant::Coincident);
        assert_eq!(bracket_se3(&h, &h, &s).unwrap(), 0.0);
        let m = Monomial::new(1.3, [1, 0, 2, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1]);
        assert_eq!(bracket_se3(&m, &m, &s).unwrap(), 0.0);
        let g = sample_state(Variant::NonCoincident);
        assert_eq!(bracket_se3r(&m, &m, &g).unwrap(), 0.0);
    }

    #[test]
    fn se3_coordinate_examples() {
        let s = ReducedState::coincident(Vec3::E3, Vec3::ZERO, Vec2::ZERO, Vec2::ZERO).unwrap();
        assert_eq!(bracket_se3(&Coordinate::pi(0), &Coordinate::pi(1), &s).unwrap(), -1.0);
        let any = sample_state(Variant::Coincident);
        assert_eq!(bracket_se3(&Coordinate::theta(0), &Coordinate::l(0), &any).unwrap(), 1.0);
        assert_eq!(bracket_se3(&Coordinate::theta(0), &Coordinate::l(1), &any).unwrap(), 0.0);
    }

    #[test]
    fn se3r_coordinate_examples() {
        let any = sample_state(Variant::NonCoincident);
        assert_eq!(bracket_se3r(&Coordinate::gamma(0), &Coordinate::gamma(1), &any).unwrap(), 0.0);
        let s = ReducedState::noncoincident(Vec3::ZERO, Vec3::ZERO, Vec3::E3, Vec2::ZERO, Vec2::ZERO).unwrap();
        assert_eq!(bracket_se3r(&Coordinate::pi(0), &Coordinate::gamma(1), &s).unwrap(), -1.0);
        let h = HamiltonianField::new(params().with_gravity(1.0, Vec3::E3).unwrap(), Variant::NonCoincident);
        assert_eq!(bracket_se3r(&h, &h, &any).unwrap(), 0.0);
    }

    #[test]
    fn bracket_rejects_wrong_coalgebra() {
        let c = sample_state(Variant::Coincident);
        let n = sample_state(Variant::NonCoincident);
        assert!(bracket_se3r(&Coordinate(0), &Coordinate(1), &c).is_err());
        assert!(bracket_se3(&Coordinate(0), &Coordinate(1), &n).is_err());
    }

    #[test]
    fn nan_gradient_is_an_error() {
        let s = sample_state(Variant::Coincident);
        let bad = FnField(|st: &ReducedState| if st.pi().x > 0.3 { f64::NAN } else { 0.0 });
        let err = bracket_se3(&bad, &Coordinate(1), &s).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }), "{err}");
    }

    #[test]
    fn ham_vector_field_standard_example() {
        let s = ReducedState::coincident(Vec3::E1, Vec3::E2, Vec2::ZERO, Vec2::ZERO).unwrap();
        let h = HamiltonianField::new(params(), Variant::Coincident);
        let d = ham_vector_field(&h, &s).unwrap();
        assert_eq!(d.pi, Vec3::ZERO);
        assert_eq!(d.p, Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(d.theta, Vec2::new(-1.0, 0.0));
        assert_eq!(d.l, Vec2::ZERO);

        let zero = ham_vector_field(&h, &ReducedState::zero(Variant::Coincident)).unwrap();
        assert_eq!(zero, StateDerivative::default());
    }

    #[test]
    fn ham_vector_field_gravity_equilibrium() {
        let gp = params().with_gravity(2.0, Vec3::E3).unwrap();
        let h = HamiltonianField::new(gp, Variant::NonCoincident);
        let s = ReducedState::noncoincident(Vec3::ZERO, Vec3::ZERO, Vec3::E3 * 0.4, Vec2::ZERO, Vec2::new(0.2, 0.1))
            .unwrap();
        let d = ham_vector_field(&h, &s).unwrap();
        assert_eq!(d.pi, Vec3::ZERO);
    }

    #[test]
    fn ham_vector_field_rejects_variant_mismatch() {
        let h = HamiltonianField::new(params(), Variant::Coincident);
        let err = ham_vector_field(&h, &sample_state(Variant::NonCoincident)).unwrap_err();
        assert!(matches!(err, Error::VariantMismatch { .. }));
    }

    #[test]
    fn ham_vector_field_matches_eom() {
        let gp = params().with_gravity(0.7, Vec3::new(0.0, 0.6, 0.8)).unwrap();
        for variant in Variant::ALL {
            let s = sample_state(variant);
            let h = HamiltonianField::new(gp, variant);
            let a = ham_vector_field(&h, &s).unwrap().components();
            let b = systems::vector_field(&s, &gp, &ControlLift::zero()).unwrap().components();
            for i in 0..STATE_DIM {
                assert!((a[i] - b[i]).abs() <= 1e-14, "{variant} slot {i}: {} vs {}", a[i], b[i]);
            }
        }
    }

    #[test]
    fn fd_gradient_examples() {
        let s = ReducedState::coincident(Vec3::new(3.0, 0.0, 0.0), Vec3::ZERO, Vec2::ZERO, Vec2::ZERO).unwrap();
        let sq = Monomial::new(1.0, [2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let g = fd_gradient(&sq, &s, 1e-5).unwrap();
        assert!((g.d_pi.x - 6.0).abs() <= 1e-8, "{}", g.d_pi.x);

        let c = FnField(|_: &ReducedState| 4.25);
        let g = fd_gradient(&c, &sample_state(Variant::NonCoincident), 1e-6).unwrap();
        assert!(g.components().iter().all(|x| x.abs() <= 1e-10));

        let s = ReducedState::coincident(Vec3::E1, Vec3::E2, Vec2::ZERO, Vec2::ZERO).unwrap();
        let h = HamiltonianField::new(params(), Variant::Coincident);
        let fd = fd_gradient(&NumericGradient(h), &s, DEFAULT_FD_STEP).unwrap().components();
        let an = systems::grad_hamiltonian(&s, &params()).components();
        let scale = an.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..STATE_DIM {
            assert!((fd[i] - an[i]).abs() <= 1e-6 * scale, "slot {i}");
        }
    }

    #[test]
    fn fd_gradient_rejects_bad_step() {
        let s = sample_state(Variant::Coincident);
        assert!(fd_gradient(&Coordinate(0), &s, 0.0).is_err());
        assert!(fd_gradient(&Coordinate(0), &s, f64::NAN).is_err());
    }

    #[test]
    fn casimirs_annihilate_coordinates() {
        for variant in [Variant::Coincident, Variant::NonCoincident] {
            let s = sample_state(variant);
            for &c in CasimirKind::for_variant(variant) {
                for i in variant.active_slots() {
                    let b = bracket(&c, &Coordinate(i), &s).unwrap();
                    assert!(b.abs() <= 1e-15, "{variant} {} slot {i}: {b}", c.symbol());
                }
            }
        }
    }

    #[test]
    fn pi_dot_p_is_not_a_casimir_with_gravity() {
        let s = sample_state(Variant::NonCoincident);
        let b = bracket(&CasimirKind::PiP, &Coordinate::gamma(0), &s).unwrap();
        assert!(b.abs() > 1e-3);
    }

    #[test]
    fn linear_bracket_matches_engine() {
        for variant in [Variant::Coincident, Variant::NonCoincident] {
            let s = sample_state(variant);
            for i in variant.active_slots() {
                for j in variant.active_slots() {
                    let (f, k) = (LinearField::coordinate(i), LinearField::coordinate(j));
                    let lb = linear_bracket(&f, &k, variant).value(&s);
                    let eb = bracket(&f, &k, &s).unwrap();
                    assert!((lb - eb).abs() <= 1e-15, "{variant} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn product_gradient_uses_product_rule() {
        let s = sample_state(Variant::NonCoincident);
        let a = Monomial::new(2.0, [1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0]);
        let b = Coordinate::l(1);
        let prod = Product(a, b);
        let an = prod.gradient(&s).unwrap().components();
        let fd = fd_gradient(&NumericGradient(prod), &s, 1e-6).unwrap().components();
        for i in 0..STATE_DIM {
            assert!((an[i] - fd[i]).abs() <= 1e-8, "slot {i}");
        }
    }
}
