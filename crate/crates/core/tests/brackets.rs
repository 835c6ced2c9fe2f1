use proptest::prelude::*;

use rotorsim_core::poisson::{bracket, bracket_se3, bracket_se3r, linear_bracket, Coordinate, LinearField, Monomial, Product};
use rotorsim_core::ScalarField;
use rotorsim_core::systems::{slot, CasimirKind, ReducedState, Variant, STATE_DIM};

fn state(variant: Variant) -> impl Strategy<Value = ReducedState> {
    prop::array::uniform13(-1.0f64..1.0).prop_map(move |c| {
        let c = std::array::from_fn(|i| if variant.slot_active(i) { c[i] } else { 0.0 });
        ReducedState::from_components(variant, c).unwrap()
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (-2.0f64..2.0, prop::array::uniform13(0u8..=2)).prop_map(|(c, p)| Monomial::new(c, p))
}

const BRACKET_VARIANTS: [Variant; 2] = [Variant::Coincident, Variant::NonCoincident];

fn variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(BRACKET_VARIANTS.to_vec())
}

fn variant_and_state() -> impl Strategy<Value = (Variant, ReducedState)> {
    variant().prop_flat_map(|v| (Just(v), state(v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn antisymmetry((_, x) in variant_and_state(), f in monomial(), k in monomial()) {
        let a = bracket(&f, &k, &x).unwrap();
        let b = bracket(&k, &f, &x).unwrap();
        prop_assert!((a + b).abs() <= 1e-12, "{a} {b}");
    }

    #[test]
    fn leibniz((_, x) in variant_and_state(), f in monomial(), g in monomial(), k in monomial()) {
        let lhs = bracket(&Product(f, g), &k, &x).unwrap();
        let rhs = f.value(&x) * bracket(&g, &k, &x).unwrap() + g.value(&x) * bracket(&f, &k, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10, "{lhs} {rhs}");
    }

    #[test]
    fn casimirs_annihilate_monomials((v, x) in variant_and_state(), k in monomial()) {
        for &c in CasimirKind::for_variant(v) {
            let b = bracket(&c, &k, &x).unwrap();
            prop_assert!(b.abs() <= 1e-12, "{}: {b}", c.symbol());
        }
    }

    #[test]
    fn jacobi_on_coordinates((v, x) in variant_and_state()) {
        let active: Vec<usize> = v.active_slots().collect();
        let mut worst = 0.0f64;
        for &i in &active {
            for &j in &active {
                for &k in &active {
                    let (xi, xj, xk) = (LinearField::coordinate(i), LinearField::coordinate(j), LinearField::coordinate(k));
                    let cyc = bracket(&xi, &linear_bracket(&xj, &xk, v), &x).unwrap()
                        + bracket(&xj, &linear_bracket(&xk, &xi, v), &x).unwrap()
                        + bracket(&xk, &linear_bracket(&xi, &xj, v), &x).unwrap();
                    worst = worst.max(cyc.abs());
                }
            }
        }
        prop_assert!(worst <= 1e-12, "{worst}");
    }
}

#[test]
fn named_jacobi_triples() {
    // {Πᵢ, Πⱼ, Πₖ}, {Πᵢ, Pⱼ, Pₖ}, {Πᵢ, Γⱼ, Γₖ} at a fixed generic point
    let c: [f64; STATE_DIM] = [0.3, -0.8, 1.2, 0.5, 0.1, -0.4, 0.2, -0.6, 0.77, 1.5, -2.5, 0.35, -0.15];
    let x = ReducedState::from_components(Variant::NonCoincident, c).unwrap();
    for (b1, b2) in [(slot::PI, slot::PI), (slot::P, slot::P), (slot::GAMMA, slot::GAMMA)] {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let xi = LinearField::coordinate(slot::PI + i);
                    let xj = LinearField::coordinate(b1 + j);
                    let xk = LinearField::coordinate(b2 + k);
                    let v = Variant::NonCoincident;
                    let cyc = bracket_se3r(&xi, &linear_bracket(&xj, &xk, v), &x).unwrap()
                        + bracket_se3r(&xj, &linear_bracket(&xk, &xi, v), &x).unwrap()
                        + bracket_se3r(&xk, &linear_bracket(&xi, &xj, v), &x).unwrap();
                    assert!(cyc.abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn structure_constants_of_se3() {
    let x = ReducedState::coincident(
        rotorsim_core::Vec3::new(1.0, 2.0, 3.0),
        rotorsim_core::Vec3::new(4.0, 5.0, 6.0),
        rotorsim_core::Vec2::ZERO,
        rotorsim_core::Vec2::ZERO,
    )
    .unwrap();
    // {Π₁, Π₂} = −Π₃, {Π₁, P₂} = −P₃, {P₁, P₂} = 0
    assert_eq!(bracket_se3(&Coordinate::pi(0), &Coordinate::pi(1), &x).unwrap(), -3.0);
    assert_eq!(bracket_se3(&Coordinate::pi(0), &Coordinate::p(1), &x).unwrap(), -6.0);
    assert_eq!(bracket_se3(&Coordinate::p(0), &Coordinate::p(1), &x).unwrap(), 0.0);
}
