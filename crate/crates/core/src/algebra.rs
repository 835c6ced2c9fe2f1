//! Three- and two-component vectors and the coadjoint building blocks shared
//! by every bracket and equation of motion.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A real 3-vector. Houses body angular/linear momenta, velocities, the
/// advected gravity direction and the offset direction.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A real 2-vector for the rotor angles, rotor momenta and rates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub a: f64,
    pub b: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const E1: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const E2: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const E3: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Unit basis vector along axis `i` (0-based).
    pub fn basis(i: usize) -> Self {
        match i {
            0 => Self::E1,
            1 => Self::E2,
            2 => Self::E3,
            _ => panic!("Vec3 axis index {i} out of range"),
        }
    }

    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        cross(self, other)
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        dot(self, other)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Componentwise product.
    pub fn hadamard(self, other: Vec3) -> Vec3 {
        Vec3::new(self.x * other.x, self.y * other.y, self.z * other.z)
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn get(self, i: usize) -> f64 {
        self.to_array()[i]
    }
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2::new(0.0, 0.0);

    pub const fn new(a: f64, b: f64) -> Self {
        Vec2 { a, b }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.a * other.a + self.b * other.b
    }

    pub fn hadamard(self, other: Vec2) -> Vec2 {
        Vec2::new(self.a * other.a, self.b * other.b)
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs())
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.a, self.b]
    }

    pub fn get(self, i: usize) -> f64 {
        self.to_array()[i]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(v: [f64; 2]) -> Self {
        Vec2::new(v[0], v[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        v.to_array()
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

macro_rules! impl_vector_ops {
    ($ty:ident { $($field:ident),+ }) => {
        impl Add for $ty {
            type Output = $ty;
            #[inline]
            fn add(self, rhs: $ty) -> $ty {
                $ty { $($field: self.$field + rhs.$field),+ }
            }
        }

        impl AddAssign for $ty {
            #[inline]
            fn add_assign(&mut self, rhs: $ty) {
                $(self.$field += rhs.$field;)+
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            #[inline]
            fn sub(self, rhs: $ty) -> $ty {
                $ty { $($field: self.$field - rhs.$field),+ }
            }
        }

        impl Mul<f64> for $ty {
            type Output = $ty;
            #[inline]
            fn mul(self, s: f64) -> $ty {
                $ty { $($field: self.$field * s),+ }
            }
        }

        impl Mul<$ty> for f64 {
            type Output = $ty;
            #[inline]
            fn mul(self, v: $ty) -> $ty {
                v * self
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            #[inline]
            fn neg(self) -> $ty {
                $ty { $($field: -self.$field),+ }
            }
        }
    };
}

impl_vector_ops!(Vec3 { x, y, z });
impl_vector_ops!(Vec2 { a, b });

/// Right-handed cross product `u × v`.
#[inline]
pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
}

#[inline]
pub fn dot(u: Vec3, v: Vec3) -> f64 {
    u.x * v.x + u.y * v.y + u.z * v.z
}

/// Drift of the se(3)* Lie-Poisson flow for the gradient `(omega, v)`:
/// returns `(Π×Ω + P×v, P×Ω)`.
#[inline]
pub fn coad_se3(omega: Vec3, v: Vec3, pi: Vec3, p: Vec3) -> (Vec3, Vec3) {
    (cross(pi, omega) + cross(p, v), cross(p, omega))
}

/// Drift of the Lie-Poisson flow on se(3)* ⊛ ℝ³ for the gradient
/// `(omega, v, gvec)` where `gvec` is the Γ-gradient of the Hamiltonian:
/// returns `(Π×Ω + P×v + Γ×gvec, P×Ω, Γ×Ω)`.
#[inline]
pub fn coad_se3r(
    omega: Vec3,
    v: Vec3,
    gvec: Vec3,
    pi: Vec3,
    p: Vec3,
    gamma: Vec3,
) -> (Vec3, Vec3, Vec3) {
    let (dpi, dp) = coad_se3(omega, v, pi, p);
    (dpi + cross(gamma, gvec), dp, cross(gamma, omega))
}
