//! Hamilton-Jacobi residuals of the reduced controlled vehicle and a grid
//! checker for candidate reduced one-forms.
//!
//! A candidate `γ̄ = (γ̄₁, …, γ̄₁₀)` carries Π-slot values `γ̄₁₋₃`, P-slot values
//! `γ̄₄₋₆`, θ-slot values `γ̄₇₋₈` and l-slot values `γ̄₉₋₁₀`. In the
//! non-coincident system the Γ-slot is taken from the sample state.
//! Residual rows are kept in the cleared-denominator form of the reduced
//! Hamilton-Jacobi system, so a row is zero exactly when its equation holds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Vec3;
use crate::error::{Error, Result};
use crate::systems::VehicleParams;

pub const COINCIDENT_ROWS: usize = 10;
pub const NONCOINCIDENT_ROWS: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HjSampleCoincident {
    pub pi: Vec3,
    pub p: Vec3,
    pub one_form: [f64; 10],
    pub lift: [f64; COINCIDENT_ROWS],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HjSampleNonCoincident {
    pub pi: Vec3,
    pub p: Vec3,
    pub gamma: Vec3,
    pub one_form: [f64; 10],
    pub lift: [f64; NONCOINCIDENT_ROWS],
}

fn all_finite(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

impl HjSampleCoincident {
    pub fn is_finite(&self) -> bool {
        self.pi.is_finite() && self.p.is_finite() && all_finite(&self.one_form) && all_finite(&self.lift)
    }
}

impl HjSampleNonCoincident {
    pub fn is_finite(&self) -> bool {
        self.pi.is_finite()
            && self.p.is_finite()
            && self.gamma.is_finite()
            && all_finite(&self.one_form)
            && all_finite(&self.lift)
    }
}

/// The three rows `(x × w)` written over common denominators, where
/// `w = ((γ̄₁−γ̄₉)/Ī₁, (γ̄₂−γ̄₁₀)/Ī₂, γ̄₃/Ī₃)`.
fn angular_rows(x: Vec3, g: &[f64; 10], ib: Vec3) -> [f64; 3] {
    let (i1, i2, i3) = (ib.x, ib.y, ib.z);
    let a1 = g[0] - g[8];
    let a2 = g[1] - g[9];
    let a3 = g[2];
    [
        (i2 * x.y * a3 - i3 * x.z * a2) / (i2 * i3),
        (i3 * x.z * a1 - i1 * x.x * a3) / (i3 * i1),
        (i1 * x.x * a2 - i2 * x.y * a1) / (i1 * i2),
    ]
}

/// The three rows `(P × u)` over common denominators, with
/// `u = (γ̄₄/m₁, γ̄₅/m₂, γ̄₆/m₃)`.
fn linear_rows(p: Vec3, g: &[f64; 10], m: Vec3) -> [f64; 3] {
    let (m1, m2, m3) = (m.x, m.y, m.z);
    [
        (m2 * p.y * g[5] - m3 * p.z * g[4]) / (m2 * m3),
        (m3 * p.z * g[3] - m1 * p.x * g[5]) / (m3 * m1),
        (m1 * p.x * g[4] - m2 * p.y * g[3]) / (m1 * m2),
    ]
}

/// The two rotor rows `−Jᵢ(γ̄ᵢ−γ̄ᵢ₊₈) + Īᵢγ̄ᵢ₊₈ + ĪᵢJᵢUₖ`.
fn rotor_rows(g: &[f64; 10], params: &VehicleParams, u: [f64; 2]) -> [f64; 2] {
    let (ib, j) = (params.ibar(), params.jrot());
    [
        -j.a * (g[0] - g[8]) + ib.x * g[8] + ib.x * j.a * u[0],
        -j.b * (g[1] - g[9]) + ib.y * g[9] + ib.y * j.b * u[1],
    ]
}

/// Residuals `r₁ … r₁₀` of the coincident-center system.
pub fn hj_residual_coincident(sample: &HjSampleCoincident, params: &VehicleParams) -> Result<[f64; COINCIDENT_ROWS]> {
    if !sample.is_finite() {
        return Err(Error::non_finite("HJ sample"));
    }
    let (g, u) = (&sample.one_form, &sample.lift);
    let ib = params.ibar();
    let top = angular_rows(sample.pi, g, ib);
    let lin = linear_rows(sample.p, g, params.mass());
    let mid = angular_rows(sample.p, g, ib);
    let rot = rotor_rows(g, params, [u[6], u[7]]);
    Ok([
        top[0] + lin[0] + u[0],
        top[1] + lin[1] + u[1],
        top[2] + lin[2] + u[2],
        mid[0] + u[3],
        mid[1] + u[4],
        mid[2] + u[5],
        rot[0],
        rot[1],
        u[8],
        u[9],
    ])
}

/// Residuals `r₁ … r₁₃` of the non-coincident system.
pub fn hj_residual_noncoincident(
    sample: &HjSampleNonCoincident,
    params: &VehicleParams,
) -> Result<[f64; NONCOINCIDENT_ROWS]> {
    if !sample.is_finite() {
        return Err(Error::non_finite("HJ sample"));
    }
    let (g, u) = (&sample.one_form, &sample.lift);
    let ib = params.ibar();
    let (mgh, chi, gm) = (params.mgh(), params.chi(), sample.gamma);
    let grav = [
        mgh * (gm.y * chi.z - gm.z * chi.y),
        mgh * (gm.z * chi.x - gm.x * chi.z),
        mgh * (gm.x * chi.y - gm.y * chi.x),
    ];
    let top = angular_rows(sample.pi, g, ib);
    let lin = linear_rows(sample.p, g, params.mass());
    let mid = angular_rows(sample.p, g, ib);
    let adv = angular_rows(gm, g, ib);
    let rot = rotor_rows(g, params, [u[9], u[10]]);
    Ok([
        top[0] + lin[0] + grav[0] + u[0],
        top[1] + lin[1] + grav[1] + u[1],
        top[2] + lin[2] + grav[2] + u[2],
        mid[0] + u[3],
        mid[1] + u[4],
        mid[2] + u[5],
        adv[0] + u[6],
        adv[1] + u[7],
        adv[2] + u[8],
        rot[0],
        rot[1],
        u[11],
        u[12],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HjSystem {
    Coincident,
    NonCoincident,
}

impl HjSystem {
    pub fn rows(self) -> usize {
        match self {
            HjSystem::Coincident => COINCIDENT_ROWS,
            HjSystem::NonCoincident => NONCOINCIDENT_ROWS,
        }
    }
}

/// A base point of the residual grid: an index plus the state values at
/// which the residual is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPoint {
    #[serde(default)]
    pub index: usize,
    pub pi: Vec3,
    pub p: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec3>,
}

/// Candidate one-form and lift values at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateValues {
    pub one_form: [f64; 10],
    /// 10 lift values for the coincident system, 13 for the non-coincident
    /// one.
    pub lift: Vec<f64>,
}

impl CandidateValues {
    pub fn zero(system: HjSystem) -> Self {
        CandidateValues {
            one_form: [0.0; 10],
            lift: vec![0.0; system.rows()],
        }
    }
}

/// Deterministic map from grid points to candidate values.
pub trait CandidateOneForm: Sync {
    fn evaluate(&self, point: &GridPoint) -> Result<CandidateValues>;
}

/// The same values at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantCandidate(pub CandidateValues);

impl CandidateOneForm for ConstantCandidate {
    fn evaluate(&self, _point: &GridPoint) -> Result<CandidateValues> {
        Ok(self.0.clone())
    }
}

/// One entry per grid point, looked up by `GridPoint::index`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCandidate(pub Vec<CandidateValues>);

impl CandidateOneForm for TabulatedCandidate {
    fn evaluate(&self, point: &GridPoint) -> Result<CandidateValues> {
        self.0.get(point.index).cloned().ok_or_else(|| {
            Error::InvalidInput(format!(
                "candidate table has {} entries, no entry for grid index {}",
                self.0.len(),
                point.index
            ))
        })
    }
}

impl<F> CandidateOneForm for F
where
    F: Fn(&GridPoint) -> CandidateValues + Sync,
{
    fn evaluate(&self, point: &GridPoint) -> Result<CandidateValues> {
        Ok(self(point))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HjReport {
    pub is_solution: bool,
    pub max_abs_residual: f64,
    /// Position of the worst sample in the grid.
    pub worst_sample: usize,
    /// 1-based residual row attaining the maximum.
    pub worst_row: usize,
    pub per_row_max: Vec<f64>,
}

/// Residual of `system` at one grid point.
pub fn residual_at(
    system: HjSystem,
    point: &GridPoint,
    values: &CandidateValues,
    params: &VehicleParams,
) -> Result<Vec<f64>> {
    if values.lift.len() != system.rows() {
        return Err(Error::InvalidInput(format!(
            "expected {} lift values, got {}",
            system.rows(),
            values.lift.len()
        )));
    }
    match system {
        HjSystem::Coincident => {
            if point.gamma.is_some() {
                return Err(Error::InvalidInput(
                    "coincident grid points carry no gamma".into(),
                ));
            }
            let sample = HjSampleCoincident {
                pi: point.pi,
                p: point.p,
                one_form: values.one_form,
                lift: values.lift.as_slice().try_into().expect("length checked"),
            };
            Ok(hj_residual_coincident(&sample, params)?.to_vec())
        }
        HjSystem::NonCoincident => {
            let gamma = point.gamma.ok_or_else(|| {
                Error::InvalidInput("non-coincident grid points need gamma".into())
            })?;
            let sample = HjSampleNonCoincident {
                pi: point.pi,
                p: point.p,
                gamma,
                one_form: values.one_form,
                lift: values.lift.as_slice().try_into().expect("length checked"),
            };
            Ok(hj_residual_noncoincident(&sample, params)?.to_vec())
        }
    }
}

/// Evaluates the residual at every grid point. The reduction runs in grid
/// order, so ties resolve to the first sample and the lowest row.
pub fn check_solution<C: CandidateOneForm + ?Sized>(
    system: HjSystem,
    candidate: &C,
    grid: &[GridPoint],
    params: &VehicleParams,
    tol: f64,
) -> Result<HjReport> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("HJ grid is empty".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParam {
            field: "tolerance",
            value: tol,
            reason: "must be positive and finite",
        });
    }
    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|pt| candidate.evaluate(pt).and_then(|v| residual_at(system, pt, &v, params)))
        .collect::<Result<_>>()?;

    let mut per_row_max = vec![0.0f64; system.rows()];
    let (mut worst, mut worst_sample, mut worst_row) = (0.0f64, 0usize, 0usize);
    for (s, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            let a = v.abs();
            per_row_max[j] = per_row_max[j].max(a);
            if a > worst {
                worst = a;
                worst_sample = s;
                worst_row = j;
            }
        }
    }
    Ok(HjReport {
        is_solution: worst <= tol,
        max_abs_residual: worst,
        worst_sample,
        worst_row: worst_row + 1,
        per_row_max,
    })
}
