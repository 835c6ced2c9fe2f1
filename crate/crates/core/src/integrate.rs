//! Fixed-step integrators for the controlled reduced flow, with energy and
//! Casimir monitors attached to every recorded sample.

use serde::{Deserialize, Serialize};

use crate::control::{self, ControlLaw};
use crate::error::{Error, Result};
use crate::systems::{self, CasimirKind, ReducedState, StateDerivative, VehicleParams, STATE_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4,
    ImplicitMidpoint,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::ImplicitMidpoint => "implicit-midpoint",
        }
    }
}

fn default_tolerance() -> f64 {
    1e-12
}

fn default_max_iterations() -> usize {
    50
}

fn default_decimation() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    pub method: Method,
    pub dt: f64,
    pub t_end: f64,
    /// Fixed-point tolerance of the implicit midpoint iteration (max-norm).
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// Record every `decimation`-th step. The final state is always recorded.
    #[serde(default = "default_decimation")]
    pub decimation: usize,
}

impl IntegratorSpec {
    pub fn new(method: Method, dt: f64, t_end: f64) -> Self {
        IntegratorSpec {
            method,
            dt,
            t_end,
            tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
            decimation: default_decimation(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", self.dt, "must be positive and finite"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", self.t_end, "must be non-negative and finite"));
        }
        if self.t_end > 0.0 && self.dt > self.t_end {
            return Err(invalid("dt", self.dt, "must not exceed t_end"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(invalid("tolerance", self.tolerance, "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations", 0.0, "must be at least 1"));
        }
        if self.decimation == 0 {
            return Err(invalid("decimation", 0.0, "must be at least 1"));
        }
        Ok(())
    }

    /// Number of steps to reach `t_end`; the last one may be partial.
    pub fn step_count(&self) -> usize {
        if self.t_end == 0.0 {
            return 0;
        }
        let ratio = self.t_end / self.dt;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            ratio.ceil() as usize
        }
    }
}

fn invalid(field: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParam { field, value, reason }
}

fn field(state: &ReducedState, t: f64, params: &VehicleParams, law: &ControlLaw) -> Result<StateDerivative> {
    let lift = control::evaluate(law, t, state)?;
    systems::vector_field(state, params, &lift)
}

type Increment = [f64; STATE_DIM];

fn apply(state: &ReducedState, inc: &Increment) -> ReducedState {
    let mut c = state.components();
    for i in state.variant().active_slots() {
        c[i] += inc[i];
    }
    ReducedState::from_components_unchecked(state.variant(), c)
}

fn rk4_increment(
    state: &ReducedState,
    t: f64,
    dt: f64,
    params: &VehicleParams,
    law: &ControlLaw,
) -> Result<Increment> {
    let half = 0.5 * dt;
    let stage = |k: &StateDerivative, n: usize| -> Result<()> {
        if k.is_finite() {
            Ok(())
        } else {
            Err(Error::non_finite(format!("RK4 stage {n} derivative")))
        }
    };
    let k1 = field(state, t, params, law)?;
    stage(&k1, 1)?;
    let k2 = field(&state.advanced(&k1, half), t + half, params, law)?;
    stage(&k2, 2)?;
    let k3 = field(&state.advanced(&k2, half), t + half, params, law)?;
    stage(&k3, 3)?;
    let k4 = field(&state.advanced(&k3, dt), t + dt, params, law)?;
    stage(&k4, 4)?;

    let (a, b, c, d) = (k1.components(), k2.components(), k3.components(), k4.components());
    let w = dt / 6.0;
    let mut inc = [0.0; STATE_DIM];
    for i in state.variant().active_slots() {
        inc[i] = w * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    }
    Ok(inc)
}

/// One classical Runge-Kutta step. The law is sampled at `t`, `t+dt/2`
/// (twice) and `t+dt`.
pub fn step_rk4(
    state: &ReducedState,
    t: f64,
    dt: f64,
    params: &VehicleParams,
    law: &ControlLaw,
) -> Result<ReducedState> {
    let next = apply(state, &rk4_increment(state, t, dt, params, law)?);
    if !next.is_finite() {
        return Err(Error::non_finite("RK4 update"));
    }
    Ok(next)
}

fn midpoint_increment(
    state: &ReducedState,
    t: f64,
    dt: f64,
    params: &VehicleParams,
    law: &ControlLaw,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(Increment, usize)> {
    let tm = t + 0.5 * dt;
    let x = state.components();
    let variant = state.variant();
    let mut y = x;
    let mut change = f64::INFINITY;
    for iter in 1..=max_iterations {
        let mid = ReducedState::from_components(variant, std::array::from_fn(|i| 0.5 * (x[i] + y[i])))?;
        let f = field(&mid, tm, params, law)?;
        if !f.is_finite() {
            return Err(Error::non_finite("implicit midpoint derivative"));
        }
        let fc = f.components();
        let mut inc = [0.0; STATE_DIM];
        for i in variant.active_slots() {
            inc[i] = dt * fc[i];
        }
        let next: [f64; STATE_DIM] = std::array::from_fn(|i| x[i] + inc[i]);
        change = (0..STATE_DIM).fold(0.0f64, |m, i| m.max((next[i] - y[i]).abs()));
        y = next;
        if change < tolerance {
            return Ok((inc, iter));
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        residual: change,
    })
}

/// Implicit midpoint step together with the number of fixed-point
/// iterations it took.
pub fn step_midpoint_counted(
    state: &ReducedState,
    t: f64,
    dt: f64,
    params: &VehicleParams,
    law: &ControlLaw,
    tolerance: f64,
    max_iterations: usize,
) -> Result<(ReducedState, usize)> {
    let (inc, iters) = midpoint_increment(state, t, dt, params, law, tolerance, max_iterations)?;
    Ok((apply(state, &inc), iters))
}

/// Implicit midpoint step solved by fixed-point iteration.
pub fn step_midpoint(
    state: &ReducedState,
    t: f64,
    dt: f64,
    params: &VehicleParams,
    law: &ControlLaw,
    tolerance: f64,
    max_iterations: usize,
) -> Result<ReducedState> {
    step_midpoint_counted(state, t, dt, params, law, tolerance, max_iterations).map(|(s, _)| s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: ReducedState,
    pub energy: f64,
    /// Values of the variant's Casimirs, in `CasimirKind::for_variant` order.
    pub casimirs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MidpointStats {
    pub total_iterations: usize,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryMeta {
    pub params: VehicleParams,
    pub law: ControlLaw,
    pub spec: IntegratorSpec,
    pub step_count: usize,
    pub midpoint: Option<MidpointStats>,
    /// Largest change of any Casimir over a single step.
    pub max_step_casimir_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub casimir_kinds: Vec<CasimirKind>,
    pub samples: Vec<Sample>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }

    /// `max_k |H(t_k) − H(0)|`.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.first().energy;
        self.samples.iter().fold(0.0, |m, s| m.max((s.energy - e0).abs()))
    }

    /// `max_k |C(t_k) − C(0)|` for each recorded Casimir.
    pub fn max_casimir_drifts(&self) -> Vec<(CasimirKind, f64)> {
        let c0 = &self.first().casimirs;
        self.casimir_kinds
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                let d = self.samples.iter().fold(0.0f64, |m, s| m.max((s.casimirs[j] - c0[j]).abs()));
                (k, d)
            })
            .collect()
    }
}

fn casimir_values(kinds: &[CasimirKind], state: &ReducedState) -> Vec<f64> {
    kinds.iter().map(|k| k.value(state)).collect()
}

fn sample(kinds: &[CasimirKind], t: f64, state: ReducedState, params: &VehicleParams) -> Sample {
    Sample {
        t,
        energy: systems::hamiltonian(&state, params),
        casimirs: casimir_values(kinds, &state),
        state,
    }
}

/// Kahan-compensated accumulation of step increments. Over many small steps
/// this keeps the rounding of `x + Δ` from piling up, without changing the
/// scheme itself.
#[derive(Default)]
struct Compensated {
    carry: Increment,
}

impl Compensated {
    fn add(&mut self, state: &ReducedState, inc: &Increment) -> ReducedState {
        let mut x = state.components();
        for i in state.variant().active_slots() {
            let y = inc[i] - self.carry[i];
            let sum = x[i] + y;
            self.carry[i] = (sum - x[i]) - y;
            x[i] = sum;
        }
        ReducedState::from_components_unchecked(state.variant(), x)
    }
}

/// Integrates from `t = 0` to `spec.t_end`. Sample times are `k·dt`, except
/// for a final partial step landing exactly on `t_end`.
pub fn integrate(
    initial: &ReducedState,
    params: &VehicleParams,
    law: &ControlLaw,
    spec: &IntegratorSpec,
) -> Result<Trajectory> {
    spec.validate()?;
    law.validate()?;
    if !initial.is_finite() {
        return Err(Error::non_finite("initial state"));
    }
    let kinds = CasimirKind::for_variant(initial.variant()).to_vec();
    let n = spec.step_count();
    let mut samples = Vec::with_capacity(n / spec.decimation + 2);
    samples.push(sample(&kinds, 0.0, *initial, params));

    let mut stats = MidpointStats::default();
    let mut max_defect = 0.0f64;
    let mut state = *initial;
    let mut acc = Compensated::default();
    let mut prev_c = casimir_values(&kinds, &state);
    for k in 0..n {
        let t = k as f64 * spec.dt;
        let t_next = if k + 1 == n { spec.t_end } else { (k + 1) as f64 * spec.dt };
        let h = t_next - t;
        let inc = match spec.method {
            Method::Rk4 => rk4_increment(&state, t, h, params, law),
            Method::ImplicitMidpoint => {
                midpoint_increment(&state, t, h, params, law, spec.tolerance, spec.max_iterations).map(
                    |(inc, iters)| {
                        stats.total_iterations += iters;
                        stats.max_iterations = stats.max_iterations.max(iters);
                        inc
                    },
                )
            }
        }
        .map_err(|e| Error::Integration {
            t,
            source: Box::new(e),
        })?;
        let next = acc.add(&state, &inc);
        if !next.is_finite() {
            return Err(Error::Integration {
                t,
                source: Box::new(Error::non_finite("state update")),
            });
        }

        let c = casimir_values(&kinds, &next);
        for (a, b) in c.iter().zip(&prev_c) {
            max_defect = max_defect.max((a - b).abs());
        }
        prev_c = c;
        state = next;
        if (k + 1) % spec.decimation == 0 || k + 1 == n {
            samples.push(sample(&kinds, t_next, state, params));
        }
    }

    Ok(Trajectory {
        casimir_kinds: kinds,
        samples,
        meta: TrajectoryMeta {
            params: *params,
            law: law.clone(),
            spec: *spec,
            step_count: n,
            midpoint: (spec.method == Method::ImplicitMidpoint).then_some(stats),
            max_step_casimir_defect: max_defect,
        },
    })
}
