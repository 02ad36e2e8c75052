//! Fixed-step classical Runge–Kutta propagation.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::{vector_field, State, SystemSpec};
use crate::math::round;

/// Default step size in time units.
pub const DEFAULT_DT: f64 = 0.01;
/// Default transient for the Liénard kinds, in steps.
pub const LIENARD_TRANSIENT: u64 = 100_000;
/// Default transient for the non-polynomial kinds, in steps.
pub const NON_POLYNOMIAL_TRANSIENT: u64 = 1_000_000;
/// Default number of recorded steps for single-point studies.
pub const DEFAULT_RECORD: u64 = 2_000_000;

/// The state stopped being finite at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divergence {
    pub t: f64,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trajectory diverged at t = {}", self.t)
    }
}

impl core::error::Error for Divergence {}

/// One classical RK4 step from `(s, t)`.
#[inline]
pub fn rk4_step(spec: &SystemSpec, s: State, t: f64, dt: f64) -> Result<State, Divergence> {
    let h2 = 0.5 * dt;
    let k1 = vector_field(spec, s, t);
    let k2 = vector_field(spec, s.axpy(h2, k1), t + h2);
    let k3 = vector_field(spec, s.axpy(h2, k2), t + h2);
    let k4 = vector_field(spec, s.axpy(dt, k3), t + dt);
    let h6 = dt / 6.0;
    let next = State {
        x: s.x + h6 * (k1.x + 2.0 * (k2.x + k3.x) + k4.x),
        y: s.y + h6 * (k1.y + 2.0 * (k2.y + k3.y) + k4.y),
    };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Divergence { t: t + dt })
    }
}

/// Stepping cursor over a single trajectory.
///
/// Time is computed as `t0 + n * dt` rather than accumulated, so sample times
/// stay exactly uniform over long runs.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    spec: &'a SystemSpec,
    state: State,
    t0: f64,
    dt: f64,
    step: u64,
}

impl<'a> Propagator<'a> {
    pub fn new(spec: &'a SystemSpec, ic: State, t0: f64, dt: f64) -> Self {
        Propagator {
            spec,
            state: ic,
            t0,
            dt,
            step: 0,
        }
    }

    pub fn state(&self) -> State {
        self.state
    }

    pub fn time(&self) -> f64 {
        self.t0 + self.step as f64 * self.dt
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    #[inline]
    pub fn advance(&mut self) -> Result<State, Divergence> {
        self.state = rk4_step(self.spec, self.state, self.time(), self.dt)?;
        self.step += 1;
        Ok(self.state)
    }

    pub fn advance_by(&mut self, steps: u64) -> Result<State, Divergence> {
        for _ in 0..steps {
            self.advance()?;
        }
        Ok(self.state)
    }
}

/// Which coordinate feeds the event statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    X,
    Y,
}

impl Observable {
    #[inline]
    pub fn pick(self, s: State) -> f64 {
        match self {
            Observable::X => s.x,
            Observable::Y => s.y,
        }
    }

    #[inline]
    pub fn other(self, s: State) -> f64 {
        match self {
            Observable::X => s.y,
            Observable::Y => s.x,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Observable::X => "x",
            Observable::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanError {
    NonPositiveStep,
    EmptyRecord,
    ZeroSampling,
    NonPositivePeriod,
    NonFiniteInitialCondition,
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanError::NonPositiveStep => "dt must be > 0",
            PlanError::EmptyRecord => "record_steps must be >= sample_every",
            PlanError::ZeroSampling => "sample_every must be >= 1",
            PlanError::NonPositivePeriod => "stroboscopic period must be > 0",
            PlanError::NonFiniteInitialCondition => "initial condition must be finite",
        })
    }
}

impl core::error::Error for PlanError {}

/// How long to integrate and what to keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPlan {
    pub ic: State,
    pub dt: f64,
    pub t0: f64,
    /// Steps integrated and discarded before recording starts.
    pub transient_steps: u64,
    /// Length of the recording window, in steps.
    pub record_steps: u64,
    /// Record every k-th step of the window (ignored in stroboscopic mode).
    pub sample_every: u64,
    pub observable: Observable,
    /// Record only at `t0 + m * period` (nearest step) instead of every k-th step.
    pub stroboscopic: Option<f64>,
}

impl SimPlan {
    /// Defaults for a given kind: dt = 0.01, kind-specific transient and observable,
    /// 2e6 recorded steps.
    pub fn for_kind(kind: crate::SystemKind) -> Self {
        let (transient_steps, observable) = if kind.is_lienard() {
            (LIENARD_TRANSIENT, Observable::Y)
        } else {
            (NON_POLYNOMIAL_TRANSIENT, Observable::X)
        };
        SimPlan {
            ic: default_ic(kind),
            dt: DEFAULT_DT,
            t0: 0.0,
            transient_steps,
            record_steps: DEFAULT_RECORD,
            sample_every: 1,
            observable,
            stroboscopic: None,
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(PlanError::NonPositiveStep);
        }
        if self.sample_every == 0 {
            return Err(PlanError::ZeroSampling);
        }
        if self.record_steps == 0 || self.record_steps < self.sample_every {
            return Err(PlanError::EmptyRecord);
        }
        if let Some(p) = self.stroboscopic {
            if !(p > 0.0 && p.is_finite()) {
                return Err(PlanError::NonPositivePeriod);
            }
        }
        if !self.ic.is_finite() || !self.t0.is_finite() {
            return Err(PlanError::NonFiniteInitialCondition);
        }
        Ok(())
    }

    /// Number of samples the plan produces in regular (non-stroboscopic) mode.
    pub fn sample_count(&self) -> u64 {
        self.record_steps / self.sample_every
    }
}

/// Initial condition used when none is given: `(0.1, 0.1)` for Liénard kinds and
/// the origin for the non-polynomial kinds.
pub fn default_ic(kind: crate::SystemKind) -> State {
    if kind.is_lienard() {
        State::new(0.1, 0.1)
    } else {
        State::ORIGIN
    }
}

/// Recorded samples of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Selected observable.
    pub values: Vec<f64>,
    /// The other coordinate.
    pub companion: Vec<f64>,
    pub observable: Option<Observable>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Samples as `(t, x, y)` regardless of which coordinate is the observable.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let swap = self.observable == Some(Observable::Y);
        self.times
            .iter()
            .zip(self.values.iter().zip(&self.companion))
            .map(move |(&t, (&v, &c))| if swap { (t, c, v) } else { (t, v, c) })
    }
}

/// Drives the plan and hands every recorded `(t, state)` to `sink`.
///
/// Regular mode records the state after global step `transient + j * sample_every`
/// for `j = 0 .. record_steps / sample_every` (so with no transient the initial
/// condition is the first sample). Stroboscopic mode records the state at the step
/// nearest to each `t0 + m * period` that falls in `[transient, transient + record)`.
/// Returns the final state.
pub fn drive<F>(spec: &SystemSpec, plan: &SimPlan, mut sink: F) -> Result<State, Divergence>
where
    F: FnMut(f64, State),
{
    let mut prop = Propagator::new(spec, plan.ic, plan.t0, plan.dt);
    prop.advance_by(plan.transient_steps)?;
    let start = plan.transient_steps;
    let end = start + plan.record_steps;
    match plan.stroboscopic {
        None => {
            let count = plan.sample_count();
            for j in 0..count {
                if j > 0 {
                    prop.advance_by(plan.sample_every)?;
                }
                sink(prop.time(), prop.state());
            }
        }
        Some(period) => {
            let steps_per_period = period / plan.dt;
            // first strobe index whose nearest step is inside the window
            let mut m = (start as f64 / steps_per_period) as u64;
            loop {
                let target = round(m as f64 * steps_per_period) as u64;
                if target >= end {
                    break;
                }
                if target >= start {
                    prop.advance_by(target - prop.steps_taken())?;
                    sink(prop.time(), prop.state());
                }
                m += 1;
            }
        }
    }
    Ok(prop.state())
}

/// Integrates the plan and collects the recorded samples.
pub fn simulate(spec: &SystemSpec, plan: &SimPlan) -> Result<Trajectory, SimError> {
    plan.validate().map_err(SimError::Plan)?;
    let cap = match plan.stroboscopic {
        None => plan.sample_count() as usize,
        Some(p) => (plan.record_steps as f64 * plan.dt / p) as usize + 1,
    };
    let mut traj = Trajectory {
        times: Vec::with_capacity(cap),
        values: Vec::with_capacity(cap),
        companion: Vec::with_capacity(cap),
        observable: Some(plan.observable),
    };
    let obs = plan.observable;
    drive(spec, plan, |t, s| {
        traj.times.push(t);
        traj.values.push(obs.pick(s));
        traj.companion.push(obs.other(s));
    })
    .map_err(SimError::Diverged)?;
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimError {
    Plan(PlanError),
    Diverged(Divergence),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Plan(e) => write!(f, "invalid simulation plan: {e}"),
            SimError::Diverged(d) => d.fmt(f),
        }
    }
}

impl core::error::Error for SimError {}

impl From<Divergence> for SimError {
    fn from(d: Divergence) -> Self {
        SimError::Diverged(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SystemKind;

    fn plan(record: u64) -> SimPlan {
        SimPlan {
            ic: State::ORIGIN,
            dt: 0.01,
            t0: 0.0,
            transient_steps: 0,
            record_steps: record,
            sample_every: 1,
            observable: Observable::X,
            stroboscopic: None,
        }
    }

    /// x'' = -x: the Liénard form with gamma = -1 (LM would need gamma = +1).
    fn harmonic() -> SystemSpec {
        let mut s = SystemSpec::zero(SystemKind::L1);
        s.gamma = -1.0;
        s
    }

    #[test]
    fn free_particle_step_is_exact() {
        let spec = SystemSpec::zero(SystemKind::L1);
        let s = rk4_step(&spec, State::new(0.0, 1.0), 0.0, 0.1).unwrap();
        assert_eq!(s, State::new(0.1, 1.0));
    }

    #[test]
    fn zero_field_fixed_point() {
        let spec = SystemSpec::zero(SystemKind::L1);
        let s0 = State::new(2.5, 0.0);
        assert_eq!(rk4_step(&spec, s0, 3.0, 0.1).unwrap(), s0);
    }

    #[test]
    fn harmonic_single_step() {
        let spec = harmonic();
        let dt = 0.1;
        let s = rk4_step(&spec, State::new(1.0, 0.0), 0.0, dt).unwrap();
        assert!((s.x - libm::cos(dt)).abs() < 1e-7);
        assert!((s.y + libm::sin(dt)).abs() < 1e-7);
    }

    #[test]
    fn divergence_is_reported() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.beta = -1.0;
        let mut p = plan(100_000);
        p.ic = State::new(10.0, 0.0);
        p.dt = 0.1;
        match simulate(&spec, &p) {
            Err(SimError::Diverged(d)) => assert!(d.t > 0.0 && d.t < 10_000.0),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn unforced_equilibrium_stays_zero() {
        let mut spec = SystemSpec::zero(SystemKind::NP1);
        spec.omega0_sq = 0.25;
        spec.lambda = 0.5;
        spec.alpha = 0.2;
        let traj = simulate(&spec, &plan(5000)).unwrap();
        assert!(traj.values.iter().chain(&traj.companion).all(|&v| v == 0.0));
    }

    #[test]
    fn bookkeeping() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.f1 = 0.3;
        spec.omega1 = 1.1;
        let traj = simulate(&spec, &plan(1234)).unwrap();
        assert_eq!(traj.len(), 1234);
        for w in traj.times.windows(2) {
            assert!((w[1] - w[0] - 0.01).abs() < 1e-12);
        }
        let mut p = plan(1000);
        p.sample_every = 7;
        let traj = simulate(&spec, &p).unwrap();
        assert_eq!(traj.len(), 142);
        for w in traj.times.windows(2) {
            assert!((w[1] - w[0] - 0.07).abs() < 1e-12);
        }
    }

    #[test]
    fn transient_is_a_prefix() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.alpha = 0.45;
        spec.beta = 0.5;
        spec.gamma = 0.5;
        spec.f1 = 0.2;
        spec.omega1 = 0.7315;
        let mut long = plan(3000);
        long.ic = State::new(0.1, 0.1);
        let full = simulate(&spec, &long).unwrap();
        let mut short = long;
        short.transient_steps = 1000;
        short.record_steps = 2000;
        let tail = simulate(&spec, &short).unwrap();
        assert_eq!(&full.values[1000..], &tail.values[..]);
        assert_eq!(&full.companion[1000..], &tail.companion[..]);
        assert_eq!(&full.times[1000..], &tail.times[..]);
    }

    #[test]
    fn stroboscopic_samples_every_period() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.f1 = 1.0;
        spec.omega1 = 1.0;
        let mut p = plan(10_000);
        p.transient_steps = 500;
        p.stroboscopic = Some(core::f64::consts::TAU);
        let traj = simulate(&spec, &p).unwrap();
        // strobes at 2*pi*m for m = 1..=16 lie in [5, 105)
        assert_eq!(traj.len(), 16);
        for (m, t) in (1..).zip(&traj.times) {
            assert!((t - core::f64::consts::TAU * m as f64).abs() <= 0.005 + 1e-12);
        }
    }

    #[test]
    fn rows_orders_coordinates() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.bias = 1.0;
        let mut p = plan(3);
        p.observable = Observable::Y;
        p.ic = State::new(5.0, 0.0);
        let traj = simulate(&spec, &p).unwrap();
        let rows: Vec<_> = traj.rows().collect();
        assert_eq!(rows[0], (0.0, 5.0, 0.0));
        assert!(rows[2].2 > 0.0);
    }

    #[test]
    fn invalid_plans() {
        let mut p = plan(10);
        p.dt = 0.0;
        assert_eq!(p.validate(), Err(PlanError::NonPositiveStep));
        let mut p = plan(10);
        p.sample_every = 0;
        assert_eq!(p.validate(), Err(PlanError::ZeroSampling));
        let mut p = plan(0);
        p.sample_every = 1;
        assert_eq!(p.validate(), Err(PlanError::EmptyRecord));
    }
}
