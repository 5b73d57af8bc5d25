//! Classical RK4 time stepping with CFL control, accumulation of the
//! continuation integral `∫(‖∇u‖_∞ + ‖∇b‖_∞)dt`, and stop detection.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Diagnostics, DiagnosticsRecord, DiagnosticsRow};
use crate::error::{Error, Result};
use crate::grid::{leray_project, SpectralField, VectorField};
use crate::mhd::{
    rhs_elsasser, rhs_euler, rhs_primitive, rhs_vorticity, CouplingMatrix, ElsasserState,
    EulerState, MhdState, VorticityState,
};

/// A set of unknowns that the integrator can advance.
pub trait Formulation: Clone {
    fn time(&self) -> f64;
    fn set_time(&mut self, t: f64);
    /// Time derivative, in the same unknowns.
    fn rhs(&self, c: &CouplingMatrix) -> Result<Self>;
    /// `self + a · d`, keeping `self`'s time.
    fn axpy(&self, a: f64, d: &Self) -> Self;
    /// Removes the rounding drift off the divergence-free (or mean-free) subspace.
    fn reproject(&mut self);
    fn is_finite(&self) -> bool;
    fn to_primitive(&self) -> Result<MhdState>;
}

impl Formulation for MhdState {
    fn time(&self) -> f64 {
        self.time
    }
    fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    fn rhs(&self, c: &CouplingMatrix) -> Result<Self> {
        Ok(rhs_primitive(self, c))
    }
    fn axpy(&self, a: f64, d: &Self) -> Self {
        MhdState {
            time: self.time,
            r: self.r.axpy(a, &d.r),
            u: self.u.axpy(a, &d.u),
            b: self.b.axpy(a, &d.b),
        }
    }
    fn reproject(&mut self) {
        self.u = leray_project(&self.u);
        self.b = leray_project(&self.b);
    }
    fn is_finite(&self) -> bool {
        self.r.is_finite() && self.u.is_finite() && self.b.is_finite()
    }
    fn to_primitive(&self) -> Result<MhdState> {
        Ok(self.clone())
    }
}

impl Formulation for ElsasserState {
    fn time(&self) -> f64 {
        self.time
    }
    fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    fn rhs(&self, c: &CouplingMatrix) -> Result<Self> {
        Ok(rhs_elsasser(self, c))
    }
    fn axpy(&self, a: f64, d: &Self) -> Self {
        ElsasserState {
            time: self.time,
            r: self.r.axpy(a, &d.r),
            alpha: self.alpha.axpy(a, &d.alpha),
            beta: self.beta.axpy(a, &d.beta),
        }
    }
    fn reproject(&mut self) {
        self.alpha = leray_project(&self.alpha);
        self.beta = leray_project(&self.beta);
    }
    fn is_finite(&self) -> bool {
        self.r.is_finite() && self.alpha.is_finite() && self.beta.is_finite()
    }
    fn to_primitive(&self) -> Result<MhdState> {
        Ok(ElsasserState::to_primitive(self))
    }
}

fn mean_free(f: &SpectralField) -> SpectralField {
    let mut g = f.clone();
    g.coeffs_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    g
}

impl Formulation for VorticityState {
    fn time(&self) -> f64 {
        self.time
    }
    fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    fn rhs(&self, c: &CouplingMatrix) -> Result<Self> {
        rhs_vorticity(self, c)
    }
    fn axpy(&self, a: f64, d: &Self) -> Self {
        let m = |p: [f64; 2], q: [f64; 2]| [p[0] + a * q[0], p[1] + a * q[1]];
        VorticityState {
            time: self.time,
            r: self.r.axpy(a, &d.r),
            x: self.x.axpy(a, &d.x),
            y: self.y.axpy(a, &d.y),
            mean_alpha: m(self.mean_alpha, d.mean_alpha),
            mean_beta: m(self.mean_beta, d.mean_beta),
        }
    }
    fn reproject(&mut self) {
        self.x = mean_free(&self.x);
        self.y = mean_free(&self.y);
    }
    fn is_finite(&self) -> bool {
        let means = self
            .mean_alpha
            .iter()
            .chain(&self.mean_beta)
            .all(|m| m.is_finite());
        means && self.r.is_finite() && self.x.is_finite() && self.y.is_finite()
    }
    fn to_primitive(&self) -> Result<MhdState> {
        VorticityState::to_primitive(self)
    }
}

impl Formulation for EulerState {
    fn time(&self) -> f64 {
        self.time
    }
    fn set_time(&mut self, t: f64) {
        self.time = t;
    }
    /// The coupling matrix plays no role without density and field.
    fn rhs(&self, _c: &CouplingMatrix) -> Result<Self> {
        Ok(rhs_euler(self))
    }
    fn axpy(&self, a: f64, d: &Self) -> Self {
        EulerState {
            time: self.time,
            u: self.u.axpy(a, &d.u),
        }
    }
    fn reproject(&mut self) {
        self.u = leray_project(&self.u);
    }
    fn is_finite(&self) -> bool {
        self.u.is_finite()
    }
    fn to_primitive(&self) -> Result<MhdState> {
        let grid = self.u.grid();
        Ok(MhdState {
            time: self.time,
            r: SpectralField::zeros(grid),
            u: self.u.clone(),
            b: VectorField::zeros(grid),
        })
    }
}

/// Which right-hand side drives a primitive-variable run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulationKind {
    Primitive,
    Elsasser,
    Vorticity,
}

impl FormulationKind {
    pub const ALL: [FormulationKind; 3] = [Self::Primitive, Self::Elsasser, Self::Vorticity];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Primitive => "primitive",
            Self::Elsasser => "elsasser",
            Self::Vorticity => "vorticity",
        }
    }
}

impl fmt::Display for FormulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulationKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown formulation `{s}`"))
    }
}

/// One RK4 step of length `dt`, followed by re-projection.
pub fn rk4_step<F: Formulation>(s: &F, dt: f64, c: &CouplingMatrix) -> Result<F> {
    if !(dt > 0.0) {
        return Err(Error::NonPositiveStep(dt));
    }
    let t = s.time();
    let stage = |base: &F, tt: f64| -> Result<F> {
        let mut b = base.clone();
        b.set_time(tt);
        b.rhs(c)
    };
    let k1 = stage(s, t)?;
    let k2 = stage(&s.axpy(0.5 * dt, &k1), t + 0.5 * dt)?;
    let k3 = stage(&s.axpy(0.5 * dt, &k2), t + 0.5 * dt)?;
    let k4 = stage(&s.axpy(dt, &k3), t + dt)?;
    let mut next = s
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4);
    next.set_time(t + dt);
    next.reproject();
    if !next.is_finite() {
        return Err(Error::NumericalBlowup { t: t + dt });
    }
    Ok(next)
}

/// Step-size control and stop rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepController {
    pub cfl: f64,
    pub dt_min: f64,
    pub t_end: f64,
    /// Stop once `‖∇u‖_∞ + ‖∇b‖_∞` reaches this value.
    pub blowup_threshold: f64,
    /// Stop once the continuation integral exceeds this value.
    pub criterion_cap: f64,
    /// Lower bound on the speed in the CFL formula.
    pub velocity_floor: f64,
    /// Use this step instead of the CFL step when set.
    pub fixed_dt: Option<f64>,
    /// Keep every k-th step in the record; the last state is always kept.
    pub record_every: usize,
}

impl Default for StepController {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            dt_min: 1e-8,
            t_end: 1.0,
            blowup_threshold: f64::INFINITY,
            criterion_cap: f64::INFINITY,
            velocity_floor: 1e-3,
            fixed_dt: None,
            record_every: 1,
        }
    }
}

impl StepController {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidController(m.to_string()));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl must lie in (0, 1]");
        }
        if !(self.dt_min > 0.0) {
            return bad("dt_min must be positive");
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be finite and nonnegative");
        }
        if !(self.velocity_floor > 0.0) {
            return bad("velocity_floor must be positive");
        }
        if self.blowup_threshold.is_nan() || self.criterion_cap.is_nan() {
            return bad("thresholds must not be NaN");
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return bad("fixed_dt must be positive");
            }
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1");
        }
        Ok(())
    }
}

/// Snaps steps that would leave a sliver before the horizon onto it.
fn land(t: f64, dt: f64, t_end: f64) -> f64 {
    let rest = t_end - t;
    if dt >= rest || rest - dt <= 1e-9 * dt {
        rest
    } else {
        dt
    }
}

/// `cfl · (2π/n) / max(‖u‖_∞ + ‖b‖_∞, floor)`, clamped to `[dt_min, t_end - t]`.
pub fn adaptive_dt(s: &MhdState, ctrl: &StepController) -> f64 {
    let speed = (s.u.max_abs() + s.b.max_abs()).max(ctrl.velocity_floor);
    let dt = (ctrl.cfl * s.grid().spacing() / speed).max(ctrl.dt_min);
    land(s.time, dt, ctrl.t_end)
}

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Horizon,
    Threshold,
    CriterionCap,
    Nan,
    Observer,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StopReason::Horizon => "horizon",
            StopReason::Threshold => "threshold",
            StopReason::CriterionCap => "criterion_cap",
            StopReason::Nan => "nan",
            StopReason::Observer => "observer",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Called with the primitive state and its diagnostics row after every step
/// (and once on the initial state).
pub trait Observer {
    fn observe(&mut self, state: &MhdState, row: &DiagnosticsRow) -> Control;
}

impl<F: FnMut(&MhdState, &DiagnosticsRow) -> Control> Observer for F {
    fn observe(&mut self, state: &MhdState, row: &DiagnosticsRow) -> Control {
        self(state, row)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome<F> {
    /// Last finite state.
    pub state: F,
    pub record: DiagnosticsRecord,
    pub reason: StopReason,
    /// Time of the step that produced non-finite values.
    pub failure_time: Option<f64>,
    pub steps: usize,
}

/// Advances `state` until the horizon or a stop rule fires. A step that
/// produces NaN or infinities ends the run with [`StopReason::Nan`] and the
/// time of failure; other errors propagate.
pub fn integrate<F: Formulation>(
    state: F,
    ctrl: &StepController,
    c: &CouplingMatrix,
    observers: &mut [&mut dyn Observer],
) -> Result<Outcome<F>> {
    ctrl.validate()?;
    let mut prim = state.to_primitive()?;
    let diag = Diagnostics::new(prim.grid());
    let mut state = state;
    let mut record = DiagnosticsRecord::new();
    let mut integral = 0.0;
    let mut row = diag.row(&prim, integral);
    let mut grad = row.grad_sum();
    record.push(row);
    let mut steps = 0;
    let mut observe = |prim: &MhdState, row: &DiagnosticsRow| {
        // every observer sees every row, even after one asks to stop
        observers
            .iter_mut()
            .fold(Control::Continue, |acc, o| match o.observe(prim, row) {
                Control::Stop => Control::Stop,
                Control::Continue => acc,
            })
    };
    let pre_stop = if observe(&prim, &row) == Control::Stop {
        Some(StopReason::Observer)
    } else {
        None
    };
    let finish = |state, record, reason, failure_time, steps| {
        Ok(Outcome {
            state,
            record,
            reason,
            failure_time,
            steps,
        })
    };
    if let Some(reason) = pre_stop {
        return finish(state, record, reason, None, steps);
    }
    loop {
        if grad >= ctrl.blowup_threshold {
            return finish(state, record, StopReason::Threshold, None, steps);
        }
        if integral > ctrl.criterion_cap {
            return finish(state, record, StopReason::CriterionCap, None, steps);
        }
        let t = state.time();
        if t >= ctrl.t_end {
            return finish(state, record, StopReason::Horizon, None, steps);
        }
        let dt = match ctrl.fixed_dt {
            Some(dt) => land(t, dt, ctrl.t_end),
            None => adaptive_dt(&prim, ctrl),
        };
        let mut next = match rk4_step(&state, dt, c) {
            Ok(next) => next,
            Err(Error::NumericalBlowup { t }) => {
                return finish(state, record, StopReason::Nan, Some(t), steps);
            }
            Err(e) => return Err(e),
        };
        if dt == ctrl.t_end - t {
            next.set_time(ctrl.t_end);
        }
        state = next;
        steps += 1;
        prim = state.to_primitive()?;
        let new_row = diag.row(&prim, 0.0);
        integral += 0.5 * dt * (grad + new_row.grad_sum());
        grad = new_row.grad_sum();
        row = DiagnosticsRow {
            criterion_integral: integral,
            ..new_row
        };
        let stop = observe(&prim, &row) == Control::Stop;
        let at_end = state.time() >= ctrl.t_end;
        if stop || at_end || steps % ctrl.record_every == 0 || grad >= ctrl.blowup_threshold {
            record.push(row);
        }
        if stop {
            return finish(state, record, StopReason::Observer, None, steps);
        }
    }
}

/// Runs primitive data through the chosen right-hand side and returns the
/// final state in primitive variables.
pub fn integrate_as(
    state: &MhdState,
    kind: FormulationKind,
    ctrl: &StepController,
    c: &CouplingMatrix,
    observers: &mut [&mut dyn Observer],
) -> Result<Outcome<MhdState>> {
    fn convert<F: Formulation>(o: Outcome<F>) -> Result<Outcome<MhdState>> {
        Ok(Outcome {
            state: o.state.to_primitive()?,
            record: o.record,
            reason: o.reason,
            failure_time: o.failure_time,
            steps: o.steps,
        })
    }
    match kind {
        FormulationKind::Primitive => integrate(state.clone(), ctrl, c, observers),
        FormulationKind::Elsasser => convert(integrate(state.to_elsasser(), ctrl, c, observers)?),
        FormulationKind::Vorticity => convert(integrate(state.to_vorticity(), ctrl, c, observers)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FourierGrid;
    use crate::mhd::presets::{build, taylor_green_velocity, Preset, PresetParams};

    fn fixed(dt: f64, t_end: f64) -> StepController {
        StepController {
            fixed_dt: Some(dt),
            t_end,
            ..Default::default()
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = FourierGrid::shared(16).unwrap();
        let s = MhdState::zeros(&g);
        let next = rk4_step(&s, 0.1, &CouplingMatrix::rotation()).unwrap();
        assert_eq!(next.max_difference(&s), 0.0);
        assert_eq!(next.time, 0.1);
        assert!(matches!(
            rk4_step(&s, 0.0, &CouplingMatrix::zero()),
            Err(Error::NonPositiveStep(_))
        ));
    }

    #[test]
    fn taylor_green_euler_is_steady() {
        let g = FourierGrid::shared(32).unwrap();
        let s = EulerState {
            time: 0.0,
            u: taylor_green_velocity(&g, 1.0),
        };
        let dt = 0.01;
        let next = rk4_step(&s, dt, &CouplingMatrix::zero()).unwrap();
        assert!(next.u.max_difference(&s.u) < dt * 1e-10);
    }

    #[test]
    fn non_finite_state_is_blowup() {
        let g = FourierGrid::shared(16).unwrap();
        let mut s = MhdState::zeros(&g);
        s.r.coeffs_mut()[1] = num_complex::Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            rk4_step(&s, 0.1, &CouplingMatrix::zero()),
            Err(Error::NumericalBlowup { .. })
        ));
        let out = integrate(s, &fixed(0.1, 1.0), &CouplingMatrix::zero(), &mut []).unwrap();
        assert_eq!(out.reason, StopReason::Nan);
        assert!((out.failure_time.unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn adaptive_dt_rules() {
        let g = FourierGrid::shared(32).unwrap();
        let ctrl = StepController {
            t_end: 100.0,
            ..Default::default()
        };
        let quiet = MhdState::zeros(&g);
        let expected = 0.4 * g.spacing() / 1e-3;
        assert!((adaptive_dt(&quiet, &ctrl) - expected).abs() < 1e-12 * expected);
        let s = build(&g, Preset::TaylorGreen, &PresetParams::default());
        let fast = MhdState {
            u: s.u.scaled(2.0),
            ..s.clone()
        };
        let ratio = adaptive_dt(&s, &ctrl) / adaptive_dt(&fast, &ctrl);
        assert!((ratio - 2.0).abs() < 1e-12);
        let near = MhdState {
            time: 100.0 - 1e-4,
            ..s
        };
        assert_eq!(adaptive_dt(&near, &ctrl), 100.0 - near.time);
    }

    #[test]
    fn controller_validation() {
        assert!(StepController::default().validate().is_ok());
        for bad in [
            StepController {
                cfl: 0.0,
                ..Default::default()
            },
            StepController {
                cfl: 1.5,
                ..Default::default()
            },
            StepController {
                dt_min: 0.0,
                ..Default::default()
            },
            StepController {
                fixed_dt: Some(-1.0),
                ..Default::default()
            },
            StepController {
                record_every: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidController(_))));
        }
    }

    #[test]
    fn horizon_and_threshold_stops() {
        let g = FourierGrid::shared(32).unwrap();
        let s = build(&g, Preset::OrszagTang, &PresetParams::default());
        let ctrl = StepController {
            t_end: 0.05,
            ..Default::default()
        };
        let out = integrate(s.clone(), &ctrl, &CouplingMatrix::rotation(), &mut []).unwrap();
        assert_eq!(out.reason, StopReason::Horizon);
        assert_eq!(out.state.time, 0.05);
        let rows = out.record.rows();
        assert!(rows
            .windows(2)
            .all(|w| w[1].criterion_integral >= w[0].criterion_integral));
        assert!(rows.last().unwrap().criterion_integral.is_finite());

        let ctrl0 = StepController {
            blowup_threshold: 0.0,
            ..ctrl
        };
        let out = integrate(s.clone(), &ctrl0, &CouplingMatrix::rotation(), &mut []).unwrap();
        assert_eq!((out.reason, out.steps), (StopReason::Threshold, 0));

        let capped = StepController {
            criterion_cap: 0.01,
            ..ctrl
        };
        let out = integrate(s, &capped, &CouplingMatrix::rotation(), &mut []).unwrap();
        assert_eq!(out.reason, StopReason::CriterionCap);
    }

    #[test]
    fn observers_see_each_step_and_can_stop() {
        let g = FourierGrid::shared(16).unwrap();
        let s = build(&g, Preset::OrszagTang, &PresetParams::default());
        let mut seen = 0;
        let mut count = |_: &MhdState, _: &DiagnosticsRow| {
            seen += 1;
            Control::Continue
        };
        let mut stop_late = |_: &MhdState, row: &DiagnosticsRow| {
            if row.t >= 0.3 {
                Control::Stop
            } else {
                Control::Continue
            }
        };
        let out = integrate(
            s,
            &fixed(0.1, 1.0),
            &CouplingMatrix::zero(),
            &mut [&mut count, &mut stop_late],
        )
        .unwrap();
        assert_eq!(out.reason, StopReason::Observer);
        assert_eq!(out.steps, 3);
        assert_eq!(seen, 4);
    }

    #[test]
    fn fixed_steps_land_on_the_horizon() {
        let g = FourierGrid::shared(16).unwrap();
        let s = build(&g, Preset::TaylorGreen, &PresetParams::default());
        let out = integrate(s, &fixed(0.1, 0.5), &CouplingMatrix::zero(), &mut []).unwrap();
        assert_eq!(out.steps, 5);
        assert_eq!(out.state.time, 0.5);
        assert_eq!(out.record.len(), 6);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let g = FourierGrid::shared(32).unwrap();
        let s = build(&g, Preset::OrszagTang, &PresetParams::default());
        let c = CouplingMatrix::rotation();
        let run = |dt: f64| {
            integrate(s.clone(), &fixed(dt, 0.2), &c, &mut [])
                .unwrap()
                .state
        };
        let (a, b, r) = (run(0.02), run(0.01), run(0.005));
        let order = (a.max_difference(&b) / b.max_difference(&r)).log2();
        assert!(order > 3.5, "{order}");
    }

    #[test]
    fn formulation_names() {
        for k in FormulationKind::ALL {
            assert_eq!(k.name().parse::<FormulationKind>().unwrap(), k);
        }
    }
}
