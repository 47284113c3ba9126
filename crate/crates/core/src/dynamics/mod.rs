//! Time-domain integration of the semiclassical Bloch equations.
//!
//! The default model has the cavity adiabatically eliminated; the emitter is
//! then a three-dimensional real system `(Re s, Im s, s_z)` whose only
//! timescale is set by `gamma`. A second model keeps the cavity field as a
//! dynamical variable to measure the error made by the elimination.

mod dopri;

use std::io::Write;

use num_complex::Complex64;

use crate::error::{positive, Error, Result};
use crate::linear::leaky_t0;
use crate::model::{BlochState, DriveField, SystemParams};
use crate::report::{fmt_f64, CsvTable};

use dopri::{Stepper, Tolerance};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Spacing of the recorded samples; `None` records 1000 intervals.
    pub sample_interval: Option<f64>,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            rtol: 1e-10,
            atol: 1e-12,
            sample_interval: None,
            max_steps: 20_000_000,
        }
    }
}

impl StepControl {
    fn tolerance(&self) -> Tolerance {
        Tolerance {
            rtol: self.rtol,
            atol: self.atol,
            max_steps: self.max_steps,
        }
    }
}

/// Output amplitudes in the transmitted and reflected ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputFields {
    pub b_t: Complex64,
    pub b_r: Complex64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochState>,
    pub outputs: Vec<OutputFields>,
}

impl Trajectory {
    pub const CSV_HEADER: [&'static str; 8] =
        ["t", "re_s", "im_s", "s_z", "re_bt", "im_bt", "re_br", "im_br"];

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<BlochState> {
        self.states.last().copied()
    }

    pub fn to_table(&self) -> CsvTable {
        let mut table = CsvTable::new(&Self::CSV_HEADER);
        for ((t, st), out) in self.times.iter().zip(&self.states).zip(&self.outputs) {
            table.push(vec![
                fmt_f64(*t),
                fmt_f64(st.s.re),
                fmt_f64(st.s.im),
                fmt_f64(st.s_z),
                fmt_f64(out.b_t.re),
                fmt_f64(out.b_t.im),
                fmt_f64(out.b_r.re),
                fmt_f64(out.b_r.im),
            ]);
        }
        table
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.to_table().write(out)
    }

    fn push(&mut self, t: f64, state: BlochState, out: OutputFields) {
        self.times.push(t);
        self.states.push(state);
        self.outputs.push(out);
    }
}

/// How the cavity mode is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CavityTreatment {
    /// Cavity field slaved to the emitter at every instant.
    #[default]
    Eliminated,
    /// Cavity field integrated alongside the emitter.
    Explicit,
}

/// Coefficients of the eliminated equations
/// `s' = -decay s - drive s_z`,
/// `s_z' = -pop_rate (s_z + 1/2) + 2 Re(i s* coupling)`.
struct Eliminated {
    decay: Complex64,
    drive: Complex64,
    pop_rate: f64,
    coupling: Complex64,
}

impl Eliminated {
    fn new(drive: &DriveField, p: &SystemParams) -> Self {
        let q = p.q_ratio();
        let t0p = leaky_t0(drive.delta_omega, p);
        let root = (0.5 * p.gamma()).sqrt();
        Eliminated {
            decay: I * drive.delta_omega + 0.5 * p.gamma() * q * t0p + p.coherence_leak(),
            drive: 2.0 * I * q * root * drive.b_in * t0p,
            pop_rate: p.gamma() * q * t0p.re + p.gamma_at(),
            coupling: root * q * drive.b_in * t0p,
        }
    }

    fn rhs(&self, y: &[f64; 3]) -> [f64; 3] {
        let s = Complex64::new(y[0], y[1]);
        let ds = -self.decay * s - self.drive * y[2];
        let dz = -self.pop_rate * (y[2] + 0.5) + 2.0 * (I * s.conj() * self.coupling).re;
        [ds.re, ds.im, dz]
    }
}

/// Mean-field equations with the cavity kept. The cavity amplitude is split
/// into the part driven by the input field, which factorizes exactly against
/// the emitter operators, and the part radiated by the emitter itself, which
/// is closed with the spin-1/2 identities `S_z S- = -S-/2` and
/// `S+ S- = S_z + 1/2`. `u` tracks the radiated amplitude and `v` the matching
/// population correlation; both relax at the cavity rate and reduce to the
/// eliminated equations when `kappa >> gamma`.
struct Explicit {
    omega: f64,
    cavity: Complex64,
    pump: Complex64,
    atom_shift: Complex64,
    gamma_at: f64,
    sqrt_kappa: f64,
}

impl Explicit {
    fn new(drive: &DriveField, p: &SystemParams) -> Self {
        Explicit {
            omega: (0.5 * p.gamma() * p.kappa()).sqrt(),
            cavity: Complex64::new(
                p.kappa() + 0.5 * p.gamma_cav(),
                drive.delta_omega + p.delta(),
            ),
            pump: I * p.kappa().sqrt() * drive.b_in,
            atom_shift: I * drive.delta_omega + p.coherence_leak(),
            gamma_at: p.gamma_at(),
            sqrt_kappa: p.kappa().sqrt(),
        }
    }

    fn adiabatic(&self, st: &BlochState) -> [f64; 9] {
        let ad = self.pump / self.cavity;
        let u = -self.omega * st.s / self.cavity;
        let v = -self.omega * (st.s_z + 0.5) / self.cavity;
        [st.s.re, st.s.im, st.s_z, ad.re, ad.im, u.re, u.im, v.re, v.im]
    }

    fn rhs(&self, y: &[f64; 9]) -> [f64; 9] {
        let s = Complex64::new(y[0], y[1]);
        let sz = y[2];
        let ad = Complex64::new(y[3], y[4]);
        let u = Complex64::new(y[5], y[6]);
        let v = Complex64::new(y[7], y[8]);
        let ds = -self.atom_shift * s - 2.0 * self.omega * sz * ad + self.omega * u;
        let dz = -self.gamma_at * (sz + 0.5)
            + 2.0 * self.omega * (s.conj() * ad).re
            + 2.0 * self.omega * v.re;
        let dad = -self.cavity * ad + self.pump;
        let du = -self.cavity * u - self.omega * s;
        let dv = -self.cavity * v - self.omega * (sz + 0.5);
        [ds.re, ds.im, dz, dad.re, dad.im, du.re, du.im, dv.re, dv.im]
    }

    fn outputs(&self, b_in: Complex64, y: &[f64; 9]) -> OutputFields {
        let a = Complex64::new(y[3] + y[5], y[4] + y[6]);
        let b_t = I * self.sqrt_kappa * a;
        OutputFields { b_t, b_r: b_in + b_t }
    }
}

fn check_inputs(initial: &BlochState, duration: f64) -> Result<f64> {
    positive("duration", duration)?;
    if !initial.is_physical(1e-12) {
        return Err(Error::InvalidInitial);
    }
    Ok(duration)
}

fn sample_times(duration: f64, control: &StepControl) -> Result<Vec<f64>> {
    let dt = match control.sample_interval {
        Some(dt) => positive("sample_interval", dt)?,
        None => duration / 1000.0,
    };
    let n = (duration / dt).ceil() as usize;
    let mut times: Vec<f64> = (0..n)
        .map(|k| k as f64 * dt)
        .filter(|t| *t < duration * (1.0 - 1e-12))
        .collect();
    times.push(duration);
    Ok(times)
}

fn state_of(y: &[f64]) -> BlochState {
    BlochState::new(Complex64::new(y[0], y[1]), y[2])
}

/// Integrates the adiabatically eliminated Bloch equations from `initial`
/// over `duration`, recording samples every `control.sample_interval`.
///
/// Covers any detuning and all leak and dephasing rates.
pub fn integrate(
    drive: &DriveField,
    params: &SystemParams,
    initial: BlochState,
    duration: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    integrate_with(drive, params, initial, duration, control, CavityTreatment::Eliminated)
}

pub fn integrate_with(
    drive: &DriveField,
    params: &SystemParams,
    initial: BlochState,
    duration: f64,
    control: &StepControl,
    cavity: CavityTreatment,
) -> Result<Trajectory> {
    let duration = check_inputs(&initial, duration)?;
    let times = sample_times(duration, control)?;
    let h0 = 0.01 / params.gamma().max(drive.delta_omega.abs());
    let mut traj = Trajectory::default();

    match cavity {
        CavityTreatment::Eliminated => {
            let sys = Eliminated::new(drive, params);
            let rhs = |_t: f64, y: &[f64; 3]| sys.rhs(y);
            let mut stepper = Stepper::new(h0, control.tolerance());
            let mut y = [initial.s.re, initial.s.im, initial.s_z];
            let mut t = 0.0;
            for &t_next in &times {
                y = stepper.advance(&rhs, t, y, t_next)?;
                t = t_next;
                let st = state_of(&y);
                let (b_t, b_r) = crate::nonlinear::output_fields(drive, params, &st);
                traj.push(t, st, OutputFields { b_t, b_r });
            }
        }
        CavityTreatment::Explicit => {
            let sys = Explicit::new(drive, params);
            let rhs = |_t: f64, y: &[f64; 9]| sys.rhs(y);
            let h0 = h0.min(0.1 / params.kappa());
            let mut stepper = Stepper::new(h0, control.tolerance());
            let mut y = sys.adiabatic(&initial);
            let mut t = 0.0;
            for &t_next in &times {
                y = stepper.advance(&rhs, t, y, t_next)?;
                t = t_next;
                traj.push(t, state_of(&y), sys.outputs(drive.b_in, &y));
            }
        }
    }
    Ok(traj)
}

/// A steady state reached by integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settled {
    pub state: BlochState,
    pub outputs: OutputFields,
    /// Time at which the convergence test first passed.
    pub time: f64,
}

/// Window, in units of `1/gamma`, between two compared states.
pub const SETTLE_WINDOW: f64 = 5.0;
/// Horizon, in units of `1/gamma`, after which settling gives up.
pub const SETTLE_HORIZON: f64 = 1.0e3;

/// Integrates from the ground state until two states one window
/// (`5/gamma`) apart differ by less than `tol` componentwise.
pub fn settle(drive: &DriveField, params: &SystemParams, tol: f64) -> Result<Settled> {
    let tol = positive("tol", tol)?;
    let sys = Eliminated::new(drive, params);
    let rhs = |_t: f64, y: &[f64; 3]| sys.rhs(y);
    let ground = [0.0, 0.0, -0.5];
    let outputs_of = |st: &BlochState| {
        let (b_t, b_r) = crate::nonlinear::output_fields(drive, params, st);
        OutputFields { b_t, b_r }
    };

    if rhs(0.0, &ground).iter().all(|v| *v == 0.0) {
        return Ok(Settled {
            state: BlochState::GROUND,
            outputs: outputs_of(&BlochState::GROUND),
            time: 0.0,
        });
    }

    let window = SETTLE_WINDOW / params.gamma();
    let horizon = SETTLE_HORIZON / params.gamma();
    let control = StepControl {
        rtol: (1e-3 * tol).min(1e-10),
        atol: (1e-5 * tol).min(1e-13),
        ..StepControl::default()
    };
    let mut stepper = Stepper::new(0.01 * window, control.tolerance());
    let mut y = ground;
    let mut t = 0.0;
    while t < horizon {
        let next = stepper.advance(&rhs, t, y, t + window)?;
        t += window;
        let delta = next
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        y = next;
        if delta < tol {
            let state = state_of(&y);
            return Ok(Settled {
                state,
                outputs: outputs_of(&state),
                time: t,
            });
        }
    }
    Err(Error::NoConvergence { horizon })
}

/// Maximum componentwise gap between the eliminated and the explicit-cavity
/// trajectories started from the same state.
pub fn elimination_error(
    drive: &DriveField,
    params: &SystemParams,
    initial: BlochState,
    duration: f64,
    control: &StepControl,
) -> Result<f64> {
    let a = integrate_with(drive, params, initial, duration, control, CavityTreatment::Eliminated)?;
    let b = integrate_with(drive, params, initial, duration, control, CavityTreatment::Explicit)?;
    Ok(a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| x.distance(y))
        .fold(0.0, f64::max))
}
