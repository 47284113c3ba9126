//! Semiclassical steady state at arbitrary drive power: saturation of the
//! emitter, critical power, susceptibility and the resulting nonlinear
//! transmission.
//!
//! Two saturation parameters appear. `x = 4 P_in / gamma` is the ideal,
//! resonant normalization used on every saturation axis; `x_eff = P_in / P_c`
//! uses the critical power of the actual system at the actual detuning.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{non_negative, Error, Result};
use crate::linear::{empty_cavity_t0, leaky_t0, transmission_leaky};
use crate::model::{BlochState, DriveField, ScatteringOutcome, SystemParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Saturation parameters of a given drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaturationPoint {
    /// `4 P_in / gamma`.
    pub x: f64,
    /// `P_in / p_c`.
    pub x_eff: f64,
    /// Critical power at the drive detuning.
    pub p_c: f64,
}

/// Ideal-system cross-section factor `phi`, so that `P_c = (gamma/4) phi`.
pub fn phi_ideal(delta_omega: f64, params: &SystemParams) -> f64 {
    let u = 2.0 * delta_omega / params.gamma();
    let c = (delta_omega + params.delta()) / params.kappa();
    u * u + (u * c - 1.0).powi(2)
}

/// Leaky-system factor `phi'` (no pure dephasing). Reduces to [`phi_ideal`]
/// for `Q = Q0` and infinite `f`.
pub fn phi_leaky(delta_omega: f64, params: &SystemParams) -> f64 {
    let q = params.q_ratio();
    let inv_f = params.f().recip();
    let u = 2.0 * delta_omega / params.gamma();
    let c = (delta_omega + params.delta()) / params.kappa();
    (1.0 + inv_f).powi(2) + (q * inv_f * c).powi(2) + (u / q).powi(2) + (u * c).powi(2)
        - 2.0 * u * c
}

/// Drive power (photons per unit time) that brings the population to
/// `s_z = -1/4`.
///
/// Lossless parameters use `phi`; leaky ones use `phi'`, which is only
/// defined without pure dephasing.
pub fn critical_power(delta_omega: f64, params: &SystemParams) -> Result<f64> {
    let quarter = 0.25 * params.gamma();
    if params.is_ideal() {
        return Ok(quarter * phi_ideal(delta_omega, params));
    }
    if params.gamma_star() > 0.0 {
        return Err(Error::DephasingUnsupported {
            gamma_star: params.gamma_star(),
        });
    }
    Ok(quarter * phi_leaky(delta_omega, params))
}

pub fn saturation_point(drive: &DriveField, params: &SystemParams) -> Result<SaturationPoint> {
    let p_c = critical_power(drive.delta_omega, params)?;
    let p_in = drive.p_in();
    Ok(SaturationPoint {
        x: 4.0 * p_in / params.gamma(),
        x_eff: p_in / p_c,
        p_c,
    })
}

/// Closed-form steady state of the adiabatically eliminated Bloch equations.
///
/// Valid for the lossless system at any detuning and for the leaky system
/// without pure dephasing (`gamma_star = 0`) at any detuning.
pub fn steady_state(drive: &DriveField, params: &SystemParams) -> Result<BlochState> {
    if !params.is_ideal() && params.gamma_star() > 0.0 {
        return Err(Error::UnsupportedRegime(
            "no closed-form steady state with pure dephasing; integrate with dynamics::settle"
                .into(),
        ));
    }
    let sat = saturation_point(drive, params)?;
    let s_z = -0.5 / (1.0 + sat.x_eff);
    let q = params.q_ratio();
    let t0p = leaky_t0(drive.delta_omega, params);
    let denom = t0p
        + params.f().recip()
        + I * (2.0 * drive.delta_omega / (params.gamma() * q));
    let s = -I * (2.0 / params.gamma()).sqrt() * 2.0 * s_z * drive.b_in * t0p / denom;
    Ok(BlochState { s, s_z })
}

/// Dimensionless susceptibility `alpha`, with `s = sqrt(2/gamma) alpha b_in`,
/// of the lossless system at saturation parameter `x`.
pub fn susceptibility(delta_omega: f64, x: f64, params: &SystemParams) -> Result<Complex64> {
    if !params.is_ideal() {
        return Err(Error::LeakyNotSupported);
    }
    let x = non_negative("x", x)?;
    let t0 = empty_cavity_t0(delta_omega, params);
    let resonance = 1.0 + I * (2.0 * delta_omega / params.gamma()) / t0;
    Ok(I / resonance / (1.0 + x))
}

/// Output fields `(b_t, b_r)` for a given emitter state, second port empty.
pub fn output_fields(
    drive: &DriveField,
    params: &SystemParams,
    state: &BlochState,
) -> (Complex64, Complex64) {
    let q = params.q_ratio();
    let t0p = leaky_t0(drive.delta_omega, params);
    let b_t = -q * t0p * (drive.b_in + I * (0.5 * params.gamma()).sqrt() * state.s);
    (b_t, drive.b_in + b_t)
}

/// Steady-state scattering at any detuning (same domain as [`steady_state`]).
/// For a vanishing drive the linear coefficients are returned.
pub fn scatter_steady(drive: &DriveField, params: &SystemParams) -> Result<ScatteringOutcome> {
    let p_in = drive.p_in();
    if p_in == 0.0 {
        let lin = transmission_leaky(drive.delta_omega, params);
        return Ok(ScatteringOutcome::from_amplitudes(lin.t, lin.r, 0.0));
    }
    let state = steady_state(drive, params)?;
    let (b_t, b_r) = output_fields(drive, params, &state);
    Ok(ScatteringOutcome::from_amplitudes(
        b_t / drive.b_in,
        b_r / drive.b_in,
        p_in,
    ))
}

/// Resonant nonlinear scattering.
///
/// With `delta = 0` this is the closed form `t = (Q/Q0) (beta / (1 + beta^2 x) - 1)`
/// (`t = -x/(1+x)` for the lossless system), `x = 4 P_in / gamma`.
pub fn scatter_nonlinear(drive: &DriveField, params: &SystemParams) -> Result<ScatteringOutcome> {
    if drive.delta_omega != 0.0 {
        return Err(Error::OffResonanceUnsupported {
            delta_omega: drive.delta_omega,
        });
    }
    if !params.is_ideal() && params.gamma_star() > 0.0 {
        return Err(Error::DephasingUnsupported {
            gamma_star: params.gamma_star(),
        });
    }
    if params.delta() != 0.0 {
        return scatter_steady(drive, params);
    }
    let p_in = drive.p_in();
    let x = 4.0 * p_in / params.gamma();
    let t = resonant_t(x, params);
    Ok(ScatteringOutcome::from_amplitudes(
        Complex64::new(t, 0.0),
        Complex64::new(1.0 + t, 0.0),
        p_in,
    ))
}

/// Real resonant transmission amplitude at `x = 4 P_in / gamma`, `delta = 0`.
pub(crate) fn resonant_t(x: f64, params: &SystemParams) -> f64 {
    let q = params.q_ratio();
    let beta = params.beta();
    q * (beta / (1.0 + beta * beta * x) - 1.0)
}

/// Resonant energy transmission `T(x)` for `delta = 0`, `gamma_star = 0`.
pub fn resonant_transmission(x: f64, params: &SystemParams) -> f64 {
    resonant_t(x, params).powi(2)
}

/// Region where the semiclassical treatment is least reliable (the jump).
pub fn semiclassical_caution(x: f64) -> bool {
    x > 0.1 && x < 10.0
}

/// One row of a resonant saturation curve. Powers are normalized by the
/// ideal critical power `gamma / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaturationRow {
    pub x: f64,
    pub cap_t: f64,
    pub cap_r: f64,
    pub pt_over_pc: f64,
    pub pr_over_pc: f64,
    /// `P_noise / P_in`.
    pub noise_fraction: f64,
    pub caution: bool,
}

pub fn saturation_row(x: f64, params: &SystemParams) -> Result<SaturationRow> {
    let drive = DriveField::from_resonant_x(0.0, x, params)?;
    let out = scatter_nonlinear(&drive, params)?;
    Ok(SaturationRow {
        x,
        cap_t: out.cap_t,
        cap_r: out.cap_r,
        pt_over_pc: out.cap_t * x,
        pr_over_pc: out.cap_r * x,
        noise_fraction: 1.0 - out.cap_t - out.cap_r,
        caution: semiclassical_caution(x),
    })
}

/// Evaluates the resonant saturation curve on a nonnegative, sorted grid.
pub fn saturation_curve(params: &SystemParams, x_grid: &[f64]) -> Result<Vec<SaturationRow>> {
    for w in x_grid.windows(2) {
        if w[1] < w[0] {
            return Err(Error::InvalidArgument {
                name: "x_grid",
                reason: "must be sorted in increasing order".into(),
            });
        }
    }
    x_grid.iter().map(|&x| saturation_row(x, params)).collect()
}
