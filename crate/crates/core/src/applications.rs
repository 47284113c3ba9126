//! Device-level calculators built on the scattering results: slow light in a
//! chain of emitter-cavity stages, the absence of optical bistability under
//! feedback, pulse contrast enhancement, and the length of a Kerr medium with
//! the same non-linear phase.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{positive, Error, Result};
use crate::linear::{transmission_leaky, Geometry};
use crate::model::SystemParams;
use crate::nonlinear::resonant_transmission;

/// Relative detuning step (in units of `gamma`) of the phase derivative.
pub const PHASE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlowLight {
    /// `(2/gamma) f/(1+f)`.
    pub delay_analytic: f64,
    /// `-d(arg t)/d(delta_omega)` at resonance, by central difference.
    pub delay_numeric: f64,
    /// `(f/(1+f))^2`.
    pub t_per_stage: f64,
    /// `|t|^2` at resonance from the full linear response.
    pub t_per_stage_numeric: f64,
    /// Number of stages after which half the power is left.
    pub n_half: f64,
    /// `n_half * delay_analytic`.
    pub total_delay_at_n_half: f64,
    pub n_stages: u32,
    /// Delay and power transmission after `n_stages` stages.
    pub chain_delay: f64,
    pub chain_transmission: f64,
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}

/// Each stage is a perfectly connected cavity (`Q = Q0`) used in the
/// evanescent geometry, which passes the resonant field with amplitude
/// `f/(1+f)`; a finite `f` therefore sets both the delay and the loss.
pub fn slow_light(params: &SystemParams, n_stages: u32) -> Result<SlowLight> {
    if (params.q_ratio() - 1.0).abs() > 1e-12 {
        return Err(invalid("q_ratio", "slow-light stages need Q = Q0"));
    }
    if params.gamma_star() > 0.0 {
        return Err(Error::DephasingUnsupported {
            gamma_star: params.gamma_star(),
        });
    }
    let beta = params.beta();
    let gamma = params.gamma();
    let delay_analytic = 2.0 / gamma * beta;
    let t_per_stage = beta * beta;

    let amp = |dw: f64| transmission_leaky(dw, params).in_geometry(Geometry::Evanescent).t;
    let h = PHASE_STEP * gamma;
    let phase0 = amp(0.0).arg();
    let unwrap = |p: f64| p - 2.0 * PI * ((p - phase0) / (2.0 * PI)).round();
    let delay_numeric = -(unwrap(amp(h).arg()) - unwrap(amp(-h).arg())) / (2.0 * h);

    let n_half = if params.f().is_infinite() {
        f64::INFINITY
    } else {
        0.5 * LN_2 / params.f().recip().ln_1p()
    };
    Ok(SlowLight {
        delay_analytic,
        delay_numeric,
        t_per_stage,
        t_per_stage_numeric: amp(0.0).norm_sqr(),
        n_half,
        total_delay_at_n_half: n_half * delay_analytic,
        n_stages,
        chain_delay: n_stages as f64 * delay_analytic,
        chain_transmission: t_per_stage.powi(n_stages as i32),
    })
}

/// `d P_t / d P_e = x^2 (3 + x) / (1 + x)^3` for the lossless resonant system.
pub fn transmitted_power_slope(x: f64) -> f64 {
    x * x * (3.0 + x) / (1.0 + x).powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BistabilityRow {
    pub x: f64,
    pub slope_analytic: f64,
    pub slope_numeric: f64,
    /// External drive `P_0 = P_e - A P_t`, in units of the critical power.
    pub p0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BistabilityScan {
    pub fraction_a: f64,
    pub max_slope: f64,
    pub x_at_max: f64,
    pub max_slope_mismatch: f64,
    /// `P_0(P_e)` strictly increasing on the grid, so each external drive has
    /// one operating point.
    pub unique_solution: bool,
    #[serde(skip)]
    pub rows: Vec<BistabilityRow>,
}

/// Logarithmic grid from `10^lo` to `10^hi` with `per_decade` intervals per
/// decade, endpoints included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = (((hi - lo) * per_decade as f64).ceil() as usize).max(1);
    (0..=n)
        .map(|k| 10f64.powf(lo + (hi - lo) * k as f64 / n as f64))
        .collect()
}

/// Feeds a fraction `fraction_a` of the transmitted power back into the
/// input and checks, on `x_grid`, that the external drive remains a strictly
/// increasing function of the power reaching the emitter.
pub fn bistability_scan(params: &SystemParams, fraction_a: f64, x_grid: &[f64]) -> Result<BistabilityScan> {
    if !params.is_ideal() {
        return Err(Error::LeakyNotSupported);
    }
    if params.delta() != 0.0 {
        return Err(invalid("delta", "bistability scan assumes delta = 0"));
    }
    if !(0.0..1.0).contains(&fraction_a) {
        return Err(invalid("fraction_a", "must lie in [0, 1)"));
    }
    if x_grid.is_empty() {
        return Err(invalid("x_grid", "empty grid"));
    }
    if x_grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(invalid("x_grid", "values must be finite and > 0"));
    }
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("x_grid", "must be strictly increasing"));
    }

    // P_t / P_c as a function of x = P_e / P_c
    let p_t = |x: f64| x * resonant_transmission(x, params);
    let rows: Vec<BistabilityRow> = x_grid
        .iter()
        .map(|&x| {
            let h = 1e-4 * x;
            BistabilityRow {
                x,
                slope_analytic: transmitted_power_slope(x),
                slope_numeric: (p_t(x + h) - p_t(x - h)) / (2.0 * h),
                p0: x - fraction_a * p_t(x),
            }
        })
        .collect();

    let (x_at_max, max_slope) = rows
        .iter()
        .map(|r| (r.x, r.slope_numeric))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid is non-empty");
    let max_slope_mismatch = rows
        .iter()
        .map(|r| (r.slope_numeric - r.slope_analytic).abs())
        .fold(0.0, f64::max);
    let unique_solution = rows.windows(2).all(|w| w[1].p0 > w[0].p0);
    Ok(BistabilityScan {
        fraction_a,
        max_slope,
        x_at_max,
        max_slope_mismatch,
        unique_solution,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContrastEnhancement {
    pub x: f64,
    pub extinction_in: f64,
    pub c_ideal: f64,
    pub c_leaky: f64,
}

/// `(1/d) T(x)/T(x/d)` for a high pulse at saturation parameter `x` and a low
/// pulse `d` times weaker. For the lossless system this is
/// `d ((1 + x/d)/(1 + x))^2`.
pub fn contrast_enhancement(x: f64, extinction_in: f64, params: &SystemParams) -> Result<ContrastEnhancement> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(invalid("x", "must be finite and >= 0"));
    }
    if !(extinction_in > 1.0 && extinction_in.is_finite()) {
        return Err(invalid("extinction_in", "must be finite and > 1"));
    }
    if params.delta() != 0.0 {
        return Err(invalid("delta", "contrast enhancement assumes delta = 0"));
    }
    if params.gamma_star() > 0.0 {
        return Err(Error::DephasingUnsupported {
            gamma_star: params.gamma_star(),
        });
    }
    let d = extinction_in;
    let c_ideal = d * ((1.0 + x / d) / (1.0 + x)).powi(2);
    let c_leaky = if x == 0.0 && params.is_ideal() {
        c_ideal
    } else {
        resonant_transmission(x, params) / resonant_transmission(x / d, params) / d
    };
    Ok(ContrastEnhancement {
        x,
        extinction_in,
        c_ideal,
        c_leaky,
    })
}

/// Largest leaky enhancement over `x_grid`.
pub fn best_contrast_enhancement(
    extinction_in: f64,
    params: &SystemParams,
    x_grid: &[f64],
) -> Result<ContrastEnhancement> {
    let mut best: Option<ContrastEnhancement> = None;
    for &x in x_grid {
        let c = contrast_enhancement(x, extinction_in, params)?;
        if best.is_none_or(|b| c.c_leaky > b.c_leaky) {
            best = Some(c);
        }
    }
    best.ok_or_else(|| invalid("x_grid", "empty grid"))
}

const PLANCK: f64 = 6.626_070_15e-34;
const LIGHT_SPEED: f64 = 299_792_458.0;

/// Length (m) of a Kerr medium giving a phase shift of pi:
/// `L = lambda / (2 n2 I)`, with `lambda` in m, `n2` in cm^2/W, `I` in W/cm^2.
pub fn kerr_equivalent(lambda_0: f64, n2: f64, intensity: f64) -> Result<f64> {
    positive("lambda_0", lambda_0)?;
    positive("n2", n2)?;
    positive("intensity", intensity)?;
    Ok(lambda_0 / (2.0 * n2 * intensity))
}

/// Switching intensity (W/cm^2) `10 P_c / sigma` for a critical power in W
/// and a focal area in cm^2.
pub fn switching_intensity(p_c: f64, sigma: f64) -> Result<f64> {
    positive("p_c", p_c)?;
    positive("sigma", sigma)?;
    Ok(10.0 * p_c / sigma)
}

/// Critical power (W) of an ideal emitter with radiative lifetime `tau` (s)
/// at wavelength `lambda_0` (m): a quarter photon per lifetime.
pub fn critical_power_watts(tau: f64, lambda_0: f64) -> Result<f64> {
    positive("tau", tau)?;
    positive("lambda_0", lambda_0)?;
    Ok(PLANCK * LIGHT_SPEED / lambda_0 / (4.0 * tau))
}
