//! Linear (unsaturated) response: the emitter stays in its ground state and
//! the system acts as a frequency-dependent beam splitter.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SystemParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Port geometry. In the Fabry-Perot geometry the input is reflected when the
/// cavity is decoupled; an evanescently coupled resonator transmits it instead,
/// which swaps the roles of `t` and `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    #[default]
    FabryPerot,
    Evanescent,
}

/// One detuning sample of the linear spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearSpectrumPoint {
    pub delta_omega: f64,
    #[serde(skip)]
    pub t: Complex64,
    #[serde(skip)]
    pub r: Complex64,
    pub cap_t: f64,
    pub cap_r: f64,
    /// `1 - T - R`.
    pub leaks: f64,
}

impl LinearSpectrumPoint {
    fn from_amplitudes(delta_omega: f64, t: Complex64, r: Complex64) -> Self {
        let cap_t = t.norm_sqr();
        let cap_r = r.norm_sqr();
        LinearSpectrumPoint {
            delta_omega,
            t,
            r,
            cap_t,
            cap_r,
            leaks: 1.0 - cap_t - cap_r,
        }
    }

    pub fn in_geometry(self, geometry: Geometry) -> Self {
        match geometry {
            Geometry::FabryPerot => self,
            Geometry::Evanescent => LinearSpectrumPoint {
                t: self.r,
                r: self.t,
                cap_t: self.cap_r,
                cap_r: self.cap_t,
                ..self
            },
        }
    }
}

/// `t0 = 1 / (1 + i (delta_omega + delta) / kappa)`. The empty, lossless
/// cavity transmits `-t0`.
pub fn empty_cavity_t0(delta_omega: f64, params: &SystemParams) -> Complex64 {
    1.0 / Complex64::new(1.0, (delta_omega + params.delta()) / params.kappa())
}

/// Leaky-cavity version `t0' = 1 / (1 + i (Q/Q0) (delta_omega + delta) / kappa)`.
pub(crate) fn leaky_t0(delta_omega: f64, params: &SystemParams) -> Complex64 {
    let q = params.q_ratio();
    1.0 / Complex64::new(1.0, q * (delta_omega + params.delta()) / params.kappa())
}

/// `zeta = (delta_omega + delta) / kappa - gamma / (2 delta_omega)`.
pub fn zeta(delta_omega: f64, params: &SystemParams) -> f64 {
    (delta_omega + params.delta()) / params.kappa() - params.gamma() / (2.0 * delta_omega)
}

/// Two-port scattering matrix of the lossless system, mapping
/// `(b_in, b_in')` onto `(b_r, b_t)`.
///
/// The pole of `zeta` at `delta_omega = 0` is replaced by its limit, total
/// reflection (the identity matrix).
pub fn scattering_matrix_ideal(
    delta_omega: f64,
    params: &SystemParams,
) -> Result<Matrix2<Complex64>> {
    if !params.is_ideal() {
        return Err(Error::LeakyNotSupported);
    }
    if delta_omega == 0.0 {
        return Ok(Matrix2::identity());
    }
    let z = zeta(delta_omega, params);
    let diag = I * z;
    let norm = 1.0 / (1.0 + diag);
    let off = Complex64::new(-1.0, 0.0);
    Ok(Matrix2::new(diag, off, off, diag) * norm)
}

/// Transmission and reflection of the emitter-cavity system including cavity
/// leaks, emitter leaks and pure dephasing. The ideal system is the special
/// case `Q = Q0`, `f` infinite.
///
/// The resonant factor is evaluated as `1 / (1 + B/f + 2 i delta_omega B / (Q/Q0 gamma))`
/// with `B = 1/t0'`, which stays finite when `f` is infinite.
pub fn transmission_leaky(delta_omega: f64, params: &SystemParams) -> LinearSpectrumPoint {
    let q = params.q_ratio();
    let t0p = leaky_t0(delta_omega, params);
    let b = 1.0 / t0p;
    let lorentz = 1.0 + b * params.f().recip() + I * (2.0 * delta_omega / (q * params.gamma())) * b;
    let t = q * t0p * (-1.0 + 1.0 / lorentz);
    LinearSpectrumPoint::from_amplitudes(delta_omega, t, 1.0 + t)
}

/// Same system with the emitter removed: `t = -(Q/Q0) t0'`.
pub fn transmission_empty(delta_omega: f64, params: &SystemParams) -> LinearSpectrumPoint {
    let t = -params.q_ratio() * leaky_t0(delta_omega, params);
    LinearSpectrumPoint::from_amplitudes(delta_omega, t, 1.0 + t)
}

/// Analytic and numerically extracted widths of the lossless spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linewidths {
    /// `kappa`.
    pub analytic_broad: f64,
    /// `gamma`.
    pub analytic_dip: f64,
    /// Width of one transmission lobe, from the dip half-maximum to the
    /// cavity half-maximum on the same side.
    pub numeric_broad: f64,
    /// Full width of the reflection dip at `T = 1/2`.
    pub numeric_dip: f64,
    /// Outermost `T = 1/2` crossing (positive side).
    pub outer_crossing: f64,
    /// Innermost `T = 1/2` crossing (positive side).
    pub inner_crossing: f64,
}

const BISECTION_TOL: f64 = 1e-10;
const MAX_BRACKET_EXPANSIONS: usize = 64;

/// Linewidths of the dip and of the surrounding transmission peak for the
/// lossless, resonant (`delta = 0`) system. The crossings `T = 1/2` are located
/// by bisection starting from the analytic guesses `gamma/2` and `kappa`.
pub fn linewidths_ideal(params: &SystemParams) -> Result<Linewidths> {
    if params.delta() != 0.0 {
        return Err(Error::UnsupportedRegime(
            "linewidths are defined for delta = 0 only".into(),
        ));
    }
    if !params.is_ideal() {
        return Err(Error::LeakyNotSupported);
    }
    let gamma = params.gamma();
    let kappa = params.kappa();
    // T(dw) - 1/2 for dw > 0; negative inside the dip and beyond the cavity.
    let excess = |dw: f64| 1.0 / (1.0 + zeta(dw, params).powi(2)) - 0.5;

    let inner = crossing(&excess, 0.5 * gamma, true, BISECTION_TOL * kappa)?;
    let outer = crossing(&excess, kappa, false, BISECTION_TOL * kappa)?;

    Ok(Linewidths {
        analytic_broad: kappa,
        analytic_dip: gamma,
        numeric_broad: outer - inner,
        numeric_dip: 2.0 * inner,
        outer_crossing: outer,
        inner_crossing: inner,
    })
}

/// Finds the zero of `g` near `guess`. `rising` selects the crossing where `g`
/// goes from negative to positive with increasing argument.
fn crossing(g: &impl Fn(f64) -> f64, guess: f64, rising: bool, tol: f64) -> Result<f64> {
    let below = |v: f64| if rising { v < 0.0 } else { v > 0.0 };
    let mut lo = 0.5 * guess;
    let mut hi = 2.0 * guess;
    let mut n = 0;
    while !below(g(lo)) {
        lo *= 0.5;
        n += 1;
        if n > MAX_BRACKET_EXPANSIONS {
            return Err(Error::ScanFailed { guess });
        }
    }
    while below(g(hi)) {
        hi *= 2.0;
        n += 1;
        if n > MAX_BRACKET_EXPANSIONS {
            return Err(Error::ScanFailed { guess });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if below(g(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Resonant extrema with and without the emitter (`delta = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceExtrema {
    /// Empty-cavity transmission `(Q/Q0)^2`.
    pub t_max: f64,
    /// Transmission with the emitter, `(Q/Q0)^2 / (1+f)^2`.
    pub t_min: f64,
    pub r_max: f64,
    pub r_min: f64,
    /// Normalized resonant leaks `1 - R_max - T_min = 2 sqrt(R_max T_min)`.
    pub leaks: f64,
    /// Large-`f` approximation `2 (Q/Q0) / f`.
    pub leaks_approx: f64,
    /// `T_max - T_min`.
    pub contrast: f64,
}

pub fn resonance_extrema(params: &SystemParams) -> ResonanceExtrema {
    let q = params.q_ratio();
    let a = q * params.f().one_minus_beta();
    let t_max = q * q;
    let t_min = a * a;
    let r_max = (1.0 - a).powi(2);
    ResonanceExtrema {
        t_max,
        t_min,
        r_max,
        r_min: (1.0 - q).powi(2),
        leaks: 2.0 * a * (1.0 - a),
        leaks_approx: 2.0 * q * params.f().recip(),
        contrast: t_max - t_min,
    }
}
