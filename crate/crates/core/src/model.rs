//! Parameter and state types shared by every module.
//!
//! All rates are angular frequencies expressed in one common unit picked by
//! the caller. Nothing here depends on the absolute scale; the command-line
//! front end normalizes `kappa = 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{finite, non_negative, positive, Error, Result};

/// Above this value of `gamma / kappa` the adiabatic elimination of the
/// cavity is no longer trustworthy.
pub const BAD_CAVITY_LIMIT: f64 = 0.1;

/// Ratio `f` between the emission rate into the cavity mode and the total
/// leak plus dephasing rate of the emitter.
///
/// The ideal emitter (`gamma_at + 2 gamma_star = 0`) is kept as an explicit
/// variant so that the ideal limits are exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum EmitterRatio {
    Finite(f64),
    Infinite,
}

impl EmitterRatio {
    pub fn value(self) -> f64 {
        match self {
            EmitterRatio::Finite(f) => f,
            EmitterRatio::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, EmitterRatio::Infinite)
    }

    /// `1/f`, exactly zero for the ideal emitter.
    pub fn recip(self) -> f64 {
        match self {
            EmitterRatio::Finite(f) => 1.0 / f,
            EmitterRatio::Infinite => 0.0,
        }
    }

    /// `beta = f / (1 + f)`, exactly one for the ideal emitter.
    pub fn beta(self) -> f64 {
        match self {
            EmitterRatio::Finite(f) => f / (1.0 + f),
            EmitterRatio::Infinite => 1.0,
        }
    }

    /// `1 / (1 + f) = 1 - beta`.
    pub fn one_minus_beta(self) -> f64 {
        match self {
            EmitterRatio::Finite(f) => 1.0 / (1.0 + f),
            EmitterRatio::Infinite => 0.0,
        }
    }
}

/// Rates and detunings of the emitter, cavity and ports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    gamma: f64,
    kappa: f64,
    delta: f64,
    gamma_at: f64,
    gamma_cav: f64,
    gamma_star: f64,
    q_ratio: f64,
    f: EmitterRatio,
    is_bad_cavity: bool,
}

impl SystemParams {
    /// Validates the rates and computes `Q/Q0`, `f` and the bad-cavity flag.
    ///
    /// `gamma` is the Purcell-enhanced emission rate into the mode, `kappa` the
    /// cavity-port coupling rate and `delta` the cavity-emitter detuning (the
    /// cavity sits at `omega_0 + delta`).
    pub fn new(
        gamma: f64,
        kappa: f64,
        delta: f64,
        gamma_at: f64,
        gamma_cav: f64,
        gamma_star: f64,
    ) -> Result<Self> {
        let gamma = positive("gamma", gamma)?;
        let kappa = positive("kappa", kappa)?;
        let delta = finite("delta", delta)?;
        let gamma_at = non_negative("gamma_at", gamma_at)?;
        let gamma_cav = non_negative("gamma_cav", gamma_cav)?;
        let gamma_star = non_negative("gamma_star", gamma_star)?;

        let q_ratio = 1.0 / (1.0 + gamma_cav / (2.0 * kappa));
        let emitter_loss = gamma_at + 2.0 * gamma_star;
        let f = if emitter_loss == 0.0 {
            EmitterRatio::Infinite
        } else {
            EmitterRatio::Finite(q_ratio * gamma / emitter_loss)
        };

        Ok(SystemParams {
            gamma,
            kappa,
            delta,
            gamma_at,
            gamma_cav,
            gamma_star,
            q_ratio,
            f,
            is_bad_cavity: gamma / kappa <= BAD_CAVITY_LIMIT,
        })
    }

    /// Lossless emitter and cavity.
    pub fn ideal(gamma: f64, kappa: f64, delta: f64) -> Result<Self> {
        Self::new(gamma, kappa, delta, 0.0, 0.0, 0.0)
    }

    /// Builds the system from the figures of merit `Q/Q0` and `f` instead of
    /// the raw leak rates (no pure dephasing). `f = None` is the ideal emitter.
    pub fn from_ratios(
        gamma: f64,
        kappa: f64,
        delta: f64,
        q_ratio: f64,
        f: Option<f64>,
    ) -> Result<Self> {
        let q = finite("q_ratio", q_ratio)?;
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidArgument {
                name: "q_ratio",
                reason: format!("must lie in (0, 1], got {q}"),
            });
        }
        let gamma_cav = 2.0 * kappa * (1.0 / q - 1.0);
        let gamma_at = match f {
            None => 0.0,
            Some(f) => q * gamma / positive("f", f)?,
        };
        Self::new(gamma, kappa, delta, gamma_at, gamma_cav, 0.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma_at(&self) -> f64 {
        self.gamma_at
    }

    pub fn gamma_cav(&self) -> f64 {
        self.gamma_cav
    }

    pub fn gamma_star(&self) -> f64 {
        self.gamma_star
    }

    /// `Q/Q0 = 1 / (1 + gamma_cav / 2 kappa)`.
    pub fn q_ratio(&self) -> f64 {
        self.q_ratio
    }

    pub fn f(&self) -> EmitterRatio {
        self.f
    }

    pub fn beta(&self) -> f64 {
        self.f.beta()
    }

    pub fn is_bad_cavity(&self) -> bool {
        self.is_bad_cavity
    }

    /// True when no leak or dephasing rate is present.
    pub fn is_ideal(&self) -> bool {
        self.gamma_at == 0.0 && self.gamma_cav == 0.0 && self.gamma_star == 0.0
    }

    /// Same system with a different cavity detuning.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(
            self.gamma,
            self.kappa,
            delta,
            self.gamma_at,
            self.gamma_cav,
            self.gamma_star,
        )
    }

    /// Atom-only coherence decay rate `gamma_at/2 + gamma_star`.
    pub(crate) fn coherence_leak(&self) -> f64 {
        0.5 * self.gamma_at + self.gamma_star
    }
}

/// Coherent drive in port 1. The second input port is always left empty,
/// except for the two-port scattering matrix of the linear module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    /// `omega_0 - omega`, emitter minus drive frequency.
    pub delta_omega: f64,
    /// Amplitude in sqrt(photons / time).
    pub b_in: Complex64,
}

impl DriveField {
    pub fn new(delta_omega: f64, b_in: Complex64) -> Result<Self> {
        finite("delta_omega", delta_omega)?;
        finite("b_in.re", b_in.re)?;
        finite("b_in.im", b_in.im)?;
        Ok(DriveField { delta_omega, b_in })
    }

    /// Real positive amplitude carrying `p_in` photons per unit time.
    pub fn from_power(delta_omega: f64, p_in: f64) -> Result<Self> {
        let p = non_negative("p_in", p_in)?;
        Self::new(delta_omega, Complex64::new(p.sqrt(), 0.0))
    }

    /// Drive whose power equals `x` times the ideal resonant critical power
    /// `gamma / 4`, the normalization used on every saturation axis.
    pub fn from_resonant_x(delta_omega: f64, x: f64, params: &SystemParams) -> Result<Self> {
        let x = non_negative("x", x)?;
        Self::from_power(delta_omega, 0.25 * x * params.gamma())
    }

    pub fn p_in(&self) -> f64 {
        self.b_in.norm_sqr()
    }
}

/// Semiclassical emitter state: dipole `s = <S->` and population `s_z = <S_z>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub s: Complex64,
    pub s_z: f64,
}

impl BlochState {
    pub const GROUND: BlochState = BlochState {
        s: Complex64 { re: 0.0, im: 0.0 },
        s_z: -0.5,
    };

    pub fn new(s: Complex64, s_z: f64) -> Self {
        BlochState { s, s_z }
    }

    /// `-1/2 <= s_z <= 1/2` and `|s|^2 <= 1/4`, up to `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.s.re.is_finite()
            && self.s.im.is_finite()
            && self.s_z.is_finite()
            && self.s_z >= -0.5 - tol
            && self.s_z <= 0.5 + tol
            && self.s.norm_sqr() <= 0.25 + tol
    }

    /// Largest componentwise distance, `s` split into real and imaginary parts.
    pub fn distance(&self, other: &BlochState) -> f64 {
        (self.s.re - other.s.re)
            .abs()
            .max((self.s.im - other.s.im).abs())
            .max((self.s_z - other.s_z).abs())
    }
}

/// Amplitudes and powers leaving the two ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringOutcome {
    pub t: Complex64,
    pub r: Complex64,
    pub cap_t: f64,
    pub cap_r: f64,
    pub p_t: f64,
    pub p_r: f64,
    /// Power not accounted for by the coherent outputs: incoherent scattering
    /// plus, for a leaky system, true loss.
    pub p_noise: f64,
}

impl ScatteringOutcome {
    pub fn from_amplitudes(t: Complex64, r: Complex64, p_in: f64) -> Self {
        let cap_t = t.norm_sqr();
        let cap_r = r.norm_sqr();
        let p_t = cap_t * p_in;
        let p_r = cap_r * p_in;
        ScatteringOutcome {
            t,
            r,
            cap_t,
            cap_r,
            p_t,
            p_r,
            p_noise: p_in - p_t - p_r,
        }
    }
}
