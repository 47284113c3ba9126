//! Micropillar cavity design: quality factor with sidewall (etching) losses,
//! mode volume, Purcell factor and the resulting figures of merit of the
//! emitter-cavity system, plus a one-dimensional optimizer over the diameter.
//!
//! Lengths are in micrometres.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{finite, positive, Error, Result};
use crate::linear::resonance_extrema;
use crate::model::SystemParams;
use crate::report::CsvTable;

pub const DEFAULT_EPSILON: f64 = 0.007;
pub const DEFAULT_LAMBDA_UM: f64 = 1.0;
pub const DEFAULT_INDEX: f64 = 3.5;

/// Design point used to calibrate the default sidewall field model.
pub const CALIBRATION_Q0: f64 = 1000.0;
pub const CALIBRATION_D_UM: f64 = 2.4;
pub const CALIBRATION_Q: f64 = 960.0;

/// Largest coarse-grid spacing used by [`optimize_diameter`].
pub const MAX_GRID_STEP_UM: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PillarDesign {
    /// Planar-cavity quality factor.
    pub q0: f64,
    /// Diameter.
    pub d: f64,
    /// Etching quality parameter.
    pub epsilon: f64,
    /// Vacuum wavelength.
    pub lambda_0: f64,
    pub n_index: f64,
    /// `gamma_at / gamma_free`: 1 for a bare pillar, about 0.1 once the
    /// sidewalls are metallized.
    pub loss_ratio: f64,
    /// `gamma_star / gamma_free`.
    pub gamma_star_ratio: f64,
}

impl PillarDesign {
    /// Bare pillar with the default material constants.
    pub fn new(q0: f64, d: f64) -> Self {
        PillarDesign {
            q0,
            d,
            epsilon: DEFAULT_EPSILON,
            lambda_0: DEFAULT_LAMBDA_UM,
            n_index: DEFAULT_INDEX,
            loss_ratio: 1.0,
            gamma_star_ratio: 0.0,
        }
    }

    pub fn with_diameter(self, d: f64) -> Self {
        PillarDesign { d, ..self }
    }

    pub fn with_loss_ratio(self, loss_ratio: f64) -> Self {
        PillarDesign { loss_ratio, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        positive("q0", self.q0)?;
        positive("d", self.d)?;
        positive("lambda_0", self.lambda_0)?;
        positive("loss_ratio", self.loss_ratio)?;
        finite("epsilon", self.epsilon)?;
        finite("gamma_star_ratio", self.gamma_star_ratio)?;
        if self.epsilon < 0.0 {
            return Err(invalid("epsilon", "must be >= 0"));
        }
        if self.gamma_star_ratio < 0.0 {
            return Err(invalid("gamma_star_ratio", "must be >= 0"));
        }
        if !self.n_index.is_finite() || self.n_index <= 1.0 {
            return Err(invalid("n_index", "must be a finite value > 1"));
        }
        Ok(())
    }
}

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.to_string(),
    }
}

/// Normalized intensity `|E(d)|^2` of the fundamental mode at the sidewall.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldProfileModel {
    /// `|E(d)|^2 = min(1, (c_e / d)^p_exp)`.
    PowerLaw { c_e: f64, p_exp: f64 },
    /// Sorted `(d, |E(d)|^2)` samples, linearly interpolated.
    Tabulated { table: Vec<(f64, f64)> },
}

impl Default for FieldProfileModel {
    /// Quadratic power law calibrated on `Q0 = 1000, eps = 0.007, d = 2.4 -> Q = 960`.
    fn default() -> Self {
        FieldProfileModel::calibrated_power_law(
            CALIBRATION_Q0,
            DEFAULT_EPSILON,
            CALIBRATION_D_UM,
            CALIBRATION_Q,
            2.0,
        )
        .expect("calibration constants are valid")
    }
}

impl FieldProfileModel {
    /// Power law whose coefficient reproduces quality factor `q_target` at
    /// diameter `d` for the given `q0` and etching parameter.
    pub fn calibrated_power_law(q0: f64, epsilon: f64, d: f64, q_target: f64, p_exp: f64) -> Result<Self> {
        positive("q0", q0)?;
        positive("epsilon", epsilon)?;
        positive("d", d)?;
        positive("p_exp", p_exp)?;
        if !(q_target > 0.0 && q_target < q0) {
            return Err(invalid("q_target", "must lie in (0, q0)"));
        }
        let intensity = (1.0 / q_target - 1.0 / q0) * d / (2.0 * epsilon);
        if intensity > 1.0 {
            return Err(invalid("q_target", "needs a sidewall intensity above 1"));
        }
        Ok(FieldProfileModel::PowerLaw {
            c_e: d * intensity.powf(1.0 / p_exp),
            p_exp,
        })
    }

    pub fn tabulated(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(invalid("table", "needs at least two samples"));
        }
        if table.iter().any(|(d, e)| !d.is_finite() || !(0.0..=1.0).contains(e)) {
            return Err(invalid("table", "intensities must lie in [0, 1]"));
        }
        if table.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(invalid("table", "diameters must be strictly increasing"));
        }
        Ok(FieldProfileModel::Tabulated { table })
    }

    pub fn sidewall_intensity(&self, d: f64) -> Result<f64> {
        positive("d", d)?;
        match self {
            FieldProfileModel::PowerLaw { c_e, p_exp } => Ok((c_e / d).powf(*p_exp).min(1.0)),
            FieldProfileModel::Tabulated { table } => {
                let (lo, hi) = (table[0].0, table[table.len() - 1].0);
                if d < lo || d > hi {
                    return Err(Error::InvalidArgument {
                        name: "d",
                        reason: format!("{d} outside tabulated range [{lo}, {hi}]"),
                    });
                }
                let k = table.partition_point(|(x, _)| *x <= d).clamp(1, table.len() - 1);
                let (x0, y0) = table[k - 1];
                let (x1, y1) = table[k];
                Ok(y0 + (y1 - y0) * (d - x0) / (x1 - x0))
            }
        }
    }
}

/// Effective mode volume `(lambda/n) pi d^2 / 8`, in cubic micrometres.
pub fn mode_volume(design: &PillarDesign) -> f64 {
    design.lambda_0 / design.n_index * PI * design.d * design.d / 8.0
}

/// `1/Q = 1/Q0 + 2 |E(d)|^2 eps / d`.
pub fn q_total(design: &PillarDesign, model: &FieldProfileModel) -> Result<f64> {
    design.validate()?;
    let leak = 2.0 * model.sidewall_intensity(design.d)? * design.epsilon / design.d;
    Ok(1.0 / (1.0 / design.q0 + leak))
}

/// `F_p = 3 Q (lambda/n)^3 / (4 pi^2 V)`.
pub fn purcell_factor(design: &PillarDesign, model: &FieldProfileModel) -> Result<f64> {
    let q = q_total(design, model)?;
    Ok(purcell_from_q(design, q))
}

fn purcell_from_q(design: &PillarDesign, q: f64) -> f64 {
    let reduced = design.lambda_0 / design.n_index;
    3.0 * q * reduced.powi(3) / (4.0 * PI * PI * mode_volume(design))
}

/// `f = F_p gamma_free / (gamma_at + 2 gamma_star)`.
pub fn emitter_ratio(design: &PillarDesign, purcell: f64) -> f64 {
    purcell / (design.loss_ratio + 2.0 * design.gamma_star_ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiguresOfMerit {
    pub d: f64,
    pub q: f64,
    pub q_ratio: f64,
    pub volume: f64,
    pub purcell: f64,
    pub f: f64,
    pub t_max: f64,
    pub t_min: f64,
    /// `T_max - T_min`.
    pub contrast: f64,
    /// Raw single-photon efficiency `beta Q/Q0`.
    pub eta: f64,
    /// Resonant absorption probability `beta^2`.
    pub beta_sq: f64,
}

pub fn figures_of_merit(design: &PillarDesign, model: &FieldProfileModel) -> Result<FiguresOfMerit> {
    let q = q_total(design, model)?;
    let purcell = purcell_from_q(design, q);
    let f = emitter_ratio(design, purcell);
    let q_ratio = q / design.q0;
    let beta = f / (1.0 + f);
    let t_max = q_ratio * q_ratio;
    let t_min = t_max / (1.0 + f).powi(2);
    Ok(FiguresOfMerit {
        d: design.d,
        q,
        q_ratio,
        volume: mode_volume(design),
        purcell,
        f,
        t_max,
        t_min,
        contrast: t_max - t_min,
        eta: beta * q_ratio,
        beta_sq: beta * beta,
    })
}

/// Emitter-cavity parameters induced by a design, for rates `gamma` and
/// `kappa` chosen by the caller (the figures of merit do not depend on them).
pub fn system_params(
    design: &PillarDesign,
    model: &FieldProfileModel,
    gamma: f64,
    kappa: f64,
) -> Result<SystemParams> {
    let fom = figures_of_merit(design, model)?;
    SystemParams::from_ratios(gamma, kappa, 0.0, fom.q_ratio, Some(fom.f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Contrast,
    Purcell,
    Efficiency,
    BetaSq,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::Contrast,
        Objective::Purcell,
        Objective::Efficiency,
        Objective::BetaSq,
    ];

    pub fn evaluate(self, fom: &FiguresOfMerit) -> f64 {
        match self {
            Objective::Contrast => fom.contrast,
            Objective::Purcell => fom.purcell,
            Objective::Efficiency => fom.eta,
            Objective::BetaSq => fom.beta_sq,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Contrast => "contrast",
            Objective::Purcell => "purcell",
            Objective::Efficiency => "efficiency",
            Objective::BetaSq => "beta_sq",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidArgument {
                name: "objective",
                reason: format!("unknown objective `{s}` (contrast, purcell, efficiency, beta_sq)"),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub objective: Objective,
    pub d_opt: f64,
    pub value: f64,
    /// False when the best grid point sits on the edge of the range; the
    /// returned point is then that edge.
    pub interior: bool,
    #[serde(skip)]
    pub sweep: Vec<FiguresOfMerit>,
}

impl Optimum {
    /// Turns an edge maximum into [`Error::NoInteriorMax`].
    pub fn require_interior(&self) -> Result<&Self> {
        if self.interior {
            Ok(self)
        } else {
            let lo = self.sweep.first().map_or(f64::NAN, |r| r.d);
            let hi = self.sweep.last().map_or(f64::NAN, |r| r.d);
            Err(Error::NoInteriorMax { lo, hi })
        }
    }
}

pub const SWEEP_HEADER: [&str; 10] = [
    "d_um", "Q", "V_um3", "Fp", "f", "Tmax", "Tmin", "contrast", "eta", "beta_sq",
];

pub fn sweep_table(sweep: &[FiguresOfMerit]) -> CsvTable {
    let mut table = CsvTable::new(&SWEEP_HEADER);
    for r in sweep {
        table.push_floats(&[
            r.d, r.q, r.volume, r.purcell, r.f, r.t_max, r.t_min, r.contrast, r.eta, r.beta_sq,
        ]);
    }
    table
}

pub fn write_sweep_csv<W: Write>(sweep: &[FiguresOfMerit], out: W) -> Result<()> {
    sweep_table(sweep).write(out)
}

/// Evaluates the figures of merit on an inclusive grid of `n` diameters.
pub fn sweep_diameters(
    base: &PillarDesign,
    model: &FieldProfileModel,
    d_range: (f64, f64),
    n: usize,
) -> Result<Vec<FiguresOfMerit>> {
    let (lo, hi) = d_range;
    if n < 2 {
        return Err(invalid("n", "need at least two grid points"));
    }
    (0..n)
        .map(|k| {
            let d = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            figures_of_merit(&base.with_diameter(d), model)
        })
        .collect()
}

const GOLDEN_TOL_UM: f64 = 1e-7;

/// Maximizes `objective` over the diameter: coarse grid scan (spacing at most
/// [`MAX_GRID_STEP_UM`]) followed by golden-section refinement around the
/// best grid point. Every design parameter except `d` is taken from `base`.
pub fn optimize_diameter(
    base: &PillarDesign,
    objective: Objective,
    d_range: (f64, f64),
    model: &FieldProfileModel,
) -> Result<Optimum> {
    let (lo, hi) = d_range;
    positive("d_min", lo)?;
    finite("d_max", hi)?;
    if hi <= lo {
        return Err(invalid("d_range", "d_max must exceed d_min"));
    }
    let n = ((hi - lo) / MAX_GRID_STEP_UM).ceil() as usize + 1;
    let sweep = sweep_diameters(base, model, d_range, n)?;

    let best = sweep
        .iter()
        .enumerate()
        .max_by(|a, b| objective.evaluate(a.1).total_cmp(&objective.evaluate(b.1)))
        .map(|(k, _)| k)
        .expect("grid is non-empty");

    if best == 0 || best == n - 1 {
        let edge = &sweep[best];
        return Ok(Optimum {
            objective,
            d_opt: edge.d,
            value: objective.evaluate(edge),
            interior: false,
            sweep,
        });
    }

    let value_at = |d: f64| -> Result<f64> {
        Ok(objective.evaluate(&figures_of_merit(&base.with_diameter(d), model)?))
    };
    let (d_opt, value) = golden_section_max(value_at, sweep[best - 1].d, sweep[best + 1].d)?;
    Ok(Optimum {
        objective,
        d_opt,
        value,
        interior: true,
        sweep,
    })
}

fn golden_section_max(g: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut gc = g(c)?;
    let mut gd = g(d)?;
    while b - a > GOLDEN_TOL_UM {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, g(x)?))
}

/// Checks that the figures of merit agree with the resonant extrema of the
/// induced emitter-cavity system; returns the largest absolute discrepancy.
pub fn consistency_gap(design: &PillarDesign, model: &FieldProfileModel) -> Result<f64> {
    let fom = figures_of_merit(design, model)?;
    let ext = resonance_extrema(&system_params(design, model, 1e-3, 1.0)?);
    Ok((fom.t_max - ext.t_max)
        .abs()
        .max((fom.t_min - ext.t_min).abs())
        .max((fom.contrast - ext.contrast).abs()))
}
