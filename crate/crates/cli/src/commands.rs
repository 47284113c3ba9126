use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use purcell1d::applications::{bistability_scan, contrast_enhancement, critical_power_watts, kerr_equivalent, slow_light, switching_intensity};
use purcell1d::dynamics::{integrate_with, CavityTreatment, StepControl};
use purcell1d::linear::{linewidths_ideal, resonance_extrema, transmission_empty, transmission_leaky};
use purcell1d::nonlinear::{critical_power, saturation_row, scatter_steady, steady_state};
use purcell1d::pillar::{
    figures_of_merit, optimize_diameter, sweep_table, FieldProfileModel, Objective, PillarDesign,
    CALIBRATION_D_UM, CALIBRATION_Q, CALIBRATION_Q0, DEFAULT_EPSILON,
};
use purcell1d::{BlochState, CsvTable, DriveField, Error, Geometry, SystemParams};

use crate::args::*;
use crate::grid::parse_grid;
use crate::CliError;

pub struct Output {
    pub table: CsvTable,
    pub derived: Map<String, Value>,
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn invalid(name: &'static str, reason: &str) -> CliError {
    CliError::Domain(Error::InvalidArgument {
        name,
        reason: reason.to_string(),
    })
}

pub fn system_params(a: &SystemArgs, default_gamma: f64) -> Result<SystemParams, CliError> {
    let g = a.gamma_over_kappa.unwrap_or(default_gamma);
    let delta = a.delta.unwrap_or(0.0);
    if a.ideal {
        return Ok(SystemParams::ideal(g, 1.0, delta)?);
    }
    let q = a.q_ratio.unwrap_or(1.0);
    if !(q > 0.0 && q <= 1.0) {
        return Err(invalid("q_ratio", "must lie in (0, 1]"));
    }
    let gamma_cav = 2.0 * (1.0 / q - 1.0);
    let gamma_star = a.gamma_star.unwrap_or(0.0) * g;
    let gamma_at = match a.f {
        None => 0.0,
        Some(f) if f > 0.0 => {
            let at = q * g / f - 2.0 * gamma_star;
            if at < -1e-12 * q * g / f {
                return Err(invalid("f", "smaller than the dephasing alone allows (gamma_at < 0)"));
            }
            at.max(0.0)
        }
        Some(_) => return Err(invalid("f", "must be > 0")),
    };
    let p = SystemParams::new(g, 1.0, delta, gamma_at, gamma_cav, gamma_star)?;
    if !p.is_bad_cavity() {
        eprintln!(
            "warning: gamma/kappa = {g} is outside the bad-cavity regime; the adiabatic elimination is unreliable"
        );
    }
    Ok(p)
}

fn params_json(p: &SystemParams) -> Value {
    let mut v = to_json(p);
    v["beta"] = json!(p.beta());
    v
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Output, CliError> {
    let p = system_params(&a.system, 0.002)?;
    let grid = parse_grid(a.grid.as_deref().unwrap_or("-2:2:2001"))?;
    let x = a.x.unwrap_or(0.0);
    if !(x >= 0.0 && x.is_finite()) {
        return Err(invalid("x", "must be finite and >= 0"));
    }
    let geometry = match a.geometry.unwrap_or(GeometryArg::FabryPerot) {
        GeometryArg::FabryPerot => Geometry::FabryPerot,
        GeometryArg::Evanescent => Geometry::Evanescent,
    };
    let p_in = x * p.gamma() / 4.0;

    let rows: Vec<Result<[f64; 7], Error>> = grid
        .par_iter()
        .map(|&dw| {
            let (mut t, mut r) = if p_in == 0.0 {
                let lin = transmission_leaky(dw, &p);
                (lin.t, lin.r)
            } else {
                let out = scatter_steady(&DriveField::from_power(dw, p_in)?, &p)?;
                (out.t, out.r)
            };
            if geometry == Geometry::Evanescent {
                std::mem::swap(&mut t, &mut r);
            }
            let (cap_t, cap_r) = (t.norm_sqr(), r.norm_sqr());
            let empty = transmission_empty(dw, &p).in_geometry(geometry);
            Ok([dw, cap_t, cap_r, 1.0 - cap_t - cap_r, empty.cap_t, t.re, t.im])
        })
        .collect();

    let mut table = CsvTable::new(&["delta_omega", "T", "R", "leaks", "T_empty", "re_t", "im_t"]);
    for row in rows {
        table.push_floats(&row?);
    }

    let mut derived = Map::new();
    derived.insert("params".into(), params_json(&p));
    derived.insert("geometry".into(), to_json(&geometry));
    if p.delta() == 0.0 {
        derived.insert("extrema".into(), to_json(&resonance_extrema(&p)));
        if p.is_ideal() {
            derived.insert("linewidths".into(), to_json(&linewidths_ideal(&p)?));
        }
    }
    Ok(Output { table, derived })
}

fn check_sorted(grid: &[f64], name: &'static str) -> Result<(), CliError> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid(name, "must be sorted in increasing order"));
    }
    Ok(())
}

pub fn saturation(a: &SaturationArgs) -> Result<Output, CliError> {
    let p = system_params(&a.system, 0.002)?;
    let grid = parse_grid(a.x_grid.as_deref().unwrap_or("log:-3:4:701"))?;
    check_sorted(&grid, "x_grid")?;
    let rows: Vec<_> = grid.par_iter().map(|&x| saturation_row(x, &p)).collect();

    let mut table = CsvTable::new(&[
        "x", "T", "R", "Pt_over_Pc", "Pr_over_Pc", "noise_fraction", "caution",
    ]);
    for row in rows {
        let r = row?;
        let mut cells: Vec<String> = [r.x, r.cap_t, r.cap_r, r.pt_over_pc, r.pr_over_pc, r.noise_fraction]
            .iter()
            .map(|v| purcell1d::report::fmt_f64(*v))
            .collect();
        cells.push(u8::from(r.caution).to_string());
        table.push(cells);
    }

    let mut derived = Map::new();
    derived.insert("params".into(), params_json(&p));
    derived.insert("critical_power_resonant".into(), json!(critical_power(0.0, &p)?));
    if p.delta() == 0.0 {
        derived.insert("extrema".into(), to_json(&resonance_extrema(&p)));
    }
    Ok(Output { table, derived })
}

pub fn dynamics(a: &DynamicsArgs) -> Result<Output, CliError> {
    let p = system_params(&a.system, 0.002)?;
    let g = p.gamma();
    let x = a.x.unwrap_or(1.0);
    if !(x >= 0.0 && x.is_finite()) {
        return Err(invalid("x", "must be finite and >= 0"));
    }
    let drive = DriveField::from_power(a.delta_omega.unwrap_or(0.0) * g, x * g / 4.0)?;
    let duration = a.duration.unwrap_or(20.0) / g;
    let samples = a.samples.unwrap_or(1000);
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let defaults = StepControl::default();
    let control = StepControl {
        rtol: a.rtol.unwrap_or(defaults.rtol),
        atol: a.atol.unwrap_or(defaults.atol),
        sample_interval: Some(duration / samples as f64),
        ..defaults
    };
    let initial = BlochState::new(
        Complex64::new(a.s_re0.unwrap_or(0.0), a.s_im0.unwrap_or(0.0)),
        a.s_z0.unwrap_or(-0.5),
    );
    let cavity = match a.cavity.unwrap_or(CavityArg::Eliminated) {
        CavityArg::Eliminated => CavityTreatment::Eliminated,
        CavityArg::Explicit => CavityTreatment::Explicit,
    };
    let traj = integrate_with(&drive, &p, initial, duration, &control, cavity)?;

    let mut derived = Map::new();
    derived.insert("params".into(), params_json(&p));
    derived.insert("p_in".into(), json!(drive.p_in()));
    if let Some(last) = traj.last_state() {
        derived.insert("final_state".into(), json!({"re_s": last.s.re, "im_s": last.s.im, "s_z": last.s_z}));
        if let Ok(exact) = steady_state(&drive, &p) {
            derived.insert(
                "steady_state".into(),
                json!({"re_s": exact.s.re, "im_s": exact.s.im, "s_z": exact.s_z}),
            );
            derived.insert("distance_to_steady_state".into(), json!(last.distance(&exact)));
        }
    }
    Ok(Output {
        table: traj.to_table(),
        derived,
    })
}

pub fn pillar(a: &PillarArgs) -> Result<Output, CliError> {
    let mut design = PillarDesign::new(a.q0.unwrap_or(1000.0), 1.0);
    if let Some(v) = a.epsilon {
        design.epsilon = v;
    }
    if let Some(v) = a.lambda {
        design.lambda_0 = v;
    }
    if let Some(v) = a.n_index {
        design.n_index = v;
    }
    if let Some(v) = a.loss_ratio {
        design.loss_ratio = v;
    }
    if let Some(v) = a.gamma_star_ratio {
        design.gamma_star_ratio = v;
    }
    let p_exp = a.p_exp.unwrap_or(2.0);
    let model = match a.c_e {
        Some(c_e) if c_e > 0.0 && p_exp > 0.0 => FieldProfileModel::PowerLaw { c_e, p_exp },
        Some(_) => return Err(invalid("c_e", "c_e and p_exp must be > 0")),
        None => FieldProfileModel::calibrated_power_law(
            CALIBRATION_Q0,
            DEFAULT_EPSILON,
            CALIBRATION_D_UM,
            CALIBRATION_Q,
            p_exp,
        )?,
    };
    let objective = match a.objective.unwrap_or(ObjectiveArg::Contrast) {
        ObjectiveArg::Contrast => Objective::Contrast,
        ObjectiveArg::Purcell => Objective::Purcell,
        ObjectiveArg::Efficiency => Objective::Efficiency,
        ObjectiveArg::BetaSq => Objective::BetaSq,
    };
    let range = (a.d_min.unwrap_or(0.5), a.d_max.unwrap_or(8.0));
    let opt = optimize_diameter(&design, objective, range, &model)?;
    if !opt.interior {
        eprintln!(
            "warning: {} has no interior maximum on [{}, {}] um; reporting the edge",
            objective.name(),
            range.0,
            range.1
        );
    }
    let at_opt = figures_of_merit(&design.with_diameter(opt.d_opt), &model)?;

    let mut derived = Map::new();
    derived.insert("objective".into(), json!(objective.name()));
    derived.insert("d_opt".into(), json!(opt.d_opt));
    derived.insert("value".into(), json!(opt.value));
    derived.insert("interior".into(), json!(opt.interior));
    derived.insert("at_optimum".into(), to_json(&at_opt));
    derived.insert("field_model".into(), to_json(&model));
    derived.insert("design".into(), to_json(&design.with_diameter(opt.d_opt)));
    Ok(Output {
        table: sweep_table(&opt.sweep),
        derived,
    })
}

pub fn slowlight(a: &SlowlightArgs) -> Result<Output, CliError> {
    let g = a.gamma_over_kappa.unwrap_or(1e-3);
    let p = SystemParams::from_ratios(g, 1.0, 0.0, 1.0, Some(a.f.unwrap_or(10.0)))?;
    let n = a.n_stages.unwrap_or(10);
    let s = slow_light(&p, n)?;
    let mut table = CsvTable::new(&["stage", "delay", "delay_times_gamma", "transmission"]);
    for k in 0..=n {
        let delay = k as f64 * s.delay_analytic;
        table.push_floats(&[k as f64, delay, delay * g, s.t_per_stage.powi(k as i32)]);
    }
    let mut derived = Map::new();
    derived.insert("params".into(), params_json(&p));
    derived.insert("slow_light".into(), to_json(&s));
    Ok(Output { table, derived })
}

pub fn bistability(a: &BistabilityArgs) -> Result<Output, CliError> {
    let p = SystemParams::ideal(0.002, 1.0, 0.0)?;
    let grid = parse_grid(a.x_grid.as_deref().unwrap_or("log:-3:4:7001"))?;
    let scan = bistability_scan(&p, a.fraction_a.unwrap_or(0.5), &grid)?;
    let mut table = CsvTable::new(&["x", "slope_analytic", "slope_numeric", "p0"]);
    for r in &scan.rows {
        table.push_floats(&[r.x, r.slope_analytic, r.slope_numeric, r.p0]);
    }
    let mut derived = Map::new();
    derived.insert("scan".into(), to_json(&scan));
    Ok(Output { table, derived })
}

pub fn reshape(a: &ReshapeArgs) -> Result<Output, CliError> {
    let p = system_params(&a.system, 0.002)?;
    let d = a.extinction.unwrap_or(10.0);
    let grid = parse_grid(a.x_grid.as_deref().unwrap_or("log:-3:3:601"))?;
    let rows: Vec<_> = grid.par_iter().map(|&x| contrast_enhancement(x, d, &p)).collect();
    let mut table = CsvTable::new(&["x", "c_ideal", "c_leaky"]);
    let mut best: Option<purcell1d::applications::ContrastEnhancement> = None;
    for row in rows {
        let c = row?;
        table.push_floats(&[c.x, c.c_ideal, c.c_leaky]);
        if best.is_none_or(|b| c.c_leaky > b.c_leaky) {
            best = Some(c);
        }
    }
    let mut derived = Map::new();
    derived.insert("params".into(), params_json(&p));
    derived.insert("best".into(), to_json(&best));
    Ok(Output { table, derived })
}

pub fn kerr(a: &KerrArgs) -> Result<Output, CliError> {
    let lambda = a.lambda.unwrap_or(1e-6);
    let n2 = a.n2.unwrap_or(1e-13);
    let intensity = a.intensity.unwrap_or(1.0);
    let length = kerr_equivalent(lambda, n2, intensity)?;
    let p_c = critical_power_watts(a.tau.unwrap_or(1e-10), lambda)?;
    let i_pi = switching_intensity(p_c, a.sigma.unwrap_or(1e-8))?;
    let mut table = CsvTable::new(&["lambda_m", "n2_cm2_per_w", "intensity_w_per_cm2", "length_m", "p_c_w", "i_pi_w_per_cm2"]);
    table.push_floats(&[lambda, n2, intensity, length, p_c, i_pi]);
    let mut derived = Map::new();
    derived.insert("length_m".into(), json!(length));
    derived.insert("p_c_w".into(), json!(p_c));
    derived.insert("i_pi_w_per_cm2".into(), json!(i_pi));
    Ok(Output { table, derived })
}
