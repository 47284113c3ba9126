use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "purcell1d",
    version,
    about = "One-dimensional atom in a two-port cavity: spectra, saturation, dynamics and device design",
    after_help = "Rates are in units of kappa unless a flag says otherwise. Grids: \"a:b:n\" (linear, inclusive) or \"log:a:b:n\" (10^a to 10^b)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON object with the same keys as the subcommand flags; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// CSV destination (standard output when absent).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Run manifest destination; defaults to `<out>.manifest.json` next to
    /// `--out`, and is skipped when writing to standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linear (or fixed-power) transmission spectrum.
    Spectrum(SpectrumArgs),
    /// Resonant transmission versus saturation parameter.
    Saturation(SaturationArgs),
    /// Time evolution of the emitter under a constant drive.
    Dynamics(DynamicsArgs),
    /// Micropillar diameter sweep and optimization.
    Pillar(PillarArgs),
    /// Group delay and loss of a chain of emitter-cavity stages.
    Slowlight(SlowlightArgs),
    /// Transmitted-power slope and feedback monotonicity scan.
    Bistability(BistabilityArgs),
    /// Contrast enhancement of a pulse pair.
    Reshape(ReshapeArgs),
    /// Kerr medium length with the same pi phase shift.
    Kerr(KerrArgs),
}

/// Emitter-cavity parameters, normalized to `kappa = 1`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SystemArgs {
    /// Gamma / kappa [default: 0.002].
    #[arg(long)]
    pub gamma_over_kappa: Option<f64>,
    /// Cavity-emitter detuning delta / kappa [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Q / Q0 [default: 1].
    #[arg(long)]
    pub q_ratio: Option<f64>,
    /// Emitter ratio f [default: infinite].
    #[arg(long)]
    pub f: Option<f64>,
    /// Pure dephasing rate gamma* / gamma, included in f [default: 0].
    #[arg(long)]
    pub gamma_star: Option<f64>,
    /// Lossless system: ignore q-ratio, f and gamma-star.
    #[arg(long)]
    pub ideal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryArg {
    FabryPerot,
    Evanescent,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Detuning grid delta_omega / kappa [default: -2:2:2001].
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Drive strength 4 P_in / gamma; 0 gives the linear spectrum [default: 0].
    #[arg(long)]
    pub x: Option<f64>,
    /// Port geometry [default: fabry-perot].
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryArg>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SaturationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Grid of x = 4 P_in / gamma [default: log:-3:4:701].
    #[arg(long, allow_hyphen_values = true)]
    pub x_grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CavityArg {
    Eliminated,
    Explicit,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct DynamicsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Drive strength 4 P_in / gamma [default: 1].
    #[arg(long)]
    pub x: Option<f64>,
    /// Drive detuning delta_omega / gamma [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub delta_omega: Option<f64>,
    /// Duration in units of 1/gamma [default: 20].
    #[arg(long)]
    pub duration: Option<f64>,
    /// Number of sample intervals [default: 1000].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Initial population difference [default: -0.5].
    #[arg(long, allow_hyphen_values = true)]
    pub s_z0: Option<f64>,
    /// Initial coherence, real part [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub s_re0: Option<f64>,
    /// Initial coherence, imaginary part [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub s_im0: Option<f64>,
    /// Cavity treatment [default: eliminated].
    #[arg(long, value_enum)]
    pub cavity: Option<CavityArg>,
    /// Relative tolerance [default: 1e-10].
    #[arg(long)]
    pub rtol: Option<f64>,
    /// Absolute tolerance [default: 1e-12].
    #[arg(long)]
    pub atol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    Contrast,
    Purcell,
    Efficiency,
    BetaSq,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct PillarArgs {
    /// Planar-cavity quality factor [default: 1000].
    #[arg(long)]
    pub q0: Option<f64>,
    /// Quantity to maximize [default: contrast].
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Smallest diameter, um [default: 0.5].
    #[arg(long)]
    pub d_min: Option<f64>,
    /// Largest diameter, um [default: 8].
    #[arg(long)]
    pub d_max: Option<f64>,
    /// Etching parameter [default: 0.007].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Wavelength, um [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Refractive index [default: 3.5].
    #[arg(long)]
    pub n_index: Option<f64>,
    /// gamma_at / gamma_free [default: 1].
    #[arg(long)]
    pub loss_ratio: Option<f64>,
    /// gamma* / gamma_free [default: 0].
    #[arg(long)]
    pub gamma_star_ratio: Option<f64>,
    /// Sidewall field coefficient c_E, um [default: calibrated].
    #[arg(long)]
    pub c_e: Option<f64>,
    /// Sidewall field exponent [default: 2].
    #[arg(long)]
    pub p_exp: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct SlowlightArgs {
    /// Gamma / kappa [default: 0.001].
    #[arg(long)]
    pub gamma_over_kappa: Option<f64>,
    /// Emitter ratio f [default: 10].
    #[arg(long)]
    pub f: Option<f64>,
    /// Number of stages in the chain [default: 10].
    #[arg(long)]
    pub n_stages: Option<u32>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct BistabilityArgs {
    /// Fed-back fraction A of the transmitted power [default: 0.5].
    #[arg(long)]
    pub fraction_a: Option<f64>,
    /// Grid of x = P_e / P_c [default: log:-3:4:7001].
    #[arg(long, allow_hyphen_values = true)]
    pub x_grid: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct ReshapeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Input extinction ratio d [default: 10].
    #[arg(long)]
    pub extinction: Option<f64>,
    /// Grid of x for the high pulse [default: log:-3:3:601].
    #[arg(long, allow_hyphen_values = true)]
    pub x_grid: Option<String>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default)]
pub struct KerrArgs {
    /// Wavelength, m [default: 1e-6].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Non-linear index, cm^2/W [default: 1e-13].
    #[arg(long)]
    pub n2: Option<f64>,
    /// Intensity, W/cm^2 [default: 1].
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Radiative lifetime for the critical power, s [default: 1e-10].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Focal area, cm^2 [default: 1e-8].
    #[arg(long)]
    pub sigma: Option<f64>,
}

/// Overlays the flags given on the command line onto the config object.
pub fn resolve<T>(flags: &T, config: Option<&Map<String, Value>>) -> Result<T, CliError>
where
    T: Args + Serialize + DeserializeOwned,
{
    let mut merged = config.cloned().unwrap_or_default();
    let known: BTreeSet<String> = T::augment_args(clap::Command::new("config"))
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect();
    if let Some(bad) = merged.keys().find(|k| !known.contains(*k)) {
        return Err(CliError::Usage(format!("unknown config key `{bad}`")));
    }
    let Value::Object(given) = serde_json::to_value(flags).expect("flags serialize") else {
        unreachable!("argument structs serialize to objects")
    };
    for (k, v) in given {
        if v.is_null() || v == Value::Bool(false) {
            continue;
        }
        merged.insert(k, v);
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("config: {e}")))
}
