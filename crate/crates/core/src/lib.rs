//! Semiclassical model of a two-level emitter coupled to a two-port cavity in
//! the bad-cavity (Purcell) regime.
//!
//! The emitter acts as a one-dimensional atom: in the linear regime it
//! reflects resonant light completely, and it saturates at a power of about
//! one photon per emitter lifetime. The crate covers
//!
//! - [`linear`]: spectra, scattering matrix, linewidths, leak corrections;
//! - [`nonlinear`]: steady states, critical power and saturation curves;
//! - [`dynamics`]: time integration of the Bloch equations;
//! - [`pillar`]: micropillar design and diameter optimization;
//! - [`applications`]: slow light, bistability, reshaping, Kerr comparison.
//!
//! ```
//! use purcell1d::{linear::transmission_leaky, SystemParams};
//!
//! let p = SystemParams::ideal(0.002, 1.0, 0.0).unwrap();
//! let on_resonance = transmission_leaky(0.0, &p);
//! assert!(on_resonance.cap_t < 1e-12);
//! assert!((on_resonance.cap_r - 1.0).abs() < 1e-12);
//! ```

pub mod applications;
pub mod dynamics;
mod error;
pub mod linear;
pub mod model;
pub mod nonlinear;
pub mod pillar;
pub mod report;

pub use dynamics::{CavityTreatment, StepControl, Trajectory};
pub use error::{CsvError, Error, Result};
pub use linear::{Geometry, LinearSpectrumPoint};
pub use model::{BlochState, DriveField, EmitterRatio, ScatteringOutcome, SystemParams};
pub use pillar::{FieldProfileModel, Objective, PillarDesign};
pub use report::CsvTable;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
