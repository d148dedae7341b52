//! parafrac: simulation and dimension estimation for isotropic stable
//! Levy paths with deterministic drift over fractal time sets.
//!
//! The crate has three layers:
//!
//! * samplers and catalogs — [`stable`] (exact stable increments and
//!   paths), [`domains`] (time sets with known Hausdorff dimension and a
//!   drift-function catalog with Hoelder metadata);
//! * estimators — [`cover`] (occupancy counts over anisotropic cylinder
//!   grids and box-dimension fits), [`energy`] (difference-kernel Monte
//!   Carlo, discrete Riesz energies and a capacity threshold probe);
//! * oracles and orchestration — [`formulas`] (closed-form dimension
//!   values and bounds), [`config`]/[`experiment`]/[`plot`] (batch driver,
//!   CSV persistence, SVG rendering).
//!
//! Everything stochastic draws from counter-based substreams ([`rng`]),
//! so a `(seed, replica, grid index)` triple reproduces bit-identically
//! across runs and thread counts.
//!
//! ```
//! use parafrac::cover::{estimate_dimension, graph_cloud, occupancy, Gauge};
//! use parafrac::domains::DriftSpec;
//! use parafrac::stable::{simulate_path, StableParams, TimeGrid};
//!
//! let params = StableParams::new(2.0, 1)?;
//! let grid = TimeGrid::uniform((1 << 14) + 1, 1.0)?;
//! let path = simulate_path(&params, &grid, 42);
//! let cloud = graph_cloud(&path, &DriftSpec::zero(1, 1.0))?;
//! let levels: Vec<u32> = (1..=10).collect();
//! let ledger = occupancy(&cloud, 1.0, &levels, Gauge::TimeGauge)?;
//! let estimate = estimate_dimension(&ledger)?;
//! assert!((estimate.value - 1.5).abs() < 0.2);
//! # Ok::<(), parafrac::Error>(())
//! ```

pub mod config;
pub mod cover;
pub mod domains;
pub mod energy;
pub mod error;
pub mod experiment;
pub mod formulas;
pub mod plot;
pub mod rng;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
