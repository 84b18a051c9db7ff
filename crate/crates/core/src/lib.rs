//! Realignment (CCNR) separability criterion and its structural physical
//! approximation.
//!
//! The pipeline is `validate_density -> realign -> spa -> criteria`:
//!
//! ```
//! use spa_realign::{criteria, realign, spa, states};
//!
//! let rho = states::isotropic(0.9, 3).unwrap();
//! let r = realign::realign(&rho);
//! let threshold = spa::spa_threshold(&r).unwrap();
//! assert_eq!(threshold.l, 0.0);
//! let report = criteria::analyze_realigned(&r, 0.5, 1e-9).unwrap();
//! assert!(report.spa_r_verdict.is_entangled());
//! ```

pub mod cli;
pub mod config;
pub mod criteria;
pub mod density;
pub mod error;
pub mod estimation;
pub mod io;
pub mod matrix;
pub mod realign;
pub mod spa;
pub mod states;

pub use config::Tolerances;
pub use criteria::{CriterionReport, Verdict};
pub use density::{validate_density, DensityMatrix};
pub use error::{Error, Result};
pub use estimation::{EstimationInput, MomentInterval};
pub use matrix::{ComplexMatrix, Spectrum};
pub use realign::RealignedMatrix;
pub use spa::{CpCertificate, SpaAnalysis, SpaThreshold};
pub use states::StateFamily;
