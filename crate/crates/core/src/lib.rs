//! Singular spectrum analysis with automatic grouping-index selection.
//!
//! SSA decomposes a time series through the eigendecomposition of its
//! Hankel trajectory matrix into `d` elementary components, ordered by
//! eigenvalue. Taking the first `g` components as signal and the rest as
//! noise requires choosing `g`. This crate selects it automatically: for
//! every candidate `g` it tests whether the signal and residual
//! reconstructions are separable (w-orthogonal in expectation) using a
//! wild bootstrap that preserves serial dependence, corrects the
//! p-values for multiplicity, and returns
//! `ĝ = max{g : separability rejected} + 1`. A hierarchical-clustering
//! baseline, a Monte-Carlo study harness, and a CSV-driven CLI round out
//! the toolkit.
//!
//! # Example
//!
//! ```
//! use ssa_autogroup::{run_inference, BootstrapConfig, Correction, TimeSeries};
//!
//! // A noisy sine needs two eigencomponents for the signal.
//! let values: Vec<f64> = (1..=48)
//!     .map(|t| {
//!         let t = t as f64;
//!         (2.0 * std::f64::consts::PI * t / 3.0).sin() + 0.05 * (t * 2.7).sin()
//!     })
//!     .collect();
//! let series = TimeSeries::new(values)?;
//! let cfg = BootstrapConfig { seed: 1, ..BootstrapConfig::default() };
//! let result = run_inference(&series, 24, &cfg, Correction::Holm, 0.1)?;
//! assert_eq!(result.g_hat, 2);
//! # Ok::<(), ssa_autogroup::Error>(())
//! ```

pub mod csv_io;
mod error;
pub mod hc;
pub mod inference;
mod rng;
pub mod separability;
mod series;
pub mod simulation;
pub mod ssa;
pub mod wbdd;

pub use error::{Error, Result};
pub use hc::{hc_grouping, hc_grouping_with, HcGrouping, Linkage};
pub use inference::{
    bootstrap_pvalue, grouping_pvalue, holm_adjust, holm_reject, run_inference,
    run_inference_on, select_g, sidak_adjust, test_statistic, Correction, GroupingResult,
    HypothesisTestResult, RawTest,
};
pub use rng::{derive_rng, derive_seed};
pub use separability::{
    u_series, wcorr, wcorr_matrix, weights, wnorm, wscalar, SignalNoiseSplit, WCorrMatrix,
    WeightVector,
};
pub use series::TimeSeries;
pub use simulation::{
    generate_series, run_study, signal_value, Scenario, SignalKind, StudyRow,
};
pub use ssa::{
    decompose, diagonal_average, embed, EigenTriple, SsaDecomposition, TrajectoryMatrix,
};
pub use wbdd::{
    eta_vector, register_aux, resample, tapered_block_mean, window_weights, AuxFn,
    AuxSequence, BlockSize, BootstrapConfig, TaperWindow, WindowWeights,
};
