//! Experiment runner library behind the `srips` binary: configuration,
//! presets, the end-to-end pipeline and SVG diagram plots.

pub mod config;
pub mod pipeline;
pub mod plot;

pub use config::{preset, ExperimentConfig, ParamsConfig, SamplerConfig, ScaleSpec};
pub use pipeline::{run_pipeline, write_bundle, ExperimentOutcome};
