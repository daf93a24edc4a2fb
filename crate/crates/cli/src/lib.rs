//! Benchmark harness for SPD-manifold structured regularization: seeded data
//! generators, experiment drivers, CSV trace emission, JSON summaries and
//! static plots. The `spdreg` binary wraps [`experiments::run_experiment`];
//! the acceptance suite calls the structured drivers directly.

pub mod config;
pub mod datagen;
pub mod experiments;
pub mod plot;
pub mod traces;
