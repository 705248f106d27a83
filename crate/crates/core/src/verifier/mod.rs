//! Seeded randomized verification of the algebraic and geometric facts the
//! rest of the crate relies on.
//!
//! Every property is registered by name and produces a [`PropertyReport`].
//! Each property draws from its own stream derived from the master seed and
//! its name, so reports do not depend on execution order and properties run
//! in parallel.

mod harness;
mod registry;
mod report;
mod sampler;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use registry::{property_names, Property};
pub use report::PropertyReport;
pub use sampler::{sample_ball, BallSampler};

pub(crate) use sampler::derive_seed;

use crate::error::{Error, Result};
use crate::gyro::ToleranceConfig;

/// Runs the named properties with their default thresholds.
pub fn run_suite(
    names: &[&str],
    n_samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Vec<PropertyReport>> {
    run_suite_with(names, n_samples, seed, tol, &BTreeMap::new())
}

/// Like [`run_suite`], with per-property threshold overrides keyed by name.
pub fn run_suite_with(
    names: &[&str],
    n_samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
    thresholds: &BTreeMap<String, f64>,
) -> Result<Vec<PropertyReport>> {
    tol.validate()?;
    if n_samples == 0 {
        return Err(Error::Precondition("n_samples must be at least 1".into()));
    }
    let props = names
        .iter()
        .map(|name| {
            Property::lookup(name).ok_or_else(|| Error::UnknownProperty {
                name: (*name).to_string(),
                registered: property_names().iter().map(|s| s.to_string()).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(unknown) = thresholds.keys().find(|k| Property::lookup(k).is_none()) {
        return Err(Error::UnknownProperty {
            name: unknown.clone(),
            registered: property_names().iter().map(|s| s.to_string()).collect(),
        });
    }
    Ok(props
        .par_iter()
        .map(|p| {
            let threshold = thresholds
                .get(p.name)
                .copied()
                .unwrap_or_else(|| (p.default_threshold)(tol));
            p.run(n_samples, seed, tol, threshold)
        })
        .collect())
}

/// Runs every registered property.
pub fn run_all(n_samples: usize, seed: u64, tol: &ToleranceConfig) -> Result<Vec<PropertyReport>> {
    run_suite(property_names(), n_samples, seed, tol)
}
