use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::report::PropertyReport;
use super::sampler::derive_seed;
use crate::error::Result;
use crate::gyro::GyroVector;

/// One sampled input of a property: named ball points plus named scalars.
#[derive(Debug, Clone)]
pub(crate) struct Case {
    pub vectors: Vec<(&'static str, GyroVector)>,
    pub scalars: Vec<(&'static str, f64)>,
}

impl Case {
    pub fn vectors(vectors: Vec<(&'static str, GyroVector)>) -> Self {
        Self {
            vectors,
            scalars: Vec::new(),
        }
    }

    pub fn with_scalars(mut self, scalars: Vec<(&'static str, f64)>) -> Self {
        self.scalars = scalars;
        self
    }

    pub fn v(&self, i: usize) -> &GyroVector {
        &self.vectors[i].1
    }

    pub fn s(&self, i: usize) -> f64 {
        self.scalars[i].1
    }

    fn scaled(&self, factor: f64) -> Option<Case> {
        let vectors = self
            .vectors
            .iter()
            .map(|(k, v)| v.scaled(factor).ok().map(|v| (*k, v)))
            .collect::<Option<Vec<_>>>()?;
        Some(Case {
            vectors,
            scalars: self.scalars.clone(),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.vectors {
            m.insert((*k).to_string(), json!(v.coords()));
        }
        for (k, s) in &self.scalars {
            m.insert((*k).to_string(), json!(s));
        }
        Value::Object(m)
    }
}

/// Residual of a single sample and whether it is within its threshold.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Check {
    pub residual: f64,
    pub ok: bool,
}

impl Check {
    pub fn within(residual: f64, threshold: f64) -> Self {
        Self {
            residual,
            ok: residual <= threshold,
        }
    }

    pub fn flag(ok: bool) -> Self {
        Self {
            residual: if ok { 0.0 } else { 1.0 },
            ok,
        }
    }
}

fn evaluate<C>(check: &C, case: &Case) -> Check
where
    C: Fn(&Case) -> Result<Check>,
{
    check(case).unwrap_or(Check {
        residual: f64::INFINITY,
        ok: false,
    })
}

/// Radial shrinking: retry the witness at scales 1/2, 1/4, … and keep the
/// smallest scale that still fails.
fn shrink<C>(case: &Case, check: &C) -> (Case, Check, f64)
where
    C: Fn(&Case) -> Result<Check>,
{
    let mut best = (case.clone(), evaluate(check, case), 1.0);
    let mut factor = 0.5;
    for _ in 0..30 {
        let Some(smaller) = case.scaled(factor) else {
            break;
        };
        let c = evaluate(check, &smaller);
        if c.ok {
            break;
        }
        best = (smaller, c, factor);
        factor *= 0.5;
    }
    best
}

/// Runs `n_samples` draws per dimension; each dimension gets its own stream
/// derived from `(seed, name, dim)`.
pub(crate) fn run_sampled<G, C>(
    name: &str,
    dims: &[usize],
    n_samples: usize,
    seed: u64,
    mut generate: G,
    check: C,
) -> PropertyReport
where
    G: FnMut(&mut ChaCha8Rng, usize) -> Case,
    C: Fn(&Case) -> Result<Check>,
{
    let mut max_residual: f64 = 0.0;
    let mut first: Option<Value> = None;
    let mut samples_run = 0;
    for &dim in dims {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("{name}/{dim}")));
        for _ in 0..n_samples {
            let case = generate(&mut rng, dim);
            samples_run += 1;
            let (c, err) = match check(&case) {
                Ok(c) => (c, None),
                Err(e) => (
                    Check {
                        residual: f64::INFINITY,
                        ok: false,
                    },
                    Some(e.to_string()),
                ),
            };
            if c.residual.is_finite() {
                max_residual = max_residual.max(c.residual);
            }
            if !c.ok && first.is_none() {
                let (small, small_check, scale) = shrink(&case, &check);
                let mut record = json!({
                    "dim": dim,
                    "inputs": case.to_json(),
                    "residual": finite_or_null(c.residual),
                    "shrunk": {
                        "scale": scale,
                        "inputs": small.to_json(),
                        "residual": finite_or_null(small_check.residual),
                    },
                });
                if let Some(e) = err {
                    record["error"] = json!(e);
                }
                first = Some(record);
            }
        }
    }
    PropertyReport {
        name: name.to_string(),
        samples_run,
        passed: first.is_none(),
        max_residual,
        first_counterexample: first,
        seed,
    }
}

pub(crate) fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::sampler::sample_ball_with;

    #[test]
    fn shrinking_finds_smaller_witness() {
        // fails whenever |v| > 0.1
        let check = |c: &Case| Ok(Check::within(c.v(0).norm(), 0.1));
        let report = run_sampled(
            "toy",
            &[2],
            50,
            3,
            |rng, dim| Case::vectors(vec![("v", sample_ball_with(rng, dim, 0.9))]),
            check,
        );
        assert!(!report.passed);
        let cx = report.first_counterexample.unwrap();
        let shrunk = cx["shrunk"]["residual"].as_f64().unwrap();
        assert!(shrunk > 0.1 && shrunk <= 0.2 + 1e-12, "shrunk to {shrunk}");
    }

    #[test]
    fn passing_run_has_no_counterexample() {
        let report = run_sampled(
            "toy",
            &[2, 3],
            10,
            3,
            |rng, dim| Case::vectors(vec![("v", sample_ball_with(rng, dim, 0.9))]),
            |c: &Case| Ok(Check::within(c.v(0).norm(), 1.0)),
        );
        assert!(report.passed);
        assert_eq!(report.samples_run, 20);
        assert!(report.first_counterexample.is_none());
    }
}
