//! Endomorphisms of the Einstein gyrogroup.
//!
//! For `n >= 2` the continuous endomorphisms of `(ℬⁿ, ⊕)` are exactly the
//! restrictions of orthogonal maps and the constant map to 0. The classifier
//! here treats a candidate map as a black box: it probes `f(½eᵢ)`, samples
//! the homomorphism equation `f(u⊕v) = f(u)⊕f(v)` and reports one of the two
//! admissible shapes or a witness pair that violates the equation.
//!
//! A hypothetical discontinuous endomorphism that survives sampling is
//! classified by its probe behaviour; the verdict carries no further
//! guarantee in that case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::gyro::{einstein_add, line_param, line_param_bound, neg, GyroVector, ToleranceConfig};
use crate::verifier::{derive_seed, BallSampler, PropertyReport};

const PROBE_RADIUS: f64 = 0.5;

/// A square real matrix acting on `ℝⁿ`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct LinearMap {
    dim: usize,
    entries: Vec<f64>,
}

impl TryFrom<Vec<Vec<f64>>> for LinearMap {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        LinearMap::from_rows(rows)
    }
}

impl From<LinearMap> for Vec<Vec<f64>> {
    fn from(m: LinearMap) -> Self {
        m.rows()
    }
}

impl LinearMap {
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension { dim, min: 2 });
        }
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                cols: entries.len() / dim,
            });
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: bad.len(),
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    /// Matrix whose `i`-th column is `columns[i]`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let dim = columns.len();
        let mut entries = vec![0.0; dim * dim];
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::NotSquare {
                    rows: col.len(),
                    cols: dim,
                });
            }
            for (i, &x) in col.iter().enumerate() {
                entries[i * dim + j] = x;
            }
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &LinearMap) -> Self {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
            }
        }
        Self { dim: n, entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        Self { dim: n, entries }
    }

    /// `max |Qᵀ Q − I|` over entries.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let g: f64 = (0..n).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Whether `max |QᵀQ − I| <= abs_tol`.
pub fn is_orthogonal(q: &LinearMap, tol: &ToleranceConfig) -> bool {
    q.orthogonality_defect() <= tol.abs_tol
}

/// A self-map of the ball that can only be evaluated pointwise.
pub trait BallMap: Sync {
    fn dim(&self) -> usize;

    /// Raw evaluation; [`evaluate`] checks the result lies in the ball.
    fn apply(&self, w: &[f64]) -> Vec<f64>;
}

impl BallMap for LinearMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, w: &[f64]) -> Vec<f64> {
        LinearMap::apply(self, w)
    }
}

/// The map sending everything to 0.
#[derive(Debug, Clone, Copy)]
pub struct ZeroMap {
    pub dim: usize,
}

impl BallMap for ZeroMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, _w: &[f64]) -> Vec<f64> {
        vec![0.0; self.dim]
    }
}

/// Wraps a closure as a [`BallMap`].
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> BallMap for FnMap<F>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, w: &[f64]) -> Vec<f64> {
        (self.f)(w)
    }
}

/// Evaluates `f(w)`, rejecting outputs outside the closed ball of radius
/// `1 − boundary_margin`.
pub fn evaluate<F: BallMap + ?Sized>(
    f: &F,
    w: &GyroVector,
    tol: &ToleranceConfig,
) -> Result<GyroVector> {
    if w.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: w.dim(),
        });
    }
    let out = f.apply(w.coords());
    if out.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: out.len(),
        });
    }
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 - tol.boundary_margin {
        return Err(Error::MapOutsideBall {
            input: w.coords().to_vec(),
            norm,
        });
    }
    GyroVector::interior(out)
}

/// `|f(u⊕v) − f(u)⊕f(v)|`.
pub fn endomorphism_residual<F: BallMap + ?Sized>(
    f: &F,
    u: &GyroVector,
    v: &GyroVector,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let lhs = evaluate(f, &einstein_add(u, v)?, tol)?;
    let rhs = einstein_add(&evaluate(f, u, tol)?, &evaluate(f, v, tol)?)?;
    Ok(lhs.euclidean_distance(&rhs))
}

/// A pair violating the homomorphism equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub u: GyroVector,
    pub v: GyroVector,
    pub residual: f64,
}

fn worse(current: Option<Witness>, candidate: Witness) -> Option<Witness> {
    match current {
        Some(w) if w.residual >= candidate.residual => Some(w),
        _ => Some(candidate),
    }
}

struct Scan {
    report: PropertyReport,
    worst: Option<Witness>,
}

fn scan_endomorphism<F: BallMap + ?Sized>(
    f: &F,
    n_samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Scan> {
    if n_samples == 0 {
        return Err(Error::Precondition("n_samples must be at least 1".into()));
    }
    let threshold = tol.decision_threshold();
    let mut sampler = BallSampler::new(derive_seed(seed, "endomorphism"), f.dim(), tol.sample_rmax);
    let mut worst: Option<Witness> = None;
    for _ in 0..n_samples {
        let u = sampler.sample();
        let v = sampler.sample();
        let residual = endomorphism_residual(f, &u, &v, tol)?;
        worst = worse(worst, Witness { u, v, residual });
    }
    let worst_residual = worst.as_ref().map_or(0.0, |w| w.residual);
    let passed = worst_residual <= threshold;
    let report = PropertyReport {
        name: "endomorphism".into(),
        samples_run: n_samples,
        passed,
        max_residual: worst_residual,
        first_counterexample: if passed {
            None
        } else {
            worst.as_ref().map(|w| json!(w))
        },
        seed,
    };
    Ok(Scan { report, worst })
}

/// Samples the homomorphism equation on `n_samples` seeded pairs. Fails if any
/// residual exceeds the decision threshold; the worst pair is reported.
pub fn test_endomorphism<F: BallMap + ?Sized>(
    f: &F,
    n_samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PropertyReport> {
    Ok(scan_endomorphism(f, n_samples, seed, tol)?.report)
}

/// Verdict of [`classify_endomorphism`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MapClassification {
    Orthogonal { matrix: LinearMap },
    Zero,
    NotEndomorphism { witness: Witness },
}

/// Pairs built from the probe points and an offending sample, where any
/// endomorphism must satisfy the equation exactly.
fn targeted_pairs(points: &[GyroVector], probes: &[GyroVector]) -> Vec<(GyroVector, GyroVector)> {
    let mut pairs = Vec::new();
    for w in points {
        let zero = GyroVector::zero(w.dim());
        pairs.push((w.clone(), neg(w)));
        pairs.push((w.clone(), w.clone()));
        pairs.push((w.clone(), zero.clone()));
        pairs.push((zero, w.clone()));
        for p in probes {
            pairs.push((w.clone(), p.clone()));
            pairs.push((p.clone(), w.clone()));
        }
    }
    for a in probes {
        for b in probes {
            pairs.push((a.clone(), b.clone()));
        }
    }
    pairs
}

fn search_witness<F: BallMap + ?Sized>(
    f: &F,
    mut worst: Option<Witness>,
    suspects: &[GyroVector],
    probes: &[GyroVector],
    tol: &ToleranceConfig,
) -> Result<Option<Witness>> {
    for (u, v) in targeted_pairs(suspects, probes) {
        let residual = endomorphism_residual(f, &u, &v, tol)?;
        worst = worse(worst, Witness { u, v, residual });
    }
    Ok(worst)
}

/// Decides whether `f` is an orthogonal restriction, the zero map, or not an
/// endomorphism at all.
///
/// Procedure: probe `f(½eᵢ)`. If every probe vanishes, `f` is `Zero` when the
/// homomorphism equation and `f ≈ 0` both hold on the samples. Otherwise the
/// candidate `Q` has columns `2·f(½eᵢ)`; `f` is `Orthogonal(Q)` when `Q` is
/// orthogonal, the equation holds and `|f(w) − Qw| <= 10·abs_tol` on the
/// samples. Anything else yields the worst violating pair found.
pub fn classify_endomorphism<F: BallMap + ?Sized>(
    f: &F,
    n_samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<MapClassification> {
    let n = f.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension { dim: n, min: 2 });
    }
    tol.validate()?;
    let threshold = tol.decision_threshold();

    let probe_points: Vec<GyroVector> = (0..n)
        .map(|i| GyroVector::axis(n, i, PROBE_RADIUS))
        .collect::<Result<_>>()?;
    let probes: Vec<GyroVector> = probe_points
        .iter()
        .map(|p| evaluate(f, p, tol))
        .collect::<Result<_>>()?;
    let probes_vanish = probes.iter().all(|p| p.norm() <= tol.abs_tol);

    let scan = scan_endomorphism(f, n_samples, seed, tol)?;
    let mut sampler = BallSampler::new(derive_seed(seed, "classify"), n, tol.sample_rmax);

    // Sample points where f disagrees with the probe prediction.
    let mut suspects = Vec::new();
    let candidate = if probes_vanish {
        None
    } else {
        let columns: Vec<Vec<f64>> = probes
            .iter()
            .map(|p| p.coords().iter().map(|x| x / PROBE_RADIUS).collect())
            .collect();
        Some(LinearMap::from_columns(&columns)?)
    };
    let mut prediction_error: f64 = 0.0;
    for _ in 0..n_samples {
        let w = sampler.sample();
        let fw = evaluate(f, &w, tol)?;
        let err = match &candidate {
            None => fw.norm(),
            Some(q) => {
                let qw = q.apply(w.coords());
                fw.coords()
                    .iter()
                    .zip(&qw)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            }
        };
        let limit = if candidate.is_none() {
            tol.abs_tol
        } else {
            10.0 * tol.abs_tol
        };
        if err > limit && suspects.len() < 8 {
            suspects.push(w);
        }
        prediction_error = prediction_error.max(err);
    }

    let endo_ok = scan.report.passed;
    match &candidate {
        None if endo_ok && prediction_error <= tol.abs_tol => return Ok(MapClassification::Zero),
        Some(q) if endo_ok && is_orthogonal(q, tol) && prediction_error <= 10.0 * tol.abs_tol => {
            return Ok(MapClassification::Orthogonal { matrix: q.clone() })
        }
        _ => {}
    }

    let worst = search_witness(f, scan.worst, &suspects, &probe_points, tol)?;
    match worst {
        Some(w) if w.residual > threshold => Ok(MapClassification::NotEndomorphism { witness: w }),
        // No sample violates the equation: fall back to the probe behaviour.
        _ => match candidate {
            None => Ok(MapClassification::Zero),
            Some(q) if is_orthogonal(&q, tol) => Ok(MapClassification::Orthogonal { matrix: q }),
            Some(_) => Err(Error::Inconclusive(
                "probes are not orthogonal but no sampled pair violates the homomorphism equation"
                    .into(),
            )),
        },
    }
}

/// Numerical shadow of the argument that an endomorphism vanishing at
/// `x ≠ 0` vanishes everywhere: checks that `f` is 0 on the diameter `L`
/// through `x` and constant on the chords `a⊕L` and the half-ellipses `L⊕b`.
///
/// `x ≠ 0` and `f(x) ≈ 0` are hard preconditions. A map that fails the
/// homomorphism test is still scanned: the report fails and records both the
/// endomorphism violation and the constancy deviation.
pub fn zero_propagation_check<F: BallMap + ?Sized>(
    f: &F,
    x: &GyroVector,
    n_samples: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PropertyReport> {
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.dim(),
        });
    }
    if x.is_zero() {
        return Err(Error::Precondition("x must be nonzero".into()));
    }
    let fx = evaluate(f, x, tol)?;
    if fx.norm() > tol.abs_tol {
        return Err(Error::Precondition(format!(
            "f(x) must vanish, got norm {}",
            fx.norm()
        )));
    }
    let endo = test_endomorphism(f, n_samples, seed, tol)?;

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "zero_propagation"));
    let t_max = line_param_bound(x, tol.sample_rmax);
    let dim = x.dim();

    // Every value is measured against the value the argument predicts.
    let mut deviations = [0.0f64; 3];
    let mut first: Option<serde_json::Value> = None;
    let mut note =
        |stage: usize, dev: f64, point: &GyroVector, first: &mut Option<serde_json::Value>| {
            deviations[stage] = deviations[stage].max(dev);
            if dev > tol.abs_tol && first.is_none() {
                let label = ["diameter", "chord", "half_ellipse"][stage];
                *first = Some(json!({ "stage": label, "point": point.coords(), "deviation": dev }));
            }
        };

    let mut ts: Vec<f64> = Vec::new();
    for q in 1..=20i32 {
        for p in -20..=20i32 {
            let t = f64::from(p) / f64::from(q);
            if t.abs() < t_max {
                ts.push(t);
            }
        }
    }
    for _ in 0..100 {
        ts.push(rng.gen_range(-t_max..t_max));
    }
    let mut samples_run = 0;
    for &t in &ts {
        let y = line_param(x, t)?;
        let dev = evaluate(f, &y, tol)?.norm();
        note(0, dev, &y, &mut first);
        samples_run += 1;
    }

    let mut sampler = BallSampler::new(
        derive_seed(seed, "zero_propagation/points"),
        dim,
        tol.sample_rmax,
    );
    for _ in 0..n_samples {
        let t = rng.gen_range(-t_max..t_max);
        let on_line = line_param(x, t)?;

        let a = sampler.sample();
        let fa = evaluate(f, &a, tol)?;
        let chord_point = einstein_add(&a, &on_line)?;
        let dev = evaluate(f, &chord_point, tol)?.euclidean_distance(&fa);
        note(1, dev, &chord_point, &mut first);

        let b = sampler.sample();
        let fb = evaluate(f, &b, tol)?;
        let ellipse_point = einstein_add(&on_line, &b)?;
        let dev = evaluate(f, &ellipse_point, tol)?.euclidean_distance(&fb);
        note(2, dev, &ellipse_point, &mut first);
        samples_run += 2;
    }

    let max_residual = deviations.iter().copied().fold(0.0, f64::max);
    let constant = max_residual <= tol.abs_tol;
    let counterexample = if !endo.passed || !constant {
        Some(json!({
            "deviation": { "diameter": deviations[0], "chord": deviations[1], "half_ellipse": deviations[2] },
            "constancy": first,
            "endomorphism": endo.first_counterexample,
        }))
    } else {
        None
    };
    Ok(PropertyReport {
        name: "zero_propagation".into(),
        samples_run,
        passed: endo.passed && constant,
        max_residual,
        first_counterexample: counterexample,
        seed,
    })
}

/// Product of Givens rotations over every coordinate plane with seeded random
/// angles, followed by a random reflection half of the time.
pub fn random_orthogonal<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<LinearMap> {
    let mut q = LinearMap::identity(dim)?;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            q = givens(dim, i, j, theta)?.matmul(&q);
        }
    }
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(0..dim);
        for c in 0..dim {
            q.entries[k * dim + c] = -q.entries[k * dim + c];
        }
    }
    Ok(q)
}

pub fn givens(dim: usize, i: usize, j: usize, theta: f64) -> Result<LinearMap> {
    let mut g = LinearMap::identity(dim)?;
    let (s, c) = theta.sin_cos();
    g.entries[i * dim + i] = c;
    g.entries[j * dim + j] = c;
    g.entries[i * dim + j] = -s;
    g.entries[j * dim + i] = s;
    Ok(g)
}

/// `U · diag(σ) · V` with random orthogonal `U`, `V`, largest singular value
/// exactly `spectral_norm` and the others drawn from `[0, spectral_norm]`.
pub fn random_contraction<R: Rng + ?Sized>(
    dim: usize,
    spectral_norm: f64,
    rng: &mut R,
) -> Result<LinearMap> {
    let u = random_orthogonal(dim, rng)?;
    let v = random_orthogonal(dim, rng)?;
    let mut sigma = LinearMap::identity(dim)?;
    for k in 0..dim {
        sigma.entries[k * dim + k] = if k == 0 {
            spectral_norm
        } else {
            rng.gen_range(0.0..=spectral_norm)
        };
    }
    Ok(u.matmul(&sigma).matmul(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gv(c: &[f64]) -> GyroVector {
        GyroVector::new(c.to_vec()).unwrap()
    }

    fn rotation(theta: f64) -> LinearMap {
        givens(2, 0, 1, theta).unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        let tol = ToleranceConfig::default();
        assert!(is_orthogonal(&LinearMap::identity(2).unwrap(), &tol));
        let scale = LinearMap::from_rows(vec![vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!(!is_orthogonal(&scale, &tol));
        let r = rotation(0.7);
        assert_abs_diff_eq!(r.get(0, 0), 0.7f64.cos());
        assert!(is_orthogonal(&r, &tol));
    }

    #[test]
    fn residual_examples() {
        let tol = ToleranceConfig::default();
        let id = LinearMap::identity(2).unwrap();
        let (u, v) = (gv(&[0.3, -0.6]), gv(&[0.7, 0.1]));
        assert_eq!(endomorphism_residual(&id, &u, &v, &tol).unwrap(), 0.0);
        let quarter = rotation(std::f64::consts::FRAC_PI_2);
        assert!(endomorphism_residual(&quarter, &u, &v, &tol).unwrap() <= tol.abs_tol);

        // f(u⊕v) = (0.4, 0); f(u)⊕f(v) = (0.5/1.0625, 0) by collinear addition
        let halve = LinearMap::identity(2).unwrap().scale(0.5);
        let half = gv(&[0.5, 0.0]);
        let oracle: f64 = 0.5 * ((0.5 + 0.5) / (1.0 + 0.25)) - (0.25 + 0.25) / (1.0 + 0.0625);
        let r = endomorphism_residual(&halve, &half, &half, &tol).unwrap();
        assert_abs_diff_eq!(r, oracle.abs(), epsilon = 1e-15);
        assert_abs_diff_eq!(r, 0.07058824, epsilon = 1e-8);
    }

    #[test]
    fn residual_reports_escaping_outputs() {
        let tol = ToleranceConfig::default();
        let double = LinearMap::identity(2).unwrap().scale(2.0);
        let err =
            endomorphism_residual(&double, &gv(&[0.6, 0.0]), &gv(&[0.0, 0.0]), &tol).unwrap_err();
        assert!(matches!(err, Error::MapOutsideBall { .. }));
    }

    #[test]
    fn endomorphism_test_examples() {
        let tol = ToleranceConfig::default();
        let zero = test_endomorphism(&ZeroMap { dim: 3 }, 1000, 1, &tol).unwrap();
        assert!(zero.passed);
        assert_eq!(zero.max_residual, 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_orthogonal(3, &mut rng).unwrap();
        let r = test_endomorphism(&q, 1000, 1, &tol).unwrap();
        assert!(r.passed);
        assert!(r.max_residual <= tol.abs_tol, "{}", r.max_residual);

        let halve = LinearMap::identity(2).unwrap().scale(0.5);
        let r = test_endomorphism(&halve, 1000, 42, &tol).unwrap();
        assert!(!r.passed);
        assert!(r.max_residual > 1e3 * tol.abs_tol);
        assert!(r.first_counterexample.is_some());
    }

    #[test]
    fn classify_examples() {
        let tol = ToleranceConfig::default();
        let id = LinearMap::identity(2).unwrap();
        assert_eq!(
            classify_endomorphism(&id, 200, 1, &tol).unwrap(),
            MapClassification::Orthogonal { matrix: id.clone() }
        );
        assert_eq!(
            classify_endomorphism(&ZeroMap { dim: 4 }, 200, 1, &tol).unwrap(),
            MapClassification::Zero
        );
        let quarter = rotation(std::f64::consts::FRAC_PI_2);
        match classify_endomorphism(&quarter, 200, 1, &tol).unwrap() {
            MapClassification::Orthogonal { matrix } => {
                let expected = LinearMap::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
                assert!(matrix.max_abs_diff(&expected) < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        let halve = id.scale(0.5);
        match classify_endomorphism(&halve, 200, 1, &tol).unwrap() {
            MapClassification::NotEndomorphism { witness } => {
                let r = endomorphism_residual(&halve, &witness.u, &witness.v, &tol).unwrap();
                assert_eq!(r, witness.residual);
                assert!(r > tol.decision_threshold());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_rejects_dimension_one() {
        let tol = ToleranceConfig::default();
        assert_eq!(
            classify_endomorphism(&ZeroMap { dim: 1 }, 10, 1, &tol),
            Err(Error::UnsupportedDimension { dim: 1, min: 2 })
        );
    }

    #[test]
    fn classify_catches_maps_that_only_agree_at_probes() {
        let tol = ToleranceConfig::default();
        // zero at the probes, nonzero off the axes
        let sneaky = FnMap::new(2, |w: &[f64]| vec![0.5 * w[0] * w[1], 0.0]);
        assert!(matches!(
            classify_endomorphism(&sneaky, 300, 5, &tol).unwrap(),
            MapClassification::NotEndomorphism { .. }
        ));
        // the identity at the probes, nonlinear elsewhere
        let bent = FnMap::new(2, |w: &[f64]| vec![w[0], w[1] * (1.0 - 0.3 * w[0] * w[0])]);
        assert!(matches!(
            classify_endomorphism(&bent, 300, 5, &tol).unwrap(),
            MapClassification::NotEndomorphism { .. }
        ));
    }

    #[test]
    fn zero_propagation_examples() {
        let tol = ToleranceConfig::default();
        let zero = ZeroMap { dim: 2 };
        let x = gv(&[0.5, 0.0]);
        let r = zero_propagation_check(&zero, &x, 500, 3, &tol).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_residual, 0.0);

        // the chord through a = (0, 0.3) parallel to L
        let a = gv(&[0.0, 0.3]);
        for t in [-5.0, -1.0, 0.25, 3.0] {
            let p = einstein_add(&a, &line_param(&x, t).unwrap()).unwrap();
            assert_eq!(evaluate(&zero, &p, &tol).unwrap().norm(), 0.0);
        }

        let broken = FnMap::new(2, |w: &[f64]| {
            if w.iter().map(|c| c * c).sum::<f64>().sqrt() > 0.9 {
                w.to_vec()
            } else {
                vec![0.0; w.len()]
            }
        });
        let r = zero_propagation_check(&broken, &x, 500, 3, &tol).unwrap();
        assert!(!r.passed);
        assert!(r.max_residual > 0.5);
    }

    #[test]
    fn zero_propagation_preconditions() {
        let tol = ToleranceConfig::default();
        let id = LinearMap::identity(2).unwrap();
        assert!(matches!(
            zero_propagation_check(&id, &gv(&[0.5, 0.0]), 10, 1, &tol),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            zero_propagation_check(&ZeroMap { dim: 2 }, &GyroVector::zero(2), 10, 1, &tol),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn contraction_has_requested_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_contraction(3, 0.7, &mut rng).unwrap();
        // MᵀM has largest eigenvalue 0.49; power iteration from a generic start
        let mtm = m.transpose().matmul(&m);
        let mut x = vec![1.0, 0.3, -0.2];
        for _ in 0..500 {
            let y = mtm.apply(&x);
            let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            x = y.into_iter().map(|v| v / n).collect();
        }
        let lambda: f64 = mtm.apply(&x).iter().zip(&x).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(lambda.sqrt(), 0.7, epsilon = 1e-9);
    }

    #[test]
    fn linear_map_json_is_row_major() {
        let m: LinearMap = serde_json::from_str("[[0, -1], [1, 0]]").unwrap();
        assert_eq!(m.apply(&[1.0, 0.0]), vec![0.0, 1.0]);
        assert!(serde_json::from_str::<LinearMap>("[[1, 0]]").is_err());
    }
}
