//! Einstein velocity addition on the open unit ball.
//!
//! Points of the ball are [`GyroVector`]s: dimensionless velocities with the
//! speed of light set to 1. The operation
//!
//! ```text
//! u ⊕ v = 1/(1 + (u,v)) · ( u + √(1 − |u|²)·v + (u,v)/(1 + √(1 − |u|²)) · u )
//! ```
//!
//! is neither associative nor commutative, but 0 is a two-sided identity, −u
//! is the inverse of u and left cancellation `(−u) ⊕ (u ⊕ v) = v` holds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by every approximate comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Inputs with norm `>= 1 - boundary_margin` are rejected at construction.
    pub boundary_margin: f64,
    /// Radius of the ball that random samples are drawn from.
    pub sample_rmax: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            boundary_margin: 1e-9,
            sample_rmax: 0.999,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("boundary_margin", self.boundary_margin),
            ("sample_rmax", self.sample_rmax),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if self.sample_rmax >= 1.0 {
            return Err(Error::InvalidTolerance(format!(
                "sample_rmax must be below 1, got {}",
                self.sample_rmax
            )));
        }
        Ok(())
    }

    /// Mixed absolute/relative closeness of two scalars.
    #[inline]
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_tol + self.rel_tol * a.abs().max(b.abs())
    }

    /// The residual above which a sample counts as a genuine violation of
    /// the homomorphism equation rather than rounding noise.
    pub fn decision_threshold(&self) -> f64 {
        1e3 * self.abs_tol
    }
}

/// A point of the open unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GyroVector {
    coords: Vec<f64>,
}

impl TryFrom<Vec<f64>> for GyroVector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        GyroVector::new(coords)
    }
}

impl From<GyroVector> for Vec<f64> {
    fn from(v: GyroVector) -> Self {
        v.coords
    }
}

impl GyroVector {
    /// Validates user input against the default boundary margin.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::with_margin(coords, ToleranceConfig::default().boundary_margin)
    }

    /// Rejects (never clamps) vectors with `|v| >= 1 - margin`.
    pub fn with_margin(coords: Vec<f64>, margin: f64) -> Result<Self> {
        check_coords(&coords)?;
        let norm = norm_sq(&coords).sqrt();
        let limit = 1.0 - margin;
        if norm >= limit {
            return Err(Error::OutsideBall { norm, limit });
        }
        Ok(Self { coords })
    }

    /// Accepts anything strictly inside the ball. Used for computed values,
    /// which may legitimately come closer to the boundary than user input.
    pub(crate) fn interior(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        let norm = norm_sq(&coords).sqrt();
        if norm >= 1.0 {
            return Err(Error::OutsideBall { norm, limit: 1.0 });
        }
        Ok(Self { coords })
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// `r · e_axis`.
    pub fn axis(dim: usize, axis: usize, r: f64) -> Result<Self> {
        if axis >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: axis + 1,
            });
        }
        let mut coords = vec![0.0; dim];
        coords[axis] = r;
        Self::interior(coords)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.coords)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dot(&self, other: &GyroVector) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0.0)
    }

    /// Euclidean scaling by `factor` with `|factor| <= 1`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::interior(self.coords.iter().map(|c| c * factor).collect())
    }

    /// Lorentz factor `1/√(1 − |u|²)`.
    pub fn gamma(&self) -> f64 {
        gamma(self)
    }

    /// Componentwise `|a − b| <= abs_tol + rel_tol·max(|a|, |b|)`.
    pub fn approx_eq(&self, other: &GyroVector, tol: &ToleranceConfig) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(&a, &b)| tol.close(a, b))
    }

    /// Euclidean distance `|self − other|`, the residual used by the property checks.
    pub fn euclidean_distance(&self, other: &GyroVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

fn check_coords(coords: &[f64]) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::EmptyVector);
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

#[inline]
pub(crate) fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn ensure_same_dim(a: &GyroVector, b: &GyroVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `u ⊕ v`, transcribed term by term from the velocity addition formula.
pub fn einstein_add(u: &GyroVector, v: &GyroVector) -> Result<GyroVector> {
    ensure_same_dim(u, v)?;
    let uv = u.dot(v);
    let root = (1.0 - u.norm_sq()).sqrt();
    let outer = 1.0 / (1.0 + uv);
    let u_coef = uv / (1.0 + root);
    let coords = u
        .coords
        .iter()
        .zip(&v.coords)
        .map(|(&ui, &vi)| outer * (ui + root * vi + u_coef * ui))
        .collect();
    GyroVector::interior(coords)
}

pub fn gamma(u: &GyroVector) -> f64 {
    1.0 / (1.0 - u.norm_sq()).sqrt()
}

pub fn neg(u: &GyroVector) -> GyroVector {
    GyroVector {
        coords: u.coords.iter().map(|c| -c).collect(),
    }
}

/// `gyr[u,v]w = −(u ⊕ v) ⊕ (u ⊕ (v ⊕ w))`.
pub fn gyration(u: &GyroVector, v: &GyroVector, w: &GyroVector) -> Result<GyroVector> {
    ensure_same_dim(u, v)?;
    ensure_same_dim(u, w)?;
    let uv = einstein_add(u, v)?;
    let inner = einstein_add(u, &einstein_add(v, w)?)?;
    einstein_add(&neg(&uv), &inner)
}

/// The point of the diameter through `x` that corresponds to the real number
/// `t` under the isomorphism of that diameter with `(ℝ, +)` sending `x` to 1.
pub fn line_param(x: &GyroVector, t: f64) -> Result<GyroVector> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let radius = (t * norm.atanh()).tanh();
    let scale = radius / norm;
    GyroVector::interior(x.coords.iter().map(|c| c * scale).collect())
}

/// Largest `|t|` for which `line_param(x, t)` stays within radius `rmax`.
pub fn line_param_bound(x: &GyroVector, rmax: f64) -> f64 {
    rmax.atanh() / x.norm().atanh()
}
