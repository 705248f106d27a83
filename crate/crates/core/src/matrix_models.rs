//! Two-by-two matrix pictures of the three-dimensional gyrogroup.
//!
//! The Bloch map `v ↦ ½(I + v·σ)` carries `(ℬ³, ⊕)` onto the regular qubit
//! density matrices with `A ⊙ B = √A B √A / tr(√A B √A)`, and
//! `A ↦ A/√det A` carries those onto the determinant-one positive definite
//! matrices with `A ⊡ B = √A B √A`.

use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gyro::{GyroVector, ToleranceConfig};

/// Hermitian `[[a, b], [conj(b), d]]` with `b = re_b + i·im_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hermitian2 {
    pub a: f64,
    pub d: f64,
    pub re_b: f64,
    pub im_b: f64,
}

impl Hermitian2 {
    pub fn new(a: f64, d: f64, re_b: f64, im_b: f64) -> Result<Self> {
        let h = Self { a, d, re_b, im_b };
        h.check_finite()?;
        Ok(h)
    }

    pub const IDENTITY: Hermitian2 = Hermitian2 {
        a: 1.0,
        d: 1.0,
        re_b: 0.0,
        im_b: 0.0,
    };

    pub fn diag(a: f64, d: f64) -> Self {
        Self {
            a,
            d,
            re_b: 0.0,
            im_b: 0.0,
        }
    }

    fn check_finite(&self) -> Result<()> {
        if [self.a, self.d, self.re_b, self.im_b]
            .iter()
            .all(|x| x.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - (self.re_b * self.re_b + self.im_b * self.im_b)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0.0 && self.d > 0.0 && self.det() > 0.0
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            a: self.a * factor,
            d: self.d * factor,
            re_b: self.re_b * factor,
            im_b: self.im_b * factor,
        }
    }

    pub fn max_abs_diff(&self, other: &Hermitian2) -> f64 {
        [
            self.a - other.a,
            self.d - other.d,
            self.re_b - other.re_b,
            self.im_b - other.im_b,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_entry(&self) -> f64 {
        [self.a, self.d, self.re_b, self.im_b]
            .iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Entrywise mixed closeness under `tol`.
    pub fn approx_eq(&self, other: &Hermitian2, tol: &ToleranceConfig) -> bool {
        tol.close(self.a, other.a)
            && tol.close(self.d, other.d)
            && tol.close(self.re_b, other.re_b)
            && tol.close(self.im_b, other.im_b)
    }

    /// `self²`, the product of a Hermitian matrix with itself.
    pub fn square(&self) -> Hermitian2 {
        let m = Mat2::from(*self);
        (m * m).to_hermitian()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

/// General complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy)]
struct Mat2([[Complex; 2]; 2]);

impl From<Hermitian2> for Mat2 {
    fn from(h: Hermitian2) -> Self {
        Mat2([
            [Complex::new(h.a, 0.0), Complex::new(h.re_b, h.im_b)],
            [Complex::new(h.re_b, -h.im_b), Complex::new(h.d, 0.0)],
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (x, y) = (self.0, o.0);
        let e = |i: usize, j: usize| x[i][0] * y[0][j] + x[i][1] * y[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Mat2 {
    /// Hermitian part; exact when the product is Hermitian up to rounding.
    fn to_hermitian(self) -> Hermitian2 {
        let m = self.0;
        Hermitian2 {
            a: m[0][0].re,
            d: m[1][1].re,
            re_b: 0.5 * (m[0][1].re + m[1][0].re),
            im_b: 0.5 * (m[0][1].im - m[1][0].im),
        }
    }
}

/// `√A · B · √A` for Hermitian `√A`, `B`.
fn sandwich(root: &Hermitian2, b: &Hermitian2) -> Hermitian2 {
    let r = Mat2::from(*root);
    (r * Mat2::from(*b) * r).to_hermitian()
}

/// Regular qubit density matrix: trace 1, positive definite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix2(Hermitian2);

impl DensityMatrix2 {
    pub fn new(h: Hermitian2, tol: &ToleranceConfig) -> Result<Self> {
        h.check_finite()?;
        if (h.trace() - 1.0).abs() > tol.abs_tol {
            return Err(Error::NotUnitTrace { trace: h.trace() });
        }
        if !h.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self(h))
    }

    pub fn matrix(&self) -> &Hermitian2 {
        &self.0
    }
}

/// Positive definite with determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PosDef2Det1(Hermitian2);

impl PosDef2Det1 {
    pub fn new(h: Hermitian2, tol: &ToleranceConfig) -> Result<Self> {
        h.check_finite()?;
        if !h.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        if (h.det() - 1.0).abs() > tol.rel_tol {
            return Err(Error::NotUnitDeterminant { det: h.det() });
        }
        Ok(Self(h))
    }

    pub fn matrix(&self) -> &Hermitian2 {
        &self.0
    }
}

/// Positive definite square root in closed form:
/// `√A = (A + √det A · I) / √(tr A + 2√det A)`.
pub fn sqrt_posdef2(a: &Hermitian2) -> Result<Hermitian2> {
    a.check_finite()?;
    if !a.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let s = a.det().sqrt();
    let t = (a.trace() + 2.0 * s).sqrt();
    Ok(Hermitian2 {
        a: (a.a + s) / t,
        d: (a.d + s) / t,
        re_b: a.re_b / t,
        im_b: a.im_b / t,
    })
}

/// `√A · B · √A` for any positive definite `A` and Hermitian `B`.
pub fn sandwich_with_root(a: &Hermitian2, b: &Hermitian2) -> Result<Hermitian2> {
    b.check_finite()?;
    Ok(sandwich(&sqrt_posdef2(a)?, b))
}

/// `A ⊙ B = √A B √A / tr(√A B √A)`.
pub fn odot(a: &DensityMatrix2, b: &DensityMatrix2) -> Result<DensityMatrix2> {
    let root = sqrt_posdef2(&a.0)?;
    let m = sandwich(&root, &b.0);
    let out = m.scale(1.0 / m.trace());
    if !out.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(DensityMatrix2(out))
}

/// `A ⊡ B = √A B √A`.
pub fn boxdot(a: &PosDef2Det1, b: &PosDef2Det1) -> Result<PosDef2Det1> {
    let root = sqrt_posdef2(&a.0)?;
    let out = sandwich(&root, &b.0);
    if !out.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(PosDef2Det1(out))
}

/// `½(I + v₁σ₁ + v₂σ₂ + v₃σ₃) = ½[[1 + v₃, v₁ − i·v₂], [v₁ + i·v₂, 1 − v₃]]`.
pub fn bloch_to_density(v: &GyroVector) -> Result<DensityMatrix2> {
    if v.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: v.dim(),
        });
    }
    let c = v.coords();
    Ok(DensityMatrix2(Hermitian2 {
        a: 0.5 * (1.0 + c[2]),
        d: 0.5 * (1.0 - c[2]),
        re_b: 0.5 * c[0],
        im_b: -0.5 * c[1],
    }))
}

/// Inverse of [`bloch_to_density`]: `v = (2·re_b, −2·im_b, a − d)`.
pub fn density_to_bloch(a: &DensityMatrix2) -> Result<GyroVector> {
    let h = &a.0;
    GyroVector::interior(vec![2.0 * h.re_b, -2.0 * h.im_b, h.a - h.d])
}

/// `A ↦ A / √det A`.
pub fn normalize_det(a: &DensityMatrix2) -> Result<PosDef2Det1> {
    let det = a.0.det();
    if det <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(PosDef2Det1(a.0.scale(1.0 / det.sqrt())))
}
