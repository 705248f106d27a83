//! Hyperbolic predicates on the Cayley–Klein–Beltrami ball.
//!
//! Lines of hyperbolic space are Euclidean chords of the ball, so collinearity
//! can be decided either with plain linear algebra ([`collinear_direct`]) or
//! through the gyrogroup alone ([`collinear_gyro`]): after translating `x` to
//! the origin, the other two points must commute under `⊕`.

use crate::error::Result;
use crate::gyro::{dot, einstein_add, ensure_same_dim, neg, norm_sq, GyroVector, ToleranceConfig};

/// Hyperbolic distance in the Klein model, normalised so that
/// `d(0, u) = artanh |u|`.
///
/// Mathematically `d = arcosh(A)` with `A = (1 − (x,y)) / √((1 − |x|²)(1 − |y|²))`.
/// It is evaluated as `asinh(√(A² − 1))`, where
/// `(A² − 1)·(1 − |x|²)(1 − |y|²) = |y − x|² − (|x|²|y − x|² − (x, y − x)²)`,
/// which stays accurate for nearby points where `arcosh` near 1 does not.
pub fn klein_distance(x: &GyroVector, y: &GyroVector) -> Result<f64> {
    ensure_same_dim(x, y)?;
    let delta: Vec<f64> = y
        .coords()
        .iter()
        .zip(x.coords())
        .map(|(b, a)| b - a)
        .collect();
    let delta_sq = norm_sq(&delta);
    let x_sq = x.norm_sq();
    let wedge_sq = (x_sq * delta_sq - dot(x.coords(), &delta).powi(2)).max(0.0);
    let numer = (delta_sq - wedge_sq).max(0.0);
    let denom = ((1.0 - x_sq) * (1.0 - y.norm_sq())).sqrt();
    Ok((numer.sqrt() / denom).asinh())
}

/// Whether `u ⊕ v ≈ v ⊕ u`.
pub fn commutes(u: &GyroVector, v: &GyroVector, tol: &ToleranceConfig) -> Result<bool> {
    let uv = einstein_add(u, v)?;
    let vu = einstein_add(v, u)?;
    Ok(uv.approx_eq(&vu, tol))
}

/// Gram determinant `|a|²|b|² − (a,b)²`, clamped at zero.
pub fn gram_determinant(a: &[f64], b: &[f64]) -> f64 {
    (norm_sq(a) * norm_sq(b) - dot(a, b).powi(2)).max(0.0)
}

fn dependent_by_gram(a: &[f64], b: &[f64], tol: &ToleranceConfig) -> bool {
    gram_determinant(a, b) <= tol.abs_tol * (1.0 + norm_sq(a) * norm_sq(b))
}

/// Numeric linear dependence of two vectors via the Gram determinant.
pub fn linearly_dependent(u: &GyroVector, v: &GyroVector, tol: &ToleranceConfig) -> bool {
    u.dim() == v.dim() && dependent_by_gram(u.coords(), v.coords(), tol)
}

/// Collinearity through the gyrogroup:
/// `((−x)⊕y) ⊕ ((−x)⊕z) ≈ ((−x)⊕z) ⊕ ((−x)⊕y)`.
pub fn collinear_gyro(
    x: &GyroVector,
    y: &GyroVector,
    z: &GyroVector,
    tol: &ToleranceConfig,
) -> Result<bool> {
    ensure_same_dim(x, y)?;
    ensure_same_dim(x, z)?;
    let minus_x = neg(x);
    let a = einstein_add(&minus_x, y)?;
    let b = einstein_add(&minus_x, z)?;
    commutes(&a, &b, tol)
}

/// Euclidean collinearity of three points: `y − x` and `z − x` are dependent.
pub fn collinear_direct(
    x: &GyroVector,
    y: &GyroVector,
    z: &GyroVector,
    tol: &ToleranceConfig,
) -> Result<bool> {
    ensure_same_dim(x, y)?;
    ensure_same_dim(x, z)?;
    let (a, b) = chord_offsets(x, y, z);
    Ok(dependent_by_gram(&a, &b, tol))
}

/// `(y − x, z − x)`.
pub fn chord_offsets(x: &GyroVector, y: &GyroVector, z: &GyroVector) -> (Vec<f64>, Vec<f64>) {
    let sub = |p: &GyroVector| -> Vec<f64> {
        p.coords()
            .iter()
            .zip(x.coords())
            .map(|(a, b)| a - b)
            .collect()
    };
    (sub(y), sub(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gyro::line_param;
    use approx::assert_abs_diff_eq;

    fn gv(c: &[f64]) -> GyroVector {
        GyroVector::new(c.to_vec()).unwrap()
    }

    /// Textbook arcosh form, kept as an independent oracle.
    fn arcosh_distance(x: &GyroVector, y: &GyroVector) -> f64 {
        let arg = (1.0 - x.dot(y)) / ((1.0 - x.norm_sq()) * (1.0 - y.norm_sq())).sqrt();
        arg.max(1.0).acosh()
    }

    #[test]
    fn distance_examples() {
        let z = GyroVector::zero(2);
        assert_eq!(klein_distance(&z, &z).unwrap(), 0.0);
        let half = gv(&[0.5, 0.0]);
        assert_abs_diff_eq!(
            klein_distance(&z, &half).unwrap(),
            0.5f64.atanh(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            klein_distance(&z, &half).unwrap(),
            0.54930614,
            epsilon = 1e-8
        );
        let d = klein_distance(&half, &gv(&[0.8, 0.0])).unwrap();
        assert_abs_diff_eq!(d, 0.8f64.atanh() - 0.5f64.atanh(), epsilon = 1e-14);
        assert_abs_diff_eq!(d, 0.54930614, epsilon = 1e-8);
    }

    #[test]
    fn distance_matches_arcosh_form() {
        let pts = [
            gv(&[0.3, -0.4, 0.1]),
            gv(&[-0.9, 0.2, 0.3]),
            gv(&[0.0, 0.99, 0.0]),
            gv(&[0.5, 0.5, 0.5]),
        ];
        for x in &pts {
            for y in &pts {
                let d = klein_distance(x, y).unwrap();
                assert_abs_diff_eq!(d, arcosh_distance(x, y), epsilon = 1e-7);
                assert_abs_diff_eq!(d, klein_distance(y, x).unwrap(), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn distance_resolves_nearby_points() {
        let x = gv(&[0.2, 0.0]);
        let y = gv(&[0.2 + 1e-10, 0.0]);
        let d = klein_distance(&x, &y).unwrap();
        // d ≈ |dx| · γ² along a radius
        assert_abs_diff_eq!(d, 1e-10 / (1.0 - 0.04), epsilon = 1e-16);
    }

    #[test]
    fn commutes_examples() {
        let tol = ToleranceConfig::default();
        assert!(commutes(&gv(&[0.2, 0.0]), &gv(&[0.6, 0.0]), &tol).unwrap());
        assert!(!commutes(&gv(&[0.5, 0.0]), &gv(&[0.0, 0.5]), &tol).unwrap());
        assert!(commutes(&GyroVector::zero(2), &gv(&[0.3, 0.4]), &tol).unwrap());
    }

    #[test]
    fn linearly_dependent_examples() {
        let tol = ToleranceConfig::default();
        assert!(linearly_dependent(&gv(&[0.2, 0.0]), &gv(&[0.6, 0.0]), &tol));
        assert!(!linearly_dependent(
            &gv(&[0.5, 0.0]),
            &gv(&[0.0, 0.5]),
            &tol
        ));
        assert!(linearly_dependent(
            &GyroVector::zero(2),
            &gv(&[0.9, 0.0]),
            &tol
        ));
    }

    #[test]
    fn collinear_examples() {
        let tol = ToleranceConfig::default();
        let (x, y, z) = (gv(&[0.1, 0.1]), gv(&[0.2, 0.2]), gv(&[0.3, 0.3]));
        assert!(collinear_direct(&x, &y, &z, &tol).unwrap());
        assert!(collinear_gyro(&x, &y, &z, &tol).unwrap());

        let (x, y, z) = (GyroVector::zero(2), gv(&[0.3, 0.0]), gv(&[0.0, 0.3]));
        assert!(!collinear_direct(&x, &y, &z, &tol).unwrap());
        assert!(!collinear_gyro(&x, &y, &z, &tol).unwrap());
        assert_eq!(
            collinear_gyro(&x, &y, &z, &tol).unwrap(),
            commutes(&y, &z, &tol).unwrap()
        );

        let x = gv(&[0.4, 0.1]);
        for z in [gv(&[-0.7, 0.2]), gv(&[0.0, 0.9]), GyroVector::zero(2)] {
            assert!(collinear_gyro(&x, &x, &z, &tol).unwrap());
            assert!(collinear_direct(&x, &x, &z, &tol).unwrap());
            assert!(collinear_direct(&z, &x, &x, &tol).unwrap());
        }
    }

    #[test]
    fn distance_along_a_diameter() {
        let x = gv(&[0.3, 0.4]);
        for t in [-3.0, -0.5, 0.0, 1.0, 2.5] {
            let p = line_param(&x, t).unwrap();
            let d = klein_distance(&GyroVector::zero(2), &p).unwrap();
            assert_abs_diff_eq!(d, f64::abs(t) * 0.5f64.atanh(), epsilon = 1e-12);
        }
    }
}
