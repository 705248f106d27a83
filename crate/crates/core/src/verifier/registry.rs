use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::harness::{run_sampled, Case, Check};
use super::report::PropertyReport;
use super::sampler::{derive_seed, sample_ball_with};
use crate::error::Result;
use crate::geometry::{
    chord_offsets, collinear_direct, collinear_gyro, commutes, gram_determinant, klein_distance,
};
use crate::gyro::{
    einstein_add, gamma, gyration, line_param, line_param_bound, neg, GyroVector, ToleranceConfig,
};
use crate::matrix_models::{
    bloch_to_density, boxdot, density_to_bloch, normalize_det, odot, sandwich_with_root,
    sqrt_posdef2, Hermitian2,
};
use crate::morphisms::{
    classify_endomorphism, endomorphism_residual, evaluate, random_contraction, random_orthogonal,
    test_endomorphism, zero_propagation_check, BallMap, FnMap, LinearMap, MapClassification,
    ZeroMap,
};

const GYRO_DIMS: &[usize] = &[2, 3, 5];
const PLANAR_DIMS: &[usize] = &[2, 3];
const MAP_DIMS: &[usize] = &[2, 3, 4, 5];
const CLASSIFIER_INSTANCES: usize = 100;

pub(crate) struct Ctx<'a> {
    pub n: usize,
    pub seed: u64,
    pub tol: &'a ToleranceConfig,
    pub threshold: f64,
}

/// A named, registered property.
pub struct Property {
    pub name: &'static str,
    /// Module whose invariant this property checks.
    pub module: &'static str,
    pub(crate) default_threshold: fn(&ToleranceConfig) -> f64,
    runner: fn(&Ctx) -> PropertyReport,
}

impl Property {
    pub fn lookup(name: &str) -> Option<&'static Property> {
        REGISTRY.iter().find(|p| p.name == name)
    }

    pub fn default_threshold(&self, tol: &ToleranceConfig) -> f64 {
        (self.default_threshold)(tol)
    }

    pub fn all() -> &'static [Property] {
        REGISTRY
    }

    pub(crate) fn run(
        &self,
        n: usize,
        seed: u64,
        tol: &ToleranceConfig,
        threshold: f64,
    ) -> PropertyReport {
        let ctx = Ctx {
            n,
            seed: derive_seed(seed, self.name),
            tol,
            threshold,
        };
        let mut report = (self.runner)(&ctx);
        report.name = self.name.to_string();
        report.seed = seed;
        report
    }
}

pub fn property_names() -> &'static [&'static str] {
    NAMES
}

macro_rules! registry {
    ($( $name:literal, $module:literal, $threshold:expr, $runner:expr; )*) => {
        static REGISTRY: &[Property] = &[
            $( Property { name: $name, module: $module, default_threshold: $threshold, runner: $runner }, )*
        ];
        static NAMES: &[&str] = &[ $( $name, )* ];
    };
}

registry! {
    "closure", "gyro", |_| 1.0, closure;
    "identity", "gyro", |t| t.abs_tol, identity;
    "left_inverse", "gyro", |t| t.abs_tol, left_inverse;
    "left_cancellation", "gyro", |t| t.abs_tol, left_cancellation;
    "gamma_identity", "gyro", |t| t.rel_tol, gamma_identity;
    "gyration_orthogonality", "gyro", |t| t.rel_tol, gyration_orthogonality;
    "gyrocommutativity", "gyro", |t| t.abs_tol, gyrocommutativity;
    "one_parameter_subgroup", "gyro", |t| t.abs_tol, one_parameter_subgroup;
    "commutes_iff_dependent", "geometry", |_| 0.0, commutes_iff_dependent;
    "collinear_equivalence", "geometry", |_| 0.0, collinear_equivalence;
    "left_translation_isometry", "geometry", |t| t.rel_tol, left_translation_isometry;
    "distance_symmetry", "geometry", |t| t.rel_tol, distance_symmetry;
    "line_translation_distance", "geometry", |t| t.rel_tol, line_translation_distance;
    "endomorphism_fixes_zero", "morphisms", |t| t.abs_tol, endomorphism_fixes_zero;
    "orthogonal_endomorphism", "morphisms", |t| t.abs_tol, orthogonal_endomorphism;
    "orthogonal_exact_preservation", "morphisms", |_| 10.0 * f64::EPSILON, orthogonal_exact_preservation;
    "classifier_soundness", "morphisms", |_| 0.0, classifier_soundness;
    "classifier_reconstruction", "morphisms", |t| 10.0 * t.abs_tol, classifier_reconstruction;
    "zero_propagation", "morphisms", |_| 1e-12, zero_propagation;
    "bloch_homomorphism", "matrix_models", |t| t.rel_tol, bloch_homomorphism;
    "det_normalization_homomorphism", "matrix_models", |t| t.rel_tol, det_normalization_homomorphism;
    "sqrt_squares", "matrix_models", |_| 1e-12, sqrt_squares;
    "det_multiplicative", "matrix_models", |t| t.rel_tol, det_multiplicative;
    "transported_automorphism", "matrix_models", |t| t.rel_tol, transported_automorphism;
}

fn point(rng: &mut ChaCha8Rng, dim: usize, tol: &ToleranceConfig) -> GyroVector {
    sample_ball_with(rng, dim, tol.sample_rmax)
}

fn pair(
    ctx: &Ctx,
    dims: &[usize],
    name: &'static str,
    check: impl Fn(&Case) -> Result<Check>,
) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        name,
        dims,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            Case::vectors(vec![
                ("u", point(rng, dim, tol)),
                ("v", point(rng, dim, tol)),
            ])
        },
        check,
    )
}

// gyro

fn closure(ctx: &Ctx) -> PropertyReport {
    pair(ctx, GYRO_DIMS, "closure", |c| {
        let norm = einstein_add(c.v(0), c.v(1))?.norm();
        Ok(Check {
            residual: norm,
            ok: norm < ctx.threshold,
        })
    })
}

fn identity(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        "identity",
        GYRO_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| Case::vectors(vec![("u", point(rng, dim, tol))]),
        |c| {
            let u = c.v(0);
            let zero = GyroVector::zero(u.dim());
            let right = einstein_add(u, &zero)?;
            let left = einstein_add(&zero, u)?;
            let r = right.euclidean_distance(u).max(left.euclidean_distance(u));
            Ok(Check {
                residual: r,
                ok: r <= ctx.threshold && right.approx_eq(u, tol) && left.approx_eq(u, tol),
            })
        },
    )
}

fn left_inverse(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        "left_inverse",
        GYRO_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| Case::vectors(vec![("u", point(rng, dim, tol))]),
        |c| {
            let u = c.v(0);
            let r = einstein_add(u, &neg(u))?
                .norm()
                .max(einstein_add(&neg(u), u)?.norm());
            Ok(Check::within(r, ctx.threshold))
        },
    )
}

/// Residual in units of `γ(u)²`.
fn left_cancellation(ctx: &Ctx) -> PropertyReport {
    pair(ctx, GYRO_DIMS, "left_cancellation", |c| {
        let (u, v) = (c.v(0), c.v(1));
        let back = einstein_add(&neg(u), &einstein_add(u, v)?)?;
        let scale = gamma(u).powi(2);
        Ok(Check::within(
            back.euclidean_distance(v) / scale,
            ctx.threshold,
        ))
    })
}

/// Relative residual of `γ(u⊕v) = γ(u)γ(v)(1 + (u,v))`.
fn gamma_identity(ctx: &Ctx) -> PropertyReport {
    pair(ctx, GYRO_DIMS, "gamma_identity", |c| {
        let (u, v) = (c.v(0), c.v(1));
        let predicted = gamma(u) * gamma(v) * (1.0 + u.dot(v));
        let actual = gamma(&einstein_add(u, v)?);
        Ok(Check::within(
            (actual - predicted).abs() / predicted,
            ctx.threshold,
        ))
    })
}

/// Inner products are preserved by `gyr[u,v]`.
fn gyration_orthogonality(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        "gyration_orthogonality",
        GYRO_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            Case::vectors(vec![
                ("u", point(rng, dim, tol)),
                ("v", point(rng, dim, tol)),
                ("w1", point(rng, dim, tol)),
                ("w2", point(rng, dim, tol)),
            ])
        },
        |c| {
            let (u, v, w1, w2) = (c.v(0), c.v(1), c.v(2), c.v(3));
            let g1 = gyration(u, v, w1)?;
            let g2 = gyration(u, v, w2)?;
            let inner = (g1.dot(&g2) - w1.dot(w2)).abs();
            let norm = (g1.norm() - w1.norm()).abs();
            Ok(Check::within(inner.max(norm), ctx.threshold))
        },
    )
}

/// `u⊕v = gyr[u,v](v⊕u)`.
fn gyrocommutativity(ctx: &Ctx) -> PropertyReport {
    pair(ctx, GYRO_DIMS, "gyrocommutativity", |c| {
        let (u, v) = (c.v(0), c.v(1));
        let lhs = einstein_add(u, v)?;
        let rhs = gyration(u, v, &einstein_add(v, u)?)?;
        Ok(Check::within(lhs.euclidean_distance(&rhs), ctx.threshold))
    })
}

/// `line_param(x,s) ⊕ line_param(x,t) = line_param(x,s+t)`.
fn one_parameter_subgroup(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        "one_parameter_subgroup",
        GYRO_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            let x = loop {
                let x = point(rng, dim, tol);
                if x.norm() > 1e-6 {
                    break x;
                }
            };
            let half = 0.5 * line_param_bound(&x, tol.sample_rmax);
            let s = rng.gen_range(-half..half);
            let t = rng.gen_range(-half..half);
            Case::vectors(vec![("x", x)]).with_scalars(vec![("s", s), ("t", t)])
        },
        |c| {
            let (x, s, t) = (c.v(0), c.s(0), c.s(1));
            let lhs = einstein_add(&line_param(x, s)?, &line_param(x, t)?)?;
            let rhs = line_param(x, s + t)?;
            Ok(Check::within(lhs.euclidean_distance(&rhs), ctx.threshold))
        },
    )
}

// geometry

/// Both directions: multiples commute, well-conditioned independent pairs do not.
fn commutes_iff_dependent(ctx: &Ctx) -> PropertyReport {
    let tol = *ctx.tol;
    let band = 1e3 * tol.abs_tol;
    run_sampled(
        "commutes_iff_dependent",
        GYRO_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            let u = point(rng, dim, &tol);
            let bound = tol.sample_rmax / u.norm().max(1e-300);
            let t = rng.gen_range(-bound..bound);
            let dependent = u
                .scaled(t.clamp(-bound, bound))
                .unwrap_or_else(|_| GyroVector::zero(dim));
            let (a, b) = loop {
                let a = point(rng, dim, &tol);
                let b = point(rng, dim, &tol);
                if gram_determinant(a.coords(), b.coords()) > band {
                    break (a, b);
                }
            };
            Case::vectors(vec![("u", u), ("tu", dependent), ("a", a), ("b", b)])
        },
        |c| {
            let dependent_ok = commutes(c.v(0), c.v(1), &tol)?;
            let independent_ok = !commutes(c.v(2), c.v(3), &tol)?;
            Ok(Check::flag(dependent_ok && independent_ok))
        },
    )
}

/// Points `p + s·d` on a random chord of the `rmax` ball.
fn chord_points(
    rng: &mut ChaCha8Rng,
    dim: usize,
    tol: &ToleranceConfig,
    k: usize,
) -> Vec<GyroVector> {
    let p = point(rng, dim, tol);
    let dir = sample_ball_with(rng, dim, 0.5);
    let dn = dir.norm().max(1e-300);
    let d: Vec<f64> = dir.coords().iter().map(|x| x / dn).collect();
    // |p + s d|² = r²  ⇒  s² + 2(p,d)s + |p|² − r² = 0
    let pd: f64 = p.coords().iter().zip(&d).map(|(a, b)| a * b).sum();
    let disc = (pd * pd - p.norm_sq() + tol.sample_rmax.powi(2))
        .max(0.0)
        .sqrt();
    let (lo, hi) = (-pd - disc, -pd + disc);
    (0..k)
        .map(|_| {
            let s = rng.gen_range(lo..=hi);
            let coords = p.coords().iter().zip(&d).map(|(a, b)| a + s * b).collect();
            GyroVector::interior(coords).expect("chord lies in the ball")
        })
        .collect()
}

/// The gyro and Euclidean collinearity tests agree on chord triples and on
/// general-position triples outside the decision band.
fn collinear_equivalence(ctx: &Ctx) -> PropertyReport {
    let tol = *ctx.tol;
    run_sampled(
        "collinear_equivalence",
        PLANAR_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            let mut chord = chord_points(rng, dim, &tol, 3);
            let (z, y, x) = (
                chord.pop().unwrap(),
                chord.pop().unwrap(),
                chord.pop().unwrap(),
            );
            Case::vectors(vec![
                ("x", x),
                ("y", y),
                ("z", z),
                ("p", point(rng, dim, &tol)),
                ("q", point(rng, dim, &tol)),
                ("r", point(rng, dim, &tol)),
            ])
        },
        |c| {
            let on_chord = collinear_gyro(c.v(0), c.v(1), c.v(2), &tol)?
                && collinear_direct(c.v(0), c.v(1), c.v(2), &tol)?;
            let (a, b) = chord_offsets(c.v(3), c.v(4), c.v(5));
            let gram = gram_determinant(&a, &b);
            let excluded = gram >= tol.abs_tol / 1e3 && gram <= tol.abs_tol * 1e3;
            let general = excluded
                || collinear_gyro(c.v(3), c.v(4), c.v(5), &tol)?
                    == collinear_direct(c.v(3), c.v(4), c.v(5), &tol)?;
            Ok(Check::flag(on_chord && general))
        },
    )
}

/// `d(u⊕v, u⊕w) = d(v, w)`; residual in units of `1 + γ(u)`.
fn left_translation_isometry(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        "left_translation_isometry",
        &[3],
        ctx.n,
        ctx.seed,
        |rng, dim| {
            Case::vectors(vec![
                ("u", point(rng, dim, tol)),
                ("v", point(rng, dim, tol)),
                ("w", point(rng, dim, tol)),
            ])
        },
        |c| {
            let (u, v, w) = (c.v(0), c.v(1), c.v(2));
            let moved = klein_distance(&einstein_add(u, v)?, &einstein_add(u, w)?)?;
            let d = klein_distance(v, w)?;
            Ok(Check::within(
                (moved - d).abs() / (1.0 + gamma(u)),
                ctx.threshold,
            ))
        },
    )
}

/// Symmetry, `d(x,x) = 0` and positivity for distinct points.
fn distance_symmetry(ctx: &Ctx) -> PropertyReport {
    let tol = *ctx.tol;
    pair(ctx, GYRO_DIMS, "distance_symmetry", move |c| {
        let (x, y) = (c.v(0), c.v(1));
        let dxy = klein_distance(x, y)?;
        let dyx = klein_distance(y, x)?;
        let asym = (dxy - dyx).abs() / dxy.max(1.0);
        let self_dist = klein_distance(x, x)?.max(klein_distance(y, y)?);
        let separated = x.approx_eq(y, &tol) || dxy > 0.0;
        Ok(Check {
            residual: asym.max(self_dist),
            ok: asym <= ctx.threshold && self_dist == 0.0 && separated,
        })
    })
}

/// `d(0, line_param(x,t)) = |t|·artanh|x|`, relative.
fn line_translation_distance(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    run_sampled(
        "line_translation_distance",
        GYRO_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            let x = loop {
                let x = point(rng, dim, tol);
                if x.norm() > 1e-6 {
                    break x;
                }
            };
            let bound = line_param_bound(&x, tol.sample_rmax);
            let t = rng.gen_range(-bound..bound);
            Case::vectors(vec![("x", x)]).with_scalars(vec![("t", t)])
        },
        |c| {
            let (x, t) = (c.v(0), c.s(0));
            let d = klein_distance(&GyroVector::zero(x.dim()), &line_param(x, t)?)?;
            let expected = t.abs() * x.norm().atanh();
            Ok(Check::within(
                (d - expected).abs() / expected.max(1.0),
                ctx.threshold,
            ))
        },
    )
}

// morphisms

struct Tally {
    samples: usize,
    max_residual: f64,
    first: Option<serde_json::Value>,
}

impl Tally {
    fn new() -> Self {
        Self {
            samples: 0,
            max_residual: 0.0,
            first: None,
        }
    }

    fn record(&mut self, residual: f64, ok: bool, detail: impl FnOnce() -> serde_json::Value) {
        self.samples += 1;
        if residual.is_finite() {
            self.max_residual = self.max_residual.max(residual);
        }
        if !ok && self.first.is_none() {
            self.first = Some(detail());
        }
    }

    fn fail(&mut self, detail: serde_json::Value) {
        self.record(f64::INFINITY, false, || detail);
    }

    fn finish(self, seed: u64) -> PropertyReport {
        PropertyReport {
            name: String::new(),
            samples_run: self.samples,
            passed: self.first.is_none(),
            max_residual: self.max_residual,
            first_counterexample: self.first,
            seed,
        }
    }
}

fn instance_rng(ctx: &Ctx, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, label))
}

/// Maps that pass the endomorphism test send 0 to 0.
fn endomorphism_fixes_zero(ctx: &Ctx) -> PropertyReport {
    let mut rng = instance_rng(ctx, "maps");
    let mut tally = Tally::new();
    let instances = ctx.n.min(CLASSIFIER_INSTANCES);
    for i in 0..instances {
        let dim = MAP_DIMS[i % MAP_DIMS.len()];
        let q = match random_orthogonal(dim, &mut rng) {
            Ok(q) => q,
            Err(e) => {
                tally.fail(json!({ "error": e.to_string() }));
                continue;
            }
        };
        let maps: [&dyn BallMap; 2] = [&q, &ZeroMap { dim }];
        for f in maps {
            let outcome = test_endomorphism(f, ctx.n, rng.gen(), ctx.tol).and_then(|report| {
                let at_zero = evaluate(f, &GyroVector::zero(dim), ctx.tol)?.norm();
                Ok((report.passed, at_zero))
            });
            match outcome {
                Ok((true, at_zero)) => tally.record(
                    at_zero,
                    at_zero <= ctx.threshold,
                    || json!({ "dim": dim, "f_at_zero": at_zero }),
                ),
                Ok((false, _)) => {
                    tally.fail(json!({ "dim": dim, "error": "endomorphism test failed" }))
                }
                Err(e) => tally.fail(json!({ "dim": dim, "error": e.to_string() })),
            }
        }
    }
    tally.finish(ctx.seed)
}

/// Random orthogonal restrictions pass the endomorphism test.
fn orthogonal_endomorphism(ctx: &Ctx) -> PropertyReport {
    let mut rng = instance_rng(ctx, "maps");
    let mut tally = Tally::new();
    for &dim in MAP_DIMS {
        match random_orthogonal(dim, &mut rng)
            .and_then(|q| Ok((test_endomorphism(&q, ctx.n, rng.gen(), ctx.tol)?, q)))
        {
            Ok((report, q)) => {
                let r = report.max_residual;
                tally.record(
                    r,
                    report.passed && r <= ctx.threshold,
                    || json!({ "dim": dim, "matrix": q, "report": report }),
                );
            }
            Err(e) => tally.fail(json!({ "dim": dim, "error": e.to_string() })),
        }
    }
    tally.finish(ctx.seed)
}

/// `Q(u⊕v) = Qu ⊕ Qv` to within `threshold · γ(u)γ(v)` on the 0.9 ball.
fn orthogonal_exact_preservation(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    let mut rng = instance_rng(ctx, "maps");
    let maps: Vec<LinearMap> = MAP_DIMS
        .iter()
        .map(|&d| random_orthogonal(d, &mut rng).expect("dimension >= 2"))
        .collect();
    run_sampled(
        "orthogonal_exact_preservation",
        MAP_DIMS,
        ctx.n,
        ctx.seed,
        |rng, dim| {
            Case::vectors(vec![
                ("u", sample_ball_with(rng, dim, 0.9)),
                ("v", sample_ball_with(rng, dim, 0.9)),
            ])
        },
        |c| {
            let (u, v) = (c.v(0), c.v(1));
            let q = &maps[MAP_DIMS.iter().position(|&d| d == u.dim()).unwrap()];
            let r = endomorphism_residual(q, u, v, tol)?;
            Ok(Check::within(r / (gamma(u) * gamma(v)), ctx.threshold))
        },
    )
}

/// Orthogonal maps, the zero map and linear contractions get the verdicts
/// matching their construction.
fn classifier_soundness(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    let mut rng = instance_rng(ctx, "families");
    let mut tally = Tally::new();
    for i in 0..CLASSIFIER_INSTANCES {
        let dim = MAP_DIMS[i % MAP_DIMS.len()];
        let q = random_orthogonal(dim, &mut rng).expect("dimension >= 2");
        let spectral = rng.gen_range(0.2..=0.95);
        let m = random_contraction(dim, spectral, &mut rng).expect("dimension >= 2");
        let seed = rng.gen();

        match classify_endomorphism(&q, ctx.n, seed, tol) {
            Ok(MapClassification::Orthogonal { .. }) => tally.record(0.0, true, || json!(null)),
            other => tally
                .fail(json!({ "family": "orthogonal", "dim": dim, "got": format!("{other:?}") })),
        }
        match classify_endomorphism(&ZeroMap { dim }, ctx.n, seed, tol) {
            Ok(MapClassification::Zero) => tally.record(0.0, true, || json!(null)),
            other => {
                tally.fail(json!({ "family": "zero", "dim": dim, "got": format!("{other:?}") }))
            }
        }
        match classify_endomorphism(&m, ctx.n, seed, tol) {
            Ok(MapClassification::NotEndomorphism { witness }) => {
                let recomputed =
                    endomorphism_residual(&m, &witness.u, &witness.v, tol).unwrap_or(0.0);
                tally.record(0.0, recomputed > tol.decision_threshold(), || {
                    json!({ "family": "contraction", "dim": dim, "witness": witness, "recomputed": recomputed })
                });
            }
            other => tally
                .fail(json!({ "family": "contraction", "dim": dim, "got": format!("{other:?}") })),
        }
    }
    tally.finish(ctx.seed)
}

/// The recovered matrix of an orthogonal map matches the one it was built from.
fn classifier_reconstruction(ctx: &Ctx) -> PropertyReport {
    let mut rng = instance_rng(ctx, "orthogonal");
    let mut tally = Tally::new();
    for i in 0..CLASSIFIER_INSTANCES {
        let dim = MAP_DIMS[i % MAP_DIMS.len()];
        let q = random_orthogonal(dim, &mut rng).expect("dimension >= 2");
        match classify_endomorphism(&q, ctx.n, rng.gen(), ctx.tol) {
            Ok(MapClassification::Orthogonal { matrix }) => {
                let err = matrix.max_abs_diff(&q);
                tally.record(
                    err,
                    err <= ctx.threshold,
                    || json!({ "dim": dim, "expected": q, "got": matrix }),
                );
            }
            other => tally.fail(json!({ "dim": dim, "got": format!("{other:?}") })),
        }
    }
    tally.finish(ctx.seed)
}

/// A map that is 0 inside radius 0.9 and the identity outside.
pub(crate) fn broken_zero_map(dim: usize) -> impl BallMap {
    FnMap::new(dim, |w: &[f64]| {
        if w.iter().map(|c| c * c).sum::<f64>().sqrt() > 0.9 {
            w.to_vec()
        } else {
            vec![0.0; w.len()]
        }
    })
}

/// The zero map passes the propagation check with no deviation; the broken
/// control map fails it.
fn zero_propagation(ctx: &Ctx) -> PropertyReport {
    let mut tally = Tally::new();
    for &dim in MAP_DIMS {
        let x = GyroVector::axis(dim, 0, 0.5).expect("inside the ball");
        match zero_propagation_check(&ZeroMap { dim }, &x, ctx.n, ctx.seed, ctx.tol) {
            Ok(r) => {
                let ok = r.passed && r.max_residual <= ctx.threshold;
                tally.record(r.max_residual, ok, || json!({ "dim": dim, "report": r }));
            }
            Err(e) => tally.fail(json!({ "dim": dim, "error": e.to_string() })),
        }
        match zero_propagation_check(&broken_zero_map(dim), &x, ctx.n, ctx.seed, ctx.tol) {
            Ok(r) if !r.passed => tally.record(0.0, true, || json!(null)),
            other => tally.fail(json!({
                "dim": dim,
                "control": "broken map was not rejected",
                "got": format!("{other:?}"),
            })),
        }
    }
    tally.finish(ctx.seed)
}

// matrix models

fn entrywise_residual(lhs: &Hermitian2, rhs: &Hermitian2) -> f64 {
    lhs.max_abs_diff(rhs) / (1.0 + lhs.max_abs_entry().max(rhs.max_abs_entry()))
}

/// `bloch(u⊕v) = bloch(u) ⊙ bloch(v)`.
fn bloch_homomorphism(ctx: &Ctx) -> PropertyReport {
    pair(ctx, &[3], "bloch_homomorphism", |c| {
        let (u, v) = (c.v(0), c.v(1));
        let lhs = bloch_to_density(&einstein_add(u, v)?)?;
        let rhs = odot(&bloch_to_density(u)?, &bloch_to_density(v)?)?;
        let r = entrywise_residual(lhs.matrix(), rhs.matrix());
        Ok(Check {
            residual: r,
            ok: r <= ctx.threshold && lhs.matrix().approx_eq(rhs.matrix(), ctx.tol),
        })
    })
}

/// `φ(A⊙B) = φ(A) ⊡ φ(B)` for `φ(A) = A/√det A`.
fn det_normalization_homomorphism(ctx: &Ctx) -> PropertyReport {
    pair(ctx, &[3], "det_normalization_homomorphism", |c| {
        let a = bloch_to_density(c.v(0))?;
        let b = bloch_to_density(c.v(1))?;
        let lhs = normalize_det(&odot(&a, &b)?)?;
        let rhs = boxdot(&normalize_det(&a)?, &normalize_det(&b)?)?;
        Ok(Check::within(
            entrywise_residual(lhs.matrix(), rhs.matrix()),
            ctx.threshold,
        ))
    })
}

/// Random positive definite matrix with largest eigenvalue in `[0.5, 2]`
/// and condition number up to `10⁴`, in a random unitary eigenbasis.
pub(crate) fn random_posdef(rng: &mut ChaCha8Rng) -> Hermitian2 {
    let top: f64 = rng.gen_range(0.5..=2.0);
    let cond = 10f64.powf(rng.gen_range(0.0..=4.0));
    let (l1, l2) = (top, top / cond);
    // A = l2·I + (l1 − l2)·nnᴴ for a random unit vector n ∈ ℂ²
    let dir = sample_ball_with(rng, 3, 0.5);
    let n = dir.norm();
    let (x, y, z) = (
        dir.coords()[0] / n,
        dir.coords()[1] / n,
        dir.coords()[2] / n,
    );
    // nnᴴ is the pure-state projector ½(I + n·σ)
    let gap = l1 - l2;
    Hermitian2 {
        a: l2 + gap * 0.5 * (1.0 + z),
        d: l2 + gap * 0.5 * (1.0 - z),
        re_b: gap * 0.5 * x,
        im_b: -gap * 0.5 * y,
    }
}

fn matrix_run(
    ctx: &Ctx,
    name: &'static str,
    check: impl Fn(&mut ChaCha8Rng) -> Result<(f64, bool, serde_json::Value)>,
) -> PropertyReport {
    let mut rng = instance_rng(ctx, name);
    let mut tally = Tally::new();
    for _ in 0..ctx.n {
        match check(&mut rng) {
            Ok((r, ok, detail)) => tally.record(r, ok, || detail),
            Err(e) => tally.fail(json!({ "error": e.to_string() })),
        }
    }
    tally.finish(ctx.seed)
}

/// `(√A)² = A` relative to the largest entry, and `√A` positive definite.
fn sqrt_squares(ctx: &Ctx) -> PropertyReport {
    matrix_run(ctx, "sqrt_squares", |rng| {
        let a = random_posdef(rng);
        let root = sqrt_posdef2(&a)?;
        let err = root.square().max_abs_diff(&a) / a.max_abs_entry();
        Ok((
            err,
            err <= ctx.threshold && root.is_positive_definite(),
            json!({ "a": a, "root": root }),
        ))
    })
}

/// `det(√A B √A) = det A · det B`. The error is measured against `|P|²`,
/// the scale of the two products whose difference is a 2×2 determinant.
fn det_multiplicative(ctx: &Ctx) -> PropertyReport {
    matrix_run(ctx, "det_multiplicative", |rng| {
        let a = random_posdef(rng);
        let b = random_posdef(rng);
        let product = sandwich_with_root(&a, &b)?;
        let expected = a.det() * b.det();
        let err = (product.det() - expected).abs() / product.max_abs_entry().powi(2);
        Ok((err, err <= ctx.threshold, json!({ "a": a, "b": b })))
    })
}

/// `A ↦ bloch(Q · bloch⁻¹(A))` respects `⊙` for random orthogonal `Q`.
fn transported_automorphism(ctx: &Ctx) -> PropertyReport {
    let tol = ctx.tol;
    let mut rng = instance_rng(ctx, "rotation");
    let q = random_orthogonal(3, &mut rng).expect("dimension 3");
    let transport = |a: &crate::matrix_models::DensityMatrix2| -> Result<_> {
        let v = density_to_bloch(a)?;
        bloch_to_density(&evaluate(&q, &v, tol)?)
    };
    let report = pair(ctx, &[3], "transported_automorphism", |c| {
        let a = bloch_to_density(c.v(0))?;
        let b = bloch_to_density(c.v(1))?;
        let lhs = transport(&odot(&a, &b)?)?;
        let rhs = odot(&transport(&a)?, &transport(&b)?)?;
        Ok(Check::within(
            entrywise_residual(lhs.matrix(), rhs.matrix()),
            ctx.threshold,
        ))
    });
    report
}
