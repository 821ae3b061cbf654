//! The built-in metric library.
//!
//! Each entry defines F(x, y) on its validity domain together with enough
//! metadata to sample it safely and to know what classification the rest of
//! the crate should re-derive for it. Entries are plain data and serialize
//! to the `{name, dim, kind, params}` JSON document the CLI consumes.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FinslerError, Result};
use crate::jets::EvalPoint;
use crate::linalg::{sym_eigenvalues, Ten2};
use crate::sampling;
use crate::series::{dot, Ring, Series};

pub const MAX_DIM: usize = 4;

/// Radius of the Funk ball chart kept clear for sampling and validation;
/// evaluation itself is allowed on the whole open unit ball.
pub const FUNK_SAMPLING_RADIUS: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum MetricKind {
    Euclidean {},
    RiemannianSphere { radius: f64 },
    LocallyMinkowskiQuartic { epsilon: f64 },
    /// Flat alpha = |y|, beta = (beta0 + beta_amp * sin(x^1)) dx^1.
    Randers { beta0: f64, beta_amp: f64 },
    FunkBall {},
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub name: String,
    pub dim: usize,
    #[serde(flatten)]
    pub kind: MetricKind,
}

/// Classification ground truth carried as catalog metadata. The analysis
/// module re-derives every label numerically and flags disagreement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectedClass {
    Riemannian,
    /// Berwald but not Riemannian.
    Berwald,
    NonBerwald,
}

impl MetricSpec {
    fn new(name: &str, dim: usize, kind: MetricKind) -> MetricSpec {
        MetricSpec {
            name: name.to_string(),
            dim,
            kind,
        }
    }

    /// Checks structural validity of a user-supplied spec (dimension range,
    /// Randers convexity bound, quartic smoothing range).
    pub fn check_spec(&self) -> Result<()> {
        if self.dim < 2 || self.dim > MAX_DIM {
            return Err(FinslerError::InvalidParam(format!(
                "dimension {} outside supported range 2..={}",
                self.dim, MAX_DIM
            )));
        }
        match &self.kind {
            MetricKind::RiemannianSphere { radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(FinslerError::InvalidParam(
                        "sphere radius must be positive".into(),
                    ));
                }
            }
            MetricKind::Randers { beta0, beta_amp } => {
                let sup = beta0.abs() + beta_amp.abs();
                if sup >= 1.0 {
                    return Err(FinslerError::InvalidParam(format!(
                        "Randers data violates strong convexity: sup |beta|_alpha = {sup} >= 1"
                    )));
                }
            }
            MetricKind::LocallyMinkowskiQuartic { epsilon } => {
                if !epsilon.is_finite() {
                    return Err(FinslerError::InvalidParam(
                        "quartic smoothing parameter must be finite".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Domain check at a base point. Funk is the only catalog metric with a
    /// restricted chart: the open unit ball.
    pub fn check_x(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(FinslerError::InvalidParam(format!(
                "point dimension {} does not match metric dimension {}",
                x.len(),
                self.dim
            )));
        }
        if let MetricKind::FunkBall {} = self.kind {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            if r2 >= 1.0 - 1e-12 {
                return Err(FinslerError::Domain {
                    metric: self.name.clone(),
                    constraint: format!("|x| < 1 required on the Funk ball, got |x| = {}", r2.sqrt()),
                });
            }
        }
        Ok(())
    }

    pub fn check_point(&self, x: &[f64], y: &[f64]) -> Result<()> {
        self.check_x(x)?;
        if y.len() != self.dim {
            return Err(FinslerError::InvalidParam(format!(
                "tangent dimension {} does not match metric dimension {}",
                y.len(),
                self.dim
            )));
        }
        let y2: f64 = y.iter().map(|v| v * v).sum();
        if y2 == 0.0 {
            return Err(FinslerError::ZeroTangent);
        }
        Ok(())
    }

    /// F(x, y) on series-valued coordinates. The constant terms must already
    /// satisfy the domain checks.
    pub fn f_series(&self, xs: &[Series], ys: &[Series]) -> Result<Series> {
        let x0: Vec<f64> = xs.iter().map(|s| s.val()).collect();
        let y0: Vec<f64> = ys.iter().map(|s| s.val()).collect();
        self.check_point(&x0, &y0)?;
        Ok(match &self.kind {
            MetricKind::Euclidean {} => dot(ys, ys).sqrt(),
            MetricKind::RiemannianSphere { radius } => {
                // g = 4 r^4 delta / (r^2 + |x|^2)^2 in the stereographic chart
                let r2 = radius * radius;
                let denom = dot(xs, xs).add_scalar(r2);
                dot(ys, ys).sqrt().scale(2.0 * r2).div(&denom)
            }
            MetricKind::LocallyMinkowskiQuartic { epsilon } => {
                let y2 = dot(ys, ys);
                let mut quartic = y2.mul(&y2);
                for yi in ys {
                    let yi2 = yi.mul(yi);
                    quartic.acc_mul(*epsilon, &yi2, &yi2);
                }
                quartic.sqrt().sqrt()
            }
            MetricKind::Randers { beta0, beta_amp } => {
                let alpha = dot(ys, ys).sqrt();
                let b = if *beta_amp == 0.0 {
                    Series::constant(xs[0].ring(), *beta0)
                } else {
                    xs[0].sin().scale(*beta_amp).add_scalar(*beta0)
                };
                alpha.add(&b.mul(&ys[0]))
            }
            MetricKind::FunkBall {} => {
                let w = dot(xs, ys);
                let one_minus_x2 = dot(xs, xs).neg().add_scalar(1.0);
                let q = one_minus_x2.mul(&dot(ys, ys)).add(&w.mul(&w));
                q.sqrt().add(&w).div(&one_minus_x2)
            }
        })
    }

    pub fn f2_series(&self, xs: &[Series], ys: &[Series]) -> Result<Series> {
        let f = self.f_series(xs, ys)?;
        Ok(f.mul(&f))
    }

    /// Plain evaluation of F at a point.
    pub fn evaluate_f(&self, pt: &EvalPoint) -> Result<f64> {
        let ring = Ring::get(2 * self.dim, 0);
        let xs: Vec<Series> = pt.x.iter().map(|&v| Series::constant(&ring, v)).collect();
        let ys: Vec<Series> = pt.y.iter().map(|&v| Series::constant(&ring, v)).collect();
        Ok(self.f_series(&xs, &ys)?.val())
    }

    pub fn expected_class(&self) -> ExpectedClass {
        match &self.kind {
            MetricKind::Euclidean {} | MetricKind::RiemannianSphere { .. } => {
                ExpectedClass::Riemannian
            }
            MetricKind::LocallyMinkowskiQuartic { .. } => ExpectedClass::Berwald,
            MetricKind::Randers { beta_amp, .. } => {
                if *beta_amp == 0.0 {
                    ExpectedClass::Berwald
                } else {
                    ExpectedClass::NonBerwald
                }
            }
            MetricKind::FunkBall {} => ExpectedClass::NonBerwald,
        }
    }

    /// Scalar flag curvature for metrics known to have one, used as geodesic
    /// and curvature oracles.
    pub fn constant_flag_curvature(&self) -> Option<f64> {
        match &self.kind {
            MetricKind::Euclidean {} => Some(0.0),
            MetricKind::RiemannianSphere { radius } => Some(1.0 / (radius * radius)),
            MetricKind::LocallyMinkowskiQuartic { .. } => Some(0.0),
            MetricKind::Randers { beta_amp, .. } if *beta_amp == 0.0 => Some(0.0),
            MetricKind::FunkBall {} => Some(-0.25),
            _ => None,
        }
    }

    /// Half-width of the box base points are sampled from (scaled into a ball
    /// for the Funk chart).
    pub fn sample_radius(&self) -> f64 {
        match &self.kind {
            MetricKind::FunkBall {} => 0.7 * FUNK_SAMPLING_RADIUS,
            _ => 1.0,
        }
    }

    pub fn is_x_ball_domain(&self) -> bool {
        matches!(self.kind, MetricKind::FunkBall {})
    }
}

/// The five built-in families, six entries (Randers ships with both a
/// parallel and an x-dependent one-form).
pub fn list_catalog() -> Vec<MetricSpec> {
    vec![
        MetricSpec::new("euclidean", 2, MetricKind::Euclidean {}),
        MetricSpec::new("riemannian-sphere", 2, MetricKind::RiemannianSphere { radius: 1.0 }),
        MetricSpec::new(
            "quartic",
            2,
            MetricKind::LocallyMinkowskiQuartic { epsilon: 0.5 },
        ),
        MetricSpec::new(
            "randers-const",
            2,
            MetricKind::Randers {
                beta0: 0.3,
                beta_amp: 0.0,
            },
        ),
        MetricSpec::new(
            "randers-nonconst",
            2,
            MetricKind::Randers {
                beta0: 0.2,
                beta_amp: 0.1,
            },
        ),
        MetricSpec::new("funk-ball", 2, MetricKind::FunkBall {}),
    ]
}

/// Catalog lookup by name. `funk` and `sphere` are accepted as shorthands.
pub fn by_name(name: &str) -> Result<MetricSpec> {
    let canonical = match name {
        "funk" => "funk-ball",
        "sphere" => "riemannian-sphere",
        other => other,
    };
    list_catalog()
        .into_iter()
        .find(|s| s.name == canonical)
        .ok_or_else(|| FinslerError::UnknownMetric(name.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub spec: MetricSpec,
    pub samples: usize,
    pub min_eigenvalue: f64,
    pub positivity: f64,
    pub verdict: bool,
    pub failing_point: Option<FailingPoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailingPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub min_eigenvalue: f64,
    pub f_value: f64,
}

/// Fundamental tensor values at a point, from a minimal order-2 expansion.
pub fn fundamental_values(spec: &MetricSpec, pt: &EvalPoint) -> Result<Ten2> {
    let n = spec.dim;
    let ring = Ring::get(2 * n, 2);
    let xs: Vec<Series> = pt
        .x
        .iter()
        .map(|&v| Series::constant(&ring, v))
        .collect();
    let ys: Vec<Series> = pt
        .y
        .iter()
        .enumerate()
        .map(|(i, &v)| Series::seed(&ring, n + i, v))
        .collect();
    let f2 = spec.f2_series(&xs, &ys)?;
    let mut g = Ten2::zeros(n);
    let mut exps = vec![0u8; 2 * n];
    for i in 0..n {
        for j in i..n {
            exps[n + i] += 1;
            exps[n + j] += 1;
            let v = 0.5 * f2.partial(&exps);
            exps[n + i] -= 1;
            exps[n + j] -= 1;
            g.set(i, j, v);
            g.set(j, i, v);
        }
    }
    Ok(g)
}

/// Scans a deterministic sample set for strong convexity and positivity,
/// failing fast at the first violating point.
pub fn validate(spec: &MetricSpec, n_samples: usize) -> Result<ValidationReport> {
    if n_samples == 0 {
        return Err(FinslerError::InvalidParam(
            "validation needs at least one sample".into(),
        ));
    }
    spec.check_spec()?;
    let points = sampling::sample_points(spec, n_samples, 0);
    let mut min_eig = f64::INFINITY;
    let mut min_f = f64::INFINITY;
    let mut seen = 0;
    let mut failing = None;
    for pt in &points {
        seen += 1;
        let f = spec.evaluate_f(pt)?;
        let g = fundamental_values(spec, pt)?;
        let eig = sym_eigenvalues(&g)[0];
        min_eig = min_eig.min(eig);
        min_f = min_f.min(f);
        if eig <= 0.0 || f <= 0.0 {
            failing = Some(FailingPoint {
                x: pt.x.clone(),
                y: pt.y.clone(),
                min_eigenvalue: eig,
                f_value: f,
            });
            break;
        }
    }
    Ok(ValidationReport {
        spec: spec.clone(),
        samples: seen,
        min_eigenvalue: min_eig,
        positivity: min_f,
        verdict: failing.is_none(),
        failing_point: failing,
    })
}

pub(crate) fn seeded_coords(
    spec: &MetricSpec,
    pt: &EvalPoint,
    ring: &Arc<Ring>,
) -> (Vec<Series>, Vec<Series>) {
    let n = spec.dim;
    let xs = pt
        .x
        .iter()
        .enumerate()
        .map(|(i, &v)| Series::seed(ring, i, v))
        .collect();
    let ys = pt
        .y
        .iter()
        .enumerate()
        .map(|(i, &v)| Series::seed(ring, n + i, v))
        .collect();
    (xs, ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: &[f64], y: &[f64]) -> EvalPoint {
        EvalPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_is_the_norm() {
        let spec = by_name("euclidean").unwrap();
        let f = spec.evaluate_f(&pt(&[0.0, 0.0], &[3.0, 4.0])).unwrap();
        assert_relative_eq!(f, 5.0, epsilon = 1e-14);
    }

    #[test]
    fn randers_const_adds_the_one_form() {
        let spec = by_name("randers-const").unwrap();
        let f = spec.evaluate_f(&pt(&[0.7, -0.2], &[1.0, 0.0])).unwrap();
        assert_relative_eq!(f, 1.3, epsilon = 1e-14);
    }

    #[test]
    fn funk_reduces_to_the_norm_at_the_center() {
        let spec = by_name("funk-ball").unwrap();
        let f = spec.evaluate_f(&pt(&[0.0, 0.0], &[1.0, 0.0])).unwrap();
        assert_relative_eq!(f, 1.0, epsilon = 1e-14);
        let f = spec.evaluate_f(&pt(&[0.0, 0.0], &[0.6, -0.8])).unwrap();
        assert_relative_eq!(f, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn funk_radial_closed_form() {
        // along the radial direction F = 1/(1 - r)
        let spec = by_name("funk").unwrap();
        let f = spec.evaluate_f(&pt(&[0.5, 0.0], &[1.0, 0.0])).unwrap();
        assert_relative_eq!(f, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn funk_outside_ball_is_a_domain_error() {
        let spec = by_name("funk-ball").unwrap();
        let err = spec.evaluate_f(&pt(&[1.5, 0.0], &[1.0, 0.0])).unwrap_err();
        assert!(matches!(err, FinslerError::Domain { .. }), "{err}");
    }

    #[test]
    fn homogeneity_in_y() {
        for spec in list_catalog() {
            let p = pt(&[0.2, 0.1], &[0.8, -0.55]);
            let base = spec.evaluate_f(&p).unwrap();
            for lambda in [0.5, 2.0, 7.3] {
                let scaled = pt(&[0.2, 0.1], &[0.8 * lambda, -0.55 * lambda]);
                let f = spec.evaluate_f(&scaled).unwrap();
                assert_relative_eq!(f, lambda * base, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn catalog_entries_validate() {
        let cat = list_catalog();
        assert!(cat.iter().any(|s| s.name == "euclidean"));
        assert!(cat.iter().any(|s| s.name == "funk-ball"));
        assert_eq!(cat.len(), 6);
        for spec in cat {
            let report = validate(&spec, 100).unwrap();
            assert!(report.verdict, "{} failed validation", spec.name);
            assert!(report.min_eigenvalue > 0.0);
        }
    }

    #[test]
    fn euclidean_eigenvalues_are_one() {
        let report = validate(&by_name("euclidean").unwrap(), 100).unwrap();
        assert_relative_eq!(report.min_eigenvalue, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn randers_near_unit_beta_is_nearly_degenerate() {
        let near = MetricSpec::new(
            "randers-tight",
            2,
            MetricKind::Randers {
                beta0: 0.99,
                beta_amp: 0.0,
            },
        );
        let report = validate(&near, 200).unwrap();
        assert!(report.verdict);
        assert!(
            report.min_eigenvalue < 0.2 && report.min_eigenvalue > 0.0,
            "min eigenvalue {} not near zero",
            report.min_eigenvalue
        );

        let bad = MetricSpec::new(
            "randers-broken",
            2,
            MetricKind::Randers {
                beta0: 1.01,
                beta_amp: 0.0,
            },
        );
        assert!(bad.check_spec().is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        for spec in list_catalog() {
            let s = serde_json::to_string(&spec).unwrap();
            let back: MetricSpec = serde_json::from_str(&s).unwrap();
            assert_eq!(spec, back);
        }
        let doc = r#"{"name":"randers-nonconst","dim":2,"kind":"randers","params":{"beta0":0.2,"beta_amp":0.1}}"#;
        let spec: MetricSpec = serde_json::from_str(doc).unwrap();
        assert_eq!(spec, by_name("randers-nonconst").unwrap());
    }
}
