//! Machine-readable report assembly shared by the library and the CLI.
//!
//! The CLI is a thin shell: it parses flags, calls these builders and prints
//! the serialized result. Tests assert byte equality between the CLI output
//! and direct library serialization, which keeps numerics out of the binary.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::MetricSpec;
use crate::connections::{self, FamilyParams};
use crate::curvature;
use crate::error::{FinslerError, Result};
use crate::geodesics::GeodesicPath;
use crate::jets::EvalPoint;
use crate::tensors;
use crate::SCHEMA;

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub schema: String,
    pub metric: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub k: Vec<f64>,
    pub tensors: BTreeMap<String, Value>,
}

pub const TENSOR_NAMES: &[&str] = &[
    "F", "g", "ginv", "ell", "ell_low", "A", "C", "gamma", "G", "N", "Gamma", "R", "P", "Pn", "Q",
];

/// Evaluates the requested tensors at a point. Connection-level requests use
/// the family member selected by `params`.
pub fn eval_report(
    spec: &MetricSpec,
    pt: &EvalPoint,
    params: &FamilyParams,
    selects: &[String],
) -> Result<EvalReport> {
    if selects.is_empty() {
        return Err(FinslerError::InvalidParam(
            "no tensors requested; choose from F, g, ginv, ell, ell_low, A, C, gamma, G, N, Gamma, R, P, Pn, Q".into(),
        ));
    }
    for s in selects {
        if !TENSOR_NAMES.contains(&s.as_str()) {
            return Err(FinslerError::InvalidParam(format!(
                "unknown tensor `{s}`; choose from {}",
                TENSOR_NAMES.join(", ")
            )));
        }
    }
    let needs_conn = selects
        .iter()
        .any(|s| matches!(s.as_str(), "Gamma" | "R" | "P" | "Pn" | "Q"));
    let needs_spray = selects
        .iter()
        .any(|s| matches!(s.as_str(), "gamma" | "G" | "N"));

    let mut tensors_out = BTreeMap::new();
    let md = tensors::metric_data(spec, pt)?;
    for s in selects {
        match s.as_str() {
            "F" => {
                tensors_out.insert("F".into(), json!(md.f));
            }
            "g" => {
                tensors_out.insert("g".into(), json!(md.g.to_nested()));
            }
            "ginv" => {
                tensors_out.insert("ginv".into(), json!(md.g_inv.to_nested()));
            }
            "ell" => {
                tensors_out.insert("ell".into(), json!(md.ell));
            }
            "ell_low" => {
                tensors_out.insert("ell_low".into(), json!(md.ell_low));
            }
            "A" => {
                tensors_out.insert("A".into(), json!(md.a.to_nested()));
            }
            "C" => {
                tensors_out.insert("C".into(), json!(md.c.to_nested()));
            }
            _ => {}
        }
    }
    if needs_spray {
        let sd = tensors::spray_data(spec, pt)?;
        for s in selects {
            match s.as_str() {
                "gamma" => {
                    tensors_out.insert("gamma".into(), json!(sd.gamma.to_nested()));
                }
                "G" => {
                    tensors_out.insert("G".into(), json!(sd.spray));
                }
                "N" => {
                    tensors_out.insert("N".into(), json!(sd.n_conn.to_nested()));
                }
                _ => {}
            }
        }
    }
    if needs_conn {
        let conn = connections::family(spec, pt, params)?;
        let cd = curvature::curvature_data(&conn);
        for s in selects {
            match s.as_str() {
                "Gamma" => {
                    tensors_out.insert("Gamma".into(), json!(conn.gamma.to_nested()));
                }
                "R" => {
                    tensors_out.insert("R".into(), json!(cd.r.to_nested()));
                }
                "P" => {
                    tensors_out.insert("P".into(), json!(cd.p.to_nested()));
                }
                "Pn" => {
                    tensors_out.insert("Pn".into(), json!(cd.p_n.to_nested()));
                }
                "Q" => {
                    tensors_out.insert("Q".into(), json!(cd.q.to_nested()));
                }
                _ => {}
            }
        }
    }

    Ok(EvalReport {
        schema: SCHEMA.into(),
        metric: spec.name.clone(),
        x: pt.x.clone(),
        y: pt.y.clone(),
        k: params.k.clone(),
        tensors: tensors_out,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    #[serde(flatten)]
    pub spec: MetricSpecKindDoc,
    pub expected_class: crate::catalog::ExpectedClass,
    pub constant_flag_curvature: Option<f64>,
}

/// Kind + params exactly as `MetricSpec` serializes them.
#[derive(Clone, Debug, Serialize)]
pub struct MetricSpecKindDoc {
    pub kind: Value,
    pub params: Value,
}

pub fn catalog_report() -> Vec<CatalogEntry> {
    crate::catalog::list_catalog()
        .iter()
        .map(|spec| {
            let doc = serde_json::to_value(spec).expect("spec serializes");
            CatalogEntry {
                name: spec.name.clone(),
                dim: spec.dim,
                spec: MetricSpecKindDoc {
                    kind: doc.get("kind").cloned().unwrap_or(Value::Null),
                    params: doc.get("params").cloned().unwrap_or(Value::Null),
                },
                expected_class: spec.expected_class(),
                constant_flag_curvature: spec.constant_flag_curvature(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicReport {
    pub schema: String,
    pub metric: String,
    pub t_max: f64,
    pub dt: f64,
    pub exited: bool,
    pub speed_drift: f64,
    pub times: Vec<f64>,
    pub states: Vec<(Vec<f64>, Vec<f64>)>,
}

pub fn geodesic_report(spec: &MetricSpec, path: &GeodesicPath, t_max: f64, dt: f64) -> GeodesicReport {
    GeodesicReport {
        schema: SCHEMA.into(),
        metric: spec.name.clone(),
        t_max,
        dt,
        exited: path.exited,
        speed_drift: path.speed_drift,
        times: path.times.clone(),
        states: path.states.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn eval_report_g_is_identity_for_euclidean() {
        let spec = catalog::by_name("euclidean").unwrap();
        let pt = EvalPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let r = eval_report(&spec, &pt, &FamilyParams::chern(), &["g".into()]).unwrap();
        assert_eq!(r.tensors["g"], json!([[1.0, 0.0], [0.0, 1.0]]));
    }

    #[test]
    fn funk_center_g_equals_euclidean_g() {
        let funk = catalog::by_name("funk-ball").unwrap();
        let euclid = catalog::by_name("euclidean").unwrap();
        let pt = EvalPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let a = eval_report(&funk, &pt, &FamilyParams::chern(), &["g".into()]).unwrap();
        let b = eval_report(&euclid, &pt, &FamilyParams::chern(), &["g".into()]).unwrap();
        let ga = serde_json::to_value(&a.tensors["g"]).unwrap();
        let gb = serde_json::to_value(&b.tensors["g"]).unwrap();
        let to_mat = |v: &Value| -> Vec<Vec<f64>> { serde_json::from_value(v.clone()).unwrap() };
        for (ra, rb) in to_mat(&ga).iter().zip(to_mat(&gb).iter()) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unknown_tensor_is_rejected() {
        let spec = catalog::by_name("euclidean").unwrap();
        let pt = EvalPoint::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let err = eval_report(&spec, &pt, &FamilyParams::chern(), &["bogus".into()]).unwrap_err();
        assert!(matches!(err, FinslerError::InvalidParam(_)));
    }

    #[test]
    fn catalog_report_carries_labels() {
        let entries = catalog_report();
        assert_eq!(entries.len(), 6);
        let funk = entries.iter().find(|e| e.name == "funk-ball").unwrap();
        assert_eq!(funk.constant_flag_curvature, Some(-0.25));
    }
}
