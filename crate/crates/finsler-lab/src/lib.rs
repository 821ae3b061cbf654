//! A computational laboratory for Finsler geometry.
//!
//! The crate evaluates concrete Finsler metrics and their derived geometry
//! to machine precision: fundamental and Cartan tensors, sprays and the
//! nonlinear connection, a one-parameter-per-order family of torsion-free
//! connections containing Chern and Berwald, the curvature blocks of those
//! connections, geodesics with parallel transport, and a metric classifier.
//! Everything is driven by truncated Taylor (jet) arithmetic; an independent
//! finite-difference oracle cross-checks the jets, and structural identities
//! cross-check every convention.
//!
//! The heavy sweeps (validation scans, identity suites, geodesic batches)
//! run data-parallel through [`exec`] when the `parallel` feature (default)
//! is enabled, and sequentially otherwise; results are ordered and
//! bit-identical either way.

pub mod analysis;
pub mod catalog;
pub mod connections;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod geodesics;
pub mod jets;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod series;
pub mod tensors;
pub mod tol;
mod tower;

pub use catalog::{list_catalog, validate, ExpectedClass, MetricKind, MetricSpec};
pub use connections::{
    berwald, berwald_hessian, chern, compatibility_defect, family, torsion_defect, ConnectionData,
    FamilyParams,
};
pub use curvature::{curvature_data, flag_curvature, hh_curvature, hv_curvature, pn_slice};
pub use error::{FinslerError, Result};
pub use jets::{eval_jet, fd_jet, EvalPoint, JetRequest, JetTable, ScalarField};
pub use tensors::{adot_iterated, cov_h, cov_v, delta_x, metric_data, spray_data};

/// JSON schema tag carried by every machine-readable report.
pub const SCHEMA: &str = "finsler-lab/1";
