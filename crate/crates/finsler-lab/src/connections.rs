//! The Berwald-type connection family.
//!
//! A family member is the Chern coefficients plus a weighted sum of raised
//! iterated Cartan derivatives; the weight vector selects the member. The
//! empty vector is Chern, (1) is Berwald. Torsion-freeness is structural
//! (symmetric construction, no vertical coefficients) and the compatibility
//! defects measure how far a member is from its defining metric behaviour.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::MetricSpec;
use crate::error::{FinslerError, Result};
use crate::jets::EvalPoint;
use crate::linalg::Ten3;
use crate::series::Series;
use crate::tensors::{metric_data_from, spray_data_from, MetricData, SprayData};
use crate::tower::Tower;

/// Longest supported weight vector.
pub const MAX_FAMILY_ORDER: usize = 4;

/// Weights (k_1, ..., k_m) selecting a family member; empty means Chern.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FamilyParams {
    pub k: Vec<f64>,
}

impl FamilyParams {
    pub fn new(k: Vec<f64>) -> Result<FamilyParams> {
        if k.len() > MAX_FAMILY_ORDER {
            return Err(FinslerError::InvalidParam(format!(
                "family weight vector has {} entries, maximum is {MAX_FAMILY_ORDER}",
                k.len()
            )));
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(FinslerError::InvalidParam(
                "family weights must be finite".into(),
            ));
        }
        Ok(FamilyParams { k })
    }

    pub fn chern() -> FamilyParams {
        FamilyParams { k: vec![] }
    }

    pub fn berwald() -> FamilyParams {
        FamilyParams { k: vec![1.0] }
    }

    pub fn order(&self) -> usize {
        self.k.len()
    }
}

/// A family member evaluated at one point, curvature-ready (the underlying
/// expansions keep one spare order for the curvature derivatives).
#[derive(Clone)]
pub struct ConnectionData {
    pub spec: MetricSpec,
    pub point: EvalPoint,
    pub params: FamilyParams,
    /// Connection coefficients, indexed (upper, lower, lower).
    pub gamma: Ten3,
    /// Vertical coefficients; identically zero for the whole family.
    pub f_vert: Ten3,
    pub metric: MetricData,
    pub spray: SprayData,
    pub(crate) tower: Arc<Tower>,
    pub(crate) gamma_series: Vec<Series>,
}

impl std::fmt::Debug for ConnectionData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionData")
            .field("spec", &self.spec.name)
            .field("params", &self.params)
            .finish()
    }
}

/// Builds the member selected by `params` at `pt`.
pub fn family(spec: &MetricSpec, pt: &EvalPoint, params: &FamilyParams) -> Result<ConnectionData> {
    let m = params.order();
    // always carry the first iterate: the ell-slice checks need it even for
    // the Chern member
    let tower = Tower::new(spec, pt, 4 + m, m.max(1))?;
    let gamma_series = tower.family_gamma(&params.k)?;
    let gamma = tower.val3(&gamma_series);
    let metric = metric_data_from(&tower);
    let spray = spray_data_from(&tower);
    Ok(ConnectionData {
        spec: spec.clone(),
        point: pt.clone(),
        params: params.clone(),
        gamma,
        f_vert: Ten3::zeros(spec.dim),
        metric,
        spray,
        tower: Arc::new(tower),
        gamma_series,
    })
}

pub fn chern(spec: &MetricSpec, pt: &EvalPoint) -> Result<ConnectionData> {
    family(spec, pt, &FamilyParams::chern())
}

pub fn berwald(spec: &MetricSpec, pt: &EvalPoint) -> Result<ConnectionData> {
    family(spec, pt, &FamilyParams::berwald())
}

/// Independent Berwald construction: the fiber Hessian of the spray.
pub fn berwald_hessian(spec: &MetricSpec, pt: &EvalPoint) -> Result<Ten3> {
    let tower = Tower::new(spec, pt, 5, 0)?;
    let n = tower.n;
    let mut out = Ten3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.set(i, j, k, tower.spray[i].deriv(n + j).deriv(n + k).val());
            }
        }
    }
    Ok(out)
}

/// Max asymmetry of the coefficients plus max vertical coefficient; zero
/// certifies torsion-freeness.
pub fn torsion_defect(conn: &ConnectionData) -> f64 {
    torsion_defect_of(&conn.gamma, &conn.f_vert)
}

/// Same check against explicit coefficient tensors (used by the harness
/// self-test with deliberately corrupted data).
pub fn torsion_defect_of(gamma: &Ten3, f_vert: &Ten3) -> f64 {
    let n = gamma.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((gamma.get(i, j, k) - gamma.get(i, k, j)).abs());
            }
        }
    }
    worst + f_vert.max_abs()
}

/// Horizontal and vertical compatibility defects.
///
/// Horizontal: max |g_{ij|k} + 2 sum_m k_m Adot^(m)_{ijk}|.
/// Vertical:   max |F dg_ij/dy^k - 2 A_ijk|.
/// Both vanish for every family member; that is the numerical content of the
/// existence half of the construction.
pub fn compatibility_defect(conn: &ConnectionData) -> (f64, f64) {
    let tower = &conn.tower;
    let n = tower.n;
    let gamma = &conn.gamma;
    let k = &conn.params.k;

    let mut horizontal = 0.0f64;
    let mut vertical = 0.0f64;
    let f = conn.metric.f;
    for i in 0..n {
        for j in 0..n {
            for kk in 0..n {
                let mut gh = tower.delta(&tower.g[i * n + j], kk).val();
                for s in 0..n {
                    gh -= conn.metric.g.get(s, j) * gamma.get(s, i, kk)
                        + conn.metric.g.get(i, s) * gamma.get(s, j, kk);
                }
                let mut rhs = 0.0;
                for (m, &km) in k.iter().enumerate() {
                    rhs += km * tower.adots[m][(i * n + j) * n + kk].val();
                }
                horizontal = horizontal.max((gh + 2.0 * rhs).abs());

                let gv = f * tower.g[i * n + j].deriv(n + kk).val();
                vertical = vertical.max((gv - 2.0 * conn.metric.a.get(i, j, kk)).abs());
            }
        }
    }
    (horizontal, vertical)
}
