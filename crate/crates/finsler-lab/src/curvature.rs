//! Curvature of family members: the hh-block R, the hv-block P, the
//! (identically vanishing) vv-block Q, lowered and ell-contracted variants,
//! and flag curvature.
//!
//! Coordinate realizations, validated by the identity suite:
//!   R^i_{j kl} = delta_k Gamma^i_{jl} - delta_l Gamma^i_{jk}
//!                + Gamma^i_{mk} Gamma^m_{jl} - Gamma^i_{ml} Gamma^m_{jk}
//!   P^i_{j kl} = -F dGamma^i_{jk}/dy^l
//! Lowering acts on the upper slot: R_{jikl} = g_{is} R^s_{j kl}, and the
//! frame index n means ell-contraction of that slot.

use crate::catalog::MetricSpec;
use crate::connections::{self, ConnectionData};
use crate::error::{FinslerError, Result};
use crate::jets::EvalPoint;
use crate::linalg::{Ten2, Ten3, Ten4};

#[derive(Clone, Debug)]
pub struct CurvatureData {
    /// R^i_{j kl}, indexed (upper, lower, arg, arg).
    pub r: Ten4,
    /// P^i_{j kl}.
    pub p: Ten4,
    /// Q^i_{j kl}, assembled from the vertical coefficients (zero for the
    /// torsion-free family).
    pub q: Ten4,
    /// R_{jikl} = g_{is} R^s_{j kl}.
    pub r_low: Ten4,
    pub p_low: Ten4,
    /// P_n slice: ell^a P_{a j k l}.
    pub p_n: Ten3,
}

/// One sampled flag and its curvature.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FlagSample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub v: Vec<f64>,
    pub k: f64,
}

pub fn hh_curvature(conn: &ConnectionData) -> Ten4 {
    let tower = &conn.tower;
    let n = tower.n;
    let gamma = &conn.gamma;
    let mut r = Ten4::zeros(n);
    // delta-derivatives of the coefficient series
    let mut dg = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s = &conn.gamma_series[(i * n + j) * n + k];
                for l in 0..n {
                    dg[((i * n + j) * n + k) * n + l] = tower.delta(s, l).val();
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dg[((i * n + j) * n + l) * n + k] - dg[((i * n + j) * n + k) * n + l];
                    for m in 0..n {
                        v += gamma.get(i, m, k) * gamma.get(m, j, l)
                            - gamma.get(i, m, l) * gamma.get(m, j, k);
                    }
                    r.set(i, j, k, l, v);
                }
            }
        }
    }
    r
}

pub fn hv_curvature(conn: &ConnectionData) -> Ten4 {
    let tower = &conn.tower;
    let n = tower.n;
    let f = conn.metric.f;
    let mut p = Ten4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s = &conn.gamma_series[(i * n + j) * n + k];
                for l in 0..n {
                    p.set(i, j, k, l, -f * s.deriv(n + l).val());
                }
            }
        }
    }
    p
}

/// vv-block from the vertical coefficient tensor. The family has none, so
/// this is zero; it is assembled anyway so the identity suite asserts the
/// machinery, not an assumption.
pub fn vv_curvature(conn: &ConnectionData) -> Ten4 {
    let n = conn.spec.dim;
    let fv = &conn.f_vert;
    let mut q = Ten4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // vertical coefficients are constant (zero), so only the
                    // quadratic terms could contribute
                    let mut v = 0.0;
                    for m in 0..n {
                        v += fv.get(i, m, k) * fv.get(m, j, l) - fv.get(i, m, l) * fv.get(m, j, k);
                    }
                    q.set(i, j, k, l, v);
                }
            }
        }
    }
    q
}

pub(crate) fn lower_upper_slot(g: &Ten2, t: &Ten4) -> Ten4 {
    let n = t.dim();
    let mut out = Ten4::zeros(n);
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = 0.0;
                    for s in 0..n {
                        v += g.get(i, s) * t.get(s, j, k, l);
                    }
                    out.set(j, i, k, l, v);
                }
            }
        }
    }
    out
}

pub fn curvature_data(conn: &ConnectionData) -> CurvatureData {
    let r = hh_curvature(conn);
    let p = hv_curvature(conn);
    let q = vv_curvature(conn);
    let g = &conn.metric.g;
    let r_low = lower_upper_slot(g, &r);
    let p_low = lower_upper_slot(g, &p);
    let n = r.dim();
    let ell = &conn.metric.ell;
    let mut p_n = Ten3::zeros(n);
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut v = 0.0;
                for a in 0..n {
                    v += ell[a] * p_low.get(a, j, k, l);
                }
                p_n.set(j, k, l, v);
            }
        }
    }
    CurvatureData {
        r,
        p,
        q,
        r_low,
        p_low,
        p_n,
    }
}

/// The P_n slice together with its defect against the family formula
/// (sum of weighted iterated tensors minus the first one) and the
/// double-ell contraction that must vanish.
#[derive(Clone, Debug)]
pub struct PnSlice {
    pub p_n: Ten3,
    pub residual: f64,
    pub max_p_njnl: f64,
}

pub fn pn_slice(conn: &ConnectionData) -> PnSlice {
    let cd = curvature_data(conn);
    let tower = &conn.tower;
    let n = tower.n;
    let ell = &conn.metric.ell;
    let adot1 = tower.val3(&tower.adots[0]);
    let mut residual = 0.0f64;
    let mut max_p_njnl = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut rhs = -adot1.get(j, k, l);
                for (m, &km) in conn.params.k.iter().enumerate() {
                    rhs += km * tower.adots[m][(j * n + k) * n + l].val();
                }
                residual = residual.max((cd.p_n.get(j, k, l) - rhs).abs());
            }
            for l in 0..n {
                let mut v = 0.0;
                for k in 0..n {
                    v += cd.p_n.get(j, k, l) * ell[k];
                }
                max_p_njnl = max_p_njnl.max(v.abs());
            }
        }
    }
    PnSlice {
        p_n: cd.p_n,
        residual,
        max_p_njnl,
    }
}

/// Flag curvature K(y, V) from the Chern member's hh-curvature.
pub fn flag_curvature(spec: &MetricSpec, pt: &EvalPoint, v: &[f64]) -> Result<f64> {
    let conn = connections::chern(spec, pt)?;
    let cd = curvature_data(&conn);
    flag_from_data(&conn.metric.g, &cd.r_low, &pt.y, v)
}

pub fn flag_from_data(g: &Ten2, r_low: &Ten4, y: &[f64], v: &[f64]) -> Result<f64> {
    let n = g.dim();
    if v.len() != n {
        return Err(FinslerError::InvalidParam(
            "flag edge dimension mismatch".into(),
        ));
    }
    let ip = |a: &[f64], b: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += g.get(i, j) * a[i] * b[j];
            }
        }
        s
    };
    let gyy = ip(y, y);
    let gvv = ip(v, v);
    let gyv = ip(y, v);
    let denom = gyy * gvv - gyv * gyv;
    if denom <= 1e-12 * (gyy * gvv).abs().max(1e-300) {
        return Err(FinslerError::DegenerateFlag { denom });
    }
    let mut num = 0.0;
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                for l in 0..n {
                    num += v[i] * y[j] * r_low.get(j, i, k, l) * y[l] * v[k];
                }
            }
        }
    }
    Ok(num / denom)
}
