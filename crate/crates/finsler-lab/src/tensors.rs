//! Pointwise tensor construction: fundamental and Cartan tensors, spray,
//! nonlinear connection, the horizontal basis derivative, and horizontal /
//! vertical covariant derivatives including the iterated ell-directional
//! derivatives of the Cartan tensor.

use crate::catalog::MetricSpec;
use crate::connections::ConnectionData;
use crate::error::{FinslerError, Result};
use crate::jets::EvalPoint;
use crate::linalg::{DynTen, Ten2, Ten3, Ten4};
use crate::series::Series;
use crate::tower::Tower;

/// Pointwise metric data: g, its inverse, the unit section and the Cartan
/// tensor in both normalizations.
#[derive(Clone, Debug)]
pub struct MetricData {
    pub f: f64,
    pub g: Ten2,
    pub g_inv: Ten2,
    /// ell^i = y^i / F.
    pub ell: Vec<f64>,
    /// ell_i = g_ij ell^j.
    pub ell_low: Vec<f64>,
    /// Cartan tensor A_ijk, the F-scaled normalization.
    pub a: Ten3,
    /// C_ijk = A_ijk / F.
    pub c: Ten3,
}

/// Spray-level data: formal Christoffel symbols, spray coefficients and the
/// nonlinear connection.
#[derive(Clone, Debug)]
pub struct SprayData {
    /// gamma^k_ij indexed (k, i, j).
    pub gamma: Ten3,
    /// G^i.
    pub spray: Vec<f64>,
    /// N^i_j.
    pub n_conn: Ten2,
}

/// Derived Cartan data: covariant derivatives and the iterated
/// ell-directional tensors, plus the Landsberg tensor built independently
/// from the spray Hessian.
#[derive(Clone, Debug)]
pub struct DerivedCartan {
    /// A_{ijk|l} with the base (Chern) connection.
    pub a_h: Ten4,
    /// A_{ijk.l} = F dA_ijk/dy^l.
    pub a_v: Ten4,
    /// adots[m-1] is the m-th iterated tensor.
    pub adots: Vec<Ten3>,
    /// L^i_jk = d2 G^i / dy^j dy^k - Chern^i_jk.
    pub landsberg: Ten3,
}

pub fn metric_data(spec: &MetricSpec, pt: &EvalPoint) -> Result<MetricData> {
    let tower = Tower::new(spec, pt, 3, 0)?;
    Ok(metric_data_from(&tower))
}

pub(crate) fn metric_data_from(tower: &Tower) -> MetricData {
    let f = tower.f.val();
    let a = tower.val3(&tower.a);
    let n = tower.n;
    let mut c = Ten3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c.set(i, j, k, a.get(i, j, k) / f);
            }
        }
    }
    MetricData {
        f,
        g: tower.val2(&tower.g),
        g_inv: tower.val2(&tower.ginv),
        ell: tower.vals1(&tower.ell),
        ell_low: tower.vals1(&tower.ell_low),
        a,
        c,
    }
}

pub fn spray_data(spec: &MetricSpec, pt: &EvalPoint) -> Result<SprayData> {
    let tower = Tower::new(spec, pt, 3, 0)?;
    Ok(spray_data_from(&tower))
}

pub(crate) fn spray_data_from(tower: &Tower) -> SprayData {
    SprayData {
        gamma: tower.val3(&tower.gamma),
        spray: tower.vals1(&tower.spray),
        n_conn: tower.val2(&tower.nconn),
    }
}

/// A tensor field evaluable as series components around a point. The
/// returned components are expansions with respect to the canonical seeding
/// (each coordinate an independent ring variable), flattened row-major over
/// `shape()`.
pub trait TensorField: Sync {
    fn dim(&self) -> usize;
    fn shape(&self) -> Vec<usize>;
    fn eval_tower(&self, pt: &EvalPoint, order: usize) -> Result<Vec<Series>>;
}

/// Fields derived from a catalog metric.
pub struct MetricField {
    pub spec: MetricSpec,
    pub role: FieldRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldRole {
    /// The norm F itself.
    Norm,
    /// The fundamental tensor g.
    Fundamental,
    /// The Cartan tensor A.
    Cartan,
    /// The m-th iterated ell-derivative of A (m >= 1).
    AdotIter(usize),
}

impl FieldRole {
    /// Fiber-derivative depth of F^2 consumed by the field itself.
    fn depth(&self) -> usize {
        match self {
            FieldRole::Norm => 0,
            FieldRole::Fundamental => 2,
            FieldRole::Cartan => 3,
            FieldRole::AdotIter(m) => 3 + m,
        }
    }
}

impl TensorField for MetricField {
    fn dim(&self) -> usize {
        self.spec.dim
    }

    fn shape(&self) -> Vec<usize> {
        let n = self.spec.dim;
        match self.role {
            FieldRole::Norm => vec![],
            FieldRole::Fundamental => vec![n, n],
            FieldRole::Cartan | FieldRole::AdotIter(_) => vec![n, n, n],
        }
    }

    fn eval_tower(&self, pt: &EvalPoint, order: usize) -> Result<Vec<Series>> {
        let m_max = match self.role {
            FieldRole::AdotIter(m) => {
                if m == 0 {
                    return Err(FinslerError::InvalidParam(
                        "iterated tensor index starts at 1".into(),
                    ));
                }
                m
            }
            _ => 0,
        };
        let tower = Tower::new(&self.spec, pt, (self.role.depth() + order).max(3 + m_max), m_max)?;
        Ok(match self.role {
            FieldRole::Norm => vec![tower.f.clone()],
            FieldRole::Fundamental => tower.g.clone(),
            FieldRole::Cartan => tower.a.clone(),
            FieldRole::AdotIter(m) => tower.adots[m - 1].clone(),
        })
    }
}

/// Componentwise horizontal basis derivative of a tensor field:
/// (delta_j T)(pt), one extra lower slot appended.
pub fn delta_x(field: &dyn TensorField, pt: &EvalPoint, spray: &SprayData) -> Result<DynTen> {
    let n = field.dim();
    if pt.dim() != n {
        return Err(FinslerError::InvalidParam(
            "field/point dimension mismatch".into(),
        ));
    }
    let comps = field.eval_tower(pt, 1)?;
    let mut shape = field.shape();
    shape.push(n);
    let mut out = DynTen::zeros(shape);
    for (ci, comp) in comps.iter().enumerate() {
        for j in 0..n {
            let mut v = comp.deriv(j).val();
            for m in 0..n {
                v -= spray.n_conn.get(m, j) * comp.deriv(n + m).val();
            }
            out.data[ci * n + j] = v;
        }
    }
    Ok(out)
}

fn expect_rank3(field: &dyn TensorField) -> Result<usize> {
    let shape = field.shape();
    let n = field.dim();
    if shape != vec![n, n, n] {
        return Err(FinslerError::InvalidParam(
            "covariant derivative expects a (0,3) tensor field".into(),
        ));
    }
    Ok(n)
}

/// Horizontal covariant derivative T_{ijk|l} of a (0,3) field with respect
/// to a family connection.
pub fn cov_h(field: &dyn TensorField, pt: &EvalPoint, conn: &ConnectionData) -> Result<Ten4> {
    let n = expect_rank3(field)?;
    let comps = field.eval_tower(pt, 1)?;
    let gamma = &conn.gamma;
    let nconn = &conn.spray.n_conn;
    let mut t_val = Ten3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t_val.set(i, j, k, comps[(i * n + j) * n + k].val());
            }
        }
    }
    let mut out = Ten4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let comp = &comps[(i * n + j) * n + k];
                for l in 0..n {
                    let mut v = comp.deriv(l).val();
                    for m in 0..n {
                        v -= nconn.get(m, l) * comp.deriv(n + m).val();
                    }
                    for s in 0..n {
                        v -= t_val.get(s, j, k) * gamma.get(s, i, l)
                            + t_val.get(i, s, k) * gamma.get(s, j, l)
                            + t_val.get(i, j, s) * gamma.get(s, k, l);
                    }
                    out.set(i, j, k, l, v);
                }
            }
        }
    }
    Ok(out)
}

/// Vertical covariant derivative T_{ijk.l} = F dT_ijk/dy^l. The family has
/// no vertical coefficients, so no connection correction appears; the
/// F factor carries the co-frame scaling.
pub fn cov_v(field: &dyn TensorField, pt: &EvalPoint, conn: &ConnectionData) -> Result<Ten4> {
    let n = expect_rank3(field)?;
    let comps = field.eval_tower(pt, 1)?;
    let f = conn.metric.f;
    let mut out = Ten4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let comp = &comps[(i * n + j) * n + k];
                for l in 0..n {
                    out.set(i, j, k, l, f * comp.deriv(n + l).val());
                }
            }
        }
    }
    Ok(out)
}

/// The iterated ell-directional derivatives of the Cartan tensor with the
/// base (Chern) connection, plus the Landsberg tensor from the spray
/// Hessian as an independent construction.
pub fn adot_iterated(spec: &MetricSpec, pt: &EvalPoint, m_max: usize) -> Result<DerivedCartan> {
    if m_max < 1 {
        return Err(FinslerError::InvalidParam(
            "adot recursion needs m_max >= 1".into(),
        ));
    }
    let order = (3 + m_max).max(5) + 1;
    let tower = Tower::new(spec, pt, order, m_max)?;
    let n = tower.n;

    let a_h4 = tower.cov_h3(&tower.a, &tower.gamma_star);
    let a_h = tower.val4(&a_h4);

    let f = tower.f.val();
    let mut a_v = Ten4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let d = tower.a[(i * n + j) * n + k].deriv(n + l).val();
                    a_v.set(i, j, k, l, f * d);
                }
            }
        }
    }

    let adots: Vec<Ten3> = tower.adots.iter().map(|t| tower.val3(t)).collect();

    // L^i_jk = d2 G^i/dy^j dy^k - Chern^i_jk
    let mut landsberg = Ten3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let b = tower.spray[i].deriv(n + j).deriv(n + k).val();
                landsberg.set(i, j, k, b - tower.gamma_star[(i * n + j) * n + k].val());
            }
        }
    }

    Ok(DerivedCartan {
        a_h,
        a_v,
        adots,
        landsberg,
    })
}

/// Raised first index of a (0,3) value tensor.
pub fn raise3(g_inv: &Ten2, t: &Ten3) -> Ten3 {
    let n = t.dim();
    let mut out = Ten3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = 0.0;
                for s in 0..n {
                    acc += g_inv.get(i, s) * t.get(s, j, k);
                }
                out.set(i, j, k, acc);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, MetricSpec};
    use crate::connections;
    use crate::jets::{fd_jet, EvalPoint, FinslerF2, JetRequest};
    use crate::linalg::invert;
    use crate::sampling;
    use approx::assert_relative_eq;

    fn pt(x: &[f64], y: &[f64]) -> EvalPoint {
        EvalPoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_metric_data_is_flat() {
        let spec = catalog::by_name("euclidean").unwrap();
        let p = pt(&[0.4, -0.3], &[3.0, 4.0]);
        let md = metric_data(&spec, &p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(md.g.get(i, j), want, epsilon = 1e-12);
            }
        }
        assert!(md.a.max_abs() < 1e-12);
        assert_relative_eq!(md.ell[0], 0.6, epsilon = 1e-12);
        assert_relative_eq!(md.ell[1], 0.8, epsilon = 1e-12);
    }

    #[test]
    fn unit_section_has_unit_length_everywhere() {
        for spec in catalog::list_catalog() {
            for p in sampling::sample_points(&spec, 12, 5) {
                let md = metric_data(&spec, &p).unwrap();
                let n = p.dim();
                let mut gll = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        gll += md.g.get(i, j) * md.ell[i] * md.ell[j];
                    }
                }
                assert_relative_eq!(gll, 1.0, epsilon = 1e-10);
                // Cartan tensor annihilates ell
                let mut worst = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        let mut s = 0.0;
                        for k in 0..n {
                            s += md.a.get(i, j, k) * md.ell[k];
                        }
                        worst = worst.max(s.abs());
                    }
                }
                assert!(worst < 1e-9, "{}: A(.,.,ell) = {}", spec.name, worst);
            }
        }
    }

    /// Build g and A from the finite-difference oracle alone and compare.
    #[test]
    fn quartic_metric_data_matches_fd_construction() {
        let spec = catalog::by_name("quartic").unwrap();
        let p = pt(&[0.0, 0.0], &[1.0, 1.0]);
        let md = metric_data(&spec, &p).unwrap();

        let field = FinslerF2(spec.clone());
        let table = fd_jet(&field, &p, &JetRequest::new(0, 3).unwrap(), 1e-3).unwrap();
        let f = table.value().sqrt();
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                let mut beta = vec![0u8; n];
                beta[i] += 1;
                beta[j] += 1;
                let g_fd = 0.5 * table.get(&[0, 0], &beta).unwrap();
                assert_relative_eq!(md.g.get(i, j), g_fd, max_relative = 1e-6, epsilon = 1e-8);
                for k in 0..n {
                    let mut b3 = beta.clone();
                    b3[k] += 1;
                    let a_fd = 0.25 * f * table.get(&[0, 0], &b3).unwrap();
                    assert_relative_eq!(
                        md.a.get(i, j, k),
                        a_fd,
                        max_relative = 1e-5,
                        epsilon = 1e-7
                    );
                }
            }
        }
        // the diagonal direction is a symmetry axis where A happens to be
        // tiny; a generic direction shows the genuinely non-Riemannian part
        let generic = metric_data(&spec, &pt(&[0.0, 0.0], &[1.0, 0.4])).unwrap();
        assert!(
            generic.a.max_abs() > 1e-2,
            "quartic Cartan tensor should be nonzero, got {}",
            generic.a.max_abs()
        );
    }

    #[test]
    fn euclidean_spray_vanishes() {
        let spec = catalog::by_name("euclidean").unwrap();
        let sd = spray_data(&spec, &pt(&[0.1, 0.9], &[1.0, -0.4])).unwrap();
        assert!(sd.gamma.max_abs() < 1e-12);
        assert!(sd.spray.iter().all(|v| v.abs() < 1e-12));
        assert!(sd.n_conn.max_abs() < 1e-12);
    }

    /// N must agree with the fiber derivative of the spray coefficients.
    #[test]
    fn nonlinear_connection_matches_spray_derivative() {
        for spec in catalog::list_catalog() {
            for p in sampling::sample_points(&spec, 8, 11) {
                let tower = Tower::new(&spec, &p, 4, 0).unwrap();
                let n = tower.n;
                for i in 0..n {
                    for j in 0..n {
                        let dg = tower.spray[i].deriv(n + j).val();
                        let nij = tower.nconn[i * n + j].val();
                        assert_relative_eq!(nij, dg, max_relative = 1e-7, epsilon = 1e-9);
                    }
                }
            }
        }
    }

    /// Conformal closed form for the sphere chart Christoffels.
    #[test]
    fn sphere_christoffels_match_conformal_closed_form() {
        let spec = catalog::by_name("riemannian-sphere").unwrap();
        let p = pt(&[0.3, 0.0], &[0.0, 1.0]);
        let sd = spray_data(&spec, &p).unwrap();
        let n = 2;
        // g = e^{2 phi} delta with phi = ln 2 - ln(1 + |x|^2)
        let r2: f64 = p.x.iter().map(|v| v * v).sum();
        let dphi: Vec<f64> = p.x.iter().map(|&xi| -2.0 * xi / (1.0 + r2)).collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut want = 0.0;
                    if k == i {
                        want += dphi[j];
                    }
                    if k == j {
                        want += dphi[i];
                    }
                    if i == j {
                        want -= dphi[k];
                    }
                    assert_relative_eq!(sd.gamma.get(k, i, j), want, epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn horizontal_derivative_of_f_vanishes() {
        for spec in catalog::list_catalog() {
            for p in sampling::sample_points(&spec, 10, 2) {
                let spray = spray_data(&spec, &p).unwrap();
                let field = MetricField {
                    spec: spec.clone(),
                    role: FieldRole::Norm,
                };
                let d = delta_x(&field, &p, &spray).unwrap();
                assert!(
                    d.max_abs() < 1e-8,
                    "{}: delta F = {:?}",
                    spec.name,
                    d.data
                );
            }
        }
    }

    /// Independent route: delta F = F_x - N F_y with both pieces from the
    /// finite-difference oracle.
    #[test]
    fn horizontal_derivative_of_f_vanishes_by_fd_route() {
        let spec = catalog::by_name("funk-ball").unwrap();
        let p = pt(&[0.3, 0.1], &[0.7, -0.7]);
        let spray = spray_data(&spec, &p).unwrap();
        let field = crate::jets::FinslerF(spec.clone());
        let table = fd_jet(&field, &p, &JetRequest::new(1, 1).unwrap(), 1e-4).unwrap();
        let n = 2;
        for j in 0..n {
            let mut alpha = vec![0u8; n];
            alpha[j] = 1;
            let fx = table.get(&alpha, &[0, 0]).unwrap();
            let mut v = fx;
            for m in 0..n {
                let mut beta = vec![0u8; n];
                beta[m] = 1;
                v -= spray.n_conn.get(m, j) * table.get(&[0, 0], &beta).unwrap();
            }
            assert!(v.abs() < 1e-6, "fd delta F component {j} = {v}");
        }
    }

    #[test]
    fn x_independent_metric_has_vanishing_delta_g() {
        let spec = catalog::by_name("quartic").unwrap();
        let p = pt(&[0.5, -0.2], &[1.0, 0.3]);
        let spray = spray_data(&spec, &p).unwrap();
        let field = MetricField {
            spec,
            role: FieldRole::Fundamental,
        };
        let d = delta_x(&field, &p, &spray).unwrap();
        assert!(d.max_abs() < 1e-9);
    }

    #[test]
    fn cartan_covariant_derivative_contractions() {
        for name in ["riemannian-sphere", "randers-nonconst", "funk-ball"] {
            let spec = catalog::by_name(name).unwrap();
            let p = sampling::sample_points(&spec, 3, 7).pop().unwrap();
            let conn = connections::chern(&spec, &p).unwrap();
            let field = MetricField {
                spec: spec.clone(),
                role: FieldRole::Cartan,
            };
            let ah = cov_h(&field, &p, &conn).unwrap();
            let av = cov_v(&field, &p, &conn).unwrap();
            let md = &conn.metric;
            let n = p.dim();

            let dc = adot_iterated(&spec, &p, 1).unwrap();
            let adot = &dc.adots[0];
            let mut worst_h = 0.0f64;
            let mut worst_ell = 0.0f64;
            let mut worst_v = 0.0f64;
            let mut worst_sym = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        // contraction with ell in the derivative slot gives the
                        // ell-directional derivative
                        let mut s = 0.0;
                        for l in 0..n {
                            s += ah.get(i, j, k, l) * md.ell[l];
                        }
                        worst_h = worst_h.max((s - adot.get(i, j, k)).abs());
                        for l in 0..n {
                            // first-slot ell contraction of the horizontal part dies
                            let mut hsum = 0.0;
                            let mut vsum = 0.0;
                            for m in 0..n {
                                hsum += md.ell[m] * ah.get(m, j, k, l);
                                vsum += md.ell[m] * av.get(m, j, k, l);
                            }
                            worst_ell = worst_ell.max(hsum.abs());
                            worst_v = worst_v.max((vsum + md.a.get(j, k, l)).abs());
                            worst_sym =
                                worst_sym.max((av.get(i, j, k, l) - av.get(i, j, l, k)).abs());
                        }
                    }
                }
            }
            assert!(worst_h < 1e-8, "{name}: A dotted vs contracted {worst_h}");
            assert!(worst_ell < 1e-8, "{name}: ell-contraction {worst_ell}");
            assert!(worst_v < 1e-8, "{name}: vertical contraction {worst_v}");
            assert!(worst_sym < 1e-8, "{name}: vertical symmetry {worst_sym}");
        }
    }

    #[test]
    fn riemannian_and_berwald_metrics_kill_the_iterates() {
        for name in ["euclidean", "riemannian-sphere", "quartic", "randers-const"] {
            let spec = catalog::by_name(name).unwrap();
            for p in sampling::sample_points(&spec, 5, 0) {
                let dc = adot_iterated(&spec, &p, 3).unwrap();
                for (m, t) in dc.adots.iter().enumerate() {
                    assert!(
                        t.max_abs() < 1e-8,
                        "{name}: iterate {} has norm {}",
                        m + 1,
                        t.max_abs()
                    );
                }
            }
        }
    }

    /// Independent construction of the Landsberg tensor pins the sign of the
    /// whole recursion.
    #[test]
    fn raised_adot_equals_landsberg_tensor() {
        for name in ["randers-nonconst", "funk-ball"] {
            let spec = catalog::by_name(name).unwrap();
            for p in sampling::sample_points(&spec, 6, 3) {
                let dc = adot_iterated(&spec, &p, 1).unwrap();
                let md = metric_data(&spec, &p).unwrap();
                let raised = raise3(&md.g_inv, &dc.adots[0]);
                let scale = 1.0 + dc.landsberg.max_abs();
                let n = p.dim();
                let mut worst = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            worst = worst
                                .max((raised.get(i, j, k) - dc.landsberg.get(i, j, k)).abs());
                        }
                    }
                }
                assert!(
                    worst / scale < 1e-6,
                    "{name}: raised adot vs Landsberg rel {}",
                    worst / scale
                );
                assert!(
                    dc.adots[0].max_abs() > 1e-4,
                    "{name} should have a nonzero Landsberg tensor"
                );
            }
        }
    }

    #[test]
    fn homogeneity_degrees() {
        for spec in catalog::list_catalog() {
            let p = sampling::sample_points(&spec, 1, 9).pop().unwrap();
            let scaled = EvalPoint::new(p.x.clone(), p.y.iter().map(|v| 2.0 * v).collect())
                .unwrap();
            let md1 = metric_data(&spec, &p).unwrap();
            let md2 = metric_data(&spec, &scaled).unwrap();
            let sd1 = spray_data(&spec, &p).unwrap();
            let sd2 = spray_data(&spec, &scaled).unwrap();
            let n = p.dim();
            for i in 0..n {
                assert_relative_eq!(sd2.spray[i], 4.0 * sd1.spray[i], max_relative = 1e-9, epsilon = 1e-12);
                for j in 0..n {
                    assert_relative_eq!(md2.g.get(i, j), md1.g.get(i, j), max_relative = 1e-9, epsilon = 1e-12);
                    assert_relative_eq!(
                        sd2.n_conn.get(i, j),
                        2.0 * sd1.n_conn.get(i, j),
                        max_relative = 1e-9,
                        epsilon = 1e-12
                    );
                    for k in 0..n {
                        assert_relative_eq!(
                            md2.a.get(i, j, k),
                            md1.a.get(i, j, k),
                            max_relative = 1e-9,
                            epsilon = 1e-12
                        );
                        assert_relative_eq!(
                            sd2.gamma.get(i, j, k),
                            sd1.gamma.get(i, j, k),
                            max_relative = 1e-9,
                            epsilon = 1e-12
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn convexity_failure_is_reported_with_the_point() {
        let spec = MetricSpec {
            name: "quartic-negative".into(),
            dim: 2,
            kind: catalog::MetricKind::LocallyMinkowskiQuartic { epsilon: -0.95 },
        };
        let p = pt(&[0.0, 0.0], &[1.0, 1.0]);
        let err = metric_data(&spec, &p).unwrap_err();
        assert!(matches!(err, FinslerError::NotConvex { .. }), "{err}");
    }

    #[test]
    fn g_inverse_is_consistent() {
        let spec = catalog::by_name("funk-ball").unwrap();
        let p = pt(&[0.2, -0.3], &[0.5, 1.0]);
        let md = metric_data(&spec, &p).unwrap();
        let inv = invert(&md.g).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(md.g_inv.get(i, j), inv.get(i, j), max_relative = 1e-10);
            }
        }
    }
}
