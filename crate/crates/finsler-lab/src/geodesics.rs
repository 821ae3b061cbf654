//! Geodesic integration, parallel transport and along-path Cartan series.
//!
//! Geodesics solve xdd + 2 G(x, xd) = 0 with a classical fourth-order
//! one-step method at fixed dt: deterministic, and the unit-speed drift is
//! the accuracy certificate. Transport integrates the linear system
//! Xd^i + Gamma^i_jk(x, xd) xd^j X^k = 0 alongside a re-run of the same
//! geodesic, so frame and path share one integrator.

use serde::Serialize;

use crate::catalog::{MetricKind, MetricSpec};
use crate::connections::FamilyParams;
use crate::error::{FinslerError, Result};
use crate::jets::EvalPoint;
use crate::linalg::Ten3;
use crate::sampling;
use crate::tower::Tower;

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicPath {
    pub metric: String,
    pub times: Vec<f64>,
    /// (x(t), xd(t)) samples, aligned with `times`.
    pub states: Vec<(Vec<f64>, Vec<f64>)>,
    /// max_t |F(x, xd) - F(x0, xd0)|.
    pub speed_drift: f64,
    /// True when integration stopped early at the domain boundary.
    pub exited: bool,
}

#[derive(Clone, Debug)]
pub struct TransportedFrame {
    pub times: Vec<f64>,
    /// vectors[v][t] is the v-th transported vector at time index t.
    pub vectors: Vec<Vec<Vec<f64>>>,
    /// Drift of g(X, X) for the first vector, sampled along the path.
    pub metric_drift: f64,
}

/// Frame-evaluated Cartan series along a geodesic: a(t) = A(X, Y, Z) and its
/// first two ell-directional derivatives, with centered time differences.
#[derive(Clone, Debug, Serialize)]
pub struct CartanSeries {
    pub times: Vec<f64>,
    pub a: Vec<f64>,
    pub adot: Vec<f64>,
    pub addot: Vec<f64>,
    pub da_dt: Vec<f64>,
    pub dadot_dt: Vec<f64>,
}

fn f_value(spec: &MetricSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let pt = EvalPoint::new(x.to_vec(), y.to_vec())?;
    spec.evaluate_f(&pt)
}

fn spray_values(spec: &MetricSpec, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let pt = EvalPoint::new(x.to_vec(), v.to_vec())?;
    let tower = Tower::new(spec, &pt, 3, 0)?;
    Ok(tower.vals1(&tower.spray))
}

fn family_gamma_values(spec: &MetricSpec, params: &FamilyParams, x: &[f64], v: &[f64]) -> Result<Ten3> {
    let pt = EvalPoint::new(x.to_vec(), v.to_vec())?;
    let m = params.order();
    let tower = Tower::new(spec, &pt, 3 + m, m)?;
    let gs = tower.family_gamma(&params.k)?;
    Ok(tower.val3(&gs))
}

/// Integrates a unit-speed geodesic from (x0, y0) with F(x0, y0) = 1.
///
/// The path is truncated with `exited = true` if it reaches the metric's
/// domain boundary (only the Funk ball has one, and only infinite time
/// reaches it exactly).
pub fn integrate_geodesic(
    spec: &MetricSpec,
    x0: &[f64],
    y0: &[f64],
    t_max: f64,
    dt: f64,
) -> Result<GeodesicPath> {
    if dt <= 0.0 || t_max <= 0.0 {
        return Err(FinslerError::InvalidParam(
            "t_max and dt must be positive".into(),
        ));
    }
    let f0 = f_value(spec, x0, y0)?;
    if (f0 - 1.0).abs() > 1e-9 {
        return Err(FinslerError::InvalidParam(format!(
            "initial data is not on the indicatrix: F(x0, y0) = {f0}"
        )));
    }
    let n = spec.dim;
    let steps = (t_max / dt).round() as usize;
    let mut x = x0.to_vec();
    let mut v = y0.to_vec();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut drift = 0.0f64;
    let mut exited = false;
    times.push(0.0);
    states.push((x.clone(), v.clone()));

    let rhs = |x: &[f64], v: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let g = spray_values(spec, x, v)?;
        Ok((v.to_vec(), g.iter().map(|gi| -2.0 * gi).collect()))
    };

    'outer: for step in 1..=steps {
        let stage = |xs: &[f64], vs: &[f64]| rhs(xs, vs);
        let k1 = match stage(&x, &v) {
            Ok(k) => k,
            Err(FinslerError::Domain { .. }) => {
                exited = true;
                break 'outer;
            }
            Err(e) => return Err(e),
        };
        let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(ai, bi)| ai + s * bi).collect()
        };
        let trial = |kx: &[f64], kv: &[f64], s: f64| (add(&x, kx, s), add(&v, kv, s));
        let eval = |pair: (Vec<f64>, Vec<f64>)| -> Result<(Vec<f64>, Vec<f64>)> {
            rhs(&pair.0, &pair.1)
        };
        let res = (|| -> Result<(Vec<f64>, Vec<f64>)> {
            let k2 = eval(trial(&k1.0, &k1.1, dt / 2.0))?;
            let k3 = eval(trial(&k2.0, &k2.1, dt / 2.0))?;
            let k4 = eval(trial(&k3.0, &k3.1, dt))?;
            let mut nx = x.clone();
            let mut nv = v.clone();
            for i in 0..n {
                nx[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
                nv[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
            }
            Ok((nx, nv))
        })();
        match res {
            Ok((nx, nv)) => {
                x = nx;
                v = nv;
            }
            Err(FinslerError::Domain { .. }) => {
                exited = true;
                break 'outer;
            }
            Err(e) => return Err(e),
        }
        match f_value(spec, &x, &v) {
            Ok(f) => drift = drift.max((f - f0).abs()),
            Err(FinslerError::Domain { .. }) => {
                exited = true;
                break 'outer;
            }
            Err(e) => return Err(e),
        }
        times.push(step as f64 * dt);
        states.push((x.clone(), v.clone()));
    }

    Ok(GeodesicPath {
        metric: spec.name.clone(),
        times,
        states,
        speed_drift: drift,
        exited,
    })
}

/// Parallel-transports the given initial vectors along the path with the
/// selected family member, by re-integrating the joint system at the path's
/// own resolution.
pub fn parallel_transport(
    spec: &MetricSpec,
    params: &FamilyParams,
    path: &GeodesicPath,
    initial: &[Vec<f64>],
) -> Result<TransportedFrame> {
    if path.states.len() < 2 {
        return Err(FinslerError::PathTooShort {
            len: path.states.len(),
            min: 2,
        });
    }
    let n = spec.dim;
    for v0 in initial {
        if v0.len() != n {
            return Err(FinslerError::InvalidParam(
                "transported vector has wrong dimension".into(),
            ));
        }
    }
    let dt = path.times[1] - path.times[0];
    let (mut x, mut v) = path.states[0].clone();
    let mut frame: Vec<Vec<f64>> = initial.to_vec();
    let mut vectors: Vec<Vec<Vec<f64>>> = initial.iter().map(|v0| vec![v0.clone()]).collect();

    // joint right-hand side: geodesic plus linear transport
    let rhs = |x: &[f64], v: &[f64], frame: &[Vec<f64>]| -> Result<(Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
        let g = spray_values(spec, x, v)?;
        let gamma = family_gamma_values(spec, params, x, v)?;
        let dx = v.to_vec();
        let dv: Vec<f64> = g.iter().map(|gi| -2.0 * gi).collect();
        let dframe = frame
            .iter()
            .map(|xv| {
                (0..n)
                    .map(|i| {
                        let mut s = 0.0;
                        for j in 0..n {
                            for k in 0..n {
                                s -= gamma.get(i, j, k) * v[j] * xv[k];
                            }
                        }
                        s
                    })
                    .collect::<Vec<f64>>()
            })
            .collect();
        Ok((dx, dv, dframe))
    };

    let comb = |a: &[Vec<f64>], b: &[Vec<f64>], s: f64| -> Vec<Vec<f64>> {
        a.iter()
            .zip(b)
            .map(|(av, bv)| av.iter().zip(bv).map(|(ai, bi)| ai + s * bi).collect())
            .collect()
    };

    for _step in 1..path.states.len() {
        let add = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> {
            a.iter().zip(b).map(|(ai, bi)| ai + s * bi).collect()
        };
        let k1 = rhs(&x, &v, &frame)?;
        let k2 = rhs(
            &add(&x, &k1.0, dt / 2.0),
            &add(&v, &k1.1, dt / 2.0),
            &comb(&frame, &k1.2, dt / 2.0),
        )?;
        let k3 = rhs(
            &add(&x, &k2.0, dt / 2.0),
            &add(&v, &k2.1, dt / 2.0),
            &comb(&frame, &k2.2, dt / 2.0),
        )?;
        let k4 = rhs(&add(&x, &k3.0, dt), &add(&v, &k3.1, dt), &comb(&frame, &k3.2, dt))?;
        for i in 0..n {
            x[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
            v[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
        }
        for (fi, f) in frame.iter_mut().enumerate() {
            for i in 0..n {
                f[i] += dt / 6.0
                    * (k1.2[fi][i] + 2.0 * k2.2[fi][i] + 2.0 * k3.2[fi][i] + k4.2[fi][i]);
            }
        }
        for (fi, f) in frame.iter().enumerate() {
            vectors[fi].push(f.clone());
        }
    }

    // g(X, X) conservation for the first vector, sampled sparsely
    let mut metric_drift = 0.0f64;
    if !initial.is_empty() {
        let stride = (path.states.len() / 40).max(1);
        let mut first = None;
        for idx in (0..path.states.len()).step_by(stride) {
            let (sx, sv) = &path.states[idx];
            let pt = EvalPoint::new(sx.clone(), sv.clone())?;
            let g = crate::catalog::fundamental_values(spec, &pt)?;
            let xv = &vectors[0][idx];
            let mut gxx = 0.0;
            for i in 0..n {
                for j in 0..n {
                    gxx += g.get(i, j) * xv[i] * xv[j];
                }
            }
            match first {
                None => first = Some(gxx),
                Some(f0) => metric_drift = metric_drift.max((gxx - f0).abs()),
            }
        }
    }

    Ok(TransportedFrame {
        times: path.times.clone(),
        vectors,
        metric_drift,
    })
}

/// Frame-evaluated Cartan series at `stride`-spaced path samples. The frame
/// must have been transported with the base (Chern) member.
pub fn cartan_series(
    spec: &MetricSpec,
    path: &GeodesicPath,
    frame: &TransportedFrame,
    stride: usize,
) -> Result<CartanSeries> {
    if frame.vectors.len() < 3 {
        return Err(FinslerError::InvalidParam(
            "cartan series needs three transported vectors".into(),
        ));
    }
    let stride = stride.max(1);
    let idxs: Vec<usize> = (0..path.states.len()).step_by(stride).collect();
    if idxs.len() < 5 {
        return Err(FinslerError::PathTooShort {
            len: idxs.len(),
            min: 5,
        });
    }
    let n = spec.dim;
    let mut times = Vec::with_capacity(idxs.len());
    let mut a = Vec::with_capacity(idxs.len());
    let mut adot = Vec::with_capacity(idxs.len());
    let mut addot = Vec::with_capacity(idxs.len());
    for &idx in &idxs {
        let (sx, sv) = &path.states[idx];
        let pt = EvalPoint::new(sx.clone(), sv.clone())?;
        let tower = Tower::new(spec, &pt, 5, 2)?;
        let contract = |t: &[crate::series::Series]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        s += t[(i * n + j) * n + k].val()
                            * frame.vectors[0][idx][i]
                            * frame.vectors[1][idx][j]
                            * frame.vectors[2][idx][k];
                    }
                }
            }
            s
        };
        times.push(path.times[idx]);
        a.push(contract(&tower.a));
        adot.push(contract(&tower.adots[0]));
        addot.push(contract(&tower.adots[1]));
    }

    let ddt = |series: &[f64]| -> Vec<f64> {
        let m = series.len();
        let h = times[1] - times[0];
        (0..m)
            .map(|i| {
                if i == 0 {
                    (-3.0 * series[0] + 4.0 * series[1] - series[2]) / (2.0 * h)
                } else if i == m - 1 {
                    (3.0 * series[m - 1] - 4.0 * series[m - 2] + series[m - 3]) / (2.0 * h)
                } else {
                    (series[i + 1] - series[i - 1]) / (2.0 * h)
                }
            })
            .collect()
    };
    let da_dt = ddt(&a);
    let dadot_dt = ddt(&adot);

    Ok(CartanSeries {
        times,
        a,
        adot,
        addot,
        da_dt,
        dadot_dt,
    })
}

impl CartanSeries {
    fn interior(&self) -> std::ops::Range<usize> {
        1..self.times.len().saturating_sub(1)
    }

    /// max |d a/dt - adot| over interior samples.
    pub fn residual_da_dt(&self) -> f64 {
        self.interior()
            .map(|i| (self.da_dt[i] - self.adot[i]).abs())
            .fold(0.0, f64::max)
    }

    /// max |d adot/dt - addot| over interior samples.
    pub fn residual_dadot_dt(&self) -> f64 {
        self.interior()
            .map(|i| (self.dadot_dt[i] - self.addot[i]).abs())
            .fold(0.0, f64::max)
    }

    /// max |k2 * addot - adot|: the along-path vanishing condition selecting
    /// Landsberg metrics.
    pub fn witness(&self, k2: f64) -> f64 {
        (0..self.times.len())
            .map(|i| (k2 * self.addot[i] - self.adot[i]).abs())
            .fold(0.0, f64::max)
    }

    /// max |addot + lambda * a| for constant-flag-curvature checks.
    pub fn constant_curvature_residual(&self, lambda: f64) -> f64 {
        (0..self.times.len())
            .map(|i| (self.addot[i] + lambda * self.a[i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Deterministic indicatrix initial conditions. Sphere-chart starts are
/// filtered so the great-circle image stays within a bounded chart region.
pub fn geodesic_initials(spec: &MetricSpec, count: usize, offset: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::with_capacity(count);
    let mut extra = 0u64;
    while out.len() < count {
        let pts = sampling::sample_points(spec, count * 2, offset + 1000 * extra);
        for pt in pts {
            if out.len() >= count {
                break;
            }
            let Ok(f) = spec.evaluate_f(&pt) else { continue };
            let y: Vec<f64> = pt.y.iter().map(|v| v / f).collect();
            if let MetricKind::RiemannianSphere { radius } = spec.kind {
                if sphere_chart_escape(&pt.x, &y, radius) > 0.8 {
                    continue;
                }
            }
            out.push((pt.x.clone(), y));
        }
        extra += 1;
        if extra > 50 {
            break;
        }
    }
    out
}

// Peak height (third coordinate, normalized) the great circle through the
// chart point reaches on the model sphere; 1 means through the projection
// pole, where the chart image is unbounded.
fn sphere_chart_escape(x: &[f64], y: &[f64], radius: f64) -> f64 {
    let u: Vec<f64> = x.iter().map(|v| v / radius).collect();
    let u2: f64 = u.iter().map(|v| v * v).sum();
    let p3 = (u2 - 1.0) / (u2 + 1.0);
    let mut c3 = 0.0;
    for (ui, yi) in u.iter().zip(y) {
        c3 += 4.0 * ui / ((1.0 + u2) * (1.0 + u2)) * yi;
    }
    (p3 * p3 + c3 * c3).sqrt()
}

/// CSV dump: t, x components, velocity components, |F - 1| drift.
pub fn path_to_csv(spec: &MetricSpec, path: &GeodesicPath) -> Result<String> {
    let n = spec.dim;
    let mut out = String::from("t");
    for i in 0..n {
        out.push_str(&format!(",x{i}"));
    }
    for i in 0..n {
        out.push_str(&format!(",v{i}"));
    }
    out.push_str(",drift\n");
    for (t, (x, v)) in path.times.iter().zip(&path.states) {
        let f = f_value(spec, x, v)?;
        out.push_str(&format!("{t}"));
        for xi in x {
            out.push_str(&format!(",{xi}"));
        }
        for vi in v {
            out.push_str(&format!(",{vi}"));
        }
        out.push_str(&format!(",{}\n", (f - 1.0).abs()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_relative_eq;

    #[test]
    fn euclidean_geodesics_are_straight_lines() {
        let spec = catalog::by_name("euclidean").unwrap();
        let path = integrate_geodesic(&spec, &[0.0, 0.0], &[1.0, 0.0], 2.0, 1e-3).unwrap();
        assert!(!path.exited);
        assert!(path.speed_drift < 1e-12);
        let (x, _) = path.states.last().unwrap();
        assert_relative_eq!(x[0], 2.0, epsilon = 1e-10);
        assert_relative_eq!(x[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sphere_geodesic_through_chart_origin_stays_on_a_line() {
        let spec = catalog::by_name("riemannian-sphere").unwrap();
        // F(0, y) = 2 |y|, so the indicatrix direction is y = (0.5, 0)
        let path = integrate_geodesic(&spec, &[0.0, 0.0], &[0.5, 0.0], 2.0, 1e-3).unwrap();
        assert!(path.speed_drift < 1e-9);
        for (x, _) in &path.states {
            assert!(x[1].abs() < 1e-10, "great-circle image left the line");
        }
    }

    #[test]
    fn sphere_geodesic_period_is_two_pi() {
        let spec = catalog::by_name("riemannian-sphere").unwrap();
        let x0 = [0.3, 0.0];
        // normalize direction (0, 1) to the indicatrix
        let f = f_value(&spec, &x0, &[0.0, 1.0]).unwrap();
        let y0 = [0.0, 1.0 / f];
        let path = integrate_geodesic(&spec, &x0, &y0, 7.0, 1e-3).unwrap();
        assert!(path.speed_drift < 1e-9);
        // locate the return to x0 near t = 2 pi by quadratic interpolation of
        // the squared distance
        let d2: Vec<f64> = path
            .states
            .iter()
            .map(|(x, _)| (x[0] - x0[0]).powi(2) + (x[1] - x0[1]).powi(2))
            .collect();
        let lo = (5.8 / 1e-3) as usize;
        let hi = (6.8 / 1e-3) as usize;
        let mut best = lo;
        for i in lo..hi {
            if d2[i] < d2[best] {
                best = i;
            }
        }
        let (dm, d0, dp) = (d2[best - 1], d2[best], d2[best + 1]);
        let correction = 0.5 * (dm - dp) / (dm - 2.0 * d0 + dp);
        let t_star = path.times[best] + correction * 1e-3;
        assert!(
            (t_star - 2.0 * std::f64::consts::PI).abs() < 1e-4,
            "period {t_star}"
        );
    }

    #[test]
    fn funk_geodesics_are_rays_with_exponential_radius() {
        let spec = catalog::by_name("funk-ball").unwrap();
        let path = integrate_geodesic(&spec, &[0.0, 0.0], &[1.0, 0.0], 5.0, 1e-3).unwrap();
        assert!(!path.exited, "forward complete: never exits for finite t");
        assert!(path.speed_drift < 1e-6, "drift {}", path.speed_drift);
        for (t, (x, _)) in path.times.iter().zip(&path.states) {
            assert!(x[1].abs() < 1e-5, "ray property violated");
            let want = 1.0 - (-t).exp();
            assert!(
                (x[0] - want).abs() < 1e-5,
                "radial law: r({t}) = {} want {want}",
                x[0]
            );
        }
    }

    #[test]
    fn transport_is_trivial_on_euclidean_space() {
        let spec = catalog::by_name("euclidean").unwrap();
        let path = integrate_geodesic(&spec, &[0.0, 0.0], &[0.6, 0.8], 1.0, 1e-3).unwrap();
        let frame = parallel_transport(
            &spec,
            &FamilyParams::chern(),
            &path,
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        for vecs in &frame.vectors {
            let last = vecs.last().unwrap();
            let first = &vecs[0];
            for (a, b) in last.iter().zip(first) {
                assert_relative_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn transport_preserves_inner_products_on_the_sphere() {
        let spec = catalog::by_name("riemannian-sphere").unwrap();
        let x0 = [0.2, 0.1];
        let f = f_value(&spec, &x0, &[1.0, 0.3]).unwrap();
        let y0 = [1.0 / f, 0.3 / f];
        let path = integrate_geodesic(&spec, &x0, &y0, 3.0, 1e-3).unwrap();
        let frame = parallel_transport(
            &spec,
            &FamilyParams::chern(),
            &path,
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert!(
            frame.metric_drift < 1e-6,
            "g(X,X) drift {}",
            frame.metric_drift
        );
    }

    #[test]
    fn transporting_the_unit_section_reproduces_it() {
        for name in ["riemannian-sphere", "randers-nonconst", "funk-ball"] {
            let spec = catalog::by_name(name).unwrap();
            let (x0, y0) = geodesic_initials(&spec, 1, 0).pop().unwrap();
            let path = integrate_geodesic(&spec, &x0, &y0, 2.0, 1e-3).unwrap();
            // ell = y/F = y on the indicatrix
            let frame =
                parallel_transport(&spec, &FamilyParams::chern(), &path, &[y0.clone()]).unwrap();
            let mut worst = 0.0f64;
            for (idx, (_, v)) in path.states.iter().enumerate() {
                for (a, b) in frame.vectors[0][idx].iter().zip(v) {
                    worst = worst.max((a - b).abs());
                }
            }
            assert!(worst < 1e-6, "{name}: ell transport deviates by {worst}");
        }
    }

    #[test]
    fn sphere_cartan_series_is_identically_zero() {
        let spec = catalog::by_name("riemannian-sphere").unwrap();
        let (x0, y0) = geodesic_initials(&spec, 1, 0).pop().unwrap();
        let path = integrate_geodesic(&spec, &x0, &y0, 1.0, 1e-3).unwrap();
        let frame = parallel_transport(
            &spec,
            &FamilyParams::chern(),
            &path,
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.7, 0.7]],
        )
        .unwrap();
        let series = cartan_series(&spec, &path, &frame, 10).unwrap();
        for v in &series.a {
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn cartan_series_derivatives_close_the_recursion() {
        for name in ["randers-nonconst", "funk-ball", "quartic"] {
            let spec = catalog::by_name(name).unwrap();
            let (x0, y0) = geodesic_initials(&spec, 1, 3).pop().unwrap();
            let path = integrate_geodesic(&spec, &x0, &y0, 2.0, 1e-3).unwrap();
            let frame = parallel_transport(
                &spec,
                &FamilyParams::chern(),
                &path,
                &[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.7, 0.7]],
            )
            .unwrap();
            let series = cartan_series(&spec, &path, &frame, 10).unwrap();
            assert!(
                series.residual_da_dt() < 1e-5,
                "{name}: d a/dt residual {}",
                series.residual_da_dt()
            );
            assert!(
                series.residual_dadot_dt() < 1e-4,
                "{name}: d adot/dt residual {}",
                series.residual_dadot_dt()
            );
        }
    }

    #[test]
    fn short_paths_are_rejected() {
        let spec = catalog::by_name("euclidean").unwrap();
        let path = integrate_geodesic(&spec, &[0.0, 0.0], &[1.0, 0.0], 0.01, 1e-3).unwrap();
        let frame = parallel_transport(
            &spec,
            &FamilyParams::chern(),
            &path,
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let err = cartan_series(&spec, &path, &frame, 10).unwrap_err();
        assert!(matches!(err, FinslerError::PathTooShort { .. }));
    }
}
