//! Per-point series tower.
//!
//! Everything the engine computes at a point — fundamental tensor, Cartan
//! tensor, spray, nonlinear connection, the Chern coefficients and the
//! iterated derivatives feeding the connection family — is assembled once
//! here as truncated Taylor expansions around the point. Downstream modules
//! either read off values or take further ring derivatives; nothing is ever
//! finite-differenced on the primary path.
//!
//! Ring-order budget: the fundamental tensor consumes two fiber derivatives
//! of F^2, the Cartan tensor three, each horizontal derivative one more. A
//! tower built with `order = 3 + m_max` can produce values of the m_max-th
//! iterated tensor; one extra order is needed per derivative a caller still
//! wants to take (curvature needs one).

use std::sync::Arc;

use crate::catalog::{seeded_coords, MetricSpec};
use crate::error::{FinslerError, Result};
use crate::jets::EvalPoint;
use crate::linalg::{invert_series, sym_eigenvalues, Ten2, Ten3, Ten4};
use crate::series::{Ring, Series};

pub(crate) struct Tower {
    pub n: usize,
    pub ring: Arc<Ring>,
    pub f: Series,
    /// g_ij, row-major n*n.
    pub g: Vec<Series>,
    pub ginv: Vec<Series>,
    /// Cartan tensor A_ijk, n^3.
    pub a: Vec<Series>,
    pub ell: Vec<Series>,
    pub ell_low: Vec<Series>,
    /// Formal Christoffel gamma^k_ij, indexed [k][i][j].
    pub gamma: Vec<Series>,
    /// Spray coefficients G^i.
    pub spray: Vec<Series>,
    /// Nonlinear connection N^i_j.
    pub nconn: Vec<Series>,
    /// Chern coefficients.
    pub gamma_star: Vec<Series>,
    /// Iterated tensors, adots[m-1] holds the m-th one.
    pub adots: Vec<Vec<Series>>,
}

impl Tower {
    pub fn new(spec: &MetricSpec, pt: &EvalPoint, order: usize, m_max: usize) -> Result<Tower> {
        assert!(
            order >= 3 + m_max,
            "tower order {order} cannot support {m_max} iterated derivatives"
        );
        spec.check_spec()?;
        spec.check_point(&pt.x, &pt.y)?;
        let n = spec.dim;
        let ring = Ring::get(2 * n, order);
        let (xs, ys) = seeded_coords(spec, pt, &ring);
        let f2 = spec.f2_series(&xs, &ys)?;
        let f = f2.sqrt();

        // symmetric tensors are computed once per sorted index tuple and
        // mirrored, so their symmetries are exact rather than float-level
        let mut g: Vec<Series> = vec![Series::constant(&ring, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f2.deriv(n + i).deriv(n + j).scale(0.5);
                g[i * n + j] = v.clone();
                g[j * n + i] = v;
            }
        }

        // positive definiteness guard before anything divides by g
        let mut gv = Ten2::zeros(n);
        for i in 0..n {
            for j in 0..n {
                gv.set(i, j, g[i * n + j].val());
            }
        }
        let min_eig = sym_eigenvalues(&gv)[0];
        if min_eig <= 0.0 {
            return Err(FinslerError::NotConvex {
                metric: spec.name.clone(),
                x: pt.x.clone(),
                y: pt.y.clone(),
                min_eig,
            });
        }

        let ginv = invert_series(n, &g);

        let half_f = f.scale(0.5);
        let mut a = vec![Series::constant(&ring, 0.0); n * n * n];
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let h_ijk = g[i * n + j].deriv(n + k);
                    let v = half_f.mul(&h_ijk);
                    mirror3(&mut a, n, i, j, k, v);
                }
            }
        }

        let f_inv = f.recip();
        let ell: Vec<Series> = ys.iter().map(|yi| yi.mul(&f_inv)).collect();
        let ell_low: Vec<Series> = (0..n)
            .map(|i| {
                let mut s = Series::constant(&ring, 0.0);
                for j in 0..n {
                    s.acc_mul(1.0, &g[i * n + j], &ell[j]);
                }
                s
            })
            .collect();

        let a_up = raise_first(n, &ginv, &a);

        // gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
        let dgx: Vec<Series> = (0..n * n * n)
            .map(|idx| {
                let (ij, k) = (idx / n, idx % n);
                g[ij].deriv(k)
            })
            .collect();
        let mut gamma = vec![Series::constant(&ring, 0.0); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut s = Series::constant(&ring, 0.0);
                    for l in 0..n {
                        let bracket = dgx[(j * n + l) * n + i]
                            .add(&dgx[(i * n + l) * n + j])
                            .sub(&dgx[(i * n + j) * n + l]);
                        s.acc_mul(0.5, &ginv[k * n + l], &bracket);
                    }
                    gamma[(k * n + i) * n + j] = s.clone();
                    gamma[(k * n + j) * n + i] = s;
                }
            }
        }

        let spray: Vec<Series> = (0..n)
            .map(|i| {
                let mut s = Series::constant(&ring, 0.0);
                for aa in 0..n {
                    for b in 0..n {
                        let t = gamma[(i * n + aa) * n + b].mul(&ys[aa]);
                        s.acc_mul(0.5, &t, &ys[b]);
                    }
                }
                s
            })
            .collect();

        // gamma^l_ab ell^a ell^b, then N^i_j = F (gamma^i_jb ell^b - A^i_jl gll^l)
        let gll: Vec<Series> = (0..n)
            .map(|l| {
                let mut s = Series::constant(&ring, 0.0);
                for aa in 0..n {
                    for b in 0..n {
                        let t = gamma[(l * n + aa) * n + b].mul(&ell[aa]);
                        s.acc_mul(1.0, &t, &ell[b]);
                    }
                }
                s
            })
            .collect();
        let mut nconn = vec![Series::constant(&ring, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Series::constant(&ring, 0.0);
                for b in 0..n {
                    s.acc_mul(1.0, &gamma[(i * n + j) * n + b], &ell[b]);
                }
                for l in 0..n {
                    s.acc_mul(-1.0, &a_up[(i * n + j) * n + l], &gll[l]);
                }
                nconn[i * n + j] = f.mul(&s);
            }
        }

        let mut tower = Tower {
            n,
            ring,
            f,
            g,
            ginv,
            a,
            ell,
            ell_low,
            gamma,
            spray,
            nconn,
            gamma_star: Vec::new(),
            adots: Vec::new(),
        };

        // Chern coefficients from the delta-Christoffel bracket
        let dgd: Vec<Series> = (0..n * n * n)
            .map(|idx| {
                let (ij, k) = (idx / n, idx % n);
                tower.delta(&tower.g[ij], k)
            })
            .collect();
        let mut gamma_star = vec![Series::constant(&tower.ring, 0.0); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    let mut sum = Series::constant(&tower.ring, 0.0);
                    for s in 0..n {
                        let bracket = dgd[(s * n + j) * n + k]
                            .sub(&dgd[(j * n + k) * n + s])
                            .add(&dgd[(k * n + s) * n + j]);
                        sum.acc_mul(0.5, &tower.ginv[i * n + s], &bracket);
                    }
                    gamma_star[(i * n + j) * n + k] = sum.clone();
                    gamma_star[(i * n + k) * n + j] = sum;
                }
            }
        }
        tower.gamma_star = gamma_star;

        // ell-directional recursion with the Chern base connection
        let mut prev = tower.a.clone();
        for _m in 0..m_max {
            let next = tower.ell_cov_h(&prev, &tower.gamma_star);
            tower.adots.push(next.clone());
            prev = next;
        }

        Ok(tower)
    }

    /// Horizontal basis derivative at the point, as a series operator.
    pub fn delta(&self, s: &Series, j: usize) -> Series {
        let n = self.n;
        let mut out = s.deriv(j);
        for m in 0..n {
            let dm = s.deriv(n + m);
            out.acc_mul(-1.0, &self.nconn[m * n + j], &dm);
        }
        out
    }

    /// Full horizontal covariant derivative of a (0,3) tensor of series,
    /// result indexed [i][j][k][l] flat.
    pub fn cov_h3(&self, t: &[Series], gamma: &[Series]) -> Vec<Series> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = self.delta(&t[(i * n + j) * n + k], l);
                        for m in 0..n {
                            s.acc_mul(-1.0, &t[(m * n + j) * n + k], &gamma[(m * n + i) * n + l]);
                            s.acc_mul(-1.0, &t[(i * n + m) * n + k], &gamma[(m * n + j) * n + l]);
                            s.acc_mul(-1.0, &t[(i * n + j) * n + m], &gamma[(m * n + k) * n + l]);
                        }
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// ell-contracted horizontal derivative, the recursion step for the
    /// iterated tensors.
    fn ell_cov_h(&self, t: &[Series], gamma: &[Series]) -> Vec<Series> {
        let n = self.n;
        // gamma^s_{i l} ell^l
        let mut gl = vec![Series::constant(&self.ring, 0.0); n * n];
        for s in 0..n {
            for i in 0..n {
                let mut acc = Series::constant(&self.ring, 0.0);
                for l in 0..n {
                    acc.acc_mul(1.0, &gamma[(s * n + i) * n + l], &self.ell[l]);
                }
                gl[s * n + i] = acc;
            }
        }
        let mut out = vec![Series::constant(&self.ring, 0.0); n * n * n];
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let mut s = Series::constant(&self.ring, 0.0);
                    for l in 0..n {
                        let d = self.delta(&t[(i * n + j) * n + k], l);
                        s.acc_mul(1.0, &self.ell[l], &d);
                    }
                    for m in 0..n {
                        s.acc_mul(-1.0, &t[(m * n + j) * n + k], &gl[m * n + i]);
                        s.acc_mul(-1.0, &t[(i * n + m) * n + k], &gl[m * n + j]);
                        s.acc_mul(-1.0, &t[(i * n + j) * n + m], &gl[m * n + k]);
                    }
                    mirror3(&mut out, n, i, j, k, s);
                }
            }
        }
        out
    }

    /// Family coefficients: Chern plus the weighted raised iterated tensors.
    pub fn family_gamma(&self, k: &[f64]) -> Result<Vec<Series>> {
        if k.len() > self.adots.len() {
            return Err(FinslerError::InvalidParam(format!(
                "family order {} exceeds tower depth {}",
                k.len(),
                self.adots.len()
            )));
        }
        let mut out = self.gamma_star.clone();
        for (m, &km) in k.iter().enumerate() {
            if km == 0.0 {
                continue;
            }
            let raised = raise_first(self.n, &self.ginv, &self.adots[m]);
            for (o, r) in out.iter_mut().zip(&raised) {
                *o = o.add(&r.scale(km));
            }
        }
        Ok(out)
    }

    pub fn val2(&self, t: &[Series]) -> Ten2 {
        let n = self.n;
        let mut out = Ten2::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, t[i * n + j].val());
            }
        }
        out
    }

    pub fn val3(&self, t: &[Series]) -> Ten3 {
        let n = self.n;
        let mut out = Ten3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.set(i, j, k, t[(i * n + j) * n + k].val());
                }
            }
        }
        out
    }

    pub fn val4(&self, t: &[Series]) -> Ten4 {
        let n = self.n;
        let mut out = Ten4::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        out.set(i, j, k, l, t[((i * n + j) * n + k) * n + l].val());
                    }
                }
            }
        }
        out
    }

    pub fn vals1(&self, t: &[Series]) -> Vec<f64> {
        t.iter().map(|s| s.val()).collect()
    }
}

/// g^{is} T_sjk for a flat (0,3) block; the (j,k) symmetry of a symmetric T
/// is preserved exactly.
pub(crate) fn raise_first(n: usize, ginv: &[Series], t: &[Series]) -> Vec<Series> {
    let mut out = vec![Series::constant(t[0].ring(), 0.0); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in j..n {
                let mut acc = Series::constant(t[0].ring(), 0.0);
                for s in 0..n {
                    acc.acc_mul(1.0, &ginv[i * n + s], &t[(s * n + j) * n + k]);
                }
                out[(i * n + j) * n + k] = acc.clone();
                out[(i * n + k) * n + j] = acc;
            }
        }
    }
    out
}

/// Writes one value to every permutation slot of a totally symmetric (0,3)
/// block.
fn mirror3(t: &mut [Series], n: usize, i: usize, j: usize, k: usize, v: Series) {
    for (a, b, c) in [
        (i, j, k),
        (i, k, j),
        (j, i, k),
        (j, k, i),
        (k, i, j),
        (k, j, i),
    ] {
        t[(a * n + b) * n + c] = v.clone();
    }
}
