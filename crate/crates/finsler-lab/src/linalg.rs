//! Small dense tensors and the bits of linear algebra the engine needs.
//!
//! Dimensions here are tiny (n = 2..4), so everything is plain loops over
//! flat `Vec<f64>` storage. Eigenvalues come from a classical Jacobi sweep,
//! which is deterministic and more than accurate enough for
//! positive-definiteness scans.

use crate::series::Series;

#[derive(Clone, Debug, PartialEq)]
pub struct Ten2 {
    n: usize,
    a: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ten3 {
    n: usize,
    a: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ten4 {
    n: usize,
    a: Vec<f64>,
}

macro_rules! common_impl {
    ($t:ident, $rank:expr) => {
        impl $t {
            pub fn zeros(n: usize) -> Self {
                Self {
                    n,
                    a: vec![0.0; n.pow($rank)],
                }
            }

            pub fn dim(&self) -> usize {
                self.n
            }

            pub fn max_abs(&self) -> f64 {
                self.a.iter().fold(0.0, |m, &v| m.max(v.abs()))
            }

            pub fn raw(&self) -> &[f64] {
                &self.a
            }
        }
    };
}

common_impl!(Ten2, 2);
common_impl!(Ten3, 3);
common_impl!(Ten4, 4);

impl Ten2 {
    pub fn identity(n: usize) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            t.set(i, i, 1.0);
        }
        t
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

impl Ten3 {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.a[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.a[(i * self.n + j) * self.n + k] = v;
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (0..self.n).map(|k| self.get(i, j, k)).collect())
                    .collect()
            })
            .collect()
    }
}

impl Ten4 {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.a[((i * self.n + j) * self.n + k) * self.n + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.a[((i * self.n + j) * self.n + k) * self.n + l] = v;
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<Vec<f64>>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        (0..self.n)
                            .map(|k| (0..self.n).map(|l| self.get(i, j, k, l)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Dynamically shaped tensor, used where an operation appends an index slot.
#[derive(Clone, Debug)]
pub struct DynTen {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl DynTen {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product::<usize>().max(1);
        DynTen {
            shape,
            data: vec![0.0; len],
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.shape.len());
        let mut flat = 0;
        for (i, d) in idx.iter().zip(&self.shape) {
            flat = flat * d + i;
        }
        self.data[flat]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn sym_eigenvalues(m: &Ten2) -> Vec<f64> {
    let n = m.dim();
    let mut a = m.clone();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a.get(p, q).abs();
            }
        }
        if off < 1e-15 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Plain Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub fn invert(m: &Ten2) -> Option<Ten2> {
    let n = m.dim();
    let mut a = m.clone();
    let mut inv = Ten2::identity(n);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a.get(r, col).abs() > a.get(piv, col).abs() {
                piv = r;
            }
        }
        if a.get(piv, col).abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                let (x, y) = (a.get(col, j), a.get(piv, j));
                a.set(col, j, y);
                a.set(piv, j, x);
                let (x, y) = (inv.get(col, j), inv.get(piv, j));
                inv.set(col, j, y);
                inv.set(piv, j, x);
            }
        }
        let d = a.get(col, col);
        for j in 0..n {
            a.set(col, j, a.get(col, j) / d);
            inv.set(col, j, inv.get(col, j) / d);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a.get(r, col);
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a.set(r, j, a.get(r, j) - f * a.get(col, j));
                inv.set(r, j, inv.get(r, j) - f * inv.get(col, j));
            }
        }
    }
    Some(inv)
}

/// Gauss-Jordan inverse of an n-by-n matrix of series, pivoting on the
/// constant terms. The fundamental tensor is checked positive definite
/// before this runs, so pivots stay well away from zero.
pub fn invert_series(n: usize, m: &[Series]) -> Vec<Series> {
    assert_eq!(m.len(), n * n);
    let ring = m[0].ring().clone();
    let mut a: Vec<Series> = m.to_vec();
    let mut inv: Vec<Series> = (0..n * n)
        .map(|idx| Series::constant(&ring, if idx / n == idx % n { 1.0 } else { 0.0 }))
        .collect();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].val().abs() > a[piv * n + col].val().abs() {
                piv = r;
            }
        }
        assert!(
            a[piv * n + col].val().abs() > 1e-300,
            "singular series matrix"
        );
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
                inv.swap(col * n + j, piv * n + j);
            }
        }
        let d = a[col * n + col].recip();
        for j in 0..n {
            a[col * n + j] = a[col * n + j].mul(&d);
            inv[col * n + j] = inv[col * n + j].mul(&d);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col].clone();
            for j in 0..n {
                let prod = f.mul(&a[col * n + j]);
                a[r * n + j] = a[r * n + j].sub(&prod);
                let prod = f.mul(&inv[col * n + j]);
                inv[r * n + j] = inv[r * n + j].sub(&prod);
            }
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Ring;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_reproduces_closed_form_eigenvalues() {
        let mut m = Ten2::zeros(2);
        m.set(0, 0, 2.0);
        m.set(1, 1, 3.0);
        m.set(0, 1, 0.5);
        m.set(1, 0, 0.5);
        let eig = sym_eigenvalues(&m);
        // closed form: (5 ± sqrt(1 + 4*0.25)) / 2
        let d = ((3.0f64 - 2.0) * (3.0 - 2.0) + 4.0 * 0.25).sqrt();
        assert_relative_eq!(eig[0], (5.0 - d) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(eig[1], (5.0 + d) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let mut m = Ten2::zeros(3);
        let vals = [4.0, 1.0, 0.3, 1.0, 3.0, -0.2, 0.3, -0.2, 2.0];
        for i in 0..3 {
            for j in 0..3 {
                m.set(i, j, vals[i * 3 + j]);
            }
        }
        let inv = invert(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += m.get(i, k) * inv.get(k, j);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(s, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn series_inverse_matches_scalar_inverse() {
        let ring = Ring::get(2, 3);
        let u = Series::seed(&ring, 0, 0.2);
        let m = vec![
            u.mul(&u).add_scalar(2.0),
            u.clone(),
            u.clone(),
            u.sin().add_scalar(1.5),
        ];
        let inv = invert_series(2, &m);
        // m * inv should be the identity as series
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Series::constant(&ring, 0.0);
                for k in 0..2 {
                    s = s.add(&m[i * 2 + k].mul(&inv[k * 2 + j]));
                }
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(s.val(), want, epsilon = 1e-12);
                assert!(s.partial(&[1, 0]).abs() < 1e-11);
            }
        }
    }
}
