//! Truncated multivariate Taylor scalars.
//!
//! `Series` holds the Taylor coefficients of a smooth function around a base
//! point, in `nvars` perturbation variables, truncated at a fixed total
//! degree. All ring operations are exact on the retained coefficients, so a
//! coefficient read off a series built from exact inputs is the exact partial
//! derivative (up to the factorials) of the composed function.
//!
//! Differentiating a series consumes one order of information; the `valid`
//! watermark tracks how many leading orders are still exact. Coefficients
//! above the watermark are kept at zero, so stale data can never leak into a
//! later product.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Monomial basis, multiplication table and differentiation tables for series
/// in `nvars` variables truncated at total degree `order`.
///
/// Rings are cached globally by `(nvars, order)`; building one is quadratic
/// in the basis size and happens once per shape.
pub struct Ring {
    nvars: usize,
    order: usize,
    monos: Vec<Box<[u8]>>,
    order_of: Vec<u8>,
    rank: HashMap<Box<[u8]>, u32>,
    mul_pairs: Vec<(u32, u32, u32)>,
    derivs: Vec<Vec<(u32, u32, f64)>>,
}

fn enumerate_monos(nvars: usize, order: usize) -> Vec<Box<[u8]>> {
    fn rec(out: &mut Vec<Box<[u8]>>, cur: &mut Vec<u8>, var: usize, left: u8, nvars: usize) {
        if var == nvars - 1 {
            cur.push(left);
            out.push(cur.clone().into_boxed_slice());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(out, cur, var + 1, left - e, nvars);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=order {
        rec(&mut out, &mut Vec::new(), 0, total as u8, nvars);
    }
    out
}

impl Ring {
    fn build(nvars: usize, order: usize) -> Ring {
        assert!(nvars >= 1, "ring needs at least one variable");
        let monos = enumerate_monos(nvars, order);
        let order_of: Vec<u8> = monos
            .iter()
            .map(|m| m.iter().map(|&e| e as u16).sum::<u16>() as u8)
            .collect();
        let mut rank = HashMap::with_capacity(monos.len());
        for (i, m) in monos.iter().enumerate() {
            rank.insert(m.clone(), i as u32);
        }

        let mut mul_pairs = Vec::new();
        let mut sum = vec![0u8; nvars];
        for (i, mi) in monos.iter().enumerate() {
            let oi = order_of[i] as usize;
            for (j, mj) in monos.iter().enumerate() {
                if oi + order_of[j] as usize > order {
                    continue;
                }
                for v in 0..nvars {
                    sum[v] = mi[v] + mj[v];
                }
                let k = rank[sum.as_slice()];
                mul_pairs.push((i as u32, j as u32, k));
            }
        }

        let mut derivs = vec![Vec::new(); nvars];
        let mut lowered = vec![0u8; nvars];
        for (i, mi) in monos.iter().enumerate() {
            for v in 0..nvars {
                if mi[v] == 0 {
                    continue;
                }
                lowered.copy_from_slice(mi);
                lowered[v] -= 1;
                let dst = rank[lowered.as_slice()];
                derivs[v].push((i as u32, dst, mi[v] as f64));
            }
        }

        Ring {
            nvars,
            order,
            monos,
            order_of,
            rank,
            mul_pairs,
            derivs,
        }
    }

    pub fn get(nvars: usize, order: usize) -> Arc<Ring> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Ring>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(Ring::build(nvars, order)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn rank_of(&self, mono: &[u8]) -> Option<u32> {
        self.rank.get(mono).copied()
    }
}

impl std::fmt::Debug for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ring(nvars={}, order={})", self.nvars, self.order)
    }
}

/// A truncated Taylor expansion living in a shared [`Ring`].
#[derive(Clone)]
pub struct Series {
    ring: Arc<Ring>,
    valid: u32,
    c: Vec<f64>,
}

impl Series {
    pub fn constant(ring: &Arc<Ring>, v: f64) -> Series {
        let mut c = vec![0.0; ring.len()];
        c[0] = v;
        Series {
            ring: ring.clone(),
            valid: ring.order as u32,
            c,
        }
    }

    /// The coordinate `value + t_var`, seeded as an independent perturbation
    /// variable.
    pub fn seed(ring: &Arc<Ring>, var: usize, value: f64) -> Series {
        assert!(var < ring.nvars, "seed variable out of range");
        let mut s = Series::constant(ring, value);
        if ring.order >= 1 {
            let mut mono = vec![0u8; ring.nvars];
            mono[var] = 1;
            let r = ring.rank_of(&mono).expect("degree-1 monomial missing");
            s.c[r as usize] = 1.0;
        }
        s
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn valid_order(&self) -> u32 {
        self.valid
    }

    /// Value at the expansion point.
    pub fn val(&self) -> f64 {
        self.c[0]
    }

    /// Exact partial derivative for the exponent multi-index `exps`
    /// (coefficient times the factorials).
    pub fn partial(&self, exps: &[u8]) -> f64 {
        assert_eq!(exps.len(), self.ring.nvars);
        let total: u32 = exps.iter().map(|&e| e as u32).sum();
        assert!(
            total <= self.valid,
            "requested order {} beyond valid order {}",
            total,
            self.valid
        );
        let r = self
            .ring
            .rank_of(exps)
            .expect("multi-index outside ring order") as usize;
        let mut fact = 1.0;
        for &e in exps {
            for k in 2..=e as u64 {
                fact *= k as f64;
            }
        }
        self.c[r] * fact
    }

    fn zero_above(&mut self, ord: u32) {
        for (i, o) in self.ring.order_of.iter().enumerate() {
            if *o as u32 > ord {
                self.c[i] = 0.0;
            }
        }
    }

    pub fn add(&self, o: &Series) -> Series {
        assert!(Arc::ptr_eq(&self.ring, &o.ring), "ring mismatch");
        let valid = self.valid.min(o.valid);
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(&o.c) {
            *a += b;
        }
        let mut s = Series {
            ring: self.ring.clone(),
            valid,
            c,
        };
        s.zero_above(valid);
        s
    }

    pub fn sub(&self, o: &Series) -> Series {
        assert!(Arc::ptr_eq(&self.ring, &o.ring), "ring mismatch");
        let valid = self.valid.min(o.valid);
        let mut c = self.c.clone();
        for (a, b) in c.iter_mut().zip(&o.c) {
            *a -= b;
        }
        let mut s = Series {
            ring: self.ring.clone(),
            valid,
            c,
        };
        s.zero_above(valid);
        s
    }

    pub fn neg(&self) -> Series {
        let mut c = self.c.clone();
        for a in c.iter_mut() {
            *a = -*a;
        }
        Series {
            ring: self.ring.clone(),
            valid: self.valid,
            c,
        }
    }

    pub fn scale(&self, k: f64) -> Series {
        let mut c = self.c.clone();
        for a in c.iter_mut() {
            *a *= k;
        }
        Series {
            ring: self.ring.clone(),
            valid: self.valid,
            c,
        }
    }

    pub fn add_scalar(&self, k: f64) -> Series {
        let mut s = self.clone();
        s.c[0] += k;
        s
    }

    pub fn mul(&self, o: &Series) -> Series {
        assert!(Arc::ptr_eq(&self.ring, &o.ring), "ring mismatch");
        let valid = self.valid.min(o.valid);
        let mut c = vec![0.0; self.c.len()];
        for &(i, j, k) in &self.ring.mul_pairs {
            c[k as usize] += self.c[i as usize] * o.c[j as usize];
        }
        let mut s = Series {
            ring: self.ring.clone(),
            valid,
            c,
        };
        s.zero_above(valid);
        s
    }

    /// In-place fused accumulate: `self += k * (a * b)` without the
    /// intermediate allocation. Validity shrinks to the weakest operand.
    pub fn acc_mul(&mut self, k: f64, a: &Series, b: &Series) {
        assert!(Arc::ptr_eq(&self.ring, &a.ring) && Arc::ptr_eq(&self.ring, &b.ring));
        let valid = self.valid.min(a.valid).min(b.valid);
        for &(i, j, t) in &self.ring.mul_pairs {
            self.c[t as usize] += k * a.c[i as usize] * b.c[j as usize];
        }
        self.valid = valid;
        self.zero_above(valid);
    }

    /// Partial derivative with respect to ring variable `var`.
    ///
    /// Panics if no exact order is left; size the ring for the deepest
    /// derivative chain before building the tower.
    pub fn deriv(&self, var: usize) -> Series {
        assert!(var < self.ring.nvars);
        assert!(
            self.valid >= 1,
            "series differentiated beyond its valid order"
        );
        let mut c = vec![0.0; self.c.len()];
        for &(src, dst, f) in &self.ring.derivs[var] {
            c[dst as usize] += self.c[src as usize] * f;
        }
        let valid = self.valid - 1;
        let mut s = Series {
            ring: self.ring.clone(),
            valid,
            c,
        };
        s.zero_above(valid);
        s
    }

    /// Analytic composition: given `coeffs[k] = f^(k)(a0)/k!`, returns the
    /// expansion of `f(self)` around the constant term `a0`.
    pub fn compose(&self, coeffs: &[f64]) -> Series {
        let mut u = self.clone();
        u.c[0] = 0.0;
        let kmax = (self.valid as usize).min(coeffs.len().saturating_sub(1));
        let mut res = Series::constant(&self.ring, coeffs[kmax]);
        res.valid = self.valid;
        for k in (0..kmax).rev() {
            res = res.mul(&u).add_scalar(coeffs[k]);
        }
        res.valid = self.valid;
        res.zero_above(self.valid);
        res
    }

    pub fn recip(&self) -> Series {
        let a0 = self.c[0];
        assert!(a0 != 0.0 && a0.abs() > 1e-300, "reciprocal of zero series");
        let k = self.valid as usize;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut cur = 1.0 / a0;
        coeffs.push(cur);
        for _ in 0..k {
            cur = -cur / a0;
            coeffs.push(cur);
        }
        self.compose(&coeffs)
    }

    pub fn div(&self, o: &Series) -> Series {
        self.mul(&o.recip())
    }

    pub fn sqrt(&self) -> Series {
        let a0 = self.c[0];
        assert!(a0 > 0.0, "square root of non-positive series constant");
        let k = self.valid as usize;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut cur = a0.sqrt();
        coeffs.push(cur);
        for m in 0..k {
            // c_{m+1} = c_m * (1/2 - m) / ((m+1) * a0)
            cur = cur * (0.5 - m as f64) / ((m as f64 + 1.0) * a0);
            coeffs.push(cur);
        }
        self.compose(&coeffs)
    }

    pub fn sin(&self) -> Series {
        let a0 = self.c[0];
        let k = self.valid as usize;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut fact = 1.0;
        for m in 0..=k {
            if m > 0 {
                fact *= m as f64;
            }
            let d = match m % 4 {
                0 => a0.sin(),
                1 => a0.cos(),
                2 => -a0.sin(),
                _ => -a0.cos(),
            };
            coeffs.push(d / fact);
        }
        self.compose(&coeffs)
    }

    pub fn cos(&self) -> Series {
        let a0 = self.c[0];
        let k = self.valid as usize;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut fact = 1.0;
        for m in 0..=k {
            if m > 0 {
                fact *= m as f64;
            }
            let d = match m % 4 {
                0 => a0.cos(),
                1 => -a0.sin(),
                2 => -a0.cos(),
                _ => a0.sin(),
            };
            coeffs.push(d / fact);
        }
        self.compose(&coeffs)
    }
}

impl std::fmt::Debug for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Series(val={}, valid={}, ring={:?})",
            self.c[0], self.valid, self.ring
        )
    }
}

/// Sum of products over slices, a small convenience for inner products.
pub fn dot(a: &[Series], b: &[Series]) -> Series {
    assert_eq!(a.len(), b.len());
    let mut out = Series::constant(a[0].ring(), 0.0);
    for (x, y) in a.iter().zip(b) {
        out.acc_mul(1.0, x, y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ring2(order: usize) -> Arc<Ring> {
        Ring::get(2, order)
    }

    #[test]
    fn polynomial_partials_are_exact() {
        // p(u, v) = u^2 v + 3 v^3 around (u0, v0) = (1.5, -0.5)
        let r = ring2(4);
        let u = Series::seed(&r, 0, 1.5);
        let v = Series::seed(&r, 1, -0.5);
        let p = u.mul(&u).mul(&v).add(&v.mul(&v).mul(&v).scale(3.0));
        assert_relative_eq!(p.val(), 1.5 * 1.5 * -0.5 + 3.0 * -0.125, epsilon = 1e-14);
        // dp/du = 2uv
        assert_relative_eq!(p.partial(&[1, 0]), 2.0 * 1.5 * -0.5, epsilon = 1e-14);
        // d2p/du dv = 2u
        assert_relative_eq!(p.partial(&[1, 1]), 3.0, epsilon = 1e-14);
        // d3p/dv3 = 18
        assert_relative_eq!(p.partial(&[0, 3]), 18.0, epsilon = 1e-14);
        // d3p/du2 dv = 2
        assert_relative_eq!(p.partial(&[2, 1]), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn sqrt_squares_back() {
        let r = ring2(6);
        let u = Series::seed(&r, 0, 0.3);
        let v = Series::seed(&r, 1, 0.7);
        let q = u.mul(&u).add(&v.mul(&v)).add_scalar(1.0);
        let s = q.sqrt();
        let back = s.mul(&s);
        for (a, b) in back.c.iter().zip(&q.c) {
            assert_relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn recip_multiplies_to_one() {
        let r = ring2(6);
        let u = Series::seed(&r, 0, 0.2);
        let q = u.mul(&u).add_scalar(2.0);
        let one = q.mul(&q.recip());
        assert_relative_eq!(one.val(), 1.0, epsilon = 1e-14);
        for &c in &one.c[1..] {
            assert!(c.abs() < 1e-13, "non-constant coefficient {c}");
        }
    }

    #[test]
    fn trig_identity_holds_coefficientwise() {
        let r = ring2(5);
        let u = Series::seed(&r, 0, 0.9);
        let s = u.sin();
        let c = u.cos();
        let sum = s.mul(&s).add(&c.mul(&c));
        assert_relative_eq!(sum.val(), 1.0, epsilon = 1e-14);
        for &c in &sum.c[1..] {
            assert!(c.abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_consumes_one_order() {
        let r = ring2(3);
        let u = Series::seed(&r, 0, 1.0);
        let p = u.mul(&u).mul(&u);
        assert_eq!(p.valid_order(), 3);
        let d = p.deriv(0);
        assert_eq!(d.valid_order(), 2);
        assert_relative_eq!(d.val(), 3.0, epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn mixed_partials_commute(a in -2.0f64..2.0, b in -2.0f64..2.0) {
            let r = ring2(5);
            let u = Series::seed(&r, 0, a);
            let v = Series::seed(&r, 1, b);
            // f = sin(u) * (v^2 + 1) + u*v
            let f = u.sin().mul(&v.mul(&v).add_scalar(1.0)).add(&u.mul(&v));
            let duv = f.deriv(0).deriv(1);
            let dvu = f.deriv(1).deriv(0);
            prop_assert!((duv.val() - dvu.val()).abs() < 1e-12);
        }

        #[test]
        fn multiplication_commutes(a in 0.1f64..2.0, b in -1.0f64..1.0) {
            let r = ring2(4);
            let u = Series::seed(&r, 0, a);
            let v = Series::seed(&r, 1, b);
            let f = u.sqrt().add(&v);
            let g = u.mul(&v).add_scalar(0.5);
            let fg = f.mul(&g);
            let gf = g.mul(&f);
            for (x, y) in fg.c.iter().zip(&gf.c) {
                prop_assert!((x - y).abs() < 1e-13);
            }
        }
    }
}
