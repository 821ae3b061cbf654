//! Deterministic sample-point generation.
//!
//! Every sweep in the crate draws its points from the same seed-free Halton
//! sequence, so two runs with the same request produce bit-identical sample
//! sets (and therefore bit-identical reports). Tangent directions are taken
//! from the unit Euclidean sphere; homogeneity makes the ray scale a free
//! choice, and callers that need the indicatrix normalize by F afterwards.

use crate::catalog::MetricSpec;
use crate::jets::EvalPoint;

const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical-inverse (van der Corput) value of `index` in the given base.
pub fn halton(index: u64, base: u32) -> f64 {
    let b = base as u64;
    let mut i = index;
    let mut f = 1.0;
    let mut out = 0.0;
    while i > 0 {
        f /= b as f64;
        out += f * (i % b) as f64;
        i /= b;
    }
    out
}

fn unit(v: &mut [f64]) -> bool {
    let norm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 0.3 {
        return false;
    }
    for a in v.iter_mut() {
        *a /= norm;
    }
    true
}

fn base_point(spec: &MetricSpec, cursor: u64) -> Option<EvalPoint> {
    let n = spec.dim;
    let r = spec.sample_radius();
    let mut x: Vec<f64> = (0..n)
        .map(|d| r * (2.0 * halton(cursor, BASES[d]) - 1.0))
        .collect();
    if spec.is_x_ball_domain() {
        for v in x.iter_mut() {
            *v /= (n as f64).sqrt();
        }
    }
    let mut y: Vec<f64> = (0..n)
        .map(|d| 2.0 * halton(cursor, BASES[n + d]) - 1.0)
        .collect();
    if !unit(&mut y) {
        return None;
    }
    EvalPoint::new(x, y).ok()
}

/// `count` deterministic in-domain points for the metric. `offset` shifts the
/// sequence so independent sweeps can use disjoint sample sets.
pub fn sample_points(spec: &MetricSpec, count: usize, offset: u64) -> Vec<EvalPoint> {
    let mut out = Vec::with_capacity(count);
    let mut cursor = 17 + offset;
    while out.len() < count {
        if let Some(pt) = base_point(spec, cursor) {
            out.push(pt);
        }
        cursor += 1;
    }
    out
}

/// Sample flags: a base point plus a transverse edge vector drawn from the
/// next block of Halton dimensions. Edges nearly parallel to y are rejected.
pub fn sample_flags(spec: &MetricSpec, count: usize, offset: u64) -> Vec<(EvalPoint, Vec<f64>)> {
    let n = spec.dim;
    let mut out = Vec::with_capacity(count);
    let mut cursor = 17 + offset;
    while out.len() < count {
        let pt = base_point(spec, cursor);
        cursor += 1;
        let Some(pt) = pt else { continue };
        let mut v: Vec<f64> = (0..n)
            .map(|d| 2.0 * halton(cursor - 1, BASES[2 * n + d]) - 1.0)
            .collect();
        if !unit(&mut v) {
            continue;
        }
        // reject edges nearly parallel to the flagpole (Euclidean test is
        // enough as a pre-filter; the flag formula checks the g-denominator)
        let cosang: f64 = v
            .iter()
            .zip(&pt.y)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .abs()
            / pt.y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if cosang > 0.98 {
            continue;
        }
        out.push((pt, v));
    }
    out
}
