#![allow(dead_code)]

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use billiards_core::family::{approximants, build_polygon};
use billiards_core::{AlphaSpec, FamilyIndex, FamilyParams, Point, QElement, Table};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub const SNAP: f64 = 1e-9;

pub fn sqrt2() -> Arc<AlphaSpec> {
    AlphaSpec::sqrt2()
}

pub fn standard_table() -> Table {
    build_polygon(&FamilyParams::standard()).unwrap()
}

pub fn family(n_max: usize) -> Vec<FamilyIndex> {
    approximants(&FamilyParams::standard(), n_max)
}

/// `r + s·√2` with integer parts.
pub fn q(r: i64, s: i64) -> QElement {
    QElement::from_ints(r, s, &sqrt2())
}

pub fn pt(x: QElement, y: QElement) -> Point {
    Point::new(x, y)
}

/// Hard-coded outline of the standard table in doubles, counterclockwise.
pub fn float_outline() -> Vec<(f64, f64)> {
    let a = SQRT_2;
    vec![
        (-a, -1.0),
        (a, -1.0),
        (a, 1.0),
        (1.0, 1.0),
        (1.0, 3.0),
        (-1.0, 3.0),
        (-1.0, 1.0),
        (-a, 1.0),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum FloatOutcome {
    /// Bounce points in order, then the terminal.
    Reached(Vec<(f64, f64)>),
    Corner((f64, f64)),
    Budget(Vec<(f64, f64)>),
}

fn dist_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (ex, ey) = (b.0 - a.0, b.1 - a.1);
    let len2 = ex * ex + ey * ey;
    let t = (((p.0 - a.0) * ex + (p.1 - a.1) * ey) / len2).clamp(0.0, 1.0);
    let (cx, cy) = (a.0 + t * ex, a.1 + t * ey);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Straight-line billiard in doubles: nearest wall, reflect, repeat. A hit
/// within [`SNAP`] of a vertex is a corner.
pub fn float_trace(start: (f64, f64), dir: (f64, f64), target: (f64, f64), max_bounces: usize) -> FloatOutcome {
    let poly = float_outline();
    let n = poly.len();
    let (mut px, mut py) = start;
    let norm = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
    let (mut dx, mut dy) = (dir.0 / norm, dir.1 / norm);
    let mut last_edge: Option<usize> = None;
    let mut bounces = Vec::new();
    loop {
        let mut best: Option<(f64, usize)> = None;
        for i in 0..n {
            if Some(i) == last_edge {
                continue;
            }
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let (ex, ey) = (b.0 - a.0, b.1 - a.1);
            let den = dx * ey - dy * ex;
            if den.abs() < 1e-15 {
                continue;
            }
            let (ax, ay) = (a.0 - px, a.1 - py);
            let t = (ax * ey - ay * ex) / den;
            let s = (ax * dy - ay * dx) / den;
            if t > SNAP && (-SNAP..=1.0 + SNAP).contains(&s) && best.map_or(true, |(bt, _)| t < bt) {
                best = Some((t, i));
            }
        }
        let (t, edge) = best.expect("a bounded table always has a wall ahead");
        let hit = (px + t * dx, py + t * dy);
        if dist_to_segment(target, (px, py), hit) < SNAP {
            bounces.push(target);
            return FloatOutcome::Reached(bounces);
        }
        if poly.iter().any(|v| (v.0 - hit.0).hypot(v.1 - hit.1) < SNAP) {
            return FloatOutcome::Corner(hit);
        }
        if bounces.len() == max_bounces {
            return FloatOutcome::Budget(bounces);
        }
        let a = poly[edge];
        let b = poly[(edge + 1) % n];
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        let el = (ex * ex + ey * ey).sqrt();
        let (wx, wy) = (ex / el, ey / el);
        let dot = dx * wx + dy * wy;
        dx = 2.0 * dot * wx - dx;
        dy = 2.0 * dot * wy - dy;
        px = hit.0;
        py = hit.1;
        bounces.push(hit);
        last_edge = Some(edge);
    }
}

/// `(lower, upper)` bounce counts of the float path for `(p, q)`.
pub fn float_gamma_counts(p: u64, q: u64) -> Option<(usize, usize)> {
    let dir = (p as f64 + q as f64 * SQRT_2, 1.0);
    match float_trace((0.0, 0.0), dir, (0.0, 2.0), 10_000) {
        FloatOutcome::Reached(pts) => {
            let bounces = &pts[..pts.len() - 1];
            let lower = bounces.iter().filter(|b| b.1 < 1.0 - SNAP).count();
            Some((lower, bounces.len() - lower))
        }
        _ => None,
    }
}

/// Smallest distance from `p` to the float path for `(p, q)`.
pub fn float_gamma_distance(pq: (u64, u64), p: (f64, f64)) -> f64 {
    let dir = (pq.0 as f64 + pq.1 as f64 * SQRT_2, 1.0);
    let FloatOutcome::Reached(pts) = float_trace((0.0, 0.0), dir, (0.0, 2.0), 10_000) else {
        return f64::NAN;
    };
    let mut prev = (0.0, 0.0);
    let mut best = f64::INFINITY;
    for v in pts {
        best = best.min(dist_to_segment(p, prev, v));
        prev = v;
    }
    best
}

/// `x · 10^50` truncated toward −∞ using an integer square root of
/// `2·10^100`, together with an error bound in the same units.
pub fn oracle_scaled(x: &QElement) -> (BigInt, BigInt) {
    let scale = BigInt::from(10u32).pow(50);
    let root = (BigInt::from(2) * &scale * &scale).sqrt();
    let (r, s) = (x.r(), x.s());
    let den = r.denom() * s.denom();
    let num = r.numer() * s.denom() * &scale + s.numer() * r.denom() * &root;
    let approx = num.div_floor(&den);
    // truncating the root costs at most |s| units; floor costs one more
    let slack = s.abs().ceil().to_integer() + 2;
    (approx, slack)
}

pub fn oracle_sign(x: &QElement) -> Option<i8> {
    if x.s().is_zero() {
        return Some(x.r().signum().to_integer().try_into().unwrap());
    }
    let (v, slack) = oracle_scaled(x);
    if v.abs() <= slack {
        None
    } else if v.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

pub fn oracle_floor(x: &QElement) -> Option<BigInt> {
    if x.s().is_zero() {
        return Some(x.r().floor().to_integer());
    }
    let scale = BigInt::from(10u32).pow(50);
    let (v, slack) = oracle_scaled(x);
    let (f, rem) = v.div_mod_floor(&scale);
    (rem > slack && &scale - &rem > slack).then_some(f)
}
