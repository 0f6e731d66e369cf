//! Candidate blocking sets and the search for family trajectories that avoid
//! them.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::billiard::{Table, Trajectory};
use crate::family::{gamma, FamilyError, FamilyIndex};
use crate::geometry::{Containment, Point};
use crate::qfield::QElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockingError {
    #[error("blocking point {0} coincides with O or A")]
    MarkedPoint(usize),
    #[error("blocking point {0} lies outside the table")]
    Outside(usize),
}

/// Finitely many points, none of them `O` or `A`, all in the closed table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockingSet {
    points: Vec<Point>,
}

impl BlockingSet {
    pub fn new(table: &Table, points: Vec<Point>) -> Result<Self, BlockingError> {
        for (i, p) in points.iter().enumerate() {
            if p == table.origin() || p == table.target() {
                return Err(BlockingError::MarkedPoint(i));
            }
            if table.contains(p) == Containment::Outside {
                return Err(BlockingError::Outside(i));
            }
        }
        Ok(Self { points })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvasionResult {
    pub witness_n: usize,
    pub trajectory: Trajectory,
    pub checked_up_to: usize,
}

/// Every scanned trajectory met the set. `hit_tallies[i]` counts the
/// trajectories through point `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotFoundWithinBudget {
    pub checked_up_to: Option<usize>,
    pub hit_tallies: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evasion {
    Witness(EvasionResult),
    NotFound(NotFoundWithinBudget),
}

impl Evasion {
    pub fn witness(&self) -> Option<&EvasionResult> {
        match self {
            Evasion::Witness(w) => Some(w),
            Evasion::NotFound(_) => None,
        }
    }
}

/// Scans `family` in order and returns the first trajectory that avoids
/// every point of `blockers`.
pub fn evade(table: &Table, family: &[FamilyIndex], blockers: &BlockingSet) -> Result<Evasion, FamilyError> {
    let mut tallies = vec![0usize; blockers.len()];
    let mut checked = None;
    for idx in family {
        let traj = gamma(table, idx)?;
        let mut blocked = false;
        for (tally, b) in tallies.iter_mut().zip(blockers.points()) {
            if traj.passes_through(b) {
                *tally += 1;
                blocked = true;
            }
        }
        checked = Some(idx.n);
        if !blocked {
            return Ok(Evasion::Witness(EvasionResult {
                witness_n: idx.n,
                trajectory: traj,
                checked_up_to: idx.n,
            }));
        }
    }
    Ok(Evasion::NotFound(NotFoundWithinBudget {
        checked_up_to: checked,
        hit_tallies: tallies,
    }))
}

/// `{ n ≤ n_max : γₙ passes through p }`.
pub fn hit_indices(
    table: &Table,
    family: &[FamilyIndex],
    p: &Point,
    n_max: usize,
) -> Result<BTreeSet<usize>, FamilyError> {
    family
        .par_iter()
        .filter(|idx| idx.n <= n_max)
        .map(|idx| Ok(gamma(table, idx)?.passes_through(p).then_some(idx.n)))
        .filter_map(Result::transpose)
        .collect()
}

/// The sign and winding number of `x = ε·y·(p + qα) + 2kα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FoldingWitness {
    pub epsilon: i8,
    pub k: i64,
}

impl FoldingWitness {
    /// Solves for `(ε, k)` at a point of the lower chamber already known to be
    /// on `traj`. `ε` is tried first with the parity of the bounces made
    /// before reaching `p`, then with the opposite sign.
    pub fn solve(traj: &Trajectory, idx: &FamilyIndex, p: &Point) -> Option<Self> {
        let spec = idx.spec();
        if !p.y.is_positive() || p.y > QElement::one(spec) {
            return None;
        }
        let link = traj.links().position(|(a, b)| crate::geometry::on_segment(a, b, p))?;
        // link k starts at polyline vertex k, which is bounce k − 1 for k ≥ 1
        let at_start = link >= 1 && traj.bounces[link - 1].point == *p;
        let before = link - usize::from(at_start);
        let parity: i8 = if before % 2 == 0 { 1 } else { -1 };
        let two_alpha = QElement::from_ints(0, 2, spec);
        let along = &p.y * idx.slope_denominator();
        [parity, -parity].into_iter().find_map(|epsilon| {
            let signed = if epsilon > 0 { along.clone() } else { -&along };
            let k = ((&p.x - signed) / &two_alpha).as_integer()?;
            let k = i64::try_from(k).ok()?;
            Some(FoldingWitness { epsilon, k })
        })
    }

    /// `ε·y·(p + qα) + 2kα`.
    pub fn abscissa(&self, idx: &FamilyIndex, y: &QElement) -> QElement {
        let spec = idx.spec();
        let along = y * idx.slope_denominator();
        let signed = if self.epsilon > 0 { along } else { -along };
        signed + QElement::from_ints(0, 2 * self.k, spec)
    }
}

/// `(ε, k)` for `p` on `γ_idx` with `0 < p.y ≤ 1`, or `None` if `γ_idx`
/// misses `p`.
pub fn folding_witnesses(table: &Table, idx: &FamilyIndex, p: &Point) -> Result<Option<FoldingWitness>, FamilyError> {
    let traj = gamma(table, idx)?;
    if !traj.passes_through(p) {
        return Ok(None);
    }
    Ok(FoldingWitness::solve(&traj, idx, p))
}

/// `size` points drawn from the table's bounding box, with coordinates
/// `r + sα` on a `1/16` grid, kept when strictly inside and distinct from
/// `O` and `A`.
pub fn random_blocking_set<R: Rng + ?Sized>(table: &Table, size: usize, rng: &mut R) -> BlockingSet {
    let spec = table.origin().x.spec().clone();
    let alpha = spec.to_f64();
    let (lo, hi) = table.polygon().vertices().iter().map(Point::to_f64).fold(
        ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN)),
        |((x0, y0), (x1, y1)), (x, y)| ((x0.min(x), y0.min(y)), (x1.max(x), y1.max(y))),
    );
    let coord = |rng: &mut R, lo: f64, hi: f64| {
        let target: f64 = rng.gen_range(lo..hi);
        let s: i64 = rng.gen_range(-4..=4);
        let s = BigRational::new(s.into(), 4.into());
        let s_f = num_traits::ToPrimitive::to_f64(&s).unwrap();
        let r = ((target - s_f * alpha) * 16.0).round() as i64;
        QElement::new(BigRational::new(r.into(), 16.into()), s, &spec)
    };
    let mut points = Vec::with_capacity(size);
    while points.len() < size {
        let p = Point::new(coord(rng, lo.0, hi.0), coord(rng, lo.1, hi.1));
        if table.contains(&p) == Containment::Inside && p != *table.origin() && p != *table.target() {
            points.push(p);
        }
    }
    BlockingSet::new(table, points).expect("points filtered")
}
