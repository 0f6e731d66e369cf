//! The two-chamber table `P_α` and its trajectory family `γₙ`.
//!
//! The table is a `2α`-wide lower chamber `[−α, α] × [1 − L₁, 1]` stacked under
//! a `2`-wide upper chamber `[−1, 1] × [1, 1 + L₂]`, joined through the slit
//! `(−1, 1) × {1}`. `γₙ` leaves `O = (0, 0)` with slope `1/(pₙ + qₙα)`, makes
//! `qₙ` bounces below the slit, crosses it at `x = ±λₙ`, makes `pₙ` bounces
//! above and passes through `A = (0, 2)`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::billiard::{trace, BilliardError, Table, TraceError, TraceStatus, Trajectory, DEFAULT_MAX_BOUNCES};
use crate::geometry::{Direction, GeometryError, Point, Polygon};
use crate::qfield::{AlphaSpec, QElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("invalid approximant (p, q) = ({p}, {q}): {reason}")]
    InvalidIndex { p: u64, q: u64, reason: &'static str },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Billiard(#[from] BilliardError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("trajectory {0} did not reach the target")]
    TargetNotReached(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub alpha: Arc<AlphaSpec>,
    pub l1: BigRational,
    pub l2: BigRational,
}

impl FamilyParams {
    pub fn new(alpha: Arc<AlphaSpec>, l1: BigRational, l2: BigRational) -> Result<Self, FamilyError> {
        let params = Self { alpha, l1, l2 };
        params.validate()?;
        Ok(params)
    }

    /// `α = √2`, `L₁ = L₂ = 2`.
    pub fn standard() -> Self {
        let two = BigRational::from_integer(2.into());
        Self {
            alpha: AlphaSpec::sqrt2(),
            l1: two.clone(),
            l2: two,
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.l1 <= BigRational::one() {
            return Err(FamilyError::InvalidParams(format!("L1 = {} must exceed 1", self.l1)));
        }
        if self.l2 <= BigRational::one() {
            return Err(FamilyError::InvalidParams(format!("L2 = {} must exceed 1", self.l2)));
        }
        let alpha = QElement::alpha(&self.alpha);
        if !(alpha - QElement::one(&self.alpha)).is_positive() {
            return Err(FamilyError::InvalidParams("alpha must exceed 1".into()));
        }
        Ok(())
    }

    fn el(&self, q: &BigRational) -> QElement {
        QElement::from_rational(q.clone(), &self.alpha)
    }
}

/// Builds `P_α` with `O = (0, 0)` and `A = (0, 2)`.
pub fn build_polygon(params: &FamilyParams) -> Result<Table, FamilyError> {
    params.validate()?;
    let f = &params.alpha;
    let alpha = QElement::alpha(f);
    let one = QElement::one(f);
    let bottom = &one - params.el(&params.l1);
    let top = &one + params.el(&params.l2);
    let p = |x: &QElement, y: &QElement| Point::new(x.clone(), y.clone());
    let vertices = vec![
        p(&-&alpha, &bottom),
        p(&alpha, &bottom),
        p(&alpha, &one),
        p(&one, &one),
        p(&one, &top),
        p(&-&one, &top),
        p(&-&one, &one),
        p(&-&alpha, &one),
    ];
    let polygon = Polygon::new(vertices)?;
    Ok(Table::new(polygon, Point::from_ints(0, 0, f), Point::from_ints(0, 2, f))?)
}

/// One approximant `(pₙ, qₙ)` with defect `λₙ = pₙ − qₙα`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyIndex {
    pub n: usize,
    pub q: u64,
    pub p: u64,
    pub lambda: QElement,
}

impl FamilyIndex {
    /// Any pair with `0 < |p − qα| < 1`.
    pub fn new(n: usize, p: u64, q: u64, spec: &Arc<AlphaSpec>) -> Result<Self, FamilyError> {
        if q == 0 {
            return Err(FamilyError::InvalidIndex { p, q, reason: "q must be positive" });
        }
        let lambda = QElement::from_int(p, spec) - QElement::from_ints(0, q as i64, spec);
        if lambda.is_zero() {
            return Err(FamilyError::InvalidIndex { p, q, reason: "p - q*alpha is zero" });
        }
        if !(QElement::one(spec) - lambda.abs()).is_positive() {
            return Err(FamilyError::InvalidIndex { p, q, reason: "|p - q*alpha| must be below 1" });
        }
        Ok(Self { n, q, p, lambda })
    }

    /// A record taken as given, without the approximation checks; for
    /// building deliberately degenerate directions.
    pub fn unchecked(n: usize, p: u64, q: u64, lambda: QElement) -> Self {
        Self { n, q, p, lambda }
    }

    pub fn spec(&self) -> &Arc<AlphaSpec> {
        self.lambda.spec()
    }

    /// Horizontal run per unit rise, `2qα + λ` (equal to `p + qα` for a
    /// consistent record).
    pub fn run(&self) -> QElement {
        let f = self.spec();
        QElement::from_ints(0, 2 * self.q as i64, f) + &self.lambda
    }

    /// `p + qα`.
    pub fn slope_denominator(&self) -> QElement {
        QElement::from_ints(self.p as i64, self.q as i64, self.spec())
    }

    pub fn direction(&self) -> Direction {
        Direction::new(self.run(), QElement::one(self.spec())).expect("dy = 1")
    }
}

/// `qₙ = n + 1`, `pₙ = ⌊qₙα⌋` for `n = 0..=n_max`.
pub fn approximants(params: &FamilyParams, n_max: usize) -> Vec<FamilyIndex> {
    let f = &params.alpha;
    (0..=n_max)
        .map(|n| {
            let q = n as u64 + 1;
            let p = QElement::from_ints(0, q as i64, f)
                .floor()
                .to_u64()
                .expect("q*alpha fits in u64");
            FamilyIndex::new(n, p, q, f).expect("floor approximant satisfies the bounds")
        })
        .collect()
}

/// Traces `γₙ` from `O` to `A`.
pub fn gamma(table: &Table, idx: &FamilyIndex) -> Result<Trajectory, FamilyError> {
    let traj = trace(table, table.origin(), &idx.direction(), DEFAULT_MAX_BOUNCES)?;
    if traj.status != TraceStatus::ReachedTarget {
        return Err(FamilyError::TargetNotReached(idx.n));
    }
    Ok(traj)
}

/// Bounce counts on either side of the slit height `y = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlitSplit {
    pub lower_bounces: usize,
    pub crossing: Point,
    pub upper_bounces: usize,
    pub terminal: Point,
}

pub fn split_at_slit(traj: &Trajectory) -> Result<SlitSplit, FamilyError> {
    let one = QElement::one(traj.start.x.spec());
    let (lower_bounces, upper_bounces) = traj.bounce_counts_split(&one)?;
    let crossing = traj.crossing_at_height(&one).remove(0);
    Ok(SlitSplit {
        lower_bounces,
        crossing,
        upper_bounces,
        terminal: traj.terminal.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaReport {
    pub index: FamilyIndex,
    pub lower_bounces: usize,
    pub crossing: Point,
    pub upper_bounces: usize,
    pub terminal: Point,
    pub ok: bool,
}

impl GammaReport {
    pub fn from_split(table: &Table, index: FamilyIndex, split: SlitSplit) -> Self {
        let one = QElement::one(index.spec());
        let ok = split.lower_bounces as u64 == index.q
            && split.crossing.x.abs() == index.lambda.abs()
            && split.crossing.y == one
            && split.upper_bounces as u64 == index.p
            && split.terminal == *table.target();
        Self {
            index,
            lower_bounces: split.lower_bounces,
            crossing: split.crossing,
            upper_bounces: split.upper_bounces,
            terminal: split.terminal,
            ok,
        }
    }
}

/// Traces `γₙ` and checks it against `(qₙ, λₙ, pₙ)`.
pub fn verify_gamma(table: &Table, idx: &FamilyIndex) -> Result<GammaReport, FamilyError> {
    let traj = gamma(table, idx)?;
    let split = split_at_slit(&traj)?;
    Ok(GammaReport::from_split(table, idx.clone(), split))
}

/// [`verify_gamma`] over a whole family, in parallel on the current rayon
/// pool. Results keep the input order.
pub fn verify_family(table: &Table, family: &[FamilyIndex]) -> Vec<Result<GammaReport, FamilyError>> {
    family.par_iter().map(|idx| verify_gamma(table, idx)).collect()
}
