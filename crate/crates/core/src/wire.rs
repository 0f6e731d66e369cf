//! JSON encodings.
//!
//! Integers travel as decimal strings so that nothing is truncated; a
//! rational is `["num", "den"]` and a field element `{"r": .., "s": ..}`.
//! Element-bearing documents are decoded against an [`AlphaSpec`], either
//! carried in the document itself (tables) or supplied by the caller.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::billiard::{Bounce, BilliardError, CornerHit, Table, TraceStatus, Trajectory};
use crate::blocking::{BlockingError, BlockingSet, EvasionResult, NotFoundWithinBudget};
use crate::family::GammaReport;
use crate::geometry::{Direction, GeometryError, Point, Polygon};
use crate::qfield::{AlphaSpec, FieldError, QElement};
use crate::unfolding::{Isometry, UnfoldedLine};

#[derive(Debug, Error)]
pub enum WireError {
    #[error("not an integer: {0:?}")]
    BadInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown trajectory status {0:?}")]
    BadStatus(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Billiard(#[from] BilliardError),
    #[error(transparent)]
    Blocking(#[from] BlockingError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalWire(pub String, pub String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QElementWire {
    pub r: RationalWire,
    pub s: RationalWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaWire {
    pub u: RationalWire,
    pub v: RationalWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointWire {
    pub x: QElementWire,
    pub y: QElementWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionWire {
    pub dx: QElementWire,
    pub dy: QElementWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonWire {
    pub vertices: Vec<PointWire>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableWire {
    pub alpha: AlphaWire,
    pub polygon: PolygonWire,
    pub origin: PointWire,
    pub target: PointWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BounceWire {
    pub point: PointWire,
    pub edge: usize,
    pub outgoing: DirectionWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryWire {
    pub start: PointWire,
    pub direction: DirectionWire,
    pub bounces: Vec<BounceWire>,
    pub terminal: PointWire,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerHitWire {
    pub error: String,
    pub at: PointWire,
    pub after_bounces: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryWire {
    pub linear: [[QElementWire; 2]; 2],
    pub translation: [QElementWire; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnfoldedLineWire {
    pub origin: PointWire,
    pub direction: DirectionWire,
    pub copies: Vec<IsometryWire>,
    pub terminal: PointWire,
}

/// Per-index family record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReportWire {
    pub n: usize,
    pub q: u64,
    pub p: u64,
    pub lambda: QElementWire,
    pub lambda_decimal: String,
    pub lower_bounces: usize,
    pub crossing: PointWire,
    pub upper_bounces: usize,
    pub terminal: PointWire,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingSetWire {
    pub points: Vec<PointWire>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvasionResultWire {
    pub witness_n: usize,
    pub checked_up_to: usize,
    pub trajectory: TrajectoryWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitTallyWire {
    pub point: PointWire,
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotFoundWire {
    pub error: String,
    pub checked_up_to: Option<usize>,
    pub hit_tallies: Vec<HitTallyWire>,
}

fn int(s: &str) -> Result<BigInt, WireError> {
    s.trim().parse().map_err(|_| WireError::BadInteger(s.to_owned()))
}

pub fn rational_to_wire(q: &BigRational) -> RationalWire {
    RationalWire(q.numer().to_string(), q.denom().to_string())
}

pub fn rational_from_wire(w: &RationalWire) -> Result<BigRational, WireError> {
    let den = int(&w.1)?;
    if den.is_zero() {
        return Err(WireError::ZeroDenominator);
    }
    Ok(BigRational::new(int(&w.0)?, den))
}

pub fn qel_to_wire(x: &QElement) -> QElementWire {
    QElementWire {
        r: rational_to_wire(&x.r()),
        s: rational_to_wire(&x.s()),
    }
}

pub fn qel_from_wire(w: &QElementWire, spec: &Arc<AlphaSpec>) -> Result<QElement, WireError> {
    Ok(QElement::new(rational_from_wire(&w.r)?, rational_from_wire(&w.s)?, spec))
}

pub fn alpha_to_wire(spec: &AlphaSpec) -> AlphaWire {
    AlphaWire {
        u: rational_to_wire(spec.u()),
        v: rational_to_wire(spec.v()),
    }
}

pub fn alpha_from_wire(w: &AlphaWire) -> Result<Arc<AlphaSpec>, WireError> {
    Ok(AlphaSpec::new(rational_from_wire(&w.u)?, rational_from_wire(&w.v)?)?)
}

pub fn point_to_wire(p: &Point) -> PointWire {
    PointWire {
        x: qel_to_wire(&p.x),
        y: qel_to_wire(&p.y),
    }
}

pub fn point_from_wire(w: &PointWire, spec: &Arc<AlphaSpec>) -> Result<Point, WireError> {
    Ok(Point::new(qel_from_wire(&w.x, spec)?, qel_from_wire(&w.y, spec)?))
}

pub fn direction_to_wire(d: &Direction) -> DirectionWire {
    DirectionWire {
        dx: qel_to_wire(&d.dx),
        dy: qel_to_wire(&d.dy),
    }
}

pub fn direction_from_wire(w: &DirectionWire, spec: &Arc<AlphaSpec>) -> Result<Direction, WireError> {
    Ok(Direction::new(qel_from_wire(&w.dx, spec)?, qel_from_wire(&w.dy, spec)?)?)
}

pub fn polygon_to_wire(poly: &Polygon) -> PolygonWire {
    PolygonWire {
        vertices: poly.vertices().iter().map(point_to_wire).collect(),
    }
}

pub fn polygon_from_wire(w: &PolygonWire, spec: &Arc<AlphaSpec>) -> Result<Polygon, WireError> {
    let vertices = w
        .vertices
        .iter()
        .map(|p| point_from_wire(p, spec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Polygon::new(vertices)?)
}

pub fn table_to_wire(table: &Table) -> TableWire {
    TableWire {
        alpha: alpha_to_wire(table.polygon().spec()),
        polygon: polygon_to_wire(table.polygon()),
        origin: point_to_wire(table.origin()),
        target: point_to_wire(table.target()),
    }
}

/// Rebuilds and revalidates a table; the field comes from the document.
pub fn table_from_wire(w: &TableWire) -> Result<Table, WireError> {
    let spec = alpha_from_wire(&w.alpha)?;
    let polygon = polygon_from_wire(&w.polygon, &spec)?;
    Ok(Table::new(
        polygon,
        point_from_wire(&w.origin, &spec)?,
        point_from_wire(&w.target, &spec)?,
    )?)
}

fn status_name(s: TraceStatus) -> &'static str {
    match s {
        TraceStatus::ReachedTarget => "reached_target",
        TraceStatus::BudgetExhausted => "budget_exhausted",
    }
}

pub fn trajectory_to_wire(t: &Trajectory) -> TrajectoryWire {
    TrajectoryWire {
        start: point_to_wire(&t.start),
        direction: direction_to_wire(&t.initial),
        bounces: t
            .bounces
            .iter()
            .map(|b| BounceWire {
                point: point_to_wire(&b.point),
                edge: b.edge_index,
                outgoing: direction_to_wire(&b.outgoing),
            })
            .collect(),
        terminal: point_to_wire(&t.terminal),
        status: status_name(t.status).to_owned(),
    }
}

pub fn trajectory_from_wire(w: &TrajectoryWire, spec: &Arc<AlphaSpec>) -> Result<Trajectory, WireError> {
    let initial = direction_from_wire(&w.direction, spec)?;
    let mut incoming = initial.clone();
    let mut bounces = Vec::with_capacity(w.bounces.len());
    for b in &w.bounces {
        let outgoing = direction_from_wire(&b.outgoing, spec)?;
        bounces.push(Bounce {
            point: point_from_wire(&b.point, spec)?,
            edge_index: b.edge,
            incoming: std::mem::replace(&mut incoming, outgoing.clone()),
            outgoing,
        });
    }
    let status = match w.status.as_str() {
        "reached_target" => TraceStatus::ReachedTarget,
        "budget_exhausted" => TraceStatus::BudgetExhausted,
        other => return Err(WireError::BadStatus(other.to_owned())),
    };
    Ok(Trajectory {
        start: point_from_wire(&w.start, spec)?,
        initial,
        bounces,
        terminal: point_from_wire(&w.terminal, spec)?,
        status,
    })
}

pub fn corner_hit_to_wire(c: &CornerHit) -> CornerHitWire {
    CornerHitWire {
        error: "corner_hit".to_owned(),
        at: point_to_wire(&c.at),
        after_bounces: c.after_bounces,
    }
}

pub fn isometry_to_wire(m: &Isometry) -> IsometryWire {
    let [[a, b], [c, d]] = &m.linear;
    IsometryWire {
        linear: [[qel_to_wire(a), qel_to_wire(b)], [qel_to_wire(c), qel_to_wire(d)]],
        translation: [qel_to_wire(&m.translation[0]), qel_to_wire(&m.translation[1])],
    }
}

pub fn isometry_from_wire(w: &IsometryWire, spec: &Arc<AlphaSpec>) -> Result<Isometry, WireError> {
    let q = |x: &QElementWire| qel_from_wire(x, spec);
    let [[a, b], [c, d]] = &w.linear;
    Ok(Isometry {
        linear: [[q(a)?, q(b)?], [q(c)?, q(d)?]],
        translation: [q(&w.translation[0])?, q(&w.translation[1])?],
    })
}

pub fn unfolded_to_wire(line: &UnfoldedLine) -> UnfoldedLineWire {
    UnfoldedLineWire {
        origin: point_to_wire(&line.origin),
        direction: direction_to_wire(&line.direction),
        copies: line.copies.iter().map(isometry_to_wire).collect(),
        terminal: point_to_wire(&line.terminal),
    }
}

pub fn unfolded_from_wire(w: &UnfoldedLineWire, spec: &Arc<AlphaSpec>) -> Result<UnfoldedLine, WireError> {
    Ok(UnfoldedLine {
        origin: point_from_wire(&w.origin, spec)?,
        direction: direction_from_wire(&w.direction, spec)?,
        copies: w
            .copies
            .iter()
            .map(|c| isometry_from_wire(c, spec))
            .collect::<Result<_, _>>()?,
        terminal: point_from_wire(&w.terminal, spec)?,
    })
}

pub fn gamma_report_to_wire(r: &GammaReport, digits: usize) -> GammaReportWire {
    GammaReportWire {
        n: r.index.n,
        q: r.index.q,
        p: r.index.p,
        lambda: qel_to_wire(&r.index.lambda),
        lambda_decimal: r.index.lambda.to_decimal(digits),
        lower_bounces: r.lower_bounces,
        crossing: point_to_wire(&r.crossing),
        upper_bounces: r.upper_bounces,
        terminal: point_to_wire(&r.terminal),
        ok: r.ok,
    }
}

pub fn blocking_set_to_wire(b: &BlockingSet) -> BlockingSetWire {
    BlockingSetWire {
        points: b.points().iter().map(point_to_wire).collect(),
    }
}

/// Decodes and validates a blocking set against `table`.
pub fn blocking_set_from_wire(w: &BlockingSetWire, table: &Table) -> Result<BlockingSet, WireError> {
    let spec = table.polygon().spec();
    let points = w
        .points
        .iter()
        .map(|p| point_from_wire(p, spec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockingSet::new(table, points)?)
}

pub fn evasion_to_wire(e: &EvasionResult) -> EvasionResultWire {
    EvasionResultWire {
        witness_n: e.witness_n,
        checked_up_to: e.checked_up_to,
        trajectory: trajectory_to_wire(&e.trajectory),
    }
}

pub fn not_found_to_wire(nf: &NotFoundWithinBudget, blockers: &BlockingSet) -> NotFoundWire {
    NotFoundWire {
        error: "not_found_within_budget".to_owned(),
        checked_up_to: nf.checked_up_to,
        hit_tallies: blockers
            .points()
            .iter()
            .zip(&nf.hit_tallies)
            .map(|(p, &hits)| HitTallyWire {
                point: point_to_wire(p),
                hits,
            })
            .collect(),
    }
}
