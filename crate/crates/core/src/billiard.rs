//! Exact billiard tracer on polygonal tables.

use thiserror::Error;

use crate::geometry::{
    on_segment, orient, ray_hit, reflect_direction, Containment, Direction, HitClass, Point,
    Polygon, RayHit, Segment,
};
use crate::qfield::QElement;

/// Safety net for [`trace`]; the family never comes close.
pub const DEFAULT_MAX_BOUNCES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BilliardError {
    #[error("marked point {0} lies outside the table")]
    PointOutsideTable(&'static str),
    #[error("origin and target coincide")]
    CoincidentMarkedPoints,
    #[error("expected exactly one crossing of the height, found {0}")]
    AmbiguousCrossing(usize),
}

/// A trajectory that runs into a vertex, or reaches two walls at once.
/// Reflection is undefined there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerHit {
    pub at: Point,
    pub after_bounces: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trajectory hits a corner at ({}, {}) after {} bounces", .0.at.x, .0.at.y, .0.after_bounces)]
    Corner(CornerHit),
    #[error("direction leaves the table from the start point")]
    DirectionOutward,
    #[error("start point lies outside the table")]
    StartOutside,
}

impl TraceError {
    pub fn corner(&self) -> Option<&CornerHit> {
        match self {
            TraceError::Corner(c) => Some(c),
            _ => None,
        }
    }
}

/// A polygon with the two marked points `O` and `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    polygon: Polygon,
    origin: Point,
    target: Point,
    edges: Vec<Segment>,
}

pub fn build_table(poly: Polygon, origin: Point, target: Point) -> Result<Table, BilliardError> {
    Table::new(poly, origin, target)
}

impl Table {
    pub fn new(polygon: Polygon, origin: Point, target: Point) -> Result<Self, BilliardError> {
        if polygon.contains(&origin) == Containment::Outside {
            return Err(BilliardError::PointOutsideTable("O"));
        }
        if polygon.contains(&target) == Containment::Outside {
            return Err(BilliardError::PointOutsideTable("A"));
        }
        if origin == target {
            return Err(BilliardError::CoincidentMarkedPoints);
        }
        let edges = polygon.edges().collect();
        Ok(Self {
            polygon,
            origin,
            target,
            edges,
        })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn origin(&self) -> &Point {
        &self.origin
    }

    pub fn target(&self) -> &Point {
        &self.target
    }

    pub fn edges(&self) -> &[Segment] {
        &self.edges
    }

    pub fn contains(&self, p: &Point) -> Containment {
        self.polygon.contains(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounce {
    pub point: Point,
    pub edge_index: usize,
    pub incoming: Direction,
    pub outgoing: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceStatus {
    ReachedTarget,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub start: Point,
    pub initial: Direction,
    pub bounces: Vec<Bounce>,
    pub terminal: Point,
    pub status: TraceStatus,
}

impl Trajectory {
    /// Polyline vertices: start, every bounce point, terminal.
    pub fn points(&self) -> impl Iterator<Item = &Point> + '_ {
        std::iter::once(&self.start)
            .chain(self.bounces.iter().map(|b| &b.point))
            .chain(std::iter::once(&self.terminal))
    }

    pub fn vertex_count(&self) -> usize {
        self.bounces.len() + 2
    }

    /// Consecutive `(from, to)` pairs of the polyline.
    pub fn links(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        self.points().zip(self.points().skip(1))
    }

    /// Whether `p` lies on any closed link of the chain.
    pub fn passes_through(&self, p: &Point) -> bool {
        self.links().any(|(a, b)| on_segment(a, b, p))
    }

    /// Points of the chain at height `y0`, in path order, each paired with
    /// the index of the link it was found on.
    fn crossings(&self, y0: &QElement) -> Vec<(usize, Point)> {
        let mut out: Vec<(usize, Point)> = Vec::new();
        let mut push = |i: usize, p: Point| {
            if out.last().map_or(true, |(_, last)| *last != p) {
                out.push((i, p));
            }
        };
        for (i, (a, b)) in self.links().enumerate() {
            let sa = (&a.y - y0).sign();
            let sb = (&b.y - y0).sign();
            if sa == 0 {
                push(i, a.clone());
            }
            if sa * sb < 0 {
                let x = &a.x + (y0 - &a.y) * (&b.x - &a.x) / (&b.y - &a.y);
                push(i, Point::new(x, y0.clone()));
            }
            if sb == 0 {
                push(i, b.clone());
            }
        }
        out
    }

    pub fn crossing_at_height(&self, y0: &QElement) -> Vec<Point> {
        self.crossings(y0).into_iter().map(|(_, p)| p).collect()
    }

    /// Bounce counts strictly before and strictly after the unique crossing
    /// of height `y0`.
    pub fn bounce_counts_split(&self, y0: &QElement) -> Result<(usize, usize), BilliardError> {
        let crossings = self.crossings(y0);
        if crossings.len() != 1 {
            return Err(BilliardError::AmbiguousCrossing(crossings.len()));
        }
        let (link, at) = &crossings[0];
        // Link i joins polyline vertex i to vertex i + 1; vertex k ≥ 1 is
        // bounce k − 1.
        let total = self.bounces.len();
        let at_bounce = |vertex: usize| vertex >= 1 && vertex <= total && self.bounces[vertex - 1].point == *at;
        let below = link - usize::from(at_bounce(*link));
        let above = total - link - usize::from(at_bounce(link + 1));
        Ok((below, above))
    }
}

pub fn passes_through(traj: &Trajectory, p: &Point) -> bool {
    traj.passes_through(p)
}

pub fn crossing_at_height(traj: &Trajectory, y0: &QElement) -> Vec<Point> {
    traj.crossing_at_height(y0)
}

pub fn bounce_counts_split(traj: &Trajectory, y0: &QElement) -> Result<(usize, usize), BilliardError> {
    traj.bounce_counts_split(y0)
}

/// Edges containing a boundary start point, after checking that `d` points
/// strictly into the table.
fn departed_edges(table: &Table, start: &Point, d: &Direction) -> Result<Vec<usize>, TraceError> {
    let n = table.edges.len();
    let on: Vec<usize> = (0..n).filter(|&i| table.edges[i].contains(start)).collect();
    let left_of = |i: usize| table.edges[i].direction().cross(d).is_positive();
    let inward = match on.as_slice() {
        [i] => left_of(*i),
        [i, j] => {
            // vertex: edge `into` ends at the start point, `out` leaves it
            let (into, out) = if table.edges[*i].b == *start { (*i, *j) } else { (*j, *i) };
            let v = &table.edges[out].a;
            let convex = orient(&table.edges[into].a, v, &table.edges[out].b) > 0;
            if convex {
                left_of(into) && left_of(out)
            } else {
                left_of(into) || left_of(out)
            }
        }
        _ => false,
    };
    if inward {
        Ok(on)
    } else {
        Err(TraceError::DirectionOutward)
    }
}

/// Follows the billiard flow from `start` in direction `d`.
///
/// Stops at the first exact passage through the table's target, or once
/// `max_bounces` reflections have been made. Any vertex hit, or a tie between
/// two walls, ends the trace with [`TraceError::Corner`].
pub fn trace(table: &Table, start: &Point, d: &Direction, max_bounces: usize) -> Result<Trajectory, TraceError> {
    let mut excluded = match table.contains(start) {
        Containment::Outside => return Err(TraceError::StartOutside),
        Containment::Inside => Vec::new(),
        Containment::Boundary => departed_edges(table, start, d)?,
    };
    let mut pos = start.clone();
    let mut dir = d.clone();
    let mut bounces: Vec<Bounce> = Vec::new();
    let finish = |bounces, terminal, status| Trajectory {
        start: start.clone(),
        initial: d.clone(),
        bounces,
        terminal,
        status,
    };

    loop {
        if bounces.len() >= max_bounces {
            return Ok(finish(bounces, pos, TraceStatus::BudgetExhausted));
        }
        let mut nearest: Option<(usize, RayHit)> = None;
        let mut tie = false;
        for (i, edge) in table.edges.iter().enumerate() {
            if excluded.contains(&i) {
                continue;
            }
            let Some(hit) = ray_hit(&pos, &dir, edge) else { continue };
            match &nearest {
                Some((_, best)) if hit.t > best.t => {}
                Some((_, best)) if hit.t == best.t => tie = true,
                _ => {
                    nearest = Some((i, hit));
                    tie = false;
                }
            }
        }
        let Some((edge_index, hit)) = nearest else {
            return Err(TraceError::DirectionOutward);
        };
        if table.target != pos && on_segment(&pos, &hit.point, &table.target) {
            return Ok(finish(bounces, table.target.clone(), TraceStatus::ReachedTarget));
        }
        if tie || hit.class == HitClass::Endpoint {
            return Err(TraceError::Corner(CornerHit {
                at: hit.point,
                after_bounces: bounces.len(),
            }));
        }
        let outgoing = reflect_direction(&dir, &table.edges[edge_index].direction());
        bounces.push(Bounce {
            point: hit.point.clone(),
            edge_index,
            incoming: dir,
            outgoing: outgoing.clone(),
        });
        pos = hit.point;
        dir = outgoing;
        excluded.clear();
        excluded.push(edge_index);
    }
}
