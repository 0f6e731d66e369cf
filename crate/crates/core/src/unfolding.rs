//! Unfolding: a folded billiard path becomes a straight line across mirrored
//! copies of the table, and back.

use std::sync::Arc;

use crate::billiard::{Bounce, CornerHit, Table, TraceError, TraceStatus, Trajectory};
use crate::geometry::{orient, reflect_direction, Containment, Direction, Point};
use crate::qfield::{AlphaSpec, QElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    Identity,
    Composed,
}

/// `x ↦ L·x + t` with `L` orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    pub linear: [[QElement; 2]; 2],
    pub translation: [QElement; 2],
}

impl Isometry {
    pub fn identity(spec: &Arc<AlphaSpec>) -> Self {
        let z = || QElement::zero(spec);
        let o = || QElement::one(spec);
        Self {
            linear: [[o(), z()], [z(), o()]],
            translation: [z(), z()],
        }
    }

    /// Mirror in the line through `at` along `w`.
    pub fn reflection(at: &Point, w: &Direction) -> Self {
        let n = w.norm_sq();
        let diag = (&w.dx * &w.dx - &w.dy * &w.dy) / &n;
        let off = (&w.dx * &w.dy + &w.dx * &w.dy) / &n;
        let linear = [[diag.clone(), off.clone()], [off, -diag]];
        let mut iso = Self {
            linear,
            translation: [QElement::zero(at.x.spec()), QElement::zero(at.x.spec())],
        };
        let image = iso.apply_point(at);
        iso.translation = [&at.x - image.x, &at.y - image.y];
        iso
    }

    pub fn kind(&self) -> IsometryKind {
        if *self == Self::identity(self.linear[0][0].spec()) {
            IsometryKind::Identity
        } else {
            IsometryKind::Composed
        }
    }

    fn mat_vec(&self, x: &QElement, y: &QElement) -> (QElement, QElement) {
        let [[a, b], [c, d]] = &self.linear;
        (a * x + b * y, c * x + d * y)
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let (x, y) = self.mat_vec(&p.x, &p.y);
        Point::new(x + &self.translation[0], y + &self.translation[1])
    }

    pub fn apply_vector(&self, d: &Direction) -> Direction {
        let (dx, dy) = self.mat_vec(&d.dx, &d.dy);
        Direction { dx, dy }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let [[a, b], [c, d]] = &self.linear;
        let [[e, f], [g, h]] = &other.linear;
        let linear = [[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]];
        let (tx, ty) = self.mat_vec(&other.translation[0], &other.translation[1]);
        Isometry {
            linear,
            translation: [tx + &self.translation[0], ty + &self.translation[1]],
        }
    }

    pub fn determinant(&self) -> QElement {
        let [[a, b], [c, d]] = &self.linear;
        a * d - b * c
    }

    /// Exact inverse via the adjugate.
    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = &self.linear;
        let det = self.determinant();
        let linear = [[d / &det, -(b / &det)], [-(c / &det), a / &det]];
        let mut inv = Isometry {
            linear,
            translation: self.translation.clone(),
        };
        let (tx, ty) = inv.mat_vec(&self.translation[0], &self.translation[1]);
        inv.translation = [-tx, -ty];
        inv
    }

    /// `LᵀL = I`.
    pub fn is_orthogonal(&self) -> bool {
        let [[a, b], [c, d]] = &self.linear;
        let spec = a.spec();
        a * a + c * c == QElement::one(spec) && b * b + d * d == QElement::one(spec) && (a * b + c * d).is_zero()
    }
}

/// A trajectory drawn straight through reflected table copies.
///
/// `copies[k]` maps the folded frame of link `k` (the part of the path after
/// `k` bounces) into the unfolded plane; `copies[0]` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldedLine {
    pub origin: Point,
    pub direction: Direction,
    pub copies: Vec<Isometry>,
    pub terminal: Point,
}

impl UnfoldedLine {
    /// Unfolded images of the polyline vertices: origin, bounces, terminal.
    pub fn vertices(&self, traj: &Trajectory) -> Vec<Point> {
        let mut out = vec![self.origin.clone()];
        for (k, b) in traj.bounces.iter().enumerate() {
            out.push(self.copies[k].apply_point(&b.point));
        }
        out.push(self.terminal.clone());
        out
    }

    /// Unfolded displacement `terminal − origin`.
    pub fn run(&self) -> (QElement, QElement) {
        self.origin.to(&self.terminal)
    }
}

/// Cumulative reflections along `traj`.
pub fn unfold(traj: &Trajectory) -> UnfoldedLine {
    let spec = traj.start.x.spec();
    let mut copies = vec![Isometry::identity(spec)];
    for b in &traj.bounces {
        // the mirror line is the wall: through the bounce point, along the
        // bisector of incoming and outgoing
        let wall = mirror_axis(b);
        let step = Isometry::reflection(&b.point, &wall);
        let next = copies.last().expect("nonempty").compose(&step);
        copies.push(next);
    }
    let terminal = copies.last().expect("nonempty").apply_point(&traj.terminal);
    UnfoldedLine {
        origin: traj.start.clone(),
        direction: traj.initial.clone(),
        copies,
        terminal,
    }
}

// The wall direction recovered from the bounce: in + out is parallel to the
// wall (they have equal length), unless the hit is head-on, where the wall is
// perpendicular to in.
fn mirror_axis(b: &Bounce) -> Direction {
    let sum = Direction {
        dx: &b.incoming.dx + &b.outgoing.dx,
        dy: &b.incoming.dy + &b.outgoing.dy,
    };
    if sum.dx.is_zero() && sum.dy.is_zero() {
        Direction {
            dx: -&b.incoming.dy,
            dy: b.incoming.dx.clone(),
        }
    } else {
        sum
    }
}

/// Folds the straight segment from `origin` along `d`, of vertical extent
/// `rise`, back into the table.
///
/// Works entirely in the unfolded plane: the line stays fixed and each table
/// copy is mapped forward, so it shares no stepping logic with
/// [`crate::billiard::trace`]. A wall reached exactly at the end of the
/// segment still counts as a bounce. The status is `ReachedTarget` when the
/// folded end point is the table's target.
pub fn fold(table: &Table, origin: &Point, d: &Direction, rise: &QElement) -> Result<Trajectory, TraceError> {
    if !d.dy.is_positive() || !rise.is_positive() {
        return Err(TraceError::DirectionOutward);
    }
    if table.contains(origin) == Containment::Outside {
        return Err(TraceError::StartOutside);
    }
    let spec = origin.x.spec();
    let t_end = rise / &d.dy;
    let mut t_now = QElement::zero(spec);
    let mut frame = Isometry::identity(spec);
    let mut frame_inv = Isometry::identity(spec);
    let mut excluded: Option<usize> = table.edges().iter().position(|e| e.contains(origin));
    let mut bounces: Vec<Bounce> = Vec::new();
    let at = |t: &QElement| Point::new(&origin.x + t * &d.dx, &origin.y + t * &d.dy);
    // side of the line: cross(d, p − origin)
    let side = |p: &Point| {
        let (px, py) = origin.to(p);
        (&d.dx * &py - &d.dy * &px).sign()
    };

    loop {
        let images: Vec<Point> = table.polygon().vertices().iter().map(|v| frame.apply_point(v)).collect();
        let n = images.len();
        let sides: Vec<i8> = images.iter().map(side).collect();
        // (t, edge, lands on a vertex)
        let mut best: Option<(QElement, usize, bool)> = None;
        let mut tie = false;
        for i in 0..n {
            if excluded == Some(i) {
                continue;
            }
            let j = (i + 1) % n;
            let (sa, sb) = (sides[i], sides[j]);
            if sa * sb > 0 {
                continue;
            }
            let (a, b) = (&images[i], &images[j]);
            let candidate = if sa == 0 && sb == 0 {
                // along the line: the nearer endpoint ahead
                let dd = d.norm_sq();
                let param = |p: &Point| {
                    let (px, py) = origin.to(p);
                    (&d.dx * &px + &d.dy * &py) / &dd
                };
                let (ta, tb) = (param(a), param(b));
                [ta, tb].into_iter().filter(|t| *t > t_now).min_by(|x, y| x.partial_cmp(y).unwrap()).map(|t| (t, true))
            } else {
                let (ex, ey) = a.to(b);
                let (ax, ay) = origin.to(a);
                let t = (&ax * &ey - &ay * &ex) / (&d.dx * &ey - &d.dy * &ex);
                (t > t_now).then_some((t, sa == 0 || sb == 0))
            };
            let Some((t, vertex)) = candidate else { continue };
            match &best {
                Some((bt, _, _)) if t > *bt => {}
                Some((bt, _, _)) if t == *bt => tie = true,
                _ => {
                    best = Some((t, i, vertex));
                    tie = false;
                }
            }
        }

        let finish = |bounces: Vec<Bounce>, terminal: Point| {
            let status = if terminal == *table.target() {
                TraceStatus::ReachedTarget
            } else {
                TraceStatus::BudgetExhausted
            };
            Trajectory {
                start: origin.clone(),
                initial: d.clone(),
                bounces,
                terminal,
                status,
            }
        };
        let Some((t, edge_index, vertex)) = best else {
            return Err(TraceError::DirectionOutward);
        };
        if t > t_end {
            return Ok(finish(bounces, frame_inv.apply_point(&at(&t_end))));
        }
        if tie || vertex {
            return Err(TraceError::Corner(CornerHit {
                at: frame_inv.apply_point(&at(&t)),
                after_bounces: bounces.len(),
            }));
        }
        let point = frame_inv.apply_point(&at(&t));
        let wall = table.edges()[edge_index].direction();
        let incoming = frame_inv.apply_vector(d);
        let outgoing = reflect_direction(&incoming, &wall);
        bounces.push(Bounce {
            point: point.clone(),
            edge_index,
            incoming,
            outgoing,
        });
        if t == t_end {
            return Ok(finish(bounces, point));
        }
        let mirror = Isometry::reflection(&point, &wall);
        frame = frame.compose(&mirror);
        frame_inv = frame.inverse();
        t_now = t;
        excluded = Some(edge_index);
    }
}

/// Candidate folded x-coordinates at height `y` in the lower chamber.
///
/// The unfolded abscissa `y·(p + qα)` is reduced modulo `2α` into `[−α, α)`;
/// after an even number of wall hits the folded coordinate is that residue,
/// after an odd number its negative. Returns `(x_even, x_odd)`.
pub fn corridor_position(y: &QElement, p: i64, q: i64, lambda: &QElement) -> (QElement, QElement) {
    let spec = y.spec();
    let alpha = QElement::alpha(spec);
    let two_alpha = &alpha + &alpha;
    let unfolded = y * QElement::from_ints(p, q, spec);
    let k = ((&unfolded + &alpha) / &two_alpha).floor();
    let residue = unfolded - QElement::from_int(k, spec) * two_alpha;
    // at the slit, p + qα = 2qα + λ reduces to λ itself
    if *y == QElement::one(spec) && lambda.abs() < alpha {
        debug_assert_eq!(residue, *lambda);
    }
    (residue.clone(), -residue)
}

/// Whether every unfolded vertex lies exactly on the unfolded line.
pub fn is_collinear(line: &UnfoldedLine, traj: &Trajectory) -> bool {
    let far = line.origin.offset(&line.direction, &QElement::one(line.origin.x.spec()));
    line.vertices(traj).iter().all(|v| orient(&line.origin, &far, v) == 0)
}
