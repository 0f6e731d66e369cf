//! Exact planar primitives over `ℚ(α)`.

use std::sync::Arc;

use thiserror::Error;

use crate::qfield::{AlphaSpec, QElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("vertices around index {0} are collinear")]
    CollinearVertices(usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
    #[error("vertices are not in counterclockwise order")]
    Clockwise,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("degenerate segment")]
    DegenerateSegment,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: QElement,
    pub y: QElement,
}

impl Point {
    pub fn new(x: QElement, y: QElement) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64, spec: &Arc<AlphaSpec>) -> Self {
        Self::new(QElement::from_int(x, spec), QElement::from_int(y, spec))
    }

    pub fn origin(spec: &Arc<AlphaSpec>) -> Self {
        Self::from_ints(0, 0, spec)
    }

    pub fn offset(&self, d: &Direction, t: &QElement) -> Point {
        Point::new(&self.x + t * &d.dx, &self.y + t * &d.dy)
    }

    /// Vector `other − self`.
    pub fn to(&self, other: &Point) -> (QElement, QElement) {
        (&other.x - &self.x, &other.y - &self.y)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// A nonzero direction vector. Never normalized: unit vectors would leave
/// the field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Direction {
    pub dx: QElement,
    pub dy: QElement,
}

impl Direction {
    pub fn new(dx: QElement, dy: QElement) -> Result<Self, GeometryError> {
        if dx.is_zero() && dy.is_zero() {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Self { dx, dy })
    }

    pub fn between(a: &Point, b: &Point) -> Result<Self, GeometryError> {
        let (dx, dy) = a.to(b);
        Self::new(dx, dy)
    }

    pub fn dot(&self, other: &Direction) -> QElement {
        &self.dx * &other.dx + &self.dy * &other.dy
    }

    pub fn cross(&self, other: &Direction) -> QElement {
        &self.dx * &other.dy - &self.dy * &other.dx
    }

    pub fn norm_sq(&self) -> QElement {
        self.dot(self)
    }

    pub fn neg(&self) -> Direction {
        Direction {
            dx: -&self.dx,
            dy: -&self.dy,
        }
    }

    pub fn scale(&self, k: &QElement) -> Result<Direction, GeometryError> {
        Direction::new(&self.dx * k, &self.dy * k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { a, b })
    }

    pub fn direction(&self) -> Direction {
        let (dx, dy) = self.a.to(&self.b);
        Direction { dx, dy }
    }

    /// Whether `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        on_segment(&self.a, &self.b, p)
    }
}

/// Whether `p` lies on the closed segment `[a, b]` (a point if `a == b`).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if a == b {
        return p == a;
    }
    if orient(a, b, p) != 0 {
        return false;
    }
    let (ux, uy) = a.to(b);
    let (wx, wy) = a.to(p);
    let along = &ux * &wx + &uy * &wy;
    let len = &ux * &ux + &uy * &uy;
    along.sign() >= 0 && (len - along).sign() >= 0
}

/// Sign of `(q − p) × (r − p)`: +1 for a left turn, −1 right, 0 collinear.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i8 {
    let (ax, ay) = p.to(q);
    let (bx, by) = p.to(r);
    (ax * by - ay * bx).sign()
}

/// Specular reflection of `d` in a mirror along `w`:
/// `2·((d·w)/(w·w))·w − d`.
pub fn reflect_direction(d: &Direction, w: &Direction) -> Direction {
    let k = d.dot(w) / w.norm_sq();
    let two_k = &k + &k;
    Direction {
        dx: &two_k * &w.dx - &d.dx,
        dy: &two_k * &w.dy - &d.dy,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HitClass {
    Interior,
    Endpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayHit {
    pub t: QElement,
    pub point: Point,
    pub class: HitClass,
}

/// First point `origin + t·d` with `t > 0` on `seg`.
///
/// A ray running along the segment reports the nearest endpoint ahead of the
/// origin as an [`HitClass::Endpoint`] hit.
pub fn ray_hit(origin: &Point, d: &Direction, seg: &Segment) -> Option<RayHit> {
    let e = seg.direction();
    let (ox, oy) = origin.to(&seg.a);
    let to_a = Direction { dx: ox, dy: oy };
    let denom = d.cross(&e);
    let denom_sign = denom.sign();
    if denom_sign == 0 {
        if to_a.cross(d).sign() != 0 {
            return None;
        }
        let dd = d.norm_sq();
        let (bx, by) = origin.to(&seg.b);
        let to_b = Direction { dx: bx, dy: by };
        let ta = to_a.dot(d) / &dd;
        let tb = to_b.dot(d) / &dd;
        return [(ta, &seg.a), (tb, &seg.b)]
            .into_iter()
            .filter(|(t, _)| t.is_positive())
            .min_by(|x, y| x.0.partial_cmp(&y.0).expect("same field"))
            .map(|(t, p)| RayHit {
                t,
                point: p.clone(),
                class: HitClass::Endpoint,
            });
    }
    // origin + t·d = a + s·e  ⇒  t = (a−o)×e / d×e,  s = (a−o)×d / d×e
    let t_num = to_a.cross(&e);
    let s_num = to_a.cross(d);
    // Sign tests before dividing: t > 0, 0 ≤ s ≤ 1.
    if t_num.sign() * denom_sign <= 0 {
        return None;
    }
    let s_sign = s_num.sign() * denom_sign;
    if s_sign < 0 {
        return None;
    }
    let s_minus_one = (&s_num - &denom).sign() * denom_sign;
    if s_minus_one > 0 {
        return None;
    }
    let t = t_num / &denom;
    let (point, class) = if s_sign == 0 {
        (seg.a.clone(), HitClass::Endpoint)
    } else if s_minus_one == 0 {
        (seg.b.clone(), HitClass::Endpoint)
    } else {
        (origin.offset(d, &t), HitClass::Interior)
    };
    Some(RayHit { t, point, class })
}

/// Whether closed segments `[p1, p2]` and `[q1, q2]` share a point.
pub fn segments_intersect(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(p1, p2, q1))
        || (o2 == 0 && on_segment(p1, p2, q2))
        || (o3 == 0 && on_segment(q1, q2, p1))
        || (o4 == 0 && on_segment(q1, q2, p2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// A simple counterclockwise polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates and builds a polygon; simplicity is checked with exact
    /// pairwise edge tests.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if vertices[i] == vertices[j] {
                return Err(GeometryError::RepeatedVertex(i, j));
            }
        }
        for i in 0..n {
            let prev = &vertices[(i + n - 1) % n];
            let next = &vertices[(i + 1) % n];
            if orient(prev, &vertices[i], next) == 0 {
                return Err(GeometryError::CollinearVertices(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (a1, a2) = (&vertices[i], &vertices[(i + 1) % n]);
                let (b1, b2) = (&vertices[j], &vertices[(j + 1) % n]);
                if segments_intersect(a1, a2, b1, b2) {
                    return Err(GeometryError::SelfIntersection(i, j));
                }
            }
        }
        let poly = Self { vertices };
        if poly.twice_signed_area().sign() <= 0 {
            return Err(GeometryError::Clockwise);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment {
            a: self.vertices[i].clone(),
            b: self.vertices[(i + 1) % n].clone(),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.len()).map(|i| self.edge(i))
    }

    pub fn twice_signed_area(&self) -> QElement {
        let spec = self.vertices[0].x.spec();
        let n = self.vertices.len();
        (0..n).fold(QElement::zero(spec), |acc, i| {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            acc + (&p.x * &q.y - &q.x * &p.y)
        })
    }

    pub fn spec(&self) -> &Arc<AlphaSpec> {
        self.vertices[0].x.spec()
    }

    /// Exact point classification: boundary first, then crossing parity of a
    /// rightward ray.
    pub fn contains(&self, p: &Point) -> Containment {
        if self.edges().any(|e| e.contains(p)) {
            return Containment::Boundary;
        }
        let mut inside = false;
        for e in self.edges() {
            let a_above = e.a.y > p.y;
            let b_above = e.b.y > p.y;
            if a_above == b_above {
                continue;
            }
            // Edge straddles the horizontal line through p; count it when the
            // crossing lies to the right of p.
            let turn = orient(&e.a, &e.b, p);
            if (b_above && turn > 0) || (a_above && turn < 0) {
                inside = !inside;
            }
        }
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }
}

pub fn contains(poly: &Polygon, p: &Point) -> Containment {
    poly.contains(p)
}
