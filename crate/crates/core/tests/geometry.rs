mod common;

use billiards_core::geometry::{
    contains, on_segment, orient, ray_hit, reflect_direction, segments_intersect, GeometryError,
};
use billiards_core::{Containment, Direction, HitClass, Point, Polygon, QElement, Segment};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{pt, q, sqrt2, standard_table};

fn p(x: i64, y: i64) -> Point {
    Point::from_ints(x, y, &sqrt2())
}

fn dir(x: QElement, y: QElement) -> Direction {
    Direction::new(x, y).unwrap()
}

#[test]
fn orient_examples() {
    assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
    assert_eq!(orient(&p(0, 0), &p(1, 1), &p(2, 2)), 0);
    assert_eq!(orient(&p(0, 0), &pt(q(0, 1), q(0, 0)), &pt(q(0, 1), q(-1, 0))), -1);
}

#[test]
fn reflect_examples() {
    let d = dir(q(1, 0), q(1, 0));
    assert_eq!(reflect_direction(&d, &dir(q(0, 0), q(1, 0))), dir(q(-1, 0), q(1, 0)));
    assert_eq!(reflect_direction(&d, &dir(q(1, 0), q(0, 0))), dir(q(1, 0), q(-1, 0)));
    let e = dir(q(1, 0), q(0, 0));
    assert_eq!(reflect_direction(&e, &dir(q(1, 0), q(1, 0))), dir(q(0, 0), q(1, 0)));
}

#[test]
fn ray_hit_examples() {
    let o = p(0, 0);
    let wall = Segment::new(pt(q(0, 1), q(0, 0)), pt(q(0, 1), q(1, 0))).unwrap();
    let hit = ray_hit(&o, &dir(q(1, 1), q(1, 0)), &wall).unwrap();
    assert_eq!(hit.point, pt(q(0, 1), q(2, -1)));
    assert_eq!(hit.class, HitClass::Interior);
    assert_eq!(hit.point, o.offset(&dir(q(1, 1), q(1, 0)), &hit.t));

    let unit = Segment::new(p(1, 0), p(1, 1)).unwrap();
    let corner = ray_hit(&o, &dir(q(1, 0), q(1, 0)), &unit).unwrap();
    assert_eq!(corner.point, p(1, 1));
    assert_eq!(corner.class, HitClass::Endpoint);

    assert!(ray_hit(&o, &dir(q(0, 0), q(1, 0)), &unit).is_none());
}

#[test]
fn ray_hit_collinear_reports_nearest_endpoint() {
    let seg = Segment::new(p(2, 0), p(5, 0)).unwrap();
    let hit = ray_hit(&p(0, 0), &dir(q(1, 0), q(0, 0)), &seg).unwrap();
    assert_eq!(hit.point, p(2, 0));
    assert_eq!(hit.class, HitClass::Endpoint);
    assert!(ray_hit(&p(0, 0), &dir(q(-1, 0), q(0, 0)), &seg).is_none());
}

#[test]
fn contains_examples() {
    let table = standard_table();
    let poly = table.polygon();
    assert_eq!(contains(poly, &p(0, 0)), Containment::Inside);
    assert_eq!(contains(poly, &pt(q(0, 1), q(1, 0))), Containment::Boundary);
    assert_eq!(contains(poly, &p(2, 0)), Containment::Outside);
    assert_eq!(contains(poly, &p(0, 2)), Containment::Inside);
    // the slit itself is interior, its ends are vertices
    assert_eq!(contains(poly, &p(0, 1)), Containment::Inside);
    assert_eq!(contains(poly, &p(1, 1)), Containment::Boundary);
    assert_eq!(contains(poly, &pt(q(0, 1), q(3, 0))), Containment::Outside);
}

#[test]
fn polygon_validation() {
    assert!(matches!(Polygon::new(vec![p(0, 0), p(1, 0)]), Err(GeometryError::TooFewVertices(2))));
    assert!(matches!(
        Polygon::new(vec![p(0, 0), p(1, 0), p(0, 1), p(0, 1)]),
        Err(GeometryError::RepeatedVertex(..))
    ));
    assert!(matches!(
        Polygon::new(vec![p(0, 0), p(1, 0), p(2, 0), p(0, 1)]),
        Err(GeometryError::CollinearVertices(..))
    ));
    assert!(matches!(
        Polygon::new(vec![p(0, 0), p(0, 1), p(1, 0)]),
        Err(GeometryError::Clockwise)
    ));
    // bow tie
    assert!(matches!(
        Polygon::new(vec![p(0, 0), p(2, 2), p(2, 0), p(0, 2)]),
        Err(GeometryError::SelfIntersection(..))
    ));
    assert!(Segment::new(p(1, 1), p(1, 1)).is_err());
    assert!(Direction::new(q(0, 0), q(0, 0)).is_err());
}

#[test]
fn segment_predicates() {
    assert!(on_segment(&p(0, 0), &p(2, 2), &p(1, 1)));
    assert!(on_segment(&p(0, 0), &p(2, 2), &p(2, 2)));
    assert!(!on_segment(&p(0, 0), &p(2, 2), &p(3, 3)));
    assert!(on_segment(&p(1, 1), &p(1, 1), &p(1, 1)));
    assert!(!on_segment(&p(1, 1), &p(1, 1), &p(0, 0)));
    assert!(segments_intersect(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
    assert!(!segments_intersect(&p(0, 0), &p(1, 1), &p(0, 2), &p(2, 3)));
}

fn small() -> impl Strategy<Value = QElement> {
    (-40i64..40, -40i64..40, 1i64..8).prop_map(|(r, s, d)| {
        let f = sqrt2();
        QElement::from_ints(r, s, &f) / QElement::from_int(d, &f)
    })
}

fn direction() -> impl Strategy<Value = Direction> {
    (small(), small()).prop_filter_map("nonzero", |(x, y)| Direction::new(x, y).ok())
}

fn point() -> impl Strategy<Value = Point> {
    (small(), small()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reflection_is_an_involution(d in direction(), w in direction()) {
        let once = reflect_direction(&d, &w);
        prop_assert_eq!(reflect_direction(&once, &w), d);
    }

    #[test]
    fn reflection_preserves_length(d in direction(), w in direction()) {
        prop_assert_eq!(reflect_direction(&d, &w).norm_sq(), d.norm_sq());
    }

    #[test]
    fn ray_hit_lies_on_ray_and_segment(o in point(), d in direction(), a in point(), b in point()) {
        prop_assume!(a != b);
        let seg = Segment::new(a.clone(), b.clone()).unwrap();
        if let Some(hit) = ray_hit(&o, &d, &seg) {
            prop_assert!(hit.t.is_positive());
            prop_assert_eq!(&hit.point, &o.offset(&d, &hit.t));
            prop_assert_eq!(orient(&a, &b, &hit.point), 0);
            prop_assert!(on_segment(&a, &b, &hit.point));
            let endpoint = hit.point == a || hit.point == b;
            prop_assert_eq!(hit.class == HitClass::Endpoint, endpoint);
        } else {
            // no hit ahead: the far point of a long ray does not cross the segment
            let far = o.offset(&d, &QElement::from_int(10_000, &sqrt2()));
            let crossing = segments_intersect(&o, &far, &a, &b) && !on_segment(&a, &b, &o);
            prop_assert!(!crossing);
        }
    }
}

/// Winding number of `poly` around `p`, by signed upward/downward edge
/// crossings; `None` on the boundary.
fn winding(poly: &[Point], p: &Point) -> Option<i32> {
    let n = poly.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        let o = orient(a, b, p);
        let between_x = |u: &QElement, v: &QElement, t: &QElement| (u <= t && t <= v) || (v <= t && t <= u);
        if o == 0 && between_x(&a.x, &b.x, &p.x) && between_x(&a.y, &b.y, &p.y) {
            return None;
        }
        if a.y <= p.y {
            if b.y > p.y && o > 0 {
                w += 1;
            }
        } else if b.y <= p.y && o < 0 {
            w -= 1;
        }
    }
    Some(w)
}

fn grid(rng: &mut ChaCha8Rng, r: f64) -> QElement {
    let f = sqrt2();
    let s: i64 = rng.gen_range(-2..=2);
    let target = r - s as f64 * std::f64::consts::SQRT_2;
    let k = (target * 8.0).round() as i64;
    QElement::from_ints(k, 8 * s, &f) / QElement::from_int(8, &f)
}

fn random_star(rng: &mut ChaCha8Rng) -> Polygon {
    loop {
        let k = rng.gen_range(3..=12);
        let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let verts: Vec<Point> = angles
            .iter()
            .map(|a| {
                let r = rng.gen_range(1.0..6.0);
                Point::new(grid(rng, r * a.cos()), grid(rng, r * a.sin()))
            })
            .collect();
        if let Ok(poly) = Polygon::new(verts) {
            return poly;
        }
    }
}

#[test]
fn contains_agrees_with_winding_number() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f = sqrt2();
    let mut checked = 0;
    for _ in 0..20 {
        let poly = random_star(&mut rng);
        let verts = poly.vertices().to_vec();
        for i in 0..60 {
            let probe = match i % 3 {
                // edge midpoints and vertices exercise the boundary branch
                0 => {
                    let a = &verts[i % verts.len()];
                    let b = &verts[(i + 1) % verts.len()];
                    let half = QElement::from_ints(1, 0, &f) / QElement::from_int(2, &f);
                    Point::new((&a.x + &b.x) * &half, (&a.y + &b.y) * &half)
                }
                1 if i % 9 == 1 => verts[i % verts.len()].clone(),
                _ => {
                    let x: f64 = rng.gen_range(-7.0..7.0);
                    let y: f64 = rng.gen_range(-7.0..7.0);
                    Point::new(grid(&mut rng, x), grid(&mut rng, y))
                }
            };
            let expected = match winding(&verts, &probe) {
                None => Containment::Boundary,
                Some(0) => Containment::Outside,
                Some(_) => Containment::Inside,
            };
            assert_eq!(contains(&poly, &probe), expected, "{probe:?} in {verts:?}");
            checked += 1;
        }
    }
    assert_eq!(checked, 1200);
}
