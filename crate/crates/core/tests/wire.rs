mod common;

use billiards_core::billiard::trace;
use billiards_core::blocking::{evade, random_blocking_set};
use billiards_core::family::{gamma, verify_gamma};
use billiards_core::unfolding::unfold;
use billiards_core::wire::*;
use billiards_core::{BlockingSet, Direction, QElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{de::DeserializeOwned, Serialize};

use common::{family, pt, q, sqrt2, standard_table};

fn through_json<T: Serialize + DeserializeOwned>(w: &T) -> T {
    serde_json::from_str(&serde_json::to_string(w).unwrap()).unwrap()
}

#[test]
fn qelement_encoding_shape() {
    let x = QElement::from_ints(3, -2, &sqrt2()) / QElement::from_int(7, &sqrt2());
    let json = serde_json::to_value(qel_to_wire(&x)).unwrap();
    assert_eq!(json, serde_json::json!({"r": ["3", "7"], "s": ["-2", "7"]}));
    let back = qel_from_wire(&through_json(&qel_to_wire(&x)), &sqrt2()).unwrap();
    assert_eq!(back, x);
    let alpha = serde_json::to_value(alpha_to_wire(&sqrt2())).unwrap();
    assert_eq!(alpha, serde_json::json!({"u": ["2", "1"], "v": ["0", "1"]}));
}

#[test]
fn huge_integers_survive() {
    let big = "123456789012345678901234567890123456789";
    let w = QElementWire {
        r: RationalWire(big.into(), "1".into()),
        s: RationalWire("-1".into(), big.into()),
    };
    let x = qel_from_wire(&w, &sqrt2()).unwrap();
    assert_eq!(qel_to_wire(&x), w);
}

#[test]
fn malformed_numbers_are_rejected() {
    let w = QElementWire {
        r: RationalWire("1.5".into(), "1".into()),
        s: RationalWire("0".into(), "1".into()),
    };
    assert!(matches!(qel_from_wire(&w, &sqrt2()), Err(WireError::BadInteger(_))));
    let w = QElementWire {
        r: RationalWire("1".into(), "0".into()),
        s: RationalWire("0".into(), "1".into()),
    };
    assert!(matches!(qel_from_wire(&w, &sqrt2()), Err(WireError::ZeroDenominator)));
}

#[test]
fn table_round_trip() {
    let table = standard_table();
    let w = through_json(&table_to_wire(&table));
    assert_eq!(w.polygon.vertices.len(), 8);
    assert_eq!(table_from_wire(&w).unwrap(), table);
}

#[test]
fn trajectory_round_trips() {
    let table = standard_table();
    for idx in family(30) {
        let traj = gamma(&table, &idx).unwrap();
        let back = trajectory_from_wire(&through_json(&trajectory_to_wire(&traj)), &sqrt2()).unwrap();
        assert_eq!(back, traj);
    }
    let cut = trace(&table, table.origin(), &family(5)[5].direction(), 2).unwrap();
    let w = through_json(&trajectory_to_wire(&cut));
    assert_eq!(w.status, "budget_exhausted");
    assert_eq!(trajectory_from_wire(&w, &sqrt2()).unwrap(), cut);
}

#[test]
fn trajectory_field_names() {
    let table = standard_table();
    let g0 = gamma(&table, &family(0)[0]).unwrap();
    let json = serde_json::to_value(trajectory_to_wire(&g0)).unwrap();
    for key in ["start", "direction", "bounces", "terminal", "status"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["status"], "reached_target");
    assert_eq!(json["bounces"][0]["edge"], 1);
}

#[test]
fn corner_hit_encoding() {
    let table = standard_table();
    let d = Direction::new(q(0, 1), q(1, 0)).unwrap();
    let err = trace(&table, table.origin(), &d, 10).unwrap_err();
    let json = serde_json::to_value(corner_hit_to_wire(err.corner().unwrap())).unwrap();
    assert_eq!(json["error"], "corner_hit");
    assert_eq!(json["after_bounces"], 0);
}

#[test]
fn unfolded_line_round_trip() {
    let table = standard_table();
    let line = unfold(&gamma(&table, &family(3)[3]).unwrap());
    let back = unfolded_from_wire(&through_json(&unfolded_to_wire(&line)), &sqrt2()).unwrap();
    assert_eq!(back, line);
}

#[test]
fn blocking_set_round_trip() {
    let table = standard_table();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let set = random_blocking_set(&table, 6, &mut rng);
    let back = blocking_set_from_wire(&through_json(&blocking_set_to_wire(&set)), &table).unwrap();
    assert_eq!(back, set);

    let with_o = BlockingSetWire {
        points: vec![point_to_wire(table.origin())],
    };
    assert!(matches!(blocking_set_from_wire(&with_o, &table), Err(WireError::Blocking(_))));
}

#[test]
fn report_and_evasion_records() {
    let table = standard_table();
    let r = verify_gamma(&table, &family(0)[0]).unwrap();
    let json = serde_json::to_value(gamma_report_to_wire(&r, 12)).unwrap();
    assert_eq!(json["n"], 0);
    assert_eq!(json["q"], 1);
    assert_eq!(json["p"], 1);
    assert_eq!(json["lambda_decimal"], "-0.414213562373");
    assert_eq!(json["ok"], true);

    let blockers = BlockingSet::new(&table, vec![pt(q(-1, 1), q(1, 0))]).unwrap();
    let w = evade(&table, &family(10), &blockers).unwrap();
    let json = serde_json::to_value(evasion_to_wire(w.witness().unwrap())).unwrap();
    assert_eq!(json["witness_n"], 1);
    assert_eq!(json["trajectory"]["status"], "reached_target");
}
