mod common;

use billiards_core::family::gamma;
use billiards_core::render::{render_table, render_trajectory, render_unfolded, DEFAULT_DIGITS};
use billiards_core::unfolding::unfold;

use common::{family, standard_table};

fn parse(svg: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(svg).expect("well-formed XML")
}

fn count(doc: &roxmltree::Document, tag: &str) -> usize {
    doc.descendants().filter(|n| n.has_tag_name(tag)).count()
}

fn polyline_points(doc: &roxmltree::Document) -> Vec<(String, String)> {
    let line = doc.descendants().find(|n| n.has_tag_name("polyline")).unwrap();
    line.attribute("points")
        .unwrap()
        .split_whitespace()
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.to_owned(), y.to_owned())
        })
        .collect()
}

#[test]
fn table_is_one_closed_path() {
    let svg = render_table(&standard_table(), DEFAULT_DIGITS);
    let doc = parse(&svg);
    assert_eq!(doc.root_element().attribute("version"), Some("1.1"));
    assert_eq!(count(&doc, "path"), 1);
    assert_eq!(count(&doc, "polyline"), 0);
    let path = doc.descendants().find(|n| n.has_tag_name("path")).unwrap();
    let d = path.attribute("d").unwrap();
    assert!(d.starts_with("M ") && d.ends_with(" Z"));
    assert_eq!(d.matches(" L ").count(), 7);
    assert!(d.contains("1.414213562373,1.000000000000"));
}

#[test]
fn gamma_zero_polyline() {
    let table = standard_table();
    let g0 = gamma(&table, &family(0)[0]).unwrap();
    let svg = render_trajectory(&table, &g0, DEFAULT_DIGITS);
    let doc = parse(&svg);
    assert_eq!(count(&doc, "path"), 1);
    assert_eq!(count(&doc, "polyline"), 1);
    let pts = polyline_points(&doc);
    assert_eq!(pts.len(), 4);
    assert_eq!(pts[0], ("0.000000000000".into(), "0.000000000000".into()));
    assert_eq!(pts[1], ("1.414213562373".into(), "0.585786437627".into()));
    assert_eq!(pts[3], ("0.000000000000".into(), "2.000000000000".into()));
}

#[test]
fn unfolded_gamma_zero() {
    let table = standard_table();
    let g0 = gamma(&table, &family(0)[0]).unwrap();
    let line = unfold(&g0);
    let doc_text = render_unfolded(&table, &g0, &line, 6);
    let doc = parse(&doc_text);
    assert_eq!(count(&doc, "path"), 3);
    assert_eq!(count(&doc, "polyline"), 1);
    let pts = polyline_points(&doc);
    assert_eq!(pts.last().unwrap(), &("4.828427".to_owned(), "2.000000".to_owned()));
}

#[test]
fn copies_track_bounces() {
    let table = standard_table();
    for idx in family(8) {
        let traj = gamma(&table, &idx).unwrap();
        let line = unfold(&traj);
        let doc_text = render_unfolded(&table, &traj, &line, 4);
        let doc = parse(&doc_text);
        assert_eq!(count(&doc, "path"), traj.bounces.len() + 1);
    }
}
