use std::f64::consts::PI;

use ctstreak::geometry::{dual_curve, find_bitangents, find_flat_points, predicted_lines, FlatKind, LineKind, ParamCurve};

mod common;

use common::{brute_force_bitangents, line_gap, test_curves};

#[test]
fn bitangents_match_brute_force() {
    let expected = [1, 2, 0, 2, 3];
    for ((name, c), count) in test_curves().into_iter().zip(expected) {
        let fast = find_bitangents(&c, 1e-14).unwrap();
        let slow = brute_force_bitangents(&c, 600);
        assert_eq!(slow.len(), count, "{name}: brute force found {slow:?}");
        assert_eq!(fast.len(), slow.len(), "{name}: {fast:?} vs {slow:?}");
        for l in &slow {
            let best = fast.iter().map(|b| line_gap((b.line.phi, b.line.s), *l)).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6, "{name}: brute-force line {l:?} unmatched ({best:e})");
        }
    }
}

#[test]
fn bean_has_four_inflections_and_four_dual_reversals() {
    let bean = ParamCurve::bean();
    let flats = find_flat_points(&bean, 1e-13).unwrap();
    assert_eq!(flats.iter().filter(|f| f.kind == FlatKind::Inflection).count(), 4);
    let dual = dual_curve(&bean, 4096).unwrap();
    assert_eq!(dual.reversal_points().len(), 4);
}

#[test]
fn inflections_come_in_pairs_on_closed_curves() {
    for (name, c) in test_curves() {
        let flats = find_flat_points(&c, 1e-13).unwrap();
        let k = flats.iter().filter(|f| f.kind == FlatKind::Inflection).count();
        assert_eq!(k % 2, 0, "{name} has {k} inflections");
        for f in &flats {
            assert_eq!(f.order, 1, "{name}: flat point of order {} at t = {}", f.order, f.t);
        }
    }
}

#[test]
fn kidney_has_two_inflection_lines_and_one_bitangent() {
    let lines = predicted_lines(&ParamCurve::kidney()).unwrap();
    assert_eq!(lines.count(LineKind::InflectionTangent), 2);
    assert_eq!(lines.count(LineKind::Bitangent), 1);
    // the bitangent closes the dent on the right and is close to vertical
    let b = lines.lines.iter().find(|l| l.kind == LineKind::Bitangent).unwrap();
    assert!(b.line.phi.min(PI - b.line.phi) < 1e-6 && b.line.s.abs() > 0.5);
}

#[test]
fn ellipse_is_clean() {
    let e = ParamCurve::ellipse(1.3, 0.5);
    assert!(find_flat_points(&e, 1e-13).unwrap().is_empty());
    assert!(predicted_lines(&e).unwrap().is_empty());
}
