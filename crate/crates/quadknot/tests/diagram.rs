use quadknot::bracket::kauffman_bracket;
use quadknot::catalog::Catalog;
use quadknot::diagram::ResolutionPattern;
use quadknot::verify::random_corpus;
use quadknot::{parse_diagram, CrossingType, Diagram, DiagramError};

const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const FIGURE_EIGHT: &str = "X[4,1,5,2] X[8,5,1,6] X[6,4,7,3] X[2,8,3,7]";

fn face_sizes(d: &Diagram) -> Vec<usize> {
    let mut s: Vec<usize> = d.faces().iter().map(|f| f.size()).collect();
    s.sort_unstable();
    s
}

fn euler(d: &Diagram) -> i64 {
    d.num_crossings() as i64 - d.num_edges() as i64 + d.faces().len() as i64
}

#[test]
fn parses_the_trefoil() {
    let d = parse_diagram(TREFOIL).unwrap();
    assert_eq!(d.num_crossings(), 3);
    assert!(d.crossings().iter().all(|c| c.order() == 2));
    assert_eq!((d.num_edges(), d.faces().len()), (6, 5));
    assert_eq!(euler(&d), 2);
}

#[test]
fn a_torus_rotation_system_is_rejected() {
    // Every label twice, but the rotations close up on a torus.
    let err = parse_diagram("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]").unwrap_err();
    assert_eq!(err, DiagramError::NonPlanar { v: 3, e: 6, f: 3 });
}

#[test]
fn smallest_closed_quadruple_diagram() {
    let d = parse_diagram("Q[1,2,3,4,4,3,2,1;1234]").unwrap();
    assert!(d.is_quadruple());
    assert_eq!(d.num_components(), 2);
    assert_eq!(euler(&d), 2);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(matches!(
        parse_diagram("X[1,7,2,7] X[7,3,4,3]"),
        Err(DiagramError::EdgeMultiplicity { label: 7, count: 3 })
    ));
    assert!(matches!(parse_diagram("X[1,2,3]"), Err(DiagramError::Parse { .. })));
    assert!(matches!(parse_diagram("Q[1,2,3,4,4,3,2,1;1224]"), Err(DiagramError::Parse { .. })));
    assert!(matches!(parse_diagram("X[1,2,2,1] X[3,4,4,3]"), Err(DiagramError::Disconnected { pieces: 2 })));
    assert!(matches!(parse_diagram("Y[1,2]"), Err(DiagramError::Parse { .. })));
}

#[test]
fn face_censuses() {
    assert_eq!(face_sizes(&parse_diagram(TREFOIL).unwrap()), [2, 2, 2, 3, 3]);
    assert_eq!(face_sizes(&parse_diagram(FIGURE_EIGHT).unwrap()), [2, 2, 3, 3, 3, 3]);
    let kink = parse_diagram("X[1,2,2,1]").unwrap();
    assert_eq!(kink.faces().len(), 3);
    assert_eq!(euler(&kink), 2);
}

#[test]
fn every_catalog_diagram_is_spherical() {
    for e in Catalog::builtin().entries() {
        let d = &e.diagram;
        assert_eq!(euler(d), 2, "{}", e.name);
        let total: usize = d.faces().iter().map(|f| f.size()).sum();
        assert_eq!(total, 2 * d.num_edges(), "{}", e.name);
        assert_eq!(d.to_code().parse::<Diagram>().unwrap().to_code(), d.to_code(), "{}", e.name);
    }
}

#[test]
fn crossing_types_read_clockwise_from_the_top() {
    let q = |h: &str| parse_diagram(&format!("Q[1,2,3,4,4,3,2,1;{h}]")).unwrap();
    assert_eq!(q("1234").crossing(0).crossing_type().unwrap(), CrossingType::T1234);
    assert_eq!(q("1432").crossing(0).crossing_type().unwrap(), CrossingType::T1432);
    // Re-rooting the cyclic order keeps the type.
    for h in ["2341", "3412", "4123"] {
        assert_eq!(q(h).crossing(0).crossing_type().unwrap(), CrossingType::T1234, "{h}");
    }
    assert!(parse_diagram(TREFOIL).unwrap().crossing(0).crossing_type().is_err());
}

#[test]
fn mirror_pairs_the_types() {
    let pairs = [("1234", "1432"), ("1243", "1342"), ("1324", "1423")];
    for (a, b) in pairs {
        let d = parse_diagram(&format!("Q[1,2,3,4,4,3,2,1;{a}]")).unwrap();
        let m = d.mirror();
        assert_eq!(m.crossing(0).crossing_type().unwrap().label(), b);
        assert_eq!(m.mirror(), d);
    }
    for t in CrossingType::ALL {
        assert_eq!(t.mirror().mirror(), t);
        assert_ne!(t.mirror(), t);
    }
}

#[test]
fn resolution_counts() {
    for d in random_corpus(5, 30, 3) {
        let r = d.resolve();
        assert!(r.is_classical());
        assert_eq!(r.num_crossings(), 6 * d.count_order(4) + d.count_order(2));
        assert_eq!(euler(&r), 2);
    }
    let t = parse_diagram(TREFOIL).unwrap();
    assert_eq!(t.resolve(), t);
}

#[test]
fn resolution_patterns_agree_on_the_bracket() {
    let other = ResolutionPattern::from_offsets([0.3, -0.2, 0.05, -0.33]).unwrap();
    assert!(ResolutionPattern::from_offsets([0.0, 0.0, 0.0, 0.0]).is_none());
    for d in random_corpus(9, 24, 2) {
        let a = kauffman_bracket(&d.resolve()).unwrap();
        let b = kauffman_bracket(&d.resolve_with(&other)).unwrap();
        assert_eq!(a, b, "{}", d.to_code());
    }
}

#[test]
fn writhe_examples() {
    let t = parse_diagram(TREFOIL).unwrap();
    assert_eq!(t.writhe(&t.orientation()).unwrap().abs(), 3);
    let e = parse_diagram(FIGURE_EIGHT).unwrap();
    assert_eq!(e.writhe(&e.orientation()).unwrap(), 0);
    // Reversing one component of a two-component link negates the linking crossings.
    let hopf = parse_diagram("X[1,3,2,4] X[3,1,4,2]").unwrap();
    let w = hopf.writhe(&hopf.orientation()).unwrap();
    let flipped = hopf.writhe(&hopf.orientation_reversing(&[1])).unwrap();
    assert_eq!((w.abs(), flipped), (2, -w));
}

#[test]
fn json_export_lists_faces() {
    let j = parse_diagram(TREFOIL).unwrap().to_json();
    assert_eq!(j["crossings"].as_array().unwrap().len(), 3);
    assert_eq!(j["edges"].as_array().unwrap().len(), 6);
    assert_eq!(j["faces"].as_array().unwrap().len(), 5);
}
