use quadknot::bounds::{combine, lb_alternating, lb_resolution, lb_span, lb_torus, Census, KnotFacts};
use quadknot::bracket::{jones_invariant, kauffman_bracket};
use quadknot::catalog::Catalog;
use quadknot::generate::two_braid;
use quadknot::moves::enumerate_quad_diagrams;

fn minimal() -> KnotFacts<'static> {
    KnotFacts { minimal: true, ..Default::default() }
}

#[test]
fn closed_form_examples() {
    assert_eq!([lb_resolution(0), lb_resolution(3), lb_resolution(6), lb_resolution(7)], [0, 1, 1, 2]);
    // The (4k, 4) torus link: 12k crossings, q = 2k.
    for k in 1..=4 {
        assert_eq!(lb_resolution(12 * k), 2 * k);
    }
    assert_eq!([lb_span(12), lb_span(16), lb_span(40)], [1, 1, 3]);
    assert_eq!([lb_alternating(3), lb_alternating(8), lb_alternating(9)], [1, 2, 3]);
    assert_eq!([lb_torus(2, 3), lb_torus(3, 4), lb_torus(2, 2)], [1, 2, 1]);
}

#[test]
fn alternating_rule_agrees_with_the_span_rule() {
    for e in Catalog::builtin().entries() {
        let d = &e.diagram;
        if e.crossings() == 0 || !(d.is_alternating() && d.is_reduced()) {
            continue;
        }
        let span = kauffman_bracket(d).unwrap().span() as usize;
        assert_eq!(lb_alternating(e.crossings()), lb_span(span), "{}", e.name);
        assert_eq!(lb_span(4 * e.crossings()), lb_span(span), "{}", e.name);
    }
}

#[test]
fn trefoil_and_five_one_are_determined() {
    let cat = Catalog::builtin();
    let r = combine(&cat.get("3_1").unwrap().diagram, &minimal()).unwrap();
    assert_eq!((r.best_lower, r.best_upper, r.q), (1, 1, Some(1)));
    let r = combine(&two_braid(5).unwrap(), &minimal()).unwrap();
    assert_eq!((r.best_lower, r.best_upper, r.q), (2, 2, Some(2)));
    assert!(!r.conflict);
}

#[test]
fn figure_eight_is_settled_only_by_the_census() {
    let d = &Catalog::builtin().get("4_1").unwrap().diagram;
    let r = combine(d, &minimal()).unwrap();
    assert_eq!((r.best_lower, r.best_upper, r.determined), (1, 2, false));
    let census = Census::new(vec![enumerate_quad_diagrams(1).unwrap()]);
    assert_eq!(census.lower_bound(&jones_invariant(d)), Some(2));
    let r = combine(d, &KnotFacts { census: Some(&census), ..minimal() }).unwrap();
    assert_eq!(r.q, Some(2));
}

#[test]
fn torus_facts_raise_the_lower_bound() {
    let d = &Catalog::builtin().get("8_19").unwrap().diagram;
    let without = combine(d, &KnotFacts::default()).unwrap();
    let with = combine(d, &KnotFacts { torus: Some((3, 4)), ..Default::default() }).unwrap();
    assert_eq!(with.best_lower, 2);
    assert!(with.best_lower >= without.best_lower);
    assert!(with.lower.iter().any(|b| b.value == 2));
}

#[test]
fn the_unknot_needs_nothing() {
    let census = Census::new(vec![enumerate_quad_diagrams(1).unwrap()]);
    assert_eq!(census.lower_bound(&quadknot::LaurentPoly::one()), None);
    let r = combine(&quadknot::Diagram::unknot(), &minimal()).unwrap();
    assert_eq!(r.q, Some(0));
}
