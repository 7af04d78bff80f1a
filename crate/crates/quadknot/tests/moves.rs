use quadknot::bounds::lb_span;
use quadknot::bracket::{jones_invariant, kauffman_bracket, quad_bracket, skein_table};
use quadknot::catalog::Catalog;
use quadknot::generate::{rational_diagram, two_braid};
use quadknot::moves::{
    best_set_decomposition, canonical_code, enumerate_quad_diagrams, find_even_covering_circle, flype, flype_orbit,
    flype_sites, fold_and_convert, quad_fold, realize, set_decompose_with, MovesError, PartKind, PartRules,
};
use quadknot::{parse_diagram, Diagram, LaurentPoly};

/// `p = (-A^3)^k q` for some `k`: the diagrams differ by framing only.
fn equal_up_to_kinks(p: &LaurentPoly, q: &LaurentPoly) -> bool {
    (-40..=40).any(|k: i64| {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        &q.shift(3 * k).scale(&sign.into()) == p
    })
}

fn reduced_entries() -> impl Iterator<Item = (&'static str, &'static Diagram)> {
    Catalog::builtin()
        .entries()
        .iter()
        .filter(|e| e.crossings() > 0 && e.diagram.is_reduced())
        .map(|e| (e.name.as_str(), &e.diagram))
}

#[test]
fn every_reduced_diagram_folds_to_one_fewer_crossing() {
    for (name, d) in reduced_entries() {
        let circle = find_even_covering_circle(d).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(circle.len() % 2, 0, "{name}");
        circle.validate(d).unwrap();
        let folded = quad_fold(d, &circle).unwrap();
        assert_eq!(folded.count_order(4), circle.len() - 1, "{name}");
        let (_, q) = fold_and_convert(d).unwrap();
        assert!(q.is_quadruple(), "{name}");
        assert_eq!(q.num_crossings() + 1, d.num_crossings(), "{name}");
        let span = kauffman_bracket(d).unwrap().span();
        assert_eq!(quad_bracket(&q, skein_table()).span(), span, "{name}");
    }
}

#[test]
fn small_folds_keep_the_resolved_bracket() {
    let cat = Catalog::builtin();
    for name in ["3_1", "4_1", "5_2", "6_1"] {
        let d = &cat.get(name).unwrap().diagram;
        let (_, q) = fold_and_convert(d).unwrap();
        let before = kauffman_bracket(d).unwrap();
        let after = kauffman_bracket(&q.resolve()).unwrap();
        assert!(equal_up_to_kinks(&after, &before), "{name}");
    }
}

#[test]
fn decomposition_examples() {
    let rules = PartRules::default();
    let trefoil = parse_diagram("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let (_, sd) = best_set_decomposition(&trefoil, &rules).unwrap();
    assert_eq!(sd.cost, 1);
    assert_eq!(sd.parts[0].kind, PartKind::Three);
    let eight = &Catalog::builtin().get("4_1").unwrap().diagram;
    assert_eq!(best_set_decomposition(eight, &rules).unwrap().1.cost, 2);
}

#[test]
fn decomposition_rejects_bad_inputs() {
    let rules = PartRules::default();
    let nonalt = &Catalog::builtin().get("8_19").unwrap().diagram;
    assert_eq!(best_set_decomposition(nonalt, &rules).unwrap_err(), MovesError::NotAlternating);
    let kinked = parse_diagram("X[1,4,2,5] X[3,7,4,1] X[5,2,8,3] X[6,8,7,6]").unwrap();
    assert_eq!(best_set_decomposition(&kinked, &rules).unwrap_err(), MovesError::NotReduced);
}

#[test]
fn face_rules_cover_with_faces() {
    let d = &Catalog::builtin().get("5_2").unwrap().diagram;
    let sd = set_decompose_with(d, &PartRules::faces()).unwrap();
    let covered: usize = sd.parts.iter().map(|p| p.crossings.len()).sum();
    assert_eq!(covered, 5);
    assert_eq!(sd.cost, sd.parts.len());
}

#[test]
fn two_braids_cost_a_quarter_of_their_crossings() {
    let rules = PartRules::default();
    for n in 2..=12 {
        let d = two_braid(n).unwrap();
        let (f, sd) = best_set_decomposition(&d, &rules).unwrap();
        assert_eq!(sd.cost, n.div_ceil(4), "n = {n}");
        assert_eq!(lb_span(kauffman_bracket(&d).unwrap().span() as usize), sd.cost, "n = {n}");
        let q = realize(&f, &sd).unwrap();
        assert_eq!(q.num_crossings(), sd.cost);
        assert!(equal_up_to_kinks(&quad_bracket(&q, skein_table()), &kauffman_bracket(&d).unwrap()), "n = {n}");
    }
}

#[test]
fn rational_three_a_reaches_the_span_bound() {
    let rules = PartRules::default();
    for a in 1..=8 {
        let d = rational_diagram(&[3, a]).unwrap();
        assert_eq!(d.num_crossings(), 3 + a);
        let (f, sd) = best_set_decomposition(&d, &rules).unwrap();
        assert_eq!(sd.cost, (3 + a).div_ceil(4), "a = {a}");
        let q = realize(&f, &sd).unwrap();
        assert!(q.is_quadruple());
        assert!(equal_up_to_kinks(&quad_bracket(&q, skein_table()), &kauffman_bracket(&d).unwrap()), "a = {a}");
    }
}

#[test]
fn realized_decompositions_have_cost_many_crossings() {
    let rules = PartRules::default();
    let cat = Catalog::builtin();
    for e in cat.entries().iter().filter(|e| e.crossings() > 0 && e.crossings() <= 8 && e.alternating) {
        let d = &e.diagram;
        let (f, sd) = best_set_decomposition(d, &rules).unwrap();
        let q = realize(&f, &sd).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert!(q.is_quadruple(), "{}", e.name);
        assert_eq!(q.num_crossings(), sd.cost, "{}", e.name);
        assert_eq!(jones_invariant(&q), jones_invariant(d), "{}", e.name);
    }
}

#[test]
fn flype_orbits_stay_in_the_knot_type() {
    let d = &Catalog::builtin().get("7_5").unwrap().diagram;
    let j = jones_invariant(d);
    let orbit = flype_orbit(d, 16);
    assert!(!orbit.is_empty() && orbit.len() <= 16);
    assert_eq!(canonical_code(&orbit[0]), canonical_code(d));
    for f in &orbit {
        assert_eq!(jones_invariant(f), j);
        assert_eq!(f.num_crossings(), 7);
    }
    for site in flype_sites(d) {
        assert!(flype(d, &site).is_alternating());
    }
}

#[test]
fn one_crossing_census() {
    let e = enumerate_quad_diagrams(1).unwrap();
    let trefoil = jones_invariant(&Catalog::builtin().get("3_1").unwrap().diagram);
    let eight = jones_invariant(&Catalog::builtin().get("4_1").unwrap().diagram);
    assert!(e.contains(&LaurentPoly::one()));
    assert!(e.contains(&trefoil) || e.contains(&trefoil.substitute_inverse()));
    assert!(!e.contains(&eight));
    assert!(e.classes.iter().all(|c| c.example.num_crossings() == 1));
    assert_eq!(enumerate_quad_diagrams(3).unwrap_err(), MovesError::UnsupportedEnumeration(3));
}
