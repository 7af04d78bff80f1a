use quadknot::bounds::Census;
use quadknot::catalog::{builtin_text, classify, identify, load_catalog, parse_catalog, reproduce_table, Catalog, Status};
use quadknot::moves::{enumerate_quad_diagrams, fold_and_convert, PartRules};
use quadknot::parse_diagram;

fn subset(names: &[&str]) -> Catalog {
    let text: String = builtin_text()
        .lines()
        .filter(|l| names.iter().any(|n| l.split('|').next().map(str::trim) == Some(*n)))
        .map(|l| format!("{l}\n"))
        .collect();
    parse_catalog(&text).unwrap()
}

#[test]
fn bundled_file_matches_the_builtin_catalog() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/knots10.txt");
    let loaded = load_catalog(path).unwrap();
    assert_eq!(loaded.len(), Catalog::builtin().len());
    assert_eq!(loaded.get("3_1").unwrap().expected_q, Some(1));
    assert_eq!(loaded.get("9_46").unwrap().expected_q, Some(2));
    assert_eq!(loaded.get("10_10").unwrap().expected_q, None);
    assert!(load_catalog("/no/such/catalog.txt").is_err());
}

#[test]
fn entries_are_valid() {
    let cat = Catalog::builtin();
    assert_eq!(cat.len(), 250);
    for e in cat.entries() {
        let leading: usize = e.name.split('_').next().unwrap().parse().unwrap();
        assert_eq!(e.crossings(), leading, "{}", e.name);
        assert_eq!(e.alternating, e.diagram.is_alternating(), "{}", e.name);
        assert_eq!(parse_diagram(&e.code).unwrap().to_code(), e.diagram.to_code());
    }
}

#[test]
fn identify_examples() {
    let cat = Catalog::builtin();
    for e in cat.entries() {
        assert!(identify(&e.diagram, cat).contains(&e.name.as_str()), "{}", e.name);
    }
    let (_, quad_trefoil) = fold_and_convert(&cat.get("3_1").unwrap().diagram).unwrap();
    assert_eq!(identify(&quad_trefoil.resolve(), cat), ["3_1"]);
    let kink = parse_diagram("X[1,2,2,1]").unwrap();
    assert_eq!(identify(&kink, cat), ["0_1"]);
}

#[test]
fn classification() {
    assert_eq!(classify(Some(2), 2, 2), Status::Determined);
    assert_eq!(classify(Some(3), 3, 4), Status::Bounded);
    assert_eq!(classify(None, 3, 4), Status::Bounded);
    assert_eq!(classify(Some(2), 3, 4), Status::Mismatch);
    assert_eq!(classify(Some(5), 3, 4), Status::Mismatch);
    assert_eq!(classify(None, 4, 3), Status::Mismatch);
}

#[test]
fn small_table() {
    let cat = subset(&["3_1", "4_1", "5_1", "7_6", "8_3", "8_19", "9_26"]);
    let census = Census::new(vec![enumerate_quad_diagrams(1).unwrap()]);
    let t = reproduce_table(&cat, Some(&census), &PartRules::default()).unwrap();
    assert_eq!(t.mismatched, 0);
    let status = |n: &str| t.row(n).unwrap().status;
    for n in ["3_1", "4_1", "5_1", "8_3"] {
        assert_eq!(status(n), Status::Determined, "{n}");
    }
    assert_eq!(t.row("8_3").unwrap().lower, 2);
    assert_eq!(status("9_26"), Status::Bounded);
    assert_eq!(status("8_19"), Status::Bounded);
    // Only the two-crossing census lifts the lower bound of 7_6 to 3.
    let six = t.row("7_6").unwrap();
    assert_eq!((six.lower, six.upper, six.status), (2, 3, Status::Bounded));
    let text = t.to_text();
    assert!(text.ends_with("7 entries: 4 determined, 3 bounded, 0 mismatched\n"), "{text}");
}
