use liegrade::counterexample::{build_l, run_full_report, CHAIN_TO_D1, CHAIN_TO_D2};
use liegrade::{bfs_oracle, decide, relation_set, render_certificate, CertificateStyle, Decision};

#[test]
fn every_claim_passes() {
    let report = run_full_report();
    let failed: Vec<_> = report.claims.iter().filter(|c| !c.passed).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    let names: Vec<&str> = report.claims.iter().map(|c| c.name.as_str()).collect();
    for n in &names {
        assert_eq!(names.iter().filter(|m| *m == n).count(), 1, "{n} repeated");
    }
    assert!(report.render_text().ends_with("NOT EMBEDDABLE: d1 = d2\n"));
}

#[test]
fn relation_set_holds_both_chains() {
    let r = relation_set(&build_l().grading).unwrap();
    for [a, b, t] in CHAIN_TO_D1.iter().chain(&CHAIN_TO_D2) {
        assert!(r.contains(a, b, t), "({a}, {b}, {t})");
    }
}

#[test]
fn oracle_bounds() {
    let r = relation_set(&build_l().grading).unwrap();
    let (d1, d2) = (r.index_of("d1").unwrap(), r.index_of("d2").unwrap());
    let low = bfs_oracle(&r, 2, 1_000_000).unwrap();
    assert!(!low.collides(d1, d2));
    assert!(!low.found_collision());
    // A zigzag through [x,z] already merges them at degree 3.
    assert!(bfs_oracle(&r, 3, 1_000_000).unwrap().collides(d1, d2));
    assert!(bfs_oracle(&r, 4, 1_000_000).unwrap().collides(d1, d2));
}

#[test]
fn certificate_renderings() {
    let r = relation_set(&build_l().grading).unwrap();
    let Decision::NotEmbeddable { certificate, .. } = decide(&r).unwrap() else {
        panic!("expected a collision");
    };
    let text = render_certificate(&certificate, &r, CertificateStyle::Text).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "d1 = y+c1 = y+z+b1 = x+y+z+a = x+y+b3 = x+c3 = d2"
    );
    let brackets = render_certificate(&certificate, &r, CertificateStyle::Bracket).unwrap();
    assert_eq!(
        brackets,
        "[y,[z,[x,a]]] -> d1\n[x,[y,[z,a]]] -> d2\nboth have weight x+y+z+a, so d1 = x+y+z+a = d2\n"
    );
}
