use std::collections::BTreeSet;

use liegrade::counterexample::{build_l, build_operators};
use liegrade::formats::{AlgebraFile, GradingFile};
use liegrade::{
    associative_closure, commutator, compose, fine_grading_from_basis, int, lie_closure,
    relation_set, AlgebraSpan, BasedSpace, LieAlgebra, LinearMap, OperatorSet, Scalar,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn space(n: usize) -> BasedSpace {
    BasedSpace::new((0..n).map(|i| format!("v{i}"))).unwrap()
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn matrix(n: usize) -> impl Strategy<Value = LinearMap> {
    proptest::collection::vec(scalar(), n * n)
        .prop_map(move |flat| LinearMap::from_flat(&space(n), &flat).unwrap())
}

/// Strictly upper triangular, so closures stay small.
fn nilpotent(n: usize) -> impl Strategy<Value = LinearMap> {
    proptest::collection::vec(-2i64..=2, n * n).prop_map(move |raw| {
        let flat: Vec<Scalar> = raw
            .iter()
            .enumerate()
            .map(|(k, &c)| if k / n < k % n { int(c) } else { int(0) })
            .collect();
        LinearMap::from_flat(&space(n), &flat).unwrap()
    })
}

fn operator_set(maps: &[LinearMap], n: usize) -> OperatorSet {
    let named = maps
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("t{i}"), m.clone()))
        .collect();
    OperatorSet::new(&space(n), named).unwrap()
}

fn closed_under(span: &AlgebraSpan, op: impl Fn(&LinearMap, &LinearMap) -> LinearMap) -> bool {
    let maps: Vec<&LinearMap> = span.monomials().iter().map(|m| &m.map).collect();
    maps.iter()
        .all(|a| maps.iter().all(|b| span.contains_map(&op(a, b)).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutator_is_antisymmetric_and_satisfies_jacobi(a in matrix(3), b in matrix(3), c in matrix(3)) {
        let ab = commutator(&a, &b).unwrap();
        prop_assert!(ab.add(&commutator(&b, &a).unwrap()).unwrap().is_zero());
        let jacobi = commutator(&a, &commutator(&b, &c).unwrap()).unwrap()
            .add(&commutator(&b, &commutator(&c, &a).unwrap()).unwrap()).unwrap()
            .add(&commutator(&c, &ab).unwrap()).unwrap();
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn closures_are_fixpoints(gens in proptest::collection::vec(nilpotent(4), 1..=3)) {
        let ops = operator_set(&gens, 4);
        let assoc = associative_closure(&ops).unwrap();
        prop_assert!(closed_under(&assoc, |a, b| compose(a, b).unwrap()));
        let lie = lie_closure(&ops).unwrap();
        prop_assert!(closed_under(&lie, |a, b| commutator(a, b).unwrap()));
        prop_assert!(assoc.span().contains_subspace(lie.span()).unwrap());
    }

    #[test]
    fn closures_ignore_generator_order(gens in proptest::collection::vec(nilpotent(4), 2..=3)) {
        let mut reversed = gens.clone();
        reversed.reverse();
        let (f, r) = (operator_set(&gens, 4), operator_set(&reversed, 4));
        let (af, ar) = (associative_closure(&f).unwrap(), associative_closure(&r).unwrap());
        prop_assert_eq!(af.span(), ar.span());
        let (lf, lr) = (lie_closure(&f).unwrap(), lie_closure(&r).unwrap());
        prop_assert_eq!(lf.span(), lr.span());
    }

    #[test]
    fn structure_constants_roundtrip(raw in proptest::collection::vec((0usize..4, 0usize..4, 0usize..4, scalar()), 0..10)) {
        let s = space(4);
        let mut entries = std::collections::BTreeMap::new();
        for (i, j, k, c) in raw {
            if i < j {
                entries.entry((i, j)).or_insert_with(|| s.zero());
                let v = entries[&(i, j)].clone();
                entries.insert((i, j), &v + &s.basis_vector(k).scale(&c));
            }
        }
        let l = LieAlgebra::new(&s, entries.into_iter().map(|((i, j), v)| (i, j, v))).unwrap();
        let text = AlgebraFile::from_algebra(&l).to_json();
        prop_assert_eq!(AlgebraFile::parse(&text).unwrap().to_algebra().unwrap(), l);
    }
}

#[test]
fn grading_roundtrip_on_l() {
    let c = build_l();
    let text = GradingFile::from_grading(&c.grading).to_json();
    let again = GradingFile::parse(&text).unwrap().to_grading(&c.l).unwrap();
    assert_eq!(again.labels(), c.grading.labels());
    assert_eq!(again.components(), c.grading.components());
}

#[test]
fn operator_file_rebuilds_l() {
    let file = liegrade::formats::counterexample_operator_file();
    let l = AlgebraFile::parse(&file.to_json())
        .unwrap()
        .to_algebra()
        .unwrap();
    assert_eq!(l, build_l().l);
}

fn named_triples(l: &LieAlgebra) -> BTreeSet<(String, String, String)> {
    relation_set(&fine_grading_from_basis(l))
        .unwrap()
        .named_triples()
        .map(|[a, b, t]| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a.to_string(), b.to_string(), t.to_string())
        })
        .collect()
}

/// The same algebra with its basis listed in `order`.
fn permuted(l: &LieAlgebra, order: &[usize]) -> LieAlgebra {
    let names: Vec<String> = order.iter().map(|&i| l.names()[i].clone()).collect();
    let s = BasedSpace::new(names).unwrap();
    let mut entries = Vec::new();
    for (a, &i) in order.iter().enumerate() {
        for (b, &j) in order.iter().enumerate().skip(a + 1) {
            let v = l.bracket_basis(i, j);
            let coords: Vec<Scalar> = order.iter().map(|&k| v.coords()[k].clone()).collect();
            entries.push((a, b, liegrade::Vector::new(&s, coords).unwrap()));
        }
    }
    LieAlgebra::new(&s, entries.into_iter().filter(|(_, _, v)| !v.is_zero())).unwrap()
}

#[test]
fn triples_do_not_depend_on_basis_order() {
    let l = build_l().l;
    let expected = named_triples(&l);
    let n = l.dim();
    let reversed: Vec<usize> = (0..n).rev().collect();
    let interleaved: Vec<usize> = (0..n).step_by(2).chain((1..n).step_by(2)).collect();
    for order in [reversed, interleaved] {
        assert_eq!(named_triples(&permuted(&l, &order)), expected);
    }
}

#[test]
fn semidirect_sum_restricts_to_g() {
    let c = build_l();
    let g = &c.g.algebra;
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            let in_l = c.l.bracket_basis(i, j);
            let in_g = g.bracket_basis(i, j);
            assert!(in_l.coords()[g.dim()..].iter().all(|x| *x == int(0)));
            assert_eq!(&in_l.coords()[..g.dim()], in_g.coords());
        }
    }
    // V is an abelian ideal.
    for i in g.dim()..c.l.dim() {
        for j in g.dim()..c.l.dim() {
            assert!(c.l.bracket_basis(i, j).is_zero());
        }
    }
}

#[test]
fn counterexample_operators_generate_expected_dimensions() {
    let ops = build_operators();
    assert_eq!(associative_closure(&ops).unwrap().dim(), 10);
    assert_eq!(lie_closure(&ops).unwrap().dim(), 7);
}
