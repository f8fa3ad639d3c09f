//! The nine-dimensional module `V`, the operators `x, y, z` on it, and the
//! sixteen-dimensional Lie algebra `L = g ⋉ V` whose basis grading does not
//! come from any abelian semigroup with property (P).
//!
//! Basis of `V`, in order: `a, b1, b2, b3, c1, c2, c3, d1, d2`. The operators
//! act by
//!
//! ```text
//! x: a -> b1, b2 -> c2, c3 -> d2
//! y: a -> b2, b3 -> c3, c1 -> d1
//! z: a -> b3, b1 -> c1, b2 -> c3, c2 -> d2
//! ```
//!
//! and kill every other basis vector.

use serde::Serialize;

use crate::grading::{fine_grading_from_basis, relation_set, verify_grading, Grading, RelationSet};
use crate::lie::{
    check_axioms, from_operators, lower_central_series, semidirect_sum, LieAlgebra,
    LinearLieAlgebra,
};
use crate::linalg::{int, rref, BasedSpace, LinearMap, Scalar, Subspace, Vector};
use crate::operators::{
    associative_closure, check_relations, commutator, evaluation_constraints, lie_closure,
    span_product, AlgebraSpan, OperatorSet, RelationClaim,
};
use crate::semigroup::{
    bfs_oracle, decide, render_certificate, CertificateStyle, Decision, ExponentVector, Limits,
};

pub const MODULE_BASIS: [&str; 9] = ["a", "b1", "b2", "b3", "c1", "c2", "c3", "d1", "d2"];

pub const X_ACTION: [(&str, &str); 3] = [("a", "b1"), ("b2", "c2"), ("c3", "d2")];
pub const Y_ACTION: [(&str, &str); 3] = [("a", "b2"), ("b3", "c3"), ("c1", "d1")];
pub const Z_ACTION: [(&str, &str); 4] = [("a", "b3"), ("b1", "c1"), ("b2", "c3"), ("c2", "d2")];

/// Spanning words of the associative algebra generated by `x, y, z`.
pub const A_WORDS: [&str; 10] = ["x", "y", "z", "xy", "xz", "zx", "yz", "zy", "yzx", "xyz"];

/// Spanning words of the Lie algebra generated by `x, y, z`.
pub const G_WORDS: [&str; 7] = ["x", "y", "z", "[x,y]", "[x,z]", "[y,z]", "[[y,z],x]"];

/// The two chains of triples that force `d1 = x+y+z+a = d2`.
pub const CHAIN_TO_D1: [[&str; 3]; 3] = [["x", "a", "b1"], ["z", "b1", "c1"], ["y", "c1", "d1"]];
pub const CHAIN_TO_D2: [[&str; 3]; 3] = [["z", "a", "b3"], ["y", "b3", "c3"], ["x", "c3", "d2"]];

pub fn module_space() -> BasedSpace {
    BasedSpace::new(MODULE_BASIS).expect("distinct names")
}

fn action(space: &BasedSpace, arrows: &[(&str, &str)]) -> LinearMap {
    LinearMap::from_entries(space, arrows.iter().map(|&(f, t)| (f, t, int(1))))
        .expect("names from the module basis")
}

/// The operators `x, y, z` on `V`, in that order.
pub fn build_operators() -> OperatorSet {
    let v = module_space();
    OperatorSet::new(
        &v,
        vec![
            ("x".into(), action(&v, &X_ACTION)),
            ("y".into(), action(&v, &Y_ACTION)),
            ("z".into(), action(&v, &Z_ACTION)),
        ],
    )
    .expect("three distinct generators")
}

/// The Lie algebra `g` of operators, `L = g ⋉ V`, and the basis grading of `L`.
pub struct Construction {
    pub operators: OperatorSet,
    pub g: LinearLieAlgebra,
    pub l: LieAlgebra,
    pub grading: Grading,
}

pub fn build_l() -> Construction {
    let operators = build_operators();
    let span = lie_closure(&operators).expect("nonempty generators");
    let g = from_operators(&span).expect("a Lie closure is bracket-closed");
    let l = semidirect_sum(&g).expect("g acts on V");
    let grading = fine_grading_from_basis(&l);
    Construction {
        operators,
        g,
        l,
        grading,
    }
}

/// Left-nested bracket `[n_1, [n_2, [..., n_k]]]` of basis elements of `l`.
pub fn nested_bracket(l: &LieAlgebra, names: &[&str]) -> Vector {
    let (last, rest) = names.split_last().expect("at least one name");
    let mut acc = l.element(last).expect("basis name");
    for n in rest.iter().rev() {
        acc = l.bracket(&l.element(n).expect("basis name"), &acc).unwrap();
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecisionSummary {
    pub verdict: String,
    pub colliding_labels: Vec<String>,
    pub chain: Vec<String>,
    pub cited_relations: Vec<[String; 3]>,
    pub certificate_text: String,
    pub certificate_brackets: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub dim_a: usize,
    pub dim_g: usize,
    pub dim_l: usize,
    pub words_a: Vec<String>,
    pub words_g: Vec<String>,
    pub nilpotency_class_g: Option<usize>,
    pub nilpotency_class_l: Option<usize>,
    pub relation_count: usize,
    pub bracket_evaluations: Vec<(String, String)>,
    pub claims: Vec<Claim>,
    pub decision: DecisionSummary,
}

impl CounterexampleReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("Lie grading counterexample: L = g + V (semidirect), dim 7 + 9\n");
        out.push_str(&format!(
            "dim A = {}, dim g = {}, dim L = {}\n",
            self.dim_a, self.dim_g, self.dim_l
        ));
        out.push_str(&format!("A = span{{{}}}\n", self.words_a.join(", ")));
        out.push_str(&format!("g = span{{{}}}\n", self.words_g.join(", ")));
        for (expr, value) in &self.bracket_evaluations {
            out.push_str(&format!("{expr} = {value}\n"));
        }
        out.push_str(&format!("relation triples: {}\n", self.relation_count));
        out.push('\n');
        for c in &self.claims {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] {}: {}\n", c.name, c.detail));
        }
        out.push('\n');
        out.push_str("certificate:\n");
        for line in self.decision.certificate_text.lines() {
            out.push_str(&format!("  {line}\n"));
        }
        for line in self.decision.certificate_brackets.lines() {
            out.push_str(&format!("  {line}\n"));
        }
        out.push('\n');
        match self.decision.colliding_labels.as_slice() {
            [a, b, ..] => out.push_str(&format!("NOT EMBEDDABLE: {a} = {b}\n")),
            _ => out.push_str(&format!("{}\n", self.decision.verdict)),
        }
        out
    }
}

struct Claims(Vec<Claim>);

impl Claims {
    fn add(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Claim {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

fn unit_rows(n: usize, idx: &[&[usize]]) -> Subspace {
    let rows: Vec<Vec<Scalar>> = idx
        .iter()
        .map(|ones| {
            let mut r = vec![int(0); n];
            for &i in *ones {
                r[i] = int(1);
            }
            r
        })
        .collect();
    rref(n, &rows).unwrap()
}

fn same_words(actual: &[String], expected: &[&str]) -> bool {
    let mut a: Vec<&str> = actual.iter().map(String::as_str).collect();
    let mut e = expected.to_vec();
    a.sort_unstable();
    e.sort_unstable();
    a == e
}

fn sandwich_zero(ops: &OperatorSet, a: &AlgebraSpan, name: &str) -> bool {
    let v = ops.space();
    let g = AlgebraSpan::generated_by(&ops.select(&[name]).unwrap(), a.kind()).unwrap();
    let right = span_product(v, a.span(), g.span()).unwrap();
    span_product(v, g.span(), &right).unwrap().is_zero()
}

/// Rebuilds every object and checks every claim of the construction.
pub fn run_full_report() -> CounterexampleReport {
    let ops = build_operators();
    let v = ops.space().clone();
    let mut claims = Claims(Vec::new());

    // The associative algebra A.
    let a = associative_closure(&ops).unwrap();
    claims.add("dim_A", a.dim() == 10, format!("dim A = {}", a.dim()));
    claims.add(
        "A_spanning_words",
        same_words(&a.words(), &A_WORDS),
        a.words().join(", "),
    );
    let listed_monomials: Vec<LinearMap> = A_WORDS
        .iter()
        .map(|w| ops.evaluate_product(&ops.parse_word(w).unwrap()).unwrap())
        .collect();
    let flat: Vec<_> = listed_monomials.iter().map(LinearMap::flatten).collect();
    let rank = rref(v.dim() * v.dim(), &flat).unwrap().dim();
    claims.add(
        "A_monomials_independent",
        rank == 10,
        format!("rank {rank}"),
    );

    // α_1..α_10 over A_WORDS; evaluation on a, then b2, then b1.
    let on_a = evaluation_constraints(&listed_monomials, &v.vector("a").unwrap()).unwrap();
    let expected_a = unit_rows(10, &[&[0], &[1], &[2], &[3], &[5], &[8], &[9], &[6, 7]]);
    claims.add(
        "independence_on_a",
        on_a == expected_a,
        "α1=α2=α3=α4=α6=α9=α10=0 and α7+α8=0",
    );
    let on_b2 = on_a
        .join(&evaluation_constraints(&listed_monomials, &v.vector("b2").unwrap()).unwrap())
        .unwrap();
    claims.add(
        "independence_on_b2",
        on_b2.contains(&unit_rows(10, &[&[4]]).basis()[0]).unwrap(),
        "α5=0",
    );
    let on_b1 = on_b2
        .join(&evaluation_constraints(&listed_monomials, &v.vector("b1").unwrap()).unwrap())
        .unwrap();
    claims.add(
        "independence_on_b1",
        on_b1.contains(&unit_rows(10, &[&[6]]).basis()[0]).unwrap() && on_b1.dim() == 10,
        "α7=0, hence all α vanish",
    );

    let rel_claims = [
        RelationClaim::zero("yx"),
        RelationClaim::zero("xx"),
        RelationClaim::zero("yy"),
        RelationClaim::zero("zz"),
        RelationClaim::equal("xyz", "xzy"),
        RelationClaim::equal("xzy", "zxy"),
    ];
    let rel = check_relations(&ops, &rel_claims).unwrap();
    for (claim, c) in rel_claims.iter().zip(&rel.checks) {
        let name = match &claim.rhs {
            None => format!("{}_zero", claim.lhs),
            Some(rhs) => format!("{}_eq_{rhs}", claim.lhs),
        };
        claims.add(&name, c.holds, c.claim.clone());
    }
    for g in ["x", "y", "z"] {
        claims.add(
            &format!("{g}A{g}_zero"),
            sandwich_zero(&ops, &a, g),
            format!("{g}A{g} = 0"),
        );
    }
    let a2 = span_product(&v, a.span(), a.span()).unwrap();
    let a3 = span_product(&v, &a2, a.span()).unwrap();
    let a4 = span_product(&v, &a3, a.span()).unwrap();
    claims.add(
        "A4_zero",
        a4.is_zero() && !a3.is_zero(),
        format!(
            "dim A^2 = {}, A^3 = {}, A^4 = {}",
            a2.dim(),
            a3.dim(),
            a4.dim()
        ),
    );

    // The Lie algebra g and its triple brackets.
    let g_span = lie_closure(&ops).unwrap();
    claims.add(
        "dim_g",
        g_span.dim() == 7,
        format!("dim g = {}", g_span.dim()),
    );
    claims.add(
        "g_spanning_words",
        g_span.words() == G_WORDS,
        g_span.words().join(", "),
    );
    let op = |n: &str| ops.get(n).unwrap().clone();
    let (x, y, z) = (op("x"), op("y"), op("z"));
    let br = |f: &LinearMap, g: &LinearMap| commutator(f, g).unwrap();
    let word = |w: &str| ops.evaluate_product(&ops.parse_word(w).unwrap()).unwrap();
    let yzx = word("yzx");
    claims.add("bracket_xy_is_xy", br(&x, &y) == word("xy"), "[x,y] = xy");
    claims.add(
        "jacobi_term_xyz",
        br(&br(&x, &y), &z).is_zero(),
        "[[x,y],z] = 0",
    );
    claims.add(
        "jacobi_term_yzx",
        br(&br(&y, &z), &x) == yzx,
        "[[y,z],x] = yzx",
    );
    claims.add(
        "jacobi_term_zxy",
        br(&br(&z, &x), &y) == yzx.scale(&int(-1)),
        "[[z,x],y] = -yzx",
    );

    let built = build_l();
    let g_series = lower_central_series(&built.g.algebra).unwrap();
    claims.add(
        "g_nilpotent",
        g_series.is_nilpotent(),
        format!("lower central series dims {:?}", g_series.dims()),
    );

    // L = g ⋉ V.
    let l = &built.l;
    claims.add("dim_L", l.dim() == 16, format!("dim L = {}", l.dim()));
    let axioms = check_axioms(l);
    claims.add(
        "L_lie_axioms",
        axioms.passed(),
        format!(
            "{} triples checked, {} failures",
            axioms.triples_checked, axioms.jacobi_failures
        ),
    );
    let l_series = lower_central_series(l).unwrap();
    claims.add(
        "L_nilpotent",
        l_series.is_nilpotent(),
        format!("lower central series dims {:?}", l_series.dims()),
    );
    let basis_closed =
        (0..l.dim()).all(|i| (0..l.dim()).all(|j| l.bracket_basis(i, j).support().count() <= 1));
    claims.add(
        "basis_brackets_monomial",
        basis_closed,
        "each basis bracket is 0 or a multiple of one basis element",
    );

    let d1 = nested_bracket(l, &["y", "z", "x", "a"]);
    let d2 = nested_bracket(l, &["x", "y", "z", "a"]);
    claims.add(
        "bracket_yzxa_is_d1",
        d1 == l.element("d1").unwrap(),
        format!("[y,[z,[x,a]]] = {d1}"),
    );
    claims.add(
        "bracket_xyza_is_d2",
        d2 == l.element("d2").unwrap(),
        format!("[x,[y,[z,a]]] = {d2}"),
    );

    // The basis grading and its relations.
    let report = verify_grading(&built.grading);
    claims.add(
        "grading_valid",
        report.valid && report.components == 16,
        format!(
            "{} components, {} violations",
            report.components,
            report.violations.len()
        ),
    );
    let relations = relation_set(&built.grading).unwrap();
    let chains_present = CHAIN_TO_D1
        .iter()
        .chain(&CHAIN_TO_D2)
        .all(|[p, q, t]| relations.contains(p, q, t));
    claims.add(
        "relation_chains_present",
        chains_present,
        "(x,a,b1) (z,b1,c1) (y,c1,d1) and (z,a,b3) (y,b3,c3) (x,c3,d2)",
    );
    let d1_label = relations.index_of("d1").unwrap();
    let d2_label = relations.index_of("d2").unwrap();
    claims.add(
        "d1_d2_distinct_components",
        d1_label != d2_label,
        "d1 and d2 label different components",
    );

    let decision = decide(&relations).unwrap();
    let summary = summarize(&relations, &decision);
    let peak = ExponentVector::from_counts(
        relations
            .labels()
            .iter()
            .map(|l| u32::from(["x", "y", "z", "a"].contains(&l.as_str())))
            .collect(),
    )
    .unwrap();
    let (not_embeddable, exact_pair, through_peak) = match &decision {
        Decision::NotEmbeddable {
            certificate,
            collisions,
        } => (
            true,
            collisions.len() == 1
                && collisions[0] == [d1_label, d2_label]
                && [certificate.label_a, certificate.label_b] == [d1_label, d2_label],
            certificate.vectors().contains(&peak),
        ),
        Decision::Embeddable { .. } => (false, false, false),
    };
    claims.add(
        "not_embeddable",
        not_embeddable,
        format!("verdict {}", decision.verdict()),
    );
    claims.add(
        "collision_is_d1_d2",
        exact_pair,
        format!("colliding labels {:?}", summary.colliding_labels),
    );
    claims.add(
        "chain_through_xyza",
        through_peak,
        summary.chain.join(" = "),
    );
    let oracle = bfs_oracle(&relations, 4, Limits::default().max_vectors).unwrap();
    claims.add(
        "oracle_degree_4",
        oracle.collides(d1_label, d2_label),
        "bounded search to degree 4 merges d1 and d2",
    );

    CounterexampleReport {
        dim_a: a.dim(),
        dim_g: g_span.dim(),
        dim_l: l.dim(),
        words_a: a.words(),
        words_g: g_span.words(),
        nilpotency_class_g: g_series.class(),
        nilpotency_class_l: l_series.class(),
        relation_count: relations.triples().len(),
        bracket_evaluations: vec![
            ("[y,[z,[x,a]]]".into(), d1.to_string()),
            ("[x,[y,[z,a]]]".into(), d2.to_string()),
        ],
        claims: claims.0,
        decision: summary,
    }
}

/// Flattens a decision into printable pieces.
pub fn summarize(relations: &RelationSet, decision: &Decision) -> DecisionSummary {
    match decision {
        Decision::Embeddable { .. } => DecisionSummary {
            verdict: decision.verdict().to_string(),
            colliding_labels: Vec::new(),
            chain: Vec::new(),
            cited_relations: Vec::new(),
            certificate_text: String::new(),
            certificate_brackets: String::new(),
        },
        Decision::NotEmbeddable { certificate, .. } => {
            let (a, b) = certificate.colliding_labels();
            DecisionSummary {
                verdict: decision.verdict().to_string(),
                colliding_labels: vec![a.to_string(), b.to_string()],
                chain: certificate
                    .vectors()
                    .iter()
                    .map(|v| v.render(relations.labels()))
                    .collect(),
                cited_relations: certificate
                    .cited_relations()
                    .into_iter()
                    .map(|i| relations.named(&relations.triples()[i]).map(String::from))
                    .collect(),
                certificate_text: render_certificate(
                    certificate,
                    relations,
                    CertificateStyle::Text,
                )
                .expect("decide returns replayed certificates"),
                certificate_brackets: render_certificate(
                    certificate,
                    relations,
                    CertificateStyle::Bracket,
                )
                .unwrap_or_default(),
            }
        }
    }
}
