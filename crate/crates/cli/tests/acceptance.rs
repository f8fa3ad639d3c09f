//! Acceptance suite: one line per criterion, exact arithmetic throughout.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use liegrade::counterexample::{build_l, build_operators, nested_bracket, A_WORDS, G_WORDS};
use liegrade::semigroup::reduce_by;
use liegrade::{
    associative_closure, bfs_oracle, check_axioms, check_relations, complete, decide, int,
    lie_closure, lower_central_series, relation_set, span_product, verify_grading, AlgebraSpan,
    ClosureKind, Decision, ExponentVector, OperatorSet, RelationClaim, RelationSet, Subspace,
    Triple,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let ops = build_operators();
    let a = associative_closure(&ops).map_err(|e| e.to_string())?;
    ensure(a.dim() == 10, format!("dim A = {}", a.dim()))?;
    let words: Vec<Vec<String>> = A_WORDS
        .iter()
        .map(|w| w.chars().map(String::from).collect())
        .collect();
    let maps: Vec<_> = words
        .iter()
        .map(|w| ops.evaluate_product(w).unwrap().flatten())
        .collect();
    let rank = liegrade::rref(81, &maps).unwrap().dim();
    ensure(rank == 10, format!("listed monomials have rank {rank}"))?;
    Ok("dim A = 10, listed monomials rank 10".into())
}

fn single(ops: &OperatorSet, name: &str) -> Subspace {
    AlgebraSpan::generated_by(&ops.select(&[name]).unwrap(), ClosureKind::Associative)
        .unwrap()
        .span()
        .clone()
}

fn criterion_2() -> Outcome {
    let ops = build_operators();
    let claims = [
        RelationClaim::zero("yx"),
        RelationClaim::zero("xx"),
        RelationClaim::zero("yy"),
        RelationClaim::zero("zz"),
        RelationClaim::equal("xyz", "xzy"),
        RelationClaim::equal("xzy", "zxy"),
    ];
    let report = check_relations(&ops, &claims).map_err(|e| e.to_string())?;
    ensure(report.all_hold(), "an operator relation fails")?;
    let v = ops.space();
    let a = associative_closure(&ops).unwrap();
    for g in ["x", "y", "z"] {
        let s = single(&ops, g);
        let sandwich = span_product(v, &s, &span_product(v, a.span(), &s).unwrap()).unwrap();
        ensure(sandwich.is_zero(), format!("{g}A{g} is not zero"))?;
    }
    let mut power = a.span().clone();
    for _ in 1..4 {
        power = span_product(v, &power, a.span()).unwrap();
    }
    ensure(power.is_zero(), "A^4 is not zero")?;
    Ok("yx = x^2 = y^2 = z^2 = 0, xyz = xzy = zxy, xAx = yAy = zAz = 0, A^4 = 0".into())
}

fn criterion_3() -> Outcome {
    let ops = build_operators();
    let g = lie_closure(&ops).map_err(|e| e.to_string())?;
    ensure(g.dim() == 7, format!("dim g = {}", g.dim()))?;
    ensure(g.words() == G_WORDS, format!("words {:?}", g.words()))?;
    let p = |w: &str| {
        ops.evaluate_product(&w.chars().map(String::from).collect::<Vec<_>>())
            .unwrap()
    };
    let c = |a: &liegrade::LinearMap, b: &liegrade::LinearMap| liegrade::commutator(a, b).unwrap();
    let (x, y, z) = (p("x"), p("y"), p("z"));
    ensure(c(&c(&x, &y), &z).is_zero(), "[[x,y],z] != 0")?;
    ensure(c(&c(&y, &z), &x) == p("yzx"), "[[y,z],x] != yzx")?;
    ensure(
        c(&c(&z, &x), &y) == p("yzx").scale(&int(-1)),
        "[[z,x],y] != -yzx",
    )?;
    Ok("dim g = 7, words match, triple brackets hold".into())
}

fn criterion_4() -> Outcome {
    let c = build_l();
    ensure(c.l.dim() == 16, format!("dim L = {}", c.l.dim()))?;
    let axioms = check_axioms(&c.l);
    ensure(axioms.passed(), format!("{:?}", axioms.first_violation))?;
    ensure(
        axioms.triples_checked == 16 * 16 * 16,
        "not every triple checked",
    )?;
    let sg = lower_central_series(&c.g.algebra).unwrap();
    let sl = lower_central_series(&c.l).unwrap();
    ensure(
        sg.is_nilpotent() && sl.is_nilpotent(),
        "series does not reach 0",
    )?;
    Ok(format!(
        "dim L = 16, {} Jacobi triples exact, series g {:?}, L {:?}",
        axioms.triples_checked,
        sg.dims(),
        sl.dims()
    ))
}

fn criterion_5() -> Outcome {
    let c = build_l();
    let report = verify_grading(&c.grading);
    ensure(
        report.valid,
        format!("{} violations", report.violations.len()),
    )?;
    ensure(
        report.components == 16,
        format!("{} components", report.components),
    )?;
    ensure(
        c.grading.components().iter().all(|s| !s.is_zero()),
        "zero component",
    )?;
    Ok("fine grading valid, 16 nonzero components".into())
}

fn criterion_6() -> Outcome {
    let c = build_l();
    let r = relation_set(&c.grading).map_err(|e| e.to_string())?;
    let decision = decide(&r).map_err(|e| e.to_string())?;
    let Decision::NotEmbeddable {
        certificate,
        collisions,
    } = &decision
    else {
        return Err("decided EMBEDDABLE".into());
    };
    let names: Vec<Vec<&str>> = collisions
        .iter()
        .map(|cl| cl.iter().map(|&i| r.labels()[i].as_str()).collect())
        .collect();
    ensure(names == [["d1", "d2"]], format!("collisions {names:?}"))?;
    certificate.replay(&r).map_err(|e| e.to_string())?;
    let mut via = vec![0u32; r.labels().len()];
    for l in ["x", "y", "z", "a"] {
        via[r.index_of(l).unwrap()] = 1;
    }
    let via = ExponentVector::from_counts(via).unwrap();
    ensure(certificate.vectors().contains(&via), "chain avoids x+y+z+a")?;
    let (d1, d2) = (r.index_of("d1").unwrap(), r.index_of("d2").unwrap());
    let oracle = bfs_oracle(&r, 4, 10_000_000).map_err(|e| e.to_string())?;
    ensure(oracle.collides(d1, d2), "oracle at degree 4 misses d1 ~ d2")?;
    Ok(format!(
        "NOT_EMBEDDABLE, collision {{d1, d2}}, replayed chain of {} steps through x+y+z+a, oracle degree 4 agrees",
        certificate.steps.len()
    ))
}

fn criterion_7() -> Outcome {
    let c = build_l();
    let d1 = nested_bracket(&c.l, &["y", "z", "x", "a"]);
    let d2 = nested_bracket(&c.l, &["x", "y", "z", "a"]);
    ensure(
        d1 == c.l.space().vector("d1").unwrap(),
        format!("[y,[z,[x,a]]] = {d1}"),
    )?;
    ensure(
        d2 == c.l.space().vector("d2").unwrap(),
        format!("[x,[y,[z,a]]] = {d2}"),
    )?;
    Ok("[y,[z,[x,a]]] = d1, [x,[y,[z,a]]] = d2".into())
}

fn random_relations(rng: &mut StdRng) -> RelationSet {
    let n = rng.gen_range(1..=8usize);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let count = rng.gen_range(0..=12usize.min(pairs.len()));
    let triples: Vec<Triple> = pairs[..count]
        .iter()
        .map(|&(left, right)| Triple {
            left,
            right,
            target: rng.gen_range(0..n),
        })
        .collect();
    let labels = (0..n).map(|i| format!("g{i}")).collect();
    RelationSet::from_indices(labels, triples).unwrap()
}

fn random_vector(rng: &mut StdRng, n: usize) -> ExponentVector {
    let mut counts = vec![0u32; n];
    for _ in 0..rng.gen_range(1..=6) {
        counts[rng.gen_range(0..n)] += 1;
    }
    ExponentVector::from_counts(counts).unwrap()
}

fn collision_names(d: &Decision, labels: &[String]) -> BTreeSet<BTreeSet<String>> {
    match d {
        Decision::Embeddable { .. } => BTreeSet::new(),
        Decision::NotEmbeddable { collisions, .. } => collisions
            .iter()
            .map(|c| c.iter().map(|&i| labels[i].clone()).collect())
            .collect(),
    }
}

fn criterion_8() -> Outcome {
    const SETS: usize = 500;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut not_embeddable = 0;
    for case in 0..SETS {
        let r = random_relations(&mut rng);
        let n = r.labels().len();
        let system = complete(&r).map_err(|e| e.to_string())?;
        let rules = system.rules();
        // (a) confluence
        for _ in 0..10 {
            let v = random_vector(&mut rng, n);
            let other = reduce_by(&v, &rules, |c| rng.gen_range(0..c.len()));
            ensure(
                other == system.normal_form(&v),
                format!("case {case}: reduction order matters"),
            )?;
        }
        // (b) decide / oracle agreement
        let d = decide(&r).map_err(|e| e.to_string())?;
        let oracle = bfs_oracle(&r, 6, 10_000_000).map_err(|e| e.to_string())?;
        if d.is_embeddable() {
            ensure(
                !oracle.found_collision(),
                format!("case {case}: oracle collides"),
            )?;
        } else {
            not_embeddable += 1;
            let classes = collision_names(&d, r.labels());
            for i in 0..n {
                for j in i + 1..n {
                    if oracle.collides(i, j) {
                        let pair = BTreeSet::from([r.labels()[i].clone(), r.labels()[j].clone()]);
                        ensure(
                            classes.iter().any(|c| c.is_superset(&pair)),
                            format!("case {case}: oracle pair outside classes"),
                        )?;
                    }
                }
            }
        }
        // (c) property (P) in the quotient
        for t in r.triples() {
            ensure(
                system.normal_form(&ExponentVector::pair(n, t.left, t.right))
                    == system.normal_form(&ExponentVector::unit(n, t.target)),
                format!("case {case}: relation not satisfied"),
            )?;
        }
        // (d) relabelling
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let p = r.reorder(&order).unwrap();
        let e = decide(&p).map_err(|e| e.to_string())?;
        ensure(
            collision_names(&d, r.labels()) == collision_names(&e, p.labels()),
            format!("case {case}: verdict depends on label order"),
        )?;
    }
    Ok(format!(
        "{SETS} random sets ({not_embeddable} not embeddable): confluence, oracle agreement, (P), relabelling"
    ))
}

fn criterion_9() -> Outcome {
    let r = RelationSet::new(
        ["e", "f", "h"].map(String::from).to_vec(),
        &[["e", "h", "e"], ["f", "h", "f"], ["e", "f", "h"]],
    )
    .unwrap();
    let system = complete(&r).unwrap();
    let rules: Vec<String> = system
        .rules()
        .iter()
        .map(|x| x.render(r.labels()))
        .collect();
    ensure(
        rules.contains(&"2h -> h".to_string()),
        format!("rules {rules:?}"),
    )?;
    let Decision::Embeddable { normal_forms } = decide(&r).unwrap() else {
        return Err("decided NOT_EMBEDDABLE".into());
    };
    let distinct: BTreeSet<_> = normal_forms.iter().collect();
    ensure(distinct.len() == 3, "normal forms not distinct")?;
    Ok("EMBEDDABLE, three distinct normal forms, rule 2h -> h".into())
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(p).unwrap()
}

fn criterion_10() -> Outcome {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_liegrade"))
            .args(args)
            .output()
            .unwrap()
    };
    let demo = run(&["paper-demo"]);
    ensure(demo.status.code() == Some(0), "paper-demo exit code")?;
    ensure(
        String::from_utf8_lossy(&demo.stdout) == golden("demo.txt"),
        "paper-demo output differs from golden",
    )?;
    let dec = run(&[
        "decide",
        &data("counterexample_operators.json"),
        &data("fine.json"),
        "--certificate",
    ]);
    ensure(dec.status.code() == Some(1), "decide exit code")?;
    let out = String::from_utf8_lossy(&dec.stdout);
    ensure(
        out == golden("decide_certificate.txt"),
        "decide output differs from golden",
    )?;
    for rel in [
        "(x, a, b1)",
        "(z, b1, c1)",
        "(y, c1, d1)",
        "(z, a, b3)",
        "(y, b3, c3)",
        "(x, c3, d2)",
    ] {
        ensure(
            out.contains(rel),
            format!("certificate does not cite {rel}"),
        )?;
    }
    Ok("paper-demo exit 0 pinned, decide --certificate exit 1 cites all six relations".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (n, f) in criteria {
        let t = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("criterion {n:>2}: PASS ({ms} ms) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL ({ms} ms) {msg}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {} ms",
        10 - failed,
        started.elapsed().as_millis()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
