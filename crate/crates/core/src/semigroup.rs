//! Embeddability of a label set into an abelian semigroup with property (P).
//!
//! Given triples `(g, g', g'')`, the question is whether some abelian
//! semigroup contains the labels as distinct elements with `g + g' = g''`
//! for every triple. The quotient `F(G)/≈` of the free abelian semigroup on
//! `G` by the congruence generated by the triples maps into every such
//! semigroup, so an embedding exists iff the labels stay pairwise distinct
//! in that quotient. This is a word problem for a finitely presented
//! commutative semigroup, solved by ground completion on exponent vectors
//! (a binomial Gröbner basis computation under a degree-lexicographic order).
//!
//! When two labels collide, the proof recorded for every rule is unfolded
//! into a chain of single relation applications connecting them. That chain
//! is re-checked step by step before it is handed out.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::grading::{RelationSet, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("chain does not start at the first label")]
    BadStart,
    #[error("chain does not end at the second label")]
    BadEnd,
    #[error("certificate names the same label twice")]
    SameLabel,
    #[error("step {step} cites unknown relation #{relation}")]
    UnknownRelation { step: usize, relation: usize },
    #[error("step {step} is not a single application of its relation")]
    BadStep { step: usize },
    #[error(
        "chain is not an up-then-down sequence of splits and merges; bracket style unavailable"
    )]
    NotNestable,
}

/// An element of the free abelian semigroup on the labels: a nonzero
/// vector of multiplicities, indexed by label position.
///
/// Vectors compare by the term order: total degree first, then
/// lexicographically on the counts in label order, so at equal degree
/// a larger count on an earlier label wins (`2x > x + y` when `x` precedes
/// `y`). The order is compatible with addition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    /// `None` for the zero vector, which is not a semigroup element.
    pub fn from_counts(counts: Vec<u32>) -> Option<Self> {
        counts.iter().any(|&c| c > 0).then_some(Self(counts))
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        Self(v)
    }

    pub fn pair(len: usize, i: usize, j: usize) -> Self {
        let mut v = vec![0; len];
        v[i] += 1;
        v[j] += 1;
        Self(v)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn disjoint(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// `self - divisor` as a (possibly zero) context.
    fn context(&self, divisor: &ExponentVector) -> Vec<u32> {
        debug_assert!(divisor.divides(self));
        self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect()
    }

    /// `context + part`; nonzero because `part` is.
    fn plus_context(part: &ExponentVector, context: &[u32]) -> ExponentVector {
        Self(part.0.iter().zip(context).map(|(a, b)| a + b).collect())
    }

    /// `self - from + to`, when `from` divides `self`.
    pub fn replace(&self, from: &ExponentVector, to: &ExponentVector) -> Option<ExponentVector> {
        from.divides(self)
            .then(|| Self::plus_context(to, &self.context(from)))
    }

    /// `"x+y+2h"`, terms in label order.
    pub fn render(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            if c > 1 {
                let _ = write!(out, "{c}");
            }
            out.push_str(&labels[i]);
        }
        out
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Strict comparison in the term order.
pub fn term_order_less(u: &ExponentVector, v: &ExponentVector) -> bool {
    u < v
}

fn relation_sides(n: usize, t: &Triple) -> (ExponentVector, ExponentVector) {
    (
        ExponentVector::pair(n, t.left, t.right),
        ExponentVector::unit(n, t.target),
    )
}

/// An oriented rule `lhs → rhs` with `lhs > rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: usize,
    pub lhs: ExponentVector,
    pub rhs: ExponentVector,
}

impl RewriteRule {
    pub fn render(&self, labels: &[String]) -> String {
        format!("{} -> {}", self.lhs.render(labels), self.rhs.render(labels))
    }
}

/// Rewrites `v` with the first applicable rule, in list order, until no
/// rule applies.
pub fn reduce(v: &ExponentVector, rules: &[RewriteRule]) -> ExponentVector {
    reduce_by(v, rules, |_| 0)
}

/// Like [`reduce`], but `pick` chooses among the indices of the applicable
/// rules at each step.
pub fn reduce_by(
    v: &ExponentVector,
    rules: &[RewriteRule],
    mut pick: impl FnMut(&[usize]) -> usize,
) -> ExponentVector {
    let mut cur = v.clone();
    loop {
        let applicable: Vec<usize> = rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.lhs.divides(&cur))
            .map(|(i, _)| i)
            .collect();
        if applicable.is_empty() {
            return cur;
        }
        let r = &rules[applicable[pick(&applicable) % applicable.len()]];
        cur = cur.replace(&r.lhs, &r.rhs).unwrap();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Relation(usize),
    Rule(usize),
}

/// One rewrite `context + lhs ↔ context + rhs` of a relation or rule.
#[derive(Clone, Debug)]
struct Step {
    source: Source,
    context: Vec<u32>,
    forward: bool,
}

type Path = Vec<Step>;

fn reversed(path: Path) -> Path {
    path.into_iter()
        .rev()
        .map(|s| Step {
            forward: !s.forward,
            ..s
        })
        .collect()
}

#[derive(Clone, Debug)]
struct Record {
    lhs: ExponentVector,
    rhs: ExponentVector,
    /// Derivation from `lhs` to `rhs` using input relations and earlier rules.
    proof: Path,
}

struct Equation {
    lhs: ExponentVector,
    rhs: ExponentVector,
    proof: Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on rules created during completion.
    pub max_rules: usize,
    /// Upper bound on vectors enumerated by the bounded searches.
    pub max_vectors: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_rules: 100_000,
            max_vectors: 10_000_000,
        }
    }
}

/// A confluent, interreduced rule system for the congruence of a relation set.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    relations: RelationSet,
    records: Vec<Record>,
    active: Vec<usize>,
}

struct Completer<'a> {
    relations: &'a RelationSet,
    n: usize,
    records: Vec<Record>,
    active: Vec<usize>,
    queue: VecDeque<Equation>,
    limits: Limits,
}

impl Completer<'_> {
    fn normalize(&self, v: &ExponentVector) -> (ExponentVector, Path) {
        let mut cur = v.clone();
        let mut path = Vec::new();
        'outer: loop {
            for &k in &self.active {
                let r = &self.records[k];
                if r.lhs.divides(&cur) {
                    let context = cur.context(&r.lhs);
                    cur = ExponentVector::plus_context(&r.rhs, &context);
                    path.push(Step {
                        source: Source::Rule(k),
                        context,
                        forward: true,
                    });
                    continue 'outer;
                }
            }
            return (cur, path);
        }
    }

    fn joinable(&self, a: &ExponentVector, b: &ExponentVector) -> bool {
        self.normalize(a).0 == self.normalize(b).0
    }

    fn push_record(&mut self, record: Record) -> Result<usize, DecideError> {
        if self.records.len() >= self.limits.max_rules {
            return Err(DecideError::ResourceLimit {
                what: "rewrite rules",
                limit: self.limits.max_rules,
            });
        }
        self.records.push(record);
        Ok(self.records.len() - 1)
    }

    fn critical_pair(&self, a: usize, b: usize) -> Option<Equation> {
        let (ra, rb) = (&self.records[a], &self.records[b]);
        if ra.lhs.disjoint(&rb.lhs) {
            // Coprime left sides always join: both reducts rewrite to the
            // sum of the right sides.
            return None;
        }
        let m = ra.lhs.lcm(&rb.lhs);
        let ca = m.context(&ra.lhs);
        let cb = m.context(&rb.lhs);
        Some(Equation {
            lhs: ExponentVector::plus_context(&ra.rhs, &ca),
            rhs: ExponentVector::plus_context(&rb.rhs, &cb),
            proof: vec![
                Step {
                    source: Source::Rule(a),
                    context: ca,
                    forward: false,
                },
                Step {
                    source: Source::Rule(b),
                    context: cb,
                    forward: true,
                },
            ],
        })
    }

    fn add_rule(
        &mut self,
        lhs: ExponentVector,
        rhs: ExponentVector,
        proof: Path,
    ) -> Result<(), DecideError> {
        let id = self.push_record(Record {
            lhs: lhs.clone(),
            rhs,
            proof,
        })?;
        let old = std::mem::take(&mut self.active);
        let mut kept = Vec::with_capacity(old.len());
        let mut rhs_dirty = Vec::new();
        for k in old {
            let r = &self.records[k];
            if lhs.divides(&r.lhs) {
                self.queue.push_back(Equation {
                    lhs: r.lhs.clone(),
                    rhs: r.rhs.clone(),
                    proof: vec![Step {
                        source: Source::Rule(k),
                        context: vec![0; self.n],
                        forward: true,
                    }],
                });
            } else {
                if lhs.divides(&r.rhs) {
                    rhs_dirty.push(kept.len());
                }
                kept.push(k);
            }
        }
        kept.push(id);
        self.active = kept;
        for pos in rhs_dirty {
            let k = self.active[pos];
            let (nf, tail) = self.normalize(&self.records[k].rhs.clone());
            let mut proof = vec![Step {
                source: Source::Rule(k),
                context: vec![0; self.n],
                forward: true,
            }];
            proof.extend(tail);
            let replacement = self.push_record(Record {
                lhs: self.records[k].lhs.clone(),
                rhs: nf,
                proof,
            })?;
            self.active[pos] = replacement;
        }
        let others: Vec<usize> = self.active.iter().copied().filter(|&k| k != id).collect();
        for k in others {
            if let Some(eq) = self.critical_pair(id, k) {
                self.queue.push_back(eq);
            }
        }
        Ok(())
    }

    fn process(&mut self, eq: Equation) -> Result<(), DecideError> {
        let (a, pa) = self.normalize(&eq.lhs);
        let (b, pb) = self.normalize(&eq.rhs);
        if a == b {
            return Ok(());
        }
        let mut proof = reversed(pa);
        proof.extend(eq.proof);
        proof.extend(pb);
        match a.cmp(&b) {
            Ordering::Greater => self.add_rule(a, b, proof),
            _ => self.add_rule(b, a, reversed(proof)),
        }
    }

    /// Equations that are not yet joinable: input relations and critical
    /// pairs of the current rules.
    fn unresolved(&self) -> Vec<Equation> {
        let mut out = Vec::new();
        for (i, t) in self.relations.triples().iter().enumerate() {
            let (l, r) = relation_sides(self.n, t);
            if !self.joinable(&l, &r) {
                out.push(Equation {
                    lhs: l,
                    rhs: r,
                    proof: vec![Step {
                        source: Source::Relation(i),
                        context: vec![0; self.n],
                        forward: true,
                    }],
                });
            }
        }
        for (x, &a) in self.active.iter().enumerate() {
            for &b in &self.active[x + 1..] {
                if let Some(eq) = self.critical_pair(a, b) {
                    if !self.joinable(&eq.lhs, &eq.rhs) {
                        out.push(eq);
                    }
                }
            }
        }
        out
    }
}

/// Runs completion with default limits.
pub fn complete(relations: &RelationSet) -> Result<RewriteSystem, DecideError> {
    complete_with(relations, Limits::default())
}

/// Ground completion over the relation triples: FIFO over pending
/// equations, interreducing after every new rule, until every input
/// relation and every critical pair is joinable.
pub fn complete_with(
    relations: &RelationSet,
    limits: Limits,
) -> Result<RewriteSystem, DecideError> {
    let n = relations.labels().len();
    let mut c = Completer {
        relations,
        n,
        records: Vec::new(),
        active: Vec::new(),
        queue: VecDeque::new(),
        limits,
    };
    for (i, t) in relations.triples().iter().enumerate() {
        let (lhs, rhs) = relation_sides(n, t);
        c.queue.push_back(Equation {
            lhs,
            rhs,
            proof: vec![Step {
                source: Source::Relation(i),
                context: vec![0; n],
                forward: true,
            }],
        });
    }
    loop {
        while let Some(eq) = c.queue.pop_front() {
            c.process(eq)?;
        }
        let pending = c.unresolved();
        if pending.is_empty() {
            break;
        }
        c.queue.extend(pending);
    }
    Ok(RewriteSystem {
        relations: relations.clone(),
        records: c.records,
        active: c.active,
    })
}

/// A single application of an input relation inside a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    /// Index into the relation set's triples.
    pub relation: usize,
    /// `true` merges `g + g'` into `g''`; `false` splits `g''` into `g + g'`.
    pub forward: bool,
    pub to: ExponentVector,
}

impl Serialize for ExponentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// One application of an input relation: index, context, direction.
type RelationUse = (usize, Vec<u32>, bool);

impl RewriteSystem {
    pub fn relations(&self) -> &RelationSet {
        &self.relations
    }

    /// Active rules, sorted by left side in the term order.
    pub fn rules(&self) -> Vec<RewriteRule> {
        let mut rules: Vec<_> = self
            .active
            .iter()
            .map(|&k| RewriteRule {
                id: k,
                lhs: self.records[k].lhs.clone(),
                rhs: self.records[k].rhs.clone(),
            })
            .collect();
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        rules
    }

    /// Total number of rules created, including ones later retired.
    pub fn rules_created(&self) -> usize {
        self.records.len()
    }

    pub fn normal_form(&self, v: &ExponentVector) -> ExponentVector {
        let mut cur = v.clone();
        while let Some(r) = self
            .active
            .iter()
            .map(|&k| &self.records[k])
            .find(|r| r.lhs.divides(&cur))
        {
            cur = cur.replace(&r.lhs, &r.rhs).unwrap();
        }
        cur
    }

    fn normalize_path(&self, v: &ExponentVector) -> (ExponentVector, Path) {
        let mut cur = v.clone();
        let mut path = Vec::new();
        while let Some(&k) = self
            .active
            .iter()
            .find(|&&k| self.records[k].lhs.divides(&cur))
        {
            let r = &self.records[k];
            let context = cur.context(&r.lhs);
            cur = ExponentVector::plus_context(&r.rhs, &context);
            path.push(Step {
                source: Source::Rule(k),
                context,
                forward: true,
            });
        }
        (cur, path)
    }

    /// Unfolds a path into input-relation applications, starting at `start`.
    fn unfold(&self, start: &ExponentVector, path: &Path) -> Vec<ChainStep> {
        let mut memo: HashMap<usize, Vec<(usize, Vec<u32>, bool)>> = HashMap::new();
        let mut flat = Vec::new();
        for s in path {
            self.unfold_step(s, &mut memo, &mut flat);
        }
        let n = self.relations.labels().len();
        let mut cur = start.clone();
        flat.into_iter()
            .map(|(relation, context, forward)| {
                let (l, r) = relation_sides(n, &self.relations.triples()[relation]);
                let (from, to) = if forward { (l, r) } else { (r, l) };
                debug_assert_eq!(cur, ExponentVector::plus_context(&from, &context));
                cur = ExponentVector::plus_context(&to, &context);
                ChainStep {
                    relation,
                    forward,
                    to: cur.clone(),
                }
            })
            .collect()
    }

    fn unfold_step(
        &self,
        step: &Step,
        memo: &mut HashMap<usize, Vec<RelationUse>>,
        out: &mut Vec<RelationUse>,
    ) {
        match step.source {
            Source::Relation(i) => out.push((i, step.context.clone(), step.forward)),
            Source::Rule(k) => {
                if !memo.contains_key(&k) {
                    let mut inner = Vec::new();
                    for s in &self.records[k].proof {
                        self.unfold_step(s, memo, &mut inner);
                    }
                    memo.insert(k, inner);
                }
                let shift = |c: &[u32]| -> Vec<u32> {
                    c.iter().zip(&step.context).map(|(a, b)| a + b).collect()
                };
                let inner = &memo[&k];
                if step.forward {
                    out.extend(inner.iter().map(|(i, c, f)| (*i, shift(c), *f)));
                } else {
                    out.extend(inner.iter().rev().map(|(i, c, f)| (*i, shift(c), !*f)));
                }
            }
        }
    }
}

/// A replayable proof that two distinct labels are equal in `F(G)/≈`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionCertificate {
    pub labels: Vec<String>,
    pub label_a: usize,
    pub label_b: usize,
    pub steps: Vec<ChainStep>,
}

impl CollisionCertificate {
    pub fn start(&self) -> ExponentVector {
        ExponentVector::unit(self.labels.len(), self.label_a)
    }

    /// Every vector on the chain, endpoints included.
    pub fn vectors(&self) -> Vec<ExponentVector> {
        std::iter::once(self.start())
            .chain(self.steps.iter().map(|s| s.to.clone()))
            .collect()
    }

    pub fn colliding_labels(&self) -> (&str, &str) {
        (&self.labels[self.label_a], &self.labels[self.label_b])
    }

    /// Distinct relation indices cited, in order of first use.
    pub fn cited_relations(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for s in &self.steps {
            if !out.contains(&s.relation) {
                out.push(s.relation);
            }
        }
        out
    }

    /// Re-checks every step against the relation set.
    pub fn replay(&self, relations: &RelationSet) -> Result<(), CertificateError> {
        let n = relations.labels().len();
        if self.label_a == self.label_b {
            return Err(CertificateError::SameLabel);
        }
        if self.labels.len() != n || self.label_a >= n || self.label_b >= n {
            return Err(CertificateError::BadStart);
        }
        let mut cur = self.start();
        for (i, s) in self.steps.iter().enumerate() {
            let t =
                relations
                    .triples()
                    .get(s.relation)
                    .ok_or(CertificateError::UnknownRelation {
                        step: i,
                        relation: s.relation,
                    })?;
            let (l, r) = relation_sides(n, t);
            let (from, to) = if s.forward { (&l, &r) } else { (&r, &l) };
            match cur.replace(from, to) {
                Some(next) if next == s.to => cur = next,
                _ => return Err(CertificateError::BadStep { step: i }),
            }
        }
        if cur != ExponentVector::unit(n, self.label_b) {
            return Err(CertificateError::BadEnd);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStyle {
    Text,
    Bracket,
}

/// Human-readable derivation. Re-verifies the chain first.
pub fn render_certificate(
    cert: &CollisionCertificate,
    relations: &RelationSet,
    style: CertificateStyle,
) -> Result<String, CertificateError> {
    cert.replay(relations)?;
    match style {
        CertificateStyle::Text => Ok(render_text(cert, relations)),
        CertificateStyle::Bracket => render_brackets(cert, relations),
    }
}

fn render_text(cert: &CollisionCertificate, relations: &RelationSet) -> String {
    let labels = &cert.labels;
    let vectors = cert.vectors();
    let mut out = vectors
        .iter()
        .map(|v| v.render(labels))
        .collect::<Vec<_>>()
        .join(" = ");
    out.push('\n');
    for (i, s) in cert.steps.iter().enumerate() {
        let [l, r, t] = relations.named(&relations.triples()[s.relation]);
        let arrow = if s.forward { "merge" } else { "split" };
        let _ = writeln!(
            out,
            "  {:>2}. {} = {}   {arrow} by ({l}, {r}, {t})",
            i + 1,
            vectors[i].render(labels),
            vectors[i + 1].render(labels),
        );
    }
    out
}

/// Builds the nested bracket that a run of merges produces from the peak.
fn nest(
    peak: &ExponentVector,
    merges: &[&ChainStep],
    relations: &RelationSet,
) -> Result<String, CertificateError> {
    let mut items: Vec<(usize, String)> = Vec::new();
    for (i, &c) in peak.counts().iter().enumerate() {
        for _ in 0..c {
            items.push((i, relations.label(i).to_string()));
        }
    }
    for s in merges {
        let t = &relations.triples()[s.relation];
        let take = |items: &mut Vec<(usize, String)>, label: usize| {
            let pos = items.iter().position(|(l, _)| *l == label)?;
            Some(items.remove(pos).1)
        };
        let left = take(&mut items, t.left).ok_or(CertificateError::NotNestable)?;
        let right = take(&mut items, t.right).ok_or(CertificateError::NotNestable)?;
        items.push((t.target, format!("[{left},{right}]")));
    }
    match &items[..] {
        [(_, expr)] => Ok(expr.clone()),
        _ => Err(CertificateError::NotNestable),
    }
}

fn render_brackets(
    cert: &CollisionCertificate,
    relations: &RelationSet,
) -> Result<String, CertificateError> {
    let splits = cert.steps.iter().take_while(|s| !s.forward).count();
    if splits == 0 || cert.steps[splits..].iter().any(|s| !s.forward) {
        return Err(CertificateError::NotNestable);
    }
    let vectors = cert.vectors();
    let peak = &vectors[splits];
    // Read the splits backwards from the peak: each is a merge toward label_a.
    let up: Vec<&ChainStep> = cert.steps[..splits].iter().rev().collect();
    let down: Vec<&ChainStep> = cert.steps[splits..].iter().collect();
    let left = nest(peak, &up, relations)?;
    let right = nest(peak, &down, relations)?;
    let (a, b) = cert.colliding_labels();
    Ok(format!(
        "{left} -> {a}\n{right} -> {b}\nboth have weight {}, so {a} = {} = {b}\n",
        peak.render(&cert.labels),
        peak.render(&cert.labels),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Normal forms of the labels in `F(G)/≈`, pairwise distinct.
    Embeddable { normal_forms: Vec<ExponentVector> },
    NotEmbeddable {
        certificate: CollisionCertificate,
        /// Classes of labels with equal normal forms, each of size ≥ 2.
        collisions: Vec<Vec<usize>>,
    },
}

impl Decision {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, Decision::Embeddable { .. })
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            Decision::Embeddable { .. } => "EMBEDDABLE",
            Decision::NotEmbeddable { .. } => "NOT_EMBEDDABLE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecisionOutcome {
    pub decision: Decision,
    pub system: RewriteSystem,
}

pub fn decide(relations: &RelationSet) -> Result<Decision, DecideError> {
    Ok(decide_with(relations, Limits::default())?.decision)
}

/// Completes the relations and compares the normal forms of the labels.
pub fn decide_with(
    relations: &RelationSet,
    limits: Limits,
) -> Result<DecisionOutcome, DecideError> {
    let system = complete_with(relations, limits)?;
    let n = relations.labels().len();
    let units: Vec<_> = (0..n).map(|i| ExponentVector::unit(n, i)).collect();
    let nfs: Vec<_> = units.iter().map(|u| system.normal_form(u)).collect();

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<&ExponentVector, usize> = HashMap::new();
    for (i, nf) in nfs.iter().enumerate() {
        match seen.get(nf) {
            Some(&c) => classes[c].push(i),
            None => {
                seen.insert(nf, classes.len());
                classes.push(vec![i]);
            }
        }
    }
    classes.retain(|c| c.len() > 1);
    let Some(first) = classes.first() else {
        return Ok(DecisionOutcome {
            decision: Decision::Embeddable { normal_forms: nfs },
            system,
        });
    };
    let (a, b) = (first[0], first[1]);
    let certificate = collision_certificate(&system, a, b, limits)?;
    certificate.replay(relations)?;
    Ok(DecisionOutcome {
        decision: Decision::NotEmbeddable {
            certificate,
            collisions: classes,
        },
        system,
    })
}

const PEAK_SLACK: u32 = 2;

fn collision_certificate(
    system: &RewriteSystem,
    a: usize,
    b: usize,
    limits: Limits,
) -> Result<CollisionCertificate, DecideError> {
    let relations = &system.relations;
    let n = relations.labels().len();
    let ea = ExponentVector::unit(n, a);
    let eb = ExponentVector::unit(n, b);
    let (na, pa) = system.normalize_path(&ea);
    let (nb, pb) = system.normalize_path(&eb);
    debug_assert_eq!(na, nb);
    let mut path = pa;
    path.extend(reversed(pb));
    let steps = drop_cycles(&ea, system.unfold(&ea, &path));
    let bound = steps.iter().map(|s| s.to.degree()).max().unwrap_or(1);
    // A single peak may need to rise above the zigzag's highest vector.
    let steps = (1..=bound + PEAK_SLACK)
        .map_while(|d| peak_chain(relations, &ea, &eb, d, limits.max_vectors))
        .find_map(|c| c)
        .or_else(|| shortest_chain(relations, &ea, &eb, bound, limits.max_vectors))
        .unwrap_or(steps);
    Ok(CollisionCertificate {
        labels: relations.labels().to_vec(),
        label_a: a,
        label_b: b,
        steps,
    })
}

/// Removes detours that return to an already visited vector.
fn drop_cycles(start: &ExponentVector, steps: Vec<ChainStep>) -> Vec<ChainStep> {
    let mut out: Vec<ChainStep> = Vec::new();
    // Vector -> number of steps taken to reach it.
    let mut pos: HashMap<ExponentVector, usize> = HashMap::from([(start.clone(), 0)]);
    for s in steps {
        if let Some(&p) = pos.get(&s.to) {
            for dropped in out.drain(p..) {
                pos.remove(&dropped.to);
            }
            continue;
        }
        pos.insert(s.to.clone(), out.len() + 1);
        out.push(s);
    }
    out
}

fn neighbors(
    relations: &RelationSet,
    v: &ExponentVector,
    max_degree: u32,
) -> Vec<(usize, bool, ExponentVector)> {
    let n = relations.labels().len();
    let mut out = Vec::new();
    for (i, t) in relations.triples().iter().enumerate() {
        let (l, r) = relation_sides(n, t);
        if let Some(w) = v.replace(&l, &r) {
            out.push((i, true, w));
        }
        if v.degree() < max_degree {
            if let Some(w) = v.replace(&r, &l) {
                out.push((i, false, w));
            }
        }
    }
    out
}

/// Vectors reachable from `start` by splits alone, with the split that
/// reached each one.
fn expansions(
    relations: &RelationSet,
    start: &ExponentVector,
    max_degree: u32,
    max_vectors: usize,
) -> Option<HashMap<ExponentVector, Option<(usize, ExponentVector)>>> {
    let n = relations.labels().len();
    let mut parent = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(v) = queue.pop_front() {
        if v.degree() >= max_degree {
            continue;
        }
        for (i, t) in relations.triples().iter().enumerate() {
            let (l, r) = relation_sides(n, t);
            if let Some(w) = v.replace(&r, &l) {
                if !parent.contains_key(&w) {
                    parent.insert(w.clone(), Some((i, v.clone())));
                    queue.push_back(w);
                    if parent.len() > max_vectors {
                        return None;
                    }
                }
            }
        }
    }
    Some(parent)
}

/// A chain that only splits from `from` up to a common expansion and then
/// only merges down to `to`. The peak has the least degree, then the
/// fewest steps, then is largest in the term order. `None` when the
/// search exceeds `max_vectors`, `Some(None)` when no peak exists below
/// `max_degree`.
fn peak_chain(
    relations: &RelationSet,
    from: &ExponentVector,
    to: &ExponentVector,
    max_degree: u32,
    max_vectors: usize,
) -> Option<Option<Vec<ChainStep>>> {
    let up = expansions(relations, from, max_degree, max_vectors)?;
    let down = expansions(relations, to, max_degree, max_vectors)?;
    let trail = |tree: &HashMap<ExponentVector, Option<(usize, ExponentVector)>>,
                 v: &ExponentVector| {
        let mut out = Vec::new();
        let mut cur = v.clone();
        while let Some(Some((i, prev))) = tree.get(&cur) {
            out.push((*i, cur.clone(), prev.clone()));
            cur = prev.clone();
        }
        out
    };
    let Some(peak) = up
        .keys()
        .filter(|v| down.contains_key(*v))
        .min_by(|x, y| {
            let len = |v: &ExponentVector| trail(&up, v).len() + trail(&down, v).len();
            x.degree()
                .cmp(&y.degree())
                .then_with(|| len(x).cmp(&len(y)))
                .then_with(|| y.cmp(x))
        })
        .cloned()
    else {
        return Some(None);
    };
    let mut steps: Vec<ChainStep> = trail(&up, &peak)
        .into_iter()
        .rev()
        .map(|(relation, to, _)| ChainStep {
            relation,
            forward: false,
            to,
        })
        .collect();
    steps.extend(
        trail(&down, &peak)
            .into_iter()
            .map(|(relation, _, prev)| ChainStep {
                relation,
                forward: true,
                to: prev,
            }),
    );
    Some(Some(steps))
}

/// Shortest chain from `from` to `to` through vectors of degree at most
/// `max_degree`. Among shortest chains, each step moves to the largest
/// vector in the term order.
fn shortest_chain(
    relations: &RelationSet,
    from: &ExponentVector,
    to: &ExponentVector,
    max_degree: u32,
    max_vectors: usize,
) -> Option<Vec<ChainStep>> {
    let mut dist: HashMap<ExponentVector, usize> = HashMap::from([(to.clone(), 0)]);
    let mut queue = VecDeque::from([to.clone()]);
    while let Some(v) = queue.pop_front() {
        if dist.contains_key(from) {
            break;
        }
        let d = dist[&v];
        for (_, _, w) in neighbors(relations, &v, max_degree) {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), d + 1);
                queue.push_back(w);
                if dist.len() > max_vectors {
                    return None;
                }
            }
        }
    }
    let mut d = *dist.get(from)?;
    let mut cur = from.clone();
    let mut steps = Vec::with_capacity(d);
    while d > 0 {
        let (relation, forward, next) = neighbors(relations, &cur, max_degree)
            .into_iter()
            .filter(|(_, _, w)| dist.get(w) == Some(&(d - 1)))
            .max_by(|x, y| x.2.cmp(&y.2).then_with(|| y.0.cmp(&x.0)))?;
        steps.push(ChainStep {
            relation,
            forward,
            to: next.clone(),
        });
        cur = next;
        d -= 1;
    }
    Some(steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum OracleResult {
    Collision {
        /// Every colliding label pair `(a, b)` with `a < b`.
        pairs: Vec<(usize, usize)>,
        max_degree: u32,
        vectors: usize,
    },
    /// Inconclusive: nothing merges up to the bound.
    NoCollision { max_degree: u32, vectors: usize },
}

impl OracleResult {
    pub fn found_collision(&self) -> bool {
        matches!(self, OracleResult::Collision { .. })
    }

    pub fn collides(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        matches!(self, OracleResult::Collision { pairs, .. } if pairs.contains(&key))
    }
}

fn count_vectors(n: usize, max_degree: u32) -> u128 {
    // C(n + d, d) - 1 nonzero vectors of degree <= d.
    let d = max_degree as u128;
    let mut c: u128 = 1;
    for k in 1..=d {
        c = c.saturating_mul(n as u128 + k) / k;
    }
    c.saturating_sub(1)
}

fn enumerate(n: usize, max_degree: u32) -> Vec<ExponentVector> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if i == cur.len() {
            if let Some(v) = ExponentVector::from_counts(cur.clone()) {
                out.push(v);
            }
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            go(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, max_degree, &mut vec![0; n], &mut out);
    out
}

/// Brute-force check: merges every pair of vectors of degree at most
/// `max_degree` that differ by one relation application, then looks for
/// two labels in the same class.
pub fn bfs_oracle(
    relations: &RelationSet,
    max_degree: u32,
    max_vectors: usize,
) -> Result<OracleResult, DecideError> {
    assert!(max_degree >= 2, "oracle needs max_degree >= 2");
    let n = relations.labels().len();
    if count_vectors(n, max_degree) > max_vectors as u128 {
        return Err(DecideError::ResourceLimit {
            what: "enumerated vectors",
            limit: max_vectors,
        });
    }
    let all = enumerate(n, max_degree);
    let index: HashMap<&ExponentVector, usize> =
        all.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut classes = UnionFind::<usize>::new(all.len());
    let sides: Vec<_> = relations
        .triples()
        .iter()
        .map(|t| relation_sides(n, t))
        .collect();
    for (i, v) in all.iter().enumerate() {
        for (l, r) in &sides {
            if let Some(w) = v.replace(l, r) {
                classes.union(i, index[&w]);
            }
        }
    }
    let units: Vec<usize> = (0..n).map(|i| index[&ExponentVector::unit(n, i)]).collect();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if classes.equiv(units[a], units[b]) {
                pairs.push((a, b));
            }
        }
    }
    Ok(if pairs.is_empty() {
        OracleResult::NoCollision {
            max_degree,
            vectors: all.len(),
        }
    } else {
        OracleResult::Collision {
            pairs,
            max_degree,
            vectors: all.len(),
        }
    })
}
