//! Lie gradings `L = ⊕_g L_g` and the relation triples they induce.
//!
//! A decomposition is a grading when every component is nonzero, the
//! components form a direct sum equal to `L`, and for every pair of labels
//! `g, g'` the bracket `[L_g, L_g']` is either zero or lies inside a single
//! component `L_g''`. Each nonzero pair then contributes a triple
//! `(g, g', g'')`, recorded without the scalar.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lie::LieAlgebra;
use crate::linalg::{direct_sum_check, LinalgError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("empty label")]
    EmptyLabel,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("pair {{{0}, {1}}} appears in more than one triple")]
    DuplicatePair(String, String),
    #[error("decomposition is not a Lie grading ({} violation(s))", .0.violations.len())]
    Invalid(GradingReport),
}

fn check_labels(labels: &[String]) -> Result<HashMap<&str, usize>, GradingError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() {
            return Err(GradingError::EmptyLabel);
        }
        if index.insert(l.as_str(), i).is_some() {
            return Err(GradingError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// A labeled decomposition of a Lie algebra into subspaces.
#[derive(Clone, Debug)]
pub struct Grading {
    algebra: LieAlgebra,
    labels: Vec<String>,
    components: Vec<Subspace>,
}

impl Grading {
    /// Validates only the shape (distinct labels, matching dimensions);
    /// use [`verify_grading`] for the grading conditions.
    pub fn new(
        algebra: LieAlgebra,
        components: Vec<(String, Subspace)>,
    ) -> Result<Self, GradingError> {
        let (labels, components): (Vec<_>, Vec<_>) = components.into_iter().unzip();
        check_labels(&labels)?;
        for c in &components {
            if c.ambient_dim() != algebra.dim() {
                return Err(LinalgError::DimensionMismatch {
                    expected: algebra.dim(),
                    found: c.ambient_dim(),
                }
                .into());
            }
        }
        Ok(Self {
            algebra,
            labels,
            components,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn component(&self, label: &str) -> Option<&Subspace> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.components[i])
    }
}

/// The grading by the one-dimensional spans of the basis vectors.
pub fn fine_grading_from_basis(l: &LieAlgebra) -> Grading {
    let n = l.dim();
    let components = (0..n)
        .map(|i| {
            let s = Subspace::span_of(l.space(), &[l.space().basis_vector(i)])
                .expect("basis vector of the algebra's own space");
            (l.space().name(i).to_string(), s)
        })
        .collect();
    Grading::new(l.clone(), components).expect("basis names are distinct")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    ZeroComponent,
    NotDirectSum { dim_sum: usize, dim_algebra: usize },
    NoTargetComponent { bracket_dim: usize },
    SeveralTargetComponents { targets: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The offending label pair; `None` for whole-decomposition failures.
    pub pair: Option<(String, String)>,
    pub reason: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = &self.pair {
            write!(f, "({a}, {b}): ")?;
        }
        match &self.reason {
            ViolationKind::ZeroComponent => f.write_str("component is zero"),
            ViolationKind::NotDirectSum {
                dim_sum,
                dim_algebra,
            } => write!(
                f,
                "components are not a direct sum of the algebra (dimensions sum to {dim_sum}, algebra has {dim_algebra})"
            ),
            ViolationKind::NoTargetComponent { bracket_dim } => write!(
                f,
                "bracket span (dim {bracket_dim}) lies in no single component"
            ),
            ViolationKind::SeveralTargetComponents { targets } => {
                write!(f, "bracket span lies in several components: {}", targets.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub valid: bool,
    pub components: usize,
    pub violations: Vec<Violation>,
    pub relation_count: usize,
}

/// Label indices `(left, right, target)` with `left <= right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub left: usize,
    pub right: usize,
    pub target: usize,
}

fn analyze(g: &Grading) -> (Vec<Violation>, Vec<Triple>) {
    let l = &g.algebra;
    let mut violations = Vec::new();
    let mut triples = Vec::new();
    for (label, c) in g.labels.iter().zip(&g.components) {
        if c.is_zero() {
            violations.push(Violation {
                pair: Some((label.clone(), label.clone())),
                reason: ViolationKind::ZeroComponent,
            });
        }
    }
    let whole = Subspace::full(l.dim());
    if !direct_sum_check(&g.components, &whole).expect("dimensions checked on construction") {
        violations.push(Violation {
            pair: None,
            reason: ViolationKind::NotDirectSum {
                dim_sum: g.components.iter().map(Subspace::dim).sum(),
                dim_algebra: l.dim(),
            },
        });
    }
    let n = g.labels.len();
    for i in 0..n {
        for j in i..n {
            let span = l
                .bracket_span(&g.components[i], &g.components[j])
                .expect("components live in the algebra");
            if span.is_zero() {
                continue;
            }
            let targets: Vec<usize> = (0..n)
                .filter(|&k| g.components[k].contains_subspace(&span).unwrap())
                .collect();
            let pair = Some((g.labels[i].clone(), g.labels[j].clone()));
            match targets[..] {
                [t] => triples.push(Triple {
                    left: i,
                    right: j,
                    target: t,
                }),
                [] => violations.push(Violation {
                    pair,
                    reason: ViolationKind::NoTargetComponent {
                        bracket_dim: span.dim(),
                    },
                }),
                _ => violations.push(Violation {
                    pair,
                    reason: ViolationKind::SeveralTargetComponents {
                        targets: targets.iter().map(|&k| g.labels[k].clone()).collect(),
                    },
                }),
            }
        }
    }
    (violations, triples)
}

/// Checks every grading condition and collects all failures.
pub fn verify_grading(g: &Grading) -> GradingReport {
    let (violations, triples) = analyze(g);
    GradingReport {
        valid: violations.is_empty(),
        components: g.labels.len(),
        relation_count: triples.len(),
        violations,
    }
}

/// The property (P) triples of a valid grading: one per unordered label
/// pair with nonzero bracket.
pub fn relation_set(g: &Grading) -> Result<RelationSet, GradingError> {
    let (violations, triples) = analyze(g);
    if !violations.is_empty() {
        return Err(GradingError::Invalid(GradingReport {
            valid: false,
            components: g.labels.len(),
            relation_count: triples.len(),
            violations,
        }));
    }
    RelationSet::from_indices(g.labels.clone(), triples)
}

/// A label set `G` with triples `(g, g', g'')` meaning `g + g' = g''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSet {
    labels: Vec<String>,
    triples: Vec<Triple>,
}

impl RelationSet {
    pub fn from_indices(labels: Vec<String>, triples: Vec<Triple>) -> Result<Self, GradingError> {
        check_labels(&labels)?;
        let mut seen = std::collections::HashSet::new();
        let mut normalized = Vec::with_capacity(triples.len());
        for t in triples {
            for k in [t.left, t.right, t.target] {
                if k >= labels.len() {
                    return Err(GradingError::UnknownLabel(format!("#{k}")));
                }
            }
            let (left, right) = (t.left.min(t.right), t.left.max(t.right));
            if !seen.insert((left, right)) {
                return Err(GradingError::DuplicatePair(
                    labels[left].clone(),
                    labels[right].clone(),
                ));
            }
            normalized.push(Triple {
                left,
                right,
                target: t.target,
            });
        }
        Ok(Self {
            labels,
            triples: normalized,
        })
    }

    pub fn new<S: AsRef<str>>(
        labels: Vec<String>,
        triples: &[[S; 3]],
    ) -> Result<Self, GradingError> {
        let index = check_labels(&labels)?;
        let idx = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| GradingError::UnknownLabel(s.as_ref().to_string()))
        };
        let triples = triples
            .iter()
            .map(|[a, b, c]| {
                Ok(Triple {
                    left: idx(a)?,
                    right: idx(b)?,
                    target: idx(c)?,
                })
            })
            .collect::<Result<Vec<_>, GradingError>>()?;
        Self::from_indices(labels, triples)
    }

    pub fn empty(labels: Vec<String>) -> Result<Self, GradingError> {
        Self::from_indices(labels, Vec::new())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn named(&self, t: &Triple) -> [&str; 3] {
        [
            self.label(t.left),
            self.label(t.right),
            self.label(t.target),
        ]
    }

    pub fn named_triples(&self) -> impl Iterator<Item = [&str; 3]> {
        self.triples.iter().map(|t| self.named(t))
    }

    /// Whether `(a, b, target)` is present, in either pair orientation.
    pub fn contains(&self, a: &str, b: &str, target: &str) -> bool {
        self.named_triples()
            .any(|[l, r, t]| t == target && ((l == a && r == b) || (l == b && r == a)))
    }

    /// Reorders the labels: new label `i` is old label `order[i]`.
    pub fn reorder(&self, order: &[usize]) -> Result<RelationSet, GradingError> {
        let mut inverse = vec![usize::MAX; self.labels.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let labels = order.iter().map(|&o| self.labels[o].clone()).collect();
        let triples = self
            .triples
            .iter()
            .map(|t| Triple {
                left: inverse[t.left],
                right: inverse[t.right],
                target: inverse[t.target],
            })
            .collect();
        RelationSet::from_indices(labels, triples)
    }
}
