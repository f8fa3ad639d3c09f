//! Associative and Lie spans generated by a finite set of operators.
//!
//! Products are written by juxtaposition with the right factor applied
//! first: `xy` is the map `v ↦ x(y(v))`. Brackets are `[f, g] = fg - gf`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    rref, BasedSpace, CoordinateSolver, LinalgError, LinearMap, Scalar, Subspace, Vector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("no generators given")]
    NoGenerators,
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator in `{0}`")]
    UnknownGenerator(String),
}

/// Named endomorphisms of one space, in a fixed order.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    space: BasedSpace,
    maps: Vec<(String, LinearMap)>,
}

impl OperatorSet {
    pub fn new(space: &BasedSpace, maps: Vec<(String, LinearMap)>) -> Result<Self, AlgebraError> {
        for (i, (name, map)) in maps.iter().enumerate() {
            if maps[..i].iter().any(|(n, _)| n == name) {
                return Err(AlgebraError::DuplicateGenerator(name.clone()));
            }
            if map.space() != space {
                return Err(LinalgError::SpaceMismatch.into());
            }
        }
        Ok(Self {
            space: space.clone(),
            maps,
        })
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.maps.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LinearMap)> {
        self.maps.iter().map(|(n, m)| (n.as_str(), m))
    }

    pub fn get(&self, name: &str) -> Option<&LinearMap> {
        self.maps.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// The generators named in `names`, in that order.
    pub fn select(&self, names: &[&str]) -> Result<OperatorSet, AlgebraError> {
        let maps = names
            .iter()
            .map(|&n| {
                self.get(n)
                    .map(|m| (n.to_string(), m.clone()))
                    .ok_or_else(|| AlgebraError::UnknownGenerator(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        OperatorSet::new(&self.space, maps)
    }

    /// Splits a juxtaposed word such as `"yzx"` into generator names,
    /// matching the longest generator name at each position.
    pub fn parse_word(&self, text: &str) -> Result<Vec<String>, AlgebraError> {
        let mut out = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let best = self
                .names()
                .filter(|n| rest.starts_with(n))
                .max_by_key(|n| n.len())
                .ok_or_else(|| AlgebraError::UnknownGenerator(text.to_string()))?;
            out.push(best.to_string());
            rest = &rest[best.len()..];
        }
        if out.is_empty() {
            return Err(AlgebraError::UnknownGenerator(text.to_string()));
        }
        Ok(out)
    }

    /// The product of the named generators, rightmost applied first.
    pub fn evaluate_product(&self, word: &[String]) -> Result<LinearMap, AlgebraError> {
        let mut acc = LinearMap::identity(&self.space);
        for name in word {
            let g = self
                .get(name)
                .ok_or_else(|| AlgebraError::UnknownGenerator(name.clone()))?;
            acc = acc.compose(g)?;
        }
        Ok(acc)
    }
}

/// `f ∘ g`, with `g` applied first.
pub fn compose(f: &LinearMap, g: &LinearMap) -> Result<LinearMap, AlgebraError> {
    Ok(f.compose(g)?)
}

/// `fg - gf`.
pub fn commutator(f: &LinearMap, g: &LinearMap) -> Result<LinearMap, AlgebraError> {
    Ok(f.compose(g)?.sub(&g.compose(f)?)?)
}

/// How a spanning element was produced from the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Gen(String),
    Mul(Box<Word>, Box<Word>),
    Bracket(Box<Word>, Box<Word>),
}

impl Word {
    pub fn gen(name: impl Into<String>) -> Self {
        Word::Gen(name.into())
    }

    pub fn product(a: Word, b: Word) -> Self {
        Word::Mul(Box::new(a), Box::new(b))
    }

    pub fn bracket(a: Word, b: Word) -> Self {
        Word::Bracket(Box::new(a), Box::new(b))
    }

    pub fn len(&self) -> usize {
        match self {
            Word::Gen(_) => 1,
            Word::Mul(a, b) | Word::Bracket(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn evaluate(&self, gens: &OperatorSet) -> Result<LinearMap, AlgebraError> {
        match self {
            Word::Gen(n) => gens
                .get(n)
                .cloned()
                .ok_or_else(|| AlgebraError::UnknownGenerator(n.clone())),
            Word::Mul(a, b) => compose(&a.evaluate(gens)?, &b.evaluate(gens)?),
            Word::Bracket(a, b) => commutator(&a.evaluate(gens)?, &b.evaluate(gens)?),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Gen(n) => f.write_str(n),
            Word::Mul(a, b) => write!(f, "{a}{b}"),
            Word::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureKind {
    Associative,
    Lie,
}

#[derive(Clone, Debug)]
pub struct Monomial {
    pub word: Word,
    pub map: LinearMap,
}

/// A span of maps together with the words that produced its basis.
#[derive(Clone, Debug)]
pub struct AlgebraSpan {
    space: BasedSpace,
    kind: ClosureKind,
    monomials: Vec<Monomial>,
    span: Subspace,
    solver: CoordinateSolver,
}

impl AlgebraSpan {
    fn from_monomials(
        space: &BasedSpace,
        kind: ClosureKind,
        monomials: Vec<Monomial>,
        span: Subspace,
    ) -> Result<Self, AlgebraError> {
        let flat: Vec<_> = monomials.iter().map(|m| m.map.flatten()).collect();
        let n2 = space.dim() * space.dim();
        let solver =
            CoordinateSolver::new(n2, &flat)?.expect("closure keeps only independent monomials");
        Ok(Self {
            space: space.clone(),
            kind,
            monomials,
            span,
            solver,
        })
    }

    /// The span of the generators themselves, without closing.
    pub fn generated_by(gens: &OperatorSet, kind: ClosureKind) -> Result<Self, AlgebraError> {
        let mut builder = SpanBuilder::new(gens.space());
        for (name, map) in gens.iter() {
            builder.offer(Word::gen(name), map.clone())?;
        }
        builder.finish(kind)
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn kind(&self) -> ClosureKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn words(&self) -> Vec<String> {
        self.monomials.iter().map(|m| m.word.to_string()).collect()
    }

    /// The span as a subspace of flattened `n×n` matrices.
    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn contains_map(&self, map: &LinearMap) -> Result<bool, AlgebraError> {
        Ok(self.span.contains(&map.flatten())?)
    }

    /// Coefficients of `map` on the monomial basis, if it lies in the span.
    pub fn coordinates(&self, map: &LinearMap) -> Result<Option<Vec<Scalar>>, AlgebraError> {
        if map.space() != &self.space {
            return Err(LinalgError::SpaceMismatch.into());
        }
        Ok(self.solver.solve(&map.flatten())?)
    }
}

struct SpanBuilder {
    space: BasedSpace,
    monomials: Vec<Monomial>,
    span: Subspace,
}

impl SpanBuilder {
    fn new(space: &BasedSpace) -> Self {
        Self {
            space: space.clone(),
            monomials: Vec::new(),
            span: Subspace::zero(space.dim() * space.dim()),
        }
    }

    /// Keeps `map` if it enlarges the span; returns whether it was kept.
    fn offer(&mut self, word: Word, map: LinearMap) -> Result<bool, AlgebraError> {
        let flat = map.flatten();
        if self.span.contains(&flat)? {
            return Ok(false);
        }
        let mut rows = self.span.basis().to_vec();
        rows.push(flat);
        self.span = rref(self.span.ambient_dim(), &rows)?;
        self.monomials.push(Monomial { word, map });
        Ok(true)
    }

    fn finish(self, kind: ClosureKind) -> Result<AlgebraSpan, AlgebraError> {
        AlgebraSpan::from_monomials(&self.space, kind, self.monomials, self.span)
    }
}

fn closure(gens: &OperatorSet, kind: ClosureKind) -> Result<AlgebraSpan, AlgebraError> {
    if gens.is_empty() {
        return Err(AlgebraError::NoGenerators);
    }
    let mut builder = SpanBuilder::new(gens.space());
    let mut level = Vec::new();
    for (name, map) in gens.iter() {
        if builder.offer(Word::gen(name), map.clone())? {
            level.push(builder.monomials.len() - 1);
        }
    }
    // Breadth-first by word length. Candidates of the next length are
    // `g·m` (associative) or `[m, g]` (Lie) for m of the current length;
    // the outer loop runs over generators in input order.
    while !level.is_empty() {
        let mut next = Vec::new();
        for (gi, (gname, gmap)) in gens.iter().enumerate() {
            for &mi in &level {
                let m = &builder.monomials[mi];
                let (word, map) = match kind {
                    ClosureKind::Associative => (
                        Word::product(Word::gen(gname), m.word.clone()),
                        compose(gmap, &m.map)?,
                    ),
                    ClosureKind::Lie => {
                        // [g_j, g_i] with j >= i is zero or a multiple of [g_i, g_j].
                        if let Word::Gen(mname) = &m.word {
                            let mj = gens.names().position(|n| n == mname).unwrap();
                            if mj >= gi {
                                continue;
                            }
                        }
                        (
                            Word::bracket(m.word.clone(), Word::gen(gname)),
                            commutator(&m.map, gmap)?,
                        )
                    }
                };
                if builder.offer(word, map)? {
                    next.push(builder.monomials.len() - 1);
                }
            }
        }
        level = next;
    }
    builder.finish(kind)
}

/// The associative algebra generated by `gens` (without identity).
pub fn associative_closure(gens: &OperatorSet) -> Result<AlgebraSpan, AlgebraError> {
    closure(gens, ClosureKind::Associative)
}

/// The Lie algebra generated by `gens` under the commutator bracket.
pub fn lie_closure(gens: &OperatorSet) -> Result<AlgebraSpan, AlgebraError> {
    closure(gens, ClosureKind::Lie)
}

/// Span of `{fg : f ∈ left, g ∈ right}`, both given as spans of flattened maps on `space`.
pub fn span_product(
    space: &BasedSpace,
    left: &Subspace,
    right: &Subspace,
) -> Result<Subspace, AlgebraError> {
    let n2 = space.dim() * space.dim();
    for s in [left, right] {
        if s.ambient_dim() != n2 {
            return Err(LinalgError::DimensionMismatch {
                expected: n2,
                found: s.ambient_dim(),
            }
            .into());
        }
    }
    let to_maps = |s: &Subspace| -> Result<Vec<LinearMap>, LinalgError> {
        s.basis()
            .iter()
            .map(|row| LinearMap::from_flat(space, row))
            .collect()
    };
    let lmaps = to_maps(left)?;
    let rmaps = to_maps(right)?;
    let mut rows = Vec::with_capacity(lmaps.len() * rmaps.len());
    for f in &lmaps {
        for g in &rmaps {
            rows.push(f.compose(g)?.flatten());
        }
    }
    Ok(rref(n2, &rows)?)
}

/// Linear constraints on the coefficients `α` of `Σ α_i m_i` forced by
/// requiring `(Σ α_i m_i)(v) = 0`, as an echelon subspace of `Q^maps.len()`.
pub fn evaluation_constraints(maps: &[LinearMap], v: &Vector) -> Result<Subspace, AlgebraError> {
    let images = maps
        .iter()
        .map(|m| m.apply(v))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<Scalar>> = (0..v.space().dim())
        .map(|r| images.iter().map(|img| img.coords()[r].clone()).collect())
        .collect();
    Ok(rref(maps.len(), &rows)?)
}

/// A claimed identity between two products of generators; `rhs = None` means zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationClaim {
    pub lhs: String,
    pub rhs: Option<String>,
}

impl RelationClaim {
    pub fn zero(lhs: &str) -> Self {
        Self {
            lhs: lhs.to_string(),
            rhs: None,
        }
    }

    pub fn equal(lhs: &str, rhs: &str) -> Self {
        Self {
            lhs: lhs.to_string(),
            rhs: Some(rhs.to_string()),
        }
    }
}

impl fmt::Display for RelationClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rhs {
            Some(r) => write!(f, "{} = {}", self.lhs, r),
            None => write!(f, "{} = 0", self.lhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub claim: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates each claim exactly on the generators.
pub fn check_relations(
    gens: &OperatorSet,
    claims: &[RelationClaim],
) -> Result<RelationReport, AlgebraError> {
    let checks = claims
        .iter()
        .map(|claim| {
            let lhs = gens.evaluate_product(&gens.parse_word(&claim.lhs)?)?;
            let holds = match &claim.rhs {
                Some(r) => lhs == gens.evaluate_product(&gens.parse_word(r)?)?,
                None => lhs.is_zero(),
            };
            Ok(RelationCheck {
                claim: claim.to_string(),
                holds,
            })
        })
        .collect::<Result<_, AlgebraError>>()?;
    Ok(RelationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn chain_space() -> BasedSpace {
        BasedSpace::new(["p", "q", "r"]).unwrap()
    }

    #[test]
    fn parse_word_longest_match() {
        let s = chain_space();
        let gens = OperatorSet::new(
            &s,
            vec![
                ("u".into(), LinearMap::zero(&s)),
                ("uv".into(), LinearMap::zero(&s)),
                ("v".into(), LinearMap::zero(&s)),
            ],
        )
        .unwrap();
        assert_eq!(gens.parse_word("uvu").unwrap(), vec!["uv", "u"]);
        assert!(matches!(
            gens.parse_word("uw"),
            Err(AlgebraError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn duplicate_and_empty_generators() {
        let s = chain_space();
        let m = LinearMap::zero(&s);
        assert_eq!(
            OperatorSet::new(&s, vec![("a".into(), m.clone()), ("a".into(), m)]).unwrap_err(),
            AlgebraError::DuplicateGenerator("a".into())
        );
        let empty = OperatorSet::new(&s, vec![]).unwrap();
        assert_eq!(
            associative_closure(&empty).unwrap_err(),
            AlgebraError::NoGenerators
        );
    }

    #[test]
    fn identity_generates_one_dimension() {
        let s = chain_space();
        let gens = OperatorSet::new(&s, vec![("id".into(), LinearMap::identity(&s))]).unwrap();
        assert_eq!(associative_closure(&gens).unwrap().dim(), 1);
        assert_eq!(lie_closure(&gens).unwrap().dim(), 1);
    }

    #[test]
    fn shift_operator_closure() {
        // p -> q -> r: the shift s has s^2 != 0, s^3 = 0.
        let s = chain_space();
        let shift = LinearMap::from_entries(&s, [("p", "q", int(1)), ("q", "r", int(1))]).unwrap();
        let gens = OperatorSet::new(&s, vec![("s".into(), shift)]).unwrap();
        let a = associative_closure(&gens).unwrap();
        assert_eq!(a.words(), vec!["s", "ss"]);
        assert_eq!(lie_closure(&gens).unwrap().dim(), 1);
    }

    #[test]
    fn commutator_of_self_vanishes() {
        let s = chain_space();
        let f = LinearMap::from_entries(&s, [("p", "q", int(3)), ("r", "p", int(-1))]).unwrap();
        assert!(commutator(&f, &f).unwrap().is_zero());
    }

    #[test]
    fn coordinates_on_monomial_basis() {
        let s = chain_space();
        let shift = LinearMap::from_entries(&s, [("p", "q", int(1)), ("q", "r", int(1))]).unwrap();
        let gens = OperatorSet::new(&s, vec![("s".into(), shift.clone())]).unwrap();
        let a = associative_closure(&gens).unwrap();
        let target = shift
            .scale(&int(2))
            .sub(&shift.compose(&shift).unwrap())
            .unwrap();
        assert_eq!(a.coordinates(&target).unwrap(), Some(vec![int(2), int(-1)]));
        assert_eq!(a.coordinates(&LinearMap::identity(&s)).unwrap(), None);
    }
}
