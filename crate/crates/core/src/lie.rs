//! Lie algebras given by structure constants on a named basis.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{rref, BasedSpace, LinalgError, LinearMap, Subspace, Vector};
use crate::operators::{commutator, AlgebraError, AlgebraSpan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("bracket of `{0}` with itself must be zero")]
    SelfBracket(String),
    #[error("bracket [{0},{1}] given twice")]
    DuplicateBracket(String, String),
    #[error("span is not closed under the bracket: [{0},{1}] leaves it")]
    NotClosed(String, String),
}

/// A finite-dimensional algebra with an alternating bracket, stored as
/// sparse structure constants `[b_i, b_j]` for `i < j`.
///
/// The Jacobi identity is not enforced on construction; use
/// [`check_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    space: BasedSpace,
    brackets: BTreeMap<(usize, usize), Vector>,
}

impl LieAlgebra {
    pub fn abelian(space: &BasedSpace) -> Self {
        Self {
            space: space.clone(),
            brackets: BTreeMap::new(),
        }
    }

    /// Builds an algebra from basis brackets `[b_i, b_j] = v`. Pairs with
    /// `i > j` are stored as `[b_j, b_i] = -v`.
    pub fn new<I>(space: &BasedSpace, entries: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, Vector)>,
    {
        let mut brackets = BTreeMap::new();
        for (i, j, v) in entries {
            if v.space() != space {
                return Err(LinalgError::SpaceMismatch.into());
            }
            for k in [i, j] {
                if k >= space.dim() {
                    return Err(LinalgError::DimensionMismatch {
                        expected: space.dim(),
                        found: k + 1,
                    }
                    .into());
                }
            }
            if i == j {
                if v.is_zero() {
                    continue;
                }
                return Err(LieError::SelfBracket(space.name(i).to_string()));
            }
            let (key, v) = if i < j { ((i, j), v) } else { ((j, i), -&v) };
            if brackets.contains_key(&key) {
                return Err(LieError::DuplicateBracket(
                    space.name(key.0).to_string(),
                    space.name(key.1).to_string(),
                ));
            }
            if !v.is_zero() {
                brackets.insert(key, v);
            }
        }
        Ok(Self {
            space: space.clone(),
            brackets,
        })
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn names(&self) -> &[String] {
        self.space.names()
    }

    pub fn element(&self, name: &str) -> Result<Vector, LieError> {
        Ok(self.space.vector(name)?)
    }

    /// Nonzero structure constants `((i, j), [b_i, b_j])` with `i < j`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.brackets.iter()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => self.space.zero(),
            Less => self
                .brackets
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| self.space.zero()),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|v| -v)
                .unwrap_or_else(|| self.space.zero()),
        }
    }

    pub fn bracket(&self, u: &Vector, v: &Vector) -> Result<Vector, LieError> {
        if u.space() != &self.space || v.space() != &self.space {
            return Err(LinalgError::SpaceMismatch.into());
        }
        let mut acc = self.space.zero();
        for (i, a) in u.support() {
            for (j, b) in v.support() {
                if i == j {
                    continue;
                }
                let e = self.bracket_basis(i, j);
                if !e.is_zero() {
                    acc = &acc + &e.scale(&(a * b));
                }
            }
        }
        Ok(acc)
    }

    /// `[b_i, b_j]` by basis names.
    pub fn bracket_named(&self, a: &str, b: &str) -> Result<Vector, LieError> {
        let i = self.space.require(a)?;
        let j = self.space.require(b)?;
        Ok(self.bracket_basis(i, j))
    }

    /// Span of all brackets `[u, v]` with `u` from `left` and `v` from `right`.
    pub fn bracket_span(&self, left: &Subspace, right: &Subspace) -> Result<Subspace, LieError> {
        let lv = left.vectors(&self.space)?;
        let rv = right.vectors(&self.space)?;
        let mut rows = Vec::new();
        for u in &lv {
            for v in &rv {
                let w = self.bracket(u, v)?;
                if !w.is_zero() {
                    rows.push(w.into_coords());
                }
            }
        }
        Ok(rref(self.dim(), &rows)?)
    }
}

/// A Lie algebra of operators: the abstract algebra plus the map realizing
/// each basis element on a module.
#[derive(Clone, Debug)]
pub struct LinearLieAlgebra {
    pub algebra: LieAlgebra,
    pub realization: Vec<LinearMap>,
}

impl LinearLieAlgebra {
    pub fn module(&self) -> Option<&BasedSpace> {
        self.realization.first().map(LinearMap::space)
    }
}

/// Structure constants of a bracket-closed span of operators, on the basis
/// of its monomials (named by their bracket words).
pub fn from_operators(span: &AlgebraSpan) -> Result<LinearLieAlgebra, LieError> {
    let words = span.words();
    let space = BasedSpace::new(words.iter().cloned())?;
    let monos = span.monomials();
    let mut entries = Vec::new();
    for i in 0..monos.len() {
        for j in i + 1..monos.len() {
            let c = commutator(&monos[i].map, &monos[j].map)?;
            let coords = span
                .coordinates(&c)?
                .ok_or_else(|| LieError::NotClosed(words[i].clone(), words[j].clone()))?;
            entries.push((i, j, Vector::new(&space, coords)?));
        }
    }
    Ok(LinearLieAlgebra {
        algebra: LieAlgebra::new(&space, entries)?,
        realization: monos.iter().map(|m| m.map.clone()).collect(),
    })
}

/// `g ⋉ V`: basis is g's names followed by the module's names, with
/// `[f, v] = f(v)` and `[v, w] = 0`.
pub fn semidirect_sum(g: &LinearLieAlgebra) -> Result<LieAlgebra, LieError> {
    let Some(module) = g.module() else {
        return Ok(g.algebra.clone());
    };
    if g.realization.len() != g.algebra.dim() || g.realization.iter().any(|m| m.space() != module) {
        return Err(LinalgError::SpaceMismatch.into());
    }
    let gdim = g.algebra.dim();
    let names = g.algebra.names().iter().chain(module.names()).cloned();
    let space = BasedSpace::new(names)?;
    let embed = |gpart: &[num_rational::BigRational], vpart: &[num_rational::BigRational]| {
        let mut coords = Vec::with_capacity(space.dim());
        coords.extend_from_slice(gpart);
        coords.extend_from_slice(vpart);
        Vector::new(&space, coords)
    };
    let gzero = vec![num_rational::BigRational::zero(); gdim];
    let vzero = vec![num_rational::BigRational::zero(); module.dim()];
    let mut entries = Vec::new();
    for (&(i, j), v) in g.algebra.structure_constants() {
        entries.push((i, j, embed(v.coords(), &vzero)?));
    }
    for (i, f) in g.realization.iter().enumerate() {
        for k in 0..module.dim() {
            let image = f.column(k);
            if !image.is_zero() {
                entries.push((i, gdim + k, embed(&gzero, image.coords())?));
            }
        }
    }
    LieAlgebra::new(&space, entries)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub triple: [String; 3],
    pub jacobiator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub dim: usize,
    pub alternating: bool,
    pub triples_checked: usize,
    pub jacobi_failures: usize,
    pub first_violation: Option<JacobiViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.alternating && self.jacobi_failures == 0
    }
}

/// Checks `[b,b] = 0`, antisymmetry, and the Jacobi identity on every
/// ordered triple of basis elements.
pub fn check_axioms(l: &LieAlgebra) -> AxiomReport {
    let n = l.dim();
    let mut alternating = true;
    for i in 0..n {
        if !l.bracket_basis(i, i).is_zero() {
            alternating = false;
        }
        for j in i + 1..n {
            if !(&l.bracket_basis(i, j) + &l.bracket_basis(j, i)).is_zero() {
                alternating = false;
            }
        }
    }
    let basis: Vec<Vector> = (0..n).map(|i| l.space.basis_vector(i)).collect();
    let br = |u: &Vector, v: &Vector| l.bracket(u, v).expect("same space");
    let mut failures = 0;
    let mut first = None;
    for a in 0..n {
        for b in 0..n {
            let ab = l.bracket_basis(a, b);
            for c in 0..n {
                let bc = l.bracket_basis(b, c);
                let ca = l.bracket_basis(c, a);
                let sum = &(&br(&ab, &basis[c]) + &br(&bc, &basis[a])) + &br(&ca, &basis[b]);
                if !sum.is_zero() {
                    failures += 1;
                    first.get_or_insert_with(|| JacobiViolation {
                        triple: [a, b, c].map(|k| l.space.name(k).to_string()),
                        jacobiator: sum.to_string(),
                    });
                }
            }
        }
    }
    AxiomReport {
        dim: n,
        alternating,
        triples_checked: n * n * n,
        jacobi_failures: failures,
        first_violation: first,
    }
}

/// `L = L^1 ⊇ L^2 = [L, L] ⊇ L^3 = [L^2, L] ⊇ …` up to stabilization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSeries {
    pub terms: Vec<Subspace>,
}

impl CentralSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.terms.last().is_some_and(Subspace::is_zero)
    }

    /// Smallest `c` with `L^{c+1} = 0`, if nilpotent.
    pub fn class(&self) -> Option<usize> {
        self.is_nilpotent().then(|| self.terms.len() - 1)
    }
}

pub fn lower_central_series(l: &LieAlgebra) -> Result<CentralSeries, LieError> {
    let whole = Subspace::full(l.dim());
    let mut terms = vec![whole.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = l.bracket_span(last, &whole)?;
        if next.dim() == last.dim() {
            break;
        }
        terms.push(next);
    }
    Ok(CentralSeries { terms })
}
