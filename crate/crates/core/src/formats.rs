//! JSON input formats.
//!
//! Rationals are always strings (`"1"`, `"-3/2"`).
//!
//! An algebra file is either structure constants
//!
//! ```json
//! { "basis": ["x", "y", "z"], "brackets": { "0,1": [["z", "1"]] } }
//! ```
//!
//! where key `"i,j"` (with `i < j`, zero-based) lists `[b_i, b_j]`, or an
//! operator description
//!
//! ```json
//! { "space": ["p", "q"], "operators": { "s": [["p", "q", "1"]] },
//!   "construction": "lie-closure-semidirect" }
//! ```
//!
//! where each entry `[from, to, c]` adds `c·to` to the image of `from`. The
//! algebra is then the Lie closure of the operators acting on the space,
//! semidirect with the space.
//!
//! A grading file is `{"fine": true}` or
//! `{"labels": {"g": [["1", "0", "0"], ...], ...}}` with spanning vectors in
//! the algebra's basis coordinates. A relations file is
//! `{"labels": [...], "triples": [["g", "h", "k"], ...]}`.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{fine_grading_from_basis, Grading, GradingError, RelationSet};
use crate::lie::{from_operators, semidirect_sum, LieAlgebra, LieError};
use crate::linalg::{
    format_scalar, parse_scalar, rref, BasedSpace, LinalgError, LinearMap, Vector,
};
use crate::operators::{lie_closure, AlgebraError, OperatorSet};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: IndexMap<String, Vec<(String, String)>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    #[default]
    #[serde(rename = "lie-closure-semidirect")]
    LieClosureSemidirect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub space: Vec<String>,
    pub operators: IndexMap<String, Vec<(String, String, String)>>,
    #[serde(default)]
    pub construction: Construction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraFile {
    Structure(StructureFile),
    Operators(OperatorFile),
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// The structure-constant form of `l`.
    pub fn from_algebra(l: &LieAlgebra) -> Self {
        let brackets = l
            .structure_constants()
            .map(|(&(i, j), v)| {
                let terms = v
                    .support()
                    .map(|(k, c)| (l.space().name(k).to_string(), format_scalar(c)))
                    .collect();
                (format!("{i},{j}"), terms)
            })
            .collect();
        AlgebraFile::Structure(StructureFile {
            basis: l.names().to_vec(),
            brackets,
        })
    }

    /// The operators of an operator-form file.
    pub fn operators(&self) -> Result<OperatorSet, FormatError> {
        let AlgebraFile::Operators(f) = self else {
            return Err(FormatError::Invalid(
                "expected an operator-form algebra file (\"space\", \"operators\")".into(),
            ));
        };
        let space = BasedSpace::new(f.space.iter().cloned())?;
        let maps = f
            .operators
            .iter()
            .map(|(name, entries)| {
                let entries = entries
                    .iter()
                    .map(|(from, to, c)| Ok((from.as_str(), to.as_str(), parse_scalar(c)?)))
                    .collect::<Result<Vec<_>, LinalgError>>()?;
                Ok((name.clone(), LinearMap::from_entries(&space, entries)?))
            })
            .collect::<Result<Vec<_>, LinalgError>>()?;
        Ok(OperatorSet::new(&space, maps)?)
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra, FormatError> {
        match self {
            AlgebraFile::Structure(f) => {
                let space = BasedSpace::new(f.basis.iter().cloned())?;
                let mut entries = Vec::with_capacity(f.brackets.len());
                for (key, terms) in &f.brackets {
                    let (i, j) = parse_key(key, space.dim())?;
                    let mut v = space.zero();
                    for (name, c) in terms {
                        let e = space.vector(name)?;
                        v = &v + &e.scale(&parse_scalar(c)?);
                    }
                    entries.push((i, j, v));
                }
                Ok(LieAlgebra::new(&space, entries)?)
            }
            AlgebraFile::Operators(f) => match f.construction {
                Construction::LieClosureSemidirect => {
                    let ops = self.operators()?;
                    let span = lie_closure(&ops)?;
                    Ok(semidirect_sum(&from_operators(&span)?)?)
                }
            },
        }
    }
}

fn parse_key(key: &str, dim: usize) -> Result<(usize, usize), FormatError> {
    let bad = || {
        FormatError::Invalid(format!(
            "bracket key `{key}` is not of the form \"i,j\" with i < j < {dim}"
        ))
    };
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i >= j || j >= dim {
        return Err(bad());
    }
    Ok((i, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GradingFile {
    Fine {
        fine: bool,
    },
    Explicit {
        labels: IndexMap<String, Vec<Vec<String>>>,
    },
}

impl GradingFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Explicit form listing each component's echelon basis.
    pub fn from_grading(g: &Grading) -> Self {
        let labels = g
            .labels()
            .iter()
            .zip(g.components())
            .map(|(l, c)| {
                let rows = c
                    .basis()
                    .iter()
                    .map(|r| r.iter().map(format_scalar).collect())
                    .collect();
                (l.clone(), rows)
            })
            .collect();
        GradingFile::Explicit { labels }
    }

    pub fn to_grading(&self, l: &LieAlgebra) -> Result<Grading, FormatError> {
        match self {
            GradingFile::Fine { fine: true } => Ok(fine_grading_from_basis(l)),
            GradingFile::Fine { fine: false } => Err(FormatError::Invalid(
                "`\"fine\": false` does not describe a grading; list the components under \"labels\"".into(),
            )),
            GradingFile::Explicit { labels } => {
                let components = labels
                    .iter()
                    .map(|(label, rows)| {
                        let vectors = rows
                            .iter()
                            .map(|r| {
                                let coords = r
                                    .iter()
                                    .map(|c| parse_scalar(c))
                                    .collect::<Result<Vec<_>, _>>()?;
                                Vector::new(l.space(), coords)
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        let rows: Vec<_> = vectors.into_iter().map(Vector::into_coords).collect();
                        Ok((label.clone(), rref(l.dim(), &rows)?))
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?;
                Ok(Grading::new(l.clone(), components)?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationsFile {
    pub labels: Vec<String>,
    #[serde(default)]
    pub triples: Vec<[String; 3]>,
}

impl RelationsFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_relations(r: &RelationSet) -> Self {
        Self {
            labels: r.labels().to_vec(),
            triples: r.named_triples().map(|t| t.map(String::from)).collect(),
        }
    }

    pub fn to_relations(&self) -> Result<RelationSet, FormatError> {
        Ok(RelationSet::new(self.labels.clone(), &self.triples)?)
    }
}

/// The operator-form file for the nine-dimensional counterexample.
pub fn counterexample_operator_file() -> AlgebraFile {
    use crate::counterexample::{MODULE_BASIS, X_ACTION, Y_ACTION, Z_ACTION};
    let arrows = |a: &[(&str, &str)]| {
        a.iter()
            .map(|&(f, t)| (f.to_string(), t.to_string(), "1".to_string()))
            .collect()
    };
    let mut operators = IndexMap::new();
    operators.insert("x".to_string(), arrows(&X_ACTION));
    operators.insert("y".to_string(), arrows(&Y_ACTION));
    operators.insert("z".to_string(), arrows(&Z_ACTION));
    AlgebraFile::Operators(OperatorFile {
        space: MODULE_BASIS.iter().map(|s| s.to_string()).collect(),
        operators,
        construction: Construction::LieClosureSemidirect,
    })
}
