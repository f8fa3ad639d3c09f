//! Exact rational linear algebra over named bases.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals kept
//! in lowest terms, and subspaces are stored in reduced row-echelon form so
//! that two subspaces are equal exactly when their echelon bases are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// An exact rational number.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live in different spaces")]
    SpaceMismatch,
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("empty basis name")]
    EmptyName,
    #[error("unknown basis name `{0}`")]
    UnknownName(String),
    #[error("cannot parse `{0}` as a rational number")]
    ParseScalar(String),
}

/// Builds an integer scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-3/2"` or `"6/4"` into a scalar in lowest terms.
pub fn parse_scalar(text: &str) -> Result<Scalar, LinalgError> {
    let trimmed = text.trim();
    let err = || LinalgError::ParseScalar(text.to_string());
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Scalar::new(num, den))
}

/// Formats a scalar as `"n"` or `"n/d"`.
pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

#[derive(Debug)]
struct SpaceInner {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

/// A vector space with a fixed, ordered basis of distinct names.
#[derive(Clone, Debug)]
pub struct BasedSpace {
    inner: Arc<SpaceInner>,
}

impl BasedSpace {
    pub fn new<I, S>(names: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(LinalgError::EmptyName);
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(LinalgError::DuplicateName(name.clone()));
            }
        }
        Ok(Self {
            inner: Arc::new(SpaceInner { names, index }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.inner.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize, LinalgError> {
        self.index_of(name)
            .ok_or_else(|| LinalgError::UnknownName(name.to_string()))
    }

    pub fn zero(&self) -> Vector {
        Vector {
            space: self.clone(),
            coords: vec![Scalar::zero(); self.dim()],
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v.coords[i] = Scalar::one();
        v
    }

    /// The basis vector carrying `name`.
    pub fn vector(&self, name: &str) -> Result<Vector, LinalgError> {
        Ok(self.basis_vector(self.require(name)?))
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.dim())
    }
}

impl PartialEq for BasedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.names == other.inner.names
    }
}

impl Eq for BasedSpace {}

/// A coordinate vector over a [`BasedSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    space: BasedSpace,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(space: &BasedSpace, coords: Vec<Scalar>) -> Result<Self, LinalgError> {
        if coords.len() != space.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: space.dim(),
                found: coords.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            coords,
        })
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn coord(&self, name: &str) -> Result<&Scalar, LinalgError> {
        Ok(&self.coords[self.space.require(name)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector {
            space: self.space.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Nonzero coordinates as `(index, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    fn zip_with(&self, other: &Vector, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Vector {
        assert!(
            self.space == other.space,
            "vector arithmetic across different spaces"
        );
        Vector {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.support() {
            let name = self.space.name(i);
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// An endomorphism of a [`BasedSpace`], stored as a dense square matrix.
///
/// Entry `(r, c)` is the coefficient of basis vector `r` in the image of
/// basis vector `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    space: BasedSpace,
    matrix: Vec<Vec<Scalar>>,
}

impl LinearMap {
    pub fn zero(space: &BasedSpace) -> Self {
        let n = space.dim();
        Self {
            space: space.clone(),
            matrix: vec![vec![Scalar::zero(); n]; n],
        }
    }

    pub fn identity(space: &BasedSpace) -> Self {
        let mut m = Self::zero(space);
        for i in 0..space.dim() {
            m.matrix[i][i] = Scalar::one();
        }
        m
    }

    /// Builds a map from `(source, target, coefficient)` entries; each entry
    /// adds `coefficient * target` to the image of `source`.
    pub fn from_entries<'a, I>(space: &BasedSpace, entries: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (&'a str, &'a str, Scalar)>,
    {
        let mut m = Self::zero(space);
        for (from, to, c) in entries {
            let col = space.require(from)?;
            let row = space.require(to)?;
            m.matrix[row][col] += c;
        }
        Ok(m)
    }

    /// Rebuilds a map from its row-major flattening.
    pub fn from_flat(space: &BasedSpace, flat: &[Scalar]) -> Result<Self, LinalgError> {
        let n = space.dim();
        if flat.len() != n * n {
            return Err(LinalgError::DimensionMismatch {
                expected: n * n,
                found: flat.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            matrix: flat.chunks(n.max(1)).map(<[Scalar]>::to_vec).collect(),
        })
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.matrix[row][col]
    }

    /// Row-major coordinates, the representation used for spans of maps.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.matrix.iter().flatten().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// The image of the `i`-th basis vector.
    pub fn column(&self, i: usize) -> Vector {
        Vector {
            space: self.space.clone(),
            coords: self.matrix.iter().map(|row| row[i].clone()).collect(),
        }
    }

    pub fn image_of(&self, name: &str) -> Result<Vector, LinalgError> {
        Ok(self.column(self.space.require(name)?))
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector, LinalgError> {
        if v.space != self.space {
            return Err(LinalgError::SpaceMismatch);
        }
        let coords = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v.coords)
                    .filter(|(_, x)| !x.is_zero())
                    .fold(Scalar::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect();
        Ok(Vector {
            space: self.space.clone(),
            coords,
        })
    }

    /// `self ∘ other`: `other` is applied first.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        if self.space != other.space {
            return Err(LinalgError::SpaceMismatch);
        }
        let n = self.space.dim();
        let mut out = vec![vec![Scalar::zero(); n]; n];
        for (r, row) in self.matrix.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, b) in other.matrix[k].iter().enumerate() {
                    if !b.is_zero() {
                        out[r][c] += a * b;
                    }
                }
            }
        }
        Ok(LinearMap {
            space: self.space.clone(),
            matrix: out,
        })
    }

    fn combine(
        &self,
        other: &LinearMap,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<LinearMap, LinalgError> {
        if self.space != other.space {
            return Err(LinalgError::SpaceMismatch);
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(LinearMap {
            space: self.space.clone(),
            matrix,
        })
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            space: self.space.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|x| x * c).collect())
                .collect(),
        }
    }
}

/// A subspace of `Q^n`, held as a reduced row-echelon basis.
///
/// Rows are nonzero, pivot columns strictly increase, each pivot entry is 1
/// and every other entry in a pivot column is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

/// Reduced row-echelon basis of the span of `rows` inside `Q^ambient`.
pub fn rref(ambient: usize, rows: &[Vec<Scalar>]) -> Result<Subspace, LinalgError> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ambient {
            return Err(LinalgError::RowLength {
                row: i,
                expected: ambient,
                found: row.len(),
            });
        }
    }
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ambient {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut().skip(col) {
            *x *= &inv;
        }
        let (head, tail) = m.split_at_mut(rank);
        let (pivot_row, tail) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    m.truncate(rank);
    Ok(Subspace {
        ambient,
        rows: m,
        pivots,
    })
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![Scalar::zero(); ambient];
                r[i] = Scalar::one();
                r
            })
            .collect();
        Self {
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of a list of vectors from one space.
    pub fn span_of(space: &BasedSpace, vectors: &[Vector]) -> Result<Self, LinalgError> {
        if vectors.iter().any(|v| v.space != *space) {
            return Err(LinalgError::SpaceMismatch);
        }
        let rows: Vec<_> = vectors.iter().map(|v| v.coords.clone()).collect();
        rref(space.dim(), &rows)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, v: &[Scalar]) -> Result<(), LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// The remainder of `v` after elimination against the echelon basis.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        self.check_len(v)?;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = out[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in out.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, LinalgError> {
        Ok(self.reduce(v)?.iter().all(Zero::is_zero))
    }

    pub fn contains_vector(&self, v: &Vector) -> Result<bool, LinalgError> {
        self.contains(&v.coords)
    }

    /// Coordinates of `v` against the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    /// `true` iff every basis row of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        if other.ambient != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        for row in &other.rows {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The sum `self + other`.
    pub fn join(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if other.ambient != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let rows: Vec<_> = self.rows.iter().chain(&other.rows).cloned().collect();
        rref(self.ambient, &rows)
    }

    /// The echelon rows as vectors of `space`.
    pub fn vectors(&self, space: &BasedSpace) -> Result<Vec<Vector>, LinalgError> {
        if space.dim() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: space.dim(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| Vector {
                space: space.clone(),
                coords: r.clone(),
            })
            .collect())
    }
}

/// `true` iff `whole` is the internal direct sum of `parts`: the dimensions
/// add up and together the parts span `whole`.
pub fn direct_sum_check(parts: &[Subspace], whole: &Subspace) -> Result<bool, LinalgError> {
    let mut sum = Subspace::zero(whole.ambient);
    let mut total = 0;
    for p in parts {
        sum = sum.join(p)?;
        total += p.dim();
    }
    Ok(total == whole.dim() && sum == *whole)
}

/// Solves for coordinates against a fixed, linearly independent (not
/// necessarily echelon) list of vectors.
#[derive(Clone, Debug)]
pub struct CoordinateSolver {
    width: usize,
    count: usize,
    // Echelon form of [basis | I]; the right block records the combination.
    augmented: Subspace,
}

impl CoordinateSolver {
    /// Returns `None` when the vectors are linearly dependent.
    pub fn new(width: usize, basis: &[Vec<Scalar>]) -> Result<Option<Self>, LinalgError> {
        let count = basis.len();
        let mut rows = Vec::with_capacity(count);
        for (i, b) in basis.iter().enumerate() {
            if b.len() != width {
                return Err(LinalgError::RowLength {
                    row: i,
                    expected: width,
                    found: b.len(),
                });
            }
            let mut row = b.clone();
            row.extend((0..count).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            rows.push(row);
        }
        let augmented = rref(width + count, &rows)?;
        if augmented.pivots.iter().any(|&p| p >= width) {
            return Ok(None);
        }
        Ok(Some(Self {
            width,
            count,
            augmented,
        }))
    }

    /// Coefficients `c` with `v = Σ c_i basis_i`, or `None` if `v` is not in the span.
    pub fn solve(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if v.len() != self.width {
            return Err(LinalgError::DimensionMismatch {
                expected: self.width,
                found: v.len(),
            });
        }
        let mut row = v.to_vec();
        row.extend(std::iter::repeat_n(Scalar::zero(), self.count));
        let rem = self.augmented.reduce(&row)?;
        if rem[..self.width].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        Ok(Some(rem[self.width..].iter().map(|x| -x).collect()))
    }
}
