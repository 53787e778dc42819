use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LinAlgError, Matrix, Scalar, Space, Vector};

/// A linear map between spaces with fixed standard bases.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinMap {
    domain: Space,
    codomain: Space,
    matrix: Matrix,
}

impl LinMap {
    pub fn new(domain: Space, codomain: Space, matrix: Matrix) -> Result<Self, LinAlgError> {
        if matrix.rows() != codomain.dim || matrix.cols() != domain.dim {
            return Err(LinAlgError::ShapeMismatch {
                expected: (codomain.dim, domain.dim),
                found: (matrix.rows(), matrix.cols()),
            });
        }
        Ok(LinMap {
            domain,
            codomain,
            matrix,
        })
    }

    /// Like [`LinMap::new`] but for internal constructions whose shape is known.
    pub(crate) fn from_parts(domain: Space, codomain: Space, matrix: Matrix) -> Self {
        Self::new(domain, codomain, matrix).expect("internal map has consistent shape")
    }

    pub fn identity(space: &Space) -> Self {
        Self::from_parts(space.clone(), space.clone(), Matrix::identity(space.dim))
    }

    pub fn zero(domain: &Space, codomain: &Space) -> Self {
        Self::from_parts(
            domain.clone(),
            codomain.clone(),
            Matrix::zeros(codomain.dim, domain.dim),
        )
    }

    pub fn scalar(space: &Space, r: &Scalar) -> Self {
        Self::from_parts(space.clone(), space.clone(), Matrix::scalar_identity(space.dim, r))
    }

    pub fn domain(&self) -> &Space {
        &self.domain
    }

    pub fn codomain(&self) -> &Space {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn with_spaces(&self, domain: Space, codomain: Space) -> Self {
        assert_eq!((domain.dim, codomain.dim), (self.domain.dim, self.codomain.dim));
        Self::from_parts(domain, codomain, self.matrix.clone())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(
            v.len(),
            self.domain.dim,
            "vector of length {} applied to map with domain {:?}",
            v.len(),
            self.domain
        );
        self.matrix.mul_vec(v)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LinMap) -> LinMap {
        assert_eq!(
            inner.codomain.dim, self.domain.dim,
            "cannot compose {:?} after {:?}",
            self, inner
        );
        Self::from_parts(
            inner.domain.clone(),
            self.codomain.clone(),
            self.matrix.mul(&inner.matrix),
        )
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        Self::from_parts(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn sub(&self, other: &LinMap) -> LinMap {
        Self::from_parts(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.sub(&other.matrix),
        )
    }

    pub fn scale(&self, r: &Scalar) -> LinMap {
        Self::from_parts(self.domain.clone(), self.codomain.clone(), self.matrix.scale(r))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.domain.dim
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.codomain.dim
    }

    pub fn is_isomorphism(&self) -> bool {
        self.domain.dim == self.codomain.dim && self.is_injective()
    }

    pub fn inverse(&self) -> Option<LinMap> {
        let inv = self.matrix.inverse()?;
        Some(Self::from_parts(self.codomain.clone(), self.domain.clone(), inv))
    }

    /// Images of the domain basis vectors.
    pub fn columns(&self) -> Vec<Vector> {
        self.matrix.columns()
    }

    /// `[self | other]` as a map out of `dom(self) ⊕ dom(other)`.
    pub fn hstack(&self, other: &LinMap) -> LinMap {
        assert_eq!(self.codomain.dim, other.codomain.dim);
        Self::from_parts(
            self.domain.direct_sum(&other.domain),
            self.codomain.clone(),
            self.matrix.hstack(&other.matrix),
        )
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} {:?}", self.domain, self.codomain, self.matrix)
    }
}
