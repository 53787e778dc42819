//! Exact linear algebra over the rationals.
//!
//! Everything else in the crate computes on these types. Tensor products use
//! row-major coordinates: the basis vector `e_i ⊗ f_j` of `X ⊗ Y` has index
//! `i * dim(Y) + j`. Contractions pair a covector with the *second* tensor
//! slot; first-slot contractions go through the explicit [`swap_map`].

mod linmap;
mod matrix;
mod scalar;
mod space;
mod vector;

pub use linmap::LinMap;
pub use matrix::{Matrix, Rref};
pub use scalar::Scalar;
pub use space::Space;
pub use vector::Vector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("map is not surjective: rank {rank} < codomain dimension {codomain}")]
    NotSurjective { rank: usize, codomain: usize },
    #[error("map is not injective: rank {rank} < domain dimension {domain}")]
    NotInjective { rank: usize, domain: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn rank(f: &LinMap) -> usize {
    f.rank()
}

/// Deterministic kernel basis (see [`Matrix::kernel_basis`]).
pub fn kernel_basis(f: &LinMap) -> Vec<Vector> {
    f.matrix().kernel_basis()
}

/// A section `s` of a surjection `p` (`p ∘ s = id`), obtained by solving for
/// each target basis vector with free variables set to zero.
pub fn right_inverse(p: &LinMap) -> Result<LinMap, LinAlgError> {
    let rank = p.rank();
    if rank != p.codomain().dim {
        return Err(LinAlgError::NotSurjective {
            rank,
            codomain: p.codomain().dim,
        });
    }
    let s = p
        .matrix()
        .solve_many(&Matrix::identity(p.codomain().dim))
        .expect("surjective map has a right inverse");
    Ok(LinMap::from_parts(p.codomain().clone(), p.domain().clone(), s))
}

/// A retraction `l` of an injection `e` (`l ∘ e = id`): the transpose of the
/// right inverse of the transpose.
pub fn left_inverse(e: &LinMap) -> Result<LinMap, LinAlgError> {
    let rank = e.rank();
    if rank != e.domain().dim {
        return Err(LinAlgError::NotInjective {
            rank,
            domain: e.domain().dim,
        });
    }
    let s = e
        .matrix()
        .transpose()
        .solve_many(&Matrix::identity(e.domain().dim))
        .expect("injective map has a left inverse");
    Ok(LinMap::from_parts(
        e.codomain().clone(),
        e.domain().clone(),
        s.transpose(),
    ))
}

/// `f ⊗ g` as a Kronecker product.
pub fn tensor_map(f: &LinMap, g: &LinMap) -> LinMap {
    LinMap::from_parts(
        f.domain().tensor(g.domain()),
        f.codomain().tensor(g.codomain()),
        f.matrix().kron(g.matrix()),
    )
}

/// `a ⊗ b` in row-major coordinates.
pub fn tensor_vec(a: &Vector, b: &Vector) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x * y);
        }
    }
    Vector::new(out)
}

/// `(Id_X ⊗ λ)(t)` for `t ∈ X ⊗ Y` and `λ ∈ Y*`.
pub fn contract_second(t: &Vector, lambda: &Vector) -> Vector {
    let dy = lambda.len();
    if dy == 0 {
        assert!(t.is_empty() || t.is_zero());
        return Vector::zeros(0);
    }
    assert_eq!(t.len() % dy, 0, "tensor length not divisible by covector length");
    let dx = t.len() / dy;
    (0..dx)
        .map(|i| (0..dy).map(|j| &t[i * dy + j] * &lambda[j]).sum())
        .collect()
}

/// [`contract_second`] with the dimension of the surviving slot given, so
/// that a zero-dimensional `Y` still yields a vector of the right length.
pub fn contract_second_sized(t: &Vector, lambda: &Vector, left_dim: usize) -> Vector {
    if lambda.is_empty() {
        return Vector::zeros(left_dim);
    }
    contract_second(t, lambda)
}

/// Contraction of the first slot: `λ ∈ X*` against `t ∈ X ⊗ Y`, computed as
/// [`contract_second`] after the canonical swap `X ⊗ Y → Y ⊗ X`.
pub fn contract_first(t: &Vector, lambda: &Vector, right_dim: usize) -> Vector {
    if lambda.is_empty() {
        return Vector::zeros(right_dim);
    }
    let swap = swap_map(&Space::new("X", lambda.len()), &Space::new("Y", right_dim));
    contract_second(&swap.apply(t), lambda)
}

/// The transpose `f* : Y* → X*`.
pub fn dual_map(f: &LinMap) -> LinMap {
    LinMap::from_parts(f.codomain().dual(), f.domain().dual(), f.matrix().transpose())
}

/// The canonical flip `X ⊗ Y → Y ⊗ X`, `x ⊗ y ↦ y ⊗ x`.
pub fn swap_map(x: &Space, y: &Space) -> LinMap {
    let (dx, dy) = (x.dim, y.dim);
    let mut m = Matrix::zeros(dx * dy, dx * dy);
    for i in 0..dx {
        for j in 0..dy {
            m.set(j * dx + i, i * dy + j, Scalar::one());
        }
    }
    LinMap::from_parts(x.tensor(y), y.tensor(x), m)
}

/// Block map `X ⊕ Y → Z` from its restrictions.
pub fn copair(left: &LinMap, right: &LinMap) -> LinMap {
    left.hstack(right)
}

/// Coordinates of `v` in terms of an independent list of vectors, if `v` lies in their span.
pub fn coordinates_in(basis: &[Vector], v: &Vector) -> Option<Vector> {
    let m = Matrix::from_columns(basis, v.len());
    let x = m.solve(v)?;
    Some(x)
}

/// Dimension of the span of a list of vectors of length `ambient`.
pub fn span_dim(vectors: &[Vector], ambient: usize) -> usize {
    Matrix::from_row_vectors(vectors, ambient).rank()
}

/// Whether two lists span the same subspace of an `ambient`-dimensional space.
pub fn same_span(a: &[Vector], b: &[Vector], ambient: usize) -> bool {
    let ra = span_dim(a, ambient);
    let rb = span_dim(b, ambient);
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    ra == rb && span_dim(&all, ambient) == ra
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(rows: &[&[i64]]) -> LinMap {
        let m = Matrix::from_ints(rows);
        LinMap::new(Space::new("X", m.cols()), Space::new("Y", m.rows()), m).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&map(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&map(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&map(&[&[0, 0], &[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&map(&[&[1, 0]])), vec![Vector::from_ints(&[0, 1])]);
        assert!(kernel_basis(&map(&[&[1, 0], &[0, 1]])).is_empty());
        assert_eq!(kernel_basis(&map(&[&[1, 1]])), vec![Vector::from_ints(&[-1, 1])]);
    }

    #[test]
    fn right_inverse_examples() {
        let s = right_inverse(&map(&[&[2]])).unwrap();
        assert_eq!(s.matrix().get(0, 0), &Scalar::new(1, 2));
        let s = right_inverse(&map(&[&[1, 0]])).unwrap();
        assert_eq!(s.matrix(), &Matrix::from_ints(&[&[1], &[0]]));
        let id = map(&[&[1, 0], &[0, 1]]);
        assert_eq!(right_inverse(&id).unwrap().matrix(), id.matrix());
        assert_eq!(
            right_inverse(&map(&[&[1, 2], &[2, 4]])),
            Err(LinAlgError::NotSurjective { rank: 1, codomain: 2 })
        );
    }

    #[test]
    fn left_inverse_retracts() {
        let e = map(&[&[1], &[2], &[3]]);
        let l = left_inverse(&e).unwrap();
        assert_eq!(l.compose(&e).matrix(), &Matrix::identity(1));
        assert!(left_inverse(&map(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn tensor_examples() {
        let id1 = map(&[&[1]]);
        assert_eq!(tensor_map(&id1, &id1).matrix(), &Matrix::identity(1));
        assert_eq!(
            tensor_map(&map(&[&[2]]), &map(&[&[3]])).matrix(),
            &Matrix::from_ints(&[&[6]])
        );
        let swap2 = map(&[&[0, 1], &[1, 0]]);
        let k = tensor_map(&map(&[&[1, 0], &[0, 1]]), &swap2);
        let expected = Matrix::from_ints(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(k.matrix(), &expected);
    }

    #[test]
    fn contraction_examples() {
        // e_0 ⊗ f_1 in Q^2 ⊗ Q^2 is index 1.
        let t = Vector::from_ints(&[0, 1, 0, 0]);
        assert_eq!(
            contract_second(&t, &Vector::from_ints(&[0, 1])),
            Vector::from_ints(&[1, 0])
        );
        assert_eq!(
            contract_second(&Vector::zeros(4), &Vector::from_ints(&[3, 5])),
            Vector::zeros(2)
        );
        let t = Vector::from_ints(&[1, 0, 0, 2]);
        assert_eq!(
            contract_second(&t, &Vector::from_ints(&[1, 1])),
            Vector::from_ints(&[1, 2])
        );
        // first slot: λ = e_1* against e_1 ⊗ f_0 (index 2 in 2x2) gives f_0
        let t = Vector::from_ints(&[0, 0, 1, 0]);
        assert_eq!(
            contract_first(&t, &Vector::from_ints(&[0, 1]), 2),
            Vector::from_ints(&[1, 0])
        );
    }

    #[test]
    fn dual_examples() {
        let id = map(&[&[1, 0], &[0, 1]]);
        assert_eq!(dual_map(&id).matrix(), id.matrix());
        let f = map(&[&[1, 2], &[3, 4]]);
        assert_eq!(dual_map(&f).matrix(), &Matrix::from_ints(&[&[1, 3], &[2, 4]]));
        assert_eq!(dual_map(&dual_map(&f)).matrix(), f.matrix());
        assert_eq!(dual_map(&f).domain().label, "Y*");
    }

    #[test]
    fn swap_is_involution() {
        let x = Space::new("X", 2);
        let y = Space::new("Y", 3);
        let s = swap_map(&x, &y);
        let back = swap_map(&y, &x);
        assert_eq!(back.compose(&s).matrix(), &Matrix::identity(6));
        let a = Vector::from_ints(&[1, 2]);
        let b = Vector::from_ints(&[3, 4, 5]);
        assert_eq!(s.apply(&tensor_vec(&a, &b)), tensor_vec(&b, &a));
    }

    #[test]
    fn span_helpers() {
        let a = vec![Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])];
        let b = vec![Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[1, -1, 0])];
        assert!(same_span(&a, &b, 3));
        assert!(!same_span(&a, &[Vector::from_ints(&[0, 0, 1])], 3));
        assert_eq!(
            coordinates_in(&b, &Vector::from_ints(&[2, 0, 0])),
            Some(Vector::from_ints(&[1, 1]))
        );
        assert_eq!(coordinates_in(&b, &Vector::from_ints(&[0, 0, 1])), None);
    }
}
