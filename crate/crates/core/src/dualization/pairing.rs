//! Bilinear pairings with values in a vector space, and fiberwise pairings
//! between double vector bundles sharing a side.

use serde::Serialize;
use serde_json::json;

use crate::dvb::{DvbElement, Side, TrivialDvb};
use crate::exactla::{Matrix, Scalar, Space, Vector};

/// `⟨·,·⟩: L × R → W` stored as `tensor[l][r] = ⟨e_l, f_r⟩ ∈ W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuedPairing {
    pub left: Space,
    pub right: Space,
    pub value: Space,
    tensor: Vec<Vec<Vector>>,
}

impl ValuedPairing {
    /// Tabulates a bilinear `f` on basis vectors.
    pub fn from_fn(left: &Space, right: &Space, value: &Space, f: impl Fn(&Vector, &Vector) -> Vector) -> Self {
        let tensor = (0..left.dim)
            .map(|l| {
                let x = Vector::basis(left.dim, l);
                (0..right.dim)
                    .map(|r| {
                        let v = f(&x, &Vector::basis(right.dim, r));
                        assert_eq!(v.len(), value.dim, "pairing value has wrong dimension");
                        v
                    })
                    .collect()
            })
            .collect();
        ValuedPairing {
            left: left.clone(),
            right: right.clone(),
            value: value.clone(),
            tensor,
        }
    }

    /// From precomputed basis values `tensor[l][r] ∈ W`.
    pub fn from_tensor(left: &Space, right: &Space, value: &Space, tensor: Vec<Vec<Vector>>) -> Self {
        assert_eq!(tensor.len(), left.dim);
        assert!(tensor
            .iter()
            .all(|row| row.len() == right.dim && row.iter().all(|v| v.len() == value.dim)));
        ValuedPairing {
            left: left.clone(),
            right: right.clone(),
            value: value.clone(),
            tensor,
        }
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Vector {
        assert_eq!(x.len(), self.left.dim);
        assert_eq!(y.len(), self.right.dim);
        let mut out = Vector::zeros(self.value.dim);
        for (l, xl) in x.iter().enumerate() {
            if xl.is_zero() {
                continue;
            }
            for (r, yr) in y.iter().enumerate() {
                if yr.is_zero() {
                    continue;
                }
                out = self.tensor[l][r].axpy(&(xl * yr), &out);
            }
        }
        out
    }

    /// `x ↦ ⟨x, ·⟩` as a `(dim R · dim W) × dim L` matrix; row `r·dim W + w`.
    fn left_map(&self) -> Matrix {
        let (nl, nr, nw) = (self.left.dim, self.right.dim, self.value.dim);
        let mut m = Matrix::zeros(nr * nw, nl);
        for l in 0..nl {
            for r in 0..nr {
                for w in 0..nw {
                    m.set(r * nw + w, l, self.tensor[l][r][w].clone());
                }
            }
        }
        m
    }

    pub fn left_kernel(&self) -> Vec<Vector> {
        self.left_map().kernel_basis()
    }

    pub fn right_kernel(&self) -> Vec<Vector> {
        self.transposed().left_kernel()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.left_kernel().is_empty() && self.right_kernel().is_empty()
    }

    pub fn transposed(&self) -> ValuedPairing {
        let tensor = (0..self.right.dim)
            .map(|r| (0..self.left.dim).map(|l| self.tensor[l][r].clone()).collect())
            .collect();
        ValuedPairing {
            left: self.right.clone(),
            right: self.left.clone(),
            value: self.value.clone(),
            tensor,
        }
    }

    /// Scalar pairing matrix `M[l][r]` when the value space is a line.
    pub fn scalar_matrix(&self) -> Option<Matrix> {
        if self.value.dim != 1 {
            return None;
        }
        let rows = self
            .tensor
            .iter()
            .map(|row| row.iter().map(|v| v[0].clone()).collect())
            .collect();
        Some(Matrix::from_rows(rows, self.right.dim))
    }

    pub fn same_values(&self, other: &ValuedPairing) -> bool {
        self.tensor == other.tensor
    }

    /// Precomposition with maps into the two slots.
    pub fn pullback(&self, left: &Matrix, left_space: &Space, right: &Matrix, right_space: &Space) -> ValuedPairing {
        ValuedPairing::from_fn(left_space, right_space, &self.value, |x, y| {
            self.eval(&left.mul_vec(x), &right.mul_vec(y))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tensor: Vec<Vec<Vec<String>>> = self
            .tensor
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(Scalar::to_string).collect()).collect())
            .collect();
        json!({
            "left": self.left.label,
            "right": self.right.label,
            "value": self.value.label,
            "tensor": tensor,
        })
    }
}

/// A fiberwise pairing between two trivial DVBs that share one side: for
/// every point `x` of the shared side, the fiber of `left` over `x` is paired
/// with the fiber of `right` over `x` by a Gram matrix in fiber coordinates.
#[derive(Debug, Clone)]
pub struct SlicePairing {
    pub left: TrivialDvb,
    pub left_side: Side,
    pub right: TrivialDvb,
    pub right_side: Side,
    gram: Matrix,
}

impl SlicePairing {
    pub fn new(left: TrivialDvb, left_side: Side, right: TrivialDvb, right_side: Side, gram: Matrix) -> Self {
        assert_eq!(left.side(left_side).dim, right.side(right_side).dim, "no common side");
        assert_eq!(gram.rows(), left.fiber_dim(left_side));
        assert_eq!(gram.cols(), right.fiber_dim(right_side));
        SlicePairing {
            left,
            left_side,
            right,
            right_side,
            gram,
        }
    }

    /// Builds the Gram matrix from a formula on fiber coordinates.
    pub fn from_formula(
        left: TrivialDvb,
        left_side: Side,
        right: TrivialDvb,
        right_side: Side,
        f: impl Fn(&Vector, &Vector) -> Scalar,
    ) -> Self {
        let (nl, nr) = (left.fiber_dim(left_side), right.fiber_dim(right_side));
        let rows = (0..nl)
            .map(|i| {
                (0..nr)
                    .map(|j| f(&Vector::basis(nl, i), &Vector::basis(nr, j)))
                    .collect()
            })
            .collect();
        SlicePairing::new(left, left_side, right, right_side, Matrix::from_rows(rows, nr))
    }

    pub fn base_dim(&self) -> usize {
        self.left.side(self.left_side).dim
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.is_square() && self.gram.rank() == self.gram.rows()
    }

    /// `⟨x, y⟩`, defined when both lie over the same point of the shared side.
    pub fn pair(&self, x: &DvbElement, y: &DvbElement) -> Option<Scalar> {
        if self.left.base_of(self.left_side, x) != self.right.base_of(self.right_side, y) {
            return None;
        }
        let fx = self.left.fiber_coords(self.left_side, x);
        let fy = self.right.fiber_coords(self.right_side, y);
        Some(fx.dot(&self.gram.mul_vec(&fy)))
    }

    /// Element of `right` over `base` representing the functional
    /// `λ` on the left fiber given in fiber coordinates: `⟨x, y⟩ = λ(x)`.
    pub fn represent_in_right(&self, base: &Vector, lambda: &Vector) -> Option<DvbElement> {
        let y = self.gram.solve(lambda)?;
        Some(self.right.from_fiber_coords(self.right_side, base, &y))
    }

    /// Element of `left` over `base` representing a functional on the right
    /// fiber: `⟨x, y⟩ = μ(y)`.
    pub fn represent_in_left(&self, base: &Vector, mu: &Vector) -> Option<DvbElement> {
        let x = self.gram.transpose().solve(mu)?;
        Some(self.left.from_fiber_coords(self.left_side, base, &x))
    }

    pub fn flipped(&self) -> SlicePairing {
        SlicePairing {
            left: self.right.clone(),
            left_side: self.right_side,
            right: self.left.clone(),
            right_side: self.left_side,
            gram: self.gram.transpose(),
        }
    }
}

/// Coefficients of the restriction of `σ` to the fiber of `d` over `base`.
pub fn restrict_to_fiber(d: &TrivialDvb, side: Side, base: &Vector, sigma: impl Fn(&DvbElement) -> Scalar) -> Vector {
    d.fiber_basis(side, base).iter().map(sigma).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Scalar;

    #[test]
    fn kernels_detect_degeneracy() {
        let s = Space::new("X", 2);
        let line = Space::line();
        let dot = ValuedPairing::from_fn(&s, &s, &line, |x, y| Vector::new(vec![x.dot(y)]));
        assert!(dot.is_nondegenerate());
        assert_eq!(dot.scalar_matrix().unwrap(), Matrix::identity(2));
        let half = ValuedPairing::from_fn(&s, &s, &line, |x, y| Vector::new(vec![&x[0] * &y[0]]));
        assert_eq!(half.left_kernel(), vec![Vector::from_ints(&[0, 1])]);
        assert_eq!(half.right_kernel().len(), 1);
        let x = Vector::from_ints(&[2, 3]);
        let y = Vector::from_ints(&[5, -1]);
        assert_eq!(dot.eval(&x, &y), Vector::from_ints(&[7]));
        assert_eq!(dot.transposed().eval(&y, &x), Vector::from_ints(&[7]));
        assert_eq!(dot.to_json()["tensor"][0][0][0], "1");
    }

    #[test]
    fn representers_solve_the_pairing() {
        let d = TrivialDvb::with_dims(1, 2, 1);
        let p = SlicePairing::from_formula(d.clone(), Side::A, d.clone(), Side::A, |x, y| x.dot(y));
        let base = Vector::from_ints(&[4]);
        let lambda = Vector::from_ints(&[1, 2, 3]);
        let y = p.represent_in_right(&base, &lambda).unwrap();
        for (k, x) in d.fiber_basis(Side::A, &base).iter().enumerate() {
            assert_eq!(p.pair(x, &y).unwrap(), lambda[k]);
        }
        assert!(p.pair(&d.zero(), &y).is_none());
        assert_eq!(
            restrict_to_fiber(&d, Side::A, &base, |e| e.c[0].clone() + Scalar::from_int(2) * &e.b[1]),
            Vector::from_ints(&[0, 2, 1])
        );
    }
}
