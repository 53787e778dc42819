//! Double-linear functions on a slice.
//!
//! `X(D)` is realized in closed form as pairs `(θ, χ) ∈ A*⊗B* ⊕ C*` acting by
//! `σ(a, b, c) = θ(a⊗b) + χ(c)`. The ansatz oracle below recomputes the space
//! from the linearity axioms alone and is used to certify the closed form.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::Ansatz;
use crate::dvb::{combine_a, combine_b, DoubleStructure, DvbElement, TrivialDvb};
use crate::exactla::{tensor_vec, LinMap, Matrix, Scalar, Vector};
use crate::sample;
use crate::seq::DvbStarSeq;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleLinearFunctional {
    pub theta: Vector,
    pub chi: Vector,
}

impl DoubleLinearFunctional {
    pub fn new(theta: Vector, chi: Vector) -> Self {
        DoubleLinearFunctional { theta, chi }
    }

    /// Splits coordinates of `X(D) = A*⊗B* ⊕ C*`.
    pub fn from_coords(d: &TrivialDvb, x: &Vector) -> Self {
        let n = d.a.dim * d.b.dim;
        DoubleLinearFunctional::new(x.slice(0, n), x.slice(n, d.c.dim))
    }

    pub fn coords(&self) -> Vector {
        self.theta.concat(&self.chi)
    }

    pub fn eval(&self, d: &DvbElement) -> Scalar {
        self.theta.dot(&tensor_vec(&d.a, &d.b)) + self.chi.dot(&d.c)
    }
}

/// `0 → A*⊗B* →ⁱ X(D) →ʲ C* → 0` with `i(θ) = (θ, 0)` and `j(θ, χ) = χ`.
pub fn xspace(d: &TrivialDvb) -> DvbStarSeq {
    let (u, v, k) = (d.a.dual(), d.b.dual(), d.c.dual());
    let n = u.dim * v.dim;
    let x = crate::exactla::Space::new(format!("X({}{}{})", d.a.label, d.b.label, d.c.label), n + k.dim);
    let i = Matrix::identity(n).vstack(&Matrix::zeros(k.dim, n));
    let j = Matrix::zeros(k.dim, n).hstack(&Matrix::identity(k.dim));
    DvbStarSeq::new(
        u.clone(),
        v.clone(),
        k.clone(),
        LinMap::new(u.tensor(&v), x.clone(), i).expect("i shape"),
        LinMap::new(x, k, j).expect("j shape"),
    )
    .expect("X(D) sequence is exact")
}

/// The standard pairing between `A⊗B ⊕ C` (the combined space) and `X(D)`:
/// `⟨x ⊕ c, (θ, χ)⟩ = θ(x) + χ(c)`.
pub fn pair_cd_xd(omega: &Vector, sigma: &Vector) -> Scalar {
    assert_eq!(omega.len(), sigma.len(), "pairing arguments have different dimensions");
    omega.dot(sigma)
}

/// Point coordinates `(a, b, c)` used by the ansatz.
fn point(d: &DvbElement) -> Vector {
    d.coords()
}

/// Scalar-valued degree-≤2 ansatz on `A × B × C` constrained by additivity
/// and homogeneity over both side structures, sampled at `samples` random
/// configurations per axiom.
pub fn double_linear_ansatz<R: Rng + ?Sized>(d: &TrivialDvb, rng: &mut R, samples: usize) -> Ansatz {
    let (da, db, dc) = d.dims();
    let mut ans = Ansatz::new(da + db + dc, 1);
    let one = Scalar::one();
    let minus = -Scalar::one();
    for _ in 0..samples {
        let a = sample::vector(rng, da);
        let b = sample::vector(rng, db);
        let r = sample::scalar(rng);
        let x1 = DvbElement::new(a.clone(), sample::vector(rng, db), sample::vector(rng, dc));
        let x2 = DvbElement::new(a.clone(), sample::vector(rng, db), sample::vector(rng, dc));
        let y1 = DvbElement::new(sample::vector(rng, da), b.clone(), sample::vector(rng, dc));
        let y2 = DvbElement::new(sample::vector(rng, da), b.clone(), sample::vector(rng, dc));
        let sum_a = combine_a(&one, &x1, &x2).expect("same a");
        let scaled_a = combine_a(&r, &x1, &d.zero_over_a(&a)).expect("same a");
        let sum_b = combine_b(&one, &y1, &y2).expect("same b");
        let scaled_b = combine_b(&r, &y1, &d.zero_over_b(&b)).expect("same b");
        ans.add_relation(&[
            (0, one.clone(), point(&sum_a)),
            (0, minus.clone(), point(&x1)),
            (0, minus.clone(), point(&x2)),
        ]);
        ans.add_relation(&[(0, one.clone(), point(&scaled_a)), (0, -r.clone(), point(&x1))]);
        ans.add_relation(&[
            (0, one.clone(), point(&sum_b)),
            (0, minus.clone(), point(&y1)),
            (0, minus.clone(), point(&y2)),
        ]);
        ans.add_relation(&[(0, one.clone(), point(&scaled_b)), (0, -r, point(&y1))]);
    }
    ans
}

/// Enough samples for the ansatz over `d` to reach full rank generically.
/// Each sample contributes four relations; a quarter of the monomial count
/// plus a margin of four samples has sufficed on every dims triple ≤ 3.
pub fn default_samples(d: &TrivialDvb) -> usize {
    let n = d.a.dim + d.b.dim + d.c.dim;
    let monomials = 1 + n + n * (n + 1) / 2;
    monomials.div_ceil(4) + 4
}

/// Coefficient vectors of the closed-form basis `(θ = e_ij*, 0)` followed by
/// `(0, χ = g_k*)`, in the ansatz of [`double_linear_ansatz`].
pub fn closed_form_family(d: &TrivialDvb, ans: &Ansatz) -> Vec<Vector> {
    let x = xspace(d);
    (0..x.pi().dim)
        .map(|k| {
            let sigma = DoubleLinearFunctional::from_coords(d, &Vector::basis(x.pi().dim, k));
            let (da, db) = (d.a.dim, d.b.dim);
            ans.interpolate(|p| {
                let e = DvbElement::new(p.slice(0, da), p.slice(da, db), p.slice(da + db, d.c.dim));
                Vector::new(vec![sigma.eval(&e)])
            })
        })
        .collect()
}

/// Result of comparing the ansatz solution space with the closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XspaceOracleReport {
    pub dims: (usize, usize, usize),
    pub solution_dim: usize,
    pub closed_form_dim: usize,
    pub equal: bool,
}

impl XspaceOracleReport {
    pub fn passed(&self) -> bool {
        self.equal && self.solution_dim == self.closed_form_dim
    }
}

pub fn xspace_oracle<R: Rng + ?Sized>(d: &TrivialDvb, rng: &mut R) -> XspaceOracleReport {
    let ans = double_linear_ansatz(d, rng, default_samples(d));
    let family = closed_form_family(d, &ans);
    let solutions = ans.solution_basis();
    XspaceOracleReport {
        dims: d.dims(),
        solution_dim: solutions.len(),
        closed_form_dim: family.len(),
        equal: ans.solution_space_equals(&family),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_from_seed;

    #[test]
    fn closed_form_examples() {
        let d = TrivialDvb::with_dims(2, 3, 1);
        let x = xspace(&d);
        assert_eq!(x.pi().dim, 7);
        assert!(x.j().compose(x.i()).is_zero());
        let sigma = DoubleLinearFunctional::from_coords(&TrivialDvb::with_dims(1, 1, 1), &Vector::from_ints(&[1, 2]));
        assert_eq!(
            sigma.eval(&DvbElement::from_ints(&[2], &[3], &[5])),
            Scalar::from_int(16)
        );
        assert_eq!(
            pair_cd_xd(&Vector::from_ints(&[6, 5]), &sigma.coords()),
            Scalar::from_int(16)
        );
    }

    #[test]
    fn ansatz_matches_closed_form() {
        let mut rng = rng_from_seed(21);
        for dims in [(2, 3, 1), (1, 1, 1), (0, 2, 1), (2, 0, 0), (0, 0, 0)] {
            let d = TrivialDvb::with_dims(dims.0, dims.1, dims.2);
            let report = xspace_oracle(&d, &mut rng);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn pairing_special_equalities() {
        let mut rng = rng_from_seed(3);
        let d = TrivialDvb::with_dims(2, 2, 2);
        let x = xspace(&d);
        for _ in 0..20 {
            let omega = sample::vector(&mut rng, 6);
            let theta = sample::vector(&mut rng, 4);
            let kappa = sample::vector(&mut rng, 2);
            // ⟨ω, i(θ)⟩ = ⟨p(ω), θ⟩ with p the projection onto A⊗B
            assert_eq!(pair_cd_xd(&omega, &x.i().apply(&theta)), omega.slice(0, 4).dot(&theta));
            // ⟨e(c), σ⟩ = ⟨c, j(σ)⟩
            let sigma = sample::vector(&mut rng, 6);
            let ec = Vector::zeros(4).concat(&kappa);
            assert_eq!(pair_cd_xd(&ec, &sigma), kappa.dot(&x.j().apply(&sigma)));
        }
    }
}
