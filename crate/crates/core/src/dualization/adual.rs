//! `X(D*_A)` as the `A*`-dual of `X(D)`, and the mirror statement over `B`.
//!
//! A double-linear `σ` on `D` restricts on the fiber over `a` to a linear
//! functional, represented through the side-dual pairing by `σ̲(a) ∈ D*_A`.
//! Likewise `ε ∈ X(D*_A)` is represented by `ε̲(a) ∈ D`. The pairing
//! `⟨σ, ε⟩(a) = ⟨σ̲(a), ε̲(a)⟩` is linear in `a` and so lies in `A*`.

use rand::Rng;
use serde::Serialize;

use crate::dvb::{DvbElement, Side, TrivialDvb};
use crate::exactla::{contract_first, contract_second_sized, LinMap, Matrix, Scalar, Vector};
use crate::sample;
use crate::seq::{check_ladder, DvbStarSeq, LadderReport};

use super::pairing::{restrict_to_fiber, SlicePairing, ValuedPairing};
use super::side_dual::{dual_over, SideDual};
use super::udual::{u_dual, DualSide, UDual};
use super::xspace::{xspace, DoubleLinearFunctional};

/// Representers of each functional over `base`, paired: `P(f̲(base), g̲(base))`
/// for `f` a functional on `p.right` and `g` one on `p.left`.
fn induced_at<F, G>(p: &SlicePairing, fs: &[F], gs: &[G], base: &Vector) -> Option<Vec<Vec<Scalar>>>
where
    F: Fn(&DvbElement) -> Scalar,
    G: Fn(&DvbElement) -> Scalar,
{
    let lefts = fs
        .iter()
        .map(|f| p.represent_in_left(base, &restrict_to_fiber(&p.right, p.right_side, base, f)))
        .collect::<Option<Vec<_>>>()?;
    let rights = gs
        .iter()
        .map(|g| p.represent_in_right(base, &restrict_to_fiber(&p.left, p.left_side, base, g)))
        .collect::<Option<Vec<_>>>()?;
    lefts
        .iter()
        .map(|x| rights.iter().map(|y| p.pair(x, y)).collect())
        .collect()
}

/// The pairing induced by `p` between functionals on its right and left
/// DVBs, with values in the dual of the shared side (evaluated at its basis).
pub fn induced_pairing<F, G>(p: &SlicePairing, fs: &[F], gs: &[G]) -> Option<Vec<Vec<Vector>>>
where
    F: Fn(&DvbElement) -> Scalar,
    G: Fn(&DvbElement) -> Scalar,
{
    let n = p.base_dim();
    let per_base = (0..n)
        .map(|k| induced_at(p, fs, gs, &Vector::basis(n, k)))
        .collect::<Option<Vec<_>>>()?;
    Some(
        (0..fs.len())
            .map(|l| {
                (0..gs.len())
                    .map(|r| (0..n).map(|k| per_base[k][l][r].clone()).collect())
                    .collect()
            })
            .collect(),
    )
}

/// Whether the induced value at random base points agrees with the linear
/// extension of its values at basis points.
pub fn induced_is_linear<F, G, R>(
    p: &SlicePairing,
    fs: &[F],
    gs: &[G],
    tensor: &[Vec<Vector>],
    rng: &mut R,
    trials: usize,
) -> bool
where
    F: Fn(&DvbElement) -> Scalar,
    G: Fn(&DvbElement) -> Scalar,
    R: Rng + ?Sized,
{
    (0..trials).all(|_| {
        let base = sample::vector(rng, p.base_dim());
        match induced_at(p, fs, gs, &base) {
            Some(vals) => vals
                .iter()
                .enumerate()
                .all(|(l, row)| row.iter().enumerate().all(|(r, v)| *v == tensor[l][r].dot(&base))),
            None => false,
        }
    })
}

pub(crate) fn functionals(d: &TrivialDvb, x: &DvbStarSeq) -> Vec<impl Fn(&DvbElement) -> Scalar> {
    (0..x.pi().dim)
        .map(|k| {
            let sigma = DoubleLinearFunctional::from_coords(d, &Vector::basis(x.pi().dim, k));
            move |e: &DvbElement| sigma.eval(e)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ADual {
    pub side: Side,
    pub side_dual: SideDual,
    /// `X(D)`.
    pub xd: DvbStarSeq,
    /// `X(D*_A)` (or `X(D*_B)`).
    pub xdual: DvbStarSeq,
    /// The dual of `X(D)` with respect to `A*` (or `B*`).
    pub target: UDual,
    /// `⟨·,·⟩: X(D) × X(D*) → A*` (or `B*`).
    pub pairing: ValuedPairing,
    /// `ε ↦ ⟨·, ε⟩`, from `X(D*)` to the dual of `X(D)`.
    pub comparison: LinMap,
}

/// `None` when the shared side is zero, where the valued pairing is
/// identically zero and there is nothing to compare.
pub fn adual(d: &TrivialDvb, side: Side) -> Option<ADual> {
    if d.side(side).dim == 0 {
        return None;
    }
    let sd = dual_over(d, side);
    let xd = xspace(d);
    let xdual = xspace(&sd.dual);
    let target = u_dual(
        &xd,
        match side {
            Side::A => DualSide::First,
            Side::B => DualSide::Second,
        },
    )
    .ok()?;
    let fs = functionals(d, &xd);
    let gs = functionals(&sd.dual, &xdual);
    let tensor = induced_pairing(&sd.pairing, &fs, &gs)?;
    let value = d.side(side).dual();
    let pairing = ValuedPairing::from_tensor(xd.pi(), xdual.pi(), &value, tensor);
    let n = xd.pi().dim;
    let cols = (0..xdual.pi().dim)
        .map(|r| {
            let eps = Vector::basis(xdual.pi().dim, r);
            let cols: Vec<Vector> = (0..n).map(|m| pairing.eval(&Vector::basis(n, m), &eps)).collect();
            target.coords_of_hom(&Matrix::from_columns(&cols, value.dim))
        })
        .collect::<Option<Vec<_>>>()?;
    let comparison = LinMap::new(
        xdual.pi().clone(),
        target.seq.pi().clone(),
        Matrix::from_columns(&cols, target.dim()),
    )
    .ok()?;
    Some(ADual {
        side,
        side_dual: sd,
        xd,
        xdual,
        target,
        pairing,
        comparison,
    })
}

impl ADual {
    /// `θ(a⊗χ′) + θ′(a⊗χ)` over `A`; `θ(χ′⊗b) + θ′(χ⊗b)` over `B`.
    pub fn closed_form(&self, sigma: &Vector, eps: &Vector) -> Vector {
        let d = &self.side_dual.original;
        let s = DoubleLinearFunctional::from_coords(d, sigma);
        let e = DoubleLinearFunctional::from_coords(&self.side_dual.dual, eps);
        match self.side {
            Side::A => {
                contract_second_sized(&s.theta, &e.chi, d.a.dim).add(&contract_second_sized(&e.theta, &s.chi, d.a.dim))
            }
            Side::B => contract_first(&s.theta, &e.chi, d.b.dim).add(&contract_first(&e.theta, &s.chi, d.b.dim)),
        }
    }

    /// First-slot contraction over `B`, second-slot over `A`.
    fn contract(&self, t: &Vector, lambda: &Vector) -> Vector {
        match self.side {
            Side::A => contract_second_sized(t, lambda, self.side_dual.original.a.dim),
            Side::B => contract_first(t, lambda, self.side_dual.original.b.dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ADualReport {
    pub side: Side,
    pub dims: (usize, usize, usize),
    /// The shared side is zero; every check holds trivially.
    pub vacuous: bool,
    pub closed_form: bool,
    pub linear_in_base: bool,
    /// `⟨i(θ), ε⟩ = j₁(ε)⌐θ`.
    pub kernel_equality: bool,
    /// `⟨σ, i₁(κ)⟩ = j(σ)⌐κ`.
    pub section_equality: bool,
    pub nondegenerate: bool,
    pub comparison_iso: bool,
    pub ladder: Option<LadderReport>,
}

impl ADualReport {
    pub fn passed(&self) -> bool {
        self.vacuous
            || (self.closed_form
                && self.linear_in_base
                && self.kernel_equality
                && self.section_equality
                && self.nondegenerate
                && self.comparison_iso
                && self.ladder.as_ref().is_some_and(LadderReport::commutes))
    }
}

pub fn adual_compare<R: Rng + ?Sized>(d: &TrivialDvb, side: Side, rng: &mut R, trials: usize) -> ADualReport {
    let Some(ad) = adual(d, side) else {
        return ADualReport {
            side,
            dims: d.dims(),
            vacuous: d.side(side).dim == 0,
            closed_form: false,
            linear_in_base: false,
            kernel_equality: false,
            section_equality: false,
            nondegenerate: false,
            comparison_iso: false,
            ladder: None,
        };
    };
    let (n1, n2) = (ad.xd.pi().dim, ad.xdual.pi().dim);
    let closed_form = (0..n1).all(|l| {
        (0..n2).all(|r| {
            let (x, y) = (Vector::basis(n1, l), Vector::basis(n2, r));
            ad.pairing.eval(&x, &y) == ad.closed_form(&x, &y)
        })
    });
    let fs = functionals(d, &ad.xd);
    let gs = functionals(&ad.side_dual.dual, &ad.xdual);
    let tensor: Vec<Vec<Vector>> = (0..n1)
        .map(|l| {
            (0..n2)
                .map(|r| ad.pairing.eval(&Vector::basis(n1, l), &Vector::basis(n2, r)))
                .collect()
        })
        .collect();
    let linear_in_base = induced_is_linear(&ad.side_dual.pairing, &fs, &gs, &tensor, rng, trials.min(5));
    let mut kernel_equality = true;
    let mut section_equality = true;
    for _ in 0..trials {
        let theta = sample::vector(rng, ad.xd.i().domain().dim);
        let eps = sample::vector(rng, n2);
        kernel_equality &=
            ad.pairing.eval(&ad.xd.i().apply(&theta), &eps) == ad.contract(&theta, &ad.xdual.j().apply(&eps));
        let kappa = sample::vector(rng, ad.xdual.i().domain().dim);
        let sigma = sample::vector(rng, n1);
        section_equality &=
            ad.pairing.eval(&sigma, &ad.xdual.i().apply(&kappa)) == ad.contract(&kappa, &ad.xd.j().apply(&sigma));
    }
    let left = LinMap::identity(ad.xdual.i().domain())
        .with_spaces(ad.xdual.i().domain().clone(), ad.target.seq.i().domain().clone());
    let right = LinMap::identity(ad.xdual.j().codomain())
        .with_spaces(ad.xdual.j().codomain().clone(), ad.target.seq.j().codomain().clone());
    let ladder = check_ladder(&ad.xdual.seq, &ad.target.seq.seq, &left, &ad.comparison, &right);
    ADualReport {
        side,
        dims: d.dims(),
        vacuous: false,
        closed_form,
        linear_in_base,
        kernel_equality,
        section_equality,
        nondegenerate: ad.pairing.is_nondegenerate(),
        comparison_iso: ad.comparison.is_isomorphism(),
        ladder: Some(ladder),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_from_seed;

    #[test]
    fn scalar_dims() {
        let d = TrivialDvb::with_dims(1, 1, 1);
        let ad = adual(&d, Side::A).unwrap();
        assert_eq!(ad.xd.pi().dim, 2);
        assert_eq!(ad.xdual.pi().dim, 2);
        assert_eq!(ad.target.dim(), 2);
        assert!(ad.comparison.is_isomorphism());
        // ⟨(θ, χ), (θ′, χ′)⟩(a) = θχ′a + θ′χa
        let v = ad
            .pairing
            .eval(&Vector::from_ints(&[2, 3]), &Vector::from_ints(&[5, 7]));
        assert_eq!(v, Vector::from_ints(&[2 * 7 + 5 * 3]));
    }

    #[test]
    fn both_sides_on_random_dims() {
        let mut rng = rng_from_seed(8);
        for dims in [(1, 1, 1), (2, 3, 1), (3, 1, 2), (2, 2, 2), (1, 2, 0), (2, 0, 1)] {
            let d = TrivialDvb::with_dims(dims.0, dims.1, dims.2);
            for side in [Side::A, Side::B] {
                let rep = adual_compare(&d, side, &mut rng, 5);
                assert!(rep.passed(), "{rep:?}");
                assert!(!rep.vacuous || d.side(side).dim == 0);
            }
        }
    }

    #[test]
    fn zero_side_is_vacuous() {
        let d = TrivialDvb::with_dims(0, 2, 1);
        let rep = adual_compare(&d, Side::A, &mut rng_from_seed(1), 3);
        assert!(rep.vacuous && rep.passed());
    }
}
