//! Three steps of duals.
//!
//! Starting from `s: 0 → U⊗V → Π → K → 0`, take `Δ = Π*_U` and then the
//! `K*`-dual `Ξ` of `Δ`, which fits into `0 → V⊗K* →ʳ Ξ →^q U* → 0`. The
//! `V`-valued pairing
//!
//! `⟨η, σ⟩_V(v*) = ⟨η(ε), j(σ)⟩ − ⟨ε(σ), q(η)⟩` for any `ε ∈ Δ` with `p(ε) = v*`
//!
//! makes `Ξ` the `V`-dual of the transposed sequence.

use rand::Rng;
use serde::Serialize;

use crate::exactla::{contract_second, right_inverse, LinMap, Matrix, Vector};
use crate::sample;
use crate::seq::DvbStarSeq;

use super::pairing::ValuedPairing;
use super::udual::{transpose, u_dual, DualError, DualSide, UDual};

#[derive(Debug, Clone)]
pub struct Triality {
    pub source: DvbStarSeq,
    /// `Δ = Π*_U`.
    pub delta: UDual,
    /// `Ξ`, the `K*`-dual of `Δ`.
    pub xi: UDual,
    pub transposed: DvbStarSeq,
    /// Lifts `ε_l` of the dual basis `v*_l` used for [`Triality::pairing`].
    lifts: Vec<Vector>,
    /// `⟨·,·⟩_V: Ξ × Π → V`.
    pub pairing: ValuedPairing,
}

pub fn triality_pairing(s: &DvbStarSeq) -> Result<Triality, DualError> {
    let (du, dv, dk) = s.dims();
    if du == 0 || dv == 0 || dk == 0 {
        let side = if du == 0 { DualSide::First } else { DualSide::Second };
        return Err(DualError::DegenerateSide { side });
    }
    let delta = u_dual(s, DualSide::First)?;
    let xi = u_dual(&delta.seq, DualSide::Second)?;
    let lifts = right_inverse(delta.seq.j()).expect("p is onto").columns();
    let pairing = v_pairing(s, &delta, &xi, &lifts);
    Ok(Triality {
        source: s.clone(),
        delta,
        transposed: transpose(s),
        xi,
        lifts,
        pairing,
    })
}

fn v_pairing(s: &DvbStarSeq, delta: &UDual, xi: &UDual, lifts: &[Vector]) -> ValuedPairing {
    let (nx, np) = (xi.dim(), s.pi().dim);
    // both terms are bilinear, so tabulate the pairings with the lifts once
    let xi_eps: Vec<Vec<Vector>> = (0..nx)
        .map(|k| {
            lifts
                .iter()
                .map(|eps| xi.pairing.eval(&Vector::basis(nx, k), eps))
                .collect()
        })
        .collect();
    let eps_pi: Vec<Vec<Vector>> = lifts
        .iter()
        .map(|eps| {
            (0..np)
                .map(|m| delta.pairing.eval(eps, &Vector::basis(np, m)))
                .collect()
        })
        .collect();
    let j_cols = s.j().matrix().columns();
    let q_cols = xi.seq.j().matrix().columns();
    let tensor = (0..nx)
        .map(|k| {
            (0..np)
                .map(|m| {
                    (0..lifts.len())
                        .map(|l| xi_eps[k][l].dot(&j_cols[m]) - eps_pi[l][m].dot(&q_cols[k]))
                        .collect()
                })
                .collect()
        })
        .collect();
    ValuedPairing::from_tensor(xi.seq.pi(), s.pi(), &s.v, tensor)
}

impl Triality {
    /// The pairing recomputed with the lifts `ε_l + e(κ_l)` for random `κ_l`.
    pub fn pairing_with_shifted_lifts<R: Rng + ?Sized>(&self, rng: &mut R) -> ValuedPairing {
        let e = self.delta.seq.i();
        let shifted: Vec<Vector> = self
            .lifts
            .iter()
            .map(|eps| eps.add(&e.apply(&sample::vector(rng, e.domain().dim))))
            .collect();
        v_pairing(&self.source, &self.delta, &self.xi, &shifted)
    }

    /// `η ↦ ⟨η, ·⟩_V` into the `U`-dual of the transposed sequence, when every
    /// `⟨η, ·⟩_V` lies there.
    pub fn comparison_with_dual_of_transpose(&self) -> Option<LinMap> {
        let target = u_dual(&self.transposed, DualSide::First).ok()?;
        let n = self.source.pi().dim;
        let dv = self.source.v.dim;
        let cols = (0..self.xi.dim())
            .map(|k| {
                let eta = Vector::basis(self.xi.dim(), k);
                let hom = Matrix::from_columns(
                    &(0..n)
                        .map(|m| self.pairing.eval(&eta, &Vector::basis(n, m)))
                        .collect::<Vec<_>>(),
                    dv,
                );
                target.coords_of_hom(&hom)
            })
            .collect::<Option<Vec<_>>>()?;
        LinMap::new(
            self.xi.seq.pi().clone(),
            target.seq.pi().clone(),
            Matrix::from_columns(&cols, target.dim()),
        )
        .ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialityReport {
    pub dims: (usize, usize, usize),
    pub xi_shape: bool,
    pub lift_independent: bool,
    /// `⟨η, iᵗ(θ)⟩_V = q(η)⌐θ`.
    pub transpose_kernel: bool,
    /// `⟨r(ζ), σ⟩_V = j(σ)⌐ζ`.
    pub transpose_section: bool,
    pub nondegenerate: bool,
    pub comparison_iso: bool,
    pub double_transpose: bool,
}

impl TrialityReport {
    pub fn passed(&self) -> bool {
        self.xi_shape
            && self.lift_independent
            && self.transpose_kernel
            && self.transpose_section
            && self.nondegenerate
            && self.comparison_iso
            && self.double_transpose
    }
}

pub fn double_transpose_is_identity(s: &DvbStarSeq) -> bool {
    let tt = transpose(&transpose(s));
    tt.dims() == s.dims() && tt.i().matrix() == s.i().matrix() && tt.j().matrix() == s.j().matrix()
}

pub fn check_triality<R: Rng + ?Sized>(t: &Triality, rng: &mut R, trials: usize) -> TrialityReport {
    let s = &t.source;
    let (du, dv, dk) = s.dims();
    let mut rep = TrialityReport {
        dims: s.dims(),
        xi_shape: t.xi.seq.dims() == (dv, dk, du),
        lift_independent: true,
        transpose_kernel: true,
        transpose_section: true,
        nondegenerate: t.pairing.is_nondegenerate(),
        comparison_iso: t
            .comparison_with_dual_of_transpose()
            .is_some_and(|m| m.is_isomorphism()),
        double_transpose: double_transpose_is_identity(s),
    };
    for _ in 0..trials.max(1) {
        rep.lift_independent &= t.pairing.same_values(&t.pairing_with_shifted_lifts(rng));
    }
    for _ in 0..trials {
        let eta = sample::vector(rng, t.xi.dim());
        let theta = sample::vector(rng, dv * du);
        let lhs = t.pairing.eval(&eta, &t.transposed.i().apply(&theta));
        rep.transpose_kernel &= lhs == contract_second(&theta, &t.xi.seq.j().apply(&eta));
        let zeta = sample::vector(rng, dv * dk);
        let sigma = sample::vector(rng, s.pi().dim);
        let lhs = t.pairing.eval(&t.xi.seq.i().apply(&zeta), &sigma);
        rep.transpose_section &= lhs == contract_second(&zeta, &s.j().apply(&sigma));
    }
    rep
}

/// Builds and checks in one step, with degenerate sides reported as errors.
pub fn triality_report<R: Rng + ?Sized>(
    s: &DvbStarSeq,
    rng: &mut R,
    trials: usize,
) -> Result<TrialityReport, DualError> {
    Ok(check_triality(&triality_pairing(s)?, rng, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Space;
    use crate::sample::rng_from_seed;

    #[test]
    fn one_dimensional_example() {
        let s = DvbStarSeq::split(&Space::new("U", 1), &Space::new("V", 1), &Space::new("K", 1));
        let t = triality_pairing(&s).unwrap();
        // η = (ζ, u*) with r(ζ) = (ζ, 0), q(η) = u*
        assert_eq!(t.xi.seq.i().matrix(), &Matrix::from_ints(&[&[1], &[0]]));
        assert_eq!(t.xi.seq.j().matrix(), &Matrix::from_ints(&[&[0, 1]]));
        let v = t.pairing.eval(&Vector::from_ints(&[1, 2]), &Vector::from_ints(&[3, 4]));
        assert_eq!(v, Vector::from_ints(&[-2]));
        assert!(check_triality(&t, &mut rng_from_seed(1), 5).passed());
    }

    #[test]
    fn random_instances() {
        let mut rng = rng_from_seed(17);
        for _ in 0..8 {
            let (du, dv, dk) = (
                sample::dim(&mut rng, 1, 3),
                sample::dim(&mut rng, 1, 3),
                sample::dim(&mut rng, 1, 3),
            );
            let s = DvbStarSeq::random(&mut rng, du, dv, dk);
            let rep = triality_report(&s, &mut rng, 4).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn degenerate_sides() {
        let s = DvbStarSeq::split(&Space::new("U", 2), &Space::new("V", 0), &Space::new("K", 1));
        assert!(triality_pairing(&s).is_err());
        assert!(double_transpose_is_identity(&s));
    }
}
