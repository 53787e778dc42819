//! Duals of a double vector bundle over one of its sides.
//!
//! Over `A` the dual of `(A, B; C)` is `(A, C*; B*)`, elements `(a, χ, ψ)`
//! pairing with `(a, b, c)` as `ψ(b) + χ(c)`. Over `B` it is `(C*, B; A*)`,
//! elements `(χ, b, φ)` pairing as `φ(a) + χ(c)`.

use rand::Rng;
use serde::Serialize;

use crate::dvb::{DoubleStructure, DvbElement, Side, TrivialDvb};
use crate::exactla::{Matrix, Scalar};
use crate::sample;

use super::pairing::SlicePairing;

#[derive(Debug, Clone)]
pub struct SideDual {
    pub original: TrivialDvb,
    pub side: Side,
    pub dual: TrivialDvb,
    /// Fiberwise pairing with the dual on the left and the original on the right.
    pub pairing: SlicePairing,
}

/// Gram matrix pairing fiber coordinates `(x₁, x₂)` with `(y₁, y₂)` as
/// `x₂·y₁ + x₁·y₂` where the blocks have the given sizes.
fn cross_gram(n1: usize, n2: usize) -> Matrix {
    // left coords: (x1: n2-dim, x2: n1-dim); right coords: (y1: n1, y2: n2)
    let mut g = Matrix::zeros(n2 + n1, n1 + n2);
    for k in 0..n2 {
        g.set(k, n1 + k, Scalar::one());
    }
    for j in 0..n1 {
        g.set(n2 + j, j, Scalar::one());
    }
    g
}

pub fn dual_over_a(d: &TrivialDvb) -> SideDual {
    let dual = TrivialDvb::new(d.a.clone(), d.c.dual(), d.b.dual());
    // dual fiber over a: (χ, ψ); original fiber over a: (b, c)
    let gram = cross_gram(d.b.dim, d.c.dim);
    SideDual {
        original: d.clone(),
        side: Side::A,
        pairing: SlicePairing::new(dual.clone(), Side::A, d.clone(), Side::A, gram),
        dual,
    }
}

pub fn dual_over_b(d: &TrivialDvb) -> SideDual {
    let dual = TrivialDvb::new(d.c.dual(), d.b.clone(), d.a.dual());
    // dual fiber over b: (χ, φ); original fiber over b: (a, c)
    let gram = cross_gram(d.a.dim, d.c.dim);
    SideDual {
        original: d.clone(),
        side: Side::B,
        pairing: SlicePairing::new(dual.clone(), Side::B, d.clone(), Side::B, gram),
        dual,
    }
}

pub fn dual_over(d: &TrivialDvb, side: Side) -> SideDual {
    match side {
        Side::A => dual_over_a(d),
        Side::B => dual_over_b(d),
    }
}

impl SideDual {
    pub fn pair(&self, phi: &DvbElement, d: &DvbElement) -> Option<Scalar> {
        self.pairing.pair(phi, d)
    }

    /// The closed formula `ψ(b) + χ(c)` (over `A`) or `φ(a) + χ(c)` (over `B`).
    pub fn formula(&self, phi: &DvbElement, d: &DvbElement) -> Scalar {
        match self.side {
            Side::A => phi.c.dot(&d.b) + phi.b.dot(&d.c),
            Side::B => phi.c.dot(&d.a) + phi.a.dot(&d.c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideDualReport {
    pub side: Side,
    pub formula: bool,
    pub projection: bool,
    pub addition: bool,
    pub scalar: bool,
    pub zero_above_chi: bool,
    pub core_element: bool,
    pub nondegenerate: bool,
}

impl SideDualReport {
    pub fn passed(&self) -> bool {
        self.formula
            && self.projection
            && self.addition
            && self.scalar
            && self.zero_above_chi
            && self.core_element
            && self.nondegenerate
    }
}

/// Checks the defining identities of the dual over `A` on random samples:
/// the projection to `C*`, the addition over `C*`, its scalar
/// multiplication, the zero above `χ` and the core element of `ψ`. The dual
/// over `B` is checked through the flip.
pub fn check_side_dual<R: Rng + ?Sized>(sd: &SideDual, rng: &mut R, trials: usize) -> SideDualReport {
    if sd.side == Side::B {
        let flipped = dual_over_a(&sd.original.flip());
        let mut rep = check_side_dual(&flipped, rng, trials);
        rep.side = Side::B;
        let same_model = sd.dual == flipped.dual.flip();
        let same_pairing = (0..trials).all(|_| {
            let d = sd.original.random_element(rng);
            let phi = DvbElement::new(
                sample::vector(rng, sd.dual.a.dim),
                d.b.clone(),
                sample::vector(rng, sd.dual.c.dim),
            );
            sd.pair(&phi, &d) == flipped.pair(&phi.flipped(), &d.flipped())
                && sd.pair(&phi, &d) == Some(sd.formula(&phi, &d))
        });
        rep.formula &= same_model && same_pairing;
        return rep;
    }
    let d = &sd.original;
    let e = &sd.dual;
    let mut rep = SideDualReport {
        side: Side::A,
        formula: true,
        projection: true,
        addition: true,
        scalar: true,
        zero_above_chi: true,
        core_element: true,
        nondegenerate: sd.pairing.is_nondegenerate(),
    };
    for _ in 0..trials {
        let a = sample::vector(rng, d.a.dim);
        let a2 = sample::vector(rng, d.a.dim);
        let b = sample::vector(rng, d.b.dim);
        let c = sample::vector(rng, d.c.dim);
        let chi = sample::vector(rng, d.c.dim);
        let psi = sample::vector(rng, d.b.dim);
        let phi = DvbElement::new(a.clone(), chi.clone(), psi.clone());
        let x = DvbElement::new(a.clone(), b.clone(), c.clone());
        rep.formula &= sd.pair(&phi, &x) == Some(sd.formula(&phi, &x));

        // ⟨q(Φ), c⟩ = ⟨Φ, 0_a +_B c̄⟩
        let probe = d.add_b(&d.zero_over_a(&a), &d.core_embed(&c)).expect("both over b = 0");
        rep.projection &= sd.pair(&phi, &probe) == Some(e.proj_b(&phi).dot(&c));

        // ⟨Φ +_{C*} Φ', d +_B d'⟩ = ⟨Φ, d⟩ + ⟨Φ', d'⟩
        let phi2 = DvbElement::new(a2.clone(), chi.clone(), sample::vector(rng, d.b.dim));
        let x2 = DvbElement::new(a2.clone(), b.clone(), sample::vector(rng, d.c.dim));
        let lhs = sd.pair(
            &e.add_b(&phi, &phi2).expect("same χ"),
            &d.add_b(&x, &x2).expect("same b"),
        );
        let rhs = sd.pair(&phi, &x).zip(sd.pair(&phi2, &x2)).map(|(u, v)| u + v);
        rep.addition &= lhs.is_some() && lhs == rhs;

        // ⟨r·Φ, d⟩ = r ⟨Φ, (1/r)·_B d⟩ for d over r·a
        let r = sample::nonzero_scalar(rng);
        let y = DvbElement::new(a.scale(&r), b.clone(), c.clone());
        let lhs = sd.pair(&e.scale_b(&r, &phi).expect("scaling"), &y);
        let shrunk = d.scale_b(&r.recip().expect("nonzero"), &y).expect("scaling");
        let rhs = sd.pair(&phi, &shrunk).map(|v| &r * &v);
        rep.scalar &= lhs.is_some() && lhs == rhs;

        // ⟨0_χ, 0_b +_A c̄⟩ = ⟨χ, c⟩
        let zb_c = d.add_a(&d.zero_over_b(&b), &d.core_embed(&c)).expect("both over a = 0");
        rep.zero_above_chi &= sd.pair(&e.zero_over_b(&chi), &zb_c) == Some(chi.dot(&c));

        // ⟨ψ̄, 0_b +_A c̄⟩ = ⟨ψ, b⟩ and ⟨0_a +_{C*} ψ̄, d⟩ = ⟨ψ, q_B(d)⟩
        let psi_bar = e.core_embed(&psi);
        let shifted = e.add_b(&e.zero_over_a(&a), &psi_bar).expect("both over χ = 0");
        rep.core_element &=
            sd.pair(&psi_bar, &zb_c) == Some(psi.dot(&b)) && sd.pair(&shifted, &x) == Some(psi.dot(&d.proj_b(&x)));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_from_seed;

    #[test]
    fn pairing_example() {
        let d = TrivialDvb::with_dims(1, 1, 1);
        let sd = dual_over_a(&d);
        let phi = DvbElement::from_ints(&[1], &[2], &[3]);
        assert_eq!(
            sd.pair(&phi, &DvbElement::from_ints(&[1], &[4], &[5])),
            Some(Scalar::from_int(22))
        );
        assert_eq!(sd.pair(&phi, &DvbElement::from_ints(&[2], &[4], &[5])), None);
        let sb = dual_over_b(&d);
        // ⟨(χ, b, φ), (a, b, c)⟩ = φ(a) + χ(c)
        let phi = DvbElement::from_ints(&[2], &[4], &[3]);
        assert_eq!(
            sb.pair(&phi, &DvbElement::from_ints(&[1], &[4], &[5])),
            Some(Scalar::from_int(13))
        );
    }

    #[test]
    fn identities_hold() {
        let mut rng = rng_from_seed(1);
        for dims in [(1, 1, 1), (2, 3, 1), (0, 2, 2), (2, 0, 1), (3, 1, 0)] {
            let d = TrivialDvb::with_dims(dims.0, dims.1, dims.2);
            for side in [Side::A, Side::B] {
                let rep = check_side_dual(&dual_over(&d, side), &mut rng, 10);
                assert!(rep.passed(), "{dims:?} {rep:?}");
            }
        }
    }

    #[test]
    fn flip_and_double_dual() {
        let d = TrivialDvb::with_dims(2, 3, 1);
        assert_eq!(dual_over_b(&d).dual, dual_over_a(&d.flip()).dual.flip());
        let dd = dual_over_a(&dual_over_a(&d).dual);
        assert_eq!(dd.dual.dims(), d.dims());
        // (a, b, c) ↦ (a, b, c) carries one pairing to the other
        let mut rng = rng_from_seed(2);
        let first = dual_over_a(&d);
        for _ in 0..10 {
            let x = d.random_element(&mut rng);
            let phi = DvbElement::new(x.a.clone(), sample::vector(&mut rng, 1), sample::vector(&mut rng, 3));
            assert_eq!(dd.pair(&x, &phi), first.pair(&phi, &x));
        }
    }
}
