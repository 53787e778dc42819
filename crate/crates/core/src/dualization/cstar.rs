//! `D*_A` and `D*_B` as mutual duals over `C*`.
//!
//! Triality on `X(D)` gives a `C`-valued pairing between `Ξ` and the
//! `A*`-dual of `X(D)`. Composing with the comparison maps of both side
//! duals moves it to `X(D*_B) × X(D*_A)`. The induced fiberwise pairing
//! between `D*_A` and `D*_B` over `C*` is then found among
//! `α ψ(b) + β φ(a)` by matching representers.

use rand::Rng;
use serde::Serialize;

use crate::dvb::{Side, TrivialDvb};
use crate::exactla::{contract_first, contract_second, LinMap, Matrix, Scalar, Vector};
use crate::sample;

use super::adual::{adual, functionals, induced_pairing, ADual};
use super::pairing::{SlicePairing, ValuedPairing};
use super::side_dual::{dual_over_a, dual_over_b};
use super::triality::{triality_pairing, Triality};
use super::xspace::xspace;

/// Fiberwise pairing between `D*_A = (A, C*; B*)` and `D*_B = (C*, B; A*)`
/// over `C*`: `⟨(a, χ, ψ), (χ, b, φ)⟩ = α ψ(b) + β φ(a)`.
pub fn slice_pairing(d: &TrivialDvb, alpha: i64, beta: i64) -> SlicePairing {
    let (da, db, _) = d.dims();
    let (alpha, beta) = (Scalar::from_int(alpha), Scalar::from_int(beta));
    // fiber of D*_A over χ: (a, ψ); fiber of D*_B over χ: (b, φ)
    SlicePairing::from_formula(dual_over_a(d).dual, Side::B, dual_over_b(d).dual, Side::A, |x, y| {
        &alpha * &x.slice(da, db).dot(&y.slice(0, db)) + &beta * &x.slice(0, da).dot(&y.slice(db, da))
    })
}

#[derive(Debug, Clone)]
pub struct CStarDuality {
    pub over_a: ADual,
    pub over_b: ADual,
    pub triality: Triality,
    /// `ε_B ↦ Ψ⁻¹ Φ_B ε_B`, from `X(D*_B)` to `Ξ`.
    pub to_xi: LinMap,
    /// `⟨·,·⟩: X(D*_B) × X(D*_A) → C`.
    pub pairing: ValuedPairing,
}

/// `None` when one of `A`, `B`, `C` is zero.
pub fn cstar_pairing(d: &TrivialDvb) -> Option<CStarDuality> {
    let over_a = adual(d, Side::A)?;
    let over_b = adual(d, Side::B)?;
    let triality = triality_pairing(&xspace(d)).ok()?;
    // Ψ: Ξ → Δ_B, η ↦ ⟨η, ·⟩_V
    let n = over_b.xd.pi().dim;
    let xi_dim = triality.xi.dim();
    let psi_cols = (0..xi_dim)
        .map(|k| {
            let eta = Vector::basis(xi_dim, k);
            let cols: Vec<Vector> = (0..n)
                .map(|m| triality.pairing.eval(&eta, &Vector::basis(n, m)))
                .collect();
            over_b.target.coords_of_hom(&Matrix::from_columns(&cols, d.b.dim))
        })
        .collect::<Option<Vec<_>>>()?;
    let psi = Matrix::from_columns(&psi_cols, over_b.target.dim());
    let to_xi = LinMap::new(
        over_b.xdual.pi().clone(),
        triality.xi.seq.pi().clone(),
        psi.inverse()?.mul(over_b.comparison.matrix()),
    )
    .ok()?;
    let pairing = triality.xi.pairing.pullback(
        to_xi.matrix(),
        over_b.xdual.pi(),
        over_a.comparison.matrix(),
        over_a.xdual.pi(),
    );
    Some(CStarDuality {
        over_a,
        over_b,
        triality,
        to_xi,
        pairing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CStarReport {
    pub dims: (usize, usize, usize),
    /// A side or the core is zero; only the closed-form slice pairing is checked.
    pub short_circuit: bool,
    pub nondegenerate: bool,
    /// Sign in `⟨ε_B, i_A(θ)⟩ = s₁ · j_B(ε_B)⌐θ`, if one sign fits all samples.
    pub kernel_sign: Option<i8>,
    /// Sign in `⟨i_B(κ), ε_A⟩ = s₂ · j_A(ε_A)⌐κ`.
    pub section_sign: Option<i8>,
    /// `(α, β)` of the induced slice pairing, if one fits.
    pub slice_signs: Option<(i8, i8)>,
    pub slice_nondegenerate: bool,
}

impl CStarReport {
    pub fn passed(&self) -> bool {
        self.slice_nondegenerate
            && (self.short_circuit
                || (self.nondegenerate
                    && self.kernel_sign.is_some()
                    && self.section_sign.is_some()
                    && self.slice_signs.is_some()))
    }
}

/// The sign relating `lhs` and `rhs` on every sample, when there is one.
fn common_sign(pairs: &[(Vector, Vector)]) -> Option<i8> {
    [1i8, -1].into_iter().find(|&s| {
        let r = Scalar::from_int(s as i64);
        pairs.iter().all(|(lhs, rhs)| *lhs == rhs.scale(&r))
    })
}

pub fn cstar_duality<R: Rng + ?Sized>(d: &TrivialDvb, rng: &mut R, trials: usize) -> CStarReport {
    let (da, db, dc) = d.dims();
    let Some(cs) = cstar_pairing(d) else {
        let slice = slice_pairing(d, 1, -1);
        return CStarReport {
            dims: d.dims(),
            short_circuit: da == 0 || db == 0 || dc == 0,
            nondegenerate: false,
            kernel_sign: None,
            section_sign: None,
            slice_signs: None,
            slice_nondegenerate: slice.is_nondegenerate(),
        };
    };
    let (xa, xb) = (&cs.over_a.xdual, &cs.over_b.xdual);
    let mut kernel = Vec::new();
    let mut section = Vec::new();
    for _ in 0..trials.max(1) {
        let eb = sample::vector(rng, xb.pi().dim);
        let theta = sample::vector(rng, da * dc);
        kernel.push((
            cs.pairing.eval(&eb, &xa.i().apply(&theta)),
            contract_first(&theta, &xb.j().apply(&eb), dc),
        ));
        let ea = sample::vector(rng, xa.pi().dim);
        let kappa = sample::vector(rng, dc * db);
        section.push((
            cs.pairing.eval(&xb.i().apply(&kappa), &ea),
            contract_second(&kappa, &xa.j().apply(&ea)),
        ));
    }
    let sa = dual_over_a(d).dual;
    let sb = dual_over_b(d).dual;
    let fs = functionals(&sb, xb);
    let gs = functionals(&sa, xa);
    let mut slice_signs = None;
    for (alpha, beta) in [(1i8, -1i8), (-1, 1), (1, 1), (-1, -1)] {
        let p = slice_pairing(d, alpha as i64, beta as i64);
        let Some(tensor) = induced_pairing(&p, &fs, &gs) else {
            continue;
        };
        if ValuedPairing::from_tensor(xb.pi(), xa.pi(), &d.c, tensor).same_values(&cs.pairing) {
            slice_signs = Some((alpha, beta));
            break;
        }
    }
    let slice_nondegenerate = match slice_signs {
        Some((a, b)) => slice_pairing(d, a as i64, b as i64).is_nondegenerate(),
        None => false,
    };
    CStarReport {
        dims: d.dims(),
        short_circuit: false,
        nondegenerate: cs.pairing.is_nondegenerate(),
        kernel_sign: common_sign(&kernel),
        section_sign: common_sign(&section),
        slice_signs,
        slice_nondegenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::rng_from_seed;

    #[test]
    fn scalar_dims() {
        let d = TrivialDvb::with_dims(1, 1, 1);
        let cs = cstar_pairing(&d).unwrap();
        assert_eq!(cs.pairing.left.dim, 2);
        assert_eq!(cs.pairing.right.dim, 2);
        let m = cs.pairing.scalar_matrix().unwrap();
        assert_eq!(m.rank(), 2);
        let rep = cstar_duality(&d, &mut rng_from_seed(1), 5);
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.kernel_sign, Some(-1));
        assert_eq!(rep.section_sign, Some(1));
        // ψ(b) − φ(a)
        assert_eq!(rep.slice_signs, Some((1, -1)));
    }

    #[test]
    fn random_dims() {
        let mut rng = rng_from_seed(12);
        for _ in 0..6 {
            let d = TrivialDvb::with_dims(
                sample::dim(&mut rng, 1, 3),
                sample::dim(&mut rng, 1, 3),
                sample::dim(&mut rng, 1, 3),
            );
            let rep = cstar_duality(&d, &mut rng, 5);
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn zero_core_short_circuits() {
        let d = TrivialDvb::with_dims(2, 1, 0);
        let rep = cstar_duality(&d, &mut rng_from_seed(2), 3);
        assert!(rep.short_circuit && rep.passed());
    }
}
