//! Duals of DVB* sequences with respect to one of their side spaces.
//!
//! For `0 → U⊗V →ⁱ Π →ʲ K → 0` the dual with respect to `U` is
//! `Δ = {ε ∈ Hom(Π, U) | ∃ v* ∈ V*: ε(i(θ)) = θ⌐v* for all θ}`, which fits into
//! `0 → U⊗K* →ᵉ Δ →ᵖ V* → 0` with `e(κ) = κ∘j`, `p(ε) = v*`, and pairs with
//! `Π` by evaluation, `⟨ε, σ⟩ = ε(σ) ∈ U`.
//!
//! The dual with respect to `V` is the same construction applied to the
//! sequence with `i` precomposed by the swap `V⊗U → U⊗V`; its kernel is then
//! written `K*⊗V` so that both slots are contracted on the left.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{
    contract_first, contract_second_sized, dual_map, same_span, swap_map, tensor_map, LinMap, Matrix, Space, Vector,
};
use crate::sample;
use crate::seq::DvbStarSeq;

use super::pairing::ValuedPairing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("the {side:?} side is zero while the sequence is not: the pairing cannot be nondegenerate")]
    DegenerateSide { side: DualSide },
}

/// Which side space the dual is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DualSide {
    First,
    Second,
}

#[derive(Debug, Clone)]
pub struct UDual {
    pub source: DvbStarSeq,
    pub side: DualSide,
    /// `0 → U⊗K* → Δ → V* → 0` (first side) or `0 → K*⊗U → Δ → U* → 0`
    /// relabelled for the second side, see the module docs.
    pub seq: DvbStarSeq,
    /// Ambient coordinates `(ε row-major, v*)` of the basis of `Δ`.
    basis: Vec<Vector>,
    pub pairing: ValuedPairing,
}

/// `s` with `i` replaced by `i∘swap: V⊗U → Π`.
fn swapped(s: &DvbStarSeq) -> DvbStarSeq {
    let i = s.i().compose(&swap_map(&s.v, &s.u));
    DvbStarSeq::new(s.v.clone(), s.u.clone(), s.k.clone(), i, s.j().clone()).expect("swap keeps exactness")
}

pub fn u_dual(s: &DvbStarSeq, side: DualSide) -> Result<UDual, DualError> {
    match side {
        DualSide::First => first_dual(s),
        DualSide::Second => {
            let mut d = first_dual(&swapped(s)).map_err(|_| DualError::DegenerateSide { side })?;
            // kernel V⊗K* of the swapped computation, re-expressed as K*⊗V
            let kst = s.k.dual();
            let e = d.seq.i().compose(&swap_map(&kst, &s.v));
            let p = d.seq.j().clone();
            d.seq = DvbStarSeq::new(kst, s.v.clone(), s.u.dual(), e, p).expect("relabelling keeps exactness");
            d.source = s.clone();
            d.side = side;
            Ok(d)
        }
    }
}

fn first_dual(s: &DvbStarSeq) -> Result<UDual, DualError> {
    let (du, dv, dk) = s.dims();
    let n = s.pi().dim;
    if du == 0 && n > 0 {
        return Err(DualError::DegenerateSide { side: DualSide::First });
    }
    let unknowns = du * n + dv;
    // ε(i(u_k⊗v_l)) − v*_l u_k = 0, componentwise in U
    let mut rows = Vec::with_capacity(du * du * dv);
    for k in 0..du {
        for l in 0..dv {
            let col = s.i().matrix().column(k * dv + l);
            for kk in 0..du {
                let mut row = Vector::zeros(unknowns);
                for m in 0..n {
                    row[kk * n + m] = col[m].clone();
                }
                if kk == k {
                    row[du * n + l] = -crate::exactla::Scalar::one();
                }
                rows.push(row);
            }
        }
    }
    let kernel = Matrix::from_row_vectors(&rows, unknowns).kernel_basis();
    let basis = Matrix::from_row_vectors(&kernel, unknowns).row_space_basis();
    let dim = basis.len();
    debug_assert_eq!(dim, du * dk + dv);

    let delta = Space::new(format!("{}*_{}", s.pi().label, s.u.label), dim);
    let ukst = s.u.tensor(&s.k.dual());
    let basis_matrix = Matrix::from_columns(&basis, unknowns);
    let e_cols: Vec<Vector> = (0..du * dk)
        .map(|idx| {
            // e(κ) = κ∘j for the basis tensor κ = u_k ⊗ g_n*
            let kappa = Vector::basis(du * dk, idx);
            let hom = hom_from_tensor(&kappa, du, dk).mul(s.j().matrix());
            let amb = flatten(&hom).concat(&Vector::zeros(dv));
            basis_matrix.solve(&amb).expect("e(κ) lies in Δ")
        })
        .collect();
    let e = LinMap::new(ukst, delta.clone(), Matrix::from_columns(&e_cols, dim)).expect("e shape");
    let p_cols: Vec<Vector> = basis.iter().map(|b| b.slice(du * n, dv)).collect();
    let p = LinMap::new(delta.clone(), s.v.dual(), Matrix::from_columns(&p_cols, dv)).expect("p shape");
    let seq = DvbStarSeq::new(s.u.clone(), s.k.dual(), s.v.dual(), e, p).expect("U-dual sequence is exact");
    let eps: Vec<Matrix> = basis.iter().map(|b| unflatten(&b.slice(0, du * n), du, n)).collect();
    let pairing = ValuedPairing::from_fn(&delta, s.pi(), &s.u, |x, y| {
        let mut out = Vector::zeros(du);
        for (idx, coef) in x.iter().enumerate() {
            if !coef.is_zero() {
                out = eps[idx].mul_vec(y).axpy(coef, &out);
            }
        }
        out
    });
    Ok(UDual {
        source: s.clone(),
        side: DualSide::First,
        seq,
        basis,
        pairing,
    })
}

/// Row-major flattening of a `rows × cols` matrix, matching `U⊗Π*`.
fn flatten(m: &Matrix) -> Vector {
    (0..m.rows()).flat_map(|i| m.row(i).into_inner()).collect()
}

fn unflatten(v: &Vector, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows((0..rows).map(|i| v.slice(i * cols, cols).into_inner()).collect(), cols)
}

/// `κ ∈ X⊗Y*` as the matrix of a map `Y → X`.
fn hom_from_tensor(kappa: &Vector, dx: usize, dy: usize) -> Matrix {
    unflatten(kappa, dx, dy)
}

impl UDual {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `ε` for the element of `Δ` with the given coordinates.
    pub fn hom(&self, x: &Vector) -> Matrix {
        let n = self.source.pi().dim;
        let rows = self.value_dim();
        let amb = Vector::combination(rows * n + self.ambient_tail(), x, &self.basis);
        unflatten(&amb.slice(0, rows * n), rows, n)
    }

    fn value_dim(&self) -> usize {
        self.pairing.value.dim
    }

    fn ambient_tail(&self) -> usize {
        self.seq.k.dim
    }

    /// Coordinates in `Δ` of a map `Π → U` (or `Π → V`), if it lies in `Δ`.
    pub fn coords_of_hom(&self, hom: &Matrix) -> Option<Vector> {
        let n = self.source.pi().dim;
        let rows = self.value_dim();
        let eps_parts: Vec<Vector> = self.basis.iter().map(|b| b.slice(0, rows * n)).collect();
        Matrix::from_columns(&eps_parts, rows * n).solve(&flatten(hom))
    }

    /// The ε-parts of the basis, i.e. `Δ` as a subspace of `Hom(Π, U)`.
    pub fn hom_basis(&self) -> Vec<Vector> {
        let n = self.source.pi().dim;
        let rows = self.value_dim();
        self.basis.iter().map(|b| b.slice(0, rows * n)).collect()
    }

    /// `p(ε) ⌐ θ` for `θ` in the kernel of the source: contraction of `U⊗V`
    /// against `V*` on the second slot, or against `U*` on the first.
    pub fn contract_quotient(&self, theta: &Vector, q: &Vector) -> Vector {
        match self.side {
            DualSide::First => contract_second_sized(theta, q, self.source.u.dim),
            DualSide::Second => contract_first(theta, q, self.source.v.dim),
        }
    }

    /// `j(σ) ⌐ κ` for `κ` in the kernel of `Δ`: `U⊗K*` contracted on the
    /// second slot, `K*⊗V` on the first.
    pub fn contract_kernel(&self, kappa: &Vector, jsigma: &Vector) -> Vector {
        match self.side {
            DualSide::First => contract_second_sized(kappa, jsigma, self.source.u.dim),
            DualSide::Second => contract_first(kappa, jsigma, self.source.v.dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub kernel_equality: bool,
    pub section_equality: bool,
    pub nondegenerate: bool,
    pub dimension_law: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.kernel_equality && self.section_equality && self.nondegenerate && self.dimension_law
    }
}

/// `⟨ε, i(θ)⟩ = p(ε)⌐θ`, `⟨e(κ), σ⟩ = j(σ)⌐κ`, nondegeneracy, and
/// `dim Δ = dim U·dim K + dim V` (with the roles of `U`, `V` exchanged for
/// the second side).
pub fn check_u_dual<R: Rng + ?Sized>(d: &UDual, rng: &mut R, trials: usize) -> DualityReport {
    let s = &d.source;
    let (du, dv, dk) = s.dims();
    let expected = match d.side {
        DualSide::First => du * dk + dv,
        DualSide::Second => dv * dk + du,
    };
    let mut rep = DualityReport {
        kernel_equality: true,
        section_equality: true,
        nondegenerate: d.pairing.is_nondegenerate(),
        dimension_law: d.dim() == expected,
    };
    for _ in 0..trials {
        let eps = sample::vector(rng, d.dim());
        let theta = sample::vector(rng, du * dv);
        let lhs = d.pairing.eval(&eps, &s.i().apply(&theta));
        rep.kernel_equality &= lhs == d.contract_quotient(&theta, &d.seq.j().apply(&eps));
        let kappa = sample::vector(rng, d.seq.i().domain().dim);
        let sigma = sample::vector(rng, s.pi().dim);
        let lhs = d.pairing.eval(&d.seq.i().apply(&kappa), &sigma);
        rep.section_equality &= lhs == d.contract_kernel(&kappa, &s.j().apply(&sigma));
    }
    rep
}

/// `Δ` computed as the preimage of `span{Id_U ⊗ v*_l}` under
/// `Id_U ⊗ i*: U⊗Π* → U⊗U*⊗V*`, returned as a basis of `Hom(Π, U)`.
pub fn u_dual_abstract(s: &DvbStarSeq) -> Result<Vec<Vector>, DualError> {
    let (du, dv, _) = s.dims();
    if du == 0 {
        return Err(DualError::DegenerateSide { side: DualSide::First });
    }
    let f = tensor_map(&LinMap::identity(&s.u), &dual_map(s.i()));
    let target = f.codomain().dim;
    let lines: Vec<Vector> = (0..dv)
        .map(|l| {
            let mut v = Vector::zeros(target);
            for k in 0..du {
                v[(k * du + k) * dv + l] = crate::exactla::Scalar::one();
            }
            v
        })
        .collect();
    let l_matrix = Matrix::from_columns(&lines, target);
    // (x, y) with F x − L y = 0
    let stacked = f.matrix().hstack(&l_matrix.scale(&-crate::exactla::Scalar::one()));
    let amb = f.domain().dim;
    let pre: Vec<Vector> = stacked.kernel_basis().iter().map(|v| v.slice(0, amb)).collect();
    Ok(Matrix::from_row_vectors(&pre, amb).row_space_basis())
}

/// Whether the direct and the abstract constructions give the same subspace.
pub fn compare_abstract(d: &UDual) -> bool {
    assert_eq!(d.side, DualSide::First);
    match u_dual_abstract(&d.source) {
        Ok(abs) => same_span(&abs, &d.hom_basis(), d.source.u.dim * d.source.pi().dim),
        Err(_) => false,
    }
}

/// Exchange the sides and negate: `iᵗ(v⊗u) = −i(u⊗v)`.
pub fn transpose(s: &DvbStarSeq) -> DvbStarSeq {
    let it = s
        .i()
        .compose(&swap_map(&s.v, &s.u))
        .scale(&-crate::exactla::Scalar::one());
    DvbStarSeq::new(s.v.clone(), s.u.clone(), s.k.clone(), it, s.j().clone()).expect("transpose keeps exactness")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineDualReport {
    pub iso: bool,
    pub identity_in_bases: bool,
    pub transports_pairing: bool,
}

impl LineDualReport {
    pub fn passed(&self) -> bool {
        self.iso && self.transports_pairing
    }
}

/// For `U` a line, `Δ ⊂ Hom(Π, U) = Π*`; certifies that the inclusion is an
/// isomorphism onto `Π*` carrying the `U`-pairing to evaluation.
pub fn line_dual_compare<R: Rng + ?Sized>(d: &UDual, rng: &mut R, trials: usize) -> LineDualReport {
    assert_eq!(d.side, DualSide::First);
    assert_eq!(d.source.u.dim, 1, "line dual needs a one-dimensional U");
    let n = d.source.pi().dim;
    let iso = Matrix::from_columns(&d.hom_basis(), n);
    let transports_pairing = (0..trials).all(|_| {
        let x = sample::vector(rng, d.dim());
        let sigma = sample::vector(rng, n);
        d.pairing.eval(&x, &sigma)[0] == iso.mul_vec(&x).dot(&sigma)
    });
    LineDualReport {
        iso: iso.is_square() && iso.rank() == n,
        identity_in_bases: iso == Matrix::identity(n),
        transports_pairing,
    }
}
