//! Fiber models of the tangent and cotangent doubles of a vector bundle `E`
//! over a base with tangent space `T`, the jet and Atiyah fibers, and the
//! duality square relating `DE`, `JE`, `DE*` and `JE*`.
//!
//! Everything is modeled on a single slice: `TE` at a point is the trivial
//! double `(T, E; E)`.

use rand::Rng;
use serde::Serialize;

use crate::dualization::adual::{adual_compare, ADualReport};
use crate::dualization::cstar::cstar_pairing;
use crate::dualization::pairing::ValuedPairing;
use crate::dualization::side_dual::{dual_over_a, dual_over_b};
use crate::dualization::udual::transpose;
use crate::dualization::xspace::{xspace, DoubleLinearFunctional};
use crate::dvb::{check_interchange_with, combine_a, DoubleStructure, DvbElement, Side, TrivialDvb};
use crate::equivalence::{combining, doubling_on_morphism};
use crate::exactla::{swap_map, LinMap, Matrix, Scalar, Space, Vector};
use crate::sample;
use crate::seq::{check_ladder, ladder_map, DvbStarSeq, LadderReport, SeqMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeomContext {
    pub t: Space,
    pub e: Space,
}

impl GeomContext {
    pub fn new(dt: usize, de: usize) -> Self {
        GeomContext {
            t: Space::new("T", dt),
            e: Space::new("E", de),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.t.dim, self.e.dim)
    }
}

/// `TE = (T, E; E)`.
pub fn tangent_double(ctx: &GeomContext) -> TrivialDvb {
    TrivialDvb::new(ctx.t.clone(), ctx.e.clone(), ctx.e.clone())
}

/// `TE* = (T, E*; E*)`, the dual of `TE` over `T`.
pub fn tangent_double_dual_side(ctx: &GeomContext) -> TrivialDvb {
    TrivialDvb::new(ctx.t.clone(), ctx.e.dual(), ctx.e.dual())
}

/// `T*E = (E, E*; T*)`, the dual of `TE` over `E` with sides listed `E` first.
pub fn cotangent_double(ctx: &GeomContext) -> TrivialDvb {
    dual_over_b(&tangent_double(ctx)).dual.flip()
}

/// `T*E* = (E*, E; T*)`.
pub fn cotangent_double_of_dual(ctx: &GeomContext) -> TrivialDvb {
    dual_over_b(&tangent_double_dual_side(ctx)).dual.flip()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CotangentReport {
    pub dims: (usize, usize),
    pub shape: bool,
    pub nondegenerate: bool,
    /// `⟨r_E(𝔢), e′⟩ = ⟨𝔢, 0̃_e +_T ē′⟩`.
    pub r_e: bool,
    /// `⟨w̄, T(0)(x) +_E ē⟩ = ⟨w, x⟩`.
    pub core_embedding: bool,
    pub interchange: bool,
}

impl CotangentReport {
    pub fn passed(&self) -> bool {
        self.shape && self.nondegenerate && self.r_e && self.core_embedding && self.interchange
    }
}

pub fn check_cotangent<R: Rng>(ctx: &GeomContext, rng: &mut R, trials: usize) -> CotangentReport {
    let te = tangent_double(ctx);
    let sd = dual_over_b(&te);
    let tse = cotangent_double(ctx);
    let (dt, de) = ctx.dims();
    let mut r_e = true;
    let mut core_embedding = true;
    for _ in 0..trials {
        // 𝔢 = (e, φ, w) in T*E is (φ, e, w) in the dual over E
        let frak = tse.random_element(rng);
        let e2 = sample::vector(rng, de);
        let probe = te
            .add_a(&te.zero_over_b(&frak.a), &te.core_embed(&e2))
            .expect("both over x = 0");
        r_e &= sd.pair(&frak.flipped(), &probe) == Some(tse.proj_b(&frak).dot(&e2));
        let w = sample::vector(rng, dt);
        let x = sample::vector(rng, dt);
        let e = sample::vector(rng, de);
        let probe = te
            .add_b(&te.zero_over_a(&x), &te.core_embed(&e))
            .expect("both over e = 0");
        core_embedding &= sd.pair(&tse.core_embed(&w).flipped(), &probe) == Some(w.dot(&x));
    }
    let mut model = tse.clone();
    CotangentReport {
        dims: ctx.dims(),
        shape: tse.dims() == (de, de, dt) && cotangent_double_of_dual(ctx).dims() == (de, de, dt),
        nondegenerate: sd.pairing.is_nondegenerate(),
        r_e,
        core_embedding,
        interchange: check_interchange_with(&mut model, trials.min(20), rng).all_passed(),
    }
}

/// A fiber computed as `X(·)` next to a hand-written direct model, with the
/// comparison map from the direct model.
#[derive(Debug, Clone)]
pub struct FiberModel {
    pub ctx: GeomContext,
    /// The `X(·)` sequence in its printed tensor order.
    pub xseq: DvbStarSeq,
    pub direct: DvbStarSeq,
    /// direct model → `X(·)`.
    pub iso: LinMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub dims: (usize, usize),
    pub dim: usize,
    pub expected_dim: usize,
    pub iso: bool,
    pub ladder: LadderReport,
    /// The direct model acts on the slice by the closed form of its image.
    pub evaluation: bool,
    /// Linear structure of the direct model versus the slice operations.
    pub linear_structure: bool,
}

impl FiberReport {
    pub fn passed(&self) -> bool {
        self.dim == self.expected_dim && self.iso && self.ladder.commutes() && self.evaluation && self.linear_structure
    }
}

fn unflatten(v: &Vector, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows((0..rows).map(|i| v.slice(i * cols, cols).into_inner()).collect(), cols)
}

/// Coordinates in `X(d)` of a double-linear `σ`, read off basis points.
fn probe_functional(d: &TrivialDvb, sigma: impl Fn(&DvbElement) -> Scalar) -> Vector {
    let (da, db, dc) = d.dims();
    let mut out = Vec::with_capacity(da * db + dc);
    for i in 0..da {
        for k in 0..db {
            out.push(sigma(&DvbElement::new(
                Vector::basis(da, i),
                Vector::basis(db, k),
                Vector::zeros(dc),
            )));
        }
    }
    for k in 0..dc {
        out.push(sigma(&DvbElement::new(
            Vector::zeros(da),
            Vector::zeros(db),
            Vector::basis(dc, k),
        )));
    }
    Vector::new(out)
}

/// `JE`: direct model `(e, φ)` with `φ: T → E` stored row-major, standing for
/// the horizontal lift `x ↦ (x, e, φ(x))`.
pub struct JetDirect {
    pub te: TrivialDvb,
}

impl JetDirect {
    pub fn split(&self, v: &Vector) -> (Vector, Matrix) {
        let (dt, de) = (self.te.a.dim, self.te.b.dim);
        (v.slice(0, de), unflatten(&v.slice(de, de * dt), de, dt))
    }

    /// `μ(x) = (x, e, φ(x)) ∈ TE`.
    pub fn lift(&self, v: &Vector, x: &Vector) -> DvbElement {
        let (e, phi) = self.split(v);
        DvbElement::new(x.clone(), e, phi.mul_vec(x))
    }
}

pub fn jet_fiber(ctx: &GeomContext) -> FiberModel {
    let (dt, de) = ctx.dims();
    let te = tangent_double(ctx);
    let pairing = dual_over_a(&te);
    let tes = pairing.dual.clone();
    let xseq = xspace(&tes);
    let je = Space::new("JE", de + de * dt);
    let kernel = ctx.t.dual().tensor(&ctx.e);
    // κ ∈ T*⊗E ↦ (0, φ) with φ[k][i] = κ[i·dE + k]
    let mut i = Matrix::zeros(je.dim, kernel.dim);
    for a in 0..dt {
        for k in 0..de {
            i.set(de + k * dt + a, a * de + k, Scalar::one());
        }
    }
    let j = Matrix::identity(de).hstack(&Matrix::zeros(de, de * dt));
    let direct = DvbStarSeq::new(
        ctx.t.dual(),
        ctx.e.clone(),
        ctx.e.clone(),
        LinMap::new(kernel, je.clone(), i).expect("i shape"),
        LinMap::new(je.clone(), ctx.e.clone(), j).expect("j shape"),
    )
    .expect("direct jet sequence is exact");
    let model = JetDirect { te };
    // σ(ξ) = ⟨ξ, μ(x)⟩ for ξ ∈ TE* over x
    let cols: Vec<Vector> = (0..je.dim)
        .map(|k| {
            let v = Vector::basis(je.dim, k);
            probe_functional(&tes, |xi| {
                pairing.pair(xi, &model.lift(&v, &xi.a)).expect("same base point")
            })
        })
        .collect();
    let iso = LinMap::new(je, xseq.pi().clone(), Matrix::from_columns(&cols, xseq.pi().dim)).expect("iso shape");
    FiberModel {
        ctx: ctx.clone(),
        xseq,
        direct,
        iso,
    }
}

/// `DE`: direct model `(x, ψ)` with `ψ ∈ End(E*)` stored row-major, standing
/// for `𝔡(φ) = (x, φ, ψ(φ)) ∈ TE*`.
pub fn atiyah_fiber(ctx: &GeomContext) -> FiberModel {
    let (dt, de) = ctx.dims();
    let tes = tangent_double_dual_side(ctx);
    let sd = dual_over_b(&tes);
    let tses = cotangent_double_of_dual(ctx);
    let raw = xspace(&tses);
    // kernel E⊗E* reordered to E*⊗E
    let kernel = ctx.e.dual().tensor(&ctx.e);
    let i = raw.i().compose(&swap_map(&ctx.e.dual(), &ctx.e));
    let xseq = DvbStarSeq::new(ctx.e.dual(), ctx.e.clone(), ctx.t.clone(), i, raw.j().clone())
        .expect("reordering keeps exactness");
    let de_space = Space::new("DE", dt + de * de);
    let mut i = Matrix::zeros(de_space.dim, kernel.dim);
    for k in 0..de * de {
        i.set(dt + k, k, Scalar::one());
    }
    let j = Matrix::identity(dt).hstack(&Matrix::zeros(dt, de * de));
    let direct = DvbStarSeq::new(
        ctx.e.dual(),
        ctx.e.clone(),
        ctx.t.clone(),
        LinMap::new(kernel, de_space.clone(), i).expect("i shape"),
        LinMap::new(de_space.clone(), ctx.t.clone(), j).expect("j shape"),
    )
    .expect("direct Atiyah sequence is exact");
    let cols: Vec<Vector> = (0..de_space.dim)
        .map(|k| {
            let v = Vector::basis(de_space.dim, k);
            let x = v.slice(0, dt);
            let psi = unflatten(&v.slice(dt, de * de), de, de);
            // 𝔢 = (φ, e, w) ∈ T*E* is (e, φ, w) in the dual of TE* over E*
            probe_functional(&tses, |frak| {
                let d = DvbElement::new(x.clone(), frak.a.clone(), psi.mul_vec(&frak.a));
                sd.pair(&frak.flipped(), &d).expect("same base point")
            })
        })
        .collect();
    let iso = LinMap::new(de_space, xseq.pi().clone(), Matrix::from_columns(&cols, xseq.pi().dim)).expect("iso shape");
    FiberModel {
        ctx: ctx.clone(),
        xseq,
        direct,
        iso,
    }
}

fn ladder_report(f: &FiberModel) -> LadderReport {
    let left =
        LinMap::identity(f.direct.i().domain()).with_spaces(f.direct.i().domain().clone(), f.xseq.i().domain().clone());
    let right = LinMap::identity(f.direct.j().codomain())
        .with_spaces(f.direct.j().codomain().clone(), f.xseq.j().codomain().clone());
    check_ladder(&f.direct.seq, &f.xseq.seq, &left, &f.iso, &right)
}

pub fn check_jet<R: Rng + ?Sized>(ctx: &GeomContext, rng: &mut R, trials: usize) -> FiberReport {
    let f = jet_fiber(ctx);
    let (dt, de) = ctx.dims();
    let tes = tangent_double_dual_side(ctx);
    let model = JetDirect {
        te: tangent_double(ctx),
    };
    let mut evaluation = true;
    let mut linear_structure = true;
    for _ in 0..trials {
        let v = sample::vector(rng, f.direct.pi().dim);
        let sigma = DoubleLinearFunctional::from_coords(&tes, &f.iso.apply(&v));
        let xi = tes.random_element(rng);
        // ⟨ξ, μ(x)⟩ = ψ̇(e) + ψ(φ(x))
        let (e, phi) = model.split(&v);
        evaluation &= sigma.eval(&xi) == xi.c.dot(&e) + xi.b.dot(&phi.mul_vec(&xi.a));
        // (rμ₁ + μ₂)(x) = r·μ₁(x) +_T μ₂(x)
        let w = sample::vector(rng, f.direct.pi().dim);
        let r = sample::scalar(rng);
        let x = sample::vector(rng, dt);
        let lhs = model.lift(&v.axpy(&r, &w), &x);
        let rhs = combine_a(&r, &model.lift(&v, &x), &model.lift(&w, &x)).expect("same x");
        linear_structure &= lhs == rhs;
    }
    FiberReport {
        dims: ctx.dims(),
        dim: f.xseq.pi().dim,
        expected_dim: dt * de + de,
        iso: f.iso.is_isomorphism(),
        ladder: ladder_report(&f),
        evaluation,
        linear_structure,
    }
}

pub fn check_atiyah<R: Rng + ?Sized>(ctx: &GeomContext, rng: &mut R, trials: usize) -> FiberReport {
    let f = atiyah_fiber(ctx);
    let (dt, de) = ctx.dims();
    let tses = cotangent_double_of_dual(ctx);
    let mut evaluation = true;
    let mut linear_structure = true;
    for _ in 0..trials {
        let v = sample::vector(rng, f.direct.pi().dim);
        let sigma = DoubleLinearFunctional::from_coords(&tses, &f.iso.apply(&v));
        let frak = tses.random_element(rng);
        let (x, psi) = (v.slice(0, dt), unflatten(&v.slice(dt, de * de), de, de));
        evaluation &= sigma.eval(&frak) == psi.mul_vec(&frak.a).dot(&frak.b) + frak.c.dot(&x);
        // the anchor is the projection to T
        linear_structure &= f.xseq.j().apply(&f.iso.apply(&v)) == x;
    }
    FiberReport {
        dims: ctx.dims(),
        dim: f.xseq.pi().dim,
        expected_dim: de * de + dt,
        iso: f.iso.is_isomorphism(),
        ladder: ladder_report(&f),
        evaluation,
        linear_structure,
    }
}

/// `DE* ≅ DE` through the transposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranspositionEdge {
    pub iso: bool,
    /// `Φ(θ, χ) = (−swap θ, χ)`.
    pub expected_form: bool,
    /// The DVBs of `T*E` and `T*E*` are isomorphic through the doubling functor.
    pub dvb_iso: bool,
}

impl TranspositionEdge {
    pub fn passed(&self) -> bool {
        self.iso && self.expected_form && self.dvb_iso
    }
}

/// `X(T*E) → X(T*E*)` read off the ladder from `X(T*E)` to the transpose of
/// `X(T*E*)` with identity ends.
pub fn transposition_map(ctx: &GeomContext) -> LinMap {
    let de_star = xspace(&cotangent_double(ctx));
    let de = xspace(&cotangent_double_of_dual(ctx));
    let t = transpose(&de);
    let left = LinMap::identity(de_star.i().domain()).with_spaces(de_star.i().domain().clone(), t.i().domain().clone());
    let right =
        LinMap::identity(de_star.j().codomain()).with_spaces(de_star.j().codomain().clone(), t.j().codomain().clone());
    ladder_map(&de_star.seq, &t.seq, &left, &right)
}

pub fn transposition_edge(ctx: &GeomContext) -> TranspositionEdge {
    let (dt, de) = ctx.dims();
    let phi = transposition_map(ctx);
    let expected = swap_map(&ctx.e.dual(), &ctx.e)
        .matrix()
        .scale(&-Scalar::one())
        .hstack(&Matrix::zeros(de * de, dt))
        .vstack(&Matrix::zeros(dt, de * de).hstack(&Matrix::identity(dt)));
    // Dualize to the combined sequences: X(flip T*E*) ≅ X(T*E*) by the swap
    // on the kernel, and 𝒞 is dual to X.
    let tse = cotangent_double(ctx);
    let tses_flipped = cotangent_double_of_dual(ctx).flip();
    let to_flip = swap_map(&ctx.e, &ctx.e.dual())
        .matrix()
        .hstack(&Matrix::zeros(de * de, dt))
        .vstack(&Matrix::zeros(dt, de * de).hstack(&Matrix::identity(dt)));
    let phi_flip = to_flip.mul(phi.matrix());
    let source = combining(&tse).seq;
    let target = combining(&tses_flipped).seq;
    let dvb_iso = match phi_flip.inverse() {
        Some(inv) => {
            let varpi = LinMap::new(source.omega().clone(), target.omega().clone(), inv.transpose()).expect("ϖ shape");
            let m = SeqMorphism {
                source: source.clone(),
                target: target.clone(),
                varpi,
                fa: LinMap::identity(&tse.a),
                fb: LinMap::scalar(&tse.b, &-Scalar::one()),
                fc: LinMap::identity(&tse.c),
            };
            m.check().commutes() && doubling_on_morphism(&m).canonical().is_isomorphism()
        }
        None => false,
    };
    TranspositionEdge {
        iso: phi.is_isomorphism(),
        expected_form: phi.matrix() == &expected,
        dvb_iso,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub dims: (usize, usize),
    /// `DE* ⇔ DE`.
    pub transposition: TranspositionEdge,
    /// `JE* ⇔ JE` over `T*`.
    pub tstar_duality: ADualReport,
    /// `JE ⇔ DE` over `E`.
    pub e_duality: ADualReport,
    /// `JE* ⇔ DE*` over `E*`.
    pub estar_duality: ADualReport,
    /// The `E`-valued pairing from triality on `JE*` equals `s` times the
    /// `E`-duality composed with the transposition; `None` when no sign fits
    /// or when `T` or `E` is zero.
    pub consistency_sign: Option<i8>,
    pub consistency_vacuous: bool,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.transposition.passed()
            && self.tstar_duality.passed()
            && self.e_duality.passed()
            && self.estar_duality.passed()
            && (self.consistency_vacuous || self.consistency_sign.is_some())
    }
}

/// The `E`-duality `X(flip TE*) × X(T*E*) → E` pulled back along the
/// transposition, against the `E`-valued pairing `X(flip TE*) × X(T*E) → E`
/// produced by triality on `X(flip TE)`.
fn consistency(ctx: &GeomContext) -> Option<i8> {
    let cs = cstar_pairing(&tangent_double(ctx).flip())?;
    let e_dual = crate::dualization::adual::adual(&tangent_double_dual_side(ctx).flip(), Side::A)?;
    let phi = transposition_map(ctx);
    let left = cs.pairing.left.clone();
    let right = cs.pairing.right.clone();
    let pulled: ValuedPairing = e_dual
        .pairing
        .pullback(&Matrix::identity(left.dim), &left, phi.matrix(), &right);
    [1i8, -1].into_iter().find(|&s| {
        let scaled = ValuedPairing::from_fn(&left, &right, &pulled.value, |x, y| {
            pulled.eval(x, y).scale(&Scalar::from_int(s as i64))
        });
        scaled.same_values(&cs.pairing)
    })
}

pub fn square_report<R: Rng + ?Sized>(ctx: &GeomContext, rng: &mut R, trials: usize) -> SquareReport {
    let (dt, de) = ctx.dims();
    SquareReport {
        dims: ctx.dims(),
        transposition: transposition_edge(ctx),
        tstar_duality: adual_compare(&tangent_double(ctx), Side::A, rng, trials),
        e_duality: adual_compare(&tangent_double_dual_side(ctx).flip(), Side::A, rng, trials),
        estar_duality: adual_compare(&tangent_double(ctx).flip(), Side::A, rng, trials),
        consistency_sign: consistency(ctx),
        consistency_vacuous: dt == 0 || de == 0,
    }
}
