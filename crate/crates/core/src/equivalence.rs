//! The doubling functor (DVB sequence → DVB), the combining functor
//! (DVB → DVB sequence), and the natural isomorphisms `t` and `π` that make
//! them an equivalence of categories.

use rand::Rng;
use serde::Serialize;

use crate::dualization::xspace::{closed_form_family, default_samples, double_linear_ansatz};
use crate::dvb::{DoubleStructure, DvbElement, DvbError, DvbMorphism, Side, TrivialDvb};
use crate::exactla::{coordinates_in, tensor_map, tensor_vec, LinMap, Matrix, Scalar, Space, Vector};
use crate::sample::{self, rng_from_seed};
use crate::seq::{check_ladder, DvbSeq, LadderReport, SeqMorphism};

/// A point `(ω, a, b)` of the doubled slice; membership means `p(ω) = a⊗b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DoubledElement {
    pub omega: Vector,
    pub a: Vector,
    pub b: Vector,
}

impl DoubledElement {
    pub fn new(omega: Vector, a: Vector, b: Vector) -> Self {
        DoubledElement { omega, a, b }
    }
}

/// `𝒟(Ω) = {(ω, a, b) | p(ω) = a⊗b}` with the two bundle structures
/// `r·(ω₁,a,b₁) +_A (ω₂,a,b₂) = (rω₁+ω₂, a, rb₁+b₂)` and its mirror over `B`.
#[derive(Debug, Clone)]
pub struct DoubledDvb {
    pub source: DvbSeq,
    section: LinMap,
    retraction: LinMap,
}

pub fn doubling(s: &DvbSeq) -> DoubledDvb {
    DoubledDvb {
        source: s.clone(),
        section: s.seq.section(),
        retraction: s.seq.retraction(),
    }
}

impl DoubledDvb {
    pub fn is_member(&self, d: &DoubledElement) -> bool {
        d.omega.len() == self.source.omega().dim
            && d.a.len() == self.source.a.dim
            && d.b.len() == self.source.b.dim
            && self.source.p().apply(&d.omega) == tensor_vec(&d.a, &d.b)
    }

    /// `c ↦ (e(c), 0, 0)`.
    pub fn core_embed(&self, c: &Vector) -> DoubledElement {
        DoubledElement::new(
            self.source.e().apply(c),
            Vector::zeros(self.source.a.dim),
            Vector::zeros(self.source.b.dim),
        )
    }

    /// The trivial model `(A, B; C)` this bundle is isomorphic to.
    pub fn trivial(&self) -> TrivialDvb {
        TrivialDvb::new(self.source.a.clone(), self.source.b.clone(), self.source.c.clone())
    }

    /// `(ω, a, b) ↦ (a, b, l(ω − s(a⊗b)))` for the deterministic splitting.
    pub fn to_trivial(&self, d: &DoubledElement) -> DvbElement {
        let shifted = d.omega.sub(&self.section.apply(&tensor_vec(&d.a, &d.b)));
        DvbElement::new(d.a.clone(), d.b.clone(), self.retraction.apply(&shifted))
    }

    /// `(a, b, c) ↦ (s(a⊗b) + e(c), a, b)`.
    pub fn from_trivial(&self, d: &DvbElement) -> DoubledElement {
        let omega = self
            .section
            .apply(&tensor_vec(&d.a, &d.b))
            .add(&self.source.e().apply(&d.c));
        DoubledElement::new(omega, d.a.clone(), d.b.clone())
    }

    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> DoubledElement {
        let t = self.trivial();
        self.from_trivial(&t.random_element(rng))
    }

    fn mismatch(side: Side, l: &Vector, r: &Vector) -> DvbError {
        DvbError::FiberMismatch {
            side,
            left: l.clone(),
            right: r.clone(),
        }
    }
}

impl DoubleStructure for DoubledDvb {
    type Elem = DoubledElement;

    fn side_dims(&self) -> (usize, usize) {
        (self.source.a.dim, self.source.b.dim)
    }

    fn proj_a(&self, d: &DoubledElement) -> Vector {
        d.a.clone()
    }

    fn proj_b(&self, d: &DoubledElement) -> Vector {
        d.b.clone()
    }

    fn combine_a(&self, r: &Scalar, d1: &DoubledElement, d2: &DoubledElement) -> Result<DoubledElement, DvbError> {
        if d1.a != d2.a {
            return Err(Self::mismatch(Side::A, &d1.a, &d2.a));
        }
        Ok(DoubledElement::new(
            d1.omega.axpy(r, &d2.omega),
            d1.a.clone(),
            d1.b.axpy(r, &d2.b),
        ))
    }

    fn combine_b(&self, r: &Scalar, d1: &DoubledElement, d2: &DoubledElement) -> Result<DoubledElement, DvbError> {
        if d1.b != d2.b {
            return Err(Self::mismatch(Side::B, &d1.b, &d2.b));
        }
        Ok(DoubledElement::new(
            d1.omega.axpy(r, &d2.omega),
            d1.a.axpy(r, &d2.a),
            d1.b.clone(),
        ))
    }

    fn zero_over_a(&self, a: &Vector) -> DoubledElement {
        DoubledElement::new(
            Vector::zeros(self.source.omega().dim),
            a.clone(),
            Vector::zeros(self.source.b.dim),
        )
    }

    fn zero_over_b(&self, b: &Vector) -> DoubledElement {
        DoubledElement::new(
            Vector::zeros(self.source.omega().dim),
            Vector::zeros(self.source.a.dim),
            b.clone(),
        )
    }

    fn sample_over(&mut self, rng: &mut dyn rand::RngCore, a: &Vector, b: &Vector) -> DoubledElement {
        let c = sample::vector(rng, self.source.c.dim);
        self.from_trivial(&DvbElement::new(a.clone(), b.clone(), c))
    }
}

/// Round trip and operation transport between `𝒟(s)` and its trivial model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivializationReport {
    pub round_trips: bool,
    pub members: bool,
    pub transports_a: bool,
    pub transports_b: bool,
}

impl TrivializationReport {
    pub fn passed(&self) -> bool {
        self.round_trips && self.members && self.transports_a && self.transports_b
    }
}

pub fn check_trivialization<R: Rng + ?Sized>(dd: &DoubledDvb, rng: &mut R, trials: usize) -> TrivializationReport {
    let t = dd.trivial();
    let mut rep = TrivializationReport {
        round_trips: true,
        members: true,
        transports_a: true,
        transports_b: true,
    };
    for _ in 0..trials {
        let x = dd.random_member(rng);
        rep.members &= dd.is_member(&x);
        rep.round_trips &= dd.from_trivial(&dd.to_trivial(&x)) == x;
        let y = t.random_element(rng);
        rep.round_trips &= dd.to_trivial(&dd.from_trivial(&y)) == y;

        let r = sample::scalar(rng);
        let c1 = sample::vector(rng, t.c.dim);
        let c2 = sample::vector(rng, t.c.dim);
        let b2 = sample::vector(rng, t.b.dim);
        let y_a = DvbElement::new(y.a.clone(), b2, c1);
        let lhs = dd.combine_a(&r, &dd.from_trivial(&y), &dd.from_trivial(&y_a)).ok();
        let rhs = t.combine_a(&r, &y, &y_a).ok().map(|z| dd.from_trivial(&z));
        rep.transports_a &= lhs.is_some() && lhs == rhs;

        let a2 = sample::vector(rng, t.a.dim);
        let y_b = DvbElement::new(a2, y.b.clone(), c2);
        let lhs = dd.combine_b(&r, &dd.from_trivial(&y), &dd.from_trivial(&y_b)).ok();
        let rhs = t.combine_b(&r, &y, &y_b).ok().map(|z| dd.from_trivial(&z));
        rep.transports_b &= lhs.is_some() && lhs == rhs;
    }
    rep
}

/// `𝒞(D)`: the sequence `0 → C → A⊗B ⊕ C → A⊗B → 0` and the class map
/// `[(a, b, c)] = a⊗b ⊕ c`.
#[derive(Debug, Clone)]
pub struct Combined {
    pub dvb: TrivialDvb,
    pub seq: DvbSeq,
}

pub fn combining(d: &TrivialDvb) -> Combined {
    let ab = d.a.tensor(&d.b);
    let n = ab.dim;
    let dc = d.c.dim;
    let omega = Space::new("Ω", n + dc);
    let e = Matrix::zeros(n, dc).vstack(&Matrix::identity(dc));
    let p = Matrix::identity(n).hstack(&Matrix::zeros(n, dc));
    let seq = DvbSeq::new(
        d.a.clone(),
        d.b.clone(),
        d.c.clone(),
        LinMap::new(d.c.clone(), omega.clone(), e).expect("e shape"),
        LinMap::new(omega, ab, p).expect("p shape"),
    )
    .expect("combined sequence is exact");
    Combined { dvb: d.clone(), seq }
}

impl Combined {
    pub fn class_of(&self, d: &DvbElement) -> Vector {
        tensor_vec(&d.a, &d.b).concat(&d.c)
    }
}

/// `𝒞(D)` realized independently as `X(D)*`, where `X(D)` is computed by the
/// ansatz solver from the linearity axioms. Classes are evaluation
/// functionals `[d] = (σ_k(d))_k` in the solver's basis `σ_k`.
#[derive(Debug, Clone)]
pub struct OracleCombined {
    pub dvb: TrivialDvb,
    pub seq: DvbSeq,
    /// Closed-form coordinates `(θ, χ)` of each solver basis function.
    basis: Vec<Vector>,
}

pub fn combining_oracle(d: &TrivialDvb) -> OracleCombined {
    let (da, db, dc) = d.dims();
    let mut rng = rng_from_seed(0x0c0b_1e00 ^ ((da as u64) << 16 | (db as u64) << 8 | dc as u64));
    let ans = double_linear_ansatz(d, &mut rng, default_samples(d));
    let solutions = ans.solution_basis();
    let family = closed_form_family(d, &ans);
    // Each solver function is read back as (θ, χ) to evaluate it quickly; the
    // decomposition itself is a check that it is double-linear.
    let basis: Vec<Vector> = solutions
        .iter()
        .map(|sol| coordinates_in(&family, sol).expect("solver function is double-linear"))
        .collect();
    let n = basis.len();
    let omega = Space::new("X*", n);
    let ab = d.a.tensor(&d.b);
    let oracle = OracleCombined {
        dvb: d.clone(),
        seq: DvbSeq::split(&d.a, &d.b, &d.c),
        basis,
    };
    let e_cols: Vec<Vector> = (0..dc)
        .map(|k| oracle.class_of(&d.core_embed(&Vector::basis(dc, k))))
        .collect();
    // p is the transpose of i: A*⊗B* → X(D) written in the solver basis.
    let basis_matrix = Matrix::from_columns(&oracle.basis, da * db + dc);
    let p_rows: Vec<Vector> = (0..da * db)
        .map(|ij| {
            let theta = Vector::basis(da * db + dc, ij);
            basis_matrix.solve(&theta).expect("i(θ) lies in X(D)")
        })
        .collect();
    let e = LinMap::new(d.c.clone(), omega.clone(), Matrix::from_columns(&e_cols, n)).expect("e shape");
    let p = LinMap::new(omega, ab, Matrix::from_row_vectors(&p_rows, n)).expect("p shape");
    let seq = DvbSeq::new(d.a.clone(), d.b.clone(), d.c.clone(), e, p).expect("oracle sequence is exact");
    OracleCombined { seq, ..oracle }
}

impl OracleCombined {
    pub fn class_of(&self, d: &DvbElement) -> Vector {
        let point = tensor_vec(&d.a, &d.b).concat(&d.c);
        self.basis.iter().map(|sigma| sigma.dot(&point)).collect()
    }
}

/// Comparison between the two realizations of `𝒞(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub dims: (usize, usize, usize),
    pub omega_dims: (usize, usize),
    pub iso: bool,
    pub ladder: LadderReport,
    pub classes_match: bool,
}

impl OracleComparison {
    pub fn passed(&self) -> bool {
        self.omega_dims.0 == self.omega_dims.1 && self.iso && self.ladder.commutes() && self.classes_match
    }
}

/// Builds `Ψ: A⊗B ⊕ C → X(D)*` from the oracle classes of basis elements
/// and checks that it is an isomorphism of sequences carrying classes to
/// classes.
pub fn compare_with_oracle<R: Rng + ?Sized>(d: &TrivialDvb, rng: &mut R, trials: usize) -> OracleComparison {
    let comb = combining(d);
    let oracle = combining_oracle(d);
    let (da, db, dc) = d.dims();
    let mut cols = Vec::with_capacity(da * db + dc);
    for i in 0..da {
        for j in 0..db {
            cols.push(oracle.class_of(&DvbElement::new(
                Vector::basis(da, i),
                Vector::basis(db, j),
                Vector::zeros(dc),
            )));
        }
    }
    for k in 0..dc {
        cols.push(oracle.class_of(&d.core_embed(&Vector::basis(dc, k))));
    }
    let n_oracle = oracle.seq.omega().dim;
    let psi = LinMap::new(
        comb.seq.omega().clone(),
        oracle.seq.omega().clone(),
        Matrix::from_columns(&cols, n_oracle),
    );
    let omega_dims = (comb.seq.omega().dim, n_oracle);
    let Ok(psi) = psi else {
        return OracleComparison {
            dims: d.dims(),
            omega_dims,
            iso: false,
            ladder: LadderReport {
                left_square: false,
                right_square: false,
            },
            classes_match: false,
        };
    };
    let ladder = check_ladder(
        &comb.seq.seq,
        &oracle.seq.seq,
        &LinMap::identity(&d.c),
        &psi,
        &LinMap::identity(&d.a.tensor(&d.b)),
    );
    let classes_match = (0..trials).all(|_| {
        let x = d.random_element(rng);
        psi.apply(&comb.class_of(&x)) == oracle.class_of(&x)
    });
    OracleComparison {
        dims: d.dims(),
        omega_dims,
        iso: psi.is_isomorphism(),
        ladder,
        classes_match,
    }
}

/// `𝒞(φ)`: `ϖ(x ⊕ c) = (f_A⊗f_B)(x) ⊕ (f_C(c) + ω(x))`.
pub fn combining_on_morphism(phi: &DvbMorphism) -> SeqMorphism {
    let source = combining(&phi.source).seq;
    let target = combining(&phi.target).seq;
    let fab = tensor_map(&phi.fa, &phi.fb);
    let top = fab
        .matrix()
        .hstack(&Matrix::zeros(fab.codomain().dim, phi.source.c.dim));
    let bottom = phi.omega.matrix().hstack(phi.fc.matrix());
    let varpi = LinMap::new(source.omega().clone(), target.omega().clone(), top.vstack(&bottom)).expect("ϖ shape");
    SeqMorphism {
        source,
        target,
        varpi,
        fa: phi.fa.clone(),
        fb: phi.fb.clone(),
        fc: phi.fc.clone(),
    }
}

/// `𝒟(m)`: `(ω, a, b) ↦ (ϖ(ω), f_A(a), f_B(b))`.
#[derive(Debug, Clone)]
pub struct DoubledMorphism {
    pub morphism: SeqMorphism,
    pub source: DoubledDvb,
    pub target: DoubledDvb,
}

pub fn doubling_on_morphism(m: &SeqMorphism) -> DoubledMorphism {
    DoubledMorphism {
        morphism: m.clone(),
        source: doubling(&m.source),
        target: doubling(&m.target),
    }
}

impl DoubledMorphism {
    pub fn apply(&self, d: &DoubledElement) -> DoubledElement {
        DoubledElement::new(
            self.morphism.varpi.apply(&d.omega),
            self.morphism.fa.apply(&d.a),
            self.morphism.fb.apply(&d.b),
        )
    }

    /// Canonical form relative to both trivializations:
    /// `f_C = l'∘ϖ∘e` and `ω = l'∘(ϖ∘s − s'∘(f_A⊗f_B))`.
    pub fn canonical(&self) -> DvbMorphism {
        let m = &self.morphism;
        let fab = tensor_map(&m.fa, &m.fb);
        let fc = self.target.retraction.compose(&m.varpi).compose(m.source.e());
        let omega = self.target.retraction.compose(
            &m.varpi
                .compose(&self.source.section)
                .sub(&self.target.section.compose(&fab)),
        );
        DvbMorphism::new(
            self.source.trivial(),
            self.target.trivial(),
            m.fa.clone(),
            m.fb.clone(),
            fc.with_spaces(m.source.c.clone(), m.target.c.clone()),
            omega.with_spaces(m.source.a.tensor(&m.source.b), m.target.c.clone()),
        )
        .expect("canonical form shape")
    }
}

/// `t_D: D → 𝒟𝒞(D)`, `d ↦ ([d], a, b)`.
#[derive(Debug, Clone)]
pub struct NatT {
    pub combined: Combined,
    pub doubled: DoubledDvb,
}

pub fn nat_t(d: &TrivialDvb) -> NatT {
    let combined = combining(d);
    let doubled = doubling(&combined.seq);
    NatT { combined, doubled }
}

impl NatT {
    pub fn apply(&self, d: &DvbElement) -> DoubledElement {
        DoubledElement::new(self.combined.class_of(d), d.a.clone(), d.b.clone())
    }

    /// Canonical form of `t_D` followed by the trivialization of `𝒟𝒞(D)`.
    pub fn canonical(&self) -> DvbMorphism {
        let d = &self.combined.dvb;
        DvbMorphism::probe(d, &self.doubled.trivial(), |x| self.doubled.to_trivial(&self.apply(x)))
    }
}

/// `π_Ω: 𝒞𝒟(Ω) → Ω`, `[(ω, a, b)] ↦ ω`. With `𝒞𝒟(Ω) = A⊗B ⊕ C` through the
/// trivialization, its matrix is `[s | e]`.
#[derive(Debug, Clone)]
pub struct NatPi {
    pub doubled: DoubledDvb,
    pub combined: Combined,
    pub morphism: SeqMorphism,
}

pub fn nat_pi(s: &DvbSeq) -> NatPi {
    let doubled = doubling(s);
    let combined = combining(&doubled.trivial());
    let varpi = doubled.section.hstack(s.e());
    let varpi = varpi.with_spaces(combined.seq.omega().clone(), s.omega().clone());
    let morphism = SeqMorphism {
        source: combined.seq.clone(),
        target: s.clone(),
        varpi,
        fa: LinMap::identity(&s.a),
        fb: LinMap::identity(&s.b),
        fc: LinMap::identity(&s.c),
    };
    NatPi {
        doubled,
        combined,
        morphism,
    }
}

impl NatPi {
    /// The class of a member of `𝒟(Ω)` in `𝒞𝒟(Ω)`.
    pub fn class_of(&self, d: &DoubledElement) -> Vector {
        self.combined.class_of(&self.doubled.to_trivial(d))
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        self.morphism.varpi.apply(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NatTReport {
    pub iso: bool,
    pub canonical: bool,
    pub members: bool,
    pub natural: bool,
}

impl NatTReport {
    pub fn passed(&self) -> bool {
        self.iso && self.canonical && self.members && self.natural
    }
}

/// Checks that `t_D` is an isomorphism of DVBs and natural with respect to
/// `φ: D → D'`: `t_{D'}∘φ = 𝒟𝒞(φ)∘t_D`.
pub fn check_nat_t<R: Rng + ?Sized>(phi: &DvbMorphism, rng: &mut R, trials: usize) -> NatTReport {
    let t = nat_t(&phi.source);
    let t2 = nat_t(&phi.target);
    let canonical = t.canonical();
    let samples: Vec<DvbElement> = (0..trials).map(|_| phi.source.random_element(rng)).collect();
    let dc_phi = doubling_on_morphism(&combining_on_morphism(phi));
    let natural = samples.iter().all(|x| {
        let lhs = t2.apply(&phi.apply(x).expect("sample belongs to source"));
        lhs == dc_phi.apply(&t.apply(x))
    });
    NatTReport {
        iso: canonical.is_isomorphism(),
        canonical: canonical.agrees_with(|x| t.doubled.to_trivial(&t.apply(x)), &samples),
        members: samples.iter().all(|x| t.doubled.is_member(&t.apply(x))),
        natural,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NatPiReport {
    pub iso: bool,
    pub ladder: LadderReport,
    pub recovers_omega: bool,
    pub natural: bool,
}

impl NatPiReport {
    pub fn passed(&self) -> bool {
        self.iso && self.ladder.commutes() && self.recovers_omega && self.natural
    }
}

/// Checks `π` on `m.source` and naturality `π'∘𝒞𝒟(m) = ϖ∘π`.
pub fn check_nat_pi<R: Rng + ?Sized>(m: &SeqMorphism, rng: &mut R, trials: usize) -> NatPiReport {
    let pi = nat_pi(&m.source);
    let pi2 = nat_pi(&m.target);
    let cd = combining_on_morphism(&doubling_on_morphism(m).canonical());
    let lhs = pi2.morphism.varpi.compose(&cd.varpi);
    let rhs = m.varpi.compose(&pi.morphism.varpi);
    let recovers_omega = (0..trials).all(|_| {
        let x = pi.doubled.random_member(rng);
        pi.apply(&pi.class_of(&x)) == x.omega
    });
    NatPiReport {
        iso: pi.morphism.varpi.is_isomorphism(),
        ladder: pi.morphism.check(),
        recovers_omega,
        natural: lhs.matrix() == rhs.matrix(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub combining_identity: bool,
    pub combining_composition: bool,
    pub combining_valid: bool,
    pub doubling_identity: bool,
    pub doubling_composition: bool,
    pub doubling_canonical: bool,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.combining_identity
            && self.combining_composition
            && self.combining_valid
            && self.doubling_identity
            && self.doubling_composition
            && self.doubling_canonical
    }
}

/// Identity and composition laws for both functors on composable pairs
/// `φ1: D1 → D2`, `φ2: D2 → D3` and `m1: s1 → s2`, `m2: s2 → s3`.
pub fn check_functors<R: Rng + ?Sized>(
    phi1: &DvbMorphism,
    phi2: &DvbMorphism,
    m1: &SeqMorphism,
    m2: &SeqMorphism,
    rng: &mut R,
    trials: usize,
) -> FunctorReport {
    let c_comp = combining_on_morphism(&phi2.compose(phi1).expect("composable"));
    let comp_c = combining_on_morphism(phi2).compose(&combining_on_morphism(phi1));
    let c_id = combining_on_morphism(&DvbMorphism::identity(&phi1.source));
    let d_comp = doubling_on_morphism(&m2.compose(m1));
    let d1 = doubling_on_morphism(m1);
    let d2 = doubling_on_morphism(m2);
    let d_id = doubling_on_morphism(&SeqMorphism::identity(&m1.source));
    let samples: Vec<DoubledElement> = (0..trials).map(|_| d1.source.random_member(rng)).collect();
    let doubling_canonical = samples.iter().all(|x| {
        let via_canonical = d1
            .canonical()
            .apply(&d1.source.to_trivial(x))
            .map(|y| d1.target.from_trivial(&y));
        via_canonical.ok().as_ref() == Some(&d1.apply(x)) && d1.target.is_member(&d1.apply(x))
    });
    FunctorReport {
        combining_identity: c_id.same_as(&SeqMorphism::identity(&combining(&phi1.source).seq)),
        combining_composition: c_comp.same_as(&comp_c),
        combining_valid: combining_on_morphism(phi1).check().commutes(),
        doubling_identity: samples.iter().all(|x| d_id.apply(x) == *x)
            && d_id.canonical().same_as(&DvbMorphism::identity(&d_id.source.trivial())),
        doubling_composition: samples.iter().all(|x| d_comp.apply(x) == d2.apply(&d1.apply(x)))
            && d_comp
                .canonical()
                .same_as(&d2.canonical().compose(&d1.canonical()).expect("composable")),
        doubling_canonical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvb::check_interchange;

    fn scalar_map(x: i64) -> LinMap {
        LinMap::scalar(&Space::new("X", 1), &Scalar::from_int(x))
    }

    #[test]
    fn doubling_membership_examples() {
        let (a, b, c) = DvbSeq::with_dims(1, 1, 1);
        let s = DvbSeq::split(&a, &b, &c);
        let dd = doubling(&s);
        assert!(dd.is_member(&DoubledElement::new(
            Vector::from_ints(&[0, 6]),
            Vector::from_ints(&[2]),
            Vector::from_ints(&[3])
        )));
        assert!(!dd.is_member(&DoubledElement::new(
            Vector::from_ints(&[1, 5]),
            Vector::from_ints(&[2]),
            Vector::from_ints(&[3])
        )));
        assert_eq!(
            dd.core_embed(&Vector::from_ints(&[1])).omega,
            Vector::from_ints(&[1, 0])
        );
    }

    #[test]
    fn doubled_bundle_satisfies_interchange() {
        let mut rng = rng_from_seed(17);
        let s = DvbSeq::random(&mut rng, 2, 2, 1);
        let mut dd = doubling(&s);
        assert!(check_interchange(&mut dd, 50, 3).all_passed());
        assert!(check_trivialization(&dd, &mut rng, 30).passed());
    }

    #[test]
    fn combining_examples() {
        let comb = combining(&TrivialDvb::with_dims(2, 3, 1));
        assert_eq!(comb.seq.omega().dim, 7);
        let comb = combining(&TrivialDvb::with_dims(1, 1, 1));
        assert_eq!(
            comb.class_of(&DvbElement::from_ints(&[2], &[3], &[5])),
            Vector::from_ints(&[6, 5])
        );
        let t = nat_t(&TrivialDvb::with_dims(1, 1, 1));
        assert_eq!(
            t.apply(&DvbElement::from_ints(&[2], &[3], &[5])),
            DoubledElement::new(
                Vector::from_ints(&[6, 5]),
                Vector::from_ints(&[2]),
                Vector::from_ints(&[3])
            )
        );
    }

    #[test]
    fn class_of_respects_relations() {
        let mut rng = rng_from_seed(5);
        let d = TrivialDvb::with_dims(2, 2, 2);
        let comb = combining(&d);
        for _ in 0..20 {
            let x = d.random_element(&mut rng);
            let mut y = d.random_element(&mut rng);
            y.a = x.a.clone();
            let sum = d.add_a(&x, &y).unwrap();
            assert_eq!(comb.class_of(&sum), comb.class_of(&x).add(&comb.class_of(&y)));
        }
    }

    #[test]
    fn oracle_agrees_with_trivialization() {
        let mut rng = rng_from_seed(6);
        for dims in [(2, 3, 1), (1, 1, 1), (0, 1, 2), (2, 2, 0)] {
            let d = TrivialDvb::with_dims(dims.0, dims.1, dims.2);
            let cmp = compare_with_oracle(&d, &mut rng, 10);
            assert!(cmp.passed(), "{cmp:?}");
        }
        let o = combining_oracle(&TrivialDvb::with_dims(2, 3, 1));
        assert_eq!(o.seq.omega().dim, 7);
        assert!(o.class_of(&TrivialDvb::with_dims(2, 3, 1).zero()).is_zero());
    }

    #[test]
    fn combining_morphism_example() {
        let one = TrivialDvb::with_dims(1, 1, 1);
        let phi = DvbMorphism::new(
            one.clone(),
            one,
            scalar_map(1),
            scalar_map(2),
            scalar_map(3),
            scalar_map(4),
        )
        .unwrap();
        let m = combining_on_morphism(&phi);
        assert_eq!(m.varpi.apply(&Vector::from_ints(&[1, 1])), Vector::from_ints(&[2, 7]));
        assert!(m.check().commutes());
    }

    #[test]
    fn natural_isomorphisms() {
        let mut rng = rng_from_seed(10);
        let d1 = TrivialDvb::with_dims(2, 1, 2);
        let d2 = TrivialDvb::with_dims(1, 2, 1);
        let phi = DvbMorphism::random(&mut rng, &d1, &d2);
        assert!(check_nat_t(&phi, &mut rng, 10).passed());
        let s1 = DvbSeq::random(&mut rng, 2, 1, 1);
        let s2 = DvbSeq::random(&mut rng, 1, 2, 2);
        let m = SeqMorphism::random(&mut rng, &s1, &s2);
        assert!(check_nat_pi(&m, &mut rng, 10).passed());
        let split = DvbSeq::split(&s1.a, &s1.b, &s1.c);
        let pi = nat_pi(&split);
        assert_eq!(
            pi.morphism.varpi.matrix(),
            &Matrix::from_ints(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
        );
    }

    #[test]
    fn functor_laws() {
        let mut rng = rng_from_seed(11);
        let ds: Vec<TrivialDvb> = (0..3)
            .map(|_| {
                TrivialDvb::with_dims(
                    sample::dim(&mut rng, 0, 2),
                    sample::dim(&mut rng, 0, 2),
                    sample::dim(&mut rng, 0, 2),
                )
            })
            .collect();
        let phi1 = DvbMorphism::random(&mut rng, &ds[0], &ds[1]);
        let phi2 = DvbMorphism::random(&mut rng, &ds[1], &ds[2]);
        let ss: Vec<DvbSeq> = (0..3).map(|_| DvbSeq::random(&mut rng, 2, 1, 2)).collect();
        let m1 = SeqMorphism::random(&mut rng, &ss[0], &ss[1]);
        let m2 = SeqMorphism::random(&mut rng, &ss[1], &ss[2]);
        let rep = check_functors(&phi1, &phi2, &m1, &m2, &mut rng, 10);
        assert!(rep.passed(), "{rep:?}");
    }
}
