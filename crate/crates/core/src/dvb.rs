//! Double vector bundles restricted to one fiber.
//!
//! A trivial double vector bundle over sides `A`, `B` with core `C` has the
//! carrier `A × B × C`. Its vertical structure (over `A`) combines elements
//! sharing the same `a`; its horizontal structure (over `B`) combines
//! elements sharing the same `b`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ansatz::Ansatz;
use crate::exactla::{tensor_map, tensor_vec, LinMap, Scalar, Space, Vector};
use crate::sample::{self, rng_from_seed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DvbError {
    #[error("elements lie over different points of the {side} side: {left:?} vs {right:?}")]
    FiberMismatch { side: Side, left: Vector, right: Vector },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// One of the two side bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// The operations a double vector bundle provides on its slice. Implemented
/// by [`TrivialDvb`] and by the double realization of a DVB sequence, and
/// consumed by [`check_interchange`].
pub trait DoubleStructure {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn side_dims(&self) -> (usize, usize);
    fn proj_a(&self, d: &Self::Elem) -> Vector;
    fn proj_b(&self, d: &Self::Elem) -> Vector;
    /// `r ·_A d1 +_A d2`, defined when both lie over the same point of `A`.
    fn combine_a(&self, r: &Scalar, d1: &Self::Elem, d2: &Self::Elem) -> Result<Self::Elem, DvbError>;
    /// `r ·_B d1 +_B d2`, defined when both lie over the same point of `B`.
    fn combine_b(&self, r: &Scalar, d1: &Self::Elem, d2: &Self::Elem) -> Result<Self::Elem, DvbError>;
    fn zero_over_a(&self, a: &Vector) -> Self::Elem;
    fn zero_over_b(&self, b: &Vector) -> Self::Elem;
    /// A random element with the prescribed side projections.
    fn sample_over(&mut self, rng: &mut dyn rand::RngCore, a: &Vector, b: &Vector) -> Self::Elem;

    fn add_a(&self, d1: &Self::Elem, d2: &Self::Elem) -> Result<Self::Elem, DvbError> {
        self.combine_a(&Scalar::one(), d1, d2)
    }

    fn add_b(&self, d1: &Self::Elem, d2: &Self::Elem) -> Result<Self::Elem, DvbError> {
        self.combine_b(&Scalar::one(), d1, d2)
    }

    fn scale_a(&self, t: &Scalar, d: &Self::Elem) -> Result<Self::Elem, DvbError> {
        self.combine_a(t, d, &self.zero_over_a(&self.proj_a(d)))
    }

    fn scale_b(&self, t: &Scalar, d: &Self::Elem) -> Result<Self::Elem, DvbError> {
        self.combine_b(t, d, &self.zero_over_b(&self.proj_b(d)))
    }
}

/// Sides and core of a trivial double vector bundle.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrivialDvb {
    pub a: Space,
    pub b: Space,
    pub c: Space,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DvbElement {
    pub a: Vector,
    pub b: Vector,
    pub c: Vector,
}

impl DvbElement {
    pub fn new(a: Vector, b: Vector, c: Vector) -> Self {
        DvbElement { a, b, c }
    }

    pub fn from_ints(a: &[i64], b: &[i64], c: &[i64]) -> Self {
        DvbElement::new(Vector::from_ints(a), Vector::from_ints(b), Vector::from_ints(c))
    }

    /// The element of the flipped bundle.
    pub fn flipped(&self) -> DvbElement {
        DvbElement::new(self.b.clone(), self.a.clone(), self.c.clone())
    }

    /// Coordinates `(a, b, c)` concatenated.
    pub fn coords(&self) -> Vector {
        self.a.concat(&self.b).concat(&self.c)
    }
}

impl fmt::Debug for DvbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?}; {:?})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for TrivialDvb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DVB(A={:?}, B={:?}; C={:?})", self.a, self.b, self.c)
    }
}

impl TrivialDvb {
    pub fn new(a: Space, b: Space, c: Space) -> Self {
        TrivialDvb { a, b, c }
    }

    /// Sides `A`, `B` and core `C` with default labels.
    pub fn with_dims(da: usize, db: usize, dc: usize) -> Self {
        TrivialDvb::new(Space::new("A", da), Space::new("B", db), Space::new("C", dc))
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.dim, self.b.dim, self.c.dim)
    }

    /// The same bundle with its two side bundles exchanged.
    pub fn flip(&self) -> TrivialDvb {
        TrivialDvb::new(self.b.clone(), self.a.clone(), self.c.clone())
    }

    pub fn side(&self, side: Side) -> &Space {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn element(&self, a: Vector, b: Vector, c: Vector) -> Result<DvbElement, DvbError> {
        let d = DvbElement::new(a, b, c);
        self.check_member(&d)?;
        Ok(d)
    }

    pub fn check_member(&self, d: &DvbElement) -> Result<(), DvbError> {
        if d.a.len() != self.a.dim || d.b.len() != self.b.dim || d.c.len() != self.c.dim {
            return Err(DvbError::ShapeMismatch(format!(
                "element {:?} does not belong to {:?}",
                d, self
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> DvbElement {
        DvbElement::new(
            Vector::zeros(self.a.dim),
            Vector::zeros(self.b.dim),
            Vector::zeros(self.c.dim),
        )
    }

    /// `c ↦ (0_A, 0_B, c)`: the core sits in the intersection of both kernels.
    pub fn core_embed(&self, c: &Vector) -> DvbElement {
        assert_eq!(c.len(), self.c.dim, "core vector has wrong length");
        DvbElement::new(Vector::zeros(self.a.dim), Vector::zeros(self.b.dim), c.clone())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> DvbElement {
        DvbElement::new(
            sample::vector(rng, self.a.dim),
            sample::vector(rng, self.b.dim),
            sample::vector(rng, self.c.dim),
        )
    }

    /// Basis of the fiber over `base` in the given side structure, as a vector
    /// space with that fiber's zero as origin. Fiber coordinates over `A` are
    /// `(b, c)`, over `B` they are `(a, c)`.
    pub fn fiber_basis(&self, side: Side, base: &Vector) -> Vec<DvbElement> {
        let other_dim = self.side(side.other()).dim;
        let mut out = Vec::with_capacity(self.fiber_dim(side));
        for i in 0..other_dim {
            out.push(self.assemble(side, base, &Vector::basis(other_dim, i), &Vector::zeros(self.c.dim)));
        }
        for k in 0..self.c.dim {
            out.push(self.assemble(side, base, &Vector::zeros(other_dim), &Vector::basis(self.c.dim, k)));
        }
        out
    }

    pub fn fiber_dim(&self, side: Side) -> usize {
        match side {
            Side::A => self.b.dim + self.c.dim,
            Side::B => self.a.dim + self.c.dim,
        }
    }

    /// Coordinates of `d` inside its fiber over `side`.
    pub fn fiber_coords(&self, side: Side, d: &DvbElement) -> Vector {
        match side {
            Side::A => d.b.concat(&d.c),
            Side::B => d.a.concat(&d.c),
        }
    }

    /// Element over `base` with fiber coordinates `(other, core)`.
    pub fn assemble(&self, side: Side, base: &Vector, other: &Vector, core: &Vector) -> DvbElement {
        match side {
            Side::A => DvbElement::new(base.clone(), other.clone(), core.clone()),
            Side::B => DvbElement::new(other.clone(), base.clone(), core.clone()),
        }
    }

    pub fn from_fiber_coords(&self, side: Side, base: &Vector, coords: &Vector) -> DvbElement {
        let other_dim = match side {
            Side::A => self.b.dim,
            Side::B => self.a.dim,
        };
        self.assemble(
            side,
            base,
            &coords.slice(0, other_dim),
            &coords.slice(other_dim, self.c.dim),
        )
    }

    pub fn base_of(&self, side: Side, d: &DvbElement) -> Vector {
        match side {
            Side::A => d.a.clone(),
            Side::B => d.b.clone(),
        }
    }
}

impl DoubleStructure for TrivialDvb {
    type Elem = DvbElement;

    fn side_dims(&self) -> (usize, usize) {
        (self.a.dim, self.b.dim)
    }

    fn proj_a(&self, d: &DvbElement) -> Vector {
        d.a.clone()
    }

    fn proj_b(&self, d: &DvbElement) -> Vector {
        d.b.clone()
    }

    fn combine_a(&self, r: &Scalar, d1: &DvbElement, d2: &DvbElement) -> Result<DvbElement, DvbError> {
        combine_a(r, d1, d2)
    }

    fn combine_b(&self, r: &Scalar, d1: &DvbElement, d2: &DvbElement) -> Result<DvbElement, DvbError> {
        combine_b(r, d1, d2)
    }

    fn zero_over_a(&self, a: &Vector) -> DvbElement {
        DvbElement::new(a.clone(), Vector::zeros(self.b.dim), Vector::zeros(self.c.dim))
    }

    fn zero_over_b(&self, b: &Vector) -> DvbElement {
        DvbElement::new(Vector::zeros(self.a.dim), b.clone(), Vector::zeros(self.c.dim))
    }

    fn sample_over(&mut self, rng: &mut dyn rand::RngCore, a: &Vector, b: &Vector) -> DvbElement {
        DvbElement::new(a.clone(), b.clone(), sample::vector(rng, self.c.dim))
    }
}

/// `r ·_A d1 +_A d2 = (a, r b1 + b2, r c1 + c2)`.
pub fn combine_a(r: &Scalar, d1: &DvbElement, d2: &DvbElement) -> Result<DvbElement, DvbError> {
    if d1.a != d2.a {
        return Err(DvbError::FiberMismatch {
            side: Side::A,
            left: d1.a.clone(),
            right: d2.a.clone(),
        });
    }
    Ok(DvbElement::new(d1.a.clone(), d1.b.axpy(r, &d2.b), d1.c.axpy(r, &d2.c)))
}

/// `r ·_B d1 +_B d2 = (r a1 + a2, b, r c1 + c2)`.
pub fn combine_b(r: &Scalar, d1: &DvbElement, d2: &DvbElement) -> Result<DvbElement, DvbError> {
    if d1.b != d2.b {
        return Err(DvbError::FiberMismatch {
            side: Side::B,
            left: d1.b.clone(),
            right: d2.b.clone(),
        });
    }
    Ok(DvbElement::new(d1.a.axpy(r, &d2.a), d1.b.clone(), d1.c.axpy(r, &d2.c)))
}

pub const INTERCHANGE_LAWS: [&str; 8] = [
    "(d1 +B d2) +A (d3 +B d4) = (d1 +A d3) +B (d2 +A d4)",
    "t.A(d1 +B d2) = t.A d1 +B t.A d2",
    "t.B(d1 +A d2) = t.B d1 +A t.B d2",
    "t.A(s.B d) = s.B(t.A d)",
    "0A(a1 + a2) = 0A(a1) +B 0A(a2)",
    "0A(t a) = t.B 0A(a)",
    "0B(b1 + b2) = 0B(b1) +A 0B(b2)",
    "0B(t b) = t.A 0B(b)",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawTally {
    pub law: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterchangeReport {
    pub trials: usize,
    pub laws: Vec<LawTally>,
}

impl InterchangeReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.failed == 0)
    }

    pub fn failures(&self) -> usize {
        self.laws.iter().map(|l| l.failed).sum()
    }
}

/// Samples compatible elements and scalars and checks each of the eight
/// interchange laws exactly. Failures are recorded in the report.
pub fn check_interchange<D: DoubleStructure>(dvb: &mut D, trials: usize, seed: u64) -> InterchangeReport {
    let mut rng = rng_from_seed(seed);
    check_interchange_with(dvb, trials, &mut rng)
}

/// Both sides of one law, or the error that made a side undefined.
type LawOutcome<E> = Result<(E, E), DvbError>;

pub fn check_interchange_with<D: DoubleStructure, R: Rng>(
    dvb: &mut D,
    trials: usize,
    rng: &mut R,
) -> InterchangeReport {
    let mut laws: Vec<LawTally> = INTERCHANGE_LAWS
        .iter()
        .map(|l| LawTally {
            law: l.to_string(),
            passed: 0,
            failed: 0,
            first_failure: None,
        })
        .collect();
    let (da, db) = dvb.side_dims();
    for _ in 0..trials {
        let a1 = sample::vector(rng, da);
        let a2 = sample::vector(rng, da);
        let b1 = sample::vector(rng, db);
        let b2 = sample::vector(rng, db);
        let t = sample::scalar(rng);
        let s = sample::scalar(rng);
        let d1 = dvb.sample_over(rng, &a1, &b1);
        let d2 = dvb.sample_over(rng, &a2, &b1);
        let d3 = dvb.sample_over(rng, &a1, &b2);
        let d4 = dvb.sample_over(rng, &a2, &b2);
        let e1 = dvb.sample_over(rng, &a1, &b1);
        let e2 = dvb.sample_over(rng, &a1, &b1);

        let outcomes: [LawOutcome<D::Elem>; 8] = [
            (|| {
                let lhs = dvb.add_a(&dvb.add_b(&d1, &d2)?, &dvb.add_b(&d3, &d4)?)?;
                let rhs = dvb.add_b(&dvb.add_a(&d1, &d3)?, &dvb.add_a(&d2, &d4)?)?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.scale_a(&t, &dvb.add_b(&d1, &d2)?)?;
                let rhs = dvb.add_b(&dvb.scale_a(&t, &d1)?, &dvb.scale_a(&t, &d2)?)?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.scale_b(&t, &dvb.add_a(&e1, &d3)?)?;
                let rhs = dvb.add_a(&dvb.scale_b(&t, &e1)?, &dvb.scale_b(&t, &d3)?)?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.scale_a(&t, &dvb.scale_b(&s, &e2)?)?;
                let rhs = dvb.scale_b(&s, &dvb.scale_a(&t, &e2)?)?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.zero_over_a(&a1.add(&a2));
                let rhs = dvb.add_b(&dvb.zero_over_a(&a1), &dvb.zero_over_a(&a2))?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.zero_over_a(&a1.scale(&t));
                let rhs = dvb.scale_b(&t, &dvb.zero_over_a(&a1))?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.zero_over_b(&b1.add(&b2));
                let rhs = dvb.add_a(&dvb.zero_over_b(&b1), &dvb.zero_over_b(&b2))?;
                Ok((lhs, rhs))
            })(),
            (|| {
                let lhs = dvb.zero_over_b(&b1.scale(&t));
                let rhs = dvb.scale_a(&t, &dvb.zero_over_b(&b1))?;
                Ok((lhs, rhs))
            })(),
        ];

        for (tally, outcome) in laws.iter_mut().zip(outcomes) {
            let failure = match outcome {
                Ok((lhs, rhs)) if lhs == rhs => None,
                Ok((lhs, rhs)) => Some(format!("lhs {lhs:?} != rhs {rhs:?}")),
                Err(e) => Some(e.to_string()),
            };
            match failure {
                None => tally.passed += 1,
                Some(msg) => {
                    tally.failed += 1;
                    if tally.first_failure.is_none() {
                        tally.first_failure = Some(msg);
                    }
                }
            }
        }
    }
    InterchangeReport { trials, laws }
}

/// A morphism between trivial double vector bundles over the identity of the
/// base point, in canonical form:
/// `(a, b, c) ↦ (f_A a, f_B b, f_C c + ω(a ⊗ b))`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DvbMorphism {
    pub source: TrivialDvb,
    pub target: TrivialDvb,
    pub fa: LinMap,
    pub fb: LinMap,
    pub fc: LinMap,
    pub omega: LinMap,
}

impl fmt::Debug for DvbMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DvbMorphism")
            .field("fa", self.fa.matrix())
            .field("fb", self.fb.matrix())
            .field("fc", self.fc.matrix())
            .field("omega", self.omega.matrix())
            .finish()
    }
}

impl DvbMorphism {
    pub fn new(
        source: TrivialDvb,
        target: TrivialDvb,
        fa: LinMap,
        fb: LinMap,
        fc: LinMap,
        omega: LinMap,
    ) -> Result<Self, DvbError> {
        let shapes = [
            (&fa, source.a.dim, target.a.dim, "f_A"),
            (&fb, source.b.dim, target.b.dim, "f_B"),
            (&fc, source.c.dim, target.c.dim, "f_C"),
            (&omega, source.a.dim * source.b.dim, target.c.dim, "ω"),
        ];
        for (map, dom, cod, name) in shapes {
            if map.domain().dim != dom || map.codomain().dim != cod {
                return Err(DvbError::ShapeMismatch(format!(
                    "{name} should be {dom} -> {cod}, got {:?}",
                    map
                )));
            }
        }
        Ok(DvbMorphism {
            source,
            target,
            fa,
            fb,
            fc,
            omega,
        })
    }

    pub fn identity(d: &TrivialDvb) -> Self {
        DvbMorphism {
            source: d.clone(),
            target: d.clone(),
            fa: LinMap::identity(&d.a),
            fb: LinMap::identity(&d.b),
            fc: LinMap::identity(&d.c),
            omega: LinMap::zero(&d.a.tensor(&d.b), &d.c),
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, source: &TrivialDvb, target: &TrivialDvb) -> Self {
        DvbMorphism {
            source: source.clone(),
            target: target.clone(),
            fa: sample::linmap(rng, &source.a, &target.a),
            fb: sample::linmap(rng, &source.b, &target.b),
            fc: sample::linmap(rng, &source.c, &target.c),
            omega: sample::linmap(rng, &source.a.tensor(&source.b), &target.c),
        }
    }

    /// Reads off the canonical form of an element map assumed to be a DVB
    /// morphism, by evaluating it on `(e_i,0,0)`, `(0,f_j,0)`, `(0,0,g_k)`
    /// and `(e_i,f_j,0)`. Use [`Self::agrees_with`] to test the assumption.
    pub fn probe(source: &TrivialDvb, target: &TrivialDvb, f: impl Fn(&DvbElement) -> DvbElement) -> DvbMorphism {
        let (da, db, dc) = source.dims();
        let z = |n: usize| Vector::zeros(n);
        let ea = |i: usize| Vector::basis(da, i);
        let eb = |j: usize| Vector::basis(db, j);
        let cols_a: Vec<Vector> = (0..da).map(|i| f(&DvbElement::new(ea(i), z(db), z(dc))).a).collect();
        let cols_b: Vec<Vector> = (0..db).map(|j| f(&DvbElement::new(z(da), eb(j), z(dc))).b).collect();
        let cols_c: Vec<Vector> = (0..dc)
            .map(|k| f(&DvbElement::new(z(da), z(db), Vector::basis(dc, k))).c)
            .collect();
        let mut cols_w = Vec::with_capacity(da * db);
        for i in 0..da {
            for j in 0..db {
                cols_w.push(f(&DvbElement::new(ea(i), eb(j), z(dc))).c);
            }
        }
        let mk = |dom: Space, cod: &Space, cols: &[Vector]| {
            LinMap::new(dom, cod.clone(), crate::exactla::Matrix::from_columns(cols, cod.dim))
                .expect("probed map shape")
        };
        DvbMorphism {
            source: source.clone(),
            target: target.clone(),
            fa: mk(source.a.clone(), &target.a, &cols_a),
            fb: mk(source.b.clone(), &target.b, &cols_b),
            fc: mk(source.c.clone(), &target.c, &cols_c),
            omega: mk(source.a.tensor(&source.b), &target.c, &cols_w),
        }
    }

    /// Whether `f` coincides with this morphism on every given element.
    pub fn agrees_with<'a>(
        &self,
        f: impl Fn(&DvbElement) -> DvbElement,
        samples: impl IntoIterator<Item = &'a DvbElement>,
    ) -> bool {
        samples
            .into_iter()
            .all(|d| self.apply(d).map(|x| x == f(d)).unwrap_or(false))
    }

    pub fn apply(&self, d: &DvbElement) -> Result<DvbElement, DvbError> {
        self.source.check_member(d)?;
        Ok(DvbElement::new(
            self.fa.apply(&d.a),
            self.fb.apply(&d.b),
            self.fc.apply(&d.c).add(&self.omega.apply(&tensor_vec(&d.a, &d.b))),
        ))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &DvbMorphism) -> Result<DvbMorphism, DvbError> {
        if inner.target.dims() != self.source.dims() {
            return Err(DvbError::ShapeMismatch(format!(
                "cannot compose: target {:?} vs source {:?}",
                inner.target, self.source
            )));
        }
        let omega = self
            .fc
            .compose(&inner.omega)
            .add(&self.omega.compose(&tensor_map(&inner.fa, &inner.fb)));
        Ok(DvbMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            fa: self.fa.compose(&inner.fa),
            fb: self.fb.compose(&inner.fb),
            fc: self.fc.compose(&inner.fc),
            omega,
        })
    }

    /// Equality of the four component matrices, ignoring space labels.
    pub fn same_as(&self, other: &DvbMorphism) -> bool {
        self.source.dims() == other.source.dims()
            && self.target.dims() == other.target.dims()
            && self.fa.matrix() == other.fa.matrix()
            && self.fb.matrix() == other.fb.matrix()
            && self.fc.matrix() == other.fc.matrix()
            && self.omega.matrix() == other.omega.matrix()
    }

    /// Invertible exactly when the three component maps are.
    pub fn is_isomorphism(&self) -> bool {
        self.fa.is_isomorphism() && self.fb.is_isomorphism() && self.fc.is_isomorphism()
    }

    pub fn inverse(&self) -> Option<DvbMorphism> {
        let fa = self.fa.inverse()?;
        let fb = self.fb.inverse()?;
        let fc = self.fc.inverse()?;
        // (fC ω' + ω (fA⊗fB)) must vanish for the composite to be the identity.
        let omega = fc
            .compose(&self.omega)
            .compose(&tensor_map(&fa, &fb))
            .scale(&-Scalar::one());
        Some(DvbMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            fa,
            fb,
            fc,
            omega,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub source: (usize, usize, usize),
    pub target: (usize, usize, usize),
    pub solution_dim: usize,
    pub canonical_dim: usize,
    pub equal: bool,
}

impl CompletenessReport {
    pub fn passed(&self) -> bool {
        self.equal && self.solution_dim == self.canonical_dim
    }
}

fn elementary(domain: &Space, codomain: &Space, row: usize, col: usize) -> LinMap {
    let mut m = crate::exactla::Matrix::zeros(codomain.dim, domain.dim);
    m.set(row, col, Scalar::one());
    LinMap::new(domain.clone(), codomain.clone(), m).expect("elementary map shape")
}

/// Brute-force completeness of the canonical form: the degree ≤ 2 maps
/// `src → tgt` that are fiberwise linear for both structures are solved for
/// from sampled relations and compared with the span of all maps
/// `(a, b, c) ↦ (f_A a, f_B b, f_C c + ω(a⊗b))`.
pub fn canonical_form_completeness<R: Rng + ?Sized>(
    src: &TrivialDvb,
    tgt: &TrivialDvb,
    rng: &mut R,
) -> CompletenessReport {
    let (na, nb, nc) = src.dims();
    let (ma, mb, mc) = tgt.dims();
    let mut ans = Ansatz::new(na + nb + nc, ma + mb + mc);
    let (outs_a, outs_b, outs_c) = (0..ma, ma..ma + mb, ma + mb..ma + mb + mc);
    let one = Scalar::one();
    let minus = -Scalar::one();
    let samples = ans.monomial_count() / 2 + 4;
    for _ in 0..samples {
        let r = sample::scalar(rng);
        let a = sample::vector(rng, na);
        let x = DvbElement::new(a.clone(), sample::vector(rng, nb), sample::vector(rng, nc));
        let y = DvbElement::new(a, sample::vector(rng, nb), sample::vector(rng, nc));
        let z = combine_a(&r, &x, &y).expect("same a");
        let b = sample::vector(rng, nb);
        let u = DvbElement::new(sample::vector(rng, na), b.clone(), sample::vector(rng, nc));
        let v = DvbElement::new(sample::vector(rng, na), b, sample::vector(rng, nc));
        let w = combine_b(&r, &u, &v).expect("same b");
        // fibers go to fibers, and the other two components are linear on them
        for (same, linear, (p, q, s)) in [
            (outs_a.clone(), outs_b.clone().chain(outs_c.clone()), (&x, &y, &z)),
            (outs_b.clone(), outs_a.clone().chain(outs_c.clone()), (&u, &v, &w)),
        ] {
            let (p, q, s) = (p.coords(), q.coords(), s.coords());
            for o in same {
                ans.add_relation(&[(o, one.clone(), p.clone()), (o, minus.clone(), q.clone())]);
                ans.add_relation(&[(o, one.clone(), s.clone()), (o, minus.clone(), p.clone())]);
            }
            for o in linear {
                ans.add_relation(&[
                    (o, one.clone(), s.clone()),
                    (o, -r.clone(), p.clone()),
                    (o, minus.clone(), q.clone()),
                ]);
            }
        }
    }
    let zero = |dom: &Space, cod: &Space| LinMap::zero(dom, cod);
    let ab = src.a.tensor(&src.b);
    let base = DvbMorphism {
        source: src.clone(),
        target: tgt.clone(),
        fa: zero(&src.a, &tgt.a),
        fb: zero(&src.b, &tgt.b),
        fc: zero(&src.c, &tgt.c),
        omega: zero(&ab, &tgt.c),
    };
    let mut family = Vec::new();
    let split = |p: &Vector| DvbElement::new(p.slice(0, na), p.slice(na, nb), p.slice(na + nb, nc));
    let mut push = |m: DvbMorphism| family.push(ans.interpolate(|p| m.apply(&split(p)).expect("member").coords()));
    for (i, j) in (0..ma).flat_map(|i| (0..na).map(move |j| (i, j))) {
        push(DvbMorphism {
            fa: elementary(&src.a, &tgt.a, i, j),
            ..base.clone()
        });
    }
    for (i, j) in (0..mb).flat_map(|i| (0..nb).map(move |j| (i, j))) {
        push(DvbMorphism {
            fb: elementary(&src.b, &tgt.b, i, j),
            ..base.clone()
        });
    }
    for (i, j) in (0..mc).flat_map(|i| (0..nc).map(move |j| (i, j))) {
        push(DvbMorphism {
            fc: elementary(&src.c, &tgt.c, i, j),
            ..base.clone()
        });
    }
    for (i, j) in (0..mc).flat_map(|i| (0..na * nb).map(move |j| (i, j))) {
        push(DvbMorphism {
            omega: elementary(&ab, &tgt.c, i, j),
            ..base.clone()
        });
    }
    CompletenessReport {
        source: src.dims(),
        target: tgt.dims(),
        solution_dim: ans.solution_basis().len(),
        canonical_dim: family.len(),
        equal: ans.solution_space_equals(&family),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_is_complete_in_small_dims() {
        let mut rng = rng_from_seed(41);
        let fixed = [
            ((2, 2, 2), (2, 2, 2)),
            ((1, 1, 1), (1, 1, 1)),
            ((0, 2, 1), (2, 0, 1)),
            ((2, 1, 0), (1, 2, 2)),
        ];
        let random: Vec<_> = (0..12)
            .map(|_| {
                let mut t = || {
                    (
                        sample::dim(&mut rng, 0, 2),
                        sample::dim(&mut rng, 0, 2),
                        sample::dim(&mut rng, 0, 2),
                    )
                };
                (t(), t())
            })
            .collect();
        for (s, t) in fixed.into_iter().chain(random) {
            let src = TrivialDvb::with_dims(s.0, s.1, s.2);
            let tgt = TrivialDvb::with_dims(t.0, t.1, t.2);
            let rep = canonical_form_completeness(&src, &tgt, &mut rng);
            assert!(rep.passed(), "{rep:?}");
        }
    }

    fn one_dim() -> TrivialDvb {
        TrivialDvb::with_dims(1, 1, 1)
    }

    #[test]
    fn combine_a_examples() {
        let d1 = DvbElement::from_ints(&[1], &[3], &[5]);
        let d2 = DvbElement::from_ints(&[1], &[1], &[1]);
        assert_eq!(
            combine_a(&Scalar::from_int(2), &d1, &d2).unwrap(),
            DvbElement::from_ints(&[1], &[7], &[11])
        );
        let zero = one_dim().zero_over_a(&d1.a);
        assert_eq!(combine_a(&Scalar::one(), &d1, &zero).unwrap(), d1);
        assert_eq!(combine_a(&Scalar::zero(), &d1, &d2).unwrap(), d2);
        let off = DvbElement::from_ints(&[2], &[1], &[1]);
        assert!(matches!(
            combine_a(&Scalar::one(), &d1, &off),
            Err(DvbError::FiberMismatch { side: Side::A, .. })
        ));
    }

    #[test]
    fn combine_b_examples() {
        let d1 = DvbElement::from_ints(&[1], &[2], &[0]);
        let d2 = DvbElement::from_ints(&[0], &[2], &[4]);
        assert_eq!(
            combine_b(&Scalar::from_int(3), &d1, &d2).unwrap(),
            DvbElement::from_ints(&[3], &[2], &[4])
        );
        let zero = one_dim().zero_over_b(&d1.b);
        assert_eq!(combine_b(&Scalar::one(), &d1, &zero).unwrap(), d1);
        assert_eq!(combine_b(&Scalar::zero(), &d1, &d2).unwrap(), d2);
        assert!(combine_b(&Scalar::one(), &d1, &DvbElement::from_ints(&[0], &[1], &[0])).is_err());
    }

    #[test]
    fn core_embedding() {
        let d = one_dim();
        assert_eq!(d.core_embed(&Vector::zeros(1)), d.zero());
        assert_eq!(
            d.core_embed(&Vector::from_ints(&[5])),
            DvbElement::from_ints(&[0], &[0], &[5])
        );
        let c = Vector::from_ints(&[2]);
        let c2 = Vector::from_ints(&[-7]);
        let sum = d.core_embed(&c.add(&c2));
        assert_eq!(d.add_a(&d.core_embed(&c), &d.core_embed(&c2)).unwrap(), sum);
        assert_eq!(d.add_b(&d.core_embed(&c), &d.core_embed(&c2)).unwrap(), sum);
        let r = Scalar::new(3, 2);
        assert_eq!(d.scale_a(&r, &d.core_embed(&c)).unwrap(), d.core_embed(&c.scale(&r)));
        assert_eq!(d.scale_b(&r, &d.core_embed(&c)).unwrap(), d.core_embed(&c.scale(&r)));
    }

    #[test]
    fn interchange_holds_for_trivial_model() {
        let mut d = TrivialDvb::with_dims(2, 3, 1);
        let report = check_interchange(&mut d, 100, 11);
        assert!(report.all_passed(), "{report:?}");
        assert!(report.laws.iter().all(|l| l.passed == 100));
        let mut empty = TrivialDvb::with_dims(0, 0, 0);
        assert!(check_interchange(&mut empty, 10, 1).all_passed());
    }

    #[test]
    fn morphism_apply_examples() {
        let d = TrivialDvb::with_dims(2, 1, 2);
        let mut rng = rng_from_seed(4);
        let x = d.random_element(&mut rng);
        assert_eq!(DvbMorphism::identity(&d).apply(&x).unwrap(), x);

        let one = one_dim();
        let s = |x: i64| LinMap::scalar(&Space::new("X", 1), &Scalar::from_int(x));
        let phi = DvbMorphism::new(one.clone(), one.clone(), s(1), s(2), s(3), s(4)).unwrap();
        assert_eq!(
            phi.apply(&DvbElement::from_ints(&[1], &[1], &[1])).unwrap(),
            DvbElement::from_ints(&[1], &[2], &[7])
        );
        let c = Vector::from_ints(&[5]);
        assert_eq!(
            phi.apply(&one.core_embed(&c)).unwrap(),
            one.core_embed(&phi.fc.apply(&c))
        );
        assert!(phi.apply(&DvbElement::from_ints(&[1, 2], &[1], &[1])).is_err());
    }

    #[test]
    fn morphism_compose_examples() {
        let one = one_dim();
        let s = |x: i64| LinMap::scalar(&Space::new("X", 1), &Scalar::from_int(x));
        let outer = DvbMorphism::new(one.clone(), one.clone(), s(1), s(2), s(3), s(4)).unwrap();
        let inner = DvbMorphism::new(one.clone(), one.clone(), s(1), s(1), s(1), s(0)).unwrap();
        let comp = outer.compose(&inner).unwrap();
        assert_eq!(comp.omega.matrix().get(0, 0), &Scalar::from_int(4));
        assert!(outer.compose(&DvbMorphism::identity(&one)).unwrap().same_as(&outer));
        assert!(DvbMorphism::identity(&one).compose(&outer).unwrap().same_as(&outer));
        let two = TrivialDvb::with_dims(2, 1, 1);
        assert!(outer.compose(&DvbMorphism::identity(&two)).is_err());
    }

    #[test]
    fn inverse_morphism() {
        let mut rng = rng_from_seed(9);
        let d = TrivialDvb::with_dims(2, 2, 1);
        let mut phi = DvbMorphism::random(&mut rng, &d, &d);
        phi.fa = sample::invertible_map(&mut rng, &d.a);
        phi.fb = sample::invertible_map(&mut rng, &d.b);
        phi.fc = sample::invertible_map(&mut rng, &d.c);
        let inv = phi.inverse().unwrap();
        assert!(inv.compose(&phi).unwrap().same_as(&DvbMorphism::identity(&d)));
        assert!(phi.compose(&inv).unwrap().same_as(&DvbMorphism::identity(&d)));
    }

    #[test]
    fn probe_recovers_canonical_form() {
        let mut rng = rng_from_seed(12);
        let d = TrivialDvb::with_dims(2, 2, 1);
        let t = TrivialDvb::with_dims(1, 2, 2);
        let phi = DvbMorphism::random(&mut rng, &d, &t);
        let probed = DvbMorphism::probe(&d, &t, |x| phi.apply(x).unwrap());
        assert!(probed.same_as(&phi));
        let samples: Vec<_> = (0..5).map(|_| d.random_element(&mut rng)).collect();
        assert!(probed.agrees_with(|x| phi.apply(x).unwrap(), &samples));
        // a map with an extra a⊗a term is not canonical
        let bent = |x: &DvbElement| {
            let mut y = phi.apply(x).unwrap();
            y.c[0] += &(&x.a[0] * &x.a[1]);
            y
        };
        assert!(!DvbMorphism::probe(&d, &t, bent).agrees_with(bent, &samples));
    }

    #[test]
    fn fiber_helpers() {
        let d = TrivialDvb::with_dims(2, 1, 2);
        let a = Vector::from_ints(&[1, 2]);
        let basis = d.fiber_basis(Side::A, &a);
        assert_eq!(basis.len(), 3);
        assert!(basis.iter().all(|e| e.a == a));
        let x = DvbElement::from_ints(&[1, 2], &[3], &[4, 5]);
        let coords = d.fiber_coords(Side::A, &x);
        assert_eq!(d.from_fiber_coords(Side::A, &a, &coords), x);
        let coords = d.fiber_coords(Side::B, &x);
        assert_eq!(d.from_fiber_coords(Side::B, &x.b, &coords), x);
    }
}
