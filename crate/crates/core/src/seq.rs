//! Short exact sequences `0 → L →ᵉ M →ᵖ R → 0` and their two tagged forms:
//! DVB sequences `0 → C → Ω → A⊗B → 0` and DVB* sequences
//! `0 → U⊗V → Π → K → 0`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{right_inverse, tensor_map, LinMap, Matrix, Scalar, Space};
use crate::sample;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence is not exact: {0}")]
    NotExact(ExactnessReport),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Verdicts of the exactness certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub e_injective: bool,
    pub p_surjective: bool,
    pub composite_zero: bool,
    pub ranks_add_up: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.e_injective && self.p_surjective && self.composite_zero && self.ranks_add_up
    }
}

impl fmt::Display for ExactnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e injective: {}, p surjective: {}, p∘e = 0: {}, rank sum = dim mid: {}",
            self.e_injective, self.p_surjective, self.composite_zero, self.ranks_add_up
        )
    }
}

/// Certifies exactness of `e` followed by `p` by rank computations.
pub fn check_exact(e: &LinMap, p: &LinMap) -> ExactnessReport {
    let shapes_ok = e.codomain().dim == p.domain().dim;
    let re = e.rank();
    let rp = p.rank();
    ExactnessReport {
        e_injective: re == e.domain().dim,
        p_surjective: rp == p.codomain().dim,
        composite_zero: shapes_ok && p.compose(e).is_zero(),
        ranks_add_up: shapes_ok && re + rp == e.codomain().dim,
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortExactSeq {
    e: LinMap,
    p: LinMap,
}

impl fmt::Debug for ShortExactSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "0 → {:?} → {:?} → {:?} → 0 (e = {:?}, p = {:?})",
            self.left(),
            self.mid(),
            self.right(),
            self.e.matrix(),
            self.p.matrix()
        )
    }
}

impl ShortExactSeq {
    pub fn new(e: LinMap, p: LinMap) -> Result<Self, SeqError> {
        if e.codomain().dim != p.domain().dim {
            return Err(SeqError::Shape(format!(
                "e lands in {:?} but p starts at {:?}",
                e.codomain(),
                p.domain()
            )));
        }
        let report = check_exact(&e, &p);
        if !report.is_exact() {
            return Err(SeqError::NotExact(report));
        }
        Ok(ShortExactSeq { e, p })
    }

    /// `0 → L → L ⊕ R → R → 0` with the coordinate inclusion and projection.
    pub fn split(left: &Space, right: &Space) -> Self {
        let mid = left.direct_sum(right);
        let (dl, dr) = (left.dim, right.dim);
        let e = Matrix::identity(dl).vstack(&Matrix::zeros(dr, dl));
        let p = Matrix::zeros(dr, dl).hstack(&Matrix::identity(dr));
        ShortExactSeq::new(
            LinMap::new(left.clone(), mid.clone(), e).expect("inclusion shape"),
            LinMap::new(mid, right.clone(), p).expect("projection shape"),
        )
        .expect("split sequence is exact")
    }

    pub fn left(&self) -> &Space {
        self.e.domain()
    }

    pub fn mid(&self) -> &Space {
        self.e.codomain()
    }

    pub fn right(&self) -> &Space {
        self.p.codomain()
    }

    pub fn e(&self) -> &LinMap {
        &self.e
    }

    pub fn p(&self) -> &LinMap {
        &self.p
    }

    pub fn report(&self) -> ExactnessReport {
        check_exact(&self.e, &self.p)
    }

    /// Deterministic section `s` of `p`.
    pub fn section(&self) -> LinMap {
        right_inverse(&self.p).expect("p is surjective")
    }

    /// The retraction `l` of `e` complementary to [`Self::section`]:
    /// `l∘e = id`, `l∘s = 0`, and `e∘l + s∘p = id`.
    pub fn retraction(&self) -> LinMap {
        let inv = self.splitting_inverse();
        let dl = self.left().dim;
        let rows: Vec<_> = (0..dl).map(|i| inv.row(i)).collect();
        LinMap::new(
            self.mid().clone(),
            self.left().clone(),
            Matrix::from_row_vectors(&rows, self.mid().dim),
        )
        .expect("retraction shape")
    }

    /// Inverse of the splitting isomorphism `[e | s]: L ⊕ R → M`.
    fn splitting_inverse(&self) -> Matrix {
        self.e
            .matrix()
            .hstack(self.section().matrix())
            .inverse()
            .expect("splitting of an exact sequence is invertible")
    }

    /// The splitting isomorphism `[e | s]: L ⊕ R → M`.
    pub fn splitting(&self) -> LinMap {
        self.e.hstack(&self.section())
    }

    /// Same maps with relabelled outer spaces.
    pub fn relabel(&self, left: Space, right: Space) -> ShortExactSeq {
        let mid = self.mid().clone();
        ShortExactSeq {
            e: self.e.with_spaces(left, mid.clone()),
            p: self.p.with_spaces(mid, right),
        }
    }
}

/// The unique mid-space map `Φ` with `Φ∘e₁ = e₂∘left` and `p₂∘Φ = right∘p₁`
/// that sends the section of `seq1` into the section of `seq2`:
/// `Φ = [e₂∘left | s₂∘right] ∘ [e₁ | s₁]⁻¹`.
pub fn ladder_map(seq1: &ShortExactSeq, seq2: &ShortExactSeq, left: &LinMap, right: &LinMap) -> LinMap {
    let top = seq2.e().compose(left).hstack(&seq2.section().compose(right));
    let inv = seq1.splitting_inverse();
    LinMap::new(seq1.mid().clone(), seq2.mid().clone(), top.matrix().mul(&inv)).expect("ladder shape")
}

/// Both squares of a ladder `L → M → R` over `L' → M' → R'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderReport {
    pub left_square: bool,
    pub right_square: bool,
}

impl LadderReport {
    pub fn commutes(&self) -> bool {
        self.left_square && self.right_square
    }
}

pub fn check_ladder(
    seq1: &ShortExactSeq,
    seq2: &ShortExactSeq,
    left: &LinMap,
    mid: &LinMap,
    right: &LinMap,
) -> LadderReport {
    LadderReport {
        left_square: mid.compose(seq1.e()).matrix() == seq2.e().compose(left).matrix(),
        right_square: seq2.p().compose(mid).matrix() == right.compose(seq1.p()).matrix(),
    }
}

/// `0 → C →ᵉ Ω →ᵖ A⊗B → 0`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DvbSeq {
    pub seq: ShortExactSeq,
    pub a: Space,
    pub b: Space,
    pub c: Space,
}

impl fmt::Debug for DvbSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DvbSeq[A={}, B={}, C={}] {:?}",
            self.a.dim, self.b.dim, self.c.dim, self.seq
        )
    }
}

impl DvbSeq {
    pub fn new(a: Space, b: Space, c: Space, e: LinMap, p: LinMap) -> Result<Self, SeqError> {
        if e.domain().dim != c.dim || p.codomain().dim != a.dim * b.dim {
            return Err(SeqError::Shape(format!(
                "expected C[{}] → Ω → A⊗B[{}], got {:?} → {:?}",
                c.dim,
                a.dim * b.dim,
                e.domain(),
                p.codomain()
            )));
        }
        let ab = a.tensor(&b);
        let mid = e.codomain().clone();
        let seq = ShortExactSeq::new(e.with_spaces(c.clone(), mid.clone()), p.with_spaces(mid, ab))?;
        Ok(DvbSeq { seq, a, b, c })
    }

    pub fn from_seq(a: Space, b: Space, c: Space, seq: ShortExactSeq) -> Result<Self, SeqError> {
        let (e, p) = (seq.e().clone(), seq.p().clone());
        DvbSeq::new(a, b, c, e, p)
    }

    pub fn with_dims(da: usize, db: usize, dc: usize) -> (Space, Space, Space) {
        (Space::new("A", da), Space::new("B", db), Space::new("C", dc))
    }

    /// `Ω = C ⊕ A⊗B` with the coordinate maps.
    pub fn split(a: &Space, b: &Space, c: &Space) -> Self {
        let seq = ShortExactSeq::split(c, &a.tensor(b));
        let seq = ShortExactSeq::new(
            seq.e().with_spaces(c.clone(), Space::new("Ω", seq.mid().dim)),
            seq.p().with_spaces(Space::new("Ω", seq.mid().dim), a.tensor(b)),
        )
        .expect("split sequence is exact");
        DvbSeq {
            seq,
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
        }
    }

    /// The split sequence twisted by a random automorphism `T` of
    /// `C ⊕ A⊗B`: `e = T∘incl`, `p = proj∘T⁻¹`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize, dc: usize) -> Self {
        let (a, b, c) = DvbSeq::with_dims(da, db, dc);
        let split = DvbSeq::split(&a, &b, &c);
        let mid = split.omega().clone();
        let t = sample::invertible_matrix(rng, mid.dim);
        let t_inv = t.inverse().expect("sampled invertible");
        let e = LinMap::new(c.clone(), mid.clone(), t.mul(split.e().matrix())).expect("e shape");
        let p = LinMap::new(mid, a.tensor(&b), split.p().matrix().mul(&t_inv)).expect("p shape");
        DvbSeq::new(a, b, c, e, p).expect("twisted split sequence is exact")
    }

    pub fn omega(&self) -> &Space {
        self.seq.mid()
    }

    pub fn e(&self) -> &LinMap {
        self.seq.e()
    }

    pub fn p(&self) -> &LinMap {
        self.seq.p()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.dim, self.b.dim, self.c.dim)
    }
}

/// `0 → U⊗V →ⁱ Π →ʲ K → 0`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DvbStarSeq {
    pub seq: ShortExactSeq,
    pub u: Space,
    pub v: Space,
    pub k: Space,
}

impl fmt::Debug for DvbStarSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DvbStarSeq[U={}, V={}, K={}] {:?}",
            self.u.dim, self.v.dim, self.k.dim, self.seq
        )
    }
}

impl DvbStarSeq {
    pub fn new(u: Space, v: Space, k: Space, i: LinMap, j: LinMap) -> Result<Self, SeqError> {
        if i.domain().dim != u.dim * v.dim || j.codomain().dim != k.dim {
            return Err(SeqError::Shape(format!(
                "expected U⊗V[{}] → Π → K[{}], got {:?} → {:?}",
                u.dim * v.dim,
                k.dim,
                i.domain(),
                j.codomain()
            )));
        }
        let mid = i.codomain().clone();
        let seq = ShortExactSeq::new(i.with_spaces(u.tensor(&v), mid.clone()), j.with_spaces(mid, k.clone()))?;
        Ok(DvbStarSeq { seq, u, v, k })
    }

    pub fn split(u: &Space, v: &Space, k: &Space) -> Self {
        let seq = ShortExactSeq::split(&u.tensor(v), k);
        let (i, j) = (seq.e().clone(), seq.p().clone());
        DvbStarSeq::new(u.clone(), v.clone(), k.clone(), i, j).expect("split sequence is exact")
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, du: usize, dv: usize, dk: usize) -> Self {
        let (u, v, k) = (Space::new("U", du), Space::new("V", dv), Space::new("K", dk));
        let split = DvbStarSeq::split(&u, &v, &k);
        let n = split.pi().dim;
        let t = sample::invertible_matrix(rng, n);
        let t_inv = t.inverse().expect("sampled invertible");
        let pi = Space::new("Π", n);
        let i = LinMap::new(u.tensor(&v), pi.clone(), t.mul(split.i().matrix())).expect("i shape");
        let j = LinMap::new(pi, k.clone(), split.j().matrix().mul(&t_inv)).expect("j shape");
        DvbStarSeq::new(u, v, k, i, j).expect("twisted split sequence is exact")
    }

    pub fn pi(&self) -> &Space {
        self.seq.mid()
    }

    pub fn i(&self) -> &LinMap {
        self.seq.e()
    }

    pub fn j(&self) -> &LinMap {
        self.seq.p()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.u.dim, self.v.dim, self.k.dim)
    }

    /// Mid-space dimension forced by exactness.
    pub fn expected_mid_dim(&self) -> usize {
        self.u.dim * self.v.dim + self.k.dim
    }
}

/// A morphism of DVB sequences. `ϖ` runs from the source mid-space to the
/// target mid-space, so that `[d] ↦ [φ(d)]` is covariant.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqMorphism {
    pub source: DvbSeq,
    pub target: DvbSeq,
    pub varpi: LinMap,
    pub fa: LinMap,
    pub fb: LinMap,
    pub fc: LinMap,
}

impl fmt::Debug for SeqMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeqMorphism")
            .field("varpi", self.varpi.matrix())
            .field("fa", self.fa.matrix())
            .field("fb", self.fb.matrix())
            .field("fc", self.fc.matrix())
            .finish()
    }
}

impl SeqMorphism {
    pub fn identity(s: &DvbSeq) -> Self {
        SeqMorphism {
            source: s.clone(),
            target: s.clone(),
            varpi: LinMap::identity(s.omega()),
            fa: LinMap::identity(&s.a),
            fb: LinMap::identity(&s.b),
            fc: LinMap::identity(&s.c),
        }
    }

    /// A random morphism: arbitrary side and core maps plus a random
    /// correction `ω: A⊗B → C'` on the section,
    /// `ϖ = [e'∘f_C | s'∘(f_A⊗f_B) + e'∘ω] ∘ [e | s]⁻¹`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, source: &DvbSeq, target: &DvbSeq) -> Self {
        let fa = sample::linmap(rng, &source.a, &target.a);
        let fb = sample::linmap(rng, &source.b, &target.b);
        let fc = sample::linmap(rng, &source.c, &target.c);
        let omega = sample::linmap(rng, &source.a.tensor(&source.b), &target.c);
        let right = target
            .seq
            .section()
            .compose(&tensor_map(&fa, &fb))
            .add(&target.e().compose(&omega));
        let top = target.e().compose(&fc).hstack(&right);
        let inv = source.seq.splitting_inverse();
        let varpi =
            LinMap::new(source.omega().clone(), target.omega().clone(), top.matrix().mul(&inv)).expect("ϖ shape");
        SeqMorphism {
            source: source.clone(),
            target: target.clone(),
            varpi,
            fa,
            fb,
            fc,
        }
    }

    /// `ϖ∘e = e'∘f_C` and `p'∘ϖ = (f_A⊗f_B)∘p`.
    pub fn check(&self) -> LadderReport {
        check_ladder(
            &self.source.seq,
            &self.target.seq,
            &self.fc,
            &self.varpi,
            &tensor_map(&self.fa, &self.fb),
        )
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SeqMorphism) -> SeqMorphism {
        SeqMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            varpi: self.varpi.compose(&inner.varpi),
            fa: self.fa.compose(&inner.fa),
            fb: self.fb.compose(&inner.fb),
            fc: self.fc.compose(&inner.fc),
        }
    }

    pub fn same_as(&self, other: &SeqMorphism) -> bool {
        self.varpi.matrix() == other.varpi.matrix()
            && self.fa.matrix() == other.fa.matrix()
            && self.fb.matrix() == other.fb.matrix()
            && self.fc.matrix() == other.fc.matrix()
    }

    pub fn scaled_varpi(&self, r: &Scalar) -> SeqMorphism {
        SeqMorphism {
            varpi: self.varpi.scale(r),
            ..self.clone()
        }
    }
}

/// On-disk form of a DVB sequence: dimensions plus the two matrices as rows
/// of rational strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeqFile {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "C")]
    pub c: usize,
    pub e: Matrix,
    pub p: Matrix,
}

impl SeqFile {
    pub fn from_seq(s: &DvbSeq) -> Self {
        SeqFile {
            a: s.a.dim,
            b: s.b.dim,
            c: s.c.dim,
            e: s.e().matrix().clone(),
            p: s.p().matrix().clone(),
        }
    }

    /// Rebuilds the sequence, re-certifying exactness.
    pub fn to_seq(&self) -> Result<DvbSeq, SeqError> {
        let n = self.a * self.b + self.c;
        let shape_err = |name: &str, m: &Matrix| SeqError::Shape(format!("{name} has shape {}x{}", m.rows(), m.cols()));
        let mid_dim = if self.e.rows() > 0 {
            self.e.rows()
        } else {
            self.p.cols().max(n)
        };
        let e = self
            .e
            .clone()
            .with_shape(mid_dim, self.c)
            .ok_or_else(|| shape_err("e", &self.e))?;
        let p = self
            .p
            .clone()
            .with_shape(self.a * self.b, mid_dim)
            .ok_or_else(|| shape_err("p", &self.p))?;
        let (a, b, c) = DvbSeq::with_dims(self.a, self.b, self.c);
        let omega = Space::new("Ω", mid_dim);
        DvbSeq::new(
            a.clone(),
            b.clone(),
            c.clone(),
            LinMap::new(c, omega.clone(), e).map_err(|err| SeqError::Shape(err.to_string()))?,
            LinMap::new(omega, a.tensor(&b), p).map_err(|err| SeqError::Shape(err.to_string()))?,
        )
    }
}
