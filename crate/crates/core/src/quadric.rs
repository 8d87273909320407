//! Lines on the incidence quadric `{x·y = 0} ⊂ P^3 × P^3`, real lines for the
//! antipodal structure `σ`, the quaternionic reduction of their equations and
//! the flat split-signature metric on `C^4 × C^4`.
//!
//! `σ(z) = (-conj z1, conj z0, -conj z3, conj z2)`, so `σ² = -1`.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{rank_of_vectors, ExactMatrix};
use crate::quaternion::{Quaternion, QuaternionValue};
use crate::scalar::{ConjRing, Gq};
use crate::sym::{same_poly_span, CPoly, RealPoly};

type Q = QuaternionValue;

pub fn dot<S: ConjRing>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sigma<S: ConjRing>(z: &[S]) -> Vec<S> {
    z.chunks(2)
        .flat_map(|p| [-p[1].conj(), p[0].conj()])
        .collect()
}

fn check_len(v: &[Gq], n: usize, what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!("{what} has {} entries, expected {n}", v.len())));
    }
    Ok(())
}

fn add_scaled(a: &[Gq], b: &[Gq], z: &Gq) -> Vec<Gq> {
    a.iter().zip(b).map(|(x, y)| x + &(y * z)).collect()
}

// ---------------------------------------------------------------- lines

/// The line `ζ ↦ ([a + ζb], [c + ζd])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricLine {
    pub a: Vec<Gq>,
    pub b: Vec<Gq>,
    pub c: Vec<Gq>,
    pub d: Vec<Gq>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineDiagnostics {
    pub ab_independent: bool,
    pub cd_independent: bool,
    pub ac_zero: bool,
    pub bd_zero: bool,
    pub ad_plus_bc_zero: bool,
}

impl LineDiagnostics {
    pub fn valid(&self) -> bool {
        self.ab_independent && self.cd_independent && self.ac_zero && self.bd_zero && self.ad_plus_bc_zero
    }
}

/// Normal bundle type of a line in the quadric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineClass {
    /// `O(2) ⊕ O ⊕ O(1)²`
    Degenerate,
    /// `O(1)⁴`
    Generic,
}

impl LineClass {
    pub fn normal_degrees(self) -> [i64; 4] {
        match self {
            Self::Degenerate => [2, 1, 1, 0],
            Self::Generic => [1, 1, 1, 1],
        }
    }
}

impl QuadricLine {
    pub fn new(a: Vec<Gq>, b: Vec<Gq>, c: Vec<Gq>, d: Vec<Gq>) -> Result<Self> {
        for (v, name) in [(&a, "a"), (&b, "b"), (&c, "c"), (&d, "d")] {
            check_len(v, 4, name)?;
        }
        Ok(Self { a, b, c, d })
    }

    pub fn validate(&self) -> LineDiagnostics {
        let ad_bc = dot(&self.a, &self.d) + dot(&self.b, &self.c);
        LineDiagnostics {
            ab_independent: rank_of_vectors(&[self.a.clone(), self.b.clone()]) == 2,
            cd_independent: rank_of_vectors(&[self.c.clone(), self.d.clone()]) == 2,
            ac_zero: dot(&self.a, &self.c).is_zero(),
            bd_zero: dot(&self.b, &self.d).is_zero(),
            ad_plus_bc_zero: ad_bc.is_zero(),
        }
    }

    pub fn classify(&self) -> Result<LineClass> {
        let diag = self.validate();
        if !diag.valid() {
            return Err(Error::Invalid(format!("not a line on the quadric: {diag:?}")));
        }
        Ok(if dot(&self.a, &self.d).is_zero() {
            LineClass::Degenerate
        } else {
            LineClass::Generic
        })
    }

    /// The point at parameter `ζ`.
    pub fn point(&self, zeta: &Gq) -> ProjPoint {
        ProjPoint {
            x: add_scaled(&self.a, &self.b, zeta),
            y: add_scaled(&self.c, &self.d, zeta),
        }
    }
}

pub fn line_validate(line: &QuadricLine) -> LineDiagnostics {
    line.validate()
}

pub fn classify_line(line: &QuadricLine) -> Result<LineClass> {
    line.classify()
}

/// `(x, y)` spanning the real line `([x + ζσx], [y + ζσy])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealLineData {
    pub x: Vec<Gq>,
    pub y: Vec<Gq>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealConditions {
    pub x_dot_y_zero: bool,
    pub mixed_zero: bool,
    pub x_sigma_y_zero: bool,
}

impl RealLineData {
    pub fn new(x: Vec<Gq>, y: Vec<Gq>) -> Result<Self> {
        check_len(&x, 4, "x")?;
        check_len(&y, 4, "y")?;
        Ok(Self { x, y })
    }

    pub fn conditions(&self) -> RealConditions {
        let xsy = dot(&self.x, &sigma(&self.y));
        let sxy = dot(&sigma(&self.x), &self.y);
        RealConditions {
            x_dot_y_zero: dot(&self.x, &self.y).is_zero(),
            mixed_zero: (&xsy + &sxy).is_zero(),
            x_sigma_y_zero: xsy.is_zero(),
        }
    }

    pub fn is_real_line(&self) -> bool {
        let c = self.conditions();
        c.x_dot_y_zero && c.mixed_zero
    }

    pub fn line(&self) -> Result<QuadricLine> {
        let c = self.conditions();
        if !(c.x_dot_y_zero && c.mixed_zero) {
            return Err(Error::Invalid(format!("real line conditions fail: {c:?}")));
        }
        if self.x.iter().all(Gq::is_zero) || self.y.iter().all(Gq::is_zero) {
            return Err(Error::Invalid("x and y must be nonzero".into()));
        }
        QuadricLine::new(self.x.clone(), sigma(&self.x), self.y.clone(), sigma(&self.y))
    }

    /// Real line inside the locus `X∞`.
    pub fn is_x_infinity(&self) -> bool {
        let c = self.conditions();
        c.x_dot_y_zero && c.mixed_zero && c.x_sigma_y_zero
    }
}

pub fn real_line(x: &[Gq], y: &[Gq]) -> Result<QuadricLine> {
    RealLineData::new(x.to_vec(), y.to_vec())?.line()
}

pub fn is_x_infinity_line(data: &RealLineData) -> bool {
    data.is_x_infinity()
}

// ---------------------------------------------------------------- points

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjPoint {
    pub x: Vec<Gq>,
    pub y: Vec<Gq>,
}

fn proportional(v: &[Gq], w: &[Gq]) -> bool {
    let vz = v.iter().all(Gq::is_zero);
    let wz = w.iter().all(Gq::is_zero);
    if vz || wz {
        return vz == wz;
    }
    rank_of_vectors(&[v.to_vec(), w.to_vec()]) == 1
}

impl ProjPoint {
    pub fn on_quadric(&self) -> bool {
        dot(&self.x, &self.y).is_zero()
    }

    pub fn same_as(&self, other: &Self) -> bool {
        proportional(&self.x, &other.x) && proportional(&self.y, &other.y)
    }
}

/// `τ([x],[y]) = ([σx],[σy])`.
pub fn tau_point(p: &ProjPoint) -> ProjPoint {
    ProjPoint {
        x: sigma(&p.x),
        y: sigma(&p.y),
    }
}

/// The antipodal map `ζ ↦ -1/conj(ζ)` matching `τ` on real lines.
pub fn antipodal(zeta: &Gq) -> Option<Gq> {
    zeta.conj().inv().map(|z| -z)
}

// ---------------------------------------------------------------- quaternionic form

/// `(q0, q1, p0, p1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuatTuple {
    pub q0: Q,
    pub q1: Q,
    pub p0: Q,
    pub p1: Q,
}

impl QuatTuple {
    pub fn new(q0: Q, q1: Q, p0: Q, p1: Q) -> Self {
        Self { q0, q1, p0, p1 }
    }

    /// `q0·p0 + q1·p1`.
    pub fn product(&self) -> Q {
        self.q0.mul_ref(&self.p0) + self.q1.mul_ref(&self.p1)
    }

    pub fn is_x_infinity(&self) -> bool {
        self.product().is_zero()
    }

    /// `(q0, q1, r·p0, r·p1)`.
    pub fn scale_p(&self, r: &BigRational) -> Self {
        Self::new(self.q0.clone(), self.q1.clone(), self.p0.scale(r), self.p1.scale(r))
    }
}

pub fn is_x_infinity(t: &QuatTuple) -> bool {
    t.is_x_infinity()
}

/// One identification of `(x, y) ∈ C^4 × C^4` with quaternion tuples.
///
/// The low four bits act on `(q0, q1)`, the high four on `(p0, p1)`; within a
/// nibble the bits are: swap the coordinate pair, conjugate the complex part,
/// conjugate the `j` part, negate the `j` part. Bits are relative to the
/// printed rule `q0 = x0 + x1·j`, `p0 = y0 - j·y1`, which is id 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionId(pub u8);

/// Absolute flags of the printed rule: `-j·y1 = -conj(y1)·j`.
const PRINTED_Q: u8 = 0b0000;
const PRINTED_P: u8 = 0b1100;

fn pair_to_quat<S: ConjRing>(u: &S, v: &S, flags: u8) -> Quaternion<S> {
    let (u, v) = if flags & 1 != 0 { (v, u) } else { (u, v) };
    let a = if flags & 2 != 0 { u.conj() } else { u.clone() };
    let mut b = if flags & 4 != 0 { v.conj() } else { v.clone() };
    if flags & 8 != 0 {
        b = -b;
    }
    Quaternion::new(a, b)
}

impl ConventionId {
    pub const PRINTED: Self = Self(0);

    fn flags(self) -> (u8, u8) {
        ((self.0 & 0xF) ^ PRINTED_Q, (self.0 >> 4) ^ PRINTED_P)
    }

    pub fn build<S: ConjRing>(self, x: &[S], y: &[S]) -> [Quaternion<S>; 4] {
        let (fq, fp) = self.flags();
        [
            pair_to_quat(&x[0], &x[1], fq),
            pair_to_quat(&x[2], &x[3], fq),
            pair_to_quat(&y[0], &y[1], fp),
            pair_to_quat(&y[2], &y[3], fp),
        ]
    }

    pub fn tuple(self, x: &[Gq], y: &[Gq]) -> Result<QuatTuple> {
        check_len(x, 4, "x")?;
        check_len(y, 4, "y")?;
        let [q0, q1, p0, p1] = self.build(x, y);
        Ok(QuatTuple::new(q0, q1, p0, p1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConventionVerdict {
    pub id: u8,
    /// `Im_H = 0` cuts out exactly the real-line conditions.
    pub im_h_equivalence: bool,
    /// Scalar part as a rational multiple of `x·σy - σx·y`.
    pub scalar_multiple: Option<String>,
}

impl ConventionVerdict {
    pub fn certified(&self) -> bool {
        self.im_h_equivalence && self.scalar_multiple.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub variants_checked: usize,
    pub certified_count: usize,
    pub certified: Option<ConventionVerdict>,
    pub printed: ConventionVerdict,
}

impl CertificationReport {
    pub fn certified_id(&self) -> Result<ConventionId> {
        self.certified
            .as_ref()
            .map(|v| ConventionId(v.id))
            .ok_or_else(|| Error::Uncertified("no quaternionic identification passes".into()))
    }
}

struct SymbolicTargets {
    x: Vec<CPoly>,
    y: Vec<CPoly>,
    conditions: Vec<RealPoly>,
    cut: RealPoly,
}

fn symbolic_targets() -> SymbolicTargets {
    let (x, y) = symbolic_point();
    let xy = dot(&x, &y);
    let xsy = dot(&x, &sigma(&y));
    let sxy = dot(&sigma(&x), &y);
    let mixed = xsy.clone() + sxy.clone();
    let cut = xsy - sxy;
    debug_assert!(cut.im.is_zero());
    SymbolicTargets {
        conditions: vec![xy.re, xy.im, mixed.re, mixed.im],
        cut: cut.re,
        x,
        y,
    }
}

fn verdict(id: ConventionId, t: &SymbolicTargets) -> ConventionVerdict {
    let [q0, q1, p0, p1] = id.build(&t.x, &t.y);
    let prod = q0 * p0 + q1 * p1;
    let im_h = [prod.a.im.clone(), prod.b.re.clone(), prod.b.im.clone()];
    ConventionVerdict {
        id: id.0,
        im_h_equivalence: same_poly_span(&im_h, &t.conditions),
        scalar_multiple: prod
            .a
            .re
            .ratio_to(&t.cut)
            .filter(|l| !l.is_zero())
            .map(|l| l.to_string()),
    }
}

/// Exhaustive symbolic check of all 256 identifications.
pub fn certify_conventions() -> CertificationReport {
    let t = symbolic_targets();
    let verdicts: Vec<ConventionVerdict> = (0..=255u8).map(|i| verdict(ConventionId(i), &t)).collect();
    let certified_count = verdicts.iter().filter(|v| v.certified()).count();
    CertificationReport {
        variants_checked: verdicts.len(),
        certified_count,
        certified: verdicts.iter().find(|v| v.certified()).cloned(),
        printed: verdicts[0].clone(),
    }
}

/// Cached certification; computed once per process.
pub fn certification() -> &'static CertificationReport {
    static CELL: OnceLock<CertificationReport> = OnceLock::new();
    CELL.get_or_init(certify_conventions)
}

pub fn certify_convention() -> Result<ConventionId> {
    certification().certified_id()
}

// ---------------------------------------------------------------- action and fibration

/// `(u·q0, u·q1, p0·u⁻¹, p1·u⁻¹)`.
pub fn h_action(u: &Q, t: &QuatTuple) -> Result<QuatTuple> {
    let inv = u
        .inv()
        .ok_or_else(|| Error::DivisionByZero("quaternion acting must be nonzero".into()))?;
    Ok(QuatTuple::new(
        u.mul_ref(&t.q0),
        u.mul_ref(&t.q1),
        t.p0.mul_ref(&inv),
        t.p1.mul_ref(&inv),
    ))
}

/// A point of `HP^1` in the affine chart, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HPoint {
    Finite(Q),
    Infinity,
}

/// `(q1⁻¹·q0, p1·p0⁻¹)`.
pub fn fibration(t: &QuatTuple) -> Result<(HPoint, HPoint)> {
    if t.q0.is_zero() && t.q1.is_zero() {
        return Err(Error::Invalid("q pair is zero".into()));
    }
    if t.p0.is_zero() && t.p1.is_zero() {
        return Err(Error::Invalid("p pair is zero".into()));
    }
    let first = match t.q1.inv() {
        Some(inv) => HPoint::Finite(inv.mul_ref(&t.q0)),
        None => HPoint::Infinity,
    };
    let second = match t.p0.inv() {
        Some(inv) => HPoint::Finite(t.p1.mul_ref(&inv)),
        None => HPoint::Infinity,
    };
    Ok((first, second))
}

/// `t2 = (u·q, r·p·u⁻¹)`: the quaternion `u` acts as in [`h_action`] and the
/// real scalar `r` rescales the `p` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitWitness {
    pub u: Q,
    pub r: String,
}

fn ratio_right(num: &Q, den: &Q) -> Option<Q> {
    den.inv().map(|inv| num.mul_ref(&inv))
}

pub fn orbit_equivalent(t1: &QuatTuple, t2: &QuatTuple) -> Result<Option<OrbitWitness>> {
    if t1.is_x_infinity() || t2.is_x_infinity() {
        return Err(Error::Invalid("orbit comparison needs tuples off X∞".into()));
    }
    if fibration(t1)? != fibration(t2)? {
        return Ok(None);
    }
    let u = ratio_right(&t2.q1, &t1.q1)
        .or_else(|| ratio_right(&t2.q0, &t1.q0))
        .expect("q pair is nonzero");
    if u.is_zero() {
        return Ok(None);
    }
    let moved = h_action(&u, t1)?;
    if moved.q0 != t2.q0 || moved.q1 != t2.q1 {
        return Ok(None);
    }
    // t2.p = r·moved.p
    let r = ratio_right(&t2.p0, &moved.p0)
        .or_else(|| ratio_right(&t2.p1, &moved.p1))
        .expect("p pair is nonzero");
    if !r.is_real() || r.is_zero() {
        return Ok(None);
    }
    let r = r.re();
    if moved.scale_p(&r) != *t2 {
        return Ok(None);
    }
    Ok(Some(OrbitWitness { u, r: r.to_string() }))
}

/// Real rank of `(q0, q1) ↦ Im_H(q0·p0 + q1·p1)` on `H^2 = R^8`.
pub fn im_h_equation_rank(p0: &Q, p1: &Q) -> usize {
    let units = [Q::one(), Q::i(), Q::j(), Q::k()];
    let cols: Vec<Vec<Gq>> = (0..8)
        .map(|b| {
            let (q0, q1) = if b < 4 {
                (units[b].clone(), Q::zero())
            } else {
                (Q::zero(), units[b - 4].clone())
            };
            let v = q0.mul_ref(p0) + q1.mul_ref(p1);
            v.im_h().into_iter().map(Gq::real).collect()
        })
        .collect();
    rank_of_vectors(&cols)
}

// ---------------------------------------------------------------- metric

/// Tangent vectors `(ξ, υ) ∈ C^4 × C^4` as eight complex entries.
pub type TangentVector = Vec<Gq>;

/// `2·g(v, w)` before taking the real part.
fn metric_complex<S: ConjRing>(v: &[S], w: &[S]) -> S {
    let t = |a: &S, b: &S| a.clone() * b.conj();
    let mut s = S::zero();
    for k in [0usize, 2] {
        let (x0, x1, y0, y1) = (k, k + 1, 4 + k, 5 + k);
        s = s + t(&v[x1], &w[y0]) + t(&w[x1], &v[y0]) - t(&v[x0], &w[y1]) - t(&w[x0], &v[y1]);
    }
    s
}

/// `g(v,w) = ½ Re[ξ1·conj υ'0 + ξ'1·conj υ0 - ξ0·conj υ'1 - ξ'0·conj υ1 + (same on 2,3)]`.
pub fn metric_eval(v: &[Gq], w: &[Gq]) -> Result<BigRational> {
    check_len(v, 8, "tangent vector")?;
    check_len(w, 8, "tangent vector")?;
    Ok(metric_complex(v, w).re / BigRational::from_integer(2.into()))
}

/// Real basis `e_k, i·e_k` of `C^8 = R^16`.
fn real_basis() -> Vec<TangentVector> {
    (0..16)
        .map(|b| {
            let mut v = vec![Gq::zero(); 8];
            v[b / 2] = if b % 2 == 0 { Gq::one() } else { Gq::i() };
            v
        })
        .collect()
}

fn gram_of(vectors: &[TangentVector]) -> ExactMatrix {
    let rows = vectors
        .iter()
        .map(|v| {
            vectors
                .iter()
                .map(|w| Gq::real(metric_eval(v, w).expect("length 8")))
                .collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).expect("square")
}

pub fn metric_gram() -> ExactMatrix {
    gram_of(&real_basis())
}

pub fn metric_signature() -> (usize, usize) {
    metric_gram().signature().expect("real symmetric")
}

fn s1_generic<S: ConjRing>(x: &[S], y: &[S], mul_i: impl Fn(&S) -> S) -> Vec<S> {
    let w = |z: &S, k: usize, sign: bool| {
        let iz = mul_i(z);
        if (k % 2 == 0) == sign {
            iz
        } else {
            -iz
        }
    };
    x.iter()
        .enumerate()
        .map(|(k, z)| w(z, k, true))
        .chain(y.iter().enumerate().map(|(k, z)| w(z, k, false)))
        .collect()
}

/// Generator of the circle action with weights `(+,-,+,-)` on `x` and
/// `(-,+,-,+)` on `y`.
pub fn s1_field(x: &[Gq], y: &[Gq]) -> Result<TangentVector> {
    check_len(x, 4, "x")?;
    check_len(y, 4, "y")?;
    Ok(s1_generic(x, y, |z| z * &Gq::i()))
}

fn symbolic_point() -> (Vec<CPoly>, Vec<CPoly>) {
    let x = (0..4).map(|k| CPoly::complex_var(2 * k, 2 * k + 1)).collect();
    let y = (0..4).map(|k| CPoly::complex_var(8 + 2 * k, 9 + 2 * k)).collect();
    (x, y)
}

/// `g(X, X) = Re(x·σy)` as a polynomial identity in the 16 real coordinates.
pub fn s1_length_identity_symbolic() -> bool {
    let (x, y) = symbolic_point();
    let field = s1_generic(&x, &y, |z| CPoly::new(-z.im.clone(), z.re.clone()));
    let two_g = metric_complex(&field, &field).re;
    let target = dot(&x, &sigma(&y)).re;
    two_g == target.clone() + target
}

/// `σx·σy = conj(x·y)`, so `τ` preserves the quadric.
pub fn tau_preserves_quadric_symbolic() -> bool {
    let (x, y) = symbolic_point();
    dot(&sigma(&x), &sigma(&y)) == dot(&x, &y).conj()
}

/// `σ(x + ζσx) = σx - conj(ζ)·x`: `τ` maps the point at `ζ` of a real line to
/// the point at `-1/conj(ζ)`.
pub fn real_line_tau_identity_symbolic() -> bool {
    let (x, _) = symbolic_point();
    let zeta = CPoly::complex_var(16, 17);
    let sx = sigma(&x);
    let lhs = sigma(
        &x.iter()
            .zip(&sx)
            .map(|(a, b)| a.clone() + zeta.clone() * b.clone())
            .collect::<Vec<_>>(),
    );
    let rhs: Vec<CPoly> = sx
        .iter()
        .zip(&x)
        .map(|(b, a)| b.clone() - zeta.conj() * a.clone())
        .collect();
    lhs == rhs
}

/// The circle action at angle `π/2`.
pub fn rotate_quarter(x: &[Gq], y: &[Gq]) -> (Vec<Gq>, Vec<Gq>) {
    let v = s1_field(x, y).expect("length 4");
    (v[..4].to_vec(), v[4..].to_vec())
}

/// Complex structures `I` (multiplication by `i`) and `J`, `K = I∘J`.
///
/// `J` acts on each of the four coordinate pairs as `(a, b) ↦ (s·conj b, -s·conj a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricTriple {
    pub j_signs: [i64; 4],
}

impl MetricTriple {
    pub fn i(&self, v: &[Gq]) -> TangentVector {
        v.iter().map(|z| z * &Gq::i()).collect()
    }

    pub fn j(&self, v: &[Gq]) -> TangentVector {
        v.chunks(2)
            .zip(self.j_signs)
            .flat_map(|(p, s)| {
                let s = Gq::from_int(s);
                [&s * &p[1].conj(), -(&s * &p[0].conj())]
            })
            .collect()
    }

    pub fn k(&self, v: &[Gq]) -> TangentVector {
        self.i(&self.j(v))
    }

    pub fn satisfies_relations(&self) -> bool {
        let basis = real_basis();
        let neg = |v: &[Gq]| v.iter().map(|z| -z.clone()).collect::<Vec<_>>();
        let jb: Vec<TangentVector> = basis.iter().map(|b| self.j(b)).collect();
        basis.iter().zip(&jb).all(|(b, jb)| {
            self.j(jb) == neg(b) && self.i(jb) == neg(&self.j(&self.i(b)))
        }) && gram_of(&jb) == gram_of(&basis)
    }
}

/// First triple in the sign enumeration with `J² = -1`, `IJ = -JI` and `J`
/// an isometry.
pub fn metric_triple() -> Result<MetricTriple> {
    static CELL: OnceLock<Option<MetricTriple>> = OnceLock::new();
    CELL.get_or_init(search_metric_triple)
        .clone()
        .ok_or_else(|| Error::Uncertified("no compatible complex structure J".into()))
}

fn search_metric_triple() -> Option<MetricTriple> {
    (0..16u8)
        .map(|m| MetricTriple {
            j_signs: std::array::from_fn(|k| if m >> k & 1 == 0 { 1 } else { -1 }),
        })
        .find(MetricTriple::satisfies_relations)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HxGram {
    pub gram: ExactMatrix,
    pub nondegenerate: bool,
    /// Scalar part of `q0p0 + q1p1` under the certified identification.
    pub scalar_part: String,
    pub scalar_part_nonzero: bool,
}

/// Gram matrix of `{X, IX, JX, KX}` at `(x, y)`.
pub fn hx_gram(x: &[Gq], y: &[Gq]) -> Result<HxGram> {
    let triple = metric_triple()?;
    let conv = certify_convention()?;
    let xf = s1_field(x, y)?;
    let frame = vec![triple.i(&xf), triple.j(&xf), triple.k(&xf)];
    let frame: Vec<TangentVector> = std::iter::once(xf).chain(frame).collect();
    let gram = gram_of(&frame);
    let nondegenerate = !gram.det()?.is_zero();
    let scalar = conv.tuple(x, y)?.product().re();
    Ok(HxGram {
        gram,
        nondegenerate,
        scalar_part_nonzero: !scalar.is_zero(),
        scalar_part: scalar.to_string(),
    })
}

// ---------------------------------------------------------------- Grassmannian

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaValue {
    /// Coordinates of `s` in the rows of `H`.
    pub s_coords: Vec<Gq>,
    /// Coordinates of `z + H` in `C^4 / H`.
    pub coset: Vec<Gq>,
    /// `s ⊗ (z + H)` as a 2×2 array.
    pub tensor: ExactMatrix,
}

impl AlphaValue {
    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }
}

/// `α(s ⊗ z) = s ⊗ (z + H)` at the plane `H ⊂ C^4`.
pub fn grassmann_alpha(h: &ExactMatrix, s: &[Gq], z: &[Gq]) -> Result<AlphaValue> {
    if h.rows() != 2 || h.cols() != 4 {
        return Err(Error::Dimension("H must be a 2×4 basis matrix".into()));
    }
    check_len(s, 4, "s")?;
    check_len(z, 4, "z")?;
    let (red, pivots) = h.rref();
    if pivots.len() != 2 {
        return Err(Error::Invalid("H must have rank 2".into()));
    }
    // s in the rref basis, then in the rows of H
    let in_rref: Vec<Gq> = pivots.iter().map(|&p| s[p].clone()).collect();
    let recon: Vec<Gq> = (0..4)
        .map(|c| &(&in_rref[0] * red.get(0, c)) + &(&in_rref[1] * red.get(1, c)))
        .collect();
    if recon != s {
        return Err(Error::Invalid("s is not in the span of H".into()));
    }
    let m = [
        [h.get(0, pivots[0]).clone(), h.get(0, pivots[1]).clone()],
        [h.get(1, pivots[0]).clone(), h.get(1, pivots[1]).clone()],
    ];
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let inv = det.inv().expect("pivot minor is invertible");
    // c·m = in_rref
    let s_coords = vec![
        &(&(&in_rref[0] * &m[1][1]) - &(&in_rref[1] * &m[1][0])) * &inv,
        &(&(&in_rref[1] * &m[0][0]) - &(&in_rref[0] * &m[0][1])) * &inv,
    ];
    let mut reduced = z.to_vec();
    for (r, &p) in pivots.iter().enumerate() {
        let f = reduced[p].clone();
        for c in 0..4 {
            reduced[c] = &reduced[c] - &(&f * red.get(r, c));
        }
    }
    let coset: Vec<Gq> = (0..4).filter(|c| !pivots.contains(c)).map(|c| reduced[c].clone()).collect();
    let tensor = ExactMatrix::from_rows(
        s_coords
            .iter()
            .map(|a| coset.iter().map(|b| a * b).collect())
            .collect(),
    )?;
    Ok(AlphaValue { s_coords, coset, tensor })
}

// ---------------------------------------------------------------- sampling

pub fn random_vector<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Gq> {
    (0..len)
        .map(|_| Gq::from_ints(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)))
        .collect()
}

fn nonzero_vector<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Gq> {
    loop {
        let v = random_vector(rng, len, bound);
        if v.iter().any(|z| !z.is_zero()) {
            return v;
        }
    }
}

/// Matrix of a real-linear map `C^n → R^m`, columns indexed by `e_k, i·e_k`.
fn real_linear_matrix(n: usize, f: impl Fn(&[Gq]) -> Vec<BigRational>) -> ExactMatrix {
    let cols: Vec<Vec<Gq>> = (0..2 * n)
        .map(|b| {
            let mut v = vec![Gq::zero(); n];
            v[b / 2] = if b % 2 == 0 { Gq::one() } else { Gq::i() };
            f(&v).into_iter().map(Gq::real).collect()
        })
        .collect();
    let rows = cols[0].len();
    ExactMatrix::from_cols(rows, &cols).expect("uniform columns")
}

/// Random real line through a random `x`; `x_infinity` additionally imposes
/// `x·σy = 0`.
pub fn sample_real_line<R: Rng>(rng: &mut R, x_infinity: bool) -> RealLineData {
    loop {
        let x = nonzero_vector(rng, 4, 9);
        let m = real_linear_matrix(4, |y| {
            let xy = dot(&x, y);
            let xsy = dot(&x, &sigma(y));
            let mut out = vec![xy.re, xy.im, xsy.im.clone()];
            if x_infinity {
                out.push(xsy.re);
            }
            out
        });
        let kernel = m.kernel_basis();
        let mut real = vec![BigRational::zero(); 8];
        for k in &kernel {
            let c = BigRational::from_integer(rng.gen_range(-5i64..=5).into());
            for (acc, e) in real.iter_mut().zip(k) {
                *acc += &c * &e.re;
            }
        }
        let y: Vec<Gq> = real.chunks(2).map(|p| Gq::new(p[0].clone(), p[1].clone())).collect();
        if y.iter().any(|z| !z.is_zero()) {
            return RealLineData { x, y };
        }
    }
}

/// Unconstrained pair, usually violating the real-line conditions.
pub fn sample_pair<R: Rng>(rng: &mut R) -> RealLineData {
    RealLineData {
        x: nonzero_vector(rng, 4, 9),
        y: nonzero_vector(rng, 4, 9),
    }
}

pub fn random_quaternion<R: Rng>(rng: &mut R, bound: i64) -> Q {
    loop {
        let v = random_vector(rng, 2, bound);
        let q = Q::new(v[0].clone(), v[1].clone());
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn random_tuple<R: Rng>(rng: &mut R) -> QuatTuple {
    QuatTuple::new(
        random_quaternion(rng, 5),
        random_quaternion(rng, 5),
        random_quaternion(rng, 5),
        random_quaternion(rng, 5),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(k: usize) -> Vec<Gq> {
        (0..4).map(|i| Gq::from_int((i == k) as i64)).collect()
    }

    fn neg(v: &[Gq]) -> Vec<Gq> {
        v.iter().map(|z| -z.clone()).collect()
    }

    #[test]
    fn line_examples() {
        let l = QuadricLine::new(e(0), e(1), e(2), e(3)).unwrap();
        assert!(l.validate().valid());
        assert_eq!(l.classify().unwrap(), LineClass::Degenerate);
        let l = QuadricLine::new(e(0), e(1), neg(&e(1)), e(0)).unwrap();
        assert_eq!(l.classify().unwrap(), LineClass::Generic);
        let l = QuadricLine::new(e(0), e(1), e(0), e(1)).unwrap();
        assert!(!l.validate().ac_zero);
        assert!(l.classify().is_err());
    }

    #[test]
    fn real_line_examples() {
        assert_eq!(sigma(&e(0)), e(1));
        assert_eq!(sigma(&e(1)), neg(&e(0)));
        let l = real_line(&e(0), &e(1)).unwrap();
        assert_eq!(l.classify().unwrap(), LineClass::Generic);
        let l = real_line(&e(0), &e(2)).unwrap();
        assert_eq!(l.classify().unwrap(), LineClass::Degenerate);
        assert!(real_line(&e(0), &e(0)).is_err());
    }

    #[test]
    fn certification_finds_a_variant_and_rejects_the_printed_rule() {
        let rep = certification();
        assert_eq!(rep.variants_checked, 256);
        let id = rep.certified_id().unwrap();
        assert!(!rep.printed.certified());
        let t = id.tuple(&e(0), &e(2)).unwrap();
        assert!(t.is_x_infinity());
    }

    #[test]
    fn action_examples() {
        let t = QuatTuple::new(Q::one(), Q::zero(), Q::one(), Q::zero());
        let m = h_action(&Q::j(), &t).unwrap();
        assert_eq!(m, QuatTuple::new(Q::j(), Q::zero(), -Q::j(), Q::zero()));
        assert_eq!(m.product(), Q::one());
        assert_eq!(h_action(&Q::one(), &t).unwrap(), t);
        assert!(h_action(&Q::zero(), &t).is_err());
    }

    #[test]
    fn fibration_example() {
        let t = QuatTuple::new(Q::one(), Q::one(), Q::j(), -Q::j());
        let (a, b) = fibration(&t).unwrap();
        assert_eq!(a, HPoint::Finite(Q::one()));
        assert_eq!(b, HPoint::Finite(-Q::one()));
    }

    #[test]
    fn orbit_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let conv = certify_convention().unwrap();
        for _ in 0..10 {
            let d = sample_real_line(&mut rng, false);
            let t = conv.tuple(&d.x, &d.y).unwrap();
            if t.is_x_infinity() {
                continue;
            }
            let u = random_quaternion(&mut rng, 4);
            let two = BigRational::from_integer(2.into());
            let t2 = QuatTuple::new(t.q0.scale(&two), t.q1.scale(&two), t.p0.scale(&two), t.p1.scale(&two));
            let t2 = h_action(&u, &t2).unwrap();
            let w = orbit_equivalent(&t, &t2).unwrap().expect("same orbit");
            let back = h_action(&w.u, &t).unwrap().scale_p(&w.r.parse().unwrap());
            assert_eq!(back, t2);
        }
    }

    #[test]
    fn metric_examples() {
        let v: Vec<Gq> = [e(0), vec![Gq::zero(); 4]].concat();
        assert!(metric_eval(&v, &v).unwrap().is_zero());
        let v: Vec<Gq> = [e(1), e(0)].concat();
        assert_eq!(metric_eval(&v, &v).unwrap(), BigRational::one());
        assert_eq!(metric_signature(), (8, 8));
    }

    #[test]
    fn s1_length() {
        let x = e(1);
        let y = vec![gq(2, 0), Gq::zero(), Gq::zero(), Gq::zero()];
        assert_eq!(dot(&x, &sigma(&y)), gq(2, 0));
        let xf = s1_field(&x, &y).unwrap();
        assert_eq!(metric_eval(&xf, &xf).unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn symbolic_identities() {
        assert!(s1_length_identity_symbolic());
        assert!(tau_preserves_quadric_symbolic());
        assert!(real_line_tau_identity_symbolic());
    }

    #[test]
    fn hx_gram_tracks_scalar_part() {
        let g = hx_gram(&e(0), &e(1)).unwrap();
        assert!(g.nondegenerate && g.scalar_part_nonzero);
        let g = hx_gram(&e(0), &e(2)).unwrap();
        assert!(!g.nondegenerate && !g.scalar_part_nonzero);
    }

    #[test]
    fn alpha_examples() {
        let h = ExactMatrix::from_rows(vec![e(0), e(1)]).unwrap();
        assert!(grassmann_alpha(&h, &e(0), &e(1)).unwrap().is_zero());
        let a = grassmann_alpha(&h, &e(0), &e(2)).unwrap();
        assert_eq!(a.coset, vec![Gq::one(), Gq::zero()]);
        assert!(!a.is_zero());
        assert!(grassmann_alpha(&h, &e(2), &e(2)).is_err());
    }

    #[test]
    fn equation_rank_three() {
        assert_eq!(im_h_equation_rank(&Q::one(), &Q::zero()), 3);
        assert_eq!(im_h_equation_rank(&Q::zero(), &Q::zero()), 0);
    }
}
