//! Exact scalars in small number fields: Q, Q(sqrt(s)) for a nonsquare
//! integer s (possibly negative, so Q(i) and Q(i*sqrt(k)) are included), and
//! the degree-4 tower Q(i, sqrt(s)) generated by theta = i + sqrt(s).
//!
//! Every scalar is a coordinate vector over the power basis of a shared
//! generator, so equality, arithmetic, and conjugation are exact. Numeric
//! questions (signs, orderings) go through certified ball embeddings.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::ComplexBall;
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// What extension of Q the scalars live in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    /// theta^2 = s for a nonzero, nonsquare integer s. Negative s gives an
    /// imaginary quadratic field; s = -1 is Q(i).
    Quadratic { s: BigInt },
    /// theta = i + sqrt(s) for a positive nonsquare integer s;
    /// theta^4 + (2-2s) theta^2 + (s+1)^2 = 0.
    Quartic { s: BigInt },
}

#[derive(Debug)]
struct FieldRepr {
    kind: FieldKind,
    degree: usize,
    /// Monic minimal polynomial of theta, ascending coefficients, length degree+1.
    min_poly: Vec<BigRational>,
    /// Coordinates of i when the field contains it.
    i_elem: Option<Vec<BigRational>>,
    /// Coordinates of sqrt(kernel) for the field's kernel, if any.
    sqrt_elem: Option<Vec<BigRational>>,
    /// Image of theta under complex conjugation.
    conj_theta: Vec<BigRational>,
}

/// A shared handle to a coefficient field. Cheap to clone; equality compares
/// the mathematical field, not the allocation.
#[derive(Clone)]
pub struct Field(Arc<FieldRepr>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.describe())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind == other.0.kind
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state);
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qb(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

// Minimal rational-coefficient polynomial helpers for the extended Euclid
// used in inversion. Vectors are ascending-degree, possibly with a zero tail.
mod qpoly {
    use super::*;

    pub fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    pub fn deg(v: &[BigRational]) -> Option<usize> {
        if v.is_empty() {
            None
        } else {
            Some(v.len() - 1)
        }
    }

    pub fn add_scaled(a: &[BigRational], b: &[BigRational], c: &BigRational, shift: usize) -> Vec<BigRational> {
        let mut out = a.to_vec();
        if out.len() < b.len() + shift {
            out.resize(b.len() + shift, BigRational::zero());
        }
        for (j, bj) in b.iter().enumerate() {
            out[j + shift] += bj * c;
        }
        trim(out)
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut rem = trim(a.to_vec());
        let db = b.len() - 1;
        let lead = b.last().unwrap().clone();
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quo = vec![BigRational::zero(); rem.len() - db];
        while rem.len() > db {
            let dr = rem.len() - 1;
            let c = rem.last().unwrap() / &lead;
            quo[dr - db] = c.clone();
            let neg = -c;
            rem = add_scaled(&rem, &b, &neg, dr - db);
            if rem.len() > dr {
                rem.truncate(dr);
                rem = trim(rem);
            }
        }
        (trim(quo), rem)
    }
}

impl Field {
    pub fn rational() -> Field {
        Field(Arc::new(FieldRepr {
            kind: FieldKind::Rational,
            degree: 1,
            min_poly: vec![BigRational::zero(), BigRational::one()],
            i_elem: None,
            sqrt_elem: None,
            conj_theta: vec![BigRational::zero()],
        }))
    }

    /// Q(sqrt(s)) for a nonzero, nonsquare integer s.
    pub fn quadratic(s: BigInt) -> Field {
        assert!(!s.is_zero(), "quadratic kernel must be nonzero");
        let min_poly = vec![-qb(s.clone()), q(0), q(1)];
        let theta = vec![q(0), q(1)];
        let conj_theta = if s.is_negative() {
            vec![q(0), q(-1)]
        } else {
            theta.clone()
        };
        let i_elem = if s == BigInt::from(-1) { Some(theta.clone()) } else { None };
        let sqrt_elem = if s.is_positive() { Some(theta) } else { None };
        Field(Arc::new(FieldRepr {
            kind: FieldKind::Quadratic { s },
            degree: 2,
            min_poly,
            i_elem,
            sqrt_elem,
            conj_theta,
        }))
    }

    /// Q(i, sqrt(s)) for a positive nonsquare integer s, generated by
    /// theta = i + sqrt(s).
    pub fn quartic(s: BigInt) -> Field {
        assert!(s.is_positive(), "quartic kernel must be positive");
        let s_q = qb(s.clone());
        // theta^4 + (2 - 2s) theta^2 + (s+1)^2 = 0
        let min_poly = vec![
            (&s_q + q(1)) * (&s_q + q(1)),
            q(0),
            q(2) - q(2) * &s_q,
            q(0),
            q(1),
        ];
        let field = Field(Arc::new(FieldRepr {
            kind: FieldKind::Quartic { s: s.clone() },
            degree: 4,
            min_poly,
            i_elem: None,
            sqrt_elem: None,
            conj_theta: Vec::new(),
        }));
        // i = (theta^2 - s - 1) / (2 theta), sqrt(s) = theta - i,
        // conj(theta) = theta - 2i.
        let theta = ExactScalar::generator(&field);
        let theta_sq = theta.mul(&theta);
        let num = theta_sq.sub(&ExactScalar::from_rational_in(&field, &s_q + q(1)));
        let two_theta = theta.scale(&q(2));
        let i_elem = num
            .mul(&two_theta.inv().expect("theta is invertible"));
        let sqrt_elem = theta.sub(&i_elem);
        let conj_theta = theta.sub(&i_elem.scale(&q(2)));
        let repr = FieldRepr {
            kind: FieldKind::Quartic { s },
            degree: 4,
            min_poly: field.0.min_poly.clone(),
            i_elem: Some(i_elem.coords),
            sqrt_elem: Some(sqrt_elem.coords),
            conj_theta: conj_theta.coords,
        };
        Field(Arc::new(repr))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0.kind, FieldKind::Rational)
    }

    /// The real quadratic kernel available in this field, if any.
    pub fn real_kernel(&self) -> Option<&BigInt> {
        match &self.0.kind {
            FieldKind::Quadratic { s } if s.is_positive() => Some(s),
            FieldKind::Quartic { s } => Some(s),
            _ => None,
        }
    }

    /// The imaginary quadratic kernel |s| when the field is Q(i*sqrt(k)).
    pub fn imaginary_kernel(&self) -> Option<BigInt> {
        match &self.0.kind {
            FieldKind::Quadratic { s } if s.is_negative() && *s != BigInt::from(-1) => {
                Some(-s.clone())
            }
            _ => None,
        }
    }

    pub fn has_i(&self) -> bool {
        self.0.i_elem.is_some()
    }

    pub fn describe(&self) -> String {
        match &self.0.kind {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Quadratic { s } => {
                if *s == BigInt::from(-1) {
                    "Q(i)".to_string()
                } else {
                    format!("Q(sqrt({s}))")
                }
            }
            FieldKind::Quartic { s } => format!("Q(i, sqrt({s}))"),
        }
    }

    /// The smallest field containing both operands' fields, when one extends
    /// the other.
    pub fn unify(a: &Field, b: &Field) -> Result<Field> {
        if a == b {
            return Ok(a.clone());
        }
        if a.is_rational() {
            return Ok(b.clone());
        }
        if b.is_rational() {
            return Ok(a.clone());
        }
        Err(Error::FieldMismatch)
    }

    /// A ball enclosing the embedding of theta.
    fn theta_ball(&self, prec: u32) -> ComplexBall {
        match &self.0.kind {
            FieldKind::Rational => ComplexBall::zero(prec),
            FieldKind::Quadratic { s } => {
                let mag = Dyadic::new(s.abs(), 0);
                let root = mag.sqrt(prec, Round::Floor);
                let enclosure = root.value;
                let rad = root.err;
                if s.is_negative() {
                    ComplexBall::with_radius(Dyadic::zero(), enclosure, rad, prec)
                } else {
                    ComplexBall::with_radius(enclosure, Dyadic::zero(), rad, prec)
                }
            }
            FieldKind::Quartic { s } => {
                let root = Dyadic::new(s.clone(), 0).sqrt(prec, Round::Floor);
                ComplexBall::with_radius(root.value, Dyadic::one(), root.err, prec)
            }
        }
    }
}

/// An exact element of a [`Field`], stored as coordinates over the power
/// basis 1, theta, ..., theta^(d-1).
#[derive(Clone)]
pub struct ExactScalar {
    field: Field,
    coords: Vec<BigRational>,
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.field == other.field {
            return self.coords == other.coords;
        }
        match Field::unify(&self.field, &other.field) {
            Ok(f) => {
                self.promote(&f).expect("unified").coords
                    == other.promote(&f).expect("unified").coords
            }
            Err(_) => false,
        }
    }
}

impl Eq for ExactScalar {}

impl std::hash::Hash for ExactScalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // Rational values hash field-independently so that equality across
        // promoted representations stays consistent with the hash.
        if self.is_rational() {
            self.coords[0].hash(state);
        } else {
            self.field.hash(state);
            self.coords.hash(state);
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl ExactScalar {
    pub fn zero(field: &Field) -> Self {
        ExactScalar { field: field.clone(), coords: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational_in(field, BigRational::one())
    }

    pub fn from_rational_in(field: &Field, r: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = r;
        ExactScalar { field: field.clone(), coords }
    }

    pub fn from_i64_in(field: &Field, v: i64) -> Self {
        Self::from_rational_in(field, q(v))
    }

    /// theta itself. Panics for the rational field, which has no generator.
    pub fn generator(field: &Field) -> Self {
        assert!(field.degree() >= 2, "rational field has no generator");
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[1] = BigRational::one();
        ExactScalar { field: field.clone(), coords }
    }

    /// The imaginary unit, when the field contains it.
    pub fn i_in(field: &Field) -> Option<Self> {
        field.0.i_elem.as_ref().map(|c| ExactScalar { field: field.clone(), coords: c.clone() })
    }

    /// sqrt of the field's real kernel, when present.
    pub fn sqrt_kernel_in(field: &Field) -> Option<Self> {
        field
            .0
            .sqrt_elem
            .as_ref()
            .map(|c| ExactScalar { field: field.clone(), coords: c.clone() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Lift into a larger field (or the same one).
    pub fn promote(&self, target: &Field) -> Result<Self> {
        if &self.field == target {
            return Ok(self.clone());
        }
        if self.field.is_rational() {
            return Ok(Self::from_rational_in(target, self.coords[0].clone()));
        }
        Err(Error::FieldMismatch)
    }

    fn unified(&self, other: &Self) -> Result<(Self, Self)> {
        let f = Field::unify(&self.field, &other.field)?;
        Ok((self.promote(&f)?, other.promote(&f)?))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unified(other).expect("field mismatch in add");
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        ExactScalar { field: a.field, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ExactScalar { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ExactScalar {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    fn reduce(field: &Field, raw: Vec<BigRational>) -> Vec<BigRational> {
        let d = field.degree();
        let mut v = raw;
        if v.len() < d {
            v.resize(d, BigRational::zero());
        }
        // theta^d = -(min_poly[0] + ... + min_poly[d-1] theta^(d-1))
        let mp = &field.0.min_poly;
        for idx in (d..v.len()).rev() {
            let c = std::mem::replace(&mut v[idx], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                let adj = &c * &mp[j];
                v[idx - d + j] -= adj;
            }
        }
        v.truncate(d);
        v
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unified(other).expect("field mismatch in mul");
        let d = a.field.degree();
        if d == 1 {
            return ExactScalar {
                field: a.field,
                coords: vec![&a.coords[0] * &b.coords[0]],
            };
        }
        let mut raw = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[i + j] += x * y;
            }
        }
        let coords = Self::reduce(&a.field, raw);
        ExactScalar { field: a.field, coords }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let r = self.coords[0].recip();
            return Ok(Self::from_rational_in(&self.field, r));
        }
        // Extended Euclid: u * self + v * min_poly = gcd = const.
        let a = qpoly::trim(self.coords.clone());
        let m = self.field.0.min_poly.clone();
        let (mut r0, mut r1) = (m, a);
        let (mut u0, mut u1) = (Vec::new(), vec![BigRational::one()]);
        while qpoly::deg(&r1).is_some() && qpoly::deg(&r1) != Some(0) {
            let (quo, rem) = qpoly::divrem(&r0, &r1);
            let next_u = {
                let qu = qpoly::mul(&quo, &u1);
                let mut diff = u0.clone();
                if diff.len() < qu.len() {
                    diff.resize(qu.len(), BigRational::zero());
                }
                for (j, c) in qu.iter().enumerate() {
                    diff[j] -= c;
                }
                qpoly::trim(diff)
            };
            r0 = r1;
            r1 = rem;
            u0 = u1;
            u1 = next_u;
        }
        if r1.is_empty() {
            return Err(Error::Internal(
                "reducible minimal polynomial encountered during inversion".into(),
            ));
        }
        let c = r1[0].recip();
        let inv_coords = Self::reduce(&self.field, u1.iter().map(|x| x * &c).collect());
        Ok(ExactScalar { field: self.field.clone(), coords: inv_coords })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Complex conjugate; the fields here are all closed under conjugation.
    pub fn conj(&self) -> Self {
        if self.field.degree() == 1 {
            return self.clone();
        }
        let ct = ExactScalar {
            field: self.field.clone(),
            coords: self.field.0.conj_theta.clone(),
        };
        let mut acc = Self::from_rational_in(&self.field, self.coords.last().unwrap().clone());
        for c in self.coords.iter().rev().skip(1) {
            acc = acc.mul(&ct).add(&Self::from_rational_in(&self.field, c.clone()));
        }
        acc
    }

    /// Real part, as an element of the same field.
    pub fn real_part(&self) -> Self {
        self.add(&self.conj()).scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Sign of the real part of the embedded value. Exact zero is decided
    /// symbolically; otherwise the embedding is refined until the sign is
    /// certified or `max_prec` is reached.
    pub fn sign_re(&self, max_prec: u32) -> Option<i32> {
        let rp = self.real_part();
        if rp.is_zero() {
            return Some(0);
        }
        self.refine_component_sign(max_prec, false)
    }

    /// Sign of the imaginary part of the embedded value.
    pub fn sign_im(&self, max_prec: u32) -> Option<i32> {
        if self.is_real() {
            return Some(0);
        }
        self.refine_component_sign(max_prec, true)
    }

    fn refine_component_sign(&self, max_prec: u32, imag: bool) -> Option<i32> {
        let mut prec = 64;
        loop {
            let ball = self.embed(prec);
            let mid = if imag { ball.im() } else { ball.re() };
            let lo = mid.sub(ball.rad());
            let hi = mid.add(ball.rad());
            if lo.signum() > 0 {
                return Some(1);
            }
            if hi.signum() < 0 {
                return Some(-1);
            }
            if prec >= max_prec {
                return None;
            }
            prec = (prec * 2).min(max_prec);
        }
    }

    /// Certified enclosure of the embedded complex value.
    pub fn embed(&self, prec: u32) -> ComplexBall {
        let work = prec + 16;
        if self.field.degree() == 1 || self.is_rational() {
            let re = Dyadic::from_rational(&self.coords[0], work, Round::Nearest);
            return ComplexBall::with_radius(re.value, Dyadic::zero(), re.err, work);
        }
        let theta = self.field.theta_ball(work);
        let mut acc = Self::rational_ball(self.coords.last().unwrap(), work);
        for c in self.coords.iter().rev().skip(1) {
            acc = acc.mul(&theta).add(&Self::rational_ball(c, work));
        }
        acc
    }

    fn rational_ball(r: &BigRational, prec: u32) -> ComplexBall {
        let d = Dyadic::from_rational(r, prec, Round::Nearest);
        ComplexBall::with_radius(d.value, Dyadic::zero(), d.err, prec)
    }

    /// Exact sign of a real scalar. `None` if the certification budget runs
    /// out (only possible for irrational values extremely close to zero,
    /// which cannot happen for nonzero algebraic numbers of this height at
    /// the default cap, but the cap keeps termination obvious).
    pub fn real_sign(&self, max_prec: u32) -> Option<i32> {
        debug_assert!(self.is_real(), "real_sign called on a nonreal scalar");
        if self.is_zero() {
            return Some(0);
        }
        if let Some(r) = self.to_rational() {
            return Some(if r.is_positive() { 1 } else { -1 });
        }
        let mut prec = 64;
        loop {
            let ball = self.embed(prec);
            let lo = ball.re().sub(ball.rad());
            let hi = ball.re().add(ball.rad());
            if lo.signum() > 0 {
                return Some(1);
            }
            if hi.signum() < 0 {
                return Some(-1);
            }
            if prec >= max_prec {
                return None;
            }
            prec = (prec * 2).min(max_prec);
        }
    }

    /// Decompose over the basis (1, i, sqrt(k), i*sqrt(k)) of the ambient
    /// field, returning (rational part, i part, sqrt part, i*sqrt part) plus
    /// the kernel. Entries beyond the field's degree are zero.
    fn mixed_basis(&self) -> (BigRational, BigRational, BigRational, BigRational, Option<BigInt>) {
        let zero = BigRational::zero;
        match &self.field.0.kind {
            FieldKind::Rational => (self.coords[0].clone(), zero(), zero(), zero(), None),
            FieldKind::Quadratic { s } => {
                if *s == BigInt::from(-1) {
                    (self.coords[0].clone(), self.coords[1].clone(), zero(), zero(), None)
                } else if s.is_negative() {
                    (self.coords[0].clone(), zero(), zero(), self.coords[1].clone(), Some(-s.clone()))
                } else {
                    (self.coords[0].clone(), zero(), self.coords[1].clone(), zero(), Some(s.clone()))
                }
            }
            FieldKind::Quartic { s } => {
                // theta^0 = 1; theta = i + sqrt(s); theta^2 = (s-1) + 2 i sqrt(s);
                // theta^3 = (3s-1) i + (s-3) sqrt(s).
                let sq = qb(s.clone());
                let c = &self.coords;
                let a = &c[0] + &c[2] * (&sq - q(1));
                let b = &c[1] + &c[3] * (q(3) * &sq - q(1));
                let d = &c[1] + &c[3] * (&sq - q(3));
                let e = &c[2] * q(2);
                (a, b, d, e, Some(s.clone()))
            }
        }
    }

    /// Render in the input grammar: rationals, `i`, and `sqrt(k)` combined
    /// with `+`, `-`, `*`. The output reparses to the same value.
    pub fn render(&self) -> String {
        let (a, b, c, d, kernel) = self.mixed_basis();
        let mut terms: Vec<(BigRational, String)> = Vec::new();
        if !a.is_zero() {
            terms.push((a.clone(), String::new()));
        }
        if !b.is_zero() {
            terms.push((b.clone(), "i".to_string()));
        }
        if let Some(k) = &kernel {
            if !c.is_zero() {
                terms.push((c.clone(), format!("sqrt({k})")));
            }
            if !d.is_zero() {
                terms.push((d.clone(), format!("i*sqrt({k})")));
            }
        }
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (coef, sym)) in terms.iter().enumerate() {
            let neg = coef.is_negative();
            let mag = coef.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if sym.is_empty() {
                out.push_str(&render_rational(&mag));
            } else if mag.is_one() {
                out.push_str(sym);
            } else {
                out.push_str(&render_rational(&mag));
                out.push('*');
                out.push_str(sym);
            }
        }
        out
    }
}

pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn gaussian_field_arithmetic() {
        let f = Field::quadratic(BigInt::from(-1));
        let i = ExactScalar::i_in(&f).unwrap();
        assert_eq!(i.mul(&i), ExactScalar::from_i64_in(&f, -1));
        let z = ExactScalar::from_i64_in(&f, 3).add(&i.scale(&q(4))); // 3 + 4i
        let w = z.mul(&z.conj());
        assert_eq!(w.to_rational(), Some(q(25)));
        let inv = z.inv().unwrap();
        assert!(z.mul(&inv).is_one());
        assert_eq!(z.real_part().to_rational(), Some(q(3)));
        assert_eq!(z.sign_im(1024), Some(1));
        assert!(!z.is_real());
    }

    #[test]
    fn real_quadratic_field() {
        let f = Field::quadratic(BigInt::from(17));
        let s = ExactScalar::sqrt_kernel_in(&f).unwrap();
        assert_eq!(s.mul(&s).to_rational(), Some(q(17)));
        assert!(s.is_real());
        assert_eq!(s.real_sign(1024), Some(1));
        let x = s.sub(&ExactScalar::from_i64_in(&f, 4)); // sqrt(17) - 4 > 0, tiny
        assert_eq!(x.real_sign(1024), Some(1));
        let y = s.sub(&ExactScalar::from_i64_in(&f, 5));
        assert_eq!(y.real_sign(1024), Some(-1));
    }

    #[test]
    fn imaginary_quadratic_field() {
        let f = Field::quadratic(BigInt::from(-95));
        let t = ExactScalar::generator(&f); // i*sqrt(95)
        assert_eq!(t.mul(&t).to_rational(), Some(q(-95)));
        assert_eq!(t.conj(), t.neg());
        assert_eq!(t.sign_im(1024), Some(1));
        assert_eq!(t.sign_re(1024), Some(0));
        assert_eq!(t.neg().sign_im(1024), Some(-1));
        let ball = t.embed(64);
        // |i sqrt(95)| = sqrt(95) ~ 9.7468
        assert!(ball.re().abs().to_rational() <= ball.rad().to_rational());
        let im = ball.im().to_rational();
        assert!(im > r(97, 10) && im < r(98, 10));
    }

    #[test]
    fn quartic_tower() {
        let f = Field::quartic(BigInt::from(35));
        let i = ExactScalar::i_in(&f).unwrap();
        let s = ExactScalar::sqrt_kernel_in(&f).unwrap();
        assert_eq!(i.mul(&i), ExactScalar::from_i64_in(&f, -1));
        assert_eq!(s.mul(&s).to_rational(), Some(q(35)));
        let theta = ExactScalar::generator(&f);
        assert_eq!(i.add(&s), theta);
        assert_eq!(theta.conj(), s.sub(&i));
        // d2 = 56/91 - (2/91) i sqrt(35): |d2|^2 = 3276/8281 = 36/91.
        let d2 = ExactScalar::from_rational_in(&f, r(56, 91))
            .sub(&i.mul(&s).scale(&r(2, 91)));
        let norm = d2.mul(&d2.conj());
        assert_eq!(norm.to_rational(), Some(r(36, 91)));
        let inv = d2.inv().unwrap();
        assert!(d2.mul(&inv).is_one());
    }

    #[test]
    fn render_round_trip_shapes() {
        let f = Field::quartic(BigInt::from(35));
        let i = ExactScalar::i_in(&f).unwrap();
        let s = ExactScalar::sqrt_kernel_in(&f).unwrap();
        let d2 = ExactScalar::from_rational_in(&f, r(56, 91))
            .sub(&i.mul(&s).scale(&r(2, 91)));
        assert_eq!(d2.render(), "8/13 - 2/91*i*sqrt(35)");
        assert_eq!(ExactScalar::zero(&f).render(), "0");
        assert_eq!(i.render(), "i");
        assert_eq!(s.neg().render(), "-sqrt(35)");
        let g = Field::quadratic(BigInt::from(-1));
        let z = ExactScalar::from_i64_in(&g, 2).sub(&ExactScalar::i_in(&g).unwrap());
        assert_eq!(z.render(), "2 - i");
    }

    #[test]
    fn embeddings_enclose_true_values() {
        let f = Field::quartic(BigInt::from(5));
        let i = ExactScalar::i_in(&f).unwrap();
        let s = ExactScalar::sqrt_kernel_in(&f).unwrap();
        let x = s.add(&i.scale(&q(3))); // sqrt(5) + 3i
        let ball = x.embed(128);
        let re = ball.re().to_rational();
        let rad = ball.rad().to_rational();
        // sqrt(5) = 2.2360679...
        assert!((re.clone() - r(2236068, 1000000)).abs() < r(1, 100000) + rad.clone());
        assert!((ball.im().to_rational() - q(3)).abs() <= rad);
    }

    #[test]
    fn promote_and_unify() {
        let f = Field::quartic(BigInt::from(35));
        let half = ExactScalar::from_rational_in(&Field::rational(), r(1, 2));
        let lifted = half.promote(&f).unwrap();
        assert_eq!(lifted.to_rational(), Some(r(1, 2)));
        let g = Field::quadratic(BigInt::from(-1));
        let other = ExactScalar::i_in(&g).unwrap();
        assert!(matches!(
            Field::unify(&f, other.field()),
            Err(Error::FieldMismatch)
        ));
    }
}
