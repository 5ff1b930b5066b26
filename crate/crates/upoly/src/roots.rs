//! Certified isolation of all complex roots of an exact polynomial.
//!
//! Pipeline: squarefree (Yun) decomposition fixes multiplicities; each
//! squarefree factor first gives up its exact roots (rational roots found
//! through the coordinate-gcd + rational-root-theorem route, and a linear
//! leftover yields a field element), then the remaining factor goes through
//! simultaneous (Aberth-Ehrlich) approximation at a working precision,
//! followed by a mandatory a-posteriori certification step: the disk around
//! each approximation with radius deg * |Weierstrass correction| is computed
//! in ball arithmetic, and pairwise-disjoint disks are certified to hold
//! exactly one root each. Failures double the precision; everything is
//! deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ball::{hypot_up, ComplexBall};
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::field::ExactScalar;
use crate::poly::Poly;

/// Working-precision schedule for isolation and refinement.
#[derive(Clone, Copy, Debug)]
pub struct Precision {
    pub initial: u32,
    pub max: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { initial: 128, max: 8192 }
    }
}

impl Precision {
    pub fn new(initial: u32, max: u32) -> Self {
        Precision { initial: initial.max(32), max: max.max(initial) }
    }
}

#[derive(Clone, Debug)]
enum RootKind {
    Exact(ExactScalar),
    Numeric { factor: Poly },
}

/// A disk certified to contain exactly one distinct root of the source
/// polynomial, together with that root's multiplicity.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    ball: ComplexBall,
    multiplicity: usize,
    kind: RootKind,
}

impl RootEnclosure {
    pub fn ball(&self) -> &ComplexBall {
        &self.ball
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn exact_value(&self) -> Option<&ExactScalar> {
        match &self.kind {
            RootKind::Exact(v) => Some(v),
            RootKind::Numeric { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, RootKind::Exact(_))
    }
}

#[derive(Clone, Debug)]
pub struct IsolationResult {
    pub enclosures: Vec<RootEnclosure>,
    pub source_degree: usize,
    pub precision_used: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompareOutcome {
    LessLex,
    GreaterLex,
    Equal,
    Unknown,
}

const EXACT_COMPARE_PREC: u32 = 1 << 14;

/// Lexicographic (Re, Im) comparison. `Equal` is returned only for equal
/// exact values; overlapping balls without an exact decision give `Unknown`.
pub fn certified_compare(a: &RootEnclosure, b: &RootEnclosure) -> CompareOutcome {
    if let (Some(x), Some(y)) = (a.exact_value(), b.exact_value()) {
        if x == y {
            return CompareOutcome::Equal;
        }
        return match exact_lex(x, y) {
            Some(std::cmp::Ordering::Less) => CompareOutcome::LessLex,
            Some(std::cmp::Ordering::Greater) => CompareOutcome::GreaterLex,
            Some(std::cmp::Ordering::Equal) => CompareOutcome::Equal,
            None => CompareOutcome::Unknown,
        };
    }
    match ball_lex(&a.ball, &b.ball) {
        Some(std::cmp::Ordering::Less) => CompareOutcome::LessLex,
        Some(std::cmp::Ordering::Greater) => CompareOutcome::GreaterLex,
        _ => CompareOutcome::Unknown,
    }
}

/// Exact lexicographic order of two distinct field elements.
fn exact_lex(x: &ExactScalar, y: &ExactScalar) -> Option<std::cmp::Ordering> {
    if x == y {
        return Some(std::cmp::Ordering::Equal);
    }
    let delta = x.sub(y);
    match delta.sign_re(EXACT_COMPARE_PREC)? {
        s if s < 0 => Some(std::cmp::Ordering::Less),
        s if s > 0 => Some(std::cmp::Ordering::Greater),
        _ => match delta.sign_im(EXACT_COMPARE_PREC)? {
            s if s < 0 => Some(std::cmp::Ordering::Less),
            s if s > 0 => Some(std::cmp::Ordering::Greater),
            _ => Some(std::cmp::Ordering::Equal),
        },
    }
}

/// Decide lex order from disjoint coordinate intervals, if possible.
fn ball_lex(a: &ComplexBall, b: &ComplexBall) -> Option<std::cmp::Ordering> {
    let a_re_hi = a.re().add(a.rad());
    let b_re_lo = b.re().sub(b.rad());
    if a_re_hi < b_re_lo {
        return Some(std::cmp::Ordering::Less);
    }
    let b_re_hi = b.re().add(b.rad());
    let a_re_lo = a.re().sub(a.rad());
    if b_re_hi < a_re_lo {
        return Some(std::cmp::Ordering::Greater);
    }
    None
}

/// Deterministic total order used to lay out enclosures: certified lex when
/// available, falling back to coordinate-interval and then midpoint bits for
/// pairs whose real parts cannot be separated.
pub(crate) fn sort_key_compare(a: &RootEnclosure, b: &RootEnclosure) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match certified_compare(a, b) {
        CompareOutcome::LessLex => return Ordering::Less,
        CompareOutcome::GreaterLex => return Ordering::Greater,
        CompareOutcome::Equal => return Ordering::Equal,
        CompareOutcome::Unknown => {}
    }
    // Real parts overlap: try imaginary intervals (covers certified-conjugate
    // pairs whose real parts agree), then raw midpoint bits.
    let a_im_hi = a.ball.im().add(a.ball.rad());
    let b_im_lo = b.ball.im().sub(b.ball.rad());
    if a_im_hi < b_im_lo {
        return Ordering::Less;
    }
    let b_im_hi = b.ball.im().add(b.ball.rad());
    let a_im_lo = a.ball.im().sub(a.ball.rad());
    if b_im_hi < a_im_lo {
        return Ordering::Greater;
    }
    (a.ball.re(), a.ball.im(), a.ball.rad()).cmp(&(b.ball.re(), b.ball.im(), b.ball.rad()))
}

// ---------------------------------------------------------------------------
// Midpoint complex arithmetic for the simultaneous iteration (uncertified;
// certification never trusts these values).

#[derive(Clone, Debug)]
struct Cpx {
    re: Dyadic,
    im: Dyadic,
}

impl Cpx {
    fn zero() -> Self {
        Cpx { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    fn round(&self, prec: u32) -> Self {
        Cpx {
            re: self.re.round(prec, Round::Nearest).value,
            im: self.im.round(prec, Round::Nearest).value,
        }
    }

    fn add(&self, o: &Cpx) -> Cpx {
        Cpx { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn sub(&self, o: &Cpx) -> Cpx {
        Cpx { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    fn mul(&self, o: &Cpx, prec: u32) -> Cpx {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Cpx { re, im }.round(prec)
    }

    fn div(&self, o: &Cpx, prec: u32) -> Option<Cpx> {
        let d = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        if d.is_zero() {
            return None;
        }
        let nre = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let nim = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Cpx {
            re: nre.div(&d, prec, Round::Nearest).value,
            im: nim.div(&d, prec, Round::Nearest).value,
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mag_up(&self) -> Dyadic {
        hypot_up(&self.re, &self.im)
    }
}

fn midpoint_coeffs(f: &Poly, prec: u32) -> Vec<Cpx> {
    f.coeffs()
        .iter()
        .map(|c| {
            let b = c.embed(prec);
            Cpx { re: b.re().clone(), im: b.im().clone() }.round(prec)
        })
        .collect()
}

fn horner(coeffs: &[Cpx], x: &Cpx, prec: u32) -> Cpx {
    let mut acc = Cpx::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x, prec).add(c).round(prec);
    }
    acc
}

/// Upper bound for all root magnitudes of the monic polynomial `f`
/// (Cauchy bound 1 + max |c_i|).
fn cauchy_radius(coeffs: &[Cpx]) -> Dyadic {
    let mut m = Dyadic::zero();
    for c in &coeffs[..coeffs.len() - 1] {
        let mag = c.mag_up();
        if mag > m {
            m = mag;
        }
    }
    Dyadic::one().add(&m).round(32, Round::Ceil).value
}

/// Simultaneous Jacobi-style Aberth-Ehrlich iteration; returns uncertified
/// approximations to the roots of the monic squarefree `f`.
fn aberth(f: &Poly, prec: u32) -> Vec<Cpx> {
    let m = f.degree().expect("nonconstant");
    let coeffs = midpoint_coeffs(f, prec);
    let dcoeffs = midpoint_coeffs(&f.derivative(), prec);
    let radius = cauchy_radius(&coeffs);
    let rad_c = Cpx { re: radius, im: Dyadic::zero() };
    // (3+4i)/5 lies exactly on the unit circle and is not a root of unity, so
    // its powers are pairwise distinct starting points.
    let w = Cpx {
        re: Dyadic::from_rational(&BigRational::new(3.into(), 5.into()), prec, Round::Nearest).value,
        im: Dyadic::from_rational(&BigRational::new(4.into(), 5.into()), prec, Round::Nearest).value,
    };
    let mut z: Vec<Cpx> = Vec::with_capacity(m);
    let mut p = w.clone();
    for _ in 0..m {
        z.push(rad_c.mul(&p, prec));
        p = p.mul(&w, prec);
    }

    let eps = Dyadic::pow2(-(2 * i64::from(prec) / 3));
    let max_iter = 64 + 16 * m;
    let one = Cpx { re: Dyadic::one(), im: Dyadic::zero() };
    for _ in 0..max_iter {
        // Defensive: coincident iterates would break the pairwise sums.
        for j in 1..m {
            for l in 0..j {
                if z[j].sub(&z[l]).is_zero() {
                    let nudge = Dyadic::pow2(-(8 + j as i64));
                    z[j] = z[j].add(&Cpx { re: nudge.clone(), im: nudge });
                }
            }
        }
        let mut corrections = Vec::with_capacity(m);
        let mut max_corr = Dyadic::zero();
        let mut scale = Dyadic::one();
        for j in 0..m {
            let fz = horner(&coeffs, &z[j], prec);
            let dfz = horner(&dcoeffs, &z[j], prec);
            let newton = match fz.div(&dfz, prec) {
                Some(n) => n,
                None => {
                    corrections.push(Cpx::zero());
                    continue;
                }
            };
            let mut s = Cpx::zero();
            for l in 0..m {
                if l == j {
                    continue;
                }
                if let Some(r) = one.div(&z[j].sub(&z[l]), prec) {
                    s = s.add(&r).round(prec);
                }
            }
            let denom = one.sub(&newton.mul(&s, prec));
            let delta = newton.div(&denom, prec).unwrap_or(newton);
            let mag = delta.mag_up();
            if mag > max_corr {
                max_corr = mag;
            }
            let zm = z[j].mag_up();
            if zm > scale {
                scale = zm;
            }
            corrections.push(delta);
        }
        for (zj, d) in z.iter_mut().zip(&corrections) {
            *zj = zj.sub(d).round(prec);
        }
        if max_corr <= eps.mul(&scale) {
            break;
        }
    }
    z
}

/// A-posteriori certification: the disk around each approximation with
/// radius deg * |f(z_j) / prod_{l != j} (z_j - z_l)| contains at least one
/// root, the union of the disks contains all of them, and pairwise-disjoint
/// disks therefore hold exactly one root each.
fn certify(f: &Poly, pts: &[Cpx], prec: u32) -> Option<Vec<ComplexBall>> {
    let m = pts.len();
    let mut balls = Vec::with_capacity(m);
    let deg = Dyadic::from_i64(m as i64);
    for (j, zj) in pts.iter().enumerate() {
        let point = ComplexBall::exact(zj.re.clone(), zj.im.clone(), prec);
        let num = f.eval_ball(&point, prec);
        let mut den = ComplexBall::one(prec);
        for (l, zl) in pts.iter().enumerate() {
            if l == j {
                continue;
            }
            let diff = ComplexBall::exact(zj.re.sub(&zl.re), zj.im.sub(&zl.im), prec);
            den = den.mul(&diff);
        }
        let w = num.div(&den).ok()?;
        let r = deg.mul(&w.abs_up()).round(32, Round::Ceil).value;
        balls.push(ComplexBall::with_radius(zj.re.clone(), zj.im.clone(), r, prec));
    }
    for a in 0..m {
        for b in a + 1..m {
            if !balls[a].disjoint_from(&balls[b]) {
                return None;
            }
        }
    }
    Some(balls)
}

/// Isolate all roots of a monic squarefree polynomial numerically, doubling
/// the working precision until certification succeeds.
fn isolate_squarefree_numeric(f: &Poly, start: u32, max: u32) -> Result<(Vec<ComplexBall>, u32)> {
    let mut prec = start;
    loop {
        let pts = aberth(f, prec);
        if let Some(balls) = certify(f, &pts, prec) {
            return Ok((balls, prec));
        }
        if prec >= max {
            return Err(Error::PrecisionExhausted { max_bits: max });
        }
        prec = (prec * 2).min(max);
    }
}

// ---------------------------------------------------------------------------
// Exact root extraction.

/// Divisors of |n| from a partial factorization (trial division up to 1e5,
/// leftover kept whole). May miss divisors of large semiprime cofactors;
/// callers only use the list as candidates. `None` when the count blows past
/// the cap.
fn divisors_of(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(100_000u32);
    while &d * &d <= n && d <= bound {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        let r = n.sqrt();
        if &r * &r == n {
            factors.push((r, 2));
        } else {
            factors.push((n, 1));
        }
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pe);
                pe *= &p;
            }
        }
        if next.len() > cap {
            return None;
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    Some(divs)
}

/// Exact rational roots of a polynomial over the coefficient field, found by
/// reducing to the gcd of the coordinate polynomials and running the rational
/// root theorem on candidates. Complete whenever divisor enumeration does not
/// hit its cap (which only large unfactorable coefficients can cause); any
/// missed root simply stays numeric.
fn rational_roots_of(f: &Poly) -> Vec<BigRational> {
    let g = if f.field().degree() == 1 {
        f.clone()
    } else {
        let mut acc: Option<Poly> = None;
        for cp in f.coordinate_polys() {
            if cp.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => cp,
                Some(prev) => match prev.gcd(&cp) {
                    Ok(g) => g,
                    Err(_) => return Vec::new(),
                },
            });
        }
        match acc {
            Some(g) => g,
            None => return Vec::new(),
        }
    };
    if g.is_constant() {
        return Vec::new();
    }
    // Clear denominators to primitive integer coefficients.
    let mut lcm = BigInt::one();
    for c in g.coeffs() {
        let r = c.to_rational().expect("rational-field coefficients");
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.to_rational().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let mut low = 0usize;
    while low < ints.len() && ints[low].is_zero() {
        low += 1;
    }
    let mut candidates: Vec<BigRational> = Vec::new();
    if low > 0 {
        candidates.push(BigRational::zero());
    }
    let a0 = &ints[low];
    let an = ints.last().unwrap();
    if let (Some(ps), Some(qs)) = (divisors_of(a0, 4096), divisors_of(an, 4096)) {
        if ps.len().saturating_mul(qs.len()) <= 65536 {
            for p in &ps {
                for q in &qs {
                    let c = BigRational::new(p.clone(), q.clone());
                    candidates.push(c.clone());
                    candidates.push(-c);
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let field = f.field();
    candidates
        .into_iter()
        .filter(|c| {
            let x = ExactScalar::from_rational_in(field, c.clone());
            f.eval(&x).is_zero()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Top-level isolation.

struct NumericPart {
    poly: Poly,
    mult: usize,
    prec: u32,
    balls: Vec<ComplexBall>,
}

struct ExactRoot {
    value: ExactScalar,
    mult: usize,
    prec: u32,
    ball: ComplexBall,
}

/// Isolate every distinct complex root of `p` with certified multiplicities,
/// shrinking all enclosures to at most `target_radius` and making them
/// pairwise disjoint.
pub fn isolate_roots(p: &Poly, target_radius: &BigRational, prec: Precision) -> Result<IsolationResult> {
    let n = match p.degree() {
        None => return Err(Error::DivisionByZero),
        Some(0) => {
            return Ok(IsolationResult {
                enclosures: Vec::new(),
                source_degree: 0,
                precision_used: prec.initial,
            })
        }
        Some(n) => n,
    };
    let decomposition = p.squarefree_decomposition()?;
    let mut exacts: Vec<ExactRoot> = Vec::new();
    let mut parts: Vec<NumericPart> = Vec::new();
    let field = p.field();
    for (factor, mult) in &decomposition.parts {
        let mut rest = factor.clone();
        for r in rational_roots_of(factor) {
            let value = ExactScalar::from_rational_in(field, r);
            let lin = Poly::new(
                field.clone(),
                vec![value.neg(), ExactScalar::one(field)],
            );
            rest = rest.exact_div(&lin)?;
            exacts.push(ExactRoot {
                ball: value.embed(prec.initial),
                value,
                mult: *mult,
                prec: prec.initial,
            });
        }
        match rest.degree() {
            None | Some(0) => {}
            Some(1) => {
                let value = rest.coeff(0).neg().div(&rest.coeff(1))?;
                exacts.push(ExactRoot {
                    ball: value.embed(prec.initial),
                    value,
                    mult: *mult,
                    prec: prec.initial,
                });
            }
            Some(_) => {
                let (balls, used) = isolate_squarefree_numeric(&rest, prec.initial, prec.max)?;
                parts.push(NumericPart { poly: rest, mult: *mult, prec: used, balls });
            }
        }
    }

    let target = bound_radius(target_radius);

    // Global loop: every pair of enclosures disjoint, every radius small
    // enough. Refining a numeric part replaces all of its balls.
    loop {
        let mut offending_exact: Vec<usize> = Vec::new();
        let mut offending_part: Vec<usize> = Vec::new();
        {
            let all: Vec<(usize, bool, &ComplexBall)> = exacts
                .iter()
                .enumerate()
                .map(|(i, e)| (i, true, &e.ball))
                .chain(
                    parts
                        .iter()
                        .enumerate()
                        .flat_map(|(i, p)| p.balls.iter().map(move |b| (i, false, b))),
                )
                .collect();
            for (idx, (i, is_exact, ball)) in all.iter().enumerate() {
                if ball.rad().cmp_dyadic(&target) == std::cmp::Ordering::Greater {
                    push_unique(&mut offending_exact, &mut offending_part, *i, *is_exact);
                }
                for (j, jexact, other) in all.iter().skip(idx + 1) {
                    if !ball.disjoint_from(other) {
                        push_unique(&mut offending_exact, &mut offending_part, *i, *is_exact);
                        push_unique(&mut offending_exact, &mut offending_part, *j, *jexact);
                    }
                }
            }
        }
        if offending_exact.is_empty() && offending_part.is_empty() {
            break;
        }
        for i in offending_exact {
            let e = &mut exacts[i];
            if e.prec >= prec.max {
                return Err(Error::PrecisionExhausted { max_bits: prec.max });
            }
            e.prec = (e.prec * 2).min(prec.max);
            e.ball = e.value.embed(e.prec);
        }
        for i in offending_part {
            let part = &mut parts[i];
            if part.prec >= prec.max {
                return Err(Error::PrecisionExhausted { max_bits: prec.max });
            }
            let next = (part.prec * 2).min(prec.max);
            let (balls, used) = isolate_squarefree_numeric(&part.poly, next, prec.max)?;
            part.prec = used;
            part.balls = balls;
        }
    }

    let precision_used = exacts
        .iter()
        .map(|e| e.prec)
        .chain(parts.iter().map(|p| p.prec))
        .max()
        .unwrap_or(prec.initial);

    let mut enclosures: Vec<RootEnclosure> = Vec::new();
    for e in exacts {
        enclosures.push(RootEnclosure {
            ball: e.ball,
            multiplicity: e.mult,
            kind: RootKind::Exact(e.value),
        });
    }
    for part in parts {
        for ball in part.balls {
            enclosures.push(RootEnclosure {
                ball,
                multiplicity: part.mult,
                kind: RootKind::Numeric { factor: part.poly.clone() },
            });
        }
    }
    enclosures.sort_by(sort_key_compare);

    let total: usize = enclosures.iter().map(|e| e.multiplicity).sum();
    if total != n {
        return Err(Error::Internal(format!(
            "multiplicity budget violated: {total} != degree {n}"
        )));
    }
    Ok(IsolationResult { enclosures, source_degree: n, precision_used })
}

fn push_unique(exact: &mut Vec<usize>, part: &mut Vec<usize>, i: usize, is_exact: bool) {
    let v = if is_exact { exact } else { part };
    if !v.contains(&i) {
        v.push(i);
    }
}

fn bound_radius(target: &BigRational) -> Dyadic {
    Dyadic::from_rational(target, 32, Round::Floor).value
}

/// Shrink an enclosure to at most `new_radius`; the result is contained in
/// the input ball and holds the same root.
pub fn refine(e: &RootEnclosure, prec: Precision, new_radius: &BigRational) -> Result<RootEnclosure> {
    let target = bound_radius(new_radius);
    let small = |b: &ComplexBall| b.rad().cmp_dyadic(&target) != std::cmp::Ordering::Greater;
    if small(&e.ball) {
        return Ok(e.clone());
    }
    match &e.kind {
        RootKind::Exact(v) => {
            let mut p = e.ball.precision_bits().max(prec.initial);
            loop {
                p = (p * 2).min(prec.max);
                let ball = v.embed(p);
                if small(&ball) && e.ball.contains_ball(&ball) {
                    return Ok(RootEnclosure {
                        ball,
                        multiplicity: e.multiplicity,
                        kind: e.kind.clone(),
                    });
                }
                if p >= prec.max {
                    return Err(Error::PrecisionExhausted { max_bits: prec.max });
                }
            }
        }
        RootKind::Numeric { factor } => {
            let mut p = e.ball.precision_bits().max(prec.initial);
            loop {
                p = (p * 2).min(prec.max);
                let (balls, _) = isolate_squarefree_numeric(factor, p, prec.max)?;
                let matched: Vec<&ComplexBall> =
                    balls.iter().filter(|b| e.ball.contains_ball(b)).collect();
                if matched.len() == 1 && small(matched[0]) {
                    return Ok(RootEnclosure {
                        ball: matched[0].clone(),
                        multiplicity: e.multiplicity,
                        kind: e.kind.clone(),
                    });
                }
                if p >= prec.max {
                    return Err(Error::PrecisionExhausted { max_bits: prec.max });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn rad(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn exact_rational_roots_short_circuit() {
        // (z-1)(z-3)(2z-5) has roots 1, 3, 5/2
        let p = parse_poly("(z - 1)*(z - 3)*(2*z - 5)").unwrap();
        let r = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        assert_eq!(r.enclosures.len(), 3);
        let vals: Vec<BigRational> = r
            .enclosures
            .iter()
            .map(|e| e.exact_value().unwrap().to_rational().unwrap())
            .collect();
        assert_eq!(vals, vec![rad(1, 1), rad(5, 2), rad(3, 1)]);
        assert!(r.enclosures.iter().all(|e| e.multiplicity() == 1));
    }

    #[test]
    fn numeric_isolation_of_conjugate_pair() {
        let p = parse_poly("z^2 + 1").unwrap();
        let r = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        assert_eq!(r.enclosures.len(), 2);
        for e in &r.enclosures {
            assert!(e.exact_value().is_none());
            assert_eq!(e.multiplicity(), 1);
            // contains one of +/- i
            let zero = Dyadic::zero();
            let one = Dyadic::one();
            let hit = e.ball().contains_point(&zero, &one)
                || e.ball().contains_point(&zero, &one.neg());
            assert!(hit);
        }
        assert!(r.enclosures[0].ball().disjoint_from(r.enclosures[1].ball()));
        // canonical order: -i before i (imaginary interval order)
        assert!(r.enclosures[0].ball().im() < r.enclosures[1].ball().im());
    }

    #[test]
    fn multiplicities_from_squarefree_structure() {
        let p = parse_poly("(z - 1)^3 * (z + 2)^2 * (z^2 + z + 1)").unwrap();
        let r = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        assert_eq!(r.source_degree, 7);
        let mut mults: Vec<usize> = r.enclosures.iter().map(|e| e.multiplicity()).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 1, 2, 3]);
        let total: usize = r.enclosures.iter().map(|e| e.multiplicity()).sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn linear_over_field_roots_are_exact() {
        // roots 0 and (7 - i sqrt(95))/4, the latter exact in Q(i, sqrt(95))
        let p = parse_poly("z * (4*z + i*sqrt(95) - 7)").unwrap();
        let r = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        assert_eq!(r.enclosures.len(), 2);
        assert!(r.enclosures.iter().all(|e| e.is_exact()));
        let irrational = r
            .enclosures
            .iter()
            .find(|e| e.exact_value().unwrap().to_rational().is_none())
            .unwrap();
        let v = irrational.exact_value().unwrap();
        // 4v - 7 = -i sqrt(95), so (4v - 7)^2 = -95
        let four_v = v.scale(&BigRational::from_integer(4.into()));
        let shifted = four_v.sub(&ExactScalar::from_i64_in(v.field(), 7));
        assert_eq!(
            shifted.mul(&shifted).to_rational(),
            Some(BigRational::from_integer((-95).into()))
        );
    }

    #[test]
    fn example_4_1_derivative_roots() {
        let p = parse_poly(
            "(1/53)*(z - 5)*(z - 4)*(z - 3)*(z - 1)*(53*z - 241)",
        )
        .unwrap();
        let r = isolate_roots(&p, &rad(1, 1_000_000_000), Precision::default()).unwrap();
        let vals: Vec<BigRational> = r
            .enclosures
            .iter()
            .map(|e| e.exact_value().unwrap().to_rational().unwrap())
            .collect();
        assert_eq!(vals, vec![rad(1, 1), rad(3, 1), rad(4, 1), rad(241, 53), rad(5, 1)]);
    }

    #[test]
    fn refine_shrinks_and_nests() {
        let p = parse_poly("z^2 + 1").unwrap();
        let r = isolate_roots(&p, &rad(1, 1000), Precision::default()).unwrap();
        let e = &r.enclosures[0];
        let fine = refine(e, Precision::default(), &rad(1, 10_000_000)).unwrap();
        assert!(e.ball().contains_ball(fine.ball()));
        assert!(fine.ball().rad().to_rational() <= rad(1, 10_000_000));
    }

    #[test]
    fn refine_exact_keeps_value() {
        let p = parse_poly("53*z - 241").unwrap();
        let r = isolate_roots(&p, &rad(1, 2), Precision::default()).unwrap();
        let e = &r.enclosures[0];
        assert_eq!(e.exact_value().unwrap().to_rational(), Some(rad(241, 53)));
        let fine = refine(e, Precision::default(), &rad(1, 1_000_000_000)).unwrap();
        assert_eq!(fine.exact_value(), e.exact_value());
        assert!(fine.ball().rad().to_rational() <= rad(1, 1_000_000_000));
    }

    #[test]
    fn compare_outcomes() {
        let p = parse_poly("(z - 3)*(z - 4)*(53*z - 241)").unwrap();
        let r = isolate_roots(&p, &rad(1, 1000), Precision::default()).unwrap();
        // order: 3, 241/53 (~4.547) wait, 241/53 = 4.547 > 4, so: 3, 4, 241/53
        let vals: Vec<BigRational> = r
            .enclosures
            .iter()
            .map(|e| e.exact_value().unwrap().to_rational().unwrap())
            .collect();
        assert_eq!(vals, vec![rad(3, 1), rad(4, 1), rad(241, 53)]);
        assert_eq!(
            certified_compare(&r.enclosures[0], &r.enclosures[1]),
            CompareOutcome::LessLex
        );
        assert_eq!(
            certified_compare(&r.enclosures[2], &r.enclosures[1]),
            CompareOutcome::GreaterLex
        );
        assert_eq!(
            certified_compare(&r.enclosures[0], &r.enclosures[0]),
            CompareOutcome::Equal
        );
    }

    #[test]
    fn determinism_bit_for_bit() {
        let p = parse_poly("z^5 - z - 1").unwrap();
        let a = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        let b = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        assert_eq!(a.enclosures.len(), b.enclosures.len());
        for (x, y) in a.enclosures.iter().zip(&b.enclosures) {
            assert_eq!(x.ball().re(), y.ball().re());
            assert_eq!(x.ball().im(), y.ball().im());
            assert_eq!(x.ball().rad(), y.ball().rad());
        }
    }

    #[test]
    fn non_squarefree_with_gaussian_point() {
        let p = parse_poly("(z - i)^2 * (z - 1) * (z - 2) * (z - 3)").unwrap();
        let r = isolate_roots(&p, &rad(1, 1_000_000), Precision::default()).unwrap();
        assert_eq!(r.enclosures.len(), 4);
        let double = r.enclosures.iter().find(|e| e.multiplicity() == 2).unwrap();
        let i_val = ExactScalar::i_in(p.field()).unwrap();
        assert_eq!(double.exact_value(), Some(&i_val));
    }
}
