//! Complex ball arithmetic: a midpoint with dyadic coordinates plus a dyadic
//! radius that soundly encloses every rounding and propagation error. Used to
//! certify sign and separation decisions that exact arithmetic alone cannot
//! reach (irrational critical points, transcendental-free comparisons).

use crate::dyadic::{Dyadic, Round, Rounded};
use crate::error::{Error, Result};

/// Radii carry this many bits; plenty for an error bound.
pub const RAD_PREC: u32 = 32;

/// Bits used when bounding magnitudes of midpoints.
const MAG_PREC: u32 = 40;

fn rad_up(x: &Dyadic) -> Dyadic {
    x.round(RAD_PREC, Round::Ceil).value
}

fn mag_up(x: &Dyadic) -> Dyadic {
    x.abs().round(MAG_PREC, Round::Ceil).value
}

fn mag_down(x: &Dyadic) -> Dyadic {
    x.abs().round(MAG_PREC, Round::Floor).value
}

/// Upper bound on `sqrt(re^2 + im^2)`.
pub fn hypot_up(re: &Dyadic, im: &Dyadic) -> Dyadic {
    let a = mag_up(re);
    let b = mag_up(im);
    let s = a.mul(&a).add(&b.mul(&b));
    s.sqrt(MAG_PREC, Round::Ceil).value
}

/// Lower bound on `sqrt(re^2 + im^2)`.
pub fn hypot_down(re: &Dyadic, im: &Dyadic) -> Dyadic {
    let a = mag_down(re);
    let b = mag_down(im);
    let s = a.mul(&a).add(&b.mul(&b));
    s.sqrt(MAG_PREC, Round::Floor).value
}

/// A closed disk in the complex plane: center `re + i*im`, radius `rad >= 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBall {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl std::fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} + {}i +/- {}]", self.re, self.im, self.rad)
    }
}

impl ComplexBall {
    pub fn exact(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        ComplexBall { re, im, rad: Dyadic::zero(), prec }
    }

    pub fn with_radius(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        ComplexBall { re, im, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Dyadic::zero(), Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Dyadic::one(), Dyadic::zero(), prec)
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn join_prec(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    fn mid_round(x: Dyadic, prec: u32) -> Rounded {
        x.round(prec, Round::Nearest)
    }

    /// Upper bound on |z| over the whole ball.
    pub fn abs_up(&self) -> Dyadic {
        rad_up(&hypot_up(&self.re, &self.im).add(&self.rad))
    }

    /// Lower bound on |z| over the whole ball (clamped at zero).
    pub fn abs_down(&self) -> Dyadic {
        let d = hypot_down(&self.re, &self.im).sub(&self.rad);
        if d.is_negative() {
            Dyadic::zero()
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        hypot_down(&self.re, &self.im).cmp_dyadic(&self.rad) != std::cmp::Ordering::Greater
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: self.re.neg(), im: self.im.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.join_prec(other);
        let re = Self::mid_round(self.re.add(&other.re), prec);
        let im = Self::mid_round(self.im.add(&other.im), prec);
        let rad = rad_up(&self.rad.add(&other.rad).add(&re.err).add(&im.err));
        ComplexBall { re: re.value, im: im.value, rad, prec }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.join_prec(other);
        let pr = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let pi = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        let re = Self::mid_round(pr, prec);
        let im = Self::mid_round(pi, prec);
        let ma = hypot_up(&self.re, &self.im);
        let mb = hypot_up(&other.re, &other.im);
        let cross = ma
            .mul(&other.rad)
            .add(&mb.mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        let rad = rad_up(&cross.add(&re.err).add(&im.err));
        ComplexBall { re: re.value, im: im.value, rad, prec }
    }

    pub fn mul_i(&self) -> Self {
        ComplexBall { re: self.im.neg(), im: self.re.clone(), rad: self.rad.clone(), prec: self.prec }
    }

    /// Reciprocal. Fails when the ball might contain zero.
    pub fn recip(&self) -> Result<Self> {
        let lo = self.abs_down();
        if lo.is_zero() {
            return Err(Error::BallContainsZero);
        }
        let prec = self.prec;
        let d = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let re = self.re.div(&d, prec, Round::Nearest);
        let im = self.im.neg().div(&d, prec, Round::Nearest);
        // |1/z - 1/m| = |z - m| / (|z| |m|) <= rad / (lo * |m|_down).
        let m_down = hypot_down(&self.re, &self.im);
        let denom = lo.mul(&m_down);
        let prop = self.rad.div(&denom, RAD_PREC, Round::Ceil).value;
        let rad = rad_up(&prop.add(&re.err).add(&im.err));
        Ok(ComplexBall { re: re.value, im: im.value, rad, prec })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ComplexBall::one(self.prec);
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

    /// True when the two disks are certainly disjoint.
    pub fn disjoint_from(&self, other: &Self) -> bool {
        let dre = self.re.sub(&other.re);
        let dim = self.im.sub(&other.im);
        let dist_lo = hypot_down(&dre, &dim);
        let sum = rad_up(&self.rad.add(&other.rad));
        dist_lo.cmp_dyadic(&sum) == std::cmp::Ordering::Greater
    }

    /// True when `other` certainly lies inside `self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        let dre = self.re.sub(&other.re);
        let dim = self.im.sub(&other.im);
        let dist_hi = hypot_up(&dre, &dim);
        rad_up(&dist_hi.add(&other.rad)).cmp_dyadic(&self.rad) != std::cmp::Ordering::Greater
    }

    /// True when the exact point `re + i*im` certainly lies inside the disk.
    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.contains_ball(&ComplexBall::exact(re.clone(), im.clone(), self.prec))
    }

    /// True when the two balls certainly overlap is NOT decidable from the
    /// outside; this reports "might overlap" (the complement of disjointness).
    pub fn may_overlap(&self, other: &Self) -> bool {
        !self.disjoint_from(other)
    }

    /// Certified nonzero: every point of the disk is nonzero.
    pub fn is_nonzero_certain(&self) -> bool {
        !self.contains_zero()
    }

    /// Widen the radius by `extra` (used to absorb external error terms).
    pub fn widen(&self, extra: &Dyadic) -> Self {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.clone(),
            rad: rad_up(&self.rad.add(extra)),
            prec: self.prec,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl std::fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.rad.is_zero() {
            write!(f, "{} + {}i", self.re, self.im)
        } else {
            write!(f, "{} + {}i (+/- {})", self.re, self.im, self.rad)
        }
    }
}
