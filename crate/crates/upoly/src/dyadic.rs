//! Arbitrary-precision binary floating point: `man * 2^exp` with explicit,
//! directed rounding. All operations are deterministic; nothing here depends
//! on platform float behaviour.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for precision-limited results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
    /// To nearest, ties away from zero.
    Nearest,
}

/// A dyadic rational `man * 2^exp`, canonicalized so `man` is odd or zero
/// (zero keeps `exp == 0`). Canonical form makes `Eq`/`Hash` structural
/// equality coincide with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

/// A rounded result together with a sound bound on the rounding error.
#[derive(Clone, Debug)]
pub struct Rounded {
    pub value: Dyadic,
    /// `|value - exact| <= err`; zero when the operation was exact.
    pub err: Dyadic,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.canonicalize();
        d
    }

    fn canonicalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Mantissa bit length.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    /// Exact sum. Mantissa width grows as needed.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << u64::try_from(self.exp - e).expect("exponent overflow");
        let b = &other.man << u64::try_from(other.exp - e).expect("exponent overflow");
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: &self.man * &other.man, exp: self.exp + other.exp }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn cmp_dyadic(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            _ => self.sub(other).signum().cmp(&0),
        }
    }

    /// Round to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u32, mode: Round) -> Rounded {
        let bits = self.man.bits();
        if bits <= u64::from(prec) {
            return Rounded { value: self.clone(), err: Dyadic::zero() };
        }
        let shift = bits - u64::from(prec);
        let ulp_exp = self.exp + shift as i64;
        let denom = BigInt::one() << shift;
        let (mut q, r) = self.man.div_rem(&denom);
        if r.is_zero() {
            return Rounded { value: Dyadic::new(q, ulp_exp), err: Dyadic::zero() };
        }
        match mode {
            Round::Floor => {
                if self.man.is_negative() {
                    q -= 1;
                }
            }
            Round::Ceil => {
                if !self.man.is_negative() {
                    q += 1;
                }
            }
            Round::Nearest => {
                let twice = r.abs() << 1u8;
                if twice >= denom {
                    if self.man.is_negative() {
                        q -= 1;
                    } else {
                        q += 1;
                    }
                }
            }
        }
        Rounded { value: Dyadic::new(q, ulp_exp), err: Dyadic::pow2(ulp_exp) }
    }

    /// Quotient rounded to `prec` bits. `other` must be nonzero.
    pub fn div(&self, other: &Self, prec: u32, mode: Round) -> Rounded {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Rounded { value: Dyadic::zero(), err: Dyadic::zero() };
        }
        let want = i64::from(prec) + 2;
        let k = (want + other.man.bits() as i64 - self.man.bits() as i64).max(0) as u64;
        let num = &self.man << k;
        let (mut q, r) = num.div_rem(&other.man);
        let exp = self.exp - other.exp - k as i64;
        if r.is_zero() {
            return Dyadic::new(q, exp).round(prec, mode);
        }
        // q is truncated toward zero; fix up for directed modes, then round.
        let negative = (self.man.sign() == Sign::Minus) != (other.man.sign() == Sign::Minus);
        match mode {
            Round::Floor => {
                if negative {
                    q -= 1;
                }
            }
            Round::Ceil => {
                if !negative {
                    q += 1;
                }
            }
            Round::Nearest => {}
        }
        let rounded = Dyadic::new(q, exp).round(prec, mode);
        // The pre-round quotient is within one unit at scale 2^exp of the true
        // quotient; the final rounding contributes `rounded.err` on top.
        Rounded { value: rounded.value, err: Dyadic::pow2(exp).add(&rounded.err) }
    }

    /// Square root of a nonnegative value, rounded in the given direction
    /// (`Floor` or `Ceil`).
    pub fn sqrt(&self, prec: u32, mode: Round) -> Rounded {
        assert!(!self.is_negative(), "dyadic sqrt of negative value");
        assert!(mode != Round::Nearest, "sqrt supports directed rounding only");
        if self.is_zero() {
            return Rounded { value: Dyadic::zero(), err: Dyadic::zero() };
        }
        let want = 2 * u64::from(prec) + 4;
        let bits = self.man.bits();
        let mut shift = want.saturating_sub(bits);
        if (self.exp - shift as i64) % 2 != 0 {
            shift += 1;
        }
        let m = &self.man << shift;
        let root = m.sqrt();
        let exact = (&root * &root) == m;
        let half_exp = (self.exp - shift as i64) / 2;
        let value = if exact {
            Dyadic::new(root, half_exp)
        } else {
            match mode {
                Round::Floor => Dyadic::new(root, half_exp),
                _ => Dyadic::new(root + 1, half_exp),
            }
        };
        let rounded = value.round(prec, mode);
        if exact && rounded.err.is_zero() {
            return Rounded { value: rounded.value, err: Dyadic::zero() };
        }
        Rounded { value: rounded.value, err: Dyadic::pow2(half_exp).add(&rounded.err) }
    }

    pub fn from_rational(q: &BigRational, prec: u32, mode: Round) -> Rounded {
        let num = Dyadic::new(q.numer().clone(), 0);
        if q.denom().is_one() {
            return num.round(prec, mode);
        }
        let den = Dyadic::new(q.denom().clone(), 0);
        num.div(&den, prec, mode)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << u64::try_from(self.exp).unwrap())
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << u64::try_from(-self.exp).unwrap())
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        if bits <= 52 {
            return self.man.to_f64().unwrap_or(f64::NAN) * 2f64.powi(self.exp.clamp(-2000, 2000) as i32);
        }
        let top = self.round(53, Round::Nearest).value;
        top.man.to_f64().unwrap_or(f64::NAN) * 2f64.powi(top.exp.clamp(-2000, 2000) as i32)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Decimal rendering with `sig` significant digits (approximate display;
    /// the exact value is `man * 2^exp`).
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let mut a = r.numer().abs();
        let b = r.denom().clone();
        // Scale so that a/b has `sig` digits before the implied point.
        let mut dec_exp: i64 = 0;
        let ten = BigInt::from(10);
        let target_low = ten.pow(sig as u32 - 1);
        let target_high = ten.pow(sig as u32);
        loop {
            let q = &a / &b;
            if q < target_low {
                a *= &ten;
                dec_exp -= 1;
            } else if q >= target_high {
                a /= &ten;
                dec_exp += 1;
            } else {
                break;
            }
        }
        let digits = (&a / &b).to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        let e = dec_exp + digits.len() as i64 - 1;
        if e != 0 {
            out.push('e');
            out.push_str(&e.to_string());
        }
        out
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(17))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_dyadic(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_dyadic(other)
    }
}
