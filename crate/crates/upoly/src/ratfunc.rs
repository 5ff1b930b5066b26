//! Rational functions in one variable over an exact field, kept in reduced
//! form with a monic denominator so that equality is structural.

use crate::error::{Error, Result};
use crate::field::{ExactScalar, Field};
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = Field::unify(num.field(), den.field())?;
        let num = num.promote(&field)?;
        let den = den.promote(&field)?;
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(&field) });
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let (lc, den) = den.monic()?;
        let num = num.mul_scalar(&lc.inv()?);
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field().clone();
        RationalFunction { num: p, den: Poly::one(&field) }
    }

    pub fn constant(c: ExactScalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        RationalFunction::new(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn mul_scalar(&self, c: &ExactScalar) -> Result<Self> {
        RationalFunction::new(self.num.mul_scalar(c), self.den.clone())
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        RationalFunction::new(self.num.pow(n), self.den.pow(n))
    }

    pub fn eval(&self, x: &ExactScalar) -> Result<ExactScalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.num.eval(x).div(&d)
    }

    /// Render with an explicit variable name; `Display` always uses `z`.
    pub fn render_var(&self, var: &str) -> String {
        if self.is_polynomial() {
            self.num.render_var(var)
        } else {
            format!("({}) / ({})", self.num.render_var(var), self.den.render_var(var))
        }
    }

    /// `p(self)` for a polynomial `p`: composition that stays rational.
    pub fn compose_into(&self, p: &Poly) -> Result<Self> {
        let field = Field::unify(p.field(), self.field())?;
        let n = match p.degree() {
            None => return Ok(RationalFunction::from_poly(Poly::zero(&field))),
            Some(n) => n,
        };
        // p(f/g) = sum a_k f^k g^(n-k) / g^n, assembled by Horner on f.
        let mut acc = Poly::zero(&field);
        for k in (0..=n).rev() {
            let term = Poly::constant(p.coeff(k).promote(&field)?);
            acc = acc.mul(&self.num).add(&term.mul(&self.den.pow(n - k)));
        }
        RationalFunction::new(acc, self.den.pow(n))
    }
}

impl std::fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_polynomial() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?}) / ({:?})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn qf() -> Field {
        Field::rational()
    }

    fn qp(coeffs: &[i64]) -> Poly {
        let f = qf();
        Poly::new(
            f.clone(),
            coeffs.iter().map(|&c| ExactScalar::from_i64_in(&f, c)).collect(),
        )
    }

    #[test]
    fn reduction_and_monic_denominator() {
        // (z^2 - 1) / (2z - 2) = (z + 1) / 2
        let r = RationalFunction::new(qp(&[-1, 0, 1]), qp(&[-2, 2])).unwrap();
        assert_eq!(r.denominator(), &qp(&[1]));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            r.numerator().coeff(1).to_rational(),
            Some(half.clone())
        );
        assert_eq!(r.numerator().coeff(0).to_rational(), Some(half));
    }

    #[test]
    fn arithmetic_matches_field_rules() {
        let a = RationalFunction::new(qp(&[1]), qp(&[0, 1])).unwrap(); // 1/z
        let b = RationalFunction::from_poly(qp(&[0, 1])); // z
        let s = a.add(&b).unwrap(); // (1 + z^2)/z
        assert_eq!(s.numerator(), &qp(&[1, 0, 1]));
        assert_eq!(s.denominator(), &qp(&[0, 1]));
        let p = a.mul(&b).unwrap();
        assert!(p.is_constant());
        assert_eq!(p.numerator(), &qp(&[1]));
        let q = s.div(&s).unwrap();
        assert_eq!(q.numerator(), &qp(&[1]));
    }

    #[test]
    fn composition_cross_checks_by_evaluation() {
        // p = z^2 + 3, f = (z+1)/(z-1); check p(f)(x) = p(f(x)) at x = 4.
        let p = qp(&[3, 0, 1]);
        let f = RationalFunction::new(qp(&[1, 1]), qp(&[-1, 1])).unwrap();
        let pf = f.compose_into(&p).unwrap();
        let x = ExactScalar::from_i64_in(&qf(), 4);
        let direct = {
            let fx = f.eval(&x).unwrap();
            p.eval(&fx)
        };
        assert_eq!(pf.eval(&x).unwrap(), direct);
    }

    #[test]
    fn eval_rejects_poles() {
        let f = RationalFunction::new(qp(&[1]), qp(&[-1, 1])).unwrap();
        let x = ExactScalar::from_i64_in(&qf(), 1);
        assert!(f.eval(&x).is_err());
    }
}
