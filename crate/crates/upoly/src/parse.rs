//! Expression parser for the input grammar: integer literals, rationals via
//! `/`, `i`, `sqrt(<positive rational>)`, one variable, `+ - * / ^`, and
//! parentheses. No floating literals; everything stays exact.
//!
//! Parsing is two-pass: the first pass discovers which constants occur (does
//! `i` appear? which squarefree sqrt kernel?) and constructs the smallest
//! supported coefficient field; the second evaluates the tree in that field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, ParseError, Result};
use crate::field::{ExactScalar, Field};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn lex(src: &str) -> std::result::Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => pos += 1,
            '(' => {
                out.push((Token::LParen, pos));
                pos += 1;
            }
            ')' => {
                out.push((Token::RParen, pos));
                pos += 1;
            }
            '+' => {
                out.push((Token::Plus, pos));
                pos += 1;
            }
            '-' => {
                out.push((Token::Minus, pos));
                pos += 1;
            }
            '*' => {
                out.push((Token::Star, pos));
                pos += 1;
            }
            '/' => {
                out.push((Token::Slash, pos));
                pos += 1;
            }
            '^' => {
                out.push((Token::Caret, pos));
                pos += 1;
            }
            '0'..='9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'.' {
                    return Err(ParseError::BadNumber(format!(
                        "{}. (floating literals are not allowed)",
                        &src[start..pos]
                    )));
                }
                let text = &src[start..pos];
                let v = text
                    .parse::<BigInt>()
                    .map_err(|_| ParseError::BadNumber(text.to_string()))?;
                out.push((Token::Int(v), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = pos;
                while pos < bytes.len()
                    && ((bytes[pos] as char).is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                out.push((Token::Ident(src[start..pos].to_string()), start));
            }
            other => return Err(ParseError::UnexpectedChar { ch: other, pos }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Int(BigInt),
    ImaginaryUnit,
    Var,
    Sqrt(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    idx: usize,
    var: &'a str,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.idx)
            .map(|(_, p)| *p)
            .unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, tok: Token, what: &'static str) -> std::result::Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.idx += 1;
                Ok(())
            }
            Some(_) => Err(ParseError::Expected { expected: what, pos: self.pos() }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.idx += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Token::Slash) => {
                    self.idx += 1;
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> std::result::Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.idx += 1;
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.primary()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.idx += 1;
            let pos = self.pos();
            match self.bump() {
                Some(Token::Int(n)) => {
                    if n.is_negative() {
                        return Err(ParseError::Expected {
                            expected: "nonnegative integer exponent",
                            pos,
                        });
                    }
                    let e = n
                        .to_u32()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| ParseError::ExponentTooLarge(n.to_string()))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                Some(_) => {
                    return Err(ParseError::Expected {
                        expected: "nonnegative integer exponent",
                        pos,
                    })
                }
                None => return Err(ParseError::UnexpectedEnd),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> std::result::Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Int(v)) => Ok(Expr::Int(v)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                if name == "i" {
                    Ok(Expr::ImaginaryUnit)
                } else if name == "sqrt" {
                    self.expect(Token::LParen, "opening parenthesis after sqrt")?;
                    let inner = self.expr()?;
                    self.expect(Token::RParen, "closing parenthesis")?;
                    Ok(Expr::Sqrt(Box::new(inner)))
                } else if name == self.var {
                    Ok(Expr::Var)
                } else {
                    Err(ParseError::UnknownVariable(name))
                }
            }
            Some(_) => Err(ParseError::Expected { expected: "a value", pos }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Evaluate a constant subtree to a rational (used for sqrt arguments).
fn eval_rational(e: &Expr) -> std::result::Result<BigRational, ParseError> {
    match e {
        Expr::Int(v) => Ok(BigRational::from_integer(v.clone())),
        Expr::Neg(x) => Ok(-eval_rational(x)?),
        Expr::Add(a, b) => Ok(eval_rational(a)? + eval_rational(b)?),
        Expr::Sub(a, b) => Ok(eval_rational(a)? - eval_rational(b)?),
        Expr::Mul(a, b) => Ok(eval_rational(a)? * eval_rational(b)?),
        Expr::Div(a, b) => {
            let d = eval_rational(b)?;
            if d.is_zero() {
                return Err(ParseError::ZeroDivisor);
            }
            Ok(eval_rational(a)? / d)
        }
        Expr::Pow(a, n) => {
            let base = eval_rational(a)?;
            Ok(num_traits::pow::pow(base, *n as usize))
        }
        Expr::ImaginaryUnit | Expr::Var | Expr::Sqrt(_) => Err(ParseError::BadSqrtArgument(
            "subexpression is not a rational constant".into(),
        )),
    }
}

/// Write a positive rational r as coeff^2 * kernel with kernel a squarefree
/// positive integer, so sqrt(r) = coeff * sqrt(kernel). Square factors with
/// prime divisors above the trial-division bound stay inside the kernel; the
/// representation is still exact, just not fully reduced, and mixed-kernel
/// detection treats it verbatim.
fn normalize_sqrt(r: &BigRational) -> std::result::Result<(BigRational, BigInt), ParseError> {
    if !r.is_positive() {
        return Err(ParseError::BadSqrtArgument(r.to_string()));
    }
    let p = r.numer().clone();
    let q = r.denom().clone();
    // sqrt(p/q) = sqrt(p*q) / q
    let mut n = &p * &q;
    let mut square = BigInt::one();
    let mut kernel = BigInt::one();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(100_000u32);
    while &d * &d <= n && d <= bound {
        let mut count = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            count += 1;
        }
        if count > 0 {
            square *= d.pow(count / 2);
            if count % 2 == 1 {
                kernel *= &d;
            }
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        let root = n.sqrt();
        if &root * &root == n {
            square *= root;
        } else {
            kernel *= &n;
        }
    }
    let coeff = BigRational::new(square, q);
    Ok((coeff, kernel))
}

fn discover_field(e: &Expr) -> std::result::Result<Field, ParseError> {
    fn walk(
        e: &Expr,
        has_i: &mut bool,
        kernel: &mut Option<BigInt>,
    ) -> std::result::Result<(), ParseError> {
        match e {
            Expr::ImaginaryUnit => {
                *has_i = true;
                Ok(())
            }
            Expr::Sqrt(arg) => {
                let r = eval_rational(arg)?;
                let (_, k) = normalize_sqrt(&r)?;
                if k > BigInt::one() {
                    match kernel {
                        None => *kernel = Some(k),
                        Some(existing) if *existing == k => {}
                        Some(existing) => {
                            return Err(ParseError::MixedKernels(
                                existing.to_string(),
                                k.to_string(),
                            ))
                        }
                    }
                }
                Ok(())
            }
            Expr::Int(_) | Expr::Var => Ok(()),
            Expr::Neg(x) | Expr::Pow(x, _) => walk(x, has_i, kernel),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                walk(a, has_i, kernel)?;
                walk(b, has_i, kernel)
            }
        }
    }
    let mut has_i = false;
    let mut kernel = None;
    walk(e, &mut has_i, &mut kernel)?;
    Ok(match (has_i, kernel) {
        (false, None) => Field::rational(),
        (true, None) => Field::quadratic(BigInt::from(-1)),
        (false, Some(k)) => Field::quadratic(k),
        (true, Some(k)) => Field::quartic(k),
    })
}

fn eval_expr(e: &Expr, field: &Field) -> Result<RationalFunction> {
    match e {
        Expr::Int(v) => Ok(RationalFunction::constant(ExactScalar::from_rational_in(
            field,
            BigRational::from_integer(v.clone()),
        ))),
        Expr::ImaginaryUnit => {
            let i = ExactScalar::i_in(field).ok_or_else(|| {
                Error::Internal("field discovery missed the imaginary unit".into())
            })?;
            Ok(RationalFunction::constant(i))
        }
        Expr::Var => Ok(RationalFunction::from_poly(Poly::var(field))),
        Expr::Sqrt(arg) => {
            let r = eval_rational(arg).map_err(Error::Parse)?;
            let (coeff, kernel) = normalize_sqrt(&r).map_err(Error::Parse)?;
            let value = if kernel.is_one() {
                ExactScalar::from_rational_in(field, coeff)
            } else {
                let base = ExactScalar::sqrt_kernel_in(field).ok_or_else(|| {
                    Error::Internal("field discovery missed a sqrt kernel".into())
                })?;
                base.scale(&coeff)
            };
            Ok(RationalFunction::constant(value))
        }
        Expr::Neg(x) => Ok(eval_expr(x, field)?.neg()),
        Expr::Add(a, b) => eval_expr(a, field)?.add(&eval_expr(b, field)?),
        Expr::Sub(a, b) => eval_expr(a, field)?.sub(&eval_expr(b, field)?),
        Expr::Mul(a, b) => eval_expr(a, field)?.mul(&eval_expr(b, field)?),
        Expr::Div(a, b) => {
            let den = eval_expr(b, field)?;
            if den.is_zero() {
                return Err(ParseError::ZeroDivisor.into());
            }
            eval_expr(a, field)?.div(&den)
        }
        Expr::Pow(a, n) => eval_expr(a, field)?.pow(*n as usize),
    }
}

fn parse_with_var(src: &str, var: &str) -> Result<RationalFunction> {
    let tokens = lex(src).map_err(Error::Parse)?;
    if tokens.is_empty() {
        return Err(ParseError::UnexpectedEnd.into());
    }
    let mut p = Parser { tokens: &tokens, idx: 0, var, src_len: src.len() };
    let expr = p.expr().map_err(Error::Parse)?;
    if p.idx != tokens.len() {
        let (_, pos) = tokens[p.idx];
        return Err(ParseError::Expected { expected: "end of input", pos }.into());
    }
    let field = discover_field(&expr).map_err(Error::Parse)?;
    eval_expr(&expr, &field)
}

/// Parse a polynomial in `z`. Division is allowed as long as the result is a
/// polynomial (in particular, division by nonzero constants).
pub fn parse_poly(src: &str) -> Result<Poly> {
    let rf = parse_with_var(src, "z")?;
    if !rf.is_polynomial() {
        return Err(ParseError::NonConstantDivisor.into());
    }
    let den = rf.denominator().coeff(0);
    let num = rf.numerator().clone();
    if den.is_one() {
        Ok(num)
    } else {
        Ok(num.mul_scalar(&den.inv()?))
    }
}

/// Parse a rational function in the formal variable `u`.
pub fn parse_ratfunc(src: &str) -> Result<RationalFunction> {
    parse_with_var(src, "u")
}

/// Parse a constant expression into an exact scalar.
pub fn parse_scalar(src: &str) -> Result<ExactScalar> {
    let rf = parse_with_var(src, "z")?;
    if !rf.is_constant() {
        return Err(ParseError::NonConstantDivisor.into());
    }
    let num = rf.numerator().coeff(0);
    let den = rf.denominator().coeff(0);
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_rational_polynomial() {
        let p = parse_poly("(1/6)*z^6 - 3*z + 2").unwrap();
        assert_eq!(p.degree(), Some(6));
        assert!(p.field().is_rational());
        assert_eq!(p.coeff(6).to_rational(), Some(rat(1, 6)));
        assert_eq!(p.coeff(1).to_rational(), Some(rat(-3, 1)));
        assert_eq!(p.coeff(0).to_rational(), Some(rat(2, 1)));
    }

    #[test]
    fn constant_division_is_polynomial() {
        let p = parse_poly("(z^2 + z)/2").unwrap();
        assert_eq!(p.coeff(2).to_rational(), Some(rat(1, 2)));
        let q = parse_poly("(z^2 - 1)/(z - 1)").unwrap();
        assert_eq!(q.degree(), Some(1));
        assert!(parse_poly("1/z").is_err());
    }

    #[test]
    fn gaussian_coefficients() {
        let p = parse_poly("z^2 - 2*i*z - 1").unwrap();
        assert_eq!(p.field().kind(), &FieldKind::Quadratic { s: BigInt::from(-1) });
        // (z - i)^2
        let i = ExactScalar::i_in(p.field()).unwrap();
        assert!(p.eval(&i).is_zero());
    }

    #[test]
    fn sqrt_kernels_normalize() {
        // sqrt(19/5) = sqrt(95)/5, so this lands in Q(sqrt(95)).
        let a = parse_scalar("sqrt(19/5)").unwrap();
        assert_eq!(a.field().kind(), &FieldKind::Quadratic { s: BigInt::from(95) });
        let b = parse_scalar("sqrt(95)/5").unwrap();
        assert_eq!(a, b);
        // sqrt of a perfect square collapses to a rational.
        assert_eq!(parse_scalar("sqrt(36/25)").unwrap().to_rational(), Some(rat(6, 5)));
        assert_eq!(parse_scalar("sqrt(8)/2").unwrap(), parse_scalar("sqrt(2)").unwrap());
    }

    #[test]
    fn mixed_kernels_rejected() {
        let e = parse_poly("sqrt(2) + sqrt(3) + z");
        assert!(matches!(
            e,
            Err(Error::Parse(ParseError::MixedKernels(_, _)))
        ));
        // same kernel through different arguments is fine
        assert!(parse_poly("sqrt(2) + sqrt(8) + z").is_ok());
    }

    #[test]
    fn i_with_sqrt_builds_tower() {
        let p = parse_poly("z^2 + (1/4)*i*sqrt(95) - 11/20").unwrap();
        assert_eq!(p.field().kind(), &FieldKind::Quartic { s: BigInt::from(95) });
        let c = p.coeff(0);
        assert!(!c.is_real());
        assert_eq!(c.real_part().to_rational(), Some(rat(-11, 20)));
    }

    #[test]
    fn sqrt_rejects_nonpositive_and_nonconstant() {
        assert!(matches!(
            parse_scalar("sqrt(-2)"),
            Err(Error::Parse(ParseError::BadSqrtArgument(_)))
        ));
        assert!(matches!(
            parse_scalar("sqrt(0)"),
            Err(Error::Parse(ParseError::BadSqrtArgument(_)))
        ));
        assert!(matches!(
            parse_poly("sqrt(z) + 1"),
            Err(Error::Parse(ParseError::BadSqrtArgument(_)))
        ));
        assert!(matches!(
            parse_poly("sqrt(i)"),
            Err(Error::Parse(ParseError::BadSqrtArgument(_)))
        ));
    }

    #[test]
    fn rational_function_in_u() {
        let f = parse_ratfunc("(u^2 + 1)/(u - 1)").unwrap();
        assert_eq!(f.numerator().degree(), Some(2));
        assert_eq!(f.denominator().degree(), Some(1));
        assert!(parse_ratfunc("z + 1").is_err());
    }

    #[test]
    fn error_positions_and_shapes() {
        assert!(matches!(
            parse_poly("z + 1.5"),
            Err(Error::Parse(ParseError::BadNumber(_)))
        ));
        assert!(matches!(
            parse_poly("z + $"),
            Err(Error::Parse(ParseError::UnexpectedChar { .. }))
        ));
        assert!(matches!(
            parse_poly("z^(2)"),
            Err(Error::Parse(ParseError::Expected { .. }))
        ));
        assert!(matches!(
            parse_poly("z^-2"),
            Err(Error::Parse(ParseError::Expected { .. }))
        ));
        assert!(matches!(
            parse_poly("w + 1"),
            Err(Error::Parse(ParseError::UnknownVariable(_)))
        ));
        assert!(matches!(
            parse_poly("(z + 1"),
            Err(Error::Parse(ParseError::UnexpectedEnd))
        ));
        assert!(matches!(parse_poly(""), Err(Error::Parse(ParseError::UnexpectedEnd))));
        assert!(matches!(
            parse_poly("z/(z - z)"),
            Err(Error::Parse(ParseError::ZeroDivisor))
        ));
    }

    #[test]
    fn renders_reparse_to_equal_scalars() {
        let samples = [
            "56/91 - 2/91*i*sqrt(35)",
            "-3/4 + i",
            "sqrt(17) - 4",
            "2",
            "i*sqrt(95)",
        ];
        for s in samples {
            let v = parse_scalar(s).unwrap();
            let round = parse_scalar(&v.render()).unwrap();
            assert_eq!(v, round, "render round-trip failed for {s}");
        }
    }
}
