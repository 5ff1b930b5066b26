//! Dense univariate polynomials over an exact coefficient field, plus the
//! structural primitives built on them: euclidean division, gcd, squarefree
//! (Yun) decomposition, resultants, and the characteristic polynomial of the
//! critical values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::ball::ComplexBall;
use crate::error::{Error, Result};
use crate::field::{ExactScalar, Field};

/// Ascending coefficients; trailing zeros are stripped, the zero polynomial
/// has an empty coefficient vector.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<ExactScalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        // Coefficient equality unifies fields, so a rational polynomial equals
        // its promotion into a larger field.
        self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})*z")?,
                _ => write!(f, "({c:?})*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    /// Render with an explicit variable name; `{:?}` always uses `z`.
    pub fn render_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match k {
                0 => out.push_str(&format!("({})", c.render())),
                1 => out.push_str(&format!("({})*{var}", c.render())),
                _ => out.push_str(&format!("({})*{var}^{k}", c.render())),
            }
        }
        out
    }

    pub fn new(field: Field, mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(ExactScalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &Field) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: ExactScalar) -> Self {
        let field = c.field().clone();
        Poly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> Self {
        Poly::constant(ExactScalar::one(field))
    }

    /// The monomial `c * z^k`.
    pub fn monomial(c: ExactScalar, k: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![ExactScalar::zero(&field); k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    /// The variable itself.
    pub fn var(field: &Field) -> Self {
        Self::monomial(ExactScalar::one(field), 1)
    }

    pub fn from_rational_coeffs(field: &Field, coeffs: &[BigRational]) -> Self {
        Poly::new(
            field.clone(),
            coeffs
                .iter()
                .map(|c| ExactScalar::from_rational_in(field, c.clone()))
                .collect(),
        )
    }

    /// Monic product of `(z - r)` over the given roots.
    pub fn from_roots(field: &Field, roots: &[ExactScalar]) -> Self {
        let mut p = Poly::one(field);
        for r in roots {
            let lin = Poly::new(
                field.clone(),
                vec![r.neg(), ExactScalar::one(field)],
            );
            p = p.mul(&lin);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| ExactScalar::zero(&self.field))
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn joined(&self, other: &Self) -> Result<(Poly, Poly)> {
        let f = Field::unify(&self.field, &other.field)?;
        Ok((self.promote(&f)?, other.promote(&f)?))
    }

    pub fn promote(&self, target: &Field) -> Result<Poly> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.promote(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(target.clone(), coeffs))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.joined(other).expect("field mismatch in poly add");
        let n = a.coeffs.len().max(b.coeffs.len());
        let field = a.field.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(a.coeff(k).add(&b.coeff(k)));
        }
        Poly::new(field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(ExactScalar::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.joined(other).expect("field mismatch in poly mul");
        if a.is_zero() || b.is_zero() {
            return Poly::zero(&a.field);
        }
        let field = a.field.clone();
        let mut out = vec![ExactScalar::zero(&field); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        Poly::new(field, out)
    }

    pub fn mul_scalar(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|x| x.mul(c)).collect(),
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::new(
            self.field.clone(),
            self.coeffs.iter().map(|x| x.scale(r)).collect(),
        )
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Poly::one(&self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, other: &Self) -> Result<(Poly, Poly)> {
        let (a, b) = self.joined(other)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = b.degree().unwrap();
        let lead_inv = b.leading().unwrap().inv()?;
        let field = a.field.clone();
        let mut rem = a.coeffs;
        if rem.len() <= db {
            return Ok((Poly::zero(&field), Poly::new(field, rem)));
        }
        let mut quo = vec![ExactScalar::zero(&field); rem.len().saturating_sub(db)];
        while rem.len() > db {
            let dr = rem.len() - 1;
            let c = rem[dr].mul(&lead_inv);
            if !c.is_zero() {
                for (j, bj) in b.coeffs.iter().enumerate().take(db) {
                    let adj = c.mul(bj);
                    rem[dr - db + j] = rem[dr - db + j].sub(&adj);
                }
                quo[dr - db] = c;
            }
            rem.pop();
            while rem.last().is_some_and(ExactScalar::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::new(field.clone(), quo), Poly::new(field, rem)))
    }

    /// Division that must be exact; a nonzero remainder is an internal error.
    pub fn exact_div(&self, other: &Self) -> Result<Poly> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&BigRational::from_integer(BigInt::from(k))))
            .collect();
        Poly::new(self.field.clone(), coeffs)
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let field = Field::unify(&self.field, x.field()).expect("field mismatch in eval");
        let p = self.promote(&field).unwrap();
        let x = x.promote(&field).unwrap();
        let mut acc = ExactScalar::zero(&field);
        for c in p.coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// Horner evaluation in ball arithmetic; the result encloses the true
    /// value of the polynomial everywhere on the input ball.
    pub fn eval_ball(&self, x: &ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&c.embed(prec));
        }
        acc
    }

    pub fn compose(&self, inner: &Poly) -> Poly {
        let field = Field::unify(&self.field, &inner.field).expect("field mismatch in compose");
        let inner = inner.promote(&field).unwrap();
        let mut acc = Poly::zero(&field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add(&Poly::constant(c.promote(&field).unwrap()));
        }
        acc
    }

    /// Make monic; returns the leading coefficient that was divided out.
    pub fn monic(&self) -> Result<(ExactScalar, Poly)> {
        let lc = self.leading().ok_or(Error::DivisionByZero)?.clone();
        let inv = lc.inv()?;
        Ok((lc, self.mul_scalar(&inv)))
    }

    /// Monic gcd via the euclidean algorithm, renormalizing each remainder to
    /// keep coefficient growth in check.
    pub fn gcd(&self, other: &Self) -> Result<Poly> {
        let (mut a, mut b) = self.joined(other)?;
        if a.is_zero() {
            return Ok(if b.is_zero() { b } else { b.monic()?.1 });
        }
        if b.is_zero() {
            return Ok(a.monic()?.1);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let (_, r) = a.divrem(&b)?;
            if r.is_zero() {
                return Ok(b.monic()?.1);
            }
            a = b;
            b = r.monic()?.1;
        }
    }

    /// Yun squarefree decomposition: `self = unit * prod part_i ^ mult_i`
    /// with the parts monic, squarefree, pairwise coprime, and multiplicities
    /// strictly increasing.
    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomposition> {
        let (unit, f) = self.monic()?;
        if f.is_constant() {
            return Ok(SquarefreeDecomposition { unit, parts: Vec::new() });
        }
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = f.exact_div(&a0)?;
        let mut c = df.exact_div(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut parts = Vec::new();
        let mut mult = 1usize;
        loop {
            let a = b.gcd(&d)?;
            if !a.is_constant() {
                parts.push((a.clone(), mult));
            }
            b = b.exact_div(&a)?;
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a)?;
            d = c.sub(&b.derivative());
            mult += 1;
        }
        Ok(SquarefreeDecomposition { unit, parts })
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_constant() {
            return Ok(true);
        }
        let g = self.gcd(&self.derivative())?;
        Ok(g.is_constant())
    }

    /// Resultant of `self` and `other` via the euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> Result<ExactScalar> {
        let (a, b) = self.joined(other)?;
        let field = a.field.clone();
        if a.is_zero() || b.is_zero() {
            return Ok(ExactScalar::zero(&field));
        }
        fn go(a: &Poly, b: &Poly, field: &Field) -> Result<ExactScalar> {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                // Res(A, const c) = c^deg A
                return Ok(b.leading().unwrap().pow(da as u32));
            }
            if da < db {
                let sign = if (da * db) % 2 == 1 {
                    ExactScalar::from_i64_in(field, -1)
                } else {
                    ExactScalar::one(field)
                };
                return Ok(sign.mul(&go(b, a, field)?));
            }
            let (_, r) = a.divrem(b)?;
            if r.is_zero() {
                return Ok(ExactScalar::zero(field));
            }
            let dr = r.degree().unwrap();
            let sign = if (da * db) % 2 == 1 {
                ExactScalar::from_i64_in(field, -1)
            } else {
                ExactScalar::one(field)
            };
            let factor = b.leading().unwrap().pow((da - dr) as u32);
            Ok(sign.mul(&factor).mul(&go(b, &r, field)?))
        }
        go(&a, &b, &field)
    }

    /// Coordinates of the coefficients as rational polynomials: writing each
    /// coefficient as sum_j c_j theta^j, returns one rational-coefficient
    /// polynomial per basis index j.
    pub fn coordinate_polys(&self) -> Vec<Poly> {
        let d = self.field.degree();
        let qf = Field::rational();
        (0..d)
            .map(|j| {
                let coeffs: Vec<BigRational> = self
                    .coeffs
                    .iter()
                    .map(|c| c.coords()[j].clone())
                    .collect();
                Poly::from_rational_coeffs(&qf, &coeffs)
            })
            .collect()
    }

    /// The polynomial whose roots are the critical values of `self`, with
    /// multiplicities matching the critical points:
    ///
    ///   D(y) = lc(P')^n * prod_i (P(d_i) - y)^(q_i)
    ///
    /// where the d_i are the roots of P' with multiplicity q_i and
    /// n = deg P. Computed as a characteristic polynomial of P applied to the
    /// companion matrix of P', which avoids remainder-sequence blowup.
    pub fn critical_value_poly(&self) -> Result<Poly> {
        let n = self.degree().ok_or(Error::DivisionByZero)?;
        if n < 2 {
            return Err(Error::Unsupported(
                "critical values need degree at least 2".into(),
            ));
        }
        let dp = self.derivative();
        let (lc, g) = dp.monic()?;
        let m = g.degree().unwrap();
        let field = self.field.clone();

        // M = P(C) for the companion matrix C of the monic derivative.
        // Right-multiplication by C shifts columns and folds the last one.
        let g_low: Vec<ExactScalar> = (0..m).map(|k| g.coeff(k)).collect();
        let zero = ExactScalar::zero(&field);
        let mut mat: Vec<Vec<ExactScalar>> = vec![vec![zero.clone(); m]; m];
        let lead = self.leading().unwrap().clone();
        for (i, row) in mat.iter_mut().enumerate() {
            row[i] = lead.clone();
        }
        for k in (0..n).rev() {
            // mat <- mat * C + coeff(k) * I. Column j of mat*C is column j+1
            // of mat; the last column is -(mat * g_low).
            let mut next: Vec<Vec<ExactScalar>> = vec![vec![zero.clone(); m]; m];
            for i in 0..m {
                for j in 0..m - 1 {
                    next[i][j] = mat[i][j + 1].clone();
                }
                let mut fold = ExactScalar::zero(&field);
                for (l, gl) in g_low.iter().enumerate() {
                    if !gl.is_zero() && !mat[i][l].is_zero() {
                        fold = fold.add(&mat[i][l].mul(gl));
                    }
                }
                next[i][m - 1] = next[i][m - 1].sub(&fold);
            }
            let ck = self.coeff(k);
            for (i, row) in next.iter_mut().enumerate() {
                let v = std::mem::replace(&mut row[i], ExactScalar::zero(&field));
                row[i] = v.add(&ck);
            }
            mat = next;
        }

        // Faddeev-LeVerrier: char(y) = y^m + c_1 y^(m-1) + ... + c_m.
        let mut cs = Vec::with_capacity(m);
        let mut work = mat.clone();
        for k in 1..=m {
            let tr = (0..m).fold(ExactScalar::zero(&field), |acc, i| acc.add(&work[i][i]));
            let ck = tr.scale(&BigRational::new(BigInt::from(-1), BigInt::from(k)));
            cs.push(ck.clone());
            if k == m {
                break;
            }
            for (i, row) in work.iter_mut().enumerate() {
                let v = std::mem::replace(&mut row[i], ExactScalar::zero(&field));
                row[i] = v.add(&ck);
            }
            // work <- M * work
            let mut next = vec![vec![ExactScalar::zero(&field); m]; m];
            for i in 0..m {
                for l in 0..m {
                    if mat[i][l].is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        if work[l][j].is_zero() {
                            continue;
                        }
                        next[i][j] = next[i][j].add(&mat[i][l].mul(&work[l][j]));
                    }
                }
            }
            work = next;
        }

        // D(y) = lc(P')^n * (-1)^(n-1) * char(y); deg char = m = n - 1.
        let mut coeffs = vec![ExactScalar::zero(&field); m + 1];
        coeffs[m] = ExactScalar::one(&field);
        for (k, c) in cs.iter().enumerate() {
            coeffs[m - 1 - k] = c.clone();
        }
        let scale = lc.pow(n as u32);
        let sign = if (n - 1) % 2 == 1 {
            scale.neg()
        } else {
            scale
        };
        Ok(Poly::new(field, coeffs).mul_scalar(&sign))
    }

    /// Largest power of `(z - root)` dividing `self`, together with the
    /// cofactor.
    pub fn split_linear_power(&self, root: &ExactScalar) -> Result<(usize, Poly)> {
        let field = Field::unify(&self.field, root.field())?;
        let lin = Poly::new(
            field.clone(),
            vec![root.promote(&field)?.neg(), ExactScalar::one(&field)],
        );
        let mut mult = 0usize;
        let mut rest = self.promote(&field)?;
        loop {
            if rest.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let (q, r) = rest.divrem(&lin)?;
            if r.is_zero() {
                mult += 1;
                rest = q;
            } else {
                return Ok((mult, rest));
            }
        }
    }
}

/// Result of Yun's algorithm.
#[derive(Clone, Debug)]
pub struct SquarefreeDecomposition {
    pub unit: ExactScalar,
    /// Monic squarefree factors with their multiplicities, ascending.
    pub parts: Vec<(Poly, usize)>,
}

impl SquarefreeDecomposition {
    pub fn reassemble(&self) -> Poly {
        let mut p = Poly::constant(self.unit.clone());
        for (part, mult) in &self.parts {
            p = p.mul(&part.pow(*mult));
        }
        p
    }

    /// Radical: product of the distinct squarefree parts.
    pub fn radical(&self) -> Poly {
        let field = self.unit.field().clone();
        let mut p = Poly::one(&field);
        for (part, _) in &self.parts {
            p = p.mul(part);
        }
        p
    }
}
