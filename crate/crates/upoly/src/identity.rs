//! Symbolic verification that two rational functions f, g satisfy
//! P(f) = P(g) with f != g, plus the closed-form witness family for the
//! quintic refutation rule.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{ExactScalar, Field};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::report::WitnessJson;

/// A verified (P, f, g) triple: P(f) = P(g) identically in the formal
/// variable while f and g are distinct.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub p: Poly,
    pub f: RationalFunction,
    pub g: RationalFunction,
    pub note: String,
}

impl WitnessPair {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            p: format!("{:?}", self.p),
            f: self.f.render_var("u"),
            g: self.g.render_var("u"),
            note: self.note.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub holds: bool,
    pub distinct: bool,
    /// Largest numerator degree materialized while reducing P(f) - P(g).
    pub peak_degree: usize,
}

/// Decide whether P(f) = P(g) identically and whether f != g, by exact
/// rational-function reduction. When the two compositions share a
/// denominator the difference is taken numerator-to-numerator, which keeps
/// the intermediate degree at max(deg num) instead of the cross-multiplied
/// sum.
pub fn verify_pair(
    p: &Poly,
    f: &RationalFunction,
    g: &RationalFunction,
) -> Result<PairCheck> {
    let pf = f.compose_into(p)?;
    let pg = g.compose_into(p)?;
    let mut peak = [&pf, &pg]
        .iter()
        .flat_map(|r| [r.numerator().degree(), r.denominator().degree()])
        .flatten()
        .max()
        .unwrap_or(0);
    let holds = if pf.denominator() == pg.denominator() {
        let diff = pf.numerator().sub(pg.numerator());
        peak = peak.max(diff.degree().unwrap_or(0));
        diff.is_zero()
    } else {
        let diff = pf.sub(&pg)?;
        let cross = pf
            .numerator()
            .degree()
            .unwrap_or(0)
            .saturating_add(pg.denominator().degree().unwrap_or(0));
        peak = peak.max(cross).max(diff.numerator().degree().unwrap_or(0));
        diff.is_zero()
    };
    let distinct = !f.sub(g)?.is_zero();
    Ok(PairCheck { holds, distinct, peak_degree: peak })
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Witness pair for P = z^5 + a z^4 + (a^2/4) z^3 + c: in the formal
/// variable u,
///
///   f = -a (u^3 + (u^2+1)(u^4+1)) / (2 (u^2+u^4+u^6+u^8+1)),  g = u^2 f,
///
/// and P(f) = P(g) with f != g. Requires a != 0 (otherwise f vanishes
/// identically). The pair is re-verified before being returned.
pub fn tt8_witness(a: &ExactScalar, c: &ExactScalar) -> Result<WitnessPair> {
    if a.is_zero() {
        return Err(Error::Unsupported(
            "witness family needs a nonzero quartic coefficient".into(),
        ));
    }
    let field = Field::unify(a.field(), c.field())?;
    let a = a.promote(&field)?;
    let c = c.promote(&field)?;
    let u = Poly::var(&field);
    let one = Poly::one(&field);

    let u2 = u.pow(2);
    let u3 = u.pow(3);
    let u4 = u.pow(4);
    let num = u3
        .add(&u2.add(&one).mul(&u4.add(&one)))
        .mul_scalar(&a.neg());
    let den = u2
        .add(&u.pow(4))
        .add(&u.pow(6))
        .add(&u.pow(8))
        .add(&one)
        .scale(&q(2));
    let f = RationalFunction::new(num, den)?;
    let g = RationalFunction::from_poly(u2).mul(&f)?;

    let a2_over_4 = a.mul(&a).scale(&BigRational::new(BigInt::from(1), BigInt::from(4)));
    let mut coeffs = vec![ExactScalar::zero(&field); 6];
    coeffs[5] = ExactScalar::one(&field);
    coeffs[4] = a;
    coeffs[3] = a2_over_4;
    coeffs[0] = c;
    let p = Poly::new(field, coeffs);

    let check = verify_pair(&p, &f, &g)?;
    if !check.holds || !check.distinct {
        return Err(Error::Internal(format!(
            "witness construction failed verification: holds={}, distinct={}",
            check.holds, check.distinct
        )));
    }
    Ok(WitnessPair {
        p,
        f,
        g,
        note: "formal variable u stands for exp(z); g = u^2 * f".into(),
    })
}
