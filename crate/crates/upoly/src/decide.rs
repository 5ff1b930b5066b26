//! The decision engine: applies the uniqueness-polynomial rules in a fixed
//! priority order and returns a verdict carrying a replayable certificate of
//! every condition evaluated. Complete (iff) rules run before sufficient
//! rules; cheap threshold rules run before the ones needing polynomial
//! division or gcds of degree-n polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::ExactScalar;
use crate::identity::{tt8_witness, WitnessPair};
use crate::poly::Poly;
use crate::report::{CertItemJson, UrsJson, VerdictJson, URS_SCHEMA, VERDICT_SCHEMA};
use crate::structure::{StructureReport, ValueClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QueryField {
    Complex,
    Padic,
}

impl QueryField {
    pub fn label(&self) -> &'static str {
        match self {
            QueryField::Complex => "complex",
            QueryField::Padic => "padic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionClass {
    Meromorphic,
    Entire,
}

impl FunctionClass {
    pub fn label(&self) -> &'static str {
        match self {
            FunctionClass::Meromorphic => "meromorphic",
            FunctionClass::Entire => "entire",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub field: QueryField,
    pub class: FunctionClass,
}

impl Query {
    pub fn new(field: QueryField, class: FunctionClass) -> Self {
        Query { field, class }
    }

    pub const ALL: [Query; 4] = [
        Query { field: QueryField::Complex, class: FunctionClass::Meromorphic },
        Query { field: QueryField::Complex, class: FunctionClass::Entire },
        Query { field: QueryField::Padic, class: FunctionClass::Meromorphic },
        Query { field: QueryField::Padic, class: FunctionClass::Entire },
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Proven,
    Refuted,
    Unknown,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Proven => "Proven",
            Status::Refuted => "Refuted",
            Status::Unknown => "Unknown",
        }
    }
}

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    Degree1,
    Remark1_2,
    LiYang_deg23,
    ThmA,
    ThmB,
    ThmC,
    Thm_tt7,
    Thm_tt8,
    Thm3_1,
    Thm3_2,
    Thm3_3,
    Thm3_4,
    Thm3_5,
    Thm3_6,
    Thm3_7,
}

impl TheoremId {
    pub fn label(&self) -> &'static str {
        match self {
            TheoremId::Degree1 => "Degree1",
            TheoremId::Remark1_2 => "Remark1_2",
            TheoremId::LiYang_deg23 => "LiYang_deg23",
            TheoremId::ThmA => "ThmA",
            TheoremId::ThmB => "ThmB",
            TheoremId::ThmC => "ThmC",
            TheoremId::Thm_tt7 => "Thm_tt7",
            TheoremId::Thm_tt8 => "Thm_tt8",
            TheoremId::Thm3_1 => "Thm3_1",
            TheoremId::Thm3_2 => "Thm3_2",
            TheoremId::Thm3_3 => "Thm3_3",
            TheoremId::Thm3_4 => "Thm3_4",
            TheoremId::Thm3_5 => "Thm3_5",
            TheoremId::Thm3_6 => "Thm3_6",
            TheoremId::Thm3_7 => "Thm3_7",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertItem {
    pub condition: String,
    pub value: String,
    pub ok: bool,
}

fn item(condition: impl Into<String>, value: impl Into<String>, ok: bool) -> CertItem {
    CertItem { condition: condition.into(), value: value.into(), ok }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub theorem: Option<TheoremId>,
    pub query: Query,
    pub certificate: Vec<CertItem>,
    pub witness: Option<WitnessPair>,
}

impl Verdict {
    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            schema: VERDICT_SCHEMA.into(),
            status: self.status.label().into(),
            theorem: self
                .theorem
                .map(|t| t.label().to_string())
                .unwrap_or_else(|| "none".into()),
            field: self.query.field.label().into(),
            class: self.query.class.label().into(),
            certificate: self
                .certificate
                .iter()
                .map(|c| CertItemJson {
                    condition: c.condition.clone(),
                    value: c.value.clone(),
                    ok: c.ok,
                })
                .collect(),
            witness: self.witness.as_ref().map(|w| w.to_json()),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let head = match self.theorem {
            Some(t) => format!("{} ({})", self.status.label(), t.label()),
            None => self.status.label().to_string(),
        };
        out.push_str(&format!(
            "{head}  [field: {}, class: {}]\n",
            self.query.field.label(),
            self.query.class.label()
        ));
        out.push_str("certificate:\n");
        for c in &self.certificate {
            out.push_str(&format!(
                "  [{}] {}  ::  {}\n",
                if c.ok { "ok" } else { "--" },
                c.condition,
                c.value
            ));
        }
        if let Some(w) = &self.witness {
            out.push_str("witness:\n");
            out.push_str(&format!("  P = {:?}\n", w.p));
            out.push_str(&format!("  f = {}\n", w.f));
            out.push_str(&format!("  g = {}\n", w.g));
            out.push_str(&format!("  {}\n", w.note));
        }
        out
    }
}

enum Ruling {
    Proven(TheoremId, Vec<CertItem>),
    Refuted(TheoremId, Vec<CertItem>, Option<WitnessPair>),
    Pass(Vec<CertItem>),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn proven(t: TheoremId, cert: Vec<CertItem>, query: Query) -> Verdict {
    Verdict { status: Status::Proven, theorem: Some(t), query, certificate: cert, witness: None }
}

fn refuted(
    t: TheoremId,
    cert: Vec<CertItem>,
    query: Query,
    witness: Option<WitnessPair>,
) -> Verdict {
    Verdict { status: Status::Refuted, theorem: Some(t), query, certificate: cert, witness }
}

const MONOTONE: &str = "a meromorphic uniqueness proof covers entire functions";

/// Decide whether P is a uniqueness polynomial for the queried field and
/// function class. `r` must be the structure report of `p`.
pub fn decide(p: &Poly, r: &StructureReport, query: Query) -> Result<Verdict> {
    if p.degree() != Some(r.n) {
        return Err(Error::Internal(
            "structure report does not describe this polynomial".into(),
        ));
    }
    let mut diag: Vec<CertItem> = Vec::new();

    if r.n == 1 {
        return Ok(proven(
            TheoremId::Degree1,
            vec![item("degree == 1", "P(f) = P(g) is linear in f - g", true)],
            query,
        ));
    }

    if r.k <= 1 {
        let mut cert = vec![item("derivative index k <= 1", format!("k = {}", r.k), true)];
        if query.class == FunctionClass::Entire {
            cert.push(item(
                "k <= 1 forces P = alpha*(z-beta)^n + gamma, symmetric under rotation about beta",
                "precomposition with a nontrivial n-th root of unity preserves P",
                true,
            ));
        }
        return Ok(refuted(TheoremId::Remark1_2, cert, query, None));
    }

    if query.field == QueryField::Complex && (r.n == 2 || r.n == 3) {
        let mut cert = vec![item("degree in {2, 3} over C", format!("degree = {}", r.n), true)];
        if query.class == FunctionClass::Meromorphic {
            cert.push(item(
                "an entire refutation settles the meromorphic query",
                "not UPE => not UPM",
                true,
            ));
        }
        return Ok(refuted(TheoremId::LiYang_deg23, cert, query, None));
    }

    if query.field == QueryField::Complex && r.n == 4 {
        if query.class == FunctionClass::Meromorphic {
            return Ok(refuted(
                TheoremId::ThmC,
                vec![item("degree == 4 over C, meromorphic class", "degree = 4", true)],
                query,
                None,
            ));
        }
        return match check_quartic(p, r)? {
            Ruling::Proven(t, cert) => Ok(proven(t, cert, query)),
            Ruling::Refuted(t, cert, w) => Ok(refuted(t, cert, query, w)),
            Ruling::Pass(cert) => {
                diag.extend(cert);
                Ok(Verdict {
                    status: Status::Unknown,
                    theorem: None,
                    query,
                    certificate: diag,
                    witness: None,
                })
            }
        };
    }

    if r.is_cip {
        let ruling = match query.field {
            QueryField::Complex => check_thm_a(r),
            QueryField::Padic => check_thm_b(r),
        }?;
        match ruling {
            Ruling::Proven(t, mut cert) => {
                if query.class == FunctionClass::Entire {
                    cert.push(item(MONOTONE, "UPM => UPE", true));
                }
                return Ok(proven(t, cert, query));
            }
            Ruling::Refuted(t, cert, w) => {
                if query.class == FunctionClass::Meromorphic {
                    return Ok(refuted(t, cert, query, w));
                }
                diag.extend(cert);
                diag.push(item(
                    format!("{}: refutes the meromorphic query only", t.label()),
                    "the entire query stays open",
                    false,
                ));
            }
            Ruling::Pass(cert) => diag.extend(cert),
        }
    }

    for rule in [
        check_cheap_thresholds,
        check_general_thresholds,
        check_band_3_7,
        check_rule_3_5,
        check_rule_3_6,
    ] {
        match rule(p, r, query)? {
            Ruling::Proven(t, cert) => return Ok(proven(t, cert, query)),
            Ruling::Refuted(t, cert, w) => return Ok(refuted(t, cert, query, w)),
            Ruling::Pass(cert) => diag.extend(cert),
        }
    }

    if query.field == QueryField::Complex && query.class == FunctionClass::Meromorphic {
        match check_tt8(p, r)? {
            Ruling::Proven(t, cert) => return Ok(proven(t, cert, query)),
            Ruling::Refuted(t, cert, w) => return Ok(refuted(t, cert, query, w)),
            Ruling::Pass(cert) => diag.extend(cert),
        }
    }

    Ok(Verdict { status: Status::Unknown, theorem: None, query, certificate: diag, witness: None })
}

/// Verdicts for all four (field, class) queries, in `Query::ALL` order.
pub fn decide_all(p: &Poly, r: &StructureReport) -> Result<Vec<Verdict>> {
    Query::ALL.iter().map(|q| decide(p, r, *q)).collect()
}

fn critical_multiplicities(r: &StructureReport) -> Vec<usize> {
    r.columns.iter().flat_map(|c| c.members.iter().map(|m| m.q)).collect()
}

fn check_thm_a(r: &StructureReport) -> Result<Ruling> {
    let mut cert = vec![item("ThmA: P is CIP", "is_cip = true", true)];
    if !r.p_squarefree {
        cert.push(item("ThmA: P has no multiple zeros", "p_squarefree = false", false));
        return Ok(Ruling::Pass(cert));
    }
    cert.push(item("ThmA: P has no multiple zeros", "p_squarefree = true", true));
    let qs = critical_multiplicities(r);
    let sum: usize = qs.iter().sum();
    let mut pair_sum = 0usize;
    for l in 0..qs.len() {
        for m in l + 1..qs.len() {
            pair_sum += qs[l] * qs[m];
        }
    }
    let ok = pair_sum > sum;
    cert.push(item(
        "ThmA: sum_{l<m} q_l*q_m > sum_l q_l",
        format!("{pair_sum} > {sum} with q = {qs:?}"),
        ok,
    ));
    Ok(if ok {
        Ruling::Proven(TheoremId::ThmA, cert)
    } else {
        Ruling::Refuted(TheoremId::ThmA, cert, None)
    })
}

fn check_thm_b(r: &StructureReport) -> Result<Ruling> {
    let mut cert = vec![item("ThmB: P is CIP", "is_cip = true", true)];
    let qs = critical_multiplicities(r);
    if r.k >= 3 {
        cert.push(item("ThmB: k >= 3", format!("k = {}", r.k), true));
        return Ok(Ruling::Proven(TheoremId::ThmB, cert));
    }
    cert.push(item("ThmB: k >= 3", format!("k = {}", r.k), false));
    let min_q = qs.iter().copied().min().unwrap_or(0);
    let ok = r.k == 2 && min_q >= 2;
    cert.push(item(
        "ThmB: k == 2 with min(q_1, q_2) >= 2",
        format!("k = {}, q = {qs:?}", r.k),
        ok,
    ));
    Ok(if ok {
        Ruling::Proven(TheoremId::ThmB, cert)
    } else {
        Ruling::Refuted(TheoremId::ThmB, cert, None)
    })
}

/// Entire/complex ruling for quartics with k >= 2 via the coefficient
/// invariant I = a3^3/8 - a2*a3/2 + a1 of the monic form: UPE over C iff
/// I != 0, which coincides with critical injectivity. On I = 0 the two
/// non-central critical points provably share the value
/// a0 - (a3^2 - 4*a2)^2 / 64; both facts are cross-checked exactly.
fn check_quartic(p: &Poly, r: &StructureReport) -> Result<Ruling> {
    let (_, m) = p.monic()?;
    let field = m.field().clone();
    let a3 = m.coeff(3);
    let a2 = m.coeff(2);
    let a1 = m.coeff(1);
    let a0 = m.coeff(0);
    let i_val = a3
        .pow(3)
        .scale(&rat(1, 8))
        .sub(&a2.mul(&a3).scale(&rat(1, 2)))
        .add(&a1);
    let nonzero = !i_val.is_zero();
    let mut cert = vec![
        item("Thm_tt7: degree == 4 and k >= 2", format!("degree = 4, k = {}", r.k), true),
        item(
            "Thm_tt7: I = a3^3/8 - a2*a3/2 + a1 != 0 on the monic form",
            format!("I = {}", i_val.render()),
            nonzero,
        ),
    ];
    if nonzero != r.is_cip {
        return Err(Error::Internal(format!(
            "quartic invariant disagrees with the structure report: I = {}, is_cip = {}",
            i_val.render(),
            r.is_cip
        )));
    }
    cert.push(item(
        "Thm_tt7: I != 0 coincides with critical injectivity",
        format!("is_cip = {}", r.is_cip),
        true,
    ));
    if nonzero {
        return Ok(Ruling::Proven(TheoremId::Thm_tt7, cert));
    }
    let w = a3.pow(2).sub(&a2.scale(&rat(4, 1)));
    let shared = a0.sub(&w.pow(2).scale(&rat(1, 64)));
    let m_factor = Poly::new(
        field.clone(),
        vec![
            a2.scale(&rat(4, 1)).sub(&a3.pow(2)).scale(&rat(1, 8)),
            a3.scale(&rat(1, 2)),
            ExactScalar::one(&field),
        ],
    );
    let shifted = m.sub(&Poly::constant(shared.clone()));
    let (_, rem) = shifted.divrem(&m_factor)?;
    if !rem.is_zero() {
        return Err(Error::Internal(
            "colliding quartic critical points do not share the predicted value".into(),
        ));
    }
    cert.push(item(
        "Thm_tt7: colliding critical points share a0 - (a3^2 - 4*a2)^2/64",
        format!("shared value = {}", shared.render()),
        true,
    ));
    Ok(Ruling::Refuted(TheoremId::Thm_tt7, cert, None))
}

fn squarefree_gate(rule: &str, r: &StructureReport, cert: &mut Vec<CertItem>) -> bool {
    if r.p_squarefree {
        true
    } else {
        cert.push(item(
            format!("{rule}: gated on squarefree P"),
            "p_squarefree = false",
            false,
        ));
        false
    }
}

fn check_cheap_thresholds(_p: &Poly, r: &StructureReport, query: Query) -> Result<Ruling> {
    let (t_id, tp_needed) = match query.field {
        QueryField::Padic => (TheoremId::Thm3_3, 3usize),
        QueryField::Complex => (TheoremId::Thm3_4, 4usize),
    };
    let mut cert = Vec::new();
    if !squarefree_gate(t_id.label(), r, &mut cert) {
        return Ok(Ruling::Pass(cert));
    }
    let ok = r.t >= 3 && r.t_prime >= tp_needed;
    cert.push(item(
        format!("{}: t >= 3 and t' >= {tp_needed}", t_id.label()),
        format!("t = {}, t' = {}", r.t, r.t_prime),
        ok,
    ));
    if ok {
        if query.class == FunctionClass::Entire {
            cert.push(item(MONOTONE, "UPM => UPE", true));
        }
        Ok(Ruling::Proven(t_id, cert))
    } else {
        Ok(Ruling::Pass(cert))
    }
}

fn check_general_thresholds(_p: &Poly, r: &StructureReport, query: Query) -> Result<Ruling> {
    let (t_id, tp_mero, tp_entire) = match query.field {
        QueryField::Padic => (TheoremId::Thm3_1, 5usize, 4usize),
        QueryField::Complex => (TheoremId::Thm3_2, 6usize, 5usize),
    };
    let tp_needed = match query.class {
        FunctionClass::Meromorphic => tp_mero,
        FunctionClass::Entire => tp_entire,
    };
    let mut cert = Vec::new();
    if !squarefree_gate(t_id.label(), r, &mut cert) {
        return Ok(Ruling::Pass(cert));
    }
    let ok = r.t >= 1 && r.t_prime >= tp_needed;
    cert.push(item(
        format!(
            "{}: t >= 1 and t' >= {tp_needed} ({} threshold)",
            t_id.label(),
            query.class.label()
        ),
        format!("t = {}, t' = {}", r.t, r.t_prime),
        ok,
    ));
    Ok(if ok { Ruling::Proven(t_id, cert) } else { Ruling::Pass(cert) })
}

/// Exact band comparison for the two-column rule: lower bound
/// (q1-1)/2 < q3 and upper bound q3 </<= (q1-2)/2 + sqrt(q1^2-4q1-4)/2,
/// decided by sign analysis and squaring.
fn band_compare(q1: usize, q3: usize, strict: bool) -> (bool, bool, String, String) {
    let (q1, q3) = (q1 as i64, q3 as i64);
    let lower_ok = 2 * q3 > q1 - 1;
    let lower = format!("{} < {q3}", rat(q1 - 1, 2));
    let x = 2 * q3 - q1 + 2;
    let disc = q1 * q1 - 4 * q1 - 4;
    let upper_ok = if x < 0 {
        true
    } else if strict {
        x * x < disc
    } else {
        x * x <= disc
    };
    let rel = if strict { "<" } else { "<=" };
    let upper = format!(
        "{q3} {rel} ({} + sqrt({disc}))/2; squared comparison: ({x})^2 = {} {rel} {disc}",
        q1 - 2,
        x * x,
    );
    (lower_ok, upper_ok, lower, upper)
}

fn check_band_3_7(_p: &Poly, r: &StructureReport, query: Query) -> Result<Ruling> {
    let mut cert = Vec::new();
    if !squarefree_gate("Thm3_7", r, &mut cert) {
        return Ok(Ruling::Pass(cert));
    }
    let shape_ok = !r.is_cip
        && r.t == 2
        && r.t_prime == 3
        && r.k == 3
        && r.columns.len() == 2
        && r.columns[0].members.len() == 1
        && r.columns[1].members.len() == 2
        && r.columns[0].members[0].q == 2
        && r.columns[0].derived.b_h2.len() == 1
        && r.columns[1].derived.b_h2.len() == 2;
    cert.push(item(
        "Thm3_7: NCIP, t == 2, t' == 3, P' = (z-d1)^q1 (z-d2)^2 (z-d3)^q3 \
         with B1(H2) = {d1, d3}, B2(H2) = {d2}",
        format!(
            "is_cip = {}, t = {}, t' = {}, k = {}",
            r.is_cip, r.t, r.t_prime, r.k
        ),
        shape_ok,
    ));
    if !shape_ok {
        return Ok(Ruling::Pass(cert));
    }
    let pair = &r.columns[1];
    let q1 = pair.members.iter().map(|m| m.q).max().unwrap();
    let q3 = pair.members.iter().map(|m| m.q).min().unwrap();
    let q1_ok = q1 >= 6;
    cert.push(item("Thm3_7: q1 >= 6", format!("q1 = {q1}, q3 = {q3}"), q1_ok));
    if !q1_ok {
        return Ok(Ruling::Pass(cert));
    }
    let strict = query.field == QueryField::Complex;
    let (lo, hi, lo_text, hi_text) = band_compare(q1, q3, strict);
    cert.push(item("Thm3_7: (q1-1)/2 < q3", lo_text, lo));
    cert.push(item(
        if strict {
            "Thm3_7: q3 < (q1-2)/2 + sqrt(q1^2-4q1-4)/2 (complex branch)"
        } else {
            "Thm3_7: q3 <= (q1-2)/2 + sqrt(q1^2-4q1-4)/2 (padic branch)"
        },
        hi_text,
        hi,
    ));
    if lo && hi {
        if query.class == FunctionClass::Entire {
            cert.push(item(MONOTONE, "UPM => UPE", true));
        }
        Ok(Ruling::Proven(TheoremId::Thm3_7, cert))
    } else {
        Ok(Ruling::Pass(cert))
    }
}

struct MarkedColumn<'a> {
    column: &'a ValueClass,
    member: usize,
    q: usize,
}

/// The member carrying the column's largest multiplicity, required to be
/// unrepeated (then it always lies in B(H2)).
fn marked_point<'a>(c: &'a ValueClass) -> Option<MarkedColumn<'a>> {
    let qmax = c.members.iter().map(|m| m.q).max()?;
    let holders: Vec<usize> = (0..c.members.len())
        .filter(|&i| c.members[i].q == qmax)
        .collect();
    if holders.len() != 1 {
        return None;
    }
    let member = holders[0];
    if !c.derived.b_h2.contains(&member) {
        return None;
    }
    Some(MarkedColumn { column: c, member, q: qmax })
}

fn linear_factor(d: &ExactScalar) -> Poly {
    let field = d.field().clone();
    Poly::new(field.clone(), vec![d.neg(), ExactScalar::one(&field)])
}

fn check_rule_3_5(p: &Poly, r: &StructureReport, query: Query) -> Result<Ruling> {
    if query.field != QueryField::Complex {
        return Ok(Ruling::Pass(Vec::new()));
    }
    let mut cert = Vec::new();
    if !squarefree_gate("Thm3_5", r, &mut cert) {
        return Ok(Ruling::Pass(cert));
    }
    if r.t < 3 {
        cert.push(item("Thm3_5: t >= 3", format!("t = {}", r.t), false));
        return Ok(Ruling::Pass(cert));
    }
    cert.push(item("Thm3_5: t >= 3", format!("t = {}", r.t), true));
    let contrib: Vec<usize> = (0..r.columns.len())
        .filter(|&i| !r.columns[i].derived.b_h2.is_empty())
        .collect();

    let mut first_failure: Option<CertItem> = None;
    let mut note = |it: CertItem| {
        if first_failure.is_none() {
            first_failure = Some(it);
        }
    };

    for a in 0..contrib.len() {
        for b in a + 1..contrib.len() {
            for c in b + 1..contrib.len() {
                let picks = [contrib[a], contrib[b], contrib[c]];
                let marked: Vec<MarkedColumn> = picks
                    .iter()
                    .filter_map(|&i| marked_point(&r.columns[i]))
                    .collect();
                if marked.len() != 3 {
                    note(item(
                        "Thm3_5: each chosen column's maximal multiplicity is unrepeated",
                        format!("columns {picks:?}: a maximal multiplicity repeats"),
                        false,
                    ));
                    continue;
                }
                let qs: Vec<usize> = marked.iter().map(|m| m.q).collect();
                let qmax = *qs.iter().max().unwrap();
                if qmax < 2 {
                    note(item(
                        "Thm3_5: max(q1, q2, q3) >= 2",
                        format!("columns {picks:?}: q = {qs:?}"),
                        false,
                    ));
                    continue;
                }
                let base = item(
                    "Thm3_5: three columns with nonempty B(H2), maximal multiplicities unrepeated, max >= 2",
                    format!("columns {picks:?} with q = {qs:?}"),
                    true,
                );
                if qs.iter().all(|&q| q >= 2) {
                    cert.push(base);
                    cert.push(item(
                        "Thm3_5 (i): min(q1, q2, q3) >= 2",
                        format!("q = {qs:?}"),
                        true,
                    ));
                    if query.class == FunctionClass::Entire {
                        cert.push(item(MONOTONE, "UPM => UPE", true));
                    }
                    return Ok(Ruling::Proven(TheoremId::Thm3_5, cert));
                }
                if r.is_cip {
                    cert.push(base);
                    cert.push(item("Thm3_5 (ii): P is CIP", "is_cip = true", true));
                    if query.class == FunctionClass::Entire {
                        cert.push(item(MONOTONE, "UPM => UPE", true));
                    }
                    return Ok(Ruling::Proven(TheoremId::Thm3_5, cert));
                }
                if r.t_prime >= 4 {
                    cert.push(base);
                    cert.push(item(
                        "Thm3_5 (iii): NCIP with t' >= 4",
                        format!("t' = {}", r.t_prime),
                        true,
                    ));
                    if query.class == FunctionClass::Entire {
                        cert.push(item(MONOTONE, "UPM => UPE", true));
                    }
                    return Ok(Ruling::Proven(TheoremId::Thm3_5, cert));
                }
                // branch (iv): NCIP with t' == 3 and the exact inequality
                let exact: Option<Vec<ExactScalar>> = marked
                    .iter()
                    .map(|m| m.column.members[m.member].root.exact_value().cloned())
                    .collect();
                let ds = match exact {
                    Some(ds) => ds,
                    None => {
                        note(item(
                            "Thm3_5 (iv): marked points lie in the declared field",
                            format!("columns {picks:?}: a marked point is not exact"),
                            false,
                        ));
                        continue;
                    }
                };
                match rule_3_5_branch_iv(p, &ds, &qs)? {
                    Some(values) => {
                        cert.push(base);
                        cert.push(item(
                            "Thm3_5 (iv): NCIP with t' == 3 and Q'(d_j)/Q(d_i) != \
                             [d_i(1+q1) + d_1(1+q_i) - (2+q1+q_i)d_j] / [(d_j-d_1)(d_j-d_i)] \
                             for {i,j} = {2,3}",
                            values,
                            true,
                        ));
                        if query.class == FunctionClass::Entire {
                            cert.push(item(MONOTONE, "UPM => UPE", true));
                        }
                        return Ok(Ruling::Proven(TheoremId::Thm3_5, cert));
                    }
                    None => {
                        note(item(
                            "Thm3_5 (iv): the two cross-ratio inequalities hold",
                            format!("columns {picks:?}: an equality occurs"),
                            false,
                        ));
                        continue;
                    }
                }
            }
        }
    }
    if let Some(fail) = first_failure {
        cert.push(fail);
    }
    Ok(Ruling::Pass(cert))
}

/// Branch (iv) of the three-column rule for one subset: try every labeling
/// that puts a maximal multiplicity first; return the rendered inequality
/// values when some labeling satisfies both ordered pairs.
fn rule_3_5_branch_iv(
    p: &Poly,
    ds: &[ExactScalar],
    qs: &[usize],
) -> Result<Option<String>> {
    let dp = p.derivative();
    let mut divisor = Poly::one(dp.field());
    for (d, &q) in ds.iter().zip(qs) {
        divisor = divisor.mul(&linear_factor(d).pow(q));
    }
    let q_poly = dp.exact_div(&divisor)?;
    let q_der = q_poly.derivative();
    let qmax = *qs.iter().max().unwrap();
    for first in 0..3 {
        if qs[first] != qmax {
            continue;
        }
        let rest: Vec<usize> = (0..3).filter(|&i| i != first).collect();
        let d1 = &ds[first];
        let q1 = qs[first];
        let mut rendered = Vec::new();
        let mut all_ok = true;
        for (ii, jj) in [(rest[0], rest[1]), (rest[1], rest[0])] {
            let (di, qi) = (&ds[ii], qs[ii]);
            let dj = &ds[jj];
            let q_at_di = q_poly.eval(di);
            if q_at_di.is_zero() {
                return Err(Error::Internal("Q vanishes at a marked point".into()));
            }
            let lhs = q_der.eval(dj).div(&q_at_di)?;
            let num = di
                .scale(&rat(1 + q1 as i64, 1))
                .add(&d1.scale(&rat(1 + qi as i64, 1)))
                .sub(&dj.scale(&rat(2 + q1 as i64 + qi as i64, 1)));
            let den = dj.sub(d1).mul(&dj.sub(di));
            if den.is_zero() {
                return Err(Error::Internal("marked points collide".into()));
            }
            let rhs = num.div(&den)?;
            if lhs == rhs {
                all_ok = false;
                break;
            }
            rendered.push(format!("{} != {}", lhs.render(), rhs.render()));
        }
        if all_ok {
            return Ok(Some(format!(
                "q1 = {q1} at d1 = {}; {}",
                d1.render(),
                rendered.join("; ")
            )));
        }
    }
    Ok(None)
}

fn check_rule_3_6(p: &Poly, r: &StructureReport, query: Query) -> Result<Ruling> {
    if query.field != QueryField::Complex {
        return Ok(Ruling::Pass(Vec::new()));
    }
    let mut cert = Vec::new();
    if !squarefree_gate("Thm3_6", r, &mut cert) {
        return Ok(Ruling::Pass(cert));
    }
    let contrib: Vec<usize> = (0..r.columns.len())
        .filter(|&i| !r.columns[i].derived.b_h2.is_empty())
        .collect();
    let shape_ok = !r.is_cip
        && r.n >= 6
        && r.t == 3
        && r.t_prime == 3
        && contrib.len() == 3
        && contrib.iter().all(|&i| {
            let c = &r.columns[i];
            c.derived.b_h2.len() == 1 && c.members[c.derived.b_h2[0]].q == 1
        });
    cert.push(item(
        "Thm3_6: NCIP of degree >= 6 with t = t' = 3, each B_i(H2) a single simple point",
        format!(
            "is_cip = {}, degree = {}, t = {}, t' = {}",
            r.is_cip, r.n, r.t, r.t_prime
        ),
        shape_ok,
    ));
    if !shape_ok {
        return Ok(Ruling::Pass(cert));
    }
    cert.push(item(
        "Thm3_6: P' = (z-d1)(z-d2)(z-d3) Q with deg Q >= 2",
        format!("deg Q = {}", r.n - 4),
        r.n >= 6,
    ));
    let exact: Option<Vec<ExactScalar>> = contrib
        .iter()
        .map(|&i| {
            let c = &r.columns[i];
            c.members[c.derived.b_h2[0]].root.exact_value().cloned()
        })
        .collect();
    let ds = match exact {
        Some(ds) => ds,
        None => {
            cert.push(item(
                "Thm3_6: marked points lie in the declared field",
                "a marked point is not exact; rule skipped",
                false,
            ));
            return Ok(Ruling::Pass(cert));
        }
    };

    let dp = p.derivative();
    let mut divisor = Poly::one(dp.field());
    for d in &ds {
        divisor = divisor.mul(&linear_factor(d));
    }
    let q_poly = dp.exact_div(&divisor)?;
    let q_der = q_poly.derivative();
    let q_at: Vec<ExactScalar> = ds.iter().map(|d| q_poly.eval(d)).collect();
    if q_at.iter().any(|v| v.is_zero()) {
        return Err(Error::Internal("Q vanishes at a marked point".into()));
    }
    let qd_at: Vec<ExactScalar> = ds.iter().map(|d| q_der.eval(d)).collect();

    // (a)
    for (j, v) in qd_at.iter().enumerate() {
        let ok = !v.is_zero();
        cert.push(item(
            format!("Thm3_6 (a): Q'(d{}) != 0", j + 1),
            format!("Q'({}) = {}", ds[j].render(), v.render()),
            ok,
        ));
        if !ok {
            return Ok(Ruling::Pass(cert));
        }
    }

    // (b)
    for j in 0..3 {
        for i in 0..3 {
            if i == j {
                continue;
            }
            let k = 3 - i - j;
            let lhs = qd_at[j].div(&q_at[i])?;
            let num = ds[i]
                .scale(&rat(2, 1))
                .add(&ds[k].scale(&rat(2, 1)))
                .sub(&ds[j].scale(&rat(4, 1)));
            let den = ds[j].sub(&ds[k]).mul(&ds[j].sub(&ds[i]));
            let rhs = num.div(&den)?;
            let ok = lhs != rhs;
            cert.push(item(
                format!(
                    "Thm3_6 (b): Q'(d{})/Q(d{}) != (2d{} + 2d{} - 4d{}) / ((d{} - d{})(d{} - d{}))",
                    j + 1, i + 1, i + 1, k + 1, j + 1, j + 1, k + 1, j + 1, i + 1
                ),
                format!("{} vs {}", lhs.render(), rhs.render()),
                ok,
            ));
            if !ok {
                return Ok(Ruling::Pass(cert));
            }
        }
    }

    // (c): a root xi != d_k of P - P(d_k) violating the cross-ratio
    // inequality would be a common root of P - P(d_k) and
    // N_k = Q*(z-d_i)^2(z-d_j)^2 - Q(d_k)*(d_k-d_i)^2(d_k-d_j)^2,
    // so the condition holds exactly when their gcd is a power of (z-d_k).
    for k in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&x| x != k).collect();
        let (i, j) = (others[0], others[1]);
        let shifted = p.sub(&Poly::constant(p.eval(&ds[k])));
        let scale = q_at[k]
            .mul(&ds[k].sub(&ds[i]).pow(2))
            .mul(&ds[k].sub(&ds[j]).pow(2));
        let n_k = q_poly
            .mul(&linear_factor(&ds[i]).pow(2))
            .mul(&linear_factor(&ds[j]).pow(2))
            .sub(&Poly::constant(scale));
        let g = shifted.gcd(&n_k)?;
        let (power, rest) = g.split_linear_power(&ds[k])?;
        let ok = rest.is_constant();
        cert.push(item(
            format!(
                "Thm3_6 (c): no root xi != d{} of P - P(d{}) has Q(xi)/Q(d{}) equal to \
                 (d{}-d{})^2(d{}-d{})^2 / ((xi-d{})^2(xi-d{})^2)",
                k + 1, k + 1, k + 1, k + 1, i + 1, k + 1, j + 1, i + 1, j + 1
            ),
            format!(
                "gcd(P - P(d{}), N{}) = (z - d{})^{power} * (degree-{} cofactor)",
                k + 1,
                k + 1,
                k + 1,
                rest.degree().unwrap_or(0)
            ),
            ok,
        ));
        if !ok {
            return Ok(Ruling::Pass(cert));
        }
    }

    // branches (i)/(ii)
    let mut equalities = Vec::new();
    for k in 0..3 {
        for i in 0..3 {
            if i == k {
                continue;
            }
            let j = 3 - i - k;
            if ds[k] == ds[i].scale(&rat(2, 1)).sub(&ds[j]) {
                equalities.push((i, j, k));
            }
        }
    }
    if equalities.is_empty() {
        cert.push(item(
            "Thm3_6 (i): d_k != 2d_i - d_j for every assignment",
            "no marked point is the reflection of another through the third",
            true,
        ));
    } else {
        for &(i, j, k) in &equalities {
            let lhs = qd_at[j].div(&q_at[j])?;
            let rhs = ExactScalar::from_i64_in(lhs.field(), 3).div(&ds[k].sub(&ds[i]))?;
            let ok = lhs != rhs;
            cert.push(item(
                format!(
                    "Thm3_6 (ii): d{} = 2d{} - d{} and Q'(d{})/Q(d{}) != 3/(d{} - d{})",
                    k + 1, i + 1, j + 1, j + 1, j + 1, k + 1, i + 1
                ),
                format!("{} vs {}", lhs.render(), rhs.render()),
                ok,
            ));
            if !ok {
                return Ok(Ruling::Pass(cert));
            }
        }
    }
    if query.class == FunctionClass::Entire {
        cert.push(item(MONOTONE, "UPM => UPE", true));
    }
    Ok(Ruling::Proven(TheoremId::Thm3_6, cert))
}

/// Quintic refutation: monic z^5 + a z^4 + b z^3 + c that is NCIP with
/// 8a^2 != 5b is not a UPM over C; critical injectivity then forces
/// a^2 = 4b, which yields the explicit witness pair.
fn check_tt8(p: &Poly, r: &StructureReport) -> Result<Ruling> {
    let mut cert = Vec::new();
    if r.n != 5 {
        cert.push(item("Thm_tt8: degree == 5", format!("degree = {}", r.n), false));
        return Ok(Ruling::Pass(cert));
    }
    let (_, m) = p.monic()?;
    let shape_ok = m.coeff(2).is_zero() && m.coeff(1).is_zero();
    cert.push(item(
        "Thm_tt8: monic form is z^5 + a z^4 + b z^3 + c",
        format!(
            "z^2 coefficient = {}, z coefficient = {}",
            m.coeff(2).render(),
            m.coeff(1).render()
        ),
        shape_ok,
    ));
    if !shape_ok {
        return Ok(Ruling::Pass(cert));
    }
    if r.is_cip {
        cert.push(item("Thm_tt8: P is NCIP", "is_cip = true", false));
        return Ok(Ruling::Pass(cert));
    }
    cert.push(item("Thm_tt8: P is NCIP", "is_cip = false", true));
    let a = m.coeff(4);
    let b = m.coeff(3);
    let c = m.coeff(0);
    let lhs = a.pow(2).scale(&rat(8, 1));
    let rhs = b.scale(&rat(5, 1));
    let ok = lhs != rhs;
    cert.push(item(
        "Thm_tt8: 8a^2 != 5b",
        format!("8a^2 = {}, 5b = {}", lhs.render(), rhs.render()),
        ok,
    ));
    if !ok {
        return Ok(Ruling::Pass(cert));
    }
    if a.pow(2) != b.scale(&rat(4, 1)) {
        return Err(Error::Internal(
            "NCIP quintic with 8a^2 != 5b must satisfy a^2 = 4b".into(),
        ));
    }
    cert.push(item(
        "Thm_tt8: critical injectivity failure forces a^2 = 4b",
        format!("a = {}, b = {}", a.render(), b.render()),
        true,
    ));
    let witness = tt8_witness(&a, &c)?;
    cert.push(item(
        "Thm_tt8: witness pair verified: P(f) = P(g), f != g",
        "symbolic identity in the formal variable u",
        true,
    ));
    Ok(Ruling::Refuted(TheoremId::Thm_tt8, cert, Some(witness)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrsCondition {
    I,
    II,
    III,
    IV,
    V,
}

impl UrsCondition {
    pub fn label(&self) -> &'static str {
        match self {
            UrsCondition::I => "(i)",
            UrsCondition::II => "(ii)",
            UrsCondition::III => "(iii)",
            UrsCondition::IV => "(iv)",
            UrsCondition::V => "(v)",
        }
    }
}

#[derive(Clone, Debug)]
pub struct UrsReport {
    pub p: usize,
    pub m_list: Vec<usize>,
    pub condition_hit: Option<UrsCondition>,
    pub k: usize,
    pub n: usize,
    pub ursm_threshold_met: bool,
    pub ursm_im_threshold_met: bool,
    pub conclusion: String,
}

#[derive(Clone, Debug)]
pub enum UrsCheck {
    Applicable(UrsReport),
    Inapplicable { reason: String },
}

impl UrsReport {
    pub fn to_json(&self) -> UrsJson {
        UrsJson {
            schema: URS_SCHEMA.into(),
            p: self.p,
            m_list: self.m_list.clone(),
            condition_hit: self
                .condition_hit
                .map(|c| c.label().to_string())
                .unwrap_or_else(|| "none".into()),
            k: self.k,
            n: self.n,
            ursm_threshold_met: self.ursm_threshold_met,
            ursm_im_threshold_met: self.ursm_im_threshold_met,
            conclusion: self.conclusion.clone(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "zero set of P - a0: p = {} distinct points, multiplicities {:?}\n",
            self.p, self.m_list
        ));
        out.push_str(&format!("n = {}, derivative index k = {}\n", self.n, self.k));
        out.push_str(&format!(
            "condition hit: {}\n",
            self.condition_hit.map(|c| c.label()).unwrap_or("none")
        ));
        out.push_str(&format!(
            "URSM threshold n >= 2k + 7 = {}: {}\n",
            2 * self.k + 7,
            if self.ursm_threshold_met { "met" } else { "not met" }
        ));
        out.push_str(&format!(
            "URSM-IM threshold n >= 2k + 13 = {}: {}\n",
            2 * self.k + 13,
            if self.ursm_im_threshold_met { "met" } else { "not met" }
        ));
        out.push_str(&format!("conclusion: {}\n", self.conclusion));
        out
    }
}

/// Unique-range-set check for the zero set of P - a0. `upm` must be the
/// complex meromorphic verdict for P.
pub fn urs_check(p: &Poly, r: &StructureReport, upm: &Verdict) -> Result<UrsCheck> {
    if upm.query != Query::new(QueryField::Complex, FunctionClass::Meromorphic) {
        return Err(Error::Unsupported(
            "URS check needs the complex meromorphic verdict".into(),
        ));
    }
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return Ok(UrsCheck::Inapplicable {
            reason: "constant term is zero, so 0 lies in the zero set S and S has a \
                     repeated generating structure; the theorem requires a_0 != 0"
                .into(),
        });
    }
    if !p.is_squarefree()? {
        return Ok(UrsCheck::Inapplicable {
            reason: "P has repeated zeros, so its zero set has fewer than n elements".into(),
        });
    }
    let shifted = p.sub(&Poly::constant(a0));
    let sf = shifted.squarefree_decomposition()?;
    let mut m_list: Vec<usize> = Vec::new();
    for (part, e) in &sf.parts {
        for _ in 0..part.degree().unwrap_or(0) {
            m_list.push(*e);
        }
    }
    m_list.sort_unstable_by(|a, b| b.cmp(a));
    let count = m_list.len();
    let n = r.n;
    if m_list.iter().sum::<usize>() != n {
        return Err(Error::Internal("zero multiplicities of P - a0 do not sum to n".into()));
    }
    let coprime = |m: usize| m.gcd(&n) == 1;
    let condition_hit = if count >= 4 {
        Some(UrsCondition::I)
    } else if count == 3 && m_list.iter().any(|&m| m >= 2 && coprime(m)) {
        Some(UrsCondition::II)
    } else if count == 3
        && !coprime(m_list[0])
        && m_list[0] >= 2
        && m_list[1] == 1
        && m_list[2] == 1
        && n >= 5
    {
        Some(UrsCondition::III)
    } else if count == 2 && m_list.iter().any(|&m| coprime(m)) && n >= 5 {
        Some(UrsCondition::IV)
    } else if count == 2 && m_list.iter().all(|&m| !coprime(m)) {
        let b1 = m_list[0].gcd(&n);
        let b2 = m_list[1].gcd(&n);
        if n >= 2 * (b1 + b2) + 1 {
            Some(UrsCondition::V)
        } else {
            None
        }
    } else {
        None
    };
    let k = r.k;
    let ursm_threshold_met = n >= 2 * k + 7;
    let ursm_im_threshold_met = n >= 2 * k + 13;
    let conclusion = match condition_hit {
        None => "no URS conclusion (none of conditions (i)-(v) holds)".to_string(),
        Some(cond) => {
            let mut text = match upm.status {
                Status::Proven => {
                    if ursm_im_threshold_met {
                        format!("URSM and URSM-IM of cardinality {n}")
                    } else if ursm_threshold_met {
                        format!("URSM of cardinality {n}")
                    } else {
                        format!("no URS conclusion (n = {n} < 2k + 7 = {})", 2 * k + 7)
                    }
                }
                Status::Refuted => {
                    if ursm_threshold_met {
                        "not a URSM (P is not a UPM)".to_string()
                    } else {
                        format!("no URS conclusion (n = {n} < 2k + 7 = {})", 2 * k + 7)
                    }
                }
                Status::Unknown => "no URS conclusion (UPM status unknown)".to_string(),
            };
            if cond == UrsCondition::IV {
                text.push_str(" [condition (iv) read with the two-term degree sum]");
            }
            text
        }
    };
    Ok(UrsCheck::Applicable(UrsReport {
        p: count,
        m_list,
        condition_hit,
        k,
        n,
        ursm_threshold_met,
        ursm_im_threshold_met,
        conclusion,
    }))
}
