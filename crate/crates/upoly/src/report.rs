//! Versioned JSON report schemas. These are plain data types that serialize
//! losslessly: dyadic numbers keep their exact mantissa/exponent, exact field
//! elements are rendered in the input grammar so they re-parse to the same
//! value. `parse(render(report)) == report` holds field for field.

use serde::{Deserialize, Serialize};

use crate::ball::ComplexBall;
use crate::dyadic::Dyadic;

pub const STRUCTURE_SCHEMA: &str = "structure.v1";
pub const VERDICT_SCHEMA: &str = "verdict.v1";
pub const URS_SCHEMA: &str = "urs.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicJson {
    pub man: String,
    pub exp: i64,
}

impl DyadicJson {
    pub fn of(d: &Dyadic) -> Self {
        DyadicJson { man: d.mantissa().to_string(), exp: d.exponent() }
    }

    pub fn to_dyadic(&self) -> Option<Dyadic> {
        let man: num_bigint::BigInt = self.man.parse().ok()?;
        Some(Dyadic::new(man, self.exp))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub re: DyadicJson,
    pub im: DyadicJson,
    pub rad: DyadicJson,
    pub prec: u32,
}

impl BallJson {
    pub fn of(b: &ComplexBall) -> Self {
        BallJson {
            re: DyadicJson::of(b.re()),
            im: DyadicJson::of(b.im()),
            rad: DyadicJson::of(b.rad()),
            prec: b.precision_bits(),
        }
    }
}

/// A point or value: exact grammar rendering when available, always with a
/// containing ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub ball: BallJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberJson {
    pub root: ScalarJson,
    pub q: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnJson {
    pub value: ScalarJson,
    pub members: Vec<MemberJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub schema: String,
    pub degree: usize,
    pub derivative_index: usize,
    pub s: usize,
    pub columns: Vec<ColumnJson>,
    pub t: usize,
    pub t_prime: usize,
    pub is_cip: bool,
    pub p_squarefree: bool,
    pub certification: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertItemJson {
    pub condition: String,
    pub value: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub p: String,
    pub f: String,
    pub g: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub schema: String,
    pub status: String,
    pub theorem: String,
    pub field: String,
    pub class: String,
    pub certificate: Vec<CertItemJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrsJson {
    pub schema: String,
    pub p: usize,
    pub m_list: Vec<usize>,
    pub condition_hit: String,
    pub k: usize,
    pub n: usize,
    pub ursm_threshold_met: bool,
    pub ursm_im_threshold_met: bool,
    pub conclusion: String,
}
