//! Exact analysis of the critical-value structure of complex polynomials and
//! decision rules for when a polynomial separates function pairs uniquely.

pub mod ball;
pub mod decide;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod identity;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod roots;
pub mod structure;

pub use ball::ComplexBall;
pub use dyadic::{Dyadic, Round};
pub use error::{Error, ParseError, Result};
pub use field::{ExactScalar, Field, FieldKind};
pub use poly::{Poly, SquarefreeDecomposition};
pub use roots::{
    certified_compare, isolate_roots, refine, CompareOutcome, IsolationResult, Precision,
    RootEnclosure,
};
pub use decide::{
    decide, decide_all, urs_check, CertItem, FunctionClass, Query, QueryField, Status, TheoremId,
    UrsCheck, UrsCondition, UrsReport, Verdict,
};
pub use structure::{
    build_structure, build_structure_with, compute_h_sets, critical_value_exponents,
    Certification, ColumnDerived, CriticalPoint, StructureReport, ValueClass,
};
