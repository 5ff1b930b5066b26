use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use upoly::error::Error;
use upoly::identity::{tt8_witness, verify_pair};
use upoly::parse::parse_poly;
use upoly::{
    build_structure_with, decide, urs_check, FunctionClass, Poly, Precision, Query, QueryField,
    UrsCheck,
};
use upoly_cli::corpus;

#[derive(Parser)]
#[command(
    name = "upoly",
    version,
    about = "critical-value structure and uniqueness analysis for polynomials"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cluster the critical values and print the column tables and invariants
    Analyze(ExprCmd),
    /// Run the decision rules for one field/class query
    Decide(DecideCmd),
    /// Check whether the zero set of P is a unique range set
    Urs(ExprCmd),
    /// Build and verify the counterexample pair for a quintic of the witness shape
    VerifyPair(VerifyCmd),
    /// Re-check every built-in corpus entry against its pinned expectations
    Corpus(CorpusCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Complex,
    Padic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Meromorphic,
    Entire,
}

#[derive(Args)]
struct InputOpts {
    /// polynomial in z, e.g. "z^4 + z"
    expr: Option<String>,
    /// read the expression from a file instead
    #[arg(long, value_name = "PATH", conflicts_with = "expr")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct RenderOpts {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// starting working precision in bits
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// precision ceiling for certification retries
    #[arg(long, default_value_t = 8192)]
    max_precision: u32,
}

#[derive(Args)]
struct ExprCmd {
    #[command(flatten)]
    input: InputOpts,
    #[command(flatten)]
    render: RenderOpts,
}

#[derive(Args)]
struct DecideCmd {
    #[command(flatten)]
    input: InputOpts,
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    field: FieldArg,
    #[arg(long, value_enum, default_value_t = ClassArg::Meromorphic)]
    class: ClassArg,
    #[command(flatten)]
    render: RenderOpts,
}

#[derive(Args)]
struct VerifyCmd {
    #[command(flatten)]
    input: InputOpts,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CorpusCmd {
    /// only run entries whose id contains this substring
    #[arg(long)]
    filter: Option<String>,
    /// worker threads (output order is fixed either way)
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    render: RenderOpts,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. } => 4,
        Error::Internal(_) => 1,
        _ => 3,
    }
}

fn bail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_for(&e))
}

fn read_input(input: &InputOpts) -> Result<String, Error> {
    match (&input.expr, &input.file) {
        (Some(e), _) => Ok(e.clone()),
        (None, Some(path)) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::Unsupported(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(Error::Unsupported(
            "no input: pass an expression or --file".into(),
        )),
    }
}

fn parsed_input(input: &InputOpts) -> Result<Poly, Error> {
    parse_poly(&read_input(input)?)
}

fn precision_of(render: &RenderOpts) -> Precision {
    Precision::new(render.precision, render.max_precision)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialization cannot fail")
    );
}

fn cmd_analyze(cmd: &ExprCmd) -> ExitCode {
    let p = match parsed_input(&cmd.input) {
        Ok(p) => p,
        Err(e) => return bail(e),
    };
    let r = match build_structure_with(&p, precision_of(&cmd.render)) {
        Ok(r) => r,
        Err(e) => return bail(e),
    };
    match cmd.render.format {
        Format::Text => print!("{}", r.render_text()),
        Format::Json => print_json(&r.to_json()),
    }
    ExitCode::SUCCESS
}

fn cmd_decide(cmd: &DecideCmd) -> ExitCode {
    let p = match parsed_input(&cmd.input) {
        Ok(p) => p,
        Err(e) => return bail(e),
    };
    let r = match build_structure_with(&p, precision_of(&cmd.render)) {
        Ok(r) => r,
        Err(e) => return bail(e),
    };
    let field = match cmd.field {
        FieldArg::Complex => QueryField::Complex,
        FieldArg::Padic => QueryField::Padic,
    };
    let class = match cmd.class {
        ClassArg::Meromorphic => FunctionClass::Meromorphic,
        ClassArg::Entire => FunctionClass::Entire,
    };
    let v = match decide(&p, &r, Query::new(field, class)) {
        Ok(v) => v,
        Err(e) => return bail(e),
    };
    match cmd.render.format {
        Format::Text => print!("{}", v.render_text()),
        Format::Json => print_json(&v.to_json()),
    }
    match v.status {
        upoly::Status::Unknown => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}

#[derive(Serialize)]
struct UrsInapplicableJson {
    schema: String,
    applicable: bool,
    reason: String,
}

fn cmd_urs(cmd: &ExprCmd) -> ExitCode {
    let p = match parsed_input(&cmd.input) {
        Ok(p) => p,
        Err(e) => return bail(e),
    };
    let r = match build_structure_with(&p, precision_of(&cmd.render)) {
        Ok(r) => r,
        Err(e) => return bail(e),
    };
    let upm = match decide(&p, &r, Query::new(QueryField::Complex, FunctionClass::Meromorphic)) {
        Ok(v) => v,
        Err(e) => return bail(e),
    };
    match urs_check(&p, &r, &upm) {
        Ok(UrsCheck::Applicable(rep)) => {
            match cmd.render.format {
                Format::Text => print!("{}", rep.render_text()),
                Format::Json => print_json(&rep.to_json()),
            }
            ExitCode::SUCCESS
        }
        Ok(UrsCheck::Inapplicable { reason }) => {
            match cmd.render.format {
                Format::Text => println!("inapplicable: {reason}"),
                Format::Json => print_json(&UrsInapplicableJson {
                    schema: "urs.v1".into(),
                    applicable: false,
                    reason,
                }),
            }
            ExitCode::from(2)
        }
        Err(e) => bail(e),
    }
}

#[derive(Serialize)]
struct VerifyJson {
    schema: String,
    witness: upoly::report::WitnessJson,
    holds: bool,
    distinct: bool,
    peak_degree: usize,
}

fn verify_shape(p: &Poly) -> Result<(upoly::ExactScalar, upoly::ExactScalar), Error> {
    let shape_err = || {
        Error::Unsupported(
            "verify-pair expects a quintic of the shape z^5 + a*z^4 + (a^2/4)*z^3 + c".into(),
        )
    };
    if p.degree() != Some(5) {
        return Err(shape_err());
    }
    let (_, pm) = p.monic()?;
    let a = pm.coeff(4);
    let b = pm.coeff(3);
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    if a.is_zero()
        || !pm.coeff(2).is_zero()
        || !pm.coeff(1).is_zero()
        || b != a.mul(&a).scale(&quarter)
    {
        return Err(shape_err());
    }
    Ok((a, pm.coeff(0)))
}

fn cmd_verify_pair(cmd: &VerifyCmd) -> ExitCode {
    let p = match parsed_input(&cmd.input) {
        Ok(p) => p,
        Err(e) => return bail(e),
    };
    let (a, c) = match verify_shape(&p) {
        Ok(v) => v,
        Err(e) => return bail(e),
    };
    let w = match tt8_witness(&a, &c) {
        Ok(w) => w,
        Err(e) => return bail(e),
    };
    let check = match verify_pair(&w.p, &w.f, &w.g) {
        Ok(c) => c,
        Err(e) => return bail(e),
    };
    match cmd.format {
        Format::Text => {
            println!("{}", w.note);
            println!("f(u) = {}", w.f.render_var("u"));
            println!("g(u) = {}", w.g.render_var("u"));
            println!("P(f) = P(g) identically: {}", check.holds);
            println!("f distinct from g: {}", check.distinct);
            println!("peak numerator degree while reducing: {}", check.peak_degree);
        }
        Format::Json => print_json(&VerifyJson {
            schema: "verify.v1".into(),
            witness: w.to_json(),
            holds: check.holds,
            distinct: check.distinct,
            peak_degree: check.peak_degree,
        }),
    }
    if check.holds && check.distinct {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[derive(Serialize)]
struct CorpusJson<'a> {
    schema: String,
    entries: &'a [corpus::EntryReport],
}

fn cmd_corpus(cmd: &CorpusCmd) -> ExitCode {
    let entries: Vec<&corpus::CorpusEntry> = corpus::CORPUS
        .iter()
        .filter(|e| cmd.filter.as_deref().is_none_or(|f| e.id.contains(f)))
        .collect();
    if entries.is_empty() {
        eprintln!("error: no corpus entries match the filter");
        return ExitCode::from(3);
    }
    let prec = precision_of(&cmd.render);
    let run = || -> Vec<corpus::EntryReport> {
        entries.par_iter().map(|e| corpus::check_entry(e, prec)).collect()
    };
    let reports = match cmd.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(run),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
        },
        None => run(),
    };
    let passed = reports.iter().filter(|r| r.pass).count();
    match cmd.render.format {
        Format::Text => {
            for rep in &reports {
                if rep.pass {
                    println!("PASS {} ({} checks)", rep.id, rep.items.len());
                } else {
                    println!("FAIL {}", rep.id);
                    for item in rep.items.iter().filter(|i| !i.pass) {
                        println!("  - {}: {}", item.name, item.detail);
                    }
                }
            }
            println!("{passed}/{} entries pass", reports.len());
        }
        Format::Json => print_json(&CorpusJson { schema: "corpus.v1".into(), entries: &reports }),
    }
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.cmd {
        Cmd::Analyze(cmd) => cmd_analyze(cmd),
        Cmd::Decide(cmd) => cmd_decide(cmd),
        Cmd::Urs(cmd) => cmd_urs(cmd),
        Cmd::VerifyPair(cmd) => cmd_verify_pair(cmd),
        Cmd::Corpus(cmd) => cmd_corpus(cmd),
    }
}
