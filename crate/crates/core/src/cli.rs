//! Command-line front end. Every subcommand prints one JSON object (or a
//! text / CSV rendering of it) carrying `"schema": "sparse-mahler/1"`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bounds::{
    binomial_family_ratio, extremal_ratio, gap_excess_ln, gap_lower_bound, proof_chain, ratio_f64,
    verify_height_bounds,
};
use crate::census::{
    coefficient_census, composite_construction, search_unit_to_store, RecordWriter, SearchConfig,
    Shard,
};
use crate::cyclotomic::is_cyclotomic_product;
use crate::error::{Error, Result};
use crate::measure::{
    mahler_univariate, quadrature_report, MeasureEstimate, DEFAULT_QUADRATURE_POINTS,
};
use crate::multivar::{
    boyd_lawton_sequence, default_ns, mahler_qmc, restrict, safe_substitution_index,
    DEFAULT_MAX_RESTRICTED_DEGREE,
};
use crate::poly::{parse_multivariate, parse_univariate};

pub const SCHEMA: &str = "sparse-mahler/1";

const GLOBAL_HELP: &str = "\
Output: every command prints a single JSON object with \"schema\": \"sparse-mahler/1\" and \
\"command\". Measures are always given both as the log value \"m\" and as \"M\" = exp(m).
With --format text the same fields are printed as `key: value` lines; with --format csv \
tables are printed as CSV and other results as a one-row CSV of their scalar fields.

Polynomials: univariate in z, e.g. \"3*z^5 - z^2 + 1\"; multivariate in x1..xN with \
integer (possibly negative) exponents, e.g. \"1 + x1 + x2^-1\".

Exit status: 0 success, 1 domain error, 2 usage error. Errors go to stderr as \
`error[CODE]: message` with a stable CODE.";

#[derive(Parser, Debug)]
#[command(name = "sparse-mahler", version, about = "Mahler measures of sparse integer polynomials", after_long_help = GLOBAL_HELP)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for randomized methods.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum UniMethod {
    Roots,
    Quad,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measure of a univariate polynomial.
    #[command(after_long_help = "JSON: {poly, m, M, method, error_bound, [points, skipped]}")]
    Measure {
        poly: String,
        #[arg(long, value_enum, default_value_t = UniMethod::Roots)]
        method: UniMethod,
        /// Quadrature grid size, a power of two.
        #[arg(long, default_value_t = DEFAULT_QUADRATURE_POINTS)]
        points: usize,
    },
    /// Measure of a multivariate Laurent polynomial by randomized lattice quadrature.
    #[command(after_long_help = "JSON: {poly, m, M, method, error_bound, budget, seed}")]
    MeasureMulti {
        poly: String,
        #[arg(long, default_value_t = 1 << 20)]
        budget: usize,
    },
    /// The one-variable restriction F(z, z^n, ..., z^{n^(l-1)}).
    #[command(after_long_help = "JSON: {poly, n, restriction, terms, height_preserved}")]
    Restrict {
        poly: String,
        #[arg(long)]
        n: u64,
    },
    /// Measures of successive restrictions.
    #[command(
        after_long_help = "JSON: {poly, rows: [{n, m, M, error_bound, height_preserved}]}. \
CSV columns: n,m_estimate,error_bound,height_preserved"
    )]
    BoydLawton {
        poly: String,
        /// Comma-separated, strictly increasing; defaults to 2,3,4,6,8,... up to degree 1e6.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<u64>>,
    },
    /// Threshold beyond which every restriction keeps all monomials distinct.
    #[command(
        after_long_help = "JSON: {poly, threshold, numerator, denominator, min_safe_n, witness}"
    )]
    SafeN { poly: String },
    /// Cyclotomic factorization.
    #[command(
        after_long_help = "JSON: {poly, cyclotomic_product, m, M, factorization: \
{sign, z_power, factors: [{n, mult}], remainder_terms: [[exp, coeff]]}}"
    )]
    Cyclo { poly: String },
    /// Checks h/2^(k-2) <= M <= k*h and audits the reduction chain.
    #[command(
        after_long_help = "JSON: {poly, k, height, lower_bound, upper_bound, M, m, lower_bound_log, \
upper_bound_log, measured_log, satisfied, chain_verified, chain: [{step, poly, log_measure}]}"
    )]
    VerifyBound {
        poly: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// The derivative / reciprocal-derivative chain down to a binomial.
    #[command(
        after_long_help = "JSON: {poly, length, chain: [{step, poly: {numerator, denominator, text}}]}"
    )]
    ProofChain { poly: String },
    /// Explicit lower bound for measures of non-cyclotomic k-nomials.
    #[command(after_long_help = "JSON: {k, gap_lower_bound, ln_excess}")]
    Gap {
        #[arg(long)]
        k: u64,
    },
    /// 1/C(k-1, floor((k-2)/2)) and the ratio attained by (z+1)^(k-1).
    #[command(
        after_long_help = "JSON: {k, ratio, ratio_value, binomial_family_ratio, binomial_family_value}"
    )]
    Extremal {
        #[arg(long)]
        k: u64,
    },
    /// Unit-coefficient k-nomials with measure 1, written as JSON lines.
    #[command(
        after_long_help = "JSON: {k, max_degree, shard, config_hash, out, emitted, members, resumed}. \
Records: {kind, k, exponents, coefficients, factors, m_value, provenance, config_hash, [phi_p_divides]}"
    )]
    #[command(name = "search-sc")]
    SearchUnit {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_degree: u64,
        #[arg(long, default_value = "0/1")]
        shard: Shard,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        resume: bool,
    },
    /// Coefficient patterns admitting measure 1, with a witness each.
    #[command(
        after_long_help = "JSON: {k, coeff_bound, max_exponent, out, hits: [[a_1, ..., a_k]]}. \
Records as for search-sc with kind coeff_census_hit"
    )]
    CensusCoeffs {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        coeff_bound: u64,
        #[arg(long)]
        max_exponent: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// g(z^m) h(z^l) with g, h all-ones polynomials of lengths s, t.
    #[command(after_long_help = "JSON: a single census record")]
    Construct {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        l: u64,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error[E_THREADS]: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(payload) => match render(cli.format, payload, out) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error[{}]: {e}", e.code());
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            match e {
                Error::Parse { .. } | Error::InvalidArgument(_) => 2,
                _ => 1,
            }
        }
    }
}

enum Payload {
    Object(Map<String, Value>),
    /// An object with a CSV form of its own.
    Table(Map<String, Value>, String),
}

fn estimate_fields(m: &mut Map<String, Value>, e: &MeasureEstimate) {
    m.insert("m".into(), json!(e.log_value));
    m.insert("M".into(), json!(e.measure()));
    m.insert("method".into(), json!(e.method));
    m.insert("error_bound".into(), json!(e.error_bound));
}

fn object(command: &str, v: Value) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    if let Value::Object(rest) = v {
        m.extend(rest);
    }
    m
}

fn execute(cli: &Cli) -> Result<Payload> {
    Ok(match &cli.command {
        Command::Measure {
            poly,
            method,
            points,
        } => {
            let f = parse_univariate(poly)?;
            let mut o = object("measure", json!({ "poly": f.to_string() }));
            match method {
                UniMethod::Roots => estimate_fields(&mut o, &mahler_univariate(&f)?),
                UniMethod::Quad => {
                    let r = quadrature_report(&f, *points)?;
                    estimate_fields(&mut o, &r.estimate);
                    o.insert("points".into(), json!(r.points));
                    o.insert("skipped".into(), json!(r.skipped));
                }
            }
            Payload::Object(o)
        }
        Command::MeasureMulti { poly, budget } => {
            let f = parse_multivariate(poly)?;
            let e = mahler_qmc(&f, *budget, cli.seed)?;
            let mut o = object(
                "measure-multi",
                json!({ "poly": f.to_string(), "budget": budget, "seed": cli.seed }),
            );
            estimate_fields(&mut o, &e);
            Payload::Object(o)
        }
        Command::Restrict { poly, n } => {
            let f = parse_multivariate(poly)?;
            let g = restrict(&f, *n)?;
            Payload::Object(object(
                "restrict",
                json!({
                    "poly": f.to_string(),
                    "n": n,
                    "restriction": g.to_string(),
                    "terms": g.term_count(),
                    "height_preserved": g.height() == f.height(),
                }),
            ))
        }
        Command::BoydLawton { poly, ns } => {
            let f = parse_multivariate(poly)?;
            let ns = ns
                .clone()
                .unwrap_or_else(|| default_ns(&f, DEFAULT_MAX_RESTRICTED_DEGREE));
            let table = boyd_lawton_sequence(&f, &ns)?;
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "m": r.estimate.log_value,
                        "M": r.estimate.measure(),
                        "error_bound": r.estimate.error_bound,
                        "height_preserved": r.height_preserved,
                    })
                })
                .collect();
            Payload::Table(
                object(
                    "boyd-lawton",
                    json!({ "poly": f.to_string(), "rows": rows }),
                ),
                table.to_csv(),
            )
        }
        Command::SafeN { poly } => {
            let f = parse_multivariate(poly)?;
            let s = safe_substitution_index(&f);
            Payload::Object(object(
                "safe-n",
                json!({
                    "poly": f.to_string(),
                    "threshold": s.threshold(),
                    "numerator": s.numerator.to_string(),
                    "denominator": s.denominator.to_string(),
                    "min_safe_n": s.min_safe_n(),
                    "witness": s.witness,
                }),
            ))
        }
        Command::Cyclo { poly } => {
            let f = parse_univariate(poly)?;
            let fac = is_cyclotomic_product(&f)?;
            let mut o = object(
                "cyclo",
                json!({
                    "poly": f.to_string(),
                    "cyclotomic_product": fac.is_cyclotomic_product(),
                    "factorization": fac,
                }),
            );
            estimate_fields(&mut o, &mahler_univariate(&f)?);
            Payload::Object(o)
        }
        Command::VerifyBound { poly, tol } => {
            let f = parse_univariate(poly)?;
            let r = verify_height_bounds(&f, *tol)?;
            let mut o = object("verify-bound", json!({ "poly": f.to_string() }));
            o.insert("lower_bound".into(), json!(r.lower_bound_log.exp()));
            o.insert("upper_bound".into(), json!(r.upper_bound_log.exp()));
            o.insert("M".into(), json!(r.measured_log.exp()));
            o.insert("m".into(), json!(r.measured_log));
            if let Value::Object(rest) = serde_json::to_value(&r).expect("plain data") {
                o.extend(rest);
            }
            Payload::Object(o)
        }
        Command::ProofChain { poly } => {
            let f = parse_univariate(poly)?;
            let chain = proof_chain(&f)?;
            Payload::Object(object(
                "proof-chain",
                json!({ "poly": f.to_string(), "length": chain.len(), "chain": chain }),
            ))
        }
        Command::Gap { k } => Payload::Object(object(
            "gap",
            json!({ "k": k, "gap_lower_bound": gap_lower_bound(*k)?, "ln_excess": gap_excess_ln(*k)? }),
        )),
        Command::Extremal { k } => {
            let r = extremal_ratio(*k)?;
            let b = binomial_family_ratio(*k)?;
            Payload::Object(object(
                "extremal",
                json!({
                    "k": k,
                    "ratio": r.to_string(),
                    "ratio_value": ratio_f64(&r),
                    "binomial_family_ratio": b.to_string(),
                    "binomial_family_value": ratio_f64(&b),
                }),
            ))
        }
        Command::SearchUnit {
            k,
            max_degree,
            shard,
            out,
            resume,
        } => {
            let config = SearchConfig {
                k: *k,
                max_degree: *max_degree,
                coeff_bound: None,
                shard: *shard,
                output_path: Some(out.clone()),
            };
            config.validate()?;
            let s = search_unit_to_store(&config, *resume)?;
            Payload::Object(object(
                "search-sc",
                json!({
                    "k": k,
                    "max_degree": max_degree,
                    "shard": format!("{}/{}", shard.index, shard.count),
                    "config_hash": config.config_hash(),
                    "out": out.display().to_string(),
                    "emitted": s.emitted,
                    "members": s.members,
                    "resumed": s.resumed,
                }),
            ))
        }
        Command::CensusCoeffs {
            k,
            coeff_bound,
            max_exponent,
            out,
        } => {
            let hits = coefficient_census(*k, *coeff_bound, *max_exponent)?;
            let mut w = RecordWriter::open(out, false)?;
            for r in &hits {
                w.append(r)?;
            }
            w.finish()?;
            let sets: Vec<Vec<String>> = hits
                .iter()
                .map(|r| r.coefficients.iter().map(|c| c.to_string()).collect())
                .collect();
            Payload::Object(object(
                "census-coeffs",
                json!({
                    "k": k,
                    "coeff_bound": coeff_bound,
                    "max_exponent": max_exponent,
                    "out": out.display().to_string(),
                    "hits": sets,
                }),
            ))
        }
        Command::Construct { s, t, m, l } => {
            let r = composite_construction(*s, *t, *m, *l)?;
            Payload::Object(object(
                "construct",
                serde_json::to_value(&r).expect("plain data"),
            ))
        }
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(format: Format, payload: Payload, out: &mut dyn Write) -> Result<()> {
    let (obj, table) = match payload {
        Payload::Object(o) => (o, None),
        Payload::Table(o, t) => (o, Some(t)),
    };
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &Value::Object(obj)).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        Format::Text => {
            for (k, v) in &obj {
                writeln!(out, "{k}: {}", scalar_text(v))?;
            }
        }
        Format::Csv => match table {
            Some(t) => write!(out, "{t}")?,
            None => {
                let scalars: Vec<(&String, &Value)> = obj
                    .iter()
                    .filter(|(_, v)| !v.is_array() && !v.is_object())
                    .collect();
                let header: Vec<&str> = scalars.iter().map(|(k, _)| k.as_str()).collect();
                let row: Vec<String> = scalars
                    .iter()
                    .map(|(_, v)| csv_field(&scalar_text(v)))
                    .collect();
                writeln!(out, "{}\n{}", header.join(","), row.join(","))?;
            }
        },
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
