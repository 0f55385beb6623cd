//! The `ospq` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{SymbolField, Weights};
use crate::quantizer::{
    quantize, resonance_table, spectrum, DeltaSet, QuantizeOptions, ResonanceRow,
};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::structops::{constant_matrix, write_matrix_csv, CasimirData, StructOp};
use crate::superalg::SpaceSignature;
use crate::verify::{run_verify, Report, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESONANT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "ospq", version, about = "Exact osp-equivariant quantization on R^{p+q|2r}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SigArgs {
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
}

impl SigArgs {
    fn signature(&self) -> Result<SpaceSignature> {
        let sig = SpaceSignature::new(self.p, self.q, self.r);
        sig.validate()?;
        Ok(sig)
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the verification suite for one configuration.
    Verify {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 1)]
        max_poly_degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Symbols per degree; larger bases are subsampled with the seed.
        #[arg(long)]
        sample: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Casimir eigenvalues alpha_{k,s,delta} with multiplicities.
    Spectrum {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
        delta: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Resonant values of delta up to a degree.
    Resonances {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Quantize a symbol read from a JSON file.
    Quantize {
        #[arg(long = "in")]
        input: PathBuf,
        /// Overrides the weights stored in the input.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        /// Degree cap.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix of a structural operator on constant-coefficient symbols, as CSV.
    Matrix {
        #[command(flatten)]
        sig: SigArgs,
        /// One of T, R, div, G, Delta, G0, Delta0, N, C, curlyC.
        #[arg(long)]
        op: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn weights(lambda: &str, delta: &str) -> Result<Weights> {
    Ok(Weights::new(parse_rational(lambda)?, parse_rational(delta)?))
}

fn emit(out: &Option<PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_report(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => csv_string(
            &["checkName", "anchor", "status", "cases", "witness"],
            report.checks.iter().map(|c| {
                vec![
                    c.check_name.clone(),
                    c.anchor.clone(),
                    if c.passed() { "pass" } else { "fail" }.into(),
                    c.cases.to_string(),
                    c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                s += &format!("{tag}  {}  [{}]  cases={}\n", c.check_name, c.anchor, c.cases);
                if let Some(w) = &c.witness {
                    s += &format!("      witness: {w}\n");
                }
            }
            s += &format!("{} passed, {} failed, {} ms\n", report.passed, report.failed, report.elapsed_ms);
            s
        }
    })
}

fn render_spectrum(sig: &SpaceSignature, delta: &Rational, k_max: usize, format: Format) -> Result<String> {
    let rows: Vec<_> = (0..=k_max).flat_map(|k| spectrum(k, delta, sig)).collect();
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => csv_string(
            &["k", "s", "b", "alpha", "multiplicity"],
            rows.iter().map(|e| {
                vec![
                    e.k.to_string(),
                    e.s.to_string(),
                    fmt_rational(&e.b),
                    fmt_rational(&e.alpha),
                    e.multiplicity.to_string(),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = format!("signature {sig}, d = {}, delta = {}\n", sig.superdim(), fmt_rational(delta));
            s += "k  s  b          alpha      mult\n";
            for e in &rows {
                s += &format!(
                    "{:<2} {:<2} {:<10} {:<10} {}\n",
                    e.k,
                    e.s,
                    fmt_rational(&e.b),
                    fmt_rational(&e.alpha),
                    e.multiplicity
                );
            }
            s
        }
    })
}

/// Distinct resonant values with their witnesses `(k,l,s,t)`.
pub fn resonance_values(rows: &[ResonanceRow]) -> Vec<(Rational, Vec<[usize; 4]>)> {
    let mut out: Vec<(Rational, Vec<[usize; 4]>)> = Vec::new();
    for r in rows {
        if let DeltaSet::Single(x) = &r.direct {
            let w = [r.k, r.l, r.s, r.t];
            match out.iter_mut().find(|(y, _)| y == x) {
                Some((_, ws)) => ws.push(w),
                None => out.push((x.clone(), vec![w])),
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn resonances_json(sig: &SpaceSignature, k_max: usize) -> Value {
    let rows = resonance_table(sig, k_max);
    let all: Vec<[usize; 4]> = rows
        .iter()
        .filter(|r| r.direct == DeltaSet::All)
        .map(|r| [r.k, r.l, r.s, r.t])
        .collect();
    json!({
        "signature": [sig.p, sig.q, sig.r],
        "d": sig.superdim(),
        "allResonant": !all.is_empty(),
        "allResonantWitnesses": all,
        "values": resonance_values(&rows)
            .into_iter()
            .map(|(x, w)| json!({"delta": fmt_rational(&x), "witnesses": w}))
            .collect::<Vec<_>>(),
        "table": rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    })
}

fn render_resonances(sig: &SpaceSignature, k_max: usize, format: Format) -> Result<String> {
    let rows = resonance_table(sig, k_max);
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&resonances_json(sig, k_max))? + "\n",
        Format::Csv => csv_string(
            &["k", "l", "s", "t", "direct", "closedForm", "agrees"],
            rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    r.l.to_string(),
                    r.s.to_string(),
                    r.t.to_string(),
                    match &r.direct {
                        DeltaSet::None => "none".into(),
                        DeltaSet::All => "all".into(),
                        DeltaSet::Single(x) => fmt_rational(x),
                    },
                    r.closed_form.as_ref().map(fmt_rational).unwrap_or_default(),
                    r.agrees().to_string(),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = format!("signature {sig}, d = {}, degrees <= {k_max}\n", sig.superdim());
            if let Some(r) = rows.iter().find(|r| r.direct == DeltaSet::All) {
                s += &format!("all delta resonant, witness ({},{},{},{})\n", r.k, r.l, r.s, r.t);
            }
            for (x, ws) in resonance_values(&rows) {
                let ws: Vec<String> = ws.iter().map(|w| format!("({},{},{},{})", w[0], w[1], w[2], w[3])).collect();
                s += &format!("delta = {:<8} {}\n", fmt_rational(&x), ws.join(" "));
            }
            for r in rows.iter().filter(|r| !r.agrees()) {
                s += &format!(
                    "discrepancy at ({},{},{},{}): direct {}, printed formula {}\n",
                    r.k,
                    r.l,
                    r.s,
                    r.t,
                    match &r.direct {
                        DeltaSet::Single(x) => fmt_rational(x),
                        DeltaSet::All => "all".into(),
                        DeltaSet::None => "none".into(),
                    },
                    r.closed_form.as_ref().map(fmt_rational).unwrap_or_else(|| "undefined".into())
                );
            }
            s
        }
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resonant { .. } | Error::Pole { .. } => EXIT_RESONANT,
        _ => EXIT_CONFIG,
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Verify {
            sig,
            lambda,
            delta,
            max_degree,
            max_poly_degree,
            seed,
            sample,
            out,
        } => {
            let cap = QuantizeOptions::default().degree_cap;
            if max_degree > cap {
                return Err(Error::DegreeCap { degree: max_degree, cap });
            }
            let cfg = VerifyConfig {
                sig: sig.signature()?,
                weights: weights(&lambda, &delta)?,
                max_degree,
                max_poly_degree,
                seed,
                sample,
            };
            let report = run_verify(&cfg)?;
            emit(&out.out, &render_report(&report, out.format)?, stdout)?;
            Ok(if report.all_passed() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Spectrum {
            sig,
            delta,
            max_degree,
            out,
        } => {
            let sig = sig.signature()?;
            let body = render_spectrum(&sig, &parse_rational(&delta)?, max_degree, out.format)?;
            emit(&out.out, &body, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Resonances { sig, max_degree, out } => {
            let sig = sig.signature()?;
            emit(&out.out, &render_resonances(&sig, max_degree, out.format)?, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::Quantize {
            input,
            lambda,
            delta,
            max_degree,
            out,
        } => {
            let v: Value = serde_json::from_str(&fs::read_to_string(&input)?)?;
            let mut s = SymbolField::from_json(&v)?;
            s.signature().validate()?;
            if lambda.is_some() || delta.is_some() {
                let w = s.weights().clone();
                let l = lambda.as_deref().map(parse_rational).transpose()?.unwrap_or(w.lambda);
                let d = delta.as_deref().map(parse_rational).transpose()?.unwrap_or(w.delta);
                s = s.with_weights(Weights::new(l, d));
            }
            let opts = QuantizeOptions {
                degree_cap: max_degree,
                ..Default::default()
            };
            let result = quantize(&s, &opts)?;
            emit(&out, &(serde_json::to_string_pretty(&result.to_json())? + "\n"), stdout)?;
            Ok(if result.residuals_vanish() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Matrix {
            sig,
            op,
            degree,
            lambda,
            delta,
            out,
        } => {
            let sig = sig.signature()?;
            let w = weights(&lambda, &delta)?;
            let op = StructOp::parse(&op)?;
            let k_out = degree as i64 + op.degree_shift() as i64;
            if k_out < 0 {
                return Err(Error::Config(format!("{} lowers degree {degree} below zero", op.name())));
            }
            let data = matches!(op, StructOp::CurlyC).then(|| CasimirData::new(sig)).transpose()?;
            let (dom, cod, m) = constant_matrix(sig, &w, degree, k_out as usize, |s| {
                op.apply(data.as_ref(), s).expect("named operators are total")
            })?;
            let mut buf = Vec::new();
            write_matrix_csv(&sig, &cod, &dom, &m, &mut buf)?;
            emit(&out, &String::from_utf8(buf).expect("csv output is utf-8"), stdout)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::Resonant { witnesses, .. } = &e {
                let _ = writeln!(stderr, "{}", json!({ "resonanceWitnesses": witnesses }));
            }
            exit_code(&e)
        }
    }
}
