//! `pdwords`: generate the period-doubling sequence, look up envelope words,
//! list return words and occurrences, and run the verification sweep.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on invalid input
//! (bad flags, letters outside `a`/`b`, words that are not factors, caps).

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdwords::verify::{sweep, Status, SweepConfig, VerificationReport};
use pdwords::{
    decompose, env_extension, envelope_word, occurrences, Classification, Error, Kind, Limits,
    PeriodDoubling, Word, DEFAULT_MAX_LEN,
};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pdwords",
    version,
    about = "Period-doubling words, envelopes and return words"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Longest factor accepted; also the factor length bound of `verify`.
    #[arg(long, global = true, default_value_t = 32, value_parser = positive)]
    pub max_len: usize,

    /// Largest return-word count accepted; also the count used by `verify`.
    #[arg(long, global = true, default_value_t = 64, value_parser = positive)]
    pub max_count: usize,

    /// Cap on the cached prefix of the sequence, in letters.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEN, value_parser = positive)]
    pub max_seq: usize,

    /// Print progress notes to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a prefix of D, Θ1 or Θ2, or a block A_m / B_m.
    Generate {
        #[arg(long = "word", value_enum)]
        source: Generated,
        /// Prefix length (for D, theta1, theta2).
        #[arg(long)]
        length: Option<usize>,
        /// Block order (for A, B).
        #[arg(long)]
        order: Option<u32>,
    },
    /// The envelope of a factor with its extension, or an envelope word by kind and order.
    Envelope {
        #[arg(long, conflicts_with_all = ["kind", "order"], required_unless_present = "kind")]
        factor: Option<Word>,
        #[arg(long, requires = "order", value_parser = clap::value_parser!(u8).range(1..=2))]
        kind: Option<u8>,
        #[arg(long, requires = "kind")]
        order: Option<u32>,
    },
    /// Return words of a factor, their coding and classification.
    Returns {
        #[arg(long)]
        factor: Word,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// The first occurrence positions of a factor (1-indexed).
    Occurrences {
        #[arg(long)]
        factor: Word,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Run every verification suite and print the report.
    Verify {
        /// Worker threads for the per-factor checks.
        #[arg(long, default_value_t = 1, value_parser = positive)]
        jobs: usize,
        /// Highest envelope order checked.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=20))]
        m_max: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generated {
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "theta1")]
    Theta1,
    #[value(name = "theta2")]
    Theta2,
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateOutput {
    pub sequence: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<u32>,
    pub length: usize,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeOutput {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factor: Option<Word>,
    pub kind: Kind,
    pub m: u32,
    pub word: Word,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu1: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu2: Option<Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeRef {
    pub kind: Kind,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnsOutput {
    pub factor: Word,
    pub env: EnvelopeRef,
    pub r0: Word,
    pub returns: Vec<Word>,
    pub coded: Word,
    pub classification: Classification,
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OccurrencesOutput {
    pub factor: Word,
    pub positions: Vec<usize>,
    /// Start of the occurrence after the last listed one.
    pub next: usize,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            // the scan contradicts the expected coding: a verification failure
            Error::ClassificationMismatch { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::invalid(format!("write failed: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::invalid(format!("csv output failed: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::invalid(format!("json output failed: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Failure> {
    let g = &cli.global;
    let pd = PeriodDoubling::new(Limits {
        max_len: g.max_seq,
        max_count: g.max_count,
        ..Limits::default()
    });
    match &cli.command {
        Command::Generate {
            source,
            length,
            order,
        } => {
            let result = generate(&pd, *source, *length, *order)?;
            emit_generate(out, g.format, &result)?;
        }
        Command::Envelope {
            factor,
            kind,
            order,
        } => {
            let result = match (factor, kind, order) {
                (Some(f), _, _) => {
                    check_factor_len(g, f)?;
                    let ext = env_extension(&pd, f)?;
                    EnvelopeOutput {
                        factor: Some(ext.factor),
                        kind: ext.envelope.kind,
                        m: ext.envelope.order,
                        word: ext.envelope.word,
                        mu1: Some(ext.mu1),
                        mu2: Some(ext.mu2),
                    }
                }
                (None, Some(k), Some(m)) => {
                    let kind = Kind::try_from(*k)?;
                    pd.limits().check_order(*m)?;
                    let e = envelope_word(kind, *m)?;
                    EnvelopeOutput {
                        factor: None,
                        kind: e.kind,
                        m: e.order,
                        word: e.word,
                        mu1: None,
                        mu2: None,
                    }
                }
                _ => return Err(Failure::invalid("give --factor, or --kind with --order")),
            };
            emit_envelope(out, g.format, &result)?;
        }
        Command::Returns { factor, count } => {
            check_factor_len(g, factor)?;
            let result = returns(&pd, factor, *count)?;
            emit_returns(out, g.format, &result)?;
        }
        Command::Occurrences { factor, count } => {
            check_factor_len(g, factor)?;
            let stream = occurrences(&pd, factor, *count)?;
            let result = OccurrencesOutput {
                factor: stream.factor,
                positions: stream.positions,
                next: stream.next,
            };
            emit_occurrences(out, g.format, &result)?;
        }
        Command::Verify { jobs, m_max } => {
            let config = SweepConfig {
                len_max: g.max_len,
                count: g.max_count,
                m_max: *m_max,
                jobs: *jobs,
            };
            if g.verbose {
                writeln!(
                    err,
                    "verifying: factors up to {}, {} return words, orders up to {}, {} worker(s)",
                    config.len_max, config.count, config.m_max, config.jobs
                )?;
            }
            let report = sweep(&pd, config);
            emit_report(out, g.format, &report)?;
            if !report.all_passed() {
                writeln!(
                    err,
                    "{} of {} checks failed",
                    report.totals.fail,
                    report.results.len()
                )?;
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}

fn check_factor_len(g: &GlobalArgs, factor: &Word) -> Result<(), Failure> {
    if factor.len() > g.max_len {
        return Err(Failure::invalid(format!(
            "factor has {} letters, more than --max-len {}",
            factor.len(),
            g.max_len
        )));
    }
    Ok(())
}

fn generate(
    pd: &PeriodDoubling,
    source: Generated,
    length: Option<usize>,
    order: Option<u32>,
) -> Result<GenerateOutput, Failure> {
    let (name, order, word) = match source {
        Generated::D | Generated::Theta1 | Generated::Theta2 => {
            let n = length.ok_or_else(|| Failure::invalid("--length is required for sequences"))?;
            let (name, word) = match source {
                Generated::D => ("D", pd.pd_prefix(n)?),
                Generated::Theta1 => ("theta1", pd.theta_prefix(Kind::One, n)?),
                _ => ("theta2", pd.theta_prefix(Kind::Two, n)?),
            };
            (name, None, word)
        }
        Generated::A | Generated::B => {
            let m = order.ok_or_else(|| Failure::invalid("--order is required for blocks"))?;
            let (name, word) = if source == Generated::A {
                ("A", pd.block_a(m)?)
            } else {
                ("B", pd.block_b(m)?)
            };
            (name, Some(m), word)
        }
    };
    Ok(GenerateOutput {
        sequence: name.to_string(),
        order,
        length: word.len(),
        word,
    })
}

fn returns(pd: &PeriodDoubling, factor: &Word, count: usize) -> Result<ReturnsOutput, Failure> {
    let d = decompose(pd, factor, count)?;
    let ext = env_extension(pd, factor)?;
    let positions = occurrences(pd, factor, count)?.positions;
    Ok(ReturnsOutput {
        factor: d.factor,
        env: EnvelopeRef {
            kind: ext.envelope.kind,
            m: ext.envelope.order,
        },
        r0: d.r0,
        returns: d.returns,
        coded: d.coded,
        classification: d.classification,
        positions,
    })
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

fn emit_generate(out: &mut dyn Write, format: Format, r: &GenerateOutput) -> Result<(), Failure> {
    match format {
        Format::Text => writeln!(out, "{}", r.word)?,
        Format::Json => json_line(out, r)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["position", "letter"])?;
            for (i, l) in r.word.letters().iter().enumerate() {
                w.write_record([(i + 1).to_string(), l.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn opt(w: &Option<Word>) -> String {
    w.as_ref().map(Word::to_string).unwrap_or_default()
}

fn emit_envelope(out: &mut dyn Write, format: Format, r: &EnvelopeOutput) -> Result<(), Failure> {
    match format {
        Format::Text => {
            writeln!(out, "E({},{}) = {}", r.kind.as_u8(), r.m, r.word)?;
            if let Some(f) = &r.factor {
                writeln!(out, "factor = {f}")?;
                writeln!(out, "mu1 = {}", opt(&r.mu1))?;
                writeln!(out, "mu2 = {}", opt(&r.mu2))?;
            }
        }
        Format::Json => json_line(out, r)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["factor", "kind", "m", "word", "mu1", "mu2"])?;
            w.write_record([
                opt(&r.factor),
                r.kind.as_u8().to_string(),
                r.m.to_string(),
                r.word.to_string(),
                opt(&r.mu1),
                opt(&r.mu2),
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}

fn class_name(c: Classification) -> &'static str {
    match c {
        Classification::Theta1 => "Theta1",
        Classification::Theta2 => "Theta2",
    }
}

fn emit_returns(out: &mut dyn Write, format: Format, r: &ReturnsOutput) -> Result<(), Failure> {
    let codes = r.coded.letters();
    match format {
        Format::Text => {
            writeln!(out, "factor: {}", r.factor)?;
            writeln!(out, "envelope: E({},{})", r.env.kind.as_u8(), r.env.m)?;
            writeln!(out, "classification: {}", class_name(r.classification))?;
            writeln!(out, "coded: {}", r.coded)?;
            writeln!(out, "r0: {}", r.r0)?;
            for (p, (ret, pos)) in r.returns.iter().zip(&r.positions).enumerate() {
                writeln!(out, "r{} @ {pos} [{}]: {ret}", p + 1, codes[p])?;
            }
        }
        Format::Json => json_line(out, r)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["p", "position", "return_word", "code"])?;
            for (p, (ret, pos)) in r.returns.iter().zip(&r.positions).enumerate() {
                w.write_record([
                    (p + 1).to_string(),
                    pos.to_string(),
                    ret.to_string(),
                    codes[p].to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_occurrences(
    out: &mut dyn Write,
    format: Format,
    r: &OccurrencesOutput,
) -> Result<(), Failure> {
    match format {
        Format::Text => {
            let list: Vec<String> = r.positions.iter().map(usize::to_string).collect();
            writeln!(out, "{}", list.join(" "))?;
        }
        Format::Json => json_line(out, r)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["p", "position"])?;
            for (p, pos) in r.positions.iter().enumerate() {
                w.write_record([(p + 1).to_string(), pos.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_report(out: &mut dyn Write, format: Format, r: &VerificationReport) -> Result<(), Failure> {
    match format {
        Format::Text => {
            for c in r.failures() {
                let witness = serde_json::to_string(&c.counterexample)?;
                let params = serde_json::to_string(&c.params)?;
                writeln!(out, "FAIL {} {params}: {witness}", c.check_id)?;
            }
            writeln!(
                out,
                "{} checks: {} passed, {} failed",
                r.results.len(),
                r.totals.pass,
                r.totals.fail
            )?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, r)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "check_id",
                "params",
                "status",
                "counterexample",
                "elapsed_ms",
            ])?;
            for c in &r.results {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                };
                w.write_record([
                    c.check_id.clone(),
                    serde_json::to_string(&c.params)?,
                    status.to_string(),
                    c.counterexample
                        .as_ref()
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                    format!("{:.3}", c.elapsed_ms),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
