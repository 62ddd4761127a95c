//! `dyckmat`: generate, verify, count and expand non-overlapping binary
//! matrix sets.
//!
//! Data goes to stdout and is byte-identical across runs. Errors go to stderr
//! as a single `error: <kind>: <message>` line. Exit codes: 0 success, 1 a
//! verification or cross-check failure, 2 usage error, 3 resource limit.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dyckmat::census::{render_csv, render_text};
use dyckmat::expand::{assess_candidate, survey_anchors};
use dyckmat::setgen::MatrixRecord;
use dyckmat::{
    cross_check, emit_table, enumerate_dyck, enumerate_set, find_compatible_rows, find_expansion_strings, unrank,
    verify_expansion, verify_set, BinaryMatrix, BitString, Limits, MatrixSet, SetSpec, VerifyReport,
};

/// Environment variable that caps the worker thread count.
const THREADS_ENV: &str = "DYCKMAT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "dyckmat", version, about = "Non-overlapping binary matrices from Dyck words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every Dyck word of a given length, descending binary order.
    Dyck {
        #[arg(long)]
        len: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Print one matrix of L(m×n) by index, or stream the whole set.
    Build {
        #[command(flatten)]
        set: SetArgs,
        /// Print only the matrix with this enumeration index.
        #[arg(long, visible_alias = "seed-index")]
        index: Option<u128>,
        /// Emit the transposed (column-wise) matrices.
        #[arg(long)]
        transpose: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check every matrix and pair of matrices of L(m×n) for overlaps.
    Verify {
        #[command(flatten)]
        set: SetArgs,
        /// Stop reporting after the first violation.
        #[arg(long)]
        fail_fast: bool,
        /// Verify the transposed set.
        #[arg(long)]
        transpose: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Size of L(m×n) from the closed form, cross-checked by enumeration.
    Count {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form sizes against the reference table.
    Table {
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Search for, or test, a string that enlarges L(m×n) by one matrix.
    Expand {
        #[command(flatten)]
        set: SetArgs,
        /// List every usable string (the default).
        #[arg(long, conflicts_with_all = ["x", "sweep"])]
        search: bool,
        /// Build Z from this string and verify the enlarged set.
        #[arg(long, value_name = "BITS")]
        x: Option<String>,
        /// Count usable strings for every admissible anchor of width n.
        #[arg(long, conflicts_with = "x")]
        sweep: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Strings of width n that do not overlap the first row, with their row kind.
    Rows {
        #[arg(long)]
        n: usize,
        /// Anchor Dyck word; defaults to 1^k 0^k.
        #[arg(long)]
        anchor: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct SetArgs {
    /// Number of rows.
    #[arg(long)]
    m: usize,
    /// Number of columns.
    #[arg(long)]
    n: usize,
    /// Anchor Dyck word; defaults to 1^k 0^k.
    #[arg(long)]
    anchor: Option<String>,
}

impl SetArgs {
    fn spec(&self) -> Result<SetSpec, Failure> {
        Ok(SetSpec::parse(self.m, self.n, self.anchor.as_deref())?)
    }
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Override the largest set size that may be materialized.
    #[arg(long)]
    limit: Option<u128>,
}

impl Common {
    fn limits(&self) -> Limits {
        match self.limit {
            Some(l) => Limits::default().with_max_set_size(l),
            None => Limits::default(),
        }
    }

    fn no_csv(&self) -> Result<(), Failure> {
        if self.format == Format::Csv {
            return Err(Failure::Usage("csv output is only available for table".into()));
        }
        Ok(())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Lib(dyckmat::Error),
    Usage(String),
    Io(io::Error),
}

impl From<dyckmat::Error> for Failure {
    fn from(e: dyckmat::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {line}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: usage: {msg}");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|o| {
        out.flush()?;
        Ok(o)
    });
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: io: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: usage: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            let code = match e {
                dyckmat::Error::InvalidArgument(_) => 2,
                dyckmat::Error::ResourceLimit { .. } | dyckmat::Error::Overflow(_) => 3,
            };
            eprintln!("error: {}: {}", e.kind(), one_line(&e.to_string()));
            ExitCode::from(code)
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(command: Command, out: &mut impl Write) -> Result<Outcome, Failure> {
    match command {
        Command::Dyck { len, common } => dyck(len, &common, out),
        Command::Build {
            set,
            index,
            transpose,
            common,
        } => build(&set, index, transpose, &common, out),
        Command::Verify {
            set,
            fail_fast,
            transpose,
            common,
        } => verify(&set, fail_fast, transpose, &common, out),
        Command::Count { set, common } => count(&set, &common, out),
        Command::Table { m_max, n_max, common } => table(m_max, n_max, &common, out),
        Command::Expand {
            set,
            search: _,
            x,
            sweep,
            common,
        } => expand(&set, x.as_deref(), sweep, &common, out),
        Command::Rows { n, anchor, common } => rows(n, anchor.as_deref(), &common, out),
    }
}

fn json_line<T: Serialize>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dyck(len: usize, common: &Common, out: &mut impl Write) -> Result<Outcome, Failure> {
    common.no_csv()?;
    let words = enumerate_dyck(len, &common.limits())?;
    match common.format {
        Format::Json => json_line(out, &words)?,
        _ => {
            for w in &words {
                writeln!(out, "{w}")?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn orient(matrix: BinaryMatrix, transpose: bool) -> Result<BinaryMatrix, Failure> {
    Ok(if transpose { matrix.transpose()? } else { matrix })
}

fn build(
    set: &SetArgs,
    index: Option<u128>,
    transpose: bool,
    common: &Common,
    out: &mut impl Write,
) -> Result<Outcome, Failure> {
    common.no_csv()?;
    let spec = set.spec()?;
    let limits = common.limits();
    let emit = |i: usize, matrix: BinaryMatrix, out: &mut dyn Write| -> Result<(), Failure> {
        let matrix = orient(matrix, transpose)?;
        match common.format {
            Format::Json => {
                serde_json::to_writer(&mut *out, &MatrixRecord::new(&spec, &matrix))?;
                writeln!(out)?;
            }
            _ => {
                if i > 0 {
                    writeln!(out)?;
                }
                out.write_all(matrix.to_text().as_bytes())?;
            }
        }
        Ok(())
    };
    match index {
        Some(k) => emit(0, unrank(&spec, k, &limits)?, out)?,
        None => {
            for (i, matrix) in enumerate_set(&spec, &limits)?.enumerate() {
                emit(i, matrix, out)?;
            }
        }
    }
    Ok(Outcome::Ok)
}

fn write_report(report: &VerifyReport, format: Format, out: &mut impl Write) -> Result<(), Failure> {
    match format {
        Format::Json => json_line(out, report)?,
        _ => {
            let verdict = if report.pass { "pass" } else { "fail" };
            writeln!(
                out,
                "{verdict}: checked_pairs={} violations={}",
                report.checked_pairs,
                report.violations.len()
            )?;
            for v in &report.violations {
                let o = v.witness.offset;
                writeln!(out, "  {} {} offset ({}, {}) {}", v.a, v.b, o.dr, o.dc, v.witness.kind)?;
            }
        }
    }
    Ok(())
}

fn verdict(report: &VerifyReport) -> Outcome {
    if report.pass {
        Outcome::Ok
    } else {
        Outcome::Failed
    }
}

fn verify(
    set: &SetArgs,
    fail_fast: bool,
    transpose: bool,
    common: &Common,
    out: &mut impl Write,
) -> Result<Outcome, Failure> {
    common.no_csv()?;
    let spec = set.spec()?;
    let limits = common.limits();
    let matrices = MatrixSet::new(&spec, &limits)?
        .to_vec(&limits)?
        .into_iter()
        .map(|m| orient(m, transpose))
        .collect::<Result<Vec<_>, _>>()?;
    let report = verify_set(&matrices, fail_fast)?;
    write_report(&report, common.format, out)?;
    Ok(verdict(&report))
}

fn count(set: &SetArgs, common: &Common, out: &mut impl Write) -> Result<Outcome, Failure> {
    common.no_csv()?;
    let spec = set.spec()?;
    let report = cross_check(&spec, &common.limits())?;
    match common.format {
        Format::Json => json_line(out, &report)?,
        _ => {
            let value = report.formula_value.map_or_else(|| "overflow".to_string(), |v| v.to_string());
            writeln!(out, "{value}")?;
            eprintln!(
                "enumerated={} table={} status={}",
                report.enumerated_value.map_or_else(|| "-".to_string(), |v| v.to_string()),
                report.table_value.map_or_else(|| "-".to_string(), |v| v.to_string()),
                report.status()
            );
            if let Some(note) = &report.note {
                eprintln!("note: {note}");
            }
        }
    }
    Ok(if report.has_undocumented_mismatch() {
        Outcome::Failed
    } else {
        Outcome::Ok
    })
}

fn table(m_max: usize, n_max: usize, common: &Common, out: &mut impl Write) -> Result<Outcome, Failure> {
    let reports = emit_table(m_max, n_max)?;
    match common.format {
        Format::Text => out.write_all(render_text(&reports).as_bytes())?,
        Format::Csv => out.write_all(render_csv(&reports).as_bytes())?,
        Format::Json => json_line(out, &reports)?,
    }
    Ok(if reports.iter().any(|r| r.has_undocumented_mismatch()) {
        Outcome::Failed
    } else {
        Outcome::Ok
    })
}

fn expand(
    set: &SetArgs,
    x: Option<&str>,
    sweep: bool,
    common: &Common,
    out: &mut impl Write,
) -> Result<Outcome, Failure> {
    common.no_csv()?;
    let limits = common.limits();
    if sweep {
        if set.anchor.is_some() {
            return Err(Failure::Usage("--sweep covers every anchor; drop --anchor".into()));
        }
        // validates n for the requested m
        SetSpec::with_default_anchor(set.m, set.n)?;
        let survey = survey_anchors(set.n, &limits)?;
        match common.format {
            Format::Json => json_line(out, &survey)?,
            _ => {
                for s in &survey {
                    let first = s.first_candidate.as_ref().map_or_else(|| "-".to_string(), BitString::to_string);
                    writeln!(out, "{} {} {} {}", s.anchor, s.first_row, s.candidates, first)?;
                }
            }
        }
        return Ok(if survey.iter().all(|s| s.candidates > 0) {
            Outcome::Ok
        } else {
            Outcome::Failed
        });
    }
    let spec = set.spec()?;
    match x {
        Some(bits) => {
            let x: BitString = bits.parse()?;
            if x.len() != spec.n() {
                return Err(Failure::Usage(format!("x has length {}, expected {}", x.len(), spec.n())));
            }
            let candidate = assess_candidate(&spec, &x)?;
            if let Some(reason) = candidate.rejection() {
                eprintln!("rejected: {reason}");
                return Ok(Outcome::Failed);
            }
            let report = verify_expansion(&spec, &x, &limits)?;
            write_report(&report, common.format, out)?;
            Ok(verdict(&report))
        }
        None => {
            let found = find_expansion_strings(&spec, &limits)?;
            match common.format {
                Format::Json => json_line(out, &found)?,
                _ => {
                    for s in &found {
                        writeln!(out, "{s}")?;
                    }
                }
            }
            Ok(Outcome::Ok)
        }
    }
}

fn rows(n: usize, anchor: Option<&str>, common: &Common, out: &mut impl Write) -> Result<Outcome, Failure> {
    common.no_csv()?;
    let spec = SetSpec::parse(2, n, anchor)?;
    let found = find_compatible_rows(&spec, &common.limits())?;
    match common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                row: &'a BitString,
                kind: String,
            }
            let rows: Vec<Row> = found
                .iter()
                .map(|(row, kind)| Row {
                    row,
                    kind: kind.label().to_string(),
                })
                .collect();
            json_line(out, &rows)?;
        }
        _ => {
            for (row, kind) in &found {
                writeln!(out, "{row} {kind}")?;
            }
        }
    }
    Ok(Outcome::Ok)
}
