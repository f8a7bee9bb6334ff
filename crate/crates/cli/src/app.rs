//! Argument parsing and dispatch for the `fptprop` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fptprop::random::Shape;
use fptprop::{Config, Kind, Value};

use crate::commands;
use crate::error::CliError;
use crate::instance::{InstanceFile, Model};
use crate::report::{Format, Render};

/// Fixed-parameter domain-consistency propagators, with a brute-force
/// oracle for comparison.
#[derive(Debug, Parser)]
#[command(name = "fptprop", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest backdoor, in undecided 0/1 variables, to enumerate.
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    /// Largest domain product the oracle will enumerate.
    #[arg(long, global = true)]
    pub oracle_cap: Option<u128>,
    /// Largest product of interval counts the sum lifting will enumerate.
    #[arg(long, global = true)]
    pub run_cap: Option<u64>,
    /// Largest value universe an automaton may encode as a bitmask.
    #[arg(long, global = true)]
    pub mask_width: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate all constraints of an instance to a fixpoint.
    Propagate { file: PathBuf },
    /// Compare each constraint's propagator against the brute-force oracle.
    Compare {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Random instances instead of a file: seed and upper bounds on n, d, k.
        #[arg(long, num_args = 4, value_names = ["SEED", "N", "D", "K"])]
        random: Option<Vec<u64>>,
        /// Random instances per constraint kind.
        #[arg(long, default_value_t = 200, requires = "random")]
        count: usize,
        /// Constraint kinds for random mode, comma separated (default: all).
        #[arg(long, value_delimiter = ',', requires = "random")]
        kinds: Vec<String>,
    },
    /// Write the NValue instance encoding a hitting-set question.
    GenHittingSet {
        /// One input set as comma-separated values; repeat per set.
        #[arg(long = "set", allow_hyphen_values = true)]
        sets: Vec<String>,
        /// Largest hitting set size allowed.
        #[arg(long)]
        k: u64,
        /// Output file (default: standard output).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Time one filter call per (n, k) on seeded random instances.
    Bench {
        #[arg(long)]
        kind: String,
        /// Values of n: comma-separated numbers or inclusive ranges `a..b`.
        #[arg(long)]
        n: String,
        /// Values of k, same syntax as `--n`.
        #[arg(long)]
        k: String,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Timing samples per row; the median is reported.
        #[arg(long, default_value_t = 7)]
        samples: usize,
    },
}

impl Cli {
    pub fn config(&self) -> Config {
        let mut c = Config::default();
        if let Some(v) = self.k_max {
            c.k_max = v;
        }
        if let Some(v) = self.oracle_cap {
            c.oracle_cap = v;
        }
        if let Some(v) = self.run_cap {
            c.run_product_cap = v;
        }
        if let Some(v) = self.mask_width {
            c.mask_width = v;
        }
        c
    }
}

/// Reads and validates an instance file.
pub fn load(path: &Path) -> Result<Model, CliError> {
    let source = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    InstanceFile::parse(&source)?.build(&source)
}

/// Parses a list such as `100,200,400` or `2..10`.
pub fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::usage(format!("`{s}` is not a list of numbers or ranges a..b"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_set(s: &str) -> Result<Vec<Value>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| CliError::usage(format!("`{p}` in set `{s}` is not an integer")))
        })
        .collect()
}

/// Executes a parsed command line, writing the report to `out`. Returns the
/// process exit status: 0 success, 1 wipeout or mismatch.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let config = cli.config();
    let (text, code) = match &cli.command {
        Command::Propagate { file } => {
            let report = commands::propagate(&load(file)?, config)?;
            let code = i32::from(report.failed.is_some());
            (report.render(cli.format), code)
        }
        Command::Compare {
            file: Some(file), ..
        } => {
            let report = commands::compare(&load(file)?, config)?;
            (report.render(cli.format), i32::from(!report.matches()))
        }
        Command::Compare {
            random: Some(r),
            count,
            kinds,
            ..
        } => {
            let kinds = if kinds.is_empty() {
                Kind::ALL.to_vec()
            } else {
                kinds
                    .iter()
                    .map(|k| k.parse())
                    .collect::<fptprop::Result<_>>()?
            };
            let dim =
                |i: usize| usize::try_from(r[i]).map_err(|_| CliError::usage("bound too large"));
            let shape = Shape::new(dim(1)?, dim(2)?, dim(3)?);
            let summary = commands::compare_random(
                &kinds,
                r[0],
                shape,
                *count,
                config,
                &commands::fpt_filter,
            )?;
            (summary.render(cli.format), i32::from(!summary.matches()))
        }
        Command::Compare { .. } => return Err(CliError::usage("give a FILE or --random")),
        Command::GenHittingSet { sets, k, out: path } => {
            let sets = sets
                .iter()
                .map(|s| parse_set(s))
                .collect::<Result<Vec<_>, _>>()?;
            let file = commands::gen_hitting_set(&sets, *k)?;
            let text = format!(
                "# NValue encoding of a hitting-set question: {} sets, k = {k}\n{}",
                sets.len(),
                file.write()
            );
            match path {
                Some(p) => {
                    std::fs::write(p, text).map_err(|source| CliError::Io {
                        path: p.display().to_string(),
                        source,
                    })?;
                    (String::new(), 0)
                }
                None => (text, 0),
            }
        }
        Command::Bench {
            kind,
            n,
            k,
            d,
            seed,
            samples,
        } => {
            let kind: Kind = kind.parse()?;
            let report = commands::bench(
                kind,
                &parse_list(n)?,
                &parse_list(k)?,
                *d,
                *seed,
                *samples,
                config,
            )?;
            (report.render(cli.format), 0)
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?;
    Ok(code)
}

/// Full entry point: parses `args`, runs, reports errors on `err`, and
/// returns the exit status (2 for usage, parse and parameter errors).
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
                return 0;
            }
            let _ = err.write_all(text.as_bytes());
            return 2;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
