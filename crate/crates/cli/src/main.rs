//! `lpball` command-line front end.

mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lpball::phase::{self, ScanMode};
use lpball::projections::{exact_projection_ratio_2d, khinchin_exact, MAX_ENUM_N};
use lpball::sections::exact_section_ratio_2d;
use lpball::stability::{
    ball_case_constants, ball_constant_verdicts, szarek_case_constants, szarek_constant_verdicts, SZAREK_DELTA0,
    SZAREK_GAMMA0,
};
use lpball::sweeps::{self, SweepConfig, SweepSummary};
use lpball::{
    canonicalize, estimate_projection_ratio, estimate_section_ratio, Exponent, ProjectionQuery, SectionQuery,
};
use serde::Serialize;

use output::{scan_csv, sig12};

#[derive(Parser)]
#[command(name = "lpball", version, about = "Sections and projections of lp balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized section volume vol(B_p^n ∩ a^⊥) / vol(B_p^{n-1}).
    Section {
        /// Direction as comma-separated raw coordinates; canonicalized.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        a: Vec<f64>,
        /// Exponent p >= 1, or `inf`.
        #[arg(long)]
        p: Exponent,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Normalized projection volume vol(Proj_{a^⊥} B_q^n) / vol(B_q^{n-1}).
    Projection {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        a: Vec<f64>,
        /// Exponent q in [1, 2].
        #[arg(long)]
        q: Exponent,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Recomputed stability constants against their published values.
    Constants {
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long)]
        json: bool,
    },
    /// Diagonal direction against (e1+e2)/√2 over a grid of exponents, as CSV.
    Scan {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Comma-separated exponents, or `lo:hi:count` for an even grid.
        #[arg(long)]
        grid: String,
        /// Also estimate the diagonal of R^n by Monte Carlo.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exit 1 on any failed verdict.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// JSON report with every verdict.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random tuples per deterministic lemma.
        #[arg(long, default_value_t = 10_000)]
        tuples: usize,
        /// Random directions per exponent for the sampled lemmas.
        #[arg(long, default_value_t = 20)]
        directions: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Szarek,
    Ball,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Section,
    Projection,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Lemmas,
    Stability,
    Oracles,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Verdicts,
}

impl From<lpball::Error> for Failure {
    fn from(e: lpball::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdicts) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SLICE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("SLICE_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("SLICE_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct EstimateReport {
    direction: Vec<f64>,
    exponent: Exponent,
    estimate: lpball::MCEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Section { a, p, samples, seed, json } => {
            let dir = canonicalize(&a)?;
            let est = estimate_section_ratio(&SectionQuery::new(dir.clone(), p, samples, seed))?;
            let exact = match dir.active().len() {
                1 => Some(1.0),
                2 => Some(exact_section_ratio_2d(&lpball::Direction::new(&dir.active()[..2])?, p)?),
                _ => None,
            };
            print_estimate(
                EstimateReport { direction: dir.coords().to_vec(), exponent: p, estimate: est, exact },
                "p",
                json,
            )
        }
        Command::Projection { a, q, samples, seed, json } => {
            let dir = canonicalize(&a)?;
            let est = estimate_projection_ratio(&ProjectionQuery::new(dir.clone(), q, samples, seed))?;
            let exact = if dir.active().len() <= 2 {
                let two = [dir.a1(), dir.a2().max(0.0)];
                Some(exact_projection_ratio_2d(&lpball::Direction::new(&two)?, q)?)
            } else if q.value() == 1.0 && dir.active().len() <= MAX_ENUM_N {
                Some(khinchin_exact(&dir, MAX_ENUM_N)?)
            } else {
                None
            };
            print_estimate(
                EstimateReport { direction: dir.coords().to_vec(), exponent: q, estimate: est, exact },
                "q",
                json,
            )
        }
        Command::Constants { side, json } => constants(side, json),
        Command::Scan { mode, grid, n, samples, seed, out } => {
            let grid = parse_grid(&grid)?;
            let mode = match mode {
                Mode::Section => ScanMode::Section,
                Mode::Projection => ScanMode::Projection,
            };
            if n == Some(0) {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            let rows = phase::scan(mode, &grid, n, samples, seed)?;
            let csv = scan_csv(&rows);
            match out {
                Some(path) => fs::write(path, csv)?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
            let mut sorted = grid.clone();
            sorted.sort_by(f64::total_cmp);
            for root in phase::crossings(mode, &sorted)? {
                eprintln!("limit difference changes sign at {}", sig12(root));
            }
            Ok(())
        }
        Command::Verify { suite, report, samples, seed, tuples, directions } => {
            if samples == 0 {
                return Err(Failure::Usage("--samples must be positive".into()));
            }
            let cfg = SweepConfig { seed, samples, tuples, directions };
            let verdicts = match suite {
                Suite::Lemmas => sweeps::lemma_suite(&cfg)?,
                Suite::Stability => sweeps::stability_suite(&cfg)?,
                Suite::Oracles => sweeps::oracle_suite(&cfg)?,
            };
            let summary = SweepSummary::of(&verdicts);
            println!(
                "{} verdicts: {} pass, {} fail, {} inconclusive ({:.2}%)",
                summary.total,
                summary.pass,
                summary.fail,
                summary.inconclusive,
                100.0 * summary.inconclusive_rate()
            );
            for v in verdicts.iter().filter(|v| !v.pass()) {
                println!(
                    "{:?} {:?}{} lhs={} rhs={} se={}",
                    v.status,
                    v.lemma,
                    if v.label.is_empty() { String::new() } else { format!("[{}]", v.label) },
                    sig12(v.lhs),
                    sig12(v.rhs),
                    sig12(v.lhs_std_error)
                );
            }
            if let Some(path) = report {
                #[derive(Serialize)]
                struct Report<'a> {
                    suite: Suite,
                    config: SweepConfig,
                    summary: SweepSummary,
                    verdicts: &'a [lpball::LemmaVerdict],
                }
                let body = serde_json::to_string_pretty(&Report { suite, config: cfg, summary, verdicts: &verdicts })
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                fs::write(path, body + "\n")?;
            }
            if summary.fail > 0 {
                Err(Failure::Verdicts)
            } else {
                Ok(())
            }
        }
    }
}

fn print_estimate(r: EstimateReport, name: &str, json: bool) -> Result<(), Failure> {
    if json {
        println!("{}", serde_json::to_string_pretty(&r).map_err(|e| Failure::Usage(e.to_string()))?);
        return Ok(());
    }
    let dir: Vec<String> = r.direction.iter().map(|&x| sig12(x)).collect();
    let e = &r.estimate;
    println!("direction  {}", dir.join(","));
    println!("{name:<10} {}", r.exponent);
    println!("estimate   {}", sig12(e.mean));
    println!("std_error  {}", sig12(e.std_error));
    println!("samples    {} (seed {})", e.samples, e.seed);
    if let Some(x) = r.exact {
        println!("exact      {}", sig12(x));
    }
    if e.heavy_tail {
        println!("warning    sample dominated by extreme values; the standard error is unreliable");
    }
    Ok(())
}

fn constants(side: Side, json: bool) -> Result<(), Failure> {
    let verdicts = match side {
        Side::Szarek => szarek_constant_verdicts(&szarek_case_constants(SZAREK_DELTA0, SZAREK_GAMMA0)?),
        Side::Ball => ball_constant_verdicts(&ball_case_constants()),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&verdicts).map_err(|e| Failure::Usage(e.to_string()))?);
    } else {
        println!("{:<18} {:>20} {:>20}  status", "constant", "recomputed", "published");
        for v in &verdicts {
            println!(
                "{:<18} {:>20} {:>20}  {}",
                v.label,
                sig12(v.lhs),
                sig12(v.rhs),
                if v.pass() { "ok" } else { "BELOW" }
            );
        }
    }
    if verdicts.iter().any(|v| v.failed()) {
        Err(Failure::Verdicts)
    } else {
        Ok(())
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse grid {s:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Err(Failure::Usage("empty scan grid".into()));
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let k: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return match k {
            0 => Err(Failure::Usage("empty scan grid".into())),
            1 => Ok(vec![lo]),
            _ => Ok((0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()),
        };
    }
    s.split(',').map(|t| t.trim().parse::<Exponent>().map(|e| e.value()).map_err(|_| bad())).collect()
}
