//! Command-line interface: classify one curve, sample and classify a batch,
//! or replay the F₂ arithmetic of a saved report.

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use bm_arith::poly::{IntPoly, RatPoly};
use bm_engine::{ObstructionReport, SminOptions};
use bm_etale::{Curve, EtaleElement};
use bm_padic::Place;
use obstruct::{classify_curve_with, sample_curves, Aggregate, Category, ClassificationResult, SampleConfig, Witness};

const EXIT_DECIDED: u8 = 0;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(name = "obstruct", version, about = "Brauer-Manin obstructions on hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// height bound of the point search
    #[arg(long, default_value_t = 10_000)]
    height: u64,
    /// extra places for S, comma separated
    #[arg(long, value_delimiter = ',')]
    extra_primes: Vec<u64>,
    /// second pass with the primes up to 100 and the bad primes up to 10^4
    #[arg(long)]
    deep: bool,
    /// also run the obstruction on curves with points and check consistency
    #[arg(long)]
    cross_check: bool,
    /// treat an unfactored part of the discriminant as squarefree
    #[arg(long)]
    assume_squarefree_cofactor: bool,
    /// explicit local solubility bound
    #[arg(long, default_value_t = 0)]
    solubility_bound: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a single curve y^2 = f(x)
    Classify {
        /// coefficients of f, leading first, whitespace separated
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// file with one element per line: coefficients of powers of theta, constant first
        #[arg(long)]
        ells: Option<PathBuf>,
        /// write the classification as JSON
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample random curves and classify them
    Sample {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON-lines output; an existing file is resumed by curve index
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Replay the intersection recorded in a report
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

fn config(common: &Common) -> SampleConfig {
    let mut cfg = SampleConfig {
        height: common.height,
        extra_primes: common.extra_primes.iter().map(|&p| Place::Prime(p)).collect(),
        deep: common.deep,
        cross_check: common.cross_check,
        solubility_bound: common.solubility_bound,
        ..SampleConfig::default()
    };
    cfg.engine.smin = SminOptions { assume_squarefree_cofactor: common.assume_squarefree_cofactor };
    cfg
}

fn parse_curve(s: &str) -> Result<Curve> {
    let coeffs: Vec<BigInt> = s
        .split_whitespace()
        .map(|t| t.parse::<BigInt>().with_context(|| format!("bad coefficient {t:?}")))
        .collect::<Result<_>>()?;
    if coeffs.is_empty() {
        bail!("no coefficients given");
    }
    let f = IntPoly::new(coeffs.into_iter().rev().collect());
    Curve::new(f).map_err(|e| anyhow::anyhow!("invalid curve: {e}"))
}

fn parse_ells(path: &Path, curve: &Curve) -> Result<Vec<EtaleElement>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let coeffs: Vec<BigRational> = line
            .split_whitespace()
            .map(|t| t.parse::<BigRational>().with_context(|| format!("bad rational {t:?}")))
            .collect::<Result<_>>()?;
        out.push(curve.element(RatPoly::new(coeffs)));
    }
    Ok(out)
}

fn exit_code(r: &ClassificationResult) -> u8 {
    match r.category {
        Category::Undecided if r.resource_abort => EXIT_RESOURCE,
        Category::Undecided => EXIT_UNDECIDED,
        _ => EXIT_DECIDED,
    }
}

fn summary(r: &ClassificationResult) -> String {
    let detail = match &r.witness {
        Witness::FailingPlace(v) => format!("no points over Q_{v}"),
        Witness::Point(p) => match (&p.x, &p.y) {
            (Some(x), Some(y)) => format!("point ({x}, {y})"),
            _ => "point at infinity".into(),
        },
        Witness::Report(rep) => format!("{} elements, {} surviving subproducts", rep.ells.len(), rep.survivors.len()),
        Witness::None => String::new(),
    };
    let msg = r.message.as_deref().map(|m| format!(" [{m}]")).unwrap_or_default();
    format!("{:?}: {detail}{msg}", r.category)
}

fn classify(coeffs: &str, ells: Option<&Path>, json: Option<&Path>, common: &Common) -> Result<u8> {
    let curve = parse_curve(coeffs)?;
    let given = match ells {
        Some(p) => parse_ells(p, &curve)?,
        None => Vec::new(),
    };
    let res = classify_curve_with(&curve, &config(common), &given);
    println!("{}", summary(&res));
    if let Some(path) = json {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        serde_json::to_writer_pretty(BufWriter::new(f), &res)?;
    }
    Ok(exit_code(&res))
}

fn load_done(path: &Path) -> Result<Vec<ClassificationResult>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let f = File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ClassificationResult>(&line) {
            Ok(r) => out.push(r),
            // a truncated last line from an interrupted run
            Err(_) => break,
        }
    }
    Ok(out)
}

fn sample(genus: usize, bound: i64, count: usize, seed: u64, json: Option<&Path>, common: &Common) -> Result<u8> {
    if genus < 1 || bound < 1 {
        bail!("genus and bound must be positive");
    }
    let cfg = SampleConfig { genus, bound, count, seed, ..config(common) };
    let mut results = match json {
        Some(p) => load_done(p)?,
        None => Vec::new(),
    };
    let done: BTreeSet<u64> = results.iter().filter_map(|r| r.index).collect();
    let mut sink = match json {
        Some(p) => {
            // rewrite the valid prefix, dropping a partial line
            let mut f = BufWriter::new(File::create(p)?);
            obstruct::table::write_json_lines(&mut f, &results)?;
            f.flush()?;
            drop(f);
            Some(OpenOptions::new().append(true).open(p)?)
        }
        None => None,
    };
    for (i, curve) in sample_curves(&cfg).enumerate() {
        let i = i as u64;
        if done.contains(&i) {
            continue;
        }
        let mut r = obstruct::classify_curve(&curve, &cfg);
        r.index = Some(i);
        eprintln!("{i:>5} {}  {}", r.curve, summary(&r));
        if let Some(f) = sink.as_mut() {
            serde_json::to_writer(&mut *f, &r)?;
            f.write_all(b"\n")?;
            f.flush()?;
        }
        results.push(r);
    }
    let agg = Aggregate::from_results(&results);
    print!("{}", agg.table());
    if agg.violations > 0 {
        eprintln!("{} consistency violations", agg.violations);
        return Ok(EXIT_UNDECIDED);
    }
    Ok(EXIT_DECIDED)
}

fn verify(path: &Path) -> Result<u8> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report: ObstructionReport = match serde_json::from_str::<ObstructionReport>(&text) {
        Ok(r) => r,
        Err(_) => {
            let res: ClassificationResult = serde_json::from_str(&text).context("neither a report nor a classification")?;
            match res.witness {
                Witness::Report(r) => *r,
                _ => bail!("classification carries no obstruction report"),
            }
        }
    };
    let ok = report.verify().map_err(|e| anyhow::anyhow!("{e}"))?;
    println!("{:?}: {}", report.verdict, if ok { "verified" } else { "NOT verified" });
    Ok(if ok { EXIT_DECIDED } else { EXIT_UNDECIDED })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_DECIDED });
        }
    };
    let r = match &cli.command {
        Command::Classify { coeffs, ells, json, common } => classify(coeffs, ells.as_deref(), json.as_deref(), common),
        Command::Sample { genus, bound, count, seed, json, common } => {
            sample(*genus, *bound, *count, *seed, json.as_deref(), common)
        }
        Command::Verify { report } => verify(report),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
