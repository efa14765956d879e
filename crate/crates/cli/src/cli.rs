//! Argument parsing and subcommand dispatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use matroidwb_core::analysis::{OutcomeKind, SearchConfig, Verdict};
use matroidwb_core::format::write_matroid;
use matroidwb_core::poly::basis_poly;

use crate::census::{csv_path, run_census, CensusJob};
use crate::check::{parse_pair, parse_scope, run_check, verify_witness, CheckOptions, Property};
use crate::config::parse_config;
use crate::construct::{build, summary, ConstructArgs};
use crate::error::{CliError, CliResult};
use crate::io::{read_matroid, read_text, stem, write_text};
use crate::paper::verify_paper;
use crate::report::{parse_rational, VerdictReport};

pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "matroidwb", version, about = "Matroid negative-dependence workbench")]
pub struct Cli {
    /// Base seed for every randomized tier.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Objective evaluations per pair in the search tiers.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads for the census.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output file (construct, check) or directory (census).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key = value settings; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a matroid and write it in the text format.
    Construct(ConstructArgs),
    /// Decide one property of a matroid file and print the verdict JSON.
    Check(CheckArgs),
    /// Run every requested check over a matroid family.
    Census(CensusArgs),
    /// Print the basis polynomial or a Rayleigh difference.
    Poly(PolyArgs),
    /// Reproduce the published example lists and identities.
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub matroid: PathBuf,
    /// negcorr, balanced, rayleigh, strong_rayleigh, hpp, positroid, paving, sparse_paving,
    /// c_rayleigh or nlc.
    #[arg(long)]
    pub prop: String,
    /// Restrict to one pair, e.g. 1,2.
    #[arg(long)]
    pub pair: Option<String>,
    /// Constant for c_rayleigh, e.g. 8/7.
    #[arg(long)]
    pub c: Option<String>,
    /// Pair scope for hpp: designated or all.
    #[arg(long)]
    pub scope: Option<String>,
    /// Re-verify a stored verdict's witness instead of searching.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Identifier recorded in the report; defaults to the file stem.
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct CensusArgs {
    /// lpm, sparse_paving or bicircular.
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated checks.
    #[arg(long)]
    pub checks: Option<String>,
    /// Largest m+r for lpm.
    #[arg(long)]
    pub max_total: Option<usize>,
    /// Include disconnected lattice path matroids.
    #[arg(long)]
    pub all_lpms: bool,
    #[arg(long)]
    pub n: Option<usize>,
    /// Rank for sparse_paving; all ranks when omitted.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub max_edges: Option<usize>,
    /// Stop after this many instances.
    #[arg(long)]
    pub limit: Option<usize>,
    /// true or false: keep one matroid per isomorphism class.
    #[arg(long)]
    pub dedup: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    /// Skip ids already present in the output CSV.
    #[arg(long)]
    pub resume: bool,
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    pub matroid: PathBuf,
    /// Print Δ_ij instead of the basis polynomial.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub rayleigh: Option<Vec<usize>>,
    /// Scale the subtracted product by c.
    #[arg(long)]
    pub c: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Replacement example fixture file.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
}

fn load_settings(cli: &Cli) -> CliResult<BTreeMap<String, String>> {
    let mut s = match &cli.config {
        Some(p) => parse_config(&read_text(p)?)?,
        None => BTreeMap::new(),
    };
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            s.insert(k.to_string(), v);
        }
    };
    put("seed", cli.seed.map(|v| v.to_string()));
    put("budget", cli.budget.map(|v| v.to_string()));
    put("workers", cli.workers.map(|v| v.to_string()));
    put("out", cli.out.as_ref().map(|p| p.display().to_string()));
    Ok(s)
}

fn number<T: std::str::FromStr>(s: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    s.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Usage(format!("bad value for {key}: {v:?}")))
        })
        .transpose()
}

fn exit_code(kind: OutcomeKind) -> i32 {
    match kind {
        OutcomeKind::Holds => 0,
        OutcomeKind::Fails => 1,
        OutcomeKind::Inconclusive => 2,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("stdout", e))
}

fn cmd_construct(a: &ConstructArgs, s: &BTreeMap<String, String>, out: &mut dyn Write) -> CliResult<i32> {
    let m = build(a)?;
    match s.get("out") {
        Some(p) => {
            write_text(&PathBuf::from(p), &write_matroid(&m))?;
            emit(out, &format!("{}\n", summary(&m)))?;
        }
        None => {
            eprintln!("{}", summary(&m));
            emit(out, &write_matroid(&m))?;
        }
    }
    Ok(0)
}

fn cmd_check(a: &CheckArgs, s: &BTreeMap<String, String>, out: &mut dyn Write) -> CliResult<i32> {
    let m = read_matroid(&a.matroid)?;
    let prop: Property = a.prop.parse()?;
    let id = a.id.clone().unwrap_or_else(|| stem(&a.matroid));
    let seed = number(s, "seed")?.unwrap_or(0);
    let budget = number(s, "budget")?.unwrap_or(SearchConfig::default().budget);
    if budget == 0 {
        return Err(CliError::Usage("budget must be positive".into()));
    }
    let c_text = a.c.clone().or_else(|| s.get("c").cloned());
    let start = Instant::now();
    let (verdict, c): (Verdict, _) = match &a.witness {
        Some(path) => {
            let stored = VerdictReport::from_json(&read_text(path)?)?;
            let w = stored
                .witness
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("{} holds no witness", path.display())))?
                .to_witness()?;
            let c = c_text.or(stored.c).map(|c| parse_rational(&c)).transpose()?;
            let v = verify_witness(&m, prop, &w, c.as_ref())?.ok_or_else(|| {
                CliError::Usage(format!(
                    "witness in {} does not refute {prop} for {}",
                    path.display(),
                    a.matroid.display()
                ))
            })?;
            (v, c)
        }
        None => {
            let c = c_text.map(|c| parse_rational(&c)).transpose()?;
            let opts = CheckOptions {
                pair: a.pair.as_deref().map(parse_pair).transpose()?,
                c: c.clone(),
                scope: match a.scope.as_deref().or(s.get("scope").map(String::as_str)) {
                    Some(sc) => parse_scope(sc)?,
                    None => CheckOptions::default().scope,
                },
                search: SearchConfig::new(budget, seed),
            };
            (run_check(&m, prop, &opts)?, c)
        }
    };
    let c = c.filter(|_| prop == Property::CRayleigh);
    let wall_ms = start.elapsed().as_millis() as u64;
    let report = VerdictReport::new(prop.name(), &id, &verdict, c.as_ref(), seed, wall_ms);
    let json = report.to_json();
    if let Some(p) = s.get("out") {
        write_text(&PathBuf::from(p), &json)?;
    }
    emit(out, &format!("{json}\n"))?;
    Ok(exit_code(verdict.kind()))
}

fn census_settings(a: &CensusArgs, mut s: BTreeMap<String, String>) -> BTreeMap<String, String> {
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            s.insert(k.to_string(), v);
        }
    };
    put("family", a.family.clone());
    put("checks", a.checks.clone());
    put("max_total", a.max_total.map(|v| v.to_string()));
    put("n", a.n.map(|v| v.to_string()));
    put("r", a.r.map(|v| v.to_string()));
    put("max_edges", a.max_edges.map(|v| v.to_string()));
    put("limit", a.limit.map(|v| v.to_string()));
    put("dedup", a.dedup.clone());
    put("c", a.c.clone());
    put("connected_only", a.all_lpms.then(|| "false".to_string()));
    put("resume", a.resume.then(|| "true".to_string()));
    s
}

fn cmd_census(a: &CensusArgs, s: BTreeMap<String, String>, out: &mut dyn Write) -> CliResult<i32> {
    let job = CensusJob::from_settings(&census_settings(a, s))?;
    let res = run_census(&job)?;
    let mut text = format!(
        "census {}: {} instances, {} evaluated, {} resumed\n",
        job.family.name(),
        res.instances.len(),
        res.results.len(),
        res.resumed
    );
    for ((check, outcome), count) in res.tally() {
        text.push_str(&format!("  {check} {outcome}: {count}\n"));
    }
    if let Some(dir) = &job.out {
        text.push_str(&format!("  rows: {}\n", csv_path(dir).display()));
    }
    emit(out, &text)?;
    Ok(0)
}

fn cmd_poly(a: &PolyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let m = read_matroid(&a.matroid)?;
    let f = basis_poly(&m);
    let p = match (&a.rayleigh, &a.c) {
        (None, None) => f,
        (None, Some(_)) => return Err(CliError::Usage("--c needs --rayleigh".into())),
        (Some(ij), None) => f.rayleigh_diff(ij[0], ij[1])?,
        (Some(ij), Some(c)) => f.scaled_rayleigh_diff(ij[0], ij[1], &parse_rational(c)?)?,
    };
    emit(out, &p.dump())?;
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let text = a.fixture.as_ref().map(|p| read_text(p)).transpose()?;
    let results = verify_paper(text.as_deref())?;
    let mut all = true;
    for r in &results {
        all &= r.passed;
        emit(out, &format!("{r}\n"))?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    emit(
        out,
        &format!("{} of {} fixtures passed\n", results.len() - failed, results.len()),
    )?;
    Ok(if all { 0 } else { 1 })
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let s = load_settings(cli)?;
    match &cli.command {
        Command::Construct(a) => cmd_construct(a, &s, out),
        Command::Check(a) => cmd_check(a, &s, out),
        Command::Census(a) => cmd_census(a, s, out),
        Command::Poly(a) => cmd_poly(a, out),
        Command::VerifyPaper(a) => cmd_verify(a, out),
    }
}

/// Parses `args` (program name first) and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
