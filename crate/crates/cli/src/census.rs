//! Census jobs: stream a family, fan instances out to a worker pool, write rows in id order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::Instant;

use matroidwb_core::analysis::{OutcomeKind, PairScope, SearchConfig, Verdict};
use matroidwb_core::classifiers::{
    bicircular_family, is_paving, is_sparse_paving, lpm_family, sparse_paving_family,
};
use matroidwb_core::format::write_matroid;
use matroidwb_core::iso::family_invariant;
use matroidwb_core::{Matroid, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{run_check, CheckOptions, Property};
use crate::error::{CliError, CliResult};
use crate::report::{parse_rational, VerdictReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Lpm { max_total: usize, connected_only: bool },
    /// `r = None` sweeps every rank `1..n`.
    SparsePaving { n: usize, r: Option<usize> },
    Bicircular { max_edges: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Lpm { .. } => "lpm",
            Family::SparsePaving { .. } => "sparse_paving",
            Family::Bicircular { .. } => "bicircular",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusJob {
    pub family: Family,
    pub checks: Vec<Property>,
    /// Objective evaluations per pair for the search tiers.
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub limit: usize,
    /// Keep one representative per isomorphism class.
    pub dedup: bool,
    pub c: Option<Rational>,
    pub resume: bool,
}

fn setting<T: std::str::FromStr>(s: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    s.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Usage(format!("bad value for {key}: {v:?}")))
        })
        .transpose()
}

fn flag(s: &BTreeMap<String, String>, key: &str, default: bool) -> CliResult<bool> {
    match s.get(key).map(|v| v.trim().to_ascii_lowercase()) {
        None => Ok(default),
        Some(v) if matches!(v.as_str(), "true" | "yes" | "1" | "") => Ok(true),
        Some(v) if matches!(v.as_str(), "false" | "no" | "0") => Ok(false),
        Some(v) => Err(CliError::Usage(format!("bad boolean for {key}: {v:?}"))),
    }
}

impl CensusJob {
    /// Builds a job from merged config-file and command-line settings.
    pub fn from_settings(s: &BTreeMap<String, String>) -> CliResult<Self> {
        let family_name = s
            .get("family")
            .ok_or_else(|| CliError::Usage("census needs a family".into()))?;
        let family = match family_name.as_str() {
            "lpm" => Family::Lpm {
                max_total: setting(s, "max_total")?.unwrap_or(6),
                connected_only: flag(s, "connected_only", true)?,
            },
            "sparse_paving" | "sparse-paving" => Family::SparsePaving {
                n: setting(s, "n")?.ok_or_else(|| CliError::Usage("sparse_paving needs n".into()))?,
                r: setting(s, "r")?,
            },
            "bicircular" => Family::Bicircular {
                max_edges: setting(s, "max_edges")?.unwrap_or(6),
            },
            other => {
                return Err(CliError::Usage(format!(
                    "unknown family {other:?}; expected lpm, sparse_paving or bicircular"
                )))
            }
        };
        let checks = s
            .get("checks")
            .ok_or_else(|| CliError::Usage("census needs at least one check".into()))?
            .split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<CliResult<Vec<Property>>>()?;
        if checks.is_empty() {
            return Err(CliError::Usage("census needs at least one check".into()));
        }
        let seed = setting(s, "seed")?.unwrap_or(0);
        let budget: u64 = setting(s, "budget")?.unwrap_or(20_000);
        if budget == 0 {
            return Err(CliError::Usage("budget must be positive".into()));
        }
        let workers: usize = setting(s, "workers")?.unwrap_or(1);
        let c = s.get("c").map(|v| parse_rational(v)).transpose()?;
        if checks.contains(&Property::CRayleigh) && c.is_none() {
            return Err(CliError::Usage("c_rayleigh check needs c".into()));
        }
        Ok(CensusJob {
            family,
            checks,
            budget,
            seed,
            workers: workers.max(1),
            out: s.get("out").map(PathBuf::from),
            limit: setting(s, "limit")?.unwrap_or(usize::MAX),
            dedup: flag(s, "dedup", true)?,
            c,
            resume: flag(s, "resume", false)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub id: usize,
    pub params: String,
    pub matroid: Matroid,
}

fn steps_string(steps: &[bool]) -> String {
    steps.iter().map(|&s| if s { 'N' } else { 'E' }).collect()
}

fn raw_instances(job: &CensusJob) -> CliResult<Vec<(String, Matroid)>> {
    Ok(match &job.family {
        Family::Lpm {
            max_total,
            connected_only,
        } => lpm_family(*max_total, *connected_only, usize::MAX)?
            .map(|(l, m)| {
                let p = format!("P={};Q={}", steps_string(l.lower_steps()), steps_string(l.upper_steps()));
                (p, m)
            })
            .collect(),
        Family::SparsePaving { n, r } => {
            let ranks: Vec<usize> = match r {
                Some(r) => vec![*r],
                None => (1..*n).collect(),
            };
            let mut out = Vec::new();
            for r in ranks {
                for m in sparse_paving_family(*n, r, job.limit)? {
                    let h = m.non_bases().len();
                    out.push((format!("n={n};r={r};nonbases={h}"), m));
                }
            }
            out
        }
        Family::Bicircular { max_edges } => bicircular_family(*max_edges, usize::MAX)?
            .map(|(g, m)| {
                let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
                (format!("v={};edges={}", g.vertex_count(), edges.join(" ")), m)
            })
            .collect(),
    })
}

/// The job's instances in stream order, deduplicated and truncated as requested.
pub fn instances(job: &CensusJob) -> CliResult<Vec<Instance>> {
    let mut out: Vec<Instance> = Vec::new();
    let mut classes: HashMap<(usize, usize, usize, Vec<u32>), Vec<usize>> = HashMap::new();
    for (params, m) in raw_instances(job)? {
        if out.len() >= job.limit {
            break;
        }
        if job.dedup {
            let key = (m.n(), m.rank(), m.num_bases(), family_invariant(m.n(), m.bases()));
            let bucket = classes.entry(key).or_default();
            if bucket.iter().any(|&k| out[k].matroid.is_isomorphic(&m)) {
                continue;
            }
            bucket.push(out.len());
        }
        out.push(Instance {
            id: out.len(),
            params,
            matroid: m,
        });
    }
    Ok(out)
}

/// Per-instance seed derived from the job seed by a fixed counter scheme.
pub fn instance_seed(seed: u64, id: usize) -> u64 {
    let mut z = seed ^ (id as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub const CSV_HEADER: [&str; 19] = [
    "id",
    "family",
    "params",
    "n",
    "r",
    "num_bases",
    "connected",
    "paving",
    "sparse_paving",
    "positroid",
    "neg_corr_all_pairs",
    "rayleigh_outcome",
    "hpp_outcome",
    "witness_ref",
    "balanced",
    "strong_rayleigh_outcome",
    "c_rayleigh_outcome",
    "nlc_outcome",
    "hpp_wagner_agrees",
];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub id: usize,
    pub family: String,
    pub params: String,
    pub n: usize,
    pub r: usize,
    pub num_bases: usize,
    pub connected: bool,
    pub paving: bool,
    pub sparse_paving: bool,
    pub positroid: String,
    pub neg_corr_all_pairs: String,
    pub rayleigh_outcome: String,
    pub hpp_outcome: String,
    pub witness_ref: String,
    pub balanced: String,
    pub strong_rayleigh_outcome: String,
    pub c_rayleigh_outcome: String,
    pub nlc_outcome: String,
    /// Whether the single-pair and all-pairs half-plane verdicts agree; empty if either is open.
    pub hpp_wagner_agrees: String,
}

impl Row {
    /// Outcome recorded for a check, if it ran.
    pub fn outcome(&self, p: Property) -> Option<&str> {
        let cell = match p {
            Property::NegCorr => &self.neg_corr_all_pairs,
            Property::Rayleigh => &self.rayleigh_outcome,
            Property::Hpp => &self.hpp_outcome,
            Property::Balanced => &self.balanced,
            Property::StrongRayleigh => &self.strong_rayleigh_outcome,
            Property::CRayleigh => &self.c_rayleigh_outcome,
            Property::Nlc => &self.nlc_outcome,
            Property::Positroid => {
                return match self.positroid.as_str() {
                    "true" => Some("Holds"),
                    "false" => Some("Fails"),
                    "" => None,
                    other => Some(other),
                }
            }
            Property::Paving => return Some(if self.paving { "Holds" } else { "Fails" }),
            Property::SparsePaving => {
                return Some(if self.sparse_paving { "Holds" } else { "Fails" })
            }
        };
        (!cell.is_empty()).then_some(cell.as_str())
    }
}

/// One failing check of one instance, ready to be written as a witness file.
#[derive(Clone, Debug)]
pub struct WitnessRecord {
    pub id: usize,
    pub property: Property,
    pub file_name: String,
    pub report: VerdictReport,
}

#[derive(Clone, Debug)]
pub struct InstanceResult {
    pub row: Row,
    pub witnesses: Vec<WitnessRecord>,
}

fn outcome_cell(v: &CliResult<Verdict>) -> String {
    match v {
        Ok(v) => v.kind().to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Runs the designated-pair and all-pairs half-plane checks; an exact refutation from either
/// decides, otherwise the single-pair verdict stands.
fn hpp_cross_checked(m: &Matroid, opts: &CheckOptions) -> (CliResult<Verdict>, String) {
    let run = |scope| {
        run_check(
            m,
            Property::Hpp,
            &CheckOptions {
                scope,
                ..opts.clone()
            },
        )
    };
    match (run(PairScope::Designated), run(PairScope::AllPairs)) {
        (Ok(wagner), Ok(all)) => {
            let agrees = match (wagner.kind(), all.kind()) {
                (a, b) if a == b => "true",
                (OutcomeKind::Inconclusive, _) | (_, OutcomeKind::Inconclusive) => "",
                _ => "false",
            };
            let v = if wagner.is_fails() || !all.is_fails() { wagner } else { all };
            (Ok(v), agrees.to_string())
        }
        (Err(e), _) | (_, Err(e)) => (Err(e), String::new()),
    }
}

pub fn evaluate(job: &CensusJob, inst: &Instance) -> InstanceResult {
    let m = &inst.matroid;
    let seed = instance_seed(job.seed, inst.id);
    let opts = CheckOptions {
        pair: None,
        c: job.c.clone(),
        scope: PairScope::Designated,
        search: SearchConfig::new(job.budget, seed),
    };
    let mut row = Row {
        id: inst.id,
        family: job.family.name().to_string(),
        params: inst.params.clone(),
        n: m.n(),
        r: m.rank(),
        num_bases: m.num_bases(),
        connected: m.is_connected(),
        paving: is_paving(m),
        sparse_paving: is_sparse_paving(m),
        ..Default::default()
    };
    let mut witnesses = Vec::new();
    let mut checks: Vec<Property> = job.checks.clone();
    checks.sort();
    checks.dedup();
    for prop in checks {
        let start = Instant::now();
        let verdict = if prop == Property::Hpp {
            let (v, agrees) = hpp_cross_checked(m, &opts);
            row.hpp_wagner_agrees = agrees;
            v
        } else {
            run_check(m, prop, &opts)
        };
        let wall_ms = start.elapsed().as_millis() as u64;
        let cell = outcome_cell(&verdict);
        match prop {
            Property::NegCorr => row.neg_corr_all_pairs = cell,
            Property::Rayleigh => row.rayleigh_outcome = cell,
            Property::Hpp => row.hpp_outcome = cell,
            Property::Balanced => row.balanced = cell,
            Property::StrongRayleigh => row.strong_rayleigh_outcome = cell,
            Property::CRayleigh => row.c_rayleigh_outcome = cell,
            Property::Nlc => row.nlc_outcome = cell,
            Property::Positroid => {
                row.positroid = match &verdict {
                    Ok(v) => v.is_holds().to_string(),
                    Err(e) => format!("error: {e}"),
                }
            }
            Property::Paving | Property::SparsePaving => {}
        }
        if let Ok(v) = &verdict {
            if v.is_fails() && !matches!(prop, Property::Paving | Property::SparsePaving) {
                let id = format!("census-{:06}", inst.id);
                let c = (prop == Property::CRayleigh).then_some(job.c.as_ref()).flatten();
                let report = VerdictReport::new(prop.name(), &id, v, c, seed, wall_ms);
                witnesses.push(WitnessRecord {
                    id: inst.id,
                    property: prop,
                    file_name: format!("{:06}_{}.json", inst.id, prop.name()),
                    report,
                });
            }
        }
    }
    row.witness_ref = witnesses
        .iter()
        .map(|w| format!("witnesses/{}", w.file_name))
        .collect::<Vec<_>>()
        .join(";");
    InstanceResult { row, witnesses }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOutput {
    pub instances: Vec<Instance>,
    pub results: Vec<InstanceResult>,
    /// Instances skipped because a previous run already recorded them.
    pub resumed: usize,
}

impl CensusOutput {
    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.results.iter().map(|r| &r.row)
    }

    /// `(check, outcome) -> count` over the evaluated rows.
    pub fn tally(&self) -> BTreeMap<(String, String), usize> {
        let mut t = BTreeMap::new();
        for row in self.rows() {
            for p in Property::ALL {
                if let Some(o) = row.outcome(p) {
                    *t.entry((p.name().to_string(), o.to_string())).or_insert(0) += 1;
                }
            }
        }
        t
    }

    pub fn count(&self, p: Property, kind: OutcomeKind) -> usize {
        let k = kind.to_string();
        self.rows().filter(|r| r.outcome(p) == Some(k.as_str())).count()
    }
}

pub fn csv_path(out: &Path) -> PathBuf {
    out.join("census.csv")
}

fn existing_ids(path: &Path) -> CliResult<BTreeSet<usize>> {
    let mut ids = BTreeSet::new();
    if !path.exists() {
        return Ok(ids);
    }
    let mut rdr = csv::Reader::from_path(path)?;
    for rec in rdr.deserialize::<Row>() {
        match rec {
            Ok(row) => {
                ids.insert(row.id);
            }
            // a torn final line from an interrupted run is dropped and recomputed
            Err(_) => break,
        }
    }
    Ok(ids)
}

/// Rewrites the CSV keeping only complete rows, so appending resumes cleanly.
fn compact_csv(path: &Path, keep: &BTreeSet<usize>) -> CliResult<()> {
    let mut rows = Vec::new();
    let mut rdr = csv::Reader::from_path(path)?;
    for rec in rdr.deserialize::<Row>() {
        match rec {
            Ok(row) if keep.contains(&row.id) => rows.push(row),
            _ => break,
        }
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| CliError::io(path.display().to_string(), e))?;
    Ok(())
}

fn write_witness(out: &Path, inst: &Instance, w: &WitnessRecord) -> CliResult<()> {
    let dir = out.join("witnesses");
    crate::io::write_text(&dir.join(&w.file_name), &w.report.to_json())?;
    crate::io::write_text(
        &dir.join(format!("{:06}.matroid", inst.id)),
        &write_matroid(&inst.matroid),
    )
}

/// Runs the job; with an output directory, rows are flushed chunk by chunk in id order.
pub fn run_census(job: &CensusJob) -> CliResult<CensusOutput> {
    let instances = instances(job)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    let mut done = BTreeSet::new();
    let mut writer = None;
    if let Some(out) = &job.out {
        fs::create_dir_all(out).map_err(|e| CliError::io(out.display().to_string(), e))?;
        let path = csv_path(out);
        if job.resume && path.exists() {
            done = existing_ids(&path)?;
            compact_csv(&path, &done)?;
        }
        let append = job.resume && path.exists();
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .append(append)
            .truncate(!append)
            .open(&path)
            .map_err(|e| CliError::io(path.display().to_string(), e))?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        if !append {
            w.write_record(CSV_HEADER)?;
        }
        writer = Some(w);
    }
    let todo: Vec<&Instance> = instances.iter().filter(|i| !done.contains(&i.id)).collect();
    let chunk = (job.workers * 4).max(8);
    let mut results = Vec::with_capacity(todo.len());
    for batch in todo.chunks(chunk) {
        let evaluated: Vec<InstanceResult> =
            pool.install(|| batch.par_iter().map(|inst| evaluate(job, inst)).collect());
        for (inst, res) in batch.iter().zip(&evaluated) {
            if let (Some(w), Some(out)) = (writer.as_mut(), &job.out) {
                w.serialize(&res.row)?;
                for wit in &res.witnesses {
                    write_witness(out, inst, wit)?;
                }
            }
        }
        if let Some(w) = writer.as_mut() {
            w.flush().map_err(|e| CliError::io("census.csv", e))?;
        }
        results.extend(evaluated);
    }
    Ok(CensusOutput {
        resumed: done.len(),
        instances,
        results,
    })
}
