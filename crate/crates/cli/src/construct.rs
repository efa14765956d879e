//! `construct`: build a matroid from parameters or input files.

use std::path::PathBuf;

use clap::Args;
use matroidwb_core::constructions::{
    bicircular, graphic, lattice_path, named_atlas, principal_extension, principal_truncation,
    transversal, uniform, whirl, LatticePathPair, ATLAS_NAMES,
};
use matroidwb_core::{ElemSet, Matroid};

use crate::check::parse_list;
use crate::error::{CliError, CliResult};
use crate::io::{read_graph, read_lattice_paths, read_matroid, read_set_system};

pub const KINDS: [&str; 13] = [
    "uniform",
    "graphic",
    "bicircular",
    "transversal",
    "lpm",
    "whirl",
    "atlas",
    "2sum",
    "dual",
    "minor",
    "extension",
    "truncation",
    "relax",
];

#[derive(Args, Clone, Debug, Default)]
pub struct ConstructArgs {
    /// uniform, graphic, bicircular, transversal, lpm, whirl, atlas, 2sum, dual, minor,
    /// extension, truncation or relax.
    pub kind: String,
    /// Atlas name (MK4, BK33, TicTacToe, U24, W3).
    pub name: Option<String>,
    /// Rank (uniform).
    #[arg(long)]
    pub k: Option<usize>,
    /// Ground set size (uniform; optional for lpm).
    #[arg(long)]
    pub n: Option<usize>,
    /// Whirl rank.
    #[arg(long)]
    pub r: Option<usize>,
    /// Lower bounds of the lattice path intervals, e.g. 1,2,5.
    #[arg(long)]
    pub lower: Option<String>,
    /// Upper bounds of the lattice path intervals, e.g. 3,5,6.
    #[arg(long)]
    pub upper: Option<String>,
    /// Lattice path pair file.
    #[arg(long)]
    pub paths: Option<PathBuf>,
    /// Graph file (graphic, bicircular).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Set system file (transversal).
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Input matroid file.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Second matroid file (2sum).
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Basepoint in the first matroid (2sum).
    #[arg(long)]
    pub p: Option<usize>,
    /// Basepoint in the second matroid (2sum).
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub contract: Option<String>,
    #[arg(long)]
    pub delete: Option<String>,
    /// Flat for extension and truncation; defaults to the whole ground set.
    #[arg(long)]
    pub flat: Option<String>,
    /// Circuit-hyperplane to relax.
    #[arg(long)]
    pub hyperplane: Option<String>,
}

fn need<T: Clone>(v: &Option<T>, what: &str, kind: &str) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| CliError::Usage(format!("construct {kind} needs {what}")))
}

fn set_arg(s: &Option<String>) -> CliResult<ElemSet> {
    match s {
        None => Ok(ElemSet::EMPTY),
        Some(s) => Ok(ElemSet::from_elems(parse_list(s)?)),
    }
}

fn input(a: &ConstructArgs) -> CliResult<Matroid> {
    read_matroid(&need(&a.input, "--in <matroid file>", &a.kind)?)
}

pub fn lpm_from_bounds(lower: &str, upper: &str, n: Option<usize>) -> CliResult<LatticePathPair> {
    let lower = parse_list(lower)?;
    let upper = parse_list(upper)?;
    let n = n.unwrap_or_else(|| upper.iter().chain(&lower).copied().max().unwrap_or(0));
    Ok(LatticePathPair::from_bounds(&lower, &upper, n)?)
}

pub fn build(a: &ConstructArgs) -> CliResult<Matroid> {
    let kind = a.kind.as_str();
    let m = match kind {
        "uniform" => uniform(need(&a.k, "--k", kind)?, need(&a.n, "--n", kind)?)?,
        "graphic" => graphic(&read_graph(&need(&a.graph, "--graph <file>", kind)?)?),
        "bicircular" => bicircular(&read_graph(&need(&a.graph, "--graph <file>", kind)?)?),
        "transversal" => transversal(&read_set_system(&need(&a.system, "--system <file>", kind)?)?),
        "lpm" => {
            let l = match (&a.paths, &a.lower, &a.upper) {
                (Some(p), _, _) => read_lattice_paths(p)?,
                (None, Some(lo), Some(up)) => lpm_from_bounds(lo, up, a.n)?,
                _ => {
                    return Err(CliError::Usage(
                        "construct lpm needs --lower and --upper, or --paths <file>".into(),
                    ))
                }
            };
            lattice_path(&l)
        }
        "whirl" => whirl(need(&a.r, "--r", kind)?)?,
        "atlas" => {
            let name = need(&a.name, &format!("a name ({})", ATLAS_NAMES.join(", ")), kind)?;
            named_atlas(&name)?
        }
        "2sum" => {
            let m = input(a)?;
            let other = read_matroid(&need(&a.other, "--other <matroid file>", kind)?)?;
            m.two_sum(need(&a.p, "--p", kind)?, &other, need(&a.q, "--q", kind)?)?
        }
        "dual" => input(a)?.dual(),
        "minor" => input(a)?.minor(set_arg(&a.contract)?, set_arg(&a.delete)?)?.0,
        "extension" | "truncation" => {
            let m = input(a)?;
            let flat = match &a.flat {
                Some(_) => set_arg(&a.flat)?,
                None => m.ground_set(),
            };
            if kind == "extension" {
                principal_extension(&m, flat)?
            } else {
                principal_truncation(&m, flat)?
            }
        }
        "relax" => input(a)?.relax(ElemSet::from_elems(parse_list(&need(
            &a.hyperplane,
            "--hyperplane",
            kind,
        )?)?))?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown construction {other:?}; expected one of {}",
                KINDS.join(", ")
            )))
        }
    };
    Ok(m)
}

/// One-line description printed after every construction.
pub fn summary(m: &Matroid) -> String {
    format!("n={} r={} bases={}", m.n(), m.rank(), m.num_bases())
}
