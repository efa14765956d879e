//! Property dispatch for `check` and the census, plus exact witness re-verification.

use std::fmt;
use std::str::FromStr;

use matroidwb_core::analysis::{
    c_rayleigh_verdict, hpp_verdict, is_balanced, neg_corr, neg_corr_all_pairs, nlc_check,
    rayleigh_verdict, strong_rayleigh_all_pairs, strong_rayleigh_verdict, PairScope, SearchConfig,
    Tier, Verdict, Witness,
};
use matroidwb_core::classifiers::{paving_check, positroid_check, positroid_verdict, sparse_paving_check};
use matroidwb_core::poly::{basis_poly, Measure};
use matroidwb_core::{BoundedPoly, ElemSet, Matroid, Rational};
use num_traits::{One, Signed};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    NegCorr,
    Balanced,
    Rayleigh,
    StrongRayleigh,
    Hpp,
    Positroid,
    Paving,
    SparsePaving,
    CRayleigh,
    Nlc,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::NegCorr,
        Property::Balanced,
        Property::Rayleigh,
        Property::StrongRayleigh,
        Property::Hpp,
        Property::Positroid,
        Property::Paving,
        Property::SparsePaving,
        Property::CRayleigh,
        Property::Nlc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::NegCorr => "negcorr",
            Property::Balanced => "balanced",
            Property::Rayleigh => "rayleigh",
            Property::StrongRayleigh => "strong_rayleigh",
            Property::Hpp => "hpp",
            Property::Positroid => "positroid",
            Property::Paving => "paving",
            Property::SparsePaving => "sparse_paving",
            Property::CRayleigh => "c_rayleigh",
            Property::Nlc => "nlc",
        }
    }

    /// Whether the verdict depends on the search seed and budget.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            Property::Rayleigh | Property::StrongRayleigh | Property::Hpp | Property::CRayleigh
        )
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "neg_corr" | "negative_correlation" => "negcorr",
            "strongly_rayleigh" | "sr" => "strong_rayleigh",
            "crayleigh" => "c_rayleigh",
            "sparsepaving" => "sparse_paving",
            other => other,
        };
        Property::ALL
            .into_iter()
            .find(|p| p.name() == alias)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown property {s:?}; expected one of {}",
                    Property::ALL.map(|p| p.name()).join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub pair: Option<(usize, usize)>,
    pub c: Option<Rational>,
    pub scope: PairScope,
    pub search: SearchConfig,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            pair: None,
            c: None,
            scope: PairScope::Designated,
            search: SearchConfig::default(),
        }
    }
}

fn require_c(opts: &CheckOptions) -> CliResult<&Rational> {
    opts.c
        .as_ref()
        .ok_or_else(|| CliError::Usage("c_rayleigh needs a constant c".into()))
}

pub fn run_check(m: &Matroid, prop: Property, opts: &CheckOptions) -> CliResult<Verdict> {
    let cfg = &opts.search;
    let v = match prop {
        Property::NegCorr => match opts.pair {
            Some((e, f)) => neg_corr(m, e, f)?,
            None => neg_corr_all_pairs(m),
        },
        Property::Balanced => is_balanced(m)?,
        Property::Rayleigh => rayleigh_verdict(&basis_poly(m), opts.pair, cfg)?,
        Property::StrongRayleigh => match opts.pair {
            Some(p) => strong_rayleigh_verdict(&basis_poly(m), p, cfg)?,
            None => strong_rayleigh_all_pairs(&basis_poly(m), cfg)?,
        },
        Property::Hpp => match opts.pair {
            Some(p) => strong_rayleigh_verdict(&basis_poly(m), p, cfg)?,
            None => hpp_verdict(m, opts.scope, cfg)?,
        },
        Property::Positroid => positroid_check(m)?,
        Property::Paving => paving_check(m),
        Property::SparsePaving => sparse_paving_check(m),
        Property::CRayleigh => c_rayleigh_verdict(&basis_poly(m), require_c(opts)?, opts.pair, cfg)?,
        Property::Nlc => nlc_check(&Measure::uniform_on_bases(m))?,
    };
    Ok(v)
}

/// Polynomial a point witness must make negative, and whether the point must be positive.
fn witness_target(
    m: &Matroid,
    prop: Property,
    pair: (usize, usize),
    c: Option<&Rational>,
) -> CliResult<(BoundedPoly, bool)> {
    let f = basis_poly(m);
    let (i, j) = pair;
    Ok(match prop {
        Property::NegCorr => (f.rayleigh_diff(i, j)?, true),
        Property::Rayleigh => (f.rayleigh_diff(i, j)?, true),
        Property::StrongRayleigh | Property::Hpp => (f.rayleigh_diff(i, j)?, false),
        Property::CRayleigh => {
            let c = c.ok_or_else(|| CliError::Usage("c_rayleigh witness needs c".into()))?;
            (f.scaled_rayleigh_diff(i, j, c)?, true)
        }
        other => {
            return Err(CliError::Usage(format!(
                "{other} has no point witnesses"
            )))
        }
    })
}

/// Re-verifies a stored witness from scratch; `Ok(None)` means it does not refute `prop`.
pub fn verify_witness(
    m: &Matroid,
    prop: Property,
    witness: &Witness,
    c: Option<&Rational>,
) -> CliResult<Option<Verdict>> {
    let valid = match witness {
        Witness::Point { point, value, pair } => {
            let Some(pair) = *pair else {
                return Ok(None);
            };
            if point.len() != m.n() || pair.0 == pair.1 || pair.0 > m.n() || pair.1 > m.n() {
                return Ok(None);
            }
            let (target, positive) = witness_target(m, prop, pair, c)?;
            let in_domain = !positive
                || point
                    .iter()
                    .enumerate()
                    .all(|(k, x)| x.is_positive() || k + 1 == pair.0 || k + 1 == pair.1);
            let value_ok = value.is_negative() && target.evaluate(point) == *value;
            let ones_ok = prop != Property::NegCorr || point.iter().all(|x| x.is_one());
            in_domain && value_ok && ones_ok
        }
        Witness::Sets(sets) => match prop {
            Property::Nlc => {
                let [s, t] = sets.as_slice() else {
                    return Ok(None);
                };
                let mu = Measure::uniform_on_bases(m);
                mu.weight(*s) * mu.weight(*t) < mu.weight(s.union(*t)) * mu.weight(s.intersection(*t))
            }
            Property::Paving => sets.len() == 1 && small_circuit(m, sets[0]),
            Property::SparsePaving => {
                sets.len() == 1 && (small_circuit(m, sets[0]) || small_circuit(&m.dual(), sets[0]))
            }
            _ => false,
        },
        Witness::Minor {
            contract,
            delete,
            pair,
        } => {
            prop == Property::Balanced
                && contract.intersection(*delete).is_empty()
                && contract.union(*delete).is_subset(m.ground_set())
                && minor_fails(m, *contract, *delete, *pair)?
        }
        Witness::Exhausted { .. } => prop == Property::Positroid && positroid_verdict(m)?.is_none(),
    };
    Ok(valid.then(|| {
        let mut v = Verdict::fails(witness.clone(), vec![Tier::Exact]);
        if let Witness::Point { pair: Some(p), .. } = witness {
            v = v.with_pair(*p);
        }
        v
    }))
}

fn small_circuit(m: &Matroid, s: ElemSet) -> bool {
    s.len() < m.rank() && m.circuits().iter().any(|c| c == s)
}

fn minor_fails(m: &Matroid, contract: ElemSet, delete: ElemSet, pair: (usize, usize)) -> CliResult<bool> {
    let (minor, labels) = m.minor(contract, delete)?;
    let (Some(a), Some(b)) = (labels.new_label(pair.0), labels.new_label(pair.1)) else {
        return Ok(false);
    };
    Ok(a != b && neg_corr(&minor, a, b)?.is_fails())
}

pub fn parse_pair(s: &str) -> CliResult<(usize, usize)> {
    let parts = parse_list(s)?;
    match parts.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!("expected a pair like 1,2, got {s:?}"))),
    }
}

/// Comma- or space-separated element list.
pub fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("not an element: {t:?}")))
        })
        .collect()
}

pub fn parse_scope(s: &str) -> CliResult<PairScope> {
    match s.trim() {
        "designated" | "wagner" => Ok(PairScope::Designated),
        "all" | "all_pairs" => Ok(PairScope::AllPairs),
        other => Err(CliError::Usage(format!(
            "unknown pair scope {other:?}; expected designated or all"
        ))),
    }
}
