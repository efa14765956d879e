use std::fmt;

use crate::bitset::ElemSet;
use crate::poly::Monomial;
use crate::Rational;

/// Decision stage that contributed to a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    Exact,
    Coefficients,
    Search,
    Sos,
    SosSquared,
    Wagner,
    AllPairs,
    Components,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Exact => "exact",
            Tier::Coefficients => "coefficients",
            Tier::Search => "search",
            Tier::Sos => "sos",
            Tier::SosSquared => "sos_squared",
            Tier::Wagner => "wagner",
            Tier::AllPairs => "all_pairs",
            Tier::Components => "components",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symmetric Gram matrix with `mᵀ Q m` equal to the certified polynomial.
///
/// When `squared` is set the identity holds after substituting `x_i = y_i^2`, and each
/// basis entry is read as a monomial in the `y` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramCertificate {
    pub basis: Vec<Vec<u8>>,
    pub matrix: Vec<Vec<Rational>>,
    pub squared: bool,
}

impl GramCertificate {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Exact count comparison at the all-ones point.
    AllOnesExact,
    CoefficientNonneg,
    SosGram(GramCertificate),
    SinglePairWagner {
        pair: (usize, usize),
        inner: Box<Certificate>,
    },
    AllPairs(Vec<((usize, usize), Certificate)>),
    /// One certificate per connected component.
    Components(Vec<Certificate>),
    BaseSortingOrder(Vec<usize>),
    /// Every case enumerated exactly.
    Exhaustive { checked: usize },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::AllOnesExact => "AllOnesExact",
            Certificate::CoefficientNonneg => "CoefficientNonneg",
            Certificate::SosGram(_) => "SOSGram",
            Certificate::SinglePairWagner { .. } => "SinglePairWagner",
            Certificate::AllPairs(_) => "AllPairs",
            Certificate::Components(_) => "Components",
            Certificate::BaseSortingOrder(_) => "BaseSortingOrder",
            Certificate::Exhaustive { .. } => "Exhaustive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Point where the tested polynomial evaluates to the exact negative `value`.
    Point {
        point: Vec<Rational>,
        value: Rational,
        pair: Option<(usize, usize)>,
    },
    /// Violating sets, e.g. `(S, T)` for the lattice condition.
    Sets(Vec<ElemSet>),
    /// A minor and a pair on which the inner check fails, in original labels.
    Minor {
        contract: ElemSet,
        delete: ElemSet,
        pair: (usize, usize),
    },
    /// Every candidate in a finite search space was ruled out.
    Exhausted { candidates: usize },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub best_value: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Holds(Certificate),
    Fails(Witness),
    Inconclusive(Diagnostics),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeKind {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeKind::Holds => "Holds",
            OutcomeKind::Fails => "Fails",
            OutcomeKind::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub pair: Option<(usize, usize)>,
    pub tiers_run: Vec<Tier>,
}

impl Verdict {
    pub fn holds(certificate: Certificate, tiers_run: Vec<Tier>) -> Self {
        Verdict {
            outcome: Outcome::Holds(certificate),
            pair: None,
            tiers_run,
        }
    }

    pub fn fails(witness: Witness, tiers_run: Vec<Tier>) -> Self {
        Verdict {
            outcome: Outcome::Fails(witness),
            pair: None,
            tiers_run,
        }
    }

    pub fn inconclusive(diagnostics: Diagnostics, tiers_run: Vec<Tier>) -> Self {
        Verdict {
            outcome: Outcome::Inconclusive(diagnostics),
            pair: None,
            tiers_run,
        }
    }

    pub fn with_pair(mut self, pair: (usize, usize)) -> Self {
        self.pair = Some(pair);
        self
    }

    pub fn kind(&self) -> OutcomeKind {
        match self.outcome {
            Outcome::Holds(_) => OutcomeKind::Holds,
            Outcome::Fails(_) => OutcomeKind::Fails,
            Outcome::Inconclusive(_) => OutcomeKind::Inconclusive,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.kind() == OutcomeKind::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.kind() == OutcomeKind::Fails
    }

    pub fn is_inconclusive(&self) -> bool {
        self.kind() == OutcomeKind::Inconclusive
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Holds(c) => Some(c),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Fails(w) => Some(w),
            _ => None,
        }
    }
}

/// Renders a Gram basis entry as a monomial when all exponents are at most two.
pub fn basis_monomial(exps: &[u8]) -> Option<Monomial> {
    let mut lin = ElemSet::EMPTY;
    let mut sq = ElemSet::EMPTY;
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => lin = lin.with(i + 1),
            2 => sq = sq.with(i + 1),
            _ => return None,
        }
    }
    Some(Monomial::new(lin, sq))
}
