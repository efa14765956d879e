//! Verdict JSON: the document printed by `check` and stored for every census failure.

use matroidwb_core::analysis::{Certificate, Outcome, Verdict, Witness};
use matroidwb_core::{ElemSet, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub property: String,
    pub matroid_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    /// Scaling constant of the c-Rayleigh inequality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    pub outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Value>,
    pub tiers_run: Vec<String>,
    pub seed: u64,
    pub wall_ms: u64,
}

/// Witness fields; which ones are present depends on the witness shape.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contract: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delete: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<usize>,
}

pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> CliResult<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Usage(format!("not a rational number: {s:?}")))
}

fn pair_array(p: (usize, usize)) -> [usize; 2] {
    [p.0, p.1]
}

impl WitnessReport {
    pub fn from_witness(w: &Witness) -> Self {
        match w {
            Witness::Point { point, value, pair } => WitnessReport {
                point: Some(point.iter().map(rational_string).collect()),
                value: Some(rational_string(value)),
                pair: pair.map(pair_array),
                ..Default::default()
            },
            Witness::Sets(sets) => WitnessReport {
                sets: Some(sets.iter().map(|s| s.to_vec()).collect()),
                ..Default::default()
            },
            Witness::Minor {
                contract,
                delete,
                pair,
            } => WitnessReport {
                contract: Some(contract.to_vec()),
                delete: Some(delete.to_vec()),
                pair: Some(pair_array(*pair)),
                ..Default::default()
            },
            Witness::Exhausted { candidates } => WitnessReport {
                candidates: Some(*candidates),
                ..Default::default()
            },
        }
    }

    /// Rebuilds the witness; malformed numbers or sets are reported as usage errors.
    pub fn to_witness(&self) -> CliResult<Witness> {
        let set = |v: &[usize]| ElemSet::from_elems(v.iter().copied());
        if let (Some(point), Some(value)) = (&self.point, &self.value) {
            return Ok(Witness::Point {
                point: point
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<CliResult<_>>()?,
                value: parse_rational(value)?,
                pair: self.pair.map(|[a, b]| (a, b)),
            });
        }
        if let Some(sets) = &self.sets {
            return Ok(Witness::Sets(sets.iter().map(|s| set(s)).collect()));
        }
        if let (Some(c), Some(d), Some([a, b])) = (&self.contract, &self.delete, self.pair) {
            return Ok(Witness::Minor {
                contract: set(c),
                delete: set(d),
                pair: (a, b),
            });
        }
        if let Some(candidates) = self.candidates {
            return Ok(Witness::Exhausted { candidates });
        }
        Err(CliError::Usage("witness has no recognizable fields".into()))
    }
}

fn gram_json(g: &matroidwb_core::analysis::GramCertificate) -> Value {
    json!({
        "basis": g.basis,
        "matrix": g.matrix.iter().map(|r| r.iter().map(rational_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "squared": g.squared,
    })
}

/// Compact certificate payload: orders and Gram matrices are reproduced, composites summarized.
pub fn certificate_json(c: &Certificate) -> Option<Value> {
    match c {
        Certificate::SosGram(g) => Some(gram_json(g)),
        Certificate::BaseSortingOrder(order) => Some(json!({ "order": order })),
        Certificate::SinglePairWagner { pair, inner } => Some(json!({
            "pair": pair_array(*pair),
            "inner_kind": inner.kind(),
            "inner": certificate_json(inner),
        })),
        Certificate::AllPairs(list) => Some(json!({
            "pairs": list.iter().map(|(p, c)| json!({"pair": pair_array(*p), "kind": c.kind()})).collect::<Vec<_>>(),
        })),
        Certificate::Components(list) => Some(json!({
            "components": list.iter().map(|c| c.kind()).collect::<Vec<_>>(),
        })),
        Certificate::Exhaustive { checked } => Some(json!({ "checked": checked })),
        Certificate::AllOnesExact | Certificate::CoefficientNonneg => None,
    }
}

impl VerdictReport {
    pub fn new(
        property: &str,
        matroid_id: &str,
        verdict: &Verdict,
        c: Option<&Rational>,
        seed: u64,
        wall_ms: u64,
    ) -> Self {
        let (certificate_kind, certificate, witness, diagnostics) = match &verdict.outcome {
            Outcome::Holds(cert) => (Some(cert.kind().to_string()), certificate_json(cert), None, None),
            Outcome::Fails(w) => (None, None, Some(WitnessReport::from_witness(w)), None),
            Outcome::Inconclusive(d) => (
                None,
                None,
                None,
                Some(json!({ "best_value": d.best_value, "note": d.note })),
            ),
        };
        VerdictReport {
            property: property.to_string(),
            matroid_id: matroid_id.to_string(),
            pair: verdict.pair.map(pair_array),
            c: c.map(rational_string),
            outcome: verdict.kind().to_string(),
            certificate_kind,
            certificate,
            witness,
            diagnostics,
            tiers_run: verdict.tiers_run.iter().map(|t| t.name().to_string()).collect(),
            seed,
            wall_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
