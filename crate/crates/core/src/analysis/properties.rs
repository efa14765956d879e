//! Negative-dependence checks: correlation, balance, Rayleigh-type inequalities and the lattice
//! condition.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::search::{counterexample_search, Domain};
use super::sos::{sos_certificate, sos_certificate_squared};
use super::verdict::{Certificate, Diagnostics, Outcome, Tier, Verdict, Witness};
use crate::bitset::{subsets_of, ElemSet};
use crate::error::{Error, Result};
use crate::iso::family_invariant;
use crate::matroid::Matroid;
use crate::poly::{basis_poly, BoundedPoly, Measure};
use crate::Rational;

/// Counterexample search settings shared by the Rayleigh-type checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Objective evaluations per pair.
    pub budget: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 20_000,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn new(budget: u64, seed: u64) -> Self {
        SearchConfig { budget, seed }
    }

    /// Seed for one pair, fixed by the base seed and the pair alone.
    pub fn pair_seed(&self, i: usize, j: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((i as u64) << 8 | j as u64)
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidArgument(format!(
            "pair ({i},{j}) must be two distinct elements of 1..={n}"
        )));
    }
    Ok(())
}

fn int(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `N_e N_f >= N N_ef` for the basis counts of `m`.
pub fn neg_corr(m: &Matroid, e: usize, f: usize) -> Result<Verdict> {
    check_pair(m.n(), e, f)?;
    let (mut ne, mut nf, mut nef) = (0usize, 0usize, 0usize);
    for b in m.bases() {
        let (a, c) = (b.contains(e), b.contains(f));
        ne += a as usize;
        nf += c as usize;
        nef += (a && c) as usize;
    }
    let value = int(ne) * int(nf) - int(m.num_bases()) * int(nef);
    let verdict = if value.is_negative() {
        Verdict::fails(
            Witness::Point {
                point: vec![Rational::one(); m.n()],
                value,
                pair: Some((e, f)),
            },
            vec![Tier::Exact],
        )
    } else {
        Verdict::holds(Certificate::AllOnesExact, vec![Tier::Exact])
    };
    Ok(verdict.with_pair((e, f)))
}

/// `neg_corr` on every pair; fails at the first violating pair.
pub fn neg_corr_all_pairs(m: &Matroid) -> Verdict {
    for (e, f) in pairs(m.n()) {
        let v = neg_corr(m, e, f).expect("valid pair");
        if v.is_fails() {
            return v;
        }
    }
    Verdict::holds(
        Certificate::Exhaustive {
            checked: m.n() * m.n().saturating_sub(1) / 2,
        },
        vec![Tier::Exact],
    )
}

/// Largest ground set accepted by [`is_balanced`].
pub const BALANCED_MAX_N: usize = 10;

/// Negative correlation for every minor, minors deduplicated up to isomorphism.
pub fn is_balanced(m: &Matroid) -> Result<Verdict> {
    if m.n() > BALANCED_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "balance check supports at most {BALANCED_MAX_N} elements"
        )));
    }
    let full = m.ground_set();
    let mut seen: HashSet<Matroid> = HashSet::new();
    let mut classes: HashMap<Vec<u32>, Vec<Matroid>> = HashMap::new();
    let mut checked = 0usize;
    for keep in subsets_of(full) {
        if keep.len() < 2 {
            continue;
        }
        let removed = full.difference(keep);
        for contract in subsets_of(removed) {
            let delete = removed.difference(contract);
            let (minor, labels) = m.minor(contract, delete)?;
            if !seen.insert(minor.clone()) {
                continue;
            }
            let key = family_invariant(minor.n(), minor.bases());
            let bucket = classes.entry(key).or_default();
            if bucket.iter().any(|o| o.is_isomorphic(&minor)) {
                continue;
            }
            checked += 1;
            let v = neg_corr_all_pairs(&minor);
            if let Some(Witness::Point { pair: Some((a, b)), .. }) = v.witness() {
                return Ok(Verdict::fails(
                    Witness::Minor {
                        contract,
                        delete,
                        pair: (labels.old_label(*a), labels.old_label(*b)),
                    },
                    vec![Tier::Exact],
                ));
            }
            bucket.push(minor);
        }
    }
    Ok(Verdict::holds(
        Certificate::Exhaustive { checked },
        vec![Tier::Exact],
    ))
}

fn require_nonnegative(f: &BoundedPoly) -> Result<()> {
    if !f.is_multi_affine() {
        return Err(Error::InvalidArgument("polynomial must be multi-affine".into()));
    }
    if !f.has_nonnegative_coefficients() {
        return Err(Error::InvalidArgument(
            "polynomial must have nonnegative coefficients".into(),
        ));
    }
    Ok(())
}

fn point_witness(point: Vec<Rational>, value: Rational, pair: (usize, usize)) -> Witness {
    Witness::Point {
        point,
        value,
        pair: Some(pair),
    }
}

/// Coefficients, then orthant search, then Gram certificates for `delta >= 0` on the orthant.
fn orthant_tiers(delta: &BoundedPoly, pair: (usize, usize), cfg: &SearchConfig) -> Verdict {
    let mut tiers = vec![Tier::Coefficients];
    if delta.has_nonnegative_coefficients() {
        return Verdict::holds(Certificate::CoefficientNonneg, tiers).with_pair(pair);
    }
    tiers.push(Tier::Search);
    let found = counterexample_search(
        delta,
        Domain::PositiveOrthant,
        cfg.budget,
        cfg.pair_seed(pair.0, pair.1),
    );
    if let Some((pt, v)) = found.witness {
        return Verdict::fails(point_witness(pt, v, pair), tiers).with_pair(pair);
    }
    tiers.push(Tier::Sos);
    if let Some(cert) = sos_certificate(delta) {
        return Verdict::holds(Certificate::SosGram(cert), tiers).with_pair(pair);
    }
    tiers.push(Tier::SosSquared);
    if let Some(cert) = sos_certificate_squared(delta) {
        return Verdict::holds(Certificate::SosGram(cert), tiers).with_pair(pair);
    }
    Verdict::inconclusive(
        Diagnostics {
            best_value: Some(found.best_value),
            note: format!("{} evaluations without an exact witness", found.evaluations),
        },
        tiers,
    )
    .with_pair(pair)
}

/// Conjunction over pairs: the first failure wins, any inconclusive pair makes the whole
/// inconclusive.
fn combine_pairs(verdicts: Vec<Verdict>) -> Verdict {
    let mut tiers: Vec<Tier> = vec![Tier::AllPairs];
    for v in &verdicts {
        for t in &v.tiers_run {
            if !tiers.contains(t) {
                tiers.push(*t);
            }
        }
    }
    if let Some(f) = verdicts.iter().find(|v| v.is_fails()) {
        let mut out = f.clone();
        out.tiers_run = tiers;
        return out;
    }
    if let Some(inc) = verdicts.iter().find(|v| v.is_inconclusive()) {
        let mut out = inc.clone();
        out.tiers_run = tiers;
        return out;
    }
    let certs = verdicts
        .into_iter()
        .map(|v| {
            let pair = v.pair.expect("pair verdict");
            match v.outcome {
                Outcome::Holds(c) => (pair, c),
                _ => unreachable!(),
            }
        })
        .collect();
    Verdict::holds(Certificate::AllPairs(certs), tiers)
}

/// `Δ_ij(f) >= 0` on the positive orthant, for one pair or all pairs.
pub fn rayleigh_verdict(
    f: &BoundedPoly,
    pair: Option<(usize, usize)>,
    cfg: &SearchConfig,
) -> Result<Verdict> {
    c_rayleigh_verdict(f, &Rational::one(), pair, cfg)
}

/// `B C - c A D >= 0` on the positive orthant, where `f = x_i x_j A + x_i B + x_j C + D`.
///
/// This is `∂_i f ∂_j f - c ∂_i∂_j f · f` evaluated with `x_i = x_j = 0`; for `c = 1` it equals
/// the Rayleigh difference everywhere.
pub fn c_rayleigh_verdict(
    f: &BoundedPoly,
    c: &Rational,
    pair: Option<(usize, usize)>,
    cfg: &SearchConfig,
) -> Result<Verdict> {
    require_nonnegative(f)?;
    if !c.is_positive() {
        return Err(Error::InvalidArgument("c must be positive".into()));
    }
    match pair {
        Some((i, j)) => {
            check_pair(f.n(), i, j)?;
            let delta = f.scaled_rayleigh_diff(i, j, c)?;
            Ok(orthant_tiers(&delta, (i, j), cfg))
        }
        None => {
            let mut out = Vec::new();
            for (i, j) in pairs(f.n()) {
                let delta = f.scaled_rayleigh_diff(i, j, c)?;
                let v = orthant_tiers(&delta, (i, j), cfg);
                let stop = v.is_fails();
                out.push(v);
                if stop {
                    break;
                }
            }
            Ok(combine_pairs(out))
        }
    }
}

fn all_even(p: &BoundedPoly) -> bool {
    p.terms().all(|(m, _)| m.linear_part().is_empty())
}

/// `Δ_ij(f) >= 0` on all of real space for one pair.
pub fn strong_rayleigh_verdict(
    f: &BoundedPoly,
    pair: (usize, usize),
    cfg: &SearchConfig,
) -> Result<Verdict> {
    require_nonnegative(f)?;
    let (i, j) = pair;
    check_pair(f.n(), i, j)?;
    let delta = f.rayleigh_diff(i, j)?;
    let mut tiers = vec![Tier::Coefficients];
    if all_even(&delta) && delta.has_nonnegative_coefficients() {
        return Ok(Verdict::holds(Certificate::CoefficientNonneg, tiers).with_pair(pair));
    }
    tiers.push(Tier::Search);
    let found = counterexample_search(&delta, Domain::AllReals, cfg.budget, cfg.pair_seed(i, j));
    if let Some((pt, v)) = found.witness {
        return Ok(Verdict::fails(point_witness(pt, v, pair), tiers).with_pair(pair));
    }
    tiers.push(Tier::Sos);
    if let Some(cert) = sos_certificate(&delta) {
        return Ok(Verdict::holds(Certificate::SosGram(cert), tiers).with_pair(pair));
    }
    Ok(Verdict::inconclusive(
        Diagnostics {
            best_value: Some(found.best_value),
            note: format!("{} evaluations without an exact witness", found.evaluations),
        },
        tiers,
    )
    .with_pair(pair))
}

/// [`strong_rayleigh_verdict`] on every pair, stopping at the first failure.
pub fn strong_rayleigh_all_pairs(f: &BoundedPoly, cfg: &SearchConfig) -> Result<Verdict> {
    require_nonnegative(f)?;
    let mut out = Vec::new();
    for pair in pairs(f.n()) {
        let v = strong_rayleigh_verdict(f, pair, cfg)?;
        let stop = v.is_fails();
        out.push(v);
        if stop {
            break;
        }
    }
    Ok(combine_pairs(out))
}

/// Lexicographically smallest pair lying together in some basis; `(1, 2)` when none does.
pub fn designated_pair(m: &Matroid) -> (usize, usize) {
    pairs(m.n())
        .find(|&(i, j)| {
            let both = ElemSet::from_elems([i, j]);
            m.bases().iter().any(|b| both.is_subset(*b))
        })
        .unwrap_or((1, 2))
}

/// Which pairs the half-plane check examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairScope {
    /// The designated pair only.
    Designated,
    AllPairs,
}

/// Half-plane property through the real Rayleigh difference, component by component.
pub fn hpp_verdict(m: &Matroid, scope: PairScope, cfg: &SearchConfig) -> Result<Verdict> {
    let comps = m.components();
    if comps.len() > 1 {
        return hpp_by_components(m, &comps, scope, cfg);
    }
    if m.n() < 2 {
        return Ok(Verdict::holds(
            Certificate::CoefficientNonneg,
            vec![Tier::Coefficients],
        ));
    }
    let f = basis_poly(m);
    match scope {
        PairScope::Designated => {
            let pair = designated_pair(m);
            let mut v = strong_rayleigh_verdict(&f, pair, cfg)?;
            v.tiers_run.insert(0, Tier::Wagner);
            if let Outcome::Holds(c) = v.outcome {
                v.outcome = Outcome::Holds(Certificate::SinglePairWagner {
                    pair,
                    inner: Box::new(c),
                });
            }
            Ok(v)
        }
        PairScope::AllPairs => strong_rayleigh_all_pairs(&f, cfg),
    }
}

fn hpp_by_components(
    m: &Matroid,
    comps: &[ElemSet],
    scope: PairScope,
    cfg: &SearchConfig,
) -> Result<Verdict> {
    let mut certs = Vec::new();
    let mut pending: Option<Verdict> = None;
    for &comp in comps {
        let (sub, labels) = m.restrict(comp)?;
        let v = hpp_verdict(&sub, scope, cfg)?;
        match &v.outcome {
            Outcome::Holds(c) => certs.push(c.clone()),
            Outcome::Fails(Witness::Point { point, pair, .. }) => {
                // other components contribute a positive square factor at the all-ones point
                let mut full = vec![Rational::one(); m.n()];
                for (k, x) in point.iter().enumerate() {
                    full[labels.old_label(k + 1) - 1] = x.clone();
                }
                let (a, b) = pair.expect("pair witness");
                let orig = (labels.old_label(a), labels.old_label(b));
                let value = basis_poly(m).rayleigh_diff(orig.0, orig.1)?.evaluate(&full);
                let mut tiers = vec![Tier::Components];
                tiers.extend(v.tiers_run.iter().copied());
                return Ok(Verdict::fails(point_witness(full, value, orig), tiers).with_pair(orig));
            }
            Outcome::Fails(_) => return Ok(v),
            Outcome::Inconclusive(_) => {
                if pending.is_none() {
                    pending = Some(v);
                }
            }
        }
    }
    if let Some(mut v) = pending {
        v.tiers_run.insert(0, Tier::Components);
        return Ok(v);
    }
    Ok(Verdict::holds(
        Certificate::Components(certs),
        vec![Tier::Components],
    ))
}

/// Smallest sampled ratio `B C / (A D)` over pairs, with `f = x_i x_j A + x_i B + x_j C + D`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinCReport {
    /// Exact ratio at the best sample; every sample value bounds the best constant from above.
    pub estimate: Option<Rational>,
    pub pair: Option<(usize, usize)>,
    pub point: Option<Vec<Rational>>,
    pub samples: usize,
}

/// Samples positive rational points; the pair variables themselves are set to zero.
pub fn min_c_estimate(f: &BoundedPoly, samples: usize, seed: u64) -> Result<MinCReport> {
    require_nonnegative(f)?;
    let n = f.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Rational, (usize, usize), Vec<Rational>)> = None;
    let splits: Vec<((usize, usize), [BoundedPoly; 4])> =
        pairs(n).map(|(i, j)| ((i, j), f.split_pair(i, j))).collect();
    let mut taken = 0;
    for s in 0..samples {
        let point: Vec<Rational> = (0..n)
            .map(|_| {
                if s == 0 {
                    return Rational::one();
                }
                let e: f64 = rng.random_range(-3.0..3.0);
                super::search::approximate(e.exp(), 64).max(Rational::new(1.into(), 64.into()))
            })
            .collect();
        taken += 1;
        for (pair, [a, b, c, d]) in &splits {
            let den = a.evaluate(&point) * d.evaluate(&point);
            if !den.is_positive() {
                continue;
            }
            let ratio = b.evaluate(&point) * c.evaluate(&point) / den;
            if best.as_ref().is_none_or(|(r, _, _)| ratio < *r) {
                best = Some((ratio, *pair, point.clone()));
            }
        }
    }
    Ok(match best {
        Some((r, pair, point)) => MinCReport {
            estimate: Some(r),
            pair: Some(pair),
            point: Some(point),
            samples: taken,
        },
        None => MinCReport {
            estimate: None,
            pair: None,
            point: None,
            samples: taken,
        },
    })
}

/// Largest ground set accepted by [`nlc_check`].
pub const NLC_MAX_N: usize = 12;

/// `μ(S) μ(T) >= μ(S ∪ T) μ(S ∩ T)` for all `S, T`.
pub fn nlc_check(mu: &Measure) -> Result<Verdict> {
    if mu.n() > NLC_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "lattice condition check supports at most {NLC_MAX_N} elements"
        )));
    }
    let support: Vec<(ElemSet, Rational)> = mu.support().map(|(s, w)| (s, w.clone())).collect();
    let mut checked = 0usize;
    // only pairs whose union and intersection both carry mass can violate the inequality
    for (u, wu) in &support {
        for (i, wi) in &support {
            if !i.is_subset(*u) {
                continue;
            }
            let rhs = wu * wi;
            let free = u.difference(*i);
            for a in subsets_of(free) {
                let s = i.union(a);
                let t = i.union(free.difference(a));
                checked += 1;
                if mu.weight(s) * mu.weight(t) < rhs {
                    return Ok(Verdict::fails(Witness::Sets(vec![s, t]), vec![Tier::Exact]));
                }
            }
        }
    }
    Ok(Verdict::holds(
        Certificate::Exhaustive { checked },
        vec![Tier::Exact],
    ))
}

/// Exact re-evaluation of a point witness against `delta`.
pub fn witness_is_valid(delta: &BoundedPoly, point: &[Rational], value: &Rational) -> bool {
    value.is_negative() && delta.evaluate(point) == *value
}

impl Verdict {
    /// Re-verifies a point witness exactly against `delta`; non-point outcomes return `false`.
    pub fn point_witness_holds(&self, delta: &BoundedPoly) -> bool {
        match self.witness() {
            Some(Witness::Point { point, value, .. }) => witness_is_valid(delta, point, value),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{named_atlas, uniform};
    use crate::poly::Monomial;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn cfg() -> SearchConfig {
        SearchConfig::new(5_000, 3)
    }

    #[test]
    fn correlation_on_uniform() {
        let m = uniform(2, 3).unwrap();
        assert!(neg_corr(&m, 1, 2).unwrap().is_holds());
        assert!(neg_corr_all_pairs(&m).is_holds());
        assert!(neg_corr(&m, 1, 1).is_err());
        assert!(is_balanced(&named_atlas("MK4").unwrap()).unwrap().is_holds());
    }

    #[test]
    fn rayleigh_on_four_points() {
        let f = basis_poly(&uniform(2, 4).unwrap());
        let v = rayleigh_verdict(&f, Some((1, 2)), &cfg()).unwrap();
        assert_eq!(v.certificate(), Some(&Certificate::CoefficientNonneg));
        assert!(rayleigh_verdict(&f, None, &cfg()).unwrap().is_holds());
    }

    #[test]
    fn scaled_rayleigh_thresholds() {
        let f = basis_poly(&uniform(2, 4).unwrap());
        // B C - c A D = x3^2 + (2 - c) x3 x4 + x4^2
        let sos = c_rayleigh_verdict(&f, &q(3, 1), Some((1, 2)), &cfg()).unwrap();
        assert!(matches!(sos.certificate(), Some(Certificate::SosGram(_))));
        let bad = c_rayleigh_verdict(&f, &q(5, 1), Some((1, 2)), &cfg()).unwrap();
        assert!(bad.is_fails());
        let delta = f.scaled_rayleigh_diff(1, 2, &q(5, 1)).unwrap();
        assert!(bad.point_witness_holds(&delta));
        assert!(c_rayleigh_verdict(&f, &q(8, 7), None, &cfg()).unwrap().is_holds());
    }

    #[test]
    fn real_rayleigh_refutes_disjoint_products() {
        let f = BoundedPoly::from_terms(
            4,
            [
                (Monomial::from_set(ElemSet::from_elems([1, 2])), Rational::one()),
                (Monomial::from_set(ElemSet::from_elems([3, 4])), Rational::one()),
            ],
        );
        let v = strong_rayleigh_verdict(&f, (1, 3), &cfg()).unwrap();
        assert!(v.is_fails());
        assert!(v.point_witness_holds(&f.rayleigh_diff(1, 3).unwrap()));
        // the orthant inequality still holds for this pair
        assert!(rayleigh_verdict(&f, Some((1, 3)), &cfg()).unwrap().is_holds());
    }

    #[test]
    fn half_plane_on_small_matroids() {
        let u = uniform(2, 4).unwrap();
        assert!(hpp_verdict(&u, PairScope::AllPairs, &cfg()).unwrap().is_holds());
        let mk4 = named_atlas("MK4").unwrap();
        let v = hpp_verdict(&mk4, PairScope::Designated, &cfg()).unwrap();
        assert!(matches!(v.certificate(), Some(Certificate::SinglePairWagner { .. })));
        let split = uniform(1, 2).unwrap().direct_sum(&uniform(1, 2).unwrap()).unwrap();
        let v = hpp_verdict(&split, PairScope::AllPairs, &cfg()).unwrap();
        assert!(matches!(v.certificate(), Some(Certificate::Components(_))));
    }

    #[test]
    fn designated_pair_skips_parallel_elements() {
        // 1 and 2 are parallel, so the first pair inside a basis is (1, 3)
        let m = Matroid::from_basis_lists(3, [vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(designated_pair(&m), (1, 3));
    }

    #[test]
    fn min_ratio_on_four_points() {
        let f = basis_poly(&uniform(2, 4).unwrap());
        let r = min_c_estimate(&f, 50, 1).unwrap();
        // (x3 + x4)^2 / (x3 x4) >= 4 with equality at the all-ones sample
        assert_eq!(r.estimate, Some(q(4, 1)));
        assert_eq!(r.samples, 50);
    }

    #[test]
    fn lattice_condition() {
        let mu = Measure::uniform_on_bases(&uniform(2, 4).unwrap());
        assert!(nlc_check(&mu).unwrap().is_holds());
        let bad = Measure::new(
            2,
            [(ElemSet::EMPTY, q(1, 2)), (ElemSet::from_elems([1, 2]), q(1, 2))],
        )
        .unwrap();
        let v = nlc_check(&bad).unwrap();
        let Some(Witness::Sets(st)) = v.witness() else {
            panic!("expected a set witness");
        };
        assert!(bad.weight(st[0]) * bad.weight(st[1]) < q(1, 4));
    }
}
