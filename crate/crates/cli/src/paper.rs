//! `verify-paper`: one-shot reproduction of the published fixtures.

use std::collections::BTreeSet;
use std::fmt;

use matroidwb_core::analysis::{neg_corr_all_pairs, nice_extension_weights};
use matroidwb_core::bitset::subsets_of;
use matroidwb_core::classifiers::{
    lpm_family, positroid_check, positroid_verdict, sparse_paving_family,
};
use matroidwb_core::constructions::{
    graphic, lattice_path, named_atlas, principal_extension, principal_truncation, uniform,
    MultiGraph,
};
use matroidwb_core::poly::{basis_poly, Monomial};
use matroidwb_core::{BoundedPoly, ElemSet, Matroid, Rational};
use num_traits::One;

use crate::config::parse_config;
use crate::construct::lpm_from_bounds;
use crate::error::{CliError, CliResult};
use crate::report::parse_rational;

/// Built-in copy of the example's basis lists.
pub const EXAMPLE_FIXTURE: &str = include_str!("../fixtures/example.txt");

const EXAMPLE: &str = "Example M[125,356]";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleFixture {
    pub lower: String,
    pub upper: String,
    pub flat: ElemSet,
    pub bases: BTreeSet<ElemSet>,
    pub truncation: BTreeSet<ElemSet>,
    pub extension: BTreeSet<ElemSet>,
    pub uniform_weight: Rational,
}

/// A set token: `125` (one digit per element) or `1,2,5`.
fn parse_set_token(tok: &str) -> CliResult<ElemSet> {
    let elems: Vec<usize> = if tok.contains(',') {
        crate::check::parse_list(tok)?
    } else {
        tok.chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d > 0)
                    .map(|d| d as usize)
                    .ok_or_else(|| CliError::Usage(format!("bad set {tok:?}")))
            })
            .collect::<CliResult<_>>()?
    };
    Ok(ElemSet::from_elems(elems))
}

fn parse_family(s: &str) -> CliResult<BTreeSet<ElemSet>> {
    s.split_whitespace().map(parse_set_token).collect()
}

pub fn render_set(s: ElemSet) -> String {
    let v = s.to_vec();
    if v.iter().all(|&e| e <= 9) {
        v.iter().map(|e| e.to_string()).collect()
    } else {
        v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn render_family<'a>(f: impl IntoIterator<Item = &'a ElemSet>) -> String {
    let mut sets: Vec<Vec<usize>> = f.into_iter().map(|s| s.to_vec()).collect();
    sets.sort();
    sets.iter()
        .map(|v| render_set(ElemSet::from_elems(v.iter().copied())))
        .collect::<Vec<_>>()
        .join(" ")
}

impl ExampleFixture {
    pub fn parse(text: &str) -> CliResult<Self> {
        let c = parse_config(text)?;
        let get = |k: &str| {
            c.get(k)
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("fixture is missing {k}")))
        };
        Ok(ExampleFixture {
            lower: get("lower")?,
            upper: get("upper")?,
            flat: parse_set_token(&get("flat")?)?,
            bases: parse_family(&get("bases")?)?,
            truncation: parse_family(&get("truncation")?)?,
            extension: parse_family(&get("extension")?)?,
            uniform_weight: parse_rational(&get("uniform_weight")?)?,
        })
    }

    pub fn matroid(&self) -> CliResult<Matroid> {
        Ok(lattice_path(&lpm_from_bounds(&self.lower, &self.upper, None)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Extra findings that do not affect the pass/fail status.
    pub notes: Vec<String>,
}

impl fmt::Display for FixtureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)?;
        for n in &self.notes {
            write!(f, "\n     note: {n}")?;
        }
        Ok(())
    }
}

fn result(name: &str, passed: bool, detail: String) -> FixtureResult {
    FixtureResult {
        name: name.to_string(),
        passed,
        detail,
        notes: Vec::new(),
    }
}

fn family_of(m: &Matroid) -> BTreeSet<ElemSet> {
    m.bases().iter().copied().collect()
}

/// `Ok` when equal, otherwise a missing/extra description.
fn compare(got: &BTreeSet<ElemSet>, want: &BTreeSet<ElemSet>) -> Result<(), String> {
    if got == want {
        return Ok(());
    }
    let missing: Vec<&ElemSet> = want.difference(got).collect();
    let extra: Vec<&ElemSet> = got.difference(want).collect();
    Err(format!(
        "computed {} sets, listed {}; missing [{}], extra [{}]",
        got.len(),
        want.len(),
        render_family(missing),
        render_family(extra)
    ))
}

/// Nonempty flats-or-subsets of the ground set whose operator output matches `want`.
fn matching_flats(
    m: &Matroid,
    want: &BTreeSet<ElemSet>,
    op: fn(&Matroid, ElemSet) -> matroidwb_core::Result<Matroid>,
) -> Vec<ElemSet> {
    subsets_of(m.ground_set())
        .filter(|f| !f.is_empty())
        .filter(|&f| op(m, f).is_ok_and(|t| family_of(&t) == *want))
        .collect()
}

fn example_bases(fx: &ExampleFixture) -> CliResult<FixtureResult> {
    let name = format!("{EXAMPLE} bases");
    let m = fx.matroid()?;
    Ok(match compare(&family_of(&m), &fx.bases) {
        Ok(()) => result(&name, true, format!("{} bases match", m.num_bases())),
        Err(e) => result(&name, false, e),
    })
}

fn example_operator(
    fx: &ExampleFixture,
    label: &str,
    want: &BTreeSet<ElemSet>,
    op: fn(&Matroid, ElemSet) -> matroidwb_core::Result<Matroid>,
) -> CliResult<FixtureResult> {
    let name = format!("{EXAMPLE} {label} by F={{{}}}", render_set(fx.flat));
    let m = fx.matroid()?;
    let got = family_of(&op(&m, fx.flat)?);
    let mut r = match compare(&got, want) {
        Ok(()) => result(&name, true, format!("{} sets match", got.len())),
        Err(e) => result(&name, false, e),
    };
    if !r.passed {
        let flats = matching_flats(&m, want, op);
        r.notes.push(if flats.is_empty() {
            "no choice of F reproduces the listed sets".to_string()
        } else {
            format!(
                "the listed sets are reproduced by F = {}",
                flats
                    .iter()
                    .map(|f| format!("{{{}}}", render_set(*f)))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        });
    }
    Ok(r)
}

fn lift(p: &BoundedPoly, n: usize) -> BoundedPoly {
    BoundedPoly::from_terms(n, p.terms().map(|(m, c)| (m, c.clone())))
}

/// Loop invariance and the coloop identities for one matroid; `None` when all hold.
fn identity_failure(m: &Matroid) -> CliResult<Option<String>> {
    let n = m.n();
    let f = basis_poly(m);
    let looped = basis_poly(&m.direct_sum(&uniform(0, 1)?)?);
    if looped != lift(&f, n + 1) {
        return Ok(Some("adding a loop changed the basis polynomial".into()));
    }
    let g = basis_poly(&m.direct_sum(&uniform(1, 1)?)?);
    let e = n + 1;
    let xe = BoundedPoly::from_terms(n + 1, [(Monomial::var(e), Rational::one())]);
    let xe2 = xe.multiply(&xe)?;
    for i in 1..=n {
        if !g.rayleigh_diff(e, i)?.is_zero() {
            return Ok(Some(format!("Δ_{{{e},{i}}} of the coloop extension is nonzero")));
        }
        for j in i + 1..=n {
            let want = xe2.multiply(&lift(&f.rayleigh_diff(i, j)?, n + 1))?;
            if g.rayleigh_diff(i, j)? != want {
                return Ok(Some(format!("Δ_{{{i},{j}}} is not x_e² times the original")));
            }
        }
    }
    Ok(None)
}

fn coloop_loop_identities(fx: &ExampleFixture) -> CliResult<FixtureResult> {
    let mut cases: Vec<(String, Matroid)> = vec![(EXAMPLE.to_string(), fx.matroid()?)];
    for name in ["U24", "MK4", "W3"] {
        cases.push((name.to_string(), named_atlas(name)?));
    }
    for (name, m) in &cases {
        if let Some(why) = identity_failure(m)? {
            return Ok(result("coloop and loop identities", false, format!("{name}: {why}")));
        }
    }
    Ok(result(
        "coloop and loop identities",
        true,
        format!("term-for-term on {} matroids", cases.len()),
    ))
}

fn k4_not_positroid() -> CliResult<FixtureResult> {
    let m = graphic(&MultiGraph::complete(4)?);
    let v = positroid_check(&m)?;
    Ok(result(
        "M(K4) is not a positroid",
        v.is_fails(),
        format!("order search: {}", v.kind()),
    ))
}

fn lpm_positroid_closure() -> CliResult<FixtureResult> {
    let mut checked = 0;
    for (l, m) in lpm_family(5, false, usize::MAX)? {
        for (what, x) in [("", m.clone()), (" dual", m.dual())] {
            checked += 1;
            if positroid_verdict(&x)?.is_none() {
                return Ok(result(
                    "lattice path matroids are positroids",
                    false,
                    format!("no base-sorting order for{what} M[{}]", l.lower_path()),
                ));
            }
        }
    }
    Ok(result(
        "lattice path matroids are positroids",
        true,
        format!("orders found for {checked} LPMs (n ≤ 5) and duals"),
    ))
}

fn sparse_paving_negcorr() -> CliResult<FixtureResult> {
    let mut checked = 0;
    for n in 2..=7 {
        for r in 1..n {
            for m in sparse_paving_family(n, r, usize::MAX)? {
                checked += 1;
                if neg_corr_all_pairs(&m).is_fails() {
                    return Ok(result(
                        "sparse paving matroids are negatively correlated",
                        false,
                        format!("failure on n={n} r={r}: bases {}", render_family(m.bases())),
                    ));
                }
            }
        }
    }
    Ok(result(
        "sparse paving matroids are negatively correlated",
        true,
        format!("{checked} iso-classes with n ≤ 7, all ranks"),
    ))
}

/// Reports solvability; fails only if a claimed solution does not verify exactly.
fn nice_extension(fx: &ExampleFixture) -> CliResult<FixtureResult> {
    let m = fx.matroid()?;
    let rep = nice_extension_weights(&m, fx.flat)?;
    let listed: Vec<(usize, Rational)> = fx
        .flat
        .iter()
        .map(|f| (f, fx.uniform_weight.clone()))
        .collect();
    let listed_ok = rep.satisfies(&listed);
    let verified = rep.solution.as_ref().is_none_or(|s| rep.satisfies(s));
    let solution = match &rep.solution {
        Some(s) => s
            .iter()
            .map(|(f, w)| format!("λ{f}={w}"))
            .collect::<Vec<_>>()
            .join(" "),
        None => "none".into(),
    };
    let mut r = result(
        &format!("{EXAMPLE} nice extension system, F={{{}}}", render_set(fx.flat)),
        verified,
        format!(
            "{} equations, sizes {:?}; λ ≡ {} satisfies all: {}; nonnegative solution: {}",
            rep.equations.len(),
            rep.equation_sizes(),
            fx.uniform_weight,
            listed_ok,
            solution
        ),
    );
    if !listed_ok {
        if let Some((b, s)) = rep
            .equations
            .iter()
            .find(|(_, s)| Rational::from_integer(s.len().into()) * &fx.uniform_weight != Rational::one())
        {
            r.notes.push(format!(
                "for B={} the elements f with B+f a basis are {{{}}}, so λ ≡ {} sums to {}",
                render_set(*b),
                render_set(*s),
                fx.uniform_weight,
                Rational::from_integer(s.len().into()) * &fx.uniform_weight
            ));
        }
        for f in matching_flats(&m, &fx.truncation, principal_truncation) {
            let alt = nice_extension_weights(&m, f)?;
            r.notes.push(format!(
                "with F={{{}}}: λ ≡ {} satisfies all: {}; solution verifies: {}",
                render_set(f),
                alt.uniform_weight,
                alt.uniform_satisfies,
                alt.solution.as_ref().is_some_and(|s| alt.satisfies(s))
            ));
        }
    }
    Ok(r)
}

/// Every fixture in order; `fixture_text` overrides the built-in example lists.
pub fn verify_paper(fixture_text: Option<&str>) -> CliResult<Vec<FixtureResult>> {
    let fx = ExampleFixture::parse(fixture_text.unwrap_or(EXAMPLE_FIXTURE))?;
    Ok(vec![
        example_bases(&fx)?,
        example_operator(&fx, "truncation", &fx.truncation, principal_truncation)?,
        example_operator(&fx, "extension", &fx.extension, principal_extension)?,
        coloop_loop_identities(&fx)?,
        k4_not_positroid()?,
        lpm_positroid_closure()?,
        sparse_paving_negcorr()?,
        nice_extension(&fx)?,
    ])
}
