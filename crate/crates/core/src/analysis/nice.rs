//! Weights making a principal extension nice: `Σ_{f ∈ F, B+f a basis} λ_f = 1` for every basis
//! `B` of the truncation.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lp::feasible_point;
use crate::bitset::ElemSet;
use crate::constructions::principal_truncation;
use crate::error::Result;
use crate::matroid::Matroid;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceExtensionReport {
    pub flat: ElemSet,
    /// One equation per truncation basis `B`: the elements `f` with `B + f` a basis.
    pub equations: Vec<(ElemSet, ElemSet)>,
    /// Union of all equation supports; the uniform candidate is `1/|support|`.
    pub support: ElemSet,
    pub uniform_weight: Rational,
    pub uniform_satisfies: bool,
    /// A nonnegative solution `(f, λ_f)`, uniform when that works.
    pub solution: Option<Vec<(usize, Rational)>>,
}

impl NiceExtensionReport {
    /// Exact check of a weight assignment against every equation.
    pub fn satisfies(&self, weights: &[(usize, Rational)]) -> bool {
        if weights.iter().any(|(_, w)| w.is_negative()) {
            return false;
        }
        self.equations.iter().all(|(_, s)| {
            let total: Rational = weights
                .iter()
                .filter(|(f, _)| s.contains(*f))
                .map(|(_, w)| w.clone())
                .sum();
            total.is_one()
        })
    }

    /// Distinct equation sizes, ascending.
    pub fn equation_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.equations.iter().map(|(_, s)| s.len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }
}

pub fn nice_extension_weights(m: &Matroid, flat: ElemSet) -> Result<NiceExtensionReport> {
    let tr = principal_truncation(m, flat)?;
    let equations: Vec<(ElemSet, ElemSet)> = tr
        .bases()
        .iter()
        .map(|&b| {
            let s = flat
                .difference(b)
                .iter()
                .filter(|&f| m.is_basis(b.with(f)))
                .fold(ElemSet::EMPTY, |acc, f| acc.with(f));
            (b, s)
        })
        .collect();
    let support = equations
        .iter()
        .fold(ElemSet::EMPTY, |acc, (_, s)| acc.union(*s));
    let k = support.len().max(1);
    let uniform_weight = Rational::new(BigInt::one(), BigInt::from(k));
    let mut report = NiceExtensionReport {
        flat,
        equations,
        support,
        uniform_weight: uniform_weight.clone(),
        uniform_satisfies: false,
        solution: None,
    };
    let uniform: Vec<(usize, Rational)> = support
        .iter()
        .map(|f| (f, uniform_weight.clone()))
        .collect();
    report.uniform_satisfies = report.satisfies(&uniform);
    if report.uniform_satisfies {
        report.solution = Some(uniform);
        return Ok(report);
    }
    let vars = support.to_vec();
    let a: Vec<Vec<Rational>> = report
        .equations
        .iter()
        .map(|(_, s)| {
            vars.iter()
                .map(|&f| if s.contains(f) { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let b = vec![Rational::one(); a.len()];
    report.solution = feasible_point(&a, &b).map(|x| vars.iter().copied().zip(x).collect());
    if let Some(sol) = &report.solution {
        debug_assert!(report.satisfies(sol));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::uniform;

    #[test]
    fn uniform_four_points() {
        let m = uniform(2, 4).unwrap();
        let r = nice_extension_weights(&m, ElemSet::full(4)).unwrap();
        assert_eq!(r.equations.len(), 4);
        assert!(!r.uniform_satisfies);
        let third = Rational::new(1.into(), 3.into());
        let sol = r.solution.clone().unwrap();
        assert_eq!(sol, (1..=4).map(|f| (f, third.clone())).collect::<Vec<_>>());
        assert!(r.satisfies(&sol));
    }

    #[test]
    fn coloop_flat() {
        let m = uniform(1, 2).unwrap().direct_sum(&uniform(1, 1).unwrap()).unwrap();
        let r = nice_extension_weights(&m, ElemSet::singleton(3)).unwrap();
        assert_eq!(r.solution, Some(vec![(3, Rational::one())]));
        assert!(r.uniform_satisfies);
    }
}
