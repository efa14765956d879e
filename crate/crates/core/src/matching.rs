//! Edge-weighted matching polynomials over vertex variables.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::bitset::{ElemSet, MAX_ELEMENTS};
use crate::constructions::{MultiGraph, SetSystem};
use crate::error::{Error, Result};
use crate::poly::{BoundedPoly, Monomial};
use crate::Rational;

/// Nonnegative weight `λ_e` per edge, indexed like the edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeWeights(Vec<Rational>);

impl EdgeWeights {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(k) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidArgument(format!(
                "edge weight {} is negative",
                k + 1
            )));
        }
        Ok(EdgeWeights(weights))
    }

    pub fn ones(edges: usize) -> Self {
        EdgeWeights(vec![Rational::one(); edges])
    }

    /// Weight of edge `e` (1-indexed).
    pub fn get(&self, e: usize) -> &Rational {
        &self.0[e - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check(g: &MultiGraph, lambda: &EdgeWeights) -> Result<()> {
    if g.vertex_count() > MAX_ELEMENTS {
        return Err(Error::TooManyElements(g.vertex_count()));
    }
    if let Some(e) = g.has_loop() {
        return Err(Error::LoopPresent(e));
    }
    if lambda.len() != g.edge_count() {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {} edges",
            lambda.len(),
            g.edge_count()
        )));
    }
    Ok(())
}

/// Calls `visit(covered vertices, weight)` once per matching using only `edges`.
fn for_each_matching(
    g: &MultiGraph,
    edges: ElemSet,
    lambda: &EdgeWeights,
    visit: &mut dyn FnMut(ElemSet, &Rational),
) {
    fn rec(
        g: &MultiGraph,
        remaining: &[usize],
        covered: ElemSet,
        weight: &Rational,
        lambda: &EdgeWeights,
        visit: &mut dyn FnMut(ElemSet, &Rational),
    ) {
        let Some((&e, rest)) = remaining.split_first() else {
            visit(covered, weight);
            return;
        };
        rec(g, rest, covered, weight, lambda, visit);
        let (a, b) = g.edges()[e - 1];
        if !covered.contains(a) && !covered.contains(b) {
            let w = weight * lambda.get(e);
            rec(g, rest, covered.with(a).with(b), &w, lambda, visit);
        }
    }
    let list = edges.to_vec();
    rec(g, &list, ElemSet::EMPTY, &Rational::one(), lambda, visit);
}

fn usable_edges(g: &MultiGraph, vertices: ElemSet, edges: ElemSet) -> ElemSet {
    edges
        .iter()
        .filter(|&e| {
            let (a, b) = g.edges()[e - 1];
            vertices.contains(a) && vertices.contains(b)
        })
        .fold(ElemSet::EMPTY, |acc, e| acc.with(e))
}

/// `Σ_M Π_{e=ij ∈ M} λ_e x_i x_j` on the subgraph with the given vertex and edge sets.
pub fn matching_poly_on(
    g: &MultiGraph,
    vertices: ElemSet,
    edges: ElemSet,
    lambda: &EdgeWeights,
) -> Result<BoundedPoly> {
    check(g, lambda)?;
    let mut p = BoundedPoly::zero(g.vertex_count());
    for_each_matching(g, usable_edges(g, vertices, edges), lambda, &mut |cov, w| {
        p.add_term(Monomial::from_set(cov), w.clone())
    });
    Ok(p)
}

/// `x^V M(1/x)`: each matching contributes its weight times the uncovered vertices.
pub fn complementary_matching_poly_on(
    g: &MultiGraph,
    vertices: ElemSet,
    edges: ElemSet,
    lambda: &EdgeWeights,
) -> Result<BoundedPoly> {
    check(g, lambda)?;
    let mut p = BoundedPoly::zero(g.vertex_count());
    for_each_matching(g, usable_edges(g, vertices, edges), lambda, &mut |cov, w| {
        p.add_term(Monomial::from_set(vertices.difference(cov)), w.clone())
    });
    Ok(p)
}

fn all_vertices(g: &MultiGraph) -> ElemSet {
    ElemSet::full(g.vertex_count())
}

fn all_edges(g: &MultiGraph) -> ElemSet {
    ElemSet::full(g.edge_count())
}

pub fn matching_poly(g: &MultiGraph, lambda: &EdgeWeights) -> Result<BoundedPoly> {
    matching_poly_on(g, all_vertices(g), all_edges(g), lambda)
}

pub fn complementary_matching_poly(g: &MultiGraph, lambda: &EdgeWeights) -> Result<BoundedPoly> {
    complementary_matching_poly_on(g, all_vertices(g), all_edges(g), lambda)
}

/// Every edge must join `side` to its complement.
fn check_bipartition(g: &MultiGraph, side: ElemSet) -> Result<()> {
    let ok = g
        .edges()
        .iter()
        .all(|&(a, b)| side.contains(a) != side.contains(b));
    if ok {
        Ok(())
    } else {
        Err(Error::NotBipartite)
    }
}

/// `c(S; λ)`: total weight of matchings whose vertex set meets `side` exactly in `S`.
pub fn c_weights(
    g: &MultiGraph,
    side: ElemSet,
    lambda: &EdgeWeights,
) -> Result<BTreeMap<ElemSet, Rational>> {
    check(g, lambda)?;
    check_bipartition(g, side)?;
    let mut out: BTreeMap<ElemSet, Rational> = BTreeMap::new();
    for_each_matching(g, all_edges(g), lambda, &mut |cov, w| {
        *out.entry(cov.intersection(side)).or_insert_with(Rational::zero) += w;
    });
    out.retain(|_, w| !w.is_zero());
    Ok(out)
}

/// The matching polynomial with `x_j = 1` on the far side, as a polynomial in the `side` variables.
pub fn restricted_matching_poly(
    g: &MultiGraph,
    side: ElemSet,
    lambda: &EdgeWeights,
) -> Result<BoundedPoly> {
    check(g, lambda)?;
    check_bipartition(g, side)?;
    let mut p = BoundedPoly::zero(g.vertex_count());
    for_each_matching(g, all_edges(g), lambda, &mut |cov, w| {
        p.add_term(Monomial::from_set(cov.intersection(side)), w.clone())
    });
    Ok(p)
}

/// Set system on vertex labels: one member per far-side vertex, its neighbours in `side`.
pub fn bipartite_set_system(g: &MultiGraph, side: ElemSet) -> Result<SetSystem> {
    check_bipartition(g, side)?;
    let far = ElemSet::full(g.vertex_count()).difference(side);
    let family: Vec<ElemSet> = far
        .iter()
        .map(|b| {
            g.edges().iter().fold(ElemSet::EMPTY, |acc, &(x, y)| {
                if x == b {
                    acc.with(y)
                } else if y == b {
                    acc.with(x)
                } else {
                    acc
                }
            })
        })
        .collect();
    SetSystem::new(g.vertex_count(), family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn single_edge() {
        let g = MultiGraph::new(2, vec![(1, 2)]).unwrap();
        let p = matching_poly(&g, &EdgeWeights::ones(1)).unwrap();
        assert_eq!(p.dump(), "1 : x1 x2\n1 : 1\n");
        let c = complementary_matching_poly(&g, &EdgeWeights::ones(1)).unwrap();
        assert_eq!(c.dump(), "1 : x1 x2\n1 : 1\n");
    }

    #[test]
    fn path_on_three_vertices() {
        let g = MultiGraph::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let lam = EdgeWeights::new(vec![q(2), q(3)]).unwrap();
        let p = matching_poly(&g, &lam).unwrap();
        assert_eq!(p.dump(), "2 : x1 x2\n3 : x2 x3\n1 : 1\n");
        let c = complementary_matching_poly(&g, &lam).unwrap();
        assert_eq!(c.dump(), "1 : x1 x2 x3\n3 : x1\n2 : x3\n");
    }

    #[test]
    fn perfect_matching_graph_has_unit_weights() {
        let g = MultiGraph::new(4, vec![(1, 3), (2, 4)]).unwrap();
        let side = ElemSet::from_elems([1, 2]);
        let c = c_weights(&g, side, &EdgeWeights::ones(2)).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.values().all(|w| *w == q(1)));
    }

    #[test]
    fn errors() {
        let looped = MultiGraph::new(2, vec![(1, 2), (2, 2)]).unwrap();
        assert_eq!(
            matching_poly(&looped, &EdgeWeights::ones(2)),
            Err(Error::LoopPresent(2))
        );
        let tri = MultiGraph::cycle(3).unwrap();
        assert_eq!(
            c_weights(&tri, ElemSet::from_elems([1]), &EdgeWeights::ones(3)),
            Err(Error::NotBipartite)
        );
    }
}
