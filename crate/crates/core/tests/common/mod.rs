#![allow(dead_code)]

use matroidwb_core::bitset::subsets_of_size;
use matroidwb_core::constructions::{
    bicircular, graphic, lattice_path, transversal, uniform, LatticePathPair, MultiGraph, SetSystem,
};
use matroidwb_core::{ElemSet, Matroid, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

pub fn set(e: &[usize]) -> ElemSet {
    ElemSet::from_elems(e.iter().copied())
}

pub fn random_multigraph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize, loops: bool) -> MultiGraph {
    let v = rng.random_range(1..=max_v);
    let e = rng.random_range(1..=max_e);
    let edges: Vec<(usize, usize)> = (0..e)
        .map(|_| loop {
            let a = rng.random_range(1..=v);
            let b = rng.random_range(1..=v);
            if loops || a != b || v == 1 {
                break (a, b);
            }
        })
        .collect();
    MultiGraph::new(v, edges).unwrap()
}

pub fn random_loopless_graph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize) -> MultiGraph {
    let v = rng.random_range(2..=max_v);
    let e = rng.random_range(1..=max_e);
    let edges: Vec<(usize, usize)> = (0..e)
        .map(|_| {
            let a = rng.random_range(1..=v);
            let mut b = rng.random_range(1..v);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    MultiGraph::new(v, edges).unwrap()
}

pub fn random_lpm(rng: &mut ChaCha8Rng, max_n: usize) -> LatticePathPair {
    loop {
        let n = rng.random_range(1..=max_n);
        let r = rng.random_range(0..=n);
        let mut p = vec![false; n];
        let mut q = vec![false; n];
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(rng);
        for &i in &idx[..r] {
            p[i] = true;
        }
        idx.shuffle(rng);
        for &i in &idx[..r] {
            q[i] = true;
        }
        if let Ok(l) = LatticePathPair::from_steps(p.clone(), q.clone()) {
            return l;
        }
        if let Ok(l) = LatticePathPair::from_steps(q, p) {
            return l;
        }
    }
}

pub fn random_sparse_paving(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Matroid {
    let mut candidates: Vec<ElemSet> = subsets_of_size(n, r).collect();
    candidates.shuffle(rng);
    let want = rng.random_range(0..=candidates.len().min(6));
    let mut h: Vec<ElemSet> = Vec::new();
    for c in candidates {
        if h.len() == want {
            break;
        }
        if h.iter().all(|x| x.intersection(c).len() + 2 <= r) {
            h.push(c);
        }
    }
    let bases: Vec<ElemSet> = subsets_of_size(n, r).filter(|s| !h.contains(s)).collect();
    Matroid::from_bases(n, bases).unwrap()
}

/// A matroid on at most `max_n` elements from one of several families, randomly relabeled.
pub fn random_matroid(rng: &mut ChaCha8Rng, max_n: usize) -> Matroid {
    let m = match rng.random_range(0..6) {
        0 => {
            let n = rng.random_range(1..=max_n);
            uniform(rng.random_range(0..=n), n).unwrap()
        }
        1 => graphic(&random_multigraph(rng, 5, max_n, true)),
        2 => lattice_path(&random_lpm(rng, max_n)),
        3 => {
            let n = rng.random_range(1..=max_n);
            let k = rng.random_range(1..=n.min(4));
            let family: Vec<ElemSet> = (0..k)
                .map(|_| ElemSet::from_bits(rng.random_range(1..(1u32 << n))))
                .collect();
            transversal(&SetSystem::new(n, family).unwrap())
        }
        4 => {
            let n = rng.random_range(2..=max_n);
            let r = rng.random_range(1..n);
            random_sparse_paving(rng, n, r)
        }
        _ => bicircular(&random_multigraph(rng, 4, max_n, true)),
    };
    let mut perm: Vec<usize> = (1..=m.n()).collect();
    perm.shuffle(rng);
    m.relabel(&perm)
}

pub fn random_positive_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| q(rng.random_range(1..=40), rng.random_range(1..=12)))
        .collect()
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| q(rng.random_range(-40..=40), rng.random_range(1..=12)))
        .collect()
}

/// Bases of the 2-sum from the basis formula: `(B1 - p) ∪ (B2 - q)` with exactly one of
/// `p ∈ B1`, `q ∈ B2`, relabeled onto the concatenated ground set.
pub fn two_sum_bases_oracle(m: &Matroid, p: usize, n: &Matroid, q: usize) -> Vec<ElemSet> {
    let relabel_m = |b: ElemSet| {
        b.without(p)
            .iter()
            .map(|e| if e < p { e } else { e - 1 })
            .collect::<Vec<_>>()
    };
    let relabel_n = |b: ElemSet| {
        b.without(q)
            .iter()
            .map(|e| (if e < q { e } else { e - 1 }) + m.n() - 1)
            .collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for &b1 in m.bases() {
        for &b2 in n.bases() {
            if b1.contains(p) != b2.contains(q) {
                let mut elems = relabel_m(b1);
                elems.extend(relabel_n(b2));
                out.push(ElemSet::from_elems(elems));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
