//! Class membership tests and the deterministic family generators used by the census.

use std::collections::{BTreeSet, HashMap};

use crate::analysis::{Certificate, Tier, Verdict, Witness};
use crate::bitset::{subsets_of_size, ElemSet, MAX_ELEMENTS};
use crate::constructions::{lattice_path, LatticePathPair, MultiGraph, bicircular};
use crate::error::{Error, Result};
use crate::iso::{family_invariant, find_family_isomorphism};
use crate::matroid::Matroid;

/// No circuit smaller than the rank.
pub fn is_paving(m: &Matroid) -> bool {
    m.circuits().iter().all(|c| c.len() >= m.rank())
}

/// Both the matroid and its dual are paving.
pub fn is_sparse_paving(m: &Matroid) -> bool {
    is_paving(m) && is_paving(&m.dual())
}

/// Whether `order` (a permutation of `1..=n`, listed first to last) sorts every pair of bases:
/// the merged multiset `B1 ⊎ B2` splits at odd and even positions into two bases.
pub fn is_base_sorting_order(m: &Matroid, order: &[usize]) -> bool {
    let n = m.n();
    debug_assert_eq!(order.len(), n);
    let bases = m.bases();
    // bases written in position space, bit k = element order[k]
    let positioned: Vec<u32> = bases
        .iter()
        .map(|b| {
            order
                .iter()
                .enumerate()
                .filter(|(_, &e)| b.contains(e))
                .fold(0u32, |acc, (k, _)| acc | (1 << k))
        })
        .collect();
    for (x, &a) in positioned.iter().enumerate() {
        for &b in &positioned[x + 1..] {
            let (odd, even) = split_merge(a, b);
            if !m.is_basis(from_positions(odd, order)) || !m.is_basis(from_positions(even, order)) {
                return false;
            }
        }
    }
    true
}

/// Alternating split of the merged multiset of two position sets.
fn split_merge(a: u32, b: u32) -> (u32, u32) {
    let (mut odd, mut even) = (0u32, 0u32);
    let mut next_is_odd = true;
    let mut rest = a | b;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        if a & b & bit != 0 {
            odd |= bit;
            even |= bit;
        } else if next_is_odd {
            odd |= bit;
            next_is_odd = false;
        } else {
            even |= bit;
            next_is_odd = true;
        }
    }
    (odd, even)
}

fn from_positions(bits: u32, order: &[usize]) -> ElemSet {
    let mut s = ElemSet::EMPTY;
    let mut rest = bits;
    while rest != 0 {
        let k = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        s = s.with(order[k]);
    }
    s
}

/// Largest ground set accepted by [`positroid_verdict`].
pub const POSITROID_MAX_N: usize = 9;

/// First base-sorting order with element 1 in front, in lexicographic order of the rest.
pub fn positroid_verdict(m: &Matroid) -> Result<Option<Vec<usize>>> {
    let n = m.n();
    if n > POSITROID_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "positroid search supports at most {POSITROID_MAX_N} elements"
        )));
    }
    let mut rest: Vec<usize> = (2..=n).collect();
    loop {
        let mut order = Vec::with_capacity(n);
        order.push(1);
        order.extend_from_slice(&rest);
        if is_base_sorting_order(m, &order) {
            return Ok(Some(order));
        }
        if !next_permutation(&mut rest) {
            return Ok(None);
        }
    }
}

/// [`positroid_verdict`] as a verdict: the order certifies, exhaustion refutes.
pub fn positroid_check(m: &Matroid) -> Result<Verdict> {
    Ok(match positroid_verdict(m)? {
        Some(order) => Verdict::holds(Certificate::BaseSortingOrder(order), vec![Tier::Exact]),
        None => Verdict::fails(
            Witness::Exhausted {
                candidates: reduced_order_count(m.n()),
            },
            vec![Tier::Exact],
        ),
    })
}

/// Paving as a verdict; a failure lists one circuit smaller than the rank.
pub fn paving_check(m: &Matroid) -> Verdict {
    match m.circuits().iter().find(|c| c.len() < m.rank()) {
        Some(c) => Verdict::fails(Witness::Sets(vec![c]), vec![Tier::Exact]),
        None => Verdict::holds(
            Certificate::Exhaustive {
                checked: m.circuits().len(),
            },
            vec![Tier::Exact],
        ),
    }
}

/// Sparse paving as a verdict; a failure lists a small circuit of the matroid or of its dual.
pub fn sparse_paving_check(m: &Matroid) -> Verdict {
    let primal = paving_check(m);
    if primal.is_fails() {
        return primal;
    }
    let dual = m.dual();
    match dual.circuits().iter().find(|c| c.len() < dual.rank()) {
        Some(c) => Verdict::fails(Witness::Sets(vec![c]), vec![Tier::Exact]),
        None => Verdict::holds(
            Certificate::Exhaustive {
                checked: m.circuits().len() + dual.circuits().len(),
            },
            vec![Tier::Exact],
        ),
    }
}

/// Number of orders [`positroid_verdict`] examines when none succeeds.
pub fn reduced_order_count(n: usize) -> usize {
    (1..n).product::<usize>().max(1)
}

/// Advances to the next permutation in lexicographic order; false after the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Sparse paving matroid whose non-bases are exactly `h`.
pub fn sparse_paving_from_hyperplanes(n: usize, r: usize, h: &[ElemSet]) -> Matroid {
    let bases: Vec<ElemSet> = subsets_of_size(n, r).filter(|s| !h.contains(s)).collect();
    Matroid::from_trusted_bases(n, bases)
}

/// Iso-class representatives of sparse paving matroids of rank `r` on `n` elements, ordered by
/// the number of non-bases and then by discovery.
pub struct SparsePavingFamily {
    n: usize,
    r: usize,
    limit: usize,
    emitted: usize,
    level: Vec<Vec<ElemSet>>,
    cursor: usize,
    candidates: Vec<ElemSet>,
}

pub fn sparse_paving_family(n: usize, r: usize, limit: usize) -> Result<SparsePavingFamily> {
    if r == 0 || r >= n || n > 10 {
        return Err(Error::InvalidArgument(format!(
            "sparse paving family needs 0 < r < n <= 10, got n={n}, r={r}"
        )));
    }
    Ok(SparsePavingFamily {
        n,
        r,
        limit,
        emitted: 0,
        level: vec![Vec::new()],
        cursor: 0,
        candidates: subsets_of_size(n, r).collect(),
    })
}

impl SparsePavingFamily {
    fn compatible(&self, h: &[ElemSet], x: ElemSet) -> bool {
        h.iter()
            .all(|y| x.intersection(*y).len() + 2 <= self.r)
    }

    fn next_level(&self) -> Vec<Vec<ElemSet>> {
        let mut out: Vec<Vec<ElemSet>> = Vec::new();
        let mut buckets: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for h in &self.level {
            for &x in &self.candidates {
                if h.contains(&x) || !self.compatible(h, x) {
                    continue;
                }
                let mut g = h.clone();
                g.push(x);
                g.sort();
                let key = family_invariant(self.n, &g);
                let bucket = buckets.entry(key).or_default();
                if bucket
                    .iter()
                    .any(|&k| find_family_isomorphism(self.n, &out[k], &g).is_some())
                {
                    continue;
                }
                bucket.push(out.len());
                out.push(g);
            }
        }
        out
    }
}

impl Iterator for SparsePavingFamily {
    type Item = Matroid;

    fn next(&mut self) -> Option<Matroid> {
        if self.emitted >= self.limit {
            return None;
        }
        if self.cursor == self.level.len() {
            self.level = self.next_level();
            self.cursor = 0;
            if self.level.is_empty() {
                return None;
            }
        }
        let h = &self.level[self.cursor];
        self.cursor += 1;
        self.emitted += 1;
        let m = sparse_paving_from_hyperplanes(self.n, self.r, h);
        debug_assert!(is_sparse_paving(&m));
        Some(m)
    }
}

/// Every lattice path pair on `1..=n` elements for `n <= max_total`, by size, then rank, then
/// lower path and upper path in `E < N` order.
pub fn lpm_family(
    max_total: usize,
    connected_only: bool,
    limit: usize,
) -> Result<impl Iterator<Item = (LatticePathPair, Matroid)>> {
    if max_total > MAX_ELEMENTS {
        return Err(Error::TooManyElements(max_total));
    }
    let iter = (1..=max_total)
        .flat_map(|n| (0..=n).map(move |r| (n, r)))
        .flat_map(|(n, r)| {
            let paths = paths_with(n, r);
            let mut pairs = Vec::new();
            for p in &paths {
                for q in &paths {
                    if let Ok(l) = LatticePathPair::from_steps(p.clone(), q.clone()) {
                        pairs.push(l);
                    }
                }
            }
            pairs
        })
        .map(|l| {
            let m = lattice_path(&l);
            (l, m)
        })
        .filter(move |(_, m)| !connected_only || m.is_connected())
        .take(limit);
    Ok(iter)
}

/// All step sequences of length `n` with `r` North steps, `E < N` lexicographically.
fn paths_with(n: usize, r: usize) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = subsets_of_size(n, r)
        .map(|s| (1..=n).map(|i| s.contains(i)).collect())
        .collect();
    out.sort();
    out
}

/// Canonical edge list: the lexicographically least sorted edge multiset over vertex
/// relabelings that respect the (degree, loop count) classes.
pub fn canonical_edges(g: &MultiGraph) -> Vec<(usize, usize)> {
    let v = g.vertex_count();
    let mut key = vec![(0usize, 0usize); v];
    for &(a, b) in g.edges() {
        if a == b {
            key[a - 1].1 += 1;
        }
        key[a - 1].0 += 1;
        key[b - 1].0 += 1;
    }
    let mut verts: Vec<usize> = (0..v).collect();
    verts.sort_by_key(|&x| (std::cmp::Reverse(key[x]), x));
    // vertex classes in sorted order; relabel within each class in all ways
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &verts {
        match classes.last_mut() {
            Some(c) if key[c[0]] == key[x] => c.push(x),
            _ => classes.push(vec![x]),
        }
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut perms: Vec<Vec<usize>> = classes.clone();
    for c in perms.iter_mut() {
        c.sort();
    }
    loop {
        let mut label = vec![0usize; v];
        let mut next = 1;
        for c in &perms {
            for &x in c {
                label[x] = next;
                next += 1;
            }
        }
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (label[a - 1], label[b - 1]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
        // odometer over per-class permutations
        let mut k = perms.len();
        loop {
            if k == 0 {
                return best.unwrap_or_default();
            }
            k -= 1;
            if next_permutation(&mut perms[k]) {
                break;
            }
            perms[k].sort();
        }
    }
}

/// Connected multigraphs (loops and parallel edges allowed) with `1..=max_edges` edges and their
/// bicircular matroids, grown one edge at a time and deduplicated by [`canonical_edges`].
pub fn bicircular_family(
    max_edges: usize,
    limit: usize,
) -> Result<impl Iterator<Item = (MultiGraph, Matroid)>> {
    if max_edges > 9 {
        return Err(Error::InvalidArgument(
            "bicircular family supports at most 9 edges".into(),
        ));
    }
    let mut levels: Vec<Vec<MultiGraph>> = Vec::new();
    let mut current: Vec<MultiGraph> = vec![
        MultiGraph::new(1, vec![(1, 1)])?,
        MultiGraph::new(2, vec![(1, 2)])?,
    ];
    let mut total = 0usize;
    for edges in 1..=max_edges {
        if total >= limit {
            break;
        }
        total += current.len();
        levels.push(current.clone());
        if edges == max_edges {
            break;
        }
        let mut seen: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
        let mut next = Vec::new();
        for g in &current {
            let v = g.vertex_count();
            let mut options: Vec<(usize, usize, usize)> = Vec::new();
            for a in 1..=v {
                for b in a..=v {
                    options.push((v, a, b));
                }
                options.push((v + 1, a, v + 1));
            }
            for (nv, a, b) in options {
                let mut e = g.edges().to_vec();
                e.push((a, b));
                let h = MultiGraph::new(nv, e)?;
                let canon = canonical_edges(&h);
                if seen.insert((nv, canon.clone())) {
                    next.push(MultiGraph::new(nv, canon)?);
                }
            }
        }
        current = next;
    }
    Ok(levels
        .into_iter()
        .flatten()
        .map(|g| {
            let m = bicircular(&g);
            (g, m)
        })
        .take(limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{graphic, k4_wheel, uniform};

    fn set(e: &[usize]) -> ElemSet {
        ElemSet::from_elems(e.iter().copied())
    }

    #[test]
    fn paving_checks() {
        assert!(is_sparse_paving(&uniform(2, 4).unwrap()));
        let k4 = graphic(&k4_wheel());
        assert!(is_paving(&k4) && is_sparse_paving(&k4));
        let two_triangles = MultiGraph::new(
            6,
            vec![(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)],
        )
        .unwrap();
        assert!(!is_paving(&graphic(&two_triangles)));
    }

    #[test]
    fn base_sorting() {
        let u = uniform(2, 4).unwrap();
        assert!(is_base_sorting_order(&u, &[3, 1, 4, 2]));
        let single = uniform(2, 2).unwrap();
        assert!(is_base_sorting_order(&single, &[2, 1]));
        assert_eq!(positroid_verdict(&graphic(&k4_wheel())).unwrap(), None);
        assert_eq!(reduced_order_count(6), 120);
    }

    #[test]
    fn merge_split() {
        // positions {0,2} and {1,2}: merged 0,1,2,2 -> odd {0,2}, even {1,2}
        assert_eq!(split_merge(0b101, 0b110), (0b101, 0b110));
        assert_eq!(split_merge(0b011, 0b011), (0b011, 0b011));
    }

    #[test]
    fn sparse_paving_generation() {
        let all: Vec<Matroid> = sparse_paving_family(4, 2, 100).unwrap().collect();
        assert_eq!(all[0], uniform(2, 4).unwrap());
        // U(2,4) and one non-basis; two disjoint non-bases {12},{34}
        assert_eq!(all.len(), 3);
        assert_eq!(all[1].num_bases(), 5);
        assert!(all.iter().all(is_sparse_paving));
        let h = sparse_paving_from_hyperplanes(4, 2, &[set(&[1, 2])]);
        assert!(is_sparse_paving(&h));
    }

    #[test]
    fn lpm_generation() {
        let small: Vec<_> = lpm_family(2, false, usize::MAX).unwrap().collect();
        assert!(small.iter().any(|(_, m)| *m == uniform(1, 2).unwrap()));
        assert!(small.iter().any(|(_, m)| *m == uniform(2, 2).unwrap()));
        assert!(small.iter().any(|(_, m)| *m == uniform(0, 2).unwrap()));
    }

    #[test]
    fn bicircular_generation() {
        let fam: Vec<_> = bicircular_family(3, usize::MAX).unwrap().collect();
        let tri = MultiGraph::cycle(3).unwrap();
        let canon = canonical_edges(&tri);
        let (g, m) = fam
            .iter()
            .find(|(g, _)| g.vertex_count() == 3 && canonical_edges(g) == canon)
            .expect("triangle");
        assert_eq!(g.edge_count(), 3);
        assert_eq!(*m, uniform(3, 3).unwrap());
        assert!(fam.iter().all(|(g, _)| g.is_connected()));
    }

    #[test]
    fn canonical_form_is_label_free() {
        let a = MultiGraph::new(3, vec![(1, 2), (2, 3), (3, 3)]).unwrap();
        let b = MultiGraph::new(3, vec![(3, 2), (2, 1), (1, 1)]).unwrap();
        assert_eq!(canonical_edges(&a), canonical_edges(&b));
    }
}
