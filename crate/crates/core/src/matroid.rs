//! Matroids stored by their list of bases.

use std::collections::HashSet;
use std::fmt;

use crate::bitset::{subsets_of, subsets_of_size, ElemSet, MAX_ELEMENTS};
use crate::error::{Error, Result};
use crate::iso;

/// A matroid on the ground set `{1..=n}`.
///
/// Bases are kept sorted by bit pattern and deduplicated; a dense bitmap over all `2^n` subsets
/// makes basis lookups constant time.
#[derive(Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<ElemSet>,
    lookup: Vec<u64>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl std::hash::Hash for Matroid {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.bases.hash(state);
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("bases", &self.bases)
            .finish()
    }
}

/// Relabeling produced by a minor operation.
///
/// `old_to_new[e - 1]` is the new label of original element `e`, or `None` if it was removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

impl LabelMap {
    fn keeping(n: usize, keep: ElemSet) -> Self {
        let mut old_to_new = vec![None; n];
        let mut new_to_old = Vec::with_capacity(keep.len());
        for (pos, e) in keep.iter().enumerate() {
            old_to_new[e - 1] = Some(pos + 1);
            new_to_old.push(e);
        }
        LabelMap {
            old_to_new,
            new_to_old,
        }
    }

    pub fn new_label(&self, old: usize) -> Option<usize> {
        self.old_to_new.get(old.wrapping_sub(1)).copied().flatten()
    }

    pub fn old_label(&self, new: usize) -> usize {
        self.new_to_old[new - 1]
    }
}

/// Minimal dependent sets, sorted by size then bit pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSet {
    pub n: usize,
    pub circuits: Vec<ElemSet>,
}

impl CircuitSet {
    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.circuits.iter().copied()
    }

    /// True iff `set` contains no circuit.
    pub fn is_independent(&self, set: ElemSet) -> bool {
        !self.circuits.iter().any(|c| c.is_subset(set))
    }

    fn normalize(&mut self) {
        self.circuits.sort_by_key(|c| (c.len(), c.bits()));
        self.circuits.dedup();
    }
}

fn check_ground(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if n > MAX_ELEMENTS {
        return Err(Error::TooManyElements(n));
    }
    Ok(())
}

impl Matroid {
    /// Validates a basis list: equal cardinalities, elements in range, and basis exchange.
    pub fn from_bases<I: IntoIterator<Item = ElemSet>>(n: usize, bases: I) -> Result<Self> {
        check_ground(n)?;
        let full = ElemSet::full(n);
        let mut list: Vec<ElemSet> = Vec::new();
        let mut rank = None;
        for b in bases {
            if !b.is_subset(full) {
                let elem = b.difference(full).iter().next().unwrap_or(n + 1);
                return Err(Error::ElementOutOfRange { elem, n });
            }
            match rank {
                None => rank = Some(b.len()),
                Some(r) if r != b.len() => {
                    return Err(Error::MixedCardinality {
                        expected: r,
                        found: b.len(),
                    })
                }
                _ => {}
            }
            list.push(b);
        }
        if list.is_empty() {
            return Err(Error::EmptyBases);
        }
        let m = Self::build(n, list);
        m.check_exchange()?;
        Ok(m)
    }

    /// Parses bases given as element lists, as in `from_bases(4, [[1,2],[1,3]])`.
    pub fn from_basis_lists<I, B>(n: usize, bases: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = usize>,
    {
        let mut sets = Vec::new();
        for b in bases {
            let mut s = ElemSet::EMPTY;
            let mut count = 0;
            for e in b {
                if e == 0 || e > n.min(MAX_ELEMENTS) {
                    return Err(Error::ElementOutOfRange { elem: e, n });
                }
                s = s.with(e);
                count += 1;
            }
            if count != s.len() {
                return Err(Error::InvalidArgument(format!("repeated element in basis {s:?}")));
            }
            sets.push(s);
        }
        Self::from_bases(n, sets)
    }

    /// Builds without checking the exchange axiom; callers guarantee a matroid basis family
    /// (bases coming from an independence oracle of a known matroid class).
    pub(crate) fn from_trusted_bases(n: usize, bases: Vec<ElemSet>) -> Self {
        debug_assert!(n >= 1 && n <= MAX_ELEMENTS);
        debug_assert!(!bases.is_empty());
        Self::build(n, bases)
    }

    /// Enumerates every subset, keeping the maximum-size sets accepted by `independent`.
    ///
    /// `independent` must be the independence oracle of a matroid on `{1..=n}`.
    pub fn from_independence_oracle<F>(n: usize, mut independent: F) -> Result<Self>
    where
        F: FnMut(ElemSet) -> bool,
    {
        check_ground(n)?;
        for r in (0..=n).rev() {
            let bases: Vec<ElemSet> = subsets_of_size(n, r).filter(|&s| independent(s)).collect();
            if !bases.is_empty() {
                return Ok(Self::build(n, bases));
            }
        }
        Ok(Self::build(n, vec![ElemSet::EMPTY]))
    }

    fn build(n: usize, mut bases: Vec<ElemSet>) -> Self {
        bases.sort_unstable();
        bases.dedup();
        let rank = bases[0].len();
        let mut lookup = vec![0u64; ((1usize << n) + 63) / 64];
        for b in &bases {
            let i = b.bits() as usize;
            lookup[i / 64] |= 1 << (i % 64);
        }
        Matroid {
            n,
            rank,
            bases,
            lookup,
        }
    }

    fn check_exchange(&self) -> Result<()> {
        for &i in &self.bases {
            for &j in &self.bases {
                if i == j {
                    continue;
                }
                let j_minus_i = j.difference(i);
                for a in i.difference(j).iter() {
                    let base = i.without(a);
                    if !j_minus_i.iter().any(|b| self.is_basis(base.with(b))) {
                        return Err(Error::ExchangeViolation { i, j, a });
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[ElemSet] {
        &self.bases
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn ground_set(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    #[inline]
    pub fn is_basis(&self, s: ElemSet) -> bool {
        let i = s.bits() as usize;
        if i >= (1usize << self.n) {
            return false;
        }
        self.lookup[i / 64] >> (i % 64) & 1 == 1
    }

    /// Rank of a subset: the largest intersection with a basis.
    pub fn rank_of(&self, s: ElemSet) -> usize {
        let mut best = 0;
        for b in &self.bases {
            let k = b.intersection(s).len();
            if k > best {
                best = k;
                if best == s.len() || best == self.rank {
                    break;
                }
            }
        }
        best
    }

    pub fn is_independent(&self, s: ElemSet) -> bool {
        self.bases.iter().any(|b| s.is_subset(*b))
    }

    pub fn closure(&self, s: ElemSet) -> ElemSet {
        let r = self.rank_of(s);
        self.ground_set()
            .iter()
            .filter(|&e| s.contains(e) || self.rank_of(s.with(e)) == r)
            .fold(ElemSet::EMPTY, |acc, e| acc.with(e))
    }

    /// Elements contained in no basis.
    pub fn loops(&self) -> ElemSet {
        let union = self.bases.iter().fold(ElemSet::EMPTY, |a, b| a.union(*b));
        self.ground_set().difference(union)
    }

    /// Elements contained in every basis.
    pub fn coloops(&self) -> ElemSet {
        self.bases
            .iter()
            .fold(self.ground_set(), |a, b| a.intersection(*b))
    }

    /// Number of bases containing each element (index `e - 1`).
    pub fn element_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for b in &self.bases {
            for e in b.iter() {
                deg[e - 1] += 1;
            }
        }
        deg
    }

    /// Number of bases containing both `e` and `f`.
    pub fn pair_degree(&self, e: usize, f: usize) -> usize {
        let pair = ElemSet::singleton(e).with(f);
        self.bases.iter().filter(|b| pair.is_subset(**b)).count()
    }

    /// Table of all independent subsets, indexed by bit pattern.
    pub fn independence_table(&self) -> Vec<bool> {
        let size = 1usize << self.n;
        let mut indep = vec![false; size];
        for b in &self.bases {
            indep[b.bits() as usize] = true;
        }
        for mask in (0..size).rev() {
            if indep[mask] {
                continue;
            }
            let mut rest = !mask & (size - 1);
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if indep[mask | bit] {
                    indep[mask] = true;
                    break;
                }
                rest &= rest - 1;
            }
        }
        indep
    }

    pub fn circuits(&self) -> CircuitSet {
        let indep = self.independence_table();
        let mut circuits = Vec::new();
        for size in 1..=(self.rank + 1).min(self.n) {
            for c in subsets_of_size(self.n, size) {
                if indep[c.bits() as usize] {
                    continue;
                }
                if c.iter().all(|e| indep[c.without(e).bits() as usize]) {
                    circuits.push(c);
                }
            }
        }
        let mut cs = CircuitSet { n: self.n, circuits };
        cs.normalize();
        cs
    }

    pub fn dual(&self) -> Matroid {
        let full = self.ground_set();
        Matroid::build(
            self.n,
            self.bases.iter().map(|b| full.difference(*b)).collect(),
        )
    }

    /// Deletes `s`; the remaining elements are relabeled `1..` in their original order.
    ///
    /// Deleting the whole ground set is rejected since matroids here are nonempty.
    pub fn delete(&self, s: ElemSet) -> Result<(Matroid, LabelMap)> {
        let keep = self.ground_set().difference(s);
        self.restrict(keep)
    }

    /// Restriction to `keep`, relabeled onto `1..=|keep|`.
    pub fn restrict(&self, keep: ElemSet) -> Result<(Matroid, LabelMap)> {
        let keep = keep.intersection(self.ground_set());
        if keep.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let best = self
            .bases
            .iter()
            .map(|b| b.intersection(keep).len())
            .max()
            .unwrap_or(0);
        let bases = self
            .bases
            .iter()
            .map(|b| b.intersection(keep))
            .filter(|b| b.len() == best)
            .map(|b| b.compress(keep))
            .collect();
        Ok((
            Matroid::build(keep.len(), bases),
            LabelMap::keeping(self.n, keep),
        ))
    }

    /// Contracts `s`; the remaining elements are relabeled `1..` in their original order.
    pub fn contract(&self, s: ElemSet) -> Result<(Matroid, LabelMap)> {
        let s = s.intersection(self.ground_set());
        let keep = self.ground_set().difference(s);
        if keep.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let rs = self.rank_of(s);
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(s).len() == rs)
            .map(|b| b.difference(s).compress(keep))
            .collect();
        Ok((
            Matroid::build(keep.len(), bases),
            LabelMap::keeping(self.n, keep),
        ))
    }

    /// `M / contract \ delete` with the two sets disjoint.
    pub fn minor(&self, contract: ElemSet, delete: ElemSet) -> Result<(Matroid, LabelMap)> {
        if !contract.intersection(delete).is_empty() {
            return Err(Error::InvalidArgument(
                "contraction and deletion sets overlap".into(),
            ));
        }
        let removed = contract.union(delete).intersection(self.ground_set());
        let keep = self.ground_set().difference(removed);
        if keep.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        let rs = self.rank_of(contract);
        let reduced: Vec<ElemSet> = self
            .bases
            .iter()
            .filter(|b| b.intersection(contract).len() == rs)
            .map(|b| b.difference(contract))
            .collect();
        let best = reduced
            .iter()
            .map(|b| b.difference(delete).len())
            .max()
            .unwrap_or(0);
        let bases = reduced
            .into_iter()
            .map(|b| b.difference(delete))
            .filter(|b| b.len() == best)
            .map(|b| b.compress(keep))
            .collect();
        Ok((
            Matroid::build(keep.len(), bases),
            LabelMap::keeping(self.n, keep),
        ))
    }

    /// Ground sets concatenated: elements of `other` are shifted by `self.n()`.
    pub fn direct_sum(&self, other: &Matroid) -> Result<Matroid> {
        let n = self.n + other.n;
        check_ground(n)?;
        let shift = self.n as u32;
        let mut bases = Vec::with_capacity(self.bases.len() * other.bases.len());
        for a in &self.bases {
            for b in &other.bases {
                bases.push(ElemSet::from_bits(a.bits() | (b.bits() << shift)));
            }
        }
        Ok(Matroid::build(n, bases))
    }

    /// 2-sum along basepoints `p` of `self` and `q` of `other`.
    ///
    /// The result lives on `(E(self) - p) ⊔ (E(other) - q)`: first the elements of `self` other
    /// than `p` in order, then those of `other` other than `q`. Its circuits are the circuits of
    /// either side avoiding the basepoint plus `(C ∪ D) - {p, q}` for circuits `C ∋ p`, `D ∋ q`.
    pub fn two_sum(&self, p: usize, other: &Matroid, q: usize) -> Result<Matroid> {
        if self.n < 2 || other.n < 2 {
            return Err(Error::TwoSumTooSmall);
        }
        for (m, e) in [(self, p), (other, q)] {
            if e == 0 || e > m.n {
                return Err(Error::ElementOutOfRange { elem: e, n: m.n });
            }
            if m.loops().contains(e) || m.coloops().contains(e) {
                return Err(Error::BasepointIsSeparator { element: e });
            }
        }
        let n = self.n + other.n - 2;
        check_ground(n)?;
        let circuits = two_sum_circuits(self, p, other, q);
        let rank = self.rank + other.rank - 1;
        let bases: Vec<ElemSet> = subsets_of_size(n, rank)
            .filter(|&s| circuits.is_independent(s))
            .collect();
        Ok(Matroid::build(n, bases))
    }

    /// A ground-set bijection `map` (with `map[e - 1]` the image of `e`) carrying the bases of
    /// `self` onto those of `other`.
    pub fn find_isomorphism(&self, other: &Matroid) -> Option<Vec<usize>> {
        if self.n != other.n || self.rank != other.rank || self.bases.len() != other.bases.len()
        {
            return None;
        }
        let total = binomial(self.n, self.rank);
        if 2 * self.bases.len() <= total {
            iso::find_family_isomorphism(self.n, &self.bases, &other.bases)
        } else {
            let a = self.non_bases();
            let b = other.non_bases();
            iso::find_family_isomorphism(self.n, &a, &b)
        }
    }

    pub fn is_isomorphic(&self, other: &Matroid) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// The `r`-subsets that are not bases.
    pub fn non_bases(&self) -> Vec<ElemSet> {
        subsets_of_size(self.n, self.rank)
            .filter(|s| !self.is_basis(*s))
            .collect()
    }

    /// Applies the relabeling `map` (`map[e - 1]` is the image of `e`).
    pub fn relabel(&self, map: &[usize]) -> Matroid {
        Matroid::build(self.n, self.bases.iter().map(|b| b.map(map)).collect())
    }

    /// Whether `other` is isomorphic to some minor `self / C \ D`.
    ///
    /// Every minor can be written with `C` independent and `D` coindependent, so `|C|` is the
    /// rank drop and only independent contraction sets are tried.
    pub fn has_minor(&self, other: &Matroid) -> bool {
        if other.n > self.n || other.rank > self.rank {
            return false;
        }
        let removed = self.n - other.n;
        let drop = self.rank - other.rank;
        if drop > removed {
            return false;
        }
        if removed == 0 {
            return self.is_isomorphic(other);
        }
        let mut seen: HashSet<Vec<ElemSet>> = HashSet::new();
        for x in subsets_of_size(self.n, removed) {
            for c in subsets_of(x).filter(|c| c.len() == drop) {
                if !self.is_independent(c) {
                    continue;
                }
                let d = x.difference(c);
                let Ok((minor, _)) = self.minor(c, d) else {
                    continue;
                };
                if minor.rank != other.rank || minor.bases.len() != other.bases.len() {
                    continue;
                }
                if !seen.insert(minor.bases.clone()) {
                    continue;
                }
                if minor.is_isomorphic(other) {
                    return true;
                }
            }
        }
        false
    }

    /// Connected components (as element sets), ordered by smallest element.
    pub fn components(&self) -> Vec<ElemSet> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for c in self.circuits().iter() {
            let elems = c.to_vec();
            let root = find(&mut parent, elems[0] - 1);
            for e in &elems[1..] {
                let other = find(&mut parent, e - 1);
                if other != root {
                    parent[other] = root;
                }
            }
        }
        let mut comps: Vec<ElemSet> = Vec::new();
        let mut root_of = vec![usize::MAX; self.n];
        for e in 1..=self.n {
            let r = find(&mut parent, e - 1);
            if root_of[r] == usize::MAX {
                root_of[r] = comps.len();
                comps.push(ElemSet::EMPTY);
            }
            let idx = root_of[r];
            comps[idx] = comps[idx].with(e);
        }
        comps
    }

    /// No 1-separation: no nonempty proper `A` with `r(A) + r(E - A) = r(M)`.
    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// A partition `(A, B)` with `|A|, |B| >= 2` and `r(A) + r(B) - r(M) <= 1`, if one exists.
    /// `A` always contains element 1.
    pub fn two_separation(&self) -> Option<(ElemSet, ElemSet)> {
        if self.n < 4 {
            return None;
        }
        let full = self.ground_set();
        let rest = full.without(1);
        for t in subsets_of(rest) {
            let a = t.with(1);
            let b = full.difference(a);
            if a.len() < 2 || b.len() < 2 {
                continue;
            }
            if self.rank_of(a) + self.rank_of(b) <= self.rank + 1 {
                return Some((a, b));
            }
        }
        None
    }

    /// Whether `h` is a circuit that is also a hyperplane.
    pub fn is_circuit_hyperplane(&self, h: ElemSet) -> bool {
        if !h.is_subset(self.ground_set()) || h.len() != self.rank || self.rank == 0 {
            return false;
        }
        if self.is_basis(h) {
            return false;
        }
        if !h.iter().all(|e| self.is_independent(h.without(e))) {
            return false;
        }
        self.closure(h) == h
    }

    /// Adds the circuit-hyperplane `h` as a new basis.
    pub fn relax(&self, h: ElemSet) -> Result<Matroid> {
        if !self.is_circuit_hyperplane(h) {
            return Err(Error::NotCircuitHyperplane(h));
        }
        let mut bases = self.bases.clone();
        bases.push(h);
        Ok(Matroid::build(self.n, bases))
    }

    /// Every circuit-hyperplane of the matroid.
    pub fn circuit_hyperplanes(&self) -> Vec<ElemSet> {
        self.non_bases()
            .into_iter()
            .filter(|h| self.is_circuit_hyperplane(*h))
            .collect()
    }
}

/// Circuits of the 2-sum, labeled on the result's ground set.
pub fn two_sum_circuits(m: &Matroid, p: usize, n: &Matroid, q: usize) -> CircuitSet {
    let keep_m = m.ground_set().without(p);
    let keep_n = n.ground_set().without(q);
    let shift = (m.n - 1) as u32;
    let from_m = |c: ElemSet| c.compress(keep_m);
    let from_n = |d: ElemSet| ElemSet::from_bits(d.compress(keep_n).bits() << shift);
    let cm = m.circuits();
    let cn = n.circuits();
    let mut out = Vec::new();
    for c in cm.iter().filter(|c| !c.contains(p)) {
        out.push(from_m(c));
    }
    for d in cn.iter().filter(|d| !d.contains(q)) {
        out.push(from_n(d));
    }
    for c in cm.iter().filter(|c| c.contains(p)) {
        for d in cn.iter().filter(|d| d.contains(q)) {
            out.push(from_m(c.without(p)).union(from_n(d.without(q))));
        }
    }
    let mut cs = CircuitSet {
        n: m.n + n.n - 2,
        circuits: out,
    };
    cs.normalize();
    cs
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
