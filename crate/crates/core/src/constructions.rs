//! Matroid classes built from graphs, set systems and lattice paths, plus the principal
//! extension and truncation operators.

use serde::{Deserialize, Serialize};

use crate::bitset::{subsets_of_size, ElemSet, MAX_ELEMENTS};
use crate::error::{Error, Result};
use crate::matroid::Matroid;

/// A graph with loops and parallel edges; edge `k` (1-indexed) is matroid element `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiGraph {
    v: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(v: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements(edges.len()));
        }
        for &(a, b) in &edges {
            for x in [a, b] {
                if x == 0 || x > v {
                    return Err(Error::VertexOutOfRange { vertex: x, v });
                }
            }
        }
        Ok(MultiGraph { v, edges })
    }

    pub fn complete(v: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 1..=v {
            for b in a + 1..=v {
                edges.push((a, b));
            }
        }
        Self::new(v, edges)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 1..=a {
            for j in 1..=b {
                edges.push((i, a + j));
            }
        }
        Self::new(a + b, edges)
    }

    pub fn cycle(v: usize) -> Result<Self> {
        Self::new(v, (1..=v).map(|i| (i, i % v + 1)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_loop(&self) -> Option<usize> {
        self.edges.iter().position(|(a, b)| a == b).map(|i| i + 1)
    }

    /// Vertex components of the subgraph spanned by the edge set `edges`, as
    /// `(vertex count, edge count)` per component touching at least one edge.
    fn edge_components(&self, edges: ElemSet) -> Vec<(usize, usize)> {
        let mut dsu = Dsu::new(self.v);
        for e in edges.iter() {
            let (a, b) = self.edges[e - 1];
            dsu.union(a - 1, b - 1);
        }
        let mut verts = vec![0usize; self.v];
        let mut counts = vec![0usize; self.v];
        let mut touched = vec![false; self.v];
        for e in edges.iter() {
            let (a, b) = self.edges[e - 1];
            touched[a - 1] = true;
            touched[b - 1] = true;
            counts[dsu.find(a - 1)] += 1;
        }
        for x in 0..self.v {
            if touched[x] {
                verts[dsu.find(x)] += 1;
            }
        }
        (0..self.v)
            .filter(|&x| verts[x] > 0)
            .map(|x| (verts[x], counts[x]))
            .collect()
    }

    /// Whether every vertex is reachable from vertex 1 (isolated vertices count as separate).
    pub fn is_connected(&self) -> bool {
        if self.v <= 1 {
            return true;
        }
        let mut dsu = Dsu::new(self.v);
        for &(a, b) in &self.edges {
            dsu.union(a - 1, b - 1);
        }
        let root = dsu.find(0);
        (1..self.v).all(|x| dsu.find(x) == root)
    }

    pub fn component_count(&self) -> usize {
        let mut dsu = Dsu::new(self.v);
        for &(a, b) in &self.edges {
            dsu.union(a - 1, b - 1);
        }
        (0..self.v).filter(|&x| dsu.find(x) == x).count()
    }

    /// Vertex components as lists of 1-indexed vertices, ordered by smallest vertex.
    pub fn vertex_components(&self) -> Vec<Vec<usize>> {
        let mut dsu = Dsu::new(self.v);
        for &(a, b) in &self.edges {
            dsu.union(a - 1, b - 1);
        }
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.v];
        for x in 0..self.v {
            let r = dsu.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x + 1);
        }
        out
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        true
    }
}

/// A multiset of subsets of `{1..=n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    n: usize,
    family: Vec<ElemSet>,
}

impl SetSystem {
    pub fn new(n: usize, family: Vec<ElemSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements(n));
        }
        if family.is_empty() {
            return Err(Error::InvalidArgument("set system needs at least one member".into()));
        }
        let full = ElemSet::full(n);
        for s in &family {
            if let Some(elem) = s.difference(full).iter().next() {
                return Err(Error::ElementOutOfRange { elem, n });
            }
        }
        Ok(SetSystem { n, family })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &[ElemSet] {
        &self.family
    }

    /// Whether `set` can be matched injectively into distinct members of the family.
    pub fn is_partial_transversal(&self, set: ElemSet) -> bool {
        let elems = set.to_vec();
        let mut owner: Vec<Option<usize>> = vec![None; self.family.len()];
        for &e in &elems {
            let mut seen = vec![false; self.family.len()];
            if !self.augment(e, &mut owner, &mut seen) {
                return false;
            }
        }
        true
    }

    fn augment(&self, e: usize, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for (j, a) in self.family.iter().enumerate() {
            if !a.contains(e) || seen[j] {
                continue;
            }
            seen[j] = true;
            match owner[j] {
                None => {
                    owner[j] = Some(e);
                    return true;
                }
                Some(other) => {
                    if self.augment(other, owner, seen) {
                        owner[j] = Some(e);
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// A pair of lattice paths from `(0,0)` to `(m,r)` over steps `N` and `E`, with the lower path
/// `p` never above the upper path `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePathPair {
    p: Vec<bool>,
    q: Vec<bool>,
}

fn parse_path(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            'N' | 'n' => Ok(true),
            'E' | 'e' => Ok(false),
            other => Err(Error::MalformedPaths(format!("unexpected step {other:?}"))),
        })
        .collect()
}

impl LatticePathPair {
    /// Steps are given as strings over `{N, E}`; `p` is the lower path.
    pub fn new(p: &str, q: &str) -> Result<Self> {
        Self::from_steps(parse_path(p)?, parse_path(q)?)
    }

    /// `true` marks a North step.
    pub fn from_steps(p: Vec<bool>, q: Vec<bool>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::MalformedPaths("paths differ in length".into()));
        }
        if p.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        if p.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements(p.len()));
        }
        let (mut hp, mut hq) = (0usize, 0usize);
        for (i, (&a, &b)) in p.iter().zip(&q).enumerate() {
            hp += a as usize;
            hq += b as usize;
            if hp > hq {
                return Err(Error::PathViolation(i + 1));
            }
        }
        if hp != hq {
            return Err(Error::MalformedPaths("paths end at different points".into()));
        }
        Ok(LatticePathPair { p, q })
    }

    /// The pair whose interval presentation is `[lower[i], upper[i]]` on `{1..=n}`.
    ///
    /// The upper path takes its North steps at `lower`, the lower path at `upper`.
    pub fn from_bounds(lower: &[usize], upper: &[usize], n: usize) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::MalformedPaths(
                "bound lists differ in length".into(),
            ));
        }
        let mark = |pos: &[usize]| -> Result<Vec<bool>> {
            let mut steps = vec![false; n];
            let mut prev = 0;
            for &x in pos {
                if x == 0 || x > n {
                    return Err(Error::ElementOutOfRange { elem: x, n });
                }
                if x <= prev {
                    return Err(Error::MalformedPaths(
                        "bounds must be strictly increasing".into(),
                    ));
                }
                prev = x;
                steps[x - 1] = true;
            }
            Ok(steps)
        };
        Self::from_steps(mark(upper)?, mark(lower)?)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.p.iter().filter(|&&s| s).count()
    }

    fn render(steps: &[bool]) -> String {
        steps.iter().map(|&s| if s { 'N' } else { 'E' }).collect()
    }

    pub fn lower_path(&self) -> String {
        Self::render(&self.p)
    }

    pub fn upper_path(&self) -> String {
        Self::render(&self.q)
    }

    pub fn lower_steps(&self) -> &[bool] {
        &self.p
    }

    pub fn upper_steps(&self) -> &[bool] {
        &self.q
    }

    /// Interval lower endpoints `l_i`: North-step positions of the upper path.
    pub fn lower_bounds(&self) -> Vec<usize> {
        positions(&self.q)
    }

    /// Interval upper endpoints `u_i`: North-step positions of the lower path.
    pub fn upper_bounds(&self) -> Vec<usize> {
        positions(&self.p)
    }

    pub fn intervals(&self) -> Vec<(usize, usize)> {
        self.lower_bounds()
            .into_iter()
            .zip(self.upper_bounds())
            .collect()
    }

    /// Reflection across the diagonal (N and E swapped); presents the dual matroid.
    pub fn transpose(&self) -> LatticePathPair {
        let flip = |s: &[bool]| s.iter().map(|&x| !x).collect::<Vec<_>>();
        LatticePathPair {
            p: flip(&self.q),
            q: flip(&self.p),
        }
    }

    /// Unit cells `(column, row)` between the two paths.
    fn cells(&self) -> Vec<(usize, usize)> {
        let heights = |steps: &[bool]| {
            let mut h = 0;
            let mut out = Vec::new();
            for &s in steps {
                if s {
                    h += 1;
                } else {
                    out.push(h);
                }
            }
            out
        };
        let low = heights(&self.p);
        let high = heights(&self.q);
        let mut cells = Vec::new();
        for (x, (&a, &b)) in low.iter().zip(&high).enumerate() {
            for y in a..b {
                cells.push((x, y));
            }
        }
        cells
    }

    /// Whether a lattice point lies strictly inside the region between the paths.
    pub fn has_interior_point(&self) -> bool {
        let cells: std::collections::HashSet<(usize, usize)> = self.cells().into_iter().collect();
        cells.iter().any(|&(x, y)| {
            cells.contains(&(x + 1, y))
                && cells.contains(&(x, y + 1))
                && cells.contains(&(x + 1, y + 1))
        })
    }
}

fn positions(steps: &[bool]) -> Vec<usize> {
    steps
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| i + 1)
        .collect()
}

pub fn uniform(k: usize, n: usize) -> Result<Matroid> {
    if k > n {
        return Err(Error::InvalidArgument(format!("rank {k} exceeds size {n}")));
    }
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if n > MAX_ELEMENTS {
        return Err(Error::TooManyElements(n));
    }
    Ok(Matroid::from_trusted_bases(
        n,
        subsets_of_size(n, k).collect(),
    ))
}

/// Cycle matroid: bases are the maximal spanning forests.
pub fn graphic(g: &MultiGraph) -> Matroid {
    let n = g.edge_count().max(1);
    if g.edge_count() == 0 {
        return Matroid::from_trusted_bases(1, vec![ElemSet::EMPTY]);
    }
    Matroid::from_independence_oracle(n, |s| {
        let mut dsu = Dsu::new(g.v);
        s.iter().all(|e| {
            let (a, b) = g.edges[e - 1];
            dsu.union(a - 1, b - 1)
        })
    })
    .expect("edge count within bounds")
}

/// Bicircular matroid: an edge set is independent iff each component of the subgraph it spans
/// contains at most one cycle (a loop is a cycle).
pub fn bicircular(g: &MultiGraph) -> Matroid {
    if g.edge_count() == 0 {
        return Matroid::from_trusted_bases(1, vec![ElemSet::EMPTY]);
    }
    Matroid::from_independence_oracle(g.edge_count(), |s| {
        g.edge_components(s).iter().all(|&(v, e)| e <= v)
    })
    .expect("edge count within bounds")
}

/// One member per vertex: the edges incident with it.
pub fn bicircular_presentation(g: &MultiGraph) -> Result<SetSystem> {
    let family = (1..=g.v)
        .map(|x| {
            g.edges
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == x || b == x)
                .fold(ElemSet::EMPTY, |acc, (i, _)| acc.with(i + 1))
        })
        .collect();
    SetSystem::new(g.edge_count(), family)
}

/// Transversal matroid whose independent sets are the partial transversals of `s`.
pub fn transversal(s: &SetSystem) -> Matroid {
    Matroid::from_independence_oracle(s.n, |set| s.is_partial_transversal(set))
        .expect("set system size within bounds")
}

/// Lattice path matroid: the transversal matroid of the intervals `[l_i, u_i]`.
pub fn lattice_path(l: &LatticePathPair) -> Matroid {
    let family = l
        .intervals()
        .into_iter()
        .map(|(a, b)| ElemSet::from_elems(a..=b))
        .collect::<Vec<_>>();
    if family.is_empty() {
        return Matroid::from_trusted_bases(l.len(), vec![ElemSet::EMPTY]);
    }
    let sys = SetSystem::new(l.len(), family).expect("intervals lie in the ground set");
    transversal(&sys)
}

/// Connected, at least two elements, and no lattice point strictly between the paths.
pub fn is_snake(l: &LatticePathPair) -> bool {
    l.len() >= 2 && !l.has_interior_point() && lattice_path(l).is_connected()
}

/// Bases `B - f` for `B` a basis and `f ∈ F ∩ B`.
pub fn principal_truncation(m: &Matroid, flat: ElemSet) -> Result<Matroid> {
    if flat.is_empty() || !m.bases().iter().any(|b| !b.intersection(flat).is_empty()) {
        return Err(Error::FDisjointFromAllBases(flat));
    }
    let mut bases = Vec::new();
    for b in m.bases() {
        for f in b.intersection(flat).iter() {
            bases.push(b.without(f));
        }
    }
    Ok(Matroid::from_trusted_bases(m.n(), bases))
}

/// Adds element `n + 1` freely to the flat spanned by `flat`: the bases of `m` together with
/// `B + (n+1)` for every basis `B` of the principal truncation.
pub fn principal_extension(m: &Matroid, flat: ElemSet) -> Result<Matroid> {
    let n = m.n() + 1;
    if n > MAX_ELEMENTS {
        return Err(Error::TooManyElements(n));
    }
    let tr = principal_truncation(m, flat)?;
    let mut bases: Vec<ElemSet> = m.bases().to_vec();
    bases.extend(tr.bases().iter().map(|b| b.with(n)));
    Ok(Matroid::from_trusted_bases(n, bases))
}

/// One step of the recursive description of lattice path matroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpmStep {
    Loop,
    Coloop,
    /// Principal extension by the closure of `{x_h, ..., x_{i-1}}`.
    Principal(usize),
}

pub fn lpm_recursive_build(steps: &[LpmStep]) -> Result<Matroid> {
    if steps.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    if steps.len() > MAX_ELEMENTS {
        return Err(Error::TooManyElements(steps.len()));
    }
    let mut cur: Option<Matroid> = None;
    for (idx, step) in steps.iter().enumerate() {
        let i = idx + 1;
        let next = match (*step, &cur) {
            (LpmStep::Loop, None) => uniform(0, 1)?,
            (LpmStep::Coloop, None) => uniform(1, 1)?,
            (LpmStep::Principal(h), None) => return Err(Error::InvalidStep { step: i, h }),
            (LpmStep::Loop, Some(m)) => m.direct_sum(&uniform(0, 1)?)?,
            (LpmStep::Coloop, Some(m)) => m.direct_sum(&uniform(1, 1)?)?,
            (LpmStep::Principal(h), Some(m)) => {
                if h == 0 || h >= i {
                    return Err(Error::InvalidStep { step: i, h });
                }
                let gens = ElemSet::from_elems(h..i);
                if !m.is_independent(gens) {
                    return Err(Error::DependentGeneratorSet(gens));
                }
                principal_extension(m, m.closure(gens))?
            }
        };
        cur = Some(next);
    }
    Ok(cur.expect("at least one step"))
}

/// Bicircular matroid of the `r`-cycle with a loop at every vertex.
///
/// Elements `1..=r` are rim edges (edge `i` joins vertices `i` and `i+1`), elements
/// `r+1..=2r` are the loops (element `r+i` sits at vertex `i`).
pub fn whirl(r: usize) -> Result<Matroid> {
    if r < 2 {
        return Err(Error::InvalidArgument("whirl needs r >= 2".into()));
    }
    let mut edges: Vec<(usize, usize)> = (1..=r).map(|i| (i, i % r + 1)).collect();
    edges.extend((1..=r).map(|i| (i, i)));
    Ok(bicircular(&MultiGraph::new(r, edges)?))
}

/// `K4` with the rim triangle on edges `1,2,3` and spokes `4,5,6` to the hub.
pub fn k4_wheel() -> MultiGraph {
    MultiGraph::new(4, vec![(1, 2), (2, 3), (3, 1), (1, 4), (2, 4), (3, 4)])
        .expect("valid graph")
}

pub const ATLAS_NAMES: [&str; 5] = ["MK4", "BK33", "TicTacToe", "U24", "W3"];

pub fn named_atlas(name: &str) -> Result<Matroid> {
    match name {
        "MK4" => Ok(graphic(&k4_wheel())),
        "BK33" => Ok(bicircular(&MultiGraph::complete_bipartite(3, 3)?)),
        "TicTacToe" => Ok(bicircular(&MultiGraph::complete_bipartite(3, 3)?).dual()),
        "U24" => uniform(2, 4),
        "W3" => whirl(3),
        other => Err(Error::UnknownName(other.to_string())),
    }
}
