//! Isomorphism of set families on `{1..=n}` by backtracking.
//!
//! Candidates are pruned by element degree and the sorted row of pair degrees; every partial
//! assignment is checked against pair degrees and against the sets it already covers.

use std::collections::HashSet;

use crate::bitset::ElemSet;

struct Profile {
    deg: Vec<u32>,
    pair: Vec<Vec<u32>>,
    signature: Vec<(u32, Vec<u32>)>,
}

fn profile(n: usize, family: &[ElemSet]) -> Profile {
    let mut deg = vec![0u32; n];
    let mut pair = vec![vec![0u32; n]; n];
    for s in family {
        let elems = s.to_vec();
        for (i, &a) in elems.iter().enumerate() {
            deg[a - 1] += 1;
            for &b in &elems[i + 1..] {
                pair[a - 1][b - 1] += 1;
                pair[b - 1][a - 1] += 1;
            }
        }
    }
    let signature = (0..n)
        .map(|e| {
            let mut row = pair[e].clone();
            row.remove(e);
            row.sort_unstable();
            (deg[e], row)
        })
        .collect();
    Profile {
        deg,
        pair,
        signature,
    }
}

/// An isomorphism-invariant fingerprint of a family, usable as a bucketing key.
pub fn family_invariant(n: usize, family: &[ElemSet]) -> Vec<u32> {
    let p = profile(n, family);
    let mut sigs = p.signature.clone();
    sigs.sort();
    let mut key = vec![n as u32, family.len() as u32];
    for (d, row) in sigs {
        key.push(d);
        key.extend(row);
    }
    // per-set degree patterns
    let mut set_sigs: Vec<Vec<u32>> = family
        .iter()
        .map(|s| {
            let mut v: Vec<u32> = s.iter().map(|e| p.deg[e - 1]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    set_sigs.sort();
    for s in set_sigs {
        key.push(u32::MAX);
        key.extend(s);
    }
    key
}

/// A bijection `map` with `map[e - 1]` the image of `e`, sending `a` onto `b`.
pub fn find_family_isomorphism(n: usize, a: &[ElemSet], b: &[ElemSet]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some((1..=n).collect());
    }
    let pa = profile(n, a);
    let pb = profile(n, b);
    let mut sa = pa.signature.clone();
    let mut sb = pb.signature.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let target: HashSet<ElemSet> = b.iter().copied().collect();

    // assign elements with the rarest signature first
    let mut order: Vec<usize> = (0..n).collect();
    let class_size = |e: usize| {
        pb.signature
            .iter()
            .filter(|s| **s == pa.signature[e])
            .count()
    };
    order.sort_by_key(|&e| (class_size(e), std::cmp::Reverse(pa.deg[e]), e));
    let mut position = vec![0usize; n];
    for (i, &e) in order.iter().enumerate() {
        position[e] = i;
    }
    // sets of `a` whose last element in assignment order is at each position
    let mut closing: Vec<Vec<ElemSet>> = vec![Vec::new(); n];
    for s in a {
        if let Some(last) = s.iter().map(|e| position[e - 1]).max() {
            closing[last].push(*s);
        }
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|e| {
            (0..n)
                .filter(|&f| pb.signature[f] == pa.signature[e])
                .collect()
        })
        .collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(
        0, &order, &candidates, &closing, &pa, &pb, &target, &mut map, &mut used,
    ) {
        Some(map.iter().map(|&x| x + 1).collect())
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    order: &[usize],
    candidates: &[Vec<usize>],
    closing: &[Vec<ElemSet>],
    pa: &Profile,
    pb: &Profile,
    target: &HashSet<ElemSet>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let e = order[depth];
    for &f in &candidates[e] {
        if used[f] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&g| pa.pair[e][g] == pb.pair[f][map[g]]);
        if !consistent {
            continue;
        }
        map[e] = f;
        used[f] = true;
        let covered = closing[depth].iter().all(|s| {
            let image = s
                .iter()
                .fold(ElemSet::EMPTY, |acc, x| acc.with(map[x - 1] + 1));
            target.contains(&image)
        });
        if covered
            && search(
                depth + 1,
                order,
                candidates,
                closing,
                pa,
                pb,
                target,
                map,
                used,
            )
        {
            return true;
        }
        used[f] = false;
        map[e] = usize::MAX;
    }
    false
}
