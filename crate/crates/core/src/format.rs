//! Plain-text formats for matroids, graphs, set systems and lattice path pairs.

use std::fmt::Write as _;

use crate::bitset::ElemSet;
use crate::constructions::{LatticePathPair, MultiGraph, SetSystem};
use crate::error::{Error, Result};
use crate::matroid::Matroid;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped, paired with their 1-indexed line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line, format!("expected a number, found {tok:?}")))
        })
        .collect()
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| parse_err(1, format!("missing `{keyword}` header")))?;
    let mut toks = line.split_whitespace();
    if toks.next() != Some(keyword) {
        return Err(parse_err(no, format!("expected `{keyword}` header")));
    }
    Ok((no, toks.collect()))
}

fn header_numbers(no: usize, toks: &[&str], count: usize) -> Result<Vec<usize>> {
    let nums = parse_numbers(no, &toks.join(" "))?;
    if nums.len() != count {
        return Err(parse_err(no, format!("header needs {count} numbers")));
    }
    Ok(nums)
}

/// `matroid <n> <r>` followed by one ascending basis per line.
pub fn write_matroid(m: &Matroid) -> String {
    let mut out = format!("matroid {} {}\n", m.n(), m.rank());
    for b in m.bases() {
        let elems: Vec<String> = b.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", elems.join(" "));
    }
    out
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "matroid")?;
    let nums = header_numbers(no, &toks, 2)?;
    let (n, r) = (nums[0], nums[1]);
    let mut bases = Vec::new();
    for (no, line) in lines {
        let elems = parse_numbers(no, line)?;
        if elems.len() != r {
            return Err(parse_err(
                no,
                format!("basis has {} elements, rank is {r}", elems.len()),
            ));
        }
        if let Some(&e) = elems.iter().find(|&&e| e == 0 || e > n) {
            return Err(parse_err(no, format!("element {e} outside 1..={n}")));
        }
        bases.push(ElemSet::from_elems(elems));
    }
    if r == 0 && bases.is_empty() {
        bases.push(ElemSet::EMPTY);
    }
    Matroid::from_bases(n, bases)
}

pub fn write_graph(g: &MultiGraph) -> String {
    let mut out = format!("graph {} {}\n", g.vertex_count(), g.edge_count());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "graph")?;
    let nums = header_numbers(no, &toks, 2)?;
    let (v, e) = (nums[0], nums[1]);
    let mut edges = Vec::with_capacity(e);
    let mut last = no;
    for (no, line) in lines {
        let ends = parse_numbers(no, line)?;
        if ends.len() != 2 {
            return Err(parse_err(no, "edge line needs two vertices"));
        }
        if ends.iter().any(|&x| x == 0 || x > v) {
            return Err(parse_err(no, format!("vertex outside 1..={v}")));
        }
        edges.push((ends[0], ends[1]));
        last = no;
    }
    if edges.len() != e {
        return Err(parse_err(
            last,
            format!("header promises {e} edges, found {}", edges.len()),
        ));
    }
    MultiGraph::new(v, edges)
}

pub fn write_set_system(s: &SetSystem) -> String {
    let mut out = format!("sys {} {}\n", s.n(), s.family().len());
    for a in s.family() {
        if a.is_empty() {
            out.push_str("-\n");
            continue;
        }
        let elems: Vec<String> = a.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", elems.join(" "));
    }
    out
}

/// Members are listed one per line; an empty member must be written as a lone `-`.
pub fn parse_set_system(text: &str) -> Result<SetSystem> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "sys")?;
    let nums = header_numbers(no, &toks, 2)?;
    let (n, k) = (nums[0], nums[1]);
    let mut family = Vec::with_capacity(k);
    let mut last = no;
    for (no, line) in lines {
        let elems = if line == "-" {
            Vec::new()
        } else {
            parse_numbers(no, line)?
        };
        if let Some(&e) = elems.iter().find(|&&e| e == 0 || e > n) {
            return Err(parse_err(no, format!("element {e} outside 1..={n}")));
        }
        family.push(ElemSet::from_elems(elems));
        last = no;
    }
    if family.len() != k {
        return Err(parse_err(
            last,
            format!("header promises {k} sets, found {}", family.len()),
        ));
    }
    SetSystem::new(n, family)
}

pub fn write_lattice_paths(l: &LatticePathPair) -> String {
    format!("lpm {} {}\n", l.lower_path(), l.upper_path())
}

pub fn parse_lattice_paths(text: &str) -> Result<LatticePathPair> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "lpm")?;
    if toks.len() != 2 {
        return Err(parse_err(no, "expected `lpm <P> <Q>`"));
    }
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "unexpected content after lattice paths"));
    }
    LatticePathPair::new(toks[0], toks[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{named_atlas, uniform};

    #[test]
    fn matroid_round_trip() {
        for m in [named_atlas("W3").unwrap(), uniform(0, 3).unwrap(), uniform(3, 3).unwrap()] {
            let text = write_matroid(&m);
            let back = parse_matroid(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(write_matroid(&back), text);
        }
    }

    #[test]
    fn matroid_parse_errors_carry_lines() {
        let err = parse_matroid("# header next\nmatroid 4 2\n1 2\n1 x\n").unwrap_err();
        assert_eq!(err, parse_err(4, "expected a number, found \"x\""));
        let err = parse_matroid("matroid 4 2\n1 2\n3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_matroid("matroid 4 2\n1 2\n3 4\n").unwrap_err();
        assert!(matches!(err, Error::ExchangeViolation { .. }));
    }

    #[test]
    fn graph_and_system_round_trip() {
        let g = parse_graph("graph 3 4\n1 2\n2 3\n3 1\n2 2 # loop\n").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert!(matches!(
            parse_graph("graph 2 1\n1 3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        let s = parse_set_system("sys 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(parse_set_system(&write_set_system(&s)).unwrap(), s);
        let l = parse_lattice_paths("lpm EENEN NENEE\n").unwrap();
        assert_eq!(parse_lattice_paths(&write_lattice_paths(&l)).unwrap(), l);
    }
}
