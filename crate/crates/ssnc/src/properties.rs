//! Structural recognizers: girth, m-freeness, exact-length path search, the
//! transitivity family, and the class profile used by reports.

use crate::digraph::{Digraph, Path, VertexSet};
use crate::error::GraphError;
use serde::Serialize;

/// Length of a shortest directed cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Girth {
    Finite(usize),
    Acyclic,
}

impl Girth {
    /// True when every directed cycle is longer than `m` (vacuously true for
    /// acyclic digraphs).
    pub fn greater_than(&self, m: usize) -> bool {
        match *self {
            Girth::Finite(g) => g > m,
            Girth::Acyclic => true,
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Girth::Finite(g) => s.serialize_u64(g as u64),
            Girth::Acyclic => s.serialize_str("acyclic"),
        }
    }
}

/// Largest m such that the digraph is m-free, i.e. girth minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxMFree {
    Finite(usize),
    Infinite,
}

impl Serialize for MaxMFree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            MaxMFree::Finite(m) => s.serialize_u64(m as u64),
            MaxMFree::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Shortest directed cycle length, by a BFS from each vertex back to itself.
///
/// The cycle through `s` has length dist(s, u) + 1 minimized over in-arcs
/// u -> s; taking the minimum over all s covers every cycle.
pub fn girth(d: &Digraph) -> Girth {
    let mut best: Option<usize> = None;
    for s in d.vertices() {
        for u in d.in_nbrs(s).expect("vertex in range").iter() {
            if let Some(dist) = d.dist(s, u).expect("vertices in range") {
                let cycle = dist + 1;
                if best.map_or(true, |b| cycle < b) {
                    best = Some(cycle);
                }
            }
        }
    }
    match best {
        Some(g) => Girth::Finite(g),
        None => Girth::Acyclic,
    }
}

/// True iff no directed cycle has length at most `m`. Oriented graphs are
/// always 2-free; acyclic digraphs are m-free for every m.
pub fn is_m_free(d: &Digraph, m: usize) -> Result<bool, GraphError> {
    if m < 1 {
        return Err(GraphError::BadParam("m-freeness needs m >= 1".into()));
    }
    Ok(girth(d).greater_than(m))
}

/// Searches for a simple directed path from `u` to `v` with exactly `k` arcs.
///
/// Depth-bounded DFS extending along ascending neighbor order, so the first
/// witness found is deterministic for a given digraph.
pub fn exists_path_of_length(
    d: &Digraph,
    u: usize,
    v: usize,
    k: usize,
) -> Result<Option<Path>, GraphError> {
    if u >= d.n() {
        return Err(GraphError::OutOfRange { vertex: u, n: d.n() });
    }
    if v >= d.n() {
        return Err(GraphError::OutOfRange { vertex: v, n: d.n() });
    }
    if u == v {
        return Err(GraphError::BadParam("path endpoints must differ".into()));
    }
    if k < 1 {
        return Err(GraphError::BadParam("path length must be at least 1".into()));
    }
    // A simple path with k arcs needs k+1 distinct vertices.
    if k + 1 > d.n() {
        return Ok(None);
    }
    match d.dist(u, v).expect("vertices in range") {
        None => return Ok(None),
        Some(dd) if dd > k => return Ok(None),
        _ => {}
    }
    let mut on_path = VertexSet::empty(d.n());
    on_path.insert(u);
    let mut stack = vec![u];
    if dfs_exact(d, v, k, &mut stack, &mut on_path) {
        Ok(Some(Path::new(stack)))
    } else {
        Ok(None)
    }
}

fn dfs_exact(
    d: &Digraph,
    target: usize,
    k: usize,
    stack: &mut Vec<usize>,
    on_path: &mut VertexSet,
) -> bool {
    let cur = *stack.last().expect("stack nonempty");
    let remaining = k - (stack.len() - 1);
    if remaining == 0 {
        return cur == target;
    }
    // Reaching the target early dead-ends: it may not be revisited.
    for w in d.out_nbrs_unchecked(cur).iter() {
        if on_path.contains(w) {
            continue;
        }
        if w == target && remaining != 1 {
            continue;
        }
        stack.push(w);
        on_path.insert(w);
        if dfs_exact(d, target, k, stack, on_path) {
            return true;
        }
        on_path.remove(w);
        stack.pop();
    }
    false
}

/// Violation of k-anti-transitivity: a length-k simple path from `tail` to
/// `head` together with the arc (tail, head).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AntiTransitivityWitness {
    pub tail: usize,
    pub head: usize,
    pub path: Path,
}

/// First violation in lexicographic arc order, or `None` when the digraph is
/// k-anti-transitive.
pub fn anti_transitivity_witness(
    d: &Digraph,
    k: usize,
) -> Result<Option<AntiTransitivityWitness>, GraphError> {
    if k < 2 {
        return Err(GraphError::BadParam("anti-transitivity needs k >= 2".into()));
    }
    for (u, v) in d.arcs() {
        if let Some(path) = exists_path_of_length(d, u, v, k)? {
            return Ok(Some(AntiTransitivityWitness { tail: u, head: v, path }));
        }
    }
    Ok(None)
}

pub fn is_k_anti_transitive(d: &Digraph, k: usize) -> Result<bool, GraphError> {
    Ok(anti_transitivity_witness(d, k)?.is_none())
}

/// Violation of k-transitivity (or of k-quasi-transitivity): a length-k path
/// whose endpoints lack the required adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitivityWitness {
    pub from: usize,
    pub to: usize,
    pub path: Path,
}

/// k-transitive: every length-k simple path u ~> v forces the arc u -> v.
pub fn transitivity_witness(
    d: &Digraph,
    k: usize,
) -> Result<Option<TransitivityWitness>, GraphError> {
    if k < 2 {
        return Err(GraphError::BadParam("transitivity needs k >= 2".into()));
    }
    for u in d.vertices() {
        for v in d.vertices() {
            if u == v || d.has_arc(u, v) {
                continue;
            }
            if let Some(path) = exists_path_of_length(d, u, v, k)? {
                return Ok(Some(TransitivityWitness { from: u, to: v, path }));
            }
        }
    }
    Ok(None)
}

pub fn is_k_transitive(d: &Digraph, k: usize) -> Result<bool, GraphError> {
    Ok(transitivity_witness(d, k)?.is_none())
}

/// k-quasi-transitive: endpoints of a length-k path must be adjacent in one
/// direction or the other.
pub fn quasi_transitivity_witness(
    d: &Digraph,
    k: usize,
) -> Result<Option<TransitivityWitness>, GraphError> {
    if k < 2 {
        return Err(GraphError::BadParam("quasi-transitivity needs k >= 2".into()));
    }
    for u in d.vertices() {
        for v in d.vertices() {
            if u == v || d.has_arc(u, v) || d.has_arc(v, u) {
                continue;
            }
            if let Some(path) = exists_path_of_length(d, u, v, k)? {
                return Ok(Some(TransitivityWitness { from: u, to: v, path }));
            }
        }
    }
    Ok(None)
}

pub fn is_k_quasi_transitive(d: &Digraph, k: usize) -> Result<bool, GraphError> {
    Ok(quasi_transitivity_witness(d, k)?.is_none())
}

/// First transitive triangle x -> y -> z with x -> z, scanning arcs (x, y)
/// lexicographically and completing with the smallest z.
pub fn find_transitive_triangle(d: &Digraph) -> Option<(usize, usize, usize)> {
    for (x, y) in d.arcs() {
        let common = d
            .out_nbrs_unchecked(y)
            .intersect(&d.out_nbrs_unchecked(x));
        if let Some(z) = common.first() {
            return Some((x, y, z));
        }
    }
    None
}

/// Membership probes across the class hierarchy for one digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassProfile {
    pub oriented: bool,
    pub girth: Girth,
    pub max_m_free: MaxMFree,
    /// (k, is k-anti-transitive) over the probe range.
    pub anti_transitive_for: Vec<(usize, bool)>,
    pub transitive_triangle_free: bool,
}

/// Profiles `d`, probing anti-transitivity for each k in `k_range`.
pub fn profile(
    d: &Digraph,
    k_range: std::ops::RangeInclusive<usize>,
) -> Result<ClassProfile, GraphError> {
    if k_range.is_empty() {
        return Err(GraphError::BadParam("empty anti-transitivity probe range".into()));
    }
    let g = girth(d);
    let max_m_free = match g {
        Girth::Finite(g) => MaxMFree::Finite(g - 1),
        Girth::Acyclic => MaxMFree::Infinite,
    };
    let mut anti = Vec::new();
    for k in k_range {
        anti.push((k, is_k_anti_transitive(d, k)?));
    }
    Ok(ClassProfile {
        oriented: true,
        girth: g,
        max_m_free,
        anti_transitive_for: anti,
        transitive_triangle_free: find_transitive_triangle(d).is_none(),
    })
}

/// Longest simple directed path inside `d[s]`, reported in original labels.
///
/// Exhaustive DFS; among maximum-length paths the lexicographically smallest
/// vertex sequence wins, making downstream choices reproducible. Returns the
/// empty path when `s` is empty.
pub fn longest_path_within(d: &Digraph, s: &VertexSet) -> (usize, Path) {
    let mut best: Vec<usize> = match s.first() {
        Some(v) => vec![v],
        None => return (0, Path::new(vec![])),
    };
    let mut stack: Vec<usize> = Vec::new();
    let mut on_path = VertexSet::empty(d.n());
    for start in s.iter() {
        stack.push(start);
        on_path.insert(start);
        extend_longest(d, s, &mut stack, &mut on_path, &mut best);
        on_path.remove(start);
        stack.pop();
    }
    (best.len() - 1, Path::new(best))
}

fn extend_longest(
    d: &Digraph,
    s: &VertexSet,
    stack: &mut Vec<usize>,
    on_path: &mut VertexSet,
    best: &mut Vec<usize>,
) {
    let cur = *stack.last().expect("stack nonempty");
    if stack.len() > best.len() || (stack.len() == best.len() && stack[..] < best[..]) {
        *best = stack.clone();
    }
    let mut nbrs = d.out_nbrs_unchecked(cur);
    nbrs.intersect_with(s);
    for w in nbrs.iter() {
        if on_path.contains(w) {
            continue;
        }
        stack.push(w);
        on_path.insert(w);
        extend_longest(d, s, stack, on_path, best);
        on_path.remove(w);
        stack.pop();
    }
}
