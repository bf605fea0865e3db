//! Immutable oriented-graph substrate: fixed-stride bitset adjacency rows
//! plus the vertex-set and path value types everything else is built on.

use crate::error::GraphError;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Hard cap on the vertex count accepted by [`Digraph::build`].
pub const VERTEX_CAP: usize = 1 << 14;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    (n + WORD_BITS - 1) / WORD_BITS
}

/// Set of vertices over a fixed ambient vertex count `n`.
///
/// Stored as packed 64-bit words; bits at positions `>= n` stay zero so word
/// level union/intersection/difference never need per-bit masking.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet { n, words: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet { n, words: vec![!0u64; words_for(n)] };
        s.mask_tail();
        s
    }

    pub fn from_members(n: usize, members: &[usize]) -> Result<Self, GraphError> {
        let mut s = VertexSet::empty(n);
        for &v in members {
            if v >= n {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        let mut s = VertexSet { n, words };
        s.mask_tail();
        s
    }

    /// Zeroes the bits past position `n` in the last word.
    fn mask_tail(&mut self) {
        let used = self.n % WORD_BITS;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.n == 0 {
            self.words.clear();
        }
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n, "vertex {v} outside ambient {}", self.n);
        self.words[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n, "vertex {v} outside ambient {}", self.n);
        self.words[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
    }

    #[inline]
    pub fn card(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD_BITS + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        VertexSet { n: self.n, words }
    }

    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        VertexSet { n: self.n, words }
    }

    pub fn minus(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.n, other.n);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        VertexSet { n: self.n, words }
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.mask_tail();
        s
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serializes as the sorted member list, keeping report output readable.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.card()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

/// Directed walk with pairwise-distinct vertices; `len()` counts arcs.
///
/// The empty path is permitted as the degenerate "no vertices available"
/// value returned by longest-path searches over an empty vertex set.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        Path { vertices }
    }

    /// Number of arcs traversed.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// True when the vertices are pairwise distinct and every consecutive
    /// pair is an arc of `d`.
    pub fn is_path_of(&self, d: &Digraph) -> bool {
        if self.vertices.iter().any(|&v| v >= d.n()) {
            return false;
        }
        let mut seen = VertexSet::empty(d.n());
        for &v in &self.vertices {
            if seen.contains(v) {
                return false;
            }
            seen.insert(v);
        }
        self.vertices.windows(2).all(|w| d.has_arc(w[0], w[1]))
    }
}

impl std::fmt::Debug for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Path(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Immutable oriented graph: no self-loops, no two-cycles.
///
/// Out- and in-adjacency are both materialized as bitset rows with a shared
/// word stride, so neighborhood unions/intersections run word-parallel.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    radj: Vec<u64>,
    m_arcs: usize,
}

impl Digraph {
    /// Validates and builds. Duplicate arcs collapse; a self-loop or an
    /// opposite-arc pair is rejected.
    pub fn build(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n > VERTEX_CAP {
            return Err(GraphError::TooLarge { n, cap: VERTEX_CAP });
        }
        let words = words_for(n);
        let mut g = Digraph {
            n,
            words,
            adj: vec![0; n * words],
            radj: vec![0; n * words],
            m_arcs: 0,
        };
        for &(u, v) in arcs {
            if u >= n {
                return Err(GraphError::OutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_arc(v, u) {
                return Err(GraphError::TwoCycle(v, u));
            }
            if !g.has_arc(u, v) {
                g.adj[u * words + v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
                g.radj[v * words + u / WORD_BITS] |= 1u64 << (u % WORD_BITS);
                g.m_arcs += 1;
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.m_arcs
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        self.adj[u * self.words + v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub(crate) fn out_row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn in_row(&self, v: usize) -> &[u64] {
        &self.radj[v * self.words..(v + 1) * self.words]
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::OutOfRange { vertex: v, n: self.n })
        }
    }

    /// Out-neighborhood N+(v).
    pub fn out_nbrs(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_words(self.n, self.out_row(v).to_vec()))
    }

    /// In-neighborhood N-(v).
    pub fn in_nbrs(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet::from_words(self.n, self.in_row(v).to_vec()))
    }

    /// Second out-neighborhood N++(v): vertices at directed distance
    /// exactly 2 from `v`. Computed as the union of out-rows over N+(v),
    /// minus N+(v) and v itself.
    pub fn second_out_nbrs(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        let mut acc = vec![0u64; self.words];
        let first = self.out_nbrs(v)?;
        for u in first.iter() {
            for (a, b) in acc.iter_mut().zip(self.out_row(u)) {
                *a |= b;
            }
        }
        let mut second = VertexSet::from_words(self.n, acc);
        second.subtract(&first);
        second.remove_if_present(v);
        Ok(second)
    }

    #[inline]
    pub fn out_deg(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.out_row(v).iter().map(|w| w.count_ones() as usize).sum())
    }

    #[inline]
    pub fn in_deg(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.in_row(v).iter().map(|w| w.count_ones() as usize).sum())
    }

    pub fn second_out_deg(&self, v: usize) -> Result<usize, GraphError> {
        Ok(self.second_out_nbrs(v)?.card())
    }

    /// Vertex of minimum out-degree, ties broken toward the smallest index.
    /// Returns `(vertex, degree)`.
    pub fn min_out_deg_vertex(&self) -> Result<(usize, usize), GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut best = (0usize, usize::MAX);
        for v in 0..self.n {
            let d = self.out_deg(v)?;
            if d < best.1 {
                best = (v, d);
            }
        }
        Ok(best)
    }

    /// Subgraph induced by `s`, with vertices relabeled to `0..s.card()` in
    /// ascending original order. `labels[new] == old`; the inverse map is the
    /// rank of `old` within `s`.
    pub fn induced(&self, s: &VertexSet) -> Result<(Digraph, Vec<usize>), GraphError> {
        if s.ambient() != self.n {
            return Err(GraphError::BadParam(format!(
                "vertex set over ambient {} applied to digraph on {}",
                s.ambient(),
                self.n
            )));
        }
        let labels: Vec<usize> = s.iter().collect();
        let mut arcs = Vec::new();
        for (iu, &u) in labels.iter().enumerate() {
            for (iv, &v) in labels.iter().enumerate() {
                if iu != iv && self.has_arc(u, v) {
                    arcs.push((iu, iv));
                }
            }
        }
        let g = Digraph::build(labels.len(), &arcs)?;
        Ok((g, labels))
    }

    /// Directed distance from `u` to `v` by bitset BFS; `None` if unreachable.
    pub fn dist(&self, u: usize, v: usize) -> Result<Option<usize>, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Some(0));
        }
        let mut visited = VertexSet::empty(self.n);
        visited.insert(u);
        let mut frontier = visited.clone();
        let mut depth = 0usize;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = vec![0u64; self.words];
            for w in frontier.iter() {
                for (a, b) in next.iter_mut().zip(self.out_row(w)) {
                    *a |= b;
                }
            }
            let mut next = VertexSet::from_words(self.n, next);
            next.subtract(&visited);
            if next.contains(v) {
                return Ok(Some(depth));
            }
            visited.union_with(&next);
            frontier = next;
        }
        Ok(None)
    }

    /// |N+(v) ∩ s|.
    pub fn restricted_out_deg(&self, v: usize, s: &VertexSet) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        if s.ambient() != self.n {
            return Err(GraphError::BadParam(format!(
                "vertex set over ambient {} applied to digraph on {}",
                s.ambient(),
                self.n
            )));
        }
        Ok(self
            .out_row(v)
            .iter()
            .zip(s.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// N+(v) ∩ s as a set.
    pub fn out_nbrs_in(&self, v: usize, s: &VertexSet) -> Result<VertexSet, GraphError> {
        let mut nb = self.out_nbrs(v)?;
        if s.ambient() != self.n {
            return Err(GraphError::BadParam(format!(
                "vertex set over ambient {} applied to digraph on {}",
                s.ambient(),
                self.n
            )));
        }
        nb.intersect_with(s);
        Ok(nb)
    }

    /// Arcs in lexicographic (tail, head) order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.out_nbrs_unchecked(u)
                .to_vec()
                .into_iter()
                .map(move |v| (u, v))
        })
    }

    #[inline]
    pub(crate) fn out_nbrs_unchecked(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.out_row(v).to_vec())
    }
}

impl VertexSet {
    #[inline]
    fn remove_if_present(&mut self, v: usize) {
        if v < self.n {
            self.remove(v);
        }
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, arcs=[", self.n)?;
        for (i, (u, v)) in self.arcs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        Digraph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tt3() -> Digraph {
        Digraph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn c5() -> Digraph {
        Digraph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn build_rejects_self_loop() {
        assert_eq!(Digraph::build(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn build_rejects_two_cycle() {
        assert_eq!(
            Digraph::build(2, &[(0, 1), (1, 0)]),
            Err(GraphError::TwoCycle(0, 1))
        );
    }

    #[test]
    fn build_rejects_out_of_range() {
        assert_eq!(
            Digraph::build(2, &[(0, 2)]),
            Err(GraphError::OutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn build_collapses_duplicate_arcs() {
        let g = Digraph::build(3, &[(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn empty_graph_builds() {
        let g = Digraph::build(0, &[]).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.min_out_deg_vertex(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn out_nbrs_examples() {
        assert_eq!(c3().out_nbrs(0).unwrap().to_vec(), vec![1]);
        assert_eq!(tt3().out_nbrs(0).unwrap().to_vec(), vec![1, 2]);
        assert!(tt3().out_nbrs(2).unwrap().is_empty());
    }

    #[test]
    fn second_out_nbrs_examples() {
        // C3: N++(0) = {2}; TT3: N++(0) = {} because 2 is already a first
        // neighbor; C5: N++(0) = {2}.
        assert_eq!(c3().second_out_nbrs(0).unwrap().to_vec(), vec![2]);
        assert!(tt3().second_out_nbrs(0).unwrap().is_empty());
        assert_eq!(c5().second_out_nbrs(0).unwrap().to_vec(), vec![2]);
    }

    #[test]
    fn second_out_excludes_self_on_short_cycles() {
        // In C3 the two-step walk from 0 lands on 2 only; the three-step
        // return to 0 is distance 3, not 2.
        let g = c3();
        assert!(!g.second_out_nbrs(0).unwrap().contains(0));
    }

    #[test]
    fn degrees() {
        let g = tt3();
        assert_eq!(g.out_deg(0).unwrap(), 2);
        assert_eq!(g.out_deg(2).unwrap(), 0);
        assert_eq!(g.in_deg(2).unwrap(), 2);
        assert_eq!(g.second_out_deg(0).unwrap(), 0);
    }

    #[test]
    fn min_out_deg_tie_breaks_to_smallest_index() {
        // All of C3 has out-degree 1; vertex 0 wins the tie.
        assert_eq!(c3().min_out_deg_vertex().unwrap(), (0, 1));
        // TT3: vertex 2 is the unique sink.
        assert_eq!(tt3().min_out_deg_vertex().unwrap(), (2, 0));
        let single_arc = Digraph::build(3, &[(0, 1)]).unwrap();
        assert_eq!(single_arc.min_out_deg_vertex().unwrap(), (1, 0));
    }

    #[test]
    fn induced_full_set_is_identity() {
        let g = c5();
        let (h, labels) = g.induced(&VertexSet::full(5)).unwrap();
        assert_eq!(h, g);
        assert_eq!(labels, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn induced_relabels_ascending() {
        let g = c5();
        let s = VertexSet::from_members(5, &[1, 3, 4]).unwrap();
        let (h, labels) = g.induced(&s).unwrap();
        assert_eq!(labels, vec![1, 3, 4]);
        // Only 3->4 survives: new labels 1->2.
        assert_eq!(h.arc_count(), 1);
        assert!(h.has_arc(1, 2));
    }

    #[test]
    fn dist_examples() {
        let g = c5();
        assert_eq!(g.dist(0, 3).unwrap(), Some(3));
        assert_eq!(g.dist(0, 0).unwrap(), Some(0));
        let h = tt3();
        assert_eq!(h.dist(2, 0).unwrap(), None);
    }

    #[test]
    fn restricted_out_deg_examples() {
        let g = tt3();
        let s = VertexSet::from_members(3, &[1, 2]).unwrap();
        assert_eq!(g.restricted_out_deg(0, &s).unwrap(), 2);
        let t = VertexSet::from_members(3, &[2]).unwrap();
        assert_eq!(g.restricted_out_deg(0, &t).unwrap(), 1);
    }

    #[test]
    fn arcs_iterate_lexicographically() {
        let g = tt3();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_members(130, &[0, 64, 129]).unwrap();
        let b = VertexSet::from_members(130, &[64, 100]).unwrap();
        assert_eq!(a.union(&b).card(), 4);
        assert_eq!(a.intersect(&b).to_vec(), vec![64]);
        assert_eq!(a.minus(&b).to_vec(), vec![0, 129]);
        assert_eq!(a.complement().card(), 127);
        assert_eq!(a.first(), Some(0));
        assert!(b.is_subset_of(&a.union(&b)));
    }

    #[test]
    fn vertex_cap_enforced() {
        assert!(matches!(
            Digraph::build(VERTEX_CAP + 1, &[]),
            Err(GraphError::TooLarge { .. })
        ));
        // The spec floor: at least 1024 vertices must be adressable.
        let g = Digraph::build(1024, &[(0, 1023)]).unwrap();
        assert!(g.has_arc(0, 1023));
    }

    #[test]
    fn path_validation() {
        let g = c5();
        assert!(Path::new(vec![0, 1, 2]).is_path_of(&g));
        assert!(!Path::new(vec![0, 2]).is_path_of(&g));
        assert!(!Path::new(vec![0, 1, 0]).is_path_of(&g));
        assert_eq!(Path::new(vec![3]).len(), 0);
        assert_eq!(Path::new(vec![]).len(), 0);
    }
}
