//! Finite ultragraphs.
//!
//! An ultragraph is a directed graph whose edges carry a *set* of range
//! vertices instead of a single target. This module holds the graph
//! representation, validation, the generalized-vertex family (the closure
//! of singletons and edge ranges under union and intersection), and the
//! graph-theoretic decision procedures everything else builds on:
//! reachability, cycles and their exits, and first-return analysis.

use std::collections::btree_set;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a vertex within its ultragraph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

/// Index of an edge within its ultragraph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite set of vertices.
///
/// The empty set is representable: it stands for the zero projection in
/// algebra contexts and for "undefined" products of generalized vertices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct VertexSet(BTreeSet<VertexId>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(BTreeSet::from([v]))
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0.insert(v);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersect(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<T: IntoIterator<Item = VertexId>>(iter: T) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl IntoIterator for VertexSet {
    type Item = VertexId;
    type IntoIter = btree_set::IntoIter<VertexId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// A finite edge word, possibly empty. Path validity (each edge's source
/// lying in the previous edge's range) is a property relative to a graph
/// and is checked by [`Ultragraph::is_valid_path`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PathWord(Vec<EdgeId>);

impl PathWord {
    pub fn empty() -> Self {
        PathWord(Vec::new())
    }

    pub fn new(edges: Vec<EdgeId>) -> Self {
        PathWord(edges)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<EdgeId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<EdgeId> {
        self.0.last().copied()
    }

    pub fn get(&self, i: usize) -> Option<EdgeId> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn push(&mut self, e: EdgeId) {
        self.0.push(e);
    }

    pub fn concat(&self, other: &PathWord) -> PathWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        PathWord(v)
    }

    pub fn prefix(&self, n: usize) -> PathWord {
        PathWord(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> PathWord {
        PathWord(self.0[n.min(self.0.len())..].to_vec())
    }
}

impl From<Vec<EdgeId>> for PathWord {
    fn from(v: Vec<EdgeId>) -> Self {
        PathWord(v)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Edge {
    name: String,
    source: VertexId,
    range: VertexSet,
}

/// A finite ultragraph: named vertices, and edges with one source vertex
/// and a nonempty set of range vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ultragraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    // out_edges[v] = edges with source v, in id order
    out_edges: Vec<Vec<EdgeId>>,
}

/// A structural defect found by [`Ultragraph::validate`].
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum Violation {
    #[error("edge {edge} has an empty range")]
    EmptyRange { edge: String },
    #[error("edge {edge} has source vertex index {index} out of bounds")]
    SourceOutOfBounds { edge: String, index: u32 },
    #[error("edge {edge} range cites vertex index {index} out of bounds")]
    RangeOutOfBounds { edge: String, index: u32 },
    #[error("duplicate vertex name {name}")]
    DuplicateVertexName { name: String },
    #[error("duplicate edge name {name}")]
    DuplicateEdgeName { name: String },
}

/// An error raised while assembling an ultragraph from named parts.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum BuildError {
    #[error("unknown vertex name {0}")]
    UnknownVertex(String),
    #[error("invalid ultragraph: {0:?}")]
    Invalid(Vec<Violation>),
}

impl Ultragraph {
    /// Assemble a graph from raw parts without validation. Use
    /// [`Ultragraph::validate`] to inspect the result.
    pub fn from_parts(
        vertex_names: Vec<String>,
        edges: Vec<(String, VertexId, VertexSet)>,
    ) -> Ultragraph {
        let nv = vertex_names.len();
        let mut out_edges = vec![Vec::new(); nv];
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(name, source, range)| Edge { name, source, range })
            .collect();
        for (i, e) in edges.iter().enumerate() {
            if e.source.index() < nv {
                out_edges[e.source.index()].push(EdgeId(i as u32));
            }
        }
        Ultragraph { vertex_names, edges, out_edges }
    }

    /// Build a validated graph from vertex names and `(edge, source,
    /// range)` triples of names.
    pub fn new(vertices: &[&str], edges: &[(&str, &str, &[&str])]) -> Result<Ultragraph, BuildError> {
        let lookup: BTreeMap<&str, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (*n, VertexId(i as u32)))
            .collect();
        let resolve = |name: &str| {
            lookup
                .get(name)
                .copied()
                .ok_or_else(|| BuildError::UnknownVertex(name.to_string()))
        };
        let mut parts = Vec::new();
        for (name, src, range) in edges {
            let source = resolve(src)?;
            let range: VertexSet = range
                .iter()
                .map(|v| resolve(v))
                .collect::<Result<_, _>>()?;
            parts.push((name.to_string(), source, range));
        }
        let g = Ultragraph::from_parts(vertices.iter().map(|s| s.to_string()).collect(), parts);
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(BuildError::Invalid(violations))
        }
    }

    /// Check every structural invariant, reporting each defect.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let nv = self.vertex_names.len() as u32;
        let mut seen = BTreeSet::new();
        for name in &self.vertex_names {
            if !seen.insert(name.clone()) {
                out.push(Violation::DuplicateVertexName { name: name.clone() });
            }
        }
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            if !seen.insert(e.name.clone()) {
                out.push(Violation::DuplicateEdgeName { name: e.name.clone() });
            }
            if e.range.is_empty() {
                out.push(Violation::EmptyRange { edge: e.name.clone() });
            }
            if e.source.0 >= nv {
                out.push(Violation::SourceOutOfBounds { edge: e.name.clone(), index: e.source.0 });
            }
            for v in e.range.iter() {
                if v.0 >= nv {
                    out.push(Violation::RangeOutOfBounds { edge: e.name.clone(), index: v.0 });
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(|i| EdgeId(i as u32))
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].source
    }

    pub fn range(&self, e: EdgeId) -> &VertexSet {
        &self.edges[e.index()].range
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    pub fn full_vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Vertices emitting no edge.
    pub fn sinks(&self) -> VertexSet {
        self.vertices()
            .filter(|v| self.out_edges(*v).is_empty())
            .collect()
    }

    /// Vertices emitting at least one (and, the graph being finite,
    /// finitely many) edges.
    pub fn regular_vertices(&self) -> VertexSet {
        self.vertices()
            .filter(|v| !self.out_edges(*v).is_empty())
            .collect()
    }

    pub fn is_sink_free(&self) -> bool {
        self.sinks().is_empty()
    }

    /// The edges emitted by a vertex set: `{e | s(e) in A}`.
    pub fn epsilon(&self, a: &VertexSet) -> BTreeSet<EdgeId> {
        self.edge_ids().filter(|e| a.contains(self.source(*e))).collect()
    }

    /// The generalized-vertex family: the closure of all singletons and all
    /// edge ranges under pairwise union and intersection, with the empty
    /// set dropped. Computed as a fixed point, not assumed.
    pub fn generalized_vertices(&self) -> Vec<VertexSet> {
        let mut family: BTreeSet<VertexSet> = BTreeSet::new();
        for v in self.vertices() {
            family.insert(VertexSet::singleton(v));
        }
        for e in self.edge_ids() {
            family.insert(self.range(e).clone());
        }
        family.remove(&VertexSet::new());
        loop {
            let mut fresh = Vec::new();
            for a in &family {
                for b in &family {
                    let u = a.union(b);
                    if !family.contains(&u) {
                        fresh.push(u);
                    }
                    let i = a.intersect(b);
                    if !i.is_empty() && !family.contains(&i) {
                        fresh.push(i);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            family.extend(fresh);
        }
        family.into_iter().collect()
    }

    /// Word validity: consecutive sources must lie in the previous ranges.
    pub fn is_valid_path(&self, word: &PathWord) -> bool {
        for e in word.iter() {
            if e.index() >= self.edges.len() {
                return false;
            }
        }
        word.as_slice()
            .windows(2)
            .all(|w| self.range(w[0]).contains(self.source(w[1])))
    }

    /// Source vertex of a nonempty word.
    pub fn path_source(&self, word: &PathWord) -> Option<VertexId> {
        word.first().map(|e| self.source(e))
    }

    /// Range set of a nonempty word (the range of its last edge).
    pub fn path_range(&self, word: &PathWord) -> Option<&VertexSet> {
        word.last().map(|e| self.range(e))
    }

    /// `w >= v`: some path starts at `w` with `v` in its range. Length-0
    /// paths make the relation reflexive.
    pub fn reaches(&self, w: VertexId, v: VertexId) -> bool {
        self.reachable_from(w).contains(v)
    }

    /// All vertices reachable from `w`, including `w` itself.
    pub fn reachable_from(&self, w: VertexId) -> VertexSet {
        let mut seen = VertexSet::singleton(w);
        let mut queue = VecDeque::from([w]);
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                for t in self.range(e).iter() {
                    if !seen.contains(t) {
                        seen.insert(t);
                        queue.push_back(t);
                    }
                }
            }
        }
        seen
    }

    /// A cycle is a nonempty valid word whose source lies in its range.
    pub fn is_cycle(&self, word: &PathWord) -> Result<bool, PathError> {
        if word.is_empty() || !self.is_valid_path(word) {
            return Err(PathError::NotAPath);
        }
        let s = self.source(word.first().unwrap());
        Ok(self.path_range(word).unwrap().contains(s))
    }

    /// Exits of a cycle: an edge leaving some intermediate range other than
    /// the cyclic successor, or a sink inside some intermediate range.
    /// Indices are 0-based positions into the word; the successor of the
    /// last position wraps around to the first edge.
    pub fn cycle_exits(&self, word: &PathWord) -> Result<Vec<Exit>, PathError> {
        if !self.is_cycle(word)? {
            return Err(PathError::NotACycle);
        }
        let sinks = self.sinks();
        let mut out = Vec::new();
        let n = word.len();
        for i in 0..n {
            let range = self.range(word.get(i).unwrap());
            let successor = word.get((i + 1) % n).unwrap();
            for e in self.edge_ids() {
                if range.contains(self.source(e)) && e != successor {
                    out.push(Exit::Edge { at: i, edge: e });
                }
            }
            for v in range.iter() {
                if sinks.contains(v) {
                    out.push(Exit::Sink { at: i, vertex: v });
                }
            }
        }
        Ok(out)
    }

    /// Classify the first-return language at `v` into none, exactly one,
    /// or at least two members.
    ///
    /// A first-return path based at `v` is a cycle at `v` none of whose
    /// internal edge sources revisits `v`. The language may be infinite;
    /// the classification works on the edge automaton (initial edges leave
    /// `v`, transitions forbid source `v`, accepting edges return to `v`):
    /// a cycle among useful states makes the language infinite, otherwise
    /// the trimmed automaton is acyclic and accepted paths are counted
    /// directly.
    pub fn first_return(&self, v: VertexId) -> FirstReturnVerdict {
        let m = self.edge_count();
        let initial: Vec<usize> = self
            .edge_ids()
            .filter(|e| self.source(*e) == v)
            .map(|e| e.index())
            .collect();
        let accepting: Vec<bool> = self
            .edge_ids()
            .map(|e| self.range(e).contains(v))
            .collect();
        let mut succ = vec![Vec::new(); m];
        let mut pred = vec![Vec::new(); m];
        for e in self.edge_ids() {
            for f in self.edge_ids() {
                if self.source(f) != v && self.range(e).contains(self.source(f)) {
                    succ[e.index()].push(f.index());
                    pred[f.index()].push(e.index());
                }
            }
        }

        let accessible = breadth_first(m, &initial, &succ);
        let acc_starts: Vec<usize> = (0..m).filter(|&i| accepting[i]).collect();
        let coaccessible = breadth_first(m, &acc_starts, &pred);
        let useful: Vec<bool> = (0..m).map(|i| accessible[i] && coaccessible[i]).collect();
        if !useful.iter().any(|&u| u) {
            return FirstReturnVerdict::None;
        }

        if let Some(cycle_node) = find_cycle_node(m, &useful, &succ) {
            // Infinite language: exhibit two distinct accepted paths by
            // routing through a cycle 0 and 1 times.
            let to_u = shortest_path(m, &initial, &succ, &useful, |n| n == cycle_node)
                .expect("cycle node is accessible");
            let around = shortest_loop(m, cycle_node, &succ, &useful);
            let finish = shortest_path(m, &[cycle_node], &succ, &useful, |n| accepting[n])
                .expect("cycle node is coaccessible");
            let mut w1 = to_u.clone();
            w1.extend_from_slice(&finish[1..]);
            let mut w2 = to_u;
            w2.extend_from_slice(&around[1..]);
            w2.extend_from_slice(&finish[1..]);
            return FirstReturnVerdict::TwoOrMore(to_word(&w1), to_word(&w2));
        }

        // Acyclic useful automaton: enumerate accepted paths, stopping at 2.
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = initial
            .iter()
            .filter(|&&s| useful[s])
            .map(|&s| vec![s])
            .collect();
        stack.sort();
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if accepting[last] {
                found.push(path.clone());
                if found.len() == 2 {
                    break;
                }
            }
            for &n in &succ[last] {
                if useful[n] {
                    let mut next = path.clone();
                    next.push(n);
                    stack.push(next);
                }
            }
        }
        match found.len() {
            0 => FirstReturnVerdict::None,
            1 => FirstReturnVerdict::ExactlyOne(to_word(&found[0])),
            _ => FirstReturnVerdict::TwoOrMore(to_word(&found[0]), to_word(&found[1])),
        }
    }
}

fn to_word(nodes: &[usize]) -> PathWord {
    PathWord::new(nodes.iter().map(|&i| EdgeId(i as u32)).collect())
}

fn breadth_first(m: usize, starts: &[usize], adj: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; m];
    let mut queue: VecDeque<usize> = starts.iter().copied().collect();
    for &s in starts {
        seen[s] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &n in &adj[u] {
            if !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    seen
}

/// Some node lying on a cycle of the subgraph induced by `alive`, if any.
fn find_cycle_node(m: usize, alive: &[bool], succ: &[Vec<usize>]) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; m];
    for start in 0..m {
        if !alive[start] || color[start] != Color::White {
            continue;
        }
        // Iterative DFS with an explicit edge stack.
        let mut stack = vec![(start, 0usize)];
        color[start] = Color::Gray;
        while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
            if *idx < succ[node].len() {
                let next = succ[node][*idx];
                *idx += 1;
                if !alive[next] {
                    continue;
                }
                match color[next] {
                    Color::Gray => return Some(next),
                    Color::White => {
                        color[next] = Color::Gray;
                        stack.push((next, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color[node] = Color::Black;
                stack.pop();
            }
        }
    }
    None
}

/// Shortest node sequence from any start to a goal within `alive`.
fn shortest_path(
    m: usize,
    starts: &[usize],
    succ: &[Vec<usize>],
    alive: &[bool],
    goal: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for &s in starts {
        if alive[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if goal(u) {
            let mut path = vec![u];
            let mut cur = u;
            while let Some(p) = parent[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &n in &succ[u] {
            if alive[n] && !seen[n] {
                seen[n] = true;
                parent[n] = Some(u);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Shortest nonempty loop `u -> ... -> u` within `alive`; the caller
/// guarantees one exists.
fn shortest_loop(m: usize, u: usize, succ: &[Vec<usize>], alive: &[bool]) -> Vec<usize> {
    for &n in &succ[u] {
        if n == u {
            return vec![u, u];
        }
    }
    let starts: Vec<usize> = succ[u].iter().copied().filter(|&n| alive[n]).collect();
    let back = shortest_path(m, &starts, succ, alive, |n| n == u).expect("loop exists");
    let mut path = vec![u];
    path.extend_from_slice(&back);
    path
}

/// Classification of the first-return language at a vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FirstReturnVerdict {
    None,
    ExactlyOne(PathWord),
    TwoOrMore(PathWord, PathWord),
}

/// An exit of a cycle, with the 0-based position that witnesses it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Exit {
    Edge { at: usize, edge: EdgeId },
    Sink { at: usize, vertex: VertexId },
}

/// Errors for path-shaped inputs.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum PathError {
    #[error("word is not a valid path")]
    NotAPath,
    #[error("word is not a cycle")]
    NotACycle,
    #[error("comparison of unrelated aperiodic streams is unsupported")]
    UnsupportedComparison,
    #[error("invalid infinite path: {0}")]
    InvalidInfinite(String),
}

impl fmt::Display for Ultragraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ultragraph({} vertices, {} edges)", self.vertex_count(), self.edge_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn validate_well_formed() {
        let g = samples::fan_and_loop();
        assert!(g.validate().is_empty());
    }

    #[test]
    fn validate_reports_empty_range() {
        let g = Ultragraph::from_parts(
            vec!["v".into()],
            vec![("e".into(), VertexId(0), VertexSet::new())],
        );
        assert_eq!(g.validate(), vec![Violation::EmptyRange { edge: "e".into() }]);
    }

    #[test]
    fn validate_reports_undeclared_vertex() {
        let g = Ultragraph::from_parts(
            vec!["v".into()],
            vec![("e".into(), VertexId(0), VertexSet::singleton(VertexId(5)))],
        );
        assert_eq!(
            g.validate(),
            vec![Violation::RangeOutOfBounds { edge: "e".into(), index: 5 }]
        );
    }

    #[test]
    fn sinks_and_regular_partition() {
        let g = samples::fan_and_loop();
        assert!(g.sinks().is_empty());
        assert_eq!(g.regular_vertices(), g.full_vertex_set());

        let g = samples::single_arrow();
        let w = g.vertex_by_name("w").unwrap();
        assert_eq!(g.sinks(), VertexSet::singleton(w));
        assert_eq!(
            g.regular_vertices(),
            VertexSet::singleton(g.vertex_by_name("v").unwrap())
        );

        let lone = Ultragraph::new(&["v"], &[]).unwrap();
        assert_eq!(lone.sinks(), lone.full_vertex_set());
    }

    #[test]
    fn epsilon_scans_sources() {
        let g = samples::fan_and_loop();
        let e = g.edge_by_name("e").unwrap();
        let f = g.edge_by_name("f").unwrap();
        let w = g.vertex_by_name("w").unwrap();
        assert_eq!(g.epsilon(&g.full_vertex_set()), BTreeSet::from([e, f]));
        assert_eq!(g.epsilon(&VertexSet::new()), BTreeSet::new());
        assert_eq!(g.epsilon(&VertexSet::singleton(w)), BTreeSet::from([f]));
    }

    #[test]
    fn generalized_vertices_of_fixtures() {
        let g = samples::fan_and_loop();
        let v = g.vertex_by_name("v").unwrap();
        let w = g.vertex_by_name("w").unwrap();
        let fam = g.generalized_vertices();
        assert_eq!(
            fam,
            vec![
                VertexSet::singleton(v),
                VertexSet::from_iter([v, w]),
                VertexSet::singleton(w),
            ]
        );

        let loop_g = samples::single_loop();
        assert_eq!(loop_g.generalized_vertices().len(), 1);
    }

    #[test]
    fn generalized_vertices_closure_matches_power_set() {
        // On any graph whose singletons are all present, the closure is the
        // full power set minus the empty set.
        let g = Ultragraph::new(
            &["a", "b", "c"],
            &[("e", "a", &["b", "c"]), ("f", "b", &["a"])],
        )
        .unwrap();
        let fam = g.generalized_vertices();
        assert_eq!(fam.len(), 7);
    }

    #[test]
    fn reaches_follows_ranges() {
        let g = samples::fan_and_loop();
        let v = g.vertex_by_name("v").unwrap();
        let w = g.vertex_by_name("w").unwrap();
        assert!(g.reaches(v, w));
        assert!(!g.reaches(w, v));
        assert!(g.reaches(w, w));
    }

    #[test]
    fn cycles_and_exits() {
        let g = samples::fan_and_loop();
        let e = g.edge_by_name("e").unwrap();
        let f = g.edge_by_name("f").unwrap();

        let fw = PathWord::new(vec![f]);
        assert!(g.is_cycle(&fw).unwrap());
        assert_eq!(g.cycle_exits(&fw).unwrap(), vec![]);

        let ew = PathWord::new(vec![e]);
        assert!(g.is_cycle(&ew).unwrap());
        assert_eq!(g.cycle_exits(&ew).unwrap(), vec![Exit::Edge { at: 0, edge: f }]);

        let g4 = samples::single_arrow();
        let e4 = g4.edge_by_name("e").unwrap();
        assert!(!g4.is_cycle(&PathWord::new(vec![e4])).unwrap());
    }

    #[test]
    fn cycle_exit_includes_sinks() {
        let g = Ultragraph::new(&["v", "w"], &[("e", "v", &["v", "w"])]).unwrap();
        let e = g.edge_by_name("e").unwrap();
        let w = g.vertex_by_name("w").unwrap();
        let exits = g.cycle_exits(&PathWord::new(vec![e])).unwrap();
        assert_eq!(exits, vec![Exit::Sink { at: 0, vertex: w }]);
    }

    #[test]
    fn first_return_fixtures() {
        let g2 = samples::single_loop();
        let v = g2.vertex_by_name("v").unwrap();
        let l = g2.edge_by_name("l").unwrap();
        assert_eq!(g2.first_return(v), FirstReturnVerdict::ExactlyOne(PathWord::new(vec![l])));

        let g3 = samples::two_petal_rose();
        let v = g3.vertex_by_name("v").unwrap();
        match g3.first_return(v) {
            FirstReturnVerdict::TwoOrMore(w1, w2) => {
                assert_ne!(w1, w2);
                assert_eq!(w1.len(), 1);
                assert_eq!(w2.len(), 1);
            }
            other => panic!("expected two petals, got {other:?}"),
        }

        let g4 = samples::single_arrow();
        let v = g4.vertex_by_name("v").unwrap();
        assert_eq!(g4.first_return(v), FirstReturnVerdict::None);
    }

    #[test]
    fn first_return_infinite_language() {
        // v --e--> {w}, w --f--> {w, v}: first returns are e f^n (n >= 1
        // reaching back v), infinitely many.
        let g = Ultragraph::new(&["v", "w"], &[("e", "v", &["w"]), ("f", "w", &["w", "v"])])
            .unwrap();
        let v = g.vertex_by_name("v").unwrap();
        match g.first_return(v) {
            FirstReturnVerdict::TwoOrMore(w1, w2) => {
                assert_ne!(w1, w2);
                for w in [&w1, &w2] {
                    assert!(g.is_valid_path(w));
                    assert!(g.is_cycle(w).unwrap());
                }
            }
            other => panic!("expected infinite language, got {other:?}"),
        }
    }
}
