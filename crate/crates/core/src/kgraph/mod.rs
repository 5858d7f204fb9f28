//! Finite k-graphs presented by a colored skeleton and a table of
//! factorisation squares.

mod path;
mod vertex;

pub use path::{Path, MAX_PATHS};
pub use vertex::VertexMap;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::sets::{ColorSet, VertexSet, MAX_RANK, MAX_VERTICES};
use crate::transfer::TransferSystem;

/// An edge of the skeleton. Paths run from source to range, so `range` is
/// the vertex that "emits" the edge in the `vΛ` convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub color: usize,
    pub range: usize,
    pub source: usize,
}

/// A square `[e, f, f', e']` records `e·f = f'·e'`, where `e, e'` have the
/// smaller color.
pub type Square = [usize; 4];

#[derive(Clone, Debug)]
pub struct KGraph {
    k: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    squares: Vec<Square>,
    // (e, f) with color(e) < color(f)  ->  (f', e')
    forward: HashMap<(usize, usize), (usize, usize)>,
    // (f', e') with color(f') > color(e')  ->  (e, f)
    backward: HashMap<(usize, usize), (usize, usize)>,
    // emits[v][c - 1] = edges of color c with range v
    emits: Vec<Vec<Vec<usize>>>,
    ts: TransferSystem,
}

impl PartialEq for KGraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.squares == other.squares
    }
}

impl Eq for KGraph {}

/// A reason why a skeleton plus square table fails to present a k-graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Colors in a square are not `i, j, j, i` with `i < j`.
    SquareColors { square: usize },
    /// The four edges of a square do not form two paths with common ends.
    SquareShape { square: usize },
    /// A composable pair `e·f` (lower color first) has no square.
    UnmatchedLeft { e: usize, f: usize },
    /// A composable pair `e·f` (lower color first) has several squares.
    DuplicateLeft { e: usize, f: usize },
    /// A composable pair `f'·e'` (higher color first) has no square.
    UnmatchedRight { f: usize, e: usize },
    /// A composable pair `f'·e'` (higher color first) has several squares.
    DuplicateRight { f: usize, e: usize },
    /// The two rewrites of a three-colored path disagree.
    Cube { x: usize, y: usize, z: usize },
}

impl Violation {
    /// Human-readable description using the graph's names.
    pub fn describe(&self, g: &KGraph) -> String {
        let id = |e: usize| g.edges[e].id.as_str();
        let sq = |s: usize| {
            let q = g.squares[s];
            format!("({}, {}, {}, {})", id(q[0]), id(q[1]), id(q[2]), id(q[3]))
        };
        match *self {
            Violation::SquareColors { square } => format!("square {} has bad colors", sq(square)),
            Violation::SquareShape { square } => format!("square {} is not a commuting frame", sq(square)),
            Violation::UnmatchedLeft { e, f } => format!("pair ({}, {}) unmatched", id(e), id(f)),
            Violation::DuplicateLeft { e, f } => format!("pair ({}, {}) matched more than once", id(e), id(f)),
            Violation::UnmatchedRight { f, e } => format!("pair ({}, {}) unmatched", id(f), id(e)),
            Violation::DuplicateRight { f, e } => format!("pair ({}, {}) matched more than once", id(f), id(e)),
            Violation::Cube { x, y, z } => {
                format!("cube condition fails on ({}, {}, {})", id(x), id(y), id(z))
            }
        }
    }
}

impl KGraph {
    /// Build a graph from resolved indices. Only structural problems are
    /// errors; axiom violations are reported by [`KGraph::validate`].
    pub fn new(k: usize, vertices: Vec<String>, edges: Vec<Edge>, squares: Vec<Square>) -> Result<Self> {
        if k == 0 || k > MAX_RANK {
            return Err(Error::input(format!("rank {k} outside 1..={MAX_RANK}")));
        }
        if vertices.len() > MAX_VERTICES {
            return Err(Error::Capacity(format!(
                "{} vertices exceeds the limit of {MAX_VERTICES}",
                vertices.len()
            )));
        }
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::input(format!("duplicate vertex '{v}'")));
            }
        }
        let mut seen = HashMap::new();
        for e in &edges {
            if seen.insert(e.id.as_str(), ()).is_some() {
                return Err(Error::input(format!("duplicate edge '{}'", e.id)));
            }
            if e.color == 0 || e.color > k {
                return Err(Error::input(format!("edge '{}' has color {} outside 1..={k}", e.id, e.color)));
            }
            if e.range >= vertices.len() || e.source >= vertices.len() {
                return Err(Error::input(format!("edge '{}' refers to an unknown vertex", e.id)));
            }
        }
        for q in &squares {
            if q.iter().any(|&e| e >= edges.len()) {
                return Err(Error::input("square refers to an unknown edge"));
            }
        }
        let mut forward = HashMap::new();
        let mut backward = HashMap::new();
        for q in &squares {
            forward.entry((q[0], q[1])).or_insert((q[2], q[3]));
            backward.entry((q[2], q[3])).or_insert((q[0], q[1]));
        }
        let mut emits = vec![vec![Vec::new(); k]; vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            emits[e.range][e.color - 1].push(i);
        }
        let mut images = vec![vec![VertexSet::EMPTY; vertices.len()]; k];
        for e in &edges {
            images[e.color - 1][e.range].insert(e.source);
        }
        let ts = TransferSystem::new(vertices.len(), images)?;
        Ok(KGraph { k, vertices, edges, squares, forward, backward, emits, ts })
    }

    /// Build a graph from names: edges are `(id, color, range, source)` and
    /// squares are `[e, f, f', e']` by edge id.
    pub fn from_names(
        k: usize,
        vertices: &[&str],
        edges: &[(&str, usize, &str, &str)],
        squares: &[[&str; 4]],
    ) -> Result<Self> {
        let vnames: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let vidx = |name: &str| {
            vnames
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::input(format!("unknown vertex '{name}'")))
        };
        let mut es = Vec::new();
        for &(id, color, r, s) in edges {
            es.push(Edge { id: id.to_string(), color, range: vidx(r)?, source: vidx(s)? });
        }
        let eidx = |id: &str| {
            es.iter()
                .position(|e| e.id == id)
                .ok_or_else(|| Error::input(format!("unknown edge '{id}'")))
        };
        let mut qs = Vec::new();
        for q in squares {
            qs.push([eidx(q[0])?, eidx(q[1])?, eidx(q[2])?, eidx(q[3])?]);
        }
        KGraph::new(k, vnames, es, qs)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn all_colors(&self) -> ColorSet {
        ColorSet::full(self.k)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Edges of one color whose range is `v`.
    pub fn emitted(&self, v: usize, color: usize) -> &[usize] {
        &self.emits[v][color - 1]
    }

    /// Resolve a list of vertex names.
    pub fn vertex_set(&self, names: &[&str]) -> Result<VertexSet> {
        let mut s = VertexSet::EMPTY;
        for name in names {
            let v = self
                .vertex_index(name)
                .ok_or_else(|| Error::input(format!("unknown vertex '{name}'")))?;
            s.insert(v);
        }
        Ok(s)
    }

    /// Names of the members of a set, in vertex order.
    pub fn names(&self, s: VertexSet) -> Vec<&str> {
        s.iter().map(|v| self.vertices[v].as_str()).collect()
    }

    /// `{u, w}` rendering of a vertex set.
    pub fn show_set(&self, s: VertexSet) -> String {
        format!("{{{}}}", self.names(s).join(", "))
    }

    pub(crate) fn check_set(&self, s: VertexSet) -> Result<()> {
        if s.is_subset(self.all_vertices()) {
            Ok(())
        } else {
            Err(Error::input("vertex set has members outside the graph"))
        }
    }

    /// Rewrite `a·b` with `color(a) < color(b)` as `b'·a'`.
    pub(crate) fn swap_up(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        self.forward.get(&(a, b)).copied()
    }

    /// Rewrite `a·b` with `color(a) > color(b)` as `b'·a'`.
    pub(crate) fn swap_down(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        self.backward.get(&(a, b)).copied()
    }

    /// Rewrite an adjacent pair of distinct colors into the other order.
    pub(crate) fn swap(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        if self.edges[a].color < self.edges[b].color {
            self.swap_up(a, b)
        } else {
            self.swap_down(a, b)
        }
    }

    /// All violations of the k-graph axioms; empty iff the presentation is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (s, q) in self.squares.iter().enumerate() {
            let [e, f, f2, e2] = q.map(|x| &self.edges[x]);
            if !(e.color == e2.color && f.color == f2.color && e.color < f.color) {
                out.push(Violation::SquareColors { square: s });
            } else if !(e.source == f.range
                && f2.source == e2.range
                && e.range == f2.range
                && f.source == e2.source)
            {
                out.push(Violation::SquareShape { square: s });
            }
        }
        let mut left: HashMap<(usize, usize), usize> = HashMap::new();
        let mut right: HashMap<(usize, usize), usize> = HashMap::new();
        for q in &self.squares {
            *left.entry((q[0], q[1])).or_default() += 1;
            *right.entry((q[2], q[3])).or_default() += 1;
        }
        for (a, ea) in self.edges.iter().enumerate() {
            for &b in self.emits[ea.source].iter().flatten() {
                let cb = self.edges[b].color;
                if ea.color < cb {
                    match left.get(&(a, b)).copied().unwrap_or(0) {
                        0 => out.push(Violation::UnmatchedLeft { e: a, f: b }),
                        1 => {}
                        _ => out.push(Violation::DuplicateLeft { e: a, f: b }),
                    }
                }
            }
        }
        for (a, ea) in self.edges.iter().enumerate() {
            for &b in self.emits[ea.source].iter().flatten() {
                let cb = self.edges[b].color;
                if ea.color > cb {
                    match right.get(&(a, b)).copied().unwrap_or(0) {
                        0 => out.push(Violation::UnmatchedRight { f: a, e: b }),
                        1 => {}
                        _ => out.push(Violation::DuplicateRight { f: a, e: b }),
                    }
                }
            }
        }
        if self.k >= 3 {
            self.check_cubes(&mut out);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// For each composable `x·y·z` with strictly decreasing colors, sort it
    /// by the two possible sequences of adjacent swaps and compare.
    fn check_cubes(&self, out: &mut Vec<Violation>) {
        for (x, ex) in self.edges.iter().enumerate() {
            for &y in self.emits[ex.source].iter().flatten() {
                let ey = &self.edges[y];
                if ey.color >= ex.color {
                    continue;
                }
                for &z in self.emits[ey.source].iter().flatten() {
                    if self.edges[z].color >= ey.color {
                        continue;
                    }
                    let via_right = (|| {
                        let (z1, y1) = self.swap_down(y, z)?;
                        let (z2, x1) = self.swap_down(x, z1)?;
                        let (y2, x2) = self.swap_down(x1, y1)?;
                        Some([z2, y2, x2])
                    })();
                    let via_left = (|| {
                        let (y3, x3) = self.swap_down(x, y)?;
                        let (z3, x4) = self.swap_down(x3, z)?;
                        let (z4, y4) = self.swap_down(y3, z3)?;
                        Some([z4, y4, x4])
                    })();
                    if let (Some(a), Some(b)) = (via_right, via_left) {
                        if a != b {
                            out.push(Violation::Cube { x, y, z });
                        }
                    }
                }
            }
        }
    }

    /// Error unless the graph passes validation.
    pub fn require_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::pre(format!("invalid k-graph: {}", v.describe(self)))),
        }
    }
}

impl fmt::Display for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-graph with {} vertices, {} edges, {} squares",
            self.k,
            self.n(),
            self.edges.len(),
            self.squares.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fx1, fx3};

    #[test]
    fn fixtures_are_valid() {
        assert!(fx1(1).is_valid());
        assert!(fx1(2).is_valid());
        assert!(fx1(3).is_valid());
        assert!(fx3().is_valid());
    }

    #[test]
    fn missing_square_is_reported() {
        let g = KGraph::from_names(
            2,
            &["u", "w"],
            &[("b", 1, "u", "u"), ("a", 1, "w", "w"), ("g", 2, "u", "w"), ("h", 2, "w", "w")],
            &[["b", "g", "g", "a"]],
        )
        .unwrap();
        let report = g.validate();
        assert!(!report.is_empty());
        assert_eq!(report[0].describe(&g), "pair (a, h) unmatched");
    }

    #[test]
    fn bad_square_colors_and_shape() {
        let g = KGraph::from_names(
            2,
            &["v"],
            &[("x", 1, "v", "v"), ("y", 2, "v", "v")],
            &[["y", "x", "x", "y"]],
        )
        .unwrap();
        assert!(g.validate().contains(&Violation::SquareColors { square: 0 }));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            KGraph::from_names(1, &["v"], &[("e", 2, "v", "v")], &[]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            KGraph::from_names(1, &["v"], &[("e", 1, "v", "q")], &[]),
            Err(Error::Input(_))
        ));
        assert!(matches!(KGraph::from_names(1, &["v", "v"], &[], &[]), Err(Error::Input(_))));
        assert!(matches!(KGraph::from_names(0, &["v"], &[], &[]), Err(Error::Input(_))));
    }

    fn three_loop_graph(twist_23: bool) -> KGraph {
        let a = ["a0", "a1"];
        let b = ["b0", "b1"];
        let c = ["c0", "c1"];
        let mut edges = Vec::new();
        for (names, color) in [(a, 1), (b, 2), (c, 3)] {
            for n in names {
                edges.push((n, color, "v", "v"));
            }
        }
        let mut squares = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                squares.push([a[i], b[j], b[j], a[i ^ j]]);
                squares.push([a[i], c[j], c[j], a[i]]);
                let t = if twist_23 { i ^ j } else { i };
                squares.push([b[i], c[j], c[j], b[t]]);
            }
        }
        KGraph::from_names(3, &["v"], &edges, &squares).unwrap()
    }

    #[test]
    fn cube_condition() {
        assert!(three_loop_graph(false).validate().is_empty());
        let bad = three_loop_graph(true).validate();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|v| matches!(v, Violation::Cube { .. })));
    }
}
