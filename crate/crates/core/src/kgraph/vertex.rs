use super::{Edge, KGraph};
use crate::error::{Error, Result};
use crate::sets::{ColorSet, Degree, VertexSet};
use crate::transfer::TransferSystem;

/// Vertices of a derived graph (quotient or subgraph) together with their
/// indices in the parent graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    /// `parent[v]` is the parent index of derived vertex `v`.
    pub parent: Vec<usize>,
}

impl VertexMap {
    /// Parent indices of a derived set.
    pub fn lift(&self, s: VertexSet) -> VertexSet {
        VertexSet::from_indices(s.iter().map(|v| self.parent[v]))
    }

    /// Derived indices of the parent vertices that survive.
    pub fn restrict(&self, s: VertexSet) -> VertexSet {
        VertexSet::from_indices((0..self.parent.len()).filter(|&v| s.contains(self.parent[v])))
    }
}

impl KGraph {
    /// The maps `T_i(S) = {s(e) : color(e) = i, r(e) ∈ S}`.
    pub fn transfer_system(&self) -> &TransferSystem {
        &self.ts
    }

    /// `s(SΛ^n)`.
    pub fn source_set(&self, s: VertexSet, n: &Degree) -> Result<VertexSet> {
        self.check_set(s)?;
        if n.rank() != self.k() {
            return Err(Error::input("degree has the wrong rank"));
        }
        Ok(self.ts.apply_degree(s, n))
    }

    pub(crate) fn check_colors(&self, f: ColorSet) -> Result<()> {
        if f.is_subset(self.all_colors()) {
            Ok(())
        } else {
            Err(Error::input(format!("color set {f} is not inside [{}]", self.k())))
        }
    }

    fn check_nonempty_colors(&self, f: ColorSet) -> Result<()> {
        self.check_colors(f)?;
        if f.is_empty() {
            return Err(Error::input("the color set must be nonempty"));
        }
        Ok(())
    }

    /// Closed under every transfer map.
    pub fn is_hereditary(&self, s: VertexSet) -> bool {
        self.ts.is_closed(self.all_colors(), s)
    }

    /// Least `(color, vertex)` with `vertex ∈ T_color(s) ∖ s`, colors drawn from `colors`.
    pub fn hereditary_failure(&self, colors: ColorSet, s: VertexSet) -> Option<(usize, usize)> {
        colors
            .colors()
            .find_map(|c| (self.ts.apply(c, s) - s).first().map(|v| (c, v)))
    }

    fn require_hereditary(&self, s: VertexSet) -> Result<()> {
        self.check_set(s)?;
        match self.hereditary_failure(self.all_colors(), s) {
            None => Ok(()),
            Some((c, v)) => Err(Error::pre(format!(
                "{} is not hereditary: color {c} leads to {}",
                self.show_set(s),
                self.vertices()[v]
            ))),
        }
    }

    /// Vertices emitting an edge of some color in `f`.
    pub(crate) fn non_sources(&self, f: ColorSet) -> VertexSet {
        VertexSet::from_indices((0..self.n()).filter(|&v| f.colors().any(|c| !self.emitted(v, c).is_empty())))
    }

    /// Vertices emitting no edge of any color in `f`.
    pub fn f_sources(&self, f: ColorSet) -> Result<VertexSet> {
        self.check_nonempty_colors(f)?;
        Ok(self.all_vertices() - self.non_sources(f))
    }

    pub(crate) fn tracing_unchecked(&self, f: ColorSet) -> VertexSet {
        let sources = self.all_vertices() - self.non_sources(f);
        self.ts.forever_within(f.complement(self.k()), self.all_vertices() - sources)
    }

    /// Vertices from which no `F^c`-colored path (the trivial one included)
    /// ends at an `F`-source.
    pub fn f_tracing(&self, f: ColorSet) -> Result<VertexSet> {
        self.check_nonempty_colors(f)?;
        Ok(self.tracing_unchecked(f))
    }

    pub(crate) fn jf_unchecked(&self, f: ColorSet, h0: VertexSet) -> VertexSet {
        let escaping = (0..self.n()).filter(|&v| {
            !h0.contains(v) && f.colors().any(|c| !self.ts.image(c, v).is_subset(h0))
        });
        h0 | VertexSet::from_indices(escaping)
    }

    /// `H0` together with the vertices that are not `F`-sources in the
    /// quotient by `H0`.
    pub fn jf_vertices(&self, f: ColorSet, h0: VertexSet) -> Result<VertexSet> {
        self.check_nonempty_colors(f)?;
        self.require_hereditary(h0)?;
        Ok(self.jf_unchecked(f, h0))
    }

    fn derived(
        &self,
        keep_vertex: impl Fn(usize) -> bool,
        keep_edge: impl Fn(&Edge) -> bool,
    ) -> Result<(KGraph, VertexMap)> {
        let parent: Vec<usize> = (0..self.n()).filter(|&v| keep_vertex(v)).collect();
        let mut new_index = vec![usize::MAX; self.n()];
        for (i, &v) in parent.iter().enumerate() {
            new_index[v] = i;
        }
        let mut edge_index = vec![usize::MAX; self.edges().len()];
        let mut edges = Vec::new();
        for (i, e) in self.edges().iter().enumerate() {
            if keep_edge(e) {
                edge_index[i] = edges.len();
                edges.push(Edge {
                    id: e.id.clone(),
                    color: e.color,
                    range: new_index[e.range],
                    source: new_index[e.source],
                });
            }
        }
        let squares = self
            .squares()
            .iter()
            .filter(|q| q.iter().all(|&e| edge_index[e] != usize::MAX))
            .map(|q| q.map(|e| edge_index[e]))
            .collect();
        let vertices = parent.iter().map(|&v| self.vertices()[v].clone()).collect();
        Ok((KGraph::new(self.k(), vertices, edges, squares)?, VertexMap { parent }))
    }

    /// `Γ(Λ∖H)` with the parent index of each surviving vertex.
    pub fn quotient_with_map(&self, h: VertexSet) -> Result<(KGraph, VertexMap)> {
        self.require_hereditary(h)?;
        self.derived(|v| !h.contains(v), |e| !h.contains(e.source))
    }

    /// `Γ(Λ∖H)`: vertices off `H` and edges whose source is off `H`.
    pub fn quotient_graph(&self, h: VertexSet) -> Result<KGraph> {
        Ok(self.quotient_with_map(h)?.0)
    }

    /// `Λ(H)` with the parent index of each vertex.
    pub fn subgraph_with_map(&self, h: VertexSet) -> Result<(KGraph, VertexMap)> {
        self.require_hereditary(h)?;
        self.derived(|v| h.contains(v), |e| h.contains(e.range))
    }

    /// `Λ(H)`: vertices in `H` and edges whose range is in `H`.
    pub fn subgraph(&self, h: VertexSet) -> Result<KGraph> {
        Ok(self.subgraph_with_map(h)?.0)
    }

    /// Vertices outside `h` that emit some color, all of whose edges of that
    /// color have source in `h`.
    fn saturation_step(&self, h: VertexSet) -> VertexSet {
        VertexSet::from_indices((0..self.n()).filter(|&v| {
            !h.contains(v)
                && (1..=self.k())
                    .any(|c| !self.emitted(v, c).is_empty() && self.ts.image(c, v).is_subset(h))
        }))
    }

    pub fn is_saturated(&self, h: VertexSet) -> bool {
        self.saturation_step(h).is_empty()
    }

    /// Least saturated superset of a hereditary set.
    pub fn saturation(&self, h: VertexSet) -> Result<VertexSet> {
        self.require_hereditary(h)?;
        let mut cur = h;
        loop {
            let add = self.saturation_step(cur);
            if add.is_empty() {
                return Ok(cur);
            }
            cur |= add;
        }
    }

    /// Whenever `v` emits edges of colors `i ≠ j`, the sources of its
    /// `i`-edges emit `j`-edges.
    pub fn is_locally_convex(&self) -> bool {
        (0..self.n()).all(|v| {
            (1..=self.k()).all(|i| {
                (1..=self.k()).all(|j| {
                    i == j
                        || self.emitted(v, j).is_empty()
                        || self
                            .emitted(v, i)
                            .iter()
                            .all(|&e| !self.emitted(self.edge(e).source, j).is_empty())
                })
            })
        })
    }

    /// Every vertex emits edges of every color.
    pub fn is_sourceless(&self) -> bool {
        (0..self.n()).all(|v| (1..=self.k()).all(|c| !self.emitted(v, c).is_empty()))
    }
}
