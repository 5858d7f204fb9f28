//! Commuting partial self-maps of a finite set, and the NT/NO conditions
//! for their families of subsets.
//!
//! The maps act on functions by `f ↦ f ∘ σ` (zero off the domain), so the
//! point mass at `v` goes to the indicator of `σ^{-1}(v)` and the transfer
//! maps are preimages.

use crate::error::{Error, Result};
use crate::kgraph::{Edge, KGraph};
use crate::lattice::closed_sets;
use crate::sets::{ColorSet, VertexSet, MAX_RANK, MAX_VERTICES};
use crate::transfer::TransferSystem;
use crate::tuple::{partial_order_failure, Condition, TupleFamily, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynSys {
    d: usize,
    carrier: Vec<String>,
    /// `maps[c - 1][v]` is `σ_c(v)`, `None` off the domain.
    maps: Vec<Vec<Option<usize>>>,
}

/// Two composites that disagree at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DynViolation {
    pub i: usize,
    pub j: usize,
    pub v: usize,
}

impl DynViolation {
    pub fn describe(&self, ds: &DynSys) -> String {
        let show = |x: Option<usize>| x.map_or("undefined".to_string(), |w| ds.carrier[w].clone());
        let ij = ds.apply(self.j, self.v).and_then(|w| ds.apply(self.i, w));
        let ji = ds.apply(self.i, self.v).and_then(|w| ds.apply(self.j, w));
        format!(
            "maps {} and {} do not commute at {}: {} vs {}",
            self.i,
            self.j,
            ds.carrier[self.v],
            show(ij),
            show(ji)
        )
    }
}

impl DynSys {
    pub fn new(d: usize, carrier: Vec<String>, maps: Vec<Vec<Option<usize>>>) -> Result<Self> {
        if d == 0 || d > MAX_RANK {
            return Err(Error::input(format!("rank {d} outside 1..={MAX_RANK}")));
        }
        let n = carrier.len();
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!("{n} points exceed the limit of {MAX_VERTICES}")));
        }
        for (a, name) in carrier.iter().enumerate() {
            if carrier[..a].contains(name) {
                return Err(Error::input(format!("point '{name}' listed twice")));
            }
        }
        if maps.len() != d {
            return Err(Error::input(format!("expected {d} maps, got {}", maps.len())));
        }
        for (c, m) in maps.iter().enumerate() {
            if m.len() != n || m.iter().flatten().any(|&w| w >= n) {
                return Err(Error::input(format!("map {} does not fit the carrier", c + 1)));
            }
        }
        Ok(DynSys { d, carrier, maps })
    }

    /// Points named `1..=n`.
    pub fn from_maps(maps: Vec<Vec<Option<usize>>>) -> Result<Self> {
        let n = maps.first().map_or(0, Vec::len);
        DynSys::new(maps.len(), (1..=n).map(|v| v.to_string()).collect(), maps)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn all_points(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// `σ_color(v)`.
    pub fn apply(&self, color: usize, v: usize) -> Option<usize> {
        self.maps[color - 1][v]
    }

    pub fn preimage(&self, color: usize, v: usize) -> VertexSet {
        VertexSet::from_indices((0..self.n()).filter(|&u| self.maps[color - 1][u] == Some(v)))
    }

    /// Every point has a nonempty preimage under every map.
    pub fn is_cototal(&self) -> bool {
        (1..=self.d).all(|c| (0..self.n()).all(|v| !self.preimage(c, v).is_empty()))
    }

    /// Every map is a total bijection.
    pub fn is_automorphic(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut hit = VertexSet::EMPTY;
            for w in m {
                match w {
                    Some(w) => hit.insert(*w),
                    None => return false,
                }
            }
            hit == self.all_points()
        })
    }

    /// Forward image `σ_color(S)`.
    pub fn image(&self, color: usize, s: VertexSet) -> VertexSet {
        VertexSet::from_indices(s.iter().filter_map(|v| self.apply(color, v)))
    }

    pub fn show_set(&self, s: VertexSet) -> String {
        let names: Vec<&str> = s.iter().map(|v| self.carrier[v].as_str()).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Every point where two maps fail to commute as partial maps.
pub fn validate_dynsys(ds: &DynSys) -> Vec<DynViolation> {
    let mut out = Vec::new();
    for i in 1..=ds.d {
        for j in i + 1..=ds.d {
            for v in 0..ds.n() {
                let ij = ds.apply(j, v).and_then(|w| ds.apply(i, w));
                let ji = ds.apply(i, v).and_then(|w| ds.apply(j, w));
                if ij != ji {
                    out.push(DynViolation { i, j, v });
                }
            }
        }
    }
    out
}

fn require_valid(ds: &DynSys) -> Result<()> {
    match validate_dynsys(ds).first() {
        None => Ok(()),
        Some(w) => Err(Error::pre(w.describe(ds))),
    }
}

/// Preimage maps `T_i(S) = σ_i^{-1}(S)`.
pub fn dyn_transfer(ds: &DynSys) -> Result<TransferSystem> {
    require_valid(ds)?;
    let images = (1..=ds.d).map(|c| (0..ds.n()).map(|v| ds.preimage(c, v)).collect()).collect();
    TransferSystem::new(ds.n(), images)
}

/// The graph with an edge `u → σ_i(u)` of color `i` for each `u` in the
/// domain of `σ_i`, and the squares forced by commutativity.
pub fn dyn_to_kgraph(ds: &DynSys) -> Result<KGraph> {
    require_valid(ds)?;
    let mut edges = Vec::new();
    let mut id = vec![vec![usize::MAX; ds.n()]; ds.d];
    for c in 1..=ds.d {
        for u in 0..ds.n() {
            if let Some(w) = ds.apply(c, u) {
                id[c - 1][u] = edges.len();
                edges.push(Edge { id: format!("s{c}@{}", ds.carrier[u]), color: c, range: w, source: u });
            }
        }
    }
    let mut squares = Vec::new();
    for i in 1..=ds.d {
        for j in i + 1..=ds.d {
            for w in 0..ds.n() {
                let (Some(u), Some(x)) = (ds.apply(j, w), ds.apply(i, w)) else { continue };
                if ds.apply(i, u).is_none() {
                    continue;
                }
                squares.push([id[i - 1][u], id[j - 1][w], id[j - 1][x], id[i - 1][w]]);
            }
        }
    }
    KGraph::new(ds.d, ds.carrier.clone(), edges, squares)
}

fn check_family(ds: &DynSys, h: &TupleFamily) -> Result<()> {
    if h.k() != ds.d {
        return Err(Error::input(format!("family has rank {} but the system has rank {}", h.k(), ds.d)));
    }
    if h.components().iter().any(|s| !s.is_subset(ds.all_points())) {
        return Err(Error::input("family mentions points outside the carrier"));
    }
    Ok(())
}

/// `W_F`: points whose preimages under every map of `F` lie in `h0`.
pub fn dyn_w_set(ds: &DynSys, f: ColorSet, h0: VertexSet) -> VertexSet {
    VertexSet::from_indices((0..ds.n()).filter(|&v| f.colors().all(|c| ds.preimage(c, v).is_subset(h0))))
}

/// First failing condition, checked in the order (i), (ii), (iii), (iv).
pub fn dyn_check_nt_tuple(ds: &DynSys, h: &TupleFamily) -> Result<Option<Witness>> {
    check_family(ds, h)?;
    let t = dyn_transfer(ds)?;
    let d = ds.d;
    let full = ds.all_points();
    let h0 = h.base();
    for m in 1..1usize << d {
        let f = ColorSet::from_mask(m);
        if let Some(v) = ((h.get(f) & dyn_w_set(ds, f, h0)) - h0).first() {
            return Ok(Some(Witness::at(Condition::Covariance, f, v)));
        }
    }
    for m in 0..1usize << d {
        let f = ColorSet::from_mask(m);
        for c in f.complement(d).colors() {
            if let Some(v) = (t.apply(c, h.get(f)) - h.get(f)).first() {
                return Ok(Some(Witness { color: Some(c), ..Witness::at(Condition::Hereditary, f, v) }));
            }
        }
    }
    if let Some(w) = partial_order_failure(h) {
        return Ok(Some(w));
    }
    for m in 1..(1usize << d) - 1 {
        let f = ColorSet::from_mask(m);
        let fc = f.complement(d);
        let i1 = t.forever_within(fc, h0 | (full - dyn_w_set(ds, f, h0)));
        let upper = (0..1usize << d)
            .map(ColorSet::from_mask)
            .filter(|&x| f.is_subset(x) && x != f)
            .fold(full, |acc, x| acc & h.get(x));
        let i2 = t.forever_within(fc, upper);
        for v in ((i1 & i2) - h.get(f)).iter() {
            if t.eventual_containment(fc, VertexSet::singleton(v), h.get(f))? {
                return Ok(Some(Witness::at(Condition::Maximal, f, v)));
            }
        }
    }
    Ok(None)
}

pub fn dyn_is_nt_tuple(ds: &DynSys, h: &TupleFamily) -> Result<bool> {
    Ok(dyn_check_nt_tuple(ds, h)?.is_none())
}

/// Points whose preimage orbit under `F^c` never meets a point with empty
/// preimages under every map of `F`.
pub fn dyn_tracing(ds: &DynSys, f: ColorSet) -> Result<VertexSet> {
    let t = dyn_transfer(ds)?;
    let hit = VertexSet::from_indices((0..ds.n()).filter(|&v| f.colors().any(|c| !ds.preimage(c, v).is_empty())));
    Ok(t.forever_within(f.complement(ds.d), hit))
}

/// NT conditions plus `tracing(F) ⊆ H_F` for every nonempty `F`.
pub fn dyn_check_no_tuple(ds: &DynSys, h: &TupleFamily) -> Result<Option<Witness>> {
    if let Some(w) = dyn_check_nt_tuple(ds, h)? {
        return Ok(Some(w));
    }
    for m in 1..1usize << ds.d {
        let f = ColorSet::from_mask(m);
        if let Some(v) = (dyn_tracing(ds, f)? - h.get(f)).first() {
            return Ok(Some(Witness::at(Condition::Tracing, f, v)));
        }
    }
    Ok(None)
}

pub fn dyn_is_no_tuple(ds: &DynSys, h: &TupleFamily) -> Result<bool> {
    Ok(dyn_check_no_tuple(ds, h)?.is_none())
}

/// Subsets closed under preimages and containing every point whose
/// preimages they contain; requires co-total maps.
pub fn dyn_invariant_subsets(ds: &DynSys) -> Result<Vec<VertexSet>> {
    if !ds.is_cototal() {
        return Err(Error::pre("some point has an empty preimage"));
    }
    let t = dyn_transfer(ds)?;
    let all = ColorSet::full(ds.d);
    Ok(closed_sets(&t, all, VertexSet::EMPTY, ds.all_points())
        .into_iter()
        .filter(|&h| all.colors().all(|c| dyn_w_set(ds, ColorSet::single(c), h).is_subset(h)))
        .collect())
}

/// `(H, V, ..., V)`.
pub fn full_above(ds: &DynSys, h: VertexSet) -> TupleFamily {
    TupleFamily::from_fn(ds.d, |f| if f.is_empty() { h } else { ds.all_points() })
}
