//! Families of vertex sets indexed by color subsets, and the decision
//! procedures for NT-, NO- and (M)-families.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::kgraph::KGraph;
use crate::sets::{ColorSet, VertexSet};

/// A vertex set `H_F` for every `F ⊆ [k]`, stored at index `mask(F)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TupleFamily {
    k: usize,
    comps: Vec<VertexSet>,
}

impl TupleFamily {
    /// All components empty.
    pub fn empty(k: usize) -> Self {
        Self::constant(k, VertexSet::EMPTY)
    }

    pub fn constant(k: usize, s: VertexSet) -> Self {
        TupleFamily { k, comps: vec![s; 1 << k] }
    }

    pub fn from_components(k: usize, comps: Vec<VertexSet>) -> Result<Self> {
        if comps.len() != 1 << k {
            return Err(Error::input(format!("a rank-{k} family needs {} components", 1 << k)));
        }
        Ok(TupleFamily { k, comps })
    }

    pub fn from_fn(k: usize, mut f: impl FnMut(ColorSet) -> VertexSet) -> Self {
        TupleFamily { k, comps: (0..1usize << k).map(|m| f(ColorSet::from_mask(m))).collect() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, f: ColorSet) -> VertexSet {
        self.comps[f.mask()]
    }

    pub fn set(&mut self, f: ColorSet, s: VertexSet) {
        self.comps[f.mask()] = s;
    }

    /// The `∅` component.
    pub fn base(&self) -> VertexSet {
        self.comps[0]
    }

    /// Components in mask order.
    pub fn components(&self) -> &[VertexSet] {
        &self.comps
    }

    pub fn is_subset(&self, other: &TupleFamily) -> bool {
        self.k == other.k && self.comps.iter().zip(&other.comps).all(|(a, b)| a.is_subset(*b))
    }

    pub fn intersect(&self, other: &TupleFamily) -> TupleFamily {
        TupleFamily::from_fn(self.k, |f| self.get(f) & other.get(f))
    }

    pub fn union(&self, other: &TupleFamily) -> TupleFamily {
        TupleFamily::from_fn(self.k, |f| self.get(f) | other.get(f))
    }

    fn order_key(&self) -> Vec<(u32, u64)> {
        ColorSet::all_by_size(self.k)
            .into_iter()
            .map(|f| {
                let s = self.get(f);
                (s.len() as u32, s.bits())
            })
            .collect()
    }

    /// `(H_∅, H_{1}, ...)` with vertex names, components in mask order.
    pub fn show(&self, g: &KGraph) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|&s| if s.is_empty() { "∅".to_string() } else { g.show_set(s) })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Canonical order: compare components taken by increasing `|F|` then mask,
/// each by size and then bit mask.
impl Ord for TupleFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k, self.order_key()).cmp(&(other.k, other.order_key()))
    }
}

impl PartialOrd for TupleFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which requirement a family fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `H_F` lies in the covariance bound determined by `H_∅`.
    Covariance,
    /// `T_i(H_F) ⊆ H_F` for `i ∉ F`.
    Hereditary,
    /// `H_D ⊆ H_F` for `D ⊆ F`.
    PartialOrder,
    /// `H1 ∩ H2 ∩ H3 ⊆ H_F`.
    Maximal,
    /// `F`-tracing vertices lie in `H_F`.
    Tracing,
    /// The given relative family lies inside.
    Relative,
    /// The `∅` component is empty.
    EmptyBase,
    /// One more iteration adds nothing.
    Stable,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Covariance => "condition (i)",
            Condition::Hereditary => "condition (ii)",
            Condition::PartialOrder => "condition (iii)",
            Condition::Maximal => "condition (iv)",
            Condition::Tracing => "tracing condition",
            Condition::Relative => "relative condition",
            Condition::EmptyBase => "empty-base condition",
            Condition::Stable => "stability condition",
        })
    }
}

/// The least failing instance of a condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub condition: Condition,
    pub f: ColorSet,
    /// The larger set for a partial-order failure.
    pub other: Option<ColorSet>,
    /// The color for a hereditary failure.
    pub color: Option<usize>,
    pub vertex: usize,
}

impl Witness {
    pub(crate) fn at(condition: Condition, f: ColorSet, vertex: usize) -> Self {
        Witness { condition, f, other: None, color: None, vertex }
    }

    /// E.g. `condition (iv) fails at F={1}, witness u`.
    pub fn describe(&self, names: &[String]) -> String {
        let mut place = format!("F={}", self.f);
        if let Some(o) = self.other {
            place = format!("F={} ⊆ {}", self.f, o);
        }
        if let Some(c) = self.color {
            place = format!("{place}, color {c}");
        }
        format!("{} fails at {place}, witness {}", self.condition, names[self.vertex])
    }
}

fn check_shape(g: &KGraph, h: &TupleFamily) -> Result<()> {
    if h.k != g.k() {
        return Err(Error::input(format!("family has rank {} but the graph has rank {}", h.k, g.k())));
    }
    let full = g.all_vertices();
    if h.comps.iter().any(|s| !s.is_subset(full)) {
        return Err(Error::input("family mentions vertices outside the graph"));
    }
    Ok(())
}

fn nonempty_proper(k: usize) -> impl Iterator<Item = ColorSet> {
    (1..(1usize << k) - 1).map(ColorSet::from_mask)
}

fn nonempty(k: usize) -> impl Iterator<Item = ColorSet> {
    (1..1usize << k).map(ColorSet::from_mask)
}

/// `∩_{D ⊋ F} H_D`.
fn strict_upper_meet(h: &TupleFamily, f: ColorSet, full: VertexSet) -> VertexSet {
    (0..1usize << h.k)
        .map(ColorSet::from_mask)
        .filter(|&d| f.is_subset(d) && d != f)
        .fold(full, |acc, d| acc & h.get(d))
}

/// `T_i(H_F) ⊆ H_F` for every `F` and every `i ∉ F`.
pub fn check_hereditary_family(g: &KGraph, h: &TupleFamily) -> Result<Option<Witness>> {
    check_shape(g, h)?;
    for m in 0..1usize << g.k() {
        let f = ColorSet::from_mask(m);
        if let Some((c, v)) = g.hereditary_failure(f.complement(g.k()), h.get(f)) {
            return Ok(Some(Witness { color: Some(c), ..Witness::at(Condition::Hereditary, f, v) }));
        }
    }
    Ok(None)
}

pub fn is_hereditary_family(g: &KGraph, h: &TupleFamily) -> Result<bool> {
    Ok(check_hereditary_family(g, h)?.is_none())
}

/// `H_F ⊆ H_{F ∪ {i}}` for every covering pair.
pub fn partial_order_failure(h: &TupleFamily) -> Option<Witness> {
    for m in 0..1usize << h.k {
        let f = ColorSet::from_mask(m);
        for i in f.complement(h.k).colors() {
            let up = f.with(i);
            if let Some(v) = (h.get(f) - h.get(up)).first() {
                return Some(Witness { other: Some(up), ..Witness::at(Condition::PartialOrder, f, v) });
            }
        }
    }
    None
}

pub fn is_partially_ordered(h: &TupleFamily) -> bool {
    partial_order_failure(h).is_none()
}

/// Component `F` replaced by its closure under the maps of colors outside `F`.
pub fn inv_closure(g: &KGraph, h: &TupleFamily) -> Result<TupleFamily> {
    check_shape(g, h)?;
    let t = g.transfer_system();
    Ok(TupleFamily::from_fn(h.k, |f| t.reach(f.complement(h.k), h.get(f))))
}

/// Component `F` replaced by `∪_{D ⊆ F} H_D`.
pub fn po_closure(h: &TupleFamily) -> TupleFamily {
    TupleFamily::from_fn(h.k, |f| {
        (0..1usize << h.k)
            .map(ColorSet::from_mask)
            .filter(|d| d.is_subset(f))
            .fold(VertexSet::EMPTY, |acc, d| acc | h.get(d))
    })
}

fn require_proper(g: &KGraph, f: ColorSet) -> Result<()> {
    g.check_colors(f)?;
    if f.is_empty() || f == g.all_colors() {
        return Err(Error::input(format!("{f} must be a nonempty proper subset of the colors")));
    }
    Ok(())
}

/// Vertices satisfying the eventual-containment clause at `F`.
fn eventually_inside(g: &KGraph, f: ColorSet, candidates: VertexSet, target: VertexSet) -> Result<VertexSet> {
    let t = g.transfer_system();
    let active = f.complement(g.k());
    let mut out = VertexSet::EMPTY;
    for v in candidates.iter() {
        if t.eventual_containment(active, VertexSet::singleton(v), target)? {
            out.insert(v);
        }
    }
    Ok(out)
}

/// The three sets whose intersection an NT-family must absorb at `F`.
pub fn rf_condition_sets(g: &KGraph, h: &TupleFamily, f: ColorSet) -> Result<(VertexSet, VertexSet, VertexSet)> {
    check_shape(g, h)?;
    require_proper(g, f)?;
    let h0 = h.base();
    if !g.is_hereditary(h0) {
        return Err(Error::pre(format!("{} is not hereditary", g.show_set(h0))));
    }
    let t = g.transfer_system();
    let fc = f.complement(g.k());
    let h1 = t.forever_within(fc, g.jf_unchecked(f, h0));
    let h2 = t.forever_within(fc, strict_upper_meet(h, f, g.all_vertices()));
    let h3 = eventually_inside(g, f, g.all_vertices(), h.get(f))?;
    Ok((h1, h2, h3))
}

/// First failing condition of the NT characterisation, if any.
pub fn check_nt_tuple(g: &KGraph, h: &TupleFamily) -> Result<Option<Witness>> {
    check_shape(g, h)?;
    let h0 = h.base();
    for f in nonempty(g.k()) {
        if let Some(v) = (h.get(f) - g.jf_unchecked(f, h0)).first() {
            return Ok(Some(Witness::at(Condition::Covariance, f, v)));
        }
    }
    if let Some(w) = check_hereditary_family(g, h)? {
        return Ok(Some(w));
    }
    if let Some(w) = partial_order_failure(h) {
        return Ok(Some(w));
    }
    let t = g.transfer_system();
    for f in nonempty_proper(g.k()) {
        let fc = f.complement(g.k());
        let h1 = t.forever_within(fc, g.jf_unchecked(f, h0));
        let h2 = t.forever_within(fc, strict_upper_meet(h, f, g.all_vertices()));
        let candidates = (h1 & h2) - h.get(f);
        if let Some(v) = eventually_inside(g, f, candidates, h.get(f))?.first() {
            return Ok(Some(Witness::at(Condition::Maximal, f, v)));
        }
    }
    Ok(None)
}

pub fn is_nt_tuple(g: &KGraph, h: &TupleFamily) -> Result<bool> {
    Ok(check_nt_tuple(g, h)?.is_none())
}

/// NT and every `F`-tracing vertex lies in `H_F`.
pub fn check_no_tuple(g: &KGraph, h: &TupleFamily) -> Result<Option<Witness>> {
    if let Some(w) = check_nt_tuple(g, h)? {
        return Ok(Some(w));
    }
    for f in nonempty(g.k()) {
        if let Some(v) = (g.tracing_unchecked(f) - h.get(f)).first() {
            return Ok(Some(Witness::at(Condition::Tracing, f, v)));
        }
    }
    Ok(None)
}

pub fn is_no_tuple(g: &KGraph, h: &TupleFamily) -> Result<bool> {
    Ok(check_no_tuple(g, h)?.is_none())
}

/// NT and componentwise above `kf`.
pub fn check_relative_no_tuple(g: &KGraph, h: &TupleFamily, kf: &TupleFamily) -> Result<Option<Witness>> {
    check_shape(g, kf)?;
    if let Some(w) = check_nt_tuple(g, h)? {
        return Ok(Some(w));
    }
    for m in 0..1usize << g.k() {
        let f = ColorSet::from_mask(m);
        if let Some(v) = (kf.get(f) - h.get(f)).first() {
            return Ok(Some(Witness::at(Condition::Relative, f, v)));
        }
    }
    Ok(None)
}

pub fn is_relative_no_tuple(g: &KGraph, h: &TupleFamily, kf: &TupleFamily) -> Result<bool> {
    Ok(check_relative_no_tuple(g, h, kf)?.is_none())
}

/// The family with `∅ ↦ ∅` and `F ↦` the `F`-tracing vertices.
pub fn tracing_family(g: &KGraph) -> TupleFamily {
    TupleFamily::from_fn(g.k(), |f| if f.is_empty() { VertexSet::EMPTY } else { g.tracing_unchecked(f) })
}

/// Witness that `G` is not a hereditary, partially ordered family below the
/// tracing family with empty base.
fn e_family_failure(g: &KGraph, gf: &TupleFamily) -> Result<Option<Witness>> {
    if let Some(v) = gf.base().first() {
        return Ok(Some(Witness::at(Condition::EmptyBase, ColorSet::EMPTY, v)));
    }
    for f in nonempty(g.k()) {
        if let Some(v) = (gf.get(f) - g.tracing_unchecked(f)).first() {
            return Ok(Some(Witness::at(Condition::Tracing, f, v)));
        }
    }
    if let Some(w) = check_hereditary_family(g, gf)? {
        return Ok(Some(w));
    }
    Ok(partial_order_failure(gf))
}

/// One application of the absorbing operator to a family contained in the
/// tracing family.
pub fn iterate_once(g: &KGraph, gf: &TupleFamily) -> Result<TupleFamily> {
    check_shape(g, gf)?;
    if let Some(w) = e_family_failure(g, gf)? {
        return Err(Error::pre(format!("not an (E)-family: {}", w.describe(g.vertices()))));
    }
    iterate_unchecked(g, gf)
}

fn iterate_unchecked(g: &KGraph, gf: &TupleFamily) -> Result<TupleFamily> {
    let k = g.k();
    let t = g.transfer_system();
    let mut out = gf.clone();
    for f in nonempty_proper(k) {
        let fc = f.complement(k);
        let tracing = g.tracing_unchecked(f);
        let inv = t.forever_within(fc, strict_upper_meet(gf, f, g.all_vertices()));
        out.set(f, eventually_inside(g, f, tracing & inv, gf.get(f))?);
    }
    Ok(out)
}

/// Maximalisation with an explicit number of iterations of the absorbing
/// operator (the canonical choice is `k - 1`).
pub fn maximalise_rounds(g: &KGraph, h: &TupleFamily, rounds: usize) -> Result<TupleFamily> {
    check_shape(g, h)?;
    let h0 = h.base();
    let (q, map) = g.quotient_with_map(h0)?;
    let k = g.k();
    let mut gf = TupleFamily::from_fn(k, |f| if f.is_empty() { VertexSet::EMPTY } else { map.restrict(h.get(f)) });
    for f in nonempty(k) {
        if let Some(v) = (gf.get(f) - q.tracing_unchecked(f)).first() {
            return Err(Error::pre(format!(
                "vertex {} of component {f} is not {f}-tracing in the quotient",
                q.vertices()[v]
            )));
        }
    }
    gf = po_closure(&inv_closure(&q, &gf)?);
    for _ in 0..rounds {
        gf = iterate_unchecked(&q, &gf)?;
    }
    Ok(TupleFamily::from_fn(k, |f| h0 | map.lift(gf.get(f))))
}

/// The largest family inducing the same ideal.
pub fn maximalise(g: &KGraph, h: &TupleFamily) -> Result<TupleFamily> {
    maximalise_rounds(g, h, g.k().saturating_sub(1))
}

/// Empty base, components inside the non-sources, hereditary, partially
/// ordered, and fixed by the absorbing operator.
pub fn check_m_tuple(g: &KGraph, gf: &TupleFamily) -> Result<Option<Witness>> {
    check_shape(g, gf)?;
    if let Some(v) = gf.base().first() {
        return Ok(Some(Witness::at(Condition::EmptyBase, ColorSet::EMPTY, v)));
    }
    for f in nonempty(g.k()) {
        if let Some(v) = (gf.get(f) - g.non_sources(f)).first() {
            return Ok(Some(Witness::at(Condition::Covariance, f, v)));
        }
    }
    if let Some(w) = check_hereditary_family(g, gf)? {
        return Ok(Some(w));
    }
    if let Some(w) = partial_order_failure(gf) {
        return Ok(Some(w));
    }
    let next = iterate_unchecked(g, gf)?;
    for f in nonempty_proper(g.k()) {
        if let Some(v) = (next.get(f) - gf.get(f)).first() {
            return Ok(Some(Witness::at(Condition::Stable, f, v)));
        }
    }
    Ok(None)
}

pub fn is_m_tuple(g: &KGraph, gf: &TupleFamily) -> Result<bool> {
    Ok(check_m_tuple(g, gf)?.is_none())
}

/// Every `F`-tracing vertex all of whose `F`-colored edges land in `h0`
/// belongs to `h0`.
pub fn is_neg_invariant(g: &KGraph, h0: VertexSet) -> Result<bool> {
    g.check_set(h0)?;
    let t = g.transfer_system();
    Ok(nonempty(g.k()).all(|f| {
        let pulled = VertexSet::from_indices(
            (0..g.n()).filter(|&v| f.colors().all(|c| t.image(c, v).is_subset(h0))),
        );
        (g.tracing_unchecked(f) & pulled).is_subset(h0)
    }))
}

/// Whether `h0` is the base of some NO-family: hereditary and negatively invariant.
pub fn participates_in_no_tuple(g: &KGraph, h0: VertexSet) -> Result<bool> {
    Ok(g.is_hereditary(h0) && is_neg_invariant(g, h0)?)
}
