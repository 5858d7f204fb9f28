//! Enumeration of NT/NO families, lattice operations, Hasse diagrams and
//! the special-case reports.

use std::fmt::Write as _;

use crate::doc::family_to_doc;
use crate::error::{Error, Result};
use crate::kgraph::KGraph;
use crate::sets::{ColorSet, VertexSet};
use crate::transfer::TransferSystem;
use crate::tuple::{
    is_no_tuple, is_nt_tuple, is_m_tuple, is_neg_invariant, iterate_once, tracing_family, TupleFamily,
};

/// Size bounds for enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Bound on `|V| · 2^k`.
    pub max_cells: usize,
    /// Bound on the number of families returned.
    pub max_tuples: usize,
    /// Bound on search steps.
    pub max_steps: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { max_cells: 256, max_tuples: 200_000, max_steps: 50_000_000 }
    }
}

struct Budget {
    steps: usize,
    max: usize,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.max {
            return Err(Error::Capacity(format!("enumeration exceeded {} search steps", self.max)));
        }
        Ok(())
    }
}

/// Every `S` with `lo ⊆ S ⊆ hi` closed under the maps of `colors`, in
/// increasing order of bit mask.
pub fn closed_sets(t: &TransferSystem, colors: ColorSet, lo: VertexSet, hi: VertexSet) -> Vec<VertexSet> {
    let mut budget = Budget { steps: 0, max: usize::MAX };
    let mut out = Vec::new();
    closed_sets_into(t, colors, lo, hi, &mut budget, &mut out).expect("unbounded budget");
    out.sort();
    out
}

fn closed_sets_into(
    t: &TransferSystem,
    colors: ColorSet,
    lo: VertexSet,
    hi: VertexSet,
    budget: &mut Budget,
    out: &mut Vec<VertexSet>,
) -> Result<()> {
    let start = t.reach(colors, lo);
    if !start.is_subset(hi) {
        return Ok(());
    }
    // decide vertices in order: include (with closure) or exclude
    fn rec(
        t: &TransferSystem,
        colors: ColorSet,
        cur: VertexSet,
        excluded: VertexSet,
        hi: VertexSet,
        v: usize,
        budget: &mut Budget,
        out: &mut Vec<VertexSet>,
    ) -> Result<()> {
        budget.tick()?;
        let open = if v >= 64 { 0 } else { (hi - cur - excluded).0 >> v << v };
        if open == 0 {
            out.push(cur);
            return Ok(());
        }
        let v = open.trailing_zeros() as usize;
        let with = t.reach(colors, cur | VertexSet::singleton(v));
        if with.is_subset(hi) && (with & excluded).is_empty() {
            rec(t, colors, with, excluded, hi, v + 1, budget, out)?;
        }
        rec(t, colors, cur, excluded | VertexSet::singleton(v), hi, v + 1, budget, out)
    }
    rec(t, colors, start, VertexSet::EMPTY, hi, 0, budget, out)
}

/// Hereditary vertex sets in increasing bit-mask order.
pub fn hereditary_sets(g: &KGraph) -> Vec<VertexSet> {
    closed_sets(g.transfer_system(), g.all_colors(), VertexSet::EMPTY, g.all_vertices())
}

pub fn enumerate_nt_tuples(g: &KGraph) -> Result<Vec<TupleFamily>> {
    enumerate_nt_tuples_with(g, &EnumConfig::default())
}

/// All NT-families in canonical order.
pub fn enumerate_nt_tuples_with(g: &KGraph, cfg: &EnumConfig) -> Result<Vec<TupleFamily>> {
    let cells = g.n() << g.k();
    if cells > cfg.max_cells {
        return Err(Error::Capacity(format!(
            "|V|·2^k = {cells} exceeds the configured bound {}",
            cfg.max_cells
        )));
    }
    g.require_valid()?;
    let t = g.transfer_system();
    let order: Vec<ColorSet> = ColorSet::all_by_size(g.k()).into_iter().skip(1).collect();
    let mut budget = Budget { steps: 0, max: cfg.max_steps };
    let mut out = Vec::new();
    let mut bases = Vec::new();
    closed_sets_into(t, g.all_colors(), VertexSet::EMPTY, g.all_vertices(), &mut budget, &mut bases)?;
    for h0 in bases {
        let mut fam = TupleFamily::empty(g.k());
        fam.set(ColorSet::EMPTY, h0);
        fill(g, &order, 0, &mut fam, &mut budget, cfg, &mut out)?;
    }
    out.sort();
    Ok(out)
}

fn fill(
    g: &KGraph,
    order: &[ColorSet],
    pos: usize,
    fam: &mut TupleFamily,
    budget: &mut Budget,
    cfg: &EnumConfig,
    out: &mut Vec<TupleFamily>,
) -> Result<()> {
    let Some(&f) = order.get(pos) else {
        if is_nt_tuple(g, fam)? {
            if out.len() >= cfg.max_tuples {
                return Err(Error::Capacity(format!("more than {} families", cfg.max_tuples)));
            }
            out.push(fam.clone());
        }
        return Ok(());
    };
    let below = (0..f.mask())
        .map(ColorSet::from_mask)
        .filter(|d| d.is_subset(f) && *d != f)
        .fold(VertexSet::EMPTY, |acc, d| acc | fam.get(d));
    let hi = g.jf_unchecked(f, fam.base());
    let mut choices = Vec::new();
    closed_sets_into(g.transfer_system(), f.complement(g.k()), below, hi, budget, &mut choices)?;
    for s in choices {
        fam.set(f, s);
        fill(g, order, pos + 1, fam, budget, cfg, out)?;
    }
    fam.set(f, VertexSet::EMPTY);
    Ok(())
}

pub fn enumerate_no_tuples(g: &KGraph) -> Result<Vec<TupleFamily>> {
    filter_nodes(enumerate_nt_tuples(g)?, |h| is_no_tuple(g, h))
}

/// NT-families containing `kf` componentwise.
pub fn enumerate_relative_no_tuples(g: &KGraph, kf: &TupleFamily) -> Result<Vec<TupleFamily>> {
    if kf.k() != g.k() {
        return Err(Error::input("relative family has the wrong rank"));
    }
    filter_nodes(enumerate_nt_tuples(g)?, |h| Ok(kf.is_subset(h)))
}

fn filter_nodes(
    nodes: Vec<TupleFamily>,
    mut keep: impl FnMut(&TupleFamily) -> Result<bool>,
) -> Result<Vec<TupleFamily>> {
    let mut out = Vec::new();
    for h in nodes {
        if keep(&h)? {
            out.push(h);
        }
    }
    Ok(out)
}

fn require_nt(g: &KGraph, h: &TupleFamily) -> Result<()> {
    if is_nt_tuple(g, h)? {
        Ok(())
    } else {
        Err(Error::pre(format!("{} is not an NT-family", h.show(g))))
    }
}

/// Componentwise intersection of two NT-families.
pub fn meet(g: &KGraph, l1: &TupleFamily, l2: &TupleFamily) -> Result<TupleFamily> {
    require_nt(g, l1)?;
    require_nt(g, l2)?;
    let m = l1.intersect(l2);
    if !is_nt_tuple(g, &m)? {
        return Err(Error::pre(format!("intersection {} is not an NT-family", m.show(g))));
    }
    Ok(m)
}

/// Least node of `nodes` above both families.
pub fn join(l1: &TupleFamily, l2: &TupleFamily, nodes: &[TupleFamily]) -> Result<TupleFamily> {
    if !nodes.contains(l1) || !nodes.contains(l2) {
        return Err(Error::pre("join arguments must be nodes of the lattice"));
    }
    let u = l1.union(l2);
    let j = nodes
        .iter()
        .filter(|n| u.is_subset(n))
        .fold(None::<TupleFamily>, |acc, n| Some(acc.map_or_else(|| n.clone(), |a| a.intersect(n))))
        .ok_or_else(|| Error::pre("no upper bound among the nodes"))?;
    if !nodes.contains(&j) {
        return Err(Error::pre("the nodes are not closed under intersection"));
    }
    Ok(j)
}

/// Result of the explicit join formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinFormula {
    pub family: TupleFamily,
    /// Number of iterations that changed the family.
    pub changing_rounds: usize,
}

/// Join via the quotient by `h0`: union the two families there, iterate the
/// absorbing operator `k - 1` times and pull back.
pub fn join_formula_check(g: &KGraph, l1: &TupleFamily, l2: &TupleFamily, h0: VertexSet) -> Result<JoinFormula> {
    if l1.k() != g.k() || l2.k() != g.k() {
        return Err(Error::input("families have the wrong rank"));
    }
    let (q, map) = g.quotient_with_map(h0)?;
    let k = g.k();
    let mut gf = TupleFamily::from_fn(k, |f| {
        if f.is_empty() {
            VertexSet::EMPTY
        } else {
            map.restrict(l1.get(f) | l2.get(f))
        }
    });
    let mut changing_rounds = 0;
    for _ in 0..k.saturating_sub(1) {
        let next = iterate_once(&q, &gf)?;
        if next != gf {
            changing_rounds += 1;
        }
        gf = next;
    }
    let family = TupleFamily::from_fn(k, |f| h0 | map.lift(gf.get(f)));
    Ok(JoinFormula { family, changing_rounds })
}

/// Per-node flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    pub is_no: bool,
    pub is_m: bool,
    /// Minimal `F` with nonempty component, for single-vertex graphs.
    pub antichain: Option<Vec<ColorSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    pub nodes: Vec<TupleFamily>,
    /// `(a, b)`: `nodes[b]` covers `nodes[a]`.
    pub covers: Vec<(usize, usize)>,
    pub annotations: Vec<Annotation>,
}

/// Covering relations of componentwise inclusion.
pub fn hasse(nodes: &[TupleFamily]) -> Result<Vec<(usize, usize)>> {
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(Error::input(format!("duplicate node at position {i}")));
        }
    }
    let mut covers = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        let above: Vec<usize> = (0..nodes.len()).filter(|&j| j != i && a.is_subset(&nodes[j])).collect();
        for &j in &above {
            if !above.iter().any(|&c| c != j && nodes[c].is_subset(&nodes[j])) {
                covers.push((i, j));
            }
        }
    }
    Ok(covers)
}

/// Generators of the upward-closed set `{F : H_F ≠ ∅}`.
pub fn antichain_label(h: &TupleFamily) -> Vec<ColorSet> {
    let present: Vec<ColorSet> =
        ColorSet::all_by_size(h.k()).into_iter().filter(|&f| !h.get(f).is_empty()).collect();
    present
        .iter()
        .copied()
        .filter(|&f| !present.iter().any(|&d| d != f && d.is_subset(f)))
        .collect()
}

pub fn show_antichain(a: &[ColorSet]) -> String {
    let parts: Vec<String> = a
        .iter()
        .map(|f| if f.is_empty() { "∅".to_string() } else { f.to_string() })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Hasse diagram plus per-node flags.
pub fn build_lattice(g: &KGraph, nodes: Vec<TupleFamily>) -> Result<IdealLattice> {
    let covers = hasse(&nodes)?;
    let mut annotations = Vec::new();
    for h in &nodes {
        annotations.push(Annotation {
            is_no: is_no_tuple(g, h)?,
            is_m: is_m_tuple(g, h)?,
            antichain: (g.n() == 1).then(|| antichain_label(h)),
        });
    }
    Ok(IdealLattice { nodes, covers, annotations })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node_label(g: &KGraph, h: &TupleFamily) -> String {
    let lines: Vec<String> = (0..1usize << g.k())
        .map(ColorSet::from_mask)
        .filter(|&f| !h.get(f).is_empty())
        .map(|f| dot_escape(&format!("{f}→{{{}}}", g.names(h.get(f)).join(","))))
        .collect();
    if lines.is_empty() {
        "0".to_string()
    } else {
        lines.join("\\n")
    }
}

/// Graphviz rendering; edges point from a node to the nodes covering it.
pub fn to_dot(g: &KGraph, lat: &IdealLattice) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, h) in lat.nodes.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", node_label(g, h));
    }
    for &(a, b) in &lat.covers {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

/// JSON rendering: `{"nodes": [...], "covers": [[a, b], ...]}`.
pub fn to_json(g: &KGraph, lat: &IdealLattice) -> serde_json::Value {
    let nodes: Vec<serde_json::Value> = lat
        .nodes
        .iter()
        .zip(&lat.annotations)
        .enumerate()
        .map(|(i, (h, a))| {
            let mut v = serde_json::json!({
                "id": i,
                "components": family_to_doc(g, h).components,
                "is_no": a.is_no,
                "is_m": a.is_m,
            });
            if let Some(ac) = &a.antichain {
                let sets: Vec<Vec<usize>> = ac.iter().map(|f| f.colors().collect()).collect();
                v["antichain"] = serde_json::json!(sets);
            }
            v
        })
        .collect();
    serde_json::json!({ "nodes": nodes, "covers": lat.covers })
}

/// Checks for sourceless graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularReport {
    pub nt_count: usize,
    /// `(H0, V, ..., V)` for hereditary negatively invariant `H0`.
    pub no_expected: Vec<TupleFamily>,
    pub no_enumerated: Vec<TupleFamily>,
    pub no_match: bool,
    /// Antichain label of each NT-family, for single-vertex graphs.
    pub antichains: Option<Vec<Vec<ColorSet>>>,
    /// Labels are distinct and each family is the upward closure of its label.
    pub antichain_match: Option<bool>,
}

pub fn regular_case_report(g: &KGraph) -> Result<RegularReport> {
    if !g.is_sourceless() {
        return Err(Error::pre("the graph has sources"));
    }
    let nt = enumerate_nt_tuples(g)?;
    let mut no_enumerated = Vec::new();
    for h in &nt {
        if is_no_tuple(g, h)? {
            no_enumerated.push(h.clone());
        }
    }
    let mut no_expected = Vec::new();
    for h0 in hereditary_sets(g) {
        if is_neg_invariant(g, h0)? {
            no_expected.push(TupleFamily::from_fn(g.k(), |f| if f.is_empty() { h0 } else { g.all_vertices() }));
        }
    }
    no_expected.sort();
    let no_match = no_expected == no_enumerated;
    let (antichains, antichain_match) = if g.n() == 1 {
        let labels: Vec<Vec<ColorSet>> = nt.iter().map(antichain_label).collect();
        let rebuilt = labels.iter().zip(&nt).all(|(a, h)| {
            *h == TupleFamily::from_fn(g.k(), |f| {
                if a.iter().any(|d| d.is_subset(f)) {
                    g.all_vertices()
                } else {
                    VertexSet::EMPTY
                }
            })
        });
        let distinct = labels.iter().enumerate().all(|(i, a)| !labels[..i].contains(a));
        (Some(labels), Some(rebuilt && distinct))
    } else {
        (None, None)
    };
    Ok(RegularReport { nt_count: nt.len(), no_expected, no_enumerated, no_match, antichains, antichain_match })
}

/// Checks for locally convex graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsyReport {
    pub hereditary_saturated: Vec<VertexSet>,
    /// Image of each hereditary saturated set: `H0` at `∅`, tracing ∪ `H0` elsewhere.
    pub images: Vec<TupleFamily>,
    pub no_tuples: Vec<TupleFamily>,
    pub bijective: bool,
    /// NO-lattice joins equal images of saturated unions.
    pub joins_match: bool,
}

pub fn rsy_family(g: &KGraph, h0: VertexSet) -> TupleFamily {
    let tr = tracing_family(g);
    TupleFamily::from_fn(g.k(), |f| if f.is_empty() { h0 } else { tr.get(f) | h0 })
}

pub fn rsy_report(g: &KGraph) -> Result<RsyReport> {
    if !g.is_locally_convex() {
        return Err(Error::pre("the graph is not locally convex"));
    }
    let hereditary_saturated: Vec<VertexSet> =
        hereditary_sets(g).into_iter().filter(|&h| g.is_saturated(h)).collect();
    let images: Vec<TupleFamily> = hereditary_saturated.iter().map(|&h| rsy_family(g, h)).collect();
    let no_tuples = enumerate_no_tuples(g)?;
    let mut sorted = images.clone();
    sorted.sort();
    let bijective = sorted == no_tuples;
    let mut joins_match = bijective;
    if bijective {
        'outer: for (i, &a) in hereditary_saturated.iter().enumerate() {
            for &b in &hereditary_saturated[i..] {
                let lhs = join(&rsy_family(g, a), &rsy_family(g, b), &no_tuples)?;
                let rhs = rsy_family(g, g.saturation(a | b)?);
                if lhs != rhs {
                    joins_match = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(RsyReport { hereditary_saturated, images, no_tuples, bijective, joins_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fx1, fx2, fx3};

    fn fam(g: &KGraph, comps: &[&[&str]]) -> TupleFamily {
        TupleFamily::from_components(g.k(), comps.iter().map(|c| g.vertex_set(c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn closed_set_search() {
        let g = fx2();
        let sets = hereditary_sets(&g);
        assert_eq!(sets, vec![VertexSet::EMPTY, g.vertex_set(&["w"]).unwrap(), g.all_vertices()]);
    }

    #[test]
    fn counts_on_fixtures() {
        assert_eq!(enumerate_nt_tuples(&fx1(1)).unwrap().len(), 3);
        assert_eq!(enumerate_nt_tuples(&fx1(2)).unwrap().len(), 6);
        assert_eq!(enumerate_nt_tuples(&fx1(3)).unwrap().len(), 20);
    }

    #[test]
    fn fx2_enumeration() {
        let g = fx2();
        let got = enumerate_nt_tuples(&g).unwrap();
        let want = vec![
            fam(&g, &[&[], &[]]),
            fam(&g, &[&[], &["u"]]),
            fam(&g, &[&["w"], &["w"]]),
            fam(&g, &[&["u", "w"], &["u", "w"]]),
        ];
        assert_eq!(got, want);
        let no = enumerate_no_tuples(&g).unwrap();
        assert_eq!(no, vec![fam(&g, &[&[], &["u"]]), fam(&g, &[&["u", "w"], &["u", "w"]])]);
        assert_eq!(enumerate_relative_no_tuples(&g, &TupleFamily::empty(1)).unwrap(), got);
    }

    #[test]
    fn fx1_no_tuples() {
        let g = fx1(2);
        assert_eq!(enumerate_no_tuples(&g).unwrap().len(), 2);
    }

    #[test]
    fn meet_and_join_fx2() {
        let g = fx2();
        let nodes = enumerate_nt_tuples(&g).unwrap();
        let a = fam(&g, &[&[], &["u"]]);
        let b = fam(&g, &[&["w"], &["w"]]);
        assert_eq!(meet(&g, &a, &b).unwrap(), TupleFamily::empty(1));
        let top = TupleFamily::constant(1, g.all_vertices());
        assert_eq!(join(&a, &b, &nodes).unwrap(), top);
        assert_eq!(join(&a, &a, &nodes).unwrap(), a);
        assert_eq!(meet(&g, &a, &a).unwrap(), a);
        assert_eq!(meet(&g, &TupleFamily::empty(1), &a).unwrap(), TupleFamily::empty(1));
        let jf = join_formula_check(&g, &a, &b, g.all_vertices()).unwrap();
        assert_eq!(jf.family, top);
        assert_eq!(join_formula_check(&g, &a, &a, a.base()).unwrap().family, a);
        assert!(meet(&g, &fam(&g, &[&["u"], &["u"]]), &a).is_err());
    }

    #[test]
    fn join_formula_fx1() {
        let g = fx1(2);
        let v = VertexSet::singleton(0);
        let e = VertexSet::EMPTY;
        let one = TupleFamily::from_components(2, vec![e, v, e, v]).unwrap();
        let two = TupleFamily::from_components(2, vec![e, e, v, v]).unwrap();
        let both = TupleFamily::from_components(2, vec![e, v, v, v]).unwrap();
        assert_eq!(join_formula_check(&g, &one, &two, e).unwrap().family, both);
        let nodes = enumerate_nt_tuples(&g).unwrap();
        assert_eq!(join(&one, &two, &nodes).unwrap(), both);
    }

    #[test]
    fn hasse_shapes() {
        let g = fx2();
        let nodes = enumerate_nt_tuples(&g).unwrap();
        let covers = hasse(&nodes).unwrap();
        assert_eq!(covers, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(hasse(&nodes[..1]).unwrap().is_empty());
        assert!(hasse(&[nodes[0].clone(), nodes[0].clone()]).is_err());
    }

    #[test]
    fn fx1_lattice_is_upsets_of_the_square() {
        let g = fx1(2);
        let lat = build_lattice(&g, enumerate_nt_tuples(&g).unwrap()).unwrap();
        // the 6 upsets of P([2]): 0 < {12} < {2}, {1} < {1}{2} < {∅}
        assert_eq!(lat.covers.len(), 6);
        let labels: Vec<String> =
            lat.annotations.iter().map(|a| show_antichain(a.antichain.as_ref().unwrap())).collect();
        assert_eq!(labels, vec!["{}", "{{1,2}}", "{{2}}", "{{1}}", "{{1}, {2}}", "{∅}"]);
        let dot = to_dot(&g, &lat);
        assert_eq!(dot, to_dot(&g, &lat));
        assert!(dot.contains("n0 [label=\"0\"]"));
        assert!(dot.contains("{1,2}→{v}"));
    }

    #[test]
    fn reports_on_fixtures() {
        for (k, count) in [(1, 3), (2, 6), (3, 20)] {
            let r = regular_case_report(&fx1(k)).unwrap();
            assert_eq!(r.nt_count, count);
            assert!(r.no_match);
            assert_eq!(r.antichain_match, Some(true));
        }
        assert!(regular_case_report(&fx2()).is_err());
        let r = rsy_report(&fx2()).unwrap();
        assert_eq!(r.hereditary_saturated, vec![VertexSet::EMPTY, fx2().all_vertices()]);
        assert!(r.bijective && r.joins_match);
        let r = rsy_report(&fx1(2)).unwrap();
        assert_eq!(r.no_tuples.len(), 2);
        assert!(r.bijective && r.joins_match);
        assert!(rsy_report(&fx3()).unwrap().bijective);
    }

    #[test]
    fn capacity_guard() {
        let cfg = EnumConfig { max_cells: 2, ..EnumConfig::default() };
        assert!(matches!(enumerate_nt_tuples_with(&fx1(2), &cfg), Err(Error::Capacity(_))));
    }
}
