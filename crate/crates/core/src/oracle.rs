//! Naive reference implementations used to cross-check the main routes.
//!
//! Nothing here calls the reachability, tracing or eventual-containment
//! code of the main path; each check is spelled out directly from its
//! definition, usually by brute force.

use std::collections::HashMap;

use crate::dynsys::DynSys;
use crate::error::{Error, Result};
use crate::kgraph::KGraph;
use crate::sets::{ColorSet, Degree, VertexSet};
use crate::transfer::TransferSystem;
use crate::tuple::TupleFamily;

/// Largest box (number of degrees) `boxed_eventual` will evaluate.
pub const MAX_BOX: usize = 1 << 22;
/// Largest vertex count for the `2^n` sweeps.
pub const MAX_BRUTE: usize = 16;

fn brute_guard(n: usize) -> Result<()> {
    if n > MAX_BRUTE {
        return Err(Error::Capacity(format!("{n} vertices is too many for exhaustive search")));
    }
    Ok(())
}

/// `s(e) ∈ H` whenever `r(e) ∈ H` and `color(e) ∈ colors`.
fn closed_by_scan(g: &KGraph, colors: ColorSet, h: VertexSet) -> bool {
    g.edges().iter().all(|e| !colors.contains(e.color) || !h.contains(e.range) || h.contains(e.source))
}

/// All pairs `(H0, H1)` where `H0` is hereditary and
/// `H0 ⊆ H1 ⊆ H0 ∪ {v : some edge into v has its source outside H0}`.
///
/// The bound is `J(I, X)` at vertex level: `δ_v · X^{-1}(I) ⊆ I` fails
/// exactly when every edge into `v` starts in `H0` and `v ∉ H0`.
pub fn katsura_tpairs(g: &KGraph) -> Result<Vec<(VertexSet, VertexSet)>> {
    if g.k() != 1 {
        return Err(Error::input(format!("T-pairs need a 1-graph, got rank {}", g.k())));
    }
    brute_guard(g.n())?;
    let n = g.n();
    let mut out = Vec::new();
    for b0 in 0..1u64 << n {
        let h0 = VertexSet(b0);
        if !closed_by_scan(g, ColorSet::single(1), h0) {
            continue;
        }
        let mut bound = h0;
        for e in g.edges() {
            if !h0.contains(e.source) {
                bound.insert(e.range);
            }
        }
        for b1 in 0..1u64 << n {
            let h1 = VertexSet(b1);
            if h0.is_subset(h1) && h1.is_subset(bound) {
                out.push((h0, h1));
            }
        }
    }
    Ok(out)
}

/// The pairs as rank-1 families, in canonical order.
pub fn pairs_to_families(pairs: &[(VertexSet, VertexSet)]) -> Vec<TupleFamily> {
    let mut out: Vec<TupleFamily> = pairs
        .iter()
        .map(|&(a, b)| TupleFamily::from_components(1, vec![a, b]).expect("rank 1"))
        .collect();
    out.sort();
    out
}

/// T-pairs of a single partial map, through the function-algebra picture:
/// `H0` with `σ^{-1}(H0) ⊆ H0`, and `H1 ∖ H0` avoiding the kernel of the
/// induced map on the quotient, i.e. inside `σ(V ∖ H0)`.
pub fn katsura_tpairs_dyn(ds: &DynSys) -> Result<Vec<(VertexSet, VertexSet)>> {
    if ds.d() != 1 {
        return Err(Error::input(format!("T-pairs need a single map, got {}", ds.d())));
    }
    let n = ds.n();
    brute_guard(n)?;
    let mut out = Vec::new();
    for b0 in 0..1u64 << n {
        let h0 = VertexSet(b0);
        let invariant = (0..n).all(|u| match ds.apply(1, u) {
            Some(w) => !h0.contains(w) || h0.contains(u),
            None => true,
        });
        if !invariant {
            continue;
        }
        let mut range = VertexSet::EMPTY;
        for u in 0..n {
            if !h0.contains(u) {
                if let Some(w) = ds.apply(1, u) {
                    range.insert(w);
                }
            }
        }
        let bound = h0 | range;
        for b1 in 0..1u64 << n {
            let h1 = VertexSet(b1);
            if h0.is_subset(h1) && h1.is_subset(bound) {
                out.push((h0, h1));
            }
        }
    }
    Ok(out)
}

/// Least `(r, q)` with `m^(r+q) = m^r`, found by iterating the whole map.
fn index_period(m: &[usize]) -> (usize, usize) {
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut cur: Vec<usize> = (0..m.len()).collect();
    let mut step = 0;
    loop {
        if let Some(&first) = seen.get(&cur) {
            return (first, step - first);
        }
        let next = cur.iter().map(|&x| m[x]).collect();
        seen.insert(std::mem::replace(&mut cur, next), step);
        step += 1;
    }
}

/// The box `r + 2q` (zero on inactive colors) for the orbit of `start`.
pub fn oracle_box(t: &TransferSystem, active: ColorSet, start: VertexSet) -> Result<Degree> {
    let shape = orbit_shape(t, active, start)?;
    Ok(Degree((0..t.k()).map(|c| shape.get(&(c + 1)).map_or(0, |&(r, q)| (r + 2 * q) as u32)).collect()))
}

fn orbit_shape(t: &TransferSystem, active: ColorSet, start: VertexSet) -> Result<HashMap<usize, (usize, usize)>> {
    if !active.is_subset(ColorSet::full(t.k())) {
        return Err(Error::input(format!("active colors {active} exceed rank {}", t.k())));
    }
    let colors: Vec<usize> = active.colors().collect();
    let mut states = vec![start];
    let mut index: HashMap<VertexSet, usize> = HashMap::from([(start, 0)]);
    let mut i = 0;
    while i < states.len() {
        for &c in &colors {
            let s = t.apply(c, states[i]);
            if !index.contains_key(&s) {
                if states.len() >= MAX_BOX {
                    return Err(Error::Capacity("orbit too large".into()));
                }
                index.insert(s, states.len());
                states.push(s);
            }
        }
        i += 1;
    }
    let mut out = HashMap::new();
    for &c in &colors {
        let m: Vec<usize> = states.iter().map(|&s| index[&t.apply(c, s)]).collect();
        out.insert(c, index_period(&m));
    }
    Ok(out)
}

/// Evaluates "`T^n(start) ⊆ target` from some point on" inside a finite
/// box: true iff every `n` in the top period window `[box - q, box]` of the
/// box is good. Errors with `Inconclusive` when the box is smaller than
/// `r + 2q` in some active color.
pub fn boxed_eventual(
    t: &TransferSystem,
    active: ColorSet,
    start: VertexSet,
    target: VertexSet,
    bx: &Degree,
) -> Result<bool> {
    if bx.rank() != t.k() {
        return Err(Error::input("box rank differs from the system rank"));
    }
    if active.is_empty() {
        return Ok(start.is_subset(target));
    }
    let shape = orbit_shape(t, active, start)?;
    let colors: Vec<usize> = active.colors().collect();
    let mut dims = Vec::new();
    for &c in &colors {
        let (r, q) = shape[&c];
        let b = bx.get(c) as usize;
        if b < r + 2 * q {
            return Err(Error::Inconclusive(format!("box {b} in color {c} is below r + 2q = {}", r + 2 * q)));
        }
        dims.push(b + 1);
    }
    let cells: usize = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d)).unwrap_or(usize::MAX);
    if cells > MAX_BOX {
        return Err(Error::Capacity(format!("box has more than {MAX_BOX} degrees")));
    }
    // value[idx] = T^n(start), n in mixed radix, first color fastest
    let mut value = vec![VertexSet::EMPTY; cells];
    let mut n = vec![0usize; colors.len()];
    for idx in 0..cells {
        let mut rem = idx;
        for (slot, d) in dims.iter().enumerate() {
            n[slot] = rem % d;
            rem /= d;
        }
        value[idx] = match n.iter().position(|&x| x > 0) {
            None => start,
            Some(slot) => {
                let stride: usize = dims[..slot].iter().product();
                t.apply(colors[slot], value[idx - stride])
            }
        };
        let in_window = colors.iter().enumerate().all(|(slot, c)| n[slot] + shape[c].1 >= dims[slot] - 1);
        if in_window && !value[idx].is_subset(target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quotient skeleton `Λ ∖ H0`, kept on the original vertex indices.
struct Remainder {
    k: usize,
    alive: VertexSet,
    /// `(color, range, source)` of every edge with both ends alive.
    edges: Vec<(usize, usize, usize)>,
}

impl Remainder {
    fn new(g: &KGraph, h0: VertexSet) -> Self {
        let alive = g.all_vertices() - h0;
        let edges = g
            .edges()
            .iter()
            .filter(|e| alive.contains(e.range) && alive.contains(e.source))
            .map(|e| (e.color, e.range, e.source))
            .collect();
        Remainder { k: g.k(), alive, edges }
    }

    /// Vertices `s(λ)` for paths `λ` from `v` with colors in `colors`.
    fn reach(&self, colors: ColorSet, v: usize) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &(c, r, s) in &self.edges {
                if r == x && colors.contains(c) && !seen.contains(s) {
                    seen.insert(s);
                    stack.push(s);
                }
            }
        }
        seen
    }

    fn emits(&self, v: usize, c: usize) -> bool {
        self.edges.iter().any(|&(col, r, _)| col == c && r == v)
    }

    /// Every vertex `F^c`-reachable from `v` emits an edge of some color in `F`.
    fn is_tracing(&self, f: ColorSet, v: usize) -> bool {
        self.reach(f.complement(self.k), v).iter().all(|w| f.colors().any(|c| self.emits(w, c)))
    }

    fn transfer(&self, n: usize) -> Result<TransferSystem> {
        let mut images = vec![vec![VertexSet::EMPTY; n]; self.k];
        for &(c, r, s) in &self.edges {
            images[c - 1][r].insert(s);
        }
        TransferSystem::new(n, images)
    }
}

/// NT decision through absorbent families of the quotient: the three
/// structural conditions checked literally, then for each `∅ ≠ F ⊊ [k]`
/// every vertex of `Λ ∖ H_∅` that is `F`-tracing there, reaches only
/// `∩_{D ⊋ F} (H_D ∖ H_∅)` along `F^c`, and whose `F^c`-sources eventually
/// lie in `H_F ∖ H_∅`, must itself lie in `H_F`.
pub fn nt_via_absorbent(g: &KGraph, h: &TupleFamily) -> Result<bool> {
    let k = g.k();
    if h.k() != k || h.components().iter().any(|s| !s.is_subset(g.all_vertices())) {
        return Err(Error::input("family does not fit the graph"));
    }
    let h0 = h.base();
    let subsets = || (0..1usize << k).map(ColorSet::from_mask);
    // (i): H_F ⊆ H0 ∪ {v : some F-colored edge into v starts outside H0}
    for f in subsets().filter(|f| !f.is_empty()) {
        let mut bound = h0;
        for e in g.edges() {
            if f.contains(e.color) && !h0.contains(e.source) {
                bound.insert(e.range);
            }
        }
        if !h.get(f).is_subset(bound) {
            return Ok(false);
        }
    }
    // (ii)
    for f in subsets() {
        if !closed_by_scan(g, f.complement(k), h.get(f)) {
            return Ok(false);
        }
    }
    // (iii), over all pairs
    for d in subsets() {
        for f in subsets() {
            if d.is_subset(f) && !h.get(d).is_subset(h.get(f)) {
                return Ok(false);
            }
        }
    }
    let rem = Remainder::new(g, h0);
    let t = rem.transfer(g.n())?;
    let a = |f: ColorSet| h.get(f) - h0;
    for f in subsets().filter(|f| !f.is_empty() && *f != ColorSet::full(k)) {
        let fc = f.complement(k);
        let above = subsets().filter(|d| f.is_subset(*d) && *d != f).fold(rem.alive, |acc, d| acc & a(d));
        for v in (rem.alive - a(f)).iter() {
            if !rem.is_tracing(f, v) || !rem.reach(fc, v).is_subset(above) {
                continue;
            }
            let start = VertexSet::singleton(v);
            let bx = oracle_box(&t, fc, start)?;
            if boxed_eventual(&t, fc, start, a(f), &bx)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `F`-tracing vertices by direct search from each vertex.
pub fn tracing_oracle(g: &KGraph, f: ColorSet) -> VertexSet {
    let rem = Remainder::new(g, VertexSet::EMPTY);
    VertexSet::from_indices((0..g.n()).filter(|&v| rem.is_tracing(f, v)))
}

/// NO decision: the absorbent NT route plus tracing containment.
pub fn no_via_absorbent(g: &KGraph, h: &TupleFamily) -> Result<bool> {
    if !nt_via_absorbent(g, h)? {
        return Ok(false);
    }
    Ok((1..1usize << g.k()).map(ColorSet::from_mask).all(|f| tracing_oracle(g, f).is_subset(h.get(f))))
}

/// Families `H_F = {v}` for `F` in the up-closure of an antichain, one per
/// antichain of subsets of `[k]`, in canonical order.
pub fn antichain_families(g: &KGraph) -> Result<Vec<TupleFamily>> {
    if g.n() != 1 {
        return Err(Error::input("antichain families need a single-vertex graph"));
    }
    let k = g.k();
    let m = 1usize << k;
    if m > 16 {
        return Err(Error::Capacity(format!("rank {k} has too many antichains to list")));
    }
    let mut out = Vec::new();
    // a subset S of P([k]) (as a bit mask over masks) is an antichain when no
    // two distinct members are nested
    for s in 0..1u64 << m {
        let members: Vec<usize> = (0..m).filter(|&x| s >> x & 1 == 1).collect();
        let nested = members.iter().any(|&x| members.iter().any(|&y| x != y && x & y == x));
        if nested {
            continue;
        }
        let fam = TupleFamily::from_fn(k, |f| {
            if members.iter().any(|&x| x & f.mask() == x) {
                VertexSet::singleton(0)
            } else {
                VertexSet::EMPTY
            }
        });
        out.push(fam);
    }
    out.sort();
    Ok(out)
}

/// Subsets fixed by every map, by sweeping all `2^n` subsets.
pub fn invariant_subsets_bruteforce(ds: &DynSys) -> Result<Vec<VertexSet>> {
    brute_guard(ds.n())?;
    let mut out = Vec::new();
    for b in 0..1u64 << ds.n() {
        let h = VertexSet(b);
        if (1..=ds.d()).all(|c| ds.image(c, h) == h) {
            out.push(h);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fx1, fx2, fx3};

    #[test]
    fn tpair_examples() {
        let fx2 = fx2();
        assert_eq!(katsura_tpairs(&fx2).unwrap().len(), 4);
        assert_eq!(katsura_tpairs(&fx1(1)).unwrap().len(), 3);
        let lone = KGraph::from_names(1, &["v"], &[], &[]).unwrap();
        assert_eq!(
            katsura_tpairs(&lone).unwrap(),
            vec![(VertexSet::EMPTY, VertexSet::EMPTY), (VertexSet::singleton(0), VertexSet::singleton(0))]
        );
        assert!(katsura_tpairs(&fx3()).is_err());
    }

    #[test]
    fn boxed_examples() {
        let g = fx3();
        let t = g.transfer_system();
        let u = g.vertex_set(&["u"]).unwrap();
        let w = g.vertex_set(&["w"]).unwrap();
        let two = ColorSet::single(2);
        assert!(boxed_eventual(t, two, u, w, &Degree(vec![0, 4])).unwrap());
        assert!(matches!(boxed_eventual(t, two, u, w, &Degree(vec![0, 0])), Err(Error::Inconclusive(_))));
        let g1 = fx1(2);
        let v = VertexSet::singleton(0);
        assert!(!boxed_eventual(g1.transfer_system(), ColorSet::full(2), v, VertexSet::EMPTY, &Degree(vec![4, 4])).unwrap());
        assert!(boxed_eventual(t, ColorSet::EMPTY, u, u, &Degree(vec![0, 0])).unwrap());
    }

    #[test]
    fn index_period_of_small_maps() {
        assert_eq!(index_period(&[1, 2, 0]), (0, 3));
        assert_eq!(index_period(&[1, 2, 2]), (2, 1));
        assert_eq!(index_period(&[1, 0, 0, 2]), (2, 2));
    }

    #[test]
    fn absorbent_examples() {
        let g = fx3();
        let h = TupleFamily::from_components(
            2,
            vec![VertexSet::EMPTY, g.vertex_set(&["w"]).unwrap(), VertexSet::EMPTY, g.all_vertices()],
        )
        .unwrap();
        assert!(!nt_via_absorbent(&g, &h).unwrap());
        assert!(nt_via_absorbent(&g, &TupleFamily::empty(2)).unwrap());
    }

    #[test]
    fn tracing_examples() {
        let g = fx2();
        assert_eq!(tracing_oracle(&g, ColorSet::single(1)), g.vertex_set(&["u"]).unwrap());
        let g3 = fx3();
        assert_eq!(tracing_oracle(&g3, ColorSet::single(2)), g3.all_vertices());
        assert!(!no_via_absorbent(&fx1(2), &TupleFamily::empty(2)).unwrap());
    }

    #[test]
    fn antichain_counts() {
        let counts: Vec<usize> = (1..=3).map(|k| antichain_families(&fx1(k)).unwrap().len()).collect();
        assert_eq!(counts, vec![3, 6, 20]);
    }
}
