//! Seeded random graphs, transfer systems, dynamics and families for
//! randomized testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynsys::DynSys;
use crate::kgraph::{Edge, KGraph, Square};
use crate::sets::{ColorSet, VertexSet};
use crate::transfer::TransferSystem;
use crate::tuple::{inv_closure, po_closure, TupleFamily};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const EDGE_PREFIX: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn vertex_names(n: usize) -> Vec<String> {
    (0..n).map(|v| format!("v{v}")).collect()
}

/// A 1-graph with `1..=max_vertices` vertices and at most `max_edges` edges.
pub fn random_1graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> KGraph {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_edges);
    let edges = (0..m)
        .map(|e| Edge { id: format!("a{e}"), color: 1, range: rng.gen_range(0..n), source: rng.gen_range(0..n) })
        .collect();
    KGraph::new(1, vertex_names(n), edges, Vec::new()).expect("random 1-graph is well formed")
}

/// `counts[r][s]` edges from `s` to `r`.
type Counts = Vec<Vec<usize>>;

fn mat_mul(a: &Counts, b: &Counts) -> Counts {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

fn random_counts(rng: &mut impl Rng, n: usize, density: f64) -> Counts {
    (0..n)
        .map(|_| (0..n).map(|_| if rng.gen_bool(density) { 1 + usize::from(rng.gen_bool(0.15)) } else { 0 }).collect())
        .collect()
}

fn identity_counts(n: usize) -> Counts {
    (0..n).map(|i| (0..n).map(|j| usize::from(i == j)).collect()).collect()
}

/// Count matrices for `k` colors that pairwise commute.
fn commuting_counts(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Counts> {
    let mut mats: Vec<Counts> = vec![random_counts(rng, n, 0.4)];
    while mats.len() < k {
        let mut found = None;
        for _ in 0..200 {
            let cand = random_counts(rng, n, 0.4);
            if mats.iter().all(|m| mat_mul(m, &cand) == mat_mul(&cand, m)) {
                found = Some(cand);
                break;
            }
        }
        let cand = found.unwrap_or_else(|| match rng.gen_range(0..3) {
            0 => identity_counts(n),
            1 => mats[0].clone(),
            _ => vec![vec![0; n]; n],
        });
        // the fallbacks only commute with everything when mats has one entry
        if mats.iter().all(|m| mat_mul(m, &cand) == mat_mul(&cand, m)) {
            mats.push(cand);
        } else {
            mats.push(identity_counts(n));
        }
    }
    mats
}

/// A k-graph built from commuting count matrices with random square
/// bijections; `None` if the factorisation rules fail (possible for `k ≥ 3`).
pub fn try_random_kgraph(rng: &mut impl Rng, k: usize, n: usize) -> Option<KGraph> {
    let mats = commuting_counts(rng, n, k);
    let mut edges = Vec::new();
    let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (c, m) in mats.iter().enumerate() {
        for r in 0..n {
            for s in 0..n {
                for _ in 0..m[r][s] {
                    by_color[c].push(edges.len());
                    edges.push(Edge { id: format!("{}{}", EDGE_PREFIX[c], by_color[c].len() - 1), color: c + 1, range: r, source: s });
                }
            }
        }
    }
    let mut squares: Vec<Square> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            // left paths e·f (e color i, f color j) and right paths f'·e', both keyed by (range, source)
            let mut left = std::collections::BTreeMap::<(usize, usize), Vec<(usize, usize)>>::new();
            let mut right = left.clone();
            for &e in &by_color[i] {
                for &f in &by_color[j] {
                    if edges[e].source == edges[f].range {
                        left.entry((edges[e].range, edges[f].source)).or_default().push((e, f));
                    }
                    if edges[f].source == edges[e].range {
                        right.entry((edges[f].range, edges[e].source)).or_default().push((f, e));
                    }
                }
            }
            for (key, ls) in left {
                let mut rs = right.remove(&key)?;
                if rs.len() != ls.len() {
                    return None;
                }
                rs.shuffle(rng);
                for ((e, f), (f2, e2)) in ls.into_iter().zip(rs) {
                    squares.push([e, f, f2, e2]);
                }
            }
            if !right.is_empty() {
                return None;
            }
        }
    }
    let g = KGraph::new(k, vertex_names(n), edges, squares).ok()?;
    g.is_valid().then_some(g)
}

/// A valid k-graph on `1..=max_vertices` vertices, retrying until the
/// factorisation rules hold.
pub fn random_kgraph(rng: &mut impl Rng, k: usize, max_vertices: usize) -> KGraph {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        if let Some(g) = try_random_kgraph(rng, k, n) {
            return g;
        }
    }
}

/// A random partial map: each point is mapped with probability `p`.
fn random_partial_map(rng: &mut impl Rng, n: usize, p: f64) -> Vec<Option<usize>> {
    (0..n).map(|_| rng.gen_bool(p).then(|| rng.gen_range(0..n))).collect()
}

fn compose(a: &[Option<usize>], b: &[Option<usize>]) -> Vec<Option<usize>> {
    b.iter().map(|x| x.and_then(|y| a[y])).collect()
}

fn power(m: &[Option<usize>], e: usize) -> Vec<Option<usize>> {
    let mut out: Vec<Option<usize>> = (0..m.len()).map(Some).collect();
    for _ in 0..e {
        out = compose(m, &out);
    }
    out
}

/// Commuting partial maps: powers of one random map, or a random tuple
/// accepted by the commutation check.
pub fn random_dynsys(rng: &mut impl Rng, d: usize, max_points: usize) -> DynSys {
    let n = rng.gen_range(1..=max_points);
    loop {
        let maps: Vec<Vec<Option<usize>>> = if rng.gen_bool(0.7) {
            let base = random_partial_map(rng, n, 0.8);
            (0..d).map(|_| power(&base, rng.gen_range(0..=3))).collect()
        } else {
            (0..d).map(|_| random_partial_map(rng, n, 0.8)).collect()
        };
        let ds = DynSys::from_maps(maps).expect("sizes match");
        if crate::dynsys::validate_dynsys(&ds).is_empty() {
            return ds;
        }
    }
}

/// Commuting permutations: powers of a random permutation, possibly
/// composed with an independent permutation on a block it preserves.
pub fn random_automorphic(rng: &mut impl Rng, d: usize, n: usize) -> DynSys {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let base: Vec<Option<usize>> = perm.into_iter().map(Some).collect();
    let maps = (0..d).map(|_| power(&base, rng.gen_range(0..n.max(1) * 2))).collect();
    DynSys::from_maps(maps).expect("sizes match")
}

/// Union-additive commuting maps: boolean powers of one relation, or the
/// transfer maps of a random graph or dynamical system.
pub fn random_transfer_system(rng: &mut impl Rng, k: usize, max_points: usize) -> TransferSystem {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(1..=max_points);
            let density = rng.gen_range(0.1..0.5);
            let rel: Vec<VertexSet> = (0..n)
                .map(|_| VertexSet::from_indices((0..n).filter(|_| rng.gen_bool(density))))
                .collect();
            let apply = |s: VertexSet| s.iter().fold(VertexSet::EMPTY, |acc, v| acc | rel[v]);
            let images = (0..k)
                .map(|_| {
                    let e = rng.gen_range(0..=3);
                    (0..n)
                        .map(|v| (0..e).fold(VertexSet::singleton(v), |s, _| apply(s)))
                        .collect()
                })
                .collect();
            TransferSystem::new(n, images).expect("sizes match")
        }
        1 => crate::dynsys::dyn_transfer(&random_dynsys(rng, k, max_points)).expect("valid system"),
        _ => random_kgraph(rng, k.min(2), max_points.min(5)).transfer_system().clone().widen(k),
    }
}

impl TransferSystem {
    /// Pad with identity maps up to rank `k`.
    fn widen(mut self, k: usize) -> TransferSystem {
        if self.k() >= k {
            return self;
        }
        let n = self.n();
        let mut images: Vec<Vec<VertexSet>> = (1..=self.k()).map(|c| (0..n).map(|v| self.image(c, v)).collect()).collect();
        while images.len() < k {
            images.push((0..n).map(VertexSet::singleton).collect());
        }
        self = TransferSystem::new(n, images).expect("sizes match");
        self
    }
}

fn random_set(rng: &mut impl Rng, n: usize, p: f64) -> VertexSet {
    VertexSet::from_indices((0..n).filter(|_| rng.gen_bool(p)))
}

/// Uniformly random components.
pub fn random_family(rng: &mut impl Rng, g: &KGraph) -> TupleFamily {
    TupleFamily::from_fn(g.k(), |_| random_set(rng, g.n(), 0.5))
}

/// Random components pushed through the hereditary and partial-order
/// closures, so that the first three NT conditions often hold and the
/// maximality condition is exercised.
pub fn random_closed_family(rng: &mut impl Rng, g: &KGraph) -> TupleFamily {
    let p = rng.gen_range(0.05..0.5);
    let mut h = TupleFamily::from_fn(g.k(), |f| if f.is_empty() || rng.gen_bool(0.7) { random_set(rng, g.n(), p) } else { VertexSet::EMPTY });
    h.set(ColorSet::EMPTY, g.transfer_system().reach(g.all_colors(), h.base()));
    loop {
        let next = po_closure(&inv_closure(g, &h).expect("shapes match"));
        if next == h {
            return h;
        }
        h = next;
    }
}

/// A random family with empty base, each component inside the tracing set
/// of its colors, hereditary and partially ordered.
pub fn random_e_family(rng: &mut impl Rng, g: &KGraph) -> TupleFamily {
    let mut h = TupleFamily::from_fn(g.k(), |f| {
        if f.is_empty() {
            VertexSet::EMPTY
        } else {
            g.f_tracing(f).expect("nonempty colors") & random_set(rng, g.n(), 0.4)
        }
    });
    loop {
        let next = po_closure(&inv_closure(g, &h).expect("shapes match"));
        if next == h {
            return h;
        }
        h = next;
    }
}
