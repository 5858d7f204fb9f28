//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kideal::corpus::{
    random_1graph, random_automorphic, random_closed_family, random_dynsys, random_e_family, random_family,
    random_kgraph, random_transfer_system, rng, try_random_kgraph,
};
use kideal::dynsys::{
    dyn_invariant_subsets, dyn_is_no_tuple, dyn_is_nt_tuple, dyn_to_kgraph, dyn_tracing, full_above, DynSys,
};
use kideal::fixtures::{fx1, fx2, fx3};
use kideal::lattice::{enumerate_no_tuples, enumerate_nt_tuples, hasse, join, join_formula_check, rsy_report};
use kideal::oracle::{
    antichain_families, boxed_eventual, invariant_subsets_bruteforce, katsura_tpairs, katsura_tpairs_dyn,
    nt_via_absorbent, oracle_box, pairs_to_families,
};
use kideal::tuple::{check_nt_tuple, is_nt_tuple, maximalise, maximalise_rounds, Condition};
use kideal::{ColorSet, KGraph, TupleFamily, VertexSet};
use rand::Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn run(n: usize, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(b) = budget {
        if took > b {
            out = fail(format!("{} (took {took:.2?}, budget {b:.0?})", out.detail));
        }
    }
    println!(
        "criterion {n}: {} {name}: {} [{:.2?}]",
        if out.ok { "PASS" } else { "FAIL" },
        out.detail,
        took
    );
    out.ok
}

fn upsets_of(h: &TupleFamily) -> BTreeSet<usize> {
    (0..1usize << h.k()).filter(|&m| !h.get(ColorSet::from_mask(m)).is_empty()).collect()
}

fn criterion1() -> Outcome {
    let g = fx1(2);
    let nt = enumerate_nt_tuples(&g).unwrap();
    if nt.len() != 6 {
        return fail(format!("{} NT-families, expected 6", nt.len()));
    }
    // corner pictures: sets of F (as masks) where the vertex is present
    let pictures: [&[usize]; 4] = [&[0b10, 0b11], &[0b11], &[0b01, 0b11], &[0b01, 0b10, 0b11]];
    for p in pictures {
        let want: BTreeSet<usize> = p.iter().copied().collect();
        if !nt.iter().any(|h| upsets_of(h) == want) {
            return fail(format!("picture {want:?} missing"));
        }
    }
    // upward-closed subsets of P([2]) under inclusion, built directly
    let ups: Vec<BTreeSet<usize>> = (0..1u32 << 4)
        .map(|s| (0..4).filter(|&m| s >> m & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|u| u.iter().all(|&a| (0..4).all(|b| a & b != a || u.contains(&b))))
        .collect();
    let labels: Vec<BTreeSet<usize>> = nt.iter().map(upsets_of).collect();
    let mut lab_sorted = labels.clone();
    lab_sorted.sort();
    let mut ups_sorted = ups.clone();
    ups_sorted.sort();
    if lab_sorted != ups_sorted {
        return fail("NT-families do not match the upward-closed subsets");
    }
    let covers: BTreeSet<(usize, usize)> = hasse(&nt).unwrap().into_iter().collect();
    let mut expected = BTreeSet::new();
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            let between = labels.iter().any(|c| c != a && c != b && a.is_subset(c) && c.is_subset(b));
            if a != b && a.is_subset(b) && !between {
                expected.insert((i, j));
            }
        }
    }
    if covers != expected {
        return fail("Hasse diagram differs from inclusion of upsets");
    }
    pass(format!("6 families, 4 pictures found, {} covers", covers.len()))
}

fn criterion2() -> Outcome {
    let mut counts = Vec::new();
    for k in 1..=3 {
        let g = fx1(k);
        let nt = enumerate_nt_tuples(&g).unwrap();
        let oracle = antichain_families(&g).unwrap();
        if nt != oracle {
            return fail(format!("k={k}: enumeration differs from antichain oracle"));
        }
        counts.push(nt.len());
    }
    if counts != [3, 6, 20] {
        return fail(format!("counts {counts:?}"));
    }
    pass("counts 3, 6, 20 equal the antichain oracle")
}

fn corpus_1graphs() -> Vec<KGraph> {
    let mut r = rng(101);
    (0..60).map(|_| random_1graph(&mut r, 4, 6)).collect()
}

fn corpus_2graphs() -> Vec<KGraph> {
    let mut r = rng(202);
    (0..32).map(|_| random_kgraph(&mut r, 2, 4)).collect()
}

fn corpus_3graphs() -> Vec<KGraph> {
    let mut r = rng(303);
    let mut out = Vec::new();
    while out.len() < 8 {
        let n = r.gen_range(1..=3);
        if let Some(g) = try_random_kgraph(&mut r, 3, n) {
            out.push(g);
        }
    }
    out
}

fn criterion3(graphs: &[KGraph]) -> Outcome {
    let mut nodes = 0;
    for (i, g) in graphs.iter().enumerate() {
        let nt = enumerate_nt_tuples(g).unwrap();
        if nt != pairs_to_families(&katsura_tpairs(g).unwrap()) {
            return fail(format!("graph {i} differs"));
        }
        nodes += nt.len();
    }
    pass(format!("{} graphs, {nodes} nodes identical", graphs.len()))
}

fn criterion4(graphs: &[KGraph]) -> Outcome {
    let mut r = rng(404);
    let (mut total, mut nt_count, mut only_iv) = (0, 0, 0);
    for (i, g) in graphs.iter().enumerate() {
        let mut sample: Vec<TupleFamily> = enumerate_nt_tuples(g).unwrap().into_iter().take(50).collect();
        while sample.len() < 220 {
            let h = if sample.len() % 3 == 0 { random_family(&mut r, g) } else { random_closed_family(&mut r, g) };
            sample.push(h);
        }
        for h in &sample {
            let main = check_nt_tuple(g, h).unwrap();
            let other = nt_via_absorbent(g, h).unwrap();
            if main.is_none() != other {
                return fail(format!("graph {i}, family {}", h.show(g)));
            }
            nt_count += usize::from(other);
            only_iv += usize::from(matches!(main, Some(w) if w.condition == Condition::Maximal));
            total += 1;
        }
    }
    pass(format!(
        "{} graphs, {total} families, {nt_count} NT, {only_iv} failing only at (iv), 0 disagreements",
        graphs.len()
    ))
}

fn criterion5() -> Outcome {
    let mut r = rng(505);
    let mut trues = 0;
    for case in 0..1200 {
        let t = random_transfer_system(&mut r, 3, 8);
        let active = ColorSet::from_mask(r.gen_range(0..8));
        let start = VertexSet(r.gen::<u64>()) & t.full();
        // targets either random or an orbit point, so both answers occur
        let target = if r.gen_bool(0.5) {
            VertexSet(r.gen::<u64>()) & t.full()
        } else {
            let mut s = start;
            for c in active.colors() {
                for _ in 0..r.gen_range(0..4) {
                    s = t.apply(c, s);
                }
            }
            s | (VertexSet(r.gen::<u64>()) & t.full())
        };
        let bx = oracle_box(&t, active, start).unwrap();
        let a = t.eventual_containment(active, start, target).unwrap();
        let b = boxed_eventual(&t, active, start, target, &bx).unwrap();
        if a != b {
            return fail(format!("case {case} disagrees"));
        }
        trues += usize::from(a);
    }
    pass(format!("1200 systems, {trues} true / {} false, 0 disagreements", 1200 - trues))
}

fn criterion6(graphs: &[&KGraph]) -> Outcome {
    let (mut pairs, mut max_rounds) = (0usize, 0usize);
    for (i, g) in graphs.iter().enumerate() {
        let nt = enumerate_nt_tuples(g).unwrap();
        for (a_i, a) in nt.iter().enumerate() {
            for b in &nt[a_i..] {
                if nt.binary_search(&a.intersect(b)).is_err() {
                    return fail(format!("graph {i}: meet not enumerated"));
                }
                let j = join(a, b, &nt).unwrap();
                let formula = join_formula_check(g, a, b, j.base()).unwrap();
                if formula.family != j {
                    return fail(format!("graph {i}: join formula differs for {} and {}", a.show(g), b.show(g)));
                }
                max_rounds = max_rounds.max(formula.changing_rounds);
                pairs += 1;
            }
        }
    }
    pass(format!("{} graphs, {pairs} pairs, max changing rounds {max_rounds}", graphs.len()))
}

fn criterion7(graphs: &[&KGraph]) -> Outcome {
    let mut r = rng(707);
    let mut tested = 0;
    for round in 0..600 {
        let g = graphs[round % graphs.len()];
        let e = random_e_family(&mut r, g);
        let m = maximalise(g, &e).unwrap();
        if maximalise(g, &m).unwrap() != m {
            return fail(format!("not idempotent on {}", e.show(g)));
        }
        let k = g.k();
        if maximalise_rounds(g, &e, k).unwrap() != maximalise_rounds(g, &e, k.saturating_sub(1)).unwrap() {
            return fail(format!("round k differs from round k-1 on {}", e.show(g)));
        }
        if !is_nt_tuple(g, &m).unwrap() {
            return fail(format!("output not NT for {}", e.show(g)));
        }
        tested += 1;
    }
    let g = fx3();
    let w = g.vertex_set(&["w"]).unwrap();
    let h = TupleFamily::from_components(2, vec![VertexSet::EMPTY, w, VertexSet::EMPTY, g.all_vertices()]).unwrap();
    let m = maximalise(&g, &h).unwrap();
    let want = TupleFamily::from_components(2, vec![VertexSet::EMPTY, g.all_vertices(), VertexSet::EMPTY, g.all_vertices()])
        .unwrap();
    if m != want || !is_nt_tuple(&g, &m).unwrap() {
        return fail(format!("FX3 family maximalised to {}", m.show(&g)));
    }
    pass(format!("{tested} (E)-families stable; FX3 family maximalises to {}", m.show(&g)))
}

fn criterion8(graphs: &[&KGraph]) -> Outcome {
    let mut checked = 0;
    for (i, g) in graphs.iter().enumerate() {
        if !g.is_locally_convex() {
            continue;
        }
        let rep = rsy_report(g).unwrap();
        if !rep.bijective || !rep.joins_match {
            return fail(format!("graph {i}: bijective {}, joins {}", rep.bijective, rep.joins_match));
        }
        checked += 1;
    }
    if checked == 0 {
        return fail("no locally convex graphs in the corpora");
    }
    pass(format!("{checked} locally convex graphs"))
}

fn criterion9() -> Outcome {
    let mut r = rng(909);
    let mut systems = 0;
    for round in 0..60 {
        let n = 1 + round % 10;
        let ds: DynSys = random_automorphic(&mut r, 1 + round % 3, n);
        let brute = invariant_subsets_bruteforce(&ds).unwrap();
        if dyn_invariant_subsets(&ds).unwrap() != brute {
            return fail(format!("system {round}: invariant sets differ"));
        }
        for m in 1..1usize << ds.d() {
            if dyn_tracing(&ds, ColorSet::from_mask(m)).unwrap() != ds.all_points() {
                return fail(format!("system {round}: tracing set is not everything"));
            }
        }
        for b in 0..1u64 << n {
            let h = VertexSet(b);
            if dyn_is_no_tuple(&ds, &full_above(&ds, h)).unwrap() != brute.contains(&h) {
                return fail(format!("system {round}: NO decision wrong at {}", ds.show_set(h)));
            }
        }
        if n <= 5 {
            let mut want: Vec<TupleFamily> = brute.iter().map(|&h| full_above(&ds, h)).collect();
            want.sort();
            if enumerate_no_tuples(&dyn_to_kgraph(&ds).unwrap()).unwrap() != want {
                return fail(format!("system {round}: enumerated NO-families differ"));
            }
        }
        systems += 1;
    }
    let mut maps = 0;
    for _ in 0..80 {
        let ds = random_dynsys(&mut r, 1, 5);
        let pairs = katsura_tpairs_dyn(&ds).unwrap();
        for a in 0..1u64 << ds.n() {
            for b in 0..1u64 << ds.n() {
                let (a, b) = (VertexSet(a), VertexSet(b));
                let h = TupleFamily::from_components(1, vec![a, b]).unwrap();
                if dyn_is_nt_tuple(&ds, &h).unwrap() != pairs.contains(&(a, b)) {
                    return fail("single-map NT decision differs from T-pairs");
                }
            }
        }
        maps += 1;
    }
    pass(format!("{systems} automorphic systems (|V| ≤ 10), {maps} single maps vs T-pairs"))
}

fn main() -> ExitCode {
    let ones = corpus_1graphs();
    let twos = corpus_2graphs();
    let threes = corpus_3graphs();
    let fixtures = [fx1(1), fx1(2), fx1(3), fx2(), fx3()];
    let all: Vec<&KGraph> = fixtures.iter().chain(&ones).chain(&twos).chain(&threes).collect();
    let results = [
        run(1, "intro fixture", Some(Duration::from_secs(1)), criterion1),
        run(2, "antichain counts", Some(Duration::from_secs(10)), criterion2),
        run(3, "T-pair equivalence", Some(Duration::from_secs(30)), || criterion3(&ones)),
        run(4, "cross-route NT", None, || criterion4(&twos)),
        run(5, "eventual containment", Some(Duration::from_secs(10)), criterion5),
        run(6, "lattice laws", None, || criterion6(&all)),
        run(7, "stabilisation", None, || criterion7(&all)),
        run(8, "locally convex case", None, || criterion8(&all)),
        run(9, "dynamics", None, criterion9),
    ];
    if results.iter().all(|&ok| ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
