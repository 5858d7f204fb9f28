//! Small named graphs used throughout the tests and documentation.

use crate::kgraph::KGraph;

/// One vertex `v` with a loop `l<i>` of every color `i` and the only
/// possible squares; the k-graph of the k-fold tensor product of Toeplitz
/// algebras.
pub fn fx1(k: usize) -> KGraph {
    let ids: Vec<String> = (1..=k).map(|i| format!("l{i}")).collect();
    let edges: Vec<(&str, usize, &str, &str)> =
        ids.iter().enumerate().map(|(i, id)| (id.as_str(), i + 1, "v", "v")).collect();
    let mut squares = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            squares.push([ids[i].as_str(), ids[j].as_str(), ids[j].as_str(), ids[i].as_str()]);
        }
    }
    KGraph::from_names(k, &["v"], &edges, &squares).expect("fixture is well formed")
}

/// The 1-graph `u <-e- w`.
pub fn fx2() -> KGraph {
    KGraph::from_names(1, &["u", "w"], &[("e", 1, "u", "w")], &[]).expect("fixture is well formed")
}

/// Two vertices with color-1 loops `b` at `u` and `a` at `w`, a color-2
/// edge `g` from `w` to `u` and a color-2 loop `h` at `w`.
pub fn fx3() -> KGraph {
    KGraph::from_names(
        2,
        &["u", "w"],
        &[("b", 1, "u", "u"), ("a", 1, "w", "w"), ("g", 2, "u", "w"), ("h", 2, "w", "w")],
        &[["b", "g", "g", "a"], ["a", "h", "h", "a"]],
    )
    .expect("fixture is well formed")
}
