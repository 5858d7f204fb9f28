use super::KGraph;
use crate::error::{Error, Result};
use crate::sets::Degree;

/// Upper bound on the number of paths a single enumeration may produce.
pub const MAX_PATHS: usize = 1 << 20;

/// A path in color-nondecreasing normal form. A path with no edges is the
/// vertex `range`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub range: usize,
    pub edges: Vec<usize>,
    pub degree: Degree,
}

impl Path {
    /// The degree-zero path at a vertex.
    pub fn vertex(k: usize, v: usize) -> Self {
        Path { range: v, edges: Vec::new(), degree: Degree::zero(k) }
    }

    pub fn source(&self, g: &KGraph) -> usize {
        match self.edges.last() {
            Some(&e) => g.edge(e).source,
            None => self.range,
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge ids joined by `·`, or the vertex name for a vertex path.
    pub fn show(&self, g: &KGraph) -> String {
        if self.edges.is_empty() {
            return g.vertices()[self.range].clone();
        }
        let ids: Vec<&str> = self.edges.iter().map(|&e| g.edge(e).id.as_str()).collect();
        ids.join("·")
    }
}

impl KGraph {
    fn check_composable(&self, word: &[usize]) -> Result<()> {
        if let Some(&e) = word.iter().find(|&&e| e >= self.edges().len()) {
            return Err(Error::input(format!("unknown edge index {e}")));
        }
        for w in word.windows(2) {
            if self.edge(w[0]).source != self.edge(w[1]).range {
                return Err(Error::Composition(format!(
                    "{} and {} do not compose",
                    self.edge(w[0]).id,
                    self.edge(w[1]).id
                )));
            }
        }
        Ok(())
    }

    fn degree_of(&self, word: &[usize]) -> Degree {
        let mut d = Degree::zero(self.k());
        for &e in word {
            d.0[self.edge(e).color - 1] += 1;
        }
        d
    }

    fn missing_square(&self, a: usize, b: usize) -> Error {
        Error::pre(format!("no square rewrites ({}, {})", self.edge(a).id, self.edge(b).id))
    }

    /// Sort a composable word into normal form by adjacent swaps.
    fn sort_word(&self, mut word: Vec<usize>) -> Result<Vec<usize>> {
        loop {
            let pos = word
                .windows(2)
                .position(|w| self.edge(w[0]).color > self.edge(w[1]).color);
            let Some(t) = pos else { return Ok(word) };
            let (a, b) = self
                .swap_down(word[t], word[t + 1])
                .ok_or_else(|| self.missing_square(word[t], word[t + 1]))?;
            word[t] = a;
            word[t + 1] = b;
        }
    }

    fn path_from_word(&self, range: usize, word: Vec<usize>) -> Result<Path> {
        let edges = self.sort_word(word)?;
        let degree = self.degree_of(&edges);
        let range = edges.first().map_or(range, |&e| self.edge(e).range);
        Ok(Path { range, edges, degree })
    }

    /// Normal form of a nonempty composable edge sequence.
    pub fn normalize(&self, raw: &[usize]) -> Result<Path> {
        if raw.is_empty() {
            return Err(Error::input("cannot normalize an empty sequence; use Path::vertex"));
        }
        self.check_composable(raw)?;
        self.path_from_word(0, raw.to_vec())
    }

    /// Normal form of a sequence of edge ids.
    pub fn normalize_ids(&self, ids: &[&str]) -> Result<Path> {
        let raw = ids
            .iter()
            .map(|id| self.edge_index(id).ok_or_else(|| Error::input(format!("unknown edge '{id}'"))))
            .collect::<Result<Vec<_>>>()?;
        self.normalize(&raw)
    }

    /// `λμ` in normal form.
    pub fn compose(&self, lambda: &Path, mu: &Path) -> Result<Path> {
        if lambda.source(self) != mu.range {
            return Err(Error::Composition(format!(
                "source of {} is not the range of {}",
                lambda.show(self),
                mu.show(self)
            )));
        }
        let mut word = lambda.edges.clone();
        word.extend_from_slice(&mu.edges);
        self.path_from_word(lambda.range, word)
    }

    /// Move the first edge of `color` to the front of `word`.
    fn bring_to_front(&self, word: &mut [usize], color: usize) -> Result<()> {
        let p = word
            .iter()
            .position(|&e| self.edge(e).color == color)
            .ok_or_else(|| Error::input("degree out of bounds"))?;
        for t in (0..p).rev() {
            let (a, b) = self
                .swap(word[t], word[t + 1])
                .ok_or_else(|| self.missing_square(word[t], word[t + 1]))?;
            word[t] = a;
            word[t + 1] = b;
        }
        Ok(())
    }

    /// Split a word of degree `d` into factors of degree `m` and `d - m`.
    fn split(&self, mut rest: Vec<usize>, m: &Degree) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut prefix = Vec::new();
        for color in 1..=self.k() {
            for _ in 0..m.get(color) {
                self.bring_to_front(&mut rest, color)?;
                prefix.push(rest.remove(0));
            }
        }
        Ok((prefix, rest))
    }

    /// `λ(ℓ, m)`: the factor of `λ` between degrees `ℓ` and `m`.
    pub fn segment(&self, lambda: &Path, l: &Degree, m: &Degree) -> Result<Path> {
        if l.rank() != self.k() || m.rank() != self.k() || !l.le(m) || !m.le(&lambda.degree) {
            return Err(Error::input("segment degrees out of bounds"));
        }
        let (_, rest) = self.split(lambda.edges.clone(), l)?;
        let start = rest.first().map_or(lambda.source(self), |&e| self.edge(e).range);
        let width = m.checked_sub(l).expect("l <= m");
        let (mid, _) = self.split(rest, &width)?;
        self.path_from_word(start, mid)
    }

    /// `vΛ^n`, in lexicographic order of edge indices.
    pub fn paths_from(&self, v: usize, n: &Degree) -> Result<Vec<Path>> {
        if v >= self.n() {
            return Err(Error::input(format!("unknown vertex index {v}")));
        }
        if n.rank() != self.k() {
            return Err(Error::input("degree has the wrong rank"));
        }
        let colors: Vec<usize> = (1..=self.k()).flat_map(|c| std::iter::repeat(c).take(n.get(c) as usize)).collect();
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.extend_paths(v, &colors, &mut word, &mut out)?;
        Ok(out
            .into_iter()
            .map(|edges| Path { range: v, edges, degree: n.clone() })
            .collect())
    }

    fn extend_paths(
        &self,
        at: usize,
        colors: &[usize],
        word: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let Some((&c, more)) = colors.split_first() else {
            if out.len() >= MAX_PATHS {
                return Err(Error::Capacity(format!("more than {MAX_PATHS} paths")));
            }
            out.push(word.clone());
            return Ok(());
        };
        for &e in self.emitted(at, c) {
            word.push(e);
            self.extend_paths(self.edge(e).source, more, word, out)?;
            word.pop();
        }
        Ok(())
    }

    /// Minimal common extensions of `μ` and `ν`.
    pub fn mce(&self, mu: &Path, nu: &Path) -> Result<Vec<Path>> {
        if mu.range != nu.range {
            return Ok(Vec::new());
        }
        let top = mu.degree.join(&nu.degree);
        let rest = top.checked_sub(&mu.degree).expect("join dominates");
        let mut out = Vec::new();
        for alpha in self.paths_from(mu.source(self), &rest)? {
            let lambda = self.compose(mu, &alpha)?;
            if self.segment(&lambda, &Degree::zero(self.k()), &nu.degree)? == *nu {
                out.push(lambda);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Pairs `(α, β)` with `μα = νβ ∈ MCE(μ, ν)`.
    pub fn lambda_min(&self, mu: &Path, nu: &Path) -> Result<Vec<(Path, Path)>> {
        let top = mu.degree.join(&nu.degree);
        self.mce(mu, nu)?
            .into_iter()
            .map(|l| Ok((self.segment(&l, &mu.degree, &top)?, self.segment(&l, &nu.degree, &top)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fx1, fx2, fx3};

    fn d(v: &[u32]) -> Degree {
        Degree(v.to_vec())
    }

    #[test]
    fn normalize_uses_the_square() {
        let g = fx3();
        let p = g.normalize_ids(&["g", "a"]).unwrap();
        assert_eq!(p, g.normalize_ids(&["b", "g"]).unwrap());
        assert_eq!(p.show(&g), "b·g");
        assert_eq!(p.degree, d(&[1, 1]));
        let g1 = fx1(2);
        assert_eq!(g1.normalize_ids(&["l2", "l1"]).unwrap().show(&g1), "l1·l2");
    }

    #[test]
    fn normalize_sorted_is_identity() {
        let g = fx3();
        let p = g.normalize_ids(&["b", "g", "h"]).unwrap();
        assert_eq!(p.show(&g), "b·g·h");
        assert_eq!(g.normalize(&p.edges).unwrap(), p);
    }

    #[test]
    fn normalize_rejects_gaps() {
        let g = fx3();
        assert!(matches!(g.normalize_ids(&["a", "b"]), Err(Error::Composition(_))));
    }

    #[test]
    fn segment_examples() {
        let g = fx3();
        let bg = g.normalize_ids(&["b", "g"]).unwrap();
        let front = g.segment(&bg, &d(&[0, 0]), &d(&[0, 1])).unwrap();
        assert_eq!(front.show(&g), "g");
        let back = g.segment(&bg, &d(&[0, 1]), &d(&[1, 1])).unwrap();
        assert_eq!(back.show(&g), "a");
        assert_eq!(g.segment(&bg, &d(&[0, 0]), &d(&[1, 1])).unwrap(), bg);
        let v = g.segment(&bg, &d(&[0, 0]), &d(&[0, 0])).unwrap();
        assert_eq!(v, Path::vertex(2, g.vertex_index("u").unwrap()));
        let end = g.segment(&bg, &d(&[1, 1]), &d(&[1, 1])).unwrap();
        assert_eq!(end, Path::vertex(2, g.vertex_index("w").unwrap()));
        assert!(g.segment(&bg, &d(&[0, 2]), &d(&[0, 2])).is_err());
    }

    #[test]
    fn compose_checks_ends() {
        let g = fx3();
        let b = g.normalize_ids(&["b"]).unwrap();
        let gg = g.normalize_ids(&["g"]).unwrap();
        let a = g.normalize_ids(&["a"]).unwrap();
        assert_eq!(g.compose(&gg, &a).unwrap(), g.compose(&b, &gg).unwrap());
        assert!(matches!(g.compose(&a, &b), Err(Error::Composition(_))));
    }

    #[test]
    fn paths_from_examples() {
        let g = fx2();
        let u = g.vertex_index("u").unwrap();
        let w = g.vertex_index("w").unwrap();
        let ps = g.paths_from(u, &d(&[1])).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].show(&g), "e");
        assert!(g.paths_from(w, &d(&[1])).unwrap().is_empty());
        assert_eq!(g.paths_from(w, &d(&[0])).unwrap(), vec![Path::vertex(1, w)]);
    }

    #[test]
    fn mce_examples() {
        let g = fx3();
        let b = g.normalize_ids(&["b"]).unwrap();
        let gg = g.normalize_ids(&["g"]).unwrap();
        let ext = g.mce(&b, &gg).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].show(&g), "b·g");
        let pairs = g.lambda_min(&b, &gg).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].0.show(&g), pairs[0].1.show(&g)), ("g".into(), "a".into()));
        let a = g.normalize_ids(&["a"]).unwrap();
        assert!(g.mce(&b, &a).unwrap().is_empty());
        assert_eq!(g.mce(&b, &b).unwrap(), vec![b.clone()]);
        let u = g.vertex_index("u").unwrap();
        assert_eq!(
            g.lambda_min(&b, &b).unwrap(),
            vec![(Path::vertex(2, u), Path::vertex(2, u))]
        );
    }
}
