//! Commuting union-additive self-maps of the vertex powerset, and the
//! eventual-containment solver built on their index/period structure.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sets::{ColorSet, Degree, VertexSet};

/// Largest orbit the eventual-containment solver will explore.
pub const MAX_ORBIT: usize = 1 << 16;

/// `k` union-additive maps on subsets of `n` points, each stored by its
/// images of singletons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferSystem {
    k: usize,
    n: usize,
    images: Vec<Vec<VertexSet>>,
}

/// Index/period data of the active generators on the orbit of a start set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualBehavior {
    pub active: ColorSet,
    /// Reachable states, in discovery order; the first is the start set.
    pub orbit: Vec<VertexSet>,
    /// Per color: least `r` with `t^(r+q) = t^r` on the orbit (0 if inactive).
    pub index: Vec<u32>,
    /// Per color: least such `q ≥ 1` (1 if inactive).
    pub period: Vec<u32>,
}

impl EventualBehavior {
    /// The degree `r + 2q` restricted to active colors.
    pub fn safe_box(&self) -> Degree {
        Degree(
            (0..self.index.len())
                .map(|i| if self.active.contains(i + 1) { self.index[i] + 2 * self.period[i] } else { 0 })
                .collect(),
        )
    }
}

impl TransferSystem {
    /// `images[c - 1][v]` is the image of `{v}` under the color-`c` map.
    pub fn new(n: usize, images: Vec<Vec<VertexSet>>) -> Result<Self> {
        let k = images.len();
        if k == 0 || k > crate::sets::MAX_RANK || n > crate::sets::MAX_VERTICES {
            return Err(Error::input("transfer system size out of range"));
        }
        let full = VertexSet::full(n);
        for row in &images {
            if row.len() != n || row.iter().any(|s| !s.is_subset(full)) {
                return Err(Error::input("transfer images do not match the point count"));
            }
        }
        Ok(TransferSystem { k, n, images })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Image of `{v}` under the map of `color`.
    pub fn image(&self, color: usize, v: usize) -> VertexSet {
        self.images[color - 1][v]
    }

    pub fn apply(&self, color: usize, s: VertexSet) -> VertexSet {
        let row = &self.images[color - 1];
        s.iter().fold(VertexSet::EMPTY, |acc, v| acc | row[v])
    }

    /// `T^n(S)`.
    pub fn apply_degree(&self, s: VertexSet, n: &Degree) -> VertexSet {
        let mut cur = s;
        for color in 1..=self.k {
            for _ in 0..n.get(color) {
                cur = self.apply(color, cur);
            }
        }
        cur
    }

    /// First `(i, j, v)` with `T_i T_j {v} ≠ T_j T_i {v}`, colors drawn from `colors`.
    pub fn commutation_failure(&self, colors: ColorSet) -> Option<(usize, usize, usize)> {
        let cs: Vec<usize> = colors.colors().filter(|&c| c <= self.k).collect();
        for (a, &i) in cs.iter().enumerate() {
            for &j in &cs[a + 1..] {
                for v in 0..self.n {
                    let s = VertexSet::singleton(v);
                    if self.apply(i, self.apply(j, s)) != self.apply(j, self.apply(i, s)) {
                        return Some((i, j, v));
                    }
                }
            }
        }
        None
    }

    pub fn commutes(&self) -> bool {
        self.commutation_failure(ColorSet::full(self.k)).is_none()
    }

    /// Everything reachable from `s` by the maps of `colors`, `s` included.
    pub fn reach(&self, colors: ColorSet, s: VertexSet) -> VertexSet {
        let mut cur = s;
        loop {
            let mut next = cur;
            for c in colors.colors() {
                next |= self.apply(c, cur);
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Points from which some point of `x` is reachable.
    pub fn reaching(&self, colors: ColorSet, x: VertexSet) -> VertexSet {
        let mut cur = x;
        loop {
            let mut next = cur;
            for v in self.full().iter() {
                if !cur.contains(v) && colors.colors().any(|c| !(self.image(c, v) & cur).is_empty()) {
                    next.insert(v);
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Points all of whose reachable points (itself included) lie in `x`.
    pub fn forever_within(&self, colors: ColorSet, x: VertexSet) -> VertexSet {
        self.full() - self.reaching(colors, self.full() - x)
    }

    pub fn is_closed(&self, colors: ColorSet, s: VertexSet) -> bool {
        colors.colors().all(|c| self.apply(c, s).is_subset(s))
    }

    /// Orbit of `start` under the active maps with per-generator index and period.
    pub fn eventual_behavior(&self, active: ColorSet, start: VertexSet) -> Result<EventualBehavior> {
        if !active.is_subset(ColorSet::full(self.k)) {
            return Err(Error::input(format!("active colors {active} exceed rank {}", self.k)));
        }
        if let Some((i, j, v)) = self.commutation_failure(active) {
            return Err(Error::pre(format!("maps {i} and {j} do not commute at point {v}")));
        }
        let colors: Vec<usize> = active.colors().filter(|&c| c <= self.k).collect();
        let mut orbit = vec![start];
        let mut pos: HashMap<VertexSet, usize> = HashMap::from([(start, 0)]);
        let mut next: Vec<Vec<usize>> = vec![Vec::new(); colors.len()];
        let mut head = 0;
        while head < orbit.len() {
            let s = orbit[head];
            for (slot, &c) in colors.iter().enumerate() {
                let t = self.apply(c, s);
                let id = match pos.get(&t) {
                    Some(&id) => id,
                    None => {
                        if orbit.len() >= MAX_ORBIT {
                            return Err(Error::Capacity(format!("orbit larger than {MAX_ORBIT} states")));
                        }
                        orbit.push(t);
                        pos.insert(t, orbit.len() - 1);
                        orbit.len() - 1
                    }
                };
                next[slot].push(id);
            }
            head += 1;
        }
        let mut index = vec![0u32; self.k];
        let mut period = vec![1u32; self.k];
        for (slot, &c) in colors.iter().enumerate() {
            let (r, q) = rho_shape(&next[slot])?;
            index[c - 1] = r;
            period[c - 1] = q;
        }
        Ok(EventualBehavior { active, orbit, index, period })
    }

    /// Whether `T^n(start) ⊆ target` for all large enough `n` supported on `active`.
    pub fn eventual_containment(&self, active: ColorSet, start: VertexSet, target: VertexSet) -> Result<bool> {
        if !active.is_subset(ColorSet::full(self.k)) {
            return Err(Error::input(format!("active colors {active} exceed rank {}", self.k)));
        }
        if active.is_empty() {
            return Ok(start.is_subset(target));
        }
        let eb = self.eventual_behavior(active, start)?;
        let mut base = start;
        for c in active.colors() {
            for _ in 0..eb.index[c - 1] {
                base = self.apply(c, base);
            }
        }
        // {T^n(start) : n >= r} is exactly the orbit of T^r(start).
        let mut seen = vec![base];
        let mut head = 0;
        while head < seen.len() {
            let s = seen[head];
            if !s.is_subset(target) {
                return Ok(false);
            }
            for c in active.colors() {
                let t = self.apply(c, s);
                if !seen.contains(&t) {
                    seen.push(t);
                }
            }
            head += 1;
        }
        Ok(true)
    }
}

/// Least `(r, q)` with `f^(r+q) = f^r` for a self-map of `0..len`: the
/// longest tail and the lcm of the cycle lengths.
fn rho_shape(f: &[usize]) -> Result<(u32, u32)> {
    let mut r = 0usize;
    let mut q = 1u64;
    let mut step = vec![usize::MAX; f.len()];
    let mut trail = Vec::new();
    for s in 0..f.len() {
        trail.clear();
        let mut x = s;
        while step[x] == usize::MAX {
            step[x] = trail.len();
            trail.push(x);
            x = f[x];
        }
        let tail = step[x];
        r = r.max(tail);
        q = lcm(q, (trail.len() - tail) as u64);
        if q > u32::MAX as u64 {
            return Err(Error::Capacity("period overflow".into()));
        }
        for &y in &trail {
            step[y] = usize::MAX;
        }
    }
    Ok((r as u32, q as u32))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
