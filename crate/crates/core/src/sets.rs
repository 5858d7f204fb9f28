//! Bit-mask sets of vertices and colors, and degree vectors.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

/// Largest supported vertex count (one machine word per set).
pub const MAX_VERTICES: usize = 64;
/// Largest supported rank.
pub const MAX_RANK: usize = 8;

/// A subset of the vertex order, bit `v` standing for vertex index `v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// All of the first `n` vertices.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(VertexSet::EMPTY, |acc, v| acc | VertexSet::singleton(v))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside the first `n` vertices.
    pub fn complement(self, n: usize) -> VertexSet {
        VertexSet(!self.0) & VertexSet::full(n)
    }

    /// Least member, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl BitAndAssign for VertexSet {
    fn bitand_assign(&mut self, rhs: Self) {
        self.0 &= rhs.0;
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of colors; bit `i - 1` stands for color `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ColorSet(pub u8);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// The set `[k] = {1, .., k}`.
    pub fn full(k: usize) -> Self {
        ColorSet(((1u16 << k) - 1) as u8)
    }

    pub fn from_mask(mask: usize) -> Self {
        ColorSet(mask as u8)
    }

    pub fn single(color: usize) -> Self {
        ColorSet(1u8 << (color - 1))
    }

    pub fn from_colors<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(ColorSet::EMPTY, |acc, c| acc.with(c))
    }

    /// Index of this set in a family of length `2^k`.
    pub fn mask(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, color: usize) -> bool {
        color >= 1 && color <= 8 && self.0 >> (color - 1) & 1 == 1
    }

    pub fn with(self, color: usize) -> Self {
        ColorSet(self.0 | 1u8 << (color - 1))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, k: usize) -> ColorSet {
        ColorSet(!self.0 & ColorSet::full(k).0)
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    /// Colors in increasing order, 1-based.
    pub fn colors(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (1..=8).filter(move |c| bits >> (c - 1) & 1 == 1)
    }

    /// Every subset of `[k]`, ordered by size and then by mask.
    pub fn all_by_size(k: usize) -> Vec<ColorSet> {
        let mut all: Vec<ColorSet> = (0..1usize << k).map(ColorSet::from_mask).collect();
        all.sort_by_key(|f| (f.len(), f.mask()));
        all
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.colors().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A degree vector in `Z_+^k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Degree(pub Vec<u32>);

impl Degree {
    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// The unit vector of a color (1-based).
    pub fn unit(k: usize, color: usize) -> Self {
        let mut d = Degree::zero(k);
        d.0[color - 1] = 1;
        d
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Entry for a color (1-based).
    pub fn get(&self, color: usize) -> u32 {
        self.0[color - 1]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Degree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, provided `other <= self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        if !other.le(self) {
            return None;
        }
        Some(Degree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Colors with a nonzero entry.
    pub fn support(&self) -> ColorSet {
        ColorSet::from_colors((1..=self.0.len()).filter(|&c| self.0[c - 1] > 0))
    }

    /// `n ⊥ F`: no entry in a color of `f`.
    pub fn orthogonal_to(&self, f: ColorSet) -> bool {
        self.support().0 & f.0 == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_set_basics() {
        let s = VertexSet::from_indices([0, 3]);
        assert!(s.contains(3) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(s.complement(4), VertexSet::from_indices([1, 2]));
        assert_eq!(VertexSet::full(64).len(), 64);
        assert!(VertexSet::EMPTY.is_subset(s));
    }

    #[test]
    fn color_set_order_and_display() {
        let order = ColorSet::all_by_size(2);
        assert_eq!(order.iter().map(|f| f.mask()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let order3: Vec<usize> = ColorSet::all_by_size(3).iter().map(|f| f.mask()).collect();
        assert_eq!(order3, vec![0, 1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(ColorSet::from_colors([2, 1]).to_string(), "{1,2}");
        assert_eq!(ColorSet::EMPTY.to_string(), "∅");
        assert_eq!(ColorSet::single(1).complement(3), ColorSet::from_colors([2, 3]));
        assert_eq!(ColorSet::full(8).len(), 8);
    }

    #[test]
    fn degree_lattice() {
        let a = Degree(vec![1, 0, 2]);
        let b = Degree(vec![0, 1, 1]);
        assert_eq!(a.join(&b), Degree(vec![1, 1, 2]));
        assert_eq!(a.meet(&b), Degree(vec![0, 0, 1]));
        assert!(a.meet(&b).le(&a));
        assert_eq!(a.checked_sub(&b), None);
        assert_eq!(a.support(), ColorSet::from_colors([1, 3]));
        assert!(b.orthogonal_to(ColorSet::single(1)));
    }
}
