use std::fmt;

/// A set of vertex indices (into a polytope's canonical vertex list) stored
/// as a 128-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const CAPACITY: usize = 128;

    pub const fn empty() -> Self {
        VertexSet(0)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::CAPACITY);
        if n == Self::CAPACITY {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        indices.into_iter().fold(Self::empty(), |s, i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        VertexSet(self.0 | (1u128 << i))
    }

    pub fn without(self, i: usize) -> Self {
        VertexSet(self.0 & !(1u128 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    pub fn bits(self) -> u128 {
        self.0
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let s = VertexSet::from_indices([0, 3, 127]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(2));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 127]);
        assert_eq!(s.min(), Some(0));
        assert_eq!(s.max(), Some(127));
        assert!(VertexSet::from_indices([3]).is_subset(s));
        assert_eq!(s.without(0).min(), Some(3));
        assert_eq!(VertexSet::full(128).len(), 128);
        assert_eq!(VertexSet::full(5).len(), 5);
        assert_eq!(VertexSet::empty().min(), None);
    }
}
