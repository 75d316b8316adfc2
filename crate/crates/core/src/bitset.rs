//! Fixed-width bit sets over an unsigned machine word.
//!
//! The same container backs both sets of worlds ([`crate::Intension`]) and
//! sets of information states ([`crate::StateSet`], indexed by the state's
//! world mask).

use std::fmt;
use std::hash::Hash;

use num_traits::{PrimInt, Unsigned};

/// Unsigned word usable as bit storage.
pub trait Word: PrimInt + Unsigned + Hash + fmt::Debug + Send + Sync + 'static {
    /// Number of addressable bits.
    const BITS: usize;
}

macro_rules! impl_word {
    ($($t:ty),*) => {
        $(impl Word for $t {
            const BITS: usize = <$t>::BITS as usize;
        })*
    };
}

impl_word!(u8, u16, u32, u64, u128);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet<W: Word> {
    bits: W,
}

impl<W: Word> BitSet<W> {
    pub const CAPACITY: usize = W::BITS;

    pub fn empty() -> Self {
        BitSet { bits: W::zero() }
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= W::BITS, "bit set capacity {} exceeded by {n}", W::BITS);
        if n == W::BITS {
            BitSet { bits: !W::zero() }
        } else {
            BitSet { bits: (W::one() << n) - W::one() }
        }
    }

    pub fn singleton(i: usize) -> Self {
        let mut s = Self::empty();
        s.insert(i);
        s
    }

    pub fn from_bits(bits: W) -> Self {
        BitSet { bits }
    }

    pub fn bits(self) -> W {
        self.bits
    }

    /// The mask as an index, for use as a table key.
    pub fn index(self) -> usize {
        self.bits.to_usize().expect("bit set index does not fit in usize")
    }

    pub fn from_index(index: usize) -> Self {
        BitSet { bits: W::from(index).expect("index out of range for bit set word") }
    }

    pub fn contains(self, i: usize) -> bool {
        i < W::BITS && (self.bits >> i) & W::one() == W::one()
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < W::BITS, "bit {i} out of range");
        self.bits = self.bits | (W::one() << i);
    }

    pub fn remove(&mut self, i: usize) {
        if i < W::BITS {
            self.bits = self.bits & !(W::one() << i);
        }
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn without(mut self, i: usize) -> Self {
        self.remove(i);
        self
    }

    pub fn is_empty(self) -> bool {
        self.bits == W::zero()
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        BitSet { bits: self.bits | other.bits }
    }

    pub fn intersection(self, other: Self) -> Self {
        BitSet { bits: self.bits & other.bits }
    }

    pub fn difference(self, other: Self) -> Self {
        BitSet { bits: self.bits & !other.bits }
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.bits & !other.bits == W::zero()
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == W::zero()
    }

    /// Lowest member, if any.
    pub fn first(self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    /// Members in ascending order.
    pub fn iter(self) -> Iter<W> {
        Iter { bits: self.bits }
    }

    /// All subsets in ascending mask order, `∅` first and `self` last.
    pub fn subsets(self) -> Subsets<W> {
        Subsets { mask: self.bits, next: Some(W::zero()) }
    }

    /// Renumber members: bit `i` moves to `map[i]`; members mapped to `None` are dropped.
    pub fn remap(self, map: &[Option<usize>]) -> Self {
        let mut out = Self::empty();
        for i in self.iter() {
            if let Some(Some(j)) = map.get(i) {
                out.insert(*j);
            }
        }
        out
    }
}

impl<W: Word> FromIterator<usize> for BitSet<W> {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = Self::empty();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl<W: Word> IntoIterator for BitSet<W> {
    type Item = usize;
    type IntoIter = Iter<W>;

    fn into_iter(self) -> Iter<W> {
        self.iter()
    }
}

impl<W: Word> fmt::Debug for BitSet<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<W: Word> fmt::Display for BitSet<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

pub struct Iter<W: Word> {
    bits: W,
}

impl<W: Word> Iterator for Iter<W> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == W::zero() {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits = self.bits & (self.bits - W::one());
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl<W: Word> ExactSizeIterator for Iter<W> {}

pub struct Subsets<W: Word> {
    mask: W,
    next: Option<W>,
}

impl<W: Word> Iterator for Subsets<W> {
    type Item = BitSet<W>;

    fn next(&mut self) -> Option<BitSet<W>> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            // ascending submask step: carry through the bits outside the mask
            Some(((cur | !self.mask) + W::one()) & self.mask)
        };
        Some(BitSet { bits: cur })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type S = BitSet<u16>;

    #[test]
    fn full_and_singleton() {
        assert_eq!(S::full(0), S::empty());
        assert_eq!(S::full(3).bits(), 0b111);
        assert_eq!(S::full(16).bits(), u16::MAX);
        assert_eq!(S::singleton(4).bits(), 0b1_0000);
        assert_eq!(BitSet::<u8>::full(8).len(), 8);
    }

    #[test]
    fn subsets_ascending() {
        let s: S = [0, 2].into_iter().collect();
        let subs: Vec<u16> = s.subsets().map(|x| x.bits()).collect();
        assert_eq!(subs, vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(S::empty().subsets().count(), 1);
        assert_eq!(S::full(16).subsets().count(), 1 << 16);
    }

    #[test]
    fn remap_drops_and_moves() {
        let s: S = [0, 1, 3].into_iter().collect();
        let map = [Some(2), None, None, Some(0)];
        assert_eq!(s.remap(&map), [0, 2].into_iter().collect());
    }

    #[test]
    fn display() {
        let s: S = [3, 0].into_iter().collect();
        assert_eq!(s.to_string(), "{0,3}");
        assert_eq!(S::empty().to_string(), "{}");
    }

    proptest! {
        #[test]
        fn set_ops_match_btreeset(a in any::<u16>(), b in any::<u16>()) {
            use std::collections::BTreeSet;
            let (x, y) = (S::from_bits(a), S::from_bits(b));
            let xs: BTreeSet<usize> = x.iter().collect();
            let ys: BTreeSet<usize> = y.iter().collect();
            prop_assert_eq!(x.union(y).iter().collect::<BTreeSet<_>>(), &xs | &ys);
            prop_assert_eq!(x.intersection(y).iter().collect::<BTreeSet<_>>(), &xs & &ys);
            prop_assert_eq!(x.difference(y).iter().collect::<BTreeSet<_>>(), &xs - &ys);
            prop_assert_eq!(x.is_subset(y), xs.is_subset(&ys));
            prop_assert_eq!(x.len(), xs.len());
        }

        #[test]
        fn subsets_are_exactly_the_submasks(m in any::<u8>()) {
            let s = BitSet::<u8>::from_bits(m);
            let got: Vec<u8> = s.subsets().map(|x| x.bits()).collect();
            let want: Vec<u8> = (0..=255u8).filter(|x| x & !m == 0).collect();
            prop_assert_eq!(got, want);
        }
    }
}
