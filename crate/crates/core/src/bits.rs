//! Small helpers for subsets encoded as machine-word bitmasks.

/// A subset of a ground set of at most 32 elements, bit `i` standing for element `i`.
pub type Mask = u32;

#[inline]
pub const fn bit(i: usize) -> Mask {
    1 << i
}

#[inline]
pub const fn full(n: usize) -> Mask {
    if n >= 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

#[inline]
pub fn contains(mask: Mask, i: usize) -> bool {
    mask & bit(i) != 0
}

/// Drops bit `i` and shifts the higher bits down by one.
#[inline]
pub fn remove_bit(mask: Mask, i: usize) -> Mask {
    let low = mask & (bit(i) - 1);
    let high = (mask >> (i + 1)) << i;
    low | high
}

/// Iterates over the indices of the set bits, lowest first.
pub fn ones(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Iterates over every subset of `set` (including the empty set and `set` itself),
/// in increasing numeric order.
pub fn submasks(set: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0 as Mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set {
            None
        } else {
            Some((cur.wrapping_sub(set)) & set)
        };
        Some(cur)
    })
}

/// Membership table for a family of subsets of a ground set with `n` elements.
#[derive(Clone, Debug)]
pub struct FamilyIndex {
    words: Vec<u64>,
}

impl FamilyIndex {
    pub fn new(n: usize, family: &[Mask]) -> Self {
        let mut words = vec![0u64; (1usize << n).div_ceil(64)];
        for &f in family {
            words[f as usize / 64] |= 1 << (f as usize % 64);
        }
        Self { words }
    }

    #[inline]
    pub fn contains(&self, f: Mask) -> bool {
        let f = f as usize;
        self.words.get(f / 64).is_some_and(|w| w & (1 << (f % 64)) != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remove_bit_compacts() {
        assert_eq!(remove_bit(0b1011, 1), 0b101);
        assert_eq!(remove_bit(0b1011, 0), 0b101);
        assert_eq!(remove_bit(0b1011, 3), 0b011);
    }

    #[test]
    fn submasks_enumerates_all() {
        let subs: Vec<Mask> = submasks(0b101).collect();
        assert_eq!(subs, vec![0, 1, 4, 5]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(submasks(full(4)).count(), 16);
    }

    #[test]
    fn ones_lists_indices() {
        assert_eq!(ones(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
    }
}
