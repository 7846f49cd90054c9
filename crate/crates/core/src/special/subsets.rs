//! Enumeration of non-empty subsets in binary-counter order.

use crate::error::{Error, Result};
use crate::model::MAX_RELAYS;

/// Iterator over every non-empty subset of a ground set.
///
/// Subset number `m` (starting at 1) contains ground-set position `b` iff
/// bit `b` of `m` is set, so the order is reproducible term by term.
#[derive(Debug, Clone)]
pub struct SubsetIter<'a> {
    ground: &'a [usize],
    cursor: u32,
    end: u32,
}

/// One subset, stored as a bitmask over ground-set positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subset<'a> {
    ground: &'a [usize],
    bits: u32,
}

impl<'a> Subset<'a> {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains_position(&self, pos: usize) -> bool {
        self.bits >> pos & 1 == 1
    }

    /// Ground-set elements in ascending position order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + 'a {
        let (ground, bits) = (self.ground, self.bits);
        ground
            .iter()
            .enumerate()
            .filter(move |(pos, _)| bits >> pos & 1 == 1)
            .map(|(_, &x)| x)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl<'a> Iterator for SubsetIter<'a> {
    type Item = Subset<'a>;

    fn next(&mut self) -> Option<Subset<'a>> {
        if self.cursor > self.end {
            return None;
        }
        let bits = self.cursor;
        self.cursor += 1;
        Some(Subset {
            ground: self.ground,
            bits,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end + 1).saturating_sub(self.cursor) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetIter<'_> {}

/// All `2^n - 1` non-empty subsets of `indices`.
pub fn nonempty_subsets(indices: &[usize]) -> Result<SubsetIter<'_>> {
    if indices.len() > MAX_RELAYS {
        return Err(Error::EnumerationGuard {
            what: "subset ground set",
            size: indices.len(),
            max: MAX_RELAYS,
        });
    }
    Ok(SubsetIter {
        ground: indices,
        cursor: 1,
        end: (1u32 << indices.len()) - 1,
    })
}

/// Sum-over-subsets transform: on return `table[mask]` holds the sum of the
/// input entries over all submasks of `mask`. `table.len()` must be `2^n`.
pub fn subset_sum_transform<V>(table: &mut [V], n: usize)
where
    V: Copy + std::ops::AddAssign,
{
    debug_assert_eq!(table.len(), 1usize << n);
    for bit in 0..n {
        let b = 1usize << bit;
        for mask in 0..table.len() {
            if mask & b != 0 {
                let lower = table[mask ^ b];
                table[mask] += lower;
            }
        }
    }
}
