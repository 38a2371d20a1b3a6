//! Set partitions of `{0, …, k−1}` as lists of block bit masks.

use std::sync::OnceLock;

use crate::timefamily::MAX_TIMES;

static CACHE: [OnceLock<Vec<Vec<u32>>>; MAX_TIMES + 1] =
    [const { OnceLock::new() }; MAX_TIMES + 1];

/// All set partitions of a `k`-element set, `k ≤ MAX_TIMES`. Generated once
/// per `k` and shared.
pub fn set_partitions(k: usize) -> &'static [Vec<u32>] {
    assert!(k <= MAX_TIMES, "set partitions are cached up to k = {MAX_TIMES}");
    CACHE[k].get_or_init(|| {
        let mut out = Vec::new();
        grow(0, k, &mut Vec::new(), &mut out);
        out
    })
}

fn grow(j: usize, k: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if j == k {
        out.push(blocks.clone());
        return;
    }
    for b in 0..blocks.len() {
        blocks[b] |= 1 << j;
        grow(j + 1, k, blocks, out);
        blocks[b] &= !(1 << j);
    }
    blocks.push(1 << j);
    grow(j + 1, k, blocks, out);
    blocks.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52];
        for (k, b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(k).len(), *b);
        }
    }

    #[test]
    fn each_partition_covers_the_set_disjointly() {
        for k in 1..=MAX_TIMES {
            let full = (1u32 << k) - 1;
            let mut seen = std::collections::HashSet::new();
            for p in set_partitions(k) {
                let mut acc = 0u32;
                for b in p {
                    assert_ne!(*b, 0);
                    assert_eq!(acc & b, 0);
                    acc |= b;
                }
                assert_eq!(acc, full);
                let mut key = p.clone();
                key.sort_unstable();
                assert!(seen.insert(key));
            }
        }
    }
}
