//! Small enumeration helpers shared by the other modules.

/// Index of the pair `{i, j}` (`i < j`) among the pairs of `{0..n}` in
/// lexicographic order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Number of 2-subsets of an `n`-set.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs `(i, j)` with `i < j < n`, lexicographically.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// All `k`-subsets of `{0..n}` as sorted vectors, lexicographically.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

/// Restricted growth strings of length `n`, optionally capped at `max_blocks`
/// blocks.
///
/// Each string `a` has `a[0] = 0` and `a[i] <= 1 + max(a[..i])`; the strings are
/// in bijection with the set partitions of `{0..n}` and are yielded in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    current: Vec<usize>,
    max_blocks: usize,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        Self::with_max_blocks(n, usize::MAX)
    }

    pub fn with_max_blocks(n: usize, max_blocks: usize) -> Self {
        Self {
            current: vec![0; n],
            max_blocks,
            done: n > 0 && max_blocks == 0,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // advance: find the rightmost position that can be incremented
        let n = self.current.len();
        let mut advanced = false;
        let mut i = n;
        while i > 1 {
            i -= 1;
            let prefix_max = self.current[..i].iter().copied().max().unwrap_or(0);
            if self.current[i] <= prefix_max && self.current[i] + 1 < self.max_blocks {
                self.current[i] += 1;
                for v in &mut self.current[i + 1..] {
                    *v = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(out)
    }
}

/// Relabels `labels` in order of first appearance, producing a restricted
/// growth string.
pub fn normalize_labels<T: PartialEq + Copy>(labels: &[T]) -> Vec<u8> {
    let mut seen: Vec<T> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(p) => p as u8,
            None => {
                seen.push(*l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Bell numbers, for sizing enumerations.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last.saturating_add(*v));
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_dense() {
        for n in 0..7 {
            let ps = pairs(n);
            assert_eq!(ps.len(), pair_count(n));
            for (k, &(i, j)) in ps.iter().enumerate() {
                assert_eq!(pair_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn partitions_count_bell() {
        for n in 0..8 {
            assert_eq!(SetPartitions::new(n).count() as u128, bell(n), "n={n}");
        }
        assert_eq!(bell(10), 115_975);
    }

    #[test]
    fn capped_partitions() {
        // Stirling numbers S(5,1)+S(5,2) = 1 + 15
        assert_eq!(SetPartitions::with_max_blocks(5, 2).count(), 16);
        assert!(SetPartitions::with_max_blocks(5, 2).all(|p| p.iter().all(|&b| b < 2)));
        assert_eq!(SetPartitions::new(0).count(), 1);
    }

    #[test]
    fn normalize_first_appearance() {
        assert_eq!(normalize_labels(&[7, 7, 3, 9, 3]), vec![0, 0, 1, 2, 1]);
    }
}
