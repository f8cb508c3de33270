//! Dense symmetric bit matrix over vertex pairs.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitMatrix {
    n: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let bits = n * n;
        BitMatrix { n, words: vec![0; bits.div_ceil(64)] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> (usize, u64) {
        let k = i * self.n + j;
        (k / 64, 1u64 << (k % 64))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        let (w, m) = self.slot(i, j);
        self.words[w] & m != 0
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        for (a, b) in [(i, j), (j, i)] {
            let (w, m) = self.slot(a, b);
            if value {
                self.words[w] |= m;
            } else {
                self.words[w] &= !m;
            }
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        let v = self.get(i, j);
        self.set(i, j, !v);
    }

    /// Number of set unordered pairs.
    pub fn count_pairs(&self) -> usize {
        let diag = (0..self.n).filter(|&i| self.get(i, i)).count();
        let total: usize = self.words.iter().map(|w| w.count_ones() as usize).sum();
        (total - diag) / 2 + diag
    }

    /// Set pairs `(i, j)` with `i < j`, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).filter(move |&j| self.get(i, j)).map(move |j| (i, j)))
    }

    pub fn row_count(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.get(i, j)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_set_and_toggle() {
        let mut m = BitMatrix::new(5);
        m.set(1, 3, true);
        assert!(m.get(3, 1));
        m.toggle(3, 1);
        assert!(!m.get(1, 3));
        m.set(0, 4, true);
        m.set(2, 4, true);
        assert_eq!(m.count_pairs(), 2);
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 4), (2, 4)]);
        assert_eq!(m.row_count(4), 2);
    }
}
