//! Sorted relative-weight triples `w1 >= w2 >= w3 >= 0` with
//! `w1 + w2 + w3 = D`, stored as integer numerators over `D`.
//!
//! Canonical order: `w1` descending, then `w2` descending. Rows share `w1`.

use crate::error::{Error, Result};

/// Divisible by every integer 1..=10.
pub const DEFAULT_DENOMINATOR: u32 = 2520;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGrid {
    denominator: u32,
    /// `row_start[r]` is the index of the first point with `w1 = D - r`.
    row_start: Vec<usize>,
    len: usize,
}

impl WeightGrid {
    pub fn new(denominator: u32) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Invalid("grid denominator must be at least 1".into()));
        }
        let d = denominator as u64;
        let mut row_start = Vec::new();
        let mut len = 0usize;
        for w1 in (d.div_ceil(3)..=d).rev() {
            row_start.push(len);
            len += Self::row_width(d, w1);
        }
        Ok(WeightGrid {
            denominator,
            row_start,
            len,
        })
    }

    fn w2_range(d: u64, w1: u64) -> (u64, u64) {
        let rest = d - w1;
        (rest.div_ceil(2), w1.min(rest))
    }

    fn row_width(d: u64, w1: u64) -> usize {
        let (lo, hi) = Self::w2_range(d, w1);
        if hi >= lo {
            (hi - lo + 1) as usize
        } else {
            0
        }
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Row numbers; row `r` holds the points with `w1 = D - r`.
    pub fn rows(&self) -> Vec<usize> {
        (0..self.row_start.len()).collect()
    }

    /// `(index, point)` pairs of one row, in canonical order.
    pub fn row_points(&self, row: usize) -> impl Iterator<Item = (usize, [u32; 3])> {
        let d = self.denominator as u64;
        let w1 = d - row as u64;
        let (lo, hi) = Self::w2_range(d, w1);
        let start = self.row_start[row];
        (lo..=hi)
            .rev()
            .enumerate()
            .map(move |(offset, w2)| (start + offset, [w1 as u32, w2 as u32, (d - w1 - w2) as u32]))
    }

    pub fn points(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        (0..self.row_start.len()).flat_map(move |r| self.row_points(r).map(|(_, p)| p))
    }

    /// Index of a sorted point.
    pub fn index_of(&self, point: [u32; 3]) -> Option<usize> {
        let [w1, w2, w3] = point;
        let d = self.denominator;
        if w1 < w2 || w2 < w3 || w1 as u64 + w2 as u64 + w3 as u64 != d as u64 {
            return None;
        }
        let row = (d - w1) as usize;
        let (_, hi) = Self::w2_range(d as u64, w1 as u64);
        Some(self.row_start[row] + (hi - w2 as u64) as usize)
    }

    pub fn point_at(&self, index: usize) -> Option<[u32; 3]> {
        if index >= self.len {
            return None;
        }
        let row = self.row_start.partition_point(|&s| s <= index) - 1;
        self.row_points(row)
            .nth(index - self.row_start[row])
            .map(|(_, p)| p)
    }
}

/// Sorts a triple into nonincreasing order.
pub fn sorted_desc(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_grids() {
        let g = WeightGrid::new(1).unwrap();
        assert_eq!(g.points().collect::<Vec<_>>(), vec![[1, 0, 0]]);
        let g = WeightGrid::new(3).unwrap();
        assert_eq!(
            g.points().collect::<Vec<_>>(),
            vec![[3, 0, 0], [2, 1, 0], [1, 1, 1]]
        );
        assert!(WeightGrid::new(0).is_err());
    }

    #[test]
    fn index_round_trip() {
        for d in [1, 2, 5, 12, 37] {
            let g = WeightGrid::new(d).unwrap();
            let pts: Vec<_> = g.points().collect();
            assert_eq!(pts.len(), g.len());
            for (k, p) in pts.iter().enumerate() {
                assert_eq!(g.index_of(*p), Some(k));
                assert_eq!(g.point_at(k), Some(*p));
                assert!(p[0] >= p[1] && p[1] >= p[2]);
                assert_eq!(p.iter().sum::<u32>(), d);
            }
        }
    }

    #[test]
    fn default_grid_size() {
        // number of partitions of 2520 into at most three parts
        let g = WeightGrid::new(DEFAULT_DENOMINATOR).unwrap();
        let brute = (0..=2520u32)
            .flat_map(|a| (0..=a).map(move |b| (a, b)))
            .filter(|&(a, b)| 2520 >= a + b && 2520 - a - b <= b)
            .count();
        assert_eq!(g.len(), brute);
    }

    #[test]
    fn rejects_unsorted() {
        let g = WeightGrid::new(12).unwrap();
        assert_eq!(g.index_of([4, 6, 2]), None);
        assert_eq!(g.index_of([6, 4, 1]), None);
    }
}
