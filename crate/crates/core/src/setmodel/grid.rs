//! Subsets of [0,1]^k approximated by closed dyadic cells.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use super::axis::{AxisSet, Permutation};
use crate::error::{input, Result};
use crate::scalar::Rational;

/// Largest allowed index space, `2^(k*L)` cells.
pub const MAX_INDEX_BITS: u32 = 30;

/// Occupied cells of the level-`L` dyadic grid on [0,1]^k.
///
/// Cell `(i_1..i_k)` is the closed box `prod [i_j/m, (i_j+1)/m]` with `m = 2^L`.
/// Cells are stored packed, first axis most significant, so iteration order is
/// lexicographic in the index tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicGridSet {
    k: usize,
    level: u32,
    cells: BTreeSet<u64>,
}

impl DyadicGridSet {
    pub fn empty(k: usize, level: u32) -> Result<Self> {
        if k as u32 * level > MAX_INDEX_BITS {
            return input(format!(
                "grid with k = {k} at level {level} has 2^{} cells, more than the 2^{MAX_INDEX_BITS} cap",
                k as u32 * level
            ));
        }
        Ok(DyadicGridSet { k, level, cells: BTreeSet::new() })
    }

    pub fn full(k: usize, level: u32) -> Result<Self> {
        let mut g = DyadicGridSet::empty(k, level)?;
        g.cells = (0..1u64 << (k as u32 * level)).collect();
        Ok(g)
    }

    pub fn from_cells<I>(k: usize, level: u32, cells: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<[u32]>,
    {
        let mut g = DyadicGridSet::empty(k, level)?;
        for c in cells {
            let c = c.as_ref();
            if c.len() != k {
                return input(format!("cell {c:?} has {} indices, expected {k}", c.len()));
            }
            if let Some(i) = c.iter().find(|&&i| i >= g.side()) {
                return input(format!("cell index {i} out of range at level {level}"));
            }
            g.cells.insert(g.pack(c));
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Cells per axis, `2^L`.
    pub fn side(&self) -> u32 {
        1 << self.level
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub(crate) fn pack(&self, cell: &[u32]) -> u64 {
        cell.iter()
            .fold(0u64, |acc, &i| (acc << self.level) | i as u64)
    }

    pub(crate) fn unpack(&self, key: u64) -> Vec<u32> {
        let mask = (1u64 << self.level) - 1;
        let mut out = vec![0u32; self.k];
        let mut key = key;
        for slot in out.iter_mut().rev() {
            *slot = (key & mask) as u32;
            key >>= self.level;
        }
        out
    }

    pub fn contains(&self, cell: &[u32]) -> bool {
        cell.len() == self.k
            && cell.iter().all(|&i| i < self.side())
            && self.cells.contains(&self.pack(cell))
    }

    pub(crate) fn insert(&mut self, cell: &[u32]) {
        let key = self.pack(cell);
        self.cells.insert(key);
    }

    pub(crate) fn with_keys(&self, keys: BTreeSet<u64>) -> Self {
        DyadicGridSet { k: self.k, level: self.level, cells: keys }
    }

    /// Index tuples in lexicographic order.
    pub fn cells(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.cells.iter().map(|&c| self.unpack(c))
    }

    /// Coordinate projection onto the axes of `w`, at the same level. Projecting
    /// onto the empty axis set gives the 0-dimensional grid that has its single
    /// cell exactly when `self` is nonempty.
    pub fn project(&self, w: &AxisSet) -> Result<Self> {
        if w.k() != self.k {
            return input(format!("axis set in R^{} used on a grid in R^{}", w.k(), self.k));
        }
        let mut out = DyadicGridSet::empty(w.dim(), self.level)?;
        for c in self.cells() {
            out.insert(&w.project(&c));
        }
        Ok(out)
    }

    /// Lebesgue measure of the union of cells: `|cells| * 2^(-k L)`.
    pub fn measure(&self) -> Rational {
        Rational::new(
            BigInt::from(self.cells.len()),
            BigInt::one() << (self.k * self.level as usize),
        )
    }

    /// All cells within Chebyshev index distance `r` of an occupied cell.
    pub fn dilate(&self, r: u32) -> Self {
        if r == 0 || self.is_empty() {
            return self.clone();
        }
        let side = self.side() as i64;
        let r = r as i64;
        let mut out = BTreeSet::new();
        for c in self.cells() {
            let lo: Vec<i64> = c.iter().map(|&i| (i as i64 - r).max(0)).collect();
            let hi: Vec<i64> = c.iter().map(|&i| (i as i64 + r).min(side - 1)).collect();
            let mut cur = lo.clone();
            'walk: loop {
                let cell: Vec<u32> = cur.iter().map(|&i| i as u32).collect();
                out.insert(self.pack(&cell));
                for axis in (0..self.k).rev() {
                    if cur[axis] < hi[axis] {
                        cur[axis] += 1;
                        continue 'walk;
                    }
                    cur[axis] = lo[axis];
                }
                break;
            }
        }
        self.with_keys(out)
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        sigma.check_len(self.k)?;
        let mut out = DyadicGridSet::empty(self.k, self.level)?;
        for c in self.cells() {
            out.insert(&sigma.apply(&c));
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.k != other.k || self.level != other.level {
            return input(format!(
                "grids differ: (k={}, L={}) vs (k={}, L={})",
                self.k, self.level, other.k, other.level
            ));
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.k == other.k && self.level == other.level && self.cells.is_subset(&other.cells)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_keys(self.cells.union(&other.cells).copied().collect()))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_keys(self.cells.intersection(&other.cells).copied().collect()))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_keys(self.cells.difference(&other.cells).copied().collect()))
    }

    /// Cells whose closed 1-neighborhood lies inside the set.
    pub fn interior(&self) -> Self {
        let keys = self
            .cells()
            .filter(|c| {
                let single = DyadicGridSet::from_cells(self.k, self.level, [c.clone()])
                    .expect("cell is in range");
                single.dilate(1).is_subset(self)
            })
            .map(|c| self.pack(&c))
            .collect();
        self.with_keys(keys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn diag(level: u32) -> DyadicGridSet {
        let m = 1u32 << level;
        DyadicGridSet::from_cells(2, level, (0..m).map(|i| [i, i])).unwrap()
    }

    #[test]
    fn projection_examples() {
        let a = DyadicGridSet::from_cells(2, 1, [[0, 0], [1, 1]]).unwrap();
        let p = a.project(&AxisSet::new(2, vec![0]).unwrap()).unwrap();
        assert_eq!(p.cells().collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        let origin = a.project(&AxisSet::new(2, vec![]).unwrap()).unwrap();
        assert_eq!(origin.k(), 0);
        assert_eq!(origin.len(), 1);
        assert_eq!(origin.measure(), int(1));
        let none = DyadicGridSet::empty(2, 1).unwrap().project(&AxisSet::new(2, vec![]).unwrap()).unwrap();
        assert!(none.is_empty());
        let p = diag(3).project(&AxisSet::new(2, vec![1]).unwrap()).unwrap();
        assert_eq!(p.len(), 8);
        assert!(a.project(&AxisSet::new(3, vec![2]).unwrap()).is_err());
    }

    #[test]
    fn measure_examples() {
        assert_eq!(DyadicGridSet::full(2, 3).unwrap().measure(), int(1));
        assert_eq!(DyadicGridSet::full(3, 2).unwrap().measure(), int(1));
        assert_eq!(DyadicGridSet::from_cells(2, 3, [[5, 1]]).unwrap().measure(), rat(1, 64));
        assert_eq!(diag(3).measure(), rat(1, 8));
    }

    #[test]
    fn dilation_examples() {
        let a = DyadicGridSet::from_cells(2, 3, [[3, 3]]).unwrap();
        let d = a.dilate(1);
        let expect: Vec<Vec<u32>> = (2..5).flat_map(|i| (2..5).map(move |j| vec![i, j])).collect();
        assert_eq!(d.cells().collect::<Vec<_>>(), expect);
        assert_eq!(a.dilate(0), a);
        let corners = DyadicGridSet::from_cells(2, 3, [[0, 0], [7, 7]]).unwrap();
        let d = corners.dilate(1);
        let expect = DyadicGridSet::from_cells(
            2,
            3,
            [[0, 0], [0, 1], [1, 0], [1, 1], [6, 6], [6, 7], [7, 6], [7, 7]],
        )
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn index_cap_enforced() {
        assert!(DyadicGridSet::empty(3, 10).is_ok());
        assert!(DyadicGridSet::empty(3, 11).is_err());
        assert!(DyadicGridSet::from_cells(2, 1, [[2, 0]]).is_err());
        assert!(DyadicGridSet::from_cells(2, 1, [[0, 0, 0]]).is_err());
    }

    #[test]
    fn interior_of_block() {
        let block = DyadicGridSet::from_cells(2, 3, [[3, 3]]).unwrap().dilate(1);
        let int = block.interior();
        assert_eq!(int.cells().collect::<Vec<_>>(), vec![vec![3, 3]]);
    }
}
