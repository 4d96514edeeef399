use std::fmt;

use crate::error::{input, Result};

/// A set of coordinate axes naming a standard subspace of R^k.
///
/// Axes are stored 0-based; JSON and the CLI use 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisSet {
    k: usize,
    axes: Vec<usize>,
}

impl AxisSet {
    pub fn new(k: usize, axes: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return input("ambient dimension must be at least 1");
        }
        if axes.windows(2).any(|w| w[0] >= w[1]) {
            return input(format!("axes {axes:?} must be strictly increasing"));
        }
        if let Some(&a) = axes.iter().find(|&&a| a >= k) {
            return input(format!("axis {} out of range for k = {k}", a + 1));
        }
        Ok(AxisSet { k, axes })
    }

    pub fn from_one_based(k: usize, axes: &[usize]) -> Result<Self> {
        if axes.contains(&0) {
            return input("axes are numbered from 1");
        }
        let mut v: Vec<usize> = axes.iter().map(|a| a - 1).collect();
        v.sort_unstable();
        v.dedup();
        if v.len() != axes.len() {
            return input(format!("duplicate axes in {axes:?}"));
        }
        AxisSet::new(k, v)
    }

    pub fn full(k: usize) -> Self {
        AxisSet { k, axes: (0..k).collect() }
    }

    pub fn single(k: usize, axis: usize) -> Result<Self> {
        AxisSet::new(k, vec![axis])
    }

    /// The first `n` axes (the domain subspace of a graph over [0,1]^n).
    pub fn leading(k: usize, n: usize) -> Self {
        AxisSet { k, axes: (0..n.min(k)).collect() }
    }

    /// All axis sets of size `d`, in lexicographic order.
    pub fn all_of_size(k: usize, d: usize) -> Vec<AxisSet> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(d);
        fn rec(k: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<AxisSet>) {
            if cur.len() == d {
                out.push(AxisSet { k, axes: cur.clone() });
                return;
            }
            for a in start..k {
                cur.push(a);
                rec(k, d, a + 1, cur, out);
                cur.pop();
            }
        }
        if d <= k {
            rec(k, d, 0, &mut cur, &mut out);
        }
        out
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn project<T: Clone>(&self, x: &[T]) -> Vec<T> {
        self.axes.iter().map(|&a| x[a].clone()).collect()
    }
}

impl fmt::Display for AxisSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.axes.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// A permutation of the coordinates `{0..k-1}`.
///
/// Applied to a point `x` it produces `y` with `y[i] = x[sigma[i]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            if s >= sigma.len() || seen[s] {
                return input(format!("{sigma:?} is not a permutation"));
            }
            seen[s] = true;
        }
        Ok(Permutation(sigma))
    }

    pub fn from_one_based(sigma: &[usize]) -> Result<Self> {
        if sigma.contains(&0) {
            return input("permutation entries are numbered from 1");
        }
        Permutation::new(sigma.iter().map(|s| s - 1).collect())
    }

    pub fn identity(k: usize) -> Self {
        Permutation((0..k).collect())
    }

    pub fn swap2() -> Self {
        Permutation(vec![1, 0])
    }

    /// Every permutation of `k` coordinates, in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s] = i;
        }
        Permutation(inv)
    }

    pub fn apply<T: Clone>(&self, x: &[T]) -> Vec<T> {
        self.0.iter().map(|&s| x[s].clone()).collect()
    }

    pub fn check_len(&self, k: usize) -> Result<()> {
        if self.0.len() != k {
            return input(format!(
                "permutation of {} coordinates applied to dimension {k}",
                self.0.len()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_sets_validate() {
        assert!(AxisSet::new(2, vec![0, 1]).is_ok());
        assert!(AxisSet::new(2, vec![1, 0]).is_err());
        assert!(AxisSet::new(2, vec![2]).is_err());
        assert!(AxisSet::from_one_based(3, &[3, 1]).is_ok());
        assert!(AxisSet::from_one_based(3, &[0]).is_err());
        assert_eq!(AxisSet::new(3, vec![]).unwrap().dim(), 0);
    }

    #[test]
    fn subsets_enumerated_in_order() {
        let all = AxisSet::all_of_size(3, 2);
        let axes: Vec<_> = all.iter().map(|w| w.axes().to_vec()).collect();
        assert_eq!(axes, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(AxisSet::all_of_size(3, 0).len(), 1);
        assert!(AxisSet::all_of_size(2, 3).is_empty());
    }

    #[test]
    fn permutations() {
        assert_eq!(Permutation::all(3).len(), 6);
        let s = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(s.apply(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
        assert_eq!(s.inverse().apply(&s.apply(&[1, 2, 3])), vec![1, 2, 3]);
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_one_based(&[2, 1]).unwrap() == Permutation::swap2());
    }
}
