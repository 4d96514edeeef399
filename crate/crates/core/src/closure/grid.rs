//! Grid approximation of the d-essential closure.
//!
//! A neighborhood of a cell is replaced by a window of absolute radius rho, and
//! "positive measure" by "measure above a threshold tau". The result is the set
//! of cells of `A` that pass the test for every radius in the schedule.

use std::collections::HashSet;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{input, Result};
use crate::scalar::{dyadic, rat, Rational};
use crate::setmodel::{AxisSet, DyadicGridSet};

#[derive(Clone, Debug, PartialEq)]
pub struct GridClosureParams {
    pub d: usize,
    /// Absolute window radii, decreasing.
    pub rho_schedule: Vec<Rational>,
    /// A window passes when its projected measure is strictly above `tau`.
    pub tau: Rational,
}

impl GridClosureParams {
    pub fn new(d: usize) -> Self {
        GridClosureParams {
            d,
            rho_schedule: vec![rat(1, 8), rat(1, 16), rat(1, 32)],
            tau: rat(1, 64),
        }
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        if self.d > k {
            return input(format!("closure order d = {} exceeds the ambient dimension {k}", self.d));
        }
        if self.rho_schedule.is_empty() {
            return input("empty radius schedule");
        }
        let zero = Rational::zero();
        let one = rat(1, 1);
        if let Some(r) = self.rho_schedule.iter().find(|r| **r <= zero || **r > one) {
            return input(format!("window radius {r} not in (0, 1]"));
        }
        if self.rho_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return input("radius schedule must be strictly decreasing");
        }
        if self.tau <= zero {
            return input("threshold tau must be positive");
        }
        Ok(())
    }

    /// Window radius in cells at `level`: `ceil(rho * 2^L)`.
    pub fn radius_cells(rho: &Rational, level: u32) -> u32 {
        (rho / dyadic(level)).ceil().to_integer().to_u32().expect("radius fits")
    }

    /// Smallest number of projected cells whose measure exceeds `tau`.
    pub fn min_count(&self, level: u32) -> u64 {
        let scaled = &self.tau / dyadic(level * self.d as u32);
        // count * 2^(-dL) > tau  <=>  count > tau * 2^(dL)
        (scaled.floor().to_integer() + 1u32).to_u64().unwrap_or(u64::MAX)
    }
}

/// Visits the cells of `a` within Chebyshev distance `r` of `cell`, stopping
/// early when `f` returns true. Returns whether it stopped early.
fn any_in_window(
    a: &DyadicGridSet,
    cell: &[u32],
    r: u32,
    occupied: &[Vec<u32>],
    mut f: impl FnMut(&[u32]) -> bool,
) -> bool {
    let side = a.side() as i64;
    let k = a.k();
    let window_volume = (2 * r as u64 + 1).saturating_pow(k as u32);
    if window_volume as usize >= occupied.len() {
        let near = |c: &[u32]| c.iter().zip(cell).all(|(&x, &y)| (x as i64 - y as i64).abs() <= r as i64);
        return occupied.iter().any(|c| near(c) && f(c));
    }
    let lo: Vec<i64> = cell.iter().map(|&i| (i as i64 - r as i64).max(0)).collect();
    let hi: Vec<i64> = cell.iter().map(|&i| (i as i64 + r as i64).min(side - 1)).collect();
    let mut cur = lo.clone();
    let mut c = vec![0u32; k];
    'walk: loop {
        for (ci, &x) in c.iter_mut().zip(&cur) {
            *ci = x as u32;
        }
        if a.contains(&c) && f(&c) {
            return true;
        }
        for axis in (0..k).rev() {
            if cur[axis] < hi[axis] {
                cur[axis] += 1;
                continue 'walk;
            }
            cur[axis] = lo[axis];
        }
        return false;
    }
}

/// Whether the window projects at least `need` cells onto some `W`.
fn passes(a: &DyadicGridSet, cell: &[u32], r: u32, occupied: &[Vec<u32>], subspaces: &[AxisSet], need: u64) -> bool {
    let mut seen: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); subspaces.len()];
    any_in_window(a, cell, r, occupied, |c| {
        subspaces.iter().zip(seen.iter_mut()).any(|(w, set)| {
            set.insert(w.project(c));
            set.len() as u64 >= need
        })
    })
}

pub fn essential_closure_grid(a: &DyadicGridSet, params: &GridClosureParams) -> Result<DyadicGridSet> {
    params.validate(a.k())?;
    if params.d == 0 {
        // Each cell of A meets A, and the counting measure of a nonempty set is positive.
        return Ok(a.clone());
    }
    let level = a.level();
    let need = params.min_count(level);
    let subspaces = AxisSet::all_of_size(a.k(), params.d);
    let radii: Vec<u32> = params
        .rho_schedule
        .iter()
        .map(|r| GridClosureParams::radius_cells(r, level))
        .collect();
    let occupied: Vec<Vec<u32>> = a.cells().collect();
    let keep: Vec<bool> = occupied
        .par_iter()
        .map(|cell| {
            radii.iter().all(|&r| passes(a, cell, r, &occupied, &subspaces, need))
        })
        .collect();
    let kept: Vec<Vec<u32>> = occupied
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(c, _)| c)
        .collect();
    DyadicGridSet::from_cells(a.k(), level, kept)
}
