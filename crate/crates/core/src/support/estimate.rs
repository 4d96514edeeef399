//! Sampled supports, the 1-essential-closedness check and box counting.

use rayon::prelude::*;

use crate::closure::{essential_closure_exact, essential_closure_grid, GridClosureParams};
use crate::copula::{sample_copula, CopulaSpec};
use crate::error::{input, Result};
use crate::setmodel::{count_cells, rasterize_set, DyadicGridSet, SampleCloud};
use crate::{Piece, PieceSet};

pub const DEFAULT_MIN_COUNT: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct SupportEstimate {
    pub grid: DyadicGridSet,
    pub level: u32,
    pub min_count: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Cells holding at least `min_count` points of the cloud.
pub fn support_estimate(cloud: &SampleCloud, level: u32, min_count: usize) -> Result<SupportEstimate> {
    Ok(SupportEstimate {
        grid: count_cells(cloud, level, min_count)?,
        level,
        min_count,
        samples: cloud.len(),
        seed: cloud.seed(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    /// Parts of the set the closure does not reach.
    Pieces(Vec<Piece>),
    /// Cells removed by the grid closure.
    Cells(DyadicGridSet),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosednessReport {
    pub closed: bool,
    pub residual: Residual,
}

pub fn check_one_essential_closedness(s: &PieceSet) -> Result<ClosednessReport> {
    let closure = essential_closure_exact(s, 1)?;
    let residual = closure.uncovered_pieces(s);
    Ok(ClosednessReport { closed: residual.is_empty(), residual: Residual::Pieces(residual) })
}

/// Grid version with the default window schedule; residual cells are up to
/// discretization.
pub fn check_one_essential_closedness_grid(grid: &DyadicGridSet) -> Result<ClosednessReport> {
    let closure = essential_closure_grid(grid, &GridClosureParams::new(1))?;
    let residual = grid.difference(&closure)?;
    Ok(ClosednessReport { closed: residual.is_empty(), residual: Residual::Cells(residual) })
}

pub enum DimensionSource<'a> {
    Set(&'a PieceSet),
    /// Samples `n` points once and counts cells with at least `min_count`.
    Sampler { copula: &'a CopulaSpec, n: usize, seed: u64, min_count: usize },
    Cloud { cloud: &'a SampleCloud, min_count: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub levels: Vec<u32>,
    pub counts: Vec<usize>,
    /// Least-squares slope of `log2(count)` against level.
    pub slope: f64,
}

pub fn box_counting_dimension(source: DimensionSource<'_>, levels: &[u32]) -> Result<DimensionEstimate> {
    let mut lv = levels.to_vec();
    lv.sort_unstable();
    lv.dedup();
    if lv.len() < 3 {
        return input("box counting needs at least three distinct levels");
    }
    let sampled;
    let (cloud, min_count) = match source {
        DimensionSource::Sampler { copula, n, seed, min_count } => {
            sampled = sample_copula(copula, n, seed)?;
            (Some(&sampled), min_count)
        }
        DimensionSource::Cloud { cloud, min_count } => (Some(cloud), min_count),
        DimensionSource::Set(s) => {
            let counts = lv.par_iter().map(|&l| Ok(rasterize_set(s, l)?.len())).collect::<Result<Vec<_>>>()?;
            return finish(lv, counts);
        }
    };
    let cloud = cloud.expect("set handled above");
    let counts = lv
        .par_iter()
        .map(|&l| Ok(count_cells(cloud, l, min_count)?.len()))
        .collect::<Result<Vec<_>>>()?;
    finish(lv, counts)
}

fn finish(levels: Vec<u32>, counts: Vec<usize>) -> Result<DimensionEstimate> {
    if counts.iter().any(|&c| c == 0) {
        return input("box counting of an empty set is undefined");
    }
    let xs: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).log2()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(DimensionEstimate { levels, counts, slope: sxy / sxx })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::int;
    use crate::setmodel::{Tag, TaggedPieceSet};

    #[test]
    fn diagonal_counts() {
        let d = box_counting_dimension(DimensionSource::Set(&fixtures::m2()), &[3, 4, 5, 6, 7]).unwrap();
        // oracle: 2^L diagonal cells plus 2 (2^L - 1) cells touching at corners
        let expect: Vec<usize> = (3..=7).map(|l| 3 * (1usize << l) - 2).collect();
        assert_eq!(d.counts, expect);
        assert!((d.slope - 1.0).abs() < 0.05);
    }

    #[test]
    fn square_is_two_dimensional() {
        let sq = TaggedPieceSet::new(2, vec![Piece::rect(int(0), int(1), int(0), int(1), Tag::Full).unwrap()]).unwrap();
        let d = box_counting_dimension(DimensionSource::Set(&sq), &[3, 4, 5, 6]).unwrap();
        assert_eq!(d.slope, 2.0);
        assert!(box_counting_dimension(DimensionSource::Set(&sq), &[3, 4]).is_err());
        assert!(box_counting_dimension(DimensionSource::Set(&TaggedPieceSet::empty(2)), &[3, 4, 5]).is_err());
    }

    #[test]
    fn closedness() {
        assert!(check_one_essential_closedness(&fixtures::fig3()).unwrap().closed);
        let mut pieces = fixtures::m2().into_pieces();
        let pt = Piece::point(vec![crate::scalar::rat(1, 5), crate::scalar::rat(4, 5)]).unwrap();
        pieces.push(pt.clone());
        let r = check_one_essential_closedness(&TaggedPieceSet::new(2, pieces).unwrap()).unwrap();
        assert!(!r.closed);
        assert_eq!(r.residual, Residual::Pieces(vec![pt]));
    }

    #[test]
    fn estimates() {
        let cloud = sample_copula(&CopulaSpec::min(2).unwrap(), 100_000, 3).unwrap();
        let e = support_estimate(&cloud, 5, 5).unwrap();
        // oracle: every diagonal cell is hit, nothing else can be
        let diag = DyadicGridSet::from_cells(2, 5, (0..32).map(|i| vec![i, i])).unwrap();
        assert!(diag.is_subset(&e.grid));
        assert!(e.grid.is_subset(&diag.dilate(1)));
        let empty = SampleCloud::new(2, 0, vec![]).unwrap();
        assert!(support_estimate(&empty, 4, 1).unwrap().grid.is_empty());
        let r = check_one_essential_closedness_grid(&e.grid).unwrap();
        assert!(r.closed);
    }
}
