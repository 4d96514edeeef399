use crate::error::{input, Result};

/// Points in [0,1]^k, typically draws from a copula.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud {
    k: usize,
    seed: u64,
    coords: Vec<f64>,
}

impl SampleCloud {
    /// `coords` holds the points back to back, `k` numbers each.
    pub fn new(k: usize, seed: u64, coords: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return input("sample cloud needs k >= 1");
        }
        if coords.len() % k != 0 {
            return input(format!("{} coordinates do not split into points of dimension {k}", coords.len()));
        }
        if let Some(x) = coords.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return input(format!("sample coordinate {x} outside [0,1]"));
        }
        Ok(SampleCloud { k, seed, coords })
    }

    pub fn from_points(k: usize, seed: u64, points: &[Vec<f64>]) -> Result<Self> {
        if points.iter().any(|p| p.len() != k) {
            return input(format!("sample point of wrong dimension (expected {k})"));
        }
        SampleCloud::new(k, seed, points.concat())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.k)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.k..(i + 1) * self.k]
    }
}

/// Index of the level cell containing `x`, with grid-line points going to the
/// lower cell: `ceil(x m) - 1`, clamped to `[0, m-1]`.
pub fn cell_index(x: f64, side: u32) -> u32 {
    let q = (x * side as f64).ceil() as i64 - 1;
    q.clamp(0, side as i64 - 1) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_goes_to_lower_cell() {
        assert_eq!(cell_index(0.0, 2), 0);
        assert_eq!(cell_index(0.5, 2), 0);
        assert_eq!(cell_index(0.50001, 2), 1);
        assert_eq!(cell_index(1.0, 2), 1);
        assert_eq!(cell_index(0.9, 2), 1);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SampleCloud::new(2, 0, vec![0.1, 1.5]).is_err());
        assert!(SampleCloud::new(2, 0, vec![0.1]).is_err());
        let c = SampleCloud::from_points(2, 3, &[vec![0.1, 0.9]]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.point(0), &[0.1, 0.9]);
    }
}
