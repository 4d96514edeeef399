//! Groundedness, uniform margins and k-increasingness, checked on a lattice
//! plus seeded random probes.

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::{CopulaSpec, Volume};
use crate::error::{input, Result};
use crate::scalar::{rat, Rational};

pub const EXACT_TOLERANCE: f64 = 1e-12;
pub const RAW_TOLERANCE: f64 = 1e-9;

/// Random probe coordinates are multiples of `2^-PROBE_BITS`.
const PROBE_BITS: u32 = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct PointCheck {
    pub pass: bool,
    /// Largest deviation seen.
    pub max_deviation: f64,
    /// Point where it was seen; for margins, with the free axis.
    pub witness: Option<(Vec<Rational>, Option<usize>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCheck {
    pub pass: bool,
    pub min_volume: f64,
    pub witness: Option<Vec<(Rational, Rational)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub tolerance: f64,
    pub grounded: PointCheck,
    pub margins: PointCheck,
    pub k_increasing: BoxCheck,
    pub boxes_checked: usize,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.grounded.pass && self.margins.pass && self.k_increasing.pass
    }
}

fn lattice() -> Vec<Rational> {
    (0..=4).map(|i| rat(i, 4)).collect()
}

fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(0..=1i64 << PROBE_BITS), 1 << PROBE_BITS)
}

/// All tuples over `values` of length `k`, first axis slowest.
fn product<T: Clone>(values: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|pre| {
                values.iter().map(move |v| {
                    let mut p = pre.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn deviation(v: &Volume, target: &Rational) -> f64 {
    match v {
        Volume::Exact(r) => (r - target).to_f64().unwrap_or(f64::INFINITY).abs(),
        Volume::Approx(x) => (x - target.to_f64().unwrap_or(f64::NAN)).abs(),
    }
}

fn cdf_volume(c: &CopulaSpec, u: &[Rational]) -> Result<Volume> {
    if c.is_exact() {
        Ok(Volume::Exact(c.cdf(u)?))
    } else {
        let x: Vec<f64> = u.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
        Ok(Volume::Approx(c.cdf(&x)?))
    }
}

/// Checks the three copula axioms. Boxes are every lattice box with corners in
/// `{0, 1/4, 1/2, 3/4, 1}` plus `probes` random ones; the reported witness is
/// the first box of least volume.
pub fn check_copula_axioms(c: &CopulaSpec, probes: usize, seed: u64) -> Result<AxiomReport> {
    if probes == 0 {
        return input("need at least one probe");
    }
    let k = c.k();
    let tol = if c.is_exact() { EXACT_TOLERANCE } else { RAW_TOLERANCE };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lat = lattice();

    let mut points = product(&lat, k);
    points.extend((0..probes).map(|_| (0..k).map(|_| random_unit(&mut rng)).collect::<Vec<_>>()));

    let mut grounded = PointCheck { pass: true, max_deviation: 0.0, witness: None };
    let mut margins = PointCheck { pass: true, max_deviation: 0.0, witness: None };
    let zero = Rational::zero();
    for p in &points {
        for i in 0..k {
            let mut g = p.clone();
            g[i] = zero.clone();
            let dev = deviation(&cdf_volume(c, &g)?, &zero);
            if dev > grounded.max_deviation {
                grounded.max_deviation = dev;
                grounded.witness = Some((g, Some(i)));
            }
            let mut m = vec![Rational::one(); k];
            m[i] = p[i].clone();
            let dev = deviation(&cdf_volume(c, &m)?, &p[i]);
            if dev > margins.max_deviation {
                margins.max_deviation = dev;
                margins.witness = Some((m, Some(i)));
            }
        }
    }
    grounded.pass = grounded.max_deviation <= tol;
    margins.pass = margins.max_deviation <= tol;

    let intervals: Vec<(Rational, Rational)> = lat
        .iter()
        .enumerate()
        .flat_map(|(i, lo)| lat[i + 1..].iter().map(move |hi| (lo.clone(), hi.clone())))
        .collect();
    let mut boxes = product(&intervals, k);
    boxes.extend((0..probes).map(|_| {
        (0..k)
            .map(|_| {
                let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect::<Vec<_>>()
    }));
    let mut inc = BoxCheck { pass: true, min_volume: f64::INFINITY, witness: None };
    let mut least: Option<Volume> = None;
    for bx in &boxes {
        let v = c.c_volume(bx)?;
        let smaller = match (&least, &v) {
            (None, _) => true,
            (Some(Volume::Exact(a)), Volume::Exact(b)) => b < a,
            (Some(a), b) => b.to_f64() < a.to_f64(),
        };
        if smaller {
            inc.min_volume = v.to_f64();
            inc.witness = Some(bx.clone());
            least = Some(v);
        }
    }
    inc.pass = inc.min_volume >= -tol;
    Ok(AxiomReport { tolerance: tol, grounded, margins, k_increasing: inc, boxes_checked: boxes.len() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlabReport {
    pub slabs: usize,
    /// Slabs whose volume differs from the slab width, as `(axis, width, volume)`.
    pub mismatches: Vec<(usize, Rational, Volume)>,
}

/// Volume of `count` seeded slabs `{x_i <= u}` against `u`; exact comparison
/// for exact families, `1e-9` otherwise.
pub fn check_slab_margins(c: &CopulaSpec, count: usize, seed: u64) -> Result<SlabReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for _ in 0..count {
        let axis = rng.gen_range(0..c.k());
        let u = random_unit(&mut rng);
        let v = c.slab_volume(axis, &u)?;
        let ok = match &v {
            Volume::Exact(r) => *r == u,
            Volume::Approx(x) => (x - u.to_f64().unwrap_or(f64::NAN)).abs() <= RAW_TOLERANCE,
        };
        if !ok {
            mismatches.push((axis, u, v));
        }
    }
    Ok(SlabReport { slabs: count, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn min_three_passes() {
        let r = check_copula_axioms(&CopulaSpec::min(3).unwrap(), 100, 1).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.boxes_checked, 1000 + 100);
    }

    #[test]
    fn w2_as_raw_passes() {
        let w = CopulaSpec::raw(2, "w2", |u| (u[0] + u[1] - 1.0).max(0.0)).unwrap();
        assert!(check_copula_axioms(&w, 200, 2).unwrap().all_pass());
    }

    #[test]
    fn w3_fails_with_half_cube_witness() {
        let w = CopulaSpec::raw(3, "w3", |u| (u[0] + u[1] + u[2] - 2.0).max(0.0)).unwrap();
        let r = check_copula_axioms(&w, 200, 3).unwrap();
        assert!(r.grounded.pass && r.margins.pass);
        assert!(!r.k_increasing.pass);
        assert!((r.k_increasing.min_volume + 0.5).abs() < 1e-12);
        assert_eq!(r.k_increasing.witness.unwrap(), vec![(rat(1, 2), int(1)); 3]);
    }

    #[test]
    fn non_uniform_margin_is_caught() {
        let sq = CopulaSpec::raw(2, "uv^2", |u| u[0] * u[1] * u[1]).unwrap();
        let r = check_copula_axioms(&sq, 50, 4).unwrap();
        assert!(!r.margins.pass);
        assert!(r.margins.witness.is_some());
    }

    #[test]
    fn slabs() {
        for c in [CopulaSpec::product(3).unwrap(), CopulaSpec::min(2).unwrap(), CopulaSpec::WLower2] {
            assert!(check_slab_margins(&c, 50, 9).unwrap().mismatches.is_empty());
        }
    }
}
