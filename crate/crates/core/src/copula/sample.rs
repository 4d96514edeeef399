//! Seeded sampling. Point `i` always consumes the same slice of one ChaCha8
//! stream, so chunks can be drawn in parallel and still match a sequential run.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::piecewise::MapPiece;
use super::spec::CopulaSpec;
use crate::error::{Error, Result};
use crate::setmodel::SampleCloud;

const CHUNK: usize = 4096;

/// Uniform on `[0,1)` with 53 random bits.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Number of uniforms one draw needs.
fn uniforms_per_draw(c: &CopulaSpec) -> Result<usize> {
    Ok(match c {
        CopulaSpec::Product(k) => *k,
        CopulaSpec::Min(_) | CopulaSpec::WLower2 | CopulaSpec::Shuffle(_) => 1,
        CopulaSpec::Bipartite(m) => m.n(),
        CopulaSpec::Permuted { inner, .. } => uniforms_per_draw(inner)?,
        CopulaSpec::Raw { .. } => return Err(Error::Unsupported("no sampler for raw copula formulas".into())),
    })
}

struct FloatPiece {
    lo: Vec<f64>,
    hi: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
}

impl FloatPiece {
    fn new(p: &MapPiece) -> Self {
        let f = |r: &crate::scalar::Rational| num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN);
        FloatPiece {
            lo: p.domain.iter().map(|(a, _)| f(a)).collect(),
            hi: p.domain.iter().map(|(_, b)| f(b)).collect(),
            coeffs: p.coeffs.iter().map(|row| row.iter().map(f).collect()).collect(),
        }
    }

    /// Half-open box, closed at 1.
    fn owns(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&lo, &hi))| lo <= xi && (xi < hi || hi == 1.0))
    }

    fn eval(&self, x: &[f64], out: &mut Vec<f64>) {
        for row in &self.coeffs {
            let y = row[1..].iter().zip(x).fold(row[0], |acc, (c, xi)| acc + c * xi);
            out.push(y.clamp(0.0, 1.0));
        }
    }
}

/// Map pieces converted to binary64 once, for bipartite copulas.
fn float_pieces(c: &CopulaSpec) -> Vec<FloatPiece> {
    match c {
        CopulaSpec::Bipartite(m) => m.carrying_pieces().map(FloatPiece::new).collect(),
        _ => Vec::new(),
    }
}

fn draw(c: &CopulaSpec, pieces: &[FloatPiece], u: &[f64], out: &mut Vec<f64>) {
    match c {
        CopulaSpec::Bipartite(_) => {
            out.extend_from_slice(u);
            // Carrying pieces cover the cube up to boundaries, so the closed
            // fallback only matters for points on a seam the owners miss.
            let p = pieces.iter().find(|p| p.owns(u)).or_else(|| {
                pieces.iter().find(|p| u.iter().zip(p.lo.iter().zip(&p.hi)).all(|(&x, (&lo, &hi))| lo <= x && x <= hi))
            });
            p.expect("carrying pieces cover the cube").eval(u, out);
        }
        CopulaSpec::Product(_) => out.extend_from_slice(u),
        CopulaSpec::Min(k) => out.extend(std::iter::repeat(u[0]).take(*k)),
        CopulaSpec::WLower2 => out.extend([u[0], 1.0 - u[0]]),
        CopulaSpec::Shuffle(s) => out.extend([u[0], s.map_f64(u[0])]),
        _ => unreachable!("raw and permuted copulas never reach the drawer"),
    }
}

/// `n` draws from `c`, deterministic in `seed` and independent of threading.
pub fn sample_copula(c: &CopulaSpec, n: usize, seed: u64) -> Result<SampleCloud> {
    let per = uniforms_per_draw(c)?;
    let k = c.k();
    let root = innermost(c);
    let pieces = float_pieces(root);
    let chunks: Vec<Vec<f64>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // two 32-bit words per uniform
            rng.set_word_pos((start * per * 2) as u128);
            let mut out = Vec::with_capacity((end - start) * k);
            let mut u = vec![0.0; per];
            let mut x = Vec::with_capacity(k);
            for _ in start..end {
                u.iter_mut().for_each(|ui| *ui = unit(&mut rng));
                x.clear();
                draw_outer(c, root, &pieces, &u, &mut x);
                out.extend_from_slice(&x);
            }
            out
        })
        .collect();
    SampleCloud::new(k, seed, chunks.concat())
}

/// The non-permuted copula at the bottom of a chain of permutations.
fn innermost(c: &CopulaSpec) -> &CopulaSpec {
    match c {
        CopulaSpec::Permuted { inner, .. } => innermost(inner),
        _ => c,
    }
}

fn draw_outer(c: &CopulaSpec, root: &CopulaSpec, pieces: &[FloatPiece], u: &[f64], out: &mut Vec<f64>) {
    match c {
        CopulaSpec::Permuted { inner, sigma } => {
            let mut x = Vec::with_capacity(inner.k());
            draw_outer(inner, root, pieces, u, &mut x);
            out.extend(sigma.apply(&x));
        }
        _ => draw(root, pieces, u, out),
    }
}
