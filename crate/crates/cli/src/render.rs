//! Binary PGM (P5) rasters of sets, grids and clouds. Origin at the lower left.

use essclose_core::{DyadicGridSet, Piece, PieceSet, SampleCloud, Tag};
use num_traits::ToPrimitive;

pub const BACKGROUND: u8 = 255;
pub const FULL: u8 = 0;
pub const NULL: u8 = 160;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderConfig {
    pub width: usize,
    pub height: usize,
    /// Zero-based axes shown horizontally and vertically.
    pub axes: [usize; 2],
    /// Side of the square stamped for every drawn point, in pixels.
    pub stroke: usize,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { width: 512, height: 512, axes: [0, 1], stroke: 3 }
    }
}

pub struct Canvas {
    cfg: RenderConfig,
    pixels: Vec<u8>,
}

impl Canvas {
    pub fn new(cfg: RenderConfig) -> Result<Self, String> {
        if cfg.width == 0 || cfg.height == 0 || cfg.stroke == 0 {
            return Err("render dimensions and stroke must be positive".into());
        }
        if cfg.axes[0] == cfg.axes[1] {
            return Err("render axes must differ".into());
        }
        let pixels = vec![BACKGROUND; cfg.width * cfg.height];
        Ok(Canvas { cfg, pixels })
    }

    fn check_k(&self, k: usize) -> Result<(), String> {
        if self.cfg.axes.iter().any(|&a| a >= k) {
            return Err(format!("render axes {:?} do not exist in dimension {k}", self.cfg.axes.map(|a| a + 1)));
        }
        Ok(())
    }

    fn column(&self, x: f64) -> usize {
        ((x * self.cfg.width as f64).floor().max(0.0) as usize).min(self.cfg.width - 1)
    }

    fn row(&self, y: f64) -> usize {
        let from_bottom = ((y * self.cfg.height as f64).floor().max(0.0) as usize).min(self.cfg.height - 1);
        self.cfg.height - 1 - from_bottom
    }

    fn set(&mut self, col: usize, row: usize, shade: u8) {
        let p = &mut self.pixels[row * self.cfg.width + col];
        *p = (*p).min(shade);
    }

    fn stamp(&mut self, x: f64, y: f64, shade: u8) {
        let (c, r) = (self.column(x) as isize, self.row(y) as isize);
        let s = self.cfg.stroke as isize;
        let lo = -(s - 1) / 2;
        for dr in lo..lo + s {
            for dc in lo..lo + s {
                let (cc, rr) = (c + dc, r + dr);
                if cc >= 0 && rr >= 0 && (cc as usize) < self.cfg.width && (rr as usize) < self.cfg.height {
                    self.set(cc as usize, rr as usize, shade);
                }
            }
        }
    }

    fn line(&mut self, a: [f64; 2], b: [f64; 2], shade: u8) {
        let len = ((b[0] - a[0]) * self.cfg.width as f64).abs().max(((b[1] - a[1]) * self.cfg.height as f64).abs());
        let steps = (2.0 * len).ceil() as usize + 1;
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            self.stamp(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), shade);
        }
    }

    fn project(&self, x: &[f64]) -> [f64; 2] {
        [x[self.cfg.axes[0]], x[self.cfg.axes[1]]]
    }

    fn piece(&mut self, p: &Piece) {
        let shade = if p.tag() == Tag::Full { FULL } else { NULL };
        let corners: Vec<[f64; 2]> = p
            .corners()
            .iter()
            .map(|c| self.project(&c.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect::<Vec<_>>()))
            .collect();
        match p.p() {
            0 => self.stamp(corners[0][0], corners[0][1], shade),
            1 => self.line(corners[0], corners[1], shade),
            _ => {
                // corners are indexed 00, 10, 01, 11
                let quad = [corners[0], corners[1], corners[3], corners[2]];
                self.fill_convex(&quad, shade);
                for i in 0..4 {
                    self.line(quad[i], quad[(i + 1) % 4], shade);
                }
            }
        }
    }

    fn fill_convex(&mut self, quad: &[[f64; 2]; 4], shade: u8) {
        let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        let area: f64 = (0..4).map(|i| cross([0.0, 0.0], quad[i], quad[(i + 1) % 4])).sum();
        if area.abs() < 1e-15 {
            return;
        }
        let (w, h) = (self.cfg.width, self.cfg.height);
        for row in 0..h {
            let y = (h - 1 - row) as f64 / h as f64 + 0.5 / h as f64;
            for col in 0..w {
                let x = (col as f64 + 0.5) / w as f64;
                let inside = (0..4).all(|i| cross(quad[i], quad[(i + 1) % 4], [x, y]) * area.signum() >= 0.0);
                if inside {
                    self.set(col, row, shade);
                }
            }
        }
    }

    pub fn draw_set(&mut self, s: &PieceSet) -> Result<(), String> {
        self.check_k(s.k())?;
        // Null first so Full pieces stay dark where they overlap.
        for tag in [Tag::Null, Tag::Full] {
            for p in s.pieces().iter().filter(|p| p.tag() == tag) {
                self.piece(p);
            }
        }
        Ok(())
    }

    pub fn draw_grid(&mut self, g: &DyadicGridSet) -> Result<(), String> {
        self.check_k(g.k())?;
        let m = g.side() as usize;
        let (w, h) = (self.cfg.width, self.cfg.height);
        for cell in g.cells() {
            let (i, j) = (cell[self.cfg.axes[0]] as usize, cell[self.cfg.axes[1]] as usize);
            let (c0, c1) = (i * w / m, ((i + 1) * w).div_ceil(m).max(i * w / m + 1));
            let (b0, b1) = (j * h / m, ((j + 1) * h).div_ceil(m).max(j * h / m + 1));
            for from_bottom in b0..b1.min(h) {
                for col in c0..c1.min(w) {
                    self.set(col, h - 1 - from_bottom, FULL);
                }
            }
        }
        Ok(())
    }

    pub fn draw_cloud(&mut self, c: &SampleCloud) -> Result<(), String> {
        self.check_k(c.k())?;
        for p in c.points() {
            let q = self.project(p);
            let (col, row) = (self.column(q[0]), self.row(q[1]));
            self.set(col, row, FULL);
        }
        Ok(())
    }

    #[cfg(test)]
    pub fn pixel(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.cfg.width + col]
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.cfg.width, self.cfg.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use essclose_core::fixtures;

    fn small() -> RenderConfig {
        RenderConfig { width: 64, height: 64, axes: [0, 1], stroke: 1 }
    }

    #[test]
    fn origin_is_lower_left() {
        let mut c = Canvas::new(small()).unwrap();
        c.draw_set(&fixtures::m2()).unwrap();
        assert_eq!(c.pixel(0, 63), FULL);
        assert_eq!(c.pixel(63, 0), FULL);
        assert_eq!(c.pixel(0, 0), BACKGROUND);
        assert_eq!(c.pixel(63, 63), BACKGROUND);
    }

    #[test]
    fn null_pieces_are_lighter() {
        let mut c = Canvas::new(small()).unwrap();
        c.draw_set(&fixtures::fig1()).unwrap();
        assert_eq!(c.pixel(0, 0), NULL);
        assert_eq!(c.pixel(0, 63), FULL);
        // crossing point drawn by both: Full wins
        assert_eq!(c.pixel(32, 31).min(c.pixel(31, 32)), FULL);
    }

    #[test]
    fn header_and_size() {
        let c = Canvas::new(RenderConfig::default()).unwrap();
        let pgm = c.to_pgm();
        assert!(pgm.starts_with(b"P5\n512 512\n255\n"));
        assert_eq!(pgm.len(), 15 + 512 * 512);
        assert!(Canvas::new(RenderConfig { axes: [1, 1], ..small() }).is_err());
    }

    #[test]
    fn grids_fill_cells() {
        let mut c = Canvas::new(small()).unwrap();
        let g = DyadicGridSet::from_cells(2, 1, vec![vec![0, 0]]).unwrap();
        c.draw_grid(&g).unwrap();
        assert_eq!(c.pixel(0, 63), FULL);
        assert_eq!(c.pixel(31, 32), FULL);
        assert_eq!(c.pixel(32, 32), BACKGROUND);
        assert_eq!(c.pixel(31, 31), BACKGROUND);
    }
}
