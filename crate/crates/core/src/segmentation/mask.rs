use std::collections::VecDeque;

use super::{Contour, SegError};
use crate::imgio::{Image, ImgError};

/// Binary region over an image grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

/// Clockwise neighbor ring in image coordinates (y grows downwards),
/// starting east.
pub(crate) const RING: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

const FOUR: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, SegError> {
        if bits.len() != width * height {
            return Err(SegError::DimensionMismatch);
        }
        Ok(Mask {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Mask {
            width,
            height,
            bits,
        }
    }

    /// Any non-zero pixel is foreground.
    pub fn from_image(image: &Image) -> Self {
        Mask {
            width: image.width(),
            height: image.height(),
            bits: image.pixels().iter().map(|&p| p != 0).collect(),
        }
    }

    /// Foreground at 255, background at 0, suitable for P5 output.
    pub fn to_image(&self) -> Result<Image, ImgError> {
        Image::new(
            self.width,
            self.height,
            255,
            self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    /// Out-of-bounds coordinates read as background.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn same_dims(&self, other: &Mask) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Set pixels in raster order.
    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    pub fn union(&self, other: &Mask) -> Mask {
        assert!(self.same_dims(other), "mask dimensions differ");
        Mask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect(),
        }
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        assert!(self.same_dims(other), "mask dimensions differ");
        Mask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect(),
        }
    }

    /// Inclusive bounding box `(min_x, min_y, max_x, max_y)` of the set pixels.
    pub fn bbox(&self) -> Option<(usize, usize, usize, usize)> {
        let mut it = self.iter_set();
        let (x0, y0) = it.next()?;
        Some(it.fold((x0, y0, x0, y0), |(a, b, c, d), (x, y)| {
            (a.min(x), b.min(y), c.max(x), d.max(y))
        }))
    }

    /// Set pixels with at least one 4-neighbor outside the mask (or outside
    /// the image). These form an 8-connected chain around each component.
    pub fn boundary(&self) -> Mask {
        let mut out = Mask::new(self.width, self.height);
        for (x, y) in self.iter_set() {
            let (xi, yi) = (x as i64, y as i64);
            if FOUR.iter().any(|&(dx, dy)| !self.get_signed(xi + dx, yi + dy)) {
                out.set(x, y, true);
            }
        }
        out
    }

    /// Connected component containing `seed` (4- or 8-connectivity); empty
    /// if the seed is background.
    pub fn component(&self, seed: (usize, usize), eight: bool) -> Mask {
        let mut out = Mask::new(self.width, self.height);
        if seed.0 >= self.width || seed.1 >= self.height || !self.get(seed.0, seed.1) {
            return out;
        }
        let offsets: &[(i64, i64)] = if eight { &RING } else { &FOUR };
        let mut queue = VecDeque::from([seed]);
        out.set(seed.0, seed.1, true);
        while let Some((x, y)) = queue.pop_front() {
            for &(dx, dy) in offsets {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if self.get_signed(nx, ny) && !out.get(nx as usize, ny as usize) {
                    out.set(nx as usize, ny as usize, true);
                    queue.push_back((nx as usize, ny as usize));
                }
            }
        }
        out
    }

    /// Largest 8-connected component; ties go to the one met first in raster
    /// order.
    pub fn largest_component(&self) -> Mask {
        let mut seen = Mask::new(self.width, self.height);
        let mut best: Option<Mask> = None;
        for (x, y) in self.iter_set() {
            if seen.get(x, y) {
                continue;
            }
            let comp = self.component((x, y), true);
            seen = seen.union(&comp);
            if best.as_ref().is_none_or(|b| comp.count() > b.count()) {
                best = Some(comp);
            }
        }
        best.unwrap_or_else(|| Mask::new(self.width, self.height))
    }

    /// Outer boundary of the 8-connected component containing the first set
    /// pixel in raster order, traced clockwise with Moore-neighbor tracing.
    /// Tracing stops when the first (position, backtrack) state recurs.
    pub fn outer_contour(&self) -> Result<Contour, SegError> {
        let start = self.iter_set().next().ok_or(SegError::EmptyMask)?;
        let s = (start.0 as i64, start.1 as i64);
        // West of the first raster pixel is known background.
        let Some(first) = self.moore_step(s, 4) else {
            return Contour::new(vec![s]);
        };
        let mut points = Vec::new();
        let mut state = first;
        loop {
            points.push(state.0);
            state = self
                .moore_step(state.0, state.1)
                .expect("a pixel reached by tracing has a neighbor");
            if state == first {
                break;
            }
            assert!(
                points.len() <= 4 * self.bits.len() + 8,
                "contour tracing failed to terminate"
            );
        }
        if let Some(pos) = points.iter().position(|&p| p == s) {
            points.rotate_left(pos);
        }
        Contour::new(points)
    }

    /// One Moore-tracing step from `p` whose backtrack cell lies in ring
    /// direction `back`. Returns the next boundary pixel and its backtrack.
    fn moore_step(&self, p: (i64, i64), back: usize) -> Option<((i64, i64), usize)> {
        for i in 1..=8 {
            let d = (back + i) % 8;
            let n = (p.0 + RING[d].0, p.1 + RING[d].1);
            if self.get_signed(n.0, n.1) {
                let prev = RING[(d + 7) % 8];
                let q = (p.0 + prev.0 - n.0, p.1 + prev.1 - n.1);
                let nb = RING
                    .iter()
                    .position(|&r| r == q)
                    .expect("consecutive ring cells are adjacent");
                return Some((n, nb));
            }
        }
        None
    }
}
