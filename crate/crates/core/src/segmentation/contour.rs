use super::{Mask, SegError};

pub type Point = (i64, i64);

/// Closed 8-connected chain of pixel coordinates.
///
/// Consecutive points (including last → first) are 8-neighbors and never
/// equal. Non-consecutive repeats are allowed, which is how one-pixel-wide
/// parts of a region are walked out and back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    points: Vec<Point>,
}

#[inline]
pub(crate) fn adjacent(a: Point, b: Point) -> bool {
    a != b && (a.0 - b.0).abs() <= 1 && (a.1 - b.1).abs() <= 1
}

/// Integer points of the segment from `a` to `b`, inclusive of both ends.
pub(crate) fn line(a: Point, b: Point) -> Vec<Point> {
    let (mut x, mut y) = a;
    let dx = (b.0 - a.0).abs();
    let dy = -(b.1 - a.1).abs();
    let sx = if a.0 < b.0 { 1 } else { -1 };
    let sy = if a.1 < b.1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = vec![a];
    while (x, y) != b {
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
        out.push((x, y));
    }
    out
}

impl Contour {
    pub const MIN_POINTS: usize = 4;

    pub fn new(points: Vec<Point>) -> Result<Self, SegError> {
        if points.len() < Self::MIN_POINTS {
            return Err(SegError::DegenerateContour(format!(
                "{} points, need at least {}",
                points.len(),
                Self::MIN_POINTS
            )));
        }
        let n = points.len();
        for i in 0..n {
            let (a, b) = (points[i], points[(i + 1) % n]);
            if !adjacent(a, b) {
                return Err(SegError::DegenerateContour(format!(
                    "points {a:?} and {b:?} are not distinct 8-neighbors"
                )));
            }
        }
        Ok(Contour { points })
    }

    /// Joins the vertices of a closed polygon with digital line segments.
    pub fn from_polygon(vertices: &[Point]) -> Result<Self, SegError> {
        let mut chain: Vec<Point> = Vec::new();
        let n = vertices.len();
        for i in 0..n {
            let seg = line(vertices[i], vertices[(i + 1) % n]);
            for p in seg {
                if chain.last() != Some(&p) {
                    chain.push(p);
                }
            }
        }
        // The last segment ends on the first vertex.
        while chain.len() > 1 && chain.last() == chain.first() {
            chain.pop();
        }
        Contour::new(chain)
    }

    /// Digital circle around `center`, with vertices clamped into a
    /// `width × height` image.
    pub fn circle(
        center: (f64, f64),
        radius: f64,
        width: usize,
        height: usize,
    ) -> Result<Self, SegError> {
        let n = ((2.0 * std::f64::consts::PI * radius).ceil() as usize).max(8);
        let vertices: Vec<Point> = (0..n)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                clamp_point(
                    (
                        (center.0 + radius * t.cos()).round() as i64,
                        (center.1 + radius * t.sin()).round() as i64,
                    ),
                    width,
                    height,
                )
            })
            .collect();
        let mut dedup: Vec<Point> = Vec::with_capacity(n);
        for p in vertices {
            if dedup.last() != Some(&p) {
                dedup.push(p);
            }
        }
        while dedup.len() > 1 && dedup.last() == dedup.first() {
            dedup.pop();
        }
        Contour::from_polygon(&dedup)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Contour {
        Contour {
            points: self.points.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
        }
    }

    /// Shoelace area of the polygon through the chain points.
    pub fn polygon_area(&self) -> f64 {
        polygon_area(&self.points)
    }

    pub fn within(&self, width: usize, height: usize) -> bool {
        self.points
            .iter()
            .all(|&(x, y)| x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height)
    }

    /// Region enclosed by the chain, chain pixels included, clipped to the
    /// image. Other pixel centers are classified with the half-open even-odd
    /// rule; for a unit-step chain the only lattice points on its edges are
    /// the chain points themselves, so the classification is exact.
    pub fn fill(&self, width: usize, height: usize) -> Mask {
        let mut mask = Mask::new(width, height);
        let n = self.points.len();
        let mut crossings: Vec<Vec<f64>> = vec![Vec::new(); height];
        for i in 0..n {
            let (x0, y0) = self.points[i];
            let (x1, y1) = self.points[(i + 1) % n];
            if y0 == y1 {
                continue;
            }
            // Rows y with (y0 > y) != (y1 > y).
            let (lo, hi) = (y0.min(y1), y0.max(y1));
            for y in lo.max(0)..hi.min(height as i64) {
                let t = (y - y0) as f64 / (y1 - y0) as f64;
                crossings[y as usize].push(x0 as f64 + t * (x1 - x0) as f64);
            }
        }
        for (y, xs) in crossings.iter_mut().enumerate() {
            xs.sort_by(f64::total_cmp);
            for pair in xs.chunks_exact(2) {
                let start = (pair[0].floor() as i64 + 1).max(0);
                let end = (pair[1].ceil() as i64 - 1).min(width as i64 - 1);
                for x in start..=end {
                    mask.set(x as usize, y, true);
                }
            }
        }
        for &(x, y) in &self.points {
            if x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height {
                mask.set(x as usize, y as usize, true);
            }
        }
        mask
    }

    /// `x,y` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for (x, y) in &self.points {
            s.push_str(&format!("{x},{y}\n"));
        }
        s
    }
}

pub(crate) fn polygon_area(points: &[Point]) -> f64 {
    let n = points.len();
    let mut acc: i64 = 0;
    for i in 0..n {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    (acc as f64 / 2.0).abs()
}

pub(crate) fn clamp_point(p: Point, width: usize, height: usize) -> Point {
    (
        p.0.clamp(0, width as i64 - 1),
        p.1.clamp(0, height as i64 - 1),
    )
}
