//! Independent reference implementations used as test oracles.

use mamseg::segmentation::{Contour, Point};
use mamseg::{Image, Mask};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Seeded flood fill by repeated sweeps until nothing changes. Accepts
/// 4-neighbours within `tau` of the seed's gray level.
pub fn sweep_flood(image: &Image, seed: (usize, usize), tau: u32) -> Vec<bool> {
    let (w, h) = (image.width(), image.height());
    let reference = image.get(seed.0, seed.1) as i64;
    let ok = |x: usize, y: usize| (image.get(x, y) as i64 - reference).abs() <= tau as i64;
    let mut inside = vec![false; w * h];
    inside[seed.1 * w + seed.0] = true;
    loop {
        let mut changed = false;
        for y in 0..h {
            for x in 0..w {
                if inside[y * w + x] || !ok(x, y) {
                    continue;
                }
                let touches = (x > 0 && inside[y * w + x - 1])
                    || (x + 1 < w && inside[y * w + x + 1])
                    || (y > 0 && inside[(y - 1) * w + x])
                    || (y + 1 < h && inside[(y + 1) * w + x]);
                if touches {
                    inside[y * w + x] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return inside;
        }
    }
}

/// `Σ_j f_j |c − j| / max_gray` over every shade, in index order.
pub fn brute_saliency(f: &[f64], c: u16, max_gray: u16) -> f64 {
    let mut s = 0.0;
    for (j, &fj) in f.iter().enumerate() {
        s += fj * ((c as f64 - j as f64).abs() / max_gray as f64);
    }
    s
}

/// Positive part of border-minus-surround histograms by direct counting,
/// renormalised; the border histogram when nothing is positive.
pub fn counted_difference(image: &Image, border: &Mask, surround: &Mask) -> Vec<f64> {
    let n = image.max_gray() as usize + 1;
    let count = |m: &Mask| {
        let mut c = vec![0usize; n];
        for y in 0..m.height() {
            for x in 0..m.width() {
                if m.get(x, y) {
                    c[image.get(x, y) as usize] += 1;
                }
            }
        }
        let total: usize = c.iter().sum();
        c.iter().map(|&v| v as f64 / total as f64).collect::<Vec<f64>>()
    };
    let (hb, hs) = (count(border), count(surround));
    let pos: Vec<f64> = hb.iter().zip(&hs).map(|(b, s)| if b > s { b - s } else { 0.0 }).collect();
    let total: f64 = pos.iter().sum();
    if total == 0.0 {
        hb
    } else {
        pos.iter().map(|v| v / total).collect()
    }
}

pub fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize, max_gray: u16) -> Image {
    let px = (0..w * h).map(|_| rng.random_range(0..=max_gray)).collect();
    Image::new(w, h, max_gray, px).unwrap()
}

/// Star-shaped polygon with integer vertices clamped into the image; may be
/// degenerate, in which case the caller should draw again.
pub fn random_star(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Option<Contour> {
    let n = rng.random_range(5..13);
    let cx = rng.random_range(0.0..w as f64);
    let cy = rng.random_range(0.0..h as f64);
    let r_max = rng.random_range(3.0..(w.min(h) as f64 / 2.0).max(4.0));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let mut vertices: Vec<Point> = Vec::new();
    for a in angles {
        let r = rng.random_range(0.3 * r_max..=r_max);
        let p = (
            ((cx + r * a.cos()).round() as i64).clamp(0, w as i64 - 1),
            ((cy + r * a.sin()).round() as i64).clamp(0, h as i64 - 1),
        );
        if vertices.last() != Some(&p) {
            vertices.push(p);
        }
    }
    while vertices.len() > 1 && vertices.last() == vertices.first() {
        vertices.pop();
    }
    if vertices.len() < 3 {
        return None;
    }
    Contour::from_polygon(&vertices).ok()
}

pub fn disc(size: usize, c: (f64, f64), r: f64) -> Mask {
    Mask::from_fn(size, size, |x, y| {
        (x as f64 - c.0).powi(2) + (y as f64 - c.1).powi(2) <= r * r
    })
}

/// Triangular Koch snowflake, clockwise on screen so bumps point outward.
pub fn koch_snowflake(side: f64, iterations: usize) -> Vec<(f64, f64)> {
    let h = side * 3f64.sqrt() / 2.0;
    let mut pts = vec![(0.0, h), (side / 2.0, 0.0), (side, h)];
    let (s, c) = (-std::f64::consts::FRAC_PI_3).sin_cos();
    for _ in 0..iterations {
        let n = pts.len();
        let mut out = Vec::with_capacity(4 * n);
        for i in 0..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let d = ((b.0 - a.0) / 3.0, (b.1 - a.1) / 3.0);
            let p1 = (a.0 + d.0, a.1 + d.1);
            let p2 = (a.0 + 2.0 * d.0, a.1 + 2.0 * d.1);
            let tip = (p1.0 + d.0 * c - d.1 * s, p1.1 + d.0 * s + d.1 * c);
            out.extend([a, p1, tip, p2]);
        }
        pts = out;
    }
    pts
}

pub fn snowflake_contour(side: f64) -> Contour {
    let mut v: Vec<(i64, i64)> = koch_snowflake(side, 4)
        .iter()
        .map(|&(x, y)| ((x + 5.0).round() as i64, (y + side).round() as i64))
        .collect();
    v.dedup();
    Contour::from_polygon(&v).unwrap()
}

/// Straightforward box count over a HashSet, for cross-checking.
pub fn box_count_oracle(points: &[(i64, i64)]) -> f64 {
    let x0 = points.iter().map(|p| p.0).min().unwrap();
    let y0 = points.iter().map(|p| p.1).min().unwrap();
    let mut data = Vec::new();
    for s in [2i64, 4, 8, 16, 32, 64] {
        let boxes: std::collections::HashSet<_> =
            points.iter().map(|&(x, y)| ((x - x0) / s, (y - y0) / s)).collect();
        if boxes.len() > 1 {
            data.push(((1.0 / s as f64).ln(), (boxes.len() as f64).ln()));
        }
    }
    let n = data.len() as f64;
    let (sx, sy, sxx, sxy) = data.iter().fold((0.0, 0.0, 0.0, 0.0), |a, &(x, y)| {
        (a.0 + x, a.1 + y, a.2 + x * x, a.3 + x * y)
    });
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

pub fn blobs(rng: &mut ChaCha8Rng, centers: &[(f64, f64)], per: usize, spread: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (c, &(cx, cy)) in centers.iter().enumerate() {
        for _ in 0..per {
            x.push(vec![
                cx + spread * (rng.random::<f64>() - 0.5),
                cy + spread * (rng.random::<f64>() - 0.5),
            ]);
            y.push(c);
        }
    }
    (x, y)
}

/// Cheapest medoid pair by enumeration.
pub fn exhaustive_pair_cost(x: &[Vec<f64>]) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let mut best = f64::INFINITY;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let c: f64 = x.iter().map(|p| d(p, &x[i]).min(d(p, &x[j]))).sum();
            best = best.min(c);
        }
    }
    best
}

/// Perceptron on augmented inputs; returns true if it finds a separating
/// hyperplane within the epoch budget.
pub fn perceptron_separable(x: &[Vec<f64>], y: &[usize]) -> bool {
    let d = x[0].len();
    let mut w = vec![0.0; d + 1];
    for _ in 0..10_000 {
        let mut errors = 0;
        for (xi, &yi) in x.iter().zip(y) {
            let s = if yi == 1 { 1.0 } else { -1.0 };
            let a: f64 = w[d] + xi.iter().zip(&w).map(|(p, q)| p * q).sum::<f64>();
            if s * a <= 0.0 {
                errors += 1;
                for j in 0..d {
                    w[j] += s * xi[j];
                }
                w[d] += s;
            }
        }
        if errors == 0 {
            return true;
        }
    }
    false
}
