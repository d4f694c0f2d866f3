//! Greedy active contours.
//!
//! Each iteration visits the control points in order and moves every point
//! to the position in its search window with the lowest energy
//!
//! ```text
//! E = alpha * continuity + beta * curvature + gamma * (-|grad I|^2) [- balloon * outward step]
//! ```
//!
//! with each term normalised over the window. Control points are resampled to
//! even arc-length spacing every `resample_every` iterations.

use serde::{Deserialize, Serialize};

use super::contour::{clamp_point, polygon_area, Point};
use super::gradient::GradientField;
use super::{Contour, SegError};
use crate::imgio::Image;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnakeParams {
    /// Continuity weight (even spacing). Default 1.0.
    pub alpha: f64,
    /// Curvature weight. Default 1.0.
    pub beta: f64,
    /// Image (edge attraction) weight. Default 1.2.
    pub gamma: f64,
    /// Iteration cap. Default 200.
    pub max_iters: usize,
    /// Odd side length of the square search window. Default 3.
    pub window: usize,
    /// Upper bound on the number of control points. Default 64.
    pub control_points: usize,
    /// Resampling period in iterations. Default 10.
    pub resample_every: usize,
    /// Gaussian pre-smoothing before the gradient. Default 1.0 px.
    pub smoothing_sigma: f64,
    /// Stop once fewer than this fraction of points moved. Default 0.02.
    pub min_move_fraction: f64,
    /// Smallest normalisation span of the image term, as a fraction of the
    /// image's largest squared gradient; keeps noise from dominating flat
    /// windows. Default 0.05.
    pub image_floor: f64,
}

impl Default for SnakeParams {
    fn default() -> Self {
        SnakeParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.2,
            max_iters: 200,
            window: 3,
            control_points: 64,
            resample_every: 10,
            smoothing_sigma: 1.0,
            min_move_fraction: 0.02,
            image_floor: 0.05,
        }
    }
}

impl SnakeParams {
    fn validate(&self) -> Result<(), SegError> {
        let bad = |m: &str| Err(SegError::InvalidParams(m.to_string()));
        if self.window == 0 || self.window % 2 == 0 {
            return bad("window must be odd");
        }
        if self.control_points < 4 {
            return bad("control_points must be at least 4");
        }
        if [self.alpha, self.beta, self.gamma, self.smoothing_sigma, self.image_floor]
            .iter()
            .any(|v| !v.is_finite() || *v < 0.0)
        {
            return bad("weights must be finite and non-negative");
        }
        Ok(())
    }
}

/// Parameters of the seeded, expansion-only contour used to bootstrap the
/// saliency pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConservativeParams {
    /// Greedy snake settings; defaults as [`SnakeParams`] except a 500
    /// iteration cap and 1.5 px smoothing.
    pub snake: SnakeParams,
    /// Radius of the initial circle around the seed. Default 5 px.
    pub initial_radius: f64,
    /// Weight of the outward (balloon) term. Default 2.0.
    pub balloon: f64,
    /// A point is on an edge once its gradient exceeds the seed
    /// neighbourhood's mean by this many standard deviations. Default 5.
    pub contact_sigmas: f64,
    /// Relative drop of the mean contour gradient that rejects a step.
    /// Default 0.05.
    pub ridge_tolerance: f64,
    /// Final inward pull-back, in pixels. Default 1.
    pub retreat: f64,
}

impl Default for ConservativeParams {
    fn default() -> Self {
        ConservativeParams {
            snake: SnakeParams {
                max_iters: 500,
                smoothing_sigma: 1.5,
                ..SnakeParams::default()
            },
            initial_radius: 5.0,
            balloon: 2.0,
            contact_sigmas: 5.0,
            ridge_tolerance: 0.05,
            retreat: 1.0,
        }
    }
}

/// Result of a traced snake run.
#[derive(Debug, Clone)]
pub struct SnakeOutcome {
    pub contour: Contour,
    pub control_points: Vec<Point>,
    pub iterations: usize,
    /// Polygon area of the control points before the first iteration and
    /// after each one.
    pub area_history: Vec<f64>,
    pub converged: bool,
}

struct Engine<'a> {
    grad: &'a GradientField,
    params: &'a SnakeParams,
    width: usize,
    height: usize,
    balloon: f64,
    /// Ridge guard: a point whose gradient is at least this level may only
    /// move to positions with a gradient at least as strong.
    contact: Option<f64>,
    img_span_floor: f64,
}

const SPACING: f64 = 5.0;

fn dist(a: Point, b: Point) -> f64 {
    (((a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)) as f64).sqrt()
}

fn centroid(points: &[Point]) -> (f64, f64) {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0i64, 0i64), |(a, b), &(x, y)| (a + x, b + y));
    (sx as f64 / n, sy as f64 / n)
}

/// Drops cyclically consecutive duplicates.
fn dedup_cyclic(points: &mut Vec<Point>) {
    points.dedup();
    while points.len() > 1 && points.first() == points.last() {
        points.pop();
    }
}

/// Evenly spaced points along the closed polygon, rounded to pixels. The
/// count is at most `max_points` and targets a spacing of about `SPACING` px.
pub(crate) fn resample(points: &[Point], max_points: usize) -> Vec<Point> {
    let n = points.len();
    if n < 2 {
        return points.to_vec();
    }
    let seg: Vec<f64> = (0..n).map(|i| dist(points[i], points[(i + 1) % n])).collect();
    let perimeter: f64 = seg.iter().sum();
    if perimeter == 0.0 {
        return vec![points[0]];
    }
    let m = ((perimeter / SPACING).round() as usize).clamp(8, max_points.max(8));
    let step = perimeter / m as f64;
    let mut out = Vec::with_capacity(m);
    let (mut i, mut acc) = (0usize, 0.0);
    for k in 0..m {
        let target = k as f64 * step;
        while i < n - 1 && acc + seg[i] < target {
            acc += seg[i];
            i += 1;
        }
        let (a, b) = (points[i], points[(i + 1) % n]);
        let t = if seg[i] > 0.0 { (target - acc) / seg[i] } else { 0.0 };
        out.push((
            (a.0 as f64 + t * (b.0 - a.0) as f64).round() as i64,
            (a.1 as f64 + t * (b.1 - a.1) as f64).round() as i64,
        ));
    }
    dedup_cyclic(&mut out);
    out
}

impl Engine<'_> {
    fn energy_sq(&self, p: Point) -> f64 {
        let g = self.grad.at(p.0, p.1);
        g * g
    }

    /// One greedy pass; returns how many points moved.
    fn iterate(&self, pts: &mut Vec<Point>) -> usize {
        let n = pts.len();
        if n < 3 {
            return 0;
        }
        let mean_spacing = (0..n).map(|i| dist(pts[i], pts[(i + 1) % n])).sum::<f64>() / n as f64;
        let c = centroid(pts);
        let half = (self.params.window / 2) as i64;
        let mut moved = 0;
        let mut cands: Vec<(Point, f64, f64, f64, f64)> = Vec::with_capacity(self.params.window.pow(2));
        for i in 0..n {
            let v = pts[i];
            let prev = pts[(i + n - 1) % n];
            let next = pts[(i + 1) % n];
            let (nx, ny) = (v.0 as f64 - c.0, v.1 as f64 - c.1);
            let norm = (nx * nx + ny * ny).sqrt();
            let normal = if norm > 0.0 { (nx / norm, ny / norm) } else { (0.0, 0.0) };
            let g_here = self.grad.at(v.0, v.1);
            cands.clear();
            // Current position first so that ties keep the point in place.
            let offsets = std::iter::once((0, 0)).chain(
                (-half..=half)
                    .flat_map(|dy| (-half..=half).map(move |dx| (dx, dy)))
                    .filter(|&o| o != (0, 0)),
            );
            for (dx, dy) in offsets {
                let p = (v.0 + dx, v.1 + dy);
                if p.0 < 0 || p.1 < 0 || p.0 >= self.width as i64 || p.1 >= self.height as i64 {
                    continue;
                }
                if let Some(level) = self.contact {
                    if g_here >= level && self.grad.at(p.0, p.1) < g_here {
                        continue;
                    }
                }
                let cont = (mean_spacing - dist(p, prev)).abs();
                let (kx, ky) = (prev.0 - 2 * p.0 + next.0, prev.1 - 2 * p.1 + next.1);
                let curv = (kx * kx + ky * ky) as f64;
                let img = self.energy_sq(p);
                let out = (dx as f64 * normal.0 + dy as f64 * normal.1) / std::f64::consts::SQRT_2;
                cands.push((p, cont, curv, img, out));
            }
            let max_cont = cands.iter().map(|c| c.1).fold(0.0, f64::max);
            let max_curv = cands.iter().map(|c| c.2).fold(0.0, f64::max);
            let min_img = cands.iter().map(|c| c.3).fold(f64::INFINITY, f64::min);
            let max_img = cands.iter().map(|c| c.3).fold(0.0, f64::max);
            let span = (max_img - min_img).max(self.img_span_floor);
            let mut best = (v, f64::INFINITY);
            for &(p, cont, curv, img, out) in &cands {
                let e_cont = if max_cont > 0.0 { cont / max_cont } else { 0.0 };
                let e_curv = if max_curv > 0.0 { curv / max_curv } else { 0.0 };
                let e_img = if span > 0.0 { (min_img - img) / span } else { 0.0 };
                let e = self.params.alpha * e_cont + self.params.beta * e_curv
                    + self.params.gamma * e_img
                    - self.balloon * out;
                if e < best.1 {
                    best = (p, e);
                }
            }
            if best.0 != v {
                pts[i] = best.0;
                moved += 1;
            }
        }
        dedup_cyclic(pts);
        moved
    }

    fn mean_gradient(&self, pts: &[Point]) -> f64 {
        pts.iter().map(|p| self.grad.at(p.0, p.1)).sum::<f64>() / pts.len().max(1) as f64
    }
}

fn chain_from_controls(points: &[Point], width: usize, height: usize) -> Result<Contour, SegError> {
    let mut clamped: Vec<Point> = points.iter().map(|&p| clamp_point(p, width, height)).collect();
    dedup_cyclic(&mut clamped);
    if clamped.len() < 3 {
        return Err(SegError::DegenerateContour(format!(
            "snake collapsed to {} control points",
            clamped.len()
        )));
    }
    Contour::from_polygon(&clamped)
}

/// Greedy snake from `init`; the returned contour is the digital chain through
/// the final control points.
pub fn active_contour(image: &Image, init: &Contour, params: &SnakeParams) -> Result<Contour, SegError> {
    if params.max_iters == 0 {
        params.validate()?;
        return Ok(init.clone());
    }
    active_contour_traced(image, init, params).map(|o| o.contour)
}

pub fn active_contour_traced(
    image: &Image,
    init: &Contour,
    params: &SnakeParams,
) -> Result<SnakeOutcome, SegError> {
    params.validate()?;
    if init.len() < Contour::MIN_POINTS {
        return Err(SegError::DegenerateContour("initial contour too short".into()));
    }
    let grad = GradientField::new(image, params.smoothing_sigma);
    let engine = Engine {
        grad: &grad,
        params,
        width: image.width(),
        height: image.height(),
        balloon: 0.0,
        contact: None,
        img_span_floor: params.image_floor * grad.max() * grad.max(),
    };
    let mut pts = resample(init.points(), params.control_points);
    let mut area_history = vec![polygon_area(&pts)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iters {
        let n = pts.len();
        let moved = engine.iterate(&mut pts);
        iterations += 1;
        if iterations % params.resample_every.max(1) == 0 {
            pts = resample(&pts, params.control_points);
        }
        area_history.push(polygon_area(&pts));
        if (moved as f64) < params.min_move_fraction * n as f64 {
            converged = true;
            break;
        }
    }
    if params.max_iters == 0 {
        return Ok(SnakeOutcome {
            contour: init.clone(),
            control_points: pts,
            iterations,
            area_history,
            converged: true,
        });
    }
    let contour = chain_from_controls(&pts, image.width(), image.height())?;
    Ok(SnakeOutcome {
        contour,
        control_points: pts,
        iterations,
        area_history,
        converged,
    })
}

/// Expands a small circle around `seed` with an outward balloon force. Once
/// a control point reaches a gradient above the seed neighbourhood's noise
/// level it may only move uphill in gradient magnitude, so no point crosses
/// an edge ridge; a step that lowers the mean gradient along the contour is
/// rejected and ends the evolution. The result is pulled back by `retreat`
/// pixels, biasing it towards under-segmentation.
pub fn conservative_contour(
    image: &Image,
    seed: (usize, usize),
    params: &ConservativeParams,
) -> Result<Contour, SegError> {
    conservative_contour_traced(image, seed, params).map(|o| o.contour)
}

pub fn conservative_contour_traced(
    image: &Image,
    seed: (usize, usize),
    params: &ConservativeParams,
) -> Result<SnakeOutcome, SegError> {
    let (w, h) = (image.width(), image.height());
    if seed.0 >= w || seed.1 >= h {
        return Err(SegError::SeedOutOfBounds {
            seed,
            width: w,
            height: h,
        });
    }
    let snake = &params.snake;
    snake.validate()?;
    if !(params.initial_radius > 0.0) || params.balloon < 0.0 || params.retreat < 0.0 {
        return Err(SegError::InvalidParams(
            "initial_radius must be positive; balloon and retreat non-negative".into(),
        ));
    }
    let grad = GradientField::new(image, snake.smoothing_sigma);
    if grad.max() <= 1e-12 {
        return Err(SegError::NoContrast);
    }

    // Noise statistics of the gradient around the seed.
    let r0 = params.initial_radius;
    let (mut sum, mut sum2, mut count) = (0.0, 0.0, 0.0);
    let reach = r0.ceil() as i64;
    for dy in -reach..=reach {
        for dx in -reach..=reach {
            let (x, y) = (seed.0 as i64 + dx, seed.1 as i64 + dy);
            if ((dx * dx + dy * dy) as f64) <= r0 * r0 && image.contains(x, y) {
                let g = grad.at(x, y);
                sum += g;
                sum2 += g * g;
                count += 1.0;
            }
        }
    }
    let mean = sum / count;
    let sd = (sum2 / count - mean * mean).max(0.0).sqrt();
    let contact = (mean + params.contact_sigmas * sd).clamp(0.01 * grad.max(), 0.5 * grad.max());

    let engine = Engine {
        grad: &grad,
        params: snake,
        width: w,
        height: h,
        balloon: params.balloon,
        contact: Some(contact),
        img_span_floor: snake.image_floor * grad.max() * grad.max(),
    };
    let init = Contour::circle((seed.0 as f64, seed.1 as f64), r0, w, h)?;
    let mut pts = resample(init.points(), snake.control_points);
    let mut area_history = vec![polygon_area(&pts)];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < snake.max_iters {
        let before = pts.clone();
        let mean_before = engine.mean_gradient(&before);
        let moved = engine.iterate(&mut pts);
        iterations += 1;
        if iterations % snake.resample_every.max(1) == 0 {
            pts = resample(&pts, snake.control_points);
        }
        let mean_after = engine.mean_gradient(&pts);
        if mean_before >= contact && mean_after < mean_before * (1.0 - params.ridge_tolerance) {
            pts = before;
            converged = true;
            break;
        }
        area_history.push(polygon_area(&pts));
        if (moved as f64) < snake.min_move_fraction * before.len() as f64 {
            converged = true;
            break;
        }
    }

    let encloses_seed = |c: &Contour| c.fill(w, h).get(seed.0, seed.1);
    let evolved = chain_from_controls(&pts, w, h)?;
    let contour = if params.retreat > 0.0 {
        let c = centroid(&pts);
        let pulled: Vec<Point> = pts
            .iter()
            .map(|&(x, y)| {
                let (dx, dy) = (x as f64 - c.0, y as f64 - c.1);
                let d = (dx * dx + dy * dy).sqrt();
                if d <= params.retreat {
                    return (x, y);
                }
                let k = (d - params.retreat) / d;
                ((c.0 + dx * k).round() as i64, (c.1 + dy * k).round() as i64)
            })
            .collect();
        match chain_from_controls(&pulled, w, h) {
            Ok(c) if encloses_seed(&c) => c,
            _ => evolved,
        }
    } else {
        evolved
    };
    let contour = if encloses_seed(&contour) { contour } else { init };
    Ok(SnakeOutcome {
        contour,
        control_points: pts,
        iterations,
        area_history,
        converged,
    })
}
