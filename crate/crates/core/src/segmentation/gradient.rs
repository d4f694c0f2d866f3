use crate::imgio::Image;

/// Gradient magnitude of a (optionally Gaussian-smoothed) image, Sobel
/// operator with replicated borders.
#[derive(Debug, Clone)]
pub struct GradientField {
    width: usize,
    height: usize,
    magnitude: Vec<f64>,
    max: f64,
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

pub(crate) fn smooth(image: &Image, sigma: f64) -> Vec<f64> {
    let (w, h) = (image.width(), image.height());
    let src: Vec<f64> = image.pixels().iter().map(|&p| p as f64).collect();
    if sigma <= 0.0 {
        return src;
    }
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as i64;
    let clampi = |v: i64, n: usize| v.clamp(0, n as i64 - 1) as usize;
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = k
                .iter()
                .enumerate()
                .map(|(i, kv)| kv * src[y * w + clampi(x as i64 + i as i64 - r, w)])
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = k
                .iter()
                .enumerate()
                .map(|(i, kv)| kv * tmp[clampi(y as i64 + i as i64 - r, h) * w + x])
                .sum();
        }
    }
    out
}

impl GradientField {
    pub fn new(image: &Image, sigma: f64) -> Self {
        let (w, h) = (image.width(), image.height());
        let s = smooth(image, sigma);
        let at = |x: i64, y: i64| {
            s[(y.clamp(0, h as i64 - 1) as usize) * w + x.clamp(0, w as i64 - 1) as usize]
        };
        let mut magnitude = Vec::with_capacity(w * h);
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let gx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                    - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
                let gy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                    - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
                magnitude.push((gx * gx + gy * gy).sqrt() / 8.0);
            }
        }
        let max = magnitude.iter().cloned().fold(0.0, f64::max);
        GradientField {
            width: w,
            height: h,
            magnitude,
            max,
        }
    }

    #[inline]
    pub fn at(&self, x: i64, y: i64) -> f64 {
        let x = x.clamp(0, self.width as i64 - 1) as usize;
        let y = y.clamp(0, self.height as i64 - 1) as usize;
        self.magnitude[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}
