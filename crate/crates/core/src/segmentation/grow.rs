use std::collections::VecDeque;

use super::{Mask, SegError};
use crate::imgio::Image;

/// Seeded region growing: the 4-connected set of pixels reachable from
/// `seed` through pixels whose gray level is within `tau` of the seed's.
pub fn region_growing(image: &Image, seed: (usize, usize), tau: u32) -> Result<Mask, SegError> {
    let (w, h) = (image.width(), image.height());
    if seed.0 >= w || seed.1 >= h {
        return Err(SegError::SeedOutOfBounds { seed, width: w, height: h });
    }
    let reference = image.get(seed.0, seed.1) as i64;
    let accept = |x: usize, y: usize| (image.get(x, y) as i64 - reference).unsigned_abs() <= tau as u64;
    let mut mask = Mask::new(w, h);
    mask.set(seed.0, seed.1, true);
    let mut queue = VecDeque::from([seed]);
    while let Some((x, y)) = queue.pop_front() {
        let neighbors = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (nx, ny) in neighbors {
            if nx < w && ny < h && !mask.get(nx, ny) && accept(nx, ny) {
                mask.set(nx, ny, true);
                queue.push_back((nx, ny));
            }
        }
    }
    Ok(mask)
}
