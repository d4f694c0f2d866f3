mod common;

use common::oracles::*;
use mamseg::eval::overlap;
use mamseg::imgio::{synth_phantom, PhantomSpec};
use mamseg::segmentation::{
    difference_histogram, partition_regions, region_growing, saliency_map, saliency_segment_detailed,
    DifferenceHistogram, SaliencyConfig,
};
use mamseg::Image;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn region_growing_matches_sweep_oracle_on_1000_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1000 {
        let (w, h) = (rng.random_range(1..17), rng.random_range(1..17));
        let max_gray = rng.random_range(1..=255u16);
        let image = random_image(&mut rng, w, h, max_gray);
        let seed = (rng.random_range(0..w), rng.random_range(0..h));
        let tau = rng.random_range(0..=max_gray as u32);
        let got = region_growing(&image, seed, tau).unwrap();
        assert_eq!(got.bits(), &sweep_flood(&image, seed, tau)[..], "case {case}");
    }
}

#[test]
fn noisy_disc_region_growing() {
    let spec = PhantomSpec::disc(160, (80.0, 80.0), 35.0, 200, 50).with_noise(5.0, 21);
    let (image, truth) = synth_phantom(&spec).unwrap();
    let mask = region_growing(&image, (80, 80), 60).unwrap();
    assert!(overlap(&mask, &truth).unwrap().dice >= 0.95);
    assert_eq!(mask.bits(), &sweep_flood(&image, (80, 80), 60)[..]);
}

proptest! {
    #[test]
    fn region_growing_survives_affine_rescaling(
        seed in any::<u64>(),
        a in 1u16..5,
        b in 0u16..40,
        tau in 0u32..64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let image = random_image(&mut rng, 12, 9, 63);
        let scaled = image.map(63 * a + b, |v| a * v + b).unwrap();
        let s = (rng.random_range(0..12), rng.random_range(0..9));
        let base = region_growing(&image, s, tau).unwrap();
        let rescaled = region_growing(&scaled, s, tau * a as u32).unwrap();
        prop_assert_eq!(base, rescaled);
    }
}

#[test]
fn partition_is_exact_and_disjoint_on_random_contours() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 500 {
        let (w, h) = (rng.random_range(16..80), rng.random_range(16..80));
        let Some(contour) = random_star(&mut rng, w, h) else { continue };
        let Ok(p) = partition_regions(&contour, w, h) else { continue };
        checked += 1;

        let fill = contour.fill(w, h);
        let n = fill.count() as f64;
        let cx = fill.iter_set().map(|(x, _)| x as f64).sum::<f64>() / n;
        let cy = fill.iter_set().map(|(_, y)| y as f64).sum::<f64>() / n;
        assert!((p.centroid.0 - cx).abs() < 1e-9 && (p.centroid.1 - cy).abs() < 1e-9);
        let dmax2 = contour
            .points()
            .iter()
            .map(|&(x, y)| (x as f64 - p.centroid.0).powi(2) + (y as f64 - p.centroid.1).powi(2))
            .fold(0.0, f64::max);
        assert_eq!(p.d_max, dmax2.sqrt());

        for y in 0..h {
            for x in 0..w {
                let (c, b, s) = (p.central.get(x, y), p.border.get(x, y), p.surround.get(x, y));
                assert!((c as u8 + b as u8 + s as u8) <= 1, "overlap at ({x},{y})");
                let d2 = (x as f64 - p.centroid.0).powi(2) + (y as f64 - p.centroid.1).powi(2);
                assert_eq!(c, d2 <= dmax2);
                assert_eq!(b, d2 > dmax2 && d2 <= 4.0 * dmax2);
                assert_eq!(s, d2 > 4.0 * dmax2 && d2 <= 16.0 * dmax2);
            }
        }
    }
}

#[test]
fn difference_histogram_matches_counting_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 300 {
        let (w, h) = (rng.random_range(20..64), rng.random_range(20..64));
        let Some(contour) = random_star(&mut rng, w, h) else { continue };
        let Ok(p) = partition_regions(&contour, w, h) else { continue };
        let max_gray = *[7u16, 31, 255].get(rng.random_range(0..3)).unwrap();
        let image = random_image(&mut rng, w, h, max_gray);
        let Ok(d) = difference_histogram(&image, &p) else {
            assert!(p.border.is_empty() || p.surround.is_empty());
            continue;
        };
        checked += 1;
        let oracle = counted_difference(&image, &p.border, &p.surround);
        assert_eq!(d.f.len(), max_gray as usize + 1);
        assert!(d.f.iter().all(|&v| v >= 0.0));
        assert!((d.f.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for (a, b) in d.f.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn identical_regions_fall_back_to_border_histogram() {
    let image = Image::filled(60, 60, 255, 77).unwrap();
    let contour = random_star(&mut ChaCha8Rng::seed_from_u64(1), 60, 60).unwrap();
    let p = partition_regions(&contour, 60, 60).unwrap();
    let d = difference_histogram(&image, &p).unwrap();
    assert!(d.fallback);
    assert_eq!(d.f[77], 1.0);
}

#[test]
fn saliency_lookup_equals_brute_force_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 200 {
        let (w, h) = (rng.random_range(20..50), rng.random_range(20..50));
        let Some(contour) = random_star(&mut rng, w, h) else { continue };
        let Ok(p) = partition_regions(&contour, w, h) else { continue };
        let image = random_image(&mut rng, w, h, 255);
        let raw: Vec<f64> = (0..256).map(|_| rng.random::<f64>().powi(3)).collect();
        let total: f64 = raw.iter().sum();
        let f = DifferenceHistogram { f: raw.iter().map(|v| v / total).collect(), fallback: false };
        let map = saliency_map(&image, &f, &p).unwrap();
        checked += 1;
        for y in 0..h {
            for x in 0..w {
                match map.get(x, y) {
                    Some(s) => {
                        assert!(p.border.get(x, y));
                        assert_eq!(s, brute_saliency(&f.f, image.get(x, y), 255));
                        assert!((0.0..=1.0).contains(&s));
                    }
                    None => assert!(!p.border.get(x, y)),
                }
            }
        }
    }
}

#[test]
fn saliency_is_lipschitz_in_gray_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let raw: Vec<f64> = (0..256).map(|_| rng.random::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        let f: Vec<f64> = raw.iter().map(|v| v / total).collect();
        let s: Vec<f64> = (0..=255u16).map(|c| mamseg::segmentation::saliency_of_level(&f, c, 255)).collect();
        for c in 0..255 {
            assert!((s[c + 1] - s[c]).abs() <= 1.0 / 255.0 + 1e-12);
        }
    }
}

#[test]
fn uniform_distribution_saliency() {
    let f = vec![1.0 / 256.0; 256];
    let s0 = mamseg::segmentation::saliency_of_level(&f, 0, 255);
    assert!((s0 - 0.5).abs() <= 1e-12);
    assert_eq!(mamseg::segmentation::saliency_of_level(&f, 128, 255), brute_saliency(&f, 128, 255));
}

#[test]
fn saliency_output_contains_seed_and_central_component() {
    for (i, (r, noise)) in [(25.0, 0.0), (40.0, 5.0), (30.0, 10.0)].into_iter().enumerate() {
        let spec = PhantomSpec::disc(200, (100.0, 100.0), r, 190, 60).with_noise(noise, i as u64);
        let (image, truth) = synth_phantom(&spec).unwrap();
        let seed = (100, 100);
        let s = saliency_segment_detailed(&image, seed, &SaliencyConfig::default()).unwrap();
        assert!(s.mask.get(seed.0, seed.1));
        let central = s.partition.central.component(seed, false);
        assert!(central.iter_set().all(|(x, y)| s.mask.get(x, y)));
        assert!(overlap(&s.mask, &truth).unwrap().dice >= 0.90);
    }
}
