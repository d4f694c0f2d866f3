mod common;

use common::oracles::*;
use mamseg::learn::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

#[test]
fn tree_solves_xor_at_depth_two() {
    let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
    let y = vec![0, 0, 1, 1];
    // No single threshold separates the classes: every one leaves both
    // children mixed.
    for f in 0..2 {
        let left: Vec<usize> = (0..4).filter(|&i| x[i][f] <= 0.5).map(|i| y[i]).collect();
        assert!(left.contains(&0) && left.contains(&1));
    }
    let t = tree_train(&x, &y, &TreeConfig::default()).unwrap();
    assert_eq!(t.depth(), 2);
    for (xi, &yi) in x.iter().zip(&y) {
        assert_eq!(t.predict(xi).unwrap(), yi);
    }
}

#[test]
fn recorded_gains_match_entropy_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (x, y) = blobs(&mut rng, &[(0.0, 0.0), (1.0, 0.5), (0.3, 1.2)], 30, 1.5);
    let t = tree_train(&x, &y, &TreeConfig::default()).unwrap();
    assert!(!t.splits.is_empty());
    for s in &t.splits {
        let parent: Vec<usize> = s.left_counts.iter().zip(&s.right_counts).map(|(a, b)| a + b).collect();
        let (nl, nr) = (s.left_counts.iter().sum::<usize>() as f64, s.right_counts.iter().sum::<usize>() as f64);
        let n = nl + nr;
        let oracle = h(&parent) - nl / n * h(&s.left_counts) - nr / n * h(&s.right_counts);
        assert!((s.gain - oracle).abs() < 1e-12, "{} vs {oracle}", s.gain);
    }
    // Fully grown: every training point is classified correctly.
    for (xi, &yi) in x.iter().zip(&y) {
        assert_eq!(t.predict(xi).unwrap(), yi);
    }
}

#[test]
fn knn_matches_sort_oracle() {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 3.0], vec![2.5, 2.0]];
    let labels = vec![0, 1, 0, 1, 1];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let q = [rng.random::<f64>() * 4.0 - 0.5, rng.random::<f64>() * 4.0 - 0.5];
        let mut d: Vec<(f64, usize)> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| ((p[0] - q[0]).hypot(p[1] - q[1]), i))
            .collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ones = d[..3].iter().filter(|&&(_, i)| labels[i] == 1).count();
        let expected = if ones >= 2 { 1 } else { 0 };
        assert_eq!(knn_classify(&pts, &labels, &q, 3).unwrap(), expected);
    }
}

#[test]
fn nb_posterior_matches_hand_computation() {
    let x = vec![vec![1.0], vec![3.0], vec![6.0]];
    let m = nb_train(&x, &[0, 0, 1], &NbConfig::default()).unwrap();
    let q = 6.00001;
    let density = |x: f64, mu: f64, var: f64| (-(x - mu).powi(2) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt();
    let a = 2.0 / 3.0 * density(q, 2.0, 1.0);
    let b = 1.0 / 3.0 * density(q, 6.0, 1e-9);
    let (class, post) = m.predict(&[q]).unwrap();
    assert_eq!(class, 1);
    assert!((post[0] - a / (a + b)).abs() < 1e-9);
    assert!((post[1] - b / (a + b)).abs() < 1e-9);
    // A point at one class mean, far from the other.
    let (class, post) = m.predict(&[2.0]).unwrap();
    assert_eq!(class, 0);
    assert!(post[0] > 0.99);
    assert!((post.iter().sum::<f64>() - 1.0).abs() < 1e-9);
}

#[test]
fn kmeans_inertia_never_rises() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let (x, _) = blobs(&mut rng, &[(0.0, 0.0), (3.0, 1.0), (1.0, 4.0), (5.0, 5.0)], 15, 4.0);
        let cfg = KMeansConfig {
            k: 4,
            rng_seed: seed,
            ..Default::default()
        };
        let m = kmeans(&x, &[], &cfg).unwrap();
        for w in m.inertia_history.windows(2) {
            assert!(w[1] <= w[0], "seed {seed}: {:?}", m.inertia_history);
        }
    }
}

#[test]
fn kmeans_beats_random_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (x, _) = blobs(&mut rng, &[(0.0, 0.0), (20.0, 20.0)], 25, 2.0);
    let cfg = KMeansConfig {
        k: 2,
        standardize: false,
        rng_seed: 4,
        ..Default::default()
    };
    let m = kmeans(&x, &[], &cfg).unwrap();
    let mean = |rows: &[&Vec<f64>]| {
        let n = rows.len() as f64;
        [rows.iter().map(|r| r[0]).sum::<f64>() / n, rows.iter().map(|r| r[1]).sum::<f64>() / n]
    };
    let a: Vec<&Vec<f64>> = x[..25].iter().collect();
    let b: Vec<&Vec<f64>> = x[25..].iter().collect();
    let (ma, mb) = (mean(&a), mean(&b));
    let found = |target: [f64; 2]| {
        m.centroids
            .iter()
            .any(|c| (c[0] - target[0]).abs() < 1e-6 && (c[1] - target[1]).abs() < 1e-6)
    };
    assert!(found(ma) && found(mb));
    let inertia = *m.inertia_history.last().unwrap();
    for _ in 0..1000 {
        let assign: Vec<usize> = (0..x.len()).map(|_| rng.random_range(0..2)).collect();
        let mut total = 0.0;
        for k in 0..2 {
            let members: Vec<&Vec<f64>> = x.iter().zip(&assign).filter(|(_, &a)| a == k).map(|(r, _)| r).collect();
            if members.is_empty() {
                continue;
            }
            let c = mean(&members);
            total += members.iter().map(|r| (r[0] - c[0]).powi(2) + (r[1] - c[1]).powi(2)).sum::<f64>();
        }
        assert!(inertia <= total);
    }
}

#[test]
fn kmeans_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (x, _) = blobs(&mut rng, &[(0.0, 0.0), (3.0, 3.0)], 20, 3.0);
    let cfg = KMeansConfig { k: 3, rng_seed: 77, ..Default::default() };
    assert_eq!(kmeans(&x, &[], &cfg).unwrap(), kmeans(&x, &[], &cfg).unwrap());
}

#[test]
fn fcm_rows_sum_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (x, _) = blobs(&mut rng, &[(0.0, 0.0), (4.0, 0.0), (2.0, 3.0)], 20, 3.0);
    for c in 2..=4 {
        let m = fcm(&x, &[], &FcmConfig { c, rng_seed: c as u64, ..Default::default() }).unwrap();
        for row in &m.memberships {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn fcm_near_hard_for_small_fuzzifier() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (x, _) = blobs(&mut rng, &[(0.0, 0.0), (10.0, 10.0)], 20, 1.0);
    let m = fcm(&x, &[], &FcmConfig { m: 1.01, ..Default::default() }).unwrap();
    for row in &m.memberships {
        assert!(row.iter().copied().fold(0.0, f64::max) > 0.99);
    }
}

#[test]
fn fcm_membership_falls_with_distance() {
    // Centroids 1 and 2 sit at (∓1, 0, 0); points (0, r cos t, r sin t) keep
    // both of those distances fixed while the distance to centroid 0 at
    // (0, 5, 0) grows with t.
    let model = FcmModel {
        standardizer: None,
        m: 2.0,
        centroids: vec![vec![0.0, 5.0, 0.0], vec![-1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]],
        memberships: Vec::new(),
        iterations: 0,
        converged: true,
        cluster_labels: None,
    };
    let r = 2.0;
    let mut last = (f64::INFINITY, 0.0);
    for k in 0..8 {
        let t = k as f64 * 0.4;
        let p = [0.0, r * t.cos(), r * t.sin()];
        let d0 = ((p[1] - 5.0).powi(2) + p[2] * p[2]).sqrt();
        let u = model.membership(&p).unwrap()[0];
        assert!(d0 > last.1 && u < last.0, "t={t}");
        last = (u, d0);
    }
}

#[test]
fn pam_reaches_a_swap_local_optimum() {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for case in 0..50 {
        let x: Vec<Vec<f64>> = (0..7).map(|_| vec![rng.random::<f64>() * 10.0, rng.random::<f64>() * 10.0]).collect();
        let m = pam(&x, &[], &PamConfig { k: 2, standardize: false }).unwrap();
        assert!(m.cost() >= exhaustive_pair_cost(&x) - 1e-9);
        for w in m.cost_history.windows(2) {
            assert!(w[1] < w[0]);
        }
        // No single exchange of a medoid for another point lowers the cost.
        for slot in 0..2 {
            for h in 0..7 {
                let mut trial = m.medoid_indices.clone();
                if trial.contains(&h) {
                    continue;
                }
                trial[slot] = h;
                let c: f64 = x.iter().map(|p| d(p, &x[trial[0]]).min(d(p, &x[trial[1]]))).sum();
                assert!(c >= m.cost() - 1e-9, "case {case}");
            }
        }
    }
}

#[test]
fn pam_single_and_full_medoid_sets() {
    let x = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![5.0, 5.0]];
    let full = pam(&x, &[], &PamConfig { k: 4, standardize: false }).unwrap();
    assert_eq!(full.cost(), 0.0);
    // k = 1 picks the point with the smallest distance sum.
    let one = pam(&x, &[], &PamConfig { k: 1, standardize: false }).unwrap();
    let sums: Vec<f64> = x
        .iter()
        .map(|a| x.iter().map(|b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()).sum())
        .collect();
    let best = sums.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(one.cost(), best);
}

#[test]
fn svm_separates_verified_separable_sets() {
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (nx, ny) = (rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let mut x = Vec::new();
        let mut y = Vec::new();
        while x.len() < 20 {
            let p = vec![rng.random::<f64>() * 10.0 - 5.0, rng.random::<f64>() * 10.0 - 5.0];
            let s = p[0] * nx + p[1] * ny + 0.3;
            if s.abs() < 0.2 {
                continue;
            }
            y.push(usize::from(s > 0.0));
            x.push(p);
        }
        if y.iter().all(|&v| v == y[0]) {
            continue;
        }
        assert!(perceptron_separable(&x, &y));
        let m = svm_train(&x, &y, &SvmConfig { rng_seed: seed, ..Default::default() }).unwrap();
        for (xi, &yi) in x.iter().zip(&y) {
            assert_eq!(m.predict(xi).unwrap(), yi, "seed {seed}");
        }
    }
}

fn scaling_mismatches(lambda_factor: f64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (x, y) = blobs(&mut rng, &[(0.0, 0.0), (6.0, 4.0)], 15, 3.0);
    let cfg = SvmConfig::default();
    let scaled: Vec<Vec<f64>> = x.iter().map(|r| r.iter().map(|v| v * 10.0).collect()).collect();
    let cfg_scaled = SvmConfig {
        lambda: cfg.lambda * lambda_factor,
        ..cfg.clone()
    };
    let a = svm_train(&x, &y, &cfg).unwrap();
    let b = svm_train(&scaled, &y, &cfg_scaled).unwrap();
    let mut mismatches = 0;
    for i in 0..=40 {
        for j in 0..=40 {
            let q = [-3.0 + 0.3 * i as f64, -3.0 + 0.25 * j as f64];
            if a.predict(&q).unwrap() != b.predict(&[q[0] * 10.0, q[1] * 10.0]).unwrap() {
                mismatches += 1;
            }
        }
    }
    mismatches
}

#[test]
fn svm_scaled_features_with_lambda_over_100() {
    assert_eq!(scaling_mismatches(0.01), 0);
}

#[test]
fn svm_standardization_absorbs_feature_scale() {
    assert_eq!(scaling_mismatches(1.0), 0);
}

#[test]
fn models_round_trip_bit_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let (x, y) = blobs(&mut rng, &[(0.0, 0.0), (2.0, 2.0)], 12, 3.0);
    let labels: Vec<Option<usize>> = y.iter().map(|&c| Some(c)).collect();
    for name in ["tree", "knn", "naive_bayes", "kmeans", "fcm", "pam", "svm"] {
        let alg = Algorithm::by_name(name).unwrap();
        let model = train(&x, &labels, &alg).unwrap();
        assert_eq!(model, train(&x, &labels, &alg).unwrap(), "{name}");
        let file = ModelFile::new(alg, vec!["B".into(), "M".into()], model);
        let back = ModelFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file, "{name}");
        assert_eq!(back.to_json(), file.to_json());
        for xi in &x {
            assert_eq!(back.model.predict(xi).unwrap(), file.model.predict(xi).unwrap());
        }
    }
}

#[test]
fn knn_memorises_with_k1() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (x, y) = blobs(&mut rng, &[(0.0, 0.0), (1.0, 1.0)], 20, 3.0);
    let m = knn_train(&x, &y, &KnnConfig { k: 1, ..Default::default() }).unwrap();
    for (xi, &yi) in x.iter().zip(&y) {
        assert_eq!(m.predict(xi).unwrap(), yi);
    }
}

