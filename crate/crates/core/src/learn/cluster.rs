//! k-means with k-means++ seeding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_dim, cluster_majority, maybe_standardize, sq_dist, transform, LearnError, Standardizer,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansConfig {
    /// Default 2.
    pub k: usize,
    /// Default 300.
    pub max_iters: usize,
    pub rng_seed: u64,
    /// Default true.
    pub standardize: bool,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            k: 2,
            max_iters: 300,
            rng_seed: 0,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub standardizer: Option<Standardizer>,
    pub centroids: Vec<Vec<f64>>,
    /// Training assignment of each sample.
    pub assignment: Vec<usize>,
    /// Inertia after every assignment step.
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Majority training label per cluster, when labels were given.
    pub cluster_labels: Option<Vec<Option<usize>>>,
}

/// Index of the nearest centroid (lower index on ties) and its squared
/// distance.
pub(crate) fn nearest(centroids: &[Vec<f64>], x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centroids.iter().enumerate() {
        let d = sq_dist(c, x);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn plus_plus(x: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut centroids = vec![x[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = x.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut idx = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if r < w {
                    idx = i;
                    break;
                }
                r -= w;
            }
            idx
        } else {
            rng.random_range(0..n)
        };
        centroids.push(x[pick].clone());
        for (d, p) in d2.iter_mut().zip(x) {
            *d = d.min(sq_dist(p, &x[pick]));
        }
    }
    centroids
}

/// Lloyd iterations until the assignment stops changing or `max_iters`
/// assignment steps. An emptied cluster is moved onto the point farthest
/// from its own centroid.
pub fn kmeans(x: &[Vec<f64>], labels: &[Option<usize>], config: &KMeansConfig) -> Result<KMeansModel, LearnError> {
    let (standardizer, z) = maybe_standardize(x, config.standardize)?;
    let n = z.len();
    if config.k == 0 || config.k > n {
        return Err(LearnError::KOutOfRange { k: config.k, n });
    }
    if !labels.is_empty() && labels.len() != n {
        return Err(LearnError::InvalidParam("label count differs from sample count".into()));
    }
    if config.max_iters == 0 {
        return Err(LearnError::InvalidParam("max_iters must be at least 1".into()));
    }
    let d = z[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut centroids = plus_plus(&z, config.k, &mut rng);
    let mut assignment: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iters {
        iterations += 1;
        let step: Vec<(usize, f64)> = z.iter().map(|p| nearest(&centroids, p)).collect();
        history.push(step.iter().map(|s| s.1).sum());
        let next: Vec<usize> = step.iter().map(|s| s.0).collect();
        if next == assignment {
            converged = true;
            break;
        }
        assignment = next;
        let mut sums = vec![vec![0.0; d]; config.k];
        let mut counts = vec![0usize; config.k];
        for (p, &a) in z.iter().zip(&assignment) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        for j in 0..config.k {
            if counts[j] > 0 {
                centroids[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
            }
        }
        for j in 0..config.k {
            if counts[j] == 0 {
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = sq_dist(&z[a], &centroids[assignment[a]]);
                        let db = sq_dist(&z[b], &centroids[assignment[b]]);
                        da.total_cmp(&db).then(b.cmp(&a))
                    })
                    .unwrap();
                centroids[j] = z[far].clone();
            }
        }
    }
    let cluster_labels = if labels.is_empty() {
        None
    } else {
        cluster_majority(&assignment, labels, config.k)
    };
    Ok(KMeansModel {
        standardizer,
        centroids,
        assignment,
        inertia_history: history,
        iterations,
        converged,
        cluster_labels,
    })
}

impl KMeansModel {
    pub fn assign(&self, x: &[f64]) -> Result<usize, LearnError> {
        check_dim(self.centroids[0].len(), x)?;
        Ok(nearest(&self.centroids, &transform(&self.standardizer, x)).0)
    }

    pub fn classify(&self, x: &[f64]) -> Result<usize, LearnError> {
        let c = self.assign(x)?;
        self.cluster_labels
            .as_ref()
            .and_then(|l| l[c])
            .ok_or(LearnError::UnlabelledClusters)
    }
}
