//! Fuzzy c-means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, cluster_majority, maybe_standardize, sq_dist, transform, LearnError, Standardizer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FcmConfig {
    /// Number of clusters. Default 2.
    pub c: usize,
    /// Fuzzifier, > 1. Default 2.0.
    pub m: f64,
    /// Default 300.
    pub max_iters: usize,
    /// Stop once no membership changes by this much. Default 1e-5.
    pub tolerance: f64,
    pub rng_seed: u64,
    /// Default true.
    pub standardize: bool,
}

impl Default for FcmConfig {
    fn default() -> Self {
        FcmConfig {
            c: 2,
            m: 2.0,
            max_iters: 300,
            tolerance: 1e-5,
            rng_seed: 0,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FcmModel {
    pub standardizer: Option<Standardizer>,
    pub m: f64,
    pub centroids: Vec<Vec<f64>>,
    /// Training memberships, one row per sample.
    pub memberships: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub cluster_labels: Option<Vec<Option<usize>>>,
}

/// Membership row of `x`: `u_j = 1 / Σ_k (d_j / d_k)^(2/(m-1))`, evaluated
/// in log space. A point on a centroid belongs to it (the first such) fully.
pub(crate) fn membership(centroids: &[Vec<f64>], m: f64, x: &[f64]) -> Vec<f64> {
    let d2: Vec<f64> = centroids.iter().map(|c| sq_dist(c, x)).collect();
    let c = centroids.len();
    if let Some(j) = d2.iter().position(|&v| v == 0.0) {
        let mut u = vec![0.0; c];
        u[j] = 1.0;
        return u;
    }
    // ln u_j = -(1/(m-1)) ln d2_j - logsumexp_k(-(1/(m-1)) ln d2_k)
    let e = 1.0 / (m - 1.0);
    let a: Vec<f64> = d2.iter().map(|v| -e * v.ln()).collect();
    let top = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + a.iter().map(|v| (v - top).exp()).sum::<f64>().ln();
    a.iter().map(|v| (v - lse).exp()).collect()
}

fn centroids_from(z: &[Vec<f64>], u: &[Vec<f64>], m: f64, c: usize) -> Vec<Vec<f64>> {
    let d = z[0].len();
    (0..c)
        .map(|j| {
            let mut num = vec![0.0; d];
            let mut den = 0.0;
            for (p, row) in z.iter().zip(u) {
                let w = row[j].powf(m);
                den += w;
                for (s, v) in num.iter_mut().zip(p) {
                    *s += w * v;
                }
            }
            if den > 0.0 {
                num.iter().map(|s| s / den).collect()
            } else {
                num
            }
        })
        .collect()
}

pub fn fcm(x: &[Vec<f64>], labels: &[Option<usize>], config: &FcmConfig) -> Result<FcmModel, LearnError> {
    let (standardizer, z) = maybe_standardize(x, config.standardize)?;
    let n = z.len();
    if config.c < 2 || config.c > n {
        return Err(LearnError::KOutOfRange { k: config.c, n });
    }
    if !(config.m > 1.0 && config.m.is_finite()) {
        return Err(LearnError::InvalidParam("fuzzifier m must be > 1".into()));
    }
    if !labels.is_empty() && labels.len() != n {
        return Err(LearnError::InvalidParam("label count differs from sample count".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut u: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let row: Vec<f64> = (0..config.c).map(|_| rng.random::<f64>() + 1e-3).collect();
            let s: f64 = row.iter().sum();
            row.iter().map(|v| v / s).collect()
        })
        .collect();
    let mut centroids = centroids_from(&z, &u, config.m, config.c);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iters {
        iterations += 1;
        let next: Vec<Vec<f64>> = z.iter().map(|p| membership(&centroids, config.m, p)).collect();
        let delta = next
            .iter()
            .flatten()
            .zip(u.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        u = next;
        centroids = centroids_from(&z, &u, config.m, config.c);
        if delta < config.tolerance {
            converged = true;
            break;
        }
    }
    let hard: Vec<usize> = u.iter().map(|row| argmax(row)).collect();
    let cluster_labels = if labels.is_empty() {
        None
    } else {
        cluster_majority(&hard, labels, config.c)
    };
    Ok(FcmModel {
        standardizer,
        m: config.m,
        centroids,
        memberships: u,
        iterations,
        converged,
        cluster_labels,
    })
}

fn argmax(row: &[f64]) -> usize {
    let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    row.iter().position(|&v| v == top).unwrap_or(0)
}

impl FcmModel {
    pub fn membership(&self, x: &[f64]) -> Result<Vec<f64>, LearnError> {
        check_dim(self.centroids[0].len(), x)?;
        Ok(membership(&self.centroids, self.m, &transform(&self.standardizer, x)))
    }

    pub fn classify(&self, x: &[f64]) -> Result<usize, LearnError> {
        let c = argmax(&self.membership(x)?);
        self.cluster_labels
            .as_ref()
            .and_then(|l| l[c])
            .ok_or(LearnError::UnlabelledClusters)
    }
}
