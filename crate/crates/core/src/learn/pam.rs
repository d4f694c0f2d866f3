//! Partitioning around medoids: greedy BUILD, then best-improvement SWAP.

use serde::{Deserialize, Serialize};

use super::{check_dim, cluster_majority, maybe_standardize, sq_dist, transform, LearnError, Standardizer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PamConfig {
    /// Default 2.
    pub k: usize,
    /// Default true.
    pub standardize: bool,
}

impl Default for PamConfig {
    fn default() -> Self {
        PamConfig {
            k: 2,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PamModel {
    pub standardizer: Option<Standardizer>,
    /// Sample indices of the medoids.
    pub medoid_indices: Vec<usize>,
    pub medoids: Vec<Vec<f64>>,
    /// Σ distance to the nearest medoid after BUILD and after each swap.
    pub cost_history: Vec<f64>,
    pub cluster_labels: Option<Vec<Option<usize>>>,
}

impl PamModel {
    pub fn cost(&self) -> f64 {
        *self.cost_history.last().unwrap()
    }

    pub fn assign(&self, x: &[f64]) -> Result<usize, LearnError> {
        check_dim(self.medoids[0].len(), x)?;
        let z = transform(&self.standardizer, x);
        Ok(nearest_medoid(&self.medoids, &z))
    }

    pub fn classify(&self, x: &[f64]) -> Result<usize, LearnError> {
        let c = self.assign(x)?;
        self.cluster_labels
            .as_ref()
            .and_then(|l| l[c])
            .ok_or(LearnError::UnlabelledClusters)
    }
}

fn nearest_medoid(medoids: &[Vec<f64>], x: &[f64]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, m) in medoids.iter().enumerate() {
        let d = sq_dist(m, x).sqrt();
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

/// Σ over points of the distance to the nearest of `medoids`.
pub(crate) fn total_cost(dist: &[Vec<f64>], medoids: &[usize]) -> f64 {
    (0..dist.len())
        .map(|i| medoids.iter().map(|&m| dist[i][m]).fold(f64::INFINITY, f64::min))
        .sum()
}

pub fn pam(x: &[Vec<f64>], labels: &[Option<usize>], config: &PamConfig) -> Result<PamModel, LearnError> {
    let (standardizer, z) = maybe_standardize(x, config.standardize)?;
    let n = z.len();
    if config.k == 0 || config.k > n {
        return Err(LearnError::KOutOfRange { k: config.k, n });
    }
    if !labels.is_empty() && labels.len() != n {
        return Err(LearnError::InvalidParam("label count differs from sample count".into()));
    }
    let dist: Vec<Vec<f64>> = z
        .iter()
        .map(|a| z.iter().map(|b| sq_dist(a, b).sqrt()).collect())
        .collect();

    // BUILD: each step adds the point that lowers the cost the most.
    let mut medoids: Vec<usize> = Vec::with_capacity(config.k);
    let mut near = vec![f64::INFINITY; n];
    while medoids.len() < config.k {
        let mut best: Option<(f64, usize)> = None;
        for h in (0..n).filter(|h| !medoids.contains(h)) {
            let cost: f64 = (0..n).map(|i| near[i].min(dist[i][h])).sum();
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, h));
            }
        }
        let (_, h) = best.unwrap();
        medoids.push(h);
        for i in 0..n {
            near[i] = near[i].min(dist[i][h]);
        }
    }
    let mut cost = total_cost(&dist, &medoids);
    let mut history = vec![cost];

    // SWAP: apply the best improving (medoid, non-medoid) exchange.
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for slot in 0..config.k {
            for h in (0..n).filter(|h| !medoids.contains(h)) {
                let mut trial = medoids.clone();
                trial[slot] = h;
                let c = total_cost(&dist, &trial);
                if c < cost && best.is_none_or(|(b, _, _)| c < b) {
                    best = Some((c, slot, h));
                }
            }
        }
        match best {
            Some((c, slot, h)) => {
                medoids[slot] = h;
                cost = c;
                history.push(c);
            }
            None => break,
        }
    }
    let assignment: Vec<usize> = (0..n)
        .map(|i| {
            let mut b = (0, f64::INFINITY);
            for (j, &m) in medoids.iter().enumerate() {
                if dist[i][m] < b.1 {
                    b = (j, dist[i][m]);
                }
            }
            b.0
        })
        .collect();
    let cluster_labels = if labels.is_empty() {
        None
    } else {
        cluster_majority(&assignment, labels, config.k)
    };
    Ok(PamModel {
        standardizer,
        medoids: medoids.iter().map(|&m| z[m].clone()).collect(),
        medoid_indices: medoids,
        cost_history: history,
        cluster_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_point_a_medoid() {
        let x = vec![vec![0.0], vec![1.0], vec![5.0]];
        let cfg = PamConfig { k: 3, standardize: false };
        let m = pam(&x, &[], &cfg).unwrap();
        assert_eq!(m.cost(), 0.0);
        let mut idx = m.medoid_indices.clone();
        idx.sort();
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn k_out_of_range() {
        let x = vec![vec![0.0]];
        assert!(pam(&x, &[], &PamConfig { k: 0, standardize: false }).is_err());
        assert!(pam(&x, &[], &PamConfig { k: 2, standardize: false }).is_err());
    }
}
