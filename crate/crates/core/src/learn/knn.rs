use serde::{Deserialize, Serialize};

use super::{check_dim, check_labels, maybe_standardize, sq_dist, transform, LearnError, Standardizer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnConfig {
    /// Default 3.
    pub k: usize,
    /// z-score the features. Default true.
    pub standardize: bool,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 3,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub standardizer: Option<Standardizer>,
    /// Stored (possibly standardised) training points.
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

/// Majority vote among the `k` nearest points (Euclidean). Equal distances
/// keep the lower sample index. A vote tie goes to the tied class whose
/// member is nearest.
pub fn knn_classify(points: &[Vec<f64>], labels: &[usize], x: &[f64], k: usize) -> Result<usize, LearnError> {
    if points.is_empty() {
        return Err(LearnError::EmptyTrainingSet);
    }
    if k == 0 || k > points.len() {
        return Err(LearnError::KOutOfRange { k, n: points.len() });
    }
    check_dim(points[0].len(), x)?;
    let mut order: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (sq_dist(p, x), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let nearest = &order[..k];
    let n_classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut votes = vec![0usize; n_classes];
    for &(_, i) in nearest {
        votes[labels[i]] += 1;
    }
    let top = *votes.iter().max().unwrap();
    let winner = nearest
        .iter()
        .map(|&(_, i)| labels[i])
        .find(|&c| votes[c] == top)
        .unwrap();
    Ok(winner)
}

pub fn knn_train(x: &[Vec<f64>], y: &[usize], config: &KnnConfig) -> Result<KnnModel, LearnError> {
    check_labels(x, y)?;
    if config.k == 0 || config.k > x.len() {
        return Err(LearnError::KOutOfRange {
            k: config.k,
            n: x.len(),
        });
    }
    let (standardizer, points) = maybe_standardize(x, config.standardize)?;
    Ok(KnnModel {
        k: config.k,
        standardizer,
        points,
        labels: y.to_vec(),
    })
}

impl KnnModel {
    pub fn predict(&self, x: &[f64]) -> Result<usize, LearnError> {
        check_dim(self.points[0].len(), x)?;
        knn_classify(&self.points, &self.labels, &transform(&self.standardizer, x), self.k)
    }
}
