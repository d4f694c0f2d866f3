//! Classical classifiers and clusterers over feature vectors.
//!
//! Trainers take a row-major sample matrix `x` and class ids `y` in
//! `0..n_classes`. Trained models are plain data and serialise losslessly to
//! JSON inside a [`ModelFile`].

mod cluster;
mod fcm;
mod knn;
mod nb;
mod pam;
mod svm;
mod tree;

pub use cluster::{kmeans, KMeansConfig, KMeansModel};
pub use fcm::{fcm, FcmConfig, FcmModel};
pub use knn::{knn_classify, knn_train, KnnConfig, KnnModel};
pub use nb::{nb_train, NbConfig, NbModel};
pub use pam::{pam, PamConfig, PamModel};
pub use svm::{svm_train, SvmConfig, SvmModel};
pub use tree::{tree_train, Node, SplitRecord, TreeConfig, TreeModel};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureRow, FeatureVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearnError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("every training sample needs a label")]
    MissingLabels,
    #[error("expected {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite feature value in sample {0}")]
    NonFinite(usize),
    #[error("class {0} has no samples")]
    EmptyClass(usize),
    #[error("training set has a single class; need two")]
    SingleClass,
    #[error("k = {k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("unknown class label {0:?}")]
    UnknownLabel(String),
    #[error("clusters carry no class labels; train with a labelled dataset")]
    UnlabelledClusters,
    #[error("model schema version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
    #[error("model file: {0}")]
    Format(String),
}

/// One feature vector with an optional class id.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: Option<usize>,
}

/// A feature table with class names mapped to ids in sorted order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub samples: Vec<LabeledSample>,
    pub classes: Vec<String>,
}

impl Dataset {
    pub fn from_rows(rows: &[FeatureRow]) -> Result<Self, LearnError> {
        let mut classes: Vec<String> = rows.iter().filter_map(|r| r.label.clone()).collect();
        classes.sort();
        classes.dedup();
        Self::from_rows_with_classes(rows, classes)
    }

    /// Uses a fixed class list, as stored in a trained model.
    pub fn from_rows_with_classes(rows: &[FeatureRow], classes: Vec<String>) -> Result<Self, LearnError> {
        let mut samples = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let features = r.features.to_array().to_vec();
            if features.iter().any(|v| !v.is_finite()) {
                return Err(LearnError::NonFinite(i));
            }
            let label = match &r.label {
                Some(name) => Some(
                    classes
                        .iter()
                        .position(|c| c == name)
                        .ok_or_else(|| LearnError::UnknownLabel(name.clone()))?,
                ),
                None => None,
            };
            samples.push(LabeledSample { features, label });
        }
        Ok(Dataset {
            ids: rows.iter().map(|r| r.id.clone()).collect(),
            samples,
            classes,
        })
    }

    pub fn x(&self) -> Vec<Vec<f64>> {
        self.samples.iter().map(|s| s.features.clone()).collect()
    }

    /// Labels of every sample; fails if any is missing.
    pub fn y(&self) -> Result<Vec<usize>, LearnError> {
        self.samples
            .iter()
            .map(|s| s.label.ok_or(LearnError::MissingLabels))
            .collect()
    }

    pub fn partial_labels(&self) -> Vec<Option<usize>> {
        self.samples.iter().map(|s| s.label).collect()
    }
}

pub(crate) fn check_matrix(x: &[Vec<f64>]) -> Result<usize, LearnError> {
    let first = x.first().ok_or(LearnError::EmptyTrainingSet)?;
    let d = first.len();
    for (i, row) in x.iter().enumerate() {
        if row.len() != d {
            return Err(LearnError::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(LearnError::NonFinite(i));
        }
    }
    Ok(d)
}

pub(crate) fn check_labels(x: &[Vec<f64>], y: &[usize]) -> Result<usize, LearnError> {
    let d = check_matrix(x)?;
    if y.len() != x.len() {
        return Err(LearnError::InvalidParam(format!(
            "{} samples but {} labels",
            x.len(),
            y.len()
        )));
    }
    Ok(d)
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<(), LearnError> {
    if x.len() != expected {
        return Err(LearnError::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Per-feature z-score scaling fitted on training data. Constant features
/// are centred but not scaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &[Vec<f64>]) -> Result<Self, LearnError> {
        let d = check_matrix(x)?;
        let n = x.len() as f64;
        let mut mean = vec![0.0; d];
        for row in x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut std = vec![0.0; d];
        for row in x {
            for ((s, v), m) in std.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        std.iter_mut().for_each(|s| {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        });
        Ok(Standardizer { mean, std })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }

    pub fn apply_all(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter().map(|r| self.apply(r)).collect()
    }
}

pub(crate) fn maybe_standardize(
    x: &[Vec<f64>],
    on: bool,
) -> Result<(Option<Standardizer>, Vec<Vec<f64>>), LearnError> {
    check_matrix(x)?;
    if on {
        let s = Standardizer::fit(x)?;
        let z = s.apply_all(x);
        Ok((Some(s), z))
    } else {
        Ok((None, x.to_vec()))
    }
}

pub(crate) fn transform(s: &Option<Standardizer>, x: &[f64]) -> Vec<f64> {
    match s {
        Some(s) => s.apply(x),
        None => x.to_vec(),
    }
}

/// Majority training label of each cluster; `None` for clusters with no
/// labelled member. Ties go to the lower class id.
pub(crate) fn cluster_majority(
    assignment: &[usize],
    labels: &[Option<usize>],
    clusters: usize,
) -> Option<Vec<Option<usize>>> {
    if labels.iter().all(Option::is_none) {
        return None;
    }
    let n_classes = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let mut votes = vec![vec![0usize; n_classes]; clusters];
    for (&a, l) in assignment.iter().zip(labels) {
        if let Some(l) = l {
            votes[a][*l] += 1;
        }
    }
    Some(
        votes
            .iter()
            .map(|v| {
                let best = v.iter().copied().max().unwrap_or(0);
                (best > 0).then(|| v.iter().position(|&c| c == best).unwrap())
            })
            .collect(),
    )
}

/// Which algorithm to train, with its settings. Serialised with an
/// `algorithm` tag, e.g. `{"algorithm":"knn","k":3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum Algorithm {
    Tree(TreeConfig),
    Knn(KnnConfig),
    NaiveBayes(NbConfig),
    Kmeans(KMeansConfig),
    Fcm(FcmConfig),
    Pam(PamConfig),
    Svm(SvmConfig),
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Tree(_) => "tree",
            Algorithm::Knn(_) => "knn",
            Algorithm::NaiveBayes(_) => "naive_bayes",
            Algorithm::Kmeans(_) => "kmeans",
            Algorithm::Fcm(_) => "fcm",
            Algorithm::Pam(_) => "pam",
            Algorithm::Svm(_) => "svm",
        }
    }

    /// Default settings for an algorithm name.
    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "tree" => Algorithm::Tree(TreeConfig::default()),
            "knn" => Algorithm::Knn(KnnConfig::default()),
            "naive_bayes" | "nb" => Algorithm::NaiveBayes(NbConfig::default()),
            "kmeans" => Algorithm::Kmeans(KMeansConfig::default()),
            "fcm" => Algorithm::Fcm(FcmConfig::default()),
            "pam" => Algorithm::Pam(PamConfig::default()),
            "svm" => Algorithm::Svm(SvmConfig::default()),
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Tree(TreeModel),
    Knn(KnnModel),
    NaiveBayes(NbModel),
    Kmeans(KMeansModel),
    Fcm(FcmModel),
    Pam(PamModel),
    Svm(SvmModel),
}

impl Model {
    /// Class id for `x`. Clusterers answer with their cluster's majority
    /// training label.
    pub fn predict(&self, x: &[f64]) -> Result<usize, LearnError> {
        match self {
            Model::Tree(m) => m.predict(x),
            Model::Knn(m) => m.predict(x),
            Model::NaiveBayes(m) => m.predict(x).map(|(c, _)| c),
            Model::Kmeans(m) => m.classify(x),
            Model::Fcm(m) => m.classify(x),
            Model::Pam(m) => m.classify(x),
            Model::Svm(m) => m.predict(x),
        }
    }
}

pub fn train(x: &[Vec<f64>], labels: &[Option<usize>], algorithm: &Algorithm) -> Result<Model, LearnError> {
    let supervised = || -> Result<Vec<usize>, LearnError> {
        labels
            .iter()
            .map(|l| l.ok_or(LearnError::MissingLabels))
            .collect()
    };
    Ok(match algorithm {
        Algorithm::Tree(c) => Model::Tree(tree_train(x, &supervised()?, c)?),
        Algorithm::Knn(c) => Model::Knn(knn_train(x, &supervised()?, c)?),
        Algorithm::NaiveBayes(c) => Model::NaiveBayes(nb_train(x, &supervised()?, c)?),
        Algorithm::Kmeans(c) => Model::Kmeans(kmeans(x, labels, c)?),
        Algorithm::Fcm(c) => Model::Fcm(fcm(x, labels, c)?),
        Algorithm::Pam(c) => Model::Pam(pam(x, labels, c)?),
        Algorithm::Svm(c) => Model::Svm(svm_train(x, &supervised()?, c)?),
    })
}

/// Versioned on-disk form of a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub algorithm: Algorithm,
    /// Class names indexed by class id.
    pub classes: Vec<String>,
    pub feature_names: Vec<String>,
    pub model: Model,
}

impl ModelFile {
    pub fn new(algorithm: Algorithm, classes: Vec<String>, model: Model) -> Self {
        ModelFile {
            schema_version: crate::SCHEMA_VERSION,
            algorithm,
            classes,
            feature_names: FeatureVector::NAMES.iter().map(|s| s.to_string()).collect(),
            model,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialise")
    }

    /// Checks the schema version before decoding the rest.
    pub fn from_json(text: &str) -> Result<Self, LearnError> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| LearnError::Format(e.to_string()))?;
        let found = raw
            .get("schema_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| LearnError::Format("missing schema_version".into()))?;
        if found != crate::SCHEMA_VERSION as u64 {
            return Err(LearnError::SchemaVersion {
                found: found.min(u32::MAX as u64) as u32,
                expected: crate::SCHEMA_VERSION,
            });
        }
        serde_json::from_value(raw).map_err(|e| LearnError::Format(e.to_string()))
    }
}
