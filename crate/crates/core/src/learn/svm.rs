//! Linear SVM trained with Pegasos-style stochastic subgradient steps.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, check_labels, maybe_standardize, transform, LearnError, Standardizer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmConfig {
    /// L2 weight. Default 1e-3.
    pub lambda: f64,
    /// Full passes over the shuffled data. Default 200.
    pub epochs: usize,
    pub rng_seed: u64,
    /// Default true.
    pub standardize: bool,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            lambda: 1e-3,
            epochs: 200,
            rng_seed: 0,
            standardize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub standardizer: Option<Standardizer>,
    pub w: Vec<f64>,
    pub b: f64,
    /// Class ids mapped to the negative and the positive side.
    pub classes: [usize; 2],
}

/// Minimises `λ/2 (|w|² + b²) + mean hinge loss` with step `1/(λt)`. The
/// bias is the weight of a constant input and is regularised with `w`.
/// Labels are class ids; the lower id is the negative class.
pub fn svm_train(x: &[Vec<f64>], y: &[usize], config: &SvmConfig) -> Result<SvmModel, LearnError> {
    check_labels(x, y)?;
    if !(config.lambda > 0.0 && config.lambda.is_finite()) {
        return Err(LearnError::InvalidParam("lambda must be positive".into()));
    }
    let mut classes: Vec<usize> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    match classes.len() {
        1 => return Err(LearnError::SingleClass),
        2 => {}
        n => return Err(LearnError::InvalidParam(format!("SVM needs two classes, got {n}"))),
    }
    let (standardizer, z) = maybe_standardize(x, config.standardize)?;
    let d = z[0].len();
    let sign: Vec<f64> = y.iter().map(|&c| if c == classes[1] { 1.0 } else { -1.0 }).collect();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut order: Vec<usize> = (0..z.len()).collect();
    let mut t = 0u64;
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (config.lambda * t as f64);
            let margin = sign[i] * (dot(&w, &z[i]) + b);
            let shrink = 1.0 - eta * config.lambda;
            w.iter_mut().for_each(|v| *v *= shrink);
            b *= shrink;
            if margin < 1.0 {
                for (wj, xj) in w.iter_mut().zip(&z[i]) {
                    *wj += eta * sign[i] * xj;
                }
                b += eta * sign[i];
            }
        }
    }
    Ok(SvmModel {
        standardizer,
        w,
        b,
        classes: [classes[0], classes[1]],
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

impl SvmModel {
    pub fn decision(&self, x: &[f64]) -> Result<f64, LearnError> {
        check_dim(self.w.len(), x)?;
        Ok(dot(&self.w, &transform(&self.standardizer, x)) + self.b)
    }

    /// Positive class when `w·x + b > 0`.
    pub fn predict(&self, x: &[f64]) -> Result<usize, LearnError> {
        Ok(if self.decision(x)? > 0.0 {
            self.classes[1]
        } else {
            self.classes[0]
        })
    }
}
