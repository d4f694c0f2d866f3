use serde::{Deserialize, Serialize};

use super::{check_dim, check_labels, LearnError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NbConfig {
    /// Smallest per-feature variance. Default 1e-9.
    pub var_floor: f64,
}

impl Default for NbConfig {
    fn default() -> Self {
        NbConfig { var_floor: 1e-9 }
    }
}

/// Gaussian naive Bayes: one normal density per class and feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

pub fn nb_train(x: &[Vec<f64>], y: &[usize], config: &NbConfig) -> Result<NbModel, LearnError> {
    let d = check_labels(x, y)?;
    if !(config.var_floor > 0.0 && config.var_floor.is_finite()) {
        return Err(LearnError::InvalidParam("var_floor must be positive".into()));
    }
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    if n_classes < 2 {
        return Err(LearnError::SingleClass);
    }
    let mut priors = Vec::with_capacity(n_classes);
    let mut means = Vec::with_capacity(n_classes);
    let mut variances = Vec::with_capacity(n_classes);
    for c in 0..n_classes {
        let rows: Vec<&Vec<f64>> = x.iter().zip(y).filter(|(_, &l)| l == c).map(|(r, _)| r).collect();
        if rows.is_empty() {
            return Err(LearnError::EmptyClass(c));
        }
        let n = rows.len() as f64;
        let mu: Vec<f64> = (0..d).map(|f| rows.iter().map(|r| r[f]).sum::<f64>() / n).collect();
        let var: Vec<f64> = (0..d)
            .map(|f| {
                let v = rows.iter().map(|r| (r[f] - mu[f]).powi(2)).sum::<f64>() / n;
                v.max(config.var_floor)
            })
            .collect();
        priors.push(n / x.len() as f64);
        means.push(mu);
        variances.push(var);
    }
    Ok(NbModel {
        priors,
        means,
        variances,
    })
}

impl NbModel {
    /// Unnormalised log posterior of each class.
    pub fn log_joint(&self, x: &[f64]) -> Result<Vec<f64>, LearnError> {
        check_dim(self.means[0].len(), x)?;
        Ok((0..self.priors.len())
            .map(|c| {
                self.priors[c].ln()
                    + x.iter()
                        .zip(&self.means[c])
                        .zip(&self.variances[c])
                        .map(|((v, m), s2)| {
                            -0.5 * (2.0 * std::f64::consts::PI * s2).ln() - (v - m).powi(2) / (2.0 * s2)
                        })
                        .sum::<f64>()
            })
            .collect())
    }

    /// Most probable class (lower id on ties) and the posterior of every
    /// class.
    pub fn predict(&self, x: &[f64]) -> Result<(usize, Vec<f64>), LearnError> {
        let lj = self.log_joint(x)?;
        let top = lj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = lj.iter().map(|v| (v - top).exp()).sum();
        let post: Vec<f64> = lj.iter().map(|v| (v - top).exp() / z).collect();
        let class = lj.iter().position(|&v| v == top).unwrap();
        Ok((class, post))
    }
}
