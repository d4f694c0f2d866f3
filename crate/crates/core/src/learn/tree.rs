//! Entropy-gain threshold tree.

use serde::{Deserialize, Serialize};

use super::{check_dim, check_labels, LearnError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeConfig {
    /// Default 16.
    pub max_depth: usize,
    /// Nodes with fewer samples become leaves. Default 2.
    pub min_samples: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: 16,
            min_samples: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        class: usize,
        counts: Vec<usize>,
    },
    /// `x[feature] <= threshold` goes left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

/// An accepted split, with the class counts it was scored on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub depth: usize,
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
    pub left_counts: Vec<usize>,
    pub right_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub root: Node,
    pub n_features: usize,
    pub n_classes: usize,
    /// Training medians, substituted for NaN inputs.
    pub medians: Vec<f64>,
    pub splits: Vec<SplitRecord>,
}

pub(crate) fn entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

fn majority(counts: &[usize]) -> usize {
    let best = counts.iter().copied().max().unwrap_or(0);
    counts.iter().position(|&c| c == best).unwrap_or(0)
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    n_classes: usize,
    config: &'a TreeConfig,
    splits: Vec<SplitRecord>,
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in idx {
            c[self.y[i]] += 1;
        }
        c
    }

    /// Best `(gain, feature, threshold)` over midpoints between distinct
    /// values; ties keep the lower feature, then the lower threshold.
    fn best_split(&self, idx: &[usize], parent: f64) -> Option<(f64, usize, f64)> {
        let mut best: Option<(f64, usize, f64)> = None;
        let n = idx.len() as f64;
        let d = self.x[idx[0]].len();
        for f in 0..d {
            let mut order: Vec<usize> = idx.to_vec();
            order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]).then(a.cmp(&b)));
            let mut left = vec![0usize; self.n_classes];
            let mut right = self.counts(idx);
            for k in 1..order.len() {
                let moved = self.y[order[k - 1]];
                left[moved] += 1;
                right[moved] -= 1;
                let (lo, hi) = (self.x[order[k - 1]][f], self.x[order[k]][f]);
                if lo == hi {
                    continue;
                }
                let nl = k as f64;
                let gain = parent - nl / n * entropy(&left) - (n - nl) / n * entropy(&right);
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, f, lo + (hi - lo) / 2.0));
                }
            }
        }
        best
    }

    fn grow(&mut self, idx: Vec<usize>, depth: usize) -> Node {
        let counts = self.counts(&idx);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let leaf = |counts: Vec<usize>| Node::Leaf {
            class: majority(&counts),
            counts,
        };
        if pure || idx.len() < self.config.min_samples || depth >= self.config.max_depth {
            return leaf(counts);
        }
        let parent = entropy(&counts);
        let Some((gain, feature, threshold)) = self.best_split(&idx, parent) else {
            return leaf(counts);
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            idx.iter().partition(|&&i| self.x[i][feature] <= threshold);
        self.splits.push(SplitRecord {
            depth,
            feature,
            threshold,
            gain,
            left_counts: self.counts(&l),
            right_counts: self.counts(&r),
        });
        Node::Split {
            feature,
            threshold,
            left: Box::new(self.grow(l, depth + 1)),
            right: Box::new(self.grow(r, depth + 1)),
        }
    }
}

/// Greedy recursive splitting on information gain. A split is taken even
/// at zero gain while the node is impure, so parity problems such as XOR
/// are still separated at the next level. NaN entries are treated as
/// missing and replaced by the training median of their feature.
pub fn tree_train(x: &[Vec<f64>], y: &[usize], config: &TreeConfig) -> Result<TreeModel, LearnError> {
    let d = x.first().ok_or(LearnError::EmptyTrainingSet)?.len();
    let medians: Vec<f64> = (0..d)
        .map(|f| median(x.iter().map(|r| r[f]).filter(|v| !v.is_nan()).collect()))
        .collect();
    let imputed: Vec<Vec<f64>> = x
        .iter()
        .map(|r| {
            r.iter()
                .zip(&medians)
                .map(|(&v, &m)| if v.is_nan() { m } else { v })
                .collect()
        })
        .collect();
    check_labels(&imputed, y)?;
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    let mut b = Builder {
        x: &imputed,
        y,
        n_classes,
        config,
        splits: Vec::new(),
    };
    let root = b.grow((0..x.len()).collect(), 0);
    Ok(TreeModel {
        root,
        n_features: d,
        n_classes,
        medians,
        splits: b.splits,
    })
}

impl TreeModel {
    pub fn predict(&self, x: &[f64]) -> Result<usize, LearnError> {
        check_dim(self.n_features, x)?;
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class, .. } => return Ok(*class),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let v = if x[*feature].is_nan() {
                        self.medians[*feature]
                    } else {
                        x[*feature]
                    };
                    node = if v <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(n: &Node) -> usize {
            match n {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }
}
