//! Binary decision tree grown by information gain (natural-log entropy).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 8,
            min_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        class: usize,
        purity: f64,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.leaves() + right.leaves(),
        }
    }

    /// Root-to-leaf descent; `x[feature] <= threshold` goes left.
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { class, .. } => return *class,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => node = if x[*feature] <= *threshold { left } else { right },
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub n_features: usize,
    pub n_classes: usize,
    pub root: TreeNode,
}

impl DecisionTree {
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                actual: x.len(),
            });
        }
        Ok(self.root.predict(x))
    }
}

pub(crate) fn entropy_of_counts(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// Every admissible split at a node: midpoints between consecutive distinct
/// values, both children holding at least `min_leaf` samples.
pub(crate) fn candidate_splits(
    x: &[Vec<f64>],
    y: &[usize],
    idx: &[usize],
    n_classes: usize,
    min_leaf: usize,
) -> Vec<SplitCandidate> {
    let n = idx.len();
    let mut parent = vec![0usize; n_classes];
    for &i in idx {
        parent[y[i]] += 1;
    }
    let h_parent = entropy_of_counts(&parent, n);
    let n_features = x.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut sorted = idx.to_vec();
    for f in 0..n_features {
        sorted.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
        let mut left = vec![0usize; n_classes];
        for k in 0..n - 1 {
            left[y[sorted[k]]] += 1;
            let (lo, hi) = (x[sorted[k]][f], x[sorted[k + 1]][f]);
            if lo == hi {
                continue;
            }
            let nl = k + 1;
            let nr = n - nl;
            if nl < min_leaf || nr < min_leaf {
                continue;
            }
            let right: Vec<usize> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
            let gain = h_parent
                - (nl as f64 / n as f64) * entropy_of_counts(&left, nl)
                - (nr as f64 / n as f64) * entropy_of_counts(&right, nr);
            let mid = lo + (hi - lo) / 2.0;
            // midpoint can round up to `hi` for adjacent floats
            let threshold = if mid < hi { mid } else { lo };
            out.push(SplitCandidate {
                feature: f,
                threshold,
                gain,
            });
        }
    }
    out
}

/// Highest gain; near-ties (within 1e-12) go to the lower feature index, then
/// the lower threshold.
pub(crate) fn best_split(cands: &[SplitCandidate]) -> Option<SplitCandidate> {
    let mut best: Option<SplitCandidate> = None;
    for c in cands {
        best = match best {
            None => Some(*c),
            Some(b) if c.gain > b.gain + 1e-12 => Some(*c),
            Some(b)
                if (c.gain - b.gain).abs() <= 1e-12
                    && (c.feature, c.threshold) < (b.feature, b.threshold) =>
            {
                Some(*c)
            }
            keep => keep,
        };
    }
    best
}

fn leaf(y: &[usize], idx: &[usize], n_classes: usize) -> TreeNode {
    let mut counts = vec![0usize; n_classes];
    for &i in idx {
        counts[y[i]] += 1;
    }
    // majority, lowest class index on ties
    let class = (0..n_classes).fold(0, |b, c| if counts[c] > counts[b] { c } else { b });
    TreeNode::Leaf {
        class,
        purity: counts[class] as f64 / idx.len().max(1) as f64,
    }
}

fn grow(
    x: &[Vec<f64>],
    y: &[usize],
    idx: &[usize],
    n_classes: usize,
    params: TreeParams,
    depth: usize,
) -> TreeNode {
    let pure = idx.iter().all(|&i| y[i] == y[idx[0]]);
    if pure || depth >= params.max_depth || idx.len() < 2 * params.min_leaf {
        return leaf(y, idx, n_classes);
    }
    let Some(split) = best_split(&candidate_splits(x, y, idx, n_classes, params.min_leaf)) else {
        return leaf(y, idx, n_classes);
    };
    let (l, r): (Vec<usize>, Vec<usize>) = idx
        .iter()
        .partition(|&&i| x[i][split.feature] <= split.threshold);
    TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(grow(x, y, &l, n_classes, params, depth + 1)),
        right: Box::new(grow(x, y, &r, n_classes, params, depth + 1)),
    }
}

/// Grows a tree on rows `x` with class indices `y < n_classes`.
pub fn tree_train(x: &[Vec<f64>], y: &[usize], n_classes: usize, params: TreeParams) -> Result<DecisionTree> {
    if x.is_empty() {
        return Err(Error::invalid("cannot train a tree on an empty set"));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if params.min_leaf == 0 {
        return Err(Error::invalid("min_leaf must be ≥ 1"));
    }
    let n_features = x[0].len();
    super::check_rows(x, n_features)?;
    if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
        return Err(Error::invalid(format!("class index {bad} ≥ {n_classes}")));
    }
    let idx: Vec<usize> = (0..x.len()).collect();
    Ok(DecisionTree {
        n_features,
        n_classes,
        root: grow(x, y, &idx, n_classes, params, 0),
    })
}
