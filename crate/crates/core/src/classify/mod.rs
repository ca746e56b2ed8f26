//! Classifiers over feature rows with class indices `0..n_classes`.

mod cv;
mod eval;
mod svm;
mod tree;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use cv::{cross_validate, stratified_folds, CvReport, GridResult};
pub use eval::{evaluate, EvalReport};
pub use svm::{gram_matrix, rbf, smo_solve, svm_train, BinaryMachine, SmoSolution, SvmModel, SvmParams, CHECKPOINT_EVERY};
pub use tree::{tree_train, DecisionTree, TreeNode, TreeParams};

use crate::error::{Error, Result};

pub(crate) fn check_rows(x: &[Vec<f64>], dim: usize) -> Result<()> {
    for (row, r) in x.iter().enumerate() {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: r.len(),
            });
        }
        if let Some(col) = r.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, col });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassifierParams {
    Tree(TreeParams),
    Svm(SvmParams),
}

impl ClassifierParams {
    /// Orders by model capacity: trees before SVMs, shallower and
    /// larger-leaved trees first, SVMs by `C` then `gamma`.
    pub fn capacity_cmp(&self, other: &Self) -> Ordering {
        use ClassifierParams::*;
        match (self, other) {
            (Tree(a), Tree(b)) => a.max_depth.cmp(&b.max_depth).then(b.min_leaf.cmp(&a.min_leaf)),
            (Svm(a), Svm(b)) => a.c.total_cmp(&b.c).then(a.gamma.total_cmp(&b.gamma)),
            (Tree(_), Svm(_)) => Ordering::Less,
            (Svm(_), Tree(_)) => Ordering::Greater,
        }
    }

    pub fn train(&self, x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<Classifier> {
        Ok(match self {
            ClassifierParams::Tree(p) => Classifier::Tree(tree_train(x, y, n_classes, *p)?),
            ClassifierParams::Svm(p) => Classifier::Svm(svm_train(x, y, n_classes, *p)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Tree,
    Svm,
}

impl std::str::FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(ClassifierKind::Tree),
            "svm" => Ok(ClassifierKind::Svm),
            _ => Err(Error::invalid(format!("unknown classifier `{s}` (expected tree or svm)"))),
        }
    }
}

impl ClassifierKind {
    pub fn default_grid(self) -> Vec<ClassifierParams> {
        match self {
            ClassifierKind::Svm => {
                let mut g = Vec::new();
                for c in [0.1, 1.0, 10.0, 100.0] {
                    for e in [-7, -5, -3, -1, 1, 3] {
                        g.push(ClassifierParams::Svm(SvmParams::new(c, 2f64.powi(e))));
                    }
                }
                g
            }
            ClassifierKind::Tree => [2, 4, 6, 8, 12]
                .into_iter()
                .map(|d| ClassifierParams::Tree(TreeParams { max_depth: d, min_leaf: 1 }))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classifier {
    Tree(DecisionTree),
    Svm(SvmModel),
}

impl Classifier {
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        match self {
            Classifier::Tree(t) => t.predict(x),
            Classifier::Svm(s) => s.predict(x),
        }
    }

    pub fn predict_all(&self, x: &[Vec<f64>]) -> Result<Vec<usize>> {
        x.iter().map(|r| self.predict(r)).collect()
    }

    pub fn n_classes(&self) -> usize {
        match self {
            Classifier::Tree(t) => t.n_classes,
            Classifier::Svm(s) => s.n_classes,
        }
    }
}
