//! Feature standardization and principal component analysis.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_matrix(x: &[Vec<f64>]) -> Result<usize> {
    let f = x.first().map_or(0, Vec::len);
    for (row, r) in x.iter().enumerate() {
        if r.len() != f {
            return Err(Error::DimensionMismatch {
                expected: f,
                actual: r.len(),
            });
        }
        if let Some(col) = r.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, col });
        }
    }
    Ok(f)
}

/// Per-feature z-scoring. Constant features are dropped and their indices
/// recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub input_dim: usize,
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: &[Vec<f64>]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("cannot standardize an empty matrix"));
        }
        let f = check_matrix(x)?;
        let n = x.len() as f64;
        let (mut kept, mut dropped, mut means, mut scales) = (vec![], vec![], vec![], vec![]);
        for j in 0..f {
            let mean = x.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = x.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            if sd <= 1e-12 * (1.0 + mean.abs()) {
                dropped.push(j);
            } else {
                kept.push(j);
                means.push(mean);
                scales.push(sd);
            }
        }
        Ok(Standardizer {
            input_dim: f,
            kept,
            dropped,
            means,
            scales,
        })
    }

    pub fn output_dim(&self) -> usize {
        self.kept.len()
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                actual: row.len(),
            });
        }
        Ok(self
            .kept
            .iter()
            .zip(self.means.iter().zip(&self.scales))
            .map(|(&j, (m, s))| (row[j] - m) / s)
            .collect())
    }

    pub fn transform(&self, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        x.iter().map(|r| self.transform_row(r)).collect()
    }
}

/// How many principal components to keep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Retain {
    Components(usize),
    /// Smallest prefix whose cumulative explained variance reaches the
    /// fraction.
    VarianceFraction(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub feature_means: Vec<f64>,
    /// Orthonormal components, one row per component, by descending variance.
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
}

/// Mean-centred covariance eigendecomposition. Each component's
/// largest-magnitude coordinate is made positive.
pub fn pca_fit(x: &[Vec<f64>]) -> Result<PcaModel> {
    if x.len() < 2 {
        return Err(Error::invalid(format!("PCA needs ≥ 2 samples, got {}", x.len())));
    }
    let f = check_matrix(x)?;
    if f == 0 {
        return Err(Error::invalid("PCA needs ≥ 1 feature"));
    }
    let n = x.len();
    let means: Vec<f64> = (0..f)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = DMatrix::<f64>::zeros(f, f);
    for r in x {
        for a in 0..f {
            let da = r[a] - means[a];
            for b in a..f {
                cov[(a, b)] += da * (r[b] - means[b]);
            }
        }
    }
    for a in 0..f {
        for b in a..f {
            let v = cov[(a, b)] / (n - 1) as f64;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..f).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let mut components = Vec::with_capacity(f);
    let mut explained_variance = Vec::with_capacity(f);
    for &k in &order {
        let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
        let lead = v
            .iter()
            .enumerate()
            .fold(0, |best, (i, c)| if c.abs() > v[best].abs() { i } else { best });
        if v[lead] < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        components.push(v);
        explained_variance.push(eig.eigenvalues[k].max(0.0));
    }
    Ok(PcaModel {
        feature_means: means,
        components,
        explained_variance,
    })
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.feature_means.len()
    }

    pub fn n_components(&self, retain: Retain) -> Result<usize> {
        let f = self.components.len();
        match retain {
            Retain::Components(k) if (1..=f).contains(&k) => Ok(k),
            Retain::Components(k) => Err(Error::invalid(format!("k = {k} outside 1..={f}"))),
            Retain::VarianceFraction(p) if p == 1.0 => Ok(f),
            Retain::VarianceFraction(p) if p > 0.0 && p < 1.0 => {
                let total: f64 = self.explained_variance.iter().sum();
                if total <= 0.0 {
                    return Ok(1);
                }
                let mut acc = 0.0;
                for (i, v) in self.explained_variance.iter().enumerate() {
                    acc += v;
                    // relative slack absorbs rounding in the cumulative sum
                    if acc >= p * total * (1.0 - 1e-12) {
                        return Ok(i + 1);
                    }
                }
                Ok(f)
            }
            Retain::VarianceFraction(p) => Err(Error::invalid(format!("variance fraction {p} outside (0, 1]"))),
        }
    }

    pub fn project_row(&self, row: &[f64], k: usize) -> Result<Vec<f64>> {
        if row.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                actual: row.len(),
            });
        }
        Ok(self.components[..k]
            .iter()
            .map(|c| {
                c.iter()
                    .zip(row.iter().zip(&self.feature_means))
                    .map(|(w, (v, m))| w * (v - m))
                    .sum()
            })
            .collect())
    }

    /// Maps projected coordinates back to feature space.
    pub fn reconstruct_row(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = self.feature_means.clone();
        for (c, &y) in self.components.iter().zip(coords) {
            for (o, w) in out.iter_mut().zip(c) {
                *o += w * y;
            }
        }
        out
    }
}

pub fn pca_transform(x: &[Vec<f64>], model: &PcaModel, retain: Retain) -> Result<Vec<Vec<f64>>> {
    let k = model.n_components(retain)?;
    x.iter().map(|r| model.project_row(r, k)).collect()
}
