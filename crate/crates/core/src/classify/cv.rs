//! Stratified k-fold grid search.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::ClassifierParams;
use crate::error::{Error, Result};
use crate::rng;

/// Fold index per sample. Each class is shuffled with a seeded stream and
/// dealt round-robin, continuing the dealer position across classes so fold
/// sizes differ by at most one.
pub fn stratified_folds(y: &[usize], n_classes: usize, folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::invalid(format!("need ≥ 2 folds, got {folds}")));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in y.iter().enumerate() {
        by_class
            .get_mut(c)
            .ok_or_else(|| Error::invalid(format!("class index {c} ≥ {n_classes}")))?
            .push(i);
    }
    let mut out = vec![0; y.len()];
    let mut dealer = 0;
    for (c, idx) in by_class.iter_mut().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < folds {
            return Err(Error::InsufficientSamples {
                class: c.to_string(),
                needed: folds,
                available: idx.len(),
            });
        }
        idx.shuffle(&mut rng::stream(seed, &format!("folds/{c}")));
        for &i in idx.iter() {
            out[i] = dealer % folds;
            dealer += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub params: ClassifierParams,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: usize,
    pub seed: u64,
    /// In capacity order.
    pub results: Vec<GridResult>,
    pub best: usize,
}

impl CvReport {
    pub fn best_params(&self) -> ClassifierParams {
        self.results[self.best].params
    }
}

/// Scores every grid point by mean fold accuracy. The grid is visited in
/// ascending capacity order and the first maximum wins.
pub fn cross_validate(
    x: &[Vec<f64>],
    y: &[usize],
    n_classes: usize,
    grid: &[ClassifierParams],
    folds: usize,
    seed: u64,
) -> Result<CvReport> {
    if grid.is_empty() {
        return Err(Error::invalid("empty parameter grid"));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let assign = stratified_folds(y, n_classes, folds, seed)?;
    let mut ordered = grid.to_vec();
    ordered.sort_by(|a, b| a.capacity_cmp(b));

    let splits: Vec<_> = (0..folds)
        .map(|f| {
            let mut tr = (Vec::new(), Vec::new());
            let mut te = (Vec::new(), Vec::new());
            for (i, &k) in assign.iter().enumerate() {
                let dst = if k == f { &mut te } else { &mut tr };
                dst.0.push(x[i].clone());
                dst.1.push(y[i]);
            }
            (tr, te)
        })
        .collect();

    let mut results = Vec::with_capacity(ordered.len());
    for params in ordered {
        let mut accs = Vec::with_capacity(folds);
        for ((xtr, ytr), (xte, yte)) in &splits {
            let model = params.train(xtr, ytr, n_classes)?;
            let correct = xte
                .iter()
                .zip(yte)
                .map(|(r, &c)| model.predict(r).map(|p| usize::from(p == c)))
                .sum::<Result<usize>>()?;
            accs.push(correct as f64 / yte.len() as f64);
        }
        let mean = accs.iter().sum::<f64>() / folds as f64;
        results.push(GridResult {
            params,
            fold_accuracies: accs,
            mean_accuracy: mean,
        });
    }
    let best = (0..results.len()).fold(0, |b, i| {
        if results[i].mean_accuracy > results[b].mean_accuracy {
            i
        } else {
            b
        }
    });
    Ok(CvReport {
        folds,
        seed,
        results,
        best,
    })
}
