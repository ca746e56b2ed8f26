//! Trained model container and the train/evaluate pipeline:
//! stratified split → z-score → PCA → grid-searched classifier.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classify::{cross_validate, evaluate, Classifier, ClassifierParams, CvReport, EvalReport};
use crate::error::{Error, Result};
use crate::features::FeatureConfig;
use crate::pca::{pca_fit, PcaModel, Retain, Standardizer};
use crate::rng;
use crate::table::FeatureTable;

pub const MODEL_FORMAT: &str = "codecid-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub grid: Vec<ClassifierParams>,
    pub folds: usize,
    pub seed: u64,
    /// Share of each class used for training; the rest is held out.
    pub train_fraction: f64,
    pub retain: Retain,
}

impl TrainConfig {
    pub fn new(grid: Vec<ClassifierParams>) -> Self {
        TrainConfig {
            grid,
            folds: 5,
            seed: 0,
            train_fraction: 0.5,
            retain: Retain::VarianceFraction(0.95),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub format: String,
    pub version: u32,
    pub classes: Vec<String>,
    pub feature_names: Vec<String>,
    /// How the training table was extracted, when known.
    pub features: Option<FeatureConfig>,
    pub standardizer: Standardizer,
    pub pca: PcaModel,
    pub retain: Retain,
    pub n_components: usize,
    pub classifier: Classifier,
    pub cv: CvReport,
    pub seed: u64,
    pub train_fraction: f64,
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub source_id: String,
    pub predicted: String,
    pub truth: Option<String>,
}

/// Stratified index split: per class, a seeded shuffle puts
/// `round(n · fraction)` (clamped to `1..n`) samples in train.
pub fn stratified_split(y: &[usize], n_classes: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid(format!("train fraction {fraction} outside (0, 1)")));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for c in 0..n_classes {
        let mut pool: Vec<usize> = (0..y.len()).filter(|&i| y[i] == c).collect();
        if pool.len() < 2 {
            return Err(Error::InsufficientSamples {
                class: c.to_string(),
                needed: 2,
                available: pool.len(),
            });
        }
        pool.shuffle(&mut rng::stream(seed, &format!("holdout/{c}")));
        let k = ((pool.len() as f64 * fraction).round() as usize).clamp(1, pool.len() - 1);
        train.extend_from_slice(&pool[..k]);
        test.extend_from_slice(&pool[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

fn label_indices(table: &FeatureTable, classes: &[String]) -> Result<Vec<usize>> {
    table
        .rows
        .iter()
        .map(|r| {
            let l = r
                .label
                .as_deref()
                .ok_or_else(|| Error::Schema(format!("row `{}` has no label", r.source_id)))?;
            classes
                .binary_search_by(|c| c.as_str().cmp(l))
                .map_err(|_| Error::Schema(format!("unknown label `{l}`")))
        })
        .collect()
}

/// Fits the full pipeline on the training share of a labelled table and
/// scores the held-out share.
pub fn train_model(
    table: &FeatureTable,
    features: Option<FeatureConfig>,
    config: &TrainConfig,
) -> Result<(Model, EvalReport)> {
    if !table.is_labelled() {
        return Err(Error::Schema("training needs a fully labelled table".into()));
    }
    let classes = table.classes();
    if classes.len() < 2 {
        return Err(Error::invalid("training needs ≥ 2 classes"));
    }
    let y = label_indices(table, &classes)?;
    let (train_idx, test_idx) = stratified_split(&y, classes.len(), config.train_fraction, config.seed)?;
    let x = table.matrix();
    let x_train: Vec<Vec<f64>> = train_idx.iter().map(|&i| x[i].clone()).collect();
    let y_train: Vec<usize> = train_idx.iter().map(|&i| y[i]).collect();

    let standardizer = Standardizer::fit(&x_train)?;
    if standardizer.output_dim() == 0 {
        return Err(Error::invalid("every feature is constant on the training set"));
    }
    let z_train = standardizer.transform(&x_train)?;
    let pca = pca_fit(&z_train)?;
    let k = pca.n_components(config.retain)?;
    let p_train: Vec<Vec<f64>> = z_train.iter().map(|r| pca.project_row(r, k)).collect::<Result<_>>()?;

    let cv = cross_validate(&p_train, &y_train, classes.len(), &config.grid, config.folds, config.seed)?;
    let classifier = cv.best_params().train(&p_train, &y_train, classes.len())?;

    let model = Model {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        feature_names: table.names.clone(),
        features,
        standardizer,
        pca,
        retain: config.retain,
        n_components: k,
        classifier,
        cv,
        seed: config.seed,
        train_fraction: config.train_fraction,
        train_ids: train_idx.iter().map(|&i| table.rows[i].source_id.clone()).collect(),
        test_ids: test_idx.iter().map(|&i| table.rows[i].source_id.clone()).collect(),
        classes,
    };
    let truth: Vec<usize> = test_idx.iter().map(|&i| y[i]).collect();
    let predicted: Vec<usize> = test_idx
        .iter()
        .map(|&i| model.predict_index(&x[i]))
        .collect::<Result<_>>()?;
    let report = evaluate(&truth, &predicted, &model.classes)?;
    Ok((model, report))
}

impl Model {
    /// Standardized, projected coordinates of a raw feature row.
    pub fn project(&self, row: &[f64]) -> Result<Vec<f64>> {
        let z = self.standardizer.transform_row(row)?;
        self.pca.project_row(&z, self.n_components)
    }

    pub fn predict_index(&self, row: &[f64]) -> Result<usize> {
        self.classifier.predict(&self.project(row)?)
    }

    pub fn predict_label(&self, row: &[f64]) -> Result<&str> {
        Ok(&self.classes[self.predict_index(row)?])
    }

    /// Predictions for every row; the table's columns must match the model's.
    pub fn predict_table(&self, table: &FeatureTable) -> Result<Vec<Prediction>> {
        if table.names != self.feature_names {
            let missing: Vec<&str> = self
                .feature_names
                .iter()
                .filter(|n| !table.names.contains(n))
                .map(String::as_str)
                .collect();
            let extra: Vec<&str> = table
                .names
                .iter()
                .filter(|n| !self.feature_names.contains(n))
                .map(String::as_str)
                .collect();
            let detail = if missing.is_empty() && extra.is_empty() {
                "same columns in a different order".to_string()
            } else {
                format!("missing [{}], unexpected [{}]", missing.join(", "), extra.join(", "))
            };
            return Err(Error::Schema(format!(
                "feature columns differ from the model ({} vs {} columns): {detail}",
                table.names.len(),
                self.feature_names.len()
            )));
        }
        table
            .rows
            .iter()
            .map(|r| {
                Ok(Prediction {
                    source_id: r.source_id.clone(),
                    predicted: self.predict_label(&r.values)?.to_string(),
                    truth: r.label.clone(),
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Model = serde_json::from_str(text)?;
        if m.format != MODEL_FORMAT {
            return Err(Error::Format(format!("not a model file (format `{}`)", m.format)));
        }
        if m.version != MODEL_VERSION {
            return Err(Error::Format(format!("unsupported model version {}", m.version)));
        }
        if m.standardizer.input_dim != m.feature_names.len() || m.classifier.n_classes() != m.classes.len() {
            return Err(Error::Format("inconsistent model dimensions".into()));
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
