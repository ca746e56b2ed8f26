use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Held-out evaluation. `confusion[true][predicted]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub classes: Vec<String>,
    pub confusion: Vec<Vec<usize>>,
    pub accuracy: f64,
    /// Per class; 0 when the class was never predicted.
    pub precision: Vec<f64>,
    /// Per class; 0 when the class has no test samples.
    pub recall: Vec<f64>,
}

pub fn evaluate(truth: &[usize], predicted: &[usize], classes: &[String]) -> Result<EvalReport> {
    if truth.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::invalid("nothing to evaluate"));
    }
    let k = classes.len();
    let mut confusion = vec![vec![0usize; k]; k];
    for (&t, &p) in truth.iter().zip(predicted) {
        if t >= k || p >= k {
            return Err(Error::invalid(format!("class index out of range for {k} classes")));
        }
        confusion[t][p] += 1;
    }
    let correct: usize = (0..k).map(|c| confusion[c][c]).sum();
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = (0..k)
        .map(|c| ratio(confusion[c][c], (0..k).map(|t| confusion[t][c]).sum()))
        .collect();
    let recall = (0..k)
        .map(|c| ratio(confusion[c][c], confusion[c].iter().sum()))
        .collect();
    Ok(EvalReport {
        classes: classes.to_vec(),
        confusion,
        accuracy: ratio(correct, truth.len()),
        precision,
        recall,
    })
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "accuracy\t{:.4}", self.accuracy)?;
        writeln!(f, "class\tprecision\trecall")?;
        for (i, c) in self.classes.iter().enumerate() {
            writeln!(f, "{c}\t{:.4}\t{:.4}", self.precision[i], self.recall[i])?;
        }
        write!(f, "confusion (rows true, columns predicted)")?;
        for row in &self.confusion {
            writeln!(f)?;
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            write!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}
