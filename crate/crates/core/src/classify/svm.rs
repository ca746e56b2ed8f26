//! Soft-margin RBF support vector machines trained by SMO with second-order
//! working-set selection, combined one-vs-one for multiclass problems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TAU: f64 = 1e-12;
/// Dual objective is sampled every this many SMO iterations.
pub const CHECKPOINT_EVERY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    pub c: f64,
    pub gamma: f64,
    /// Stop when the maximal KKT violation falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            gamma: 0.125,
            tol: 1e-3,
            max_iter: 100_000,
        }
    }
}

impl SvmParams {
    pub fn new(c: f64, gamma: f64) -> Self {
        SvmParams {
            c,
            gamma,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid(format!("C must be positive, got {}", self.c)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Ok(())
    }
}

pub fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d).exp()
}

/// Row-major `n × n` RBF Gram matrix.
pub fn gram_matrix(x: &[Vec<f64>], gamma: f64) -> Vec<f64> {
    let n = x.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = 1.0;
        for j in 0..i {
            let v = rbf(&x[i], &x[j], gamma);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    /// Decision function is `Σ αᵢ yᵢ K(xᵢ, x) − rho`.
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Maximal KKT violation `m(α) − M(α)` at exit.
    pub kkt_gap: f64,
    /// Dual objective `Σα − ½ αᵀQα` at checkpoints, ending with the final value.
    pub objective_trace: Vec<f64>,
}

impl SmoSolution {
    pub fn dual_objective(&self) -> f64 {
        *self.objective_trace.last().unwrap_or(&0.0)
    }
}

/// Solves `max Σα − ½ ΣΣ αᵢαⱼyᵢyⱼKᵢⱼ` s.t. `0 ≤ α ≤ C`, `Σ αᵢyᵢ = 0`.
///
/// `kernel` is row-major `n × n`; `y` holds ±1. Index ties resolve to the
/// lowest index, so the solver is deterministic.
pub fn smo_solve(kernel: &[f64], y: &[f64], c: f64, tol: f64, max_iter: usize) -> Result<SmoSolution> {
    let n = y.len();
    if kernel.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: kernel.len(),
        });
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::invalid("labels must be ±1"));
    }
    let k = |i: usize, j: usize| kernel[i * n + j];
    let mut alpha = vec![0.0; n];
    // gradient of ½αᵀQα − eᵀα
    let mut g = vec![-1.0; n];
    let objective = |alpha: &[f64], g: &[f64]| -0.5 * alpha.iter().zip(g).map(|(a, g)| a * (g - 1.0)).sum::<f64>();
    let mut trace = vec![0.0];
    let mut iterations = 0;
    let mut converged = false;
    let mut gap = f64::INFINITY;
    let up = |a: f64, yt: f64| if yt > 0.0 { a < c } else { a > 0.0 };
    let low = |a: f64, yt: f64| if yt > 0.0 { a > 0.0 } else { a < c };

    while iterations < max_iter {
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..n {
            if up(alpha[t], y[t]) && -y[t] * g[t] > gmax {
                gmax = -y[t] * g[t];
                i_sel = t;
            }
        }
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = usize::MAX;
        let mut obj_min = f64::INFINITY;
        for t in 0..n {
            if !low(alpha[t], y[t]) {
                continue;
            }
            let yg = y[t] * g[t];
            gmax2 = gmax2.max(yg);
            if i_sel == usize::MAX {
                continue;
            }
            let b = gmax + yg;
            if b > 0.0 {
                let a = k(i_sel, i_sel) + k(t, t) - 2.0 * k(i_sel, t);
                let a = if a > 0.0 { a } else { TAU };
                let obj = -(b * b) / a;
                if obj < obj_min {
                    obj_min = obj;
                    j_sel = t;
                }
            }
        }
        gap = gmax + gmax2;
        if !(gap >= tol) || j_sel == usize::MAX {
            converged = true;
            break;
        }
        let (i, j) = (i_sel, j_sel);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = {
            let q = k(i, i) + k(j, j) - 2.0 * k(i, j);
            if q > 0.0 { q } else { TAU }
        };
        if y[i] != y[j] {
            let delta = (-g[i] - g[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (g[i] - g[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            g[t] += y[t] * (y[i] * k(i, t) * di + y[j] * k(j, t) * dj);
        }
        iterations += 1;
        if iterations % CHECKPOINT_EVERY == 0 {
            trace.push(objective(&alpha, &g));
        }
    }
    trace.push(objective(&alpha, &g));

    let (mut ub, mut lb, mut sum_free, mut n_free) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * g[t];
        let at_upper = alpha[t] >= c;
        let at_lower = alpha[t] <= 0.0;
        if (at_upper && y[t] < 0.0) || (at_lower && y[t] > 0.0) {
            ub = ub.min(yg);
        } else if at_upper || at_lower {
            lb = lb.max(yg);
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else if ub.is_finite() && lb.is_finite() {
        (ub + lb) / 2.0
    } else if ub.is_finite() {
        ub
    } else {
        lb
    };
    Ok(SmoSolution {
        alpha,
        rho,
        iterations,
        converged,
        kkt_gap: if gap.is_finite() { gap.max(0.0) } else { 0.0 },
        objective_trace: trace,
    })
}

/// One pairwise machine; a positive decision value votes for `positive`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMachine {
    pub positive: usize,
    pub negative: usize,
    pub support: Vec<Vec<f64>>,
    /// `αᵢ yᵢ` per support vector.
    pub dual_coef: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_gap: f64,
    pub dual_objective: f64,
}

impl BinaryMachine {
    pub fn decision(&self, x: &[f64], gamma: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.dual_coef)
            .map(|(s, a)| a * rbf(s, x, gamma))
            .sum::<f64>()
            - self.rho
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub n_features: usize,
    pub n_classes: usize,
    pub params: SvmParams,
    /// Ordered by `(positive, negative)` with `positive < negative`.
    pub machines: Vec<BinaryMachine>,
}

pub fn svm_train(x: &[Vec<f64>], y: &[usize], n_classes: usize, params: SvmParams) -> Result<SvmModel> {
    params.validate()?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if n_classes < 2 {
        return Err(Error::invalid("SVM needs ≥ 2 classes"));
    }
    let n_features = x.first().map_or(0, Vec::len);
    super::check_rows(x, n_features)?;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in y.iter().enumerate() {
        by_class
            .get_mut(c)
            .ok_or_else(|| Error::invalid(format!("class index {c} ≥ {n_classes}")))?
            .push(i);
    }
    if let Some(c) = by_class.iter().position(Vec::is_empty) {
        return Err(Error::InsufficientSamples {
            class: c.to_string(),
            needed: 1,
            available: 0,
        });
    }
    let mut machines = Vec::with_capacity(n_classes * (n_classes - 1) / 2);
    for p in 0..n_classes {
        for q in p + 1..n_classes {
            let idx: Vec<usize> = by_class[p].iter().chain(&by_class[q]).copied().collect();
            let xs: Vec<Vec<f64>> = idx.iter().map(|&i| x[i].clone()).collect();
            let ys: Vec<f64> = idx.iter().map(|&i| if y[i] == p { 1.0 } else { -1.0 }).collect();
            let sol = smo_solve(&gram_matrix(&xs, params.gamma), &ys, params.c, params.tol, params.max_iter)?;
            let (mut support, mut dual_coef) = (Vec::new(), Vec::new());
            for (t, &a) in sol.alpha.iter().enumerate() {
                if a > 0.0 {
                    support.push(xs[t].clone());
                    dual_coef.push(a * ys[t]);
                }
            }
            machines.push(BinaryMachine {
                positive: p,
                negative: q,
                support,
                dual_coef,
                rho: sol.rho,
                iterations: sol.iterations,
                converged: sol.converged,
                kkt_gap: sol.kkt_gap,
                dual_objective: sol.dual_objective(),
            });
        }
    }
    Ok(SvmModel {
        n_features,
        n_classes,
        params,
        machines,
    })
}

impl SvmModel {
    pub fn decision_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                actual: x.len(),
            });
        }
        Ok(self.machines.iter().map(|m| m.decision(x, self.params.gamma)).collect())
    }

    /// Majority vote; ties go to the larger summed `|f|` of won contests,
    /// then to the lowest class index.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        let f = self.decision_values(x)?;
        let mut votes = vec![0usize; self.n_classes];
        let mut margin = vec![0.0f64; self.n_classes];
        for (m, &v) in self.machines.iter().zip(&f) {
            let winner = if v > 0.0 { m.positive } else { m.negative };
            votes[winner] += 1;
            margin[winner] += v.abs();
        }
        Ok((0..self.n_classes).fold(0, |b, c| {
            if votes[c] > votes[b] || (votes[c] == votes[b] && margin[c] > margin[b]) {
                c
            } else {
                b
            }
        }))
    }
}
