//! Per-packet feature extraction.
//!
//! Column order is fixed: `mu, var, mu3, mu4, H, AC1..AC21, BC,
//! mu_f1..mu_f4, var_f1..var_f4, mu3_f1..mu3_f4` (stats, 39 columns), then
//! `FNF3..FNF7, mu_FN3..mu_FN7, RMS3..RMS7, LE1..LE11` (chaotic, 26 columns),
//! then `LCS_str_<class>, LCS_seq_<class>` for each class (lcs, 2 per class).

pub mod chaotic;
pub mod lcs;
pub mod series;
pub mod spectral;
pub mod stats;

use serde::{Deserialize, Serialize};

use crate::corpus::RepresentativeSet;
use crate::error::{Error, Result};
pub use chaotic::{chaotic_features, ChaoticFeatures};
pub use lcs::{lcs_features, LcsFeatureBlock, LcsMode};
pub use series::RealSeries;
pub use spectral::{BicoherenceParams, SubbandFeatures};

pub const AUTOCORR_LAGS: usize = 21;
pub const STATS_COLUMNS: usize = 5 + AUTOCORR_LAGS + 1 + 12;
pub const CHAOTIC_COLUMNS: usize = 15 + 11;

#[derive(Debug, Clone, PartialEq)]
pub struct StatFeatures {
    pub mean: f64,
    pub variance: f64,
    pub moment3: f64,
    pub moment4: f64,
    pub entropy: f64,
    pub autocorr: [f64; AUTOCORR_LAGS],
    pub bicoherence: f64,
    pub subbands: SubbandFeatures,
}

impl StatFeatures {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![self.mean, self.variance, self.moment3, self.moment4, self.entropy];
        v.extend_from_slice(&self.autocorr);
        v.push(self.bicoherence);
        v.extend(self.subbands.to_vec());
        v
    }
}

pub fn stat_features(x: &RealSeries) -> Result<StatFeatures> {
    let v = x.values();
    x.require(AUTOCORR_LAGS + 1)?;
    let mut autocorr = [0.0; AUTOCORR_LAGS];
    for (k, slot) in autocorr.iter_mut().enumerate() {
        *slot = stats::autocorr(v, k as isize + 1)?;
    }
    Ok(StatFeatures {
        mean: stats::mean(v),
        variance: stats::central_moment(v, 2)?,
        moment3: stats::central_moment(v, 3)?,
        moment4: stats::central_moment(v, 4)?,
        entropy: stats::entropy(v),
        autocorr,
        bicoherence: spectral::bicoherence(v, BicoherenceParams::for_len(v.len())?)?,
        subbands: spectral::subband_features(v)?,
    })
}

/// Which feature blocks to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureGroups {
    pub stats: bool,
    pub chaotic: bool,
    pub lcs: bool,
}

impl FeatureGroups {
    pub const ALL: FeatureGroups = FeatureGroups {
        stats: true,
        chaotic: true,
        lcs: true,
    };

    /// Parses a comma-separated subset of `stats,chaotic,lcs`.
    pub fn parse(list: &str) -> Result<Self> {
        let mut g = FeatureGroups {
            stats: false,
            chaotic: false,
            lcs: false,
        };
        for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part {
                "stats" => g.stats = true,
                "chaotic" => g.chaotic = true,
                "lcs" => g.lcs = true,
                other => return Err(Error::invalid(format!("unknown feature group `{other}`"))),
            }
        }
        if !(g.stats || g.chaotic || g.lcs) {
            return Err(Error::invalid("no feature groups selected"));
        }
        Ok(g)
    }

    pub fn column_count(&self, n_classes: usize) -> usize {
        usize::from(self.stats) * STATS_COLUMNS
            + usize::from(self.chaotic) * CHAOTIC_COLUMNS
            + usize::from(self.lcs) * 2 * n_classes
    }
}

impl std::fmt::Display for FeatureGroups {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> = [(self.stats, "stats"), (self.chaotic, "chaotic"), (self.lcs, "lcs")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, n)| *n)
            .collect();
        f.write_str(&names.join(","))
    }
}

pub fn stat_feature_names() -> Vec<String> {
    let mut names: Vec<String> = ["mu", "var", "mu3", "mu4", "H"].map(String::from).to_vec();
    names.extend((1..=AUTOCORR_LAGS).map(|k| format!("AC{k}")));
    names.push("BC".into());
    for prefix in ["mu_f", "var_f", "mu3_f"] {
        names.extend((1..=4).map(|b| format!("{prefix}{b}")));
    }
    names
}

pub fn chaotic_feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(CHAOTIC_COLUMNS);
    for prefix in ["FNF", "mu_FN", "RMS"] {
        names.extend(chaotic::FNF_DIMS.map(|d| format!("{prefix}{d}")));
    }
    names.extend(chaotic::LYAPUNOV_DIMS.map(|d| format!("LE{d}")));
    names
}

pub fn lcs_feature_names(classes: &[String]) -> Vec<String> {
    classes
        .iter()
        .flat_map(|c| [format!("LCS_str_{c}"), format!("LCS_seq_{c}")])
        .collect()
}

/// Everything needed to turn a packet into a feature row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub groups: FeatureGroups,
    pub delay: usize,
    pub fnn_tolerance: f64,
    pub lcs_mode: LcsMode,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            groups: FeatureGroups::ALL,
            delay: chaotic::DEFAULT_DELAY,
            fnn_tolerance: chaotic::DEFAULT_FNN_TOLERANCE,
            lcs_mode: LcsMode::Full,
        }
    }
}

impl FeatureConfig {
    pub fn names(&self, classes: &[String]) -> Vec<String> {
        let mut names = Vec::new();
        if self.groups.stats {
            names.extend(stat_feature_names());
        }
        if self.groups.chaotic {
            names.extend(chaotic_feature_names());
        }
        if self.groups.lcs {
            names.extend(lcs_feature_names(classes));
        }
        names
    }

    /// Feature row for one packet. `reps` must be non-empty when the LCS
    /// group is enabled.
    pub fn extract(&self, packet: &[u8], reps: &[RepresentativeSet]) -> Result<Vec<f64>> {
        let series = RealSeries::from_bytes(packet);
        let mut row = Vec::with_capacity(self.groups.column_count(reps.len()));
        if self.groups.stats {
            row.extend(stat_features(&series)?.to_vec());
        }
        if self.groups.chaotic {
            row.extend(chaotic_features(series.values(), self.delay, self.fnn_tolerance)?.to_vec());
        }
        if self.groups.lcs {
            if reps.is_empty() {
                return Err(Error::invalid("LCS features requested without representatives"));
            }
            row.extend(lcs_features(packet, reps, &self.lcs_mode)?.to_vec());
        }
        Ok(row)
    }
}
