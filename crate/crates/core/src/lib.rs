//! Content-based audio codec identification from raw byte packets.
//!
//! The pipeline cuts encoded files into fixed-length packets, computes
//! statistical, spectral, chaotic and longest-common-substring/subsequence
//! features against per-class representative packets, reduces them with PCA
//! and classifies the codec with a decision tree or a one-vs-one RBF SVM.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod bench;
pub mod features;
pub mod model;
pub mod pca;
pub mod repfile;
pub mod synth;
pub mod table;

mod rng;

pub use error::{Error, Result};
