//! WebAssembly bindings for the browser demo in `www/`. Results cross the
//! boundary as JSON strings.

pub mod demo;

use serde::Serialize;
use wasm_bindgen::prelude::*;

fn json<T: Serialize>(v: &T) -> Result<String, JsError> {
    serde_json::to_string(v).map_err(|e| JsError::new(&e.to_string()))
}

fn js(e: codecid::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `{"substring": n, "subsequence": m}` for two UTF-8 strings compared bytewise.
#[wasm_bindgen(js_name = lcsLengths)]
pub fn lcs_lengths(a: &str, b: &str) -> Result<String, JsError> {
    json(&demo::lcs_lengths(a.as_bytes(), b.as_bytes()))
}

/// Chunk offsets and DP cell counts for overlapped chunking.
#[wasm_bindgen(js_name = chunkPlan)]
pub fn chunk_plan(packet_len: usize, chunk_len: usize, overlap: f64) -> Result<String, JsError> {
    json(&demo::chunk_plan(packet_len, chunk_len, overlap).map_err(js)?)
}

/// Bicoherence map of a synthetic three-tone signal.
#[wasm_bindgen(js_name = triadBicoherence)]
pub fn triad_bicoherence(
    coupled: bool,
    seg_len: usize,
    n_seg: usize,
    f1: usize,
    f2: usize,
    seed: u32,
) -> Result<String, JsError> {
    if f1 == 0 || f2 == 0 || f1 + f2 > seg_len / 2 {
        return Err(JsError::new("need f1, f2 ≥ 1 and f1 + f2 ≤ seg_len / 2"));
    }
    let x = demo::triad_signal(coupled, seg_len, n_seg, f1, f2, u64::from(seed));
    json(&demo::bicoherence_map(&x, seg_len).map_err(js)?)
}
