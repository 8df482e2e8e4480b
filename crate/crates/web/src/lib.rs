//! Browser demo: a real Parseval K-frame in the plane, its split constants
//! for a chosen subset, and Jensen margins for the catalog functions.
//!
//! Every export takes plain numbers and returns a JSON string; failures come
//! back as `{"error": "..."}` so the page needs no exception handling.

use kframes_core::frame::{frame_operator, kframe_bounds, IndexSubset, KFrame, OperatorK};
use kframes_core::genlab::SeededRng;
use kframes_core::jensen::{check_thm_3_3_i, check_thm_3_3_ii, convex_catalog};
use kframes_core::numkit::{op_norm, svd, CMat, C64};
use kframes_core::theorems::{check_thm_2_7, v_ratio_at};
use kframes_core::{Error, Result, DEFAULT_TOL};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest frame the page offers; subsets travel as a bit mask.
pub const MAX_COUNT: u32 = 16;
/// Directions sampled on the unit circle for the ratio curve.
pub const CURVE_SAMPLES: usize = 360;

/// `K = R(θ)·diag(s₁, s₂)`.
fn operator(s1: f64, s2: f64, theta: f64) -> Result<OperatorK> {
    let (c, s) = (theta.cos(), theta.sin());
    OperatorK::new(CMat::from_real_rows(&[&[c * s1, -s * s2], &[s * s1, c * s2]]))
}

/// `T_F = K W` with `W` the polar factor of a real Gaussian `2 × n` matrix,
/// so `WWᵀ = I` and every vector stays real.
fn parseval_frame(seed: u64, n: usize, k: &OperatorK) -> Result<KFrame> {
    if !(2..=MAX_COUNT as usize).contains(&n) {
        return Err(Error::BadConfig(format!("frame size must be in 2..={MAX_COUNT}, got {n}")));
    }
    let mut rng = SeededRng::new(seed);
    let g = CMat::from_fn(2, n, |_, _| C64::new(rng.gaussian(), 0.0));
    let s = svd(&g)?;
    let u2 = CMat::from_columns(2, &[s.u.col(0), s.u.col(1)])?;
    let v2 = CMat::from_columns(n, &[s.v.col(0), s.v.col(1)])?;
    let w = &u2 * &v2.adjoint();
    KFrame::new(k.matrix() * &w)
}

fn subset(mask: u32, n: usize) -> Result<IndexSubset> {
    if n < 32 && mask >> n != 0 {
        return Err(Error::BadSubset(format!("mask {mask:#b} has bits beyond {n} vectors")));
    }
    Ok(IndexSubset::from_mask(u64::from(mask), n))
}

fn real_rows(m: &CMat) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].re).collect()).collect()
}

fn respond<T: Serialize>(r: Result<T>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn frame_json(seed: u64, n: usize, s1: f64, s2: f64, theta: f64) -> Result<serde_json::Value> {
    let k = operator(s1, s2, theta)?;
    let f = parseval_frame(seed, n, &k)?;
    let s = frame_operator(&f);
    let residual = op_norm(&(&s - &k.gram()))?;
    let bounds = kframe_bounds(&f, &k, DEFAULT_TOL)?;
    let vectors: Vec<[f64; 2]> = (0..n).map(|i| [f.vector(i)[0].re, f.vector(i)[1].re]).collect();
    Ok(json!({
        "vectors": vectors,
        "k": real_rows(k.matrix()),
        "frame_operator": real_rows(&s),
        "parseval_residual": residual,
        "lower_bound": bounds.lower_opt.finite(),
        "upper_bound": bounds.upper_opt,
    }))
}

fn split_json(seed: u64, n: usize, s1: f64, s2: f64, theta: f64, mask: u32) -> Result<serde_json::Value> {
    let k = operator(s1, s2, theta)?;
    let f = parseval_frame(seed, n, &k)?;
    let j = subset(mask, n)?;
    let r = check_thm_2_7(&f, &k, &j, DEFAULT_TOL)?;
    // Real frame and real K: the forms are real symmetric, so the extremes over
    // the unit circle are the extremes over all of ℂ².
    let curve = (0..CURVE_SAMPLES)
        .map(|i| {
            let phi = std::f64::consts::PI * i as f64 / CURVE_SAMPLES as f64;
            v_ratio_at(&f, &k, &j, &[C64::new(phi.cos(), 0.0), C64::new(phi.sin(), 0.0)])
        })
        .collect::<Result<Vec<Option<f64>>>>()?;
    Ok(json!({
        "subset": j.indices(),
        "v_minus": r.v.v_minus,
        "v_plus": r.v.v_plus,
        "complement": [r.v_complement.v_minus, r.v_complement.v_plus],
        "proof_bound": r.proof_bound,
        "pass": r.pass,
        "curve": curve,
    }))
}

fn jensen_json(seed: u64, n: usize, s1: f64, s2: f64, theta: f64, mask: u32) -> Result<serde_json::Value> {
    let k = operator(s1, s2, theta)?;
    let f = parseval_frame(seed, n, &k)?;
    let j = subset(mask, n)?;
    let rows = convex_catalog()
        .into_iter()
        .map(|h| {
            let operator_convex = if h.operator_convex() {
                Some(check_thm_3_3_i(&f, &k, &j, &h, DEFAULT_TOL)?.relative_margin())
            } else {
                None
            };
            let convex = check_thm_3_3_ii(&f, &k, &j, &h, DEFAULT_TOL)?;
            Ok(json!({
                "function": h.id(),
                "operator_convex_margin": operator_convex,
                "convex_margin": convex.report.relative_margin(),
                "convex_margin_without_h0": convex.without_h0.relative_margin(),
                "pass": convex.report.pass,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "rows": rows }))
}

/// The frame vectors, `K`, `S_F` and the optimal bounds.
#[wasm_bindgen]
pub fn demo_frame(seed: u32, n: u32, s1: f64, s2: f64, theta: f64) -> String {
    respond(frame_json(u64::from(seed), n as usize, s1, s2, theta))
}

/// `v±` for the subset in `mask`, its complement, and the ratio on the unit circle.
#[wasm_bindgen]
pub fn demo_split(seed: u32, n: u32, s1: f64, s2: f64, theta: f64, mask: u32) -> String {
    respond(split_json(u64::from(seed), n as usize, s1, s2, theta, mask))
}

/// Relative Loewner margins of the two-map Jensen inequalities on `(S_J, S_{J^c})`.
#[wasm_bindgen]
pub fn demo_jensen(seed: u32, n: u32, s1: f64, s2: f64, theta: f64, mask: u32) -> String {
    respond(jensen_json(u64::from(seed), n as usize, s1, s2, theta, mask))
}
