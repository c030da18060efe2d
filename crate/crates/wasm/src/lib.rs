//! Browser bindings for the meanest estimators. Every operation takes and
//! returns a JSON string; the logic lives in [`demo`] so it can be tested natively.

pub mod demo;

use wasm_bindgen::prelude::*;

fn bind(result: Result<String, String>) -> Result<String, JsValue> {
    result.map_err(|e| JsValue::from_str(&e))
}

/// Runs every estimator once on a 2-D instance. See [`demo::EstimateParams`].
#[wasm_bindgen]
pub fn estimate_all(params: &str) -> Result<String, JsValue> {
    bind(demo::estimate_all(params))
}

/// Success rate against `delta` for the chosen estimators. See [`demo::CurveParams`].
#[wasm_bindgen]
pub fn success_curve(params: &str) -> Result<String, JsValue> {
    bind(demo::success_curve(params))
}

/// Failure rate of the plain empirical mean against sample size. See [`demo::FailureParams`].
#[wasm_bindgen]
pub fn empirical_failure_curve(params: &str) -> Result<String, JsValue> {
    bind(demo::empirical_failure_curve(params))
}
