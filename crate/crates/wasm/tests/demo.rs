use meanest_wasm::demo::{empirical_failure_curve, estimate_all, success_curve};
use serde_json::Value;

fn json(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("operation succeeds")).unwrap()
}

#[test]
fn estimate_all_on_two_clusters() {
    let v = json(estimate_all(
        r#"{"instance": {"kind": "two_cluster", "n": 4000, "d": 2, "offset": 3, "sigma": 1, "seed": 4},
            "eps": 0.5, "delta": 0.1, "seed": 1}"#,
    ));
    assert_eq!(v["n"], 4000);
    assert!(v["points"].as_array().unwrap().len() <= 3000);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 24);
    assert!(v["fastgd_path"].as_array().unwrap().len() >= 2);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    for r in results {
        assert_eq!(r["estimate"].as_array().unwrap().len(), 2);
        assert!(r["approx_ratio"].as_f64().unwrap() >= 1.0 - 1e-9);
    }
    assert!(v["radius"].as_f64().unwrap() > 0.0);
}

#[test]
fn estimate_all_rejects_bad_input() {
    assert!(estimate_all(r#"{"instance": {"kind": "gaussian", "n": 10, "d": 3}, "eps": 0.5, "delta": 0.1}"#).is_err());
    assert!(estimate_all("not json").is_err());
    assert!(estimate_all(r#"{"instance": {"kind": "gaussian", "n": 10, "d": 2}, "eps": 0.5, "delta": 3}"#).is_err());
}

#[test]
fn success_curve_shape() {
    let v = json(success_curve(
        r#"{"instance": {"kind": "two_point_lb", "n": 200, "eps": 0.5},
            "estimators": ["fastgd", "empirical"], "eps": 0.5, "deltas": [0.5, 0.1], "trials": 20}"#,
    ));
    let pts = v.as_array().unwrap();
    assert_eq!(pts.len(), 4);
    for p in pts {
        let r = p["success_rate"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&r));
    }
}

#[test]
fn empirical_failure_tracks_bound() {
    let v = json(empirical_failure_curve(r#"{"eps": 0.05, "sizes": [40, 80], "trials": 2000, "seed": 3}"#));
    let pts = v.as_array().unwrap();
    assert_eq!(pts.len(), 2);
    for p in pts {
        assert!(p["failure_rate"].as_f64().unwrap() >= p["bound"].as_f64().unwrap() - 0.05);
    }
    assert!(empirical_failure_curve(r#"{"eps": 0.05, "sizes": [2], "trials": 10}"#).is_err());
}
