use kframes_core::jensen::convex_catalog;
use kframes_web::{demo_frame, demo_jensen, demo_split, CURVE_SAMPLES};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn frame_is_parseval_for_its_operator() {
    let v = parse(demo_frame(3, 5, 1.5, 0.4, 0.3));
    assert!(v["parseval_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 5);
    assert!((v["lower_bound"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn rank_one_operator_is_supported() {
    let v = parse(demo_frame(3, 4, 1.0, 0.0, 0.0));
    assert!(v["parseval_residual"].as_f64().unwrap() < 1e-12);
    let s = parse(demo_split(3, 4, 1.0, 0.0, 0.0, 0b0101));
    assert_eq!(s["pass"], true);
}

#[test]
fn sampled_ratios_reach_the_split_constants() {
    let v = parse(demo_split(7, 6, 1.2, 0.7, 1.0, 0b001011));
    let (lo, hi) = (v["v_minus"].as_f64().unwrap(), v["v_plus"].as_f64().unwrap());
    let curve: Vec<f64> = v["curve"].as_array().unwrap().iter().filter_map(Value::as_f64).collect();
    assert_eq!(curve.len(), CURVE_SAMPLES);
    let cmin = curve.iter().copied().fold(f64::INFINITY, f64::min);
    let cmax = curve.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(cmin >= lo - 1e-9 && cmax <= hi + 1e-9);
    // A 0.5° grid gets within a small fraction of the extremes.
    assert!(cmin - lo < 1e-3 * (1.0 + lo) && hi - cmax < 1e-3 * (1.0 + hi));
    assert_eq!(v["pass"], true);
}

#[test]
fn jensen_margins_are_nonnegative() {
    let v = parse(demo_jensen(2, 5, 1.1, 0.5, 0.2, 0b10110));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), convex_catalog().len());
    for row in rows {
        assert_eq!(row["pass"], true, "{row}");
        if let Some(m) = row["operator_convex_margin"].as_f64() {
            assert!(m >= -1e-9);
        }
    }
}

#[test]
fn bad_inputs_come_back_as_errors() {
    assert!(parse(demo_frame(0, 40, 1.0, 1.0, 0.0))["error"].is_string());
    assert!(parse(demo_split(0, 3, 1.0, 1.0, 0.0, 0b1000))["error"].is_string());
    assert!(parse(demo_frame(0, 3, f64::NAN, 1.0, 0.0))["error"].is_string());
}
