use fhaci_core::channel::{collision_probabilities, CollisionModel, PerInterferer, SystemConfig, WaveformParams};
use fhaci_core::{Error, ExactCollision};
use num_rational::Ratio;
use proptest::prelude::*;

const REFERENCE_JSON: &str = r#"{
    "M": 50, "r_ex": 0.25, "r_net": 2.0, "alpha": 3.0, "snr_db": 10.0,
    "sigma_s_db": 8.0, "m0": 4, "m_i": 1.0, "x0_distance": 1.0
}"#;

#[test]
fn reference_network_parses_with_defaults() {
    let cfg = SystemConfig::from_json(REFERENCE_JSON).unwrap();
    assert_eq!(cfg, SystemConfig::reference_network());
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(SystemConfig::from_json(&text).unwrap(), cfg);
}

#[test]
fn per_interferer_lists_are_checked_against_m() {
    let listed = r#"{"M": 3, "r_ex": 0.1, "r_net": 2.0, "alpha": 3.5, "snr_db": 10.0,
        "m0": 2, "m_i": [1.0, 2.0, 0.5], "power_ratios": [1.0, 0.5, 2.0], "x0_distance": 1.0}"#;
    let cfg = SystemConfig::from_json(listed).unwrap();
    assert_eq!(cfg.m_i, PerInterferer::Each(vec![1.0, 2.0, 0.5]));
    assert_eq!(cfg.power_ratio(2), 2.0);
    assert!(!cfg.identical_interferers());
    let short = listed.replace("[1.0, 2.0, 0.5]", "[1.0, 2.0]");
    match SystemConfig::from_json(&short) {
        Err(Error::Config { field, .. }) => assert_eq!(field, "m_i"),
        other => panic!("expected config error, got {other:?}"),
    }
}

#[test]
fn malformed_configs_are_config_errors() {
    for bad in [
        REFERENCE_JSON.replace("\"alpha\": 3.0", "\"alpha\": 2.0"),
        REFERENCE_JSON.replace("\"r_net\": 2.0", "\"r_net\": 0.2"),
        REFERENCE_JSON.replace("\"m0\": 4", "\"m0\": 0"),
        REFERENCE_JSON.replace("\"M\": 50", "\"M\": 50, \"bogus\": 1"),
        REFERENCE_JSON.replace("\"x0_distance\": 1.0", "\"x0_distance\": 3.0"),
        "{".to_string(),
    ] {
        assert!(matches!(SystemConfig::from_json(&bad), Err(Error::Config { .. })), "{bad}");
    }
}

#[test]
fn waveform_json_uses_short_names() {
    let wf: WaveformParams = serde_json::from_str(r#"{"L": 38, "R": 0.64, "h": 0.81, "psi": 0.96}"#).unwrap();
    assert_eq!(wf, WaveformParams::new(38.0, 0.64, 0.81, 0.96).unwrap());
    assert_eq!(WaveformParams::new(37.5, 0.5, 0.5, 0.95).unwrap().rounded_channels(), 38);
    assert!(WaveformParams::new(0.5, 0.5, 0.5, 0.95).is_err());
}

#[test]
fn exact_collision_probabilities() {
    let r = |n, d| Ratio::new(n, d);
    let c: ExactCollision = CollisionModel::new(r(10, 1), r(1, 2), r(24, 25)).unwrap();
    assert_eq!(c.p_c, r(1, 20));
    assert_eq!(c.p_a, r(9, 100));
    assert_eq!(c.p_n, r(43, 50));
    assert_eq!(c.k_s, r(1, 50));
    assert_eq!(c.p_c + c.p_a + c.p_n, r(1, 1));
}

proptest! {
    #[test]
    fn collision_probabilities_sum_to_one(l in 1u32..500, duty in 0.01f64..1.0, psi in 0.5f64..1.0) {
        let c = collision_probabilities(l, duty, psi).unwrap();
        prop_assert!((c.p_c + c.p_a + c.p_n - 1.0).abs() < 1e-14);
        prop_assert!(c.p_c >= 0.0 && c.p_a >= 0.0 && c.p_n >= 0.0);
        let n = c.without_adjacent();
        prop_assert_eq!(n.p_a, 0.0);
        prop_assert!((n.p_c + n.p_n - 1.0).abs() < 1e-14);
    }
}
