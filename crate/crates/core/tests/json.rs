use setflow::body2d::{minkowski_sum, Resolution};
use setflow::geomfun::hausdorff;
use setflow::lab::{random_hybrid, BodySpec, ExperimentConfig, OperatorSpec, PerturbationSpec};
use setflow::LinearOp2;

#[test]
fn body_specs_round_trip() {
    for seed in 0..20 {
        let x = random_hybrid(seed).unwrap();
        let spec = BodySpec::from_body(&x).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: BodySpec = serde_json::from_str(&text).unwrap();
        let y = back.build(Resolution::default()).unwrap();
        assert!(hausdorff(&x, &y).unwrap() < 1e-13, "seed {seed}");
    }
}

#[test]
fn sum_spec_builds_minkowski_sum() {
    let text = r#"{"type":"sum","terms":[{"type":"fourier","H0":0.5},{"type":"polygon","vertices":[[0,0],[2,0],[0,1]]}]}"#;
    let spec: BodySpec = serde_json::from_str(text).unwrap();
    let a = spec.build(Resolution::default()).unwrap();
    let b = minkowski_sum(
        &setflow::Body2D::disk(0.5).unwrap(),
        &setflow::Body2D::from_polygon(&[[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]).unwrap(),
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn operator_specs_round_trip() {
    for op in [LinearOp2::rotation(0.7), LinearOp2::reflection(0.2), LinearOp2::from_rows([[0.0, -2.0], [0.5, 0.0]])] {
        let spec = OperatorSpec::from_op(&op);
        let back: OperatorSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        let rebuilt = back.build().unwrap();
        assert!((rebuilt.matrix() - op.matrix()).abs().max() < 1e-15);
    }
}

#[test]
fn config_round_trip() {
    let mut cfg = ExperimentConfig::new(
        5,
        OperatorSpec::RotationOrder { m: 5 },
        BodySpec::Random { seed: 1, modes: 6, roughness: 0.05 },
        PerturbationSpec { modes: vec![1, 2], amplitudes: vec![0.01, 0.02], seed: 4 },
        3.0,
    );
    cfg.sample_times = vec![0.0, 1.0, 3.0];
    let text = serde_json::to_string_pretty(&cfg).unwrap();
    assert!(text.contains("\"X0_star\"") && text.contains("\"T\""));
    let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(back.x0().unwrap(), cfg.x0().unwrap());
}

#[test]
fn unknown_body_type_is_rejected() {
    assert!(serde_json::from_str::<BodySpec>(r#"{"type":"blob"}"#).is_err());
}
