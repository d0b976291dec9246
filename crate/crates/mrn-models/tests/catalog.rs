use mrn_models::neural::NeuralParams;
use mrn_models::opinion::OpinionParams;
use mrn_models::{builtin_model, builtin_model_ref, catalog, transcription, ModelError};
use mrn_network::io::{load_network, network_from_str, network_to_string, save_network};
use mrn_network::{NetworkError, Propensity};

#[test]
fn every_entry_and_preset_validates() {
    for e in catalog() {
        builtin_model(e.id, None).unwrap().validate().unwrap();
        for p in e.presets {
            let net = builtin_model(e.id, Some(p)).unwrap();
            net.validate().unwrap();
            assert_eq!(net.id(), format!("{}:{p}", e.id));
        }
    }
}

#[test]
fn opinion_presets_match_published_constants() {
    let lib = OpinionParams::liberal();
    assert_eq!((lib.l, lib.k1, lib.k2), (40, 0.5, 1.0));
    assert_eq!((lib.a1, lib.a2, lib.a3), (0.0, 1.0 / 80.0, 1.0 / 80.0));
    let tot = OpinionParams::totalitarian();
    assert_eq!((tot.a1, tot.a2, tot.a3), (3.0 / 80.0, 1.0 / 40.0, -1.0 / 320.0));

    let net = builtin_model("opinion", Some("totalitarian")).unwrap();
    match &net.reactions()[2].propensity {
        Propensity::OpinionExp { a, .. } => assert_eq!(a[0], -1.0 / 320.0),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(net.x0(), vec![0, 0]);
    assert_eq!(net.time_unit(), "day");
}

#[test]
fn transcription_constants() {
    let net = builtin_model("transcription", None).unwrap();
    match net.reactions()[6].propensity {
        Propensity::MassAction { k } => assert_eq!(k, 8.7658e-12),
        ref other => panic!("unexpected {other:?}"),
    }
    assert_eq!(transcription::KAPPA[0], 0.043);
    assert_eq!(transcription::KAPPA[9], 0.0007);
    assert_eq!(net.x0(), vec![0, 2, 4, 2, 0, 0]);
}

#[test]
fn neural_presets() {
    let sync = NeuralParams::synchronous();
    assert_eq!((sync.nu_e, sync.nu_i), (0.140, -0.136));
    let asy = NeuralParams::asynchronous();
    assert_eq!((asy.nu_e, asy.nu_i, asy.gamma, asy.h, asy.l), (0.034, -0.00062, 0.1, 0.001, 100));
    let swept = NeuralParams::with_delta(0.004, 0.276);
    assert!((swept.nu_e - 0.140).abs() < 1e-15 && (swept.nu_i + 0.136).abs() < 1e-15);
    let net = builtin_model_ref("neural:synchronous").unwrap();
    match &net.reactions()[0].propensity {
        Propensity::NeuralTanh { weights, .. } => assert_eq!(weights[0], 0.140),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(net.x0(), vec![0, 0]);
}

#[test]
fn unknown_ids_and_presets_are_errors() {
    assert!(matches!(builtin_model("lotka", None), Err(ModelError::UnknownModel(_))));
    assert!(matches!(builtin_model("opinion", Some("anarchic")), Err(ModelError::UnknownPreset { .. })));
    assert!(matches!(builtin_model("sir", Some("x")), Err(ModelError::UnknownPreset { .. })));
}

#[test]
fn builtin_export_and_reload_is_structurally_equal() {
    let dir = tempfile::tempdir().unwrap();
    for e in catalog() {
        let net = builtin_model(e.id, e.presets.first().copied()).unwrap();
        let path = dir.path().join(format!("{}.json", e.id));
        save_network(&net, &path).unwrap();
        let back = load_network(&path).unwrap();
        assert_eq!(back, net, "{}", e.id);
        // byte-stable second round trip
        assert_eq!(network_to_string(&back), network_to_string(&net));
    }
}

#[test]
fn missing_propensity_kind_points_at_the_propensity() {
    let text = network_to_string(&builtin_model("sir", None).unwrap());
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["reactions"][0]["propensity"].as_object_mut().unwrap().remove("kind");
    match network_from_str(&v.to_string()).unwrap_err() {
        NetworkError::Schema { pointer, .. } => assert_eq!(pointer, "/reactions/0/propensity"),
        other => panic!("unexpected {other:?}"),
    }
}
