use nc_orlicz::harness::{FamilyKind, Rate, SpectralMap};
use nc_orlicz::io::{parse_operator, parse_phi, serialize_operator, BaseSpec, RunConfig};
use nc_orlicz::operator::{random_operator, AlgebraShape, BlockSpec, Ensemble};
use proptest::prelude::*;

fn shape_strategy() -> impl Strategy<Value = AlgebraShape> {
    prop::collection::vec((1usize..=4, 0.1f64..3.0), 1..=3).prop_map(|pairs| AlgebraShape::from_pairs(&pairs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_json_round_trip(shape in shape_strategy(), seed in any::<u64>(), sigma in 0.01f64..100.0) {
        let x = random_operator(&shape, &Ensemble::GaussianComplex { sigma }, seed).unwrap();
        let text = serialize_operator(&x);
        let back = parse_operator(&text).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(serialize_operator(&back), text);
    }

    #[test]
    fn config_round_trip(seed in any::<u64>(), length in 1usize..500, tol in 1e-12f64..1.0, rate in 0.5f64..4.0) {
        let cfg = RunConfig {
            phi: "power:2.5".into(),
            length,
            seed,
            eps: vec![1.0, 0.25],
            tol,
            output: None,
            base: BaseSpec::Random { blocks: vec![BlockSpec { dim: 2, weight: 0.5 }], ensemble: Ensemble::PsdWishart, seed },
            family: FamilyKind::MonotoneDown { map: SpectralMap::Scale { coefficient: 1.0, rate } },
        };
        let back = RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

#[test]
fn schema_errors_carry_paths() {
    let err = parse_operator(r#"{"blocks":[{"weight":-1.0,"matrix":[[[1,0]]]}]}"#).unwrap_err();
    assert_eq!(err.path, "$.blocks[0].weight");
    let err = parse_operator(r#"{"blocks":[{"weight":1.0,"matrix":[[[1,0],[0,0]],[[0,0]]]}]}"#).unwrap_err();
    assert_eq!(err.path, "$.blocks[0].matrix[1]");
    assert!(parse_operator("not json").is_err());
}

#[test]
fn config_file_base_resolves_relative_to_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.json"), r#"{"blocks":[{"weight":2.0,"matrix":[[[1,0],[0,0]],[[0,0],[2,0]]]}]}"#).unwrap();
    let text = r#"
phi = "expm1"
length = 12
seed = 0
eps = [1.0]
tol = 0.05

[base]
source = "file"
path = "x.json"

[family]
kind = "shrinking_noise"
scales = { rule = "power", coefficient = 1.0, exponent = -2.0 }
ensemble = { type = "gaussian_complex", sigma = 1.0 }
"#;
    let path = dir.path().join("run.toml");
    std::fs::write(&path, text).unwrap();
    match RunConfig::load(&path) {
        Ok(cfg) => {
            let base = cfg.base_operator().unwrap();
            assert_eq!(base.shape().blocks()[0].weight, 2.0);
            assert!(matches!(cfg.family, FamilyKind::ShrinkingNoise { scales: Rate::Power { .. }, .. }));
        }
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn phi_specs() {
    for spec in ["power:2", "power:1.5:2", "expm1", "powerlog:2"] {
        assert!(parse_phi(spec).is_ok(), "{spec}");
    }
    for spec in ["power:0.5", "power", "exp", "", "tab:/nonexistent.csv"] {
        assert!(parse_phi(spec).is_err(), "{spec}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.csv");
    std::fs::write(&path, "u,phi\n0,0\n1,1\n2,3\n").unwrap();
    let phi = parse_phi(&format!("tab:{}", path.display())).unwrap();
    assert!((phi.eval(1.5).unwrap() - 2.0).abs() < 1e-12);
}
