use std::path::Path;

use knapdc::io::*;
use knapdc_core::dnc;
use knapdc_core::randmodel::{sample, ModelParams};
use knapdc_core::solve;

const SMALL: &str = include_str!("data/small.json");

#[test]
fn instance_round_trip() {
    let inst = parse_instance(SMALL, Path::new("small.json")).unwrap();
    assert_eq!(inst.capacity(), 7);
    let text = serde_json::to_string(&InstanceFile::from_instance(&inst)).unwrap();
    assert_eq!(parse_instance(&text, Path::new("x")).unwrap(), inst);

    let r = sample(ModelParams::new(12, 5));
    let file = InstanceFile::from_random(&r);
    assert_eq!(file.increments.as_ref().unwrap().len(), 13);
    let back: InstanceFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(back.validate().unwrap(), r.instance);
}

#[test]
fn parse_errors_carry_position() {
    let err = parse_instance(
        "{\n  \"capacity\": 7,\n  \"weights\": [1,\n",
        Path::new("bad.json"),
    )
    .unwrap_err();
    match err {
        IoError::Parse { line, path, .. } => {
            assert_eq!(line, 4);
            assert_eq!(path, Path::new("bad.json"));
        }
        other => panic!("{other:?}"),
    }
    let unknown = r#"{"capacity": 1, "weights": [1, 1], "profits": [1, 1], "extra": 0}"#;
    assert!(matches!(
        parse_instance(unknown, Path::new("u")),
        Err(IoError::Parse { .. })
    ));
}

#[test]
fn invalid_instances_are_rejected() {
    let mismatch = r#"{"capacity": 3, "weights": [1, 2], "profits": [1.0]}"#;
    assert!(matches!(
        parse_instance(mismatch, Path::new("m")),
        Err(IoError::Invalid { .. })
    ));
    assert!(matches!(
        read_instance(Path::new("/nonexistent/instance.json")),
        Err(IoError::Read { .. })
    ));
}

#[test]
fn solution_and_tree_records() {
    let inst = parse_instance(SMALL, Path::new("small.json")).unwrap();
    let rec = SolutionRecord::from(&solve::greedy_solution(&inst, &inst.root()));
    assert_eq!(rec.algorithm, "gr");
    assert_eq!(rec.decisions.len(), 8);
    let tree = dnc::build_tree(&inst, 2).unwrap();
    let t = TreeRecord::from(&tree);
    assert_eq!(t.marker, "");
    assert_eq!(t.leaf_markers(), vec!["ll", "lr", "r"]);
    let json = serde_json::to_string(&t).unwrap();
    assert_eq!(serde_json::from_str::<TreeRecord>(&json).unwrap(), t);
}
