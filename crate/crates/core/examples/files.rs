//! Writes an SCF and a model to JSON and reads them back.

use scf_logic::catalog;
use scf_logic::files::{model_to_json, parse_model, parse_scf, scf_to_json};
use scf_logic::ScfModel;

fn main() {
    let maj = catalog::majority3();
    let json = scf_to_json(&maj);
    println!("{} bytes, {} rows", json.len(), maj.map().len());
    assert_eq!(parse_scf(&json).unwrap(), *maj);

    let model = ScfModel::new(maj.clone(), maj.space().profile(5)).unwrap();
    let back = parse_model(&model_to_json(&model)).unwrap();
    assert_eq!(back.truth(), model.truth());

    // Dropping a row leaves a profile without an outcome.
    let mut value: serde_json::Value = serde_json::from_str(&json).unwrap();
    value["map"].as_array_mut().unwrap().pop();
    match parse_scf(&value.to_string()) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected edited file: {e}"),
    }
}
