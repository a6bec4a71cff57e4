//! Evaluates a few formulas at every state of a model of `H`.

use scf_logic::catalog;
use scf_logic::{parse, truth_set, valid_in_model, ScfModel};

fn main() {
    let h = catalog::h();
    let space = h.space().clone();
    let truth = space.profile(3);
    let model = ScfModel::new(h, truth).expect("truth is a state");

    for text in ["b", "<{1,2}> b", "pref(1) a", "dom", "rep(1,b,a) -> <{2}> b"] {
        let phi = parse(text, &space).expect("well-formed");
        let states: Vec<String> = truth_set(&model, &phi)
            .expect("same space")
            .iter()
            .map(|s| space.format_state(s))
            .collect();
        let verdict = valid_in_model(&model, &phi).expect("same space");
        println!("{text:<24} true at {:?}; valid: {}", states, verdict.valid);
    }
}
