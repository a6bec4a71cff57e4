//! The relational view of a model, evaluated side by side with the direct
//! truth definition.

use scf_logic::catalog;
use scf_logic::logic::{eval_kripke, kripke_view};
use scf_logic::{eval, parse, AgentId, ScfModel};

fn main() {
    let maj = catalog::majority3();
    let space = maj.space().clone();
    let model = ScfModel::new(maj, space.profile(0)).expect("truth is a state");
    let km = kripke_view(&model);

    let one = AgentId::new(1);
    println!("R_1 classes: {}", km.access_classes(one).len());
    for s in 0..km.num_states() {
        let seen: Vec<usize> = km.pref(one, s).iter().collect();
        println!("P_1 from {}: {:?}", space.format_state(s), seen);
    }

    let phi = parse("dom | <{1}> [{2,3}] pref(1) b", &space).unwrap();
    for s in space.profiles() {
        let direct = eval(&model, &s, &phi).unwrap();
        let relational = eval_kripke(&km, &s, &phi).unwrap();
        assert_eq!(direct, relational);
        println!("{}: {direct}", s.display(space.outcomes()));
    }
}
