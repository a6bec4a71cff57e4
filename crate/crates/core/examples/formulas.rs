//! Parsing, macro expansion and printing.

use scf_logic::{parse, print, StateSpace};

fn main() {
    let space = StateSpace::with_names(2, ["a", "b", "c"]).expect("valid space");
    let inputs = [
        "rep(1,a,b) & ~rep(1,b,a)",
        "a -> b -> c",
        "<{1,2}> (ballot(1,[a,c,b]) & ballot(2,[c,a,b]))",
        "[N] (a | b | c)",
        "pref(1) a <-> ~Pref(2) ~b",
    ];
    for text in inputs {
        let phi = parse(text, &space).expect("well-formed");
        println!("{text}\n  => {}  (dag size {})", print(&phi), phi.dag_size());
    }

    let bad = "<{1,3}> (a & b";
    if let Err(e) = parse(bad, &space) {
        println!("\n{}", e.render(bad));
    }
}
