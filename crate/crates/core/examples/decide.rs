//! Satisfiability and validity by enumerating every model of a space.

use scf_logic::catalog::{self, space_ab};
use scf_logic::decision::{check_scf_property, satisfiable, valid, EnumerationBudget};
use scf_logic::encodings::PropertyId;
use scf_logic::parse;

fn main() {
    let space = space_ab(2);
    let budget = EnumerationBudget::default();
    for text in ["a & b", "<{1,2}> a | <{1,2}> b", "ballot(1,[a,b]) & rep(1,b,a)"] {
        let phi = parse(text, &space).unwrap();
        let v = satisfiable(&space, &phi, budget).unwrap();
        println!("sat   {text:<32} {} ({} models)", v.status, v.models_checked);
    }
    for text in ["(a & ~b) | (b & ~a)", "a", "mon <-> strproof"] {
        let phi = parse(text, &space).unwrap();
        let v = valid(&space, &phi, budget).unwrap();
        println!("valid {text:<32} {} ({} models)", v.status, v.models_checked);
    }

    // Per-SCF checks only need the models whose out function is the SCF.
    for (name, f) in [("H", catalog::h()), ("J", catalog::j()), ("majority", catalog::majority3())] {
        for prop in [PropertyId::Citsov, PropertyId::Nodict, PropertyId::Strproof] {
            let v = check_scf_property(&f, prop).unwrap();
            println!("{name:<9} {prop:<9} {}", v.status);
        }
    }
}
