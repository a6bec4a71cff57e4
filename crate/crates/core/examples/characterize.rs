//! Characteristic formulas of the small catalogue SCFs, in both forms.

use scf_logic::catalog;
use scf_logic::encodings::{Encoder, RhoForm};
use scf_logic::print;

fn main() {
    let enc = Encoder::new(&catalog::space_ab(2));
    for (name, f) in [("H", catalog::h()), ("J", catalog::j()), ("P", catalog::p())] {
        for form in [RhoForm::Diamond, RhoForm::Implication] {
            println!("{name} {form:?}:\n  {}", print(&enc.rho(&f, form)));
        }
    }
    let dom = enc.dom();
    println!("DOM:\n  {}", print(&dom));
    println!("MON has {} outer conjuncts", enc.mon_instances().len());
}
