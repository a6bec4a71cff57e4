//! Nash and dominant-strategy equilibria, and implementation verdicts.

use scf_logic::catalog;
use scf_logic::game::{dom_equilibria, implements, nash_equilibria, truthfully_implements, SolutionConcept};
use scf_logic::scf_as_game_form;

fn main() {
    let h = catalog::h();
    let g = scf_as_game_form(&h);
    let k = h.space().outcomes();
    for truth in h.space().profiles() {
        let ne: Vec<String> = nash_equilibria(&g, &truth).into_iter().map(|a| g.format_actions(a)).collect();
        let dom: Vec<String> = dom_equilibria(&g, &truth).into_iter().map(|a| g.format_actions(a)).collect();
        println!("truth {}: NE {:?}, DOM {:?}", truth.display(k), ne, dom);
    }

    let j = catalog::j();
    let cases = [
        ("g^H, H", scf_as_game_form(&h), h.clone()),
        ("g^J, J", scf_as_game_form(&j), j.clone()),
        ("g^J-, J", catalog::g_j_minus(), j),
        ("g^P, P", catalog::g_p_matrix(), catalog::p()),
    ];
    for (name, g, f) in cases {
        let truthful = truthfully_implements(&g, &f, SolutionConcept::Nash).unwrap();
        let plain = implements(&g, &f, SolutionConcept::Nash).unwrap();
        println!("{name:<8} truthful NE: {:<5} NE: {}", truthful.is_none(), plain.is_none());
        if let Some(why) = plain {
            println!("         {}", why.describe(&g));
        }
    }
}
