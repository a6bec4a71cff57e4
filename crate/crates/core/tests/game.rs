mod common;

use std::sync::Arc;

use common::{all_tables, naive_citsov, naive_dictatorial, naive_monotonic, naive_strategy_proof, space, Naive};
use scf_logic::catalog::{self, space_ab};
use scf_logic::game::{
    dom_equilibria, dominant_actions, equivalence_audit, has_citsov, implements, is_dictatorial, is_monotonic,
    is_strategy_proof, monotonicity_violation, nash_equilibria, truthfully_implements, GameError, ImplementationFailure,
    SolutionConcept,
};
use scf_logic::{scf_as_game_form, Action, GameForm, OutcomeSet, Profile, ScfModel, ScfTable, StateSpace};

const NE: SolutionConcept = SolutionConcept::Nash;
const DOM: SolutionConcept = SolutionConcept::Dominant;

fn profile(space: &StateSpace, r: [[&str; 2]; 2]) -> Profile {
    Profile::from_names(&[r[0].to_vec(), r[1].to_vec()], space.outcomes()).unwrap()
}

#[test]
fn game_form_of_h() {
    let g = scf_as_game_form(&catalog::h());
    assert_eq!(g.num_profiles(), 4);
    assert_eq!((0..4).map(|a| g.outcome(a)).collect::<Vec<_>>(), vec![0, 0, 0, 1]);
    let g = scf_as_game_form(&catalog::p());
    assert!((0..4).all(|a| g.outcome(a) == 0));
    let single = space(1, &["a"]);
    let g = scf_as_game_form(&ScfTable::constant(single, 0).unwrap());
    assert_eq!(g.num_profiles(), 1);
    assert_eq!(g.outcome(0), 0);
}

#[test]
fn nash_examples() {
    let sp = space_ab(2);
    let g = scf_as_game_form(&catalog::h());
    let ne = nash_equilibria(&g, &profile(&sp, [["b", "a"], ["b", "a"]]));
    assert!(ne.contains(&3) && ne.contains(&0));
    assert_eq!(ne, vec![0, 3]);

    let g = catalog::g_p_matrix();
    for t in sp.profiles() {
        assert_eq!(nash_equilibria(&g, &t), vec![0, 1, 2, 3]);
    }

    let g = catalog::trivial_game();
    let k = OutcomeSet::new(["a"]).unwrap();
    let t = Profile::from_names(&[vec!["a"]], &k).unwrap();
    assert_eq!(nash_equilibria(&g, &t), vec![0]);
}

#[test]
fn dominant_examples() {
    let maj = catalog::majority3();
    let g = scf_as_game_form(&maj);
    let all_ab = maj.space().profile(0);
    assert!(dom_equilibria(&g, &all_ab).contains(&0));

    // In g^J an action of agent 1 is dominant iff it ranks their true top first.
    let j = catalog::j();
    let g = scf_as_game_form(&j);
    for t in j.space().profiles() {
        let top = t.orders()[0].top();
        let expected: Vec<usize> = (0..2).filter(|&a| j.space().orders()[a].top() == top).collect();
        assert_eq!(dominant_actions(&g, &t, 0), expected);
        assert_eq!(dominant_actions(&g, &t, 1), vec![0, 1]);
        for a in dom_equilibria(&g, &t) {
            assert_eq!(j.space().orders()[g.action_profile(a)[0]].top(), top);
        }
    }
}

#[test]
fn dominant_equilibria_are_nash() {
    for n in [2, 3] {
        let sp = space_ab(n);
        for f in all_tables(&sp).into_iter().step_by(if n == 2 { 1 } else { 7 }) {
            let g = scf_as_game_form(&f);
            for t in sp.profiles() {
                let ne = nash_equilibria(&g, &t);
                assert!(dom_equilibria(&g, &t).iter().all(|a| ne.contains(a)));
            }
        }
    }
}

#[test]
fn dom_equilibria_match_reference_dominance() {
    let sp = space_ab(2);
    for f in all_tables(&sp) {
        let g = scf_as_game_form(&f);
        for t in sp.profiles() {
            let naive = Naive::of(&ScfModel::new(f.clone(), t.clone()).unwrap());
            let expected: Vec<usize> = (0..4).filter(|&v| naive.dominant_at(v)).collect();
            assert_eq!(dom_equilibria(&g, &t), expected);
        }
    }
}

/// (truthfully implements, implements) under Nash.
fn verdicts(g: &GameForm, f: &ScfTable) -> (bool, bool) {
    (
        truthfully_implements(g, f, NE).unwrap().is_none(),
        implements(g, f, NE).unwrap().is_none(),
    )
}

#[test]
fn verdict_matrix() {
    let sp = space_ab(2);
    let h = catalog::h();
    let g_h = scf_as_game_form(&h);
    assert_eq!(verdicts(&g_h, &h), (true, false));
    match implements(&g_h, &h, NE).unwrap() {
        Some(ImplementationFailure::WrongOutcome { truth, actions, outcome, expected }) => {
            assert_eq!(truth, profile(&sp, [["b", "a"], ["b", "a"]]));
            assert_eq!(actions, 0);
            assert_eq!((outcome, expected), (0, 1));
        }
        other => panic!("unexpected {other:?}"),
    }

    let j = catalog::j();
    assert_eq!(verdicts(&scf_as_game_form(&j), &j), (true, true));

    let g_minus = catalog::g_j_minus();
    assert_eq!(verdicts(&g_minus, &j), (false, true));
    assert!(matches!(
        truthfully_implements(&g_minus, &j, NE).unwrap(),
        Some(ImplementationFailure::TruthNotEquilibrium { .. })
    ));

    let p = catalog::p();
    assert_eq!(verdicts(&catalog::g_p_matrix(), &p), (false, false));
}

#[test]
fn empty_solution_sets_are_reported() {
    // Matching pennies: agent 1 wants to match, agent 2 to mismatch.
    let k = OutcomeSet::new(["a", "b"]).unwrap();
    let acts = vec![Action::Label("l".into()), Action::Label("r".into())];
    let g = GameForm::new(k, vec![acts.clone(), acts], vec![0, 1, 1, 0]).unwrap();
    let p = catalog::p();
    let failure = implements(&g, &p, NE).unwrap().unwrap();
    assert_eq!(
        failure,
        ImplementationFailure::EmptySolutionSet { truth: profile(p.space(), [["a", "b"], ["b", "a"]]) }
    );
    assert_eq!(truthfully_implements(&g, &p, NE), Err(GameError::NonDirectMechanism));
    assert_eq!(
        implements(&catalog::trivial_game(), &p, NE),
        Err(GameError::SpaceMismatch)
    );
}

#[test]
fn strategy_proofness_examples() {
    assert!(is_strategy_proof(&catalog::majority3()));
    assert!(is_strategy_proof(&catalog::j()));
    assert!(!is_strategy_proof(&catalog::inverted_j()));
}

#[test]
fn monotonicity_examples() {
    assert!(is_monotonic(&catalog::majority3()));
    assert!(is_monotonic(&catalog::p()));
    let v = monotonicity_violation(&catalog::inverted_j()).unwrap();
    let f = catalog::inverted_j();
    assert_eq!(f.outcome_at(v.before), v.outcome);
    assert_ne!(f.outcome_at(v.after), v.outcome);
}

#[test]
fn sovereignty_and_dictatorship_examples() {
    assert!(has_citsov(&catalog::h()));
    assert!(!has_citsov(&catalog::p()));
    let (dict, who) = is_dictatorial(&catalog::j());
    assert!(dict);
    assert_eq!(who.map(|i| i.number()), Some(1));
    assert_eq!(is_dictatorial(&catalog::h()), (false, None));
}

#[test]
fn oracles_match_reference_definitions() {
    for n in [1, 2, 3] {
        for f in all_tables(&space_ab(n)) {
            assert_eq!(is_strategy_proof(&f), naive_strategy_proof(&f), "{:?}", f.map());
            assert_eq!(is_monotonic(&f), naive_monotonic(&f), "{:?}", f.map());
            assert_eq!(has_citsov(&f), naive_citsov(&f));
            assert_eq!(is_dictatorial(&f).0, naive_dictatorial(&f));
        }
    }
}

#[test]
fn truthful_and_plain_dom_implementation_coincide() {
    for n in [2, 3] {
        for f in all_tables(&space_ab(n)) {
            let g = scf_as_game_form(&f);
            let truthful = truthfully_implements(&g, &f, DOM).unwrap().is_none();
            let plain = implements(&g, &f, DOM).unwrap().is_none();
            assert_eq!(truthful, plain, "{:?}", f.map());
            assert_eq!(is_monotonic(&f), truthful, "{:?}", f.map());
        }
    }
}

#[test]
fn audit_examples() {
    let maj = equivalence_audit(&catalog::majority3()).unwrap();
    assert!(maj.truthful_dom && maj.dom_implements && maj.monotonic && maj.strproof_encoding);
    let inv = equivalence_audit(&catalog::inverted_j()).unwrap();
    assert!(!inv.truthful_dom && !inv.dom_implements && !inv.monotonic && !inv.strproof_encoding);
    for f in all_tables(&space_ab(2)) {
        assert!(equivalence_audit(&f).unwrap().all_agree(), "{:?}", f.map());
    }
    let text = maj.to_string();
    assert!(text.lines().count() >= 4, "{text}");
}

#[test]
fn failures_render_readably() {
    let h = catalog::h();
    let g = scf_as_game_form(&h);
    let failure = implements(&g, &h, NE).unwrap().unwrap();
    let text = failure.describe(&g);
    assert!(text.contains("([b,a],[b,a])"), "{text}");
    let one = Arc::new(ScfTable::constant(space_ab(1), 1).unwrap());
    assert!(is_strategy_proof(&one));
}
