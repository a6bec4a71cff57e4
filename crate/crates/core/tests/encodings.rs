mod common;

use std::sync::Arc;

use common::{all_models, all_tables, naive_citsov, naive_dictatorial, naive_strategy_proof, space, Naive};
use proptest::prelude::*;
use scf_logic::catalog::{self, space_ab};
use scf_logic::decision::{self, check_scf_property_with, sample_models, EnumerationBudget};
use scf_logic::encodings::{
    ballot_agent, ballot_profile, better_outcomes_holds, strproof_truth_set, trueprofile_holds, Encoder, PropertyId,
    RhoForm,
};
use scf_logic::{parse, truth_set, valid_in_model, AgentId, Coalition, Formula, LinearOrder, Profile, ScfModel, ScfTable};

/// The full valuation of the profile ([a,c,b], [c,a,b]): all 18 literals.
pub const FULL_VALUATION: &str = "rep(1,a,a) & rep(1,b,b) & rep(1,c,c) & rep(1,a,c) & rep(1,c,b) & rep(1,a,b) \
    & ~rep(1,c,a) & ~rep(1,b,c) & ~rep(1,b,a) \
    & rep(2,a,a) & rep(2,b,b) & rep(2,c,c) & rep(2,c,a) & rep(2,a,b) & rep(2,c,b) \
    & ~rep(2,a,c) & ~rep(2,b,a) & ~rep(2,b,c)";

#[test]
fn ballot_examples() {
    let sp = space(2, &["a", "b", "c"]);
    let k = sp.outcomes();
    let acb = LinearOrder::from_names(&["a", "c", "b"], k).unwrap();
    let cab = LinearOrder::from_names(&["c", "a", "b"], k).unwrap();
    assert_eq!(ballot_agent(AgentId::new(1), &acb, k), parse("rep(1,a,c) & rep(1,c,b)", &sp).unwrap());
    assert_eq!(ballot_agent(AgentId::new(2), &cab, k), parse("rep(2,c,a) & rep(2,a,b)", &sp).unwrap());

    let single = space(2, &["a"]);
    let only = single.orders()[0].clone();
    assert_eq!(ballot_agent(AgentId::new(1), &only, single.outcomes()), Formula::top());

    let one = space(1, &["a", "b", "c"]);
    for o in one.orders() {
        let p = Profile::new(vec![o.clone()]);
        assert_eq!(ballot_profile(&p, one.outcomes()), ballot_agent(AgentId::new(1), o, one.outcomes()));
    }

    let ex = Profile::new(vec![acb, cab]);
    let m = decision::representative_model(&sp);
    let set = truth_set(&m, &ballot_profile(&ex, k)).unwrap();
    assert_eq!(set.count(), 1);
    assert_eq!(set.iter().next(), Some(sp.index_of(&ex).unwrap()));
}

#[test]
fn ballot_characterizes_its_state_exactly() {
    let sp = space(2, &["a", "b", "c"]);
    let full = parse("ballotAll([[a,c,b],[c,a,b]])", &sp).unwrap().iff(parse(FULL_VALUATION, &sp).unwrap());
    assert!(decision::valid_outcome_free(&sp, &full).unwrap().holds());
}

#[test]
fn each_ballot_is_a_nominal() {
    for (n, names) in [(2, vec!["a", "b", "c"]), (3, vec!["a", "b"]), (1, vec!["a", "b", "c"])] {
        let sp = space(n, &names);
        let m = decision::representative_model(&sp);
        for (s, p) in sp.profiles().enumerate() {
            let set = truth_set(&m, &ballot_profile(&p, sp.outcomes())).unwrap();
            assert_eq!(set.iter().collect::<Vec<_>>(), vec![s]);
        }
    }
}

fn expansion_holds(enc: &Encoder, m: &ScfModel, i: AgentId, x: usize, y: usize) -> bool {
    let v = valid_in_model(m, &enc.better_outcomes(i, x, y)).unwrap();
    // ◂ is global: true everywhere or nowhere.
    assert!(v.valid || v.falsifying.len() == m.space().num_states());
    v.valid
}

#[test]
fn better_example_with_both_outcomes_feasible() {
    let h = catalog::h();
    let sp = h.space().clone();
    let enc = Encoder::new(&sp);
    let truth = |r1: [&str; 2]| Profile::from_names(&[r1.to_vec(), vec!["a", "b"]], sp.outcomes()).unwrap();
    // Agent 1 truly prefers b: every b-state beats every a-state.
    let m = ScfModel::new(h.clone(), truth(["b", "a"])).unwrap();
    assert!(expansion_holds(&enc, &m, AgentId::new(1), 0, 1));
    assert!(!expansion_holds(&enc, &m, AgentId::new(1), 1, 0));
    let m = ScfModel::new(h, truth(["a", "b"])).unwrap();
    assert!(!expansion_holds(&enc, &m, AgentId::new(1), 0, 1));
}

#[test]
fn better_is_vacuous_for_infeasible_targets() {
    let sp = space(2, &["a", "b", "c"]);
    let enc = Encoder::new(&sp);
    let out = Arc::new(ScfTable::from_fn(sp.clone(), |p| p.orders()[0].top().min(1)).unwrap());
    for t in [0, 7, 35] {
        let m = ScfModel::new(out.clone(), sp.profile(t)).unwrap();
        for i in sp.agent_ids() {
            for x in 0..3 {
                assert!(expansion_holds(&enc, &m, i, x, 2));
                assert!(expansion_holds(&enc, &m, i, 2, x));
            }
        }
    }
}

#[test]
fn better_from_falsum_is_valid() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let phis = [Formula::out("a"), Formula::top(), parse("rep(1,a,b) | b", &sp).unwrap(), Formula::bottom()];
    for m in all_models(&sp) {
        for i in sp.agent_ids() {
            for phi in &phis {
                assert!(valid_in_model(&m, &enc.better(i, &Formula::bottom(), phi)).unwrap().valid);
            }
        }
    }
}

#[test]
fn better_fast_path_matches_expansion() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    for m in all_models(&sp) {
        for i in sp.agent_ids() {
            for x in 0..2 {
                for y in 0..2 {
                    assert_eq!(better_outcomes_holds(&m, i, x, y), expansion_holds(&enc, &m, i, x, y));
                }
            }
        }
    }
    let sp = space(2, &["a", "b", "c"]);
    let enc = Encoder::new(&sp);
    for m in sample_models(&sp, 8, 3).into_iter().step_by(5) {
        for i in sp.agent_ids() {
            for x in 0..3 {
                for y in 0..3 {
                    assert_eq!(better_outcomes_holds(&m, i, x, y), expansion_holds(&enc, &m, i, x, y));
                }
            }
        }
    }
}

#[test]
fn trueprofile_examples() {
    let sp = space(1, &["a", "b"]);
    let enc = Encoder::new(&sp);
    let ab = Profile::new(vec![sp.orders()[0].clone()]);
    assert_eq!(
        enc.trueprofile(&ab),
        enc.better(AgentId::new(1), &Formula::out("b"), &Formula::out("a"))
    );

    // With every outcome feasible, only the truth is reified.
    let sp = space(2, &["a", "b", "c"]);
    let enc = Encoder::new(&sp);
    let out = Arc::new(ScfTable::from_fn(sp.clone(), |p| p.orders()[1].top()).unwrap());
    let m = ScfModel::new(out, sp.profile(13)).unwrap();
    for (s, p) in sp.profiles().enumerate() {
        let holds = valid_in_model(&m, &enc.trueprofile(&p)).unwrap().valid;
        assert_eq!(holds, s == 13, "{}", sp.format_state(s));
        assert_eq!(holds, trueprofile_holds(&m, &p));
    }
}

#[test]
fn trueprofile_cannot_see_infeasible_outcomes() {
    let sp = space(2, &["a", "b", "c"]);
    let enc = Encoder::new(&sp);
    // c is never chosen.
    let out = Arc::new(ScfTable::from_fn(sp.clone(), |p| usize::from(p.orders()[0].position(0) > p.orders()[1].position(0))).unwrap());
    let truth = Profile::from_names(&[vec!["a", "b", "c"], vec!["b", "a", "c"]], sp.outcomes()).unwrap();
    let m = ScfModel::new(out, truth.clone()).unwrap();
    let moved_c = Profile::from_names(&[vec!["c", "a", "b"], vec!["b", "c", "a"]], sp.outcomes()).unwrap();
    let swapped = Profile::from_names(&[vec!["b", "a", "c"], vec!["b", "a", "c"]], sp.outcomes()).unwrap();
    assert!(valid_in_model(&m, &enc.trueprofile(&truth)).unwrap().valid);
    assert!(valid_in_model(&m, &enc.trueprofile(&moved_c)).unwrap().valid);
    assert!(!valid_in_model(&m, &enc.trueprofile(&swapped)).unwrap().valid);
    let reified = sp.profiles().filter(|p| trueprofile_holds(&m, p)).count();
    // Per agent: the three placements of c keeping a, b in true order, plus
    // the reversed pair with c between, since no link then compares a and b.
    assert_eq!(reified, 16);
}

#[test]
fn rho_is_valid_exactly_where_out_is_f() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let models = all_models(&sp);
    for f in all_tables(&sp) {
        let diamond = enc.rho(&f, RhoForm::Diamond);
        let implication = enc.rho(&f, RhoForm::Implication);
        for m in &models {
            let is_f = m.out().map() == f.map();
            assert_eq!(valid_in_model(m, &diamond).unwrap().valid, is_f);
            assert_eq!(valid_in_model(m, &implication).unwrap().valid, is_f);
            // Diamond form is global; implication form is pointwise.
            let boxed = Formula::boxed(Coalition::all(2), implication.clone());
            assert!(valid_in_model(m, &diamond.clone().iff(boxed)).unwrap().valid);
        }
    }
}

#[test]
fn rho_biconditional_is_not_pointwise_valid() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let h = catalog::h();
    let both = enc.rho(&h, RhoForm::Diamond).iff(enc.rho(&h, RhoForm::Implication));
    let off = ScfModel::new(catalog::j(), sp.profile(0)).unwrap();
    let v = valid_in_model(&off, &both).unwrap();
    // Where J and H agree the implication form holds locally, while the
    // diamond form fails globally.
    assert!(!v.valid);
    assert_eq!(v.falsifying, vec![0, 1, 3]);
}

#[test]
fn rho_matches_compact_forms() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    for (f, compact) in [
        (catalog::h(), "b <-> (rep(1,b,a) & rep(2,b,a))"),
        (catalog::j(), "a <-> rep(1,a,b)"),
        (catalog::p(), "a"),
    ] {
        let compact = parse(compact, &sp).unwrap();
        let rho = enc.rho(&f, RhoForm::Implication);
        for m in all_models(&sp) {
            assert!(valid_in_model(&m, &rho.clone().iff(compact.clone())).unwrap().valid);
        }
    }
}

#[test]
fn rho_at_three_agents() {
    let sp = space_ab(3);
    let enc = Encoder::new(&sp);
    let models = all_models(&sp);
    for f in all_tables(&sp).into_iter().step_by(17) {
        let program = scf_logic::logic::Program::compile(&sp, &[enc.rho(&f, RhoForm::Diamond), enc.rho(&f, RhoForm::Implication)]).unwrap();
        for m in &models {
            let regs = program.run_model(m);
            let is_f = m.out().map() == f.map();
            assert_eq!(regs.is_full(0), is_f);
            assert_eq!(regs.is_full(1), is_f);
        }
    }
}

#[test]
fn property_shapes() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let n = Coalition::all(2);
    assert_eq!(
        enc.citsov(),
        Formula::diamond(n, Formula::out("a")).and(Formula::diamond(n, Formula::out("b")))
    );
    let (one, two) = (AgentId::new(1), AgentId::new(2));
    assert_eq!(
        enc.dom(),
        Formula::boxed(Coalition::singleton(two), enc.br(one)).and(Formula::boxed(Coalition::singleton(one), enc.br(two)))
    );
    assert_eq!(enc.mon_instances().len(), 4 * 4 * 2);
    assert_eq!(Encoder::new(&space_ab(3)).mon_instances().len(), 8 * 8 * 2);
    assert_eq!(parse("br(1)", &sp).unwrap(), parse("(a & [{1}] pref(1) a) | (b & [{1}] pref(1) b)", &sp).unwrap());
}

#[test]
fn citsov_and_nodict_match_their_oracles() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let budget = EnumerationBudget::default();
    for f in all_tables(&sp) {
        let rho = enc.rho(&f, RhoForm::Diamond);
        let citsov = decision::valid(&sp, &rho.clone().implies(enc.citsov()), budget).unwrap();
        assert_eq!(citsov.holds(), naive_citsov(&f), "{:?}", f.map());
        let nodict = decision::valid(&sp, &rho.implies(enc.nodict()), budget).unwrap();
        assert_eq!(nodict.holds(), !naive_dictatorial(&f), "{:?}", f.map());
    }
}

#[test]
fn dom_matches_dominance_at_every_state() {
    let sp = space_ab(2);
    let dom = Encoder::new(&sp).dom();
    for m in all_models(&sp) {
        let naive = Naive::of(&m);
        let set = truth_set(&m, &dom).unwrap();
        for s in 0..sp.num_states() {
            assert_eq!(set.contains(s), naive.dominant_at(s));
        }
    }
}

#[test]
fn strproof_and_mon_match_strategy_proofness() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    for f in all_tables(&sp) {
        let sp_oracle = naive_strategy_proof(&f);
        let strproof = check_scf_property_with(&enc, &f, PropertyId::Strproof).unwrap().holds();
        let mon = check_scf_property_with(&enc, &f, PropertyId::Mon).unwrap().holds();
        assert_eq!(strproof, sp_oracle, "{:?}", f.map());
        assert_eq!(mon, sp_oracle, "{:?}", f.map());
    }
}

#[test]
fn lazy_strproof_matches_the_formula() {
    for sp in [space_ab(2), space(2, &["a", "b", "c"])] {
        let enc = Encoder::new(&sp);
        let strproof = enc.strproof();
        let dom = enc.dom();
        for m in sample_models(&sp, 4, 9).into_iter().step_by(3) {
            let lazy = strproof_truth_set(&m, &truth_set(&m, &dom).unwrap());
            assert_eq!(lazy, truth_set(&m, &strproof).unwrap());
        }
    }
}

#[test]
fn strproof_with_an_infeasible_outcome() {
    // When c is never chosen, trueprofile also reifies rankings that put c
    // between a and b in the wrong order, and DOM is then demanded at states
    // that are not truthful. The encoding and the oracle can disagree; both
    // results are reported here rather than reconciled.
    let sp = space(2, &["a", "b", "c"]);
    let enc = Encoder::new(&sp);
    let agent_one_picks = Arc::new(
        ScfTable::from_fn(sp.clone(), |p| usize::from(p.orders()[0].position(0) > p.orders()[0].position(1))).unwrap(),
    );
    let constant = Arc::new(ScfTable::constant(sp.clone(), 1).unwrap());
    let verdicts: Vec<(bool, bool)> = [agent_one_picks, constant]
        .iter()
        .map(|f| {
            let formula = check_scf_property_with(&enc, f, PropertyId::Strproof).unwrap().holds();
            (formula, naive_strategy_proof(f))
        })
        .collect();
    println!("(formula, oracle): {verdicts:?}");
    assert_eq!(verdicts, vec![(false, true), (true, true)]);
}

#[test]
fn strproof_agrees_when_every_outcome_is_feasible() {
    let sp = space(2, &["a", "b", "c"]);
    let enc = Encoder::new(&sp);
    let cases = [
        ScfTable::from_fn(sp.clone(), |p| p.orders()[0].top()).unwrap(),
        ScfTable::from_fn(sp.clone(), |p| p.orders()[1].ranking()[2]).unwrap(),
        ScfTable::from_fn(sp.clone(), |p| {
            let (x, y) = (p.orders()[0].top(), p.orders()[1].top());
            if x == y { x } else { 0 }
        })
        .unwrap(),
    ];
    for f in cases {
        assert!(naive_citsov(&f));
        let f = Arc::new(f);
        let formula = check_scf_property_with(&enc, &f, PropertyId::Strproof).unwrap().holds();
        assert_eq!(formula, naive_strategy_proof(&f), "{:?}", f.map());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_path_matches_expansion_on_random_models(
        map in proptest::collection::vec(0usize..3, 36),
        truth in 0usize..36,
        i in 1usize..=2,
        x in 0usize..3,
        y in 0usize..3,
    ) {
        let sp = space(2, &["a", "b", "c"]);
        let enc = Encoder::new(&sp);
        let m = ScfModel::new(Arc::new(ScfTable::new(sp.clone(), map).unwrap()), sp.profile(truth)).unwrap();
        let i = AgentId::new(i);
        prop_assert_eq!(better_outcomes_holds(&m, i, x, y), expansion_holds(&enc, &m, i, x, y));
    }
}
