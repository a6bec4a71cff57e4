mod common;

use common::{all_models, all_tables, arb_formula, naive_citsov, naive_dictatorial, naive_strategy_proof, space};
use proptest::prelude::*;
use scf_logic::catalog::{self, space_ab};
use scf_logic::decision::{
    check_scf_property, check_scf_property_with, enumerate_models, model_count, representative_model, satisfiable,
    valid, valid_for_scf, DecisionError, EnumerationBudget, Status,
};
use scf_logic::encodings::{Encoder, PropertyId, RhoForm};
use scf_logic::game::is_monotonic;
use scf_logic::{parse, valid_in_model, AgentId, Formula, ScfModel};

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

#[test]
fn model_counts() {
    assert_eq!(enumerate_models(&space_ab(2), budget()).unwrap().len(), 64);
    assert_eq!(enumerate_models(&space_ab(3), budget()).unwrap().len(), 2048);
    match enumerate_models(&space(2, &["a", "b", "c"]), budget()) {
        Err(DecisionError::BudgetExceeded { models, limit }) => {
            assert_eq!(models, 3u128.checked_pow(36).map(|m| m * 36));
            assert_eq!(limit, 1_000_000);
        }
        other => panic!("expected a budget error, got {:?}", other.map(|e| e.len())),
    }
    assert_eq!(model_count(&space_ab(1)), Some(8));
    assert!(EnumerationBudget::new(0, 10).is_err());
}

#[test]
fn enumeration_is_canonical() {
    let sp = space_ab(2);
    let lib: Vec<ScfModel> = enumerate_models(&sp, budget()).unwrap().iter().collect();
    assert_eq!(lib, all_models(&sp));
}

#[test]
fn a_tight_budget_is_an_error() {
    let tight = EnumerationBudget::new(63, 10_000).unwrap();
    let phi = Formula::out("a");
    assert!(matches!(valid(&space_ab(2), &phi, tight), Err(DecisionError::BudgetExceeded { .. })));
    assert!(valid(&space_ab(2), &phi, EnumerationBudget::new(64, 10_000).unwrap()).is_ok());
}

#[test]
fn satisfiability_examples() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let h = catalog::h();
    let phi = enc.rho(&h, RhoForm::Diamond).and(enc.citsov());
    let v = satisfiable(&sp, &phi, budget()).unwrap();
    assert_eq!(v.status, Status::Satisfiable);
    let w = v.witness.unwrap();
    assert_eq!(w.model.out().map(), h.map());
    assert!(valid_in_model(&w.model, &phi).unwrap().valid);

    let both = Formula::out("a").and(Formula::out("b"));
    let v = satisfiable(&sp, &both, budget()).unwrap();
    assert_eq!(v.status, Status::Unsatisfiable);
    assert!(v.witness.is_none());
    assert_eq!(v.models_checked, 64);

    let clash = parse("ballot(1,[a,b]) & rep(1,b,a)", &sp).unwrap();
    assert_eq!(satisfiable(&sp, &clash, budget()).unwrap().status, Status::Unsatisfiable);
}

#[test]
fn validity_examples() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let func1 = parse("(a & ~b) | (b & ~a)", &sp).unwrap();
    assert_eq!(valid(&sp, &func1, budget()).unwrap().status, Status::Valid);

    let v = valid(&sp, &Formula::out("a"), budget()).unwrap();
    assert_eq!(v.status, Status::Invalid);
    let c = v.counterexample.unwrap();
    assert_eq!(c.model.out().map(), &[0, 0, 0, 1]);
    assert_eq!(c.state, 3);

    // Over the whole class the biconditional fails at non-truthful states;
    // it holds per SCF (see below).
    let v = valid(&sp, &enc.mon().iff(enc.strproof()), budget()).unwrap();
    assert_eq!(v.status, Status::Invalid);
    let c = v.counterexample.unwrap();
    assert!(!naive_strategy_proof(c.model.out()));
    assert_ne!(c.model.truth(), &sp.profile(c.state));
}

#[test]
fn mon_and_strproof_agree_per_scf() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    for f in all_tables(&sp) {
        let mon = check_scf_property_with(&enc, &f, PropertyId::Mon).unwrap().holds();
        let strproof = check_scf_property_with(&enc, &f, PropertyId::Strproof).unwrap().holds();
        assert_eq!(mon, strproof, "{:?}", f.map());
        assert_eq!(mon, is_monotonic(&f));
    }
}

#[test]
fn property_examples() {
    let maj = catalog::majority3();
    assert_eq!(check_scf_property(&maj, PropertyId::Strproof).unwrap().status, Status::Valid);
    assert_eq!(check_scf_property(&catalog::h(), PropertyId::Citsov).unwrap().status, Status::Valid);
    let v = check_scf_property(&catalog::j(), PropertyId::Nodict).unwrap();
    assert_eq!(v.status, Status::Invalid);
    assert_eq!(v.models_checked, 1);
    assert_eq!(v.counterexample.unwrap().model.out().map(), catalog::j().map());
    assert!(check_scf_property(&catalog::h(), PropertyId::Br(AgentId::new(3))).is_err());
}

#[test]
fn restriction_to_f_matches_full_enumeration() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    let props = [
        PropertyId::Citsov,
        PropertyId::Nodict,
        PropertyId::Br(AgentId::new(1)),
        PropertyId::Dom,
        PropertyId::Mon,
        PropertyId::Strproof,
    ];
    for f in all_tables(&sp) {
        let rho = enc.rho(&f, RhoForm::Diamond);
        for prop in props {
            let restricted = check_scf_property_with(&enc, &f, prop).unwrap().holds();
            let full = valid(&sp, &rho.clone().implies(enc.property(prop)), budget()).unwrap().holds();
            assert_eq!(restricted, full, "{prop} on {:?}", f.map());
        }
    }
}

#[test]
fn property_checks_match_oracles() {
    let sp = space_ab(2);
    let enc = Encoder::new(&sp);
    for f in all_tables(&sp) {
        let check = |p| check_scf_property_with(&enc, &f, p).unwrap().holds();
        assert_eq!(check(PropertyId::Citsov), naive_citsov(&f));
        assert_eq!(check(PropertyId::Nodict), !naive_dictatorial(&f));
        assert_eq!(check(PropertyId::Strproof), naive_strategy_proof(&f));
    }
}

#[test]
fn valid_for_scf_checks_every_truth() {
    let h = catalog::h();
    let v = valid_for_scf(&h, &Formula::out("a")).unwrap();
    assert_eq!(v.status, Status::Invalid);
    assert_eq!(v.counterexample.unwrap().state, 3);
    let v = valid_for_scf(&h, &parse("b <-> (rep(1,b,a) & rep(2,b,a))", h.space()).unwrap()).unwrap();
    assert_eq!((v.status, v.models_checked), (Status::Valid, 4));
}

#[test]
fn outcome_free_formulas_use_one_model() {
    let sp = space(2, &["a", "b", "c"]);
    let phi = parse("ballotAll([[a,c,b],[c,a,b]]) -> rep(1,a,b)", &sp).unwrap();
    let v = valid(&sp, &phi, budget()).unwrap();
    assert_eq!((v.status, v.models_checked), (Status::Valid, 1));
    assert!(scf_logic::decision::valid_outcome_free(&sp, &Formula::out("a")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn satisfiable_iff_negation_not_valid(phi in arb_formula(2, vec!["a", "b"], 4)) {
        let sp = space_ab(2);
        let sat = satisfiable(&sp, &phi, budget()).unwrap();
        let val = valid(&sp, &phi.clone().not(), budget()).unwrap();
        prop_assert!(sat.holds() != val.holds());
        if let (Some(w), Some(c)) = (sat.witness, val.counterexample) {
            prop_assert_eq!(w, c);
        }
    }

    #[test]
    fn one_model_decides_outcome_free_formulas(phi in arb_formula(2, vec!["a", "b"], 5)) {
        prop_assume!(phi.is_outcome_free());
        let sp = space_ab(2);
        let rep = valid_in_model(&representative_model(&sp), &phi).unwrap().valid;
        let class = all_models(&sp).iter().all(|m| valid_in_model(m, &phi).unwrap().valid);
        prop_assert_eq!(rep, class);
    }
}
