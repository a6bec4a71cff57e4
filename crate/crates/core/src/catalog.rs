//! Small social choice functions and game forms used throughout the docs,
//! examples and tests. All are over outcomes `{a, b}`.

use std::sync::Arc;

use crate::domain::{Action, GameForm, OutcomeSet, ScfTable, StateSpace};

/// The space with `agents` agents and outcomes `a, b`.
pub fn space_ab(agents: usize) -> Arc<StateSpace> {
    StateSpace::with_names(agents, ["a", "b"]).expect("valid space")
}

const A: usize = 0;
const B: usize = 1;

fn table(space: Arc<StateSpace>, f: impl Fn(&[usize]) -> usize) -> Arc<ScfTable> {
    let tops: Vec<Vec<usize>> = (0..space.num_states())
        .map(|s| (0..space.agents()).map(|i| space.order_of(s, i).top()).collect())
        .collect();
    let map = tops.iter().map(|t| f(t)).collect();
    Arc::new(ScfTable::new(space, map).expect("valid table"))
}

/// `b` exactly when both agents rank `b` first.
pub fn h() -> Arc<ScfTable> {
    table(space_ab(2), |tops| if tops == [B, B] { B } else { A })
}

/// Agent 1's top outcome.
pub fn j() -> Arc<ScfTable> {
    table(space_ab(2), |tops| tops[0])
}

/// Constantly `a`.
pub fn p() -> Arc<ScfTable> {
    table(space_ab(2), |_| A)
}

/// Agent 1's bottom outcome: `J` with the outcomes swapped.
pub fn inverted_j() -> Arc<ScfTable> {
    table(space_ab(2), |tops| 1 - tops[0])
}

/// Three-agent majority: `a` iff at least two agents rank `a` first.
pub fn majority3() -> Arc<ScfTable> {
    table(space_ab(3), |tops| if tops.iter().filter(|&&t| t == A).count() >= 2 { A } else { B })
}

/// The direct mechanism of [`inverted_j`].
pub fn g_j_minus() -> GameForm {
    crate::domain::scf_as_game_form(&inverted_j())
}

/// A direct mechanism whose every cell yields `b`.
pub fn g_p_matrix() -> GameForm {
    let space = space_ab(2);
    let actions: Vec<Action> = space.orders().iter().cloned().map(Action::Report).collect();
    GameForm::new(space.outcomes().clone(), vec![actions; 2], vec![B; space.num_states()]).expect("valid game form")
}

/// One agent with one action and one outcome.
pub fn trivial_game() -> GameForm {
    let k = OutcomeSet::new(["a"]).expect("valid outcomes");
    GameForm::new(k, vec![vec![Action::Label("stay".into())]], vec![0]).expect("valid game form")
}

/// Every SCF over `space`, in mixed-radix order of their tables.
pub fn all_scfs(space: &Arc<StateSpace>) -> Vec<Arc<ScfTable>> {
    let states = space.num_states();
    let k = space.outcomes().len();
    let total = k.checked_pow(states as u32).expect("small space");
    (0..total)
        .map(|mut idx| {
            let mut map = vec![0; states];
            for s in (0..states).rev() {
                map[s] = idx % k;
                idx /= k;
            }
            Arc::new(ScfTable::new(space.clone(), map).expect("valid table"))
        })
        .collect()
}
