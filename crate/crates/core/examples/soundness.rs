//! Model-checks every axiom instance in every model over two agents.

use scf_logic::axioms::{default_pool, instantiate_all, soundness_check, DEFAULT_POOL_CAP};
use scf_logic::catalog::space_ab;
use scf_logic::decision::{enumerate_models, EnumerationBudget};
use scf_logic::encodings::Encoder;

fn main() {
    let space = space_ab(2);
    let enc = Encoder::new(&space);
    let instances = instantiate_all(&enc, &default_pool(&space, DEFAULT_POOL_CAP));
    let models = enumerate_models(&space, EnumerationBudget::default()).expect("64 models");
    println!("{}", soundness_check(&space, &instances, models.iter()));
}
