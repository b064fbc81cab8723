mod common;

use exotica_core::exec::Execution;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn invariants_survive_random_sequences(seed in any::<u64>()) {
        let steps = common::sequences::run_sequence(seed);
        prop_assert!(steps.is_ok(), "{}", steps.unwrap_err());
    }
}

#[test]
fn fixed_seed_batch() {
    let seeds: Vec<u64> = (0..2000).collect();
    let results = Execution::default().map(&seeds, |&s| common::sequences::run_sequence(s));
    for r in results {
        r.unwrap();
    }
}
