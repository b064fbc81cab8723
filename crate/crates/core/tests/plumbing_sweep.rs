mod common;

use exotica_core::exec::Execution;
use exotica_core::plumbing::{
    chain_for, intersection_matrix, linear_cfrac, recompose, sweep_chains,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

#[test]
fn every_coprime_chain_up_to_40_checks_against_oracles() {
    let reports = sweep_chains(40, Execution::default());
    let expected_pairs: usize = (2..=40i128)
        .map(|p| (1..p).filter(|&q| common::gcd(p, q) == 1).count())
        .sum();
    assert_eq!(reports.len(), expected_pairs);
    for (p, q, report) in reports {
        assert!(report.all_pass(), "C_{{{p},{q}}}: {report:?}");
        let chain = chain_for(p, q).unwrap();
        assert!(chain.coefficients.iter().all(|&r| r >= 2));

        let (num, den) = common::recompose_fraction(&chain.coefficients);
        let (p2, pq1) = ((p * p) as i128, (p * q - 1) as i128);
        let g = common::gcd(p2, pq1);
        assert_eq!((num, den), (p2 / g, pq1 / g), "C_{{{p},{q}}}");

        let minors = common::bareiss_minors(&intersection_matrix(&chain).to_dense()).unwrap();
        for (i, m) in minors.iter().enumerate() {
            assert_eq!(m.is_negative(), i % 2 == 0, "minor {i} of C_{{{p},{q}}}");
        }
        assert_eq!(minors.last().unwrap().abs(), BigInt::from(p * p));
        assert_eq!(intersection_matrix(&chain).leading_minors(), minors);
    }
}

#[test]
fn q_one_chains_have_the_diagram_shape() {
    for p in 2..=60u64 {
        let chain = chain_for(p, 1).unwrap();
        let mut expected = vec![p + 2];
        expected.extend(std::iter::repeat_n(2, p as usize - 2));
        assert_eq!(chain.coefficients, expected);
        assert_eq!(chain.len(), p as usize - 1);
    }
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    assert_eq!(
        sweep_chains(25, Execution::Sequential),
        sweep_chains(25, Execution::Parallel)
    );
}

proptest! {
    #[test]
    fn cfrac_recomposes(den in 1u64..500, extra in 1u64..500) {
        let num = den + extra;
        prop_assume!(common::gcd(num as i128, den as i128) == 1);
        let terms = linear_cfrac(num, den).unwrap();
        prop_assert!(terms.iter().all(|&r| r >= 2));
        let value = recompose(&terms).unwrap();
        prop_assert_eq!(value, BigRational::new(BigInt::from(num), BigInt::from(den)));
    }
}
