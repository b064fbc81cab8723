mod common;

use std::collections::BTreeMap;

use exotica_core::exec::Execution;
use exotica_core::ledger::{HomologyClass, Verdict};
use exotica_core::pipeline::{
    build, build_traced, distinctness_certificate, geography, geography_with, optimize,
    optimize_with, ConstructionRecipe,
};
use exotica_core::Error;
use num_bigint::BigInt;
use num_traits::Signed;

fn top_class(t: i64, m: usize, sign: i64) -> HomologyClass {
    HomologyClass {
        t: sign * t,
        e: vec![sign; m],
        s: 0,
    }
}

/// Brute-force survivor set: expands the pre-blowdown function over every
/// class and keeps those satisfying the pairing conditions with one sign.
/// Only the end sphere carries weights in these configurations:
/// `beta . S'' = a + 2 * sum of the E-coefficients that meet the section`.
fn oracle_survivors(recipe: &ConstructionRecipe) -> BTreeMap<HomologyClass, BigInt> {
    let (_, trace) = build_traced(recipe).unwrap();
    let before = &trace[trace.len() - 2];
    let p = recipe.chain_p();
    let section_meets = (recipe.s + u32::from(recipe.fishtail)) as usize;
    before
        .basic_classes()
        .unwrap()
        .into_iter()
        .filter(|(c, _)| {
            let pairing = c.t + 2 * c.e.iter().take(section_meets).sum::<i64>();
            pairing == p || pairing == -p
        })
        .collect()
}

#[test]
fn survivors_match_brute_force_filter() {
    for (n, s, fishtail, extra) in [
        (3, 5, true, 0),
        (3, 4, false, 1),
        (4, 7, true, 2),
        (5, 6, false, 0),
        (6, 9, true, 1),
    ] {
        let recipe = ConstructionRecipe::uniform(n, s, 3, fishtail, extra);
        let res = build(&recipe).unwrap();
        let got: BTreeMap<HomologyClass, BigInt> =
            res.state.basic_classes().unwrap().into_iter().collect();
        assert_eq!(got, oracle_survivors(&recipe), "{recipe:?}");
        assert_eq!(got.len(), 1 << (1 + extra));
    }
}

#[test]
fn paper_examples() {
    let res = build(&ConstructionRecipe::uniform(4, 7, 2, true, 0)).unwrap();
    assert_eq!((res.chi_h, res.c1sq), (4, 23));
    let res = build(&ConstructionRecipe::uniform(8, 14, 3, true, 0)).unwrap();
    assert_eq!(res.c1sq, 48);
    assert_eq!(res.top_value_abs, common::pow(3, 14));
    assert!(res.certificate.all_pass());
}

#[test]
fn top_pair_sign_follows_n() {
    for n in 3..=10u32 {
        let opt = optimize(n).unwrap();
        let classes = opt.state.basic_classes().unwrap();
        assert_eq!(classes.len(), 2, "n = {n}");
        let m = opt.recipe.blowups() as usize;
        let t = i64::from(n) + 2 * i64::from(opt.recipe.s) - 2;
        let value = common::pow(2, opt.recipe.s);
        let sign = if n % 2 == 0 {
            value.clone()
        } else {
            -value.clone()
        };
        assert_eq!(classes[0], (top_class(t, m, -1), sign));
        assert_eq!(classes[1], (top_class(t, m, 1), value));
        assert!(opt.state.sw().check_symmetry(i64::from(n)));
    }
}

#[test]
fn optimize_matches_theorem_table() {
    for n in 3..=30u32 {
        let opt = optimize(n).unwrap();
        assert_eq!(opt.c1sq, common::paper_c1sq_max(i64::from(n)), "n = {n}");
        assert_eq!(opt.recipe.extra_blowups, 0);
        if n >= 7 {
            assert_eq!(
                opt.recipe.fishtail,
                common::paper_uses_fishtail(i64::from(n)),
                "n = {n}"
            );
            let s_formula = if opt.recipe.fishtail {
                (7 * n + 1) / 4
            } else {
                (7 * n).div_ceil(4)
            };
            assert_eq!(opt.recipe.s, s_formula.min(2 * n - 1), "n = {n}");
        }
    }
    assert_eq!(
        (optimize(3).unwrap().recipe.s, optimize(4).unwrap().recipe.s),
        (5, 7)
    );
}

#[test]
fn sequential_and_parallel_agree() {
    for n in [3, 9, 14] {
        let a = optimize_with(n, Execution::Sequential).unwrap();
        let b = optimize_with(n, Execution::Parallel).unwrap();
        assert_eq!(a.recipe, b.recipe);
        let ga = geography_with(n, 5, Execution::Sequential).unwrap();
        let gb = geography_with(n, 5, Execution::Parallel).unwrap();
        let key = |g: &[exotica_core::pipeline::GeographyPoint]| {
            g.iter()
                .map(|p| (p.c1sq, p.recipe.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&ga), key(&gb));
    }
}

#[test]
fn geography_fills_every_point() {
    for n in 3..=8u32 {
        let max = common::paper_c1sq_max(i64::from(n));
        let points = geography(n, -3).unwrap();
        assert_eq!(
            points.iter().map(|p| p.c1sq).collect::<Vec<_>>(),
            (-3..=max).collect::<Vec<_>>()
        );
        for p in &points {
            assert!(p.verified && p.sw_nonzero, "{p:?}");
            assert_eq!(p.chi_h, i64::from(n));
            let res = build(&p.recipe).unwrap();
            assert_eq!(res.c1sq, p.c1sq);
        }
        assert_eq!(points.last().unwrap().recipe.extra_blowups, 0);
    }
    let four = geography(4, 23).unwrap();
    assert_eq!(four.len(), 1);
    assert_eq!(four[0].recipe.extra_blowups, 0);
}

#[test]
fn each_blowup_on_a_maximal_recipe_lowers_c1sq_by_one() {
    for n in 3..=6u32 {
        let best = optimize(n).unwrap();
        for extra in 0..6u32 {
            let recipe = ConstructionRecipe {
                extra_blowups: extra,
                ..best.recipe.clone()
            };
            let res = build(&recipe).unwrap();
            assert_eq!(res.c1sq, best.c1sq - i64::from(extra));
            assert_eq!(res.chi_h, i64::from(n));
            assert!(!res.state.sw().is_zero());
        }
    }
}

#[test]
fn certificate_for_three_knots() {
    let base = ConstructionRecipe::uniform(3, 5, 2, true, 0);
    let cert = distinctness_certificate(&base, &[2, 3, 4]).unwrap();
    let values: Vec<&str> = cert.entries.iter().map(|e| e.top_value.as_str()).collect();
    assert_eq!(values, ["32", "243", "1024"]);
    assert!(cert.holds());
    for e in &cert.entries {
        assert_eq!((e.e, e.sigma), (36 + 6 - 22, -24 - 6 + 22));
        assert_eq!(e.verdict, Verdict::Nonsymplectic);
    }
    assert!(matches!(
        distinctness_certificate(&base, &[1]),
        Err(Error::FiberedTwistKnot(1))
    ));
}

#[test]
fn top_value_increases_with_r() {
    let mut last = BigInt::from(0);
    for r in 2..=15u64 {
        let res = build(&ConstructionRecipe::uniform(5, 9, r, true, 0)).unwrap();
        let values: Vec<BigInt> = res
            .state
            .basic_classes()
            .unwrap()
            .into_iter()
            .map(|(_, v)| v.abs())
            .collect();
        assert!(values.iter().all(|v| *v == common::pow(r, 9)));
        assert!(res.top_value_abs > last);
        last = res.top_value_abs;
    }
}

#[test]
fn infeasible_recipes_are_rejected() {
    let too_many = ConstructionRecipe::uniform(3, 6, 2, true, 0);
    assert!(matches!(build(&too_many), Err(Error::Infeasible(_))));
    let chain_too_long = ConstructionRecipe::uniform(8, 15, 2, true, 0);
    assert!(matches!(build(&chain_too_long), Err(Error::Infeasible(_))));
    assert!(build(&ConstructionRecipe::uniform(2, 1, 2, true, 0)).is_err());
}

#[test]
fn result_json_embeds_state_and_recipe() {
    let res = build(&ConstructionRecipe::uniform(3, 5, 2, true, 0)).unwrap();
    let doc = res.to_json().unwrap();
    assert_eq!(doc["c1sq"], 16);
    assert_eq!(doc["chi_h"], 3);
    assert_eq!(doc["top_value"], "32");
    assert_eq!(doc["verdict"], "nonsymplectic");
    assert_eq!(doc["recipe"]["s"], 5);
    assert_eq!(doc["basic_classes"][1]["class"]["T"], 11);
    assert_eq!(doc["basic_classes"][1]["value"], "32");
    assert_eq!(doc["sw"]["generators"].as_array().unwrap().len(), 7);
    assert_eq!(doc["history"].as_array().unwrap().len(), 1 + 5 + 5 + 2 + 1);
}
