//! Constructions from elliptic surfaces: recipe replay, the optimal recipe
//! per `n`, lattice-point witnesses and distinctness certificates.
//!
//! A recipe runs: `E(n)` with its Lemma-1.1 fibration, `s` knot surgeries in
//! double nodes, `s` blowups at the pseudo-section's double points, an
//! optional fishtail blowup smoothed into the section, `extra_blowups` free
//! blowups, then a rational blowdown of `C_{p,1}` built from the section and
//! the necklace with one sphere removed. `p = n + 4s` with the fishtail and
//! `n + 4s - 2` without.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ledger::{
    blow_up, elliptic_surface, knot_surgery_double_node, rational_blowdown, section_sphere,
    smooth_with_fishtail, symplectic_verdict, twist_knot_alexander, BlowupKind, ConfigSphere,
    HomologyClass, ManifoldState, Verdict, FIBER,
};
use crate::plumbing::{chain_for, verify_chain, Chain};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub n: u32,
    pub s: u32,
    /// One twist parameter for every surgery, or a single shared one.
    #[serde(deserialize_with = "one_or_many")]
    pub r: Vec<u64>,
    pub fishtail: bool,
    pub extra_blowups: u32,
}

fn one_or_many<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<u64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(u64),
        Many(Vec<u64>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(r) => vec![r],
        OneOrMany::Many(rs) => rs,
    })
}

impl ConstructionRecipe {
    /// A recipe with the same twist parameter `r` for every surgery.
    pub fn uniform(n: u32, s: u32, r: u64, fishtail: bool, extra_blowups: u32) -> Self {
        ConstructionRecipe {
            n,
            s,
            r: vec![r],
            fishtail,
            extra_blowups,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The twist parameter of each of the `s` surgeries.
    pub fn r_values(&self) -> Result<Vec<u64>> {
        match self.r.as_slice() {
            [r] => Ok(vec![*r; self.s as usize]),
            rs if rs.len() == self.s as usize => Ok(rs.to_vec()),
            rs => Err(Error::Infeasible(format!(
                "{} twist parameters for s = {} surgeries",
                rs.len(),
                self.s
            ))),
        }
    }

    /// `p` of the blown-down chain `C_{p,1}`.
    pub fn chain_p(&self) -> i64 {
        let base = i64::from(self.n) + 4 * i64::from(self.s);
        if self.fishtail {
            base
        } else {
            base - 2
        }
    }

    /// Total blowups `m`.
    pub fn blowups(&self) -> u32 {
        self.s + u32::from(self.fishtail) + self.extra_blowups
    }

    /// `c_1^2` the construction should land on: `n + 3s - 2` with the fishtail,
    /// `n + 3s - 3` without, less one per extra blowup.
    pub fn expected_c1sq(&self) -> i64 {
        let base = i64::from(self.n) + 3 * i64::from(self.s);
        let shift = if self.fishtail { 2 } else { 3 };
        base - shift - i64::from(self.extra_blowups)
    }

    pub fn validate(&self) -> Result<()> {
        let n = i64::from(self.n);
        if self.n < 3 {
            return Err(Error::Infeasible(format!("n = {} < 3", self.n)));
        }
        if i64::from(self.s) > 2 * n - 1 {
            return Err(Error::Infeasible(format!(
                "s = {} exceeds the {} double nodes of E({})",
                self.s,
                2 * n - 1,
                self.n
            )));
        }
        let p = self.chain_p();
        if p < 2 {
            return Err(Error::Infeasible(format!("chain parameter p = {p} < 2")));
        }
        if p - 2 > 8 * n - 1 {
            return Err(Error::Infeasible(format!(
                "C_{p} needs {} (-2)-spheres, the necklace offers {}",
                p - 2,
                8 * n - 1
            )));
        }
        for r in self.r_values()? {
            match r {
                0 => return Err(Error::Domain("twist parameter r = 0".into())),
                1 => return Err(Error::FiberedTwistKnot(1)),
                _ => {}
            }
        }
        Ok(())
    }

    fn chain(&self) -> Result<Chain> {
        chain_for(self.chain_p() as u64, 1)
    }
}

/// Checks performed on every build.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildCertificate {
    pub chain_verified: bool,
    pub chi_h_equals_n: bool,
    pub c1sq_closed_form: bool,
    pub c1sq_tracked: bool,
    pub invariants_hold: bool,
    pub survivor_count: String,
    pub expected_survivor_count: String,
    pub top_value_is_product: bool,
}

impl BuildCertificate {
    pub fn all_pass(&self) -> bool {
        self.chain_verified
            && self.chi_h_equals_n
            && self.c1sq_closed_form
            && self.c1sq_tracked
            && self.invariants_hold
            && self.survivor_count == self.expected_survivor_count
            && self.top_value_is_product
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub recipe: ConstructionRecipe,
    pub state: ManifoldState,
    pub chi_h: i64,
    pub c1sq: i64,
    /// Basic classes of extreme `T`-degree, both signs, sorted.
    pub top_classes: Vec<(HomologyClass, BigInt)>,
    pub top_value_abs: BigInt,
    pub verdict: Verdict,
    pub certificate: BuildCertificate,
}

impl ConstructionResult {
    pub fn to_json(&self) -> Result<Value> {
        let mut doc = self.state.to_json()?;
        let top: Vec<Value> = self
            .top_classes
            .iter()
            .map(|(c, v)| json!({"class": c, "value": v.to_string()}))
            .collect();
        let obj = doc.as_object_mut().expect("state JSON is an object");
        obj.insert("recipe".into(), serde_json::to_value(&self.recipe)?);
        obj.insert(
            "top_value".into(),
            Value::String(self.top_value_abs.to_string()),
        );
        obj.insert("top_classes".into(), Value::Array(top));
        obj.insert(
            "certificate".into(),
            serde_json::to_value(&self.certificate)?,
        );
        Ok(doc)
    }
}

/// Replays `recipe`, returning the result and the state after every operation.
pub fn build_traced(
    recipe: &ConstructionRecipe,
) -> Result<(ConstructionResult, Vec<ManifoldState>)> {
    recipe.validate()?;
    let chain = recipe.chain()?;
    let mut trace = vec![elliptic_surface(recipe.n)?];
    let mut apply = |op: &dyn Fn(&ManifoldState) -> Result<ManifoldState>| -> Result<()> {
        let next = op(trace.last().expect("trace starts non-empty"))?;
        trace.push(next);
        Ok(())
    };
    for r in recipe.r_values()? {
        let delta = twist_knot_alexander(r)?;
        apply(&|m| knot_surgery_double_node(m, &delta))?;
    }
    for _ in 0..recipe.s {
        apply(&|m| blow_up(m, BlowupKind::SectionDoublePoint))?;
    }
    if recipe.fishtail {
        apply(&|m| blow_up(m, BlowupKind::Fishtail))?;
        apply(&smooth_with_fishtail)?;
    }
    for _ in 0..recipe.extra_blowups {
        apply(&|m| blow_up(m, BlowupKind::Free))?;
    }
    apply(&|m| {
        let spheres = configuration(m, &chain);
        rational_blowdown(m, &chain, &spheres)
    })?;
    let state = trace.last().expect("trace is non-empty").clone();
    let result = summarize(recipe, &chain, state)?;
    Ok((result, trace))
}

pub fn build(recipe: &ConstructionRecipe) -> Result<ConstructionResult> {
    build_traced(recipe).map(|(result, _)| result)
}

pub fn build_all(
    recipes: &[ConstructionRecipe],
    exec: Execution,
) -> Vec<Result<ConstructionResult>> {
    exec.map(recipes, build)
}

/// End sphere from the section, then the necklace's `-2` spheres in order,
/// the first one meeting the section.
fn configuration(m: &ManifoldState, chain: &Chain) -> Vec<ConfigSphere> {
    let mut spheres = vec![section_sphere(m)];
    spheres.extend((1..chain.len()).map(|i| ConfigSphere::fiber_component(i64::from(i == 1))));
    spheres
}

fn summarize(
    recipe: &ConstructionRecipe,
    chain: &Chain,
    state: ManifoldState,
) -> Result<ConstructionResult> {
    let top_classes = extreme_classes(&state)?;
    let top_value_abs = top_classes
        .iter()
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    let product: BigInt = recipe.r_values()?.into_iter().map(BigInt::from).product();
    let expected_survivors = 1u128 << (1 + recipe.extra_blowups.min(126));
    let certificate = BuildCertificate {
        chain_verified: verify_chain(chain).all_pass(),
        chi_h_equals_n: state.chi_h() == i64::from(recipe.n),
        c1sq_closed_form: state.c1_squared() == recipe.expected_c1sq(),
        c1sq_tracked: state.tracked_c1_squared() == state.c1_squared(),
        invariants_hold: state.invariant_violations().is_empty(),
        survivor_count: state.sw().term_count().to_string(),
        expected_survivor_count: expected_survivors.to_string(),
        top_value_is_product: top_value_abs == product,
    };
    Ok(ConstructionResult {
        recipe: recipe.clone(),
        chi_h: state.chi_h(),
        c1sq: state.c1_squared(),
        verdict: symplectic_verdict(&state)?,
        top_classes,
        top_value_abs,
        certificate,
        state,
    })
}

/// Classes of maximal `T`-degree and their negatives.
fn extreme_classes(state: &ManifoldState) -> Result<Vec<(HomologyClass, BigInt)>> {
    let top = state.sw().top_part(FIBER);
    let width = state.exceptional_count();
    let poly = top.expand_within(crate::ledger::EXPANSION_LIMIT)?;
    let mut out = Vec::new();
    let neg = state.sw().check_symmetry(1);
    for (exp, c) in poly.terms() {
        let class = HomologyClass::from_exponents(poly.generators(), exp, width)?;
        let mirror = class.scaled(-1);
        let mirror_value = if neg { -c } else { c.clone() };
        out.push((class, c.clone()));
        if mirror != out.last().expect("just pushed").0 {
            out.push((mirror, mirror_value));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All recipes with `extra_blowups = 0` passing the resource checks.
pub fn feasible_recipes(n: u32, r: u64) -> Vec<ConstructionRecipe> {
    (0..=2 * n)
        .flat_map(|s| [false, true].map(|f| ConstructionRecipe::uniform(n, s, r, f, 0)))
        .filter(|rec| rec.validate().is_ok())
        .collect()
}

/// Builds every feasible recipe; results paired with their recipes.
fn feasible_results(n: u32, exec: Execution) -> Result<Vec<ConstructionResult>> {
    if n < 3 {
        return Err(Error::Domain(format!("n = {n} < 3")));
    }
    let recipes = feasible_recipes(n, 2);
    exec.map(&recipes, build).into_iter().collect()
}

/// The feasible recipe without extra blowups that maximizes `c_1^2`, found
/// by building every candidate.
pub fn optimize(n: u32) -> Result<ConstructionResult> {
    optimize_with(n, Execution::default())
}

pub fn optimize_with(n: u32, exec: Execution) -> Result<ConstructionResult> {
    feasible_results(n, exec)?
        .into_iter()
        .max_by_key(|res| (res.c1sq, std::cmp::Reverse(res.recipe.blowups())))
        .ok_or_else(|| Error::Infeasible(format!("no feasible recipe for n = {n}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct GeographyPoint {
    pub chi_h: i64,
    pub c1sq: i64,
    pub recipe: ConstructionRecipe,
    /// The replay landed on `(chi_h, c1sq)`.
    pub verified: bool,
    pub sw_nonzero: bool,
}

/// One verified witness for every `c_1^2` in `floor..=max` at `chi_h = n`,
/// using the fewest extra blowups.
pub fn geography(n: u32, floor: i64) -> Result<Vec<GeographyPoint>> {
    geography_with(n, floor, Execution::default())
}

pub fn geography_with(n: u32, floor: i64, exec: Execution) -> Result<Vec<GeographyPoint>> {
    let bases = feasible_results(n, exec)?;
    let max = bases
        .iter()
        .map(|b| b.c1sq)
        .max()
        .expect("optimize found candidates");
    if floor > max {
        return Err(Error::Domain(format!(
            "floor {floor} above the maximum {max} for n = {n}"
        )));
    }
    let witnesses: Vec<ConstructionRecipe> = (floor..=max)
        .map(|c| {
            bases
                .iter()
                .filter(|b| b.c1sq >= c)
                .min_by_key(|b| (b.c1sq - c, b.recipe.s, b.recipe.fishtail))
                .map(|b| ConstructionRecipe {
                    extra_blowups: (b.c1sq - c) as u32,
                    ..b.recipe.clone()
                })
                .expect("the maximal recipe reaches every c below it")
        })
        .collect();
    let points = exec.map(&witnesses, |recipe| {
        let target = recipe.expected_c1sq();
        build(recipe).map(|res| GeographyPoint {
            chi_h: i64::from(recipe.n),
            c1sq: target,
            verified: res.chi_h == i64::from(recipe.n) && res.c1sq == target,
            sw_nonzero: !res.state.sw().is_zero(),
            recipe: recipe.clone(),
        })
    });
    points.into_iter().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry {
    pub r: u64,
    pub top_value: String,
    pub e: i64,
    pub sigma: i64,
    pub b2plus: i64,
    pub simply_connected: bool,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinctnessCertificate {
    pub n: u32,
    pub s: u32,
    pub fishtail: bool,
    pub extra_blowups: u32,
    pub entries: Vec<CertificateEntry>,
    /// The top values are pairwise different.
    pub pairwise_distinct: bool,
    /// All builds share `(e, sigma, b2+, simply_connected)`.
    pub same_fingerprint: bool,
    pub all_nonsymplectic: bool,
}

impl DistinctnessCertificate {
    pub fn holds(&self) -> bool {
        self.pairwise_distinct && self.same_fingerprint && self.all_nonsymplectic
    }
}

/// Builds `base` once per twist parameter and compares the results.
/// `base.r` is ignored.
pub fn distinctness_certificate(
    base: &ConstructionRecipe,
    r_values: &[u64],
) -> Result<DistinctnessCertificate> {
    distinctness_certificate_with(base, r_values, Execution::default())
}

pub fn distinctness_certificate_with(
    base: &ConstructionRecipe,
    r_values: &[u64],
    exec: Execution,
) -> Result<DistinctnessCertificate> {
    if let Some(&r) = r_values.iter().find(|&&r| r < 2) {
        return Err(if r == 1 {
            Error::FiberedTwistKnot(1)
        } else {
            Error::Domain("twist parameter r = 0".into())
        });
    }
    if r_values.iter().collect::<BTreeSet<_>>().len() != r_values.len() {
        return Err(Error::Domain(
            "twist parameters must be pairwise distinct".into(),
        ));
    }
    let recipes: Vec<ConstructionRecipe> = r_values
        .iter()
        .map(|&r| ConstructionRecipe {
            r: vec![r],
            ..base.clone()
        })
        .collect();
    let results = exec
        .map(&recipes, build)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<CertificateEntry> = results
        .iter()
        .map(|res| CertificateEntry {
            r: res.recipe.r[0],
            top_value: res.top_value_abs.to_string(),
            e: res.state.euler(),
            sigma: res.state.signature(),
            b2plus: res.state.b2_plus(),
            simply_connected: res.state.simply_connected(),
            verdict: res.verdict,
        })
        .collect();
    let values: BTreeSet<&BigInt> = results.iter().map(|r| &r.top_value_abs).collect();
    let fingerprints: BTreeSet<(i64, i64, i64, bool)> = entries
        .iter()
        .map(|e| (e.e, e.sigma, e.b2plus, e.simply_connected))
        .collect();
    Ok(DistinctnessCertificate {
        n: base.n,
        s: base.s,
        fishtail: base.fishtail,
        extra_blowups: base.extra_blowups,
        pairwise_distinct: values.len() == entries.len(),
        same_fingerprint: fingerprints.len() <= 1,
        all_nonsymplectic: entries.iter().all(|e| e.verdict == Verdict::Nonsymplectic),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(t: i64, ones: usize) -> HomologyClass {
        HomologyClass {
            t,
            e: vec![1; ones],
            s: 0,
        }
    }

    #[test]
    fn recipe_arithmetic() {
        let r = ConstructionRecipe::uniform(3, 5, 2, true, 0);
        assert_eq!((r.chain_p(), r.blowups(), r.expected_c1sq()), (23, 6, 16));
        let r = ConstructionRecipe::uniform(7, 13, 2, false, 0);
        assert_eq!((r.chain_p(), r.expected_c1sq()), (57, 43));
        assert!(r.validate().is_ok());
        assert!(ConstructionRecipe::uniform(7, 13, 2, true, 0)
            .validate()
            .is_err());
        assert!(ConstructionRecipe::uniform(3, 6, 2, false, 0)
            .validate()
            .is_err());
        assert!(matches!(
            ConstructionRecipe::uniform(3, 5, 1, true, 0).validate(),
            Err(Error::FiberedTwistKnot(1))
        ));
        let bad = ConstructionRecipe {
            r: vec![2, 3],
            ..ConstructionRecipe::uniform(3, 5, 2, true, 0)
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn recipe_json() {
        let text = r#"{"n":3,"s":5,"r":[2],"fishtail":true,"extra_blowups":0}"#;
        let r = ConstructionRecipe::from_json(text).unwrap();
        assert_eq!(r, ConstructionRecipe::uniform(3, 5, 2, true, 0));
        assert_eq!(serde_json::to_string(&r).unwrap(), text);
        let scalar = ConstructionRecipe::from_json(
            r#"{"n":3,"s":5,"r":2,"fishtail":true,"extra_blowups":0}"#,
        );
        assert_eq!(scalar.unwrap(), r);
    }

    #[test]
    fn build_n3() {
        let res = build(&ConstructionRecipe::uniform(3, 5, 2, true, 0)).unwrap();
        assert_eq!((res.chi_h, res.c1sq), (3, 16));
        assert_eq!((res.state.euler(), res.state.signature()), (20, -8));
        assert_eq!(res.top_value_abs, BigInt::from(32));
        assert_eq!(res.verdict, Verdict::Nonsymplectic);
        assert!(res.certificate.all_pass(), "{:?}", res.certificate);
        let survivors = res.state.basic_classes().unwrap();
        assert_eq!(
            survivors,
            vec![
                (
                    class(-11, 0).plus(&class(0, 6).scaled(-1)),
                    BigInt::from(-32)
                ),
                (class(11, 6), BigInt::from(32))
            ]
        );
        assert!(res.state.simply_connected());
    }

    #[test]
    fn build_with_mixed_twists() {
        let recipe = ConstructionRecipe {
            r: vec![2, 3, 4, 5, 6],
            ..ConstructionRecipe::uniform(3, 5, 2, true, 0)
        };
        let res = build(&recipe).unwrap();
        assert_eq!(res.top_value_abs, BigInt::from(720));
        assert!(res.certificate.all_pass());
    }

    #[test]
    fn build_with_extra_blowups() {
        let res = build(&ConstructionRecipe::uniform(4, 7, 3, true, 2)).unwrap();
        assert_eq!(res.c1sq, 21);
        assert_eq!(res.state.sw().term_count(), 8);
        assert!(res.certificate.all_pass());
    }

    #[test]
    fn optimum_small_cases() {
        let opt = optimize(3).unwrap();
        assert_eq!((opt.recipe.s, opt.recipe.fishtail, opt.c1sq), (5, true, 16));
        let opt = optimize(4).unwrap();
        assert_eq!((opt.recipe.s, opt.recipe.fishtail, opt.c1sq), (7, true, 23));
        assert!(optimize(2).is_err());
    }

    #[test]
    fn geography_n3() {
        let points = geography(3, 0).unwrap();
        assert_eq!(
            points.iter().map(|p| p.c1sq).collect::<Vec<_>>(),
            (0..=16).collect::<Vec<_>>()
        );
        assert!(points.iter().all(|p| p.verified && p.sw_nonzero));
        assert!(geography(3, 17).is_err());
    }

    #[test]
    fn certificate_rejects_fibered_knot() {
        let base = ConstructionRecipe::uniform(3, 5, 2, true, 0);
        assert!(matches!(
            distinctness_certificate(&base, &[2, 1]),
            Err(Error::FiberedTwistKnot(1))
        ));
        assert!(distinctness_certificate(&base, &[2, 2]).is_err());
    }
}
