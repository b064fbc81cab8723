//! Products of Laurent polynomials in pairwise disjoint generator sets.
//!
//! Seiberg-Witten functions of blown-up manifolds factor as a polynomial in
//! `T` times one `(E_j + E_j^-1)` factor per blowup; expanding that product
//! doubles the term count with every blowup. Keeping the factors apart makes
//! symmetry checks, top-degree queries and the rational blowdown filter run
//! in time linear in the number of factors for the configurations that occur.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::laurent::{Generator, LaurentPoly};

/// A linear condition on classes: `sum_g beta_g * weights[g]` must equal
/// `epsilon * target`, with one sign `epsilon` shared by all conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingConstraint {
    pub weights: BTreeMap<String, i64>,
    pub target: i64,
}

/// Product of nonzero factors whose used generators are pairwise disjoint.
/// The zero function is a single zero factor.
#[derive(Clone, Debug, Default)]
pub struct FactoredLaurent {
    factors: Vec<LaurentPoly>,
}

impl FactoredLaurent {
    pub fn one() -> Self {
        FactoredLaurent::default()
    }

    pub fn zero() -> Self {
        FactoredLaurent {
            factors: vec![LaurentPoly::zero()],
        }
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        FactoredLaurent::one().mul_poly(p)
    }

    pub fn factors(&self) -> &[LaurentPoly] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(LaurentPoly::is_zero)
    }

    /// Multiplies by `p`, merging every factor that shares a used generator
    /// with it.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        if self.is_zero() || p.is_zero() {
            return FactoredLaurent::zero();
        }
        let used: BTreeSet<&str> = p.used_generators();
        let mut merged = p.trimmed();
        let mut rest = Vec::with_capacity(self.factors.len() + 1);
        for f in &self.factors {
            if f.used_generators().iter().any(|g| used.contains(g)) {
                merged = &merged * f;
            } else {
                rest.push(f.clone());
            }
        }
        if !merged.is_one() {
            rest.push(merged.trimmed());
        }
        FactoredLaurent { factors: rest }
    }

    pub fn mul(&self, other: &FactoredLaurent) -> Self {
        other
            .factors
            .iter()
            .fold(self.clone(), |acc, f| acc.mul_poly(f))
    }

    /// Number of terms of the expanded product (saturating).
    pub fn term_count(&self) -> u128 {
        if self.is_zero() {
            return 0;
        }
        self.factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128))
    }

    pub fn expand(&self) -> LaurentPoly {
        self.factors
            .iter()
            .fold(LaurentPoly::one(), |acc, f| &acc * f)
    }

    /// Expands unless the result would exceed `limit` terms.
    pub fn expand_within(&self, limit: u128) -> Result<LaurentPoly> {
        let n = self.term_count();
        if n > limit {
            return Err(Error::TooLarge(n));
        }
        Ok(self.expand())
    }

    /// Symmetry check on the product, decided factor by factor.
    ///
    /// With disjoint variables, `f(-x) g(-y) = c f(x) g(y)` forces each factor
    /// to be symmetric up to a sign; the product sign is the product of signs.
    pub fn check_symmetry(&self, sign_exponent: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        let mut odd = false;
        for f in &self.factors {
            if f.check_symmetry(0) {
                continue;
            }
            if f.check_symmetry(1) {
                odd = !odd;
            } else {
                return false;
            }
        }
        odd == (sign_exponent.rem_euclid(2) == 1)
    }

    pub fn max_degree(&self, name: &str) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.factors.iter().filter_map(|f| f.max_degree(name)).sum())
    }

    /// The terms of maximal `name`-degree, still in factored form.
    pub fn top_part(&self, name: &str) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let factors = self
            .factors
            .iter()
            .map(|f| match f.generator_index(name) {
                Some(i) => {
                    let top = f.max_degree(name).unwrap_or(0);
                    LaurentPoly::from_terms(
                        f.generators().to_vec(),
                        f.terms()
                            .filter(|(e, _)| e[i] == top)
                            .map(|(e, c)| (e.clone(), c.clone()))
                            .collect::<Vec<_>>(),
                    )
                }
                None => f.clone(),
            })
            .collect();
        FactoredLaurent { factors }
    }

    /// True iff some term of the product has coefficient `+-1`.
    pub fn has_unit_coefficient(&self) -> bool {
        !self.is_zero()
            && self
                .factors
                .iter()
                .all(|f| f.terms().any(|(_, c)| c.abs().is_one()))
    }

    /// Keeps exactly the terms whose class `beta` satisfies every constraint
    /// with a common sign.
    ///
    /// Factors none of whose generators carry weight pass through untouched;
    /// the rest are searched term by term with interval pruning on each
    /// constraint.
    pub fn retain_pairings(&self, constraints: &[PairingConstraint]) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let weighted = |f: &LaurentPoly| {
            f.used_generators().iter().any(|g| {
                constraints
                    .iter()
                    .any(|c| c.weights.get(*g).is_some_and(|&w| w != 0))
            })
        };
        let (involved, passive): (Vec<&LaurentPoly>, Vec<&LaurentPoly>) =
            self.factors.iter().partition(|f| weighted(f));

        let involved_gens: BTreeSet<&str> =
            involved.iter().flat_map(|f| f.used_generators()).collect();
        let (active, idle): (Vec<&PairingConstraint>, Vec<&PairingConstraint>) =
            constraints.iter().partition(|c| {
                c.weights
                    .iter()
                    .any(|(g, &w)| w != 0 && involved_gens.contains(g.as_str()))
            });
        if idle.iter().any(|c| c.target != 0) {
            return FactoredLaurent::zero();
        }

        let search = FilterSearch::new(&involved, &active);
        let mut survivors: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        let all_zero = active.iter().all(|c| c.target == 0);
        for sign in [1i64, -1] {
            if sign == -1 && all_zero {
                break;
            }
            let targets: Vec<i64> = active.iter().map(|c| sign * c.target).collect();
            search.run(&targets, &mut survivors);
        }

        let kept = LaurentPoly::from_terms(search.generators.clone(), survivors);
        let mut out = FactoredLaurent::from_poly(&kept);
        if kept.is_zero() {
            return out;
        }
        for f in passive {
            out = out.mul_poly(f);
        }
        out
    }
}

impl From<LaurentPoly> for FactoredLaurent {
    fn from(p: LaurentPoly) -> Self {
        FactoredLaurent::from_poly(&p)
    }
}

impl PartialEq for FactoredLaurent {
    fn eq(&self, other: &Self) -> bool {
        self.expand() == other.expand()
    }
}

struct FactorTerms {
    offset: usize,
    terms: Vec<(Vec<i64>, BigInt, Vec<i64>)>,
}

struct FilterSearch {
    generators: Vec<Generator>,
    factors: Vec<FactorTerms>,
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
}

impl FilterSearch {
    fn new(involved: &[&LaurentPoly], active: &[&PairingConstraint]) -> Self {
        let mut generators = Vec::new();
        let mut factors = Vec::with_capacity(involved.len());
        for f in involved {
            let offset = generators.len();
            generators.extend(f.generators().iter().cloned());
            let weights: Vec<Vec<i64>> = f
                .generators()
                .iter()
                .map(|g| {
                    active
                        .iter()
                        .map(|c| c.weights.get(g.name()).copied().unwrap_or(0))
                        .collect()
                })
                .collect();
            let terms = f
                .terms()
                .map(|(e, c)| {
                    let mut phi = vec![0i64; active.len()];
                    for (slot, &x) in e.iter().enumerate() {
                        for (k, w) in weights[slot].iter().enumerate() {
                            phi[k] += x * w;
                        }
                    }
                    (e.clone(), c.clone(), phi)
                })
                .collect();
            factors.push(FactorTerms { offset, terms });
        }
        let m = active.len();
        let mut suffix_min = vec![vec![0i64; m]; factors.len() + 1];
        let mut suffix_max = vec![vec![0i64; m]; factors.len() + 1];
        for i in (0..factors.len()).rev() {
            for k in 0..m {
                let vals = factors[i].terms.iter().map(|t| t.2[k]);
                let lo = vals.clone().min().unwrap_or(0);
                let hi = vals.max().unwrap_or(0);
                suffix_min[i][k] = suffix_min[i + 1][k] + lo;
                suffix_max[i][k] = suffix_max[i + 1][k] + hi;
            }
        }
        FilterSearch {
            generators,
            factors,
            suffix_min,
            suffix_max,
        }
    }

    fn run(&self, targets: &[i64], out: &mut BTreeMap<Vec<i64>, BigInt>) {
        let mut exp = vec![0i64; self.generators.len()];
        let acc = vec![0i64; targets.len()];
        self.descend(0, &acc, BigInt::one(), &mut exp, targets, out);
    }

    fn descend(
        &self,
        depth: usize,
        acc: &[i64],
        coeff: BigInt,
        exp: &mut Vec<i64>,
        targets: &[i64],
        out: &mut BTreeMap<Vec<i64>, BigInt>,
    ) {
        let reachable = (0..targets.len()).all(|k| {
            let need = targets[k] - acc[k];
            self.suffix_min[depth][k] <= need && need <= self.suffix_max[depth][k]
        });
        if !reachable {
            return;
        }
        if depth == self.factors.len() {
            out.insert(exp.clone(), coeff);
            return;
        }
        let factor = &self.factors[depth];
        for (e, c, phi) in &factor.terms {
            exp[factor.offset..factor.offset + e.len()].copy_from_slice(e);
            let next: Vec<i64> = acc.iter().zip(phi).map(|(a, b)| a + b).collect();
            self.descend(depth + 1, &next, &coeff * c, exp, targets, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blowup_factor(name: &str) -> LaurentPoly {
        &LaurentPoly::variable(name) + &LaurentPoly::monomial(&[(name, -1)], 1)
    }

    fn t_minus_tinv() -> LaurentPoly {
        LaurentPoly::univariate("T", [(1, 1), (-1, -1)])
    }

    fn sample() -> FactoredLaurent {
        FactoredLaurent::from_poly(&t_minus_tinv())
            .mul_poly(&blowup_factor("E1"))
            .mul_poly(&blowup_factor("E2"))
    }

    #[test]
    fn factors_stay_disjoint() {
        let f = sample();
        assert_eq!(f.factors().len(), 3);
        let g = f.mul_poly(&LaurentPoly::univariate("T", [(2, 2), (0, -3), (-2, 2)]));
        assert_eq!(g.factors().len(), 3);
        let mixed = LaurentPoly::monomial(&[("E1", 1), ("E2", 1)], 1);
        assert_eq!(g.mul_poly(&mixed).factors().len(), 2);
    }

    #[test]
    fn expansion_and_counts() {
        let f = sample();
        assert_eq!(f.term_count(), 8);
        let expanded = f.expand();
        assert_eq!(expanded.len(), 8);
        assert_eq!(
            expanded,
            &(&t_minus_tinv() * &blowup_factor("E1")) * &blowup_factor("E2")
        );
        assert!(matches!(f.expand_within(4), Err(Error::TooLarge(8))));
    }

    #[test]
    fn symmetry_factorwise_agrees_with_expanded() {
        let f = sample();
        for sign in 0..4 {
            assert_eq!(f.check_symmetry(sign), f.expand().check_symmetry(sign));
        }
        let lopsided = f.mul_poly(&LaurentPoly::univariate("T", [(1, 1)]));
        assert!(!lopsided.check_symmetry(0) && !lopsided.check_symmetry(1));
        assert!(!lopsided.expand().check_symmetry(0));
    }

    #[test]
    fn top_part_and_units() {
        let f = sample().mul_poly(&LaurentPoly::univariate("T", [(2, 3), (0, -5), (-2, 3)]));
        assert_eq!(f.max_degree("T"), Some(3));
        let top = f.top_part("T");
        assert_eq!(top.term_count(), 4);
        assert!(!top.has_unit_coefficient());
        assert!(sample().top_part("T").has_unit_coefficient());
    }

    #[test]
    fn filter_matches_brute_force() {
        let f = sample();
        let constraints = vec![PairingConstraint {
            weights: BTreeMap::from([("T".to_string(), 1), ("E1".to_string(), 2)]),
            target: 3,
        }];
        let kept = f.retain_pairings(&constraints).expand();
        let brute = LaurentPoly::from_terms(
            f.expand().generators().to_vec(),
            f.expand()
                .terms()
                .filter(|(e, _)| {
                    let gens = f.expand();
                    let t = e[gens.generator_index("T").unwrap()];
                    let e1 = e[gens.generator_index("E1").unwrap()];
                    (t + 2 * e1).abs() == 3
                })
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect::<Vec<_>>(),
        );
        assert_eq!(kept, brute);
        assert_eq!(kept.len(), 4);
    }

    #[test]
    fn filter_with_unsatisfiable_idle_constraint_is_zero() {
        let constraints = vec![PairingConstraint {
            weights: BTreeMap::from([("S".to_string(), 1)]),
            target: 2,
        }];
        assert!(sample().retain_pairings(&constraints).is_zero());
        assert!(FactoredLaurent::zero()
            .retain_pairings(&constraints)
            .is_zero());
    }
}
