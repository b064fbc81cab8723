//! Multivariable Laurent polynomials with arbitrary-precision integer
//! coefficients.
//!
//! A polynomial owns an ordered list of named generators and stores each
//! monomial as a dense exponent vector over that list. Binary operations
//! unify the two generator lists by name (the left operand's order first,
//! then any new names from the right operand), treating missing exponents
//! as zero.
//!
//! Seiberg-Witten functions live here with `T` standing for the fiber class
//! and `E1`, `E2`, ... for exceptional classes; the monomial `T^k` is the
//! formal exponential of `kT`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A named formal generator such as `T` or `E3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Generator(String);

impl Generator {
    pub fn new(name: impl Into<String>) -> Self {
        Generator(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Generator {
    fn from(s: &str) -> Self {
        Generator::new(s)
    }
}

/// Exact Laurent polynomial over `Z` in finitely many named generators.
///
/// No stored coefficient is zero and every exponent vector has one slot per
/// generator. Equality ignores generators that no term uses.
#[derive(Clone, Debug, Default)]
pub struct LaurentPoly {
    generators: Vec<Generator>,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        LaurentPoly {
            generators: Vec::new(),
            terms,
        }
    }

    /// The single generator `name` to the first power.
    pub fn variable(name: &str) -> Self {
        LaurentPoly::monomial(&[(name, 1)], BigInt::one())
    }

    /// `coeff * prod name^exp`. Repeated names have their exponents summed.
    pub fn monomial(factors: &[(&str, i64)], coeff: impl Into<BigInt>) -> Self {
        let mut generators: Vec<Generator> = Vec::new();
        let mut exps: Vec<i64> = Vec::new();
        for &(name, e) in factors {
            match generators.iter().position(|g| g.name() == name) {
                Some(i) => exps[i] += e,
                None => {
                    generators.push(Generator::new(name));
                    exps.push(e);
                }
            }
        }
        LaurentPoly::from_terms(generators, [(exps, coeff.into())])
    }

    /// Univariate polynomial in `name` from `(exponent, coefficient)` pairs.
    pub fn univariate<C: Into<BigInt>>(
        name: &str,
        terms: impl IntoIterator<Item = (i64, C)>,
    ) -> Self {
        LaurentPoly::from_terms(
            vec![Generator::new(name)],
            terms.into_iter().map(|(e, c)| (vec![e], c.into())),
        )
    }

    /// Builds a polynomial from raw terms, summing duplicates and dropping
    /// zeros.
    ///
    /// Panics if an exponent vector does not match the generator count or a
    /// generator name repeats.
    pub fn from_terms(
        generators: Vec<Generator>,
        terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>,
    ) -> Self {
        let names: BTreeSet<&str> = generators.iter().map(Generator::name).collect();
        assert_eq!(names.len(), generators.len(), "duplicate generator name");
        let mut map: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (exp, c) in terms {
            assert_eq!(
                exp.len(),
                generators.len(),
                "exponent vector length mismatch"
            );
            if c.is_zero() {
                continue;
            }
            accumulate(&mut map, exp, c);
        }
        LaurentPoly {
            generators,
            terms: map,
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name() == name)
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i64>, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// Generators with a nonzero exponent in at least one term.
    pub fn used_generators(&self) -> BTreeSet<&str> {
        let mut used = BTreeSet::new();
        for exp in self.terms.keys() {
            for (i, &e) in exp.iter().enumerate() {
                if e != 0 {
                    used.insert(self.generators[i].name());
                }
            }
        }
        used
    }

    /// Coefficient of the monomial given as `(name, exponent)` pairs; names
    /// not listed have exponent zero.
    pub fn coeff(&self, monomial: &[(&str, i64)]) -> BigInt {
        let mut exp = vec![0i64; self.generators.len()];
        for &(name, e) in monomial {
            match self.generator_index(name) {
                Some(i) => exp[i] += e,
                None if e == 0 => {}
                None => return BigInt::zero(),
            }
        }
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Exactly the nonzero terms, ascending lexicographically by exponent.
    pub fn support(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }

    /// Largest exponent of `name` over all terms (0 for terms not using it).
    pub fn max_degree(&self, name: &str) -> Option<i64> {
        let idx = self.generator_index(name);
        self.terms.keys().map(|e| idx.map_or(0, |i| e[i])).max()
    }

    pub fn min_degree(&self, name: &str) -> Option<i64> {
        let idx = self.generator_index(name);
        self.terms.keys().map(|e| idx.map_or(0, |i| e[i])).min()
    }

    /// Value with every generator set to 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return LaurentPoly {
                generators: self.generators.clone(),
                terms: BTreeMap::new(),
            };
        }
        LaurentPoly {
            generators: self.generators.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// `p^k` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Negates every exponent vector (`beta -> -beta`).
    pub fn substitute_negate(&self) -> Self {
        LaurentPoly {
            generators: self.generators.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    /// True iff `p(-beta) = (-1)^sign_exponent * p(beta)`.
    pub fn check_symmetry(&self, sign_exponent: i64) -> bool {
        let negated = self.substitute_negate();
        if sign_exponent.rem_euclid(2) == 0 {
            negated == *self
        } else {
            negated == -self
        }
    }

    /// Substitutes `from -> to^power`. When `to` already occurs, exponents
    /// combine; `from` is dropped from the generator list.
    pub fn substitute_power(&self, from: &str, to: &str, power: i64) -> Self {
        let Some(src) = self.generator_index(from) else {
            return self.clone();
        };
        let mut generators: Vec<Generator> = self
            .generators
            .iter()
            .filter(|g| g.name() != from)
            .cloned()
            .collect();
        let dst = match generators.iter().position(|g| g.name() == to) {
            Some(i) => i,
            None => {
                generators.push(Generator::new(to));
                generators.len() - 1
            }
        };
        let width = generators.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out: Vec<i64> = e
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != src)
                .map(|(_, &x)| x)
                .collect();
            out.resize(width, 0);
            out[dst] += power * e[src];
            (out, c.clone())
        });
        LaurentPoly::from_terms(generators, terms.collect::<Vec<_>>())
    }

    /// Drops generators that no term uses.
    pub fn trimmed(&self) -> Self {
        let used = self.used_generators();
        let keep: Vec<Generator> = self
            .generators
            .iter()
            .filter(|g| used.contains(g.name()))
            .cloned()
            .collect();
        self.reindexed(&keep)
    }

    /// Same polynomial re-expressed over `generators`, which must contain
    /// every used generator of `self`.
    pub fn reindexed(&self, generators: &[Generator]) -> Self {
        let slots: Vec<Option<usize>> = self
            .generators
            .iter()
            .map(|g| generators.iter().position(|h| h == g))
            .collect();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut out = vec![0i64; generators.len()];
            for (i, &x) in e.iter().enumerate() {
                match slots[i] {
                    Some(j) => out[j] = x,
                    None => {
                        assert_eq!(x, 0, "generator {} missing from target", self.generators[i])
                    }
                }
            }
            (out, c.clone())
        });
        LaurentPoly::from_terms(generators.to_vec(), terms.collect::<Vec<_>>())
    }

    fn unified_generators(&self, other: &LaurentPoly) -> Vec<Generator> {
        let mut gens = self.generators.clone();
        for g in &other.generators {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        gens
    }

    fn canonical_key(&self) -> BTreeMap<Vec<(&str, i64)>, &BigInt> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut mono: Vec<(&str, i64)> = e
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| x != 0)
                    .map(|(i, &x)| (self.generators[i].name(), x))
                    .collect();
                mono.sort_unstable();
                (mono, c)
            })
            .collect()
    }

    fn monomial_text(&self, exp: &[i64]) -> String {
        exp.iter()
            .enumerate()
            .filter(|&(_, &x)| x != 0)
            .map(|(i, &x)| format!("{}^{}", self.generators[i], x))
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn accumulate(map: &mut BTreeMap<Vec<i64>, BigInt>, exp: Vec<i64>, c: BigInt) {
    use std::collections::btree_map::Entry;
    match map.entry(exp) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len() && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for LaurentPoly {}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let gens = self.unified_generators(rhs);
        let mut terms = self.reindexed(&gens).terms;
        for (e, c) in rhs.reindexed(&gens).terms {
            accumulate(&mut terms, e, c);
        }
        LaurentPoly {
            generators: gens,
            terms,
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            generators: self.generators.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let gens = self.unified_generators(rhs);
        let lhs = self.reindexed(&gens);
        let rhs = rhs.reindexed(&gens);
        let mut terms = BTreeMap::new();
        for (e1, c1) in &lhs.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                accumulate(&mut terms, e, c1 * c2);
            }
        }
        LaurentPoly {
            generators: gens,
            terms,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Canonical text form: terms in descending lexicographic exponent order,
/// monomials as `name^k` joined by `*`, e.g. `T^3 - 3*T^1 + 3*T^-1 - T^-3`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (exp, c)) in self.terms.iter().rev().enumerate() {
            let mono = self.monomial_text(exp);
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.abs();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    generators: Vec<Generator>,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coeff: String,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            generators: self.generators.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(deserializer)?;
        LaurentPoly::try_from_json_parts(raw).map_err(D::Error::custom)
    }
}

impl LaurentPoly {
    fn try_from_json_parts(raw: PolyJson) -> Result<Self> {
        let names: BTreeSet<&Generator> = raw.generators.iter().collect();
        if names.len() != raw.generators.len() {
            return Err(Error::Domain("duplicate generator name".into()));
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            if t.exp.len() != raw.generators.len() {
                return Err(Error::Domain(format!(
                    "exponent vector of length {} over {} generators",
                    t.exp.len(),
                    raw.generators.len()
                )));
            }
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| Error::Domain(format!("bad coefficient {:?}", t.coeff)))?;
            terms.push((t.exp, c));
        }
        Ok(LaurentPoly::from_terms(raw.generators, terms))
    }
}
