//! Linear plumbings `C_{p,q}` and their continued fractions.
//!
//! `p^2 / (pq - 1) = r_k - 1/(r_{k-1} - 1/(... - 1/r_1))` with every `r_i >= 2`.
//! Coefficients are stored `[r_k, ..., r_1]`, end sphere first, which is the
//! left-to-right order of the plumbing diagram; `u_1` is the last entry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;

/// The lens space `L(order, twist)` bounding a plumbing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LensSpace {
    pub order: u64,
    pub twist: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub p: u64,
    pub q: u64,
    pub coefficients: Vec<u64>,
    pub boundary: LensSpace,
}

impl Chain {
    /// Chain length `k`.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Assembles a chain from explicit coefficients without checking them;
    /// `verify_chain` reports what holds.
    pub fn from_parts(p: u64, q: u64, coefficients: Vec<u64>) -> Self {
        Chain {
            p,
            q,
            coefficients,
            boundary: lens_space(p, q),
        }
    }

    /// `p^2 / (pq - 1)`.
    pub fn target_fraction(&self) -> BigRational {
        let p = BigInt::from(self.p);
        let q = BigInt::from(self.q);
        BigRational::new(&p * &p, &p * &q - BigInt::one())
    }
}

fn lens_space(p: u64, q: u64) -> LensSpace {
    LensSpace {
        order: p * p,
        twist: 1 - (p * q) as i64,
    }
}

/// Linear continued fraction of `num/den` with all terms `>= 2`, by the
/// ceiling algorithm `r = ceil(num/den)`, `num/den -> den/(r*den - num)`.
pub fn linear_cfrac(num: u64, den: u64) -> Result<Vec<u64>> {
    if den == 0 || num <= den {
        return Err(Error::Domain(format!(
            "need num > den >= 1, got {num}/{den}"
        )));
    }
    if num.gcd(&den) != 1 {
        return Err(Error::Domain(format!("{num}/{den} is not in lowest terms")));
    }
    let (mut num, mut den) = (num, den);
    let mut out = Vec::new();
    while den != 0 {
        let r = num.div_ceil(den);
        out.push(r);
        (num, den) = (den, r * den - num);
    }
    Ok(out)
}

/// Evaluates `[r_k, ..., r_1]` back to a fraction; `None` on a zero
/// denominator along the way.
pub fn recompose(coefficients: &[u64]) -> Option<BigRational> {
    let mut iter = coefficients.iter().rev();
    let mut value = BigRational::from_integer(BigInt::from(*iter.next()?));
    for &r in iter {
        if value.is_zero() {
            return None;
        }
        value = BigRational::from_integer(BigInt::from(r)) - value.recip();
    }
    Some(value)
}

/// The plumbing `C_{p,q}` for coprime `p > q >= 1`.
pub fn chain_for(p: u64, q: u64) -> Result<Chain> {
    if q < 1 || p <= q {
        return Err(Error::Domain(format!(
            "need p > q >= 1, got p = {p}, q = {q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Domain(format!(
            "p = {p} and q = {q} are not coprime"
        )));
    }
    let coefficients = linear_cfrac(p * p, p * q - 1)?;
    Ok(Chain::from_parts(p, q, coefficients))
}

/// Tridiagonal intersection form of a linear plumbing: `-r_i` on the
/// diagonal, `1` between neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionMatrix {
    diagonal: Vec<i64>,
}

impl IntersectionMatrix {
    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[i64] {
        &self.diagonal
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        match i.abs_diff(j) {
            0 => self.diagonal[i],
            1 => 1,
            _ => 0,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let k = self.size();
        (0..k)
            .map(|i| (0..k).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Leading principal minors `D_1, ..., D_k` from the three-term
    /// recurrence `D_i = d_i D_{i-1} - D_{i-2}`.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.size());
        let (mut prev2, mut prev1) = (BigInt::zero(), BigInt::one());
        for &d in &self.diagonal {
            let next = BigInt::from(d) * &prev1 - &prev2;
            out.push(next.clone());
            (prev2, prev1) = (prev1, next);
        }
        out
    }

    pub fn determinant(&self) -> BigInt {
        self.leading_minors().pop().unwrap_or_else(BigInt::one)
    }

    /// Sylvester: negative definite iff `(-1)^i D_i > 0` for every `i`.
    pub fn is_negative_definite(&self) -> bool {
        self.leading_minors().iter().enumerate().all(|(i, m)| {
            if i % 2 == 0 {
                m.is_negative()
            } else {
                m.is_positive()
            }
        })
    }
}

pub fn intersection_matrix(c: &Chain) -> IntersectionMatrix {
    IntersectionMatrix {
        diagonal: c.coefficients.iter().map(|&r| -(r as i64)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub recomposition: bool,
    pub coefficients_at_least_two: bool,
    pub negative_definite: bool,
    pub determinant_matches: bool,
    pub determinant: String,
}

impl ChainReport {
    pub fn all_pass(&self) -> bool {
        self.recomposition
            && self.coefficients_at_least_two
            && self.negative_definite
            && self.determinant_matches
    }
}

/// Checks recomposition to `p^2/(pq-1)`, negative definiteness and
/// `|det| = p^2`.
pub fn verify_chain(c: &Chain) -> ChainReport {
    let form = intersection_matrix(c);
    let det = form.determinant();
    let expected = BigInt::from(c.p) * BigInt::from(c.p);
    let ge_two = c.coefficients.iter().all(|&r| r >= 2);
    ChainReport {
        recomposition: ge_two
            && c.p * c.q > 1
            && recompose(&c.coefficients).is_some_and(|v| v == c.target_fraction()),
        coefficients_at_least_two: ge_two,
        negative_definite: !c.is_empty() && form.is_negative_definite(),
        determinant_matches: det.abs() == expected,
        determinant: det.to_string(),
    }
}

/// Verifies `C_{p,q}` for every coprime `1 <= q < p <= max_p`, in `(p, q)`
/// order.
pub fn sweep_chains(max_p: u64, exec: Execution) -> Vec<(u64, u64, ChainReport)> {
    let pairs: Vec<(u64, u64)> = (2..=max_p)
        .flat_map(|p| (1..p).filter(move |q| p.gcd(q) == 1).map(move |q| (p, q)))
        .collect();
    exec.map(&pairs, |&(p, q)| {
        let chain = chain_for(p, q).expect("coprime p > q >= 1");
        (p, q, verify_chain(&chain))
    })
}
