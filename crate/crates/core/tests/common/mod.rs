//! Independent oracles: schoolbook arithmetic written without the library's
//! algorithms.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `C(n, k)` from Pascal's triangle.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row[k].clone()
}

/// Coefficients of `(t - t^-1)^k` keyed by exponent, from the binomial
/// theorem: `sum_j (-1)^j C(k, j) t^{k - 2j}`.
pub fn t_minus_tinv_power(k: usize) -> Vec<(i64, BigInt)> {
    (0..=k)
        .map(|j| {
            let sign = if j % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            (k as i64 - 2 * j as i64, sign * binomial(k, j))
        })
        .collect()
}

/// Bareiss fraction-free elimination; returns the determinant and every
/// leading principal minor of a square matrix (no pivoting, so a zero pivot
/// yields `None`).
pub fn bareiss_minors(matrix: &[Vec<i64>]) -> Option<Vec<BigInt>> {
    let n = matrix.len();
    let mut minors = Vec::with_capacity(n);
    for size in 1..=n {
        let mut a: Vec<Vec<BigInt>> = matrix[..size]
            .iter()
            .map(|row| row[..size].iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut prev = BigInt::one();
        for k in 0..size - 1 {
            if a[k][k].is_zero() {
                return None;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        minors.push(a[size - 1][size - 1].clone());
    }
    Some(minors)
}

/// `[r_k, ..., r_1]` evaluated back to `(num, den)` with plain integers,
/// innermost term last.
pub fn recompose_fraction(coefficients: &[u64]) -> (i128, i128) {
    let mut iter = coefficients.iter().rev();
    let (mut num, mut den) = (*iter.next().expect("non-empty") as i128, 1i128);
    for &r in iter {
        // r - den/num = (r num - den) / num
        (num, den) = (r as i128 * num - den, num);
    }
    let g = gcd(num.abs(), den.abs());
    (num / g, den / g)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Theorem-table maximum of `c_1^2` at `chi_h = n`.
pub fn paper_c1sq_max(n: i64) -> i64 {
    match n {
        3 => 16,
        4 => 23,
        5 => 30,
        6 => 36,
        _ => {
            let k = n / 4;
            match n % 4 {
                0 => 25 * k - 2,
                1 => 25 * k + 5,
                2 => 25 * k + 11,
                _ => 25 * k + 18,
            }
        }
    }
}

/// Whether the paper's case for this residue smooths a fishtail.
pub fn paper_uses_fishtail(n: i64) -> bool {
    matches!(n % 4, 0 | 1)
}

pub fn pow(r: u64, s: u32) -> BigInt {
    (0..s).fold(BigInt::one(), |acc, _| acc * BigInt::from(r))
}

pub mod sequences;
