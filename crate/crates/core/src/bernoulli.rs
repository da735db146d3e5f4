//! Exact Bernoulli numbers `B_k` (generating function `T/(e^T - 1)`, so
//! `B_1 = -1/2`), power sums `S_k(n) = 0^k + 1^k + ... + (n-1)^k`, and the
//! von Staudt–Clausen theorem.

mod table;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, binomial, pow_mod};
use crate::error::{precondition, Result};

pub use table::BernoulliTable;

/// Above this bound [`power_sum`] switches from direct summation to the
/// closed form in Bernoulli numbers.
pub const DIRECT_SUMMATION_LIMIT: u64 = 1_000_000;

/// `B_k` in lowest terms, served from the process-wide table.
pub fn bernoulli_number(k: u64) -> BigRational {
    BernoulliTable::global().get(k)
}

/// `S_k(n)` together with its arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSumValue {
    #[serde(with = "crate::wire::dec")]
    pub k: u64,
    #[serde(with = "crate::wire::dec")]
    pub n: u64,
    #[serde(with = "crate::wire::dec")]
    pub value: BigInt,
}

pub fn power_sum(k: u64, n: u64) -> Result<PowerSumValue> {
    precondition!(n >= 1, "power sum needs n >= 1, got {n}");
    let value = if n > DIRECT_SUMMATION_LIMIT {
        power_sum_closed_form(k, n)
    } else {
        power_sum_direct(k, n)
    };
    Ok(PowerSumValue { k, n, value })
}

/// `Σ_{j<n} j^k` term by term, with `0^0 = 1`.
pub fn power_sum_direct(k: u64, n: u64) -> BigInt {
    let exp = u32::try_from(k).expect("exponent fits in u32");
    let mut acc = BigUint::zero();
    if k == 0 {
        return BigInt::from(n);
    }
    for j in 1..n {
        acc += BigUint::from(j).pow(exp);
    }
    BigInt::from(acc)
}

/// `S_k(n) = Σ_{m=0}^{k} C(k, m) B_m / (k + 1 - m) n^{k+1-m}`.
pub fn power_sum_closed_form(k: u64, n: u64) -> BigInt {
    let table = BernoulliTable::global();
    table.ensure(k);
    let n = BigInt::from(n);
    let mut total = BigRational::zero();
    for m in 0..=k {
        let b = table.get(m);
        if b.is_zero() {
            continue;
        }
        let e = u32::try_from(k + 1 - m).expect("exponent fits in u32");
        let term = b * BigRational::from(binomial(k, m) * n.pow(e))
            / BigRational::from(BigInt::from(k + 1 - m));
        total += term;
    }
    debug_assert!(total.is_integer());
    total.to_integer()
}

/// `{ l prime : (l - 1) | k }` for even `k >= 2`.
pub fn denominator_primes(k: u64) -> Result<BTreeSet<u64>> {
    precondition!(k >= 2 && k % 2 == 0, "k must be even and >= 2, got {k}");
    Ok(arith::divisors(k)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&l| arith::is_prime(l))
        .collect())
}

/// `W_k = B_k + Σ_{(l-1) | k} 1/l`, an integer by von Staudt–Clausen.
pub fn staudt_clausen(k: u64) -> Result<BigRational> {
    let primes = denominator_primes(k)?;
    let mut w = bernoulli_number(k);
    for l in primes {
        w += BigRational::new(BigInt::one(), BigInt::from(l));
    }
    Ok(w)
}

/// `S_k(p) mod p`; equals `p - 1` when `(p - 1) | k` and `0` otherwise.
pub fn power_sum_mod_p(k: u64, p: u64) -> Result<u64> {
    precondition!(k >= 1, "exponent must be positive, got {k}");
    precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
    Ok((1..p).fold(0, |acc, j| (acc + pow_mod(j, k, p)) % p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_number(0), q(1, 1));
        assert_eq!(bernoulli_number(1), q(-1, 2));
        assert_eq!(bernoulli_number(3), q(0, 1));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
        assert_eq!(bernoulli_number(20), q(-174611, 330));
        assert_eq!(
            bernoulli_number(32),
            BigRational::new(BigInt::from(-7709321041217i64), BigInt::from(510))
        );
    }

    #[test]
    fn odd_indices_vanish() {
        for k in (3..80).step_by(2) {
            assert!(bernoulli_number(k).is_zero(), "B_{k}");
        }
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(2, 3).unwrap().value, 5.into());
        assert_eq!(power_sum(4, 5).unwrap().value, 354.into());
        for k in 1..6 {
            assert_eq!(power_sum(k, 1).unwrap().value, 0.into());
        }
        assert_eq!(power_sum(0, 7).unwrap().value, 7.into());
        assert!(power_sum(3, 0).is_err());
    }

    #[test]
    fn closed_form_matches_direct() {
        for k in 0..=12 {
            for n in [1u64, 2, 3, 10, 97, 1000] {
                assert_eq!(
                    power_sum_closed_form(k, n),
                    power_sum_direct(k, n),
                    "k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn large_n_uses_closed_form() {
        // Faulhaber: S_1(n) = n(n-1)/2.
        let n = 5_000_000_000u64;
        let expected = BigInt::from(n) * BigInt::from(n - 1) / 2;
        assert_eq!(power_sum(1, n).unwrap().value, expected);
    }

    #[test]
    fn staudt_clausen_examples() {
        assert_eq!(staudt_clausen(12).unwrap(), q(1, 1));
        assert_eq!(staudt_clausen(2).unwrap(), q(1, 1));
        assert_eq!(staudt_clausen(4).unwrap(), q(1, 1));
        assert!(staudt_clausen(3).is_err());
        assert!(staudt_clausen(0).is_err());
    }

    #[test]
    fn denominator_prime_sets() {
        let d12: Vec<u64> = denominator_primes(12).unwrap().into_iter().collect();
        assert_eq!(d12, vec![2, 3, 5, 7, 13]);
        assert_eq!(d12.iter().product::<u64>(), 2730);
        assert_eq!(
            denominator_primes(2).unwrap().into_iter().product::<u64>(),
            6
        );
        for p in arith::primes_in(3, 300) {
            assert!(denominator_primes(p - 1).unwrap().contains(&p));
        }
    }

    #[test]
    fn lemma_case_split_examples() {
        assert_eq!(power_sum_mod_p(4, 5).unwrap(), 4);
        assert_eq!(power_sum_mod_p(2, 5).unwrap(), 0);
        assert_eq!(power_sum_mod_p(6, 7).unwrap(), 6);
        assert!(power_sum_mod_p(2, 9).is_err());
        assert!(power_sum_mod_p(2, 2).is_err());
    }
}
