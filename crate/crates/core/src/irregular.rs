//! Kummer's criterion, the p-adic values `L(ω^i, 0)`, and the Kummer
//! congruence `L(ω^{k-1}, 0) ≡ -B_k/k (mod p)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, bigint_mod, rational_mod_p};
use crate::bernoulli::{bernoulli_number, BernoulliTable};
use crate::error::{precondition, Result};
use crate::padic::{teichmuller_table, PadicInt};

/// A prime `p` dividing the numerator of `B_k`, `k` even in `[2, p-3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IrregularPair {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec")]
    pub k: u64,
}

impl fmt::Display for IrregularPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.k)
    }
}

/// The character `ω^i` of `(ℤ/pℤ)^×`, exponent reduced to `[0, p-2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterPower {
    p: u64,
    i: u64,
}

impl CharacterPower {
    pub fn new(p: u64, i: i64) -> Result<Self> {
        precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
        let i = i.rem_euclid(p as i64 - 1) as u64;
        Ok(Self { p, i })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u64 {
        self.i
    }

    /// `ω(a)^i` in `ℤ/p^N`.
    pub fn value(&self, a: u64, precision: u32) -> Result<PadicInt> {
        let w = crate::padic::teichmuller(&BigInt::from(a), self.p, precision)?;
        Ok(w.pow(self.i))
    }
}

/// `B_k mod p` for `k <= p - 3`, where the denominator is prime to `p`.
fn bernoulli_numerator_residue(p: u64, k: u64) -> u64 {
    bigint_mod(bernoulli_number(k).numer(), p)
}

pub fn irregular_pairs(p: u64) -> Result<Vec<IrregularPair>> {
    precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
    if p < 5 {
        return Ok(Vec::new());
    }
    BernoulliTable::global().ensure(p - 3);
    Ok((2..=p - 3)
        .step_by(2)
        .filter(|&k| bernoulli_numerator_residue(p, k) == 0)
        .map(|k| IrregularPair { p, k })
        .collect())
}

pub fn is_irregular(p: u64) -> Result<bool> {
    Ok(!irregular_pairs(p)?.is_empty())
}

/// `L(ω^i, 0)` to `m` p-adic digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LValue {
    pub p: u64,
    pub i: u64,
    /// When `integral` is false the true value is `value / p`.
    pub value: PadicInt,
    pub integral: bool,
}

/// `L(ω^i, 0) = -(1/p) Σ_{a=1}^{p-1} ω(a)^i a`.
///
/// Lifts are taken to `m + 1` digits since the leading `1/p` costs one.
/// Only odd `i` is supported.
pub fn l_value(chi: CharacterPower, m: u32) -> Result<LValue> {
    precondition!(m >= 1, "target precision must be positive");
    precondition!(
        chi.i % 2 == 1,
        "only odd powers of ω are supported, got i = {}",
        chi.i
    );
    let p = chi.p;
    let table = teichmuller_table(p, m + 1)?;
    Ok(l_value_from_table(p, chi.i, &table, m))
}

fn l_value_from_table(p: u64, i: u64, table: &[PadicInt], m: u32) -> LValue {
    let mut sum = PadicInt::zero(p, m + 1);
    for (idx, w) in table.iter().enumerate() {
        let a = PadicInt::from_bigint(p, m + 1, &BigInt::from(idx as u64 + 1));
        sum = &sum + &(&w.pow(i) * &a);
    }
    let neg = -&sum;
    match neg.div_p_pow(1) {
        Ok(v) => LValue {
            p,
            i,
            value: v,
            integral: true,
        },
        Err(_) => LValue {
            p,
            i,
            value: neg.truncate(m),
            integral: false,
        },
    }
}

/// Both sides of the Kummer congruence for `(p, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerReport {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec")]
    pub k: u64,
    /// `L(ω^{k-1}, 0) mod p`.
    #[serde(with = "crate::wire::dec")]
    pub lhs: u64,
    /// `-B_k/k mod p`.
    #[serde(with = "crate::wire::dec")]
    pub rhs: u64,
    pub equal: bool,
}

pub fn kummer_congruence_check(p: u64, k: u64) -> Result<KummerReport> {
    precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
    precondition!(
        k >= 2 && k % 2 == 0 && k + 3 <= p,
        "k must be even in [2, p-3], got k = {k}, p = {p}"
    );
    let table = teichmuller_table(p, 2)?;
    Ok(kummer_from_table(p, k, &table))
}

fn kummer_from_table(p: u64, k: u64, table: &[PadicInt]) -> KummerReport {
    let l = l_value_from_table(p, k - 1, table, 1);
    debug_assert!(l.integral);
    let lhs = l.value.residue().to_u64().unwrap();
    let rhs_q = -bernoulli_number(k) / BigRational::from(BigInt::from(k));
    let rhs = rational_mod_p(&rhs_q, p).expect("k <= p-3 keeps -B_k/k p-integral");
    KummerReport {
        p,
        k,
        lhs,
        rhs,
        equal: lhs == rhs,
    }
}

/// Kummer congruence for every even `k` in `[2, p-3]`, sharing one table
/// of Teichmüller lifts.
pub fn kummer_congruence_all(p: u64) -> Result<Vec<KummerReport>> {
    precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
    if p < 5 {
        return Ok(Vec::new());
    }
    BernoulliTable::global().ensure(p - 3);
    let table = teichmuller_table(p, 2)?;
    Ok((2..=p - 3)
        .step_by(2)
        .map(|k| kummer_from_table(p, k, &table))
        .collect())
}

/// All irregular pairs with `p_min <= p <= p_max`, sorted by `(p, k)`.
///
/// Primes are split into contiguous blocks, one per worker, and the block
/// results are concatenated in order, so the output does not depend on
/// `workers`.
pub fn scan_range(p_min: u64, p_max: u64, workers: usize) -> Result<Vec<IrregularPair>> {
    precondition!(p_min <= p_max, "empty range: {p_min} > {p_max}");
    precondition!(workers >= 1, "need at least one worker");
    let primes = arith::primes_in(p_min.max(3), p_max);
    if primes.is_empty() {
        return Ok(Vec::new());
    }
    // Fill the shared table once, before the readers fan out.
    BernoulliTable::global().ensure(p_max.saturating_sub(3));
    let block = primes.len().div_ceil(workers);
    let blocks: Vec<Vec<IrregularPair>> = std::thread::scope(|s| {
        let handles: Vec<_> = primes
            .chunks(block)
            .map(|chunk| {
                s.spawn(move || {
                    chunk
                        .iter()
                        .flat_map(|&p| irregular_pairs(p).expect("p is an odd prime"))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    Ok(blocks.concat())
}

/// Direct Kummer-criterion oracle on a big numerator, used to double check
/// the pairs listed by [`irregular_pairs`].
pub fn divides_numerator(p: u64, k: u64) -> bool {
    let n = bernoulli_number(k);
    !n.numer().is_zero() && (n.numer() % BigInt::from(p)).is_zero()
}
