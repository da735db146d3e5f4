//! Fixed-precision p-adic integers `ℤ/p^N`, Teichmüller lifts, and the
//! p-adic limit `S_k(p^s)/p^s -> B_k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, valuation_rational};
use crate::bernoulli::{bernoulli_number, power_sum};
use crate::error::{precondition, Error, Result};

/// An element of `ℤ/p^N` for an odd prime `p`.
///
/// Binary operations between elements of different precision are carried
/// out at the smaller precision. Mixing primes is a programming error and
/// panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    residue: BigUint,
}

/// `v_p` of a fixed-precision element. Zero has valuation "at least N".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

pub(crate) fn modulus(p: u64, precision: u32) -> BigUint {
    BigUint::from(p).pow(precision)
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, value: impl Into<BigInt>) -> Result<Self> {
        precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
        precondition!(precision >= 1, "precision must be positive");
        Ok(Self::from_bigint(p, precision, &value.into()))
    }

    pub(crate) fn from_bigint(p: u64, precision: u32, value: &BigInt) -> Self {
        let m = BigInt::from(modulus(p, precision));
        let residue = value
            .mod_floor(&m)
            .to_biguint()
            .expect("non-negative residue");
        Self {
            p,
            precision,
            residue,
        }
    }

    pub(crate) fn from_residue(p: u64, precision: u32, residue: BigUint) -> Self {
        debug_assert!(residue < modulus(p, precision));
        Self {
            p,
            precision,
            residue,
        }
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        Self::from_residue(p, precision, BigUint::zero())
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_residue(p, precision, BigUint::one())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Canonical representative in `[0, p^N)`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        modulus(self.p, self.precision)
    }

    pub fn mod_p(&self) -> u64 {
        (&self.residue % self.p).to_u64().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.mod_p() != 0
    }

    pub fn valuation(&self) -> Valuation {
        match arith::valuation_biguint(&self.residue, self.p) {
            None => Valuation::AtLeast(self.precision),
            Some(v) => Valuation::Exact(v as u32),
        }
    }

    /// Reduce to a lower precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        precondition!(
            (1..=self.precision).contains(&precision),
            "cannot move from precision {} to {precision}",
            self.precision
        );
        Ok(self.truncate(precision))
    }

    pub(crate) fn truncate(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        Self::from_residue(
            self.p,
            precision,
            &self.residue % modulus(self.p, precision),
        )
    }

    pub fn pow(&self, exp: u64) -> Self {
        let e = BigUint::from(exp);
        Self::from_residue(
            self.p,
            self.precision,
            self.residue.modpow(&e, &self.modulus()),
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        precondition!(self.is_unit(), "{self} is not a unit");
        // Euler: x^{φ(p^N) - 1} = x^{-1} for units.
        let m = self.modulus();
        let phi = &m / self.p * (self.p - 1);
        let inv = self.residue.modpow(&(phi - 1u32), &m);
        Ok(Self::from_residue(self.p, self.precision, inv))
    }

    /// Exact division by `p^k` of an element divisible by `p^k`; the
    /// result is known to precision `N - k`.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= self.precision {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by {}^{k} leaves no digits of precision {}",
                self.p, self.precision
            )));
        }
        let pk = modulus(self.p, k);
        precondition!(
            (&self.residue % &pk).is_zero(),
            "{self} is not divisible by {}^{k}",
            self.p
        );
        let n = self.precision - k;
        Ok(Self::from_residue(
            self.p,
            n,
            (&self.residue / pk) % modulus(self.p, n),
        ))
    }

    /// Multiplication by `p^k`, kept at the same precision.
    pub fn mul_p_pow(&self, k: u32) -> Self {
        let m = self.modulus();
        Self::from_residue(
            self.p,
            self.precision,
            (&self.residue * modulus(self.p, k)) % m,
        )
    }

    /// Representative in `(-p^N/2, p^N/2]`, handy for display of small
    /// negatives.
    pub fn signed_residue(&self) -> BigInt {
        let m = self.modulus();
        let r = BigInt::from(self.residue.clone());
        if self.residue.clone() * 2u32 > m {
            r - BigInt::from(m)
        } else {
            r
        }
    }

    fn check_compatible(&self, other: &Self) -> u32 {
        assert_eq!(
            self.p, other.p,
            "mixing p-adic integers for different primes"
        );
        self.precision.min(other.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        let n = self.check_compatible(rhs);
        let m = modulus(self.p, n);
        PadicInt::from_residue(self.p, n, (&self.residue + &rhs.residue) % m)
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        let n = self.check_compatible(rhs);
        let m = modulus(self.p, n);
        let r = (&self.residue % &m + &m - &rhs.residue % &m) % &m;
        PadicInt::from_residue(self.p, n, r)
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        let n = self.check_compatible(rhs);
        let m = modulus(self.p, n);
        PadicInt::from_residue(self.p, n, (&self.residue * &rhs.residue) % m)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        let m = self.modulus();
        PadicInt::from_residue(self.p, self.precision, (&m - &self.residue) % m)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for PadicInt {
            type Output = PadicInt;
            fn $f(self, rhs: PadicInt) -> PadicInt {
                $tr::$f(&self, &rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}

/// The Teichmüller lift `ω(a)`: the unique `(p-1)`-th root of unity in
/// `ℤ/p^N` congruent to `a` mod `p`, found as the fixed point of `x ↦ x^p`.
pub fn teichmuller(a: &BigInt, p: u64, precision: u32) -> Result<PadicInt> {
    let start = PadicInt::new(p, precision, a.clone())?;
    precondition!(start.is_unit(), "{p} divides {a}");
    let mut x = start;
    for _ in 0..4 * precision {
        let next = x.pow(p);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::Internal(format!(
        "Teichmüller iteration for {a} mod {p}^{precision} did not stabilise"
    )))
}

/// `ω(a)` for every `a` in `[1, p-1]`; index 0 holds `ω(1)`.
pub fn teichmuller_table(p: u64, precision: u32) -> Result<Vec<PadicInt>> {
    (1..p)
        .map(|a| teichmuller(&BigInt::from(a), p, precision))
        .collect()
}

/// One line of a [`WittTrace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittRow {
    #[serde(with = "crate::wire::dec")]
    pub s: u32,
    /// `S_k(p^s) / p^s`.
    #[serde(with = "crate::wire::dec")]
    pub value: BigRational,
    /// `v_p(S_k(p^s)/p^s - B_k)`; `None` if the difference vanishes.
    #[serde(with = "opt_dec")]
    pub valuation: Option<i64>,
}

mod opt_dec {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<i64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_str("inf"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<i64>, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(None);
        }
        text.parse().map(Some).map_err(D::Error::custom)
    }
}

/// The sequence `S_k(p^s)/p^s` for `s = 1..=s_max` and its distance to `B_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittTrace {
    #[serde(with = "crate::wire::dec")]
    pub k: u64,
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    pub rows: Vec<WittRow>,
}

impl WittTrace {
    /// `S_k(p^{s+1})/p^{s+1} - S_k(p^s)/p^s ∈ ℤ_(p)` for consecutive rows.
    pub fn consecutive_differences_integral(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| arith::is_p_integral(&(&w[1].value - &w[0].value), self.p))
    }

    /// The valuation column never decreases.
    pub fn valuations_non_decreasing(&self) -> bool {
        let key = |v: Option<i64>| v.unwrap_or(i64::MAX);
        self.rows
            .windows(2)
            .all(|w| key(w[0].valuation) <= key(w[1].valuation))
    }
}

/// Largest `p^s` that [`witt_trace`] will sum by default.
pub const DEFAULT_SUMMATION_BUDGET: u64 = 1_000_000_000_000;

pub fn witt_trace(k: u64, p: u64, s_max: u32) -> Result<WittTrace> {
    witt_trace_with_budget(k, p, s_max, DEFAULT_SUMMATION_BUDGET)
}

pub fn witt_trace_with_budget(k: u64, p: u64, s_max: u32, budget: u64) -> Result<WittTrace> {
    precondition!(k >= 2 && k % 2 == 0, "k must be even and >= 2, got {k}");
    precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
    precondition!(s_max >= 1, "s_max must be positive");
    let b = bernoulli_number(k);
    let mut rows = Vec::with_capacity(s_max as usize);
    let mut n = 1u64;
    for s in 1..=s_max {
        n = n.checked_mul(p).filter(|&n| n <= budget).ok_or_else(|| {
            Error::Resource(format!("{p}^{s} exceeds the summation budget {budget}"))
        })?;
        let sum = power_sum(k, n)?.value;
        let value = BigRational::new(sum, BigInt::from(n));
        let valuation = valuation_rational(&(&value - &b), p);
        rows.push(WittRow {
            s,
            value,
            valuation,
        });
    }
    Ok(WittTrace { k, p, rows })
}
