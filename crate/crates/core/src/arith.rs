//! Small-integer helpers: primality, modular powers and inverses, p-adic
//! valuations of exact integers and rationals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{precondition, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if one
/// exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (
        s,
        pow_mod(z, q, p),
        pow_mod(a, q, p),
        pow_mod(a, (q + 1) / 2, p),
    );
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Deterministic Miller–Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n != 2 && is_prime(n)
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi_usize = hi as usize;
    let mut composite = vec![false; hi_usize + 1];
    let mut out = Vec::new();
    for n in 2..=hi_usize {
        if composite[n] {
            continue;
        }
        if n as u64 >= lo {
            out.push(n as u64);
        }
        let mut m = n * n;
        while m <= hi_usize {
            composite[m] = true;
            m += n;
        }
    }
    out
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Reduce an integer into `[0, p)`.
pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue below p")
}

/// Reduce a rational modulo `p`; the denominator must be prime to `p`.
pub fn rational_mod_p(x: &BigRational, p: u64) -> Result<u64> {
    let den = bigint_mod(x.denom(), p);
    let inv = inv_mod(den, p);
    precondition!(
        inv.is_some(),
        "denominator of {x} is not invertible mod {p}"
    );
    Ok(mul_mod(bigint_mod(x.numer(), p), inv.unwrap(), p))
}

/// Exponent of `p` in a non-zero integer.
pub fn valuation_bigint(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

pub fn valuation_biguint(x: &BigUint, p: u64) -> Option<u64> {
    valuation_bigint(&BigInt::from(x.clone()), p)
}

/// `v_p` of a rational; `None` stands for the valuation of zero.
pub fn valuation_rational(x: &BigRational, p: u64) -> Option<i64> {
    let vn = valuation_bigint(x.numer(), p)? as i64;
    let vd = valuation_bigint(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// True when the rational lies in ℤ_(p).
pub fn is_p_integral(x: &BigRational, p: u64) -> bool {
    !(x.denom() % BigInt::from(p)).is_zero()
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_sieve() {
        let sieve = primes_in(0, 5000);
        let mr: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime(43867));
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn square_roots() {
        for p in [3u64, 5, 7, 13, 17, 41, 691, 3617] {
            for a in 0..p.min(200) {
                let brute = (0..p).any(|x| mul_mod(x, x, p) == a);
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(mul_mod(r, r, p), a),
                    None => assert!(!brute, "{a} mod {p}"),
                }
            }
        }
    }

    #[test]
    fn inverses_and_powers() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(pow_mod(2, 11, 691), 2048 % 691);
    }

    #[test]
    fn rational_reduction() {
        let x = BigRational::new((-1).into(), 12.into());
        assert_eq!(rational_mod_p(&x, 5).unwrap(), 2);
        assert!(rational_mod_p(&x, 3).is_err());
    }

    #[test]
    fn rational_valuation() {
        let x = BigRational::new(45.into(), 2.into());
        assert_eq!(valuation_rational(&x, 3), Some(2));
        let y = BigRational::new(1.into(), 6.into());
        assert_eq!(valuation_rational(&y, 3), Some(-1));
        assert_eq!(valuation_rational(&BigRational::zero(), 3), None);
        assert!(is_p_integral(&x, 3));
        assert!(!is_p_integral(&y, 3));
    }

    #[test]
    fn divisor_list() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(binomial(13, 6), BigInt::from(1716));
    }
}
