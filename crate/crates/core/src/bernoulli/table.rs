use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Cache of Bernoulli numbers of even index.
///
/// Readers share the lock; extending the table takes the write lock, so
/// concurrent misses compute each value at most once.
#[derive(Debug, Default)]
pub struct BernoulliTable {
    // evens[i] = B_{2i}
    evens: RwLock<Vec<BigRational>>,
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self {
            evens: RwLock::new(vec![BigRational::one()]),
        }
    }

    pub fn global() -> &'static BernoulliTable {
        static GLOBAL: OnceLock<BernoulliTable> = OnceLock::new();
        GLOBAL.get_or_init(BernoulliTable::new)
    }

    pub fn get(&self, k: u64) -> BigRational {
        if k == 1 {
            return BigRational::new(BigInt::from(-1), BigInt::from(2));
        }
        if k % 2 == 1 {
            return BigRational::zero();
        }
        let idx = (k / 2) as usize;
        if let Some(b) = self.evens.read().unwrap().get(idx) {
            return b.clone();
        }
        self.ensure(k);
        self.evens.read().unwrap()[idx].clone()
    }

    /// Largest even index currently stored.
    pub fn max_index(&self) -> u64 {
        let len = self.evens.read().unwrap().len() as u64;
        2 * (len.max(1) - 1)
    }

    /// Make sure `B_j` is stored for every `j <= k`.
    pub fn ensure(&self, k: u64) {
        let target = (k / 2) as usize;
        if self.evens.read().unwrap().len() > target {
            return;
        }
        let mut evens = self.evens.write().unwrap();
        if evens.is_empty() {
            evens.push(BigRational::one());
        }
        extend(&mut evens, target);
    }

    /// Merge entries from a cache file written by [`BernoulliTable::save`].
    /// Every loaded value is checked against von Staudt–Clausen's
    /// denominator before it is accepted.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let text = fs::read_to_string(path)?;
        let loaded = parse_cache(&text)?;
        let mut evens = self.evens.write().unwrap();
        for (i, b) in loaded.iter().enumerate() {
            if let Some(existing) = evens.get(i) {
                if existing != b {
                    return Err(Error::Parse(format!(
                        "cache disagrees with computed B_{}",
                        2 * i
                    )));
                }
            }
        }
        if loaded.len() > evens.len() {
            *evens = loaded;
        }
        Ok(evens.len())
    }

    /// Write `k<TAB>numerator<TAB>denominator` for every `k` up to the
    /// largest stored even index, ascending.
    pub fn save(&self, path: &Path) -> Result<()> {
        let evens = self.evens.read().unwrap();
        let mut out = String::new();
        let max_k = 2 * (evens.len() as u64 - 1);
        for k in 0..=max_k {
            let b = if k == 1 {
                BigRational::new(BigInt::from(-1), BigInt::from(2))
            } else if k % 2 == 1 {
                BigRational::zero()
            } else {
                evens[(k / 2) as usize].clone()
            };
            out.push_str(&format!("{k}\t{}\t{}\n", b.numer(), b.denom()));
        }
        drop(evens);
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(out.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Extend `evens` so that it holds `B_0, B_2, ..., B_{2 target}` using
/// `Σ_{j<=k} C(k+1, j) B_j = 0`.
///
/// The sum runs over a common denominator `L` so the inner loop is pure
/// integer arithmetic; one reduction per new value.
fn extend(evens: &mut Vec<BigRational>, target: usize) {
    let mut lcm = BigInt::from(2);
    for b in evens.iter() {
        lcm = lcm.lcm(b.denom());
    }
    while evens.len() <= target {
        let k = 2 * evens.len() as u64;
        let kp1 = BigInt::from(k + 1);
        let mut binom = BigInt::one(); // C(k+1, j), j even
        let mut sum = BigInt::zero();
        for (i, b) in evens.iter().enumerate() {
            let j = 2 * i as u64;
            if i > 0 {
                binom = binom * BigInt::from(k + 3 - j) / BigInt::from(j - 1);
                binom = binom * BigInt::from(k + 2 - j) / BigInt::from(j);
            }
            sum += &binom * b.numer() * (&lcm / b.denom());
        }
        // j = 1 term: C(k+1, 1) * (-1/2)
        sum -= &kp1 * (&lcm / BigInt::from(2));
        let value = BigRational::new(-sum, kp1 * &lcm);
        lcm = lcm.lcm(value.denom());
        evens.push(value);
    }
}

fn parse_cache(text: &str) -> Result<Vec<BigRational>> {
    let mut evens = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", line_no + 1));
        let mut fields = line.split('\t');
        let (Some(k), Some(n), Some(d), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(bad("expected three tab-separated fields"));
        };
        let k: u64 = k.parse().map_err(|_| bad("bad index"))?;
        let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
        if !d.is_positive() {
            return Err(bad("denominator must be positive"));
        }
        if k != line_no as u64 {
            return Err(bad("indices must start at 0 and ascend by 1"));
        }
        let b = BigRational::new(n.clone(), d.clone());
        if b.numer() != &n || b.denom() != &d {
            return Err(bad("fraction not in lowest terms"));
        }
        match k {
            1 => {
                if b != BigRational::new((-1).into(), 2.into()) {
                    return Err(bad("B_1 must be -1/2"));
                }
            }
            k if k % 2 == 1 => {
                if !b.is_zero() {
                    return Err(bad("odd index above 1 must be zero"));
                }
            }
            k => {
                if d != staudt_denominator(k) {
                    return Err(bad("denominator contradicts von Staudt–Clausen"));
                }
                evens.push(b);
            }
        }
    }
    if evens.is_empty() || !evens[0].is_one() {
        return Err(Error::Parse("cache must start with B_0 = 1".into()));
    }
    Ok(evens)
}

fn staudt_denominator(k: u64) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    crate::arith::divisors(k)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&l| is_prime(l))
        .map(BigInt::from)
        .product()
}
