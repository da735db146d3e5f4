use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, bigint_mod, mul_mod, rational_mod_p};
use crate::error::{precondition, Error, Result};

/// Coefficient ring of a [`QExpansion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Rational,
    Integer,
    PrimeField(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => f.write_str("rational"),
            Ring::Integer => f.write_str("integer"),
            Ring::PrimeField(p) => write!(f, "prime-field({p})"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Ring::Rational),
            "integer" => Ok(Ring::Integer),
            _ => {
                let p = s
                    .strip_prefix("prime-field(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring {s:?}")))?;
                if !arith::is_prime(p) {
                    return Err(Error::Parse(format!("{p} is not prime")));
                }
                Ok(Ring::PrimeField(p))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Coeffs {
    Rational(Vec<BigRational>),
    Integer(Vec<BigInt>),
    Modular(u64, Vec<u64>),
}

/// A weight-tagged truncated q-expansion `a_0 + a_1 q + ... + a_prec q^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    weight: u32,
    coeffs: Coeffs,
}

fn cauchy<T: Clone>(
    a: &[T],
    b: &[T],
    len: usize,
    zero: T,
    mul_add: impl Fn(&mut T, &T, &T),
) -> Vec<T> {
    let mut out = vec![zero; len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            mul_add(&mut out[i + j], x, y);
        }
    }
    out
}

impl QExpansion {
    pub fn from_rationals(weight: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion holds at least a_0");
        Self {
            weight,
            coeffs: Coeffs::Rational(coeffs),
        }
    }

    pub fn from_integers(weight: u32, coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion holds at least a_0");
        Self {
            weight,
            coeffs: Coeffs::Integer(coeffs),
        }
    }

    pub fn from_residues(weight: u32, p: u64, coeffs: Vec<u64>) -> Result<Self> {
        precondition!(arith::is_prime(p), "{p} is not prime");
        precondition!(!coeffs.is_empty(), "a q-expansion holds at least a_0");
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Ok(Self {
            weight,
            coeffs: Coeffs::Modular(p, coeffs),
        })
    }

    pub fn zero(weight: u32, ring: Ring, prec: usize) -> Self {
        let coeffs = match ring {
            Ring::Rational => Coeffs::Rational(vec![BigRational::zero(); prec + 1]),
            Ring::Integer => Coeffs::Integer(vec![BigInt::zero(); prec + 1]),
            Ring::PrimeField(p) => Coeffs::Modular(p, vec![0; prec + 1]),
        };
        Self { weight, coeffs }
    }

    /// The constant form `1` of weight 0.
    pub fn one(ring: Ring, prec: usize) -> Self {
        let mut f = Self::zero(0, ring, prec);
        match &mut f.coeffs {
            Coeffs::Rational(v) => v[0] = BigRational::one(),
            Coeffs::Integer(v) => v[0] = BigInt::one(),
            Coeffs::Modular(_, v) => v[0] = 1,
        }
        f
    }

    /// `q^e` as a weight-`weight` expansion over ℤ.
    pub fn monomial(weight: u32, e: usize, prec: usize) -> Self {
        let mut v = vec![BigInt::zero(); prec + 1];
        if e <= prec {
            v[e] = BigInt::one();
        }
        Self::from_integers(weight, v)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = weight;
        self
    }

    pub fn ring(&self) -> Ring {
        match &self.coeffs {
            Coeffs::Rational(_) => Ring::Rational,
            Coeffs::Integer(_) => Ring::Integer,
            Coeffs::Modular(p, _) => Ring::PrimeField(*p),
        }
    }

    /// Index of the last stored coefficient.
    pub fn prec(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Rational(v) => v.len(),
            Coeffs::Integer(v) => v.len(),
            Coeffs::Modular(_, v) => v.len(),
        }
    }

    /// `a_n` as an exact rational (residues are returned in `[0, p)`).
    pub fn coefficient(&self, n: usize) -> BigRational {
        match &self.coeffs {
            Coeffs::Rational(v) => v[n].clone(),
            Coeffs::Integer(v) => BigRational::from(v[n].clone()),
            Coeffs::Modular(_, v) => BigRational::from(BigInt::from(v[n])),
        }
    }

    pub fn coefficients(&self) -> Vec<BigRational> {
        (0..self.len()).map(|n| self.coefficient(n)).collect()
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        match &self.coeffs {
            Coeffs::Rational(v) => v.iter().map(ToString::to_string).collect(),
            Coeffs::Integer(v) => v.iter().map(ToString::to_string).collect(),
            Coeffs::Modular(_, v) => v.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn integers(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Integer(v) => Some(v),
            _ => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Modular(_, v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Rational(v) => v.iter().all(Zero::is_zero),
            Coeffs::Integer(v) => v.iter().all(Zero::is_zero),
            Coeffs::Modular(_, v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn truncate(&self, prec: usize) -> QExpansion {
        let n = (prec + 1).min(self.len());
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => Coeffs::Rational(v[..n].to_vec()),
            Coeffs::Integer(v) => Coeffs::Integer(v[..n].to_vec()),
            Coeffs::Modular(p, v) => Coeffs::Modular(*p, v[..n].to_vec()),
        };
        QExpansion {
            weight: self.weight,
            coeffs,
        }
    }

    /// Truncated Cauchy product; weights add, precision is the smaller one.
    pub fn multiply(&self, other: &QExpansion) -> Result<QExpansion> {
        let len = self.len().min(other.len());
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => {
                Coeffs::Rational(cauchy(a, b, len, BigRational::zero(), |acc, x, y| {
                    if !x.is_zero() && !y.is_zero() {
                        *acc += x * y
                    }
                }))
            }
            (Coeffs::Integer(a), Coeffs::Integer(b)) => {
                Coeffs::Integer(cauchy(a, b, len, BigInt::zero(), |acc, x, y| *acc += x * y))
            }
            (Coeffs::Modular(p, a), Coeffs::Modular(q, b)) if p == q => {
                let p = *p;
                Coeffs::Modular(
                    p,
                    cauchy(a, b, len, 0, |acc, x, y| {
                        *acc = (*acc + mul_mod(*x, *y, p)) % p
                    }),
                )
            }
            _ => return Err(self.mismatch(other)),
        };
        Ok(QExpansion {
            weight: self.weight + other.weight,
            coeffs,
        })
    }

    /// Coefficientwise sum of two forms of the same weight and ring.
    pub fn add(&self, other: &QExpansion) -> Result<QExpansion> {
        precondition!(
            self.weight == other.weight,
            "adding forms of weights {} and {}",
            self.weight,
            other.weight
        );
        let len = self.len().min(other.len());
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => {
                Coeffs::Rational(a.iter().zip(b).take(len).map(|(x, y)| x + y).collect())
            }
            (Coeffs::Integer(a), Coeffs::Integer(b)) => {
                Coeffs::Integer(a.iter().zip(b).take(len).map(|(x, y)| x + y).collect())
            }
            (Coeffs::Modular(p, a), Coeffs::Modular(q, b)) if p == q => Coeffs::Modular(
                *p,
                a.iter()
                    .zip(b)
                    .take(len)
                    .map(|(x, y)| (x + y) % p)
                    .collect(),
            ),
            _ => return Err(self.mismatch(other)),
        };
        Ok(QExpansion {
            weight: self.weight,
            coeffs,
        })
    }

    /// Multiply every coefficient by an integer.
    pub fn scale(&self, c: &BigInt) -> QExpansion {
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => {
                let c = BigRational::from(c.clone());
                Coeffs::Rational(v.iter().map(|x| x * &c).collect())
            }
            Coeffs::Integer(v) => Coeffs::Integer(v.iter().map(|x| x * c).collect()),
            Coeffs::Modular(p, v) => {
                let c = bigint_mod(c, *p);
                Coeffs::Modular(*p, v.iter().map(|&x| mul_mod(x, c, *p)).collect())
            }
        };
        QExpansion {
            weight: self.weight,
            coeffs,
        }
    }

    pub fn pow(&self, e: u32) -> Result<QExpansion> {
        let mut acc = QExpansion::one(self.ring(), self.prec());
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Reduction to 𝔽_p; every coefficient must be p-integral.
    pub fn reduce_mod(&self, p: u64) -> Result<QExpansion> {
        precondition!(arith::is_prime(p), "{p} is not prime");
        let v = match &self.coeffs {
            Coeffs::Rational(v) => v
                .iter()
                .map(|x| rational_mod_p(x, p))
                .collect::<Result<Vec<_>>>()?,
            Coeffs::Integer(v) => v.iter().map(|x| bigint_mod(x, p)).collect(),
            Coeffs::Modular(q, v) => {
                precondition!(*q == p, "cannot reduce a form over F_{q} modulo {p}");
                v.clone()
            }
        };
        Ok(QExpansion {
            weight: self.weight,
            coeffs: Coeffs::Modular(p, v),
        })
    }

    /// View an integer or rational expansion over ℚ.
    pub fn to_rational(&self) -> Result<QExpansion> {
        match &self.coeffs {
            Coeffs::Modular(..) => Err(Error::Precondition(
                "cannot lift F_p coefficients to Q".into(),
            )),
            _ => Ok(QExpansion::from_rationals(self.weight, self.coefficients())),
        }
    }

    /// View a rational expansion with integral coefficients over ℤ.
    pub fn to_integer(&self) -> Result<QExpansion> {
        match &self.coeffs {
            Coeffs::Integer(_) => Ok(self.clone()),
            Coeffs::Rational(v) => {
                precondition!(
                    v.iter().all(|x| x.is_integer()),
                    "coefficients are not all integers"
                );
                Ok(QExpansion::from_integers(
                    self.weight,
                    v.iter().map(|x| x.to_integer()).collect(),
                ))
            }
            Coeffs::Modular(..) => Err(Error::Precondition(
                "cannot lift F_p coefficients to Z".into(),
            )),
        }
    }

    /// Coefficientwise equality of `a_0..=a_upto` (same ring required).
    pub fn agrees_with(&self, other: &QExpansion, upto: usize) -> bool {
        if self.ring() != other.ring() || upto >= self.len() || upto >= other.len() {
            return false;
        }
        (0..=upto).all(|n| self.coefficient(n) == other.coefficient(n))
    }

    fn mismatch(&self, other: &QExpansion) -> Error {
        Error::RingMismatch(self.ring().to_string(), other.ring().to_string())
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coefficient_strings().iter().enumerate() {
            if c == "0" {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*q")?,
                _ => write!(f, "({c})*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.prec() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct WireQExpansion {
    #[serde(with = "crate::wire::dec")]
    weight: u32,
    ring: String,
    #[serde(with = "crate::wire::dec")]
    prec: usize,
    coefficients: Vec<String>,
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireQExpansion {
            weight: self.weight,
            ring: self.ring().to_string(),
            prec: self.prec(),
            coefficients: self.coefficient_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use de::Error as _;
        let w = WireQExpansion::deserialize(d)?;
        if w.coefficients.len() != w.prec + 1 {
            return Err(D::Error::custom(format!(
                "prec {} needs {} coefficients, found {}",
                w.prec,
                w.prec + 1,
                w.coefficients.len()
            )));
        }
        let ring: Ring = w.ring.parse().map_err(D::Error::custom)?;
        let parsed = match ring {
            Ring::Rational => w
                .coefficients
                .iter()
                .map(|c| c.parse::<BigRational>().map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(|v| QExpansion::from_rationals(w.weight, v)),
            Ring::Integer => w
                .coefficients
                .iter()
                .map(|c| c.parse::<BigInt>().map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(|v| QExpansion::from_integers(w.weight, v)),
            Ring::PrimeField(p) => {
                let v = w
                    .coefficients
                    .iter()
                    .map(|c| c.parse::<u64>().map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                if v.iter().any(|&c| c >= p) {
                    return Err(D::Error::custom(format!("residue out of range for F_{p}")));
                }
                QExpansion::from_residues(w.weight, p, v).map_err(D::Error::custom)
            }
        }?;
        Ok(parsed)
    }
}
