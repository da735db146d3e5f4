use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod, mul_mod};
use crate::error::{precondition, Error, Result};
use crate::padic::PadicInt;

/// A 2×2 matrix `[[a, b], [c, d]]` over `ℤ/p^N`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: PadicInt,
    pub b: PadicInt,
    pub c: PadicInt,
    pub d: PadicInt,
}

impl Mat2 {
    pub fn new(p: u64, precision: u32, entries: [BigInt; 4]) -> Result<Self> {
        let [a, b, c, d] = entries;
        Ok(Self {
            a: PadicInt::new(p, precision, a)?,
            b: PadicInt::new(p, precision, b)?,
            c: PadicInt::new(p, precision, c)?,
            d: PadicInt::new(p, precision, d)?,
        })
    }

    pub fn from_i64(p: u64, precision: u32, entries: [i64; 4]) -> Result<Self> {
        Self::new(p, precision, entries.map(BigInt::from))
    }

    pub fn from_entries(a: PadicInt, b: PadicInt, c: PadicInt, d: PadicInt) -> Self {
        let n = a
            .precision()
            .min(b.precision())
            .min(c.precision())
            .min(d.precision());
        Self {
            a: a.truncate(n),
            b: b.truncate(n),
            c: c.truncate(n),
            d: d.truncate(n),
        }
    }

    pub fn identity(p: u64, precision: u32) -> Self {
        let (o, z) = (PadicInt::one(p, precision), PadicInt::zero(p, precision));
        Self::from_entries(o.clone(), z.clone(), z, o)
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn precision(&self) -> u32 {
        self.a.precision()
    }

    pub fn entries(&self) -> [&PadicInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> PadicInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> PadicInt {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::from_entries(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_unit()
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let inv = self.det().inverse().map_err(|_| {
            Error::Precondition(format!("{self} is not invertible mod {}", self.p()))
        })?;
        Ok(Mat2::from_entries(
            &self.d * &inv,
            -(&self.b * &inv),
            -(&self.c * &inv),
            &self.a * &inv,
        ))
    }

    /// `s · self · s⁻¹` for an invertible `s`.
    pub fn conjugate_by(&self, s: &Mat2) -> Result<Mat2> {
        Ok(s.mul(self).mul(&s.inverse()?))
    }

    pub fn truncate(&self, precision: u32) -> Mat2 {
        Mat2::from_entries(
            self.a.truncate(precision),
            self.b.truncate(precision),
            self.c.truncate(precision),
            self.d.truncate(precision),
        )
    }

    /// Entries reduced mod `p`, row-major.
    pub fn residues_mod_p(&self) -> [u64; 4] {
        self.entries().map(PadicInt::mod_p)
    }

    pub(crate) fn reduce(&self) -> Fp2 {
        Fp2 {
            p: self.p(),
            e: self.residues_mod_p(),
        }
    }

    /// `[[a, b], [c, d]] ↦ [[d, c], [b, a]]`, conjugation by `[[0, 1], [1, 0]]`.
    pub fn swap(&self) -> Mat2 {
        Mat2::from_entries(
            self.d.clone(),
            self.c.clone(),
            self.b.clone(),
            self.a.clone(),
        )
    }

    pub(crate) fn residue_strings(&self) -> [String; 4] {
        self.entries().map(|x| x.residue().to_string())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A 2×2 matrix over 𝔽_p, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Fp2 {
    pub p: u64,
    pub e: [u64; 4],
}

impl Fp2 {
    #[cfg(test)]
    pub fn identity(p: u64) -> Self {
        Self { p, e: [1, 0, 0, 1] }
    }

    pub fn mul(&self, o: &Fp2) -> Fp2 {
        let p = self.p;
        let [a, b, c, d] = self.e;
        let [w, x, y, z] = o.e;
        let dot = |s: u64, t: u64, u: u64, v: u64| (mul_mod(s, t, p) + mul_mod(u, v, p)) % p;
        Fp2 {
            p,
            e: [
                dot(a, w, b, y),
                dot(a, x, b, z),
                dot(c, w, d, y),
                dot(c, x, d, z),
            ],
        }
    }

    pub fn det(&self) -> u64 {
        let [a, b, c, d] = self.e;
        (mul_mod(a, d, self.p) + self.p - mul_mod(b, c, self.p)) % self.p
    }

    pub fn trace(&self) -> u64 {
        (self.e[0] + self.e[3]) % self.p
    }

    pub fn inverse(&self) -> Option<Fp2> {
        let p = self.p;
        let inv = inv_mod(self.det(), p)?;
        let [a, b, c, d] = self.e;
        let neg = |x: u64| (p - x) % p;
        Some(Fp2 {
            p,
            e: [
                mul_mod(d, inv, p),
                mul_mod(neg(b), inv, p),
                mul_mod(neg(c), inv, p),
                mul_mod(a, inv, p),
            ],
        })
    }

    pub fn is_scalar(&self) -> bool {
        self.e[1] == 0 && self.e[2] == 0 && self.e[0] == self.e[3]
    }

    /// Roots in `P¹(𝔽_p)` of `det[g v, v] = -c x² + (a - d) x y + b y²`,
    /// normalised as `(1, 0)` or `(t, 1)`. `None` when every line is
    /// stable.
    pub fn stable_lines(&self) -> Option<Vec<(u64, u64)>> {
        if self.is_scalar() {
            return None;
        }
        let p = self.p;
        let [a, b, c, d] = self.e;
        let amd = (a + p - d) % p;
        let mut lines = Vec::new();
        if c == 0 {
            lines.push((1, 0));
            if amd != 0 {
                let t = mul_mod((p - b) % p, inv_mod(amd, p).unwrap(), p);
                lines.push((t, 1));
            }
        } else {
            // c t² - (a - d) t - b = 0
            let disc = (mul_mod(amd, amd, p) + mul_mod(4, mul_mod(b, c, p), p)) % p;
            if let Some(r) = arith::sqrt_mod(disc, p) {
                let inv = inv_mod(mul_mod(2, c, p), p).unwrap();
                for s in [r, (p - r) % p] {
                    let t = mul_mod((amd + s) % p, inv, p);
                    if !lines.contains(&(t, 1)) {
                        lines.push((t, 1));
                    }
                }
            }
        }
        lines.sort();
        Some(lines)
    }

    pub fn fixes_line(&self, (x, y): (u64, u64)) -> bool {
        let p = self.p;
        let [a, b, c, d] = self.e;
        let gx = (mul_mod(a, x, p) + mul_mod(b, y, p)) % p;
        let gy = (mul_mod(c, x, p) + mul_mod(d, y, p)) % p;
        mul_mod(gx, y, p) == mul_mod(gy, x, p)
    }
}

/// Every product of at most `max_len` letters, shortest first.
pub(crate) fn words(letters: &[Fp2], max_len: usize) -> Vec<Fp2> {
    let mut all = Vec::new();
    let mut layer = letters.to_vec();
    for len in 1..=max_len {
        all.extend_from_slice(&layer);
        if len < max_len {
            layer = layer
                .iter()
                .flat_map(|w| letters.iter().map(move |s| w.mul(s)))
                .collect();
        }
    }
    all
}

/// A finitely generated subgroup of `GL_2(ℤ/p^N)`, given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatRep {
    p: u64,
    precision: u32,
    generators: Vec<Mat2>,
}

impl MatRep {
    pub fn new(p: u64, precision: u32, generators: Vec<Mat2>) -> Result<Self> {
        precondition!(arith::is_odd_prime(p), "{p} is not an odd prime");
        precondition!(precision >= 1, "precision must be positive");
        precondition!(
            !generators.is_empty(),
            "a representation needs at least one generator"
        );
        for (i, g) in generators.iter().enumerate() {
            precondition!(
                g.p() == p,
                "generator {i} lives over p = {}, expected {p}",
                g.p()
            );
            precondition!(
                g.precision() == precision,
                "generator {i} has precision {}, expected {precision}",
                g.precision()
            );
            precondition!(
                g.is_invertible(),
                "generator {i} = {g} is not invertible mod {p}"
            );
        }
        Ok(Self {
            p,
            precision,
            generators,
        })
    }

    /// Build from integer entries `[a, b, c, d]`, reduced mod `p^N`.
    pub fn from_i64(p: u64, precision: u32, generators: &[[i64; 4]]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|e| Mat2::from_i64(p, precision, *e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, precision, gens)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn map(&self, precision: u32, f: impl Fn(&Mat2) -> Result<Mat2>) -> Result<MatRep> {
        let gens = self.generators.iter().map(f).collect::<Result<Vec<_>>>()?;
        MatRep::new(self.p, precision, gens)
    }

    /// `s ρ s⁻¹` for `s` invertible over `ℤ/p^N`.
    pub fn conjugate_by(&self, s: &Mat2) -> Result<MatRep> {
        precondition!(
            s.is_invertible(),
            "conjugator {s} is not invertible mod {}",
            self.p
        );
        let s = s.truncate(self.precision);
        self.map(self.precision, |g| g.conjugate_by(&s))
    }

    /// Reductions of the generators and their inverses.
    pub(crate) fn letters(&self) -> Vec<Fp2> {
        let gens: Vec<Fp2> = self.generators.iter().map(Mat2::reduce).collect();
        let invs = gens
            .iter()
            .map(|g| g.inverse().expect("generators are invertible mod p"));
        gens.iter().copied().chain(invs).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct WireMatRep {
    p: String,
    #[serde(rename = "N")]
    n: String,
    generators: Vec<[String; 4]>,
}

impl Serialize for MatRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireMatRep {
            p: self.p.to_string(),
            n: self.precision.to_string(),
            generators: self.generators.iter().map(Mat2::residue_strings).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = WireMatRep::deserialize(d)?;
        let parse = |field: &str, s: &str| -> std::result::Result<BigInt, D::Error> {
            s.trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("{field}: {s:?} is not an integer")))
        };
        let p: u64 =
            w.p.trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("p: {:?}", w.p)))?;
        let n: u32 =
            w.n.trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("N: {:?}", w.n)))?;
        let mut gens = Vec::with_capacity(w.generators.len());
        for (i, g) in w.generators.iter().enumerate() {
            let mut e = Vec::with_capacity(4);
            for s in g {
                e.push(parse(&format!("generator {i}"), s)?);
            }
            let e: [BigInt; 4] = e.try_into().unwrap();
            gens.push(Mat2::new(p, n, e).map_err(D::Error::custom)?);
        }
        MatRep::new(p, n, gens).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let g = Mat2::from_i64(5, 6, [2, 7, 3, 1]).unwrap();
        let id = Mat2::identity(5, 6);
        assert_eq!(g.mul(&g.inverse().unwrap()), id);
        assert!(Mat2::from_i64(5, 6, [5, 1, 0, 1])
            .unwrap()
            .inverse()
            .is_err());
    }

    #[test]
    fn fp_inverse_and_words() {
        let g = Fp2 {
            p: 7,
            e: [1, 1, 0, 1],
        };
        assert_eq!(g.mul(&g.inverse().unwrap()), Fp2::identity(7));
        let ws = words(&[g, g.inverse().unwrap()], 3);
        assert_eq!(ws.len(), 2 + 4 + 8);
    }

    #[test]
    fn stable_lines_brute_force() {
        let p = 7;
        for raw in 0..7u64.pow(4) {
            let e = [raw % 7, raw / 7 % 7, raw / 49 % 7, raw / 343];
            let g = Fp2 { p, e };
            if g.det() == 0 {
                continue;
            }
            let mut brute: Vec<(u64, u64)> = std::iter::once((1, 0))
                .chain((0..p).map(|t| (t, 1)))
                .filter(|&l| g.fixes_line(l))
                .collect();
            brute.sort();
            match g.stable_lines() {
                None => assert_eq!(brute.len() as u64, p + 1),
                Some(lines) => assert_eq!(lines, brute, "{e:?}"),
            }
        }
    }

    #[test]
    fn json_shape_and_validation() {
        let rep = MatRep::from_i64(5, 3, &[[1, -1, 0, 1]]).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert_eq!(
            json,
            r#"{"p":"5","N":"3","generators":[["1","124","0","1"]]}"#
        );
        let back: MatRep = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        assert!(serde_json::from_str::<MatRep>(
            r#"{"p":"5","N":"3","generators":[["5","0","0","1"]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<MatRep>(
            r#"{"p":"4","N":"3","generators":[["1","0","0","1"]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<MatRep>(r#"{"p":"5","N":"3","generators":[]}"#).is_err());
    }
}
