use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::{words, Fp2, Mat2, MatRep};
use crate::arith::{inv_mod, mul_mod};
use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionType {
    /// `(φ1 *; 0 φ2)`
    Upper,
    /// `(φ1 0; * φ2)`
    Lower,
    Diagonal,
    /// Neither coordinate line is stable.
    Full,
}

impl ReductionType {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
            Self::Diagonal => "diagonal",
            Self::Full => "full",
        }
    }
}

/// A point of `P¹(𝔽_p)`, normalised to `(1, 0)` or `(t, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    #[serde(with = "crate::wire::dec")]
    pub x: u64,
    #[serde(with = "crate::wire::dec")]
    pub y: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StableLines {
    /// The reduction is scalar.
    All,
    Finite {
        lines: Vec<Line>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec")]
    pub word_len: usize,
    #[serde(rename = "type")]
    pub kind: ReductionType,
    /// Upper-left entries mod `p`, one per generator; empty for `full`.
    #[serde(with = "crate::wire::dec_vec")]
    pub phi1: Vec<u64>,
    #[serde(with = "crate::wire::dec_vec")]
    pub phi2: Vec<u64>,
    pub split: bool,
    /// Every line of `P¹(𝔽_p)` fixed by the whole reduction.
    pub stable_lines: StableLines,
}

/// Solution set of the simultaneous linear conditions `β + u δ = 0` over 𝔽_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Solutions {
    Empty,
    One(u64),
    All,
}

pub(crate) fn solve_affine(conditions: impl IntoIterator<Item = (u64, u64)>, p: u64) -> Solutions {
    let mut fixed: Option<u64> = None;
    let mut constants = Vec::new();
    for (beta, delta) in conditions {
        if delta == 0 {
            constants.push(beta);
            continue;
        }
        let u = mul_mod((p - beta) % p, inv_mod(delta, p).unwrap(), p);
        match fixed {
            None => fixed = Some(u),
            Some(v) if v != u => return Solutions::Empty,
            Some(_) => {}
        }
    }
    if constants.iter().any(|&b| b != 0) {
        return Solutions::Empty;
    }
    fixed.map_or(Solutions::All, Solutions::One)
}

fn sub(x: u64, y: u64, p: u64) -> u64 {
    (x + p - y) % p
}

/// Classify the reduction mod `p` of the group generated by `rep`, on the
/// generators and on every word of length at most `word_len` in the
/// generators and their inverses.
pub fn reduce(rep: &MatRep, word_len: usize) -> Result<ReductionReport> {
    precondition!(word_len >= 1, "word length must be at least 1");
    let p = rep.p();
    let ws = words(&rep.letters(), word_len);
    let upper = ws.iter().all(|w| w.e[2] == 0);
    let lower = ws.iter().all(|w| w.e[1] == 0);
    let kind = match (upper, lower) {
        (true, true) => ReductionType::Diagonal,
        (true, false) => ReductionType::Upper,
        (false, true) => ReductionType::Lower,
        (false, false) => ReductionType::Full,
    };
    let split = match kind {
        ReductionType::Diagonal => true,
        ReductionType::Full => false,
        ReductionType::Upper => {
            solve_affine(ws.iter().map(|w| (w.e[1], sub(w.e[3], w.e[0], p))), p) != Solutions::Empty
        }
        ReductionType::Lower => {
            solve_affine(ws.iter().map(|w| (w.e[2], sub(w.e[0], w.e[3], p))), p) != Solutions::Empty
        }
    };
    let (phi1, phi2) = if kind == ReductionType::Full {
        (Vec::new(), Vec::new())
    } else {
        rep.generators()
            .iter()
            .map(|g| (g.a.mod_p(), g.d.mod_p()))
            .unzip()
    };
    Ok(ReductionReport {
        p,
        word_len,
        kind,
        phi1,
        phi2,
        split,
        stable_lines: common_stable_lines(&ws),
    })
}

fn common_stable_lines(ws: &[Fp2]) -> StableLines {
    let Some(first) = ws.iter().find_map(|w| w.stable_lines()) else {
        return StableLines::All;
    };
    let lines = first
        .into_iter()
        .filter(|&l| ws.iter().all(|w| w.fixes_line(l)))
        .map(|(x, y)| Line { x, y })
        .collect();
    StableLines::Finite { lines }
}

/// Conjugation by `P = diag(1, p)`: `[[a, p b], [c, d]] ↦ [[a, b], [p c, d]]`.
///
/// Every upper-right entry must be divisible by `p`, otherwise the result is
/// not integral. The quotient `b` is known one digit less precisely, so the
/// result has precision `N - 1`.
pub fn p_conjugate(rep: &MatRep) -> Result<MatRep> {
    shift(rep, true)
}

/// Conjugation by `P⁻¹`: `[[a, b], [p c, d]] ↦ [[a, p b], [c, d]]`.
pub fn p_conjugate_inverse(rep: &MatRep) -> Result<MatRep> {
    shift(rep, false)
}

fn shift(rep: &MatRep, forward: bool) -> Result<MatRep> {
    let n = rep.precision();
    if n <= 1 {
        return Err(Error::PrecisionExhausted(format!(
            "conjugating by P at precision {n} leaves none"
        )));
    }
    let slot = if forward { "upper-right" } else { "lower-left" };
    for (i, g) in rep.generators().iter().enumerate() {
        let x = if forward { &g.b } else { &g.c };
        precondition!(
            x.mod_p() == 0,
            "{slot} entry of generator {i} is a unit, so the conjugate by P is not integral"
        );
    }
    rep.map(n - 1, |g| {
        let (b, c) = if forward {
            (g.b.div_p_pow(1)?, g.c.mul_p_pow(1))
        } else {
            (g.b.mul_p_pow(1), g.c.div_p_pow(1)?)
        };
        Ok(Mat2::from_entries(g.a.clone(), b, c, g.d.clone()).truncate(n - 1))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharPolyCount {
    #[serde(with = "crate::wire::dec")]
    pub trace: u64,
    #[serde(with = "crate::wire::dec")]
    pub det: u64,
    #[serde(with = "crate::wire::dec")]
    pub count: usize,
}

/// Multiset of characteristic polynomials `x² - t x + d` mod `p` over all
/// words of length at most `word_len`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec")]
    pub word_len: usize,
    pub polys: Vec<CharPolyCount>,
}

pub fn semisimplification_signature(rep: &MatRep, word_len: usize) -> Result<Signature> {
    precondition!(word_len >= 1, "word length must be at least 1");
    let mut counts: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for w in words(&rep.letters(), word_len) {
        *counts.entry((w.trace(), w.det())).or_default() += 1;
    }
    Ok(Signature {
        p: rep.p(),
        word_len,
        polys: counts
            .into_iter()
            .map(|((trace, det), count)| CharPolyCount { trace, det, count })
            .collect(),
    })
}

/// The off-diagonal map `γ` of an upper-triangular reduction, with the
/// characters on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleTable {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec_vec")]
    pub gamma: Vec<u64>,
    #[serde(with = "crate::wire::dec_vec")]
    pub phi1: Vec<u64>,
    #[serde(with = "crate::wire::dec_vec")]
    pub phi2: Vec<u64>,
    /// Number of products `σ·s` on which `γ(σs) = φ1(σ)γ(s) + γ(σ)φ2(s)`
    /// was verified.
    #[serde(with = "crate::wire::dec")]
    pub words_checked: usize,
}

impl CocycleTable {
    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(|&g| g == 0)
    }
}

pub fn extract_cocycle(rep: &MatRep, word_len: usize) -> Result<CocycleTable> {
    let report = reduce(rep, word_len)?;
    precondition!(
        matches!(report.kind, ReductionType::Upper | ReductionType::Diagonal),
        "type mismatch: reduction is {}, expected upper",
        report.kind.as_str()
    );
    let p = rep.p();
    let letters = rep.letters();
    let prefixes = words(&letters, word_len.saturating_sub(1).max(1));
    let mut checked = 0;
    for s in &prefixes {
        for t in &letters {
            let st = s.mul(t);
            let [a1, b1, _, d1] = s.e;
            let [a2, b2, _, d2] = t.e;
            let gamma = (mul_mod(a1, b2, p) + mul_mod(b1, d2, p)) % p;
            if st.e[1] != gamma || st.e[0] != mul_mod(a1, a2, p) || st.e[3] != mul_mod(d1, d2, p) {
                return Err(Error::Internal(format!(
                    "cocycle rule fails on a word of length <= {word_len}"
                )));
            }
            checked += 1;
        }
    }
    let gens = rep.generators();
    Ok(CocycleTable {
        p,
        gamma: gens.iter().map(|g| g.b.mod_p()).collect(),
        phi1: report.phi1,
        phi2: report.phi2,
        words_checked: checked,
    })
}
