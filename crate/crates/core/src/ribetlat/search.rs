use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{Mat2, MatRep};
use super::reduce::{p_conjugate, reduce, solve_affine, ReductionType, Solutions, StableLines};
use crate::arith::{inv_mod, mul_mod};
use crate::error::{precondition, Error, Result};
use crate::padic::{modulus, PadicInt};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Which diagonal character of the input reduction must end up in the
/// upper-left corner. For a reduction with no stable coordinate line, slot 1
/// is the character on the first stable line and slot 2 its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharacterOrder {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

impl FromStr for CharacterOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "first" | "phi1" => Ok(Self::First),
            "2" | "second" | "phi2" => Ok(Self::Second),
            other => Err(Error::Parse(format!(
                "character order must be 1 or 2, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    NonSplitUpper,
    ReducibleWithinPrecision,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::NonSplitUpper => "non-split-upper",
            Self::ReducibleWithinPrecision => "reducible-within-precision",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrepStep {
    /// Moved a stable line onto `e_1`.
    LineToE1,
    /// Moved a stable line onto `e_2`.
    LineToE2,
    /// Conjugated by `P = diag(1, p)`.
    PConjugate,
}

/// `X = p^{p_power} · matrix`, with `X ρ X⁻¹` the returned representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugator {
    #[serde(with = "crate::wire::dec_vec")]
    pub matrix: Vec<BigInt>,
    #[serde(with = "crate::wire::dec")]
    pub p_power: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSearch {
    pub outcome: Outcome,
    /// Level `i` at which the search stopped.
    #[serde(with = "crate::wire::dec")]
    pub iteration: u32,
    pub preparation: Vec<PrepStep>,
    pub conjugator: Conjugator,
    pub rep: MatRep,
    #[serde(with = "crate::wire::dec")]
    pub nodes: u64,
}

type IntMat = [BigInt; 4];

fn int_identity() -> IntMat {
    [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()]
}

fn int_mul(x: &IntMat, y: &IntMat) -> IntMat {
    [
        &x[0] * &y[0] + &x[1] * &y[2],
        &x[0] * &y[1] + &x[1] * &y[3],
        &x[2] * &y[0] + &x[3] * &y[2],
        &x[2] * &y[1] + &x[3] * &y[3],
    ]
}

fn int_mat(e: [i64; 4]) -> IntMat {
    e.map(BigInt::from)
}

fn to_mat2(m: &IntMat, p: u64, precision: u32) -> Mat2 {
    let e = m.clone().map(|x| PadicInt::from_bigint(p, precision, &x));
    let [a, b, c, d] = e;
    Mat2::from_entries(a, b, c, d)
}

/// Eigenvalue of a reduced generator on a line it fixes.
fn character_on(g: [u64; 4], (x, y): (u64, u64), p: u64) -> u64 {
    let [a, b, c, d] = g;
    if x != 0 {
        mul_mod(
            (mul_mod(a, x, p) + mul_mod(b, y, p)) % p,
            inv_mod(x, p).unwrap(),
            p,
        )
    } else {
        mul_mod(
            (mul_mod(c, x, p) + mul_mod(d, y, p)) % p,
            inv_mod(y, p).unwrap(),
            p,
        )
    }
}

/// An integral invertible matrix sending the line `(x, y)` to `e_1`
/// (`to_first`) or `e_2`.
fn line_mover((x, _): (u64, u64), is_e1: bool, to_first: bool) -> Option<IntMat> {
    let t = BigInt::from(x);
    match (is_e1, to_first) {
        (true, true) => None,
        (true, false) => Some(int_mat([0, 1, 1, 0])),
        (false, true) => Some([BigInt::zero(), BigInt::one(), BigInt::one(), -t]),
        (false, false) if x == 0 => None,
        (false, false) => Some([BigInt::one(), -t, BigInt::zero(), BigInt::one()]),
    }
}

/// Bring `rep` to a lattice whose reduction is upper triangular with the
/// requested character in the upper-left corner. If a stable line carries
/// that character it is moved to `e_1` by an integral change of basis;
/// otherwise the line carrying the other character goes to `e_2` and `P`
/// turns the lower form into an upper one, costing one digit.
fn prepare(rep: &MatRep, order: CharacterOrder) -> Result<(MatRep, IntMat, Vec<PrepStep>)> {
    let p = rep.p();
    let report = reduce(rep, 1)?;
    let lines: Vec<(u64, u64)> = match &report.stable_lines {
        StableLines::All => vec![(1, 0), (0, 1)],
        StableLines::Finite { lines } => lines.iter().map(|l| (l.x, l.y)).collect(),
    };
    precondition!(
        !lines.is_empty(),
        "the reduction mod p is irreducible; no lattice gives a triangular reduction"
    );
    let gens: Vec<[u64; 4]> = rep.generators().iter().map(Mat2::residues_mod_p).collect();
    let chars_on =
        |l: (u64, u64)| -> Vec<u64> { gens.iter().map(|&g| character_on(g, l, p)).collect() };
    let slot_line = match report.kind {
        ReductionType::Upper | ReductionType::Diagonal => (1, 0),
        ReductionType::Lower => (0, 1),
        ReductionType::Full => lines[0],
    };
    let first: Vec<u64> = match report.kind {
        ReductionType::Full => chars_on(slot_line),
        _ => report.phi1.clone(),
    };
    let wanted = match (order, report.kind) {
        (CharacterOrder::First, _) => first,
        (CharacterOrder::Second, ReductionType::Full) => {
            // determinant / first character
            gens.iter()
                .zip(&first)
                .map(|(&g, &f)| {
                    let det = (mul_mod(g[0], g[3], p) + p - mul_mod(g[1], g[2], p)) % p;
                    mul_mod(det, inv_mod(f, p).unwrap(), p)
                })
                .collect()
        }
        (CharacterOrder::Second, _) => report.phi2.clone(),
    };
    let is_e1 = |l: (u64, u64)| l == (1, 0);
    let mut conj = int_identity();
    let mut steps = Vec::new();
    let mut cur = rep.clone();
    let apply = |cur: &mut MatRep, m: IntMat, conj: &mut IntMat| -> Result<()> {
        *cur = cur.conjugate_by(&to_mat2(&m, p, cur.precision()))?;
        *conj = int_mul(&m, conj);
        Ok(())
    };
    // prefer the coordinate line already in place
    let mut ordered = lines.clone();
    ordered.sort_by_key(|&l| !is_e1(l));
    if let Some(&l) = ordered.iter().find(|&&l| chars_on(l) == wanted) {
        if let Some(m) = line_mover(l, is_e1(l), true) {
            apply(&mut cur, m, &mut conj)?;
            steps.push(PrepStep::LineToE1);
        }
    } else {
        let l = ordered[0];
        if let Some(m) = line_mover(l, is_e1(l), false) {
            apply(&mut cur, m, &mut conj)?;
            steps.push(PrepStep::LineToE2);
        }
        cur = p_conjugate(&cur)?;
        conj = int_mul(
            &[
                BigInt::one(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::from(p),
            ],
            &conj,
        );
        steps.push(PrepStep::PConjugate);
    }
    Ok((cur, conj, steps))
}

/// Upper-right entry of `[[1, t], [0, 1]] g [[1, -t], [0, 1]]`.
fn upper_right(g: &Mat2, t: &PadicInt) -> PadicInt {
    &(&g.b + &(t * &(&g.d - &g.a))) - &(&(t * t) * &g.c)
}

struct Dfs<'a> {
    rep: &'a MatRep,
    max_iter: u32,
    budget: u64,
    nodes: u64,
    deepest: Option<(u32, BigInt)>,
}

impl Dfs<'_> {
    fn visit(&mut self, i: u32, t: &BigInt) -> Result<Option<BigInt>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Resource(format!(
                "lattice search exceeded its budget of {} nodes",
                self.budget
            )));
        }
        if i == self.max_iter {
            return Ok(Some(t.clone()));
        }
        let (p, n) = (self.rep.p(), self.rep.precision());
        let tp = PadicInt::from_bigint(p, n, t);
        let pi = modulus(p, i);
        let conditions: Vec<(u64, u64)> = self
            .rep
            .generators()
            .iter()
            .map(|g| {
                let f = upper_right(g, &tp);
                debug_assert!((f.residue() % &pi).is_zero());
                let beta = (f.residue() / &pi) % p;
                let beta = u64::try_from(beta).unwrap();
                let delta = (g.d.mod_p() + p - g.a.mod_p()) % p;
                (beta, delta)
            })
            .collect();
        let step = BigInt::from(pi);
        match solve_affine(conditions, p) {
            Solutions::Empty => {
                if self.deepest.as_ref().is_none_or(|(j, _)| i > *j) {
                    self.deepest = Some((i, t.clone()));
                }
                Ok(None)
            }
            Solutions::One(u) => self.visit(i + 1, &(t + &step * u)),
            Solutions::All => {
                for u in 0..p {
                    if let Some(found) = self.visit(i + 1, &(t + &step * u))? {
                        return Ok(Some(found));
                    }
                }
                Ok(None)
            }
        }
    }
}

pub fn lattice_search(rep: &MatRep, order: CharacterOrder, max_iter: u32) -> Result<LatticeSearch> {
    lattice_search_with_budget(rep, order, max_iter, DEFAULT_NODE_BUDGET)
}

/// Search for `t` with `M_t = [[1, t], [0, 1]]` making every generator
/// upper-right entry vanish mod `p^{max_iter}`, level by level: at level `i`
/// the digit `u` solves `b̄_i + u (d̄ - ā) = 0` over 𝔽_p. When no digit
/// exists, conjugating by `P^i` exhibits a non-split upper reduction.
///
/// A degenerate step (every `d̄ = ā` and every `b̄_i = 0`) allows all `p`
/// digits and the search branches. A surviving branch wins; otherwise the
/// deepest dead end is reported.
pub fn lattice_search_with_budget(
    rep: &MatRep,
    order: CharacterOrder,
    max_iter: u32,
    budget: u64,
) -> Result<LatticeSearch> {
    precondition!(
        max_iter <= rep.precision(),
        "max_iter {max_iter} exceeds the precision N = {}",
        rep.precision()
    );
    let (prepared, c0, preparation) = prepare(rep, order)?;
    let (p, n) = (prepared.p(), prepared.precision());
    if max_iter > n {
        return Err(Error::PrecisionExhausted(format!(
            "after {} preparation steps only {n} digits remain, fewer than max_iter = {max_iter}",
            preparation.len()
        )));
    }
    let mut dfs = Dfs {
        rep: &prepared,
        max_iter,
        budget,
        nodes: 0,
        deepest: None,
    };
    let found = dfs.visit(0, &BigInt::zero())?;
    let nodes = dfs.nodes;
    let m = |t: &BigInt| [BigInt::one(), t.clone(), BigInt::zero(), BigInt::one()];
    if let Some(t) = found {
        let out = prepared.conjugate_by(&to_mat2(&m(&t), p, n))?;
        return Ok(LatticeSearch {
            outcome: Outcome::ReducibleWithinPrecision,
            iteration: max_iter,
            preparation,
            conjugator: Conjugator {
                matrix: int_mul(&m(&t), &c0).to_vec(),
                p_power: 0,
            },
            rep: out,
            nodes,
        });
    }
    let (i, t) = dfs.deepest.expect("a failed search has a dead end");
    let shifted = prepared.conjugate_by(&to_mat2(&m(&t), p, n))?;
    let out = shifted.map(n - i, |g| {
        Ok(Mat2::from_entries(
            g.a.clone(),
            g.b.div_p_pow(i)?,
            g.c.mul_p_pow(i),
            g.d.clone(),
        )
        .truncate(n - i))
    })?;
    let pi = [
        BigInt::one(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::from(modulus(p, i)),
    ];
    Ok(LatticeSearch {
        outcome: Outcome::NonSplitUpper,
        iteration: i,
        preparation,
        conjugator: Conjugator {
            matrix: int_mul(&int_mul(&pi, &m(&t)), &c0).to_vec(),
            p_power: 0,
        },
        rep: out,
        nodes,
    })
}
