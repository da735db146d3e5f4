use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::qexp::QExpansion;
use crate::arith::divisors;
use crate::bernoulli::bernoulli_number;
use crate::error::{precondition, Result};

/// `σ_i(n) = Σ_{d | n} d^i`.
pub fn sigma(i: u32, n: u64) -> Result<BigInt> {
    precondition!(n >= 1, "σ needs n >= 1");
    Ok(divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(i))
        .sum())
}

/// `E_j = -B_j/2j + Σ_{n>0} σ_{j-1}(n) q^n` over ℚ.
pub fn eisenstein(j: u32, prec: usize) -> Result<QExpansion> {
    precondition!(
        j >= 4 && j % 2 == 0,
        "Eisenstein series need even weight >= 4, got {j}"
    );
    let mut coeffs = Vec::with_capacity(prec + 1);
    coeffs.push(-bernoulli_number(j as u64) / BigRational::from(BigInt::from(2 * j)));
    for n in 1..=prec as u64 {
        coeffs.push(BigRational::from(sigma(j - 1, n)?));
    }
    Ok(QExpansion::from_rationals(j, coeffs))
}

/// `E_j` rescaled to constant term 1; integral for `j = 4, 6`
/// (`1 + 240 Σ σ_3(n) q^n` and `1 - 504 Σ σ_5(n) q^n`).
pub fn eisenstein_normalized(j: u32, prec: usize) -> Result<QExpansion> {
    let e = eisenstein(j, prec)?;
    let c0 = e.coefficient(0);
    let coeffs = e.coefficients().into_iter().map(|c| c / &c0).collect();
    Ok(QExpansion::from_rationals(j, coeffs))
}

/// Integral `E_4`, `E_6` with constant term 1.
pub(crate) fn integral_e4_e6(prec: usize) -> Result<(QExpansion, QExpansion)> {
    Ok((
        eisenstein_normalized(4, prec)?.to_integer()?,
        eisenstein_normalized(6, prec)?.to_integer()?,
    ))
}

/// `Δ = q Π_{n>0} (1 - q^n)^24`, coefficients `τ(n)`, weight 12.
pub fn delta(prec: usize) -> Result<QExpansion> {
    precondition!(prec >= 1, "Δ needs prec >= 1");
    // Π_{n<=prec-1} (1 - q^n) to q^{prec-1}
    let m = prec - 1;
    let mut euler = vec![BigInt::zero(); m + 1];
    euler[0] = BigInt::one();
    for n in 1..=m {
        for e in (n..=m).rev() {
            let t = euler[e - n].clone();
            euler[e] -= t;
        }
    }
    let eta = QExpansion::from_integers(0, euler);
    let e2 = eta.multiply(&eta)?;
    let e4 = e2.multiply(&e2)?;
    let e8 = e4.multiply(&e4)?;
    let e16 = e8.multiply(&e8)?;
    let e24 = e16.multiply(&e8)?;
    let mut coeffs = vec![BigInt::zero()];
    coeffs.extend(e24.integers().expect("integer product").iter().cloned());
    Ok(QExpansion::from_integers(12, coeffs))
}

/// Monomials `E_4^c E_6^d` spanning `M_k(1)` and the cusp monomials
/// `Δ E_4^c E_6^d` spanning `S_k(1)`, ordered by descending `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBasis {
    pub weight: u32,
    pub entries: Vec<(u32, u32)>,
    pub cusp_entries: Vec<(u32, u32)>,
}

fn solutions(total: i64) -> Vec<(u32, u32)> {
    if total < 0 {
        return Vec::new();
    }
    (0..=total / 4)
        .rev()
        .filter(|c| (total - 4 * c) % 6 == 0)
        .map(|c| (c as u32, ((total - 4 * c) / 6) as u32))
        .collect()
}

impl MonomialBasis {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn cusp_dim(&self) -> usize {
        self.cusp_entries.len()
    }
}

pub fn monomial_basis(k: u32) -> Result<MonomialBasis> {
    precondition!(
        k >= 4 && k % 2 == 0,
        "weight must be even and >= 4, got {k}"
    );
    Ok(MonomialBasis {
        weight: k,
        entries: solutions(k as i64),
        cusp_entries: solutions(k as i64 - 12),
    })
}

/// `dim M_k(1) + 1`: weight-`k` forms are compared on `a_0..=a_bound`.
pub fn determination_bound(k: u32) -> Result<usize> {
    Ok(monomial_basis(k)?.dim() + 1)
}

/// Cusp monomials `Δ Ẽ_4^c Ẽ_6^d` over ℤ, with `Ẽ_4`, `Ẽ_6` normalised to
/// constant term 1 so that every basis form is integral with `a_1 = 1`.
pub fn cusp_basis_forms(k: u32, prec: usize) -> Result<Vec<QExpansion>> {
    let basis = monomial_basis(k)?;
    let (e4, e6) = integral_e4_e6(prec)?;
    let d = delta(prec.max(1))?;
    basis
        .cusp_entries
        .iter()
        .map(|&(c, e)| {
            let f = d.multiply(&e4.pow(c)?)?.multiply(&e6.pow(e)?)?;
            Ok(f.with_weight(k).truncate(prec))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(11, 2).unwrap(), BigInt::from(2049));
        assert_eq!(sigma(7, 1).unwrap(), BigInt::one());
        assert_eq!(sigma(0, 6).unwrap(), BigInt::from(4));
        assert!(sigma(3, 0).is_err());
    }

    #[test]
    fn eisenstein_constant_terms() {
        assert_eq!(eisenstein(4, 3).unwrap().coefficient(0), q(1, 240));
        assert_eq!(eisenstein(6, 3).unwrap().coefficient(0), q(-1, 504));
        let e12 = eisenstein(12, 3).unwrap();
        assert_eq!(e12.coefficient(1), q(1, 1));
        assert_eq!(e12.coefficient(2), q(2049, 1));
        assert!(eisenstein(2, 3).is_err());
        assert!(eisenstein(7, 3).is_err());
    }

    #[test]
    fn tau_values() {
        let d = delta(10).unwrap();
        let tau: Vec<BigInt> = d.integers().unwrap().to_vec();
        let expected = [
            0i64, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920,
        ];
        assert_eq!(
            tau,
            expected
                .iter()
                .map(|&t| BigInt::from(t))
                .collect::<Vec<_>>()
        );
        assert_eq!(d.weight(), 12);
    }

    #[test]
    fn delta_from_eisenstein_cubes() {
        // independent route: 1728 Δ = Ẽ_4^3 - Ẽ_6^2
        let (e4, e6) = integral_e4_e6(30).unwrap();
        let lhs = e4
            .pow(3)
            .unwrap()
            .add(&e6.pow(2).unwrap().scale(&BigInt::from(-1)))
            .unwrap();
        let rhs = delta(30).unwrap().scale(&BigInt::from(1728));
        assert!(lhs.agrees_with(&rhs, 30));
    }

    #[test]
    fn basis_enumeration() {
        let b = monomial_basis(12).unwrap();
        assert_eq!(b.entries, vec![(3, 0), (0, 2)]);
        assert_eq!(b.cusp_entries, vec![(0, 0)]);
        assert_eq!(monomial_basis(16).unwrap().cusp_entries, vec![(1, 0)]);
        let b4 = monomial_basis(4).unwrap();
        assert_eq!(b4.entries, vec![(1, 0)]);
        assert!(b4.cusp_entries.is_empty());
        assert_eq!(monomial_basis(14).unwrap().cusp_dim(), 0);
        assert!(monomial_basis(2).is_err());
    }

    #[test]
    fn dimension_formula() {
        for k in (4..200u32).step_by(2) {
            let expected = if k % 12 == 2 { k / 12 } else { k / 12 + 1 };
            assert_eq!(monomial_basis(k).unwrap().dim(), expected as usize, "k={k}");
            let b = monomial_basis(k).unwrap();
            assert!(b.entries.iter().all(|&(c, d)| 4 * c + 6 * d == k));
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(determination_bound(12).unwrap(), 3);
        assert_eq!(determination_bound(4).unwrap(), 2);
        assert_eq!(determination_bound(32).unwrap(), 4);
    }

    #[test]
    fn delta_times_e4() {
        let f = delta(5)
            .unwrap()
            .to_rational()
            .unwrap()
            .multiply(&eisenstein(4, 5).unwrap())
            .unwrap();
        assert_eq!(f.coefficient(1), q(1, 240));
        assert_eq!(f.weight(), 16);
    }
}
