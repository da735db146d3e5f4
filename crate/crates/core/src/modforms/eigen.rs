use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::forms::{cusp_basis_forms, determination_bound, eisenstein, monomial_basis};
use super::hecke::CuspBasisModP;
use super::qexp::QExpansion;
use crate::arith::{self, bigint_mod, inv_mod, mul_mod, pow_mod};
use crate::bernoulli::bernoulli_number;
use crate::error::{precondition, Error, Result};
use crate::fp::FpMatrix;

/// An integral cusp form `h ≡ E_k (mod p)` and its coordinates in the cusp
/// monomial basis `Δ Ẽ_4^c Ẽ_6^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspCongruence {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec")]
    pub k: u32,
    pub basis: Vec<(u32, u32)>,
    #[serde(with = "crate::wire::dec_vec")]
    pub coordinates: Vec<u64>,
    pub form: QExpansion,
}

fn check_pair(p: u64, k: u32) -> Result<()> {
    precondition!(arith::is_prime(p), "{p} is not prime");
    precondition!(
        p > 7,
        "p must exceed 7 so that 240 and 504 are units, got {p}"
    );
    precondition!(k >= 4 && k % 2 == 0, "k must be even and >= 4, got {k}");
    precondition!(
        (k as u64) % (p - 1) != 0,
        "(p-1) | k: B_{k} is not p-integral"
    );
    let b = bernoulli_number(k as u64);
    precondition!(
        bigint_mod(b.numer(), p) == 0,
        "{p} does not divide the numerator of B_{k}, so E_{k} is not cuspidal mod {p}"
    );
    Ok(())
}

pub fn cusp_congruent_to_ek(p: u64, k: u32) -> Result<CuspCongruence> {
    let prec = 2 * determination_bound(k)?;
    cusp_congruent_to_ek_with_prec(p, k, prec)
}

/// Solve `Ē_k = Σ x_j b̄_j` on `a_1..=a_dim` over 𝔽_p and lift `x` to
/// `[0, p)`.
pub fn cusp_congruent_to_ek_with_prec(p: u64, k: u32, prec: usize) -> Result<CuspCongruence> {
    check_pair(p, k)?;
    let basis = CuspBasisModP::new(p, k, prec)?;
    let e_bar = eisenstein(k, prec)?.reduce_mod(p)?;
    debug_assert_eq!(e_bar.residues().unwrap()[0], 0);
    let coordinates = basis.coordinates(&e_bar).map_err(|e| match e {
        Error::Precondition(m) => {
            Error::Internal(format!("reduced E_{k} is not in the cusp span: {m}"))
        }
        other => other,
    })?;
    let integral = cusp_basis_forms(k, prec)?;
    let mut form = QExpansion::zero(k, super::Ring::Integer, prec);
    for (x, b) in coordinates.iter().zip(&integral) {
        form = form.add(&b.scale(&BigInt::from(*x)))?;
    }
    Ok(CuspCongruence {
        p,
        k,
        basis: monomial_basis(k)?.cusp_entries,
        coordinates,
        form,
    })
}

/// A normalised simultaneous Hecke eigenvector over 𝔽_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPEigenform {
    #[serde(with = "crate::wire::dec")]
    pub p: u64,
    #[serde(with = "crate::wire::dec")]
    pub k: u32,
    #[serde(with = "crate::wire::dec")]
    pub l_max: u64,
    #[serde(with = "crate::wire::dec_vec")]
    pub coordinates: Vec<u64>,
    pub form: QExpansion,
    /// `(l, λ_l)` read off the Hecke matrices.
    pub eigenvalues: Vec<Eigenvalue>,
    /// Dimension of the common eigenspace that was left after `T_{l_max}`.
    #[serde(with = "crate::wire::dec")]
    pub eigenspace_dim: usize,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    #[serde(with = "crate::wire::dec")]
    pub l: u64,
    #[serde(with = "crate::wire::dec")]
    pub value: u64,
}

pub fn eigenform_mod_p(p: u64, k: u32, l_max: u64) -> Result<ModPEigenform> {
    let bound = determination_bound(k)?;
    eigenform_mod_p_with_prec(p, k, l_max, l_max as usize * bound)
}

/// Cut `S_k(1)_{𝔽_p}` down to the common kernel of `T_l - (1 + l^{k-1})` for
/// primes `l <= l_max`, then pick the lexicographically least coordinate
/// vector with `a_1 = 1`.
pub fn eigenform_mod_p_with_prec(p: u64, k: u32, l_max: u64, prec: usize) -> Result<ModPEigenform> {
    check_pair(p, k)?;
    precondition!(l_max >= 2, "l_max must be at least 2");
    let bound = determination_bound(k)?;
    let basis = CuspBasisModP::new(p, k, prec.max(l_max as usize * bound))?;
    let dim = basis.dim();
    let primes = arith::primes_in(2, l_max);

    // columns of `space` span the current common eigenspace
    let mut space = FpMatrix::identity(p, dim);
    let mut matrices = Vec::with_capacity(primes.len());
    for &l in &primes {
        let t = basis.hecke_matrix(l)?.matrix;
        let lambda = (1 + pow_mod(l, k as u64 - 1, p)) % p;
        let kernel = t.shift(lambda).mul(&space).kernel();
        if kernel.is_empty() {
            return Err(Error::NotFound(format!(
                "no mod-{p} eigenvector with T_{l} eigenvalue {lambda} in weight {k}"
            )));
        }
        let coeffs = FpMatrix::from_columns(p, space.cols(), &kernel);
        space = space.mul(&coeffs);
        matrices.push((l, t));
    }

    let a1: Vec<u64> = basis
        .forms()
        .iter()
        .map(|f| f.residues().unwrap()[1])
        .collect();
    let coordinates = least_normalised(&space, &a1).ok_or_else(|| {
        Error::NotFound(format!(
            "common eigenspace in weight {k} mod {p} has no vector with a_1 != 0"
        ))
    })?;

    let mut eigenvalues = Vec::with_capacity(matrices.len());
    for (l, t) in &matrices {
        let image = t.mul_vec(&coordinates);
        let value = eigenvalue_of(&coordinates, &image, p)
            .ok_or_else(|| Error::Internal(format!("T_{l} does not act by a scalar")))?;
        eigenvalues.push(Eigenvalue { l: *l, value });
    }
    let form = basis.combination(&coordinates).truncate(prec);
    Ok(ModPEigenform {
        p,
        k,
        l_max,
        coordinates,
        form,
        eigenvalues,
        eigenspace_dim: space.cols(),
        ambiguous: space.cols() > 1,
    })
}

fn eigenvalue_of(v: &[u64], image: &[u64], p: u64) -> Option<u64> {
    let pivot = v.iter().position(|&x| x != 0)?;
    let lambda = mul_mod(image[pivot], inv_mod(v[pivot], p)?, p);
    v.iter()
        .zip(image)
        .all(|(&x, &y)| mul_mod(x, lambda, p) == y)
        .then_some(lambda)
}

/// Lexicographically least `x` in the column span of `space` with
/// `a1 · x = 1`, fixing one coordinate at a time.
fn least_normalised(space: &FpMatrix, a1: &[u64]) -> Option<Vec<u64>> {
    let p = space.p();
    let r = space.cols();
    let dim = space.rows();
    // constraints on the parameter vector y (x = space · y)
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    let norm_row: Vec<u64> = (0..r)
        .map(|j| (0..dim).fold(0, |acc, i| (acc + mul_mod(a1[i], space[(i, j)], p)) % p))
        .collect();
    rows.push(norm_row);
    rhs.push(1);
    FpMatrix::from_rows(p, &rows).solve(&rhs)?;
    for i in 0..dim {
        let coord_row = space.row(i).to_vec();
        let mut with = rows.clone();
        with.push(coord_row.clone());
        let determined =
            FpMatrix::from_rows(p, &with).rank() == FpMatrix::from_rows(p, &rows).rank();
        if !determined {
            rows.push(coord_row);
            rhs.push(0);
        }
    }
    let y = FpMatrix::from_rows(p, &rows).solve(&rhs)?;
    Some(space.mul_vec(&y))
}
