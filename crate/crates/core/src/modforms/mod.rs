//! Level-one modular forms as truncated q-expansions over ℚ, ℤ and 𝔽_p.
//!
//! Eisenstein series keep the normalisation `E_j = -B_j/2j + Σ σ_{j-1}(n) q^n`.
//! Cusp spaces are handled in the basis `Δ Ẽ_4^c Ẽ_6^d`, where `Ẽ_4`, `Ẽ_6`
//! are rescaled to constant term 1 so the basis is integral with `a_1 = 1`.

mod eigen;
mod forms;
mod hecke;
mod qexp;

pub use eigen::{
    cusp_congruent_to_ek, cusp_congruent_to_ek_with_prec, eigenform_mod_p,
    eigenform_mod_p_with_prec, CuspCongruence, Eigenvalue, ModPEigenform,
};
pub use forms::{
    cusp_basis_forms, delta, determination_bound, eisenstein, eisenstein_normalized,
    monomial_basis, sigma, MonomialBasis,
};
pub use hecke::{hecke_tl, hecke_tl_to, CuspBasisModP, HeckeMatrix};
pub use qexp::{QExpansion, Ring};
