//! Exact computational number theory around Kummer's criterion and the
//! Herbrand–Ribet theorem.
//!
//! - [`bernoulli`]: exact Bernoulli numbers, power sums, von Staudt–Clausen.
//! - [`padic`]: fixed-precision p-adic integers, Teichmüller lifts, the
//!   p-adic limit `S_k(p^s)/p^s -> B_k`.
//! - [`irregular`]: Kummer's criterion, `L(ω^i, 0)` and the Kummer congruence.
//! - [`modforms`]: level-one q-expansions over ℚ, ℤ and 𝔽_p, Hecke operators,
//!   the cusp form congruent to `E_k` and mod-p eigenform search.
//! - [`ribetlat`]: stable-lattice search for 2×2 representations over ℤ/p^N.
//!
//! All arithmetic is exact; nothing in this crate touches floating point.

pub mod arith;
pub mod bernoulli;
mod error;
pub mod fp;
pub mod irregular;
pub mod modforms;
pub mod padic;
pub mod ribetlat;
pub mod wire;

pub use error::{Error, Result};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
