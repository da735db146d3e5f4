use num_bigint::BigInt;
use num_rational::BigRational;

use super::forms::{cusp_basis_forms, determination_bound};
use super::qexp::{QExpansion, Ring};
use crate::arith::{self, mul_mod, pow_mod};
use crate::error::{precondition, Error, Result};
use crate::fp::FpMatrix;

/// `T_l f` with `a_n(T_l f) = a_{nl}(f) + l^{k-1} a_{n/l}(f)`, the second
/// term present only when `l | n`. Output precision is `floor(prec / l)`.
pub fn hecke_tl(f: &QExpansion, l: u64) -> Result<QExpansion> {
    hecke_tl_to(f, l, f.prec() / l as usize)
}

/// `T_l f` to a requested output precision; needs `f.prec >= l * out_prec`.
pub fn hecke_tl_to(f: &QExpansion, l: u64, out_prec: usize) -> Result<QExpansion> {
    precondition!(arith::is_prime(l), "T_l needs a prime l, got {l}");
    precondition!(f.weight() >= 1, "T_l needs a form of positive weight");
    if f.prec() < l as usize * out_prec {
        return Err(Error::Precondition(format!(
            "insufficient precision: T_{l} to q^{out_prec} needs input to q^{}, have q^{}",
            l as usize * out_prec,
            f.prec()
        )));
    }
    let l_us = l as usize;
    let k1 = f.weight() - 1;
    let out = match f.ring() {
        Ring::PrimeField(p) => {
            let a = f.residues().expect("prime-field coefficients");
            let lk = pow_mod(l, k1 as u64, p);
            let v = (0..=out_prec)
                .map(|n| {
                    let mut c = a[n * l_us];
                    if n % l_us == 0 {
                        c = (c + mul_mod(lk, a[n / l_us], p)) % p;
                    }
                    c
                })
                .collect();
            QExpansion::from_residues(f.weight(), p, v)?
        }
        Ring::Integer => {
            let a = f.integers().expect("integer coefficients");
            let lk = BigInt::from(l).pow(k1);
            let v = (0..=out_prec)
                .map(|n| {
                    let mut c = a[n * l_us].clone();
                    if n % l_us == 0 {
                        c += &lk * &a[n / l_us];
                    }
                    c
                })
                .collect();
            QExpansion::from_integers(f.weight(), v)
        }
        Ring::Rational => {
            let lk = BigRational::from(BigInt::from(l).pow(k1));
            let v = (0..=out_prec)
                .map(|n| {
                    let mut c = f.coefficient(n * l_us);
                    if n % l_us == 0 {
                        c += &lk * f.coefficient(n / l_us);
                    }
                    c
                })
                .collect();
            QExpansion::from_rationals(f.weight(), v)
        }
    };
    Ok(out)
}

/// The cusp monomials `Δ Ẽ_4^c Ẽ_6^d` of weight `k` reduced mod `p`, with
/// the coordinate map read off from `a_1..=a_dim`.
#[derive(Debug, Clone)]
pub struct CuspBasisModP {
    p: u64,
    k: u32,
    forms: Vec<QExpansion>,
    // rows n = 1..=dim, columns = basis index
    leading: FpMatrix,
}

impl CuspBasisModP {
    pub fn new(p: u64, k: u32, prec: usize) -> Result<Self> {
        precondition!(arith::is_prime(p) && p > 3, "need a prime p > 3, got {p}");
        let dim = super::forms::monomial_basis(k)?.cusp_dim();
        let prec = prec.max(dim);
        let forms = cusp_basis_forms(k, prec)?
            .iter()
            .map(|f| f.reduce_mod(p))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<u64>> = (1..=dim)
            .map(|n| forms.iter().map(|f| f.residues().unwrap()[n]).collect())
            .collect();
        let leading = FpMatrix::from_rows(p, &rows);
        if leading.rank() != dim {
            return Err(Error::Internal(format!(
                "cusp monomials of weight {k} are dependent mod {p}"
            )));
        }
        Ok(Self {
            p,
            k,
            forms,
            leading,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn prec(&self) -> usize {
        self.forms.first().map_or(0, QExpansion::prec)
    }

    pub fn forms(&self) -> &[QExpansion] {
        &self.forms
    }

    /// Coordinates of a cusp form over 𝔽_p, checked against every
    /// coefficient both sides know.
    pub fn coordinates(&self, f: &QExpansion) -> Result<Vec<u64>> {
        precondition!(
            f.ring() == Ring::PrimeField(self.p),
            "form is not over F_{}",
            self.p
        );
        let a = f.residues().unwrap();
        precondition!(f.prec() >= self.dim(), "form known only to q^{}", f.prec());
        let rhs: Vec<u64> = (1..=self.dim()).map(|n| a[n]).collect();
        let x = self
            .leading
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("singular cusp coordinate system".into()))?;
        let back = self.combination(&x);
        let upto = back.prec().min(f.prec());
        precondition!(
            back.agrees_with(&f.truncate(upto), upto),
            "form is not a cusp form of weight {}",
            self.k
        );
        Ok(x)
    }

    /// `Σ x_j b_j` over 𝔽_p.
    pub fn combination(&self, x: &[u64]) -> QExpansion {
        assert_eq!(x.len(), self.dim());
        let p = self.p;
        let mut v = vec![0u64; self.prec() + 1];
        for (xj, f) in x.iter().zip(&self.forms) {
            for (acc, &c) in v.iter_mut().zip(f.residues().unwrap()) {
                *acc = (*acc + mul_mod(*xj, c, p)) % p;
            }
        }
        QExpansion::from_residues(self.k, p, v).expect("p is prime")
    }

    /// Matrix of `T_l` on cusp coordinates: column `j` holds the coordinates
    /// of `T_l b_j`.
    pub fn hecke_matrix(&self, l: u64) -> Result<HeckeMatrix> {
        let bound = determination_bound(self.k)?;
        precondition!(
            self.prec() >= l as usize * bound,
            "basis known to q^{} but T_{l} needs q^{}",
            self.prec(),
            l as usize * bound
        );
        let mut columns = Vec::with_capacity(self.dim());
        for b in &self.forms {
            let image = hecke_tl_to(b, l, bound)?;
            let x = self
                .coordinates(&image)
                .map_err(|e| Error::Internal(format!("T_{l} image left the cusp space: {e}")))?;
            columns.push(x);
        }
        Ok(HeckeMatrix {
            l,
            k: self.k,
            p: self.p,
            matrix: FpMatrix::from_columns(self.p, self.dim(), &columns),
        })
    }
}

/// `T_l` acting on `S_k(1)_{𝔽_p}` in the cusp monomial basis.
#[derive(Debug, Clone)]
pub struct HeckeMatrix {
    pub l: u64,
    pub k: u32,
    pub p: u64,
    pub matrix: FpMatrix,
}

impl HeckeMatrix {
    pub fn new(p: u64, k: u32, l: u64) -> Result<Self> {
        let bound = determination_bound(k)?;
        CuspBasisModP::new(p, k, l as usize * bound)?.hecke_matrix(l)
    }
}
