//! Acceptance suite: one PASS/FAIL line per criterion, each under its time
//! limit.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kummer_cli::render::{BernoulliOut, KummerOut, ScanOut, StaudtClausenOut, TeichmullerOut};
use kummer_core::arith::{bigint_mod, is_prime, mul_mod, pow_mod};
use kummer_core::bernoulli::{bernoulli_number, power_sum, power_sum_mod_p, staudt_clausen};
use kummer_core::irregular::{kummer_congruence_all, scan_range, IrregularPair};
use kummer_core::modforms::{
    delta, eigenform_mod_p, sigma, CuspCongruence, ModPEigenform, QExpansion,
};
use kummer_core::padic::{witt_trace, WittTrace};
use kummer_core::ribetlat::{
    extract_cocycle, lattice_search, p_conjugate, reduce, semisimplification_signature,
    CharacterOrder, CocycleTable, LatticeSearch, Mat2, MatRep, Outcome, ReductionReport,
    ReductionType, Signature,
};
use kummer_core::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn bernoulli_table() -> Check {
    let n = [1i64, -1, 1, -1, 5, -691, 7, -3617, 43867, -174611];
    let d = [6i64, 30, 42, 30, 66, 2730, 6, 510, 798, 330];
    for (i, (&n, &d)) in n.iter().zip(&d).enumerate() {
        let k = 2 * (i as u64 + 1);
        let b = bernoulli_number(k);
        ensure!(
            b.numer() == &BigInt::from(n) && b.denom() == &BigInt::from(d),
            "B_{k} = {b}"
        );
    }
    Ok(())
}

fn staudt_clausen_range() -> Check {
    for k in (2..=200u64).step_by(2) {
        let w = staudt_clausen(k).map_err(|e| e.to_string())?;
        ensure!(w.is_integer(), "W_{k} = {w}");
        let product: BigInt = (1..=k)
            .filter(|d| {
                k % d == 0
                    && (2..=(d + 1))
                        .take_while(|q| q * q <= d + 1)
                        .all(|q| (d + 1) % q != 0)
            })
            .map(|d| BigInt::from(d + 1))
            .product();
        let den = bernoulli_number(k).denom().clone();
        ensure!(
            den == product,
            "denominator of B_{k} is {den}, product is {product}"
        );
    }
    Ok(())
}

fn irregular_witnesses() -> Check {
    let pairs = scan_range(2, 109, 4).map_err(|e| e.to_string())?;
    let expected: Vec<IrregularPair> = [(37, 32), (59, 44), (67, 58), (101, 68), (103, 24)]
        .iter()
        .map(|&(p, k)| IrregularPair { p, k })
        .collect();
    ensure!(pairs == expected, "scan gave {pairs:?}");
    for (p, k) in [
        (283u64, 20u64),
        (617, 20),
        (691, 12),
        (3617, 16),
        (43867, 18),
    ] {
        ensure!(
            bigint_mod(bernoulli_number(k).numer(), p) == 0,
            "{p} does not divide n_{k}"
        );
    }
    Ok(())
}

fn kummer_congruences() -> Check {
    for p in (5..200).filter(|&p| is_prime(p)) {
        let reports = kummer_congruence_all(p).map_err(|e| e.to_string())?;
        ensure!(
            reports.len() as u64 == (p - 3) / 2,
            "p = {p}: {} reports",
            reports.len()
        );
        for r in reports {
            ensure!(r.equal, "p = {p}, k = {}: {} vs {}", r.k, r.lhs, r.rhs);
        }
    }
    Ok(())
}

fn power_sums_mod_p() -> Check {
    for p in (3..100).filter(|&p| is_prime(p)) {
        for k in (2..=60u64).step_by(2) {
            let expected = if k % (p - 1) == 0 { p - 1 } else { 0 };
            let got = power_sum_mod_p(k, p).map_err(|e| e.to_string())?;
            let exact = power_sum(k, p).map_err(|e| e.to_string())?;
            ensure!(got == expected, "S_{k}({p}) = {got} mod {p}");
            ensure!(
                bigint_mod(&exact.value, p) == expected,
                "exact S_{k}({p}) disagrees"
            );
        }
    }
    Ok(())
}

fn witt_limits() -> Check {
    for p in [3u64, 5, 7] {
        for k in [2u64, 4, 6, 12] {
            let t: WittTrace = witt_trace(k, p, 4).map_err(|e| e.to_string())?;
            ensure!(
                t.consecutive_differences_integral(),
                "k = {k}, p = {p}: non-integral difference"
            );
            ensure!(
                t.valuations_non_decreasing(),
                "k = {k}, p = {p}: valuations decrease"
            );
        }
    }
    Ok(())
}

fn delta_mod_691() -> Check {
    let d = delta(200).map_err(|e| e.to_string())?;
    let tau = d.integers().ok_or("Δ is not integral")?;
    for n in 1..=200u64 {
        let s = sigma(11, n).map_err(|e| e.to_string())?;
        ensure!(
            bigint_mod(&tau[n as usize], 691) == bigint_mod(&s, 691),
            "n = {n}"
        );
    }
    for l in (2..=100).filter(|&l| is_prime(l)) {
        ensure!(
            bigint_mod(&tau[l as usize], 691) == (1 + pow_mod(l, 11, 691)) % 691,
            "l = {l}"
        );
    }
    Ok(())
}

fn eigenforms() -> Check {
    for (p, k) in [
        (691u64, 12u32),
        (3617, 16),
        (37, 32),
        (59, 44),
        (67, 58),
        (101, 68),
        (103, 24),
    ] {
        let f = eigenform_mod_p(p, k, 13).map_err(|e| format!("({p},{k}): {e}"))?;
        let a = f.form.residues().ok_or("form is not over F_p")?;
        ensure!(a[1] == 1, "({p},{k}) not normalised");
        for l in (2..=13u64).filter(|&l| is_prime(l)) {
            ensure!(
                a[l as usize] == (1 + pow_mod(l, k as u64 - 1, p)) % p,
                "({p},{k}) a_{l} = {}",
                a[l as usize]
            );
        }
    }
    Ok(())
}

const P: u64 = 5;
const N: u32 = 8;

fn rand_unit(rng: &mut ChaCha8Rng, m: i64) -> i64 {
    loop {
        let x = rng.gen_range(0..m);
        if x % P as i64 != 0 {
            return x;
        }
    }
}

fn rand_invertible(rng: &mut ChaCha8Rng, m: i64) -> Mat2 {
    loop {
        let e = [0; 4].map(|_| rng.gen_range(0..m));
        if (e[0] * e[3] - e[1] * e[2]).rem_euclid(P as i64) != 0 {
            return Mat2::from_i64(P, N, e).unwrap();
        }
    }
}

fn residues(m: &Mat2) -> [BigInt; 4] {
    m.entries().map(|e| BigInt::from(e.residue().clone()))
}

fn ribet_suite() -> Check {
    let m = (P as i64).pow(N);
    let pn1 = BigInt::from(P).pow(N - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let err = |e: kummer_core::Error| e.to_string();

    // (a) P-conjugation swap
    for trial in 0..50 {
        let gens: Vec<[i64; 4]> = (0..rng.gen_range(1..4))
            .map(|_| {
                [
                    rand_unit(&mut rng, m),
                    rand_unit(&mut rng, m),
                    rand_unit(&mut rng, m),
                    rand_unit(&mut rng, m),
                ]
            })
            .collect();
        let lower: Vec<[i64; 4]> = gens
            .iter()
            .map(|&[a, b, c, d]| [a, P as i64 * b % m, c, d])
            .collect();
        let rep = MatRep::from_i64(P, N, &lower).map_err(err)?;
        ensure!(
            reduce(&rep, 2).map_err(err)?.kind == ReductionType::Lower,
            "(a) trial {trial}: not lower"
        );
        let conj = p_conjugate(&rep).map_err(err)?;
        ensure!(
            reduce(&conj, 2).map_err(err)?.kind == ReductionType::Upper,
            "(a) trial {trial}: not upper"
        );
        for (&[a, b, c, d], g) in gens.iter().zip(conj.generators()) {
            let want = [
                BigInt::from(a),
                BigInt::from(b),
                BigInt::from(c) * P,
                BigInt::from(d),
            ];
            let got = residues(g);
            for (x, y) in want.iter().zip(&got) {
                ensure!(
                    ((x - y) % &pn1).is_zero(),
                    "(a) trial {trial}: entry {y} vs {x}"
                );
            }
        }
    }

    // (b) conjugated diagonal reps unwind
    let mut reps = Vec::new();
    for trial in 0..20 {
        let diag: Vec<[i64; 4]> = (0..rng.gen_range(1..3))
            .map(|_| {
                let a = rand_unit(&mut rng, m);
                let d = if trial % 3 == 0 {
                    (a + P as i64 * rng.gen_range(0..m)) % m
                } else {
                    rand_unit(&mut rng, m)
                };
                [a, 0, 0, d]
            })
            .collect();
        let c = rand_invertible(&mut rng, m);
        let rep = MatRep::from_i64(P, N, &diag)
            .map_err(err)?
            .conjugate_by(&c)
            .map_err(err)?;
        let order = if trial % 2 == 0 {
            CharacterOrder::First
        } else {
            CharacterOrder::Second
        };
        let s = lattice_search(&rep, order, N).map_err(|e| format!("(b) trial {trial}: {e}"))?;
        ensure!(
            s.outcome == Outcome::ReducibleWithinPrecision,
            "(b) trial {trial}: {:?}",
            s.outcome
        );
        ensure!(
            s.rep.generators().iter().all(|g| g.b.is_zero()),
            "(b) trial {trial}: b != 0"
        );
        reps.push(rep);
    }

    // (c) crafted non-split examples
    let p = P as i64;
    let crafted: [&[[i64; 4]]; 5] = [
        &[[1, 1, 0, 1], [1 + p, 0, 0, 1]],
        &[[1, 1, 0, 1], [1, 0, p, 1]],
        &[[1, 1, p, 1]],
        &[[1, p, 1, 1]],
        &[[1, p * p, p, 1]],
    ];
    for gens in crafted {
        let rep = MatRep::from_i64(P, N, gens).map_err(err)?;
        let s = lattice_search(&rep, CharacterOrder::First, N - 1).map_err(err)?;
        ensure!(
            s.outcome == Outcome::NonSplitUpper,
            "(c) {gens:?}: {:?}",
            s.outcome
        );
        let r = reduce(&s.rep, 4).map_err(err)?;
        ensure!(
            r.kind == ReductionType::Upper && !r.split,
            "(c) {gens:?}: reduction {r:?}"
        );
        ensure!(
            !extract_cocycle(&s.rep, 4).map_err(err)?.is_zero(),
            "(c) {gens:?}: zero cocycle"
        );
        reps.push(rep);
    }

    // (d) signatures under random admissible conjugation
    for rep in &reps {
        let sig = semisimplification_signature(rep, 3).map_err(err)?;
        for _ in 0..20 {
            let c = rand_invertible(&mut rng, m);
            let other = rep.conjugate_by(&c).map_err(err)?;
            ensure!(
                semisimplification_signature(&other, 3).map_err(err)? == sig,
                "(d) signature changed"
            );
        }
        if let Ok(pc) = p_conjugate(rep) {
            ensure!(
                semisimplification_signature(&pc, 3).map_err(err)? == sig,
                "(d) P changed the signature"
            );
        }
    }

    // (e) γ(σ τ σ⁻¹) = a d⁻¹ γ(τ)
    let sigmas = [
        [1, 0, 0, 2],
        [3, 0, 0, 1],
        [2, 7, 0, 4],
        [1 + p, p, 0, 3],
        [4, 1, 0, 4],
    ];
    let taus = [
        [1, 1, 0, 1],
        [1, 3, 0, 1],
        [1, p, 0, 1],
        [1, m - 1, 0, 1],
        [1, 12345, 0, 1],
    ];
    for s in sigmas {
        for t in taus {
            let sigma = Mat2::from_i64(P, N, s).map_err(err)?;
            let tau = Mat2::from_i64(P, N, t).map_err(err)?;
            let lhs = tau.conjugate_by(&sigma).map_err(err)?;
            let x = &(&sigma.a * &sigma.d.inverse().map_err(err)?) * &tau.b;
            let rhs = Mat2::from_entries(tau.a.clone(), x, tau.c.clone(), tau.d.clone());
            ensure!(lhs == rhs, "(e) σ = {s:?}, τ = {t:?}");
            let rep = MatRep::new(P, N, vec![tau.clone(), lhs.clone()]).map_err(err)?;
            let table = extract_cocycle(&rep, 3).map_err(err)?;
            let scale = mul_mod(
                s[0] as u64 % P,
                kummer_core::arith::inv_mod(s[3] as u64 % P, P).unwrap(),
                P,
            );
            ensure!(
                table.gamma[1] == mul_mod(scale, table.gamma[0], P),
                "(e) cocycle table"
            );
        }
    }
    Ok(())
}

fn kummer_bin(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kummer"))
        .args(args)
        .env_remove("KUMMER_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn round_trip<T: Serialize + DeserializeOwned>(args: &[&str]) -> Result<String, String> {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let text = kummer_bin(&full)?;
    let value: T = serde_json::from_str(&text).map_err(|e| format!("{args:?}: {e}"))?;
    let again = serde_json::to_string(&value).map_err(|e| e.to_string())? + "\n";
    ensure!(again == text, "{args:?}: re-serialisation differs");
    Ok(text)
}

fn cli_determinism() -> Check {
    let scan = |w: &str| {
        kummer_bin(&[
            "irregular",
            "scan",
            "--min",
            "2",
            "--max",
            "600",
            "--workers",
            w,
        ])
    };
    ensure!(scan("1")? == scan("8")?, "scan output depends on workers");
    let scan = |w: &str| {
        kummer_bin(&[
            "--format",
            "json",
            "irregular",
            "scan",
            "--min",
            "2",
            "--max",
            "600",
            "--workers",
            w,
        ])
    };
    ensure!(
        scan("1")? == scan("8")?,
        "JSON scan output depends on workers"
    );

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = |name: &str, text: &str| -> Result<String, String> {
        let path = dir.path().join(name);
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        Ok(path.to_str().unwrap().to_string())
    };
    round_trip::<BernoulliOut>(&["bernoulli", "12"])?;
    round_trip::<StaudtClausenOut>(&["staudt-clausen", "12"])?;
    round_trip::<ScanOut>(&["irregular", "scan", "--min", "3", "--max", "110"])?;
    round_trip::<KummerOut>(&["kummer-check", "37"])?;
    round_trip::<KummerOut>(&["kummer-check", "37", "32"])?;
    round_trip::<TeichmullerOut>(&["teichmuller", "2", "7", "5"])?;
    round_trip::<WittTrace>(&["witt", "12", "5", "3"])?;
    let e12 = round_trip::<QExpansion>(&["eisenstein", "12", "--prec", "30"])?;
    round_trip::<QExpansion>(&["delta", "--prec", "30"])?;
    let form = file("e12.json", &e12)?;
    round_trip::<QExpansion>(&["hecke", "3", "--weight", "12", "--form", &form])?;
    round_trip::<CuspCongruence>(&["cusp-congruent", "691", "12"])?;
    round_trip::<ModPEigenform>(&["eigenform", "37", "32", "--lmax", "7"])?;
    let rep = file(
        "rep.json",
        r#"{"p":"5","N":"6","generators":[["1","25","5","1"],["2","0","0","3"]]}"#,
    )?;
    let upper = file(
        "upper.json",
        r#"{"p":"5","N":"6","generators":[["1","1","0","1"],["6","0","0","1"]]}"#,
    )?;
    round_trip::<ReductionReport>(&["ribet", "reduce", "--rep", &rep])?;
    round_trip::<MatRep>(&["ribet", "pconj", "--rep", &rep])?;
    round_trip::<LatticeSearch>(&["ribet", "search", "--rep", &rep, "--max-iter", "5"])?;
    round_trip::<LatticeSearch>(&[
        "ribet",
        "search",
        "--rep",
        &upper,
        "--order",
        "2",
        "--max-iter",
        "4",
    ])?;
    round_trip::<CocycleTable>(&["ribet", "cocycle", "--rep", &upper])?;
    round_trip::<Signature>(&["ribet", "signature", "--rep", &upper])?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("Bernoulli golden table", 1, bernoulli_table),
        (
            "von Staudt-Clausen for even k <= 200",
            10,
            staudt_clausen_range,
        ),
        ("irregularity witnesses below 110", 60, irregular_witnesses),
        ("Kummer congruence for p < 200", 120, kummer_congruences),
        ("S_k(p) mod p case split", 10, power_sums_mod_p),
        ("Witt limit S_k(p^s)/p^s -> B_k", 30, witt_limits),
        ("Delta = E_12 mod 691", 10, delta_mod_691),
        ("mod-p Eisenstein eigenforms", 120, eigenforms),
        ("stable-lattice property suite", 30, ribet_suite),
        ("CLI determinism and JSON round trip", 60, cli_determinism),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let verdict = match (&result, elapsed <= limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {} s limit)", limit.as_secs()),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failures += 1;
        }
        println!(
            "criterion {:>2} {verdict} {name} [{:.3} s]",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
