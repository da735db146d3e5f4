//! The `kummer` command line: argument parsing, dispatch and exit codes.

pub mod config;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kummer_core::bernoulli::{
    bernoulli_number, denominator_primes, staudt_clausen, BernoulliTable,
};
use kummer_core::irregular::{kummer_congruence_all, kummer_congruence_check, scan_range};
use kummer_core::modforms::{
    cusp_congruent_to_ek, delta, eigenform_mod_p, eigenform_mod_p_with_prec, eisenstein, hecke_tl,
    hecke_tl_to, QExpansion,
};
use kummer_core::padic::{teichmuller, witt_trace};
use kummer_core::ribetlat::{
    extract_cocycle, lattice_search, p_conjugate, reduce, semisimplification_signature,
    CharacterOrder, MatRep,
};
use kummer_core::{BigInt, Error, Result};

use config::{Config, CONFIG_ENV};
use render::{
    emit, BernoulliOut, Format, KummerOut, Render, ScanOut, StaudtClausenOut, TeichmullerOut,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "kummer",
    version,
    about = "Bernoulli numbers, irregular primes, modular forms mod p and stable lattices"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Print a header row in CSV output.
    #[arg(long, global = true)]
    header: bool,
    /// Configuration file (overrides $KUMMER_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// B_k as numerator/denominator.
    Bernoulli { k: u64 },
    /// W_k = B_k + Σ_{(l-1)|k} 1/l, an integer.
    StaudtClausen { k: u64 },
    /// Irregular-prime detection.
    #[command(subcommand)]
    Irregular(IrregularCmd),
    /// L(ω^{k-1}, 0) ≡ -B_k/k (mod p), for one k or all even k ≤ p-3.
    KummerCheck { p: u64, k: Option<u64> },
    /// Teichmüller lift of a to ℤ/p^N.
    Teichmuller { a: BigInt, p: u64, n: Option<u32> },
    /// S_k(p^s)/p^s and its distance to B_k for s = 1..=SMAX.
    Witt { k: u64, p: u64, smax: u32 },
    /// q-expansion of E_j.
    Eisenstein {
        j: u32,
        #[arg(long)]
        prec: usize,
    },
    /// q-expansion of Δ.
    Delta {
        #[arg(long)]
        prec: usize,
    },
    /// T_l applied to a q-expansion read from JSON.
    Hecke {
        l: u64,
        #[arg(long)]
        weight: Option<u32>,
        /// Output precision; defaults to floor(prec(f)/l).
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long)]
        form: PathBuf,
    },
    /// Integral cusp form h ≡ E_k (mod p).
    CuspCongruent { p: u64, k: u32 },
    /// Normalised mod-p eigenform with a_l ≡ 1 + l^{k-1}.
    Eigenform {
        p: u64,
        k: u32,
        #[arg(long)]
        lmax: Option<u64>,
        #[arg(long)]
        prec: Option<usize>,
    },
    /// 2×2 representations over ℤ/p^N.
    #[command(subcommand)]
    Ribet(RibetCmd),
}

#[derive(Subcommand, Debug)]
enum IrregularCmd {
    /// All irregular pairs (p, k) with min ≤ p ≤ max.
    Scan {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct RepArgs {
    #[arg(long)]
    rep: PathBuf,
    #[arg(long)]
    word_len: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum RibetCmd {
    /// Classify the reduction mod p.
    Reduce(RepArgs),
    /// Conjugate by P = diag(1, p).
    Pconj(RepArgs),
    /// Lattice search for a non-split upper reduction.
    Search {
        #[command(flatten)]
        rep: RepArgs,
        /// Diagonal slot (1 or 2) whose character goes upper-left.
        #[arg(long, default_value = "1")]
        order: CharacterOrder,
        #[arg(long)]
        max_iter: Option<u32>,
    },
    /// Off-diagonal cocycle of an upper-triangular reduction.
    Cocycle(RepArgs),
    /// Characteristic polynomials mod p over bounded words.
    Signature(RepArgs),
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) | Error::RingMismatch(..) | Error::PrecisionExhausted(_) => {
            EXIT_PRECONDITION
        }
        Error::NotFound(_) => EXIT_NOT_FOUND,
        _ => EXIT_FAILURE,
    }
}

fn config_path(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Run the command line and return the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = match config_path(cli.config.as_deref()) {
        Some(path) => Config::load(&path)?,
        None => Config::default(),
    };
    let table = BernoulliTable::global();
    let cached = match &cfg.cache_path {
        Some(path) if path.exists() => {
            table.load(path)?;
            table.max_index()
        }
        _ => 0,
    };
    let code = dispatch(cli, &cfg, out)?;
    if let Some(path) = &cfg.cache_path {
        if table.max_index() > cached || !path.exists() {
            table.save(path)?;
        }
    }
    Ok(code)
}

fn put<R: Render>(v: R, fmt: Format, header: bool, out: &mut dyn Write) -> Result<i32> {
    emit(&v, fmt, header, out)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, cfg: &Config, out: &mut dyn Write) -> Result<i32> {
    let (fmt, header) = (cli.format, cli.header);
    match &cli.command {
        Command::Bernoulli { k } => {
            let b = bernoulli_number(*k);
            put(
                BernoulliOut {
                    k: *k,
                    numerator: b.numer().to_string(),
                    denominator: b.denom().to_string(),
                },
                fmt,
                header,
                out,
            )
        }
        Command::StaudtClausen { k } => {
            let w = staudt_clausen(*k)?;
            put(
                StaudtClausenOut {
                    k: *k,
                    w: w.to_string(),
                    primes: denominator_primes(*k)?.into_iter().collect(),
                    denominator: bernoulli_number(*k).denom().to_string(),
                },
                fmt,
                header,
                out,
            )
        }
        Command::Irregular(IrregularCmd::Scan { min, max, workers }) => {
            let pairs = scan_range(*min, *max, workers.unwrap_or(cfg.workers))?;
            put(
                ScanOut {
                    min: *min,
                    max: *max,
                    pairs,
                },
                fmt,
                header,
                out,
            )
        }
        Command::KummerCheck { p, k } => {
            let reports = match k {
                Some(k) => vec![kummer_congruence_check(*p, *k)?],
                None => kummer_congruence_all(*p)?,
            };
            let all_equal = reports.iter().all(|r| r.equal);
            let v = KummerOut { p: *p, reports };
            emit(&v, fmt, header, out)?;
            Ok(if all_equal { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Teichmuller { a, p, n } => {
            let n = n.unwrap_or(cfg.precision);
            let w = teichmuller(a, *p, n)?;
            put(
                TeichmullerOut {
                    a: a.to_string(),
                    p: *p,
                    precision: n,
                    residue: w.residue().to_string(),
                },
                fmt,
                header,
                out,
            )
        }
        Command::Witt { k, p, smax } => put(witt_trace(*k, *p, *smax)?, fmt, header, out),
        Command::Eisenstein { j, prec } => put(eisenstein(*j, *prec)?, fmt, header, out),
        Command::Delta { prec } => put(delta(*prec)?, fmt, header, out),
        Command::Hecke {
            l,
            weight,
            prec,
            form,
        } => {
            let f: QExpansion = read_json(form)?;
            if let Some(w) = weight {
                if *w != f.weight() {
                    return Err(Error::Precondition(format!(
                        "--weight {w} but the form has weight {}",
                        f.weight()
                    )));
                }
            }
            let g = match prec {
                Some(m) => hecke_tl_to(&f, *l, *m)?,
                None => hecke_tl(&f, *l)?,
            };
            put(g, fmt, header, out)
        }
        Command::CuspCongruent { p, k } => put(cusp_congruent_to_ek(*p, *k)?, fmt, header, out),
        Command::Eigenform { p, k, lmax, prec } => {
            let l_max = lmax.unwrap_or(cfg.l_max);
            let f = match prec {
                Some(m) => eigenform_mod_p_with_prec(*p, *k, l_max, *m)?,
                None => eigenform_mod_p(*p, *k, l_max)?,
            };
            let ambiguous = f.ambiguous;
            emit(&f, fmt, header, out)?;
            Ok(if ambiguous { EXIT_NOT_FOUND } else { EXIT_OK })
        }
        Command::Ribet(cmd) => ribet(cmd, cfg, fmt, header, out),
    }
}

fn ribet(
    cmd: &RibetCmd,
    cfg: &Config,
    fmt: Format,
    header: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let load = |a: &RepArgs| -> Result<(MatRep, usize)> {
        Ok((read_json(&a.rep)?, a.word_len.unwrap_or(cfg.word_len)))
    };
    match cmd {
        RibetCmd::Reduce(a) => {
            let (rep, len) = load(a)?;
            put(reduce(&rep, len)?, fmt, header, out)
        }
        RibetCmd::Pconj(a) => put(p_conjugate(&load(a)?.0)?, fmt, header, out),
        RibetCmd::Search {
            rep,
            order,
            max_iter,
        } => {
            let (rep, _) = load(rep)?;
            let n = max_iter.unwrap_or(rep.precision());
            put(lattice_search(&rep, *order, n)?, fmt, header, out)
        }
        RibetCmd::Cocycle(a) => {
            let (rep, len) = load(a)?;
            put(extract_cocycle(&rep, len)?, fmt, header, out)
        }
        RibetCmd::Signature(a) => {
            let (rep, len) = load(a)?;
            put(semisimplification_signature(&rep, len)?, fmt, header, out)
        }
    }
}
