//! Output records and their JSON, CSV and text renderings.

use std::io::Write;

use kummer_core::irregular::{IrregularPair, KummerReport};
use kummer_core::modforms::{CuspCongruence, ModPEigenform, QExpansion};
use kummer_core::padic::WittTrace;
use kummer_core::ribetlat::{
    CocycleTable, LatticeSearch, MatRep, ReductionReport, Signature, StableLines,
};
use kummer_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A CSV view: column names and rows of decimal strings.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub trait Render: Serialize {
    fn table(&self) -> Table;

    /// Defaults to the CSV rows without a header.
    fn text(&self) -> String {
        let t = self.table();
        t.rows.iter().map(|r| r.join(",") + "\n").collect()
    }
}

pub fn emit<R: Render>(value: &R, format: Format, header: bool, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            let s = serde_json::to_string(value).map_err(|e| Error::Internal(e.to_string()))?;
            writeln!(out, "{s}")?;
        }
        Format::Csv => {
            let t = value.table();
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Io(e.to_string());
            if header {
                w.write_record(&t.header).map_err(csv_err)?;
            }
            for row in &t.rows {
                w.write_record(row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            out.write_all(&bytes)?;
        }
        Format::Text => out.write_all(value.text().as_bytes())?,
    }
    Ok(())
}

fn row<const N: usize>(cells: [String; N]) -> Vec<String> {
    cells.to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliOut {
    #[serde(with = "kummer_core::wire::dec")]
    pub k: u64,
    pub numerator: String,
    pub denominator: String,
}

impl Render for BernoulliOut {
    fn table(&self) -> Table {
        Table {
            header: vec!["k", "numerator", "denominator"],
            rows: vec![row([
                self.k.to_string(),
                self.numerator.clone(),
                self.denominator.clone(),
            ])],
        }
    }

    fn text(&self) -> String {
        format!("{}/{}\n", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaudtClausenOut {
    #[serde(with = "kummer_core::wire::dec")]
    pub k: u64,
    /// `B_k + Σ_{(l-1) | k} 1/l`.
    pub w: String,
    #[serde(with = "kummer_core::wire::dec_vec")]
    pub primes: Vec<u64>,
    pub denominator: String,
}

impl Render for StaudtClausenOut {
    fn table(&self) -> Table {
        let primes = self
            .primes
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        Table {
            header: vec!["k", "w", "primes", "denominator"],
            rows: vec![row([
                self.k.to_string(),
                self.w.clone(),
                primes,
                self.denominator.clone(),
            ])],
        }
    }

    fn text(&self) -> String {
        format!("{}\n", self.w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOut {
    #[serde(with = "kummer_core::wire::dec")]
    pub min: u64,
    #[serde(with = "kummer_core::wire::dec")]
    pub max: u64,
    pub pairs: Vec<IrregularPair>,
}

impl Render for ScanOut {
    fn table(&self) -> Table {
        Table {
            header: vec!["p", "k"],
            rows: self
                .pairs
                .iter()
                .map(|x| row([x.p.to_string(), x.k.to_string()]))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerOut {
    #[serde(with = "kummer_core::wire::dec")]
    pub p: u64,
    pub reports: Vec<KummerReport>,
}

impl Render for KummerOut {
    fn table(&self) -> Table {
        Table {
            header: vec!["p", "k", "lhs", "rhs", "equal"],
            rows: self
                .reports
                .iter()
                .map(|r| {
                    row([
                        r.p.to_string(),
                        r.k.to_string(),
                        r.lhs.to_string(),
                        r.rhs.to_string(),
                        r.equal.to_string(),
                    ])
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeichmullerOut {
    pub a: String,
    #[serde(with = "kummer_core::wire::dec")]
    pub p: u64,
    #[serde(rename = "N", with = "kummer_core::wire::dec")]
    pub precision: u32,
    pub residue: String,
}

impl Render for TeichmullerOut {
    fn table(&self) -> Table {
        Table {
            header: vec!["a", "p", "N", "residue"],
            rows: vec![row([
                self.a.clone(),
                self.p.to_string(),
                self.precision.to_string(),
                self.residue.clone(),
            ])],
        }
    }

    fn text(&self) -> String {
        format!("{}\n", self.residue)
    }
}

fn valuation_cell(v: Option<i64>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

impl Render for WittTrace {
    fn table(&self) -> Table {
        Table {
            header: vec!["s", "value", "valuation"],
            rows: self
                .rows
                .iter()
                .map(|r| {
                    row([
                        r.s.to_string(),
                        r.value.to_string(),
                        valuation_cell(r.valuation),
                    ])
                })
                .collect(),
        }
    }
}

impl Render for QExpansion {
    fn table(&self) -> Table {
        Table {
            header: vec!["n", "coefficient"],
            rows: self
                .coefficient_strings()
                .into_iter()
                .enumerate()
                .map(|(n, c)| row([n.to_string(), c]))
                .collect(),
        }
    }

    fn text(&self) -> String {
        format!("{self}\n")
    }
}

impl Render for CuspCongruence {
    fn table(&self) -> Table {
        Table {
            header: vec!["c", "d", "coordinate"],
            rows: self
                .basis
                .iter()
                .zip(&self.coordinates)
                .map(|(&(c, d), x)| row([c.to_string(), d.to_string(), x.to_string()]))
                .collect(),
        }
    }

    fn text(&self) -> String {
        let coords = self
            .coordinates
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        format!("coordinates: {coords}\nh = {}\n", self.form)
    }
}

impl Render for ModPEigenform {
    fn table(&self) -> Table {
        Table {
            header: vec!["l", "eigenvalue"],
            rows: self
                .eigenvalues
                .iter()
                .map(|e| row([e.l.to_string(), e.value.to_string()]))
                .collect(),
        }
    }

    fn text(&self) -> String {
        let coords = self
            .coordinates
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let mut s = format!("coordinates: {coords}\nf = {}\n", self.form);
        for e in &self.eigenvalues {
            s += &format!("a_{} = {}\n", e.l, e.value);
        }
        if self.ambiguous {
            s += &format!(
                "ambiguous: eigenspace of dimension {}\n",
                self.eigenspace_dim
            );
        }
        s
    }
}

fn matrix_rows(rep: &MatRep) -> Vec<Vec<String>> {
    rep.generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let [a, b, c, d] = g.entries().map(|x| x.residue().to_string());
            row([i.to_string(), a, b, c, d])
        })
        .collect()
}

impl Render for MatRep {
    fn table(&self) -> Table {
        Table {
            header: vec!["generator", "a", "b", "c", "d"],
            rows: matrix_rows(self),
        }
    }

    fn text(&self) -> String {
        let mut s = format!("p = {}, N = {}\n", self.p(), self.precision());
        for g in self.generators() {
            let [a, b, c, d] = g.entries().map(|x| x.residue().to_string());
            s += &format!("[[{a}, {b}], [{c}, {d}]]\n");
        }
        s
    }
}

impl Render for ReductionReport {
    fn table(&self) -> Table {
        let rows = (0..self.phi1.len())
            .map(|i| {
                row([
                    i.to_string(),
                    self.kind.as_str().to_string(),
                    self.phi1[i].to_string(),
                    self.phi2[i].to_string(),
                    self.split.to_string(),
                ])
            })
            .collect();
        Table {
            header: vec!["generator", "type", "phi1", "phi2", "split"],
            rows,
        }
    }

    fn text(&self) -> String {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let lines = match &self.stable_lines {
            StableLines::All => "all".to_string(),
            StableLines::Finite { lines } if lines.is_empty() => "none".to_string(),
            StableLines::Finite { lines } => lines
                .iter()
                .map(|l| format!("[{}:{}]", l.x, l.y))
                .collect::<Vec<_>>()
                .join(" "),
        };
        format!(
            "type: {}\nphi1: {}\nphi2: {}\nsplit: {}\nstable lines: {lines}\n",
            self.kind.as_str(),
            list(&self.phi1),
            list(&self.phi2),
            self.split
        )
    }
}

impl Render for LatticeSearch {
    fn table(&self) -> Table {
        let mut rows = matrix_rows(&self.rep);
        for r in &mut rows {
            r.insert(0, self.outcome.as_str().to_string());
            r.insert(1, self.iteration.to_string());
        }
        Table {
            header: vec!["outcome", "iteration", "generator", "a", "b", "c", "d"],
            rows,
        }
    }

    fn text(&self) -> String {
        let m = &self.conjugator.matrix;
        format!(
            "outcome: {}\niteration: {}\nconjugator: [[{}, {}], [{}, {}]] * p^{}\n{}",
            self.outcome.as_str(),
            self.iteration,
            m[0],
            m[1],
            m[2],
            m[3],
            self.conjugator.p_power,
            self.rep.text()
        )
    }
}

impl Render for CocycleTable {
    fn table(&self) -> Table {
        Table {
            header: vec!["generator", "gamma", "phi1", "phi2"],
            rows: (0..self.gamma.len())
                .map(|i| {
                    row([
                        i.to_string(),
                        self.gamma[i].to_string(),
                        self.phi1[i].to_string(),
                        self.phi2[i].to_string(),
                    ])
                })
                .collect(),
        }
    }
}

impl Render for Signature {
    fn table(&self) -> Table {
        Table {
            header: vec!["trace", "det", "count"],
            rows: self
                .polys
                .iter()
                .map(|c| row([c.trace.to_string(), c.det.to_string(), c.count.to_string()]))
                .collect(),
        }
    }
}
