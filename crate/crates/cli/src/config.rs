//! Flat `key = value` configuration.

use std::path::{Path, PathBuf};

use kummer_core::{Error, Result};

pub const CONFIG_ENV: &str = "KUMMER_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Bernoulli table cache; no caching when unset.
    pub cache_path: Option<PathBuf>,
    pub precision: u32,
    pub workers: usize,
    pub word_len: usize,
    pub l_max: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cache_path: None,
            precision: 20,
            workers: 4,
            word_len: kummer_core::ribetlat::DEFAULT_WORD_LEN,
            l_max: 13,
        }
    }
}

impl Config {
    /// Read `path`; a missing file yields the defaults.
    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || {
                Error::Parse(format!(
                    "config line {}: bad value {value:?} for {key}",
                    lineno + 1
                ))
            };
            match key {
                "cache_path" => cfg.cache_path = (!value.is_empty()).then(|| PathBuf::from(value)),
                "precision" => cfg.precision = positive(value).ok_or_else(bad)?,
                "workers" => cfg.workers = positive(value).ok_or_else(bad)?,
                "word_len" => cfg.word_len = positive(value).ok_or_else(bad)?,
                "l_max" => cfg.l_max = positive(value).filter(|&l| l >= 2).ok_or_else(bad)?,
                other => {
                    return Err(Error::Parse(format!(
                        "config line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(s: &str) -> Option<T> {
    s.parse().ok().filter(|v| *v > T::default())
}
