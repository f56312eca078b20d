//! Tolerance and limit configuration shared by all numeric layers.

use crate::error::{Error, Result};

/// Tunable tolerances and limits. Every threshold used by the library is
/// collected here so a single config file can override all of them.
#[derive(Clone, Debug)]
pub struct Config {
    /// Relative threshold for dropping trailing polynomial coefficients.
    pub tau_trim: f64,
    /// Absolute root-clustering radius after scaling roots to unit
    /// magnitude order; also decides simple vs repeated poles.
    pub tau_cluster: f64,
    /// Numerator/denominator roots closer than this (same scaling as
    /// `tau_cluster`) are cancelled as a common factor. True common factors
    /// reproduce to root-finder accuracy (~1e-14), while iterated self-maps
    /// legitimately interlace zeros and poles at gaps as small as ~1e-8;
    /// the threshold has to separate those two populations.
    pub tau_gcd: f64,
    /// Relative tolerance for partial-fraction reconstruction probes and
    /// composition agreement probes.
    pub tau_pf: f64,
    /// Relative denominator-magnitude threshold below which evaluation
    /// reports a pole.
    pub tau_pole: f64,
    /// Boundary-modulus tolerance for unimodularity sampling on the circle.
    pub tau_boundary: f64,
    /// Relative tolerance on `|slope − 1|` in the classifier.
    pub tau_slope: f64,
    /// Tolerance for treating floating-point values as real.
    pub tau_real: f64,
    /// Maximum admissible polynomial degree for symbolic results.
    pub degree_cap: usize,
    /// Iteration budget for the simultaneous root finder.
    pub root_sweeps: usize,
    /// Seed for all internally generated probe points and test batteries.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tau_trim: 1e-12,
            tau_cluster: 1e-7,
            tau_gcd: 1e-12,
            tau_pf: 1e-8,
            tau_pole: 1e-12,
            tau_boundary: 1e-6,
            tau_slope: 1e-9,
            tau_real: 1e-8,
            degree_cap: 64,
            root_sweeps: 200,
            seed: 0x4850_4953,
        }
    }
}

/// Environment variable consulted by [`Config::apply_env`] for the seed.
pub const SEED_ENV_VAR: &str = "HALFPLANE_ISO_SEED";

impl Config {
    /// Parses `key = value` text (one pair per line, `#` starts a comment)
    /// on top of the defaults. Unknown keys are rejected so typos in a
    /// config file do not silently fall back to defaults.
    pub fn from_kv_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(idx) => &raw[..idx],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                detail: format!("line {}: expected `key = value`, got `{raw}`", lineno + 1),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|e| Error::Config {
                detail: format!("line {}: {e}", lineno + 1),
            })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn f(v: &str) -> std::result::Result<f64, String> {
            v.parse::<f64>().map_err(|_| format!("`{v}` is not a number"))
        }
        fn u(v: &str) -> std::result::Result<usize, String> {
            v.parse::<usize>().map_err(|_| format!("`{v}` is not an integer"))
        }
        match key {
            "tau_trim" => self.tau_trim = f(value)?,
            "tau_cluster" => self.tau_cluster = f(value)?,
            "tau_gcd" => self.tau_gcd = f(value)?,
            "tau_pf" => self.tau_pf = f(value)?,
            "tau_pole" => self.tau_pole = f(value)?,
            "tau_boundary" => self.tau_boundary = f(value)?,
            "tau_slope" => self.tau_slope = f(value)?,
            "tau_real" => self.tau_real = f(value)?,
            "degree_cap" => self.degree_cap = u(value)?,
            "root_sweeps" => self.root_sweeps = u(value)?,
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| format!("`{value}` is not a u64"))?
            }
            other => return Err(format!("unknown config key `{other}`")),
        }
        Ok(())
    }

    /// Overrides the seed from `HALFPLANE_ISO_SEED` when set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(raw) = std::env::var(SEED_ENV_VAR) {
            self.seed = raw.parse::<u64>().map_err(|_| Error::Config {
                detail: format!("{SEED_ENV_VAR}=`{raw}` is not a u64"),
            })?;
        }
        Ok(())
    }
}
