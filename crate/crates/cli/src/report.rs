//! Deterministic JSON report envelope.
//!
//! Field order is fixed by struct declaration order, floats are written
//! with 17 significant digits, and the wall-time field is omitted in
//! deterministic mode — two runs with the same argv produce byte-identical
//! output.

use num_complex::Complex64;
use serde::Serialize;

use halfplane_iso_core::Config;

#[derive(Serialize)]
pub struct SettingsEcho {
    pub p: Option<f64>,
    pub n: Option<u32>,
    pub k: Option<f64>,
    pub battery: Option<String>,
    pub deterministic: bool,
    pub tau_trim: f64,
    pub tau_cluster: f64,
    pub tau_gcd: f64,
    pub tau_pf: f64,
    pub tau_pole: f64,
    pub tau_boundary: f64,
    pub tau_slope: f64,
    pub tau_real: f64,
    pub degree_cap: usize,
    pub root_sweeps: usize,
    pub seed: u64,
}

impl SettingsEcho {
    pub fn new(cfg: &Config, deterministic: bool) -> Self {
        Self {
            p: None,
            n: None,
            k: None,
            battery: None,
            deterministic,
            tau_trim: cfg.tau_trim,
            tau_cluster: cfg.tau_cluster,
            tau_gcd: cfg.tau_gcd,
            tau_pf: cfg.tau_pf,
            tau_pole: cfg.tau_pole,
            tau_boundary: cfg.tau_boundary,
            tau_slope: cfg.tau_slope,
            tau_real: cfg.tau_real,
            degree_cap: cfg.degree_cap,
            root_sweeps: cfg.root_sweeps,
            seed: cfg.seed,
        }
    }
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool_version: &'static str,
    pub command: String,
    pub input_expression: String,
    pub parsed_num: Vec<Complex64>,
    pub parsed_den: Vec<Complex64>,
    pub settings: SettingsEcho,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes with fixed field order and 17-significant-digit floats.
pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits17);
    value
        .serialize(&mut ser)
        .expect("report types always serialize");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        x: f64,
        n: u32,
        z: Complex64,
    }

    #[test]
    fn floats_carry_17_significant_digits() {
        let s = to_json(&Sample {
            x: std::f64::consts::PI,
            n: 3,
            z: Complex64::new(0.5, -2.0),
        });
        // Complex numbers serialize as [re, im] pairs.
        assert_eq!(
            s,
            "{\"x\":3.1415926535897931e0,\"n\":3,\"z\":[5.0000000000000000e-1,-2.0000000000000000e0]}"
        );
    }

    #[test]
    fn output_is_reproducible() {
        let a = to_json(&Sample {
            x: 1.0 / 3.0,
            n: 1,
            z: Complex64::new(0.0, 0.0),
        });
        let b = to_json(&Sample {
            x: 1.0 / 3.0,
            n: 1,
            z: Complex64::new(0.0, 0.0),
        });
        assert_eq!(a, b);
    }
}
