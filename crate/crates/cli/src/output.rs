//! Atomic file output and the JSON sidecar written next to every artifact.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// C99 hex-float spelling of `x`, exact and parseable by `strtod`.
pub fn hex_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    if x == 0.0 {
        return format!("{sign}0x0p+0");
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, exp) = if biased == 0 { (0, -1022) } else { (1, biased - 1023) };
    let digits = format!("{frac:013x}");
    let digits = digits.trim_end_matches('0');
    let dot = if digits.is_empty() { "" } else { "." };
    format!("{sign}0x{lead}{dot}{digits}p{exp:+}")
}

/// A double recorded both readably and exactly.
#[derive(Debug, Clone, Serialize)]
pub struct Exact {
    pub value: f64,
    pub hex: String,
}

impl From<f64> for Exact {
    fn from(value: f64) -> Self {
        // serde_json cannot write non-finite numbers; the hex field carries them.
        Exact {
            value: if value.is_finite() { value } else { f64::MAX.copysign(value) },
            hex: hex_f64(value),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub corr_step: Exact,
    pub fine_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sidecar {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub model: String,
    pub bound: Option<String>,
    pub unit: &'static str,
    pub params: BTreeMap<String, Exact>,
    pub grid: GridMeta,
    pub full_range: bool,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
    pub wall_time_s: f64,
}

pub fn write_sidecar(output: &Path, sidecar: &Sidecar) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(sidecar).expect("sidecar serializes");
    write_atomic(&sidecar_path(output), format!("{json}\n").as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trips() {
        for x in [1.0, -2.5, 0.1, 1e-310, f64::MAX, f64::MIN_POSITIVE, 0.5 * 5f64.log2()] {
            let h = hex_f64(x);
            assert_eq!(hexf_parse::parse_hexf64(&h, false).unwrap(), x, "{h}");
        }
        assert_eq!(hex_f64(1.0), "0x1p+0");
        assert_eq!(hex_f64(3.0), "0x1.8p+1");
        assert_eq!(hex_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"a").unwrap();
        write_atomic(&p, b"bc").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"bc");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
