//! Run configuration: model, bound, channel parameters and grid.
//!
//! Config files are flat `key = value` lines; `#` starts a comment. Keys are
//! the long flag names without dashes (`p1`, `sz1`, `h12`, ...) plus `model`,
//! `bound`, `grid`, `fine` and `full_range`. Numbers may be decimal, `inf`, or
//! C99 hex floats such as `0x1.8p+1` (as written to the JSON sidecars).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use dbbound::ic_uc::IcUcParams;
use dbbound::mac_nf::MacNfParams;
use dbbound::mac_uc::MacUcParams;
use dbbound::regions::SweepGrid;
use dbbound::ChannelParams;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    MacNf,
    MacNfCommon,
    MacUc,
    IcUc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Db,
    Cutset,
    Nofb,
    Nocoop,
    Ozarow,
    Totalcoop,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::MacNf => "mac-nf",
            Model::MacNfCommon => "mac-nf-common",
            Model::MacUc => "mac-uc",
            Model::IcUc => "ic-uc",
        }
    }

    /// Parameter keys meaningful for this model.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Model::MacNf => &["p1", "p2", "sz", "sz1", "sz2"],
            Model::MacNfCommon => &["p1", "p2", "sz", "sv"],
            Model::MacUc => &["p1", "p2", "sz", "sz1", "sz2", "h10", "h20", "h12", "h21"],
            Model::IcUc => &["p1", "p2", "n1", "n2", "sz1", "sz2", "a", "b", "h12", "h21"],
        }
    }

    pub fn bounds(self) -> &'static [Bound] {
        match self {
            Model::MacNf | Model::MacNfCommon => &[Bound::Db, Bound::Cutset, Bound::Nofb, Bound::Ozarow],
            Model::MacUc => &[Bound::Db, Bound::Cutset, Bound::Nocoop, Bound::Totalcoop],
            Model::IcUc => &[Bound::Db, Bound::Cutset, Bound::Nocoop],
        }
    }

    pub fn default_grid(self) -> SweepGrid {
        match self {
            Model::MacNf | Model::MacNfCommon => SweepGrid::feedback_default(),
            Model::MacUc | Model::IcUc => SweepGrid::cooperation_default(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().unwrap().get_name())
    }
}

pub const PARAM_KEYS: [&str; 14] = [
    "p1", "p2", "sz", "sz1", "sz2", "sv", "h10", "h20", "h12", "h21", "n1", "n2", "a", "b",
];

/// Flag name for a field reported by the core validators.
pub fn flag_for_field(field: &str) -> &str {
    match field {
        "sigma_z2" => "sz",
        "sigma_z1_2" => "sz1",
        "sigma_z2_2" => "sz2",
        "sigma_v2" => "sv",
        "sigma_n1_2" => "n1",
        "sigma_n2_2" => "n2",
        other => other,
    }
}

/// Decimal, `inf`, or hex float.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let hex = t
        .strip_prefix('-')
        .unwrap_or(t)
        .to_ascii_lowercase()
        .starts_with("0x");
    let v = if hex {
        hexf_parse::parse_hexf64(t, false).map_err(|e| e.to_string())
    } else {
        f64::from_str(t).map_err(|e| e.to_string())
    }
    .map_err(|e| format!("`{t}` is not a number ({e})"))?;
    if v.is_nan() {
        return Err(format!("`{t}` is not a number"));
    }
    Ok(v)
}

/// Settings as read from a file or flags, before validation.
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub model: Option<Model>,
    pub bound: Option<Bound>,
    pub params: BTreeMap<&'static str, f64>,
    pub grid: Option<f64>,
    pub fine: Option<usize>,
    pub full_range: Option<bool>,
}

impl PartialConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let mut cfg = PartialConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = || format!("{origin}:{}", lineno + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}: expected `key = value`", at())))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |msg: String| CliError::Config(format!("{}: {key}: {msg}", at()));
            match key {
                "model" => {
                    cfg.model = Some(Model::from_str(value, true).map_err(bad)?);
                }
                "bound" => {
                    cfg.bound = Some(Bound::from_str(value, true).map_err(bad)?);
                }
                "grid" => cfg.grid = Some(parse_number(value).map_err(bad)?),
                "fine" => {
                    cfg.fine = Some(value.parse().map_err(|e| bad(format!("{e}")))?);
                }
                "full_range" => {
                    cfg.full_range = Some(value.parse().map_err(|e| bad(format!("{e}")))?);
                }
                _ => {
                    let k = PARAM_KEYS
                        .iter()
                        .find(|k| **k == key)
                        .ok_or_else(|| bad("unknown key".into()))?;
                    cfg.params.insert(k, parse_number(value).map_err(bad)?);
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Values set in `over` replace those in `self`.
    pub fn overlay(mut self, over: PartialConfig) -> Self {
        self.model = over.model.or(self.model);
        self.bound = over.bound.or(self.bound);
        self.params.extend(over.params);
        self.grid = over.grid.or(self.grid);
        self.fine = over.fine.or(self.fine);
        self.full_range = over.full_range.or(self.full_range);
        self
    }

    /// Validates and fills defaults. `need_bound` is false for commands that
    /// evaluate both bounds themselves.
    pub fn resolve(self, need_bound: bool) -> Result<RunConfig, CliError> {
        let model = self
            .model
            .ok_or_else(|| CliError::Config("model: not given (positional argument or `model =`)".into()))?;
        let bound = match (self.bound, need_bound) {
            (Some(b), _) => b,
            (None, true) => {
                return Err(CliError::Config(
                    "bound: not given (one of --db, --cutset, --nofb, --nocoop, --ozarow, --totalcoop)".into(),
                ))
            }
            (None, false) => Bound::Db,
        };
        if need_bound && !model.bounds().contains(&bound) {
            return Err(CliError::Config(format!("bound: `{bound}` is not available for {model}")));
        }
        if let Some(k) = self.params.keys().find(|k| !model.keys().contains(k)) {
            return Err(CliError::Config(format!("{k}: not a parameter of {model}")));
        }
        let def = model.default_grid();
        let grid = SweepGrid::new(
            self.grid.unwrap_or(def.corr_step),
            self.fine.unwrap_or(def.fine_samples),
        );
        grid.validate().map_err(|e| CliError::Config(format!("grid: {e}")))?;
        let params: BTreeMap<&'static str, f64> = model
            .keys()
            .iter()
            .map(|k| (*k, self.params.get(k).copied().unwrap_or(1.0)))
            .collect();
        let full_range = self.full_range.unwrap_or(false);
        if full_range && !(model == Model::MacNf && bound == Bound::Db) {
            return Err(CliError::Config("full_range: only applies to mac-nf --db".into()));
        }
        let cfg = RunConfig {
            model,
            bound,
            params,
            grid,
            full_range,
        };
        cfg.channel()
            .validate()
            .map_err(CliError::from_core)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub bound: Bound,
    /// Every parameter of the model, defaults filled in.
    pub params: BTreeMap<&'static str, f64>,
    pub grid: SweepGrid,
    /// Sweep the full `ρ₁₂` range instead of the reduced `α ∈ [0, α*]` range.
    pub full_range: bool,
}

impl RunConfig {
    fn get(&self, k: &str) -> f64 {
        self.params[k]
    }

    pub fn channel(&self) -> ChannelParams {
        let g = |k| self.get(k);
        match self.model {
            Model::MacNf => MacNfParams::distinct(g("p1"), g("p2"), g("sz"), g("sz1"), g("sz2")).into(),
            Model::MacNfCommon => MacNfParams::common(g("p1"), g("p2"), g("sz"), g("sv")).into(),
            Model::MacUc => MacUcParams {
                p1: g("p1"),
                p2: g("p2"),
                sigma_z2: g("sz"),
                sigma_z1_2: g("sz1"),
                sigma_z2_2: g("sz2"),
                h10: g("h10"),
                h20: g("h20"),
                h12: g("h12"),
                h21: g("h21"),
            }
            .into(),
            Model::IcUc => IcUcParams {
                p1: g("p1"),
                p2: g("p2"),
                sigma_n1_2: g("n1"),
                sigma_n2_2: g("n2"),
                sigma_z1_2: g("sz1"),
                sigma_z2_2: g("sz2"),
                a: g("a"),
                b: g("b"),
                h12: g("h12"),
                h21: g("h21"),
            }
            .into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_and_overlays_flags() {
        let text = "# unit\nmodel = mac-nf\nbound = db\np1 = 2\nsz1 = 0x1.4p+2  # 5\n";
        let file = PartialConfig::parse(text, "t").unwrap();
        assert_eq!(file.params["sz1"], 5.0);
        let flags = PartialConfig {
            params: BTreeMap::from([("p1", 3.0)]),
            ..Default::default()
        };
        let cfg = file.overlay(flags).resolve(true).unwrap();
        assert_eq!(cfg.params["p1"], 3.0);
        assert_eq!(cfg.params["sz2"], 1.0);
        assert_eq!(cfg.grid, SweepGrid::feedback_default());
    }

    #[test]
    fn errors_name_the_field() {
        let err = |t: &str| PartialConfig::parse(t, "t").and_then(|c| c.resolve(true)).unwrap_err().to_string();
        assert!(err("model = mac-uc\nbound = ozarow").contains("bound"));
        assert!(err("model = mac-nf\nbound = db\nsv = 1").contains("sv"));
        assert!(err("model = ic-uc\nbound = db\nn1 = -1").contains("n1"));
        assert!(err("model = ic-uc\nbound = db\ngrid = 0.5").contains("grid"));
        assert!(err("model = ic-uc\nbound = db\nwat = 1").contains("wat"));
        assert!(err("model = mac-nf\nbound = db\np1 = abc").contains("p1"));
    }

    #[test]
    fn infinite_feedback_noise_allowed() {
        let cfg = PartialConfig::parse("model = mac-nf\nbound = db\nsz1 = inf", "t")
            .unwrap()
            .resolve(true)
            .unwrap();
        assert!(cfg.params["sz1"].is_infinite());
    }
}
