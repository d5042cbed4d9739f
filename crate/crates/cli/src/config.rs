//! Run configuration: flags, an optional key-value config file, defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sips_core::{Grid, ParameterPoint, SuperpotentialModel};

use crate::error::CliError;

pub const DEFAULT_GRID: &str = "-20:20:4001";
pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_LEVELS: usize = 6;
/// Fill-in for auxiliary constants (`B`) omitted on the sector-indexed commands.
pub const DEFAULT_AUX: f64 = 1.0;
pub const GRID_ENV: &str = "SIPS_DEFAULT_GRID";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    #[default]
    Shape,
    Algebra,
    Both,
}

/// Keys accepted in a config file; each mirrors the flag of the same name.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub params: Option<String>,
    pub grid: Option<String>,
    pub tol: Option<f64>,
    pub levels: Option<usize>,
    pub route: Option<Route>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub m: Option<f64>,
    pub n: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Resolved settings for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<String>,
    pub params: Option<String>,
    pub grid: Grid,
    pub tol: Option<f64>,
    pub levels: Option<usize>,
    pub route: Route,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub m: Option<f64>,
    pub n: Option<usize>,
}

/// Command-line values before merging; `None` means "not given".
#[derive(Debug, Clone, Default)]
pub struct FlagValues {
    pub model: Option<String>,
    pub params: Option<String>,
    pub grid: Option<String>,
    pub tol: Option<f64>,
    pub levels: Option<usize>,
    pub route: Option<Route>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub m: Option<f64>,
    pub n: Option<usize>,
}

impl RunConfig {
    /// Flags win over the config file; the grid falls back to
    /// `SIPS_DEFAULT_GRID`, then to the built-in default.
    pub fn resolve(flags: FlagValues, file: Option<FileConfig>) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        let grid_spec = flags
            .grid
            .or(file.grid)
            .or_else(|| std::env::var(GRID_ENV).ok())
            .unwrap_or_else(|| DEFAULT_GRID.to_owned());
        let grid: Grid = grid_spec.parse().map_err(CliError::from)?;
        let tol = flags.tol.or(file.tol);
        if let Some(t) = tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(CliError::usage(format!("tolerance must be positive, got {t}")));
            }
        }
        Ok(Self {
            model: flags.model.or(file.model),
            params: flags.params.or(file.params),
            grid,
            tol,
            levels: flags.levels.or(file.levels),
            route: flags.route.or(file.route).unwrap_or_default(),
            format: flags.format.or(file.format),
            out: flags.out.or(file.out),
            m: flags.m.or(file.m),
            n: flags.n.or(file.n),
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn tol_or_default(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn model(&self) -> Result<SuperpotentialModel, CliError> {
        let id = self.model.as_deref().ok_or_else(|| CliError::usage("--model is required"))?;
        SuperpotentialModel::by_id(id).map_err(CliError::from)
    }

    /// Full parameter point; `a` may be omitted only for the oscillator.
    pub fn parameter_point(&self, model: &SuperpotentialModel) -> Result<ParameterPoint, CliError> {
        let mut values = parse_params(self.params.as_deref().unwrap_or(""))?;
        check_keys(model, &values, true)?;
        let a = match values.remove("a") {
            Some(a) => a,
            None if model.id() == "oscillator" => 1.0,
            None => return Err(CliError::usage("missing parameter `a`")),
        };
        let p = ParameterPoint { a, aux: values };
        model.validate(&p).map_err(CliError::from)?;
        Ok(p)
    }

    /// Auxiliary constants only (the sector fixes `a`).
    pub fn aux_params(&self, model: &SuperpotentialModel) -> Result<BTreeMap<String, f64>, CliError> {
        let values = parse_params(self.params.as_deref().unwrap_or(""))?;
        check_keys(model, &values, false)?;
        let mut values = values;
        for key in &model.param_names()[1..] {
            values.entry((*key).to_owned()).or_insert(DEFAULT_AUX);
        }
        Ok(values)
    }
}

fn check_keys(model: &SuperpotentialModel, values: &BTreeMap<String, f64>, allow_a: bool) -> Result<(), CliError> {
    for key in values.keys() {
        let known = model.param_names().contains(&key.as_str());
        if !known || (key == "a" && !allow_a) {
            return Err(CliError::usage(format!(
                "parameter `{key}` not accepted for `{}` here (expects {:?})",
                model.id(),
                if allow_a { model.param_names() } else { &model.param_names()[1..] }
            )));
        }
    }
    Ok(())
}

/// `a=3,B=1` into a map; duplicate and malformed entries are rejected.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected key=value, got `{item}`")))?;
        let key = key.trim();
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad number in `{item}`")))?;
        if !value.is_finite() {
            return Err(CliError::usage(format!("non-finite value in `{item}`")));
        }
        if out.insert(key.to_owned(), value).is_some() {
            return Err(CliError::usage(format!("parameter `{key}` given twice")));
        }
    }
    Ok(out)
}

/// Inclusive `min:max:step` lattice.
pub fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::usage(format!("expected min:max:step, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::usage(format!("range `{s}` has too many points")));
    }
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_strictly() {
        let p = parse_params("a=3, B=1").unwrap();
        assert_eq!(p["a"], 3.0);
        assert_eq!(p["B"], 1.0);
        assert!(parse_params("a=3,a=4").is_err());
        assert!(parse_params("a").is_err());
        assert!(parse_params("a=x").is_err());
        assert!(parse_params("").unwrap().is_empty());
    }

    #[test]
    fn unknown_keys_rejected() {
        let cfg = RunConfig::resolve(
            FlagValues { params: Some("a=3,C=1".into()), ..Default::default() },
            None,
        )
        .unwrap();
        assert!(cfg.parameter_point(&SuperpotentialModel::poschl_teller()).is_err());
        let cfg = RunConfig::resolve(FlagValues { params: Some("a=3".into()), ..Default::default() }, None).unwrap();
        assert!(cfg.aux_params(&SuperpotentialModel::scarf()).is_err());
        let cfg = RunConfig::resolve(FlagValues::default(), None).unwrap();
        assert_eq!(cfg.aux_params(&SuperpotentialModel::morse()).unwrap()["B"], DEFAULT_AUX);
    }

    #[test]
    fn ranges() {
        let r = parse_range("-4:1:0.25").unwrap();
        assert_eq!(r.len(), 21);
        assert_eq!(r[0], -4.0);
        assert_eq!(*r.last().unwrap(), 1.0);
        assert!(parse_range("1:0:0.5").is_err());
        assert!(parse_range("0:1:0").is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let file: FileConfig = toml::from_str("model = \"morse\"\ntol = 0.01\ngrid = \"-5:5:101\"").unwrap();
        let cfg = RunConfig::resolve(
            FlagValues { model: Some("scarf".into()), ..Default::default() },
            Some(file),
        )
        .unwrap();
        assert_eq!(cfg.model.as_deref(), Some("scarf"));
        assert_eq!(cfg.tol, Some(0.01));
        assert_eq!(cfg.grid, Grid::new(-5.0, 5.0, 101).unwrap());
        assert!(toml::from_str::<FileConfig>("colour = 3").is_err());
    }
}
