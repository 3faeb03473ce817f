//! Run configuration: a flat `key = value` file plus overrides.

use std::path::{Path, PathBuf};

use crate::march::Scheme;

/// Environment variable overriding the output root directory.
pub const OUT_DIR_ENV: &str = "AAAD_OUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub scheme: Scheme,
    /// `None` selects the problem's default mesh.
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    /// `None` selects the problem's default constant for the scheme.
    pub c: Option<f64>,
    pub theta: f64,
    pub cfl: f64,
    pub eps0: f64,
    pub t_final_override: Option<f64>,
    pub out_dir: PathBuf,
    /// `None` selects the problem's default output times.
    pub snapshots: Option<Vec<f64>>,
    pub accuracy_mode: bool,
    pub dt_cap_k: Option<f64>,
    /// Also write legacy VTK files for 2-D runs.
    pub vtk: bool,
    /// Write velocity and pressure besides density in 2-D grid files.
    pub full_state: bool,
    /// Solution file of a reference run to measure the L1 density
    /// difference against.
    pub reference: Option<PathBuf>,
    /// First-order flux fallback at inadmissible reconstructions and cells.
    pub positivity_fallback: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: String::new(),
            scheme: Scheme::Aaad2,
            nx: None,
            ny: None,
            c: None,
            theta: 2.0,
            cfl: 0.4,
            eps0: 0.002,
            t_final_override: None,
            out_dir: PathBuf::from("out"),
            snapshots: None,
            accuracy_mode: false,
            dt_cap_k: None,
            vtk: false,
            full_state: false,
            reference: None,
            positivity_fallback: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

fn bad(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into(), reason: reason.to_string() }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| bad(key, value, e))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn parse_optional<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    if value.is_empty() || value.eq_ignore_ascii_case("none") || value.eq_ignore_ascii_case("default") {
        Ok(None)
    } else {
        parse_num(key, value).map(Some)
    }
}

impl RunConfig {
    /// Set one key. Keys accept `-` in place of `_`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "problem" => self.problem = value.to_string(),
            "scheme" => self.scheme = value.parse().map_err(|e| bad(&key, value, e))?,
            "nx" => self.nx = parse_optional(&key, value)?,
            "ny" => self.ny = parse_optional(&key, value)?,
            "c" => {
                let c: Option<f64> = parse_optional(&key, value)?;
                if c.is_some_and(|c| !(c >= 0.0)) {
                    return Err(bad(&key, value, "must be non-negative"));
                }
                self.c = c;
            }
            "theta" => {
                let t: f64 = parse_num(&key, value)?;
                if !(1.0..=2.0).contains(&t) {
                    return Err(bad(&key, value, "must lie in [1, 2]"));
                }
                self.theta = t;
            }
            "cfl" => {
                let c: f64 = parse_num(&key, value)?;
                if !(c > 0.0 && c <= 1.0) {
                    return Err(bad(&key, value, "must lie in (0, 1]"));
                }
                self.cfl = c;
            }
            "eps0" => {
                let e: f64 = parse_num(&key, value)?;
                if !(e > 0.0) {
                    return Err(bad(&key, value, "must be positive"));
                }
                self.eps0 = e;
            }
            "t_final_override" | "t_final" => self.t_final_override = parse_optional(&key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "snapshots" => {
                self.snapshots = if value.is_empty() || value.eq_ignore_ascii_case("none") {
                    Some(Vec::new())
                } else if value.eq_ignore_ascii_case("default") {
                    None
                } else {
                    Some(value.split(',').map(|s| parse_num::<f64>(&key, s.trim())).collect::<Result<_, _>>()?)
                }
            }
            "accuracy_mode" => self.accuracy_mode = parse_bool(&key, value)?,
            "dt_cap_k" => self.dt_cap_k = parse_optional(&key, value)?,
            "vtk" => self.vtk = parse_bool(&key, value)?,
            "full_state" => self.full_state = parse_bool(&key, value)?,
            "positivity_fallback" => self.positivity_fallback = parse_bool(&key, value)?,
            "reference" => {
                self.reference = (!value.is_empty()).then(|| PathBuf::from(value));
            }
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        Ok(())
    }

    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: n + 1, text: raw.to_string() })?;
            cfg.apply(k, v)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse(&text)
    }

    /// Apply overrides in order; later ones win.
    pub fn with_overrides<'a>(
        mut self,
        overrides: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, ConfigError> {
        for (k, v) in overrides {
            self.apply(k, v)?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.problem.is_empty() {
            return Err(ConfigError::Missing("problem"));
        }
        Ok(())
    }

    /// Output directory, re-rooted under `$AAAD_OUT_DIR` when set and the
    /// configured directory is relative.
    pub fn resolved_out_dir(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(root) if self.out_dir.is_relative() => PathBuf::from(root).join(&self.out_dir),
            _ => self.out_dir.clone(),
        }
    }

    /// `key = value` rendering that [`RunConfig::parse`] reads back.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "default".into());
        let mut s = String::new();
        s += &format!("problem = {}\n", self.problem);
        s += &format!("scheme = {}\n", self.scheme);
        s += &format!("nx = {}\n", opt(self.nx.map(|v| v.to_string())));
        s += &format!("ny = {}\n", opt(self.ny.map(|v| v.to_string())));
        s += &format!("c = {}\n", opt(self.c.map(|v| v.to_string())));
        s += &format!("theta = {}\n", self.theta);
        s += &format!("cfl = {}\n", self.cfl);
        s += &format!("eps0 = {}\n", self.eps0);
        s += &format!("t_final_override = {}\n", opt(self.t_final_override.map(|v| v.to_string())));
        s += &format!("out_dir = {}\n", self.out_dir.display());
        let snaps = self.snapshots.as_ref().map(|v| {
            if v.is_empty() {
                "none".to_string()
            } else {
                v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
            }
        });
        s += &format!("snapshots = {}\n", opt(snaps));
        s += &format!("accuracy_mode = {}\n", self.accuracy_mode);
        s += &format!("dt_cap_k = {}\n", opt(self.dt_cap_k.map(|v| v.to_string())));
        s += &format!("vtk = {}\n", self.vtk);
        s += &format!("full_state = {}\n", self.full_state);
        s += &format!("positivity_fallback = {}\n", self.positivity_fallback);
        if let Some(r) = &self.reference {
            s += &format!("reference = {}\n", r.display());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_file() {
        let text = "\
# Lax tube
problem = lax
scheme = aaad2
nx = 200
c = 0.1   # default anyway
theta = 1.5
snapshots = 0.5, 1.0
accuracy_mode = yes
";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.problem, "lax");
        assert_eq!(cfg.scheme, Scheme::Aaad2);
        assert_eq!(cfg.nx, Some(200));
        assert_eq!(cfg.c, Some(0.1));
        assert_eq!(cfg.theta, 1.5);
        assert_eq!(cfg.snapshots, Some(vec![0.5, 1.0]));
        assert!(cfg.accuracy_mode);
        assert_eq!(cfg.ny, None);
    }

    #[test]
    fn overrides_win() {
        let cfg = RunConfig::parse("problem = lax\nnx = 200\n")
            .unwrap()
            .with_overrides([("nx", "400"), ("scheme", "cu2"), ("t-final-override", "0.5")])
            .unwrap();
        assert_eq!(cfg.nx, Some(400));
        assert_eq!(cfg.scheme, Scheme::Cu2);
        assert_eq!(cfg.t_final_override, Some(0.5));
    }

    #[test]
    fn errors() {
        assert!(matches!(RunConfig::parse("problem lax"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(RunConfig::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(RunConfig::parse("c = -1"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(RunConfig::parse("theta = 3"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(RunConfig::parse("scheme = weno"), Err(ConfigError::BadValue { .. })));
        assert_eq!(RunConfig::parse("nx = 10").unwrap().validate(), Err(ConfigError::Missing("problem")));
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::parse("problem = blast\nscheme = aaad5\nc = 0.5\nsnapshots = none\n").unwrap();
        cfg.dt_cap_k = Some(0.25);
        cfg.vtk = true;
        cfg.positivity_fallback = false;
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}
