use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use stabp3::scalar::{parse_q, DEFAULT_TOLERANCE};
use stabp3::{VarietyData, Q};

use crate::args::Format;
use crate::error::CliError;

pub const CACHE_ENV: &str = "STABP3_CACHE_DIR";

#[derive(Debug, Clone)]
pub struct Config {
    pub variety: VarietyData,
    pub variety_name: String,
    pub tolerance: f64,
    pub box_bound: u32,
    pub nu_window: Q,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<Format>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            variety: VarietyData::p3(),
            variety_name: "p3".into(),
            tolerance: DEFAULT_TOLERANCE,
            box_bound: 8,
            nu_window: Q::new(1.into(), 1000.into()),
            workers: None,
            cache_dir: None,
            output: None,
        }
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::input(format!("config line {line}: {msg}"))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| bad(n, "expected `key = value`"))?;
            let value = value.trim();
            match key.trim() {
                "variety" => {
                    cfg.variety = match value {
                        "p3" => VarietyData::p3(),
                        v => {
                            let deg = v
                                .strip_prefix("generic:")
                                .and_then(|d| d.parse().ok())
                                .ok_or_else(|| bad(n, format!("unknown variety `{v}`")))?;
                            VarietyData::generic(deg)
                        }
                    };
                    cfg.variety_name = value.to_string();
                }
                "tolerance" => {
                    cfg.tolerance = value.parse().map_err(|_| bad(n, "tolerance must be a number"))?;
                    if !(cfg.tolerance > 0.0 && cfg.tolerance.is_finite()) {
                        return Err(bad(n, "tolerance must be positive"));
                    }
                }
                "box_bound" => {
                    cfg.box_bound = value.parse().map_err(|_| bad(n, "box_bound must be an integer"))?;
                    if cfg.box_bound == 0 {
                        return Err(bad(n, "box_bound must be at least 1"));
                    }
                }
                "nu_window" => cfg.nu_window = parse_q(value).map_err(|e| bad(n, e))?,
                "workers" => cfg.workers = Some(value.parse().map_err(|_| bad(n, "workers must be an integer"))?),
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
                "output" => {
                    cfg.output = Some(match value {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        "svg" => Format::Svg,
                        _ => return Err(bad(n, format!("unknown output `{value}`"))),
                    })
                }
                other => return Err(bad(n, format!("unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Settings that can change results. Worker count and cache location are excluded.
    pub fn fingerprint(&self) -> String {
        format!(
            "variety={};tolerance={:?};box_bound={};nu_window={};output={:?}",
            self.variety_name, self.tolerance, self.box_bound, self.nu_window, self.output
        )
    }

    pub fn cache(&self) -> Option<Cache> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .map(|dir| Cache { dir })
    }
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn key(command: &str, params: &str, config: &Config) -> String {
        let mut h = Sha256::new();
        for part in [command, params, &config.fingerprint()] {
            h.update(part.as_bytes());
            h.update([0u8]);
        }
        format!("{:x}", h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.out"))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.path(key)).ok()
    }

    /// Best effort: a cache that cannot be written is skipped.
    pub fn put(&self, key: &str, body: &str) {
        if fs::create_dir_all(&self.dir).is_ok() {
            let tmp = self.dir.join(format!("{key}.tmp{}", std::process::id()));
            if fs::write(&tmp, body).is_ok() {
                let _ = fs::rename(&tmp, self.path(key));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = Config::parse(
            "# comment\nvariety = p3\ntolerance = 1e-8\nbox_bound = 5\nnu_window = 1/100\nworkers = 2\noutput = csv\n",
        )
        .unwrap();
        assert_eq!(cfg.box_bound, 5);
        assert_eq!(cfg.tolerance, 1e-8);
        assert_eq!(cfg.nu_window, Q::new(1.into(), 100.into()));
        assert_eq!(cfg.workers, Some(2));
        assert_eq!(cfg.output, Some(Format::Csv));
    }

    #[test]
    fn rejects_bad_lines() {
        for text in ["box_bound = 0", "nonsense", "colour = red", "tolerance = -1", "variety = k3"] {
            assert!(Config::parse(text).is_err(), "{text}");
        }
        assert!(!Config::parse("variety = generic:2").unwrap().variety.euler_enabled);
    }

    #[test]
    fn key_ignores_workers() {
        let mut a = Config::default();
        let b = Config { workers: Some(7), ..Config::default() };
        assert_eq!(Cache::key("psi", "x", &a), Cache::key("psi", "x", &b));
        a.box_bound = 3;
        assert_ne!(Cache::key("psi", "x", &a), Cache::key("psi", "x", &b));
    }
}
