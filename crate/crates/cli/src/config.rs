//! Key=value config file, selected through the STURM_CONFIG env var.

use std::fs;

#[derive(Debug, Clone)]
pub struct Config {
    pub bits: u32,
    pub horizon: usize,
    pub format: String,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { bits: 64, horizon: 1000, format: "pretty".to_string(), seed: 1 }
    }
}

impl Config {
    pub fn load() -> Result<Self, String> {
        let mut cfg = Config::default();
        let Ok(path) = std::env::var("STURM_CONFIG") else {
            return Ok(cfg);
        };
        let text = fs::read_to_string(&path).map_err(|e| format!("config {path}: {e}"))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("config {path}:{}: expected key=value", lineno + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "bits" => {
                    cfg.bits = value.parse().map_err(|_| format!("bad bits value {value}"))?;
                    if cfg.bits < 16 {
                        return Err("bits must be >= 16".to_string());
                    }
                }
                "horizon" => {
                    cfg.horizon =
                        value.parse().map_err(|_| format!("bad horizon value {value}"))?;
                    if cfg.horizon < 1 {
                        return Err("horizon must be >= 1".to_string());
                    }
                }
                "format" => cfg.format = value.to_string(),
                "seed" => cfg.seed = value.parse().map_err(|_| format!("bad seed value {value}"))?,
                other => return Err(format!("unknown config key {other}")),
            }
        }
        Ok(cfg)
    }
}
