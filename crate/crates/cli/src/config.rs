//! Optional `key = value` settings file.
//!
//! ```text
//! # comments and blank lines are ignored
//! stability_cap = 360
//! fit_window = 10
//! fit_method = lsq
//! ```

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use coagkernel::{FitMethod, StabilityCap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub stability_cap: StabilityCap,
    pub fit_window: usize,
    pub fit_method: FitMethod,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            stability_cap: StabilityCap::default(),
            fit_window: coagkernel::error_model::DEFAULT_WINDOW,
            fit_method: FitMethod::default(),
        }
    }
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", lineno + 1))?;
            let value = value.trim();
            match key.trim() {
                "stability_cap" => {
                    let cap: usize = value
                        .parse()
                        .with_context(|| format!("line {}: stability_cap", lineno + 1))?;
                    settings.stability_cap = StabilityCap::new(cap)?;
                }
                "fit_window" => {
                    settings.fit_window = value
                        .parse()
                        .with_context(|| format!("line {}: fit_window", lineno + 1))?;
                    if settings.fit_window < 2 {
                        bail!("line {}: fit_window must be at least 2", lineno + 1);
                    }
                }
                "fit_method" => settings.fit_method = value.parse()?,
                other => bail!("line {}: unknown key `{other}`", lineno + 1),
            }
        }
        Ok(settings)
    }
}
