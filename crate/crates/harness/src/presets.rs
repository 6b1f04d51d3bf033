//! Built-in experiment presets. Desk presets shrink K, L and the trial count;
//! every algorithmic parameter matches the full-scale preset.

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

pub const NAMES: [&str; 6] = ["fig3-desk", "fig4-desk", "fig5-desk", "fig3-full", "fig4-full", "fig5-full"];

pub fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig3-desk" => include_str!("../presets/fig3-desk.toml"),
        "fig4-desk" => include_str!("../presets/fig4-desk.toml"),
        "fig5-desk" => include_str!("../presets/fig5-desk.toml"),
        "fig3-full" => include_str!("../presets/fig3-full.toml"),
        "fig4-full" => include_str!("../presets/fig4-full.toml"),
        "fig5-full" => include_str!("../presets/fig5-full.toml"),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let text = preset_text(name)
        .ok_or_else(|| HarnessError::Config(format!("unknown preset {name:?}; expected one of {}", NAMES.join(", "))))?;
    ExperimentConfig::from_toml(text)
}
