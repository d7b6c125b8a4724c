//! Scenario files compiled into the binary.

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub command: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const PRESETS: [Preset; 6] = [
    Preset {
        name: "fig2",
        command: "potential",
        summary: "undriven 3MCP-eq components near mirror A",
        text: include_str!("../presets/fig2.toml"),
    },
    Preset {
        name: "fig3",
        command: "enhancement",
        summary: "resonant amplitudes at the centre for nu = 2..20",
        text: include_str!("../presets/fig3.toml"),
    },
    Preset {
        name: "fig4",
        command: "potential",
        summary: "propylene oxide at 1, 298 and 600 K",
        text: include_str!("../presets/fig4.toml"),
    },
    Preset {
        name: "fig5",
        command: "potential",
        summary: "driven half/half superposition and both barriers",
        text: include_str!("../presets/fig5.toml"),
    },
    Preset {
        name: "fig6c",
        command: "ensemble",
        summary: "beam at rest on average, sigma 0.4 mm/s, 1.2 s",
        text: include_str!("../presets/fig6c.toml"),
    },
    Preset {
        name: "fig7",
        command: "ensemble",
        summary: "beam moving to mirror B at 0.8 mm/s, sigma 0.1 mm/s, 1.5 s",
        text: include_str!("../presets/fig7.toml"),
    },
];

pub fn find(name: &str) -> Result<&'static Preset, CliError> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))
}

pub fn load(name: &str) -> Result<ScenarioConfig, CliError> {
    ScenarioConfig::from_toml(find(name)?.text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_and_resolves() {
        for p in &PRESETS {
            let c = load(p.name).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            c.resolve().unwrap_or_else(|e| panic!("{}: {e}", p.name));
            assert_eq!(ScenarioConfig::from_toml(&c.to_toml()).unwrap(), c, "{}", p.name);
        }
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        assert_eq!(find("fig9").err().unwrap().exit_code(), 2);
    }
}
