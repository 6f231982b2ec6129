//! Shipped experiment configurations.

use super::config::ExperimentConfig;
use super::RunError;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        description:
            "N=8, Omega=0.15V detuning sweep; T=15..27/Omega traces plus a 64-duration average over [15,30]/Omega",
        toml: include_str!("../../presets/fig2.toml"),
    },
    Preset {
        name: "spectrum-fig2c",
        description: "N=8, Omega=0.15V eigenvalue spectrum over Delta/V in [-1.3, 0.3]",
        toml: include_str!("../../presets/spectrum-fig2c.toml"),
    },
    Preset {
        name: "roundtrip-default",
        description: "N=8 sweep, peak detection and C6 inversion in reduced units (V=1, a=1)",
        toml: include_str!("../../presets/roundtrip-default.toml"),
    },
    Preset {
        name: "feasibility-n70-a10",
        description: "87Rb 70S, a=10um: peak separations versus Rydberg linewidth",
        toml: include_str!("../../presets/feasibility-n70-a10.toml"),
    },
    Preset {
        name: "feasibility-n70-a5",
        description: "87Rb 70S, a=5um: peak separations versus Rydberg linewidth",
        toml: include_str!("../../presets/feasibility-n70-a5.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn load(name: &str) -> Result<ExperimentConfig, RunError> {
    let preset = find(name).ok_or_else(|| {
        let known: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        RunError::Config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
    })?;
    ExperimentConfig::from_toml(preset.toml)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses() {
        for p in PRESETS {
            load(p.name).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
        assert!(load("nope").is_err());
    }
}
