//! The coverage study file.
//!
//! ```toml
//! [coverage]
//! preset = "table2"            # or give dist/u/n_eff explicitly
//! dist = "pareto1 x_m=1 alpha=1" # string or array of strings
//! u = 2.0                      # number or array
//! n_eff = [20, 80]             # number or array
//! level = 0.95
//! reps = 10000
//! methods = ["unbiased", "bootstrap", "jackknife"]
//! bootstrap_reps = 999
//! seed = 2024
//! ```
//!
//! Without a preset the study is every combination of `dist`, `u` and
//! `n_eff`. Unknown sections and keys are rejected, all of them at once.

use toml::{Table, Value};

use crate::coverage_sim::{preset, table_methods, CoverageConfig, PRESET_NAMES};
use crate::distributions::DistributionSpec;
use crate::variance_ci::{VarianceMethod, DEFAULT_BOOTSTRAP_REPS};

pub const DEFAULT_REPS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_LEVEL: f64 = 0.95;

const KEYS: [&str; 9] = [
    "preset",
    "dist",
    "u",
    "n_eff",
    "level",
    "reps",
    "methods",
    "bootstrap_reps",
    "seed",
];

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("config is not valid TOML: {0}")]
    Toml(String),
    #[error("config schema: {}", .0.join("; "))]
    Schema(Vec<String>),
}

/// Settings of a study before expansion into cells. Command-line flags are
/// applied on top of what the file gives.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StudySettings {
    pub preset: Option<String>,
    pub dists: Vec<DistributionSpec>,
    pub thresholds: Vec<f64>,
    pub n_effs: Vec<f64>,
    pub level: Option<f64>,
    pub reps: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub bootstrap_reps: Option<usize>,
    pub seed: Option<u64>,
}

fn numbers(key: &str, v: &Value, problems: &mut Vec<String>) -> Vec<f64> {
    let one = |v: &Value| match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    };
    match v {
        Value::Array(items) => items
            .iter()
            .filter_map(|x| {
                let r = one(x);
                if r.is_none() {
                    problems.push(format!("`{key}` entries must be numbers"));
                }
                r
            })
            .collect(),
        other => match one(other) {
            Some(x) => vec![x],
            None => {
                problems.push(format!("`{key}` must be a number or an array of numbers"));
                vec![]
            }
        },
    }
}

fn count(key: &str, v: &Value, problems: &mut Vec<String>) -> Option<u64> {
    match v {
        Value::Integer(i) if *i >= 0 => Some(*i as u64),
        _ => {
            problems.push(format!("`{key}` must be a non-negative integer"));
            None
        }
    }
}

fn strings(key: &str, v: &Value, problems: &mut Vec<String>) -> Vec<String> {
    match v {
        Value::String(s) => vec![s.clone()],
        Value::Array(items) => items
            .iter()
            .filter_map(|x| match x {
                Value::String(s) => Some(s.clone()),
                _ => {
                    problems.push(format!("`{key}` entries must be strings"));
                    None
                }
            })
            .collect(),
        _ => {
            problems.push(format!("`{key}` must be a string or an array of strings"));
            vec![]
        }
    }
}

pub fn parse_settings(text: &str) -> Result<StudySettings, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Toml(e.message().to_string()))?;
    let mut problems = Vec::new();
    for key in table.keys().filter(|k| *k != "coverage") {
        problems.push(format!("unknown section or key `{key}`"));
    }
    let mut s = StudySettings::default();
    match table.get("coverage") {
        None => problems.push("missing section `[coverage]`".into()),
        Some(Value::Table(cov)) => {
            for (key, v) in cov {
                match key.as_str() {
                    "preset" => match v {
                        Value::String(p) => s.preset = Some(p.clone()),
                        _ => problems.push("`preset` must be a string".into()),
                    },
                    "dist" => {
                        for d in strings(key, v, &mut problems) {
                            match d.parse::<DistributionSpec>() {
                                Ok(spec) => s.dists.push(spec),
                                Err(e) => problems.push(format!("`dist` = \"{d}\": {e}")),
                            }
                        }
                    }
                    "u" => s.thresholds = numbers(key, v, &mut problems),
                    "n_eff" => s.n_effs = numbers(key, v, &mut problems),
                    "level" => s.level = numbers(key, v, &mut problems).first().copied(),
                    "reps" => s.reps = count(key, v, &mut problems).map(|r| r as usize),
                    "bootstrap_reps" => s.bootstrap_reps = count(key, v, &mut problems).map(|r| r as usize),
                    "seed" => s.seed = count(key, v, &mut problems),
                    "methods" => s.methods = Some(strings(key, v, &mut problems)),
                    other => problems.push(format!(
                        "unknown key `{other}` in [coverage] (expected one of {})",
                        KEYS.join(", ")
                    )),
                }
            }
        }
        Some(_) => problems.push("`coverage` must be a section".into()),
    }
    if problems.is_empty() {
        Ok(s)
    } else {
        Err(ConfigError::Schema(problems))
    }
}

fn parse_methods(names: &[String], bootstrap_reps: usize, problems: &mut Vec<String>) -> Vec<VarianceMethod> {
    names
        .iter()
        .filter_map(|name| match name.to_ascii_lowercase().as_str() {
            "unbiased" | "plugin" | "plug-in" => Some(VarianceMethod::Unbiased),
            "jackknife" => Some(VarianceMethod::Jackknife),
            "bootstrap" => Some(VarianceMethod::Bootstrap {
                reps: bootstrap_reps,
                seed: 0,
            }),
            other => {
                problems.push(format!(
                    "unknown method `{other}` (expected unbiased, bootstrap or jackknife)"
                ));
                None
            }
        })
        .collect()
}

/// Expands settings into study cells.
pub fn build_study(s: &StudySettings) -> Result<Vec<CoverageConfig>, ConfigError> {
    let mut problems = Vec::new();
    let reps = s.reps.unwrap_or(DEFAULT_REPS);
    let bootstrap_reps = s.bootstrap_reps.unwrap_or(DEFAULT_BOOTSTRAP_REPS);
    let seed = s.seed.unwrap_or(DEFAULT_SEED);
    let level = s.level.unwrap_or(DEFAULT_LEVEL);
    let methods = match &s.methods {
        Some(names) => parse_methods(names, bootstrap_reps, &mut problems),
        None => table_methods(bootstrap_reps),
    };
    let mut cells = match &s.preset {
        Some(name) => {
            if !s.dists.is_empty() || !s.thresholds.is_empty() || !s.n_effs.is_empty() {
                problems.push("`preset` cannot be combined with `dist`, `u` or `n_eff`".into());
            }
            match preset(name, reps, bootstrap_reps, seed) {
                Some(c) => c,
                None => {
                    problems.push(format!(
                        "unknown preset `{name}` (expected one of {})",
                        PRESET_NAMES.join(", ")
                    ));
                    vec![]
                }
            }
        }
        None => {
            for (key, empty) in [
                ("dist", s.dists.is_empty()),
                ("u", s.thresholds.is_empty()),
                ("n_eff", s.n_effs.is_empty()),
            ] {
                if empty {
                    problems.push(format!("missing key `{key}` (or give a `preset`)"));
                }
            }
            let mut cells = Vec::new();
            for &dist in &s.dists {
                for &u in &s.thresholds {
                    for &n_eff in &s.n_effs {
                        cells.push(CoverageConfig {
                            dist,
                            u,
                            n_eff,
                            level,
                            reps,
                            methods: methods.clone(),
                            seed,
                        });
                    }
                }
            }
            cells
        }
    };
    // Explicit settings override the preset's.
    for c in &mut cells {
        if s.reps.is_some() || s.preset.as_deref() != Some("smoke") {
            c.reps = reps;
        }
        c.level = level;
        c.seed = seed;
        c.methods = methods.clone();
    }
    for c in &cells {
        if let Err(e) = c.validate() {
            problems.push(format!("{} at u = {}, n_eff = {}: {e}", c.dist, c.u, c.n_eff));
        }
    }
    if problems.is_empty() {
        Ok(cells)
    } else {
        problems.dedup();
        Err(ConfigError::Schema(problems))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_study() {
        let s = parse_settings(
            r#"
[coverage]
dist = ["pareto1 alpha=1", "pareto1 alpha=2"]
u = 2
n_eff = [20, 80]
reps = 500
methods = ["jackknife", "unbiased"]
seed = 9
"#,
        )
        .unwrap();
        let cells = build_study(&s).unwrap();
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().all(|c| c.reps == 500 && c.seed == 9 && c.methods.len() == 2));
        assert_eq!(cells[1].n_eff, 80.0);
    }

    #[test]
    fn presets_and_overrides() {
        let s = parse_settings("[coverage]\npreset = \"table2\"\nbootstrap_reps = 199\n").unwrap();
        let cells = build_study(&s).unwrap();
        assert_eq!(cells.len(), 5);
        assert_eq!(cells[0].reps, DEFAULT_REPS);
        assert!(cells[0].methods.contains(&VarianceMethod::Bootstrap { reps: 199, seed: 0 }));
        let smoke = build_study(&parse_settings("[coverage]\npreset = \"smoke\"\n").unwrap()).unwrap();
        assert_eq!(smoke[0].reps, 100);
    }

    #[test]
    fn every_unknown_key_is_listed() {
        let err = parse_settings("[coverage]\npreset = \"table2\"\nrepz = 3\nfoo = 1\n[plot]\nx = 1\n").unwrap_err();
        let ConfigError::Schema(problems) = err else { panic!() };
        let text = problems.join("\n");
        assert!(text.contains("`repz`") && text.contains("`foo`") && text.contains("`plot`"), "{text}");
    }

    #[test]
    fn bad_values() {
        let err = parse_settings("[coverage]\ndist = \"cauchy\"\nu = 2\nn_eff = 20\n").unwrap_err();
        assert!(matches!(err, ConfigError::Schema(ref p) if p[0].contains("unknown distribution family")));
        let s = parse_settings("[coverage]\ndist = \"pareto1 alpha=1\"\nu = 2\nn_eff = 20\nmethods = [\"magic\"]\n").unwrap();
        assert!(build_study(&s).is_err());
        let s = parse_settings("[coverage]\nu = 2\n").unwrap();
        let ConfigError::Schema(p) = build_study(&s).unwrap_err() else { panic!() };
        assert!(p.iter().any(|m| m.contains("`dist`")) && p.iter().any(|m| m.contains("`n_eff`")));
        assert!(matches!(parse_settings("[coverage"), Err(ConfigError::Toml(_))));
    }
}
