//! Config-driven runs. A JSON [`RunConfig`] (or a named recipe) becomes a
//! checked [`Plan`], and executing the plan renders every requested output
//! to bytes. Writing files is left to the caller.

mod outputs;
mod recipes;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scenario::{validate_scenario, Scenario};

pub use outputs::{
    BlindSpotParams, MapParams, MotionSpec, Output, RecordingParams, SjrParams, SplParams, StatsReport, SweepParams,
    TrajectoryParams, WerParams, WerReport,
};
pub use recipes::{RecipeId, RecipeInfo};

#[derive(Debug, Error)]
pub enum RunError {
    /// The config is malformed or names something that does not exist.
    #[error("config error: {0}")]
    Schema(String),
    /// The simulation itself failed.
    #[error("simulation error: {0}")]
    Domain(#[from] crate::Error),
}

impl RunError {
    pub(crate) fn schema(msg: impl Into<String>) -> Self {
        RunError::Schema(msg.into())
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

/// Output kinds accepted in a config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Map,
    Sweep,
    Timesim,
    Wer,
    Spl,
    Recording,
    Blindspots,
    Stats,
    Trajectory,
}

impl OutputKind {
    /// File extensions this kind can be written as.
    pub fn extensions(self) -> &'static [&'static str] {
        match self {
            OutputKind::Map => &["csv", "pgm"],
            OutputKind::Sweep | OutputKind::Timesim | OutputKind::Spl | OutputKind::Trajectory => &["csv"],
            OutputKind::Wer | OutputKind::Blindspots | OutputKind::Stats => &["json"],
            OutputKind::Recording => &["wav"],
        }
    }
}

/// One requested artifact as written in the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub kind: OutputKind,
    /// Relative to the output directory.
    pub path: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

impl OutputSpec {
    pub fn new(kind: OutputKind, path: &str, params: serde_json::Value) -> Self {
        Self {
            kind,
            path: path.to_string(),
            params,
        }
    }
}

/// Top-level config document.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<OutputSpec>,
    /// Expands to a scenario and outputs; excludes both fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<RecipeId>,
    /// Overrides `scenario.seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(s: &str) -> RunResult<Self> {
        if !s.trim_start().starts_with('{') {
            return Err(RunError::schema("config must be a JSON object"));
        }
        let de = &mut serde_json::Deserializer::from_str(s);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                RunError::schema(e.into_inner().to_string())
            } else {
                RunError::schema(format!("{path}: {}", e.into_inner()))
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// One output, checked and typed.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedOutput {
    pub path: String,
    pub output: Output,
}

/// A fully expanded, validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub recipe: Option<RecipeId>,
    /// Effective seed, already written into `scenario.seed`.
    pub seed: u64,
    pub scenario: Scenario,
    pub outputs: Vec<PlannedOutput>,
}

/// Rendered output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: String,
    pub bytes: Vec<u8>,
}

fn check_path(i: usize, spec: &OutputSpec, seen: &mut HashSet<String>) -> RunResult<()> {
    let key = format!("outputs[{i}].path");
    let p = std::path::Path::new(&spec.path);
    let bad = spec.path.is_empty()
        || p.is_absolute()
        || p.components().any(|c| !matches!(c, std::path::Component::Normal(_)));
    if bad {
        return Err(RunError::schema(format!(
            "{key}: `{}` must be a relative path without `..`",
            spec.path
        )));
    }
    let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("");
    if !spec.kind.extensions().contains(&ext) {
        return Err(RunError::schema(format!(
            "{key}: `{}` needs one of the extensions {:?} for kind {:?}",
            spec.path,
            spec.kind.extensions(),
            spec.kind
        )));
    }
    if !seen.insert(spec.path.clone()) {
        return Err(RunError::schema(format!("{key}: `{}` is used twice", spec.path)));
    }
    Ok(())
}

impl Plan {
    /// Expand and check a config. `seed` (from the command line) beats the
    /// config's seed, which beats the scenario's.
    pub fn from_config(config: RunConfig, seed: Option<u64>) -> RunResult<Self> {
        let recipe = config.recipe;
        let config = match recipe {
            Some(id) => {
                if config.scenario.is_some() || !config.outputs.is_empty() {
                    return Err(RunError::schema(
                        "recipe: cannot be combined with `scenario` or `outputs`",
                    ));
                }
                RunConfig {
                    seed: config.seed,
                    ..id.config()?
                }
            }
            None => config,
        };
        let mut scenario = config
            .scenario
            .ok_or_else(|| RunError::schema("missing field `scenario`"))?;
        if config.outputs.is_empty() {
            return Err(RunError::schema("outputs: at least one output is required"));
        }
        if let Some(v) = validate_scenario(&scenario).into_iter().next() {
            return Err(RunError::schema(format!("scenario.{}: {}", v.path, v.problem)));
        }
        let seed = seed.or(config.seed).unwrap_or(scenario.seed);
        scenario.seed = seed;

        let mut seen = HashSet::new();
        let mut outputs = Vec::with_capacity(config.outputs.len());
        for (i, spec) in config.outputs.iter().enumerate() {
            check_path(i, spec, &mut seen)?;
            let output = Output::parse(spec.kind, &spec.params)
                .map_err(|e| RunError::schema(format!("outputs[{i}].params: {e}")))?;
            output
                .check(&scenario)
                .map_err(|e| RunError::schema(format!("outputs[{i}].params.{e}")))?;
            outputs.push(PlannedOutput {
                path: spec.path.clone(),
                output,
            });
        }
        Ok(Plan {
            recipe,
            seed,
            scenario,
            outputs,
        })
    }

    /// Render every output in order.
    pub fn execute(&self) -> RunResult<Vec<Artifact>> {
        let mut cx = outputs::Context::new(&self.scenario);
        self.outputs
            .iter()
            .map(|o| {
                Ok(Artifact {
                    path: o.path.clone(),
                    bytes: o.output.render(&mut cx, &o.path)?,
                })
            })
            .collect()
    }
}

/// Parse, plan and execute in one go.
pub fn run_json(json: &str, seed: Option<u64>) -> RunResult<Vec<Artifact>> {
    Plan::from_config(RunConfig::from_json(json)?, seed)?.execute()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn base() -> serde_json::Value {
        let cfg = RecipeId::Fig3.config().unwrap();
        serde_json::to_value(cfg.scenario.unwrap()).unwrap()
    }

    #[test]
    fn unknown_top_level_key_is_named() {
        let err = RunConfig::from_json(r#"{"scenario": null, "bogus": 1}"#).unwrap_err();
        assert!(matches!(&err, RunError::Schema(m) if m.contains("bogus")), "{err}");
    }

    #[test]
    fn unknown_param_key_is_named() {
        let cfg = json!({"scenario": base(), "outputs": [
            {"kind": "sweep", "path": "a.csv", "params": {"radius": 1.0, "stepp": 2.0}}
        ]});
        let err = Plan::from_config(serde_json::from_value(cfg).unwrap(), None).unwrap_err();
        assert!(
            matches!(&err, RunError::Schema(m) if m.contains("stepp") && m.contains("outputs[0]")),
            "{err}"
        );
    }

    #[test]
    fn duplicate_paths_rejected() {
        let cfg = json!({"scenario": base(), "outputs": [
            {"kind": "sweep", "path": "a.csv"}, {"kind": "spl", "path": "a.csv", "params": {"points": []}}
        ]});
        let err = Plan::from_config(serde_json::from_value(cfg).unwrap(), None).unwrap_err();
        assert!(
            matches!(&err, RunError::Schema(m) if m.contains("outputs[1].path")),
            "{err}"
        );
    }

    #[test]
    fn bad_paths_rejected() {
        for path in ["../x.csv", "/tmp/x.csv", "x.txt", ""] {
            let cfg = json!({"scenario": base(), "outputs": [{"kind": "sweep", "path": path}]});
            let r = Plan::from_config(serde_json::from_value(cfg).unwrap(), None);
            assert!(matches!(r, Err(RunError::Schema(_))), "{path}");
        }
    }

    #[test]
    fn recipe_excludes_outputs() {
        let cfg = json!({"recipe": "fig3", "outputs": [{"kind": "sweep", "path": "a.csv"}]});
        let r = Plan::from_config(serde_json::from_value(cfg).unwrap(), None);
        assert!(matches!(r, Err(RunError::Schema(m)) if m.contains("recipe")));
    }

    #[test]
    fn seed_precedence() {
        let mut cfg: RunConfig = serde_json::from_value(json!({
            "scenario": base(), "seed": 5, "outputs": [{"kind": "sweep", "path": "a.csv"}]
        }))
        .unwrap();
        assert_eq!(Plan::from_config(cfg.clone(), None).unwrap().seed, 5);
        assert_eq!(Plan::from_config(cfg.clone(), Some(9)).unwrap().seed, 9);
        cfg.seed = None;
        assert_eq!(Plan::from_config(cfg, None).unwrap().scenario.seed, 0);
    }

    #[test]
    fn mic_index_checked() {
        let cfg = json!({"scenario": base(), "outputs": [
            {"kind": "timesim", "path": "s.csv", "params": {"mic": 3}}
        ]});
        let err = Plan::from_config(serde_json::from_value(cfg).unwrap(), None).unwrap_err();
        assert!(matches!(&err, RunError::Schema(m) if m.contains("mic")), "{err}");
    }

    #[test]
    fn small_run_renders() {
        let cfg = json!({"scenario": base(), "outputs": [
            {"kind": "sweep", "path": "s.csv", "params": {"step": 10.0}},
            {"kind": "spl", "path": "p.csv", "params": {"points": [{"x": 1.0, "y": 0.0, "z": 0.05}]}},
            {"kind": "map", "path": "m.pgm", "params": {"grid": {"origin": {"x": -0.2, "y": -0.2, "z": 0.05},
                "dx": 0.05, "dy": 0.05, "nx": 9, "ny": 9}}}
        ]});
        let art = run_json(&cfg.to_string(), None).unwrap();
        assert_eq!(art.len(), 3);
        let sweep = String::from_utf8(art[0].bytes.clone()).unwrap();
        assert!(sweep.starts_with("alpha_deg,db\n"));
        assert_eq!(sweep.lines().count(), 1 + 19);
        assert!(String::from_utf8(art[1].bytes.clone())
            .unwrap()
            .starts_with("x,y,z,spl_db\n"));
        assert!(art[2].bytes.starts_with(b"P2"));
    }
}
