use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::outputs::MotionSpec;
use super::{OutputKind, OutputSpec, RunConfig, RunResult};
use crate::capture::Occlusion;
use crate::error::Error;
use crate::field::GridSpec;
use crate::geometry::Vec3;
use crate::motion::TrajectoryKind;
use crate::presets::PresetId;
use crate::scenario::MIC_HEIGHT;
use crate::setups::{angle_setup, calibration_scenario, deepest_null, jammer_scenario, RING_RADIUS};

/// Named, ready-made runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeId {
    Fig3,
    Fig6,
    Fig7,
    Fig9,
    Fig11,
    Fig12,
    Fig14,
}

/// Row of the recipe listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipeInfo {
    pub id: String,
    pub description: String,
    pub artifacts: Vec<String>,
}

/// Gestures compared against the static pose.
const GESTURES: [TrajectoryKind; 3] = [TrajectoryKind::Point, TrajectoryKind::Wave, TrajectoryKind::Rotate];
const MOTION_MAP_SECONDS: f64 = 4.0;
const MOTION_SWEEP_SECONDS: f64 = 10.0;
const GESTURE_SECONDS: f64 = 12.0;
const RECORDING_SECONDS: f64 = 0.5;

fn out(kind: OutputKind, path: impl Into<String>, params: serde_json::Value) -> OutputSpec {
    OutputSpec {
        kind,
        path: path.into(),
        params,
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("params serialize")
}

impl RecipeId {
    pub const ALL: [RecipeId; 7] = [
        RecipeId::Fig3,
        RecipeId::Fig6,
        RecipeId::Fig7,
        RecipeId::Fig9,
        RecipeId::Fig11,
        RecipeId::Fig12,
        RecipeId::Fig14,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecipeId::Fig3 => "fig3",
            RecipeId::Fig6 => "fig6",
            RecipeId::Fig7 => "fig7",
            RecipeId::Fig9 => "fig9",
            RecipeId::Fig11 => "fig11",
            RecipeId::Fig12 => "fig12",
            RecipeId::Fig14 => "fig14",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            RecipeId::Fig3 => "Backdoor 3x3 angular sweep at 1 m and its coverage statistics",
            RecipeId::Fig6 => "Backdoor 3x3 power map in front of the array with blind-spot report",
            RecipeId::Fig7 => "Bracelet (24 elements) power maps driven by 1, 2 and 24 independent sources",
            RecipeId::Fig9 => "Bracelet power map, static and averaged over random wrist rotation",
            RecipeId::Fig11 => "Bracelet 1 m angular coverage, static and under random rotation",
            RecipeId::Fig12 => "WER proxy for a microphone in the bracelet's weakest direction, static and per gesture",
            RecipeId::Fig14 => "WER proxy on the on-axis anchor with the microphone under each covering material",
        }
    }

    pub fn info(self) -> RunResult<RecipeInfo> {
        Ok(RecipeInfo {
            id: self.as_str().to_string(),
            description: self.description().to_string(),
            artifacts: self.config()?.outputs.into_iter().map(|o| o.path).collect(),
        })
    }

    /// The concrete config this recipe stands for.
    pub fn config(self) -> RunResult<RunConfig> {
        use OutputKind::*;
        let (scenario, outputs) = match self {
            RecipeId::Fig3 => (
                jammer_scenario(PresetId::Backdoor3x3, 1),
                vec![
                    out(Sweep, "sweep.csv", json!({"radius": RING_RADIUS, "step": 2.0})),
                    out(Stats, "stats.json", json!({"radius": RING_RADIUS, "step": 2.0})),
                ],
            ),
            RecipeId::Fig6 => {
                // 1 m x 1 m in front of the array
                let grid = GridSpec {
                    origin: Vec3::new(-0.495, 0.005, MIC_HEIGHT),
                    dx: 0.01,
                    dy: 0.01,
                    nx: 100,
                    ny: 100,
                };
                let g = json!({ "grid": to_value(&grid) });
                (
                    jammer_scenario(PresetId::Backdoor3x3, 1),
                    vec![
                        out(Map, "map.csv", g.clone()),
                        out(Map, "map.pgm", g.clone()),
                        out(Blindspots, "blindspots.json", g),
                    ],
                )
            }
            RecipeId::Fig7 => {
                let mut v = Vec::new();
                for n in [1, 2, 24] {
                    let p = json!({ "sources": n });
                    v.push(out(Map, format!("map_{n}src.csv"), p.clone()));
                    v.push(out(Map, format!("map_{n}src.pgm"), p.clone()));
                    v.push(out(Blindspots, format!("blindspots_{n}src.json"), p));
                }
                (jammer_scenario(PresetId::Bracelet24, 1), v)
            }
            RecipeId::Fig9 => {
                let m = json!({
                    "motion": to_value(&MotionSpec::new(TrajectoryKind::RandomRotation, MOTION_MAP_SECONDS))
                });
                (
                    jammer_scenario(PresetId::Bracelet24, 1),
                    vec![
                        out(Map, "static_map.pgm", json!({})),
                        out(Blindspots, "static_blindspots.json", json!({})),
                        out(Trajectory, "trajectory.csv", m.clone()),
                        out(Map, "motion_map.csv", m.clone()),
                        out(Map, "motion_map.pgm", m.clone()),
                        out(Blindspots, "motion_blindspots.json", m),
                    ],
                )
            }
            RecipeId::Fig11 => {
                let motion = to_value(&MotionSpec::new(TrajectoryKind::RandomRotation, MOTION_SWEEP_SECONDS));
                (
                    jammer_scenario(PresetId::Bracelet24, 1),
                    vec![
                        out(Sweep, "static_sweep.csv", json!({})),
                        out(Sweep, "motion_sweep.csv", json!({ "motion": motion })),
                        out(Stats, "stats.json", json!({ "motion": motion })),
                    ],
                )
            }
            RecipeId::Fig12 => {
                let alpha = deepest_null(&jammer_scenario(PresetId::Bracelet24, 1), RING_RADIUS, 1.0)?;
                let scenario = angle_setup(PresetId::Bracelet24, 1, alpha, RING_RADIUS)?;
                let mut v = vec![out(Wer, "wer_static.json", json!({ "duration": GESTURE_SECONDS }))];
                for g in GESTURES {
                    let m = json!({ "motion": to_value(&MotionSpec::new(g, GESTURE_SECONDS)) });
                    v.push(out(Timesim, format!("sjr_{g}.csv"), m.clone()));
                    v.push(out(Wer, format!("wer_{g}.json"), m));
                }
                (scenario, v)
            }
            RecipeId::Fig14 => {
                let mut v = Vec::new();
                let names: Vec<String> = std::iter::once(Occlusion::none())
                    .chain(Occlusion::table())
                    .map(|o| o.name)
                    .collect();
                for name in &names {
                    v.push(out(Wer, format!("wer_{name}.json"), json!({ "occlusion": name })));
                }
                for name in ["none", "paper_box"] {
                    v.push(out(
                        Recording,
                        format!("recording_{name}.wav"),
                        json!({ "occlusion": name, "duration": RECORDING_SECONDS }),
                    ));
                }
                (calibration_scenario()?, v)
            }
        };
        Ok(RunConfig {
            scenario: Some(scenario),
            outputs,
            recipe: None,
            seed: None,
        })
    }
}

impl fmt::Display for RecipeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecipeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        RecipeId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                what: "recipe",
                name: s.to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::super::Plan;
    use super::*;

    #[test]
    fn every_recipe_plans() {
        for id in RecipeId::ALL {
            let plan = Plan::from_config(id.config().unwrap(), None).unwrap();
            assert!(!plan.outputs.is_empty(), "{id}");
            assert_eq!(id.as_str().parse::<RecipeId>().unwrap(), id);
        }
    }

    #[test]
    fn serde_names_match() {
        for id in RecipeId::ALL {
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
    }
}
