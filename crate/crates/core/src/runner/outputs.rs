use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Cursor;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{OutputKind, RunResult};
use crate::capture::{apply_occlusion, jam_incident, mix_and_record, synth_speech, Occlusion, Provenance};
use crate::field::{angular_sweep, power_map, spl_at, AngularProfile, GridSpec, PowerMap};
use crate::geometry::Vec3;
use crate::metrics::{
    coverage_stats, detect_blind_spots, speech_quality_proxy, CoverageStats, WerEstimate, WerModel,
    DEFAULT_NEIGHBORHOOD, DEFAULT_THRESHOLD_DB,
};
use crate::motion::{
    gen_gesture_trajectory, sjr_timeseries, time_averaged_map, time_averaged_sweep, GestureParams, SJRSeries,
    Trajectory, TrajectoryKind, WORD_WINDOW,
};
use crate::scenario::Scenario;
use crate::setups::{calibrated_tau, still, WER_FRAME_RATE};
use crate::signal::{write_wav, WavFormat, PASSBAND_RATE};

/// Wearer motion driving jammer 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionSpec {
    pub kind: TrajectoryKind,
    /// Seconds.
    #[serde(default = "default_motion_duration")]
    pub duration: f64,
    #[serde(default = "default_frame_rate")]
    pub frame_rate: f64,
    /// Averaging window for maps and sweeps, s.
    #[serde(default = "default_window")]
    pub window: f64,
    #[serde(default)]
    pub gestures: GestureParams,
}

fn default_motion_duration() -> f64 {
    4.0
}
fn default_frame_rate() -> f64 {
    WER_FRAME_RATE
}
fn default_window() -> f64 {
    WORD_WINDOW
}
fn default_radius() -> f64 {
    1.0
}
fn default_step() -> f64 {
    2.0
}
fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD_DB
}
fn default_neighborhood() -> f64 {
    DEFAULT_NEIGHBORHOOD
}
fn default_sjr_duration() -> f64 {
    20.0
}
fn default_target() -> f64 {
    0.95
}
fn default_true() -> bool {
    true
}
fn default_recording_duration() -> f64 {
    1.0
}

impl MotionSpec {
    pub fn new(kind: TrajectoryKind, duration: f64) -> Self {
        Self {
            kind,
            duration,
            frame_rate: default_frame_rate(),
            window: default_window(),
            gestures: GestureParams::default(),
        }
    }

    fn trajectory(&self, scenario: &Scenario) -> crate::Result<Trajectory> {
        gen_gesture_trajectory(
            self.kind,
            scenario.jammers[0].reference_pose(),
            self.duration,
            self.frame_rate,
            scenario.seed,
            &self.gestures,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapParams {
    #[serde(default)]
    pub grid: GridSpec,
    /// Time-averaged map under this motion instead of the static one.
    #[serde(default)]
    pub motion: Option<MotionSpec>,
    /// Re-split every jammer over this many independent sources.
    #[serde(default)]
    pub sources: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlindSpotParams {
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub motion: Option<MotionSpec>,
    #[serde(default)]
    pub sources: Option<u32>,
    #[serde(default = "default_threshold")]
    pub threshold_db: f64,
    #[serde(default = "default_neighborhood")]
    pub neighborhood: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Degrees.
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub motion: Option<MotionSpec>,
    #[serde(default)]
    pub sources: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryParams {
    pub motion: MotionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SjrParams {
    #[serde(default)]
    pub mic: usize,
    /// Motion of jammer 0; static when absent.
    #[serde(default)]
    pub motion: Option<MotionSpec>,
    /// Length of a static run, s.
    #[serde(default = "default_sjr_duration")]
    pub duration: f64,
    /// Replace the mic's occlusion (`none` removes it).
    #[serde(default)]
    pub occlusion: Option<String>,
    #[serde(default)]
    pub sources: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WerParams {
    #[serde(default)]
    pub mic: usize,
    #[serde(default)]
    pub motion: Option<MotionSpec>,
    #[serde(default = "default_sjr_duration")]
    pub duration: f64,
    #[serde(default)]
    pub occlusion: Option<String>,
    #[serde(default)]
    pub sources: Option<u32>,
    /// `model.tau_db` is replaced when `calibrate` is set.
    #[serde(default)]
    pub model: WerModel,
    /// Calibrate tau on the on-axis anchor first.
    #[serde(default = "default_true")]
    pub calibrate: bool,
    #[serde(default = "default_target")]
    pub target_wer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplParams {
    pub points: Vec<Vec3>,
    #[serde(default)]
    pub sources: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordingParams {
    #[serde(default)]
    pub mic: usize,
    #[serde(default = "default_recording_duration")]
    pub duration: f64,
    #[serde(default)]
    pub occlusion: Option<String>,
    #[serde(default)]
    pub sources: Option<u32>,
    #[serde(default)]
    pub format: WavFormat,
}

/// A typed output request.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Map(MapParams),
    Blindspots(BlindSpotParams),
    Sweep(SweepParams),
    Stats(SweepParams),
    Trajectory(TrajectoryParams),
    Timesim(SjrParams),
    Wer(WerParams),
    Spl(SplParams),
    Recording(RecordingParams),
}

/// Static and (optionally) motion-averaged coverage of one ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub radius: f64,
    #[serde(rename = "static")]
    pub static_stats: CoverageStats,
    pub motion: Option<CoverageStats>,
    /// Motion std over static std.
    pub std_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WerReport {
    #[serde(flatten)]
    pub estimate: WerEstimate,
    pub calibrated: bool,
    pub mean_sjr_db: f64,
    pub quality_proxy: f64,
}

fn parse<T: DeserializeOwned>(params: &serde_json::Value) -> Result<T, String> {
    let v = if params.is_null() {
        serde_json::Value::Object(Default::default())
    } else {
        params.clone()
    };
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.into_inner().to_string()
        } else {
            format!("{path}: {}", e.into_inner())
        }
    })
}

fn occlusion_by_name(name: &str) -> crate::Result<Occlusion> {
    if name == "none" {
        Ok(Occlusion::none())
    } else {
        Occlusion::by_name(name)
    }
}

fn check_mic(scenario: &Scenario, mic: usize) -> Result<(), String> {
    if mic >= scenario.mics.len() {
        return Err(format!(
            "mic: index {mic} but the scenario has {} microphones",
            scenario.mics.len()
        ));
    }
    if scenario.speech.is_none() {
        return Err("mic: the scenario has no speech source".into());
    }
    Ok(())
}

fn check_common(sources: Option<u32>, occlusion: Option<&String>) -> Result<(), String> {
    if sources == Some(0) {
        return Err("sources: must be at least 1".into());
    }
    if let Some(name) = occlusion {
        occlusion_by_name(name).map_err(|e| format!("occlusion: {e}"))?;
    }
    Ok(())
}

impl Output {
    pub fn parse(kind: OutputKind, params: &serde_json::Value) -> Result<Self, String> {
        Ok(match kind {
            OutputKind::Map => Output::Map(parse(params)?),
            OutputKind::Blindspots => Output::Blindspots(parse(params)?),
            OutputKind::Sweep => Output::Sweep(parse(params)?),
            OutputKind::Stats => Output::Stats(parse(params)?),
            OutputKind::Trajectory => Output::Trajectory(parse(params)?),
            OutputKind::Timesim => Output::Timesim(parse(params)?),
            OutputKind::Wer => Output::Wer(parse(params)?),
            OutputKind::Spl => Output::Spl(parse(params)?),
            OutputKind::Recording => Output::Recording(parse(params)?),
        })
    }

    /// Cross-checks against the scenario; the message starts with the key.
    pub(crate) fn check(&self, scenario: &Scenario) -> Result<(), String> {
        match self {
            Output::Map(p) => check_common(p.sources, None),
            Output::Blindspots(p) => check_common(p.sources, None),
            Output::Sweep(p) | Output::Stats(p) => check_common(p.sources, None),
            Output::Trajectory(_) => Ok(()),
            Output::Timesim(p) => {
                check_common(p.sources, p.occlusion.as_ref())?;
                check_mic(scenario, p.mic)
            }
            Output::Wer(p) => {
                check_common(p.sources, p.occlusion.as_ref())?;
                check_mic(scenario, p.mic)
            }
            Output::Spl(p) => check_common(p.sources, None),
            Output::Recording(p) => {
                check_common(p.sources, p.occlusion.as_ref())?;
                check_mic(scenario, p.mic)
            }
        }
    }

    pub(crate) fn render(&self, cx: &mut Context<'_>, path: &str) -> RunResult<Vec<u8>> {
        let text = match self {
            Output::Map(p) => {
                let map = cx.map(&p.grid, p.motion.as_ref(), p.sources)?;
                if path.ends_with(".pgm") {
                    map.to_pgm()
                } else {
                    map.to_csv()
                }
            }
            Output::Blindspots(p) => {
                let map = cx.map(&p.grid, p.motion.as_ref(), p.sources)?;
                detect_blind_spots(&map, p.threshold_db, p.neighborhood)?.to_json()
            }
            Output::Sweep(p) => cx.profile(p, p.motion.as_ref())?.to_csv(),
            Output::Stats(p) => {
                let static_stats = coverage_stats(&cx.profile(p, None)?)?;
                let motion = match &p.motion {
                    Some(m) => Some(coverage_stats(&cx.profile(p, Some(m))?)?),
                    None => None,
                };
                let report = StatsReport {
                    radius: p.radius,
                    static_stats,
                    motion,
                    std_ratio: motion.map(|m| m.std_db / static_stats.std_db),
                };
                serde_json::to_string_pretty(&report).expect("report serializes")
            }
            Output::Trajectory(p) => p.motion.trajectory(cx.scenario)?.to_csv(),
            Output::Timesim(p) => {
                let s = cx.variant(p.sources, p.occlusion.as_deref())?;
                sjr(&s, p.motion.as_ref(), p.duration, p.mic)?.to_csv()
            }
            Output::Wer(p) => {
                let s = cx.variant(p.sources, p.occlusion.as_deref())?;
                let series = sjr(&s, p.motion.as_ref(), p.duration, p.mic)?;
                let model = if p.calibrate {
                    p.model.with_tau(cx.tau(&p.model, p.target_wer)?)
                } else {
                    p.model
                };
                let report = WerReport {
                    estimate: model.estimate(&series)?,
                    calibrated: p.calibrate,
                    mean_sjr_db: series.mean_db(),
                    quality_proxy: speech_quality_proxy(series.mean_db()),
                };
                serde_json::to_string_pretty(&report).expect("report serializes")
            }
            Output::Spl(p) => {
                let s = cx.variant(p.sources, None)?;
                let mut out = String::from("x,y,z,spl_db\n");
                for q in &p.points {
                    let _ = writeln!(out, "{:.4},{:.4},{:.4},{:.6}", q.x, q.y, q.z, spl_at(&s, *q)?);
                }
                out
            }
            Output::Recording(p) => return recording(cx, p, path),
        };
        Ok(text.into_bytes())
    }
}

fn sjr(s: &Scenario, motion: Option<&MotionSpec>, duration: f64, mic: usize) -> crate::Result<SJRSeries> {
    let traj = match motion {
        Some(m) => m.trajectory(s)?,
        None => still(s, duration)?,
    };
    sjr_timeseries(s, &traj, mic)
}

fn recording(cx: &mut Context<'_>, p: &RecordingParams, path: &str) -> RunResult<Vec<u8>> {
    let s = cx.variant(p.sources, p.occlusion.as_deref())?;
    let mic = &s.mics[p.mic];
    let pos = mic.pose.position;
    let speech = s.speech.as_ref().expect("checked in plan");
    let jam = jam_incident(&s, &s.reference_poses(), pos, p.duration, PASSBAND_RATE)?;
    let voice = synth_speech(speech, pos, p.duration, PASSBAND_RATE, s.seed)?;
    let (jam, voice) = match &mic.occlusion {
        Some(o) => apply_occlusion(o, &jam, &voice),
        None => (jam, voice),
    };
    let prov = Provenance {
        scenario_id: path.to_string(),
        mic_id: p.mic,
        seed: s.seed,
    };
    let rec = mix_and_record(&mic.model, &jam, &voice, prov)?;
    let mut buf = Cursor::new(Vec::new());
    write_wav(&rec.signal, p.format, &mut buf)?;
    Ok(buf.into_inner())
}

/// Per-run state: the scenario plus caches shared between outputs.
pub(crate) struct Context<'a> {
    scenario: &'a Scenario,
    maps: HashMap<String, PowerMap>,
    profiles: HashMap<String, AngularProfile>,
    taus: HashMap<String, f64>,
}

fn key<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("key serializes")
}

impl<'a> Context<'a> {
    pub(crate) fn new(scenario: &'a Scenario) -> Self {
        Self {
            scenario,
            maps: HashMap::new(),
            profiles: HashMap::new(),
            taus: HashMap::new(),
        }
    }

    fn variant(&self, sources: Option<u32>, occlusion: Option<&str>) -> crate::Result<Scenario> {
        let mut s = self.scenario.clone();
        if let Some(n) = sources {
            for j in &mut s.jammers {
                j.config = j.config.clone().with_sources(n);
            }
        }
        if let Some(name) = occlusion {
            let occ = occlusion_by_name(name)?;
            for m in &mut s.mics {
                m.occlusion = (occ.name != "none").then(|| occ.clone());
            }
        }
        Ok(s)
    }

    fn map(&mut self, grid: &GridSpec, motion: Option<&MotionSpec>, sources: Option<u32>) -> crate::Result<PowerMap> {
        let k = key(&(grid, motion, sources));
        if let Some(m) = self.maps.get(&k) {
            return Ok(m.clone());
        }
        let s = self.variant(sources, None)?;
        let map = match motion {
            Some(m) => time_averaged_map(&s, &m.trajectory(&s)?, m.window, grid)?,
            None => power_map(&s, grid)?,
        };
        self.maps.insert(k, map.clone());
        Ok(map)
    }

    fn profile(&mut self, p: &SweepParams, motion: Option<&MotionSpec>) -> crate::Result<AngularProfile> {
        let k = key(&(p.radius, p.step, motion, p.sources));
        if let Some(v) = self.profiles.get(&k) {
            return Ok(v.clone());
        }
        let s = self.variant(p.sources, None)?;
        let prof = match motion {
            Some(m) => time_averaged_sweep(&s, &m.trajectory(&s)?, m.window, p.radius, p.step)?,
            None => angular_sweep(&s, p.radius, p.step)?,
        };
        self.profiles.insert(k, prof.clone());
        Ok(prof)
    }

    fn tau(&mut self, model: &WerModel, target: f64) -> crate::Result<f64> {
        let k = key(&(model.rho, model.baseline, model.word_duration, target));
        if let Some(t) = self.taus.get(&k) {
            return Ok(*t);
        }
        let t = calibrated_tau(target, model, self.scenario.seed)?;
        self.taus.insert(k, t);
        Ok(t)
    }
}
