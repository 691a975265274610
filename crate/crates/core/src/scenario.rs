//! World description: transducers, jammers, microphones, speech, medium,
//! and consistency validation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::capture::{MicrophoneModel, Occlusion};
use crate::field::EmissionPattern;
use crate::geometry::{Pose, Vec3};
use crate::motion::Trajectory;
use crate::signal::SignalSpec;

pub const MIN_CARRIER_HZ: f64 = 20_000.0;
pub const MAX_CARRIER_HZ: f64 = 80_000.0;

/// Default microphone (and map plane) height above the table.
pub const MIC_HEIGHT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Medium {
    /// m/s.
    pub sound_speed: f64,
    /// dB/m at the carrier.
    pub absorption: f64,
}

impl Default for Medium {
    fn default() -> Self {
        Self {
            sound_speed: 343.0,
            absorption: 0.9,
        }
    }
}

impl Medium {
    pub fn lossless() -> Self {
        Self {
            absorption: 0.0,
            ..Self::default()
        }
    }

    /// rad/m.
    pub fn wavenumber(&self, freq: f64) -> f64 {
        2.0 * std::f64::consts::PI * freq / self.sound_speed
    }

    pub fn wavelength(&self, freq: f64) -> f64 {
        self.sound_speed / freq
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transducer {
    /// In the jammer's body frame.
    pub pose: Pose,
    pub pattern: EmissionPattern,
    /// Hz.
    pub carrier_freq: f64,
    /// Transducers sharing a source id are driven by one generator.
    #[serde(default)]
    pub source_id: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JammerConfig {
    pub transducers: Vec<Transducer>,
    #[serde(default)]
    pub signal: SignalSpec,
    /// dB SPL at 1 m on boresight, per transducer.
    pub drive_level: f64,
}

impl JammerConfig {
    pub fn carrier_freq(&self) -> f64 {
        self.transducers
            .first()
            .map(|t| t.carrier_freq)
            .unwrap_or(self.signal.carrier_freq)
    }

    /// Reassign source ids round-robin over `sources` generators.
    pub fn with_sources(mut self, sources: u32) -> Self {
        let n = sources.max(1);
        for (i, t) in self.transducers.iter_mut().enumerate() {
            t.source_id = i as u32 % n;
        }
        self
    }

    pub fn source_count(&self) -> usize {
        let mut ids: Vec<u32> = self.transducers.iter().map(|t| t.source_id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Mean body-frame transducer position.
    pub fn local_centroid(&self) -> Vec3 {
        let n = self.transducers.len().max(1) as f64;
        self.transducers.iter().fold(Vec3::ZERO, |acc, t| acc + t.pose.position) * (1.0 / n)
    }
}

/// Where a jammer is: fixed, or following a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Static(Pose),
    Moving(Trajectory),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JammerPlacement {
    pub config: JammerConfig,
    pub placement: Placement,
}

impl JammerPlacement {
    pub fn fixed(config: JammerConfig, pose: Pose) -> Self {
        Self {
            config,
            placement: Placement::Static(pose),
        }
    }

    /// Pose of the static placement, or the first trajectory frame.
    pub fn reference_pose(&self) -> Pose {
        match &self.placement {
            Placement::Static(p) => *p,
            Placement::Moving(t) => t.frames.first().copied().unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicPlacement {
    pub pose: Pose,
    #[serde(default)]
    pub model: MicrophoneModel,
    #[serde(default)]
    pub occlusion: Option<Occlusion>,
}

impl MicPlacement {
    pub fn at(position: Vec3) -> Self {
        Self {
            pose: Pose::at(position),
            model: MicrophoneModel::default(),
            occlusion: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeechSource {
    pub position: Vec3,
    /// dBA at 1 m.
    #[serde(default = "default_speech_level")]
    pub level_dba_at_1m: f64,
    /// Seconds.
    #[serde(default = "default_word_duration")]
    pub word_duration: f64,
    /// Standard deviation of per-word loudness, dB.
    #[serde(default = "default_word_spread")]
    pub word_level_spread_db: f64,
}

fn default_speech_level() -> f64 {
    57.5
}
fn default_word_duration() -> f64 {
    0.4
}
fn default_word_spread() -> f64 {
    3.0
}

impl SpeechSource {
    pub fn at(position: Vec3) -> Self {
        Self {
            position,
            level_dba_at_1m: default_speech_level(),
            word_duration: default_word_duration(),
            word_level_spread_db: default_word_spread(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub jammers: Vec<JammerPlacement>,
    #[serde(default)]
    pub mics: Vec<MicPlacement>,
    #[serde(default)]
    pub speech: Option<SpeechSource>,
    #[serde(default)]
    pub medium: Medium,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    pub fn single(config: JammerConfig, pose: Pose) -> Self {
        Self {
            jammers: vec![JammerPlacement::fixed(config, pose)],
            mics: Vec::new(),
            speech: None,
            medium: Medium::default(),
            seed: 0,
        }
    }

    pub fn with_medium(mut self, medium: Medium) -> Self {
        self.medium = medium;
        self
    }

    /// Height of the first microphone, else the default map height.
    pub fn mic_height(&self) -> f64 {
        self.mics.first().map(|m| m.pose.position.z).unwrap_or(MIC_HEIGHT)
    }

    /// Reference pose of every jammer.
    pub fn reference_poses(&self) -> Vec<Pose> {
        self.jammers.iter().map(|j| j.reference_pose()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// One failed invariant: where, and what.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub problem: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.problem)
    }
}

struct Checker {
    out: Vec<Violation>,
}

impl Checker {
    fn check(&mut self, ok: bool, path: impl FnOnce() -> String, problem: impl FnOnce() -> String) {
        if !ok {
            self.out.push(Violation {
                path: path(),
                problem: problem(),
            });
        }
    }

    fn pose(&mut self, path: &str, p: &Pose) {
        self.check(p.is_finite(), || path.into(), || "non-finite pose".into());
        self.check(
            p.angles_normalized(),
            || path.into(),
            || "angles not normalized to (-pi, pi]".into(),
        );
    }
}

/// Every invariant violation in `s`; empty means the scenario is usable.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut c = Checker { out: Vec::new() };
    c.check(!s.jammers.is_empty(), || "jammers".into(), || "no jammer".into());

    let mut carrier: Option<f64> = None;
    for (j, jam) in s.jammers.iter().enumerate() {
        let jp = format!("jammers[{j}]");
        let cfg = &jam.config;
        c.check(
            !cfg.transducers.is_empty(),
            || format!("{jp}.config.transducers"),
            || "no transducer".into(),
        );
        c.check(
            cfg.drive_level.is_finite(),
            || format!("{jp}.config.drive_level"),
            || "non-finite".into(),
        );
        if let Err(e) = cfg.signal.validate() {
            c.check(false, || format!("{jp}.config.signal"), || e.to_string());
        }
        for (t, tr) in cfg.transducers.iter().enumerate() {
            let tp = format!("{jp}.config.transducers[{t}]");
            c.pose(&format!("{tp}.pose"), &tr.pose);
            c.check(
                (MIN_CARRIER_HZ..=MAX_CARRIER_HZ).contains(&tr.carrier_freq),
                || format!("{tp}.carrier_freq"),
                || format!("{} Hz outside [20 kHz, 80 kHz]", tr.carrier_freq),
            );
            for problem in tr.pattern.violations() {
                c.check(false, || format!("{tp}.pattern"), || problem);
            }
            match carrier {
                None => carrier = Some(tr.carrier_freq),
                Some(f) => c.check(
                    f == tr.carrier_freq,
                    || format!("{tp}.carrier_freq"),
                    || format!("carrier mismatch: {} Hz vs {} Hz", tr.carrier_freq, f),
                ),
            }
        }
        if let Some(first) = cfg.transducers.first() {
            c.check(
                cfg.signal.carrier_freq == first.carrier_freq,
                || format!("{jp}.config.signal.carrier_freq"),
                || {
                    format!(
                        "carrier mismatch: signal {} Hz vs transducers {} Hz",
                        cfg.signal.carrier_freq, first.carrier_freq
                    )
                },
            );
        }
        match &jam.placement {
            Placement::Static(p) => c.pose(&format!("{jp}.placement"), p),
            Placement::Moving(t) => {
                for problem in t.violations() {
                    c.check(false, || format!("{jp}.placement"), || problem);
                }
            }
        }
    }

    for (m, mic) in s.mics.iter().enumerate() {
        let mp = format!("mics[{m}]");
        c.pose(&format!("{mp}.pose"), &mic.pose);
        for problem in mic.model.violations() {
            c.check(false, || format!("{mp}.model"), || problem);
        }
        if let Some(o) = &mic.occlusion {
            c.check(
                o.atten_audible_db >= 0.0 && o.atten_ultrasonic_db >= 0.0,
                || format!("{mp}.occlusion"),
                || "negative attenuation".into(),
            );
        }
    }

    if let Some(sp) = &s.speech {
        c.check(
            sp.position.is_finite(),
            || "speech.position".into(),
            || "non-finite".into(),
        );
        c.check(
            (30.0..=90.0).contains(&sp.level_dba_at_1m),
            || "speech.level_dba_at_1m".into(),
            || format!("{} dB outside [30, 90]", sp.level_dba_at_1m),
        );
        c.check(
            sp.word_duration > 0.0,
            || "speech.word_duration".into(),
            || "must be positive".into(),
        );
        c.check(
            sp.word_level_spread_db >= 0.0,
            || "speech.word_level_spread_db".into(),
            || "must be non-negative".into(),
        );
    }

    c.check(
        s.medium.sound_speed > 0.0,
        || "medium.sound_speed".into(),
        || "must be positive".into(),
    );
    c.check(
        s.medium.absorption >= 0.0,
        || "medium.absorption".into(),
        || "must be non-negative".into(),
    );
    c.out
}
