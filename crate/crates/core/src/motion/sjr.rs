use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::average::frame_models;
use super::trajectory::Trajectory;
use crate::capture::{recorded_jam_power, recorded_speech_power, speech_level_at, spl_to_rms, word_levels_db};
use crate::error::{Error, Result};
use crate::field::FieldModel;
use crate::par;
use crate::scenario::{MicPlacement, Scenario};

/// Recorded jam-to-speech ratio per trajectory frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SJRSeries {
    /// Seconds.
    pub times: Vec<f64>,
    pub sjr_db: Vec<f64>,
}

impl SJRSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Frame spacing, s (1 for a single frame).
    pub fn frame_period(&self) -> f64 {
        if self.times.len() < 2 {
            1.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    pub fn mean_db(&self) -> f64 {
        self.sjr_db.iter().sum::<f64>() / self.sjr_db.len().max(1) as f64
    }

    /// CSV with header `t,sjr_db`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,sjr_db\n");
        for (t, v) in self.times.iter().zip(&self.sjr_db) {
            let _ = writeln!(out, "{t:.6},{v:.6}");
        }
        out
    }
}

/// Recorded jam power at a mic for one field model (mean-removed
/// baseband power, normalized units).
pub fn recorded_jam_at(scenario: &Scenario, model: &FieldModel, mic: &MicPlacement) -> Result<f64> {
    let p = model.power(mic.pose.position)?;
    let gain = mic.occlusion.as_ref().map_or(1.0, |o| o.ultrasonic_gain());
    let rms = spl_to_rms(scenario.jammers[0].config.drive_level) * p.sqrt() * gain;
    let m = scenario.jammers[0].config.signal.modulation_depth;
    Ok(recorded_jam_power(&mic.model, rms, m))
}

/// Recorded speech power at a mic for each word.
pub fn recorded_speech_words(scenario: &Scenario, mic: &MicPlacement, n_words: usize) -> Result<Vec<f64>> {
    let speech = scenario.speech.as_ref().ok_or(Error::Missing("speech source"))?;
    let level = speech_level_at(speech, mic.pose.position)?;
    let gain = mic.occlusion.as_ref().map_or(1.0, |o| o.audible_gain());
    Ok(word_levels_db(speech, n_words, scenario.seed)
        .into_iter()
        .map(|off| recorded_speech_power(&mic.model, spl_to_rms(level + off) * gain))
        .collect())
}

/// SJR at mic `mic_index` for every frame of `traj` (which drives jammer 0).
///
/// Jam power is the analytic square-law baseband power for the incident
/// carrier level at that frame; speech power is the linear-path power of
/// the word being spoken at that frame time.
pub fn sjr_timeseries(scenario: &Scenario, traj: &Trajectory, mic_index: usize) -> Result<SJRSeries> {
    let speech = scenario.speech.as_ref().ok_or(Error::Missing("speech source"))?;
    let mic = scenario.mics.get(mic_index).ok_or(Error::Unknown {
        what: "microphone",
        name: mic_index.to_string(),
    })?;
    let models = frame_models(scenario, traj)?;
    let times: Vec<f64> = (0..traj.len()).map(|i| traj.time(i)).collect();
    let word_of = |t: f64| (t / speech.word_duration + 1e-9).floor() as usize;
    let n_words = word_of(times[times.len() - 1]) + 1;
    let words = recorded_speech_words(scenario, mic, n_words)?;
    let sjr_db = par::map_indices(models.len(), |i| {
        let jam = recorded_jam_at(scenario, &models[i], mic)?;
        Ok(10.0 * (jam / words[word_of(times[i])]).log10())
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(SJRSeries { times, sjr_db })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capture::{jam_incident, mix_and_record, synth_speech, MicrophoneModel, Occlusion, Provenance};
    use crate::geometry::{Pose, Vec3};
    use crate::presets::{build_preset, PresetId};
    use crate::scenario::{SpeechSource, MIC_HEIGHT};
    use crate::signal::PASSBAND_RATE;
    use std::f64::consts::FRAC_PI_2;

    fn fig2(alpha_deg: f64) -> Scenario {
        let pose = Pose::new(Vec3::new(0.0, 0.0, MIC_HEIGHT), FRAC_PI_2, 0.0);
        let mut s = Scenario::single(build_preset(PresetId::Backdoor3x3), pose);
        let a = FRAC_PI_2 + alpha_deg.to_radians();
        s.mics.push(MicPlacement::at(Vec3::new(a.cos(), a.sin(), MIC_HEIGHT)));
        s.speech = Some(SpeechSource::at(Vec3::new(0.0, 0.0, MIC_HEIGHT)));
        s
    }

    fn still(s: &Scenario, secs: f64) -> Trajectory {
        Trajectory::stationary(s.jammers[0].reference_pose(), secs, 100.0).unwrap()
    }

    #[test]
    fn missing_speech_is_an_error() {
        let mut s = fig2(0.0);
        s.speech = None;
        assert!(matches!(sjr_timeseries(&s, &still(&s, 1.0), 0), Err(Error::Missing(_))));
    }

    #[test]
    fn louder_speech_shifts_sjr() {
        let mut s = fig2(10.0);
        for m in &mut s.mics {
            m.model.a3 = 0.0;
        }
        let t = still(&s, 2.0);
        let a = sjr_timeseries(&s, &t, 0).unwrap();
        s.speech.as_mut().unwrap().level_dba_at_1m += 20.0 * 2f64.log10();
        let b = sjr_timeseries(&s, &t, 0).unwrap();
        assert_eq!(a.len(), t.len());
        for (x, y) in a.sjr_db.iter().zip(&b.sjr_db) {
            assert!((x - y - 6.0206).abs() < 1e-3);
        }
    }

    #[test]
    fn occlusion_moves_recorded_sjr() {
        // incident ratio moves by the attenuation difference; the square
        // law doubles it on the jam side
        let mut s = fig2(0.0);
        let t = still(&s, 0.5);
        let clear = sjr_timeseries(&s, &t, 0).unwrap();
        s.mics[0].occlusion = Some(Occlusion::by_name("tshirt").unwrap());
        let covered = sjr_timeseries(&s, &t, 0).unwrap();
        let d = covered.sjr_db[0] - clear.sjr_db[0];
        assert!((d - (-2.0 * 2.0 + 1.0)).abs() < 1e-9, "{d}");
    }

    #[test]
    fn analytic_series_matches_recording() {
        // end-to-end: time-domain jam and speech through the capture chain
        let mut s = fig2(0.0);
        s.speech.as_mut().unwrap().word_level_spread_db = 0.0;
        let mic = s.mics[0].clone();
        let mic_model = MicrophoneModel {
            noise_floor_db: -140.0,
            ..mic.model
        };
        let dur = 0.4;
        let jam = jam_incident(&s, &s.reference_poses(), mic.pose.position, dur, PASSBAND_RATE).unwrap();
        let zero = jam.scaled(0.0);
        let rec = mix_and_record(&mic_model, &jam, &zero, Provenance::default()).unwrap();
        let jam_rec = rec.signal.trimmed(600).ac_power();
        let analytic = recorded_jam_at(&s, &FieldModel::reference(&s).unwrap(), &mic).unwrap();
        assert!((10.0 * (jam_rec / analytic).log10()).abs() < 0.5);

        let speech = synth_speech(s.speech.as_ref().unwrap(), mic.pose.position, dur, PASSBAND_RATE, 1).unwrap();
        let rec_s = mix_and_record(&mic_model, &zero, &speech, Provenance::default()).unwrap();
        let voiced = &rec_s.signal.samples[600..(0.3 * 48_000.0) as usize];
        let speech_rec = crate::signal::mean_square(voiced);
        let words = recorded_speech_words(&s, &mic, 1).unwrap();
        assert!((10.0 * (speech_rec / words[0]).log10()).abs() < 0.5);
    }
}
