//! The microphone chain: polynomial nonlinearity, anti-aliasing low-pass,
//! decimation and self-noise, plus occlusion and the speech stimulus.

mod incident;
mod mic;
mod occlusion;
mod record;
mod speech;

pub use incident::jam_incident;
pub use mic::{nonlinear_transform, rms_to_spl, spl_to_rms, MicrophoneModel, REFERENCE_SPL};
pub use occlusion::{apply_occlusion, Occlusion};
pub use record::{
    capture_recording, lowpass_filter, lowpass_taps, mix_and_record, recorded_jam_power, recorded_speech_power,
    Provenance, Recording, LPF_ORDER_AT_PASSBAND, LPF_STOPBAND_DB,
};
pub use speech::{speech_level_at, synth_speech, word_count, word_levels_db, SPEECH_BAND, VOICED_FRACTION};
