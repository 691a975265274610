//! Wearer motion: gesture and walking trajectories, window-averaged
//! fields and per-frame jam-to-speech ratio.

mod average;
mod gesture;
mod sjr;
mod trajectory;

pub use average::{
    frame_models, time_averaged_map, time_averaged_map_with, time_averaged_sweep, WindowStatistic, WORD_WINDOW,
};
pub use gesture::{gen_gesture_trajectory, gen_walk_trajectory, GestureParams, RANDOM_PROCESS_RATE, WALK_MAX_DISTANCE};
pub use sjr::{recorded_jam_at, recorded_speech_words, sjr_timeseries, SJRSeries};
pub use trajectory::{pose_at, Trajectory, TrajectoryKind};
