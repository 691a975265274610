use super::mic::spl_to_rms;
use crate::error::Result;
use crate::field::FieldModel;
use crate::geometry::{Pose, Vec3};
use crate::scenario::Scenario;
use crate::signal::{am_modulate, gen_bandlimited_noise, SampledSignal};

/// Noise seed for group `g` of a scenario.
fn group_seed(scenario: &Scenario, jammer: usize, g: usize) -> u64 {
    let spec_seed = scenario.jammers[jammer].config.signal.seed;
    scenario
        .seed
        .wrapping_mul(0x100_0000_01B3)
        .wrapping_add(spec_seed)
        .wrapping_mul(0x100_0000_01B3)
        .wrapping_add(g as u64)
}

/// Ultrasonic pressure arriving at `point` from every jammer at `poses`,
/// in normalized units (94 dB SPL = unit RMS).
///
/// Each source group carries its own AM noise; within a group the
/// narrowband field amplitude sets the carrier level.
pub fn jam_incident(scenario: &Scenario, poses: &[Pose], point: Vec3, duration: f64, fs: f64) -> Result<SampledSignal> {
    let model = FieldModel::new(scenario, poses)?;
    let fp = model.at(point)?;
    let reference_rms = spl_to_rms(scenario.jammers[0].config.drive_level);
    let n = (duration * fs).round() as usize;
    let mut total = SampledSignal::zeros(fs, n);
    for (g, amp) in fp.groups.iter().enumerate() {
        let j = model.group_jammer(g);
        let spec = &scenario.jammers[j].config.signal;
        let env_rate = fs / 4.0;
        let noise = gen_bandlimited_noise(spec.noise_bandwidth, duration, env_rate, group_seed(scenario, j, g))?;
        let carrier = am_modulate(&noise, spec, fs)?;
        // am_modulate has unit carrier amplitude, i.e. RMS 1/sqrt(2)
        let scale = amp.norm() * reference_rms * 2f64.sqrt();
        let mut s = carrier.scaled(scale);
        s.samples.resize(n, 0.0);
        total = total.add(&s)?;
    }
    Ok(total)
}
