use super::superposition::FieldModel;
use crate::error::Result;
use crate::geometry::Vec3;
use crate::scenario::Scenario;

/// Absolute SPL (dB re 20 uPa) at `point`, jammers at their reference poses.
///
/// Calibration comes from the first jammer's `drive_level` (its per-element
/// 1 m boresight level); other jammers are scaled by their own levels.
pub fn spl_at(scenario: &Scenario, point: Vec3) -> Result<f64> {
    let model = FieldModel::reference(scenario)?;
    spl_with(&model, scenario, point)
}

pub(crate) fn spl_with(model: &FieldModel, scenario: &Scenario, point: Vec3) -> Result<f64> {
    let p = model.power(point)?;
    Ok(10.0 * p.log10() + scenario.jammers[0].config.drive_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::geometry::Pose;
    use crate::presets::{build_preset, face_level_to_1m, PresetId, WRIST_HEIGHT};
    use crate::scenario::Medium;

    fn single_element(medium: Medium) -> Scenario {
        let mut cfg = build_preset(PresetId::Backdoor3x3);
        cfg.transducers.truncate(1);
        cfg.transducers[0].pose = Pose::default();
        cfg.drive_level = face_level_to_1m(100.0, &medium);
        Scenario::single(cfg, Pose::default()).with_medium(medium)
    }

    #[test]
    fn face_calibration_predicts_quarter_metre() {
        let s = single_element(Medium::lossless());
        let at_face = spl_at(&s, Vec3::new(0.01, 0.0, 0.0)).unwrap();
        assert!((at_face - 100.0).abs() < 1e-9);
        let spl = spl_at(&s, Vec3::new(0.25, 0.0, 0.0)).unwrap();
        assert!((spl - 72.0).abs() <= 0.1, "{spl}");
        assert!((spl - 73.0).abs() <= 2.0);
    }

    #[test]
    fn distance_doubling() {
        let s = single_element(Medium::lossless());
        for (x, y) in [(0.3, 0.1), (1.0, -0.4), (0.05, 0.02)] {
            let a = spl_at(&s, Vec3::new(x, y, 0.0)).unwrap();
            let b = spl_at(&s, Vec3::new(2.0 * x, 2.0 * y, 0.0)).unwrap();
            assert!((a - b - 6.0206).abs() < 1e-3);
        }
    }

    #[test]
    fn full_bracelet_never_below_one_element() {
        let pose = Pose::at(Vec3::new(0.0, 0.0, WRIST_HEIGHT));
        let full = Scenario::single(build_preset(PresetId::Bracelet24).with_sources(24), pose);
        let mut one_cfg = build_preset(PresetId::Bracelet24);
        one_cfg.transducers.truncate(1);
        let one = Scenario::single(one_cfg, pose);
        for i in 0..72 {
            let a = (i as f64 * 5.0).to_radians();
            let p = Vec3::new(0.5 * a.cos(), 0.5 * a.sin(), 0.05);
            assert!(spl_at(&full, p).unwrap() >= spl_at(&one, p).unwrap());
        }
    }

    #[test]
    fn coincident() {
        let s = single_element(Medium::lossless());
        assert!(matches!(spl_at(&s, Vec3::ZERO), Err(Error::CoincidentPoint { .. })));
    }
}
