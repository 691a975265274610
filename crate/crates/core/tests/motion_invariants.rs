use jamfield::field::{angular_sweep, FieldModel, GridSpec};
use jamfield::geometry::{Pose, Vec3};
use jamfield::metrics::{coverage_stats, detect_blind_spots};
use jamfield::motion::{gen_gesture_trajectory, time_averaged_map, time_averaged_sweep, GestureParams, TrajectoryKind};
use jamfield::presets::PresetId;
use jamfield::scenario::MIC_HEIGHT;
use jamfield::setups::jammer_scenario;

fn random_rotation(range_deg: f64, secs: f64) -> (jamfield::scenario::Scenario, jamfield::motion::Trajectory) {
    let s = jammer_scenario(PresetId::Bracelet24, 1);
    let params = GestureParams {
        random_range_deg: range_deg,
        ..GestureParams::default()
    };
    let t = gen_gesture_trajectory(
        TrajectoryKind::RandomRotation,
        s.jammers[0].reference_pose(),
        secs,
        100.0,
        3,
        &params,
    )
    .unwrap();
    (s, t)
}

#[test]
fn motion_halves_profile_spread() {
    let (s, t) = random_rotation(45.0, 10.0);
    let st = coverage_stats(&angular_sweep(&s, 1.0, 2.0).unwrap()).unwrap();
    let mo = coverage_stats(&time_averaged_sweep(&s, &t, 0.4, 1.0, 2.0).unwrap()).unwrap();
    assert!(mo.std_db <= 0.5 * st.std_db, "{} vs {}", mo.std_db, st.std_db);
}

#[test]
fn wider_rotation_never_adds_blind_spots() {
    let counts: Vec<usize> = [0.0, 15.0, 30.0, 45.0]
        .iter()
        .map(|&r| {
            let (s, t) = random_rotation(r, 1.6);
            let m = time_averaged_map(&s, &t, 0.4, &GridSpec::default()).unwrap();
            detect_blind_spots(&m, 10.0, 0.05).unwrap().count()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    assert!(counts[0] > counts[3], "{counts:?}");
}

/// Sum of power over a closed horizontal ring centred on the jammer.
fn ring_total(model: &FieldModel, c: Vec3, r: f64) -> f64 {
    (0..720)
        .map(|k| {
            let a = (k as f64 * 0.5).to_radians();
            model
                .power(Vec3::new(c.x + r * a.cos(), c.y + r * a.sin(), MIC_HEIGHT))
                .unwrap()
        })
        .sum()
}

#[test]
fn rotation_redistributes_power_only() {
    for id in [PresetId::Backdoor3x3, PresetId::Bracelet24, PresetId::I4] {
        let s = jammer_scenario(id, 1);
        let base = s.jammers[0].reference_pose();
        let t = gen_gesture_trajectory(
            TrajectoryKind::RandomRotation,
            base,
            2.0,
            100.0,
            9,
            &GestureParams::default(),
        )
        .unwrap();
        let reference = ring_total(&FieldModel::new(&s, &[base]).unwrap(), base.position, 1.0);
        for (i, pose) in t.frames.iter().enumerate().step_by(20) {
            let p = Pose::new(base.position, pose.yaw, pose.pitch);
            let total = ring_total(&FieldModel::new(&s, &[p]).unwrap(), base.position, 1.0);
            let d = 10.0 * (total / reference).log10();
            assert!(d.abs() <= 0.5, "{id} frame {i}: {d} dB");
        }
    }
}
