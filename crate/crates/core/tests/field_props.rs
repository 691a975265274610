use jamfield::field::{spl_at, FieldModel, GridSpec, PowerMap};
use jamfield::geometry::{Pose, Vec3};
use jamfield::metrics::detect_blind_spots;
use jamfield::presets::{build_preset, PresetId};
use jamfield::scenario::{Scenario, MIC_HEIGHT};
use jamfield::setups::jammer_scenario;
use proptest::prelude::*;

fn preset() -> impl Strategy<Value = PresetId> {
    prop::sample::select(PresetId::ALL.to_vec())
}

fn rotate_about(p: Vec3, c: Vec3, a: f64) -> Vec3 {
    let d = Vec3::new(p.x - c.x, p.y - c.y, p.z - c.z).rotate_z(a);
    Vec3::new(c.x + d.x, c.y + d.y, c.z + d.z)
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_equivariance(id in preset(), yaw in -3.0f64..3.0, turn in -3.0f64..3.0,
                             r in 0.2f64..2.0, phi in -3.1f64..3.1) {
        let s = Scenario::single(build_preset(id), Pose::new(Vec3::new(0.1, -0.2, MIC_HEIGHT), yaw, 0.0));
        let pose = s.jammers[0].reference_pose();
        let q = Vec3::new(pose.position.x + r * phi.cos(), pose.position.y + r * phi.sin(), MIC_HEIGHT);
        let turned = Pose::new(pose.position, yaw + turn, 0.0);
        let a = FieldModel::new(&s, &[pose]).unwrap().power(q).unwrap();
        let b = FieldModel::new(&s, &[turned]).unwrap().power(rotate_about(q, pose.position, turn)).unwrap();
        prop_assert!(rel_close(a, b), "{} vs {}", a, b);
    }

    #[test]
    fn translation_invariance(id in preset(), dx in -2.0f64..2.0, dy in -2.0f64..2.0,
                              qx in -1.0f64..1.0, qy in 0.3f64..1.5) {
        let s = Scenario::single(build_preset(id), Pose::new(Vec3::new(0.0, 0.0, MIC_HEIGHT), 1.0, 0.0));
        let p0 = s.jammers[0].reference_pose();
        let p1 = Pose::new(Vec3::new(dx, dy, MIC_HEIGHT), 1.0, 0.0);
        let q = Vec3::new(qx, qy, MIC_HEIGHT);
        let a = FieldModel::new(&s, &[p0]).unwrap().power(q).unwrap();
        let b = FieldModel::new(&s, &[p1]).unwrap().power(Vec3::new(qx + dx, qy + dy, MIC_HEIGHT)).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(b));
    }

    #[test]
    fn drive_level_shifts_spl(id in preset(), delta in -30.0f64..30.0, phi in 0.0f64..std::f64::consts::TAU) {
        let mut s = jammer_scenario(id, 1);
        let q = Vec3::new(phi.cos(), phi.sin(), MIC_HEIGHT);
        let before = spl_at(&s, q).unwrap();
        s.jammers[0].config.drive_level += delta;
        let after = spl_at(&s, q).unwrap();
        prop_assert!((after - before - delta).abs() < 1e-9);
    }

    #[test]
    fn blind_spots_ignore_map_offset(values in prop::collection::vec(-40.0f64..0.0, 400), offset in -50.0f64..50.0) {
        let grid = GridSpec::centered(0.2, 0.2, 0.01, MIC_HEIGHT);
        let linear: Vec<f64> = values.iter().map(|v| 10f64.powf(v / 10.0)).collect();
        let a = PowerMap::from_linear(&grid, &linear);
        let mut b = a.clone();
        for v in &mut b.values {
            *v += offset;
        }
        let ra = detect_blind_spots(&a, 10.0, 0.05).unwrap();
        let rb = detect_blind_spots(&b, 10.0, 0.05).unwrap();
        prop_assert_eq!(ra.count(), rb.count());
        prop_assert_eq!(ra.cells.len(), rb.cells.len());
        for (x, y) in ra.cells.iter().zip(&rb.cells) {
            prop_assert_eq!((x.x, x.y), (y.x, y.y));
            prop_assert!((x.depth_db - y.depth_db).abs() < 1e-6);
        }
    }
}

#[test]
fn bracelet_12_has_30_degree_symmetry() {
    let s = jammer_scenario(PresetId::Bracelet12, 1);
    let model = FieldModel::reference(&s).unwrap();
    let c = model.centroids()[0];
    for k in 0..36 {
        let a = (k as f64 * 2.5_f64).to_radians();
        let at = |a: f64| {
            model
                .power(Vec3::new(c.x + a.cos(), c.y + a.sin(), MIC_HEIGHT))
                .unwrap()
        };
        let (p, q) = (at(a), at(a + 30f64.to_radians()));
        assert!(rel_close(p, q) || (p - q).abs() < 1e-12, "{p} vs {q}");
    }
}

#[test]
fn more_sources_never_add_blind_spots() {
    let found: Vec<usize> = [1, 2, 24]
        .iter()
        .map(|&n| {
            let s = jammer_scenario(PresetId::Bracelet24, n);
            let m = jamfield::field::power_map(&s, &GridSpec::default()).unwrap();
            detect_blind_spots(&m, 10.0, 0.05).unwrap().count()
        })
        .collect();
    assert!(found.windows(2).all(|w| w[0] >= w[1]), "{found:?}");
    assert_eq!(found[2], 0, "{found:?}");
}
