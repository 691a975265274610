//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jamfield::capture::{capture_recording, recorded_jam_power, spl_to_rms, MicrophoneModel, Provenance};
use jamfield::field::{angular_sweep, power_map, spl_at, EmissionPattern, GridSpec};
use jamfield::geometry::{Pose, Vec3};
use jamfield::metrics::{coverage_stats, detect_blind_spots, WerModel};
use jamfield::motion::{gen_gesture_trajectory, sjr_timeseries, time_averaged_sweep, GestureParams, TrajectoryKind};
use jamfield::presets::{face_level_to_1m, PresetId};
use jamfield::runner::{Artifact, Plan, RecipeId};
use jamfield::scenario::{JammerConfig, Medium, Scenario, Transducer};
use jamfield::setups::{angle_setup, calibrated_tau, deepest_null, jammer_scenario, still, RING_RADIUS};
use jamfield::signal::{am_modulate, gen_bandlimited_noise, SignalSpec, PASSBAND_RATE};

type Check = (bool, String);
type Criterion = (u32, &'static str, fn() -> Check);

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn directionality() -> Check {
    let s = jammer_scenario(PresetId::Backdoor3x3, 1);
    let t = Instant::now();
    let p = angular_sweep(&s, RING_RADIUS, 2.0).unwrap();
    let elapsed = t.elapsed();
    let back = p.values_between(60.0, 180.0);
    let mean = back.iter().sum::<f64>() / back.len() as f64;
    (
        mean <= -25.0 && elapsed < Duration::from_secs(1),
        format!("mean over 60..180 deg = {mean:.2} dB (<= -25), sweep took {elapsed:.2?} (< 1 s)"),
    )
}

fn local_fluctuation() -> Check {
    let p = angular_sweep(&jammer_scenario(PresetId::Backdoor3x3, 1), RING_RADIUS, 2.0).unwrap();
    let v = p.values_between(0.0, 40.0);
    let jump = v.windows(2).map(|w| (w[0] - w[1]).abs()).fold(0.0, f64::max);
    (
        jump >= 5.0,
        format!("largest 2-degree step in 0..40 deg = {jump:.2} dB (>= 5)"),
    )
}

fn blind_stripes() -> Check {
    let count = |n| {
        let m = power_map(&jammer_scenario(PresetId::Bracelet24, n), &GridSpec::default()).unwrap();
        detect_blind_spots(&m, 10.0, 0.05).unwrap().count()
    };
    let (c1, c2, c24) = (count(1), count(2), count(24));
    (
        c1 >= 1 && c1 >= c2 && c2 >= c24 && c24 == 0,
        format!("blind regions for 1/2/24 sources = {c1}/{c2}/{c24}"),
    )
}

fn motion_smoothing() -> Check {
    let s = jammer_scenario(PresetId::Bracelet24, 1);
    let traj = gen_gesture_trajectory(
        TrajectoryKind::RandomRotation,
        s.jammers[0].reference_pose(),
        10.0,
        100.0,
        0,
        &GestureParams::default(),
    )
    .unwrap();
    let st = coverage_stats(&angular_sweep(&s, RING_RADIUS, 2.0).unwrap()).unwrap();
    let mo = coverage_stats(&time_averaged_sweep(&s, &traj, 0.4, RING_RADIUS, 2.0).unwrap()).unwrap();
    let ratio = mo.std_db / st.std_db;
    (
        ratio <= 0.5,
        format!(
            "std static {:.3} dB, motion {:.3} dB, ratio {ratio:.3} (<= 0.5)",
            st.std_db, mo.std_db
        ),
    )
}

fn wer_model() -> WerModel {
    let m = WerModel::default();
    m.with_tau(calibrated_tau(0.95, &m, 0).unwrap())
}

fn blind_spot_rescue() -> Check {
    let model = wer_model();
    let alpha = deepest_null(&jammer_scenario(PresetId::Bracelet24, 1), RING_RADIUS, 1.0).unwrap();
    let s = angle_setup(PresetId::Bracelet24, 1, alpha, RING_RADIUS).unwrap();
    let secs = 12.0;
    let static_wer = model
        .estimate(&sjr_timeseries(&s, &still(&s, secs).unwrap(), 0).unwrap())
        .unwrap()
        .wer;
    let mut ok = static_wer <= 0.45;
    let mut parts = vec![format!("static {static_wer:.2} (<= 0.45)")];
    for kind in [TrajectoryKind::Point, TrajectoryKind::Wave, TrajectoryKind::Rotate] {
        let traj = gen_gesture_trajectory(
            kind,
            s.jammers[0].reference_pose(),
            secs,
            100.0,
            0,
            &GestureParams::default(),
        )
        .unwrap();
        let sjr = sjr_timeseries(&s, &traj, 0).unwrap();
        let w = model.estimate(&sjr).unwrap().wer;
        ok &= (0.70..=0.95).contains(&w);
        parts.push(format!("{kind} {w:.2} (mean SJR {:.1} dB)", sjr.mean_db()));
    }
    (
        ok,
        format!(
            "mic at alpha {alpha} deg, tau {:.1} dB: {}; gestures need [0.70, 0.95]",
            model.tau_db,
            parts.join(", ")
        ),
    )
}

fn angle_trend() -> Check {
    let model = wer_model();
    let wer_at = |alpha: f64| {
        let s = angle_setup(PresetId::Backdoor3x3, 1, alpha, RING_RADIUS).unwrap();
        model
            .estimate(&sjr_timeseries(&s, &still(&s, 20.0).unwrap(), 0).unwrap())
            .unwrap()
            .wer
    };
    let on = wer_at(0.0);
    let off = (50..=180).step_by(5).map(|a| wer_at(a as f64)).fold(0.0, f64::max);
    (
        on >= 0.95 && off <= 0.45,
        format!("WER at 0 deg = {on:.3} (>= 0.95), worst at >= 50 deg = {off:.3} (<= 0.45)"),
    )
}

fn am_jam(level_spl: f64, m: f64, dur: f64) -> jamfield::signal::SampledSignal {
    let n = gen_bandlimited_noise(1_000.0, dur, PASSBAND_RATE, 7).unwrap();
    let spec = SignalSpec {
        modulation_depth: m,
        ..SignalSpec::default()
    };
    am_modulate(&n, &spec, PASSBAND_RATE)
        .unwrap()
        .scaled(spl_to_rms(level_spl) * 2f64.sqrt())
}

fn capture_physics() -> Check {
    let trim = 600;
    // (a) linear mic
    let lin = MicrophoneModel::linear();
    let rec = capture_recording(&lin, &am_jam(90.0, 0.5, 0.2), Provenance::default()).unwrap();
    let leak = db(rec.signal.trimmed(trim).power());
    let a = leak <= lin.noise_floor_db + 1.0;

    // (b) dB-dB slope
    let quiet = MicrophoneModel {
        noise_floor_db: -140.0,
        ..MicrophoneModel::default()
    };
    let levels = [75.0, 80.0, 85.0, 90.0, 95.0];
    let unit = am_jam(0.0, 0.5, 0.3);
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .map(|&l| {
            let g = spl_to_rms(l) / spl_to_rms(0.0);
            let r = capture_recording(&quiet, &unit.scaled(g), Provenance::default()).unwrap();
            (db(unit.scaled(g).power()), db(r.signal.trimmed(trim).ac_power()))
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let b = (slope - 2.0).abs() <= 0.05;

    // (c) analytic vs time domain
    let mut worst: f64 = 0.0;
    for m in [0.1, 0.3, 0.5] {
        let r = capture_recording(&quiet, &am_jam(85.0, m, 1.0), Provenance::default()).unwrap();
        let d = db(r.signal.trimmed(trim).ac_power() / recorded_jam_power(&quiet, spl_to_rms(85.0), m));
        worst = worst.max(d.abs());
    }
    let c = worst <= 0.5;
    (
        a && b && c,
        format!(
            "(a) linear leak {leak:.1} dB vs floor {:.1} dB; (b) slope {slope:.4}; (c) worst analytic gap {worst:.3} dB",
            lin.noise_floor_db
        ),
    )
}

fn element(position: Vec3, source_id: u32) -> Transducer {
    Transducer {
        pose: Pose::new(position, 0.0, 0.0),
        pattern: EmissionPattern::Piston { radius: 0.008 },
        carrier_freq: 25_000.0,
        source_id,
    }
}

fn lossless(transducers: Vec<Transducer>, face_db: f64) -> Scenario {
    let medium = Medium::lossless();
    let cfg = JammerConfig {
        transducers,
        signal: SignalSpec::default(),
        drive_level: face_level_to_1m(face_db, &medium),
    };
    Scenario::single(cfg, Pose::new(Vec3::ZERO, 0.0, 0.0)).with_medium(medium)
}

fn propagation() -> Check {
    let single = lossless(vec![element(Vec3::ZERO, 0)], 100.0);
    let at = |s: &Scenario, x: f64| spl_at(s, Vec3::new(x, 0.0, 0.0)).unwrap();
    let drop = at(&single, 2.0) - at(&single, 1.0);
    let coherent = lossless(vec![element(Vec3::ZERO, 0), element(Vec3::ZERO, 0)], 100.0);
    let incoherent = lossless(vec![element(Vec3::ZERO, 0), element(Vec3::ZERO, 1)], 100.0);
    let gain_c = at(&coherent, 1.0) - at(&single, 1.0);
    let gain_i = at(&incoherent, 1.0) - at(&single, 1.0);
    let half = Medium::lossless().wavelength(25_000.0) / 2.0;
    let pair = lossless(
        vec![element(Vec3::ZERO, 0), element(Vec3::new(-half, 0.0, 0.0), 0)],
        100.0,
    );
    let null = at(&pair, 1.0) - at(&single, 1.0);
    let want_c = 20.0 * 2f64.log10();
    let want_i = 10.0 * 2f64.log10();
    (
        (drop + want_c).abs() <= 0.01
            && (gain_c - want_c).abs() <= 1e-6
            && (gain_i - want_i).abs() <= 1e-6
            && null <= -40.0,
        format!(
            "doubling {drop:.4} dB, coherent {gain_c:.6} dB, incoherent {gain_i:.6} dB, half-wave pair {null:.1} dB"
        ),
    )
}

fn spl_safety() -> Check {
    let s = lossless(vec![element(Vec3::ZERO, 0)], 100.0);
    let face = spl_at(&s, Vec3::new(0.01, 0.0, 0.0)).unwrap();
    let v = spl_at(&s, Vec3::new(0.25, 0.0, 0.0)).unwrap();
    (
        (v - 72.0).abs() <= 0.1 && (v - 73.0).abs() <= 2.0 && (face - 100.0).abs() < 1e-9,
        format!("{face:.2} dB at 1 cm -> {v:.3} dB at 25 cm (72.0 +/- 0.1, measured 73 +/- 2)"),
    )
}

fn run_all(threads: usize) -> (Vec<(RecipeId, Vec<Artifact>)>, Duration) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let t = Instant::now();
    let out = pool.install(|| {
        RecipeId::ALL
            .iter()
            .map(|&id| {
                let plan = Plan::from_config(id.config().unwrap(), None).unwrap();
                (id, plan.execute().unwrap())
            })
            .collect()
    });
    (out, t.elapsed())
}

fn main() -> ExitCode {
    let checks: [Criterion; 9] = [
        (1, "directionality", directionality),
        (2, "local fluctuation", local_fluctuation),
        (3, "blind-stripe structure", blind_stripes),
        (4, "motion smoothing", motion_smoothing),
        (5, "blind-spot rescue", blind_spot_rescue),
        (6, "angle trend", angle_trend),
        (7, "nonlinear capture physics", capture_physics),
        (8, "propagation", propagation),
        (9, "SPL safety figure", spl_safety),
    ];
    let mut results: Vec<(u32, &str, Check)> = Vec::new();
    for (id, name, f) in checks {
        let r = f();
        report(id, name, &r);
        results.push((id, name, r));
    }

    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    let (first, elapsed) = run_all(threads);
    let (serial, _) = run_all(1);
    let (again, _) = run_all(threads);
    let mut diffs = Vec::new();
    for ((id, a), ((_, b), (_, c))) in first.iter().zip(serial.iter().zip(&again)) {
        for ((x, y), z) in a.iter().zip(b).zip(c) {
            if x != y || x != z {
                diffs.push(format!("{id}/{}", x.path));
            }
        }
    }
    let count: usize = first.iter().map(|(_, a)| a.len()).sum();
    let r10 = (
        diffs.is_empty(),
        format!(
            "{count} artifacts compared across {threads}/1/{threads} threads; mismatches: {}",
            if diffs.is_empty() {
                "none".to_string()
            } else {
                diffs.join(", ")
            }
        ),
    );
    report(10, "determinism", &r10);
    results.push((10, "determinism", r10));
    let r11 = (
        elapsed < Duration::from_secs(300),
        format!("all 7 recipes in {elapsed:.2?} (< 300 s)"),
    );
    report(11, "recipe suite runtime", &r11);
    results.push((11, "recipe suite runtime", r11));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2 .0).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {failed:?}")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn report(id: u32, name: &str, r: &Check) {
    println!(
        "criterion {id:>2} {}: {name}: {}",
        if r.0 { "PASS" } else { "FAIL" },
        r.1
    );
}
