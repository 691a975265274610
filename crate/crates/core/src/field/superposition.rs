use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::directivity::{directivity_gain, piston_gain, EmissionPattern};
use super::propagation::path_magnitude;
use crate::error::{Error, Result};
use crate::geometry::{Pose, Vec3};
use crate::scenario::Scenario;

/// Closer than this to a transducer centre the field is undefined.
pub const COINCIDENT_RADIUS: f64 = 1e-6;

/// Per-group complex amplitudes at one point, relative to a single
/// transducer of the first jammer at 1 m on boresight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub groups: Vec<Complex64>,
    pub total_power_db: f64,
}

impl FieldPoint {
    pub fn total_power(&self) -> f64 {
        self.groups.iter().map(|a| a.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone)]
struct Emitter {
    position: Vec3,
    boresight: Vec3,
    /// Piston `ka`, or `None` for tabulated patterns.
    ka: Option<f64>,
    pattern: EmissionPattern,
    amplitude: f64,
    group: usize,
}

/// Transducers of a scenario placed in world coordinates for one set of
/// jammer poses, ordered by source group.
///
/// Within a group contributions add as complex amplitudes; groups (and
/// separate jammers, which never share a generator) add as powers.
#[derive(Debug, Clone)]
pub struct FieldModel {
    emitters: Vec<Emitter>,
    n_groups: usize,
    /// Owning jammer of each group.
    group_jammers: Vec<usize>,
    k: f64,
    absorption: f64,
    centroids: Vec<Vec3>,
}

impl FieldModel {
    /// Place every jammer at the matching entry of `poses`.
    pub fn new(scenario: &Scenario, poses: &[Pose]) -> Result<Self> {
        if scenario.jammers.is_empty() {
            return Err(Error::Missing("jammer"));
        }
        if poses.len() != scenario.jammers.len() {
            return Err(Error::param(
                "poses",
                format!("{} poses for {} jammers", poses.len(), scenario.jammers.len()),
            ));
        }
        let reference_level = scenario.jammers[0].config.drive_level;
        let freq = scenario.jammers[0].config.carrier_freq();
        let k = scenario.medium.wavenumber(freq);
        let mut emitters = Vec::new();
        let mut group_keys: Vec<(usize, u32)> = Vec::new();
        let mut centroids = Vec::new();
        for (j, (jam, pose)) in scenario.jammers.iter().zip(poses).enumerate() {
            let amp = 10f64.powf((jam.config.drive_level - reference_level) / 20.0);
            let mut c = Vec3::ZERO;
            for t in &jam.config.transducers {
                let world = pose.compose(&t.pose);
                c = c + world.position;
                let key = (j, t.source_id);
                let group = match group_keys.iter().position(|g| *g == key) {
                    Some(g) => g,
                    None => {
                        group_keys.push(key);
                        group_keys.len() - 1
                    }
                };
                emitters.push(Emitter {
                    position: world.position,
                    boresight: world.boresight(),
                    ka: match t.pattern {
                        EmissionPattern::Piston { radius } => Some(k * radius),
                        _ => None,
                    },
                    pattern: t.pattern.clone(),
                    amplitude: amp,
                    group,
                });
            }
            let n = jam.config.transducers.len().max(1) as f64;
            centroids.push(c * (1.0 / n));
        }
        // stable sort keeps per-group summation order fixed
        emitters.sort_by_key(|e| e.group);
        Ok(Self {
            emitters,
            n_groups: group_keys.len(),
            group_jammers: group_keys.iter().map(|g| g.0).collect(),
            k,
            absorption: scenario.medium.absorption,
            centroids,
        })
    }

    /// Model at each jammer's reference pose.
    pub fn reference(scenario: &Scenario) -> Result<Self> {
        Self::new(scenario, &scenario.reference_poses())
    }

    pub fn group_count(&self) -> usize {
        self.n_groups
    }

    /// Index of the jammer driving group `g`.
    pub fn group_jammer(&self, g: usize) -> usize {
        self.group_jammers[g]
    }

    /// World-frame transducer centroid of each jammer.
    pub fn centroids(&self) -> &[Vec3] {
        &self.centroids
    }

    #[inline]
    fn contribution(&self, e: &Emitter, point: Vec3) -> Result<Complex64> {
        let d = point - e.position;
        let r = d.norm();
        if r < COINCIDENT_RADIUS {
            return Err(Error::CoincidentPoint { r });
        }
        let cos_t = (d.dot(e.boresight) / r).clamp(-1.0, 1.0);
        let theta = cos_t.acos();
        let gain = match e.ka {
            Some(ka) => piston_gain(ka, theta),
            None => directivity_gain(&e.pattern, theta, self.k),
        };
        let mag = e.amplitude * gain * path_magnitude(r, self.absorption);
        Ok(Complex64::from_polar(mag, -self.k * r))
    }

    /// Complex amplitude per group.
    pub fn at(&self, point: Vec3) -> Result<FieldPoint> {
        let mut groups = vec![Complex64::new(0.0, 0.0); self.n_groups];
        for e in &self.emitters {
            groups[e.group] += self.contribution(e, point)?;
        }
        let total: f64 = groups.iter().map(|a| a.norm_sqr()).sum();
        Ok(FieldPoint {
            groups,
            total_power_db: 10.0 * total.log10(),
        })
    }

    /// Total linear power (sum over groups of |coherent sum|^2).
    pub fn power(&self, point: Vec3) -> Result<f64> {
        let mut total = 0.0;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut current = usize::MAX;
        for e in &self.emitters {
            if e.group != current {
                total += acc.norm_sqr();
                acc = Complex64::new(0.0, 0.0);
                current = e.group;
            }
            acc += self.contribution(e, point)?;
        }
        Ok(total + acc.norm_sqr())
    }
}

/// Field at `point` with jammers at `poses` (one per jammer, world frame).
pub fn field_at_point(scenario: &Scenario, poses: &[Pose], point: Vec3) -> Result<FieldPoint> {
    FieldModel::new(scenario, poses)?.at(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{build_preset, PresetId};
    use crate::scenario::{JammerConfig, JammerPlacement, Medium, Transducer};
    use crate::signal::SignalSpec;
    use std::f64::consts::PI;

    fn omni() -> EmissionPattern {
        EmissionPattern::tabulated(vec![(0.0, 1.0), (180.0, 1.0)])
    }

    fn pair(offset: f64, sources: [u32; 2]) -> Scenario {
        let t = |y: f64, src: u32| Transducer {
            pose: Pose::at(Vec3::new(0.0, y, 0.0)),
            pattern: omni(),
            carrier_freq: 25_000.0,
            source_id: src,
        };
        let cfg = JammerConfig {
            transducers: vec![t(-offset, sources[0]), t(offset, sources[1])],
            signal: SignalSpec::default(),
            drive_level: 60.0,
        };
        Scenario::single(cfg, Pose::default()).with_medium(Medium::lossless())
    }

    fn single() -> Scenario {
        let mut s = pair(0.0, [0, 0]);
        s.jammers[0].config.transducers.truncate(1);
        s
    }

    fn db_at(s: &Scenario, p: Vec3) -> f64 {
        field_at_point(s, &s.reference_poses(), p).unwrap().total_power_db
    }

    #[test]
    fn coherent_and_incoherent_pairs() {
        let p = Vec3::new(1.0, 0.0, 0.0);
        let mut lone = pair(0.004, [0, 0]);
        lone.jammers[0].config.transducers.truncate(1);
        let one = db_at(&lone, p);
        let coh = db_at(&pair(0.004, [0, 0]), p);
        let inc = db_at(&pair(0.004, [0, 1]), p);
        assert!((coh - one - 20.0 * 2f64.log10()).abs() < 1e-6);
        assert!((inc - one - 10.0 * 2f64.log10()).abs() < 1e-6);
    }

    #[test]
    fn half_wavelength_null() {
        let m = Medium::lossless();
        let lambda = m.wavelength(25_000.0);
        // two sources on the x axis, lambda/2 apart; far point on that axis
        let mut s = pair(0.0, [0, 0]);
        s.jammers[0].config.transducers[0].pose.position = Vec3::new(0.0, 0.0, 0.0);
        s.jammers[0].config.transducers[1].pose.position = Vec3::new(-lambda / 2.0, 0.0, 0.0);
        let far = Vec3::new(1e4, 0.0, 0.0);
        let one = db_at(&single(), far);
        let both = db_at(&s, far);
        assert!(both - one <= -40.0, "null depth {}", both - one);
    }

    #[test]
    fn k_fold_stacking() {
        // co-located identical elements: exact K^2 (coherent) and K (incoherent)
        let p = Vec3::new(0.7, 0.2, 0.1);
        for k in [2usize, 3, 12, 24] {
            let mk = |independent: bool| {
                let mut s = single();
                let t = s.jammers[0].config.transducers[0].clone();
                s.jammers[0].config.transducers = (0..k)
                    .map(|i| Transducer {
                        source_id: if independent { i as u32 } else { 0 },
                        ..t.clone()
                    })
                    .collect();
                s
            };
            let one = db_at(&single(), p);
            let coh = db_at(&mk(false), p) - one;
            let inc = db_at(&mk(true), p) - one;
            assert!((coh - 20.0 * (k as f64).log10()).abs() < 1e-9, "K={k}");
            assert!((inc - 10.0 * (k as f64).log10()).abs() < 1e-9, "K={k}");
        }
    }

    #[test]
    fn separate_jammers_add_incoherently() {
        let s1 = single();
        let mut s2 = single();
        s2.jammers.push(s2.jammers[0].clone());
        let p = Vec3::new(0.5, 0.5, 0.0);
        assert!((db_at(&s2, p) - db_at(&s1, p) - 10.0 * 2f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn coincident_point_errors() {
        let s = single();
        assert!(matches!(
            field_at_point(&s, &s.reference_poses(), Vec3::ZERO),
            Err(Error::CoincidentPoint { .. })
        ));
    }

    #[test]
    fn power_matches_group_sum() {
        let cfg = build_preset(PresetId::Bracelet24).with_sources(2);
        let s = Scenario {
            jammers: vec![JammerPlacement::fixed(cfg, Pose::at(Vec3::new(0.0, 0.0, 0.1)))],
            ..single()
        };
        let m = FieldModel::reference(&s).unwrap();
        for i in 0..20 {
            let a = i as f64 * PI / 10.0;
            let p = Vec3::new(0.6 * a.cos(), 0.6 * a.sin(), 0.05);
            let fp = m.at(p).unwrap();
            assert_eq!(fp.groups.len(), 2);
            let direct = m.power(p).unwrap();
            assert!((10.0 * direct.log10() - fp.total_power_db).abs() < 1e-9);
        }
    }
}
