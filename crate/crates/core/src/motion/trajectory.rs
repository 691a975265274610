use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Pose, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Static,
    Point,
    Wave,
    Rotate,
    Walk,
    RandomRotation,
}

impl TrajectoryKind {
    pub const ALL: [TrajectoryKind; 6] = [
        TrajectoryKind::Static,
        TrajectoryKind::Point,
        TrajectoryKind::Wave,
        TrajectoryKind::Rotate,
        TrajectoryKind::Walk,
        TrajectoryKind::RandomRotation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TrajectoryKind::Static => "static",
            TrajectoryKind::Point => "point",
            TrajectoryKind::Wave => "wave",
            TrajectoryKind::Rotate => "rotate",
            TrajectoryKind::Walk => "walk",
            TrajectoryKind::RandomRotation => "random_rotation",
        }
    }
}

impl fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TrajectoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TrajectoryKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                what: "trajectory kind",
                name: s.to_string(),
            })
    }
}

/// Jammer poses sampled at a fixed frame rate; frame `i` is at `i / frame_rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trajectory {
    /// Hz.
    pub frame_rate: f64,
    pub frames: Vec<Pose>,
    pub kind: TrajectoryKind,
}

impl Trajectory {
    /// A single pose held for `duration` seconds.
    pub fn stationary(pose: Pose, duration: f64, frame_rate: f64) -> Result<Self> {
        let n = frame_count(duration, frame_rate)?;
        Ok(Self {
            frame_rate,
            frames: vec![pose; n],
            kind: TrajectoryKind::Static,
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Time of the last frame.
    pub fn duration(&self) -> f64 {
        self.frames.len().saturating_sub(1) as f64 / self.frame_rate
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 / self.frame_rate
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.frame_rate > 0.0 && self.frame_rate.is_finite()) {
            out.push(format!("frame_rate {} must be positive", self.frame_rate));
        }
        if self.frames.is_empty() {
            out.push("trajectory has no frames".into());
        }
        if let Some(i) = self.frames.iter().position(|p| !p.is_finite()) {
            out.push(format!("frame {i} is not finite"));
        }
        if let Some(i) = self.frames.iter().position(|p| !p.angles_normalized()) {
            out.push(format!("frame {i} angles not normalized to (-pi, pi]"));
        }
        out
    }

    /// CSV with header `t,x,y,z,yaw_deg,pitch_deg`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,yaw_deg,pitch_deg\n");
        for (i, p) in self.frames.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
                self.time(i),
                p.position.x,
                p.position.y,
                p.position.z,
                p.yaw.to_degrees(),
                p.pitch.to_degrees()
            );
        }
        out
    }

    /// Parse the CSV written by [`Trajectory::to_csv`]. Frame times must be
    /// uniformly spaced; the frame rate is taken from their spacing.
    pub fn from_csv(text: &str, kind: TrajectoryKind) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::Missing("trajectory header"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["t", "x", "y", "z", "yaw_deg", "pitch_deg"] {
            return Err(Error::param("trajectory csv", format!("unexpected header {header:?}")));
        }
        let mut times = Vec::new();
        let mut frames = Vec::new();
        for (n, line) in lines.enumerate() {
            let v: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::param("trajectory csv", format!("row {}: {e}", n + 1)))?;
            if v.len() != 6 {
                return Err(Error::param(
                    "trajectory csv",
                    format!("row {} has {} fields", n + 1, v.len()),
                ));
            }
            times.push(v[0]);
            frames.push(Pose::new(
                Vec3::new(v[1], v[2], v[3]),
                v[4].to_radians(),
                v[5].to_radians(),
            ));
        }
        if frames.is_empty() {
            return Err(Error::Missing("trajectory frames"));
        }
        let frame_rate = if times.len() < 2 {
            1.0
        } else {
            let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            for (i, t) in times.iter().enumerate() {
                if (t - times[0] - i as f64 * dt).abs() > 1e-4 * dt.max(1e-3) + 1e-6 {
                    return Err(Error::param(
                        "trajectory csv",
                        format!("row {} breaks uniform spacing", i + 1),
                    ));
                }
            }
            if !(dt > 0.0) {
                return Err(Error::param("trajectory csv", "times must increase"));
            }
            1.0 / dt
        };
        Ok(Self {
            frame_rate,
            frames,
            kind,
        })
    }
}

pub(crate) fn frame_count(duration: f64, frame_rate: f64) -> Result<usize> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::param("duration", format!("{duration} s must be positive")));
    }
    if !(frame_rate > 0.0 && frame_rate.is_finite()) {
        return Err(Error::param("frame_rate", format!("{frame_rate} Hz must be positive")));
    }
    Ok((duration * frame_rate + 1e-9).floor() as usize + 1)
}

/// Spherical interpolation between unit vectors.
fn slerp(a: Vec3, b: Vec3, u: f64) -> Vec3 {
    let cos = a.dot(b).clamp(-1.0, 1.0);
    let omega = cos.acos();
    if omega < 1e-12 {
        return (a * (1.0 - u) + b * u).normalized();
    }
    let s = omega.sin();
    (a * (((1.0 - u) * omega).sin() / s) + b * ((u * omega).sin() / s)).normalized()
}

/// Pose at time `t`: positions interpolate linearly, boresights along the
/// great circle between neighbouring frames.
pub fn pose_at(traj: &Trajectory, t: f64) -> Result<Pose> {
    if traj.frames.is_empty() {
        return Err(Error::Missing("trajectory frames"));
    }
    let duration = traj.duration();
    let eps = 1e-9 * duration.max(1.0);
    if !(t >= -eps && t <= duration + eps) {
        return Err(Error::TimeOutOfRange { t, duration });
    }
    let x = (t * traj.frame_rate).max(0.0);
    let i = (x.floor() as usize).min(traj.frames.len() - 1);
    let u = x - i as f64;
    let a = traj.frames[i];
    if u < 1e-9 || i + 1 == traj.frames.len() {
        return Ok(a);
    }
    let b = traj.frames[i + 1];
    if u > 1.0 - 1e-9 {
        return Ok(b);
    }
    let position = a.position * (1.0 - u) + b.position * u;
    let (yaw, pitch) = if a.yaw == b.yaw && a.pitch == b.pitch {
        (a.yaw, a.pitch)
    } else {
        slerp(a.boresight(), b.boresight(), u).to_angles()
    };
    Ok(Pose::new(position, normalize_angle(yaw), pitch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn two(a: Pose, b: Pose) -> Trajectory {
        Trajectory {
            frame_rate: 10.0,
            frames: vec![a, b],
            kind: TrajectoryKind::Point,
        }
    }

    #[test]
    fn frames_are_exact() {
        let a = Pose::new(Vec3::new(1.0, 2.0, 3.0), 0.3, 0.1);
        let b = Pose::new(Vec3::new(2.0, 2.0, 3.0), -0.2, 0.0);
        let t = two(a, b);
        assert_eq!(pose_at(&t, 0.0).unwrap(), a);
        assert_eq!(pose_at(&t, 0.1).unwrap(), b);
    }

    #[test]
    fn midpoint_position() {
        let a = Pose::at(Vec3::new(0.0, 0.0, 0.1));
        let b = Pose::at(Vec3::new(0.2, -0.4, 0.1));
        let p = pose_at(&two(a, b), 0.05).unwrap();
        assert!((p.position.x - 0.1).abs() < 1e-12);
        assert!((p.position.y + 0.2).abs() < 1e-12);
        assert_eq!(p.yaw, 0.0);
    }

    #[test]
    fn slerp_midway_yaw() {
        let a = Pose::new(Vec3::ZERO, 0.0, 0.0);
        let b = Pose::new(Vec3::ZERO, FRAC_PI_2, 0.0);
        let p = pose_at(&two(a, b), 0.05).unwrap();
        assert!((p.yaw - FRAC_PI_2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn beyond_duration_is_an_error() {
        let t = two(Pose::default(), Pose::default());
        assert!(matches!(pose_at(&t, 0.2), Err(Error::TimeOutOfRange { .. })));
        assert!(pose_at(&t, -0.01).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let t = Trajectory {
            frame_rate: 100.0,
            frames: (0..5)
                .map(|i| Pose::new(Vec3::new(i as f64 * 0.01, 0.0, 0.1), i as f64 * 0.1, 0.05))
                .collect(),
            kind: TrajectoryKind::Wave,
        };
        let csv = t.to_csv();
        assert!(csv.starts_with("t,x,y,z,yaw_deg,pitch_deg\n"));
        let back = Trajectory::from_csv(&csv, TrajectoryKind::Wave).unwrap();
        assert!((back.frame_rate - 100.0).abs() < 1e-6);
        for (p, q) in t.frames.iter().zip(&back.frames) {
            assert!(p.position.distance(q.position) < 1e-6);
            assert!((p.yaw - q.yaw).abs() < 1e-6);
        }
        assert!(Trajectory::from_csv("t,x\n0,1\n", TrajectoryKind::Static).is_err());
    }

    #[test]
    fn kinds_parse() {
        for k in TrajectoryKind::ALL {
            assert_eq!(k.as_str().parse::<TrajectoryKind>().unwrap(), k);
        }
        assert!("jog".parse::<TrajectoryKind>().is_err());
    }

    #[test]
    fn violations() {
        let t = Trajectory {
            frame_rate: 0.0,
            frames: vec![],
            kind: TrajectoryKind::Static,
        };
        assert_eq!(t.violations().len(), 2);
    }
}
