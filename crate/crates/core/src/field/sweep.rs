use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::superposition::FieldModel;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::par;
use crate::scenario::Scenario;

/// Power on a ring around the jammer versus angular separation alpha,
/// normalized to the alpha = 0 sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularProfile {
    pub radius: f64,
    /// Degrees.
    pub angles: Vec<f64>,
    /// dB relative to alpha = 0.
    pub values: Vec<f64>,
}

impl AngularProfile {
    /// Normalize linear ring powers to the first sample.
    pub fn from_linear(radius: f64, angles: Vec<f64>, linear: &[f64]) -> Self {
        let p0 = linear[0];
        let values = linear
            .iter()
            .enumerate()
            .map(|(i, &p)| if i == 0 { 0.0 } else { 10.0 * (p / p0).log10() })
            .collect();
        Self { radius, angles, values }
    }

    /// CSV with header `alpha_deg,db`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha_deg,db\n");
        for (a, v) in self.angles.iter().zip(&self.values) {
            let _ = writeln!(out, "{a:.3},{v:.6}");
        }
        out
    }

    /// Values whose angle lies in `[lo, hi]` degrees.
    pub fn values_between(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.angles
            .iter()
            .zip(&self.values)
            .filter(|(a, _)| **a >= lo - 1e-9 && **a <= hi + 1e-9)
            .map(|(_, v)| *v)
            .collect()
    }
}

/// Ring geometry: centre, height and the alpha = 0 heading (radians).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    pub center: Vec3,
    pub heading: f64,
    pub radius: f64,
}

impl Ring {
    /// Ring around jammer 0's reference centroid, at microphone height,
    /// with alpha measured from that jammer's heading.
    pub fn for_scenario(scenario: &Scenario, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::param("radius", format!("{radius} m must be positive")));
        }
        let model = FieldModel::reference(scenario)?;
        let c = model.centroids()[0];
        let pose = scenario.jammers[0].reference_pose();
        Ok(Self {
            center: Vec3::new(c.x, c.y, scenario.mic_height()),
            heading: pose.yaw,
            radius,
        })
    }

    pub fn point(&self, alpha_deg: f64) -> Vec3 {
        let a = self.heading + alpha_deg.to_radians();
        Vec3::new(
            self.center.x + self.radius * a.cos(),
            self.center.y + self.radius * a.sin(),
            self.center.z,
        )
    }
}

/// `0, step, 2 step, ...` up to and including `end` degrees.
pub fn sweep_angles(step: f64, end: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::param("step", format!("{step} deg must be positive")));
    }
    let n = (end / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| i as f64 * step).collect())
}

pub(crate) fn ring_powers(model: &FieldModel, ring: &Ring, angles: &[f64]) -> Result<Vec<f64>> {
    par::map_indices(angles.len(), |i| model.power(ring.point(angles[i])))
        .into_iter()
        .collect()
}

/// Sweep alpha over [0, 180] degrees on a ring of `radius` around the
/// jammer at microphone height.
pub fn angular_sweep(scenario: &Scenario, radius: f64, step: f64) -> Result<AngularProfile> {
    let ring = Ring::for_scenario(scenario, radius)?;
    let angles = sweep_angles(step, 180.0)?;
    let model = FieldModel::reference(scenario)?;
    let lin = ring_powers(&model, &ring, &angles)?;
    Ok(AngularProfile::from_linear(radius, angles, &lin))
}
