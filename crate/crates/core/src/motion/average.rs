use serde::{Deserialize, Serialize};

use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::field::{excluded, sweep_angles, AngularProfile, FieldModel, GridSpec, PowerMap, Ring};
use crate::geometry::{Pose, Vec3};
use crate::par;
use crate::scenario::Scenario;

/// Default averaging window, s: roughly one spoken word.
pub const WORD_WINDOW: f64 = 0.4;

/// How window averages are combined into one value per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowStatistic {
    /// Median across consecutive windows.
    #[default]
    Median,
    /// Mean over the first window only.
    First,
}

/// Field models for every frame, `traj` driving jammer 0 and the other
/// jammers held at their reference poses.
pub fn frame_models(scenario: &Scenario, traj: &Trajectory) -> Result<Vec<FieldModel>> {
    if let Some(v) = traj.violations().into_iter().next() {
        return Err(Error::param("trajectory", v));
    }
    let base = scenario.reference_poses();
    par::map_indices(traj.len(), |i| {
        let mut poses: Vec<Pose> = base.clone();
        poses[0] = traj.frames[i];
        FieldModel::new(scenario, &poses)
    })
    .into_iter()
    .collect()
}

/// Frames per window and number of whole windows.
fn window_layout(traj: &Trajectory, window: f64) -> Result<(usize, usize)> {
    if !(window > 0.0) {
        return Err(Error::param("window", format!("{window} s must be positive")));
    }
    let per = ((window * traj.frame_rate).round() as usize).max(1);
    let count = traj.len() / per;
    if count == 0 {
        return Err(Error::param(
            "window",
            format!(
                "{window} s is longer than the trajectory ({} s)",
                traj.len() as f64 / traj.frame_rate
            ),
        ));
    }
    Ok((per, count))
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Window-averaged linear power at one point; frames are summed in order.
fn averaged_power(models: &[FieldModel], point: Vec3, per: usize, count: usize, stat: WindowStatistic) -> Result<f64> {
    let used = match stat {
        WindowStatistic::Median => count,
        WindowStatistic::First => 1,
    };
    let mut means = Vec::with_capacity(used);
    for w in 0..used {
        let mut acc = 0.0;
        for m in &models[w * per..(w + 1) * per] {
            acc += m.power(point)?;
        }
        means.push(acc / per as f64);
    }
    Ok(median(&mut means))
}

/// Jamming power over `grid` averaged in linear power over `window`
/// seconds of motion, then normalized so the maximum is 0 dB.
///
/// The whole trajectory is split into consecutive windows; each cell
/// reports the median of its window means. Cells within the near-field
/// radius of the jammer at any frame are unset.
pub fn time_averaged_map(scenario: &Scenario, traj: &Trajectory, window: f64, grid: &GridSpec) -> Result<PowerMap> {
    time_averaged_map_with(scenario, traj, window, grid, WindowStatistic::Median)
}

pub fn time_averaged_map_with(
    scenario: &Scenario,
    traj: &Trajectory,
    window: f64,
    grid: &GridSpec,
    stat: WindowStatistic,
) -> Result<PowerMap> {
    grid.check()?;
    let (per, count) = window_layout(traj, window)?;
    let models = frame_models(scenario, traj)?;
    let mut exclude: Vec<Vec3> = Vec::new();
    for m in &models {
        for &c in m.centroids() {
            if !exclude.iter().any(|e| e.distance(c) < 1e-3) {
                exclude.push(c);
            }
        }
    }
    let lin: Vec<f64> = par::map_indices(grid.len(), |i| {
        let p = grid.center_of(i);
        if excluded(p, &exclude) {
            return f64::NAN;
        }
        averaged_power(&models, p, per, count, stat).unwrap_or(f64::NAN)
    });
    Ok(PowerMap::from_linear(grid, &lin))
}

/// Angular profile on the scenario's reference ring with jammer 0
/// following `traj`, window-averaged as in [`time_averaged_map`].
pub fn time_averaged_sweep(
    scenario: &Scenario,
    traj: &Trajectory,
    window: f64,
    radius: f64,
    step: f64,
) -> Result<AngularProfile> {
    let ring = Ring::for_scenario(scenario, radius)?;
    let angles = sweep_angles(step, 180.0)?;
    let (per, count) = window_layout(traj, window)?;
    let models = frame_models(scenario, traj)?;
    let lin: Vec<f64> = par::map_indices(angles.len(), |i| {
        averaged_power(&models, ring.point(angles[i]), per, count, WindowStatistic::Median)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(AngularProfile::from_linear(radius, angles, &lin))
}
