use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PowerMap;

pub const DEFAULT_THRESHOLD_DB: f64 = 10.0;
pub const DEFAULT_NEIGHBORHOOD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindCell {
    pub x: f64,
    pub y: f64,
    /// dB below the neighbourhood median; at least the threshold.
    pub depth_db: f64,
}

/// One 8-connected group of blind cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindRegion {
    /// Indices into [`BlindSpotReport::cells`].
    pub cells: Vec<usize>,
    /// m^2.
    pub area: f64,
    pub centroid: (f64, f64),
    /// Major over minor principal axis of the cell footprint.
    pub axis_ratio: f64,
    /// Direction of the major axis, degrees from +x.
    pub orientation_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindSpotReport {
    pub threshold_db: f64,
    pub neighborhood_radius: f64,
    pub cells: Vec<BlindCell>,
    pub regions: Vec<BlindRegion>,
}

impl BlindSpotReport {
    pub fn count(&self) -> usize {
        self.regions.len()
    }

    /// Regions at least `min_ratio` times longer than wide.
    pub fn stripes(&self, min_ratio: f64) -> usize {
        self.regions.iter().filter(|r| r.axis_ratio >= min_ratio).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
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

/// Principal-axis ratio and orientation of a set of square cells.
fn shape(points: &[(f64, f64)], dx: f64, dy: f64) -> (f64, f64, (f64, f64)) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    // each cell is a uniform square, not a point
    let mut sxx = dx * dx / 12.0;
    let mut syy = dy * dy / 12.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx) / n;
        syy += (y - my) * (y - my) / n;
        sxy += (x - mx) * (y - my) / n;
    }
    let tr = sxx + syy;
    let disc = ((sxx - syy) * (sxx - syy) / 4.0 + sxy * sxy).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = (tr / 2.0 - disc).max(f64::MIN_POSITIVE);
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    ((l1 / l2).sqrt(), angle.to_degrees(), (mx, my))
}

/// Cells at least `threshold_db` below the median of the set cells within
/// `radius` of them (themselves excluded), grouped 8-connected.
pub fn detect_blind_spots(map: &PowerMap, threshold_db: f64, radius: f64) -> Result<BlindSpotReport> {
    if map.values.is_empty() || !map.values.iter().any(|v| v.is_finite()) {
        return Err(Error::param("map", "no set cells"));
    }
    if radius < map.dx.min(map.dy) {
        return Err(Error::param(
            "neighborhood_radius",
            format!("{radius} m is smaller than one cell"),
        ));
    }
    let (nx, ny) = (map.nx, map.ny);
    let grid = map.grid();
    let rx = (radius / map.dx + 1e-9).floor() as isize;
    let ry = (radius / map.dy + 1e-9).floor() as isize;
    let mut offsets = Vec::new();
    for oy in -ry..=ry {
        for ox in -rx..=rx {
            let d = (ox as f64 * map.dx).hypot(oy as f64 * map.dy);
            if (ox, oy) != (0, 0) && d <= radius + 1e-12 {
                offsets.push((ox, oy));
            }
        }
    }

    let blind_depth: Vec<Option<f64>> = crate::par::map_indices(nx * ny, |i| {
        let v = map.values[i];
        if !v.is_finite() {
            return None;
        }
        let (ix, iy) = ((i % nx) as isize, (i / nx) as isize);
        let mut neigh: Vec<f64> = offsets
            .iter()
            .filter_map(|&(ox, oy)| {
                let (jx, jy) = (ix + ox, iy + oy);
                if jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                    return None;
                }
                let w = map.values[jy as usize * nx + jx as usize];
                w.is_finite().then_some(w)
            })
            .collect();
        if neigh.is_empty() {
            return None;
        }
        let depth = median(&mut neigh) - v;
        (depth >= threshold_db).then_some(depth)
    });

    let mut cells = Vec::new();
    let mut cell_of = vec![usize::MAX; nx * ny];
    for (i, d) in blind_depth.iter().enumerate() {
        if let Some(depth) = d {
            let c = grid.center_of(i);
            cell_of[i] = cells.len();
            cells.push(BlindCell {
                x: c.x,
                y: c.y,
                depth_db: *depth,
            });
        }
    }

    // flood fill in scan order so region numbering is deterministic
    let mut region_of = vec![usize::MAX; nx * ny];
    let mut regions = Vec::new();
    for start in 0..nx * ny {
        if cell_of[start] == usize::MAX || region_of[start] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut stack = vec![start];
        region_of[start] = id;
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            let (ix, iy) = ((i % nx) as isize, (i / nx) as isize);
            for oy in -1..=1isize {
                for ox in -1..=1isize {
                    let (jx, jy) = (ix + ox, iy + oy);
                    if jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                        continue;
                    }
                    let j = jy as usize * nx + jx as usize;
                    if cell_of[j] != usize::MAX && region_of[j] == usize::MAX {
                        region_of[j] = id;
                        stack.push(j);
                    }
                }
            }
        }
        members.sort_unstable();
        let pts: Vec<(f64, f64)> = members
            .iter()
            .map(|&i| {
                let c = grid.center_of(i);
                (c.x, c.y)
            })
            .collect();
        let (axis_ratio, orientation_deg, centroid) = shape(&pts, map.dx, map.dy);
        regions.push(BlindRegion {
            cells: members.iter().map(|&i| cell_of[i]).collect(),
            area: members.len() as f64 * map.dx * map.dy,
            centroid,
            axis_ratio,
            orientation_deg,
        });
    }

    Ok(BlindSpotReport {
        threshold_db,
        neighborhood_radius: radius,
        cells,
        regions,
    })
}
