use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::superposition::FieldModel;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::par;
use crate::scenario::{Scenario, MIC_HEIGHT};

/// Cells closer than this (horizontally) to a jammer centroid are unset.
pub const NEAR_FIELD_EXCLUSION: f64 = 0.05;
/// Floor for cells with zero power.
pub const DB_FLOOR: f64 = -300.0;
/// PGM gray scale spans this many dB below the map maximum.
pub const PGM_RANGE_DB: f64 = 40.0;

/// A rectangular grid of cell centres in a horizontal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Centre of cell (0, 0); `origin.z` is the plane height.
    pub origin: Vec3,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    /// 1 m x 1 m at 1 cm, centred on the origin, at microphone height.
    fn default() -> Self {
        Self::centered(1.0, 1.0, 0.01, MIC_HEIGHT)
    }
}

impl GridSpec {
    pub fn centered(width: f64, height: f64, cell: f64, z: f64) -> Self {
        let nx = (width / cell).round() as usize;
        let ny = (height / cell).round() as usize;
        Self {
            origin: Vec3::new(-width / 2.0 + cell / 2.0, -height / 2.0 + cell / 2.0, z),
            dx: cell,
            dy: cell,
            nx,
            ny,
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Vec3 {
        Vec3::new(
            self.origin.x + ix as f64 * self.dx,
            self.origin.y + iy as f64 * self.dy,
            self.origin.z,
        )
    }

    /// Centre of the cell with flat index `i` (row-major in y).
    pub fn center_of(&self, i: usize) -> Vec3 {
        self.cell_center(i % self.nx, i / self.nx)
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::param("grid", "empty grid"));
        }
        if !(self.dx > 0.0 && self.dy > 0.0) {
            return Err(Error::param("grid", "cell size must be positive"));
        }
        Ok(())
    }
}

/// Jamming power on a grid, dB relative to the map maximum.
///
/// `values` is row-major in y (`iy * nx + ix`); NaN marks unset cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerMap {
    pub origin: Vec3,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl PowerMap {
    /// Normalize linear powers (NaN = unset) so the maximum is 0 dB.
    pub fn from_linear(grid: &GridSpec, linear: &[f64]) -> Self {
        let max = linear.iter().copied().filter(|v| v.is_finite()).fold(0.0f64, f64::max);
        let values = linear
            .iter()
            .map(|&p| {
                if !p.is_finite() {
                    f64::NAN
                } else if p <= 0.0 || max <= 0.0 {
                    DB_FLOOR
                } else {
                    (10.0 * (p / max).log10()).max(DB_FLOOR)
                }
            })
            .collect();
        Self {
            origin: grid.origin,
            dx: grid.dx,
            dy: grid.dy,
            nx: grid.nx,
            ny: grid.ny,
            values,
        }
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            origin: self.origin,
            dx: self.dx,
            dy: self.dy,
            nx: self.nx,
            ny: self.ny,
        }
    }

    pub fn z(&self) -> f64 {
        self.origin.z
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn is_set(&self, i: usize) -> bool {
        self.values[i].is_finite()
    }

    pub fn max_db(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with header `x,y,db`; unset cells have an empty `db`.
    pub fn to_csv(&self) -> String {
        let g = self.grid();
        let mut out = String::from("x,y,db\n");
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let c = g.cell_center(ix, iy);
                let v = self.get(ix, iy);
                if v.is_finite() {
                    let _ = writeln!(out, "{:.4},{:.4},{:.6}", c.x, c.y, v);
                } else {
                    let _ = writeln!(out, "{:.4},{:.4},", c.x, c.y);
                }
            }
        }
        out
    }

    /// Plain PGM (P2): -40 dB..0 dB maps linearly to gray 0..255, lower
    /// values clip to 0, unset cells are 0. First image row is the
    /// largest y.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.nx, self.ny);
        for iy in (0..self.ny).rev() {
            let row: Vec<String> = (0..self.nx)
                .map(|ix| gray_level(self.get(ix, iy)).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// dB (relative to max) to 8-bit gray.
pub fn gray_level(db: f64) -> u8 {
    if !db.is_finite() {
        return 0;
    }
    let g = ((db + PGM_RANGE_DB) / PGM_RANGE_DB * 255.0).round();
    g.clamp(0.0, 255.0) as u8
}

/// Whether a cell centre lies inside any jammer's near-field exclusion.
pub(crate) fn excluded(p: Vec3, centroids: &[Vec3]) -> bool {
    centroids
        .iter()
        .any(|c| (p.x - c.x).hypot(p.y - c.y) < NEAR_FIELD_EXCLUSION)
}

/// Linear power per cell for one model; excluded or coincident cells are NaN.
pub(crate) fn linear_power_grid(model: &FieldModel, grid: &GridSpec, exclude: &[Vec3]) -> Vec<f64> {
    par::map_indices(grid.len(), |i| {
        let p = grid.center_of(i);
        if excluded(p, exclude) {
            return f64::NAN;
        }
        model.power(p).unwrap_or(f64::NAN)
    })
}

/// Jamming power over `grid` with every jammer at its reference pose.
pub fn power_map(scenario: &Scenario, grid: &GridSpec) -> Result<PowerMap> {
    grid.check()?;
    let model = FieldModel::reference(scenario)?;
    let lin = linear_power_grid(&model, grid, model.centroids());
    Ok(PowerMap::from_linear(grid, &lin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Pose;
    use crate::presets::{build_preset, PresetId, WRIST_HEIGHT};

    fn bracelet(sources: u32) -> Scenario {
        Scenario::single(
            build_preset(PresetId::Bracelet24).with_sources(sources),
            Pose::at(Vec3::new(0.0, 0.0, WRIST_HEIGHT)),
        )
    }

    #[test]
    fn normalized_to_zero_max() {
        let grid = GridSpec::centered(0.4, 0.4, 0.02, MIC_HEIGHT);
        let m = power_map(&bracelet(1), &grid).unwrap();
        assert_eq!(m.max_db(), 0.0);
        assert!(m.values.iter().filter(|v| v.is_finite()).all(|&v| v <= 0.0));
        // exclusion disc around the jammer
        let unset = m.values.iter().filter(|v| v.is_nan()).count();
        assert!(unset > 0 && unset < 40, "{unset}");
    }

    #[test]
    fn empty_grid_is_an_error() {
        let g = GridSpec {
            nx: 0,
            ..GridSpec::default()
        };
        assert!(power_map(&bracelet(1), &g).is_err());
    }

    #[test]
    fn drive_scaling_invariance() {
        let grid = GridSpec::centered(0.4, 0.4, 0.02, MIC_HEIGHT);
        let a = power_map(&bracelet(1), &grid).unwrap();
        let mut s = bracelet(1);
        s.jammers[0].config.drive_level += 17.3;
        let b = power_map(&s, &grid).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            if x.is_finite() {
                assert!((x - y).abs() < 1e-9);
            } else {
                assert!(y.is_nan());
            }
        }
    }

    #[test]
    fn csv_and_pgm_layout() {
        let grid = GridSpec::centered(0.3, 0.2, 0.1, MIC_HEIGHT);
        let m = power_map(&bracelet(1), &grid).unwrap();
        let csv = m.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,db");
        assert_eq!(lines.len(), 1 + 6);
        let pgm = m.to_pgm();
        let mut it = pgm.lines();
        assert_eq!(it.next(), Some("P2"));
        assert_eq!(it.next(), Some("3 2"));
        assert_eq!(it.next(), Some("255"));
        assert_eq!(it.count(), 2);
    }

    #[test]
    fn gray_mapping() {
        assert_eq!(gray_level(0.0), 255);
        assert_eq!(gray_level(-40.0), 0);
        assert_eq!(gray_level(-80.0), 0);
        assert_eq!(gray_level(-20.0), 128);
        assert_eq!(gray_level(f64::NAN), 0);
    }
}
