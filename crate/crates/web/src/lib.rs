//! Browser bindings for the jamfield demo page.
//!
//! Each exported function has a plain Rust twin (`*_impl`) so the logic
//! can be tested natively; the wasm wrappers only convert errors.

use jamfield::field::{angular_sweep, power_map, GridSpec, PowerMap, PGM_RANGE_DB};
use jamfield::geometry::{Pose, Vec3};
use jamfield::motion::{gen_gesture_trajectory, time_averaged_sweep, GestureParams, TrajectoryKind};
use jamfield::presets::PresetId;
use jamfield::scenario::{Placement, Scenario, MIC_HEIGHT};
use jamfield::setups::jammer_scenario;
use thiserror::Error;
use wasm_bindgen::prelude::*;

const MAX_CELLS: usize = 400 * 400;
const FRAME_RATE: f64 = 100.0;
const WINDOW: f64 = 0.4;

#[derive(Debug, Error)]
pub enum WebError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("grid of {0} cells is too large for the page")]
    GridTooLarge(usize),
    #[error(transparent)]
    Sim(#[from] jamfield::Error),
}

type Result<T> = std::result::Result<T, WebError>;

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// Preset with `sources` groups, turned by `yaw_deg` from its default heading.
pub fn scenario(preset: &str, sources: u32, yaw_deg: f64) -> Result<Scenario> {
    let id: PresetId = preset
        .parse()
        .map_err(|_| WebError::UnknownPreset(preset.to_string()))?;
    let mut s = jammer_scenario(id, sources.max(1));
    let p = s.jammers[0].reference_pose();
    s.jammers[0].placement = Placement::Static(Pose::new(p.position, p.yaw + yaw_deg.to_radians(), p.pitch));
    Ok(s)
}

/// Square map of side `2 * half_width` centred under the jammer.
pub fn map_impl(preset: &str, sources: u32, yaw_deg: f64, half_width: f64, cell: f64) -> Result<PowerMap> {
    let s = scenario(preset, sources, yaw_deg)?;
    let c = s.jammers[0].reference_pose().position;
    let n = ((2.0 * half_width / cell).round() as usize).max(1);
    if n * n > MAX_CELLS {
        return Err(WebError::GridTooLarge(n * n));
    }
    let grid = GridSpec {
        origin: Vec3::new(c.x - half_width + cell / 2.0, c.y - half_width + cell / 2.0, MIC_HEIGHT),
        dx: cell,
        dy: cell,
        nx: n,
        ny: n,
    };
    Ok(power_map(&s, &grid)?)
}

/// Dark blue through teal to yellow over the displayed dB range.
pub fn color(db: f64) -> [u8; 4] {
    if !db.is_finite() {
        return [40, 40, 40, 255];
    }
    let t = ((db + PGM_RANGE_DB) / PGM_RANGE_DB).clamp(0.0, 1.0);
    let stops = [[20.0, 20.0, 90.0], [30.0, 150.0, 140.0], [250.0, 230.0, 60.0]];
    let (a, b, u) = if t < 0.5 {
        (stops[0], stops[1], t * 2.0)
    } else {
        (stops[1], stops[2], t * 2.0 - 1.0)
    };
    let mix = |k: usize| (a[k] + (b[k] - a[k]) * u).round() as u8;
    [mix(0), mix(1), mix(2), 255]
}

/// RGBA pixels, top row first (largest y at the top).
pub fn rgba(map: &PowerMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(map.nx * map.ny * 4);
    for iy in (0..map.ny).rev() {
        for ix in 0..map.nx {
            out.extend_from_slice(&color(map.get(ix, iy)));
        }
    }
    out
}

pub fn profile_impl(preset: &str, sources: u32, radius: f64, step: f64) -> Result<Vec<f64>> {
    let s = scenario(preset, sources, 0.0)?;
    Ok(angular_sweep(&s, radius, step)?.values)
}

pub fn motion_profile_impl(
    preset: &str,
    sources: u32,
    range_deg: f64,
    seconds: f64,
    seed: u64,
    radius: f64,
    step: f64,
) -> Result<Vec<f64>> {
    let s = scenario(preset, sources, 0.0)?;
    let params = GestureParams {
        random_range_deg: range_deg,
        ..GestureParams::default()
    };
    let t = gen_gesture_trajectory(
        TrajectoryKind::RandomRotation,
        s.jammers[0].reference_pose(),
        seconds,
        FRAME_RATE,
        seed,
        &params,
    )?;
    Ok(time_averaged_sweep(&s, &t, WINDOW, radius, step)?.values)
}

/// Rendered power map for a canvas.
#[wasm_bindgen]
pub struct MapImage {
    size: usize,
    pixels: Vec<u8>,
}

#[wasm_bindgen]
impl MapImage {
    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.size
    }

    /// RGBA bytes, `size * size * 4` long.
    #[wasm_bindgen(getter)]
    pub fn pixels(&self) -> Vec<u8> {
        self.pixels.clone()
    }
}

#[wasm_bindgen]
pub fn presets() -> Vec<String> {
    PresetId::ALL.iter().map(|p| p.to_string()).collect()
}

#[wasm_bindgen]
pub fn render_map(
    preset: &str,
    sources: u32,
    yaw_deg: f64,
    half_width: f64,
    cell: f64,
) -> std::result::Result<MapImage, JsError> {
    let map = js(map_impl(preset, sources, yaw_deg, half_width, cell))?;
    Ok(MapImage {
        size: map.nx,
        pixels: rgba(&map),
    })
}

/// dB relative to the ring maximum for alpha = 0, step, ..., 180.
#[wasm_bindgen]
pub fn angular_profile(preset: &str, sources: u32, radius: f64, step: f64) -> std::result::Result<Vec<f64>, JsError> {
    js(profile_impl(preset, sources, radius, step))
}

/// As [`angular_profile`], averaged over a random wrist rotation.
#[wasm_bindgen]
pub fn motion_profile(
    preset: &str,
    sources: u32,
    range_deg: f64,
    seconds: f64,
    seed: u64,
    radius: f64,
    step: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    js(motion_profile_impl(
        preset, sources, range_deg, seconds, seed, radius, step,
    ))
}
