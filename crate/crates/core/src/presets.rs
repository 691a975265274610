//! Jammer geometries: the two commodity arrays and the bracelet.
//!
//! Body frame: +x is the jammer's reference direction (alpha = 0), +z is
//! up. Bracelet rings lie in the body x-y plane, so the ring axis is +z.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{path_gain_db, EmissionPattern};
use crate::geometry::{Pose, Vec3};
use crate::scenario::{JammerConfig, Medium, Transducer};
use crate::signal::SignalSpec;

/// 16 mm transducer housing.
pub const PISTON_RADIUS: f64 = 0.008;
/// Close-packed element pitch.
pub const GRID_PITCH: f64 = 0.017;
pub const BRACELET_RADIUS: f64 = 0.035;
/// Vertical distance between the two stacked bracelet rings.
pub const RING_SPACING: f64 = 0.018;
/// Height of a worn bracelet above the table.
pub const WRIST_HEIGHT: f64 = 0.10;
/// Distance at which the element-face level is specified.
pub const FACE_DISTANCE: f64 = 0.01;
/// Bracelet element level at the transducer face, dB SPL.
pub const BRACELET_FACE_LEVEL: f64 = 100.0;
/// Level at the face of the commodity array elements, dB SPL.
pub const ARRAY_FACE_LEVEL: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetId {
    #[serde(rename = "backdoor_3x3")]
    Backdoor3x3,
    I4,
    #[serde(rename = "bracelet_12")]
    Bracelet12,
    #[serde(rename = "bracelet_24")]
    Bracelet24,
}

impl PresetId {
    pub const ALL: [PresetId; 4] = [
        PresetId::Backdoor3x3,
        PresetId::I4,
        PresetId::Bracelet12,
        PresetId::Bracelet24,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetId::Backdoor3x3 => "backdoor_3x3",
            PresetId::I4 => "i4",
            PresetId::Bracelet12 => "bracelet_12",
            PresetId::Bracelet24 => "bracelet_24",
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PresetId::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                what: "preset",
                name: s.to_string(),
            })
    }
}

/// Per-transducer 1 m boresight level for a level measured at the face.
pub fn face_level_to_1m(face_db: f64, medium: &Medium) -> f64 {
    face_db + path_gain_db(1.0, medium) - path_gain_db(FACE_DISTANCE, medium)
}

fn element(position: Vec3, yaw: f64, pitch: f64, carrier: f64) -> Transducer {
    Transducer {
        pose: Pose::new(position, yaw, pitch),
        pattern: EmissionPattern::Piston { radius: PISTON_RADIUS },
        carrier_freq: carrier,
        source_id: 0,
    }
}

fn ring(transducers: &mut Vec<Transducer>, count: usize, z: f64, carrier: f64) {
    for k in 0..count {
        let phi = 2.0 * PI * k as f64 / count as f64;
        let pos = Vec3::new(BRACELET_RADIUS * phi.cos(), BRACELET_RADIUS * phi.sin(), z);
        transducers.push(element(pos, phi, 0.0, carrier));
    }
}

/// Build a jammer in its body frame; every transducer on source 0.
pub fn build_preset(id: PresetId) -> JammerConfig {
    let medium = Medium::default();
    let (carrier, face) = match id {
        PresetId::I4 => (24_000.0, ARRAY_FACE_LEVEL),
        PresetId::Backdoor3x3 => (25_000.0, ARRAY_FACE_LEVEL),
        PresetId::Bracelet12 | PresetId::Bracelet24 => (25_000.0, BRACELET_FACE_LEVEL),
    };
    let mut transducers = Vec::new();
    match id {
        PresetId::Backdoor3x3 => {
            for row in [-1.0, 0.0, 1.0] {
                for col in [-1.0, 0.0, 1.0] {
                    let pos = Vec3::new(0.0, col * GRID_PITCH, row * GRID_PITCH);
                    transducers.push(element(pos, 0.0, 0.0, carrier));
                }
            }
        }
        PresetId::I4 => {
            for col in -2..=2 {
                let pos = Vec3::new(0.0, col as f64 * GRID_PITCH, 0.0);
                transducers.push(element(pos, 0.0, 0.0, carrier));
            }
            for side in [-0.5, 0.5] {
                let pos = Vec3::new(-GRID_PITCH, side * GRID_PITCH, GRID_PITCH);
                transducers.push(element(pos, 0.0, FRAC_PI_2, carrier));
            }
        }
        PresetId::Bracelet12 => ring(&mut transducers, 12, 0.0, carrier),
        PresetId::Bracelet24 => {
            ring(&mut transducers, 12, -RING_SPACING / 2.0, carrier);
            ring(&mut transducers, 12, RING_SPACING / 2.0, carrier);
        }
    }
    JammerConfig {
        transducers,
        signal: SignalSpec {
            carrier_freq: carrier,
            ..SignalSpec::default()
        },
        drive_level: face_level_to_1m(face, &medium),
    }
}
