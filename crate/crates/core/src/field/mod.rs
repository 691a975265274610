//! Narrowband field at the carrier: directivity, propagation, coherent
//! superposition within a source group and power addition across groups.

mod bessel;
mod directivity;
mod map;
mod propagation;
mod spl;
mod superposition;
mod sweep;

pub use bessel::{bessel_j1, jinc};
pub use directivity::{directivity_gain, piston_gain, EmissionPattern, REAR_ROLLOFF_DB};
pub use map::{gray_level, power_map, GridSpec, PowerMap, DB_FLOOR, NEAR_FIELD_EXCLUSION, PGM_RANGE_DB};
pub use propagation::{path_factor, path_gain_db};
pub use spl::spl_at;
pub use superposition::{field_at_point, FieldModel, FieldPoint, COINCIDENT_RADIUS};
pub use sweep::{angular_sweep, sweep_angles, AngularProfile, Ring};

pub(crate) use map::excluded;
