use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::SampledSignal;

/// Material covering a microphone, with separate audible and ultrasonic
/// insertion losses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Occlusion {
    pub name: String,
    pub atten_audible_db: f64,
    pub atten_ultrasonic_db: f64,
}

impl Occlusion {
    pub fn new(name: &str, audible: f64, ultrasonic: f64) -> Self {
        Self {
            name: name.to_string(),
            atten_audible_db: audible,
            atten_ultrasonic_db: ultrasonic,
        }
    }

    pub fn none() -> Self {
        Self::new("none", 0.0, 0.0)
    }

    /// Built-in materials, thinnest first.
    pub fn table() -> Vec<Occlusion> {
        vec![
            Self::new("zipbag", 0.5, 1.0),
            Self::new("tissue", 0.5, 1.0),
            Self::new("tshirt", 1.0, 2.0),
            Self::new("a4paper", 2.0, 6.0),
            Self::new("plastic_case", 6.0, 12.0),
            Self::new("paper_box", 8.0, 14.0),
        ]
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Self::table()
            .into_iter()
            .find(|o| o.name == name)
            .ok_or_else(|| Error::Unknown {
                what: "occlusion",
                name: name.to_string(),
            })
    }

    /// Parse a JSON array of occlusions.
    pub fn load_table_json(json: &str) -> Result<Vec<Occlusion>> {
        let table: Vec<Occlusion> =
            serde_json::from_str(json).map_err(|e| Error::param("occlusion table", e.to_string()))?;
        if let Some(o) = table
            .iter()
            .find(|o| o.atten_audible_db < 0.0 || o.atten_ultrasonic_db < 0.0)
        {
            return Err(Error::param(
                "occlusion table",
                format!("`{}` has negative attenuation", o.name),
            ));
        }
        Ok(table)
    }

    pub fn ultrasonic_gain(&self) -> f64 {
        10f64.powf(-self.atten_ultrasonic_db / 20.0)
    }

    pub fn audible_gain(&self) -> f64 {
        10f64.powf(-self.atten_audible_db / 20.0)
    }
}

/// Attenuate the incident jam (ultrasonic loss) and speech (audible loss).
pub fn apply_occlusion(occ: &Occlusion, jam: &SampledSignal, speech: &SampledSignal) -> (SampledSignal, SampledSignal) {
    (jam.scaled(occ.ultrasonic_gain()), speech.scaled(occ.audible_gain()))
}
