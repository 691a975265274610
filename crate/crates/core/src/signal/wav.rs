use std::io::{Seek, Write};

use serde::{Deserialize, Serialize};

use super::SampledSignal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WavFormat {
    /// Full scale is 1.0; samples beyond it are clipped.
    #[default]
    Pcm16,
    Float32,
}

/// Write a mono WAV at the signal's (integer) sample rate.
pub fn write_wav<W: Write + Seek>(signal: &SampledSignal, format: WavFormat, out: W) -> Result<()> {
    let rate = signal.sample_rate.round();
    if (signal.sample_rate - rate).abs() > 1e-9 || rate < 1.0 || rate > u32::MAX as f64 {
        return Err(Error::param("sample_rate", "WAV needs an integer rate"));
    }
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate as u32,
        bits_per_sample: match format {
            WavFormat::Pcm16 => 16,
            WavFormat::Float32 => 32,
        },
        sample_format: match format {
            WavFormat::Pcm16 => hound::SampleFormat::Int,
            WavFormat::Float32 => hound::SampleFormat::Float,
        },
    };
    let io = |e: hound::Error| Error::Io(e.to_string());
    let mut w = hound::WavWriter::new(out, spec).map_err(io)?;
    for &v in &signal.samples {
        match format {
            WavFormat::Pcm16 => {
                let q = (v.clamp(-1.0, 1.0) * i16::MAX as f64).round() as i16;
                w.write_sample(q).map_err(io)?;
            }
            WavFormat::Float32 => w.write_sample(v as f32).map_err(io)?,
        }
    }
    w.finalize().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn pcm16_roundtrip_through_hound() {
        let s = SampledSignal::new(48_000.0, vec![0.0, 0.5, -0.5, 2.0]);
        let mut buf = Cursor::new(Vec::new());
        write_wav(&s, WavFormat::Pcm16, &mut buf).unwrap();
        buf.set_position(0);
        let mut r = hound::WavReader::new(buf).unwrap();
        assert_eq!(r.spec().sample_rate, 48_000);
        let got: Vec<i16> = r.samples::<i16>().map(|s| s.unwrap()).collect();
        assert_eq!(got, vec![0, 16384, -16384, i16::MAX]);
    }

    #[test]
    fn rejects_fractional_rate() {
        let s = SampledSignal::new(44_100.5, vec![0.0]);
        let mut buf = Cursor::new(Vec::new());
        assert!(write_wav(&s, WavFormat::Float32, &mut buf).is_err());
    }
}
