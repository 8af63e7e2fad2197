use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::stepper::Scheme;
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "ddsim-checkpoint-v1";

/// Everything needed to continue a run bit-identically. Spectral
/// coefficients are stored as IEEE-754 bit patterns in hex; the remaining
/// floats use shortest round-trip decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub digest: String,
    pub step: u64,
    pub t: f64,
    pub scheme: Scheme,
    pub n_modes: usize,
    pub period: f64,
    #[serde(with = "hex_coeffs")]
    pub state: Vec<Complex64>,
    /// Previous nonlinear term of the two-step scheme.
    #[serde(with = "hex_coeffs_opt", default)]
    pub prev_nonlinear: Option<Vec<Complex64>>,
    /// Ledger entry of the most recent snapshot.
    pub record: DiagnosticsRecord,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cp: Checkpoint = serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if cp.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!(
                "unknown format `{}`, expected `{CHECKPOINT_FORMAT}`",
                cp.format
            )));
        }
        if cp.state.len() != cp.n_modes {
            return Err(Error::Checkpoint(format!(
                "state has {} coefficients for {} modes",
                cp.state.len(),
                cp.n_modes
            )));
        }
        Ok(cp)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn encode(c: &Complex64) -> String {
    format!("{:016x}:{:016x}", c.re.to_bits(), c.im.to_bits())
}

fn decode(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(':').ok_or_else(|| format!("bad coefficient `{s}`"))?;
    let bits = |h: &str| u64::from_str_radix(h, 16).map_err(|e| format!("bad coefficient `{s}`: {e}"));
    Ok(Complex64::new(f64::from_bits(bits(re)?), f64::from_bits(bits(im)?)))
}

mod hex_coeffs {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(encode))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| decode(s).map_err(D::Error::custom))
            .collect()
    }
}

mod hex_coeffs_opt {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::hex_coeffs")] Vec<Complex64>);

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|x| Wrap(x.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Complex64>>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip_is_exact() {
        let values = [
            Complex64::new(0.1, -0.0),
            Complex64::new(f64::MIN_POSITIVE, 1e300),
            Complex64::new(-3.0e-320, std::f64::consts::PI),
        ];
        for c in values {
            let d = decode(&encode(&c)).unwrap();
            assert_eq!(d.re.to_bits(), c.re.to_bits());
            assert_eq!(d.im.to_bits(), c.im.to_bits());
        }
        assert!(decode("zz").is_err());
    }
}
