//! Instance documents: `{"hecke", "E", "Theta", "ThetaPrime", "spectral"?}`.

use serde::{Deserialize, Serialize};

use crate::hecke::HeckeData;
use crate::higgs::{HiggsPair, VTwistedHiggsField};
use crate::projective_line::{SplitBundle, TwistedEndo, TwistedEndoJson};
use crate::spectral::SpectralData;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub hecke: HeckeData,
    #[serde(rename = "E")]
    pub e: SplitBundle,
    #[serde(rename = "Theta")]
    pub theta: TwistedEndoJson,
    #[serde(rename = "ThetaPrime")]
    pub theta_prime: TwistedEndoJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralData>,
}

/// Input to `build`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildDocument {
    pub spectral: SpectralData,
    pub hecke: HeckeData,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed document: {0}")]
    Json(String),
    #[error("inconsistent document: {0}")]
    Inconsistent(String),
}

impl InstanceDocument {
    pub fn parse(src: &str) -> Result<Self, InputError> {
        serde_json::from_str(src).map_err(|e| InputError::Json(e.to_string()))
    }

    /// Parses both matrices against `E` and checks their twists against the
    /// Hecke degrees.
    pub fn pair(&self) -> Result<HiggsPair, InputError> {
        let theta = TwistedEndo::from_json(&self.theta, &self.e).map_err(|e| InputError::Json(format!("Theta: {e}")))?;
        let theta_prime = TwistedEndo::from_json(&self.theta_prime, &self.e)
            .map_err(|e| InputError::Json(format!("ThetaPrime: {e}")))?;
        if theta.twist.0 != self.hecke.a || theta_prime.twist.0 != self.hecke.b {
            return Err(InputError::Inconsistent(format!(
                "Theta/ThetaPrime twists ({}, {}) must equal the Hecke degrees S = {}, L = {}",
                theta.twist.0, theta_prime.twist.0, self.hecke.a, self.hecke.b
            )));
        }
        HiggsPair::new(theta, theta_prime).map_err(|e| InputError::Inconsistent(e.to_string()))
    }

    pub fn from_pair(pair: &HiggsPair, hecke: &HeckeData) -> Self {
        InstanceDocument {
            hecke: hecke.clone(),
            e: pair.e.clone(),
            theta: pair.theta.to_json(),
            theta_prime: pair.theta_prime.to_json(),
            spectral: None,
        }
    }

    pub fn from_field(f: &VTwistedHiggsField) -> Self {
        Self::from_pair(f.pair(), f.hecke())
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

impl BuildDocument {
    pub fn parse(src: &str) -> Result<Self, InputError> {
        serde_json::from_str(src).map_err(|e| InputError::Json(e.to_string()))
    }
}
