use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Unit for every entropy-like output. Computations run in nats internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Bits,
    Nats,
}

impl Units {
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Units::Bits => nats / std::f64::consts::LN_2,
            Units::Nats => nats,
        }
    }

    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            Units::Bits => value * std::f64::consts::LN_2,
            Units::Nats => value,
        }
    }

    /// `log` in this unit's base.
    pub fn log(self, x: f64) -> f64 {
        self.from_nats(x.ln())
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bits" => Ok(Units::Bits),
            "nats" => Ok(Units::Nats),
            other => Err(format!("unknown units {other:?} (expected bits or nats)")),
        }
    }
}

/// `-Σ p ln p` with `0 ln 0 = 0`, in nats.
pub(crate) fn entropy_nats(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

/// Binary entropy in bits.
pub fn binary_entropy_bits(x: f64) -> f64 {
    Units::Bits.from_nats(entropy_nats([x, 1.0 - x]))
}
