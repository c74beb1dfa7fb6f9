//! Physical quantities with explicit unit suffixes.
//!
//! Config files state every physical value as `"<number> <unit>"` (e.g.
//! `"5.03 GHz"`, `"700 uW"`); bare numbers for dimensioned fields are
//! rejected at parse time. Each quantity keeps the value and unit exactly
//! as entered so a resolved-config snapshot re-serializes byte-identically
//! and re-parses to the same `f64`.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SimError;

fn split_quantity(s: &str) -> Result<(f64, &str), String> {
    let s = s.trim();
    let split = s
        .char_indices()
        .find(|(_, c)| c.is_alphabetic() || *c == 'µ')
        .map(|(i, _)| i)
        .ok_or_else(|| format!("missing unit suffix in {s:?}"))?;
    let (num, unit) = s.split_at(split);
    let num = num.trim();
    if num.is_empty() {
        return Err(format!("missing numeric value in {s:?}"));
    }
    let value: f64 = num
        .parse()
        .map_err(|_| format!("invalid number {num:?} in {s:?}"))?;
    if !value.is_finite() {
        return Err(format!("non-finite value in {s:?}"));
    }
    Ok((value, unit.trim()))
}

macro_rules! quantity {
    ($(#[$doc:meta])* $name:ident, $base:ident, $what:literal,
     [$(($sym:literal $(| $alt:literal)*, $factor:expr)),+ $(,)?]) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name {
            value: f64,
            unit: &'static str,
            factor: f64,
        }

        impl $name {
            pub fn new(value: f64, unit: &str) -> Result<Self, SimError> {
                let (sym, factor) = match unit {
                    $($sym $(| $alt)* => ($sym, $factor),)+
                    other => {
                        return Err(SimError::config(format!(
                            "unknown {} unit {:?} (expected one of {})",
                            $what, other, [$($sym),+].join(", ")
                        )))
                    }
                };
                if !value.is_finite() {
                    return Err(SimError::config(format!("non-finite {} value", $what)));
                }
                Ok(Self { value, unit: sym, factor })
            }

            /// Value converted to the base unit.
            pub fn $base(&self) -> f64 {
                self.value * self.factor
            }

            /// Value/unit exactly as entered.
            pub fn raw(&self) -> (f64, &'static str) {
                (self.value, self.unit)
            }
        }

        impl FromStr for $name {
            type Err = SimError;
            fn from_str(s: &str) -> Result<Self, SimError> {
                let (value, unit) = split_quantity(s).map_err(SimError::config)?;
                Self::new(value, unit)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{} {}", self.value, self.unit)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(|e: SimError| D::Error::custom(e.to_string()))
            }
        }
    };
}

quantity!(
    /// A frequency with explicit unit (`Hz`, `kHz`, `MHz`, `GHz`).
    Frequency, hz, "frequency",
    [("Hz", 1.0), ("kHz" | "KHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)]
);

quantity!(
    /// An optical power with explicit unit (`W`, `mW`, `uW`/`µW`, `nW`).
    OpticalPower, watts, "power",
    [("W", 1.0), ("mW", 1e-3), ("uW" | "µW", 1e-6), ("nW", 1e-9)]
);

quantity!(
    /// A length with explicit unit (`m`, `mm`, `um`/`µm`, `nm`).
    Length, meters, "length",
    [("m", 1.0), ("mm", 1e-3), ("um" | "µm", 1e-6), ("nm", 1e-9)]
);

quantity!(
    /// A duration with explicit unit (`s`, `ms`, `us`/`µs`, `min`, `h`).
    Duration, seconds, "time",
    [("s", 1.0), ("ms", 1e-3), ("us" | "µs", 1e-6), ("min", 60.0), ("h", 3600.0)]
);

impl OpticalPower {
    pub fn milliwatts(&self) -> f64 {
        self.watts() * 1e3
    }
}

impl Duration {
    pub fn hours(&self) -> f64 {
        self.seconds() / 3600.0
    }
}

macro_rules! level_quantity {
    ($(#[$doc:meta])* $name:ident, $unit:literal, $get:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(f64);

        impl $name {
            pub fn new(value: f64) -> Result<Self, SimError> {
                if !value.is_finite() {
                    return Err(SimError::config(concat!("non-finite ", $unit, " value")));
                }
                Ok(Self(value))
            }

            pub fn $get(&self) -> f64 {
                self.0
            }
        }

        impl FromStr for $name {
            type Err = SimError;
            fn from_str(s: &str) -> Result<Self, SimError> {
                let (value, unit) = split_quantity(s).map_err(SimError::config)?;
                if unit != $unit {
                    return Err(SimError::config(format!(
                        "expected {} unit {:?}, got {:?}",
                        $unit, $unit, unit
                    )));
                }
                Self::new(value)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{} {}", self.0, $unit)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(|e: SimError| D::Error::custom(e.to_string()))
            }
        }
    };
}

level_quantity!(
    /// A ratio in decibels (`dB`).
    Decibels, "dB", db
);

level_quantity!(
    /// An absolute electrical power level (`dBm`).
    PowerDbm, "dBm", dbm
);

/// dBm → mW.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// mW → dBm. Zero or negative power maps to −∞.
pub fn mw_to_dbm(mw: f64) -> f64 {
    if mw > 0.0 {
        10.0 * mw.log10()
    } else {
        f64::NEG_INFINITY
    }
}
