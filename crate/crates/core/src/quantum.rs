//! Probe/conjugate light statistics: coherent versus two-mode
//! intensity-difference squeezed.
//!
//! The balanced detector's differential noise is referenced to the
//! shot-noise limit. A two-mode squeezed source with squeezing parameter
//! r reduces the differential noise power by cosh 2r; optical loss mixes
//! vacuum back in. With total transmission η the relative noise power is
//!
//! ```text
//! R = η / cosh(2r) + (1 − η)        (coherent: R = 1)
//! β = √R
//! ```

use crate::error::{Result, SimError};

/// Quantum state of the probe/conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LightState {
    Coherent,
    /// Source squeezing in dB, before optical loss.
    TwoModeSqueezed { squeezing_db: f64 },
}

/// Beam powers plus the quantum state descriptor and the end-to-end
/// optical transmission η from source to detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightSource {
    pub probe_power_w: f64,
    pub conjugate_power_w: f64,
    pub pump_power_w: f64,
    pub state: LightState,
    pub transmission: f64,
}

impl LightSource {
    pub fn validate(&self) -> Result<()> {
        for (label, p) in [
            ("probe", self.probe_power_w),
            ("conjugate", self.conjugate_power_w),
            ("pump", self.pump_power_w),
        ] {
            if !(p.is_finite() && p >= 0.0) {
                return Err(SimError::config(format!("{label} power must be >= 0")));
            }
        }
        if !(self.transmission.is_finite() && self.transmission > 0.0 && self.transmission <= 1.0)
        {
            return Err(SimError::config("transmission must be in (0, 1]"));
        }
        if let LightState::TwoModeSqueezed { squeezing_db } = self.state {
            if !(squeezing_db.is_finite() && squeezing_db >= 0.0) {
                return Err(SimError::config("squeezing must be >= 0 dB"));
            }
        }
        Ok(())
    }

    pub fn probe_power_mw(&self) -> f64 {
        self.probe_power_w * 1e3
    }

    pub fn pump_power_mw(&self) -> f64 {
        self.pump_power_w * 1e3
    }

    /// Same beams with the probe/conjugate pair swapped for coherent light.
    pub fn as_coherent(&self) -> LightSource {
        LightSource {
            state: LightState::Coherent,
            ..*self
        }
    }
}

/// Differential-noise summary: β (amplitude) and R = β² (power), both
/// relative to the shot-noise limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    pub beta: f64,
    pub relative_noise_power: f64,
}

/// Squeezing parameter r with cosh(2r) = 10^(dB/10).
pub fn squeezing_to_r(squeezing_db: f64) -> f64 {
    assert!(squeezing_db >= 0.0, "squeezing must be >= 0 dB");
    let c = 10f64.powf(squeezing_db / 10.0);
    c.acosh() / 2.0
}

/// Differential noise relative to shot noise for a source, including the
/// beam-splitter loss model.
pub fn noise_budget(source: &LightSource) -> NoiseBudget {
    let r_power = match source.state {
        LightState::Coherent => 1.0,
        LightState::TwoModeSqueezed { squeezing_db } => {
            let cosh2r = 10f64.powf(squeezing_db / 10.0);
            source.transmission / cosh2r + (1.0 - source.transmission)
        }
    };
    NoiseBudget {
        beta: r_power.sqrt(),
        relative_noise_power: r_power,
    }
}

/// Noise-floor reduction the source buys over coherent light, in dB.
pub fn quantum_advantage_db(source: &LightSource) -> f64 {
    -10.0 * noise_budget(source).relative_noise_power.log10()
}
