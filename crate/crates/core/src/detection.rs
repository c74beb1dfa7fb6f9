//! Balanced-detection chain: calibration anchors, instrument settings,
//! and the closed-form signal/noise arithmetic used by the imaging path.
//!
//! The entire electrical scale hangs on two published anchors plus one
//! derived one:
//!
//! * shot-noise floor: 700 µW probe in a 10 kHz resolution bandwidth
//!   reads −67 dBm, scaling linearly with probe power and bandwidth;
//! * electronic floor: −81 dBm in the same 10 kHz bandwidth, additive
//!   and independent of the light;
//! * signal tone: electrical amplitude ∝ gain · I_pump · I_probe. The
//!   default proportionality puts the hydrogel response at 7 mW pump /
//!   700 µW probe 0.5 dB above the coherent shot floor, which keeps the
//!   coherent trace barely out of the noise while the squeezed trace
//!   clears it.

use crate::error::{Result, SimError};
use crate::materials::{material_response, MaterialRegistry, Mixture};
use crate::quantum::{noise_budget, LightSource};
use crate::units::{dbm_to_mw, mw_to_dbm};

/// Probe power at which the shot-noise anchor was taken.
pub const SHOT_ANCHOR_PROBE_W: f64 = 700e-6;
/// Resolution bandwidth of the noise anchors.
pub const ANCHOR_RBW_HZ: f64 = 10e3;
/// Shot-noise floor at the anchor point.
pub const SHOT_ANCHOR_DBM: f64 = -67.0;

/// Signal-scale anchor: relative gain 0.9 at 7 mW pump and 0.7 mW probe
/// produces a −66.5 dBm tone.
const CAL_GAIN: f64 = 0.9;
const CAL_PUMP_MW: f64 = 7.0;
const CAL_PROBE_MW: f64 = 0.7;
const CAL_TONE_DBM: f64 = -66.5;

/// Default detector conversion: tone power in dBm at unit gain · mW².
pub fn default_detector_gain_dbm() -> f64 {
    CAL_TONE_DBM - 20.0 * (CAL_GAIN * CAL_PUMP_MW * CAL_PROBE_MW).log10()
}

/// Optional deterministic injections used to probe the chain.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Injections {
    /// Tone applied identically to both detectors (frequency Hz, power dBm
    /// per arm before subtraction).
    pub common_mode_tone: Option<(f64, f64)>,
    /// Residual pump light reaching the probe detector, as the electrical
    /// power (dBm) of the resulting tone at the pump modulation frequency.
    pub pump_leakage_dbm: Option<f64>,
}

/// Modulation frequencies, calibration, and noise figures of the balanced
/// detection chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionChain {
    pub pump_mod_hz: f64,
    pub probe_mod_hz: f64,
    /// Tone power (dBm) for unit gain at 1 mW pump × 1 mW probe.
    pub detector_gain_dbm: f64,
    pub cmrr_db: f64,
    /// Electronic noise floor (dBm) referenced to the anchor bandwidth.
    pub electronic_noise_dbm: f64,
    /// AOM amplitude-modulation depth (fraction). Affects only the direct
    /// modulation tones; the calibrated product tone absorbs it.
    pub modulation_depth: f64,
    pub rng_seed: u64,
    pub injections: Injections,
}

impl Default for DetectionChain {
    fn default() -> Self {
        Self {
            pump_mod_hz: 300e3,
            probe_mod_hz: 400e3,
            detector_gain_dbm: default_detector_gain_dbm(),
            cmrr_db: 25.0,
            electronic_noise_dbm: -81.0,
            modulation_depth: 0.1,
            rng_seed: 0,
            injections: Injections::default(),
        }
    }
}

impl DetectionChain {
    /// Sum frequency where the product tone lands. Always the sum of the
    /// two modulation frequencies; never stored separately.
    pub fn signal_freq_hz(&self) -> f64 {
        self.pump_mod_hz + self.probe_mod_hz
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pump_mod_hz > 0.0 && self.probe_mod_hz > 0.0) {
            return Err(SimError::config("modulation frequencies must be > 0"));
        }
        if !(self.cmrr_db >= 0.0) {
            return Err(SimError::config("cmrr must be >= 0 dB"));
        }
        if !self.electronic_noise_dbm.is_finite() {
            return Err(SimError::config("electronic noise floor must be finite"));
        }
        if !(self.modulation_depth > 0.0 && self.modulation_depth < 1.0) {
            return Err(SimError::config("modulation depth must be in (0, 1)"));
        }
        Ok(())
    }

    /// Electronic noise power spectral density, mW/Hz.
    pub fn electronic_psd_mw_hz(&self) -> f64 {
        dbm_to_mw(self.electronic_noise_dbm) / ANCHOR_RBW_HZ
    }

    /// Electronic floor in a given bandwidth, dBm.
    pub fn electronic_floor_dbm(&self, rbw_hz: f64) -> f64 {
        mw_to_dbm(self.electronic_psd_mw_hz() * rbw_hz)
    }

    /// Signed electrical amplitude of the product tone, in √mW (tone power
    /// is amplitude²/2... see `tone_power_mw`). Exactly zero when any
    /// factor is zero.
    pub fn sbs_signal_amplitude(&self, gain: f64, pump_w: f64, probe_w: f64) -> f64 {
        let product = gain * (pump_w * 1e3) * (probe_w * 1e3);
        if product == 0.0 {
            return 0.0;
        }
        let power_mw = dbm_to_mw(self.detector_gain_dbm) * product * product;
        product.signum() * (2.0 * power_mw).sqrt()
    }

    /// Electrical power of the product tone, mW.
    pub fn signal_power_mw(&self, gain: f64, pump_w: f64, probe_w: f64) -> f64 {
        let a = self.sbs_signal_amplitude(gain, pump_w, probe_w);
        a * a / 2.0
    }
}

/// Shot-noise floor for a probe power in a given resolution bandwidth,
/// dBm. Linear in both, pinned at the anchor point.
pub fn shot_noise_dbm(probe_w: f64, rbw_hz: f64) -> f64 {
    assert!(probe_w > 0.0 && rbw_hz > 0.0);
    SHOT_ANCHOR_DBM
        + 10.0 * (probe_w / SHOT_ANCHOR_PROBE_W).log10()
        + 10.0 * (rbw_hz / ANCHOR_RBW_HZ).log10()
}

/// Shot-noise power spectral density for a probe power, mW/Hz.
pub fn shot_psd_mw_hz(probe_w: f64) -> f64 {
    dbm_to_mw(SHOT_ANCHOR_DBM) / ANCHOR_RBW_HZ * (probe_w / SHOT_ANCHOR_PROBE_W)
}

/// Total balanced-output noise PSD for a source: squeezing-scaled shot
/// noise plus electronic noise, mW/Hz.
pub fn total_noise_psd_mw_hz(chain: &DetectionChain, source: &LightSource) -> f64 {
    let r = noise_budget(source).relative_noise_power;
    shot_psd_mw_hz(source.probe_power_w) * r + chain.electronic_psd_mw_hz()
}

/// Closed-form SNR of the product tone against the noise in one resolution
/// bandwidth, in dB. Returns −∞ for zero gain; imaging clamps at 0.
pub fn analytic_snr_db(
    chain: &DetectionChain,
    source: &LightSource,
    registry: &MaterialRegistry,
    mixture: &Mixture,
    lock_detuning_hz: f64,
    rbw_hz: f64,
) -> Result<f64> {
    let gain = material_response(registry, mixture, lock_detuning_hz)?;
    let sig = chain.signal_power_mw(gain, source.pump_power_w, source.probe_power_w);
    let noise = total_noise_psd_mw_hz(chain, source) * rbw_hz;
    Ok(mw_to_dbm(sig) - mw_to_dbm(noise))
}

/// Per-pixel seed derivation: base seed XOR pixel index.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    base ^ index
}

/// Spectrum-analyzer settings: resolution/video bandwidths plus either a
/// swept span or a zero-span dwell.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerSettings {
    pub rbw_hz: f64,
    pub vbw_hz: f64,
    pub mode: SweepMode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepMode {
    Swept {
        start_hz: f64,
        stop_hz: f64,
        sweep_time_s: f64,
        points: usize,
    },
    ZeroSpan {
        center_hz: f64,
        duration_s: f64,
    },
}

impl AnalyzerSettings {
    /// Swept defaults: 10 kHz RBW, 10 Hz VBW, 625–775 kHz in 1 s.
    pub fn swept_default() -> Self {
        Self {
            rbw_hz: 10e3,
            vbw_hz: 10.0,
            mode: SweepMode::Swept {
                start_hz: 625e3,
                stop_hz: 775e3,
                sweep_time_s: 1.0,
                points: 301,
            },
        }
    }

    /// Zero-span defaults: 3 kHz RBW, 300 Hz VBW, 2.0 ms at the sum
    /// frequency.
    pub fn zero_span_default(center_hz: f64) -> Self {
        Self {
            rbw_hz: 3e3,
            vbw_hz: 300.0,
            mode: SweepMode::ZeroSpan {
                center_hz,
                duration_s: 2.0e-3,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rbw_hz > 0.0 && self.vbw_hz > 0.0) {
            return Err(SimError::config("rbw and vbw must be > 0"));
        }
        if self.vbw_hz > self.rbw_hz {
            return Err(SimError::config("vbw must not exceed rbw"));
        }
        match &self.mode {
            SweepMode::Swept {
                start_hz,
                stop_hz,
                sweep_time_s,
                points,
            } => {
                if !(*start_hz >= 0.0 && stop_hz > start_hz) {
                    return Err(SimError::config("sweep span must have stop > start >= 0"));
                }
                if *points < 2 {
                    return Err(SimError::config("swept mode needs at least 2 points"));
                }
                if !(*sweep_time_s > 0.0) {
                    return Err(SimError::config("sweep time must be > 0"));
                }
            }
            SweepMode::ZeroSpan {
                center_hz,
                duration_s,
            } => {
                if !(*center_hz > 0.0 && *duration_s > 0.0) {
                    return Err(SimError::config("zero-span center and duration must be > 0"));
                }
            }
        }
        Ok(())
    }

    /// Time the instrument occupies per acquisition.
    pub fn dwell_s(&self) -> f64 {
        match &self.mode {
            SweepMode::Swept { sweep_time_s, .. } => *sweep_time_s,
            SweepMode::ZeroSpan { duration_s, .. } => *duration_s,
        }
    }

    /// Number of effectively independent noise samples the video filter
    /// averages into one displayed power. Governs the spread of measured
    /// noise around its expectation.
    pub fn averaging_samples(&self) -> usize {
        let n = match &self.mode {
            SweepMode::Swept { .. } => self.rbw_hz / (2.0 * self.vbw_hz),
            SweepMode::ZeroSpan { duration_s, .. } => duration_s * self.rbw_hz,
        };
        (n.round() as usize).max(1)
    }
}

/// Lock-in settings for detuning scans.
#[derive(Debug, Clone, PartialEq)]
pub struct LockInSettings {
    pub time_constant_s: f64,
    pub scan_rate_hz: f64,
    pub grid_step_hz: f64,
    /// Hardware floor on the detuning step.
    pub min_step_hz: f64,
}

impl Default for LockInSettings {
    fn default() -> Self {
        Self {
            time_constant_s: 0.3,
            scan_rate_hz: 0.02,
            grid_step_hz: 40e6,
            min_step_hz: 40e6,
        }
    }
}

impl LockInSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_constant_s > 0.0) {
            return Err(SimError::config("lock-in time constant must be > 0"));
        }
        if !(self.grid_step_hz > 0.0) {
            return Err(SimError::config("detuning step must be > 0"));
        }
        if self.grid_step_hz < self.min_step_hz {
            return Err(SimError::config(format!(
                "detuning step {} Hz below hardware floor {} Hz",
                self.grid_step_hz, self.min_step_hz
            )));
        }
        Ok(())
    }
}
