//! Time-domain synthesis of the two photodetector outputs and their
//! balanced difference.
//!
//! Each arm carries a DC level proportional to its beam power, the AOM
//! modulation tone, and shot noise; the probe arm additionally carries
//! the product tone at the sum frequency (plus its mirror at the
//! difference frequency) and any residual pump leakage. The balanced
//! output applies the common-mode rejection ratio to the deterministic
//! common content, keeps the differential shot noise scaled by β, and
//! picks up electronic noise after subtraction.
//!
//! Everything is a pure function of (chain, source, gain, duration,
//! sample rate, seed): identical inputs give bit-identical records.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::detection::{shot_psd_mw_hz, DetectionChain};
use crate::error::{Result, SimError};
use crate::quantum::{noise_budget, LightSource};
use crate::units::dbm_to_mw;

/// Electrical amplitude per mW of optical power on one detector. Sets only
/// the (out-of-band) DC and modulation-tone scale; the product tone and
/// the noise floors are pinned by their own calibration anchors.
const ARM_SCALE_PER_MW: f64 = 1.0;

/// A synthesized acquisition: both detector outputs plus the balanced
/// difference, all in √mW electrical amplitude units (a tone of amplitude
/// A carries A²/2 mW).
#[derive(Debug, Clone)]
pub struct PhotocurrentRecord {
    pub sample_rate_hz: f64,
    pub arm_probe: Vec<f64>,
    pub arm_reference: Vec<f64>,
    pub balanced: Vec<f64>,
}

impl PhotocurrentRecord {
    pub fn len(&self) -> usize {
        self.balanced.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balanced.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.sample_rate_hz
    }

    /// AC power (variance) of the balanced series in mW, for checks
    /// against swept-spectrum totals.
    pub fn balanced_ac_power_mw(&self) -> f64 {
        let n = self.balanced.len() as f64;
        let mean = self.balanced.iter().sum::<f64>() / n;
        self.balanced.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
    }
}

struct Tone {
    freq_hz: f64,
    amplitude: f64,
}

/// Synthesize the detector pair for a fixed lock point with the given SBS
/// gain. `gain` is the dimensionless material response at the lock
/// detuning.
pub fn synthesize_photocurrents(
    chain: &DetectionChain,
    source: &LightSource,
    gain: f64,
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<PhotocurrentRecord> {
    chain.validate()?;
    source.validate()?;
    let f_sig = chain.signal_freq_hz();
    if sample_rate_hz <= 4.0 * f_sig {
        return Err(SimError::Aliasing {
            sample_rate_hz,
            signal_hz: f_sig,
        });
    }
    let n = (duration_s * sample_rate_hz).round() as usize;
    if n == 0 {
        return Err(SimError::config("synthesis duration too short"));
    }

    let probe_mw = source.probe_power_mw();
    let conj_mw = source.conjugate_power_w * 1e3;
    let dc_probe = ARM_SCALE_PER_MW * probe_mw;
    let dc_ref = ARM_SCALE_PER_MW * conj_mw;
    let depth = chain.modulation_depth;

    let a_signal = chain.sbs_signal_amplitude(gain, source.pump_power_w, source.probe_power_w);

    // Deterministic tones per arm. The probe and reference beams share the
    // probe-side AOM frequency, so their modulation tones are common mode.
    let mut probe_tones = vec![
        Tone { freq_hz: chain.probe_mod_hz, amplitude: depth * dc_probe },
        // SBS product of the two modulations: sum and difference tones.
        Tone { freq_hz: f_sig, amplitude: a_signal },
        Tone {
            freq_hz: (chain.probe_mod_hz - chain.pump_mod_hz).abs(),
            amplitude: a_signal,
        },
    ];
    let mut ref_tones = vec![Tone {
        freq_hz: chain.probe_mod_hz,
        amplitude: depth * dc_ref,
    }];
    if let Some(dbm) = chain.injections.pump_leakage_dbm {
        // Leakage is additive light on one detector: it shows up at the
        // pump modulation frequency only, never at the sum frequency.
        probe_tones.push(Tone {
            freq_hz: chain.pump_mod_hz,
            amplitude: (2.0 * dbm_to_mw(dbm)).sqrt(),
        });
    }
    if let Some((freq_hz, dbm)) = chain.injections.common_mode_tone {
        let amplitude = (2.0 * dbm_to_mw(dbm)).sqrt();
        probe_tones.push(Tone { freq_hz, amplitude });
        ref_tones.push(Tone { freq_hz, amplitude });
    }

    // Noise levels. The balanced differential floor is the anchored shot
    // PSD scaled by the squeezing budget; each arm individually stays at
    // full shot level (squeezing lives in the correlation). The common
    // noise component cancels exactly on subtraction; the CMRR mismatch is
    // carried by the deterministic common content where it matters.
    let r_power = noise_budget(source).relative_noise_power;
    let shot_psd = shot_psd_mw_hz(source.probe_power_w);
    let psd_diff = shot_psd * r_power;
    let psd_common = (shot_psd / 2.0 - psd_diff / 4.0).max(0.0);
    let sigma_diff = (psd_diff * sample_rate_hz / 2.0).sqrt();
    let sigma_common = (psd_common * sample_rate_hz / 2.0).sqrt();
    let sigma_elec = (chain.electronic_psd_mw_hz() * sample_rate_hz / 2.0).sqrt();

    let mismatch = 1.0 - 10f64.powf(-chain.cmrr_db / 20.0);

    let mut rng = ChaCha8Rng::seed_from_u64(chain.rng_seed);
    let dt = 1.0 / sample_rate_hz;
    let mut arm_probe = Vec::with_capacity(n);
    let mut arm_reference = Vec::with_capacity(n);
    let mut balanced = Vec::with_capacity(n);

    for i in 0..n {
        let t = i as f64 * dt;
        let mut det_p = dc_probe;
        for tone in &probe_tones {
            det_p += tone.amplitude * (TAU * tone.freq_hz * t).cos();
        }
        let mut det_r = dc_ref;
        for tone in &ref_tones {
            det_r += tone.amplitude * (TAU * tone.freq_hz * t).cos();
        }

        let n_diff: f64 = rng.sample::<f64, _>(StandardNormal) * sigma_diff;
        let n_common: f64 = rng.sample::<f64, _>(StandardNormal) * sigma_common;
        let n_elec: f64 = rng.sample::<f64, _>(StandardNormal) * sigma_elec;

        arm_probe.push(det_p + n_common + n_diff / 2.0);
        arm_reference.push(det_r + n_common - n_diff / 2.0);
        balanced.push(det_p - mismatch * det_r + n_diff + n_elec);
    }

    Ok(PhotocurrentRecord {
        sample_rate_hz,
        arm_probe,
        arm_reference,
        balanced,
    })
}
