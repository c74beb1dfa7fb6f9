//! Lock-in detuning scans: demodulated in-phase amplitude at the sum
//! frequency versus pump–probe detuning.
//!
//! The pump laser steps over the detuning grid (hardware floor 40 MHz);
//! each grid point is treated as an independent settled measurement
//! through a first-order low-pass of the configured time constant, so the
//! per-point amplitude noise is √(S/(2τ)) for balanced-output noise PSD S.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::detection::{total_noise_psd_mw_hz, DetectionChain, LockInSettings};
use crate::error::{Result, SimError};
use crate::materials::{material_response, MaterialRegistry, Mixture};
use crate::quantum::LightSource;
use crate::trace::SpectrumTrace;

/// Scan the mixture's response over `[start_hz, stop_hz]` on the settings'
/// detuning grid. Returns demodulated amplitude (√mW electrical, signed)
/// versus detuning in GHz.
pub fn lockin_scan(
    chain: &DetectionChain,
    source: &LightSource,
    registry: &MaterialRegistry,
    mixture: &Mixture,
    start_hz: f64,
    stop_hz: f64,
    settings: &LockInSettings,
) -> Result<SpectrumTrace> {
    chain.validate()?;
    source.validate()?;
    settings.validate()?;
    if stop_hz <= start_hz {
        return Err(SimError::config("empty detuning range"));
    }

    let steps = ((stop_hz - start_hz) / settings.grid_step_hz).floor() as usize + 1;
    let sigma = (total_noise_psd_mw_hz(chain, source) / (2.0 * settings.time_constant_s)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(chain.rng_seed);

    let mut axis = Vec::with_capacity(steps);
    let mut values = Vec::with_capacity(steps);
    for i in 0..steps {
        let delta_hz = start_hz + i as f64 * settings.grid_step_hz;
        let gain = material_response(registry, mixture, delta_hz)?;
        let amplitude =
            chain.sbs_signal_amplitude(gain, source.pump_power_w, source.probe_power_w);
        let noise: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
        axis.push(delta_hz / 1e9);
        values.push(amplitude + noise);
    }

    let trace = SpectrumTrace::new(axis, values, "detuning_ghz", "amplitude")?
        .with_meta("seed", chain.rng_seed)
        .with_meta("time_constant_s", settings.time_constant_s)
        .with_meta("scan_rate_hz", settings.scan_rate_hz)
        .with_meta("grid_step_hz", settings.grid_step_hz)
        .with_meta("probe_power_w", source.probe_power_w)
        .with_meta("pump_power_w", source.pump_power_w);
    Ok(trace)
}

/// Average of repeated scans with per-scan derived seeds, as acquired for
/// slow degradation series.
pub fn averaged_lockin_scan(
    chain: &DetectionChain,
    source: &LightSource,
    registry: &MaterialRegistry,
    mixture: &Mixture,
    start_hz: f64,
    stop_hz: f64,
    settings: &LockInSettings,
    averages: usize,
) -> Result<SpectrumTrace> {
    let averages = averages.max(1);
    let mut acc: Option<SpectrumTrace> = None;
    for k in 0..averages {
        let sub = DetectionChain {
            rng_seed: crate::detection::mix_seed(chain.rng_seed, k as u64),
            ..chain.clone()
        };
        let t = lockin_scan(&sub, source, registry, mixture, start_hz, stop_hz, settings)?;
        acc = Some(match acc {
            None => t,
            Some(mut a) => {
                for (v, n) in a.values.iter_mut().zip(&t.values) {
                    *v += n;
                }
                a
            }
        });
    }
    let mut trace = acc.expect("averages >= 1");
    for v in trace.values.iter_mut() {
        *v /= averages as f64;
    }
    trace.metadata.insert("averages".into(), averages.to_string());
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{BrillouinResonance, MaterialSpec};
    use crate::quantum::LightState;

    fn registry() -> MaterialRegistry {
        let mut reg = MaterialRegistry::new();
        reg.insert(
            MaterialSpec::new(
                "water",
                vec![BrillouinResonance::new(5.03e9, 287e6, 1.0).unwrap()],
                0.3,
                300e6,
            )
            .unwrap(),
        );
        reg.insert(
            MaterialSpec::new(
                "lipid",
                vec![BrillouinResonance::new(12e9, 300e6, 0.63).unwrap()],
                0.3,
                300e6,
            )
            .unwrap(),
        );
        reg
    }

    fn fig2_source() -> LightSource {
        LightSource {
            probe_power_w: 500e-6,
            conjugate_power_w: 500e-6,
            pump_power_w: 40e-3,
            state: LightState::Coherent,
            transmission: 1.0,
        }
    }

    #[test]
    fn water_scan_peak_dip_and_width() {
        let chain = DetectionChain {
            rng_seed: 42,
            ..DetectionChain::default()
        };
        let trace = lockin_scan(
            &chain,
            &fig2_source(),
            &registry(),
            &Mixture::pure("water"),
            -7e9,
            7e9,
            &LockInSettings::default(),
        )
        .unwrap();

        let peak_idx = trace.argmax(Some((0.0, 7.0))).unwrap();
        assert!((trace.axis[peak_idx] - 5.03).abs() <= 0.04 + 1e-9);

        let dip_idx = trace
            .axis
            .iter()
            .enumerate()
            .filter(|(_, x)| **x < 0.0)
            .min_by(|a, b| trace.values[a.0].total_cmp(&trace.values[b.0]))
            .map(|(i, _)| i)
            .unwrap();
        assert!((trace.axis[dip_idx] + 5.03).abs() <= 0.04 + 1e-9);

        // FWHM from interpolated half-max crossings around the gain peak.
        let peak = trace.values[peak_idx];
        let half = peak / 2.0;
        let mut left = None;
        let mut right = None;
        for i in (1..=peak_idx).rev() {
            if trace.values[i - 1] < half && trace.values[i] >= half {
                let f = (half - trace.values[i - 1]) / (trace.values[i] - trace.values[i - 1]);
                left = Some(trace.axis[i - 1] + f * (trace.axis[i] - trace.axis[i - 1]));
                break;
            }
        }
        for i in peak_idx..trace.len() - 1 {
            if trace.values[i] >= half && trace.values[i + 1] < half {
                let f = (trace.values[i] - half) / (trace.values[i] - trace.values[i + 1]);
                right = Some(trace.axis[i] + f * (trace.axis[i + 1] - trace.axis[i]));
                break;
            }
        }
        let fwhm_ghz = right.unwrap() - left.unwrap();
        assert!(
            (fwhm_ghz - 0.287).abs() <= 0.045,
            "fwhm {fwhm_ghz} GHz"
        );
    }

    #[test]
    fn zero_mixture_is_zero_mean_noise() {
        let chain = DetectionChain {
            rng_seed: 9,
            ..DetectionChain::default()
        };
        let trace = lockin_scan(
            &chain,
            &fig2_source(),
            &registry(),
            &Mixture::empty(),
            -7e9,
            7e9,
            &LockInSettings::default(),
        )
        .unwrap();
        let n = trace.len() as f64;
        let mean = trace.values.iter().sum::<f64>() / n;
        let std = (trace.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        assert!(std > 0.0);
        assert!(mean.abs() < 4.0 * std / n.sqrt(), "mean {mean} vs std {std}");
    }

    #[test]
    fn lipid_scan_resonances_at_twelve() {
        let chain = DetectionChain {
            rng_seed: 1,
            ..DetectionChain::default()
        };
        let trace = lockin_scan(
            &chain,
            &fig2_source(),
            &registry(),
            &Mixture::pure("lipid"),
            -14e9,
            14e9,
            &LockInSettings::default(),
        )
        .unwrap();
        let peak_idx = trace.argmax(Some((1.0, 14.0))).unwrap();
        assert!((trace.axis[peak_idx] - 12.0).abs() <= 0.04 + 1e-9);
        let dip_idx = trace
            .axis
            .iter()
            .enumerate()
            .filter(|(_, x)| **x < -1.0)
            .min_by(|a, b| trace.values[a.0].total_cmp(&trace.values[b.0]))
            .map(|(i, _)| i)
            .unwrap();
        assert!((trace.axis[dip_idx] + 12.0).abs() <= 0.04 + 1e-9);
    }

    #[test]
    fn empty_range_rejected() {
        let chain = DetectionChain::default();
        let err = lockin_scan(
            &chain,
            &fig2_source(),
            &registry(),
            &Mixture::pure("water"),
            7e9,
            -7e9,
            &LockInSettings::default(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn averaging_reduces_noise() {
        let chain = DetectionChain {
            rng_seed: 77,
            ..DetectionChain::default()
        };
        let reg = registry();
        let single = lockin_scan(
            &chain,
            &fig2_source(),
            &reg,
            &Mixture::empty(),
            -2e9,
            2e9,
            &LockInSettings::default(),
        )
        .unwrap();
        let averaged = averaged_lockin_scan(
            &chain,
            &fig2_source(),
            &reg,
            &Mixture::empty(),
            -2e9,
            2e9,
            &LockInSettings::default(),
            10,
        )
        .unwrap();
        let rms = |t: &SpectrumTrace| {
            (t.values.iter().map(|v| v * v).sum::<f64>() / t.len() as f64).sqrt()
        };
        assert!(rms(&averaged) < 0.6 * rms(&single));
    }
}
