//! RF spectrum-analyzer emulation over synthesized records.
//!
//! Swept mode walks the span bin by bin, each bin consuming its share of
//! the record: the segment is demodulated to baseband, filtered by a
//! Gaussian resolution-bandwidth kernel, and squared into video power
//! samples. The video bandwidth is a zero-phase (forward–backward)
//! single-pole low-pass over the video stream, so a slow VBW smooths the
//! displayed trace without dragging peaks sideways. Zero-span parks the
//! analyzer at one frequency and returns power versus time.
//!
//! The Gaussian kernel is normalized to unit tone gain and tuned so its
//! equivalent noise bandwidth equals the configured RBW: a pure tone at
//! bin center reads its full power and white noise of PSD S reads S·RBW,
//! both exactly.

use std::f64::consts::TAU;

use crate::detection::{AnalyzerSettings, SweepMode};
use crate::error::{Result, SimError};
use crate::synth::PhotocurrentRecord;
use crate::trace::SpectrumTrace;
use crate::units::mw_to_dbm;

/// Gaussian lowpass kernel with unit DC gain and equivalent noise
/// bandwidth `rbw_hz` (two-sided at baseband = RBW of the bandpass).
fn rbw_kernel(sample_rate_hz: f64, rbw_hz: f64) -> Vec<f64> {
    // Continuous-time seed value; a couple of fixed-point iterations pin
    // the discrete kernel's noise bandwidth onto the target.
    let mut sigma = sample_rate_hz / (2.0 * std::f64::consts::PI.sqrt() * rbw_hz);
    let mut kernel = Vec::new();
    for _ in 0..3 {
        let half = (4.0 * sigma).ceil() as usize;
        kernel = (-(half as isize)..=half as isize)
            .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let sum: f64 = kernel.iter().sum();
        kernel.iter_mut().for_each(|h| *h /= sum);
        let enbw = sample_rate_hz * kernel.iter().map(|h| h * h).sum::<f64>();
        sigma *= enbw / rbw_hz;
    }
    kernel
}

/// Zero-phase single-pole low-pass: forward pass then backward pass.
fn video_filter(samples: &mut [f64], video_dt_s: f64, vbw_hz: f64) {
    if samples.len() < 2 {
        return;
    }
    let tau = 1.0 / (TAU * vbw_hz);
    let alpha = video_dt_s / (tau + video_dt_s);
    let mut state = samples[0];
    for s in samples.iter_mut() {
        state += alpha * (*s - state);
        *s = state;
    }
    let mut state = *samples.last().unwrap();
    for s in samples.iter_mut().rev() {
        state += alpha * (*s - state);
        *s = state;
    }
}

/// Demodulated complex envelope power (mW) at `freq_hz` over a segment,
/// decimated by `stride`. Positions keep the kernel fully inside the
/// segment.
fn segment_powers(
    series: &[f64],
    sample_rate_hz: f64,
    seg_start: usize,
    seg_len: usize,
    freq_hz: f64,
    kernel: &[f64],
    stride: usize,
) -> Vec<f64> {
    let half = kernel.len() / 2;
    let seg = &series[seg_start..seg_start + seg_len];

    // Demodulate the segment once; incremental rotation avoids a trig call
    // per sample.
    let step = TAU * freq_hz / sample_rate_hz;
    let (mut re_ph, mut im_ph) = {
        let phi = step * seg_start as f64;
        (phi.cos(), -phi.sin())
    };
    let (cos_s, sin_s) = (step.cos(), -step.sin());
    let mut demod_re = Vec::with_capacity(seg_len);
    let mut demod_im = Vec::with_capacity(seg_len);
    for &x in seg {
        demod_re.push(x * re_ph);
        demod_im.push(x * im_ph);
        let re = re_ph * cos_s - im_ph * sin_s;
        im_ph = re_ph * sin_s + im_ph * cos_s;
        re_ph = re;
    }

    let mut powers = Vec::new();
    let mut pos = half;
    while pos + half < seg_len {
        let mut zr = 0.0;
        let mut zi = 0.0;
        for (k, h) in kernel.iter().enumerate() {
            let idx = pos + k - half;
            zr += h * demod_re[idx];
            zi += h * demod_im[idx];
        }
        // Envelope |z|² maps a tone of amplitude A to A²/4; the factor 2
        // restores its A²/2 power.
        powers.push(2.0 * (zr * zr + zi * zi));
        pos += stride;
    }
    powers
}

/// Run the analyzer over a balanced record. Swept mode returns power (dBm)
/// versus frequency (Hz); zero-span returns power (dBm) versus time (s).
pub fn analyzer_sweep(record: &PhotocurrentRecord, settings: &AnalyzerSettings) -> Result<SpectrumTrace> {
    settings.validate()?;
    let fs = record.sample_rate_hz;
    let nyquist = fs / 2.0;
    let kernel = rbw_kernel(fs, settings.rbw_hz);
    let half = kernel.len() / 2;
    let stride = (kernel.len() / 16).max(1);
    let series = &record.balanced;

    match &settings.mode {
        SweepMode::Swept {
            start_hz,
            stop_hz,
            sweep_time_s,
            points,
        } => {
            if *stop_hz > nyquist {
                return Err(SimError::SpanOutsideNyquist {
                    span_hz: *stop_hz,
                    nyquist_hz: nyquist,
                });
            }
            let needed = (sweep_time_s * fs).round() as usize;
            if needed > series.len() {
                return Err(SimError::config(format!(
                    "record shorter than sweep: {} samples of {} needed",
                    series.len(),
                    needed
                )));
            }
            let seg_len = needed / points;
            if seg_len < kernel.len() + stride {
                return Err(SimError::config(
                    "sweep time too short for the resolution bandwidth",
                ));
            }

            let freqs: Vec<f64> = (0..*points)
                .map(|i| start_hz + (stop_hz - start_hz) * i as f64 / (*points as f64 - 1.0))
                .collect();

            // Gather video power samples across the whole sweep, remember
            // which bin each belongs to, filter once, then average per bin.
            let mut video = Vec::new();
            let mut bin_of = Vec::new();
            for (bin, f) in freqs.iter().enumerate() {
                let powers =
                    segment_powers(series, fs, bin * seg_len, seg_len, *f, &kernel, stride);
                bin_of.extend(std::iter::repeat(bin).take(powers.len()));
                video.extend(powers);
            }
            video_filter(&mut video, stride as f64 / fs, settings.vbw_hz);

            let mut sums = vec![0.0f64; *points];
            let mut counts = vec![0usize; *points];
            for (v, b) in video.iter().zip(&bin_of) {
                sums[*b] += v;
                counts[*b] += 1;
            }
            let values: Vec<f64> = sums
                .iter()
                .zip(&counts)
                .map(|(s, c)| mw_to_dbm(s / (*c).max(1) as f64))
                .collect();

            let trace = SpectrumTrace::new(freqs, values, "frequency_hz", "power_dbm")?;
            Ok(attach_settings(trace, settings))
        }
        SweepMode::ZeroSpan {
            center_hz,
            duration_s,
        } => {
            if *center_hz > nyquist {
                return Err(SimError::SpanOutsideNyquist {
                    span_hz: *center_hz,
                    nyquist_hz: nyquist,
                });
            }
            let needed = ((duration_s * fs).round() as usize).min(series.len());
            if needed < kernel.len() + 2 * stride {
                return Err(SimError::config(
                    "zero-span record too short for the resolution bandwidth",
                ));
            }
            let mut powers =
                segment_powers(series, fs, 0, needed, *center_hz, &kernel, stride);
            video_filter(&mut powers, stride as f64 / fs, settings.vbw_hz);
            let times: Vec<f64> = (0..powers.len())
                .map(|i| (half + i * stride) as f64 / fs)
                .collect();
            let values: Vec<f64> = powers.iter().map(|p| mw_to_dbm(*p)).collect();
            let trace = SpectrumTrace::new(times, values, "time_s", "power_dbm")?;
            Ok(attach_settings(trace, settings))
        }
    }
}

fn attach_settings(trace: SpectrumTrace, settings: &AnalyzerSettings) -> SpectrumTrace {
    let mut t = trace
        .with_meta("rbw_hz", settings.rbw_hz)
        .with_meta("vbw_hz", settings.vbw_hz);
    match &settings.mode {
        SweepMode::Swept {
            start_hz,
            stop_hz,
            sweep_time_s,
            points,
        } => {
            t = t
                .with_meta("mode", "swept")
                .with_meta("span_start_hz", start_hz)
                .with_meta("span_stop_hz", stop_hz)
                .with_meta("sweep_time_s", sweep_time_s)
                .with_meta("points", points);
        }
        SweepMode::ZeroSpan {
            center_hz,
            duration_s,
        } => {
            t = t
                .with_meta("mode", "zero_span")
                .with_meta("center_hz", center_hz)
                .with_meta("duration_s", duration_s);
        }
    }
    t
}

/// Mean linear floor (dBm) over bins at least `guard_hz` away from
/// `exclude_hz`. Pass `exclude_hz = None` to average the whole trace.
pub fn floor_dbm(trace: &SpectrumTrace, exclude_hz: Option<f64>, guard_hz: f64) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (f, v) in trace.axis.iter().zip(&trace.values) {
        if let Some(ex) = exclude_hz {
            if (f - ex).abs() < guard_hz {
                continue;
            }
        }
        sum += 10f64.powf(v / 10.0);
        count += 1;
    }
    mw_to_dbm(sum / count.max(1) as f64)
}

/// Peak bin (frequency, dBm) within an optional window.
pub fn peak_bin(trace: &SpectrumTrace, window: Option<(f64, f64)>) -> (f64, f64) {
    let idx = trace.argmax(window).expect("non-empty trace");
    (trace.axis[idx], trace.values[idx])
}

/// Floor-subtracted SNR estimate (dB) of a tone expected at `signal_hz`:
/// (peak − floor)/floor in linear power, with the floor taken from bins
/// more than `guard_hz` away from the tone.
pub fn estimate_snr_db(trace: &SpectrumTrace, signal_hz: f64, guard_hz: f64) -> f64 {
    let (_, peak) = peak_bin(trace, Some((signal_hz - guard_hz, signal_hz + guard_hz)));
    let floor = floor_dbm(trace, Some(signal_hz), guard_hz * 2.0);
    let peak_mw = 10f64.powf(peak / 10.0);
    let floor_mw = 10f64.powf(floor / 10.0);
    let sig = (peak_mw - floor_mw).max(f64::MIN_POSITIVE);
    10.0 * (sig / floor_mw).log10()
}
