//! Materials and their stimulated Brillouin response.
//!
//! A material is a set of acoustic resonances plus a central Rayleigh
//! feature. At pump–probe detuning Δ the probe sees Lorentzian gain at
//! +Ω (Stokes side), the mirror-image loss at −Ω, and an absorptive dip
//! centered on Δ = 0:
//!
//! ```text
//! response(Δ) = Σ_m w_m [ Σ_k g_mk·L(Δ−Ω_mk) − Σ_k g_mk·L(Δ+Ω_mk) − a_m·L_R(Δ) ]
//! L(x) = (Γ/2)² / (x² + (Γ/2)²)
//! ```
//!
//! Gain strengths are relative: water is the unit (g = 1) and every other
//! material is expressed against it. Absolute electrical scale comes from
//! the detection-chain calibration, not from here.

use std::collections::BTreeMap;

use crate::error::{Result, SimError};

/// One acoustic resonance: shift Ω (Hz), FWHM linewidth Γ (Hz), relative
/// peak gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrillouinResonance {
    pub shift_hz: f64,
    pub linewidth_hz: f64,
    pub gain_strength: f64,
}

impl BrillouinResonance {
    pub fn new(shift_hz: f64, linewidth_hz: f64, gain_strength: f64) -> Result<Self> {
        if !(shift_hz.is_finite() && shift_hz > 0.0) {
            return Err(SimError::config("resonance shift must be > 0"));
        }
        if !(linewidth_hz.is_finite() && linewidth_hz > 0.0) {
            return Err(SimError::config("resonance linewidth must be > 0"));
        }
        if linewidth_hz >= shift_hz {
            return Err(SimError::config(format!(
                "linewidth {linewidth_hz} Hz must be below shift {shift_hz} Hz"
            )));
        }
        if !(gain_strength.is_finite() && gain_strength >= 0.0) {
            return Err(SimError::config("gain strength must be >= 0"));
        }
        Ok(Self {
            shift_hz,
            linewidth_hz,
            gain_strength,
        })
    }
}

/// A named material: ordered resonances (strictly increasing shifts) plus
/// the zero-detuning Rayleigh feature.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    pub name: String,
    pub resonances: Vec<BrillouinResonance>,
    pub rayleigh_strength: f64,
    pub rayleigh_width_hz: f64,
}

impl MaterialSpec {
    pub fn new(
        name: impl Into<String>,
        resonances: Vec<BrillouinResonance>,
        rayleigh_strength: f64,
        rayleigh_width_hz: f64,
    ) -> Result<Self> {
        let name = name.into();
        if resonances.is_empty() {
            return Err(SimError::config(format!(
                "material {name:?} needs at least one resonance"
            )));
        }
        for pair in resonances.windows(2) {
            if pair[1].shift_hz <= pair[0].shift_hz {
                return Err(SimError::config(format!(
                    "material {name:?}: resonance shifts must be strictly increasing"
                )));
            }
        }
        if !(rayleigh_strength.is_finite() && rayleigh_strength >= 0.0) {
            return Err(SimError::config("rayleigh strength must be >= 0"));
        }
        if !(rayleigh_width_hz.is_finite() && rayleigh_width_hz > 0.0) {
            return Err(SimError::config("rayleigh width must be > 0"));
        }
        Ok(Self {
            name,
            resonances,
            rayleigh_strength,
            rayleigh_width_hz,
        })
    }

    /// Response of this material alone at detuning Δ (Hz).
    pub fn response(&self, delta_hz: f64) -> f64 {
        let mut r = 0.0;
        for res in &self.resonances {
            r += res.gain_strength * lorentzian(delta_hz, res.shift_hz, res.linewidth_hz);
            r -= res.gain_strength * lorentzian(delta_hz, -res.shift_hz, res.linewidth_hz);
        }
        r - self.rayleigh_strength * lorentzian(delta_hz, 0.0, self.rayleigh_width_hz)
    }
}

/// Immutable lookup of materials by name. Evaluation is pure, so a shared
/// registry can be read from any number of workers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaterialRegistry {
    materials: BTreeMap<String, MaterialSpec>,
}

impl MaterialRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, spec: MaterialSpec) {
        self.materials.insert(spec.name.clone(), spec);
    }

    pub fn get(&self, name: &str) -> Result<&MaterialSpec> {
        self.materials
            .get(name)
            .ok_or_else(|| SimError::UnknownMaterial(name.to_string()))
    }

    pub fn get_mut(&mut self, name: &str) -> Result<&mut MaterialSpec> {
        self.materials
            .get_mut(name)
            .ok_or_else(|| SimError::UnknownMaterial(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.materials.keys().map(|s| s.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &MaterialSpec> {
        self.materials.values()
    }
}

/// Weighted material composition at one point in space. Weights lie in
/// [0, 1] and sum to at most 1; the remainder is vacuum (no response).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mixture {
    weights: BTreeMap<String, f64>,
}

impl Mixture {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pure(name: impl Into<String>) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(name.into(), 1.0);
        Self { weights }
    }

    pub fn from_weights(weights: BTreeMap<String, f64>) -> Result<Self> {
        let mut sum = 0.0;
        for (name, w) in &weights {
            if !(w.is_finite() && (0.0..=1.0).contains(w)) {
                return Err(SimError::config(format!(
                    "mixture weight for {name:?} must be in [0, 1], got {w}"
                )));
            }
            sum += w;
        }
        // Reject rather than renormalize: an over-full mixture is a config
        // mistake we do not want to mask.
        if sum > 1.0 + 1e-9 {
            return Err(SimError::config(format!(
                "mixture weights sum to {sum}, must be <= 1"
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    pub fn is_empty(&self) -> bool {
        self.weights.values().all(|w| *w == 0.0)
    }

    /// Convex combination of mixtures. Coefficients must sum to <= 1 for
    /// the result to stay a valid mixture; callers pass normalized weights.
    pub fn blend(parts: &[(f64, &Mixture)]) -> Mixture {
        let mut weights: BTreeMap<String, f64> = BTreeMap::new();
        for (coeff, mix) in parts {
            for (name, w) in &mix.weights {
                *weights.entry(name.clone()).or_insert(0.0) += coeff * w;
            }
        }
        Mixture { weights }
    }

    /// Largest single-material weight, for nearest-material queries.
    pub fn dominant(&self) -> Option<&str> {
        self.weights
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(name, _)| name.as_str())
    }
}

/// Normalized Lorentzian lineshape: 1 on resonance, 1/2 at Δ = Ω ± Γ/2.
pub fn lorentzian(delta_hz: f64, shift_hz: f64, linewidth_hz: f64) -> f64 {
    debug_assert!(linewidth_hz > 0.0);
    debug_assert!(delta_hz.is_finite() && shift_hz.is_finite());
    let hw = linewidth_hz / 2.0;
    let d = delta_hz - shift_hz;
    hw * hw / (d * d + hw * hw)
}

/// Signed gain of a mixture at detuning Δ (Hz): positive at Stokes
/// resonances, negative at anti-Stokes, dip at Δ = 0.
pub fn material_response(registry: &MaterialRegistry, mixture: &Mixture, delta_hz: f64) -> Result<f64> {
    let mut total = 0.0;
    for (name, weight) in mixture.weights() {
        if *weight == 0.0 {
            // Still require the name to resolve so typos surface.
            registry.get(name)?;
            continue;
        }
        total += weight * registry.get(name)?.response(delta_hz);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn water() -> MaterialSpec {
        MaterialSpec::new(
            "water",
            vec![BrillouinResonance::new(5.03e9, 287e6, 1.0).unwrap()],
            0.3,
            300e6,
        )
        .unwrap()
    }

    fn registry() -> MaterialRegistry {
        let mut reg = MaterialRegistry::new();
        reg.insert(water());
        reg
    }

    #[test]
    fn lorentzian_on_resonance_is_one() {
        assert_relative_eq!(lorentzian(5.03e9, 5.03e9, 287e6), 1.0);
    }

    #[test]
    fn lorentzian_half_width_at_half_maximum() {
        assert_relative_eq!(lorentzian(5.03e9 + 143.5e6, 5.03e9, 287e6), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn lorentzian_far_tail_matches_closed_form() {
        // Frozen from a 30-digit evaluation of (Γ/2)²/((Δ−Ω)²+(Γ/2)²) at
        // Δ = 6.7 GHz, Ω = 5.03 GHz, Γ = 287 MHz, cross-checked against the
        // algebraically equivalent route 1/(1+((Δ−Ω)/(Γ/2))²).
        let expected = 7.32952724820650e-3;
        let direct = lorentzian(6.7e9, 5.03e9, 287e6);
        assert_relative_eq!(direct, expected, max_relative = 1e-12);
        let ratio = (6.7e9 - 5.03e9) / (287e6 / 2.0);
        let other_route = 1.0 / (1.0 + ratio * ratio);
        assert_relative_eq!(direct, other_route, max_relative = 1e-12);
    }

    #[test]
    fn water_peak_and_antisymmetric_dip() {
        let reg = registry();
        let mix = Mixture::pure("water");
        let peak = material_response(&reg, &mix, 5.03e9).unwrap();
        let dip = material_response(&reg, &mix, -5.03e9).unwrap();
        // The Rayleigh tail and the far loss lobe slightly offset the exact
        // +1 peak; peak/dip remain exact mirror images of each other.
        assert!(peak > 0.99 && peak < 1.0);
        assert_relative_eq!(peak, -dip, epsilon = 1e-12);
    }

    #[test]
    fn empty_mixture_is_zero() {
        let reg = registry();
        for delta in [-6e9, 0.0, 5.03e9] {
            assert_eq!(material_response(&reg, &Mixture::empty(), delta).unwrap(), 0.0);
        }
    }

    #[test]
    fn unknown_material_is_an_error() {
        let reg = registry();
        let mix = Mixture::pure("adamantium");
        assert!(matches!(
            material_response(&reg, &mix, 0.0),
            Err(SimError::UnknownMaterial(_))
        ));
    }

    #[test]
    fn two_resonance_material_sums_both() {
        let cell = MaterialSpec::new(
            "cell",
            vec![
                BrillouinResonance::new(5.03e9, 300e6, 1.0).unwrap(),
                BrillouinResonance::new(5.6e9, 300e6, 0.45).unwrap(),
            ],
            0.0,
            300e6,
        )
        .unwrap();
        let lone = MaterialSpec::new(
            "lone",
            vec![BrillouinResonance::new(5.03e9, 300e6, 1.0).unwrap()],
            0.0,
            300e6,
        )
        .unwrap();
        let at_secondary = cell.response(5.6e9);
        let lone_there = lone.response(5.6e9);
        assert!(at_secondary > lone_there + 0.4);
    }

    #[test]
    fn shifts_must_increase() {
        let res = vec![
            BrillouinResonance::new(5.6e9, 300e6, 1.0).unwrap(),
            BrillouinResonance::new(5.03e9, 300e6, 0.5).unwrap(),
        ];
        assert!(MaterialSpec::new("bad", res, 0.0, 300e6).is_err());
    }

    #[test]
    fn overfull_mixture_rejected() {
        let mut w = BTreeMap::new();
        w.insert("water".to_string(), 0.7);
        w.insert("hydrogel".to_string(), 0.5);
        assert!(Mixture::from_weights(w).is_err());
    }

    #[test]
    fn linewidth_must_be_resolved() {
        assert!(BrillouinResonance::new(5.03e9, 6e9, 1.0).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn no_rayleigh_registry() -> MaterialRegistry {
            let mut reg = MaterialRegistry::new();
            reg.insert(
                MaterialSpec::new(
                    "water",
                    vec![BrillouinResonance::new(5.03e9, 287e6, 1.0).unwrap()],
                    0.0,
                    300e6,
                )
                .unwrap(),
            );
            reg.insert(
                MaterialSpec::new(
                    "lipid",
                    vec![BrillouinResonance::new(12.0e9, 300e6, 0.63).unwrap()],
                    0.0,
                    300e6,
                )
                .unwrap(),
            );
            reg
        }

        proptest! {
            #[test]
            fn antisymmetry_without_rayleigh(
                delta in -2.0e10f64..2.0e10,
                w1 in 0.0f64..0.5,
                w2 in 0.0f64..0.5,
            ) {
                let reg = no_rayleigh_registry();
                let mut weights = BTreeMap::new();
                weights.insert("water".to_string(), w1);
                weights.insert("lipid".to_string(), w2);
                let mix = Mixture::from_weights(weights).unwrap();
                let plus = material_response(&reg, &mix, delta).unwrap();
                let minus = material_response(&reg, &mix, -delta).unwrap();
                prop_assert!((plus + minus).abs() <= 1e-12 * (1.0 + plus.abs().max(minus.abs())));
            }

            #[test]
            fn linear_in_weights(alpha in 0.0f64..1.0, delta in -1.5e10f64..1.5e10) {
                let reg = no_rayleigh_registry();
                let full = Mixture::pure("water");
                let mut weights = BTreeMap::new();
                weights.insert("water".to_string(), alpha);
                let scaled = Mixture::from_weights(weights).unwrap();
                let a = material_response(&reg, &scaled, delta).unwrap();
                let b = alpha * material_response(&reg, &full, delta).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn peak_dominance_on_grid() {
            let reg = no_rayleigh_registry();
            let mix = Mixture::pure("water");
            let step = 40e6;
            let mut best = (0.0, f64::MIN);
            let mut delta = step;
            while delta <= 7e9 {
                let v = material_response(&reg, &mix, delta).unwrap();
                if v > best.1 {
                    best = (delta, v);
                }
                delta += step;
            }
            assert!((best.0 - 5.03e9).abs() <= step / 2.0 + 1.0);
        }
    }
}
