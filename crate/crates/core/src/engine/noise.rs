//! Control-degradation models and their random draws.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::params::{EngineParams, StrokeDurations};
use crate::error::{domain, Error, Result};

/// Lower bound on any sweep exponent.
pub const MIN_EXPONENT: f64 = 0.01;

/// Fraction of the nominal duration a jittered stroke can shrink to.
pub const DURATION_FLOOR: f64 = 0.05;

/// Channel intensities of the combined model per unit master intensity:
/// (timing jitter, ramp distortion, OU sweep, ripple).
pub const COMBINED_MIX: [f64; 4] = [0.25, 0.5, 0.3, 0.4];

/// Ratio between the effective OU diffusion and the intrinsic amplitude.
pub const OU_DIFFUSION_GAIN: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    None,
    #[serde(rename = "jitter")]
    TimingJitter,
    #[serde(rename = "ramp")]
    RampDistortion,
    #[serde(rename = "ou")]
    OuSweep,
    Ripple,
    Combined,
}

impl NoiseModel {
    pub const DEGRADATIONS: [NoiseModel; 5] = [
        NoiseModel::TimingJitter,
        NoiseModel::RampDistortion,
        NoiseModel::OuSweep,
        NoiseModel::Ripple,
        NoiseModel::Combined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseModel::None => "none",
            NoiseModel::TimingJitter => "jitter",
            NoiseModel::RampDistortion => "ramp",
            NoiseModel::OuSweep => "ou",
            NoiseModel::Ripple => "ripple",
            NoiseModel::Combined => "combined",
        }
    }

    /// Upper end of the sampled intensity range used for classification runs.
    pub fn default_max_amplitude(self) -> f64 {
        match self {
            NoiseModel::None => 0.0,
            NoiseModel::TimingJitter => 0.25,
            NoiseModel::RampDistortion => 0.5,
            NoiseModel::OuSweep => 0.3,
            NoiseModel::Ripple => 0.4,
            NoiseModel::Combined => 1.0,
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => NoiseModel::None,
            "jitter" => NoiseModel::TimingJitter,
            "ramp" => NoiseModel::RampDistortion,
            "ou" => NoiseModel::OuSweep,
            "ripple" => NoiseModel::Ripple,
            "combined" => NoiseModel::Combined,
            other => return domain(format!("unknown noise model `{other}`")),
        })
    }
}

/// A degradation regime together with its intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    /// σ_τ, σ_α, σ_OU, σ_ripple, or the combined master intensity λ.
    pub amplitude: f64,
    pub ou_theta: f64,
    pub ou_mu: f64,
    pub ripple_k_expand: u32,
    pub ripple_k_compress: u32,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            model: NoiseModel::None,
            amplitude: 0.0,
            ou_theta: 50.0,
            ou_mu: 1.0,
            ripple_k_expand: 10,
            ripple_k_compress: 2,
        }
    }

    pub fn new(model: NoiseModel, amplitude: f64) -> Result<Self> {
        let spec = Self {
            model,
            amplitude,
            ..Self::none()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return domain(format!(
                "noise amplitude must be finite and >= 0, got {}",
                self.amplitude
            ));
        }
        if self.model == NoiseModel::None && self.amplitude != 0.0 {
            return domain("model `none` requires amplitude 0");
        }
        for k in [self.ripple_k_expand, self.ripple_k_compress] {
            if k < 2 || k % 2 != 0 {
                return domain(format!(
                    "ripple wave number must be an even integer >= 2, got {k}"
                ));
            }
        }
        if self.ou_theta < 0.0 || !self.ou_theta.is_finite() {
            return domain("OU mean-reversion rate must be >= 0");
        }
        if self.ou_mu < MIN_EXPONENT {
            return domain(format!("OU target exponent must be >= {MIN_EXPONENT}"));
        }
        Ok(())
    }

    /// Splits the spec into per-channel intensities.
    pub fn channels(&self) -> Channels {
        let a = self.amplitude;
        match self.model {
            NoiseModel::None => Channels::default(),
            NoiseModel::TimingJitter => Channels {
                jitter: a,
                ..Default::default()
            },
            NoiseModel::RampDistortion => Channels {
                ramp: a,
                ..Default::default()
            },
            NoiseModel::OuSweep => Channels {
                ou: a,
                ..Default::default()
            },
            NoiseModel::Ripple => Channels {
                ripple: a,
                ..Default::default()
            },
            NoiseModel::Combined => Channels {
                jitter: a * COMBINED_MIX[0],
                ramp: a * COMBINED_MIX[1],
                ou: a * COMBINED_MIX[2],
                ripple: a * COMBINED_MIX[3],
            },
        }
    }
}

/// Per-channel noise intensities; zero disables a channel and its draws.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Channels {
    pub jitter: f64,
    pub ramp: f64,
    pub ou: f64,
    pub ripple: f64,
}

/// Current exponent of the OU-driven sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuState {
    pub alpha: f64,
}

impl OuState {
    pub fn new(alpha: f64) -> Self {
        Self {
            alpha: alpha.max(MIN_EXPONENT),
        }
    }
}

/// One Euler–Maruyama step of the sweep-exponent OU process, clamped at [`MIN_EXPONENT`].
pub fn ou_step(
    state: OuState,
    ds: f64,
    sigma_ou: f64,
    theta: f64,
    mu: f64,
    gaussian: f64,
) -> OuState {
    let sigma_eff = OU_DIFFUSION_GAIN * sigma_ou;
    let alpha = state.alpha + theta * (mu - state.alpha) * ds + sigma_eff * ds.sqrt() * gaussian;
    OuState {
        alpha: alpha.max(MIN_EXPONENT),
    }
}

/// Scales a nominal duration by `1 + delta`, flooring at [`DURATION_FLOOR`] of nominal.
pub fn jittered_duration(nominal: f64, delta: f64) -> f64 {
    (nominal * (1.0 + delta)).max(DURATION_FLOOR * nominal)
}

/// Draws the four stroke durations of one cycle under Gaussian timing jitter.
///
/// With `sigma_tau == 0` no random numbers are consumed.
pub fn sample_stroke_durations<R: Rng + ?Sized>(
    p: &EngineParams,
    sigma_tau: f64,
    rng: &mut R,
) -> StrokeDurations {
    let nominal = p.nominal_durations();
    if sigma_tau == 0.0 {
        return nominal;
    }
    let mut draw = |tau: f64| {
        let g: f64 = rng.sample(StandardNormal);
        jittered_duration(tau, sigma_tau * g)
    };
    StrokeDurations {
        hot: draw(nominal.hot),
        expansion: draw(nominal.expansion),
        cold: draw(nominal.cold),
        compression: draw(nominal.compression),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ou_zero_noise_at_fixed_point() {
        let s = ou_step(OuState::new(1.0), 0.01, 0.0, 50.0, 1.0, 0.3);
        assert_eq!(s.alpha, 1.0);
    }

    #[test]
    fn ou_mean_reversion() {
        let s = ou_step(OuState::new(0.5), 0.01, 0.0, 50.0, 1.0, 0.0);
        assert!((s.alpha - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ou_clamps_at_lower_bound() {
        let s = ou_step(OuState::new(0.02), 0.01, 0.5, 50.0, 1.0, -10.0);
        assert_eq!(s.alpha, 0.01);
    }

    #[test]
    fn zero_jitter_gives_nominal_durations() {
        let p = EngineParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            sample_stroke_durations(&p, 0.0, &mut rng),
            p.nominal_durations()
        );
    }

    #[test]
    fn jitter_is_reproducible() {
        let p = EngineParams::default();
        let a = sample_stroke_durations(&p, 0.25, &mut ChaCha8Rng::seed_from_u64(9));
        let b = sample_stroke_durations(&p, 0.25, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_ne!(a, p.nominal_durations());
    }

    #[test]
    fn negative_durations_hit_the_floor() {
        assert_eq!(jittered_duration(0.7, -2.0), 0.05 * 0.7);
        assert_eq!(jittered_duration(0.6, -0.96), 0.05 * 0.6);
        assert_eq!(jittered_duration(0.6, 0.5), 0.6 * 1.5);
    }

    #[test]
    fn spec_validation() {
        assert!(NoiseSpec::new(NoiseModel::None, 0.1).is_err());
        assert!(NoiseSpec::new(NoiseModel::TimingJitter, -0.1).is_err());
        let bad = NoiseSpec {
            ripple_k_expand: 3,
            ..NoiseSpec::none()
        };
        assert!(bad.validate().is_err());
        assert!(NoiseSpec::new(NoiseModel::Ripple, 0.3).is_ok());
    }

    #[test]
    fn combined_channel_mix() {
        let c = NoiseSpec::new(NoiseModel::Combined, 2.0)
            .unwrap()
            .channels();
        assert_eq!(
            c,
            Channels {
                jitter: 0.5,
                ramp: 1.0,
                ou: 0.6,
                ripple: 0.8
            }
        );
    }

    #[test]
    fn model_names_round_trip() {
        for m in NoiseModel::DEGRADATIONS
            .iter()
            .chain([NoiseModel::None].iter())
        {
            assert_eq!(m.name().parse::<NoiseModel>().unwrap(), *m);
            let json = serde_json::to_string(m).unwrap();
            assert_eq!(json, format!("\"{}\"", m.name()));
        }
    }
}
