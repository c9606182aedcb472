use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Physical and protocol constants of the Otto cycle.
///
/// Units follow `k_B = ħ = 1`: frequencies and temperatures share one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineParams {
    /// Longitudinal field during the hot isochore.
    pub omega_h: f64,
    /// Longitudinal field during the cold isochore.
    pub omega_c: f64,
    pub t_h: f64,
    pub t_c: f64,
    /// Relaxation rate Γ of the isochores.
    pub gamma: f64,
    /// Peak of the transverse envelope applied during the unitary strokes.
    pub omega_x_max: f64,
    /// Hot isochore duration.
    pub tau_h: f64,
    /// Cold isochore duration.
    pub tau_c: f64,
    /// Expansion stroke duration.
    pub tau_1: f64,
    /// Compression stroke duration.
    pub tau_3: f64,
    /// Euler steps per stroke, independent of the stroke's duration.
    pub steps_per_stroke: usize,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self {
            omega_h: 2.0,
            omega_c: 1.0,
            t_h: 0.8,
            t_c: 0.25,
            gamma: 0.6,
            omega_x_max: 1.0,
            tau_h: 0.7,
            tau_c: 0.7,
            tau_1: 0.6,
            tau_3: 0.6,
            steps_per_stroke: 150,
        }
    }
}

impl EngineParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_h,
            self.omega_c,
            self.t_h,
            self.t_c,
            self.gamma,
            self.omega_x_max,
            self.tau_h,
            self.tau_c,
            self.tau_1,
            self.tau_3,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return domain("engine parameters must be finite");
        }
        if !(self.omega_h > self.omega_c && self.omega_c > 0.0) {
            return domain(format!(
                "need omega_h > omega_c > 0, got omega_h={} omega_c={}",
                self.omega_h, self.omega_c
            ));
        }
        if !(self.t_h > self.t_c && self.t_c > 0.0) {
            return domain(format!(
                "need T_h > T_c > 0, got T_h={} T_c={}",
                self.t_h, self.t_c
            ));
        }
        if self.gamma <= 0.0 {
            return domain(format!(
                "relaxation rate must be positive, got {}",
                self.gamma
            ));
        }
        if self.omega_x_max < 0.0 {
            return domain("omega_x_max must be nonnegative");
        }
        if [self.tau_h, self.tau_c, self.tau_1, self.tau_3]
            .iter()
            .any(|&t| t <= 0.0)
        {
            return domain("stroke durations must be positive");
        }
        if self.steps_per_stroke == 0 {
            return domain("steps_per_stroke must be at least 1");
        }
        Ok(())
    }

    /// Transverse (dephasing) rate Γ₂ = Γ/2.
    pub fn dephasing_rate(&self) -> f64 {
        self.gamma / 2.0
    }

    /// Longitudinal rate Γ₁ = Γ.
    pub fn longitudinal_rate(&self) -> f64 {
        self.gamma
    }

    /// Nominal durations in protocol order: hot, expansion, cold, compression.
    pub fn nominal_durations(&self) -> StrokeDurations {
        StrokeDurations {
            hot: self.tau_h,
            expansion: self.tau_1,
            cold: self.tau_c,
            compression: self.tau_3,
        }
    }

    pub fn cycle_period(&self) -> f64 {
        self.tau_h + self.tau_1 + self.tau_c + self.tau_3
    }
}

/// Realized durations of the four strokes of one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeDurations {
    pub hot: f64,
    pub expansion: f64,
    pub cold: f64,
    pub compression: f64,
}

impl StrokeDurations {
    pub fn total(&self) -> f64 {
        self.hot + self.expansion + self.cold + self.compression
    }
}
