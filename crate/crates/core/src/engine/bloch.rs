//! Bloch-vector dynamics: unitary and dissipative Euler updates, control fields.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::noise::MIN_EXPONENT;
use super::params::EngineParams;
use crate::error::{domain, Result};

/// Pauli expectation values `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of the qubit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Thermal fixed point `-tanh(ω_z / 2T)` of the longitudinal component.
pub fn z_eq(omega_z: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    Ok(-(omega_z / (2.0 * temperature)).tanh())
}

/// Forward-Euler step of the coherent Bloch equations, `r' = r + dt (ω × r)`
/// with `ω = (ω_x, 0, ω_z)`.
pub fn unitary_step(s: BlochState, omega_x: f64, omega_z: f64, dt: f64) -> BlochState {
    BlochState {
        x: s.x - dt * omega_z * s.y,
        y: s.y + dt * (omega_z * s.x - omega_x * s.z),
        z: s.z + dt * omega_x * s.y,
    }
}

/// Forward-Euler step of thermal relaxation with the transverse field off.
///
/// Transverse components decay at `γ/2`, the longitudinal one at `γ` towards
/// [`z_eq`].
pub fn dissipative_step(
    s: BlochState,
    omega_z: f64,
    temperature: f64,
    gamma: f64,
    dt: f64,
) -> Result<BlochState> {
    let target = z_eq(omega_z, temperature)?;
    Ok(dissipative_step_to(s, omega_z, target, gamma, dt))
}

#[inline]
pub(crate) fn dissipative_step_to(
    s: BlochState,
    omega_z: f64,
    z_target: f64,
    gamma: f64,
    dt: f64,
) -> BlochState {
    let half = 0.5 * gamma;
    BlochState {
        x: s.x + dt * (-half * s.x - omega_z * s.y),
        y: s.y + dt * (omega_z * s.x - half * s.y),
        z: s.z - dt * gamma * (s.z - z_target),
    }
}

/// `E = Tr[ρH] = ½(ω_z z + ω_x x)`.
pub fn internal_energy(s: BlochState, omega_x: f64, omega_z: f64) -> f64 {
    0.5 * (omega_z * s.z + omega_x * s.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RampDirection {
    /// ω_h → ω_c
    Expand,
    /// ω_c → ω_h
    Compress,
}

/// Longitudinal and transverse control at normalized stroke time `s`.
///
/// Returns `(ω_z, ω_x)`. The longitudinal ramp is `start + (end - start) s^α`
/// plus a ripple `δ sin(kπs)`; the transverse envelope is `ω_x^max sin(πs)`.
pub fn ramp_fields(
    s: f64,
    direction: RampDirection,
    alpha: f64,
    ripple_delta: f64,
    ripple_k: u32,
    p: &EngineParams,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return domain(format!(
            "normalized stroke time must lie in [0, 1], got {s}"
        ));
    }
    if !(alpha >= MIN_EXPONENT) {
        return domain(format!(
            "sweep exponent must be >= {MIN_EXPONENT}, got {alpha}"
        ));
    }
    Ok(ramp_fields_unchecked(
        s,
        direction,
        alpha,
        ripple_delta,
        ripple_k,
        p,
    ))
}

#[inline]
pub(crate) fn ramp_fields_unchecked(
    s: f64,
    direction: RampDirection,
    alpha: f64,
    ripple_delta: f64,
    ripple_k: u32,
    p: &EngineParams,
) -> (f64, f64) {
    let (start, end) = match direction {
        RampDirection::Expand => (p.omega_h, p.omega_c),
        RampDirection::Compress => (p.omega_c, p.omega_h),
    };
    let progress = if alpha == 1.0 { s } else { s.powf(alpha) };
    let mut omega_z = start + (end - start) * progress;
    if ripple_delta != 0.0 {
        omega_z += ripple_delta * (ripple_k as f64 * PI * s).sin();
    }
    let omega_x = p.omega_x_max * (PI * s).sin();
    (omega_z, omega_x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn z_eq_values() {
        assert_eq!(z_eq(0.0, 0.8).unwrap(), 0.0);
        // tanh(1.25) and tanh(2.0) to 12 digits
        assert!(close(z_eq(2.0, 0.8).unwrap(), -0.848283639958, 1e-11));
        assert!(close(z_eq(1.0, 0.25).unwrap(), -0.964027580076, 1e-11));
        assert!(z_eq(1.0, 0.0).is_err());
        assert!(z_eq(1.0, -1.0).is_err());
    }

    #[test]
    fn unitary_examples() {
        let s = unitary_step(BlochState::new(1.0, 0.0, 0.0), 0.0, 1.0, 0.01);
        assert_eq!(s, BlochState::new(1.0, 0.01, 0.0));
        let s = unitary_step(BlochState::new(0.0, 0.0, 1.0), 0.0, 5.0, 0.01);
        assert_eq!(s, BlochState::new(0.0, 0.0, 1.0));
        let s = unitary_step(BlochState::new(0.0, 1.0, 0.0), 1.0, 0.0, 0.1);
        assert!(close(s.x, 0.0, 1e-15) && close(s.y, 1.0, 1e-15) && close(s.z, 0.1, 1e-15));
    }

    #[test]
    fn dissipative_examples() {
        let s = dissipative_step(BlochState::default(), 2.0, 0.8, 0.6, 0.1).unwrap();
        assert_eq!((s.x, s.y), (0.0, 0.0));
        assert!(close(s.z, -0.0508970183975, 1e-12));

        let zeq = z_eq(2.0, 0.8).unwrap();
        let fixed = BlochState::new(0.0, 0.0, zeq);
        assert_eq!(dissipative_step(fixed, 2.0, 0.8, 0.6, 0.1).unwrap(), fixed);

        let s = dissipative_step(BlochState::new(1.0, 0.0, 0.0), 0.0, 0.8, 0.6, 0.1).unwrap();
        assert!(close(s.x, 0.97, 1e-15) && s.y == 0.0 && s.z == 0.0);

        assert!(dissipative_step(fixed, 2.0, 0.0, 0.6, 0.1).is_err());
    }

    #[test]
    fn ramp_examples() {
        let p = EngineParams::default();
        let (wz, wx) = ramp_fields(0.5, RampDirection::Expand, 1.0, 0.0, 10, &p).unwrap();
        assert!(close(wz, 1.5, 1e-15));
        assert!(close(wx, 1.0, 1e-15));
        let (wz, _) = ramp_fields(0.5, RampDirection::Expand, 2.0, 0.0, 10, &p).unwrap();
        assert!(close(wz, 1.75, 1e-15));
        let (wz, _) = ramp_fields(0.5, RampDirection::Expand, 1.0, 0.3, 10, &p).unwrap();
        assert!(close(wz, 1.5, 1e-14));
        let (wz, wx) = ramp_fields(0.0, RampDirection::Compress, 1.0, 0.0, 2, &p).unwrap();
        assert_eq!((wz, wx), (1.0, 0.0));
        let (wz, _) = ramp_fields(1.0, RampDirection::Compress, 1.0, 0.0, 2, &p).unwrap();
        assert_eq!(wz, 2.0);
        assert!(ramp_fields(1.1, RampDirection::Expand, 1.0, 0.0, 10, &p).is_err());
        assert!(ramp_fields(-0.1, RampDirection::Expand, 1.0, 0.0, 10, &p).is_err());
        assert!(ramp_fields(0.5, RampDirection::Expand, 0.001, 0.0, 10, &p).is_err());
    }

    #[test]
    fn energy_examples() {
        assert_eq!(
            internal_energy(BlochState::new(0.0, 0.0, -1.0), 0.0, 2.0),
            -1.0
        );
        assert_eq!(internal_energy(BlochState::default(), 0.7, 1.3), 0.0);
        assert_eq!(
            internal_energy(BlochState::new(1.0, 0.0, 0.0), 1.0, 0.0),
            0.5
        );
    }

    #[test]
    fn relaxation_converges_monotonically() {
        for &(wz, t) in &[(2.0, 0.8), (1.0, 0.25), (0.3, 2.0), (-1.5, 0.5)] {
            let target = z_eq(wz, t).unwrap();
            let mut s = BlochState::new(0.2, -0.1, 0.9);
            let mut gap = (s.z - target).abs();
            for _ in 0..2000 {
                s = dissipative_step(s, wz, t, 0.6, 0.05).unwrap();
                let g = (s.z - target).abs();
                assert!(g <= gap);
                gap = g;
            }
            assert!(gap < 1e-9, "gap {gap}");
        }
    }
}
