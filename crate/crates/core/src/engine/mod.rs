//! Finite-time quantum Otto engine on a single qubit.
//!
//! The working medium is tracked through its Bloch vector. Isochores relax it
//! towards the bath's Gibbs state; the unitary strokes ramp the longitudinal
//! field between `ω_h` and `ω_c` under a transverse `sin(πs)` envelope, which
//! generates coherence (quantum friction).

mod bloch;
pub mod io;
mod noise;
mod params;
mod trajectory;

pub use bloch::{
    dissipative_step, internal_energy, ramp_fields, unitary_step, z_eq, BlochState, RampDirection,
};
pub use noise::{
    jittered_duration, ou_step, sample_stroke_durations, Channels, NoiseModel, NoiseSpec, OuState,
    COMBINED_MIX, DURATION_FLOOR, MIN_EXPONENT, OU_DIFFUSION_GAIN,
};
pub use params::{EngineParams, StrokeDurations};
pub use trajectory::{run_trajectory, work_stats, Sample, Trajectory};
