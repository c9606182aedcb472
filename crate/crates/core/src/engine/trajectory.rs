//! Four-stroke protocol integration and per-cycle thermodynamics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::bloch::{
    dissipative_step_to, internal_energy, ramp_fields_unchecked, unitary_step, z_eq, BlochState,
    RampDirection,
};
use super::noise::{ou_step, sample_stroke_durations, Channels, NoiseSpec, OuState, MIN_EXPONENT};
use super::params::EngineParams;
use crate::error::{domain, Result};

/// One recorded integration step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub omega_x: f64,
    pub omega_z: f64,
}

impl Sample {
    pub fn state(&self) -> BlochState {
        BlochState::new(self.x, self.y, self.z)
    }
}

/// Time-stamped record of one simulated run over its recorded window.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Index into `samples` at which each recorded cycle begins.
    pub cycle_marks: Vec<usize>,
    /// Work `W_n` of each recorded cycle.
    pub cycle_work: Vec<f64>,
    /// State after the last recorded cycle.
    pub final_state: BlochState,
    pub seed: u64,
    pub noise: NoiseSpec,
    pub params: EngineParams,
}

impl Trajectory {
    /// The measured observable `x(t) = ⟨σx⟩`.
    pub fn observable(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.x).collect()
    }

    /// State at the start of each recorded cycle followed by the final state.
    pub fn cycle_boundaries(&self) -> Vec<BlochState> {
        let mut out: Vec<_> = self
            .cycle_marks
            .iter()
            .map(|&i| self.samples[i].state())
            .collect();
        out.push(self.final_state);
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_marks.len()
    }

    /// Recorded-cycle index of every sample.
    pub fn cycle_indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.samples.len());
        for (c, &start) in self.cycle_marks.iter().enumerate() {
            let end = self
                .cycle_marks
                .get(c + 1)
                .copied()
                .unwrap_or(self.samples.len());
            out.extend(std::iter::repeat_n(c, end - start));
        }
        out
    }

    pub fn work_stats(&self) -> Result<(f64, f64)> {
        work_stats(&self.cycle_work)
    }
}

/// Population mean and variance (1/N) of per-cycle work.
pub fn work_stats(works: &[f64]) -> Result<(f64, f64)> {
    if works.is_empty() {
        return domain("work statistics need at least one cycle");
    }
    let n = works.len() as f64;
    let mean = works.iter().sum::<f64>() / n;
    let var = works.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / n;
    Ok((mean, var))
}

/// Per-cycle random draws of the selected degradation channels.
#[derive(Debug, Clone, Copy)]
struct CycleDraws {
    alpha_expand: f64,
    alpha_compress: f64,
    ripple_expand: f64,
    ripple_compress: f64,
}

impl CycleDraws {
    fn sample<R: Rng>(ch: &Channels, rng: &mut R) -> Self {
        let mut exponent = |sigma: f64| {
            if sigma == 0.0 {
                1.0
            } else {
                let g: f64 = rng.sample(StandardNormal);
                (1.0 + sigma * g).max(MIN_EXPONENT)
            }
        };
        let alpha_expand = exponent(ch.ramp);
        let alpha_compress = exponent(ch.ramp);
        let mut ripple = |sigma: f64| {
            if sigma == 0.0 {
                0.0
            } else {
                let g: f64 = rng.sample(StandardNormal);
                sigma * g
            }
        };
        let ripple_expand = ripple(ch.ripple);
        let ripple_compress = ripple(ch.ripple);
        Self {
            alpha_expand,
            alpha_compress,
            ripple_expand,
            ripple_compress,
        }
    }
}

struct Integrator<'a> {
    p: &'a EngineParams,
    noise: &'a NoiseSpec,
    channels: Channels,
    rng: ChaCha8Rng,
    state: BlochState,
    t: f64,
    zeq_hot: f64,
    zeq_cold: f64,
}

impl Integrator<'_> {
    fn isochore(&mut self, duration: f64, hot: bool, out: Option<&mut Vec<Sample>>) {
        let n = self.p.steps_per_stroke;
        let dt = duration / n as f64;
        let (omega_z, target) = if hot {
            (self.p.omega_h, self.zeq_hot)
        } else {
            (self.p.omega_c, self.zeq_cold)
        };
        let mut out = out;
        for _ in 0..n {
            if let Some(buf) = out.as_deref_mut() {
                buf.push(self.sample(0.0, omega_z));
            }
            self.state = dissipative_step_to(self.state, omega_z, target, self.p.gamma, dt);
            self.t += dt;
        }
    }

    /// Integrates one unitary stroke and returns the accumulated work `Σ (E_{k+1} − E_k)`.
    fn unitary(
        &mut self,
        duration: f64,
        direction: RampDirection,
        alpha0: f64,
        ripple: f64,
        out: Option<&mut Vec<Sample>>,
    ) -> f64 {
        let n = self.p.steps_per_stroke;
        let dt = duration / n as f64;
        let ds = 1.0 / n as f64;
        let k = match direction {
            RampDirection::Expand => self.noise.ripple_k_expand,
            RampDirection::Compress => self.noise.ripple_k_compress,
        };
        let ou_active = self.channels.ou > 0.0;
        let mut ou = OuState::new(alpha0);
        let mut fields = ramp_fields_unchecked(0.0, direction, ou.alpha, ripple, k, self.p);
        let mut energy = internal_energy(self.state, fields.1, fields.0);
        let mut work = 0.0;
        let mut out = out;
        for step in 0..n {
            let (omega_z, omega_x) = fields;
            if let Some(buf) = out.as_deref_mut() {
                buf.push(self.sample(omega_x, omega_z));
            }
            self.state = unitary_step(self.state, omega_x, omega_z, dt);
            self.t += dt;
            if ou_active {
                let g: f64 = self.rng.sample(StandardNormal);
                ou = ou_step(ou, ds, self.channels.ou, self.noise.ou_theta, alpha0, g);
            }
            let s_next = if step + 1 == n {
                1.0
            } else {
                (step + 1) as f64 * ds
            };
            fields = ramp_fields_unchecked(s_next, direction, ou.alpha, ripple, k, self.p);
            let next_energy = internal_energy(self.state, fields.1, fields.0);
            work += next_energy - energy;
            energy = next_energy;
        }
        work
    }

    fn sample(&self, omega_x: f64, omega_z: f64) -> Sample {
        Sample {
            t: self.t,
            x: self.state.x,
            y: self.state.y,
            z: self.state.z,
            omega_x,
            omega_z,
        }
    }
}

/// Simulates `burn_in + record_cycles` Otto cycles and records the last `record_cycles`.
///
/// The run starts in the hot-bath thermal state `(0, 0, z_eq(ω_h, T_h))`. Per-cycle
/// draws (jitter, static exponents, ripple amplitudes) are taken at the start of
/// each cycle; OU increments are drawn once per unitary step. Channels with zero
/// intensity consume no random numbers, so a noiseless run is seed-independent.
///
/// In the OU channel the exponent restarts at its target (`ou_mu`, or the cycle's
/// static exponent when ramp distortion is also active) at the start of each
/// unitary stroke.
pub fn run_trajectory(
    p: &EngineParams,
    noise: &NoiseSpec,
    burn_in: usize,
    record_cycles: usize,
    seed: u64,
) -> Result<Trajectory> {
    p.validate()?;
    noise.validate()?;
    if record_cycles == 0 {
        return domain("record_cycles must be at least 1");
    }
    let zeq_hot = z_eq(p.omega_h, p.t_h)?;
    let zeq_cold = z_eq(p.omega_c, p.t_c)?;
    let channels = noise.channels();
    let mut sim = Integrator {
        p,
        noise,
        channels,
        rng: ChaCha8Rng::seed_from_u64(seed),
        state: BlochState::new(0.0, 0.0, zeq_hot),
        t: 0.0,
        zeq_hot,
        zeq_cold,
    };

    let per_cycle = 4 * p.steps_per_stroke;
    let mut samples = Vec::with_capacity(record_cycles * per_cycle);
    let mut cycle_marks = Vec::with_capacity(record_cycles);
    let mut cycle_work = Vec::with_capacity(record_cycles);

    for cycle in 0..burn_in + record_cycles {
        let recording = cycle >= burn_in;
        let durations = sample_stroke_durations(p, channels.jitter, &mut sim.rng);
        let draws = CycleDraws::sample(&channels, &mut sim.rng);
        let mu = if channels.ramp > 0.0 {
            None
        } else {
            Some(noise.ou_mu)
        };
        if recording {
            cycle_marks.push(samples.len());
        }
        let mut buf = recording.then_some(&mut samples);

        sim.isochore(durations.hot, true, buf.as_deref_mut());
        let w_expand = sim.unitary(
            durations.expansion,
            RampDirection::Expand,
            mu.unwrap_or(draws.alpha_expand),
            draws.ripple_expand,
            buf.as_deref_mut(),
        );
        sim.isochore(durations.cold, false, buf.as_deref_mut());
        let w_compress = sim.unitary(
            durations.compression,
            RampDirection::Compress,
            mu.unwrap_or(draws.alpha_compress),
            draws.ripple_compress,
            buf,
        );
        if recording {
            cycle_work.push(w_expand + w_compress);
        }
    }

    Ok(Trajectory {
        samples,
        cycle_marks,
        cycle_work,
        final_state: sim.state,
        seed,
        noise: *noise,
        params: *p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::noise::NoiseModel;

    #[test]
    fn work_stats_examples() {
        assert_eq!(work_stats(&[1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert_eq!(work_stats(&[0.0, 2.0]).unwrap(), (1.0, 1.0));
        let (m, v) = work_stats(&[-1.0, 1.0, 3.0]).unwrap();
        assert_eq!(m, 1.0);
        assert!((v - 8.0 / 3.0).abs() < 1e-15);
        assert!(work_stats(&[]).is_err());
    }

    #[test]
    fn shapes_and_marks() {
        let p = EngineParams {
            steps_per_stroke: 20,
            ..Default::default()
        };
        let tr = run_trajectory(&p, &NoiseSpec::none(), 2, 3, 0).unwrap();
        assert_eq!(tr.samples.len(), 3 * 80);
        assert_eq!(tr.cycle_marks, vec![0, 80, 160]);
        assert_eq!(tr.cycle_work.len(), 3);
        assert_eq!(tr.cycle_boundaries().len(), 4);
        assert!(tr.samples.windows(2).all(|w| w[1].t > w[0].t));
        let idx = tr.cycle_indices();
        assert_eq!(idx.len(), 240);
        assert_eq!((idx[0], idx[79], idx[80], idx[239]), (0, 0, 1, 2));
        // burn-in time precedes the window
        assert!((tr.samples[0].t - 2.0 * p.cycle_period()).abs() < 1e-9);
    }

    #[test]
    fn noiseless_run_ignores_seed() {
        let p = EngineParams::default();
        let a = run_trajectory(&p, &NoiseSpec::none(), 2, 2, 1).unwrap();
        let b = run_trajectory(&p, &NoiseSpec::none(), 2, 2, 999).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.cycle_work, b.cycle_work);
    }

    #[test]
    fn seeded_runs_are_bitwise_reproducible() {
        let p = EngineParams::default();
        for model in NoiseModel::DEGRADATIONS {
            let noise = NoiseSpec::new(model, model.default_max_amplitude()).unwrap();
            let a = run_trajectory(&p, &noise, 2, 3, 42).unwrap();
            let b = run_trajectory(&p, &noise, 2, 3, 42).unwrap();
            let c = run_trajectory(&p, &noise, 2, 3, 43).unwrap();
            assert_eq!(a, b, "{model}");
            assert_ne!(a.samples, c.samples, "{model}");
        }
    }

    #[test]
    fn rejects_empty_window() {
        let p = EngineParams::default();
        assert!(run_trajectory(&p, &NoiseSpec::none(), 2, 0, 0).is_err());
    }
}
