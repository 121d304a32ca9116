//! Time-domain telegrapher equations on a periodic 1D grid.
//!
//! `L ∂I/∂t = −∂V/∂x`, `C ∂V/∂t = −∂I/∂x`, discretised with a staggered
//! leapfrog: `V` lives on integer sites `x_j = j·dx` at integer times, `I`
//! on half sites `x_{j+1/2}` at half times. A [`FieldState`] holds `V` at
//! step `n` and `I` at step `n − 1/2`.
//!
//! The two-component field `ψ = (Z·I, V)` obeys a Dirac equation with
//! dispersion `ω = ±|k|/√(LC)`, and `Σ|ψ|² = (2/C)·U_T`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::SimulationError;
use crate::line::LineParameters;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub num_cells: usize,
    pub dx: f64,
    pub voltage: Vec<f64>,
    pub current: Vec<f64>,
    pub line: LineParameters,
}

impl FieldState {
    pub fn new(dx: f64, voltage: Vec<f64>, current: Vec<f64>, line: LineParameters) -> Result<Self, SimulationError> {
        if voltage.len() != current.len() {
            return Err(SimulationError::InvalidConfig(format!(
                "voltage has {} cells but current has {}",
                voltage.len(),
                current.len()
            )));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(SimulationError::InvalidConfig(format!("dx must be positive, got {dx}")));
        }
        Ok(Self {
            num_cells: voltage.len(),
            dx,
            voltage,
            current,
            line,
        })
    }

    /// Electrostatic energy `(C/2) Σ V²`.
    pub fn electric_energy(&self) -> f64 {
        0.5 * self.line.capacitance_per_length() * self.voltage.iter().map(|v| v * v).sum::<f64>()
    }

    /// Magnetic energy `(L/2) Σ I²`.
    pub fn magnetic_energy(&self) -> f64 {
        0.5 * self.line.inductance_per_length() * self.current.iter().map(|i| i * i).sum::<f64>()
    }

    pub fn total_energy(&self) -> f64 {
        self.electric_energy() + self.magnetic_energy()
    }
}

/// Per-cell wavefunction `(Z·I, V)`.
pub fn wavefunction_from_fields(state: &FieldState) -> Vec<[Complex64; 2]> {
    let z = state.line.characteristic_impedance();
    state
        .voltage
        .iter()
        .zip(&state.current)
        .map(|(&v, &i)| [Complex64::new(z * i, 0.0), Complex64::new(v, 0.0)])
        .collect()
}

pub fn wavefunction_norm(psi: &[[Complex64; 2]]) -> f64 {
    psi.iter().map(|c| c[0].norm_sqr() + c[1].norm_sqr()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub num_cells: usize,
    pub dx: f64,
    pub dt: f64,
    pub steps: usize,
    pub line: LineParameters,
}

impl EvolutionConfig {
    pub fn new(num_cells: usize, dx: f64, dt: f64, steps: usize, line: LineParameters) -> Result<Self, SimulationError> {
        if num_cells < 8 {
            return Err(SimulationError::InvalidConfig(format!("need at least 8 cells, got {num_cells}")));
        }
        if !(dx.is_finite() && dx > 0.0 && dt.is_finite() && dt > 0.0) {
            return Err(SimulationError::InvalidConfig(format!("dx and dt must be positive, got {dx}, {dt}")));
        }
        if steps < 1 {
            return Err(SimulationError::InvalidConfig("need at least one step".into()));
        }
        let limit = dx / line.propagation_speed();
        if dt > limit {
            return Err(SimulationError::InvalidConfig(format!("dt = {dt} violates the CFL limit {limit}")));
        }
        Ok(Self {
            num_cells,
            dx,
            dt,
            steps,
            line,
        })
    }

    /// Grid of `num_cells` over a periodic line of length `length`, with
    /// `dt = courant · dx · √(LC)`.
    pub fn with_courant(
        num_cells: usize,
        length: f64,
        courant: f64,
        steps: usize,
        line: LineParameters,
    ) -> Result<Self, SimulationError> {
        let dx = length / num_cells as f64;
        Self::new(num_cells, dx, courant * dx / line.propagation_speed(), steps, line)
    }

    pub fn courant(&self) -> f64 {
        self.dt * self.line.propagation_speed() / self.dx
    }

    pub fn wavenumber(&self, mode: usize) -> f64 {
        2.0 * PI * mode as f64 / (self.num_cells as f64 * self.dx)
    }

    /// Angular frequency of a grid mode under the leapfrog scheme,
    /// `sin(ω dt/2) = ν sin(k dx/2)`.
    pub fn discrete_omega(&self, k: f64) -> f64 {
        2.0 / self.dt * (self.courant() * (0.5 * k * self.dx).sin()).asin()
    }

    fn check_mode(&self, mode: usize) -> Result<(), SimulationError> {
        let max = self.num_cells / 2 - 1;
        if mode < 1 || mode > max {
            return Err(SimulationError::ModeOutOfRange { mode, max });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
}

/// Right-moving plane wave `V = cos(kx)`, `I = cos(kx)/Z`, `k = 2π·mode/(N·dx)`.
pub fn initialize_plane_wave(config: &EvolutionConfig, mode: usize) -> Result<FieldState, SimulationError> {
    initialize_mode(config, mode, Direction::Right)
}

/// Plane wave of the given direction. Each array is sampled at its own
/// staggered position and time, so the state is an exact eigenmode of the
/// discrete scheme.
pub fn initialize_mode(config: &EvolutionConfig, mode: usize, direction: Direction) -> Result<FieldState, SimulationError> {
    config.check_mode(mode)?;
    let k = config.wavenumber(mode);
    let half_phase = 0.5 * config.discrete_omega(k) * config.dt;
    let z = config.line.characteristic_impedance();
    let n = config.num_cells;
    let voltage = (0..n).map(|j| (k * j as f64 * config.dx).cos()).collect();
    let current = (0..n)
        .map(|j| {
            let x = (j as f64 + 0.5) * config.dx;
            match direction {
                Direction::Right => (k * x + half_phase).cos() / z,
                Direction::Left => -(k * x - half_phase).cos() / z,
            }
        })
        .collect();
    FieldState::new(config.dx, voltage, current, config.line)
}

fn next_current(state: &FieldState, dt: f64) -> Vec<f64> {
    let n = state.num_cells;
    let coeff = dt / (state.line.inductance_per_length() * state.dx);
    (0..n)
        .map(|j| state.current[j] - coeff * (state.voltage[(j + 1) % n] - state.voltage[j]))
        .collect()
}

/// One leapfrog step.
pub fn step(state: &FieldState, config: &EvolutionConfig) -> FieldState {
    let n = state.num_cells;
    let current = next_current(state, config.dt);
    let coeff = config.dt / (state.line.capacitance_per_length() * state.dx);
    let voltage = (0..n)
        .map(|j| state.voltage[j] - coeff * (current[j] - current[(j + n - 1) % n]))
        .collect();
    FieldState {
        num_cells: n,
        dx: state.dx,
        voltage,
        current,
        line: state.line,
    }
}

/// The state with the current replaced by its time-centred value
/// `(I^{n−1/2} + I^{n+1/2}) / 2`, aligned in time with the voltage.
pub fn centered_snapshot(state: &FieldState, config: &EvolutionConfig) -> FieldState {
    let ahead = next_current(state, config.dt);
    FieldState {
        current: state.current.iter().zip(&ahead).map(|(a, b)| 0.5 * (a + b)).collect(),
        ..state.clone()
    }
}

/// `(C/2) Σ V^n² + (L/2) Σ I^{n−1/2} I^{n+1/2}`, which the leapfrog update
/// conserves exactly for any initial fields.
pub fn staggered_energy(state: &FieldState, config: &EvolutionConfig) -> f64 {
    let ahead = next_current(state, config.dt);
    state.electric_energy()
        + 0.5
            * state.line.inductance_per_length()
            * state.current.iter().zip(&ahead).map(|(a, b)| a * b).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub step: usize,
    pub time: f64,
    pub electric: f64,
    pub magnetic: f64,
    pub total: f64,
    pub norm: f64,
}

fn sample(state: &FieldState, config: &EvolutionConfig, step: usize) -> EnergySample {
    let snap = centered_snapshot(state, config);
    EnergySample {
        step,
        time: step as f64 * config.dt,
        electric: snap.electric_energy(),
        magnetic: snap.magnetic_energy(),
        total: snap.total_energy(),
        norm: wavefunction_norm(&wavefunction_from_fields(&snap)),
    }
}

/// Runs `config.steps` steps, sampling energies every `interval` steps
/// (and always at step 0 and the final step). Returns the final state too.
pub fn evolve(initial: &FieldState, config: &EvolutionConfig, interval: usize) -> (FieldState, Vec<EnergySample>) {
    let interval = interval.max(1);
    let mut state = initial.clone();
    let mut samples = vec![sample(&state, config, 0)];
    for n in 1..=config.steps {
        state = step(&state, config);
        if n % interval == 0 || n == config.steps {
            samples.push(sample(&state, config, n));
        }
    }
    (state, samples)
}

/// Largest `|U_T(t) − U_T(0)| / U_T(0)` over the samples.
pub fn max_energy_drift(samples: &[EnergySample]) -> f64 {
    let Some(first) = samples.first() else { return 0.0 };
    samples
        .iter()
        .map(|s| ((s.total - first.total) / first.total).abs())
        .fold(0.0, f64::max)
}

/// CSV: `step,time,U_E,U_M,U_T,norm`.
pub fn samples_to_csv(samples: &[EnergySample]) -> String {
    let mut out = String::from("step,time,U_E,U_M,U_T,norm\n");
    for s in samples {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.step, s.time, s.electric, s.magnetic, s.total, s.norm
        )
        .unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub k: f64,
    /// Signed: negative for a left-moving mode.
    pub omega_measured: f64,
    pub omega_theory: f64,
}

impl Dispersion {
    pub fn relative_error(&self) -> f64 {
        ((self.omega_measured.abs() - self.omega_theory) / self.omega_theory).abs()
    }
}

fn mode_amplitude(state: &FieldState, k: f64) -> Complex64 {
    state
        .voltage
        .iter()
        .enumerate()
        .map(|(j, &v)| v * Complex64::from_polar(1.0, -k * j as f64 * state.dx))
        .sum()
}

/// Measures the angular frequency of a right-moving mode from the phase
/// advance of its Fourier amplitude over `config.steps` steps.
pub fn measure_dispersion(config: &EvolutionConfig, mode: usize) -> Result<Dispersion, SimulationError> {
    measure_dispersion_directed(config, mode, Direction::Right)
}

pub fn measure_dispersion_directed(
    config: &EvolutionConfig,
    mode: usize,
    direction: Direction,
) -> Result<Dispersion, SimulationError> {
    let mut state = initialize_mode(config, mode, direction)?;
    let k = config.wavenumber(mode);
    let omega_theory = k * config.line.propagation_speed();
    let fraction = omega_theory * config.steps as f64 * config.dt / (2.0 * PI);
    if fraction < 0.25 {
        return Err(SimulationError::MeasurementTooShort { fraction });
    }
    let mut previous = mode_amplitude(&state, k);
    let mut phase = 0.0;
    for _ in 0..config.steps {
        state = step(&state, config);
        let current = mode_amplitude(&state, k);
        phase += (current * previous.conj()).arg();
        previous = current;
    }
    // a(t) ∝ e^{−iωt} for a right-moving wave
    Ok(Dispersion {
        k,
        omega_measured: -phase / (config.steps as f64 * config.dt),
        omega_theory,
    })
}
