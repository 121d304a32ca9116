//! Period finding and factoring.
//!
//! Two quantum back ends produce the register distribution:
//!
//! * a reference statevector simulation (Hadamards on the register, the
//!   modular-exponentiation permutation `|x⟩|w⟩ → |x⟩|w·a^x mod N⟩` for
//!   `w < N`, then the inverse QFT on the register), usable for any small
//!   instance;
//! * the compiled three-qubit circuit for `N = 15, a = 11`, built from the
//!   wire-network gates.
//!
//! # Compiled circuit ordering
//!
//! The full register is `|n₁ n₂ m₁ m₂ m₃ m₄⟩` read after the inverse QFT, whose
//! output swap leaves the wire that carried `n₂` in the first position. The
//! compiled qubits are positions 1, 3 and 5 of that register (output `n₁`,
//! `m₁`, `m₃`); positions 2, 4 and 6 are constant at 0, 0 and 1. The circuit
//! is `H(q0) · CNOT(q0→q1) · CNOT(q0→q2) · H(q0)` on `|000⟩`, which yields
//! `½(|000⟩ + |011⟩ + |100⟩ − |111⟩)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::ShorError;
use crate::gates::{cnot_gate, hadamard_from_network};
use crate::statevector::Statevector;
use crate::unitary::GateUnitary;

/// Largest register + ancilla width simulated by the reference back end.
pub const MAX_REFERENCE_QUBITS: usize = 20;

/// Positions (0-based) of the compiled qubits inside the 6-qubit register.
pub const COMPILED_POSITIONS: [usize; 3] = [0, 2, 4];
/// Positions and values of the qubits removed by compilation.
pub const COMPILED_FIXED: [(usize, u8); 3] = [(1, 0), (3, 0), (5, 1)];

/// `a^x mod N` by square-and-multiply.
pub fn mod_exp(a: u64, x: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1);
    let m = modulus as u128;
    let mut base = a as u128 % m;
    let mut exp = x;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn euclid_gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShorInstance {
    pub modulus: u64,
    pub base: u64,
    pub num_register: usize,
    pub num_ancilla: usize,
}

impl ShorInstance {
    /// Validates `N` (odd composite) and `a` (coprime, `0 < a < N`), picks the
    /// minimal ancilla width `m` with `2^{m−1} < N ≤ 2^m`, and uses
    /// `register` qubits for `x` (default `m`).
    pub fn new(modulus: u64, base: u64, register: Option<usize>) -> Result<Self, ShorError> {
        if modulus < 3 || modulus.is_multiple_of(2) || is_prime(modulus) {
            return Err(ShorError::InvalidInstance(format!("N = {modulus} must be an odd composite")));
        }
        if base == 0 || base >= modulus {
            return Err(ShorError::InvalidInstance(format!("a = {base} must satisfy 0 < a < N")));
        }
        if euclid_gcd(base, modulus) != 1 {
            return Err(ShorError::InvalidInstance(format!("gcd({base}, {modulus}) != 1")));
        }
        let num_ancilla = (64 - (modulus - 1).leading_zeros()) as usize;
        let num_register = register.unwrap_or(num_ancilla);
        if num_register == 0 {
            return Err(ShorError::InvalidInstance("register needs at least one qubit".into()));
        }
        Ok(Self {
            modulus,
            base,
            num_register,
            num_ancilla,
        })
    }

    pub fn total_qubits(&self) -> usize {
        self.num_register + self.num_ancilla
    }
}

/// Inverse QFT on `n` qubits: entry `(y, x) = 2^{−n/2} e^{−2πi xy/2^n}`.
pub fn inverse_qft(num_qubits: usize) -> GateUnitary {
    let dim = 1usize << num_qubits;
    let scale = 1.0 / (dim as f64).sqrt();
    let m = DMatrix::from_fn(dim, dim, |y, x| {
        let turns = (x * y) % dim;
        Complex64::from_polar(scale, -2.0 * PI * turns as f64 / dim as f64)
    });
    GateUnitary::new(m).expect("Fourier matrix is unitary")
}

fn reference_before_qft(instance: &ShorInstance) -> Result<Statevector, ShorError> {
    let n = instance.num_register;
    let m = instance.num_ancilla;
    if n + m > MAX_REFERENCE_QUBITS {
        return Err(ShorError::InvalidInstance(format!(
            "{} qubits exceeds the reference limit of {MAX_REFERENCE_QUBITS}",
            n + m
        )));
    }
    let mut state = Statevector::basis(n + m, 1);
    let h = crate::gates::hadamard_gate();
    for q in 0..n {
        state.apply_on(&h, &[q])?;
    }
    let powers: Vec<u64> = (0..1u64 << n).map(|x| mod_exp(instance.base, x, instance.modulus)).collect();
    let ancilla_mask = (1usize << m) - 1;
    let modulus = instance.modulus as usize;
    state.permute(|i| {
        let x = i >> m;
        let w = i & ancilla_mask;
        if w < modulus {
            (x << m) | (w * powers[x] as usize % modulus)
        } else {
            i
        }
    });
    Ok(state)
}

/// State after the modular exponentiation, before the inverse QFT.
pub fn period_finding_before_qft(instance: &ShorInstance) -> Result<Statevector, ShorError> {
    reference_before_qft(instance)
}

/// Full reference period-finding state over `n + m` qubits.
pub fn reference_period_finding(instance: &ShorInstance) -> Result<Statevector, ShorError> {
    let mut state = reference_before_qft(instance)?;
    let targets: Vec<usize> = (0..instance.num_register).collect();
    state.apply_on(&inverse_qft(instance.num_register), &targets)?;
    Ok(state)
}

/// The compiled three-qubit circuit for `N = 15, a = 11`, with both
/// Hadamards assembled from the solved mixing network.
pub fn compiled_shor_15_11() -> Result<Statevector, ShorError> {
    let h = hadamard_from_network()?;
    let cnot = cnot_gate();
    let mut state = Statevector::zero(3);
    state.apply_on(&h, &[0])?;
    state.apply_on(&cnot, &[0, 1])?;
    state.apply_on(&cnot, &[0, 2])?;
    state.apply_on(&h, &[0])?;
    Ok(state)
}

/// Re-inserts the qubits removed by compilation, giving the 6-qubit output.
pub fn uncompile(compiled: &Statevector) -> Statevector {
    let positions: Vec<usize> = COMPILED_FIXED.iter().map(|&(q, _)| q).collect();
    let bits: Vec<u8> = COMPILED_FIXED.iter().map(|&(_, b)| b).collect();
    compiled.insert_fixed(&positions, &bits)
}

/// Smallest `r` with `r·y/2^n ∈ ℤ` for every measured `y`.
pub fn extract_period(measured_ys: &[u64], num_register: usize) -> Result<u64, ShorError> {
    let size = 1u64 << num_register;
    measured_ys
        .iter()
        .filter(|&&y| y % size != 0)
        .map(|&y| size / euclid_gcd(y % size, size))
        .max()
        .ok_or(ShorError::Inconclusive)
}

/// Next base after `a` (wrapping to 2) that is coprime with `N`.
pub fn next_coprime_base(modulus: u64, a: u64) -> Option<u64> {
    (a + 1..modulus)
        .chain(2..a)
        .find(|&b| euclid_gcd(b, modulus) == 1)
}

/// Nontrivial factor pair (ascending) from an even period.
pub fn factor_from_period(instance: &ShorInstance, r: u64) -> Result<(u64, u64), ShorError> {
    let n = instance.modulus;
    let a = instance.base;
    if mod_exp(a, r, n) != 1 {
        return Err(ShorError::PeriodNotVerified { candidate: r });
    }
    let retry_with = next_coprime_base(n, a);
    if r % 2 == 1 {
        return Err(ShorError::OddPeriod { r, retry_with });
    }
    let half = mod_exp(a, r / 2, n);
    let candidates = [euclid_gcd((half + n - 1) % n, n), euclid_gcd((half + 1) % n, n)];
    match candidates.iter().find(|&&f| f != 1 && f != n) {
        Some(&f) => {
            let other = n / f;
            Ok((f.min(other), f.max(other)))
        }
        None => Err(ShorError::TrivialFactor { r, retry_with }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Reference,
    Compiled,
}

impl std::str::FromStr for Mode {
    type Err = ShorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reference" => Ok(Mode::Reference),
            "compiled" => Ok(Mode::Compiled),
            other => Err(ShorError::InvalidInstance(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    /// Register width; defaults to `m` (reference) or 2 (compiled).
    pub register_qubits: Option<usize>,
    /// Draw `samples` register readouts with the given seed instead of
    /// enumerating the support of the register distribution.
    pub sampling: Option<(usize, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodResult {
    pub period: u64,
    pub measured_ys: Vec<u64>,
    pub factors: Option<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRun {
    pub instance: ShorInstance,
    pub register_marginal: Vec<f64>,
    pub result: PeriodResult,
}

/// Probabilities below this are treated as outside the register support.
const SUPPORT_TOL: f64 = 1e-9;

fn sample_register(marginal: &[f64], samples: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: f64 = marginal.iter().sum();
    (0..samples)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let mut acc = 0.0;
            for (y, p) in marginal.iter().enumerate() {
                acc += p;
                if u < acc {
                    return y as u64;
                }
            }
            (marginal.len() - 1) as u64
        })
        .collect()
}

/// Quantum state → register distribution → readouts → period → factors.
pub fn run_full_pipeline(modulus: u64, base: u64, mode: Mode, options: PipelineOptions) -> Result<PipelineRun, ShorError> {
    let state;
    let instance;
    match mode {
        Mode::Reference => {
            instance = ShorInstance::new(modulus, base, options.register_qubits)?;
            state = reference_period_finding(&instance)?;
        }
        Mode::Compiled => {
            instance = ShorInstance::new(modulus, base, Some(options.register_qubits.unwrap_or(2)))?;
            if (modulus, base, instance.num_register) != (15, 11, 2) {
                return Err(ShorError::CompiledUnsupported);
            }
            state = uncompile(&compiled_shor_15_11()?);
        }
    }
    let marginal = state.marginal_leading(instance.num_register);
    let measured_ys = match options.sampling {
        Some((samples, seed)) => sample_register(&marginal, samples, seed),
        None => marginal
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > SUPPORT_TOL)
            .map(|(y, _)| y as u64)
            .collect(),
    };
    let period = extract_period(&measured_ys, instance.num_register)?;
    let factors = factor_from_period(&instance, period)?;
    Ok(PipelineRun {
        instance,
        register_marginal: marginal,
        result: PeriodResult {
            period,
            measured_ys,
            factors: Some(factors),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetryRecord {
    pub a: u64,
    pub reason: String,
}

/// JSON document written by the `shor` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShorReport {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub a: u64,
    pub n: usize,
    pub m: usize,
    pub mode: Mode,
    pub register_marginal: BTreeMap<u64, f64>,
    pub measured_ys: Vec<u64>,
    pub r: u64,
    pub factors: [u64; 2],
    pub retries: Vec<RetryRecord>,
}

/// Runs the pipeline, moving to the next coprime base whenever a base gives an
/// odd period, only trivial factors, or no usable readout. Gives up after
/// `max_attempts` bases.
pub fn factor_with_retries(
    modulus: u64,
    base: u64,
    mode: Mode,
    options: PipelineOptions,
    max_attempts: usize,
) -> Result<ShorReport, ShorError> {
    let mut retries = Vec::new();
    let mut a = base;
    let mut last_err = ShorError::Inconclusive;
    for _ in 0..max_attempts.max(1) {
        match run_full_pipeline(modulus, a, mode, options) {
            Ok(run) => {
                let (p, q) = run.result.factors.expect("pipeline factors on success");
                return Ok(ShorReport {
                    modulus,
                    a,
                    n: run.instance.num_register,
                    m: run.instance.num_ancilla,
                    mode,
                    register_marginal: run
                        .register_marginal
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p > SUPPORT_TOL)
                        .map(|(y, &p)| (y as u64, p))
                        .collect(),
                    measured_ys: run.result.measured_ys,
                    r: run.result.period,
                    factors: [p, q],
                    retries,
                });
            }
            Err(e) => {
                let retryable = matches!(
                    e,
                    ShorError::OddPeriod { .. }
                        | ShorError::TrivialFactor { .. }
                        | ShorError::Inconclusive
                        | ShorError::PeriodNotVerified { .. }
                );
                if !retryable || mode == Mode::Compiled {
                    return Err(e);
                }
                retries.push(RetryRecord { a, reason: e.to_string() });
                last_err = e;
                match next_coprime_base(modulus, a) {
                    Some(next) if next != base => a = next,
                    _ => break,
                }
            }
        }
    }
    Err(last_err)
}
