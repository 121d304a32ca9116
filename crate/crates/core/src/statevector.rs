use num_complex::Complex64;

use crate::error::GateError;
use crate::unitary::{basis_label, GateUnitary};

/// Amplitudes over `2^n` basis states, most-significant-qubit first.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(num_qubits >= 1 && index < 1 << num_qubits);
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amplitudes }
    }

    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    /// Wraps raw amplitudes; the length must be a power of two ≥ 2 and the
    /// norm 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, GateError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(GateError::DimensionMismatch(format!("{len} amplitudes")));
        }
        let state = Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(GateError::DimensionMismatch(format!("state norm² = {norm}")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a full-register unitary.
    pub fn apply(&mut self, gate: &GateUnitary) -> Result<(), GateError> {
        let targets: Vec<usize> = (0..self.num_qubits).collect();
        self.apply_on(gate, &targets)
    }

    /// Applies a k-qubit gate to `targets` (gate qubit `i` ↔ register qubit `targets[i]`).
    pub fn apply_on(&mut self, gate: &GateUnitary, targets: &[usize]) -> Result<(), GateError> {
        let n = self.num_qubits;
        let k = gate.num_qubits();
        if targets.len() != k {
            return Err(GateError::InvalidTargets(format!("{k}-qubit gate given {} targets", targets.len())));
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= n || targets[..i].contains(&t) {
                return Err(GateError::InvalidTargets(format!("bad target list {targets:?} for {n} qubits")));
            }
        }
        let masks: Vec<usize> = targets.iter().map(|&t| 1 << (n - 1 - t)).collect();
        let target_mask: usize = masks.iter().sum();
        let sub = 1usize << k;
        let offsets: Vec<usize> = (0..sub)
            .map(|s| {
                masks
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, &m)| if s >> (k - 1 - i) & 1 == 1 { acc | m } else { acc })
            })
            .collect();
        let m = gate.entries();
        let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 {
                continue;
            }
            for (s, &off) in offsets.iter().enumerate() {
                gathered[s] = self.amplitudes[base | off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                self.amplitudes[base | off] = (0..sub).map(|c| m[(r, c)] * gathered[c]).sum();
            }
        }
        Ok(())
    }

    /// Applies the basis permutation `index → map(index)`; `map` must be a bijection.
    pub fn permute(&mut self, map: impl Fn(usize) -> usize) {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[map(i)] = *a;
        }
        self.amplitudes = out;
    }

    /// Probability of each value of the leading `width` qubits, summed over the rest.
    pub fn marginal_leading(&self, width: usize) -> Vec<f64> {
        assert!(width <= self.num_qubits);
        let shift = self.num_qubits - width;
        let mut probs = vec![0.0; 1 << width];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[i >> shift] += a.norm_sqr();
        }
        probs
    }

    /// Keeps only `qubits` (in the given order), requiring every other qubit
    /// to sit at the fixed value in `fixed` (pairs of qubit, bit). Returns
    /// `None` if any amplitude above `tol` violates the fixed bits.
    pub fn restrict(&self, qubits: &[usize], fixed: &[(usize, u8)], tol: f64) -> Option<Statevector> {
        let n = self.num_qubits;
        let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let consistent = fixed.iter().all(|&(q, b)| bit(i, q) == b as usize);
            if !consistent {
                if a.norm() > tol {
                    return None;
                }
                continue;
            }
            let j = qubits.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
            out[j] += *a;
        }
        Some(Statevector {
            num_qubits: qubits.len(),
            amplitudes: out,
        })
    }

    /// Inserts constant qubits: `positions[i]` of the result is set to `bits[i]`.
    pub fn insert_fixed(&self, positions: &[usize], bits: &[u8]) -> Statevector {
        assert_eq!(positions.len(), bits.len());
        let total = self.num_qubits + positions.len();
        let free: Vec<usize> = (0..total).filter(|q| !positions.contains(q)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << total];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let mut j = 0usize;
            for (src, &q) in free.iter().enumerate() {
                if i >> (self.num_qubits - 1 - src) & 1 == 1 {
                    j |= 1 << (total - 1 - q);
                }
            }
            for (&q, &b) in positions.iter().zip(bits) {
                if b == 1 {
                    j |= 1 << (total - 1 - q);
                }
            }
            out[j] = *a;
        }
        Statevector {
            num_qubits: total,
            amplitudes: out,
        }
    }

    /// The unimodular λ minimising ‖self − λ other‖ (`None` if orthogonal).
    pub fn relative_phase(&self, other: &Statevector) -> Option<Complex64> {
        let overlap: Complex64 = other
            .amplitudes
            .iter()
            .zip(&self.amplitudes)
            .map(|(b, a)| b.conj() * a)
            .sum();
        (overlap.norm() > 0.0).then(|| overlap / overlap.norm())
    }

    /// Largest per-amplitude error after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &Statevector) -> f64 {
        if self.num_qubits != other.num_qubits {
            return f64::INFINITY;
        }
        match self.relative_phase(other) {
            Some(l) => self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| (a - l * b).norm())
                .fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }

    /// Nonzero terms as (`"|…⟩"`, amplitude), ascending by index.
    pub fn terms(&self, tol: f64) -> Vec<(String, Complex64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tol)
            .map(|(i, a)| (format!("|{}⟩", basis_label(i, self.num_qubits)), *a))
            .collect()
    }
}
