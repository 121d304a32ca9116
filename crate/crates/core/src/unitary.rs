//! Dense unitaries over qubit bases and the algebra used to build circuits.
//!
//! Basis states are labelled most-significant-qubit first: in `|q0 q1 … q_{n-1}⟩`
//! the leftmost character is qubit 0 and contributes `2^{n-1}` to the index.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::GateError;

/// Tolerance of the unitarity check performed at construction.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GateUnitary {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

pub fn basis_label(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|q| if index >> (num_qubits - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses `"101"`, `"|101>"` or `"|101⟩"` into a basis index.
pub fn parse_basis_label(label: &str, num_qubits: usize) -> Result<usize, GateError> {
    let bits = label
        .trim()
        .trim_start_matches('|')
        .trim_end_matches('>')
        .trim_end_matches('⟩');
    if bits.len() != num_qubits || !bits.chars().all(|c| c == '0' || c == '1') {
        return Err(GateError::InvalidLabel(label.to_string()));
    }
    Ok(usize::from_str_radix(bits, 2).expect("binary digits"))
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl GateUnitary {
    /// Wraps a square matrix, checking that it is unitary within [`UNITARITY_TOL`].
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, GateError> {
        Self::with_tolerance(entries, UNITARITY_TOL)
    }

    pub fn with_tolerance(entries: DMatrix<Complex64>, tol: f64) -> Result<Self, GateError> {
        let dim = entries.nrows();
        if dim != entries.ncols() || dim == 0 || !dim.is_power_of_two() || dim == 1 {
            return Err(GateError::DimensionMismatch(format!(
                "expected a 2^n x 2^n matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let gate = Self {
            num_qubits: dim.trailing_zeros() as usize,
            entries,
        };
        let residual = gate.unitarity_residual();
        if residual.is_nan() || residual >= tol {
            return Err(GateError::NotUnitary(residual));
        }
        Ok(gate)
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self, GateError> {
        let n = rows.len();
        let flat: Vec<Complex64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        if flat.len() != n * n {
            return Err(GateError::DimensionMismatch("rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        Self {
            num_qubits,
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn basis_labels(&self) -> Vec<String> {
        (0..self.dimension()).map(|i| format!("|{}⟩", basis_label(i, self.num_qubits))).collect()
    }

    /// max |(U†U − I)_ij|
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dimension();
        max_abs(&(self.entries.adjoint() * &self.entries - DMatrix::<Complex64>::identity(d, d)))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            entries: self.entries.adjoint(),
        }
    }

    pub fn scaled(&self, phase: Complex64) -> Result<Self, GateError> {
        Self::new(&self.entries * phase)
    }

    /// Apply `self` first, then `next`: the product `next · self`.
    pub fn then(&self, next: &GateUnitary) -> Result<Self, GateError> {
        compose(self, next)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &GateUnitary) -> f64 {
        max_abs(&(&self.entries - &other.entries))
    }
}

impl fmt::Display for GateUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_c = |z: Complex64| {
            let re = if z.re.abs() < 5e-13 { 0.0 } else { z.re };
            let im = if z.im.abs() < 5e-13 { 0.0 } else { z.im };
            format!("{re:+.6}{im:+.6}i")
        };
        let labels = self.basis_labels();
        for (r, label) in labels.iter().enumerate() {
            write!(f, "{label:>8} [")?;
            for c in 0..self.dimension() {
                if c > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{}", fmt_c(self.entries[(r, c)]))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// `b` applied after `a`, i.e. the matrix product `b · a`.
pub fn compose(a: &GateUnitary, b: &GateUnitary) -> Result<GateUnitary, GateError> {
    if a.dimension() != b.dimension() {
        return Err(GateError::DimensionMismatch(format!(
            "cannot compose {}-qubit and {}-qubit gates",
            a.num_qubits, b.num_qubits
        )));
    }
    Ok(GateUnitary {
        num_qubits: a.num_qubits,
        entries: &b.entries * &a.entries,
    })
}

/// Kronecker product with `a` on the leading (more significant) qubits.
pub fn tensor(a: &GateUnitary, b: &GateUnitary) -> GateUnitary {
    GateUnitary {
        num_qubits: a.num_qubits + b.num_qubits,
        entries: a.entries.kronecker(&b.entries),
    }
}

/// Places a k-qubit `gate` on `targets` of an `num_qubits` register; the
/// gate's qubit `i` acts on register qubit `targets[i]`.
pub fn embed(gate: &GateUnitary, targets: &[usize], num_qubits: usize) -> Result<GateUnitary, GateError> {
    let k = gate.num_qubits;
    if targets.len() != k {
        return Err(GateError::InvalidTargets(format!(
            "{k}-qubit gate given {} targets",
            targets.len()
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(GateError::InvalidTargets(format!("qubit {t} out of range for {num_qubits} qubits")));
        }
        if targets[..i].contains(&t) {
            return Err(GateError::InvalidTargets(format!("qubit {t} repeated")));
        }
    }
    let dim = 1usize << num_qubits;
    let masks: Vec<usize> = targets.iter().map(|&t| 1 << (num_qubits - 1 - t)).collect();
    let target_mask: usize = masks.iter().sum();
    // sub-index of the gate's local basis from a full index
    let local = |full: usize| {
        masks
            .iter()
            .fold(0usize, |acc, &m| (acc << 1) | usize::from(full & m != 0))
    };
    let spread = |sub: usize| {
        masks
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &m)| if sub >> (k - 1 - i) & 1 == 1 { acc | m } else { acc })
    };
    let mut entries = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !target_mask;
        let c = local(col);
        for r in 0..(1 << k) {
            let amp = gate.entries[(r, c)];
            if amp != Complex64::new(0.0, 0.0) {
                entries[(rest | spread(r), col)] = amp;
            }
        }
    }
    Ok(GateUnitary { num_qubits, entries })
}

/// The unimodular λ minimising ‖a − λ b‖, or `None` if `b` is zero.
pub fn relative_phase(a: &GateUnitary, b: &GateUnitary) -> Option<Complex64> {
    let overlap: Complex64 = b.entries.iter().zip(a.entries.iter()).map(|(x, y)| x.conj() * y).sum();
    (overlap.norm() > 0.0).then(|| overlap / overlap.norm())
}

/// True if `a = λ b` entrywise within `tol` for some |λ| = 1.
pub fn equal_up_to_phase(a: &GateUnitary, b: &GateUnitary, tol: f64) -> bool {
    if a.dimension() != b.dimension() {
        return false;
    }
    match relative_phase(a, b) {
        Some(lambda) => max_abs(&(&a.entries - &b.entries * lambda)) < tol,
        None => false,
    }
}
