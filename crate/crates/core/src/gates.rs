//! Gate library: wire networks that realize one-qubit gates, their closed
//! forms, and the classical permutation gates obtained by relabelling wires.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::GateError;
use crate::network::{NetworkGraph, Port, PortRole, Segment};
use crate::scattering::{full_smatrix, SMatrix};
use crate::unitary::{compose, parse_basis_label, GateUnitary};

/// Impedance ratio Z₂/Z₁ of the bridge rungs that cancels reflection.
pub const MATCHED_Z_RATIO: f64 = FRAC_1_SQRT_2;

/// Port ids of the mixing network, in declaration order: `|0⟩_in`, `|0⟩_out`,
/// `|1⟩_in`, `|1⟩_out`. With `|0⟩_in` driven the remaining ports are reported
/// as T1 (`|0⟩_out`), T2 (`|1⟩_in`) and T3 (`|1⟩_out`).
pub const MIXING_PORTS: [&str; 4] = ["in0", "out0", "in1", "out1"];

/// Double-bridge square A–B–D–C. Sides A–B and C–D have impedance 1, the
/// rungs A–C and B–D have impedance `z_ratio`, all of length `side_length`.
/// Inputs attach at A (`|0⟩`) and B (`|1⟩`), outputs at C (`|0⟩`) and D (`|1⟩`).
pub fn build_mixing_network(z_ratio: f64, side_length: f64) -> Result<NetworkGraph, GateError> {
    let seg = |id: &str, from: &str, to: &str, z: f64| Segment {
        id: id.into(),
        from: from.into(),
        to: to.into(),
        impedance: z,
        length: side_length,
    };
    let port = |id: &str, node: &str, role: PortRole, label: &str| Port {
        id: id.into(),
        node: node.into(),
        impedance: 1.0,
        role,
        label: Some(label.into()),
    };
    let net = NetworkGraph::new(
        ["A", "B", "C", "D"].iter().map(|s| s.to_string()).collect(),
        vec![
            seg("AB", "A", "B", 1.0),
            seg("CD", "C", "D", 1.0),
            seg("AC", "A", "C", z_ratio),
            seg("BD", "B", "D", z_ratio),
        ],
        vec![
            port(MIXING_PORTS[0], "A", PortRole::Input, "|0>_in"),
            port(MIXING_PORTS[1], "C", PortRole::Output, "|0>_out"),
            port(MIXING_PORTS[2], "B", PortRole::Input, "|1>_in"),
            port(MIXING_PORTS[3], "D", PortRole::Output, "|1>_out"),
        ],
    )
    .map_err(|e| GateError::Solver(e.into()))?;
    Ok(net)
}

/// Output←input transmission block of `s`, checked for vanishing reflection
/// (input→input block below `tol` in max-norm) and for unitarity within 1e-8.
pub fn extract_two_port_unitary(
    s: &SMatrix,
    input_ports: [&str; 2],
    output_ports: [&str; 2],
    tol: f64,
) -> Result<GateUnitary, GateError> {
    let idx = |id: &str| {
        s.index(id)
            .ok_or_else(|| GateError::Solver(crate::error::SolverError::UnknownPort(id.to_string())))
    };
    let ins = [idx(input_ports[0])?, idx(input_ports[1])?];
    let outs = [idx(output_ports[0])?, idx(output_ports[1])?];
    let reflection = ins
        .iter()
        .flat_map(|&r| ins.iter().map(move |&c| s.entries[(r, c)].norm()))
        .fold(0.0, f64::max);
    if reflection.is_nan() || reflection >= tol {
        return Err(GateError::ReflectionTooLarge(reflection));
    }
    let block = DMatrix::from_fn(2, 2, |r, c| s.entries[(outs[r], ins[c])]);
    GateUnitary::with_tolerance(block, 1e-8)
}

/// Solves the mixing network at wavenumber `k` and extracts its unitary.
pub fn mixing_gate_from_network(z_ratio: f64, k: f64, tol: f64) -> Result<GateUnitary, GateError> {
    let net = build_mixing_network(z_ratio, 1.0)?;
    let s = full_smatrix(&net, k)?;
    extract_two_port_unitary(&s, [MIXING_PORTS[0], MIXING_PORTS[2]], [MIXING_PORTS[1], MIXING_PORTS[3]], tol)
}

/// The two no-reflection points of the matched bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingBranch {
    /// kℓ = π/2: (1/√2)[[i, −1], [−1, i]]
    QuarterWave,
    /// kℓ = 3π/2: (1/√2)[[−i, −1], [−1, −i]]
    ThreeQuarterWave,
}

impl MixingBranch {
    pub fn wavenumber(self) -> f64 {
        match self {
            MixingBranch::QuarterWave => PI / 2.0,
            MixingBranch::ThreeQuarterWave => 3.0 * PI / 2.0,
        }
    }
}

/// Closed-form mixing gate for the chosen branch.
pub fn mixing_gate(branch: MixingBranch) -> GateUnitary {
    let s = FRAC_1_SQRT_2;
    let diag = match branch {
        MixingBranch::QuarterWave => Complex64::new(0.0, s),
        MixingBranch::ThreeQuarterWave => Complex64::new(0.0, -s),
    };
    let off = Complex64::new(-s, 0.0);
    GateUnitary::from_rows(&[&[diag, off], &[off, diag]]).expect("mixing gate is unitary")
}

/// `diag(1, e^{iφ})`. A wire pair of lengths ℓ₁, ℓ₂ realises this with
/// `φ = k(ℓ₂ − ℓ₁)`, up to the discarded overall phase `e^{ikℓ₁}`.
pub fn phase_shift_gate(phi: f64) -> GateUnitary {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    GateUnitary::from_rows(&[&[one, zero], &[zero, Complex64::from_polar(1.0, phi)]]).expect("diagonal unimodular")
}

/// Phase difference picked up by two uncoupled wires of lengths `l1`, `l2`.
pub fn phase_from_lengths(k: f64, l1: f64, l2: f64) -> f64 {
    k * (l2 - l1)
}

pub fn hadamard_gate() -> GateUnitary {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    GateUnitary::from_rows(&[&[h, h], &[h, -h]]).expect("hadamard is unitary")
}

/// `−i · U_{3π/2} · U_mix · U_{3π/2}` for a given mixing unitary.
pub fn hadamard_from_mixing(mixing: &GateUnitary) -> Result<GateUnitary, GateError> {
    let shift = phase_shift_gate(3.0 * PI / 2.0);
    let product = compose(&compose(&shift, mixing)?, &shift)?;
    product.scaled(Complex64::new(0.0, -1.0))
}

/// Hadamard assembled from the solved bridge network at kℓ = π/2.
pub fn hadamard_from_network() -> Result<GateUnitary, GateError> {
    let mix = mixing_gate_from_network(MATCHED_Z_RATIO, PI / 2.0, 1e-9)?;
    hadamard_from_mixing(&mix)
}

/// Permutation of basis states: each listed pair of wires is exchanged,
/// every other wire passes straight through.
pub fn permutation_gate(num_qubits: usize, swaps: &[(&str, &str)]) -> Result<GateUnitary, GateError> {
    let dim = 1usize << num_qubits;
    let mut image: Vec<usize> = (0..dim).collect();
    let mut touched = vec![false; dim];
    for &(a, b) in swaps {
        let i = parse_basis_label(a, num_qubits)?;
        let j = parse_basis_label(b, num_qubits)?;
        for (idx, label) in [(i, a), (j, b)] {
            if touched[idx] {
                return Err(GateError::OverlappingSwaps(label.to_string()));
            }
            touched[idx] = true;
        }
        if i == j {
            return Err(GateError::OverlappingSwaps(a.to_string()));
        }
        image.swap(i, j);
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (col, &row) in image.iter().enumerate() {
        m[(row, col)] = Complex64::new(1.0, 0.0);
    }
    GateUnitary::new(m)
}

pub fn not_gate() -> GateUnitary {
    permutation_gate(1, &[("0", "1")]).expect("valid labels")
}

pub fn cnot_gate() -> GateUnitary {
    permutation_gate(2, &[("10", "11")]).expect("valid labels")
}

pub fn swap_gate() -> GateUnitary {
    permutation_gate(2, &[("01", "10")]).expect("valid labels")
}

pub fn toffoli_gate() -> GateUnitary {
    permutation_gate(3, &[("110", "111")]).expect("valid labels")
}

pub fn fredkin_gate() -> GateUnitary {
    permutation_gate(3, &[("101", "110")]).expect("valid labels")
}

/// Wire bookkeeping for a relabelling gate: the crossed wires are longer
/// than the straight ones, and choosing `k Δℓ = 2π` hides the extra phase.
#[derive(Debug, Clone, PartialEq)]
pub struct WireLayout {
    pub crossed_wires: Vec<String>,
    pub straight_wires: Vec<String>,
    /// Extra length of each crossed wire.
    pub length_delta: f64,
}

pub fn permutation_layout(num_qubits: usize, swaps: &[(&str, &str)], k: f64) -> Result<WireLayout, GateError> {
    // validates labels and overlap
    permutation_gate(num_qubits, swaps)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(GateError::DimensionMismatch(format!("wavenumber must be positive, got {k}")));
    }
    let mut crossed = Vec::new();
    for &(a, b) in swaps {
        crossed.push(parse_basis_label(a, num_qubits)?);
        crossed.push(parse_basis_label(b, num_qubits)?);
    }
    let label = |i: usize| format!("|{}⟩", crate::unitary::basis_label(i, num_qubits));
    Ok(WireLayout {
        crossed_wires: crossed.iter().map(|&i| label(i)).collect(),
        straight_wires: (0..1usize << num_qubits).filter(|i| !crossed.contains(i)).map(label).collect(),
        length_delta: 2.0 * PI / k,
    })
}

/// Gates addressable by name: `mixing`, `phase:<phi>`, `hadamard`, `not`,
/// `cnot`, `swap`, `toffoli`, `fredkin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogGate {
    Mixing,
    Phase(f64),
    Hadamard,
    Not,
    Cnot,
    Swap,
    Toffoli,
    Fredkin,
}

impl FromStr for CatalogGate {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = s.trim().to_ascii_lowercase();
        if let Some(phi) = name.strip_prefix("phase:") {
            return phi
                .parse::<f64>()
                .ok()
                .filter(|p| p.is_finite())
                .map(CatalogGate::Phase)
                .ok_or_else(|| GateError::UnknownGate(s.to_string()));
        }
        Ok(match name.as_str() {
            "mixing" => CatalogGate::Mixing,
            "hadamard" => CatalogGate::Hadamard,
            "not" => CatalogGate::Not,
            "cnot" => CatalogGate::Cnot,
            "swap" => CatalogGate::Swap,
            "toffoli" => CatalogGate::Toffoli,
            "fredkin" => CatalogGate::Fredkin,
            _ => return Err(GateError::UnknownGate(s.to_string())),
        })
    }
}

impl CatalogGate {
    /// Reference unitary of the gate (closed form).
    pub fn unitary(self) -> GateUnitary {
        match self {
            CatalogGate::Mixing => mixing_gate(MixingBranch::QuarterWave),
            CatalogGate::Phase(phi) => phase_shift_gate(phi),
            CatalogGate::Hadamard => hadamard_gate(),
            CatalogGate::Not => not_gate(),
            CatalogGate::Cnot => cnot_gate(),
            CatalogGate::Swap => swap_gate(),
            CatalogGate::Toffoli => toffoli_gate(),
            CatalogGate::Fredkin => fredkin_gate(),
        }
    }

    /// Unitary realised from the solved wire network, where one exists.
    pub fn network_unitary(self) -> Option<Result<GateUnitary, GateError>> {
        match self {
            CatalogGate::Mixing => Some(mixing_gate_from_network(MATCHED_Z_RATIO, PI / 2.0, 1e-9)),
            CatalogGate::Hadamard => Some(hadamard_from_network()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::solve;
    use crate::unitary::{equal_up_to_phase, tensor};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matched_bridge_has_no_reflection_at_quarter_wave() {
        let net = build_mixing_network(MATCHED_Z_RATIO, 1.0).unwrap();
        let sol = solve(&net, PI / 2.0, "in0").unwrap();
        assert!(sol.reflection.norm() < 1e-9);
        assert!(sol.transmission("in1").unwrap().norm() < 1e-9);
        assert!((sol.transmission("out0").unwrap() - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-9);
        assert!((sol.transmission("out1").unwrap() - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn mixing_counting_rule() {
        let net = build_mixing_network(MATCHED_Z_RATIO, 1.0).unwrap();
        assert_eq!(net.degrees(), vec![3, 3, 3, 3]);
        let sys = crate::scattering::assemble(&net, 1.0).unwrap();
        assert_eq!(sys.len(), 12);
        assert_eq!(sys.matrix.shape(), (12, 12));
    }

    #[test]
    fn network_mixing_matches_closed_form() {
        let quarter = mixing_gate_from_network(MATCHED_Z_RATIO, PI / 2.0, 1e-9).unwrap();
        assert!(quarter.max_abs_diff(&mixing_gate(MixingBranch::QuarterWave)) < 1e-9);
        let three = mixing_gate_from_network(MATCHED_Z_RATIO, 3.0 * PI / 2.0, 1e-9).unwrap();
        assert!(three.max_abs_diff(&mixing_gate(MixingBranch::ThreeQuarterWave)) < 1e-9);
    }

    #[test]
    fn unmatched_bridge_reflects() {
        let net = build_mixing_network(1.0, 1.0).unwrap();
        let sol = solve(&net, PI / 2.0, "in0").unwrap();
        assert!(sol.reflection.norm() > 1e-3);
        assert!(matches!(
            mixing_gate_from_network(1.0, PI / 2.0, 1e-9),
            Err(GateError::ReflectionTooLarge(_))
        ));
    }

    #[test]
    fn off_resonance_extraction_fails() {
        match mixing_gate_from_network(MATCHED_Z_RATIO, 1.0, 1e-6) {
            Err(GateError::ReflectionTooLarge(r)) => assert!(r > 1e-3),
            other => panic!("expected ReflectionTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_wires_give_phased_identity() {
        let k = 0.8;
        let seg = |id: &str, from: &str, to: &str| Segment {
            id: id.into(),
            from: from.into(),
            to: to.into(),
            impedance: 1.0,
            length: 1.0,
        };
        let port = |id: &str, node: &str| Port {
            id: id.into(),
            node: node.into(),
            impedance: 1.0,
            role: PortRole::Input,
            label: None,
        };
        let net = NetworkGraph::new(
            ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect(),
            vec![seg("w0", "a", "b"), seg("w1", "c", "d")],
            vec![port("in0", "a"), port("out0", "b"), port("in1", "c"), port("out1", "d")],
        )
        .unwrap();
        let s = full_smatrix(&net, k).unwrap();
        let u = extract_two_port_unitary(&s, ["in0", "in1"], ["out0", "out1"], 1e-9).unwrap();
        let expected = GateUnitary::identity(1).scaled(Complex64::from_polar(1.0, k)).unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn phase_shift_values() {
        assert!(phase_shift_gate(0.0).max_abs_diff(&GateUnitary::identity(1)) < 1e-15);
        let z = GateUnitary::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]]).unwrap();
        assert!(phase_shift_gate(PI).max_abs_diff(&z) < 1e-15);
        assert!((phase_shift_gate(3.0 * PI / 2.0).get(1, 1) - c(0.0, -1.0)).norm() < 1e-15);
        assert!((phase_from_lengths(2.0, 1.0, 1.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_from_closed_form_mixing() {
        // oracle: hand-multiplied diag(1,−i)·[[i,−1],[−1,i]]·diag(1,−i) = [[i, i], [i, −i]]
        let h = hadamard_from_mixing(&mixing_gate(MixingBranch::QuarterWave)).unwrap();
        assert!(h.max_abs_diff(&hadamard_gate()) < 1e-12);
        let hh = compose(&hadamard_gate(), &hadamard_gate()).unwrap();
        assert!(hh.max_abs_diff(&GateUnitary::identity(1)) < 1e-15);
        assert!((hadamard_gate().get(0, 0) - FRAC_1_SQRT_2).norm() < 1e-16);
        assert!((hadamard_gate().get(1, 0) - FRAC_1_SQRT_2).norm() < 1e-16);
    }

    #[test]
    fn named_permutations() {
        let x = c(1.0, 0.0);
        let o = c(0.0, 0.0);
        let cnot = GateUnitary::from_rows(&[&[x, o, o, o], &[o, x, o, o], &[o, o, o, x], &[o, o, x, o]]).unwrap();
        assert_eq!(cnot_gate(), cnot);
        assert_eq!(not_gate().get(0, 1), x);
        assert_eq!(swap_gate().get(0b10, 0b01), x);
        assert_eq!(fredkin_gate().get(0b110, 0b101), x);
        assert_eq!(toffoli_gate().get(0b111, 0b110), x);
        assert_eq!(permutation_gate(2, &[]).unwrap(), GateUnitary::identity(2));
        let t2 = compose(&toffoli_gate(), &toffoli_gate()).unwrap();
        assert_eq!(t2, GateUnitary::identity(3));
        // CNOT = |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ X
        assert_eq!(tensor(&GateUnitary::identity(1), &not_gate()).get(1, 0), x);
    }

    #[test]
    fn permutation_rejects_bad_input() {
        assert!(matches!(permutation_gate(2, &[("10", "1")]), Err(GateError::InvalidLabel(_))));
        assert!(matches!(
            permutation_gate(2, &[("10", "11"), ("11", "01")]),
            Err(GateError::OverlappingSwaps(_))
        ));
        assert!(permutation_gate(2, &[("10", "10")]).is_err());
    }

    #[test]
    fn permutation_entries_are_zero_or_one() {
        for g in [not_gate(), cnot_gate(), swap_gate(), toffoli_gate(), fredkin_gate()] {
            for r in 0..g.dimension() {
                let row_ones = (0..g.dimension()).filter(|&c| g.get(r, c) == x1()).count();
                let col_ones = (0..g.dimension()).filter(|&c| g.get(c, r) == x1()).count();
                assert_eq!(row_ones, 1);
                assert_eq!(col_ones, 1);
                assert!((0..g.dimension()).all(|c| g.get(r, c) == x1() || g.get(r, c) == c0()));
            }
        }
    }

    fn x1() -> Complex64 {
        c(1.0, 0.0)
    }

    fn c0() -> Complex64 {
        c(0.0, 0.0)
    }

    #[test]
    fn layout_length_delta() {
        let layout = permutation_layout(2, &[("10", "11")], PI).unwrap();
        assert_eq!(layout.length_delta, 2.0);
        assert_eq!(layout.crossed_wires, vec!["|10⟩", "|11⟩"]);
        assert_eq!(layout.straight_wires, vec!["|00⟩", "|01⟩"]);
        assert!(permutation_layout(2, &[("10", "11")], 0.0).is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn catalog_names() {
        assert_eq!("hadamard".parse::<CatalogGate>().unwrap(), CatalogGate::Hadamard);
        assert_eq!("phase:3.14159".parse::<CatalogGate>().unwrap(), CatalogGate::Phase(3.14159));
        assert!("phase:x".parse::<CatalogGate>().is_err());
        assert!("bogus".parse::<CatalogGate>().is_err());
        let h = CatalogGate::Hadamard.network_unitary().unwrap().unwrap();
        assert!(equal_up_to_phase(&h, &hadamard_gate(), 1e-12));
        assert!(CatalogGate::Cnot.network_unitary().is_none());
    }
}
