//! Frequency-domain scattering on a [`NetworkGraph`].
//!
//! Every segment carries a forward amplitude `f` (travelling from its `from`
//! node to its `to` node) and a backward amplitude `g`, both expressed as
//! currents. At the near end the voltage is `Z(f + g)` and the current leaving
//! the node is `f − g`; at the far end the phases advance to `f e^{ikℓ}` and
//! `g e^{−ikℓ}`. A port carries a known incident current `a` and an unknown
//! outgoing current `b`, with voltage `Z(a + b)` and net current `a − b` into
//! its node. Each node contributes `d − 1` voltage-continuity equations and one
//! current-conservation equation, which makes the system square.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ModelError, SolverError};
use crate::linalg::{solve_dense, CONDITION_LIMIT};
use crate::network::NetworkGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unknown {
    Forward(usize),
    Backward(usize),
    Outgoing(usize),
}

/// The assembled Kirchhoff system `A x = D a`, where `a` is the vector of
/// incident port currents. `rhs` is the drive for a single unit injection.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
    pub unknown_labels: Vec<String>,
    drive: DMatrix<Complex64>,
}

impl LinearSystem {
    pub fn len(&self) -> usize {
        self.unknown_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknown_labels.is_empty()
    }

    /// Right-hand side for unit incident current on port `port` (declaration index).
    pub fn drive_column(&self, port: usize) -> DVector<Complex64> {
        self.drive.column(port).into_owned()
    }
}

#[derive(Clone, Copy)]
struct Term {
    unknown: Unknown,
    coeff: Complex64,
}

/// Voltage and inward current of one line end at a node, as linear forms.
struct Terminal {
    voltage: Vec<Term>,
    current: Vec<Term>,
    /// (port index, voltage coefficient, current coefficient) for the incident wave.
    incident: Option<(usize, f64, f64)>,
}

fn unknown_index(u: Unknown, segments: usize) -> usize {
    match u {
        Unknown::Forward(s) => 2 * s,
        Unknown::Backward(s) => 2 * s + 1,
        Unknown::Outgoing(p) => 2 * segments + p,
    }
}

/// Builds the linear system at wavenumber `k` (units of `1/ℓ`).
pub fn assemble(network: &NetworkGraph, k: f64) -> Result<LinearSystem, SolverError> {
    let n_seg = network.segments().len();
    let n_port = network.ports().len();
    let n_unknown = 2 * n_seg + n_port;

    let mut terminals: Vec<Vec<Terminal>> = (0..network.nodes().len()).map(|_| Vec::new()).collect();
    for (s, seg) in network.segments().iter().enumerate() {
        let z = seg.impedance;
        let phase = Complex64::from_polar(1.0, k * seg.length);
        let inv = phase.conj();
        let near = network.node_index(&seg.from).expect("validated");
        let far = network.node_index(&seg.to).expect("validated");
        terminals[near].push(Terminal {
            voltage: vec![
                Term { unknown: Unknown::Forward(s), coeff: z.into() },
                Term { unknown: Unknown::Backward(s), coeff: z.into() },
            ],
            current: vec![
                Term { unknown: Unknown::Forward(s), coeff: (-1.0).into() },
                Term { unknown: Unknown::Backward(s), coeff: 1.0.into() },
            ],
            incident: None,
        });
        terminals[far].push(Terminal {
            voltage: vec![
                Term { unknown: Unknown::Forward(s), coeff: phase * z },
                Term { unknown: Unknown::Backward(s), coeff: inv * z },
            ],
            current: vec![
                Term { unknown: Unknown::Forward(s), coeff: phase },
                Term { unknown: Unknown::Backward(s), coeff: -inv },
            ],
            incident: None,
        });
    }
    for (p, port) in network.ports().iter().enumerate() {
        let node = network.node_index(&port.node).expect("validated");
        terminals[node].push(Terminal {
            voltage: vec![Term { unknown: Unknown::Outgoing(p), coeff: port.impedance.into() }],
            current: vec![Term { unknown: Unknown::Outgoing(p), coeff: (-1.0).into() }],
            incident: Some((p, port.impedance, 1.0)),
        });
    }

    let mut matrix = DMatrix::zeros(n_unknown, n_unknown);
    let mut drive = DMatrix::zeros(n_unknown, n_port);
    let mut row = 0;
    for (node, ends) in terminals.iter().enumerate() {
        if ends.is_empty() {
            return Err(ModelError::MalformedNetwork(format!(
                "node `{}` has degree 0",
                network.nodes()[node]
            ))
            .into());
        }
        let reference = &ends[0];
        for other in &ends[1..] {
            for t in &other.voltage {
                matrix[(row, unknown_index(t.unknown, n_seg))] += t.coeff;
            }
            for t in &reference.voltage {
                matrix[(row, unknown_index(t.unknown, n_seg))] -= t.coeff;
            }
            if let Some((p, zv, _)) = other.incident {
                drive[(row, p)] -= Complex64::from(zv);
            }
            if let Some((p, zv, _)) = reference.incident {
                drive[(row, p)] += Complex64::from(zv);
            }
            row += 1;
        }
        for end in ends {
            for t in &end.current {
                matrix[(row, unknown_index(t.unknown, n_seg))] += t.coeff;
            }
            if let Some((p, _, ci)) = end.incident {
                drive[(row, p)] -= Complex64::from(ci);
            }
        }
        row += 1;
    }
    debug_assert_eq!(row, n_unknown);

    let mut unknown_labels = Vec::with_capacity(n_unknown);
    for seg in network.segments() {
        unknown_labels.push(format!("{}.forward", seg.id));
        unknown_labels.push(format!("{}.backward", seg.id));
    }
    for port in network.ports() {
        unknown_labels.push(format!("{}.outgoing", port.id));
    }

    Ok(LinearSystem {
        matrix,
        rhs: DVector::zeros(n_unknown),
        unknown_labels,
        drive,
    })
}

/// Like [`assemble`], with `rhs` set for unit incident current on `injected_port`.
pub fn assemble_injected(network: &NetworkGraph, k: f64, injected_port: &str) -> Result<LinearSystem, SolverError> {
    let p = network
        .port_index(injected_port)
        .ok_or_else(|| SolverError::UnknownPort(injected_port.to_string()))?;
    let mut system = assemble(network, k)?;
    system.rhs = system.drive_column(p);
    Ok(system)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentAmplitude {
    pub segment: String,
    pub forward: Complex64,
    pub backward: Complex64,
}

/// Response to a unit incident current on one port. Coefficients are
/// current ratios relative to the incident current.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    pub wavenumber: f64,
    pub injected_port: String,
    pub reflection: Complex64,
    /// Outgoing current ratio at every other port, in declaration order.
    pub transmissions: Vec<(String, Complex64)>,
    pub segment_amplitudes: Vec<SegmentAmplitude>,
}

impl ScatteringSolution {
    pub fn transmission(&self, port: &str) -> Option<Complex64> {
        self.transmissions.iter().find(|(id, _)| id == port).map(|(_, t)| *t)
    }

    /// `|R|² + Σ |T_p|² Z_p / Z_inj`; equals 1 for a lossless network.
    pub fn power_balance(&self, network: &NetworkGraph) -> f64 {
        let z_in = network.port(&self.injected_port).expect("solution port").impedance;
        self.reflection.norm_sqr()
            + self
                .transmissions
                .iter()
                .map(|(id, t)| t.norm_sqr() * network.port(id).expect("solution port").impedance / z_in)
                .sum::<f64>()
    }
}

fn degenerate(k: f64, condition: f64) -> SolverError {
    SolverError::Degenerate { k, condition }
}

fn unpack(network: &NetworkGraph, k: f64, injected: usize, x: &DVector<Complex64>) -> ScatteringSolution {
    let n_seg = network.segments().len();
    let ports = network.ports();
    ScatteringSolution {
        wavenumber: k,
        injected_port: ports[injected].id.clone(),
        reflection: x[2 * n_seg + injected],
        transmissions: ports
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != injected)
            .map(|(p, port)| (port.id.clone(), x[2 * n_seg + p]))
            .collect(),
        segment_amplitudes: network
            .segments()
            .iter()
            .enumerate()
            .map(|(s, seg)| SegmentAmplitude {
                segment: seg.id.clone(),
                forward: x[2 * s],
                backward: x[2 * s + 1],
            })
            .collect(),
    }
}

/// Injects a unit current wave at `injected_port` and solves for every amplitude.
pub fn solve(network: &NetworkGraph, k: f64, injected_port: &str) -> Result<ScatteringSolution, SolverError> {
    let system = assemble_injected(network, k, injected_port)?;
    let x = solve_dense(&system.matrix, &system.rhs).map_err(|c| degenerate(k, c))?;
    let p = network.port_index(injected_port).expect("checked by assemble_injected");
    Ok(unpack(network, k, p, &x))
}

/// Scattering matrix in power-normalized waves `a_p = V_p⁺ / sqrt(Z_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    pub ports: Vec<String>,
    pub entries: DMatrix<Complex64>,
}

impl SMatrix {
    pub fn index(&self, port: &str) -> Option<usize> {
        self.ports.iter().position(|p| p == port)
    }

    pub fn get(&self, out_port: &str, in_port: &str) -> Option<Complex64> {
        Some(self.entries[(self.index(out_port)?, self.index(in_port)?)])
    }

    /// max |(S†S − I)_ij|
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.entries.nrows();
        let product = self.entries.adjoint() * &self.entries;
        (product - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// max |S_ij − S_ji|
    pub fn reciprocity_residual(&self) -> f64 {
        (&self.entries - self.entries.transpose())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Full S-matrix at `k`, one injection per port, sharing a single factorization.
pub fn full_smatrix(network: &NetworkGraph, k: f64) -> Result<SMatrix, SolverError> {
    let system = assemble(network, k)?;
    let n_seg = network.segments().len();
    let ports = network.ports();
    let n = ports.len();
    let lu = system.matrix.clone().lu();
    let inverse = lu.try_inverse().ok_or_else(|| degenerate(k, f64::INFINITY))?;
    let condition = crate::linalg::one_norm(&system.matrix) * crate::linalg::one_norm(&inverse);
    if !condition.is_finite() || condition > CONDITION_LIMIT {
        return Err(degenerate(k, condition));
    }
    let mut entries = DMatrix::zeros(n, n);
    for q in 0..n {
        let x = lu.solve(&system.drive_column(q)).ok_or_else(|| degenerate(k, condition))?;
        for p in 0..n {
            let scale = (ports[p].impedance / ports[q].impedance).sqrt();
            entries[(p, q)] = x[2 * n_seg + p] * scale;
        }
    }
    Ok(SMatrix {
        ports: ports.iter().map(|p| p.id.clone()).collect(),
        entries,
    })
}

/// Principal argument in (−π, π].
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: f64,
    /// `None` where the system was degenerate.
    pub transmissions: Option<Vec<Complex64>>,
    pub reflection: Option<Complex64>,
}

impl SweepRow {
    pub fn is_gap(&self) -> bool {
        self.reflection.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub injected_port: String,
    /// Ports reported as T1, T2, … in declaration order, injected port excluded.
    pub transmission_ports: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn gaps(&self) -> Vec<f64> {
        self.rows.iter().filter(|r| r.is_gap()).map(|r| r.k).collect()
    }

    pub fn csv_header(&self) -> String {
        let mut h = String::from("k");
        for j in 1..=self.transmission_ports.len() {
            write!(h, ",abs_T{j},arg_T{j}").unwrap();
        }
        h.push_str(",abs_R,arg_R");
        h
    }

    /// CSV with 17 significant digits; angles in radians, principal branch.
    /// Degenerate samples are written as `NaN`.
    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        let cols = 2 * self.transmission_ports.len() + 2;
        for row in &self.rows {
            write!(out, "{:.16e}", row.k).unwrap();
            match (&row.transmissions, row.reflection) {
                (Some(ts), Some(r)) => {
                    for z in ts.iter().chain(std::iter::once(&r)) {
                        write!(out, ",{:.16e},{:.16e}", z.norm(), principal_arg(*z)).unwrap();
                    }
                }
                _ => {
                    for _ in 0..cols {
                        out.push_str(",NaN");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Sample points of a sweep: `steps` values on `[k_min, k_max)`.
pub fn sweep_grid(k_min: f64, k_max: f64, steps: usize) -> Vec<f64> {
    let dk = (k_max - k_min) / steps as f64;
    (0..steps).map(|i| k_min + i as f64 * dk).collect()
}

pub fn sweep(
    network: &NetworkGraph,
    k_min: f64,
    k_max: f64,
    steps: usize,
    injected_port: &str,
) -> Result<SweepTable, SolverError> {
    sweep_with_threads(network, k_min, k_max, steps, injected_port, None)
}

/// Sweep with at most `threads` workers (`None` uses the global pool).
/// Row order is always ascending in k.
pub fn sweep_with_threads(
    network: &NetworkGraph,
    k_min: f64,
    k_max: f64,
    steps: usize,
    injected_port: &str,
    threads: Option<usize>,
) -> Result<SweepTable, SolverError> {
    if steps < 2 || k_min.is_nan() || k_max.is_nan() || k_min >= k_max {
        return Err(ModelError::Domain(format!(
            "sweep needs steps >= 2 and k_min < k_max, got steps={steps}, [{k_min}, {k_max})"
        ))
        .into());
    }
    let injected = network
        .port_index(injected_port)
        .ok_or_else(|| SolverError::UnknownPort(injected_port.to_string()))?;
    let grid = sweep_grid(k_min, k_max, steps);
    let eval = |&k: &f64| -> Result<SweepRow, SolverError> {
        match solve(network, k, injected_port) {
            Ok(sol) => Ok(SweepRow {
                k,
                transmissions: Some(sol.transmissions.iter().map(|(_, t)| *t).collect()),
                reflection: Some(sol.reflection),
            }),
            Err(SolverError::Degenerate { .. }) => Ok(SweepRow {
                k,
                transmissions: None,
                reflection: None,
            }),
            Err(e) => Err(e),
        }
    };
    let rows: Result<Vec<_>, _> = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(|| grid.par_iter().map(eval).collect()),
        None => grid.par_iter().map(eval).collect(),
    };
    Ok(SweepTable {
        injected_port: injected_port.to_string(),
        transmission_ports: network
            .ports()
            .iter()
            .enumerate()
            .filter(|(p, _)| *p != injected)
            .map(|(_, port)| port.id.clone())
            .collect(),
        rows: rows?,
    })
}
