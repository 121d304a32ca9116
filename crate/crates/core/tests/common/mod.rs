#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavenet::{GateUnitary, NetworkGraph, Port, PortRole, Segment};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn load_fixture(name: &str) -> NetworkGraph {
    NetworkGraph::from_json(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

/// Connected lossless network with 2..=max_nodes nodes: a random spanning
/// tree, a few extra (possibly parallel or looping) segments, and 1..=4 ports.
pub fn random_network(seed: u64, max_nodes: usize) -> NetworkGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes);
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut segments = Vec::new();
    let mut seg = |rng: &mut ChaCha8Rng, a: usize, b: usize| {
        let id = format!("s{}", segments.len());
        segments.push(Segment {
            id,
            from: nodes[a].clone(),
            to: nodes[b].clone(),
            impedance: rng.random_range(0.3..3.0),
            length: rng.random_range(0.2..2.0),
        });
    };
    for i in 1..n {
        let parent = rng.random_range(0..i);
        seg(&mut rng, parent, i);
    }
    for _ in 0..rng.random_range(0..=n) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        seg(&mut rng, a, b);
    }
    let ports = (0..rng.random_range(1..=4))
        .map(|p| Port {
            id: format!("p{p}"),
            node: nodes[rng.random_range(0..n)].clone(),
            impedance: rng.random_range(0.3..3.0),
            role: if p % 2 == 0 { PortRole::Input } else { PortRole::Output },
            label: None,
        })
        .collect();
    NetworkGraph::new(nodes, segments, ports).unwrap()
}

/// Haar-ish random unitary from the QR factor of a random complex matrix.
pub fn random_unitary(seed: u64, num_qubits: usize) -> GateUnitary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1 << num_qubits;
    let m = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    GateUnitary::new(m.qr().q()).unwrap()
}

/// Multiplicative order of `a` mod `n` by cycle enumeration.
pub fn brute_period(a: u64, n: u64) -> u64 {
    let mut v = a % n;
    let mut r = 1;
    while v != 1 {
        v = v * a % n;
        r += 1;
    }
    r
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}
