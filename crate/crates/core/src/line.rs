//! Per-unit-length parameters of a single transmission line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Capacitance and inductance per unit length, with the derived
/// characteristic impedance `sqrt(L/C)` and propagation speed `1/sqrt(LC)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineParameters {
    capacitance_per_length: f64,
    inductance_per_length: f64,
    characteristic_impedance: f64,
    propagation_speed: f64,
}

impl LineParameters {
    pub fn new(capacitance_per_length: f64, inductance_per_length: f64) -> Result<Self, ModelError> {
        for (name, v) in [
            ("capacitance", capacitance_per_length),
            ("inductance", inductance_per_length),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::Domain(format!("{name} per length must be positive, got {v}")));
            }
        }
        Ok(Self {
            capacitance_per_length,
            inductance_per_length,
            characteristic_impedance: (inductance_per_length / capacitance_per_length).sqrt(),
            propagation_speed: 1.0 / (inductance_per_length * capacitance_per_length).sqrt(),
        })
    }

    /// Line parameters of a round wire of radius `r` held at height `h`
    /// above a ground plane in a medium with permittivity `ε` and permeability `μ`:
    /// `C = 2πε / ln(2h/r)`, `L = (μ/2π) ln(2h/r)`.
    pub fn from_geometry(
        wire_radius: f64,
        height: f64,
        permittivity: f64,
        permeability: f64,
    ) -> Result<Self, ModelError> {
        for (name, v) in [
            ("wire radius", wire_radius),
            ("height", height),
            ("permittivity", permittivity),
            ("permeability", permeability),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let ratio = 2.0 * height / wire_radius;
        if ratio <= 1.0 {
            return Err(ModelError::Domain(format!(
                "2h/r = {ratio} must exceed 1 for a positive logarithm"
            )));
        }
        let log = ratio.ln();
        Self::new(2.0 * PI * permittivity / log, permeability / (2.0 * PI) * log)
    }

    pub fn capacitance_per_length(&self) -> f64 {
        self.capacitance_per_length
    }

    pub fn inductance_per_length(&self) -> f64 {
        self.inductance_per_length
    }

    pub fn characteristic_impedance(&self) -> f64 {
        self.characteristic_impedance
    }

    pub fn propagation_speed(&self) -> f64 {
        self.propagation_speed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_equal_to_two_pi_gives_c_eps_l_mu() {
        // ln(2h/r) = 2π  =>  h = r e^{2π} / 2
        let r = 1e-3;
        let h = r * (2.0 * PI).exp() / 2.0;
        let p = LineParameters::from_geometry(r, h, 3.0, 5.0).unwrap();
        assert!((p.capacitance_per_length() - 3.0).abs() < 1e-12);
        assert!((p.inductance_per_length() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn product_is_geometry_independent() {
        let eps = 8.854e-12;
        let mu = 4.0 * PI * 1e-7;
        for (r, h) in [(1e-3, 1e-2), (2e-6, 1e-3), (0.4, 0.3), (1e-9, 5.0)] {
            let p = LineParameters::from_geometry(r, h, eps, mu).unwrap();
            let lc = p.capacitance_per_length() * p.inductance_per_length();
            assert!(((lc - eps * mu) / (eps * mu)).abs() < 1e-14);
        }
    }

    #[test]
    fn free_space_wire_over_ground() {
        let (r, h) = (1e-3, 1e-2);
        let eps = 8.854e-12;
        let mu = 4.0 * PI * 1e-7;
        let p = LineParameters::from_geometry(r, h, eps, mu).unwrap();
        // ln(20) = 2.995732273553991
        let log = 2.995_732_273_553_991_f64;
        let c = 2.0 * PI * eps / log;
        let l = mu / (2.0 * PI) * log;
        assert!((p.capacitance_per_length() - c).abs() / c < 1e-14);
        assert!((p.inductance_per_length() - l).abs() / l < 1e-14);
        // Z = (ln 20 / 2π) sqrt(μ/ε) ≈ 179.7 Ω
        let z = log / (2.0 * PI) * (mu / eps).sqrt();
        assert!((p.characteristic_impedance() - z).abs() / z < 1e-12);
        assert!((p.characteristic_impedance() - 179.7).abs() < 0.1);
        let v = 1.0 / (eps * mu).sqrt();
        assert!((p.propagation_speed() - v).abs() / v < 1e-12);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(LineParameters::from_geometry(1.0, 0.5, 1.0, 1.0).is_err());
        assert!(LineParameters::from_geometry(1.0, 0.4, 1.0, 1.0).is_err());
        assert!(LineParameters::from_geometry(-1.0, 2.0, 1.0, 1.0).is_err());
        assert!(LineParameters::from_geometry(1.0, 2.0, 0.0, 1.0).is_err());
        assert!(LineParameters::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = LineParameters::new(2.0, 8.0).unwrap();
        assert_eq!(p.characteristic_impedance(), 2.0);
        assert_eq!(p.propagation_speed(), 0.25);
    }
}
