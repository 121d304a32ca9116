mod common;

use proptest::prelude::*;
use wavenet::shor::{
    compiled_shor_15_11, extract_period, factor_from_period, factor_with_retries, mod_exp,
    period_finding_before_qft, reference_period_finding, run_full_pipeline, uncompile, Mode, PipelineOptions,
    ShorInstance, ShorReport,
};
use wavenet::ShorError;

use common::{brute_period, gcd};

/// Odd composites up to 33 with every coprime base.
fn instances() -> Vec<(u64, u64)> {
    let composites = [9u64, 15, 21, 25, 27, 33];
    composites
        .iter()
        .flat_map(|&n| (2..n).filter(move |&a| gcd(a, n) == 1).map(move |a| (n, a)))
        .collect()
}

#[test]
fn modular_exponentiation_matches_repeated_product() {
    for (n, a) in instances() {
        let mut v = 1;
        for x in 0..40 {
            assert_eq!(mod_exp(a, x, n), v, "{a}^{x} mod {n}");
            v = v * a % n;
        }
    }
}

#[test]
fn ancilla_holds_powers_before_qft() {
    for (n, a) in instances().into_iter().filter(|&(n, _)| n <= 21) {
        let inst = ShorInstance::new(n, a, None).unwrap();
        let m = inst.num_ancilla;
        let state = period_finding_before_qft(&inst).unwrap();
        let amp = (1.0 / (1u64 << inst.num_register) as f64).sqrt();
        for (i, z) in state.amplitudes().iter().enumerate() {
            let (x, w) = ((i >> m) as u64, (i & ((1 << m) - 1)) as u64);
            let want = if w == mod_exp(a, x, n) { amp } else { 0.0 };
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12, "N={n} a={a} x={x} w={w}");
        }
    }
}

#[test]
fn register_marginal_is_uniform_on_multiples_for_power_of_two_periods() {
    for (n, a) in instances() {
        let r = brute_period(a, n);
        if !r.is_power_of_two() {
            continue;
        }
        let inst = ShorInstance::new(n, a, None).unwrap();
        if inst.total_qubits() > 12 {
            continue;
        }
        let size = 1u64 << inst.num_register;
        if r > size {
            continue;
        }
        let marginal = reference_period_finding(&inst).unwrap().marginal_leading(inst.num_register);
        for (y, p) in marginal.iter().enumerate() {
            let want = if (y as u64).is_multiple_of(size / r) { 1.0 / r as f64 } else { 0.0 };
            assert!((p - want).abs() < 1e-12, "N={n} a={a} y={y} p={p}");
        }
    }
}

#[test]
fn pipeline_factors_fifteen_for_every_base() {
    for a in [2u64, 4, 7, 8, 11, 13] {
        let run = run_full_pipeline(15, a, Mode::Reference, PipelineOptions::default()).unwrap();
        assert_eq!(run.result.period, brute_period(a, 15));
        assert_eq!(run.result.factors, Some((3, 5)));
    }
}

#[test]
fn compiled_matches_reference_marginal() {
    let opts = PipelineOptions {
        register_qubits: Some(2),
        sampling: None,
    };
    let reference = run_full_pipeline(15, 11, Mode::Reference, opts).unwrap();
    let compiled = run_full_pipeline(15, 11, Mode::Compiled, PipelineOptions::default()).unwrap();
    for (p, q) in reference.register_marginal.iter().zip(&compiled.register_marginal) {
        assert!((p - q).abs() < 1e-12);
    }
    assert_eq!(compiled.result.period, 2);
    assert_eq!(compiled.result.factors, Some((3, 5)));
}

#[test]
fn compiled_state_is_ghz_like() {
    let s = compiled_shor_15_11().unwrap();
    let terms = s.terms(1e-9);
    let labels: Vec<&str> = terms.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, vec!["|000⟩", "|011⟩", "|100⟩", "|111⟩"]);
    for (_, a) in &terms {
        assert!((a.re.abs() - 0.5).abs() < 1e-12 && a.im.abs() < 1e-12);
    }
    let full = uncompile(&s);
    assert_eq!(full.num_qubits(), 6);
    assert!((full.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn compiled_rejects_other_instances() {
    assert!(matches!(
        run_full_pipeline(15, 7, Mode::Compiled, PipelineOptions::default()),
        Err(ShorError::CompiledUnsupported)
    ));
}

#[test]
fn odd_period_is_reported_with_retry_base() {
    let inst = ShorInstance::new(21, 4, None).unwrap();
    assert_eq!(brute_period(4, 21), 3);
    match factor_from_period(&inst, 3) {
        Err(ShorError::OddPeriod { r: 3, retry_with: Some(5) }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn trivial_factor_triggers_retry() {
    let report = factor_with_retries(15, 14, Mode::Reference, PipelineOptions::default(), 4).unwrap();
    assert_eq!(report.retries.len(), 1);
    assert_eq!(report.retries[0].a, 14);
    assert_ne!(report.a, 14);
    assert_eq!(report.factors, [3, 5]);
}

#[test]
fn sampling_is_seeded() {
    let opts = PipelineOptions {
        register_qubits: None,
        sampling: Some((16, 42)),
    };
    let a = run_full_pipeline(15, 7, Mode::Reference, opts).unwrap();
    let b = run_full_pipeline(15, 7, Mode::Reference, opts).unwrap();
    assert_eq!(a.result.measured_ys, b.result.measured_ys);
    assert_eq!(a.result.measured_ys.len(), 16);
}

#[test]
fn report_round_trips_through_json() {
    let report = factor_with_retries(15, 11, Mode::Compiled, PipelineOptions::default(), 1).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    assert!(text.contains("\"N\":15"));
    assert!(text.contains("\"mode\":\"compiled\""));
    let back: ShorReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}

#[test]
fn invalid_instances_rejected() {
    for (n, a) in [(14, 3), (13, 2), (15, 5), (15, 0), (15, 15)] {
        assert!(matches!(ShorInstance::new(n, a, None), Err(ShorError::InvalidInstance(_))), "N={n} a={a}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn period_recovered_from_ideal_readouts(idx in 0usize..1000, nbits in 4usize..10) {
        let all = instances();
        let (n, a) = all[idx % all.len()];
        let r = brute_period(a, n);
        prop_assume!(r.is_power_of_two() && r <= 1 << nbits);
        let size = 1u64 << nbits;
        let ys: Vec<u64> = (0..r).map(|j| j * size / r).collect();
        prop_assert_eq!(extract_period(&ys, nbits).unwrap(), r);
    }

    #[test]
    fn period_is_a_period(idx in 0usize..1000, x in 0u64..200) {
        let all = instances();
        let (n, a) = all[idx % all.len()];
        let r = brute_period(a, n);
        prop_assert_eq!(mod_exp(a, x + r, n), mod_exp(a, x, n));
        prop_assert_eq!(mod_exp(a, r, n), 1);
    }

    #[test]
    fn factors_are_nontrivial_divisors(idx in 0usize..1000) {
        let all = instances();
        let (n, a) = all[idx % all.len()];
        let inst = ShorInstance::new(n, a, None).unwrap();
        match factor_from_period(&inst, brute_period(a, n)) {
            Ok((p, q)) => {
                prop_assert_eq!(p * q, n);
                prop_assert!(p > 1 && q > 1 && p <= q);
            }
            Err(ShorError::OddPeriod { r, .. }) => prop_assert_eq!(r % 2, 1),
            Err(ShorError::TrivialFactor { r, .. }) => {
                prop_assert_eq!(mod_exp(a, r / 2, n), n - 1);
            }
            Err(e) => prop_assert!(false, "{e:?}"),
        }
    }

    #[test]
    fn wrong_period_not_verified(idx in 0usize..1000, bump in 1u64..5) {
        let all = instances();
        let (n, a) = all[idx % all.len()];
        let r = brute_period(a, n);
        let candidate = r + bump;
        prop_assume!(mod_exp(a, candidate, n) != 1);
        let inst = ShorInstance::new(n, a, None).unwrap();
        let is_not_verified = matches!(
            factor_from_period(&inst, candidate),
            Err(ShorError::PeriodNotVerified { .. })
        );
        prop_assert!(is_not_verified);
    }
}
