use collective_decay::linalg::{herm_eig, kron, ComplexMatrix, C64};
use collective_decay::measures::{
    concurrence_general, concurrence_xstate, l1_coherence, l1_coherence_xstate, qfi_spectral,
    qfi_xstate, FisherObservable,
};
use collective_decay::params::{BathSpec, MemorySpec};
use collective_decay::xstate::{propagate, SymXState};
use proptest::prelude::*;

fn xstate() -> impl Strategy<Value = SymXState> {
    (
        0.01f64..0.49,
        0.0f64..1.0,
        -3.2f64..3.2,
        0.0f64..1.0,
        -3.2f64..3.2,
    )
        .prop_map(|(r22, m23, p23, m14, p14)| {
            let r11 = 0.5 - r22;
            SymXState::new(
                r11,
                r22,
                C64::from_polar(m23 * r22, p23),
                C64::from_polar(m14 * r11, p14),
            )
            .unwrap()
        })
}

fn memory() -> impl Strategy<Value = MemorySpec> {
    prop_oneof![
        Just(MemorySpec::Markov),
        (0.05f64..20.0).prop_map(MemorySpec::Finite)
    ]
}

fn hermitian() -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16).prop_map(|v| {
        let m = ComplexMatrix::new(4, v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
            .unwrap();
        (&m + &m.adjoint()).scale_re(0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, rng_seed: prop::test_runner::RngSeed::Fixed(20_171_016), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn propagation_keeps_a_physical_state(s in xstate(), a in 0.0f64..=1.0, n in 0.0f64..3.0, m in memory(), t in 0.0f64..20.0) {
        let out = propagate(&s, &BathSpec::new(1.0, n).unwrap(), a, m, t).unwrap();
        prop_assert!((out.r11 + out.r22 - 0.5).abs() < 1e-12);
        prop_assert!(out.is_physical(1e-12));
    }

    #[test]
    fn markov_propagation_is_a_semigroup(s in xstate(), a in 0.0f64..=1.0, n in 0.0f64..2.0, t1 in 0.0f64..3.0, t2 in 0.0f64..3.0) {
        let b = BathSpec::new(1.0, n).unwrap();
        let direct = propagate(&s, &b, a, MemorySpec::Markov, t1 + t2).unwrap();
        let mid = propagate(&s, &b, a, MemorySpec::Markov, t1).unwrap();
        let stepped = propagate(&mid, &b, a, MemorySpec::Markov, t2).unwrap();
        prop_assert!(direct.max_abs_diff(&stepped) < 1e-12);
    }

    #[test]
    fn shortcut_measures_match_general_ones(s in xstate(), phi in -3.2f64..3.2) {
        let rho = s.to_density().unwrap();
        prop_assert!((l1_coherence(&rho) - l1_coherence_xstate(&s)).abs() < 1e-14);
        let obs = FisherObservable::new(phi);
        prop_assert!((qfi_spectral(&rho, &obs).unwrap() - qfi_xstate(&s, &obs).unwrap()).abs() < 1e-10);
        let short = concurrence_xstate(&s);
        let general = concurrence_general(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&general));
        // sqrt of a near-zero spin-flip eigenvalue limits the absolute accuracy
        prop_assert!((general - 2.0 * short).abs() < 1e-6);
    }

    #[test]
    fn eigen_decomposition_reconstructs(h in hermitian()) {
        let eig = herm_eig(&h).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let back = eig.map_spectrum(|l| l);
        prop_assert!(back.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn kron_respects_adjoint(a in hermitian(), b in hermitian()) {
        let lhs = kron(&a, &b).adjoint();
        let rhs = kron(&a.adjoint(), &b.adjoint());
        prop_assert!(lhs.max_abs_diff(&rhs) == 0.0);
    }
}
