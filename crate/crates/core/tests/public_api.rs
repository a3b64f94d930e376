use mipt_qfi_core::*;

#[test]
fn invalid_inputs_are_rejected_with_typed_errors() {
    assert!(matches!(ModelParams::periodic(5, 0.3, 1.0), Err(QfiError::InvalidParameter(_))));
    assert!(matches!(ModelParams::periodic(8, 0.3, -1.0), Err(QfiError::InvalidParameter(_))));
    assert!(matches!(ModelParams::periodic(8, f64::NAN, 1.0), Err(QfiError::InvalidParameter(_))));
    assert!(matches!(critical_gamma(1.0), Err(QfiError::NoCriticalPoint(..))));
    assert!(matches!(critical_gamma(-1.5), Err(QfiError::NoCriticalPoint(..))));
    assert!(matches!(
        critical_mode_coefficient(0.6, critical_gamma(0.6).unwrap()),
        Err(QfiError::DivergentAtCritical { .. })
    ));
    let p = ModelParams::periodic(8, 0.3, 1.0).unwrap();
    assert!(qfi_quench(&p, -1.0).is_err());
    assert!(matches!(fit_power_law(&[1.0, 2.0], &[1.0, 2.0]), Err(QfiError::Fit(_))));
    assert!(matches!(fit_power_law(&[1.0, 2.0, -3.0], &[1.0, 2.0, 3.0]), Err(QfiError::Fit(_))));
}

#[test]
fn quench_qfi_is_zero_at_t0_and_positive_after() {
    for gamma in [0.2, 2.0, 5.0] {
        let p = ModelParams::periodic(16, 0.3, gamma).unwrap();
        assert_eq!(qfi_quench(&p, 0.0).unwrap(), 0.0);
        let f = qfi_quench(&p, 1.0).unwrap();
        assert!(f > 0.0 && f.is_finite(), "gamma={gamma}: F={f}");
    }
}

#[test]
fn closed_form_and_quadrature_agree_across_phases() {
    for (h, gamma) in [(0.3, 2.0), (0.6, 4.0), (0.0, 0.5)] {
        let p = ModelParams::periodic(8, h, gamma).unwrap();
        for k in momentum_grid(8).unwrap() {
            let (mode, spec) = mode_system(&p, k);
            let a = r_matrix(&mode, &spec, 0.9, RMethod::ClosedForm).unwrap();
            let b = r_matrix(&mode, &spec, 0.9, RMethod::Quadrature).unwrap();
            for (x, y) in [(a.a, b.a), (a.b, b.b), (a.c, b.c)] {
                assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "h={h} gamma={gamma} k={k}");
            }
        }
    }
}

#[test]
fn fbar_peaks_at_the_transition() {
    let gc = critical_gamma(0.6).unwrap();
    let base = ModelParams::periodic(64, 0.6, 0.0).unwrap();
    let at = |g: f64| fbar(&base.with_gamma(g)).unwrap();
    let near = [gc - 0.05, gc + 0.05].map(at);
    for g in [0.5 * gc, 0.8 * gc, 1.2 * gc, 1.5 * gc] {
        let v = at(g);
        assert!(near.iter().all(|&n| n > v), "gamma={g}: {v} vs {near:?}");
    }
}

#[test]
fn vacuum_witness_is_the_separable_bound() {
    for n in [4, 10, 32] {
        let s = init_state(n, InitialState::Vacuum).unwrap();
        assert!((witness_qfi(&s) - n as f64).abs() < 1e-12);
        assert_eq!(entanglement_depth(witness_qfi(&s), n), 1);
    }
}

#[test]
fn evolved_frames_stay_valid_gaussian_states() {
    let n = 24;
    for gamma in [0.0, 0.75, 4.5] {
        let p = ModelParams::open(n, 0.0, gamma).unwrap();
        let s = evolve(&init_state(n, InitialState::Vacuum).unwrap(), &p, 0.05, 100).unwrap();
        assert!(s.orthonormality_defect() < 1e-10);
        assert!(s.isotropy_defect() < 1e-10);
        let f = witness_qfi(&s);
        assert!(f.is_finite() && f > 0.0 && f <= (n * n) as f64, "gamma={gamma}: F={f}");
        assert!((1..=n).contains(&entanglement_depth(f, n)));
    }
}
