mod common;

use common::oracle::{self, Drive};
use num_complex::Complex64 as C;
use rand::Rng;
use zeroarea::adiabatic::{
    adiabatic_sample, mixing_angle, propagate_adiabatic, rotation, to_adiabatic, to_diabatic,
};
use zeroarea::models::{constant_detuning_pulse, parabolic, phase_jump, ParabolicParams};
use zeroarea::propagate::{evolve_state, final_state};
use zeroarea::{
    propagate, transition_probability, Basis, FieldSample, Mat2, Scheme, SimConfig, StateVector,
};

#[test]
fn composition_and_time_reversal() {
    let mut rng = common::rng(11);
    let cfg = SimConfig::default();
    for _ in 0..60 {
        let (m, t) = common::random_model(&mut rng);
        let mut ts = [
            rng.gen_range(-t..t),
            rng.gen_range(-t..t),
            rng.gen_range(-t..t),
        ];
        ts.sort_by(f64::total_cmp);
        let whole = propagate(&m, ts[0], ts[2], &cfg).unwrap();
        let first = propagate(&m, ts[0], ts[1], &cfg).unwrap();
        let second = propagate(&m, ts[1], ts[2], &cfg).unwrap();
        let split = second.after(&first).unwrap();
        assert!(
            common::max_entry_diff(&whole.mat, &split.mat) <= 1e-9,
            "{} {:?}",
            m.label(),
            ts
        );
        let back = propagate(&m, ts[2], ts[0], &cfg).unwrap();
        assert!(common::max_entry_diff(&back.mat, &whole.adjoint().mat) <= 1e-9);
        assert!(whole.unitarity_defect() <= 1e-12);
    }
}

#[test]
fn sigma_z_conjugation_under_phase_flip() {
    let mut rng = common::rng(12);
    let cfg = SimConfig::default();
    for _ in 0..10 {
        let p = common::random_params(&mut rng);
        let reference = parabolic(p).unwrap();
        let flipped = phase_jump(&reference, 0.0).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let u = propagate(&reference, 0.0, t, &cfg).unwrap();
            let v = propagate(&flipped, 0.0, t, &cfg).unwrap();
            assert!(common::max_entry_diff(&v.mat, &u.mat.sz_conjugate()) <= 1e-9);
        }
    }
}

#[test]
fn tolerance_halving_changes_little() {
    let m = parabolic(ParabolicParams::with_bc(1.5, 2.0)).unwrap();
    let p1 = transition_probability(&m, &SimConfig::default()).unwrap();
    let p2 = transition_probability(&m, &SimConfig::default().with_tol(5e-11)).unwrap();
    assert!((p1 - p2).abs() < 1e-7);
}

#[test]
fn matches_fine_step_reference_integrator() {
    let cases = [
        (1.0, 1.0, 0.0, false),
        (1.0, 2.0, 3.0, true),
        (0.7, 0.4, -2.0, false),
        (1.3, 3.0, 5.0, true),
    ];
    for &(a, b, c, jump) in &cases {
        let p = ParabolicParams::new(a, b, c);
        let m = parabolic(p).unwrap();
        let m = if jump {
            phase_jump(&m, 0.0).unwrap()
        } else {
            m
        };
        let (t0, t1) = (-3.0, 2.5);
        let alpha = move |t: f64| a * t * t - c;
        let v = move |t: f64| if jump && t >= 0.0 { -b } else { b };
        let want = oracle::propagator(
            &Drive {
                alpha: &alpha,
                v: &v,
            },
            t0,
            t1,
            &[0.0],
            2e-3,
        );
        let got = propagate(&m, t0, t1, &SimConfig::default()).unwrap();
        let want = Mat2(want);
        assert!(
            common::max_entry_diff(&got.mat, &want) <= 1e-8,
            "{a} {b} {c} {jump}"
        );
        let mid = propagate(
            &m,
            t0,
            t1,
            &SimConfig {
                scheme: Scheme::Midpoint,
                ..SimConfig::default().with_tol(1e-12)
            },
        )
        .unwrap();
        assert!(
            common::max_entry_diff(&mid.mat, &want) <= 1e-8,
            "{}",
            common::max_entry_diff(&mid.mat, &want)
        );
    }
}

#[test]
fn state_evolution_is_first_column() {
    let m = parabolic(ParabolicParams::with_bc(1.0, 1.0)).unwrap();
    let cfg = SimConfig::default();
    let u = propagate(&m, -2.0, 2.0, &cfg).unwrap();
    let psi = evolve_state(&u, &StateVector::ground(Basis::Diabatic)).unwrap();
    assert_eq!(psi.c_excited, u.get(0, 1));
    assert_eq!(psi.c_ground, u.get(1, 1));
    let fs = final_state(&m, &cfg).unwrap();
    assert!((fs.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn adiabatic_propagation_connects_to_diabatic() {
    let cfg = SimConfig::default();
    let mut rng = common::rng(13);
    for _ in 0..10 {
        let p = common::random_params(&mut rng);
        let p = ParabolicParams {
            b: p.b.max(0.3),
            ..p
        };
        let m = parabolic(p).unwrap();
        let (t0, t1) = (rng.gen_range(-4.0..-0.5), rng.gen_range(0.5..4.0));
        let ud = propagate(&m, t0, t1, &cfg).unwrap();
        let ua = propagate_adiabatic(&m, t0, t1, &cfg).unwrap();
        assert_eq!(ua.basis, Basis::Adiabatic);
        let mapped = to_adiabatic(&ud, &m, t1, t0).unwrap();
        assert!(
            common::max_entry_diff(&mapped.mat, &ua.mat) <= 1e-8,
            "{p:?}"
        );
        let round = to_diabatic(&mapped, &m, t1, t0).unwrap();
        assert!(common::max_entry_diff(&round.mat, &ud.mat) <= 1e-12);
    }
}

#[test]
fn rotation_diagonalises_the_hamiltonian() {
    let mut rng = common::rng(14);
    for _ in 0..200 {
        let s = FieldSample::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            if rng.gen() { 0.0 } else { std::f64::consts::PI },
        );
        let r = rotation(&s).unwrap();
        let d = r.adjoint().mat * s.hamiltonian() * r.mat;
        let om = s.splitting();
        let want = Mat2::diag(C::new(om, 0.0), C::new(-om, 0.0));
        assert!(common::max_entry_diff(&d, &want) <= 1e-12 * om.max(1.0));
        assert!(r.unitarity_defect() <= 1e-14);
    }
}

#[test]
fn mixing_angle_is_continuous_through_the_crossings() {
    let m = parabolic(ParabolicParams::with_bc(0.5, 4.0)).unwrap();
    let mut prev: Option<f64> = None;
    let mut t = -6.0;
    while t <= 6.0 {
        let th = mixing_angle(&m.sample(t)).unwrap();
        assert!((0.0..=std::f64::consts::PI).contains(&th));
        if let Some(p) = prev {
            assert!((th - p).abs() < 0.05, "jump at t = {t}");
        }
        prev = Some(th);
        t += 1e-3;
    }
}

#[test]
fn energies_are_plus_minus_splitting() {
    let m = parabolic(ParabolicParams::with_bc(1.0, 2.0)).unwrap();
    for t in [-2.0, -0.3, 0.7, 3.0] {
        let a = adiabatic_sample(&m, t).unwrap();
        let om = m.alpha(t).hypot(m.v(t));
        assert!((a.e_plus - om).abs() < 1e-14 && (a.e_minus + om).abs() < 1e-14);
    }
}

#[test]
fn compact_pulse_needs_no_window_correction() {
    let m = constant_detuning_pulse(0.0, std::f64::consts::PI / 8.0, 1.0).unwrap();
    let p = transition_probability(&m, &SimConfig::default()).unwrap();
    assert!((p - 0.5).abs() < 1e-10, "{p}");
}
