use proptest::prelude::*;
use zeroarea::closed_form::{
    dynamical_phase, ica_propagator_phase_jump, ica_propagator_reference,
    phase_jump_probability_formula, reference_probability_formula, universal_probability, LzParams,
};
use zeroarea::models::ParabolicParams;

/// Composite Simpson rule with `panels` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn dynamical_phase_matches_simpson_reference() {
    let p = ParabolicParams::with_bc(1.0, 10.0);
    let end = 10f64.sqrt();
    let want = 2.0
        * simpson(
            |s| ((s * s - 10.0).powi(2) + 1.0).sqrt(),
            0.0,
            end,
            1_000_000,
        );
    let got = dynamical_phase(&p).unwrap();
    assert!(((got - want) / want).abs() <= 1e-9, "{got} vs {want}");
}

#[test]
fn chains_match_closed_forms_on_grid() {
    for i in 0..20 {
        for j in 0..20 {
            let b = 0.05 + 0.25 * i as f64;
            let c = 0.1 + 0.5 * j as f64;
            let p = ParabolicParams::with_bc(b, c);
            let jump = ica_propagator_phase_jump(&p).unwrap().p;
            let jump_formula = phase_jump_probability_formula(&p).unwrap();
            assert!(
                (jump - jump_formula).abs() <= 1e-10,
                "b={b} c={c}: {jump} vs {jump_formula}"
            );
            let reference = ica_propagator_reference(&p).unwrap().p;
            let reference_formula = reference_probability_formula(&p).unwrap();
            assert!(
                (reference - reference_formula).abs() <= 1e-10,
                "b={b} c={c}"
            );
            assert!((0.0..=1.0).contains(&reference));
        }
    }
}

proptest! {
    #[test]
    fn universal_is_strictly_increasing(alpha0 in -20.0..20.0f64, v in 0.0..20.0f64, dv in 1e-3..5.0f64) {
        prop_assume!(alpha0 != 0.0);
        let p1 = universal_probability(v, alpha0).unwrap();
        let p2 = universal_probability(v + dv, alpha0).unwrap();
        prop_assert!(p2 > p1);
        prop_assert!((0.0..1.0).contains(&p1));
    }

    #[test]
    fn envelope_is_bounded(lambda in 0.0..10.0f64) {
        let lz = LzParams::new(lambda).unwrap();
        let r2 = lz.r * lz.r;
        let env = 4.0 * r2 * (1.0 - r2);
        prop_assert!(env <= 1.0 + 1e-15);
        if (r2 - 0.5).abs() > 1e-6 {
            prop_assert!(env < 1.0);
        }
    }

    #[test]
    fn ica_probabilities_in_unit_interval(b in 0.0..6.0f64, c in 0.01..20.0f64, a in 0.2..3.0f64) {
        let p = ParabolicParams::new(a, b, c);
        let r = ica_propagator_reference(&p).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.p));
        prop_assert!(r.s_total.unitarity_defect() < 1e-12);
        let j = ica_propagator_phase_jump(&p).unwrap();
        prop_assert!((0.0..=1.0).contains(&j.p));
    }
}
