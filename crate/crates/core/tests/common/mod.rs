#![allow(dead_code)]

pub mod oracle;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zeroarea::models::{
    constant_detuning_pulse, parabolic, phase_jump, superparabolic, DriveModel, ParabolicParams,
};
use zeroarea::SimConfig;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_params(rng: &mut ChaCha8Rng) -> ParabolicParams {
    ParabolicParams::new(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.0..5.0),
        rng.gen_range(-10.0..10.0),
    )
}

/// A random drive from every family the library builds, with its window.
pub fn random_model(rng: &mut ChaCha8Rng) -> (DriveModel, f64) {
    let p = random_params(rng);
    let model = match rng.gen_range(0..5) {
        0 => parabolic(p).unwrap(),
        1 => phase_jump(&parabolic(p).unwrap(), 0.0).unwrap(),
        2 => superparabolic(ParabolicParams { a: 1.0, n: 2, ..p }).unwrap(),
        3 => phase_jump(
            &superparabolic(ParabolicParams { a: 1.0, n: 2, ..p }).unwrap(),
            0.0,
        )
        .unwrap(),
        _ => constant_detuning_pulse(p.c, p.b, rng.gen_range(0.5..3.0)).unwrap(),
    };
    let t = SimConfig::default().half_width_for(&model).unwrap();
    (model, t)
}

pub fn max_entry_diff(a: &zeroarea::Mat2, b: &zeroarea::Mat2) -> f64 {
    (*a - *b).max_abs()
}
