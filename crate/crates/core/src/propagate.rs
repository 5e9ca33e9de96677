//! Adaptive exponential propagation of the two-level Schrödinger equation.
//!
//! Every step is a product of closed-form SU(2) exponentials, so the
//! propagator stays unitary to rounding error no matter how coarse the step.
//! Step sizes come from step doubling. Integration segments never straddle a
//! discontinuity of the model.

use serde::{Deserialize, Serialize};

use crate::adiabatic;
use crate::error::{Error, Result};
use crate::models::DriveModel;
use crate::su2::{exp_traceless, Basis, Mat2, StateVector, Unitary2};

/// Exponential integrator used for each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// One exponential of the midpoint Hamiltonian (order 2).
    Midpoint,
    /// Two exponentials of Gauss-node combinations (commutator-free, order 4).
    CommutatorFree4,
}

impl Scheme {
    pub fn order(self) -> i32 {
        match self {
            Scheme::Midpoint => 2,
            Scheme::CommutatorFree4 => 4,
        }
    }
}

/// How the final excited population is read off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    /// `|U₁₂|²` in the bare basis at the window edges.
    Diabatic,
    /// Start and end in the instantaneous eigenstates connected to the bare
    /// states, which removes the finite-window admixture.
    Adiabatic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Half-width `T` of the window `[−T, T]`; `None` picks the smallest
    /// window satisfying the asymptotic condition.
    pub window_half_width: Option<f64>,
    pub local_error_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// `κ` in `|α(±T)| ≥ κ·max(V(±T), 1)`.
    pub window_scale_factor: f64,
    pub scheme: Scheme,
    pub projection: Projection,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            window_half_width: None,
            local_error_tol: 1e-10,
            max_step: 0.5,
            min_step: 1e-12,
            window_scale_factor: 100.0,
            scheme: Scheme::CommutatorFree4,
            projection: Projection::Adiabatic,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.window_half_width {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid(format!(
                    "window half-width must be > 0, got {t}"
                )));
            }
        }
        if !(self.local_error_tol > 0.0 && self.local_error_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "local error tolerance must be > 0, got {}",
                self.local_error_tol
            )));
        }
        if !(self.min_step > 0.0 && self.min_step <= self.max_step && self.max_step.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < min_step <= max_step, got {} and {}",
                self.min_step, self.max_step
            )));
        }
        if !(self.window_scale_factor > 1.0 && self.window_scale_factor.is_finite()) {
            return Err(Error::invalid(format!(
                "window scale factor must be > 1, got {}",
                self.window_scale_factor
            )));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.local_error_tol = tol;
        self
    }

    pub fn with_window(mut self, half_width: f64) -> Self {
        self.window_half_width = Some(half_width);
        self
    }

    /// The window half-width this configuration implies for `model`.
    pub fn half_width_for(&self, model: &DriveModel) -> Result<f64> {
        match self.window_half_width {
            Some(t) => Ok(t),
            None => model.required_half_width(self.window_scale_factor),
        }
    }
}

const CF4_NODE_LO: f64 = 0.5 - 0.288_675_134_594_812_882_254_574_390_251; // 1/2 − √3/6
const CF4_NODE_HI: f64 = 0.5 + 0.288_675_134_594_812_882_254_574_390_251;
const CF4_W_HI: f64 = 0.25 + 0.288_675_134_594_812_882_254_574_390_251; // 1/4 + √3/6
const CF4_W_LO: f64 = 0.25 - 0.288_675_134_594_812_882_254_574_390_251;

/// One step from `t` to `t + h` (h may be negative) for the traceless
/// Hamiltonian with field vector `field(t)`.
#[inline]
pub(crate) fn step<F: Fn(f64) -> [f64; 3]>(field: &F, t: f64, h: f64, scheme: Scheme) -> Mat2 {
    match scheme {
        Scheme::Midpoint => {
            let [x, y, z] = field(t + 0.5 * h);
            exp_traceless(x, y, z, h)
        }
        Scheme::CommutatorFree4 => {
            let f1 = field(t + CF4_NODE_LO * h);
            let f2 = field(t + CF4_NODE_HI * h);
            let mix = |wa: f64, wb: f64| -> [f64; 3] {
                [
                    wa * f1[0] + wb * f2[0],
                    wa * f1[1] + wb * f2[1],
                    wa * f1[2] + wb * f2[2],
                ]
            };
            let early = mix(CF4_W_HI, CF4_W_LO);
            let late = mix(CF4_W_LO, CF4_W_HI);
            exp_traceless(late[0], late[1], late[2], h)
                * exp_traceless(early[0], early[1], early[2], h)
        }
    }
}

/// Integration statistics of one propagation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Sum of the accepted local error estimates.
    pub error_sum: f64,
}

/// Adaptive propagation over a segment with no interior discontinuities.
pub(crate) fn propagate_segment<F: Fn(f64) -> [f64; 3]>(
    field: &F,
    t0: f64,
    t1: f64,
    cfg: &SimConfig,
    stats: &mut StepStats,
) -> Result<Mat2> {
    let mut u = Mat2::IDENTITY;
    if t0 == t1 {
        return Ok(u);
    }
    let dir = if t1 > t0 { 1.0 } else { -1.0 };
    let scheme = cfg.scheme;
    let denom = f64::from(2_i32.pow(scheme.order() as u32) - 1);
    let exponent = 1.0 / f64::from(scheme.order() + 1);
    let tol = cfg.local_error_tol;

    let mut t = t0;
    let mut h = cfg.max_step.min((t1 - t0).abs()) * 0.5;
    loop {
        let remaining = (t1 - t).abs();
        if remaining == 0.0 {
            break;
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        let signed = dir * hs;

        let full = step(field, t, signed, scheme);
        let first = step(field, t, 0.5 * signed, scheme);
        let second = step(field, t + 0.5 * signed, 0.5 * signed, scheme);
        let fine = second * first;
        let err = (full - fine).max_abs() / denom;

        if err <= tol {
            u = fine * u;
            stats.accepted += 1;
            stats.error_sum += err;
            if last {
                break;
            }
            t += signed;
            let grow = if err == 0.0 {
                4.0
            } else {
                (0.9 * (tol / err).powf(exponent)).clamp(0.2, 4.0)
            };
            h = (hs * grow).min(cfg.max_step);
        } else {
            stats.rejected += 1;
            let shrink = (0.9 * (tol / err).powf(exponent)).clamp(0.1, 0.9);
            h = hs * shrink;
            if h < cfg.min_step {
                return Err(Error::Convergence {
                    t,
                    min_step: cfg.min_step,
                    tol,
                    achieved: err,
                });
            }
        }
    }
    Ok(u)
}

/// `U_D(t1, t0)` together with step statistics. `t1 < t0` integrates
/// backwards in time.
pub fn propagate_with_stats(
    model: &DriveModel,
    t0: f64,
    t1: f64,
    cfg: &SimConfig,
) -> Result<(Unitary2, StepStats)> {
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::invalid(format!(
            "propagation bounds must be finite, got [{t0}, {t1}]"
        )));
    }
    cfg.validate()?;
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let mut cuts: Vec<f64> = model
        .discontinuities()
        .into_iter()
        .filter(|&t| t > lo && t < hi)
        .collect();
    if t1 < t0 {
        cuts.reverse();
    }

    let mut stats = StepStats::default();
    let mut u = Mat2::IDENTITY;
    let mut start = t0;
    for end in cuts.into_iter().chain(std::iter::once(t1)) {
        let field = |t: f64| model.sample(t).field_vector();
        u = propagate_segment(&field, start, end, cfg, &mut stats)? * u;
        start = end;
    }
    Ok((Unitary2::new(u, Basis::Diabatic), stats))
}

/// Diabatic propagator `U_D(t1, t0)`.
pub fn propagate(model: &DriveModel, t0: f64, t1: f64, cfg: &SimConfig) -> Result<Unitary2> {
    propagate_with_stats(model, t0, t1, cfg).map(|(u, _)| u)
}

/// Window actually used by [`transition_probability`] for `model`,
/// validated against the asymptotic condition.
pub fn checked_half_width(model: &DriveModel, cfg: &SimConfig) -> Result<f64> {
    cfg.validate()?;
    let kappa = cfg.window_scale_factor;
    match cfg.window_half_width {
        None => model.required_half_width(kappa),
        Some(t) => {
            let covered = model.coupling_support().is_some_and(|w| t >= w);
            if covered || model.asymptotic_condition(t, kappa) {
                Ok(t)
            } else {
                let required = model.required_half_width(kappa)?;
                Err(Error::WindowTooSmall { given: t, required })
            }
        }
    }
}

/// Final excited-state population after starting in the ground state at
/// `−T`, over the window selected by `cfg`.
pub fn transition_probability(model: &DriveModel, cfg: &SimConfig) -> Result<f64> {
    let t = checked_half_width(model, cfg)?;
    let u = propagate(model, -t, t, cfg)?;
    let bare_edges = model.coupling_support().is_some_and(|w| t >= w);
    let p = match cfg.projection {
        Projection::Diabatic => u.transition_probability(),
        Projection::Adiabatic if bare_edges => u.transition_probability(),
        Projection::Adiabatic => {
            let start = adiabatic::dressed_ground(model, -t);
            let end = adiabatic::dressed_excited(model, t);
            let evolved = u.mat.apply(start);
            (end[0].conj() * evolved[0] + end[1].conj() * evolved[1]).norm_sqr()
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

pub use crate::su2::evolve_state;

/// Ground state evolved from `−T` to `T` by `model`.
pub fn final_state(model: &DriveModel, cfg: &SimConfig) -> Result<StateVector> {
    let t = checked_half_width(model, cfg)?;
    let u = propagate(model, -t, t, cfg)?;
    evolve_state(&u, &StateVector::ground(Basis::Diabatic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{constant_detuning_pulse, parabolic, phase_jump, ParabolicParams};
    use std::f64::consts::PI;

    #[test]
    fn zero_model_gives_identity() {
        let u = propagate(&DriveModel::zero(), -3.0, 5.0, &SimConfig::default()).unwrap();
        assert!((u.mat - Mat2::IDENTITY).max_abs() < 1e-15);
    }

    #[test]
    fn resonant_constant_coupling_follows_area_theorem() {
        let m = DriveModel::custom("flat", |_| 0.0, |_| 0.8);
        for &(t0, t1) in &[(0.0, 1.0), (-2.0, 3.0), (1.0, 4.5)] {
            let u = propagate(&m, t0, t1, &SimConfig::default()).unwrap();
            let area = 2.0 * 0.8 * (t1 - t0);
            assert!((u.transition_probability() - (area / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_is_split_at_discontinuities() {
        // a single exponential across the jump would see V·cos(phi) averaged
        let m = phase_jump(&DriveModel::custom("flat", |_| 0.0, |_| 1.0), 0.0).unwrap();
        let cfg = SimConfig {
            max_step: 10.0,
            ..SimConfig::default()
        };
        let u = propagate(&m, -0.75, 0.75, &cfg).unwrap();
        assert!(u.transition_probability() < 1e-24);
    }

    #[test]
    fn config_validation() {
        let base = SimConfig::default();
        assert!(base.validate().is_ok());
        assert!(SimConfig {
            local_error_tol: 0.0,
            ..base
        }
        .validate()
        .is_err());
        assert!(SimConfig {
            min_step: 1.0,
            max_step: 0.1,
            ..base
        }
        .validate()
        .is_err());
        assert!(SimConfig {
            window_scale_factor: 1.0,
            ..base
        }
        .validate()
        .is_err());
        assert!(SimConfig {
            window_half_width: Some(-1.0),
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn window_too_small_reports_requirement() {
        let m = parabolic(ParabolicParams::with_bc(1.0, 10.0)).unwrap();
        let err = transition_probability(&m, &SimConfig::default().with_window(5.0)).unwrap_err();
        match err {
            Error::WindowTooSmall { given, required } => {
                assert_eq!(given, 5.0);
                assert!((required - 110f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn no_coupling_no_transition() {
        for &c in &[-3.0, 0.0, 2.0, 10.0] {
            let m = parabolic(ParabolicParams::with_bc(0.0, c)).unwrap();
            assert_eq!(
                transition_probability(&m, &SimConfig::default()).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn convergence_error_below_min_step() {
        let m = parabolic(ParabolicParams::with_bc(1.0, 10.0)).unwrap();
        let cfg = SimConfig {
            local_error_tol: 1e-30,
            min_step: 1e-3,
            max_step: 0.1,
            ..SimConfig::default()
        };
        assert!(matches!(
            propagate(&m, -3.0, 3.0, &cfg),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn pi_pulse_inverts() {
        let m = constant_detuning_pulse(0.0, PI / 4.0, 1.0).unwrap();
        let p = transition_probability(&m, &SimConfig::default()).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }
}
