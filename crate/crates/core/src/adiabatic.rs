//! Instantaneous eigenbasis of the diabatic Hamiltonian.
//!
//! `R(t)` carries the eigenstates `χ₊, χ₋` as its columns, so adiabatic
//! amplitudes are `ψ_A = R†ψ_D` and propagators connect as
//! `U_A(t, t₀) = R†(t) U_D(t, t₀) R(t₀)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::models::DriveModel;
use crate::propagate::{propagate_segment, SimConfig, StepStats};
use crate::su2::{Basis, FieldSample, Mat2, Unitary2};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdiabaticSample {
    pub e_plus: f64,
    pub e_minus: f64,
    /// Non-adiabatic coupling `γ = θ̇/2`.
    pub gamma: f64,
    pub theta: f64,
}

/// Mixing angle `θ = atan2(V, α) ∈ [0, π]`.
pub fn mixing_angle(s: &FieldSample) -> Result<f64> {
    if s.alpha == 0.0 && s.v == 0.0 {
        return Err(Error::DegenerateField { t: f64::NAN });
    }
    Ok(s.v.atan2(s.alpha))
}

/// Eigenvector matrix of `H_D` for one field sample.
pub fn rotation(s: &FieldSample) -> Result<Unitary2> {
    mixing_angle(s)?;
    let energy = s.splitting();
    Ok(rotation_from_components(
        s.alpha / energy,
        s.v / energy,
        s.phi,
    ))
}

pub fn rotation_from_angles(theta: f64, phi: f64) -> Unitary2 {
    let (sin_theta, cos_theta) = theta.sin_cos();
    rotation_from_components(cos_theta, sin_theta, phi)
}

/// `e^{iφ}`, exact for the phases `0` and `π` used by jump models.
pub fn unit_phase(phi: f64) -> C64 {
    if phi == 0.0 {
        C64::new(1.0, 0.0)
    } else if phi == std::f64::consts::PI {
        C64::new(-1.0, 0.0)
    } else {
        C64::from_polar(1.0, phi)
    }
}

/// `R` from `cos θ`, `sin θ ≥ 0`. Half-angle values come from whichever
/// formula is well conditioned.
pub fn rotation_from_components(cos_theta: f64, sin_theta: f64, phi: f64) -> Unitary2 {
    let (ch, sh) = if cos_theta == 0.0 {
        (
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        )
    } else if cos_theta > 0.0 {
        let ch = (0.5 * (1.0 + cos_theta)).sqrt();
        (ch, sin_theta / (2.0 * ch))
    } else {
        let sh = (0.5 * (1.0 - cos_theta)).sqrt();
        (sin_theta / (2.0 * sh), sh)
    };
    let e = unit_phase(phi);
    let m = Mat2::new(ch.into(), -e.conj() * sh, e * sh, ch.into());
    // The rotation acts between the two bases; tagging it diabatic lets it
    // compose with diabatic propagators.
    Unitary2::new(m, Basis::Diabatic)
}

/// Eigenvector of `H_D` adiabatically connected to the bare ground state
/// (the bare state itself when the field vanishes).
pub fn ground_like_eigenvector(s: &FieldSample) -> [C64; 2] {
    match rotation(s) {
        Err(_) => [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        Ok(r) => {
            let col = if s.v.atan2(s.alpha) <= std::f64::consts::FRAC_PI_2 {
                1
            } else {
                0
            };
            [r.get(0, col), r.get(1, col)]
        }
    }
}

/// Eigenvector of `H_D` adiabatically connected to the bare excited state.
pub fn excited_like_eigenvector(s: &FieldSample) -> [C64; 2] {
    match rotation(s) {
        Err(_) => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        Ok(r) => {
            let col = if s.v.atan2(s.alpha) <= std::f64::consts::FRAC_PI_2 {
                0
            } else {
                1
            };
            [r.get(0, col), r.get(1, col)]
        }
    }
}

/// Which adiabatic column (`0` for `χ₊`, `1` for `χ₋`) is connected to the
/// bare ground state.
fn ground_column(s: &FieldSample) -> usize {
    if s.v.atan2(s.alpha) <= std::f64::consts::FRAC_PI_2 {
        1
    } else {
        0
    }
}

/// Adiabatic state `k` corrected to first order in the non-adiabatic
/// coupling, `e_k + H_A[j][k]/(E_k − E_j) e_j`, expressed in the bare basis.
/// This is the state a slowly driven system actually occupies at `t`.
fn dressed_state(model: &DriveModel, t: f64, k: usize) -> Option<[C64; 2]> {
    let a = adiabatic_sample(model, t).ok()?;
    let s = model.sample(t);
    let r = rotation(&s).ok()?;
    let h = adiabatic_hamiltonian(model, t).ok()?;
    let j = 1 - k;
    let energies = [a.e_plus, a.e_minus];
    let eps = h.get(j, k) / (energies[k] - energies[j]);
    let mut amp = [C64::new(0.0, 0.0); 2];
    amp[k] = C64::new(1.0, 0.0);
    amp[j] = eps;
    let norm = (amp[0].norm_sqr() + amp[1].norm_sqr()).sqrt();
    let v = r.mat.apply([amp[0] / norm, amp[1] / norm]);
    Some(v)
}

/// Dressed state connected to the bare ground state, or the bare state when
/// the field vanishes at `t`.
pub fn dressed_ground(model: &DriveModel, t: f64) -> [C64; 2] {
    let k = ground_column(&model.sample(t));
    dressed_state(model, t, k).unwrap_or([C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
}

/// Dressed state connected to the bare excited state.
pub fn dressed_excited(model: &DriveModel, t: f64) -> [C64; 2] {
    let k = 1 - ground_column(&model.sample(t));
    dressed_state(model, t, k).unwrap_or([C64::new(1.0, 0.0), C64::new(0.0, 0.0)])
}

fn fd_step(t: f64) -> f64 {
    1e-6 * t.abs().max(1.0)
}

/// `(α̇, V̇)` at `t`, exact when the model provides them.
pub fn field_derivatives(model: &DriveModel, t: f64) -> (f64, f64) {
    let h = fd_step(t);
    let alpha_dot = model
        .alpha_dot(t)
        .unwrap_or_else(|| (model.alpha(t + h) - model.alpha(t - h)) / (2.0 * h));
    let v_dot = model
        .v_dot(t)
        .unwrap_or_else(|| (model.v(t + h) - model.v(t - h)) / (2.0 * h));
    (alpha_dot, v_dot)
}

/// Energies, mixing angle and non-adiabatic coupling at `t`.
pub fn adiabatic_sample(model: &DriveModel, t: f64) -> Result<AdiabaticSample> {
    if model.is_discontinuity(t) {
        return Err(Error::AtDiscontinuity { t });
    }
    let s = model.sample(t);
    let theta = mixing_angle(&s).map_err(|_| Error::DegenerateField { t })?;
    let (alpha_dot, v_dot) = field_derivatives(model, t);
    let energy = s.splitting();
    let gamma = (s.alpha * v_dot - alpha_dot * s.v) / (2.0 * energy * energy);
    Ok(AdiabaticSample {
        e_plus: energy,
        e_minus: -energy,
        gamma,
        theta,
    })
}

/// Field vector of the adiabatic-frame Hamiltonian
/// `diag(E₊, E₋) + γ [[0, i e^{−iφ}], [−i e^{iφ}, 0]]`.
pub fn adiabatic_field(model: &DriveModel, t: f64) -> Result<[f64; 3]> {
    let a = adiabatic_sample(model, t)?;
    let (sin_phi, cos_phi) = model.phi(t).sin_cos();
    Ok([a.gamma * sin_phi, -a.gamma * cos_phi, a.e_plus])
}

/// Adiabatic-frame Hamiltonian matrix at `t`.
pub fn adiabatic_hamiltonian(model: &DriveModel, t: f64) -> Result<Mat2> {
    let [x, y, z] = adiabatic_field(model, t)?;
    Ok(Mat2::from_field(x, y, z))
}

/// `U_A(t, t₀) = R†(t) U_D(t, t₀) R(t₀)`, with right-limit field samples at
/// both ends.
pub fn to_adiabatic(u: &Unitary2, model: &DriveModel, t: f64, t0: f64) -> Result<Unitary2> {
    if u.basis != Basis::Diabatic {
        return Err(Error::invalid("to_adiabatic expects a diabatic propagator"));
    }
    let r_end = rotation(&model.sample(t)).map_err(|_| Error::DegenerateField { t })?;
    let r_start = rotation(&model.sample(t0)).map_err(|_| Error::DegenerateField { t: t0 })?;
    Ok(Unitary2::new(
        r_end.mat.adjoint() * u.mat * r_start.mat,
        Basis::Adiabatic,
    ))
}

/// Inverse of [`to_adiabatic`].
pub fn to_diabatic(u: &Unitary2, model: &DriveModel, t: f64, t0: f64) -> Result<Unitary2> {
    if u.basis != Basis::Adiabatic {
        return Err(Error::invalid(
            "to_diabatic expects an adiabatic propagator",
        ));
    }
    let r_end = rotation(&model.sample(t)).map_err(|_| Error::DegenerateField { t })?;
    let r_start = rotation(&model.sample(t0)).map_err(|_| Error::DegenerateField { t: t0 })?;
    Ok(Unitary2::new(
        r_end.mat * u.mat * r_start.mat.adjoint(),
        Basis::Diabatic,
    ))
}

/// Propagate directly with the adiabatic-frame Hamiltonian. The interval
/// must be free of discontinuities, where `γ` has a delta-like spike.
pub fn propagate_adiabatic(
    model: &DriveModel,
    t0: f64,
    t1: f64,
    cfg: &SimConfig,
) -> Result<Unitary2> {
    cfg.validate()?;
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    if let Some(&t) = model
        .discontinuities()
        .iter()
        .find(|&&t| t >= lo && t <= hi)
    {
        return Err(Error::AtDiscontinuity { t });
    }
    for &t in &[t0, t1] {
        adiabatic_sample(model, t)?;
    }
    // degenerate points inside the interval surface as NaN and fail the step
    let field = |t: f64| adiabatic_field(model, t).unwrap_or([f64::NAN; 3]);
    let mut stats = StepStats::default();
    let u = propagate_segment(&field, t0, t1, cfg, &mut stats)?;
    if !u.is_finite() {
        return Err(Error::Domain("degenerate field inside the interval".into()));
    }
    Ok(Unitary2::new(u, Basis::Adiabatic))
}
