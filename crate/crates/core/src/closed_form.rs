//! Analytic layer: Landau–Zener scattering, Stokes phase, dynamical phase,
//! independent-crossing compositions and the universal phase-jump formula.
//!
//! The crossing matrices use the adiabatic convention of the standard
//! two-crossing literature, in which the basis change at the jump enters as
//! `R(0) σz R†(0)`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64 as C64;

use crate::adiabatic::rotation_from_components;
use crate::error::{Error, Result};
use crate::gamma::arg_gamma;
use crate::models::{DriveModel, ParabolicParams};
use crate::quad;
use crate::su2::{Basis, Mat2, Unitary2};

/// Tolerance on the imaginary part of the phase-jump transition amplitude.
pub const REALITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LzParams {
    pub lambda: f64,
    /// Transition amplitude `exp(−πΛ/2)`.
    pub r: f64,
    pub stokes: f64,
}

impl LzParams {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(LzParams {
            lambda,
            r: (-PI * lambda / 2.0).exp(),
            stokes: stokes_phase(lambda)?,
        })
    }

    /// `√(1 − R²)`, computed without cancellation for small `Λ`.
    pub fn adiabatic_amplitude(&self) -> f64 {
        (-(-PI * self.lambda).exp_m1()).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IcaResult {
    pub p: f64,
    pub s_total: Unitary2,
    pub phi_dyn: f64,
    pub lz: LzParams,
    /// Scattering matrices of the first and second crossing.
    pub crossings: [Unitary2; 2],
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "LZ parameter must be finite and >= 0, got {lambda}"
        )));
    }
    Ok(())
}

/// `φ_S = π/4 + (Λ/2) ln(Λ/2e) + arg Γ(1 − iΛ/2)`; the middle term is zero
/// at `Λ = 0`.
pub fn stokes_phase(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let middle = if lambda == 0.0 {
        0.0
    } else {
        0.5 * lambda * ((0.5 * lambda).ln() - 1.0)
    };
    Ok(FRAC_PI_4 + middle + arg_gamma(C64::new(1.0, -0.5 * lambda))?)
}

/// Single-crossing scattering matrix in the adiabatic basis,
/// `[[√(1−R²) e^{iφ_S}, −R], [R, √(1−R²) e^{−iφ_S}]]`.
pub fn lz_scattering(lambda: f64) -> Result<Unitary2> {
    check_lambda(lambda)?;
    Ok(scattering_matrix(&LzParams::new(lambda)?))
}

fn scattering_matrix(lz: &LzParams) -> Unitary2 {
    let q = lz.adiabatic_amplitude();
    let m = Mat2::new(
        C64::from_polar(q, lz.stokes),
        (-lz.r).into(),
        lz.r.into(),
        C64::from_polar(q, -lz.stokes),
    );
    Unitary2::new(m, Basis::Adiabatic)
}

fn require_crossing(p: &ParabolicParams) -> Result<()> {
    p.validate()?;
    if p.c <= 0.0 {
        return Err(Error::NoCrossing { c: p.c });
    }
    if p.n != 1 {
        return Err(Error::invalid(
            "crossing formulas apply to the parabolic model (n = 1)",
        ));
    }
    Ok(())
}

/// Linearized LZ parameter of either crossing: coupling² over the slope of
/// `α` at `t = √(c/a)`, `Λ = b²/(2√(ac))`.
pub fn lz_parameter(p: &ParabolicParams) -> Result<f64> {
    require_crossing(p)?;
    Ok(p.b * p.b / (2.0 * (p.a * p.c).sqrt()))
}

/// `φ_dyn = 2∫₀^{√(c/a)} √((a s² − c)² + b²) ds`.
pub fn dynamical_phase(p: &ParabolicParams) -> Result<f64> {
    require_crossing(p)?;
    let (a, b, c) = (p.a, p.b, p.c);
    let end = (c / a).sqrt();
    let r = quad::integrate(|s| (a * s * s - c).hypot(b), 0.0, end, 1e-12, 0.0)?;
    Ok(2.0 * r.value)
}

/// `U_φ = diag(e^{iφ}, e^{−iφ})`.
pub fn phase_evolution(phi: f64) -> Mat2 {
    Mat2::diag(C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi))
}

/// `R(0) σz R†(0) = [[cos θ₀, sin θ₀], [sin θ₀, −cos θ₀]]`.
pub fn jump_matrix(cos_theta0: f64, sin_theta0: f64) -> Mat2 {
    let r0 = rotation_from_components(cos_theta0, sin_theta0, 0.0).mat;
    r0 * Mat2::SIGMA_Z * r0.adjoint()
}

/// `(cos θ(0), sin θ(0))` of the parabolic reference model.
pub fn theta0_components(p: &ParabolicParams) -> (f64, f64) {
    let norm = p.b.hypot(p.c);
    (-p.c / norm, p.b / norm)
}

/// Two uncorrelated crossings joined by the dynamical phase:
/// `S = σz S_A σz · U_{φ_dyn} · S_A`.
pub fn ica_propagator_reference(p: &ParabolicParams) -> Result<IcaResult> {
    let lz = LzParams::new(lz_parameter(p)?)?;
    let phi_dyn = dynamical_phase(p)?;
    let first = scattering_matrix(&lz);
    let second = Unitary2::new(first.mat.sz_conjugate(), Basis::Adiabatic);
    let total = second.mat * phase_evolution(phi_dyn) * first.mat;
    Ok(IcaResult {
        p: total.get(0, 1).norm_sqr().clamp(0.0, 1.0),
        s_total: Unitary2::new(total, Basis::Adiabatic),
        phi_dyn,
        lz,
        crossings: [first, second],
    })
}

/// Independent-crossing propagator with the coupling sign flipped at
/// `t = 0`: `S_A σz U₊ R(0) σz R†(0) U₋ S_A` with `U₊ = U₋ = U_{φ_dyn/2}`.
///
/// The transition amplitude `S₁₂` is real in this convention; a residual
/// imaginary part above [`REALITY_TOL`] is reported as an error.
pub fn ica_propagator_phase_jump(p: &ParabolicParams) -> Result<IcaResult> {
    let lz = LzParams::new(lz_parameter(p)?)?;
    let phi_dyn = dynamical_phase(p)?;
    let (cos0, sin0) = theta0_components(p);
    let crossing = scattering_matrix(&lz);
    let half = phase_evolution(0.5 * phi_dyn);
    let total = crossing.mat * Mat2::SIGMA_Z * half * jump_matrix(cos0, sin0) * half * crossing.mat;
    let amp = total.get(0, 1);
    if amp.im.abs() > REALITY_TOL {
        return Err(Error::Consistency(format!(
            "phase-jump transition amplitude {amp} is not real for {p:?}"
        )));
    }
    Ok(IcaResult {
        p: (amp.re * amp.re).clamp(0.0, 1.0),
        s_total: Unitary2::new(total, Basis::Adiabatic),
        phi_dyn,
        lz,
        crossings: [crossing, crossing],
    })
}

/// `4R²(1 − R²) sin²(φ_dyn + φ_S)`.
pub fn reference_probability_formula(p: &ParabolicParams) -> Result<f64> {
    let lz = LzParams::new(lz_parameter(p)?)?;
    let phi_dyn = dynamical_phase(p)?;
    let q = lz.adiabatic_amplitude();
    Ok(4.0 * lz.r * lz.r * q * q * (phi_dyn + lz.stokes).sin().powi(2))
}

/// `{(2R² − 1) sin θ₀ + 2√(1 − R²) R cos θ₀ cos(φ_dyn + φ_S)}²`.
pub fn phase_jump_probability_formula(p: &ParabolicParams) -> Result<f64> {
    let lz = LzParams::new(lz_parameter(p)?)?;
    let phi_dyn = dynamical_phase(p)?;
    let (cos0, sin0) = theta0_components(p);
    let q = lz.adiabatic_amplitude();
    let amp =
        (2.0 * lz.r * lz.r - 1.0) * sin0 + 2.0 * q * lz.r * cos0 * (phi_dyn + lz.stokes).cos();
    Ok(amp * amp)
}

/// Strong-coupling phase-jump limit `V₀²/(V₀² + α₀²)`.
pub fn universal_probability(v0: f64, alpha0: f64) -> Result<f64> {
    if !(v0.is_finite() && alpha0.is_finite()) {
        return Err(Error::invalid(
            "universal probability needs finite field values",
        ));
    }
    if v0 == 0.0 && alpha0 == 0.0 {
        return Err(Error::invalid(
            "universal probability undefined for V(0) = alpha(0) = 0",
        ));
    }
    let (v2, a2) = (v0 * v0, alpha0 * alpha0);
    Ok(v2 / (v2 + a2))
}

/// Universal formula for a model whose coupling flips at `t_jump`, using the
/// field just before the jump.
pub fn universal_probability_for(model: &DriveModel, t_jump: f64) -> Result<f64> {
    universal_probability(model.v(t_jump), model.alpha(t_jump))
}
