//! 2×2 complex matrices, SU(2) propagators and two-level state vectors.
//!
//! Index 0 is the excited (upper, `+α`) diabatic state and index 1 the
//! ground state, so a state is `(c_excited, c_ground)` and the transition
//! amplitude out of the ground state is the `(0, 1)` entry of a propagator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Plain 2×2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const SIGMA_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const SIGMA_Y: Mat2 = Mat2([[ZERO, C64 { re: 0.0, im: -1.0 }], [I, ZERO]]);
    pub const SIGMA_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, C64 { re: -1.0, im: 0.0 }]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    /// `hx σx + hy σy + hz σz`.
    pub fn from_field(hx: f64, hy: f64, hz: f64) -> Self {
        Mat2::new(hz.into(), C64::new(hx, -hy), C64::new(hx, hy), (-hz).into())
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `σz M σz`: flips the sign of the off-diagonal entries.
    pub fn sz_conjugate(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], -m[0][1]], [-m[1][0], m[1][1]]])
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Mat2::IDENTITY).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    #[inline]
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.scale(-ONE)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

/// `exp(−i (hx σx + hy σy + hz σz) dt)` in closed form.
#[inline]
pub fn exp_traceless(hx: f64, hy: f64, hz: f64, dt: f64) -> Mat2 {
    let omega = (hx * hx + hy * hy + hz * hz).sqrt();
    if omega == 0.0 {
        return Mat2::IDENTITY;
    }
    let (s, c) = (omega * dt).sin_cos();
    let k = s / omega;
    Mat2([
        [C64::new(c, -k * hz), C64::new(-k * hy, -k * hx)],
        [C64::new(k * hy, -k * hx), C64::new(c, k * hz)],
    ])
}

/// Which representation a propagator or state lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Diabatic,
    Adiabatic,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Diabatic => f.write_str("diabatic"),
            Basis::Adiabatic => f.write_str("adiabatic"),
        }
    }
}

/// Instantaneous field values `(α, V, φ)`; the diabatic Hamiltonian is
/// `α σz + V cos φ σx + V sin φ σy`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub alpha: f64,
    pub v: f64,
    pub phi: f64,
}

impl FieldSample {
    pub fn new(alpha: f64, v: f64, phi: f64) -> Self {
        FieldSample { alpha, v, phi }
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.v.is_finite() && self.phi.is_finite()
    }

    /// `√(α² + V²)`, the upper adiabatic energy.
    pub fn splitting(&self) -> f64 {
        self.alpha.hypot(self.v)
    }

    /// Field-vector components `(V cos φ, V sin φ, α)`.
    pub fn field_vector(&self) -> [f64; 3] {
        let (s, c) = self.phi.sin_cos();
        [self.v * c, self.v * s, self.alpha]
    }

    pub fn hamiltonian(&self) -> Mat2 {
        let [hx, hy, hz] = self.field_vector();
        Mat2::from_field(hx, hy, hz)
    }
}

/// A 2×2 unitary propagator tagged with its basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2 {
    pub mat: Mat2,
    pub basis: Basis,
}

impl Unitary2 {
    pub fn identity(basis: Basis) -> Self {
        Unitary2 {
            mat: Mat2::IDENTITY,
            basis,
        }
    }

    pub fn new(mat: Mat2, basis: Basis) -> Self {
        Unitary2 { mat, basis }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat.get(row, col)
    }

    /// Probability of ending in the excited state when starting in the
    /// ground state, `|U₁₂|²`.
    pub fn transition_probability(&self) -> f64 {
        self.mat.get(0, 1).norm_sqr()
    }

    /// `self · earlier`: evolution by `earlier` followed by `self`.
    pub fn after(&self, earlier: &Unitary2) -> Result<Unitary2> {
        if self.basis != earlier.basis {
            return Err(Error::invalid(format!(
                "cannot compose {} and {} propagators",
                self.basis, earlier.basis
            )));
        }
        Ok(Unitary2::new(self.mat * earlier.mat, self.basis))
    }

    pub fn adjoint(&self) -> Unitary2 {
        Unitary2::new(self.mat.adjoint(), self.basis)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.mat.unitarity_defect()
    }
}

/// Exact propagator `exp(−i H dt)` for the constant Hamiltonian built from
/// `sample`.
pub fn su2_exp(sample: FieldSample, dt: f64) -> Result<Unitary2> {
    if !sample.is_finite() || !dt.is_finite() {
        return Err(Error::invalid(format!(
            "su2_exp needs finite input, got {sample:?}, dt = {dt}"
        )));
    }
    let [hx, hy, hz] = sample.field_vector();
    Ok(Unitary2::new(
        exp_traceless(hx, hy, hz, dt),
        Basis::Diabatic,
    ))
}

/// Two-level state `(c_excited, c_ground)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector {
    pub c_excited: C64,
    pub c_ground: C64,
    pub basis: Basis,
}

impl StateVector {
    pub fn ground(basis: Basis) -> Self {
        StateVector {
            c_excited: ZERO,
            c_ground: ONE,
            basis,
        }
    }

    pub fn excited(basis: Basis) -> Self {
        StateVector {
            c_excited: ONE,
            c_ground: ZERO,
            basis,
        }
    }

    pub fn new(c_excited: C64, c_ground: C64, basis: Basis) -> Self {
        StateVector {
            c_excited,
            c_ground,
            basis,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_excited.norm_sqr() + self.c_ground.norm_sqr()
    }

    pub fn excited_population(&self) -> f64 {
        self.c_excited.norm_sqr()
    }
}

/// `ψ(t) = U(t, t₀) ψ(t₀)`.
pub fn evolve_state(u: &Unitary2, psi: &StateVector) -> Result<StateVector> {
    if u.basis != psi.basis {
        return Err(Error::invalid(format!(
            "{} propagator applied to a {} state",
            u.basis, psi.basis
        )));
    }
    let [e, g] = u.mat.apply([psi.c_excited, psi.c_ground]);
    Ok(StateVector::new(e, g, u.basis))
}
