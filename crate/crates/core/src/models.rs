//! Drive models: detuning `α(t)`, coupling magnitude `V(t) ≥ 0` and a
//! piecewise-constant coupling phase `φ(t)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad;
use crate::su2::FieldSample;

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Diabatic level half-splitting `α(t)`.
#[derive(Clone)]
pub enum Detuning {
    /// `a·t^{2n} − c`
    Power {
        a: f64,
        n: u32,
        c: f64,
    },
    Constant(f64),
    Custom(TimeFn),
}

/// Coupling magnitude `V(t)`.
#[derive(Clone)]
pub enum Coupling {
    Constant(f64),
    /// `amplitude` for `|t| ≤ half_width`, zero outside.
    Window {
        amplitude: f64,
        half_width: f64,
    },
    Custom(TimeFn),
}

impl Detuning {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Detuning::Power { a, n, c } => a * t.powi(2 * *n as i32) - c,
            Detuning::Constant(d) => *d,
            Detuning::Custom(f) => f(t),
        }
    }

    fn derivative(&self, t: f64) -> Option<f64> {
        match self {
            Detuning::Power { a, n, .. } => {
                let k = 2 * *n as i32;
                Some(a * k as f64 * t.powi(k - 1))
            }
            Detuning::Constant(_) => Some(0.0),
            Detuning::Custom(_) => None,
        }
    }
}

impl Coupling {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Coupling::Constant(b) => *b,
            Coupling::Window {
                amplitude,
                half_width,
            } => {
                if t.abs() <= *half_width {
                    *amplitude
                } else {
                    0.0
                }
            }
            Coupling::Custom(f) => f(t),
        }
    }

    fn derivative(&self, _t: f64) -> Option<f64> {
        match self {
            Coupling::Constant(_) | Coupling::Window { .. } => Some(0.0),
            Coupling::Custom(_) => None,
        }
    }
}

/// A complete time-dependent field specification.
///
/// The phase is zero before the first entry of `phase_flips` and advances by
/// `π` at each flip; values at a flip time are right limits.
#[derive(Clone)]
pub struct DriveModel {
    detuning: Detuning,
    coupling: Coupling,
    phase_flips: Vec<f64>,
    label: String,
}

impl fmt::Debug for DriveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriveModel")
            .field("label", &self.label)
            .field("discontinuities", &self.discontinuities())
            .finish()
    }
}

/// Parameters of the (super)parabolic family `α = a t^{2n} − c`, `V = b`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ParabolicParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: u32,
}

impl Default for ParabolicParams {
    fn default() -> Self {
        ParabolicParams {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            n: 1,
        }
    }
}

impl ParabolicParams {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        ParabolicParams { a, b, c, n: 1 }
    }

    /// `a = 1`, given coupling and offset.
    pub fn with_bc(b: f64, c: f64) -> Self {
        ParabolicParams::new(1.0, b, c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.c.is_finite()) {
            return Err(Error::invalid(format!("non-finite parameters {self:?}")));
        }
        if self.a <= 0.0 {
            return Err(Error::invalid(format!(
                "curvature a must be > 0, got {}",
                self.a
            )));
        }
        if self.b < 0.0 {
            return Err(Error::invalid(format!(
                "coupling b must be >= 0, got {}",
                self.b
            )));
        }
        if self.n < 1 {
            return Err(Error::invalid("superparabolic index n must be >= 1"));
        }
        Ok(())
    }
}

impl DriveModel {
    pub fn new(detuning: Detuning, coupling: Coupling, label: impl Into<String>) -> Self {
        DriveModel {
            detuning,
            coupling,
            phase_flips: Vec::new(),
            label: label.into(),
        }
    }

    /// Model from arbitrary closures. `v` must be non-negative.
    pub fn custom<A, V>(label: impl Into<String>, alpha: A, v: V) -> Self
    where
        A: Fn(f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        DriveModel::new(
            Detuning::Custom(Arc::new(alpha)),
            Coupling::Custom(Arc::new(v)),
            label,
        )
    }

    /// `α ≡ 0`, `V ≡ 0`.
    pub fn zero() -> Self {
        DriveModel::new(Detuning::Constant(0.0), Coupling::Constant(0.0), "zero")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn detuning(&self) -> &Detuning {
        &self.detuning
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn phase_flips(&self) -> &[f64] {
        &self.phase_flips
    }

    pub fn alpha(&self, t: f64) -> f64 {
        self.detuning.eval(t)
    }

    pub fn v(&self, t: f64) -> f64 {
        self.coupling.eval(t)
    }

    pub fn phi(&self, t: f64) -> f64 {
        if self.phase_flips.iter().filter(|&&tf| tf <= t).count() % 2 == 0 {
            0.0
        } else {
            PI
        }
    }

    /// Left limit of the phase at `t`.
    pub fn phi_left(&self, t: f64) -> f64 {
        if self.phase_flips.iter().filter(|&&tf| tf < t).count() % 2 == 0 {
            0.0
        } else {
            PI
        }
    }

    /// `V cos φ`: the coupling seen as a real, possibly negative, function.
    pub fn signed_coupling(&self, t: f64) -> f64 {
        let v = self.v(t);
        if self.phi(t) == 0.0 {
            v
        } else {
            -v
        }
    }

    pub fn sample(&self, t: f64) -> FieldSample {
        FieldSample::new(self.alpha(t), self.v(t), self.phi(t))
    }

    /// Exact `α̇` when the model knows it.
    pub fn alpha_dot(&self, t: f64) -> Option<f64> {
        self.detuning.derivative(t)
    }

    /// Exact `V̇` when the model knows it.
    pub fn v_dot(&self, t: f64) -> Option<f64> {
        self.coupling.derivative(t)
    }

    /// Sorted times where the field is discontinuous: phase flips and the
    /// edges of a windowed coupling.
    pub fn discontinuities(&self) -> Vec<f64> {
        let mut out = self.phase_flips.clone();
        if let Coupling::Window { half_width, .. } = self.coupling {
            out.push(-half_width);
            out.push(half_width);
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    pub fn is_discontinuity(&self, t: f64) -> bool {
        self.discontinuities().contains(&t)
    }

    /// Half-width outside of which the coupling is known to vanish.
    pub fn coupling_support(&self) -> Option<f64> {
        match self.coupling {
            Coupling::Constant(0.0) => Some(0.0),
            Coupling::Window { amplitude: 0.0, .. } => Some(0.0),
            Coupling::Window { half_width, .. } => Some(half_width),
            _ => None,
        }
    }

    /// Whether `|α(±T)| ≥ κ·max(V(±T), 1)`.
    pub fn asymptotic_condition(&self, half_width: f64, kappa: f64) -> bool {
        [-half_width, half_width]
            .iter()
            .all(|&t| self.alpha(t).abs() >= kappa * self.v(t).max(1.0))
    }

    /// Smallest symmetric window `[−T, T]` outside of which the diabatic and
    /// adiabatic bases coincide to the level set by `kappa`.
    pub fn required_half_width(&self, kappa: f64) -> Result<f64> {
        if let Some(w) = self.coupling_support() {
            return Ok(if w > 0.0 { w } else { 1.0 });
        }
        if let (Detuning::Power { a, n, c }, Coupling::Constant(b)) =
            (&self.detuning, &self.coupling)
        {
            let lift = kappa * b.max(1.0);
            // when |c| alone satisfies the condition, cover the barrier instead
            let reach = (lift + c).max(c.abs()).max(f64::MIN_POSITIVE);
            let t = (reach / a).powf(1.0 / (2 * n) as f64);
            return Ok(t);
        }
        // monotone search for general models
        let mut hi = 1.0;
        while !self.asymptotic_condition(hi, kappa) {
            hi *= 2.0;
            if hi > 1e8 {
                return Err(Error::invalid(format!(
                    "model '{}' never satisfies |alpha| >= {kappa}·max(V, 1)",
                    self.label
                )));
            }
        }
        let mut lo = hi / 2.0;
        if hi == 1.0 {
            lo = 0.0;
        }
        for _ in 0..200 {
            if hi - lo <= 1e-12 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.asymptotic_condition(mid, kappa) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// `α(t) = a t² − c`, `V(t) = b`.
pub fn parabolic(p: ParabolicParams) -> Result<DriveModel> {
    p.validate()?;
    if p.n != 1 {
        return Err(Error::invalid(format!(
            "parabolic model has n = 1, got n = {} (use superparabolic)",
            p.n
        )));
    }
    Ok(DriveModel::new(
        Detuning::Power {
            a: p.a,
            n: 1,
            c: p.c,
        },
        Coupling::Constant(p.b),
        format!("parabolic(a={}, b={}, c={})", p.a, p.b, p.c),
    ))
}

/// `α(t) = t^{2n} − c`, `V(t) = b`. The curvature is fixed to one for
/// `n > 1`.
pub fn superparabolic(p: ParabolicParams) -> Result<DriveModel> {
    p.validate()?;
    if p.n == 1 {
        return parabolic(p);
    }
    if p.a != 1.0 {
        return Err(Error::invalid(format!(
            "superparabolic models (n > 1) have unit curvature, got a = {}",
            p.a
        )));
    }
    Ok(DriveModel::new(
        Detuning::Power {
            a: 1.0,
            n: p.n,
            c: p.c,
        },
        Coupling::Constant(p.b),
        format!("superparabolic(n={}, b={}, c={})", p.n, p.b, p.c),
    ))
}

/// Flip the coupling sign (phase `0 → π`) at `t_jump`. Applying the same
/// jump twice restores the original model.
pub fn phase_jump(reference: &DriveModel, t_jump: f64) -> Result<DriveModel> {
    if !t_jump.is_finite() {
        return Err(Error::invalid("phase jump time must be finite"));
    }
    let mut out = reference.clone();
    if let Some(pos) = out.phase_flips.iter().position(|&t| t == t_jump) {
        out.phase_flips.remove(pos);
        out.label = out
            .label
            .strip_suffix(&format!(" + phase jump at t={t_jump}"))
            .map(str::to_owned)
            .unwrap_or(out.label);
    } else {
        out.phase_flips.push(t_jump);
        out.phase_flips.sort_by(f64::total_cmp);
        out.label = format!("{} + phase jump at t={t_jump}", out.label);
    }
    Ok(out)
}

/// Constant detuning `delta` with a rectangular coupling of height
/// `amplitude` on `[−half_width, half_width]`.
pub fn constant_detuning_pulse(delta: f64, amplitude: f64, half_width: f64) -> Result<DriveModel> {
    if !(delta.is_finite() && amplitude.is_finite() && half_width.is_finite()) {
        return Err(Error::invalid(
            "constant-detuning pulse needs finite parameters",
        ));
    }
    if amplitude < 0.0 {
        return Err(Error::invalid(format!(
            "pulse amplitude must be >= 0, got {amplitude}"
        )));
    }
    if half_width <= 0.0 {
        return Err(Error::invalid(format!(
            "pulse half-width must be > 0, got {half_width}"
        )));
    }
    Ok(DriveModel::new(
        Detuning::Constant(delta),
        Coupling::Window {
            amplitude,
            half_width,
        },
        format!("const-detuning(delta={delta}, amplitude={amplitude}, half_width={half_width})"),
    ))
}

/// Field values at `t` (right limits at discontinuities).
pub fn sample(model: &DriveModel, t: f64) -> FieldSample {
    model.sample(t)
}

/// `A(t₁, t₀) = 2∫ V cos φ dt`.
pub fn pulse_area(model: &DriveModel, t0: f64, t1: f64) -> Result<f64> {
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::invalid("pulse_area bounds must be finite"));
    }
    if t0 > t1 {
        return Err(Error::invalid(format!(
            "pulse_area needs t0 <= t1, got [{t0}, {t1}]"
        )));
    }
    let mut edges = vec![t0];
    edges.extend(
        model
            .discontinuities()
            .into_iter()
            .filter(|&t| t > t0 && t < t1),
    );
    edges.push(t1);

    let mut area = 0.0;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        // the phase is constant on the open segment
        let sign = if model.phi(0.5 * (lo + hi)) == 0.0 {
            1.0
        } else {
            -1.0
        };
        // Kronrod nodes are interior, so edge values never leak in
        let r = quad::integrate(|t| model.v(t), lo, hi, 1e-10, 1e-14)?;
        area += 2.0 * sign * r.value;
    }
    Ok(area)
}
