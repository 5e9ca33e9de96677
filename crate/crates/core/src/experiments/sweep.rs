use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::table::{SweepTable, TIMESTAMP_KEY};
use crate::closed_form::{
    ica_propagator_phase_jump, ica_propagator_reference, universal_probability,
};
use crate::error::{Error, Result};
use crate::models::{
    constant_detuning_pulse, parabolic, phase_jump, superparabolic, DriveModel, ParabolicParams,
};
use crate::propagate::{transition_probability, SimConfig};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelFamily {
    /// `α = a t² − c`, `V = b`.
    Parabolic,
    /// `α = t^{2n} − c`, `V = b`.
    Superparabolic,
    /// `α = −c`, `V = b` on `|t| ≤ half_width`.
    ConstDetuning { half_width: f64 },
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelFamily::Parabolic => f.write_str("parabolic"),
            ModelFamily::Superparabolic => f.write_str("superparabolic"),
            ModelFamily::ConstDetuning { half_width } => {
                write!(f, "const-detuning (half-width {half_width})")
            }
        }
    }
}

impl ModelFamily {
    /// The family member with parameters `p`, optionally with the coupling
    /// sign flipped at `t = 0`.
    pub fn build(self, p: ParabolicParams, phase_jump_at_zero: bool) -> Result<DriveModel> {
        let m = match self {
            ModelFamily::Parabolic => parabolic(p)?,
            ModelFamily::Superparabolic => superparabolic(p)?,
            ModelFamily::ConstDetuning { half_width } => {
                constant_detuning_pulse(-p.c, p.b, half_width)?
            }
        };
        if phase_jump_at_zero {
            phase_jump(&m, 0.0)
        } else {
            Ok(m)
        }
    }

    /// Whether the crossing formulas describe this family with exponent `n`.
    pub fn supports_crossing_formulas(self, n: u32) -> bool {
        match self {
            ModelFamily::Parabolic => true,
            ModelFamily::Superparabolic => n == 1,
            ModelFamily::ConstDetuning { .. } => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweptParam {
    B,
    C,
}

impl SweptParam {
    pub fn name(self) -> &'static str {
        match self {
            SweptParam::B => "b",
            SweptParam::C => "c",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Numeric,
    IcaReference,
    IcaPhaseJump,
    Universal,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Numeric,
        Method::IcaReference,
        Method::IcaPhaseJump,
        Method::Universal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::IcaReference => "ica-reference",
            Method::IcaPhaseJump => "ica-phase-jump",
            Method::Universal => "universal",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }

    fn is_ica(self) -> bool {
        matches!(self, Method::IcaReference | Method::IcaPhaseJump)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: ModelFamily,
    /// Fixed parameters; the swept one is overwritten at each grid point.
    pub params: ParabolicParams,
    /// Flip the coupling sign at `t = 0` for the numeric column.
    pub phase_jump: bool,
    pub param: SweptParam,
    pub grid: Vec<f64>,
    pub methods: Vec<Method>,
    pub config: SimConfig,
    /// Extra metadata copied into the table; not part of the config hash.
    #[serde(skip)]
    pub metadata: Vec<(String, String)>,
}

/// `min, min + step, …` up to `max` inclusive (within half a step).
pub fn grid_by_step(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!(
            "bad grid min={min} max={max} step={step}"
        )));
    }
    if max < min {
        return Err(Error::invalid(format!("grid max {max} is below min {min}")));
    }
    let n = ((max - min) / step + 0.5).floor() as usize + 1;
    Ok((0..n).map(|k| min + k as f64 * step).collect())
}

impl SweepSpec {
    pub fn new(
        family: ModelFamily,
        params: ParabolicParams,
        param: SweptParam,
        grid: Vec<f64>,
    ) -> Self {
        SweepSpec {
            family,
            params,
            phase_jump: false,
            param,
            grid,
            methods: vec![Method::Numeric],
            config: SimConfig::default(),
            metadata: Vec::new(),
        }
    }

    pub fn with_methods(mut self, methods: &[Method]) -> Self {
        self.methods = methods.to_vec();
        self
    }

    pub fn with_phase_jump(mut self, on: bool) -> Self {
        self.phase_jump = on;
        self
    }

    pub fn with_config(mut self, config: SimConfig) -> Self {
        self.config = config;
        self
    }

    pub fn params_at(&self, x: f64) -> ParabolicParams {
        let mut p = self.params;
        match self.param {
            SweptParam::B => p.b = x,
            SweptParam::C => p.c = x,
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("sweep grid is empty"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("sweep grid contains non-finite values"));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("sweep grid must be strictly increasing"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("no methods requested"));
        }
        for (k, m) in self.methods.iter().enumerate() {
            if self.methods[..k].contains(m) {
                return Err(Error::invalid(format!("method '{m}' requested twice")));
            }
        }
        if let ModelFamily::ConstDetuning { half_width } = self.family {
            if !(half_width > 0.0 && half_width.is_finite()) {
                return Err(Error::invalid(format!(
                    "pulse half-width must be > 0, got {half_width}"
                )));
            }
        }
        let first = self.grid[0];
        let last = self.grid[self.grid.len() - 1];
        self.build_model(first)?;
        self.build_model(last)?;
        self.config.validate()?;
        if self.methods.iter().any(|m| m.is_ica()) {
            if !self.family.supports_crossing_formulas(self.params.n) {
                return Err(Error::invalid(format!(
                    "crossing formulas need the parabolic family with n = 1, got {} n = {}",
                    self.family, self.params.n
                )));
            }
            let any_crossing = match self.param {
                SweptParam::B => self.params.c > 0.0,
                SweptParam::C => last > 0.0,
            };
            if !any_crossing {
                return Err(Error::invalid(
                    "crossing formulas need c > 0 at some grid point",
                ));
            }
        }
        Ok(())
    }

    /// Reference (no jump) model at grid value `x`.
    pub fn reference_model(&self, x: f64) -> Result<DriveModel> {
        self.family.build(self.params_at(x), false)
    }

    /// Model used by the numeric column at grid value `x`.
    pub fn build_model(&self, x: f64) -> Result<DriveModel> {
        self.family.build(self.params_at(x), self.phase_jump)
    }

    /// SHA-256 over the canonical JSON form of the spec.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(&json))
    }

    fn evaluate(&self, x: f64) -> (Vec<f64>, String) {
        let mut row = Vec::with_capacity(self.methods.len() + 1);
        row.push(x);
        let mut notes: Vec<String> = Vec::new();
        let p = self.params_at(x);
        for &m in &self.methods {
            let value = match m {
                Method::Numeric => self
                    .build_model(x)
                    .and_then(|model| transition_probability(&model, &self.config)),
                Method::IcaReference | Method::IcaPhaseJump if p.c <= 0.0 => {
                    Err(Error::NoCrossing { c: p.c })
                }
                Method::IcaReference => ica_propagator_reference(&p).map(|r| r.p),
                Method::IcaPhaseJump => ica_propagator_phase_jump(&p).map(|r| r.p),
                Method::Universal => self
                    .reference_model(x)
                    .and_then(|model| universal_probability(model.v(0.0), model.alpha(0.0))),
            };
            match value {
                Ok(v) => row.push(v.clamp(0.0, 1.0)),
                Err(e) => {
                    row.push(f64::NAN);
                    notes.push(format!("{m}: {e}"));
                }
            }
        }
        (row, notes.join("; "))
    }

    fn empty_table(&self) -> Result<SweepTable> {
        let mut columns = vec![self.param.name().to_owned()];
        columns.extend(self.methods.iter().map(|m| m.name().to_owned()));
        let mut table = SweepTable::new(columns);
        let label = self.build_model(self.grid[0])?.label().to_owned();
        table.set_meta(
            "model",
            format!(
                "{}{}",
                self.family,
                if self.phase_jump {
                    " + phase jump at t=0"
                } else {
                    ""
                }
            ),
        );
        table.set_meta("model_label", label);
        let p = self.params;
        table.set_meta(
            "fixed_params",
            format!(
                "a={} b={} c={} n={} (swept: {})",
                p.a,
                p.b,
                p.c,
                p.n,
                self.param.name()
            ),
        );
        table.set_meta(
            "sim_config",
            serde_json::to_string(&self.config).expect("config serializes"),
        );
        table.set_meta("config_hash", self.config_hash());
        let now = time::OffsetDateTime::now_utc()
            .format(&time::format_description::well_known::Rfc3339)
            .unwrap_or_default();
        table.set_meta(TIMESTAMP_KEY, now);
        for (k, v) in &self.metadata {
            table.set_meta(k.clone(), v.clone());
        }
        Ok(table)
    }

    fn assemble(&self, results: Vec<(Vec<f64>, String)>) -> Result<SweepTable> {
        let mut table = self.empty_table()?;
        for (row, diag) in results {
            table.push_row(row, diag);
        }
        Ok(table)
    }
}

/// Evaluate every grid point on the global thread pool; rows come back in
/// grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let results = spec.grid.par_iter().map(|&x| spec.evaluate(x)).collect();
    spec.assemble(results)
}

/// As [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepTable> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start thread pool: {e}")))?;
    let results = pool.install(|| spec.grid.par_iter().map(|&x| spec.evaluate(x)).collect());
    spec.assemble(results)
}

pub fn run_sweep_serial(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let results = spec.grid.iter().map(|&x| spec.evaluate(x)).collect();
    spec.assemble(results)
}
