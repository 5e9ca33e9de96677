use std::fmt;

use crate::error::Result;
use crate::models::DriveModel;
use crate::propagate::{transition_probability, SimConfig};

/// Largest allowed change in `P` between successive refinements.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub half_width: f64,
    pub tol: f64,
    pub p: f64,
    /// `|P − P_previous|` within the same refinement sequence.
    pub change: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub label: String,
    /// Base row, then the window-doubling row, then tolerance halvings.
    pub rows: Vec<ConvergenceRow>,
    pub converged: bool,
    pub max_change: f64,
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}", self.label)?;
        writeln!(f, "{:>14} {:>10} {:>20} {:>12}", "T", "tol", "P", "change")?;
        for r in &self.rows {
            let change = r
                .change
                .map_or_else(|| "-".to_owned(), |c| format!("{c:.3e}"));
            writeln!(
                f,
                "{:>14.6} {:>10.1e} {:>20.15} {:>12}",
                r.half_width, r.tol, r.p, change
            )?;
        }
        write!(
            f,
            "{} (max change {:.3e}, threshold {:.0e})",
            if self.converged {
                "converged"
            } else {
                "NOT CONVERGED"
            },
            self.max_change,
            CONVERGENCE_THRESHOLD
        )
    }
}

/// `P` at the configured window `T` and tolerance, at `2T`, and at the
/// tolerance halved twice. Integration failures are returned as errors;
/// a sequence whose changes exceed [`CONVERGENCE_THRESHOLD`] is flagged.
pub fn convergence_report(model: &DriveModel, cfg: &SimConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let t = cfg.half_width_for(model)?;
    let tol = cfg.local_error_tol;
    let run = |half_width: f64, tol: f64| -> Result<f64> {
        transition_probability(model, &cfg.with_window(half_width).with_tol(tol))
    };
    let base = run(t, tol)?;
    let mut rows = vec![ConvergenceRow {
        half_width: t,
        tol,
        p: base,
        change: None,
    }];
    let doubled = run(2.0 * t, tol)?;
    rows.push(ConvergenceRow {
        half_width: 2.0 * t,
        tol,
        p: doubled,
        change: Some((doubled - base).abs()),
    });
    let mut prev = base;
    for k in 1..=2 {
        let tk = tol / f64::from(1u32 << k);
        let p = run(t, tk)?;
        rows.push(ConvergenceRow {
            half_width: t,
            tol: tk,
            p,
            change: Some((p - prev).abs()),
        });
        prev = p;
    }
    let max_change = rows.iter().filter_map(|r| r.change).fold(0.0, f64::max);
    Ok(ConvergenceReport {
        label: model.label().to_owned(),
        rows,
        converged: max_change < CONVERGENCE_THRESHOLD,
        max_change,
    })
}
