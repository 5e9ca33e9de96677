use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::sweep::{grid_by_step, run_sweep, Method, ModelFamily, SweepSpec, SweptParam};
use super::table::{write_csv, SweepTable};
use crate::error::{Error, Result};
use crate::models::ParabolicParams;
use crate::propagate::SimConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }

    /// Offsets `c`, one dataset each.
    pub fn c_values(self) -> &'static [f64] {
        match self {
            FigureId::Fig2 => &[0.0, -0.1, -0.5, -1.0],
            FigureId::Fig3 | FigureId::Fig4 => &[0.5, 1.0, 10.0],
            FigureId::Fig5 => &[-1.0, -4.0, -10.0],
            FigureId::Fig6 => &[0.0],
        }
    }

    fn description(self) -> &'static str {
        match self {
            FigureId::Fig2 => "reference parabolic model, numeric",
            FigureId::Fig3 => "reference parabolic model, numeric and independent-crossing formula",
            FigureId::Fig4 => "phase-jump parabolic model, numeric, independent-crossing formula and universal formula",
            FigureId::Fig5 => "phase-jump parabolic model, numeric and universal formula",
            FigureId::Fig6 => "glancing crossing c = 0, reference and phase-jump numeric",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown figure '{s}' (expected fig2..fig6)")))
    }
}

/// `<figure-id>_<c-value>.csv`
pub fn figure_file_name(id: FigureId, c: f64) -> String {
    format!("{}_{}.csv", id.name(), c)
}

/// Figure datasets on the default grid `b ∈ [0, 5]`, step 0.025.
pub fn reproduce_figure(id: FigureId) -> Result<Vec<SweepTable>> {
    reproduce_figure_with(id, &grid_by_step(0.0, 5.0, 0.025)?, &SimConfig::default())
}

pub fn reproduce_figure_with(
    id: FigureId,
    b_grid: &[f64],
    config: &SimConfig,
) -> Result<Vec<SweepTable>> {
    id.c_values()
        .iter()
        .map(|&c| {
            let base = SweepSpec::new(
                ModelFamily::Parabolic,
                ParabolicParams::with_bc(0.0, c),
                SweptParam::B,
                b_grid.to_vec(),
            )
            .with_config(*config);
            let mut table = match id {
                FigureId::Fig2 => run_sweep(&base)?,
                FigureId::Fig3 => run_sweep(&base.with_methods(&[Method::Numeric, Method::IcaReference]))?,
                FigureId::Fig4 => run_sweep(
                    &base
                        .with_phase_jump(true)
                        .with_methods(&[Method::Numeric, Method::IcaPhaseJump, Method::Universal]),
                )?,
                FigureId::Fig5 => {
                    run_sweep(&base.with_phase_jump(true).with_methods(&[Method::Numeric, Method::Universal]))?
                }
                FigureId::Fig6 => {
                    let mut reference = run_sweep(&base)?;
                    let jump = run_sweep(&base.with_phase_jump(true))?;
                    reference.columns[1] = "numeric-reference".into();
                    reference.join_columns(&jump, &[("numeric", "numeric-phase-jump")])?;
                    reference.set_meta("model", "parabolic, reference and phase jump at t=0");
                    reference.set_meta("model_label", jump.meta("model_label").unwrap_or_default().to_owned());
                    reference
                }
            };
            table.set_meta("figure", id.name());
            table.set_meta("description", id.description());
            table.set_meta("c", c.to_string());
            if id == FigureId::Fig4 {
                table.set_meta(
                    "assumption",
                    "offsets c taken to be the same set as fig3 (0.5, 1, 10); the original set is not listed",
                );
            }
            Ok(table)
        })
        .collect()
}

/// Write each dataset of `id` into `dir`, returning the paths written.
pub fn write_figure(
    id: FigureId,
    tables: &[SweepTable],
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    tables
        .iter()
        .zip(id.c_values())
        .map(|(t, &c)| {
            let path = dir.join(figure_file_name(id, c));
            write_csv(t, &path)?;
            Ok(path)
        })
        .collect()
}
