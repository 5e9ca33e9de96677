//! Parameter sweeps, figure datasets, convergence reports and CSV output.

mod convergence;
mod figures;
mod sweep;
mod table;

pub use convergence::{
    convergence_report, ConvergenceReport, ConvergenceRow, CONVERGENCE_THRESHOLD,
};
pub use figures::{
    figure_file_name, reproduce_figure, reproduce_figure_with, write_figure, FigureId,
};
pub use sweep::{
    grid_by_step, run_sweep, run_sweep_serial, run_sweep_with_threads, Method, ModelFamily,
    SweepSpec, SweptParam,
};
pub use table::{read_csv, write_csv, SweepTable};
