use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zeroarea::closed_form::{
    ica_propagator_phase_jump, ica_propagator_reference, universal_probability,
};
use zeroarea::experiments::{
    convergence_report, grid_by_step, reproduce_figure_with, run_sweep, write_csv, write_figure,
    FigureId, Method, ModelFamily, SweepSpec, SweptParam,
};
use zeroarea::models::ParabolicParams;
use zeroarea::{transition_probability, Error, Projection, Scheme, SimConfig};

const OUT_ENV: &str = "ZEROAREA_OUT";

/// Two-level transition probabilities for parabolic drives with and without
/// a phase jump in the coupling.
#[derive(Parser, Debug)]
#[command(name = "zeroarea", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition probability for one parameter set.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Also print closed-form predictions (comma separated).
        #[arg(long = "with", value_enum, value_delimiter = ',')]
        with: Vec<Extra>,
    },
    /// Sweep b or c and write a CSV table.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Parameter to sweep.
        #[arg(long, value_enum, default_value_t = Param::B)]
        param: Param,
        /// Columns to compute (comma separated).
        #[arg(long, value_enum, value_delimiter = ',', default_value = "numeric")]
        methods: Vec<MethodArg>,
        /// Output CSV file [default: $ZEROAREA_OUT/sweep_<param>.csv, or the current directory].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the datasets of one figure as `<figure>_<c>.csv` files.
    Figure {
        #[arg(value_enum)]
        id: FigureArg,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long, env = OUT_ENV, default_value = ".")]
        out: PathBuf,
    },
    /// P under window doubling and tolerance halving.
    Converge {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Drive family.
    #[arg(long, value_enum, default_value_t = ModelKind::Parabolic)]
    model: ModelKind,
    /// Curvature of the detuning.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
    /// Coupling strength.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    /// Detuning offset: alpha(0) = -c.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    /// Exponent of the superparabolic detuning t^(2n).
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Pulse half-width for const-detuning.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    width: f64,
    /// Flip the sign of the coupling at t = 0.
    #[arg(long)]
    phase_jump: bool,
}

#[derive(Args, Debug)]
struct SimArgs {
    /// Window half-width T [default: smallest T meeting the asymptotic condition].
    #[arg(long = "T", visible_alias = "window", allow_negative_numbers = true)]
    window: Option<f64>,
    /// Local error tolerance per step.
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    /// Window factor kappa in |alpha(T)| >= kappa max(V, 1).
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    kappa: f64,
    /// Integration scheme.
    #[arg(long, value_enum, default_value_t = SchemeArg::Cf4)]
    scheme: SchemeArg,
    /// Readout basis at the window edges.
    #[arg(long, value_enum, default_value_t = ProjectionArg::Adiabatic)]
    projection: ProjectionArg,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// First grid value.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    min: f64,
    /// Last grid value.
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    max: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.025, allow_negative_numbers = true)]
    step: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelKind {
    Parabolic,
    Superparabolic,
    ConstDetuning,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Extra {
    Universal,
    Ica,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Param {
    B,
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Numeric,
    IcaReference,
    IcaPhaseJump,
    Universal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Cf4,
    Midpoint,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProjectionArg {
    Adiabatic,
    Diabatic,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl ModelArgs {
    fn family(&self) -> ModelFamily {
        match self.model {
            ModelKind::Parabolic => ModelFamily::Parabolic,
            ModelKind::Superparabolic => ModelFamily::Superparabolic,
            ModelKind::ConstDetuning => ModelFamily::ConstDetuning {
                half_width: self.width,
            },
        }
    }

    fn params(&self) -> ParabolicParams {
        ParabolicParams {
            a: self.a,
            b: self.b,
            c: self.c,
            n: self.n,
        }
    }
}

impl SimArgs {
    fn config(&self) -> Result<SimConfig, Failure> {
        let cfg = SimConfig {
            window_half_width: self.window,
            local_error_tol: self.tol,
            window_scale_factor: self.kappa,
            scheme: match self.scheme {
                SchemeArg::Cf4 => Scheme::CommutatorFree4,
                SchemeArg::Midpoint => Scheme::Midpoint,
            },
            projection: match self.projection {
                ProjectionArg::Adiabatic => Projection::Adiabatic,
                ProjectionArg::Diabatic => Projection::Diabatic,
            },
            ..SimConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Numeric => Method::Numeric,
            MethodArg::IcaReference => Method::IcaReference,
            MethodArg::IcaPhaseJump => Method::IcaPhaseJump,
            MethodArg::Universal => Method::Universal,
        }
    }
}

impl From<FigureArg> for FigureId {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig2 => FigureId::Fig2,
            FigureArg::Fig3 => FigureId::Fig3,
            FigureArg::Fig4 => FigureId::Fig4,
            FigureArg::Fig5 => FigureId::Fig5,
            FigureArg::Fig6 => FigureId::Fig6,
        }
    }
}

fn invocation() -> String {
    std::env::args()
        .map(|a| {
            if a.is_empty() || a.contains(|c: char| c.is_whitespace() || "'\"$\\".contains(c)) {
                format!("'{}'", a.replace('\'', "'\\''"))
            } else {
                a
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn simulate(model: &ModelArgs, sim: &SimArgs, with: &[Extra]) -> Result<(), Failure> {
    let cfg = sim.config()?;
    let family = model.family();
    let p = model.params();
    let m = family.build(p, model.phase_jump)?;
    let reference = family.build(p, false)?;
    let want_ica = with.contains(&Extra::Ica);
    if want_ica {
        if !family.supports_crossing_formulas(p.n) {
            return Err(Failure::Usage(
                "--with ica needs the parabolic model with n = 1".into(),
            ));
        }
        if p.c <= 0.0 {
            return Err(Failure::Usage(format!(
                "--with ica needs c > 0 (a level crossing), got c = {}",
                p.c
            )));
        }
    }
    let universal = if with.contains(&Extra::Universal) {
        Some(universal_probability(
            reference.v(0.0),
            reference.alpha(0.0),
        )?)
    } else {
        None
    };
    let ica = if want_ica {
        Some(if model.phase_jump {
            ica_propagator_phase_jump(&p)?.p
        } else {
            ica_propagator_reference(&p)?.p
        })
    } else {
        None
    };
    let numeric = transition_probability(&m, &cfg)?;
    println!("model: {}", m.label());
    println!("P = {numeric}");
    if let Some(u) = universal {
        println!("universal = {u}");
    }
    if let Some(i) = ica {
        println!("ica = {i}");
    }
    Ok(())
}

fn sweep(
    model: &ModelArgs,
    sim: &SimArgs,
    grid: &GridArgs,
    param: Param,
    methods: &[MethodArg],
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let param = match param {
        Param::B => SweptParam::B,
        Param::C => SweptParam::C,
    };
    let mut spec = SweepSpec::new(
        model.family(),
        model.params(),
        param,
        grid_by_step(grid.min, grid.max, grid.step)?,
    )
    .with_phase_jump(model.phase_jump)
    .with_methods(&methods.iter().map(|&m| m.into()).collect::<Vec<Method>>())
    .with_config(sim.config()?);
    spec.metadata.push(("invocation".into(), invocation()));
    spec.validate()?;
    let out = out.unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(format!("sweep_{}.csv", param.name()))
    });
    let table = run_sweep(&spec)?;
    write_csv(&table, &out)?;
    let failed = table.diagnostics.iter().filter(|d| !d.is_empty()).count();
    println!("wrote {} rows to {}", table.rows.len(), out.display());
    if failed > 0 {
        println!("{failed} rows have missing values, see the diagnostics column");
    }
    Ok(())
}

fn figure(id: FigureArg, sim: &SimArgs, grid: &GridArgs, out: PathBuf) -> Result<(), Failure> {
    let id = FigureId::from(id);
    let cfg = sim.config()?;
    let b_grid = grid_by_step(grid.min, grid.max, grid.step)?;
    let mut tables = reproduce_figure_with(id, &b_grid, &cfg)?;
    let cmd = invocation();
    for t in &mut tables {
        t.set_meta("invocation", cmd.clone());
    }
    for path in write_figure(id, &tables, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn converge(model: &ModelArgs, sim: &SimArgs) -> Result<(), Failure> {
    let cfg = sim.config()?;
    let m = model.family().build(model.params(), model.phase_jump)?;
    let report = convergence_report(&m, &cfg)?;
    println!("{report}");
    if report.converged {
        Ok(())
    } else {
        Err(Failure::Numeric("sequence did not converge".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate { model, sim, with } => simulate(&model, &sim, &with),
        Command::Sweep {
            model,
            sim,
            grid,
            param,
            methods,
            out,
        } => sweep(&model, &sim, &grid, param, &methods, out),
        Command::Figure { id, sim, grid, out } => figure(id, &sim, &grid, out),
        Command::Converge { model, sim } => converge(&model, &sim),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
    }
}
