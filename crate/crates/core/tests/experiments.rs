use zeroarea::experiments::{
    grid_by_step, read_csv, reproduce_figure_with, run_sweep, run_sweep_serial,
    run_sweep_with_threads, write_csv, write_figure, FigureId, Method, ModelFamily, SweepSpec,
    SweptParam,
};
use zeroarea::models::ParabolicParams;
use zeroarea::SimConfig;

fn csv_without_timestamp(path: &std::path::Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("# timestamp:"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn jump_spec() -> SweepSpec {
    SweepSpec::new(
        ModelFamily::Parabolic,
        ParabolicParams::with_bc(0.0, 2.0),
        SweptParam::B,
        grid_by_step(0.0, 3.0, 0.1).unwrap(),
    )
    .with_phase_jump(true)
    .with_methods(&Method::ALL)
}

#[test]
fn identical_specs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_csv(&run_sweep(&jump_spec()).unwrap(), &p1).unwrap();
    write_csv(&run_sweep(&jump_spec()).unwrap(), &p2).unwrap();
    assert_eq!(csv_without_timestamp(&p1), csv_without_timestamp(&p2));
    let back = read_csv(&p1).unwrap();
    assert_eq!(back.rows.len(), 31);
    assert!(back.meta("config_hash").is_some());
}

#[test]
fn parallel_equals_serial() {
    let spec = jump_spec();
    let serial = run_sweep_serial(&spec).unwrap();
    for threads in [1, 3, 8] {
        let par = run_sweep_with_threads(&spec, threads).unwrap();
        assert_eq!(par.columns, serial.columns);
        assert_eq!(par.diagnostics, serial.diagnostics);
        for (a, b) in par.rows.iter().zip(&serial.rows) {
            for (x, y) in a.iter().zip(b) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}

#[test]
fn probabilities_stay_in_unit_interval() {
    let t = run_sweep(&jump_spec()).unwrap();
    for row in &t.rows {
        for &p in &row[1..] {
            assert!(p.is_nan() || (0.0..=1.0).contains(&p));
        }
    }
}

#[test]
fn fig2_suppression_with_negative_offset() {
    let grid = grid_by_step(0.0, 5.0, 0.1).unwrap();
    let tables = reproduce_figure_with(FigureId::Fig2, &grid, &SimConfig::default()).unwrap();
    assert_eq!(tables.len(), 4);
    let glancing = tables[0].column("numeric").unwrap();
    let tunnelling = tables[3].column("numeric").unwrap();
    for (g, t) in glancing.iter().zip(&tunnelling) {
        if *g >= 1e-3 {
            assert!(t <= g, "{t} > {g}");
        } else {
            assert!(*t <= g + 5e-4, "{t} > {g}");
        }
    }
}

#[test]
fn fig5_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let grid = grid_by_step(0.0, 5.0, 0.5).unwrap();
    let tables = reproduce_figure_with(FigureId::Fig5, &grid, &SimConfig::default()).unwrap();
    let paths = write_figure(FigureId::Fig5, &tables, dir.path()).unwrap();
    let names: Vec<_> = paths
        .iter()
        .map(|p| p.file_name().unwrap().to_str().unwrap().to_owned())
        .collect();
    assert_eq!(names, ["fig5_-1.csv", "fig5_-4.csv", "fig5_-10.csv"]);
    for p in &paths {
        let t = read_csv(p).unwrap();
        assert_eq!(t.columns, ["b", "numeric", "universal"]);
        assert_eq!(t.rows.len(), grid.len());
    }
}
