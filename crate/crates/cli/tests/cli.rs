use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multiwit::sysio::{parse_system, read_archive};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiwit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Solves `system` into `dir/name.mwit` and returns the archive path.
fn solve(dir: &TempDir, system: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.path().join(format!("{name}.mwit"));
    let mut args = vec!["solve", path(system), "-o", path(&out)];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn write_system(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn info_multidegree(archive: &Path) -> String {
    let o = run(&["info", path(archive)]);
    assert_eq!(code(&o), 0);
    stdout(&o)
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("multidegree: ")
        .to_string()
}

#[test]
fn solve_writes_an_archive_and_a_table() {
    let dir = TempDir::new().unwrap();
    let archive = dir.path().join("p.mwit");
    let o = run(&["solve", path(&data("parabola.msys")), "-o", path(&archive)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("stage"));
    assert!(text.contains("multidegree: 1 w^(1,0) + 2 w^(0,1)"));
    assert_eq!(info_multidegree(&archive), "1 w^(1,0) + 2 w^(0,1)");
}

#[test]
fn solve_defaults_the_output_next_to_the_input() {
    let dir = TempDir::new().unwrap();
    let sys = write_system(
        &dir,
        "p.msys",
        &fs::read_to_string(data("parabola.msys")).unwrap(),
    );
    assert_eq!(code(&run(&["solve", path(&sys)])), 0);
    assert!(dir.path().join("p.mwit").exists());
}

#[test]
fn two_surfaces_two_curves_counts() {
    let dir = TempDir::new().unwrap();
    let archive = solve(
        &dir,
        &data("two_surfaces_two_curves.msys"),
        "s",
        &["--seed", "4"],
    );
    assert_eq!(
        info_multidegree(&archive),
        "1 w^(2,0) + 1 w^(1,1) + 1 w^(1,0) + 2 w^(0,1)"
    );
}

#[test]
fn empty_system_gives_the_ambient_point() {
    let dir = TempDir::new().unwrap();
    let sys = write_system(
        &dir,
        "e.msys",
        "variable_group x0, x1;\nvariable_group y0, y1;\n",
    );
    let archive = solve(&dir, &sys, "e", &[]);
    assert_eq!(info_multidegree(&archive), "1 w^(1,1)");
}

#[test]
fn six_r_four_groups_ends_with_sixteen() {
    let dir = TempDir::new().unwrap();
    let archive = solve(&dir, &data("six_r_4hom.msys"), "r", &[]);
    assert_eq!(info_multidegree(&archive), "16 w^(0,0,0,0)");
}

#[test]
fn structural_errors_exit_one_with_stderr_only() {
    let dir = TempDir::new().unwrap();
    let sys = write_system(&dir, "bad.msys", "variable_group x;\nf = x +;\n");
    let o = run(&["solve", path(&sys)]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:8"));
    assert_eq!(
        code(&run(&["info", path(&dir.path().join("missing.mwit"))])),
        1
    );
}

#[test]
fn path_failures_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("p.mwit");
    let o = run(&[
        "solve",
        path(&data("parabola.msys")),
        "-o",
        path(&out),
        "--tol-final",
        "1e-300",
    ]);
    assert_eq!(code(&o), 2);
    assert!(out.exists());
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let sys = data("two_surfaces_two_curves.msys");
    let a = dir.path().join("a.mwit");
    let b = dir.path().join("b.mwit");
    let ra = run(&[
        "solve",
        path(&sys),
        "-o",
        path(&a),
        "--seed",
        "9",
        "--report",
        "json",
    ]);
    let rb = run(&[
        "solve",
        path(&sys),
        "-o",
        path(&b),
        "--seed",
        "9",
        "--report",
        "json",
        "--threads",
        "1",
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ra.stdout, rb.stdout);
    let report: serde_json::Value = serde_json::from_slice(&ra.stdout).unwrap();
    assert_eq!(report["schema"], "report 1");
    assert_eq!(report["seed"], 9);
    assert_eq!(report["stages"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_flags_are_accepted() {
    let dir = TempDir::new().unwrap();
    let sys = data("two_surfaces_two_curves.msys");
    let archive = solve(
        &dir,
        &sys,
        "r",
        &[
            "--randomize",
            "--order",
            "degree",
            "--carry",
            "all",
            "--tol-track",
            "1e-8",
        ],
    );
    assert_eq!(
        info_multidegree(&archive),
        "1 w^(2,0) + 1 w^(1,1) + 1 w^(1,0) + 2 w^(0,1)"
    );
    // only the listed types are reported
    let restricted = solve(&dir, &sys, "e", &["--e", "1,0", "--e", "2,0"]);
    assert_eq!(info_multidegree(&restricted), "1 w^(2,0) + 1 w^(1,0)");
}

#[test]
fn perturbed_lagrange_counts_multiplicity() {
    let dir = TempDir::new().unwrap();
    let archive = solve(
        &dir,
        &data("lagrange.msys"),
        "l",
        &["--perturb", "--seed", "1"],
    );
    let c = read_archive(&fs::read_to_string(&archive).unwrap()).unwrap();
    let total: usize = c
        .sets()
        .flat_map(|(_, w)| w.multiplicities.iter().copied())
        .sum();
    assert_eq!(total, 64);
}

#[test]
fn membership_exit_codes() {
    let dir = TempDir::new().unwrap();
    let archive = solve(&dir, &data("surface.msys"), "s", &["--seed", "5"]);
    let a = path(&archive);
    let o = run(&["member", a, "--point", "1,0,0,1,0,3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("member of w^("));
    assert_eq!(code(&run(&["member", a, "--witness", "1,1:1"])), 0);
    let o = run(&["member", a, "--point", "1,2,-1,0.5,1,3"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("not a member"));
    assert_eq!(code(&run(&["member", a, "--point", "1,2"])), 1);
}

#[test]
fn decompose_two_surfaces_two_curves() {
    let dir = TempDir::new().unwrap();
    let archive = solve(
        &dir,
        &data("two_surfaces_two_curves.msys"),
        "s",
        &["--seed", "3", "--carry", "all"],
    );
    let parts = dir.path().join("parts");
    let o = run(&[
        "decompose",
        path(&archive),
        "--seed",
        "3",
        "-o",
        path(&parts),
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("dimension 2: 2 components"), "{text}");
    assert!(text.contains("dimension 1: 2 components"), "{text}");
    let mut summaries: Vec<String> = (0..2)
        .flat_map(|j| [2, 1].map(|d| parts.join(format!("dim{d}_component{j}.mwit"))))
        .map(|p| info_multidegree(&p))
        .collect();
    summaries.sort();
    assert_eq!(
        summaries,
        [
            "1 w^(0,1)",
            "1 w^(1,0) + 1 w^(0,1)",
            "1 w^(1,1)",
            "1 w^(2,0)"
        ]
    );
}

#[test]
fn degree_one_collection_is_one_component() {
    let dir = TempDir::new().unwrap();
    let sys = write_system(
        &dir,
        "l.msys",
        "variable_group x0, x1;\nvariable_group y0, y1;\nf = x1 - 2*x0;\n",
    );
    let archive = solve(&dir, &sys, "l", &[]);
    let o = run(&["decompose", path(&archive)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("dimension 1: 1 components\n  component 0: 1 w^(0,1)\n"));
}

#[test]
fn constructed_reducible_curve() {
    let dir = TempDir::new().unwrap();
    let sys = write_system(
        &dir,
        "r.msys",
        "variable_group x0, x1;\nvariable_group y0, y1;\nf = (x0*y1 - x1*y0)*(x1 - 2*x0);\n",
    );
    let archive = solve(&dir, &sys, "r", &["--seed", "2"]);
    let parts = dir.path().join("parts");
    let o = run(&["decompose", path(&archive), "-o", path(&parts)]);
    assert_eq!(code(&o), 0);
    let mut got: Vec<String> = (0..2)
        .map(|j| info_multidegree(&parts.join(format!("dim1_component{j}.mwit"))))
        .collect();
    got.sort();
    assert_eq!(got, ["1 w^(0,1)", "1 w^(1,0) + 1 w^(0,1)"]);
}

#[test]
fn trace_full_and_partial_subsets() {
    let dir = TempDir::new().unwrap();
    let archive = solve(&dir, &data("lines_and_curve.msys"), "l", &["--seed", "2"]);
    let csv = dir.path().join("t.csv");
    let o = run(&["trace", path(&archive), "--csv", path(&csv)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("linear"));
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "re", "im"]);
    let ts: Vec<String> = reader
        .records()
        .map(|r| r.unwrap()[0].to_string())
        .collect();
    assert_eq!(ts, ["1", "0.5", "0"]);
    // the two lines are components of their own, so dropping one of their
    // points keeps the trace linear; dropping a point of the curve does not
    let mut line_points = Vec::new();
    for drop in 0..5 {
        let subset: Vec<String> = (0..5)
            .filter(|&j| j != drop)
            .map(|j| j.to_string())
            .collect();
        let o = run(&["trace", path(&archive), "--subset", &subset.join(",")]);
        match code(&o) {
            0 => line_points.push(drop.to_string()),
            c => assert_eq!(c, 3, "dropping {drop}: {}", stdout(&o)),
        }
    }
    assert_eq!(line_points.len(), 2);
    let lines = line_points.join(",");
    assert_eq!(
        code(&run(&["trace", path(&archive), "--subset", &lines])),
        0
    );
    let o = run(&["trace", path(&archive), "--subset", &line_points[0]]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&run(&["trace", path(&archive), "--subset", "7"])), 1);
}

#[test]
fn trace_of_a_line_point_is_linear() {
    let dir = TempDir::new().unwrap();
    let sys = write_system(
        &dir,
        "l.msys",
        "variable_group x0, x1;\nvariable_group y0, y1;\nf = x1 - 2*x0;\n",
    );
    let archive = solve(&dir, &sys, "l", &[]);
    let o = run(&["trace", path(&archive), "--subset", "0"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn trace_omitting_a_hypersurface_point_is_nonlinear() {
    let dir = TempDir::new().unwrap();
    let archive = solve(&dir, &data("parabola.msys"), "p", &[]);
    assert_eq!(code(&run(&["trace", path(&archive)])), 0);
    assert_eq!(code(&run(&["trace", path(&archive), "--subset", "0,1"])), 3);
    assert_eq!(code(&run(&["trace", path(&archive), "--subset", "1,2"])), 3);
}

fn sample_rows(archive: &Path, seed: &str) -> Vec<Vec<String>> {
    let o = run(&[
        "sample",
        path(archive),
        "--e",
        "1,1",
        "--count",
        "3",
        "--seed",
        seed,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn samples_lie_on_the_variety() {
    let dir = TempDir::new().unwrap();
    let archive = solve(&dir, &data("surface.msys"), "s", &["--seed", "5"]);
    let sys = parse_system(&fs::read_to_string(data("surface.msys")).unwrap()).unwrap();
    let rows = sample_rows(&archive, "1");
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let point: Vec<multiwit::Complex64> = row[2..].iter().map(|z| parse(z)).collect();
        assert!(sys.relative_residual(&point) < 1e-10);
    }
    assert_ne!(rows, sample_rows(&archive, "2"));
    let o = run(&["member", path(&archive), "--point", &rows[0][2..].join(",")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

/// Reads the `a+bi` form written by `sample`.
fn parse(z: &str) -> multiwit::Complex64 {
    let body = z.strip_suffix('i').unwrap();
    let k = (1..body.len())
        .rev()
        .find(|&k| matches!(&body[k..k + 1], "+" | "-") && !matches!(&body[k - 1..k], "e" | "E"))
        .unwrap();
    multiwit::Complex64::new(body[..k].parse().unwrap(), body[k..].parse().unwrap())
}

#[test]
fn info_summaries() {
    let dir = TempDir::new().unwrap();
    let archive = solve(&dir, &data("parabola.msys"), "p", &["--seed", "42"]);
    let o = run(&["info", path(&archive)]);
    let text = stdout(&o);
    assert!(text.contains("ambient: P^1 x P^1"));
    assert!(text.contains("points: 3"));
    assert!(text.contains("seed: 42"));
    assert_eq!(run(&["info", path(&archive)]).stdout, o.stdout);
    let empty = solve(&dir, &data("parabola.msys"), "e", &["--e", "1,1"]);
    assert_eq!(info_multidegree(&empty), "0");
    assert!(stdout(&run(&["info", path(&empty)])).contains("dimensions: none"));
}
