use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use multiwit::decompose::{
    decompose_all, is_affine_linear, membership_test, subset_trace, trace_cuts, DecomposeOptions,
    Membership, SliceVerdict, TRACE_TOL,
};
use multiwit::regeneration::{
    multiregenerate, perturbed_solve, CarryMode, Order, RegenOptions, ReportTable, StageReport,
};
use multiwit::rng::{derived, tags};
use multiwit::sysio::{parse_system, read_archive, write_archive};
use multiwit::witness::{move_slice, random_slice};
use multiwit::{Complex64, SliceType, TrackerSettings, WitnessCollection};
use serde_json::json;

use crate::points::{format_complex, parse_point, parse_usizes};
use crate::{CarryArg, Command, Common, OrderArg, ReportArg};

pub const EXIT_FAILURES: u8 = 2;
pub const EXIT_NO: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Solve {
            system,
            output,
            common,
            randomize,
            perturb,
            order,
            restrict,
            carry,
            report,
        } => {
            setup(&common)?;
            let opts = SolveOpts {
                randomize,
                perturb,
                order,
                restrict,
                carry,
                report,
            };
            solve(&system, output, &common, &opts)
        }
        Command::Member {
            archive,
            point,
            witness,
            common,
        } => {
            setup(&common)?;
            member(&archive, point.as_deref(), witness.as_deref(), &common)
        }
        Command::Decompose {
            archive,
            output_dir,
            loops,
            common,
        } => {
            setup(&common)?;
            decompose(&archive, output_dir.as_deref(), loops, &common)
        }
        Command::Trace {
            archive,
            e0,
            subset,
            csv,
            common,
        } => {
            setup(&common)?;
            trace(
                &archive,
                e0.as_deref(),
                subset.as_deref(),
                csv.as_deref(),
                &common,
            )
        }
        Command::Sample {
            archive,
            e,
            count,
            output,
            common,
        } => {
            setup(&common)?;
            sample(&archive, &e, count, output.as_deref(), &common)
        }
        Command::Info { archive } => info(&archive),
    }
}

fn setup(common: &Common) -> Result<()> {
    if let Some(n) = common.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn settings(common: &Common) -> Result<TrackerSettings> {
    let mut s = TrackerSettings::default();
    if let Some(t) = common.tol_track {
        s.tol_track = t;
    }
    if let Some(t) = common.tol_final {
        s.tol_final = t;
    }
    s.validate()
        .map_err(|e| anyhow!("invalid tracker settings: {e}"))?;
    Ok(s)
}

fn load_archive(path: &Path) -> Result<WitnessCollection> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_archive(&text).with_context(|| format!("reading archive {}", path.display()))
}

fn slice_type(s: &str, collection: &WitnessCollection) -> Result<SliceType> {
    let dims = collection.system.structure().dims();
    Ok(SliceType::new(parse_usizes(s)?, &dims)?)
}

struct SolveOpts {
    randomize: bool,
    perturb: bool,
    order: OrderArg,
    restrict: Vec<String>,
    carry: CarryArg,
    report: ReportArg,
}

fn solve(path: &Path, output: Option<PathBuf>, common: &Common, o: &SolveOpts) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let sys = parse_system(&text).with_context(|| format!("parsing {}", path.display()))?;
    let dims = sys.structure().dims();
    let restrict = if o.restrict.is_empty() {
        None
    } else {
        Some(
            o.restrict
                .iter()
                .map(|s| Ok(SliceType::new(parse_usizes(s)?, &dims)?))
                .collect::<Result<Vec<_>>>()?,
        )
    };
    let opts = RegenOptions {
        settings: settings(common)?,
        seed: common.seed,
        carry: match o.carry {
            CarryArg::Auto => CarryMode::Auto,
            CarryArg::All => CarryMode::All,
            CarryArg::Isolated => CarryMode::Isolated,
        },
        randomize: o.randomize,
        order: match o.order {
            OrderArg::Input => Order::AsGiven,
            OrderArg::Degree => Order::Degree,
        },
        restrict,
        ..Default::default()
    };
    let (collection, reports, failures) = if o.perturb {
        let out = perturbed_solve(&sys, &opts)?;
        let failures = out.perturbed.total_failures() + out.failures;
        (out.collection, out.perturbed.reports, failures)
    } else {
        let r = multiregenerate(&sys, &opts)?;
        let failures = r.total_failures();
        (r.collection, r.reports, failures)
    };
    let output = output.unwrap_or_else(|| path.with_extension("mwit"));
    fs::write(&output, write_archive(&collection))
        .with_context(|| format!("writing {}", output.display()))?;

    let mut out = io::stdout().lock();
    match o.report {
        ReportArg::Table => {
            write!(out, "{}", ReportTable(&reports))?;
            writeln!(out, "multidegree: {}", collection.multidegree())?;
            writeln!(out, "failures: {failures}")?;
        }
        ReportArg::Json => {
            let doc = json!({
                "schema": "report 1",
                "seed": common.seed,
                "system": path.file_name().map(|n| n.to_string_lossy().into_owned()),
                "perturbed": o.perturb,
                "randomized": o.randomize,
                "stages": reports.iter().map(stage_json).collect::<Vec<_>>(),
                "multidegree": collection.multidegree().0.iter().map(|(e, c)| json!({"type": e.0, "count": c})).collect::<Vec<_>>(),
                "failures": failures,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(if failures > 0 { EXIT_FAILURES } else { 0 })
}

fn stage_json(r: &StageReport) -> serde_json::Value {
    let counts = |m: &std::collections::BTreeMap<SliceType, usize>| {
        m.iter()
            .map(|(e, c)| json!({"type": e.0, "count": c}))
            .collect::<Vec<_>>()
    };
    json!({
        "stage": r.stage,
        "polynomial": r.polynomial,
        "linear_paths": r.linear_paths,
        "deformation_paths": r.deformation_paths(),
        "start_points": counts(&r.start_points),
        "isolated": counts(&r.isolated),
        "nonsolutions": counts(&r.nonsolutions),
        "nonisolated": r.nonisolated,
        "at_infinity": r.at_infinity,
        "failures": r.failures,
        "off_system": r.off_system,
        "carried": r.carried,
        "inconclusive": r.inconclusive,
        "singular": r.singular,
    })
}

fn member(path: &Path, point: Option<&str>, witness: Option<&str>, common: &Common) -> Result<u8> {
    let collection = load_archive(path)?;
    let alpha: Vec<Complex64> = match (point, witness) {
        (Some(p), _) => parse_point(p, collection.system.structure().total_vars())?,
        (None, Some(w)) => {
            let (e, index) = w
                .rsplit_once(':')
                .ok_or_else(|| anyhow!("--witness expects TYPE:INDEX, got {w:?}"))?;
            let e = slice_type(e, &collection)?;
            let index: usize = index
                .trim()
                .parse()
                .with_context(|| format!("bad index {index:?}"))?;
            let set = collection
                .get(&e)
                .ok_or_else(|| anyhow!("the archive has no set of type {e}"))?;
            set.points
                .get(index)
                .cloned()
                .ok_or_else(|| anyhow!("w^{e} has {} points", set.len()))?
        }
        (None, None) => bail!("give --point or --witness"),
    };
    let mut rng = derived(common.seed, &[tags::MEMBERSHIP, 0]);
    let (verdict, traces) = membership_test(&collection, &alpha, &mut rng, &settings(common)?)?;
    let mut out = io::stdout().lock();
    let code = match &verdict {
        Membership::Member(e) => {
            writeln!(out, "member of w^{e}")?;
            0
        }
        Membership::NotMember => {
            writeln!(out, "not a member")?;
            EXIT_NO
        }
        Membership::Inconclusive => {
            writeln!(out, "inconclusive")?;
            EXIT_INCONCLUSIVE
        }
    };
    for t in &traces {
        let v = match t.verdict {
            SliceVerdict::Member => "member",
            SliceVerdict::NotMember => "not a member",
            SliceVerdict::Uncertified => "uncertified",
            SliceVerdict::Failed => "path failure",
        };
        writeln!(out, "  w^{}: {v}", t.e)?;
    }
    Ok(code)
}

fn decompose(path: &Path, output_dir: Option<&Path>, loops: usize, common: &Common) -> Result<u8> {
    let collection = load_archive(path)?;
    let options = DecomposeOptions {
        settings: settings(common)?,
        seed: common.seed,
        monodromy_loops: loops,
        ..Default::default()
    };
    let parts = decompose_all(&collection, &options)?;
    if let Some(dir) = output_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut out = io::stdout().lock();
    let mut inconclusive = false;
    for d in &parts {
        inconclusive |= d.inconclusive;
        let note = if d.inconclusive {
            " (inconclusive)"
        } else {
            ""
        };
        writeln!(
            out,
            "dimension {}: {} components{note}",
            d.dimension,
            d.components.len()
        )?;
        for (j, c) in d.components.iter().enumerate() {
            let mark = if c.certified { "" } else { " uncertified" };
            writeln!(out, "  component {j}: {}{mark}", c.collection.multidegree())?;
            if let Some(dir) = output_dir {
                let file = dir.join(format!("dim{}_component{j}.mwit", d.dimension));
                fs::write(&file, write_archive(&c.collection))
                    .with_context(|| format!("writing {}", file.display()))?;
            }
        }
    }
    Ok(if inconclusive { EXIT_INCONCLUSIVE } else { 0 })
}

fn trace(
    path: &Path,
    e0: Option<&str>,
    subset: Option<&str>,
    csv_path: Option<&Path>,
    common: &Common,
) -> Result<u8> {
    let collection = load_archive(path)?;
    let dims = collection.dimensions();
    let dim = match dims.as_slice() {
        [] => bail!("the archive is empty"),
        [d] => *d,
        _ => bail!("the archive has several dimensions {dims:?}; decompose it first"),
    };
    if dim == 0 {
        bail!("the trace test needs a positive-dimensional collection");
    }
    let (_, cuts) = trace_cuts(&collection, common.seed, &settings(common)?)?;
    let cut = match e0 {
        Some(s) => {
            let e0 = slice_type(s, &collection)?;
            cuts.iter()
                .find(|c| c.e0 == e0)
                .ok_or_else(|| anyhow!("no points over base type {e0}"))?
        }
        None => cuts.first().ok_or_else(|| anyhow!("no points to trace"))?,
    };
    let chosen = match subset {
        Some(s) => {
            let idx = parse_usizes(s)?;
            if let Some(&bad) = idx.iter().find(|&&j| j >= cut.points.len()) {
                bail!(
                    "index {bad} is out of range: {} points over w^{}",
                    cut.points.len(),
                    cut.e0
                );
            }
            idx
        }
        None => (0..cut.points.len()).collect(),
    };
    let mut out = io::stdout().lock();
    let code = match subset_trace(&cut.rows, &chosen) {
        None => {
            writeln!(out, "inconclusive: a path failed")?;
            EXIT_INCONCLUSIVE
        }
        Some(samples) => {
            let second = (samples[0].value - 2.0 * samples[1].value + samples[2].value).norm();
            let linear = is_affine_linear(&samples, TRACE_TOL);
            let word = if linear { "linear" } else { "nonlinear" };
            writeln!(
                out,
                "{word} (second difference {second:.3e}, {} of {} points over base type {})",
                chosen.len(),
                cut.points.len(),
                cut.e0
            )?;
            if let Some(p) = csv_path {
                let mut w = csv::Writer::from_path(p)
                    .with_context(|| format!("writing {}", p.display()))?;
                w.write_record(["t", "re", "im"])?;
                for s in &samples {
                    w.write_record([
                        s.t.to_string(),
                        s.value.re.to_string(),
                        s.value.im.to_string(),
                    ])?;
                }
                w.flush()?;
            }
            if linear {
                0
            } else {
                EXIT_NO
            }
        }
    };
    for (k, p) in cut.points.iter().enumerate() {
        let mark = if chosen.contains(&k) { "*" } else { " " };
        writeln!(out, "{mark} point {k}: w^{} #{}", p.e, p.index)?;
    }
    Ok(code)
}

fn sample(
    path: &Path,
    e: &str,
    count: usize,
    output: Option<&Path>,
    common: &Common,
) -> Result<u8> {
    let collection = load_archive(path)?;
    let e = slice_type(e, &collection)?;
    let mut w = collection
        .get(&e)
        .cloned()
        .ok_or_else(|| anyhow!("the archive has no set of type {e}"))?;
    let structure = collection.system.structure().clone();
    let settings = settings(common)?;
    let mut rng = derived(common.seed, &[tags::SAMPLE]);
    let sink: Box<dyn Write> = match output {
        Some(p) => {
            Box::new(fs::File::create(p).with_context(|| format!("writing {}", p.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    let mut header = vec!["sample".to_string(), "point".to_string()];
    header.extend((0..structure.total_vars()).map(|v| structure.name(v).to_string()));
    csv.write_record(&header)?;
    for k in 0..count {
        let target = random_slice(&e, &structure, &mut rng)?;
        w = move_slice(&w, &target, &settings)?;
        for (j, p) in w.points.iter().enumerate() {
            let p = collection.chart.normalize(p).unwrap_or_else(|| p.clone());
            let mut row = vec![k.to_string(), j.to_string()];
            row.extend(p.iter().map(|&z| format_complex(z)));
            csv.write_record(&row)?;
        }
    }
    csv.flush()?;
    Ok(0)
}

fn info(path: &Path) -> Result<u8> {
    let collection = load_archive(path)?;
    let s = collection.system.structure();
    let mut out = io::stdout().lock();
    writeln!(out, "multidegree: {}", collection.multidegree())?;
    let groups: Vec<String> = s.groups().iter().map(|g| g.names.join(" ")).collect();
    writeln!(out, "variables: {}", groups.join(" | "))?;
    let spaces: Vec<String> = s.dims().iter().map(|n| format!("P^{n}")).collect();
    writeln!(out, "ambient: {}", spaces.join(" x "))?;
    writeln!(out, "polynomials: {}", collection.system.len())?;
    writeln!(out, "points: {}", collection.total_points())?;
    let dims: Vec<String> = collection
        .dimensions()
        .iter()
        .map(|d| d.to_string())
        .collect();
    writeln!(
        out,
        "dimensions: {}",
        if dims.is_empty() {
            "none".to_string()
        } else {
            dims.join(" ")
        }
    )?;
    writeln!(out, "seed: {}", collection.seed)?;
    Ok(0)
}
