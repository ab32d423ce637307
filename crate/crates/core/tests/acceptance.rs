//! End-to-end acceptance criteria, one test per criterion.
//!
//! Run with `cargo test --release -p multiwit --test acceptance -- --nocapture`
//! to see the verdict lines.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use multiwit::catalog::{self, random_hypersurface, SixRGrouping};
use multiwit::decompose::{
    build_trace_homotopy, decompose, decompose_all, is_affine_linear, link_to_point,
    membership_test, point_traces, subset_trace, test_slice_type, DecomposeOptions,
    GeneralCoordinate, Membership, SliceVerdict, TraceSample, TRACE_TOL,
};
use multiwit::poly::Equation;
use multiwit::regeneration::{
    multiregenerate, perturbed_solve, CarryMode, RegenOptions, RegenResult, StageReport,
};
use multiwit::rng::{random_vector, seeded};
use multiwit::sysio::write_archive;
use multiwit::witness::{compile, move_slice, point_equal, random_slice, SegreSlice};
use multiwit::{
    Chart, Complex64, LinearForm, LinearSlice, PolynomialSystem, SliceType, TrackerSettings,
    VariableStructure, WitnessCollection, WitnessSet,
};
use rand::Rng;

type Check = Result<String, String>;

fn run(n: usize, title: &str, f: impl FnOnce() -> Check) {
    let start = Instant::now();
    let outcome = f();
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => println!("criterion {n:>2} PASS ({secs:.1} s) {title}: {detail}"),
        Err(detail) => {
            println!("criterion {n:>2} FAIL ({secs:.1} s) {title}: {detail}");
            panic!("criterion {n} failed: {detail}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn form(s: &VariableStructure, g: usize, c: &[Complex64]) -> LinearForm {
    LinearForm::new(s, g, c.to_vec()).unwrap()
}

fn slice(s: &VariableStructure, groups: &[&[&[Complex64]]]) -> LinearSlice {
    LinearSlice::new(
        s,
        groups
            .iter()
            .enumerate()
            .map(|(g, fs)| fs.iter().map(|c| form(s, g, c)).collect())
            .collect(),
    )
    .unwrap()
}

fn solve(sys: &PolynomialSystem, opts: RegenOptions) -> Result<RegenResult, String> {
    multiregenerate(sys, &opts).map_err(|e| e.to_string())
}

fn counts_by_type(r: &StageReport) -> BTreeMap<SliceType, usize> {
    let mut m = r.isolated.clone();
    for (e, n) in &r.nonsolutions {
        *m.entry(e.clone()).or_default() += n;
    }
    m
}

fn types(v: &[(&[usize], usize)]) -> BTreeMap<SliceType, usize> {
    v.iter().map(|(e, n)| (SliceType(e.to_vec()), *n)).collect()
}

#[test]
fn criterion_01_parabola_multidegree() {
    run(1, "parabola multidegree", || {
        let res = solve(&catalog::parabola(), RegenOptions::default())?;
        let md = res.collection.multidegree().to_string();
        ensure(md == "1 w^(1,0) + 2 w^(0,1)", || format!("got {md}"))?;
        Ok(md)
    });
}

#[test]
fn criterion_02_move_slice_endpoints() {
    run(2, "slice motion on the parabola", || {
        let sys = Arc::new(catalog::parabola());
        let s = sys.structure().clone();
        let chart = Chart::new(
            &s,
            vec![
                form(&s, 0, &[r(1.0), r(0.0)]),
                form(&s, 1, &[r(1.0), r(0.0)]),
            ],
        )
        .unwrap();
        let from = slice(&s, &[&[], &[&[r(1.0), r(-5.0)]]]);
        let r5 = 5f64.sqrt();
        let pts = vec![
            vec![r(r5), r(1.0), r(5.0), r(1.0)],
            vec![r(-r5), r(1.0), r(5.0), r(1.0)],
        ];
        let w = WitnessSet::new(sys.clone(), sys, chart.clone(), from, pts);
        let to = slice(&s, &[&[], &[&[r(2.0), r(-1.0)]]]);
        let moved = move_slice(&w, &to, &TrackerSettings::default()).map_err(|e| e.to_string())?;
        let r2 = 2f64.sqrt();
        let mut worst = 0f64;
        for sign in [1.0, -1.0] {
            let want = [r(1.0), r(sign * r2), r(1.0), r(2.0)];
            let best = moved
                .points
                .iter()
                .map(|p| {
                    chart
                        .normalize(p)
                        .unwrap()
                        .iter()
                        .zip(&want)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
        ensure(worst < 1e-8, || format!("endpoint error {worst:e}"))?;
        Ok(format!("max endpoint error {worst:.1e}"))
    });
}

fn surface() -> Result<WitnessCollection, String> {
    Ok(solve(
        &catalog::surface(),
        RegenOptions {
            seed: 5,
            ..Default::default()
        },
    )?
    .collection)
}

#[test]
fn criterion_03_membership() {
    run(3, "membership on the surface", || {
        let collection = surface()?;
        let s = collection.system.structure().clone();
        let settings = TrackerSettings::default();
        let alpha = [r(1.0), r(0.0), r(0.0), r(1.0), r(0.0), r(3.0)];
        let err = |e: multiwit::Error| e.to_string();

        // (2,0): both paths meet at a point of a positive-dimensional fibre
        let w20 = collection
            .get(&SliceType(vec![2, 0]))
            .ok_or("no (2,0) set")?;
        let l20 = slice(
            &s,
            &[
                &[&[r(-1.0), r(3.0), r(-2.0)], &[r(1.0), r(1.0), r(3.0)]],
                &[],
            ],
        );
        let w20 = move_slice(w20, &l20, &settings).map_err(err)?;
        let through = slice(
            &s,
            &[&[&[r(0.0), r(1.0), r(0.0)], &[r(0.0), r(0.0), r(1.0)]], &[]],
        );
        let corner = [r(1.0), r(0.0), r(0.0), r(1.0), r(0.0), r(0.0)];
        let ends = w20.track_to(&through, &settings).map_err(err)?;
        ensure(
            ends.len() == 2
                && ends
                    .iter()
                    .all(|o| point_equal(&o.endpoint, &corner, &w20.chart, 1e-6)),
            || "(2,0) endpoints are not the double point ([1:0:0],[1:0:0])".into(),
        )?;
        let (verdict, traces) =
            membership_test(&collection, &alpha, &mut seeded(1), &settings).map_err(err)?;
        ensure(
            traces.first().map(|t| &t.verdict) == Some(&SliceVerdict::Uncertified),
            || {
                format!(
                    "(2,0) was not skipped: {:?}",
                    traces.first().map(|t| &t.verdict)
                )
            },
        )?;
        ensure(verdict == Membership::Member(SliceType(vec![1, 1])), || {
            format!("verdict {verdict:?}")
        })?;

        // (1,1) with the fixed slices and the second endpoint
        let i2 = Complex64::new(0.0, -2.0);
        let w11 = collection
            .get(&SliceType(vec![1, 1]))
            .ok_or("no (1,1) set")?;
        let l11 = slice(
            &s,
            &[&[&[r(1.0), r(1.0), r(3.0)]], &[&[r(1.0), i2, r(-1.0)]]],
        );
        let w11 = move_slice(w11, &l11, &settings).map_err(err)?;
        let m11 = slice(
            &s,
            &[
                &[&[r(0.0), r(1.0), r(3.0)]],
                &[&[r(1.0), i2, r(-1.0 / 3.0)]],
            ],
        );
        let ends = w11.track_to(&m11, &settings).map_err(err)?;
        let other = [
            Complex64::new(3.0, 4.0),
            r(3.0),
            r(-1.0),
            Complex64::new(1.0, -2.0),
            r(-1.0),
            r(3.0),
        ];
        ensure(
            ends.iter()
                .any(|o| point_equal(&o.endpoint, &alpha, &w11.chart, 1e-8)),
            || "alpha not reached on (1,1)".into(),
        )?;
        ensure(
            ends.iter()
                .any(|o| point_equal(&o.endpoint, &other, &w11.chart, 1e-8)),
            || "second (1,1) endpoint not ([3+4i:3:-1],[1-2i:-1:3])".into(),
        )?;

        // (0,2) on its own
        let w02 = collection
            .get(&SliceType(vec![0, 2]))
            .ok_or("no (0,2) set")?;
        let tr = test_slice_type(w02, &alpha, &mut seeded(2), &settings, 1e-6).map_err(err)?;
        ensure(tr.verdict == SliceVerdict::Member, || {
            format!("(0,2) verdict {:?}", tr.verdict)
        })?;
        Ok("(2,0) skipped, (1,1) and (0,2) certify Member".into())
    });
}

#[test]
fn criterion_04_stage_charts() {
    run(
        4,
        "multiregeneration charts for two surfaces and two curves",
        || {
            let res = solve(
                &catalog::two_surfaces_two_curves(),
                RegenOptions {
                    seed: 1,
                    ..Default::default()
                },
            )?;
            let want = [
                types(&[(&[2, 1], 1), (&[1, 2], 1)]),
                types(&[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]),
            ];
            for (k, w) in want.iter().enumerate() {
                let got = counts_by_type(&res.reports[k]);
                ensure(&got == w, || format!("stage {k}: {got:?}"))?;
            }
            let md = res.collection.multidegree().to_string();
            ensure(
                md == "1 w^(2,0) + 1 w^(1,1) + 1 w^(1,0) + 2 w^(0,1)",
                || format!("final {md}"),
            )?;
            Ok(md)
        },
    );
}

#[test]
fn criterion_05_six_r() {
    run(5, "6R inverse kinematics", || {
        let res = solve(
            &catalog::six_r(1, SixRGrouping::Two),
            RegenOptions {
                seed: 1,
                ..Default::default()
            },
        )?;
        let witness: Vec<usize> = res.reports.iter().map(|r| r.witness_points()).collect();
        let starts: usize = res.reports.iter().map(|r| r.deformation_paths()).sum();
        ensure(
            witness == [1, 1, 2, 4, 8, 14, 20, 20, 34, 28, 40, 16],
            || format!("2-hom witness counts {witness:?}"),
        )?;
        ensure(starts == 314, || format!("2-hom start total {starts}"))?;
        let res4 = solve(
            &catalog::six_r(1, SixRGrouping::Four),
            RegenOptions {
                seed: 1,
                ..Default::default()
            },
        )?;
        let starts4: usize = res4.reports.iter().map(|r| r.deformation_paths()).sum();
        let roots = res4.collection.of_dimension(0).total_points();
        ensure(starts4 == 264 && roots == 16, || {
            format!("4-hom start total {starts4}, roots {roots}")
        })?;
        Ok(format!(
            "2-hom starts {starts}, 4-hom starts {starts4}, {roots} roots"
        ))
    });
}

#[test]
fn criterion_06_lagrange() {
    run(6, "Lagrange points under perturbation", || {
        let sys = catalog::lagrange(0.0123);
        let out = perturbed_solve(
            &sys,
            &RegenOptions {
                seed: 1,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let starts: usize = out
            .perturbed
            .reports
            .iter()
            .map(|r| r.deformation_paths())
            .sum();
        ensure(starts == 160, || format!("start total {starts}"))?;
        let mut profile: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, w) in out.collection.sets() {
            for &m in &w.multiplicities {
                *profile.entry(m).or_default() += 1;
            }
        }
        let total: usize = profile.iter().map(|(m, n)| m * n).sum();
        let want: BTreeMap<usize, usize> = [(1, 32), (2, 4), (3, 2), (9, 2)].into_iter().collect();
        ensure(total == 64 && profile == want, || {
            format!("profile {profile:?}, total {total}")
        })?;
        Ok(format!(
            "160 starts, 64 = 32x1 + 4x2 + 2x3 + 2x9, {} failures",
            out.failures
        ))
    });
}

#[test]
fn criterion_07_rank_deficiency() {
    run(7, "rank-deficient skew matrices", || {
        let opts = RegenOptions {
            seed: 1,
            randomize: true,
            ..Default::default()
        };
        let res = solve(&catalog::rank_deficiency(1, true), opts)?;
        let iso: usize = res.reports[8].isolated.values().sum();
        ensure(iso == 45, || format!("codim 9 isolated {iso}"))?;
        let md = res.collection.multidegree().to_string();
        ensure(
            md == "3 w^(3,0) + 6 w^(2,1) + 12 w^(1,2) + 24 w^(0,3)",
            || format!("multidegree {md}"),
        )?;
        let noniso: Vec<usize> = res.reports[9..12].iter().map(|r| r.nonisolated).collect();
        ensure(noniso == [84, 66, 20], || format!("nonisolated {noniso:?}"))?;
        Ok(format!("45 isolated ({md}), nonisolated {noniso:?}"))
    });
}

fn second_difference(t: &[TraceSample]) -> f64 {
    (t[0].value - 2.0 * t[1].value + t[2].value).norm()
}

#[test]
fn criterion_08_trace_lines_and_curve() {
    run(8, "trace on two lines and a curve", || {
        let fx = catalog::lines_and_curve_fixture();
        let s = fx.system.structure().clone();
        let chart = Chart::new(&s, fx.chart.clone()).unwrap();
        let segre = SegreSlice::new(&s, fx.segre.clone()).unwrap();
        let rho = GeneralCoordinate::new(&s, fx.rho.clone()).unwrap();
        let h = build_trace_homotopy(
            &s,
            &compile(&fx.system),
            &LinearSlice::empty(2),
            &[segre],
            &chart,
        )
        .unwrap();
        let q = (61.0f64 / 30.0).sqrt();
        // m1, m2 on the lines; m3, m4, m5 on the curve
        let pts = vec![
            vec![r(0.0), r(-10.0 / 21.0), r(1.0), r(1.0), r(1.0)],
            vec![r(0.0), r(-10.0 / 21.0), r(1.0), r(-1.0), r(1.0)],
            vec![r(0.75), r(1.0), r(1.0), r(0.5), r(1.0)],
            vec![r(-31.0 / 30.0), r(1.0), r(1.0), r(q), r(1.0)],
            vec![r(-31.0 / 30.0), r(1.0), r(1.0), r(-q), r(1.0)],
        ];
        let rows = point_traces(&h, &pts, &rho, &chart, &TrackerSettings::default());
        let all = subset_trace(&rows, &[0, 1, 2, 3, 4]).ok_or("a trace path failed")?;
        ensure(is_affine_linear(&all, TRACE_TOL), || {
            format!("five-point trace not linear: {:e}", second_difference(&all))
        })?;
        let mut diffs = Vec::new();
        for drop in 2..5 {
            let subset: Vec<usize> = (0..5).filter(|&j| j != drop).collect();
            let t = subset_trace(&rows, &subset).ok_or("a trace path failed")?;
            ensure(!is_affine_linear(&t, TRACE_TOL), || {
                format!("subset without m{} tests linear", drop + 1)
            })?;
            diffs.push(second_difference(&t));
        }
        let shown: Vec<String> = diffs.iter().map(|d| format!("{d:.3e}")).collect();
        ensure(diffs.iter().all(|&d| d > 1e-3), || {
            format!("four-point second differences {shown:?}, not all above 1e-3")
        })?;
        Ok(format!(
            "five-point second difference {:.1e}; four-point {shown:?}",
            second_difference(&all)
        ))
    });
}

#[test]
fn criterion_09_two_surfaces_two_curves() {
    run(9, "decomposition of two surfaces and two curves", || {
        let opts = RegenOptions {
            seed: 3,
            carry: CarryMode::All,
            ..Default::default()
        };
        let collection = solve(&catalog::two_surfaces_two_curves(), opts)?.collection;
        let parts = decompose_all(
            &collection,
            &DecomposeOptions {
                seed: 3,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let degrees = |k: usize| {
            let mut v: Vec<String> = parts[k]
                .components
                .iter()
                .map(|c| c.collection.multidegree().to_string())
                .collect();
            v.sort();
            v
        };
        ensure(
            parts.len() == 2 && parts.iter().all(|d| !d.inconclusive),
            || "missing or inconclusive dimension".into(),
        )?;
        ensure(degrees(0) == ["1 w^(1,1)", "1 w^(2,0)"], || {
            format!("dim 2: {:?}", degrees(0))
        })?;
        ensure(degrees(1) == ["1 w^(0,1)", "1 w^(1,0) + 1 w^(0,1)"], || {
            format!("dim 1: {:?}", degrees(1))
        })?;

        let system = collection.system.clone();
        let s = system.structure().clone();
        let chart = Chart::new(
            &s,
            vec![
                form(&s, 0, &[r(0.0), r(0.0), r(1.0)]),
                form(&s, 1, &[r(0.0), r(0.0), r(1.0)]),
            ],
        )
        .unwrap();
        let from = slice(&s, &[&[], &[&[r(1.0), r(-2.0), r(-1.0)]]]);
        let i = Complex64::new(1.0, 1.0);
        let to = slice(&s, &[&[], &[&[i, -2.0 * i, i]]]);
        let m1 = vec![r(1.0); 6];
        let m2 = vec![r(-1.0), r(-1.0), r(1.0), r(-1.0), r(-1.0), r(1.0)];
        let m3 = vec![r(0.0), r(0.0), r(1.0), r(1.0), r(0.0), r(1.0)];
        let w = WitnessSet::new(system.clone(), system, chart.clone(), from, vec![m2, m3]);
        let (hits, out) =
            link_to_point(&w, &m1, &to, &TrackerSettings::default()).map_err(|e| e.to_string())?;
        ensure(hits == [0], || format!("paths reaching m1: {hits:?}"))?;
        let far = chart
            .normalize(&out[1].endpoint)
            .ok_or("endpoint at infinity")?;
        let want = [r(0.0), r(0.0), r(1.0), r(-1.0), r(0.0), r(1.0)];
        let err = far
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        ensure(err < 1e-8, || format!("m3 ends at {far:?}"))?;
        Ok(format!(
            "dim 2 {:?}, dim 1 {:?}; m2 -> m1, m3 -> ([0,0,1],[-1,0,1]) within {err:.1e}",
            degrees(0),
            degrees(1)
        ))
    });
}

/// Degrees of the two factors of each constructed curve on `P^1 x P^1`.
const CURVE_FACTORS: [([u32; 2], [u32; 2]); 7] = [
    ([1, 1], [1, 0]),
    ([1, 1], [0, 1]),
    ([2, 1], [1, 1]),
    ([1, 2], [1, 0]),
    ([1, 0], [0, 1]),
    ([2, 2], [2, 1]),
    ([3, 2], [1, 3]),
];

fn hypersurface_law() -> Result<String, String> {
    let mut rng = seeded(1001);
    for case in 0..20 {
        let k = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(2..=3)).collect();
        let s = Arc::new(VariableStructure::from_sizes(&sizes).unwrap());
        let mut d: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=3)).collect();
        if d.iter().all(|&x| x == 0) {
            d[0] = 1;
        }
        let p = random_hypersurface(&s, &d, &mut rng);
        let sys = PolynomialSystem::new(s.clone(), vec![p]).unwrap();
        let res = solve(
            &sys,
            RegenOptions {
                seed: case,
                ..Default::default()
            },
        )?;
        let dims = s.dims();
        for i in 0..k {
            let mut e = dims.clone();
            e[i] -= 1;
            let got = res
                .collection
                .get(&SliceType(e.clone()))
                .map_or(0, |w| w.len());
            ensure(got == d[i] as usize, || {
                format!("case {case}: sizes {sizes:?} degree {d:?}: |w^{e:?}| = {got}")
            })?;
        }
        ensure(
            res.collection.total_points() == d.iter().sum::<u32>() as usize,
            || format!("case {case}: extra points"),
        )?;
    }
    Ok("20 hypersurfaces".into())
}

fn reversibility() -> Result<String, String> {
    let mut worst = 0f64;
    for seed in 0..5u64 {
        let mut rng = seeded(2000 + seed);
        let s = Arc::new(VariableStructure::from_sizes(&[3, 2]).unwrap());
        let p = random_hypersurface(&s, &[2, 2], &mut rng);
        let q = random_hypersurface(&s, &[1, 1], &mut rng);
        let sys = PolynomialSystem::new(s.clone(), vec![p, q]).unwrap();
        let res = solve(
            &sys,
            RegenOptions {
                seed,
                ..Default::default()
            },
        )?;
        for (e, w) in res.collection.sets() {
            let target = random_slice(e, &s, &mut rng).unwrap();
            let settings = TrackerSettings::default();
            let there = move_slice(w, &target, &settings).map_err(|e| e.to_string())?;
            let back = move_slice(&there, &w.slice, &settings).map_err(|e| e.to_string())?;
            for (a, b) in w.points.iter().zip(&back.points) {
                let (a, b) = (w.chart.normalize(a).unwrap(), w.chart.normalize(b).unwrap());
                worst = worst.max(
                    a.iter()
                        .zip(&b)
                        .map(|(x, y)| (x - y).norm())
                        .fold(0.0, f64::max),
                );
            }
        }
    }
    ensure(worst < 1e-8, || format!("round trip error {worst:e}"))?;
    Ok(format!("max round trip error {worst:.1e}"))
}

fn jacobians() -> Result<String, String> {
    let mut rng = seeded(3000);
    let s = Arc::new(VariableStructure::from_sizes(&[3, 2, 2]).unwrap());
    let mut worst = 0f64;
    for _ in 0..20 {
        let d: Vec<u32> = (0..3).map(|_| rng.gen_range(0..=3)).collect();
        let polys = (0..3)
            .map(|_| random_hypersurface(&s, &d, &mut rng))
            .collect();
        let sys = PolynomialSystem::new(s.clone(), polys).unwrap();
        let x = random_vector(&mut rng, s.total_vars());
        let jac = sys.jacobian(&x).unwrap();
        let h = 1e-6;
        for v in 0..s.total_vars() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[v] += h;
            xm[v] -= h;
            let (fp, fm) = (sys.evaluate(&xp).unwrap(), sys.evaluate(&xm).unwrap());
            for j in 0..3 {
                let fd = (fp[j] - fm[j]) / (2.0 * h);
                worst = worst.max((fd - jac[(j, v)]).norm() / jac[(j, v)].norm().max(1.0));
            }
        }
    }
    ensure(worst < 1e-5, || format!("relative difference {worst:e}"))?;
    Ok(format!("max relative difference {worst:.1e}"))
}

fn trace_biconditional() -> Result<String, String> {
    let mut subsets_checked = 0;
    for (case, (df, dg)) in CURVE_FACTORS.iter().enumerate() {
        let mut rng = seeded(4000 + case as u64);
        let s = Arc::new(VariableStructure::from_sizes(&[2, 2]).unwrap());
        let f = random_hypersurface(&s, df, &mut rng);
        let g = random_hypersurface(&s, dg, &mut rng);
        let sys = PolynomialSystem::new(s.clone(), vec![f.mul(&g)]).unwrap();
        let collection = solve(
            &sys,
            RegenOptions {
                seed: case as u64,
                ..Default::default()
            },
        )?
        .collection;

        // oracle: which factor vanishes at each witness point
        let mut pts = Vec::new();
        let mut on_f = Vec::new();
        let mut factors = Vec::new();
        for e in [SliceType(vec![1, 0]), SliceType(vec![0, 1])] {
            let w = collection
                .get(&e)
                .ok_or_else(|| format!("case {case}: no {e} set"))?;
            let i = if e.0[0] == 1 { 0 } else { 1 };
            factors.push((i, w.slice.forms[i][0].clone()));
            for p in &w.points {
                let (fv, gv) = (
                    f.eval(p).norm() / f.term_scale(p),
                    g.eval(p).norm() / g.term_scale(p),
                );
                ensure(fv.min(gv) < 1e-8 && fv.max(gv) > 1e-4, || {
                    format!("case {case}: ambiguous point")
                })?;
                on_f.push(fv < gv);
                pts.push(p.clone());
            }
        }
        ensure(pts.len() <= 10, || {
            format!("case {case}: {} points", pts.len())
        })?;
        factors.sort_by_key(|(i, _)| *i);
        let segre = SegreSlice::new(&s, factors.into_iter().map(|(_, l)| l).collect()).unwrap();
        let rho = GeneralCoordinate::random(&s, &mut rng);
        let tracking: Vec<Equation> = compile(&sys);
        let h = build_trace_homotopy(
            &s,
            &tracking,
            &LinearSlice::empty(2),
            &[segre],
            &collection.chart,
        )
        .unwrap();
        let rows = point_traces(
            &h,
            &pts,
            &rho,
            &collection.chart,
            &TrackerSettings::default(),
        );
        let n = pts.len();
        for mask in 1u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            let samples = subset_trace(&rows, &subset)
                .ok_or_else(|| format!("case {case}: trace path failed"))?;
            let has = |flag: bool| subset.iter().any(|&j| on_f[j] == flag);
            let full = |flag: bool| {
                (0..n)
                    .filter(|&j| on_f[j] == flag)
                    .all(|j| subset.contains(&j))
            };
            let union = (!has(true) || full(true)) && (!has(false) || full(false));
            ensure(is_affine_linear(&samples, TRACE_TOL) == union, || {
                format!(
                    "case {case}: subset {subset:?} linear = {}, union = {union}",
                    !union
                )
            })?;
            subsets_checked += 1;
        }
        let d = decompose(
            &collection.of_dimension(1),
            &DecomposeOptions {
                seed: case as u64,
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        let mut got: Vec<String> = d
            .components
            .iter()
            .map(|c| c.collection.multidegree().to_string())
            .collect();
        got.sort();
        ensure(d.components.len() == 2 && !d.inconclusive, || {
            format!("case {case}: decomposition {got:?}")
        })?;
    }
    Ok(format!(
        "{} curves, {subsets_checked} subsets",
        CURVE_FACTORS.len()
    ))
}

fn determinism() -> Result<String, String> {
    let sys = catalog::two_surfaces_two_curves();
    let once = write_archive(
        &solve(
            &sys,
            RegenOptions {
                seed: 9,
                ..Default::default()
            },
        )?
        .collection,
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let twice = pool.install(|| {
        solve(
            &sys,
            RegenOptions {
                seed: 9,
                ..Default::default()
            },
        )
    })?;
    let twice = write_archive(&twice.collection);
    ensure(once == twice, || "archives differ".into())?;
    Ok(format!(
        "{} identical bytes across thread counts",
        once.len()
    ))
}

#[test]
fn criterion_10_property_suites() {
    run(10, "property suites", || {
        let mut lines = Vec::new();
        for (name, f) in [
            ("hypersurface law", hypersurface_law as fn() -> Check),
            ("reversibility", reversibility),
            ("jacobian", jacobians),
            ("trace biconditional", trace_biconditional),
            ("determinism", determinism),
        ] {
            lines.push(format!(
                "{name}: {}",
                f().map_err(|e| format!("{name}: {e}"))?
            ));
        }
        Ok(lines.join("; "))
    });
}
