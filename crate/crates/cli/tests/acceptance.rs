//! Acceptance suite. Runs every criterion in order against the built
//! binary, prints one PASS/FAIL line per criterion and fails if any failed.

use std::f64::consts::PI;
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use convexity_core::crofton::FIVE_SIGMA;
use convexity_core::energy::unit_sphere_area;
use convexity_core::flow::defect_gradient;
use convexity_core::geometry::io::{polygon_to_json, read_shape};
use convexity_core::geometry::{polygon_hull, resample};
use convexity_core::{make_shape, GradientMode, Shape, ShapeKind};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::Value;

type Outcome = Result<String, String>;

struct Ctx {
    dir: tempfile::TempDir,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_convexity")
}

fn run_raw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(exe()).args(args).env_remove("CONVEXITY_THREADS").output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn run(args: &[&str]) -> Result<String, String> {
    let (code, stdout, stderr) = run_raw(args);
    if code != 0 {
        return Err(format!("`{}` exited {code}: {}", args.join(" "), stderr.trim()));
    }
    Ok(stdout)
}

fn json(args: &[&str]) -> Result<Value, String> {
    let s = run(args)?;
    serde_json::from_str(&s).map_err(|e| format!("`{}`: bad JSON: {e}", args.join(" ")))
}

fn num(v: &Value, key: &str) -> Result<f64, String> {
    v[key].as_f64().ok_or_else(|| format!("missing number {key:?} in {v}"))
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gen(ctx: &Ctx, shape: &str, resolution: usize, name: &str) -> Result<String, String> {
    let path = ctx.p(name);
    run(&["gen", "--shape", shape, "--resolution", &resolution.to_string(), "-o", &path])?;
    Ok(path)
}

fn write_polygon(ctx: &Ctx, p: &convexity_core::PolygonBoundary, name: &str) -> String {
    std::fs::write(ctx.path(name), polygon_to_json(p)).expect("write polygon");
    ctx.p(name)
}

/// Monte Carlo `½ |S^{n-1}| E|w_1|` with its standard error.
fn sphere_average(n: usize, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let v = g[0].abs() / g.iter().map(|x| x * x).sum::<f64>().sqrt();
        s += v;
        s2 += v * v;
    }
    let mean = s / samples as f64;
    let var = (s2 / samples as f64 - mean * mean) * samples as f64 / (samples - 1) as f64;
    let scale = 0.5 * unit_sphere_area(n);
    (mean * scale, (var / samples as f64).sqrt() * scale)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn constants(_: &Ctx) -> Outcome {
    let (two, t2) = timed(|| run(&["constant", "--dim", "2"]));
    let (three, t3) = timed(|| run(&["constant", "--dim", "3"]));
    let (two, three) = (two?, three?);
    let c2: f64 = two.trim().parse().map_err(|e| format!("{two:?}: {e}"))?;
    let c3: f64 = three.trim().parse().map_err(|e| format!("{three:?}: {e}"))?;
    check(c2 == 2.0, || format!("c_2 = {c2}"))?;
    check((c3 - PI).abs() < 1e-12, || format!("c_3 = {c3}"))?;
    for (n, c) in [(2, c2), (3, c3)] {
        let (mc, se) = sphere_average(n, 1_000_000, 11 + n as u64);
        check((mc - c).abs() < 3.0 * se, || format!("n={n}: Monte Carlo {mc} ± {se} vs {c}"))?;
    }
    check(t2.max(t3) < Duration::from_secs(1), || format!("runtime {:?}", t2.max(t3)))?;
    Ok(format!("c_2 = {c2}, c_3 = {c3}; Monte Carlo agrees within 3 SE"))
}

fn ball_equality(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let circle = gen(ctx, "circle", 2048, "ball_circle.json")?;
    let r = json(&["energy", "-i", &circle])?;
    let e = num(&r, "energy")?;
    let rel2 = (e - 4.0 * PI).abs() / (4.0 * PI);
    check(rel2 < 1e-3, || format!("circle E = {e}, relative error {rel2}"))?;
    let sphere = gen(ctx, "sphere", 5, "ball_sphere.obj")?;
    let r = json(&["energy", "-i", &sphere])?;
    let (e3, area) = (num(&r, "energy")?, num(&r, "boundary_measure")?);
    let rel3 = (e3 - PI * area).abs() / (PI * area);
    check(rel3 < 1e-2, || format!("sphere E = {e3} vs c_3 A = {}", PI * area))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(120), || format!("runtime {elapsed:?}"))?;
    Ok(format!("circle rel. error {rel2:.2e}, icosphere rel. error {rel3:.2e}, {elapsed:.1?}"))
}

/// Defect of a brute-force reference run, from the recorded study output.
fn recorded_defect(name: &str, n: usize) -> Result<f64, String> {
    let text = include_str!("../../core/tests/data/refinement.txt");
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        if parts.next() == Some(name) && parts.next() == Some(&format!("N={n}")) {
            let field = line.split_whitespace().find_map(|t| t.strip_prefix("defect=")).ok_or("no defect field")?;
            return field.parse().map_err(|e| format!("{field}: {e}"));
        }
    }
    Err(format!("no recorded run for {name} N={n}"))
}

fn characterization(ctx: &Ctx) -> Outcome {
    let star_hull = polygon_hull(&make_shape(&ShapeKind::STAR, 10).unwrap()).unwrap();
    let convex = [
        ("circle", gen(ctx, "circle", 1024, "c3_circle.json")?),
        ("ellipse(2,1)", gen(ctx, "ellipse", 1024, "c3_ellipse.json")?),
        ("square", gen(ctx, "square", 1024, "c3_square.json")?),
        ("hull(star)", write_polygon(ctx, &resample(&star_hull, 400).unwrap(), "c3_hull.json")),
    ];
    let mut report = vec![];
    let mut files = vec![];
    for (name, f) in &convex {
        let d = num(&json(&["energy", "-i", f])?, "defect")?;
        check(d.abs() < 5e-3, || format!("{name}: defect {d}"))?;
        report.push(format!("{name} {d:.1e}"));
        files.push(f.clone());
    }
    for (shape, name) in [("star", "star"), ("kidney", "kidney")] {
        let mut ds = vec![];
        for n in [400, 800] {
            let f = gen(ctx, shape, n, &format!("c3_{shape}_{n}.json"))?;
            let d = num(&json(&["energy", "-i", &f])?, "defect")?;
            let reference = recorded_defect(name, n)?;
            check((d - reference).abs() <= 1e-6 * reference, || format!("{name} N={n}: {d} vs recorded {reference}"))?;
            ds.push(d);
            files.push(f);
        }
        check(ds[0] > 0.05 && ds[1] > 0.05, || format!("{name}: defects {ds:?}"))?;
        let change = (ds[0] - ds[1]).abs() / ds[1];
        check(change < 0.05, || format!("{name}: defects {ds:?} change {change}"))?;
        report.push(format!("{name} {:.4} ({:.1}% change)", ds[1], 100.0 * change));
    }
    for f in &files {
        let oracle = read_shape(Path::new(f)).map_err(|e| e.to_string())?.is_convex();
        for method in [&["--method", "defect"][..], &["--method", "crofton", "--lines", "1000000"][..]] {
            let mut args = vec!["convexity", "-i", f.as_str()];
            args.extend_from_slice(method);
            let v = json(&args)?;
            let verdict = v["verdict"].as_str().unwrap_or("");
            let want = if oracle { "convex" } else { "nonconvex" };
            check(verdict == want, || format!("{f} {method:?}: verdict {verdict}, oracle convex {oracle}"))?;
        }
    }
    Ok(report.join(", ") + "; verdicts match the oracle")
}

fn boundary_identity(ctx: &Ctx) -> Outcome {
    let f = gen(ctx, "ellipse", 2048, "c4_ellipse.json")?;
    let mut worst: f64 = 0.0;
    for k in 0..32 {
        let i = (k * 2048 / 32 + k).to_string();
        let v = num(&json(&["pointwise", "-i", &f, "--boundary-index", &i])?, "value")?;
        check((v - 2.0).abs() < 2e-2, || format!("index {i}: {v}"))?;
        worst = worst.max((v - 2.0).abs());
    }
    Ok(format!("32 probes, max |value - 2| = {worst:.2e}"))
}

fn interior_identity(ctx: &Ctx) -> Outcome {
    let f = gen(ctx, "circle", 1024, "c5_circle.json")?;
    let points = ["0,0", "0.3,-0.2", "-0.5,0.4", "0.6,0.6", "0,-0.9"];
    let dirs = ["1,0", "0,1", "0.6,0.8", "-0.8,0.6"];
    let mut worst: f64 = 0.0;
    for x in points {
        for w in dirs {
            let v = num(&json(&["pointwise", "-i", &f, "--at", x, "--direction", w])?, "value")?;
            check((v - 4.0).abs() < 2e-2, || format!("x={x} w={w}: {v}"))?;
            worst = worst.max((v - 4.0).abs());
        }
    }
    let s = gen(ctx, "sphere", 4, "c5_sphere.obj")?;
    let v = num(&json(&["pointwise", "-i", &s, "--at", "0,0,0", "--direction", "0,0,1"])?, "value")?;
    let rel = (v / (2.0 * PI) - 1.0).abs();
    check(rel < 2e-2, || format!("sphere center: {v}"))?;
    Ok(format!("20 planar probes, max |value - 4| = {worst:.2e}; sphere {v:.5} (rel. {rel:.1e})"))
}

fn crofton_area(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let f = gen(ctx, "ellipse", 1024, "c6_ellipse.json")?;
    let perimeter = read_shape(Path::new(&f)).map_err(|e| e.to_string())?.measure();
    let mut est = vec![];
    for seed in ["1", "2", "3"] {
        let v = json(&["crofton", "-i", &f, "--lines", "1000000", "--seed", seed])?;
        let (a, se) = (num(&v, "area_estimate")?, num(&v, "area_std_error")?);
        check((a / perimeter - 1.0).abs() < 0.02, || format!("seed {seed}: {a} vs {perimeter}"))?;
        est.push((a, se));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (est[i], est[j]);
            let bound = 3.0 * (a.1 * a.1 + b.1 * b.1).sqrt();
            check((a.0 - b.0).abs() < bound, || format!("seeds disagree: {a:?} {b:?}"))?;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), || format!("runtime {elapsed:?}"))?;
    let worst = est.iter().map(|e| (e.0 / perimeter - 1.0).abs()).fold(0.0, f64::max);
    Ok(format!("max relative error {:.2}% over 3 seeds, {elapsed:.1?}", 100.0 * worst))
}

fn histogram(v: &Value) -> Result<Vec<f64>, String> {
    v["histogram"]
        .as_array()
        .ok_or("no histogram")?
        .iter()
        .map(|c| c.as_f64().ok_or_else(|| "bad histogram entry".to_string()))
        .collect()
}

fn zero_or_two_crossings(ctx: &Ctx) -> Outcome {
    let c = gen(ctx, "circle", 1024, "c7_circle.json")?;
    let h = histogram(&json(&["crofton", "-i", &c, "--lines", "1000000", "--seed", "4"])?)?;
    let total: f64 = h.iter().sum();
    let on = (h[0] + h.get(2).copied().unwrap_or(0.0)) / total;
    check(on >= 0.999, || format!("circle mass on {{0,2}} = {on}"))?;
    let s = gen(ctx, "star", 400, "c7_star.json")?;
    let h = histogram(&json(&["crofton", "-i", &s, "--lines", "1000000", "--seed", "4"])?)?;
    let total: f64 = h.iter().sum();
    let excess = h.iter().skip(3).sum::<f64>() / total;
    check(excess > 0.01, || format!("star mass on >= 3 = {excess}"))?;
    let sig = FIVE_SIGMA.to_string();
    let v = json(&["convexity", "-i", &s, "--method", "crofton", "--lines", "1000000", "--significance", &sig])?;
    check(v["verdict"] == "nonconvex", || format!("star verdict {}", v["verdict"]))?;
    Ok(format!("circle mass on {{0,2}} {on:.6}, star mass on >= 3 {:.2}%, star nonconvex at 5 sigma", 100.0 * excess))
}

fn cross_validation(ctx: &Ctx) -> Outcome {
    let cases = [
        ("circle", gen(ctx, "circle", 1024, "c8_circle.json")?, 0.03),
        ("star", gen(ctx, "star", 400, "c8_star.json")?, 0.05),
        ("icosphere", gen(ctx, "sphere", 3, "c8_sphere.obj")?, 0.05),
    ];
    let mut report = vec![];
    for (name, f, tol) in cases {
        let v = json(&["crossval", "-i", &f, "--lines", "1000000", "--seed", "8"])?;
        let gap = num(&v, "relative_gap")?;
        check(gap.abs() < tol, || format!("{name}: relative gap {gap}"))?;
        report.push(format!("{name} {:.2}%", 100.0 * gap.abs()));
    }
    Ok(report.join(", "))
}

fn direction_density(ctx: &Ctx) -> Outcome {
    let sq = ctx.p("c9_square.json");
    run(&["gen", "--shape", "square", "--side", "10", "--resolution", "400", "-o", &sq])?;
    let sphere = gen(ctx, "sphere", 4, "c9_sphere.obj")?;
    let mut report = vec![];
    for (name, f, element, lines, seed) in [("edge", sq, "7", "20000", "5"), ("triangle", sphere, "100", "60000", "6")] {
        let v = json(&["density", "-i", &f, "--element", element, "--lines", lines, "--seed", seed])?;
        let (hits, p, up) = (num(&v, "hits")?, num(&v, "p_value")?, num(&v, "uniform_p_value")?);
        check(hits >= 1e4, || format!("{name}: {hits} hits"))?;
        check(p > 0.01, || format!("{name}: cosine-law p = {p}"))?;
        check(up < 1e-6, || format!("{name}: uniform-law p = {up}"))?;
        report.push(format!("{name} {hits} hits p={p:.3} uniform p={up:.1e}"));
    }
    Ok(report.join(", "))
}

fn flow(ctx: &Ctx) -> Outcome {
    let star = gen(ctx, "star", 100, "c10_star.json")?;
    let out = ctx.p("c10_out.json");
    let v = json(&["flow", "-i", &star, "--lr", "1e-2", "--steps", "2000", "-o", &out])?;
    let d = num(&v, "final_defect")?;
    check(d < 1e-2, || format!("final defect {d}"))?;
    check(v["converged"] == true, || "not converged".into())?;
    let final_shape = read_shape(Path::new(&out)).map_err(|e| e.to_string())?;
    check(final_shape.is_convex(), || "final shape fails the convexity oracle".into())?;

    let p = make_shape(&ShapeKind::STAR, 50).unwrap();
    let a = defect_gradient(&p, GradientMode::Analytic, 1e-6).map_err(|e| e.to_string())?;
    let f = defect_gradient(&p, GradientMode::FiniteDifference, 1e-6).map_err(|e| e.to_string())?;
    let norm = a.iter().map(|g| g.norm_squared()).sum::<f64>().sqrt();
    let diff = a.iter().zip(&f).map(|(x, y)| (x.x() - y.x()).abs().max((x.y() - y.y()).abs())).fold(0.0, f64::max);
    check(diff < 1e-5 * norm, || format!("gradient mismatch {diff} vs norm {norm}"))?;

    let circle = gen(ctx, "circle", 64, "c10_circle.json")?;
    let fixed = ctx.p("c10_fixed.json");
    run(&["flow", "-i", &circle, "-o", &fixed])?;
    let (Shape::Polygon(before), Shape::Polygon(after)) = (
        read_shape(Path::new(&circle)).map_err(|e| e.to_string())?,
        read_shape(Path::new(&fixed)).map_err(|e| e.to_string())?,
    ) else {
        return Err("expected polygons".into());
    };
    let moved = before.vertices().iter().zip(after.vertices()).map(|(x, y)| x.distance(y)).fold(0.0, f64::max);
    check(moved <= 1e-6 * before.extent(), || format!("convex input moved by {moved}"))?;
    Ok(format!(
        "star defect {d:.1e} after {} steps, oracle convex; gradient check {:.1e}; circle moved {moved:.1e}",
        v["iterations"],
        diff / norm
    ))
}

fn determinism(ctx: &Ctx) -> Outcome {
    let circle = gen(ctx, "circle", 512, "c11_circle.json")?;
    let star = gen(ctx, "star", 60, "c11_star.json")?;
    let sphere = gen(ctx, "sphere", 2, "c11_sphere.obj")?;
    let (o1, o2) = (ctx.p("c11_a.json"), ctx.p("c11_b.json"));
    let runs: Vec<Vec<&str>> = vec![
        vec!["gen", "--shape", "kidney", "--resolution", "300", "-o", &o1],
        vec!["constant", "--dim", "3"],
        vec!["energy", "-i", &star],
        vec!["energy", "-i", &sphere],
        vec!["pointwise", "-i", &circle, "--boundary-index", "17"],
        vec!["pointwise", "-i", &circle, "--at", "0.1,0.2", "--direction", "0,1"],
        vec!["crofton", "-i", &star, "--lines", "200000", "--seed", "9"],
        vec!["crofton", "-i", &sphere, "--lines", "200000", "--seed", "9"],
        vec!["crossval", "-i", &star, "--lines", "200000", "--seed", "9"],
        vec!["convexity", "-i", &star, "--method", "defect"],
        vec!["convexity", "-i", &star, "--method", "crofton", "--lines", "100000", "--seed", "9"],
        vec!["density", "-i", &circle, "--element", "3", "--lines", "100000", "--seed", "9"],
        vec!["flow", "-i", &star, "--steps", "50", "-o", &o2],
    ];
    for args in &runs {
        let mut outputs = vec![];
        for threads in ["1", "4"] {
            let mut a = vec!["--threads", threads];
            a.extend(args.iter().copied());
            let stdout = run(&a)?;
            let files: Vec<Vec<u8>> = [&o1, &o2].iter().map(|p| std::fs::read(p).unwrap_or_default()).collect();
            outputs.push((stdout, files));
        }
        check(outputs[0] == outputs[1], || format!("`{}` differs between 1 and 4 threads", args.join(" ")))?;
    }
    Ok(format!("{} invocations byte-identical at 1 and 4 threads", runs.len()))
}

fn main() {
    let ctx = Ctx { dir: tempfile::tempdir().expect("temp dir") };
    let criteria: [(&str, fn(&Ctx) -> Outcome); 11] = [
        ("constants", constants),
        ("equality on the ball", ball_equality),
        ("inequality and characterization", characterization),
        ("boundary pointwise identity", boundary_identity),
        ("interior pointwise identity", interior_identity),
        ("Crofton area", crofton_area),
        ("zero-or-two crossings", zero_or_two_crossings),
        ("energy cross-validation", cross_validation),
        ("direction density", direction_density),
        ("flow", flow),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| f(&ctx))).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        let line = match result {
            Ok(detail) => format!("PASS {:>2} {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                format!("FAIL {:>2} {name} ({secs:.1}s): {detail}", k + 1)
            }
        };
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
