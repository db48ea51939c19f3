//! `convexity`: command-line front end.
//!
//! Numeric results go to stdout as JSON, a one-line summary to stderr.
//! Exit status is 0 on success, 2 for invalid input or arguments and 3 when
//! a numerical procedure fails; failures print `error: <kind>: <detail>`.

mod svg;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use convexity_core::crofton::{DEFAULT_SIGNIFICANCE, MIN_CONVEXITY_SAMPLES};
use convexity_core::energy::polygon::exact_defect;
use convexity_core::energy::report_from_rows;
use convexity_core::geometry::io::{read_shape, shape_to_string};
use convexity_core::geometry::shapes::MAX_SPHERE_SUBDIVISIONS;
use convexity_core::{
    c_constant, convexify, convexity_test, cross_validate_energy, direction_density_test, estimate, make_shape,
    make_sphere_mesh, pointwise_boundary, pointwise_boundary_all, pointwise_interior, Error, FlowParams,
    GradientMode, LineSampler, Result, Shape, ShapeKind, Vector,
};

const THREADS_ENV: &str = "CONVEXITY_THREADS";

#[derive(Parser, Debug)]
#[command(name = "convexity", version, about = "Boundary interaction energy and convexity")]
struct Cli {
    /// Worker threads (default: CONVEXITY_THREADS, else all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a shape and write it (polygon JSON or OBJ mesh).
    Gen(GenArgs),
    /// Print the constant c_n.
    Constant {
        #[arg(long)]
        dim: usize,
    },
    /// Interaction energy and convexity defect by centroid quadrature.
    Energy {
        #[command(flatten)]
        input: Input,
        /// Split every edge (or triangle) this many times before evaluating.
        #[arg(long)]
        refine: Option<usize>,
        /// Write the polygon colored by the pointwise boundary integral.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Pointwise integral at a boundary element or an interior point.
    Pointwise(PointwiseArgs),
    /// Crofton estimate of the boundary measure and crossing-count moments.
    Crofton {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lines: LineArgs,
    },
    /// Compare the quadrature energy with its line-sampling estimate.
    Crossval {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lines: LineArgs,
    },
    /// Decide convexity from the defect or from crossing counts.
    Convexity(ConvexityArgs),
    /// Chi-square test of the incidence angles of lines hitting one element.
    Density {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        element: usize,
        #[command(flatten)]
        lines: LineArgs,
    },
    /// Descend the defect of a polygon toward a convex one.
    Flow(FlowArgs),
}

#[derive(Args, Debug)]
struct Input {
    /// Polygon JSON or OBJ mesh.
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(Args, Debug)]
struct LineArgs {
    #[arg(long, default_value_t = 1_000_000)]
    lines: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radius of the sampling ball (default: 1.1 times the circumradius about the vertex centroid).
    #[arg(long)]
    radius: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ShapeName {
    Circle,
    Ellipse,
    Star,
    Kidney,
    Square,
    Sphere,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    shape: ShapeName,
    /// Vertex count; icosphere subdivisions for `sphere`.
    #[arg(long)]
    resolution: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    outer: f64,
    #[arg(long, default_value_t = 0.4)]
    inner: f64,
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 0.9)]
    dimple: f64,
    #[arg(long, default_value_t = 1.0)]
    side: f64,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointwiseArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, conflicts_with_all = ["at", "direction"], required_unless_present = "at")]
    boundary_index: Option<usize>,
    /// Interior point `x,y[,z]`.
    #[arg(long, value_parser = parse_vector, requires = "direction", allow_hyphen_values = true)]
    at: Option<Vector>,
    /// Unit direction `dx,dy[,dz]`.
    #[arg(long, value_parser = parse_vector, requires = "at", allow_hyphen_values = true)]
    direction: Option<Vector>,
    /// Write the polygon colored by the pointwise boundary integral.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Defect,
    Crofton,
}

#[derive(Args, Debug)]
struct ConvexityArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, default_value_t = 1_000_000)]
    lines: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SIGNIFICANCE)]
    significance: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Gradient {
    Analytic,
    FiniteDifference,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[command(flatten)]
    input: Input,
    /// Maximum number of descent steps.
    #[arg(long, default_value_t = FlowParams::default().max_iterations)]
    steps: usize,
    /// Step size.
    #[arg(long, default_value_t = FlowParams::default().step_size)]
    lr: f64,
    #[arg(long, value_enum, default_value_t = Gradient::Analytic)]
    gradient: Gradient,
    #[arg(long, default_value_t = FlowParams::default().fd_epsilon)]
    fd_epsilon: f64,
    #[arg(long, default_value_t = FlowParams::default().stop_defect)]
    stop_defect: f64,
    #[arg(long)]
    no_redistribution: bool,
    /// Final polygon.
    #[arg(short, long)]
    output: PathBuf,
    /// CSV trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_vector(s: &str) -> std::result::Result<Vector, String> {
    let c: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match c.as_slice() {
        [x, y] => Ok(Vector::new2(*x, *y)),
        [x, y, z] => Ok(Vector::new3(*x, *y, *z)),
        _ => Err(format!("expected 2 or 3 comma-separated numbers, got {}", c.len())),
    }
}

/// Output files are staged in their target directory and renamed into
/// place only after every computation has succeeded.
struct Outputs(Vec<(PathBuf, Vec<u8>)>);

impl Outputs {
    fn new() -> Self {
        Outputs(Vec::new())
    }

    fn add(&mut self, path: &Path, bytes: impl Into<Vec<u8>>) {
        self.0.push((path.to_path_buf(), bytes.into()));
    }

    fn commit(self) -> Result<()> {
        for (path, bytes) in self.0 {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
            tmp.write_all(&bytes).map_err(io)?;
            tmp.persist(&path).map_err(|e| io(e.error))?;
        }
        Ok(())
    }
}

struct Done {
    stdout: Value,
    summary: String,
    outputs: Outputs,
}

impl Done {
    fn new(stdout: Value, summary: String) -> Self {
        Done { stdout, summary, outputs: Outputs::new() }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn load(input: &Input) -> Result<Shape> {
    read_shape(&input.input)
}

fn sampler(shape: &Shape, radius: Option<f64>, seed: u64) -> Result<LineSampler> {
    match radius {
        Some(r) => LineSampler::with_radius(shape, r, seed),
        None => LineSampler::enclosing(shape, seed),
    }
}

fn polygon_values_svg(shape: &Shape, rows: &[f64], path: &Option<PathBuf>, out: &mut Outputs) -> Result<()> {
    if let Some(p) = path {
        out.add(p, svg::render_shape(shape, Some(rows))?);
    }
    Ok(())
}

fn gen(a: &GenArgs) -> Result<Done> {
    let shape: Shape = match a.shape {
        ShapeName::Sphere => {
            if a.resolution > MAX_SPHERE_SUBDIVISIONS {
                return Err(Error::BadParams(format!(
                    "sphere subdivisions {} > {MAX_SPHERE_SUBDIVISIONS}",
                    a.resolution
                )));
            }
            make_sphere_mesh(a.resolution)?.into()
        }
        name => {
            let kind = match name {
                ShapeName::Circle => ShapeKind::Circle { radius: a.radius },
                ShapeName::Ellipse => ShapeKind::Ellipse { a: a.a, b: a.b },
                ShapeName::Star => ShapeKind::Star { outer: a.outer, inner: a.inner, points: a.points },
                ShapeName::Kidney => ShapeKind::Kidney { dimple: a.dimple },
                ShapeName::Square => ShapeKind::Square { side: a.side },
                ShapeName::Sphere => unreachable!(),
            };
            make_shape(&kind, a.resolution)?.into()
        }
    };
    let mut done = Done::new(
        json!({
            "shape": format!("{:?}", a.shape).to_lowercase(),
            "dimension": shape.dim().get(),
            "vertex_count": shape.vertices().len(),
            "element_count": shape.element_count(),
            "boundary_measure": shape.measure(),
            "convex": shape.is_convex(),
        }),
        format!("{} elements written to {}", shape.element_count(), a.output.display()),
    );
    if let Some(p) = &a.svg {
        done.outputs.add(p, svg::render_shape(&shape, None)?);
    }
    done.outputs.add(&a.output, shape_to_string(&shape));
    Ok(done)
}

fn constant(dim: usize) -> Result<Done> {
    let c = c_constant(dim)?;
    // integral values print without a fractional part
    let v = if c.fract() == 0.0 && c.abs() < 1e15 { json!(c as i64) } else { json!(c) };
    Ok(Done::new(v, format!("c_{dim} = {c}")))
}

fn energy(input: &Input, refine: Option<usize>, svg_path: &Option<PathBuf>) -> Result<Done> {
    let mut shape = load(input)?;
    if let Some(k) = refine {
        shape = shape.refine(k)?;
    }
    let b = shape.discretize();
    let rows = pointwise_boundary_all(&b)?;
    let r = report_from_rows(&b, &rows);
    let mut v = to_value(&r);
    if let Shape::Polygon(p) = &shape {
        v["exact_defect"] = json!(exact_defect(p)?);
    }
    let mut done = Done::new(v, format!("energy {} defect {:e} (tolerance {:e})", r.energy, r.defect, r.tolerance));
    polygon_values_svg(&shape, &rows, svg_path, &mut done.outputs)?;
    Ok(done)
}

fn pointwise(a: &PointwiseArgs) -> Result<Done> {
    let shape = load(&a.input)?;
    let b = shape.discretize();
    let c = c_constant(shape.dim().get())?;
    let (value, expected, at) = match (a.boundary_index, a.at, a.direction) {
        (Some(i), _, _) => (pointwise_boundary(&b, i)?, c, json!({ "boundary_index": i })),
        (None, Some(x), Some(w)) => (
            pointwise_interior(&b, &x, &w)?,
            2.0 * c,
            json!({ "point": x.coords(shape.dim()), "direction": w.coords(shape.dim()) }),
        ),
        _ => return Err(Error::BadParams("need --boundary-index or --at with --direction".into())),
    };
    let mut v = json!({ "value": value, "expected": expected, "gap": value - expected });
    if let (Value::Object(m), Value::Object(extra)) = (&mut v, at) {
        m.extend(extra);
    }
    let mut done = Done::new(v, format!("value {value} expected {expected}"));
    if a.svg.is_some() {
        let rows = pointwise_boundary_all(&b)?;
        polygon_values_svg(&shape, &rows, &a.svg, &mut done.outputs)?;
    }
    Ok(done)
}

fn crofton(input: &Input, l: &LineArgs) -> Result<Done> {
    let shape = load(input)?;
    let s = sampler(&shape, l.radius, l.seed)?;
    let e = estimate(&s, &shape, l.lines)?;
    let summary = format!("area estimate {} ± {}", e.area_estimate, e.area_std_error);
    Ok(Done::new(to_value(&e), summary))
}

fn crossval(input: &Input, l: &LineArgs) -> Result<Done> {
    let shape = load(input)?;
    let s = sampler(&shape, l.radius, l.seed)?;
    let c = cross_validate_energy(&s, &shape, l.lines)?;
    let summary = format!("relative gap {:e}", c.relative_gap);
    Ok(Done::new(to_value(&c), summary))
}

fn convexity(a: &ConvexityArgs) -> Result<Done> {
    let shape = load(&a.input)?;
    let oracle = shape.is_convex();
    let v = match a.method {
        Method::Defect => {
            let b = shape.discretize();
            let rows = pointwise_boundary_all(&b)?;
            let r = report_from_rows(&b, &rows);
            let verdict = if r.defect.abs() < r.tolerance { "convex" } else { "nonconvex" };
            json!({
                "method": "defect",
                "verdict": verdict,
                "defect": r.defect,
                "tolerance": r.tolerance,
                "oracle_convex": oracle,
            })
        }
        Method::Crofton => {
            if a.lines < MIN_CONVEXITY_SAMPLES {
                return Err(Error::BadParams(format!("need at least {MIN_CONVEXITY_SAMPLES} lines")));
            }
            let s = sampler(&shape, a.radius, a.seed)?;
            let r = convexity_test(&s, &shape, a.lines, a.significance)?;
            let mut v = to_value(&r);
            v["method"] = json!("crofton");
            v["oracle_convex"] = json!(oracle);
            v
        }
    };
    let summary = format!("verdict {} (oracle convex: {oracle})", v["verdict"].as_str().unwrap_or("?"));
    Ok(Done::new(v, summary))
}

fn density(input: &Input, element: usize, l: &LineArgs) -> Result<Done> {
    if l.radius.is_some() {
        return Err(Error::BadParams("density samples a ball fitted to the element; --radius is not used".into()));
    }
    let shape = load(input)?;
    let d = direction_density_test(&shape, element, l.lines, l.seed)?;
    let summary = format!("chi-square {} p {} (uniform p {})", d.chi_square, d.p_value, d.uniform_p_value);
    Ok(Done::new(to_value(&d), summary))
}

fn flow(a: &FlowArgs) -> Result<Done> {
    let shape = load(&a.input)?;
    let Shape::Polygon(p) = &shape else {
        return Err(Error::DimensionUnsupported(3));
    };
    let params = FlowParams {
        step_size: a.lr,
        max_iterations: a.steps,
        gradient_mode: match a.gradient {
            Gradient::Analytic => GradientMode::Analytic,
            Gradient::FiniteDifference => GradientMode::FiniteDifference,
        },
        fd_epsilon: a.fd_epsilon,
        tangential_redistribution: !a.no_redistribution,
        stop_defect: a.stop_defect,
    };
    params.validate()?;
    let t = convexify(p, &params)?;
    let first = t.iterations[0];
    let last = *t.iterations.last().expect("initial record");
    let v = json!({
        "iterations": last.iteration,
        "initial_defect": first.defect,
        "final_defect": last.defect,
        "initial_perimeter": first.perimeter,
        "final_perimeter": last.perimeter,
        "converged": t.converged,
        "halving_events": t.halving_events,
        "final_convex": convexity_core::geometry::polygon_is_convex(&t.final_shape),
        "params": to_value(&params),
    });
    let final_shape = Shape::Polygon(t.final_shape.clone());
    let mut done = Done::new(
        v,
        format!("{} iterations, defect {:e} -> {:e}, converged {}", last.iteration, first.defect, last.defect, t.converged),
    );
    done.outputs.add(&a.output, shape_to_string(&final_shape));
    if let Some(path) = &a.trace {
        done.outputs.add(path, t.to_csv());
    }
    if let Some(path) = &a.svg {
        done.outputs.add(path, svg::render_shape(&final_shape, None)?);
    }
    Ok(done)
}

fn dispatch(cmd: &Command) -> Result<Done> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Constant { dim } => constant(*dim),
        Command::Energy { input, refine, svg } => energy(input, *refine, svg),
        Command::Pointwise(a) => pointwise(a),
        Command::Crofton { input, lines } => crofton(input, lines),
        Command::Crossval { input, lines } => crossval(input, lines),
        Command::Convexity(a) => convexity(a),
        Command::Density { input, element, lines } => density(input, *element, lines),
        Command::Flow(a) => flow(a),
    }
}

fn threads(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::BadParams(format!("{THREADS_ENV}={s:?} is not a thread count"))),
        _ => Ok(None),
    }
}

fn fail(e: &Error) -> ExitCode {
    let detail = e.to_string().replace('\n', " ");
    eprintln!("error: {}: {detail}", e.kind());
    ExitCode::from(if e.is_numeric() { 3 } else { 2 })
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = threads(cli.threads)? {
        if n == 0 {
            return Err(Error::BadParams("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::BadParams(e.to_string()))?;
    }
    let done = dispatch(&cli.command)?;
    done.outputs.commit()?;
    let text = serde_json::to_string_pretty(&done.stdout).expect("serializable");
    println!("{text}");
    eprintln!("{}", done.summary);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let text: Vec<&str> = msg
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("error: usage: {}", text.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
