use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use inspectra::curve::{self, Polyline};
use inspectra::highdim::{self, DirectionMethod};
use inspectra::optimize::{self, OptimizerConfig};
use inspectra::verify::{self, Theorem};
use inspectra::{generate, horizon, unfold};

mod svg;

#[derive(Parser)]
#[command(name = "inspectra", version, about = "Inspection curves around the unit sphere")]
struct Cli {
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Treat CSV curve inputs as closed.
    #[arg(long, global = true)]
    csv_closed: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write a curve file.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Length, horizon and efficiency of a curve.
    Analyze {
        curve: PathBuf,
        #[arg(long, value_enum, default_value_t = HorizonArg::Exact)]
        horizon: HorizonArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Planar unfolding and spiral decomposition.
    Unfold {
        curve: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Shorten a curve while keeping the unit sphere inside its hull.
    Optimize {
        #[arg(long, value_enum, default_value_t = InitArg::BaseballNoisy)]
        init: InitArg,
        #[arg(long, default_value_t = 200)]
        vertices: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check an inequality on one or more curve files.
    Verify {
        #[arg(value_enum)]
        theorem: TheoremArg,
        #[arg(required = true)]
        curves: Vec<PathBuf>,
        /// Constant for the appendix check.
        #[arg(long)]
        constant: Option<f64>,
    },
    /// Higher-dimensional tools.
    Highdim {
        #[command(subcommand)]
        cmd: HighdimCmd,
    },
    /// SVG figure of a curve, its unfolding, or an optimizer trace CSV.
    Plot {
        input: PathBuf,
        #[arg(long)]
        unfolded: bool,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    Baseball {
        #[arg(long, default_value_t = 500)]
        per_arc: usize,
    },
    Circle {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1000)]
        vertices: usize,
    },
    CrossPolytope {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        closed: bool,
    },
    RandomInspection {
        #[arg(long, default_value_t = 400)]
        vertices: usize,
        #[arg(long, default_value_t = 4)]
        harmonics: usize,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
    },
}

#[derive(Subcommand)]
enum HighdimCmd {
    CrossPolytope {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        closed: bool,
    },
    /// Split a curve in R^{2n} into 2n curves from the origin in R^n.
    Split { curve: PathBuf },
    Sidak {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        slabs: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0.5)]
        min_width: f64,
        #[arg(long, default_value_t = 3.0)]
        max_width: f64,
    },
    BallBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    Direction {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Staircase)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Minimax)]
        method: MethodArg,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Slab weights b_1,…,b_K for slab rejection.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    Tikhomirov {
        #[arg(long)]
        n: Option<usize>,
        /// JSON array of points; scaled cross-polytope vertices when absent.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = highdim::DEFAULT_C)]
        constant: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum HorizonArg {
    Exact,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    BaseballNoisy,
    Circle,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Main,
    HorizonLower,
    Spiral,
    Appendix,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Staircase,
    CrossPolytope,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Minimax,
    SlabRejection,
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    args: Vec<String>,
    seed: u64,
    threads: Option<usize>,
    format: Format,
    version: &'static str,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    wall_time_seconds: f64,
}

/// Files read and written by one run.
struct Run {
    format: Format,
    csv_closed: bool,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(FileDigest { path: path.display().to_string(), sha256: digest(&bytes) });
        Ok(bytes)
    }

    fn read_curve(&mut self, path: &Path) -> Result<Polyline> {
        let bytes = self.read(path)?;
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let poly = if is_csv {
            curve::read_csv(bytes.as_slice(), self.csv_closed)
        } else {
            curve::read_json(bytes.as_slice())
        };
        poly.with_context(|| format!("parsing {}", path.display()))
    }

    /// Writes to `path`, or to standard output when there is none.
    fn emit(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
        match path {
            Some(p) => {
                fs::write(p, bytes).with_context(|| format!("writing {}", p.display()))?;
                self.outputs.push(FileDigest { path: p.display().to_string(), sha256: digest(bytes) });
            }
            None => std::io::stdout().write_all(bytes)?,
        }
        Ok(())
    }

    fn emit_curve(&mut self, path: Option<&Path>, poly: &Polyline) -> Result<()> {
        let bytes = match self.format {
            Format::Json => curve::to_json(poly).into_bytes(),
            Format::Csv => {
                let mut buf = Vec::new();
                curve::write_csv(&mut buf, poly)?;
                buf
            }
        };
        self.emit(path, &bytes)
    }

    fn emit_report<T: Serialize>(&mut self, path: Option<&Path>, report: &T) -> Result<()> {
        let value = serde_json::to_value(report)?;
        let bytes = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value)?;
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => {
                let mut rows = Vec::new();
                flatten("", &value, &mut rows);
                let mut s = String::from("key,value\n");
                for (k, v) in rows {
                    s.push_str(&csv_field(&k));
                    s.push(',');
                    s.push_str(&csv_field(&v));
                    s.push('\n');
                }
                s.into_bytes()
            }
        };
        self.emit(path, &bytes)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Dotted-path rows for the CSV rendering of a report.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn curve_value(poly: &Polyline) -> Value {
    json!({
        "dim": poly.dim(),
        "closed": poly.is_closed(),
        "vertices": poly.vertices().map(|v| v.to_vec()).collect::<Vec<_>>(),
    })
}

/// Exit status of a completed command.
enum Outcome {
    Pass,
    Fail,
}

fn run(cli: &Cli, ctx: &mut Run) -> Result<Outcome> {
    let out = cli.out.as_deref();
    let seed = cli.seed;
    match &cli.command {
        Command::Generate { kind } => {
            let poly = match kind {
                GenerateKind::Baseball { per_arc } => generate::baseball(*per_arc)?,
                GenerateKind::Circle { radius, dim, vertices } => generate::circle(*radius, *vertices, *dim)?,
                GenerateKind::CrossPolytope { n, closed } => highdim::cross_polytope_curve(*n, *closed)?,
                GenerateKind::RandomInspection { vertices, harmonics, margin } => {
                    generate::random_inspection(seed, *vertices, *harmonics, *margin)?
                }
            };
            ctx.emit_curve(out, &poly)?;
        }
        Command::Analyze { curve, horizon: method, samples } => {
            let poly = ctx.read_curve(curve)?;
            let report = match method {
                HorizonArg::Exact => horizon::horizon(&poly)?,
                HorizonArg::Mc => horizon::horizon_mc(&poly, *samples, seed)?,
            };
            let length = poly.length();
            let value = json!({
                "total": report.total,
                "per_segment": report.per_segment,
                "method": report.method,
                "mc_stderr": report.mc_stderr,
                "efficiency": report.total / length,
                "length": length,
            });
            ctx.emit_report(out, &value)?;
        }
        Command::Unfold { curve, svg: svg_path, report } => {
            let poly = ctx.read_curve(curve)?;
            let unf = unfold::unfold(&poly)?;
            let dec = unfold::spiral_decomposition(&unf, 1e-9);
            if let Some(p) = out {
                ctx.emit_curve(Some(p), &unf.to_polyline()?)?;
            }
            if let Some(p) = svg_path {
                ctx.emit(Some(p), svg::unfolded_figure(&unf, &dec).as_bytes())?;
            }
            if report.is_some() || (out.is_none() && svg_path.is_none()) {
                ctx.emit_report(report.as_deref(), &dec)?;
            }
        }
        Command::Optimize { init, vertices, noise, max_iters, trace } => {
            let start = match init {
                InitArg::BaseballNoisy => {
                    generate::perturb(&generate::baseball((*vertices / 4).max(2))?, *noise, seed)?
                }
                InitArg::Circle => generate::circle(3.0, *vertices, 3)?,
                InitArg::Random => {
                    let l = generate::random_loop(seed, *vertices, 6)?;
                    let len = l.length();
                    l.scaled(30.0 / len)
                }
            };
            let mut cfg = OptimizerConfig { vertex_count: *vertices, seed, ..Default::default() };
            if let Some(m) = max_iters {
                cfg.max_iters = *m;
            }
            let result = match optimize::shorten(&start, &cfg) {
                Ok(t) => t,
                Err(inspectra::Error::Divergence { trace: t, length, initial }) => {
                    if let Some(p) = trace {
                        let mut buf = Vec::new();
                        t.write_csv(&mut buf)?;
                        ctx.emit(Some(p), &buf)?;
                    }
                    bail!("optimizer diverged: length {length} exceeds 10x initial {initial}");
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(p) = out {
                ctx.emit_curve(Some(p), &result.final_curve)?;
            }
            if let Some(p) = trace {
                let mut buf = Vec::new();
                result.write_csv(&mut buf)?;
                ctx.emit(Some(p), &buf)?;
            }
            let chords = optimize::chord_structure_diagnostic(&result.final_curve)?;
            let summary = json!({
                "initial_length": result.initial_length,
                "final_length": result.final_length,
                "final_slack": result.final_slack,
                "directions": result.direction_count,
                "chord_runs": chords.runs.len(),
                "chord_residual": chords.max_residual,
                "baseball_hausdorff": optimize::baseball_hausdorff(&result.final_curve, seed)?,
            });
            let mut s = serde_json::to_string_pretty(&summary)?;
            s.push('\n');
            ctx.emit(None, s.as_bytes())?;
            if result.final_slack < -cfg.tol_feasibility {
                return Ok(Outcome::Fail);
            }
        }
        Command::Verify { theorem, curves, constant } => {
            let mut reports = Vec::new();
            for path in curves {
                let poly = ctx.read_curve(path)?;
                let report = match theorem {
                    TheoremArg::Main => verify::verify_main(&poly)?,
                    TheoremArg::HorizonLower => verify::verify_horizon_lower(&poly, seed)?,
                    TheoremArg::Spiral => verify::verify_spiral(&poly)?,
                    TheoremArg::Appendix => verify::verify_appendix(
                        &poly,
                        constant.unwrap_or_else(|| verify::appendix_constant(highdim::DEFAULT_C)),
                        seed,
                    )?,
                };
                reports.push(json!({ "file": path.display().to_string(), "report": report }));
            }
            let pass = reports.iter().all(|r| r["report"]["pass"] == Value::Bool(true));
            let theorem = match theorem {
                TheoremArg::Main => Theorem::Main,
                TheoremArg::HorizonLower => Theorem::HorizonLower,
                TheoremArg::Spiral => Theorem::Spiral,
                TheoremArg::Appendix => Theorem::Appendix,
            };
            ctx.emit_report(out, &json!({ "theorem": theorem, "pass": pass, "curves": reports }))?;
            if !pass {
                return Ok(Outcome::Fail);
            }
        }
        Command::Highdim { cmd } => return highdim_cmd(cmd, out, seed, ctx),
        Command::Plot { input, unfolded } => {
            let bytes = ctx.read(input)?;
            let text = String::from_utf8(bytes).context("input is not UTF-8")?;
            let figure = if text.starts_with("stage,iteration,length") {
                svg::trace_figure(&read_trace(&text)?)
            } else {
                let poly = if input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                    curve::read_csv(text.as_bytes(), ctx.csv_closed)?
                } else {
                    curve::from_json(&text)?
                };
                if *unfolded {
                    let unf = unfold::unfold(&poly)?;
                    let dec = unfold::spiral_decomposition(&unf, 1e-9);
                    svg::unfolded_figure(&unf, &dec)
                } else {
                    if !(2..=3).contains(&poly.dim()) {
                        bail!("plotting needs a curve in R^2 or R^3");
                    }
                    let pts: Vec<Vec<f64>> = poly.vertices().map(|v| v.to_vec()).collect();
                    svg::curve_figure(&pts, poly.is_closed())
                }
            };
            ctx.emit(out, figure.as_bytes())?;
        }
    }
    Ok(Outcome::Pass)
}

fn highdim_cmd(cmd: &HighdimCmd, out: Option<&Path>, seed: u64, ctx: &mut Run) -> Result<Outcome> {
    match cmd {
        HighdimCmd::CrossPolytope { n, closed } => {
            ctx.emit_report(out, &highdim::cross_polytope_report(*n, *closed)?)?;
        }
        HighdimCmd::Split { curve } => {
            let poly = ctx.read_curve(curve)?;
            let split = highdim::split_and_project(&poly)?;
            let curves: Vec<Value> = split.family.curves().iter().map(curve_value).collect();
            let value = json!({
                "dim": split.family.dim(),
                "intervals": split.intervals,
                "basis": split.basis,
                "curves": curves,
            });
            ctx.emit_report(out, &value)?;
        }
        HighdimCmd::Sidak { n, slabs, samples, min_width, max_width } => {
            let family = highdim::SlabFamily::random(*n, *slabs, *min_width, *max_width, seed)?;
            let report = highdim::sidak_check(&family, *samples, seed)?;
            ctx.emit_report(out, &report)?;
            if !report.pass {
                return Ok(Outcome::Fail);
            }
        }
        HighdimCmd::BallBound { n, r, samples } => {
            let report = highdim::gaussian_ball_bound_check(*n, *r, *samples, seed)?;
            ctx.emit_report(out, &report)?;
            if !report.pass {
                return Ok(Outcome::Fail);
            }
        }
        HighdimCmd::Direction { n, family, method, depth, weights, samples } => {
            let fam = match family {
                FamilyArg::Staircase => {
                    highdim::random_staircase_family(*n, 2 * n, 2 * n, (*n as f64).sqrt(), seed)?
                }
                FamilyArg::CrossPolytope => highdim::cross_polytope_segments(*n)?,
            };
            let method = match method {
                MethodArg::Minimax => DirectionMethod::default(),
                MethodArg::SlabRejection => DirectionMethod::SlabRejection {
                    depth: *depth,
                    weights: weights.clone(),
                    radius: None,
                    budget: *samples,
                },
            };
            let cert = highdim::find_direction(&fam, &method, seed)?;
            ctx.emit_report(out, &cert)?;
        }
        HighdimCmd::Tikhomirov { n, points, constant } => {
            let pts: Vec<Vec<f64>> = match (points, n) {
                (Some(p), _) => {
                    let bytes = ctx.read(p)?;
                    serde_json::from_slice(&bytes).context("points file must be a JSON array of arrays")?
                }
                (None, Some(n)) => highdim::scaled_cross_polytope_vertices(*n),
                (None, None) => bail!("give --n or --points"),
            };
            let report = highdim::tikhomirov_check(&pts, *constant, seed)?;
            ctx.emit_report(out, &report)?;
            if report.verdict == highdim::Verdict::Fail {
                return Ok(Outcome::Fail);
            }
        }
    }
    Ok(Outcome::Pass)
}

fn read_trace(text: &str) -> Result<Vec<optimize::TraceRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            bail!("trace row {i} has {} fields", f.len());
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| anyhow!("trace row {i}: {e}"));
        let event = match f[6] {
            "step" => optimize::TraceEvent::Step,
            "rejected" => optimize::TraceEvent::Rejected,
            "resample" => optimize::TraceEvent::Resample,
            "refine" => optimize::TraceEvent::Refine,
            "inflate" => optimize::TraceEvent::Inflate,
            other => bail!("trace row {i}: unknown event {other}"),
        };
        rows.push(optimize::TraceRow {
            stage: f[0].parse()?,
            iteration: f[1].parse()?,
            length: num(f[2])?,
            worst_slack: num(f[3])?,
            merit: num(f[4])?,
            step: num(f[5])?,
            event,
        });
    }
    Ok(rows)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Generate { .. } => "generate",
        Command::Analyze { .. } => "analyze",
        Command::Unfold { .. } => "unfold",
        Command::Optimize { .. } => "optimize",
        Command::Verify { .. } => "verify",
        Command::Highdim { .. } => "highdim",
        Command::Plot { .. } => "plot",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut ctx = Run { format: cli.format, csv_closed: cli.csv_closed, inputs: Vec::new(), outputs: Vec::new() };
    let outcome = match run(&cli, &mut ctx) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(first) = ctx.outputs.first().map(|f| f.path.clone()) {
        let manifest = RunManifest {
            command: command_name(&cli.command).to_string(),
            args: std::env::args().skip(1).collect(),
            seed: cli.seed,
            threads: cli.threads,
            format: cli.format,
            version: env!("CARGO_PKG_VERSION"),
            inputs: std::mem::take(&mut ctx.inputs),
            outputs: std::mem::take(&mut ctx.outputs),
            wall_time_seconds: started.elapsed().as_secs_f64(),
        };
        let path = format!("{first}.manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        if let Err(e) = fs::write(&path, text) {
            eprintln!("error: writing {path}: {e}");
            return ExitCode::from(2);
        }
    }
    match outcome {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::Fail => ExitCode::from(1),
    }
}
