use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use weld_core::arc_weld::{weld_all_components, WeldConfig};
use weld_core::crosscut_chop::chop_complement;
use weld_core::disk_metric::geodesic::geodesic;
use weld_core::exact_geom::rational::format_rational;
use weld_core::exact_geom::{parse_rational, Coord, PLDisk, Rational};
use weld_core::io::{chop_svg, emit_svg, emit_trace, parse_scene, parse_trace, weld_svg, RunConfig, TraceFile};
use weld_core::verify::{verify_chop, verify_multi, VerificationReport};

/// Exit status for errors that stop a command before any check runs.
const ERROR_EXIT: u8 = 101;
/// `weld verify` exits with the number of failed checks, capped here.
const MAX_FAILED_EXIT: usize = 100;

#[derive(Parser)]
#[command(name = "weld", version, about = "Weld null sequences of arcs onto planar compacta")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weld every complementary component of a scene and write a trace and an SVG.
    Build {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 4)]
        stages: u32,
        #[arg(long, default_value = "1/10", value_parser = rational)]
        delta_base: Rational,
        #[arg(long, default_value = "1/1000000000", value_parser = rational)]
        epsilon_stop: Rational,
        #[arg(long, default_value = "1/16", value_parser = rational)]
        eta_fraction: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run the verifier on a stored trace.
    Verify {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Subdivide the complement of a continuum by crosscuts.
    Chop {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 3)]
        rounds: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the shortest path between two points of a disk.
    Geodesic {
        /// Scene file whose first polygon is the disk.
        #[arg(long)]
        disk: PathBuf,
        #[arg(long, value_parser = point)]
        from: Coord,
        #[arg(long, value_parser = point)]
        to: Coord,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<Coord, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y but got {s:?}"))?;
    Ok(Coord::new(rational(x)?, rational(y)?))
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, e: impl std::fmt::Display) -> Self {
        Self { kind, message: e.to_string() }
    }
}

fn write_outputs(out: &Path, trace: &TraceFile, svg_name: &str, svg: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(out).map_err(|e| Failure::new("io", e))?;
    std::fs::write(out.join("trace.json"), emit_trace(trace)).map_err(|e| Failure::new("io", e))?;
    emit_svg(&out.join(svg_name), svg).map_err(|e| Failure::new("io", e))
}

fn print_report(report: &VerificationReport) {
    for c in &report.checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Build { scene, stages, delta_base, epsilon_stop, eta_fraction, seed, out } => {
            let scene = parse_scene(&scene).map_err(|e| Failure::new("scene", e))?;
            let weld = WeldConfig { stage_budget: stages, delta_base, epsilon_stop, eta_fraction, seed };
            let config = RunConfig { weld, output_dir: out };
            config.validate(&scene).map_err(|e| Failure::new("config", e))?;
            let multi = weld_all_components(&scene, &config.weld).map_err(|e| Failure::new("weld", e))?;
            let report = verify_multi(&scene, &multi, &config.weld);
            print_report(&report);
            let svg = weld_svg(&scene, &multi);
            let passed = report.all_passed();
            let trace = TraceFile::weld(&scene, config.weld.clone(), multi, report);
            write_outputs(&config.output_dir, &trace, "weld.svg", &svg)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { trace } => {
            let text = std::fs::read_to_string(&trace).map_err(|e| Failure::new("io", e))?;
            let t = parse_trace(&text).map_err(|e| Failure::new("trace", e))?;
            let report = t.reverify().map_err(|e| Failure::new("trace", e))?;
            print_report(&report);
            let failed = report.failed().len().min(MAX_FAILED_EXIT);
            Ok(ExitCode::from(failed as u8))
        }
        Command::Chop { scene, rounds, seed, out } => {
            let scene = parse_scene(&scene).map_err(|e| Failure::new("scene", e))?;
            let plan = chop_complement(&scene, rounds, seed).map_err(|e| Failure::new("chop", e))?;
            let report = verify_chop(&scene, &plan);
            print_report(&report);
            let svg = chop_svg(&scene, &plan);
            let passed = report.all_passed();
            let trace = TraceFile::chop(&scene, rounds, plan, report);
            write_outputs(&out, &trace, "chop.svg", &svg)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Geodesic { disk, from, to } => {
            let scene = parse_scene(&disk).map_err(|e| Failure::new("scene", e))?;
            let d = PLDisk::new(scene.regions[0].outer.clone()).map_err(|e| Failure::new("disk", e))?;
            let g = geodesic(&d, &from, &to).map_err(|e| Failure::new("geodesic", e))?;
            for v in &g.vertices {
                println!("{},{}", format_rational(&v.x), format_rational(&v.y));
            }
            let len = match g.length.exact_value() {
                Some(r) => format_rational(&r),
                None => format!("{:.12} in [{}, {}]", g.length.to_f64(), g.length.lower, g.length.upper),
            };
            println!("length {len}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            ExitCode::from(ERROR_EXIT)
        }
    }
}
