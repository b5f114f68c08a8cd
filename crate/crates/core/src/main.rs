//! Command-line front end: invariant reports, orbit geometry (CSV/SVG),
//! family scans and the closed-form validation grid.
//!
//! Exit codes: 0 success / match; 1 invariant mismatch or failed validation;
//! 2 invalid spec or arguments; 3 numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use kjplus::{
    hill_radii, invariant_report, orbit_params, rotating_position, run_grid, sample_orbit,
    scan_family_default, tangency_radius, Direction, Error, Guards, InvariantReport, ScanConfig,
    TorusOrbitSpec,
};
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "kjplus",
    about = "J+ and Stark-Zeeman invariants of rotating-Kepler torus orbits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Direct,
    Retrograde,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::Direct => Direction::Direct,
            DirectionArg::Retrograde => Direction::Retrograde,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrbitFormat {
    Csv,
    Svg,
}

#[derive(Args)]
struct SpecArgs {
    /// Covers of the Kepler ellipse.
    #[arg(long)]
    k: u32,
    /// Covers of the rotating frame.
    #[arg(long)]
    l: u32,
    /// Eccentricity in [0, 1).
    #[arg(long)]
    e: f64,
    #[arg(long, value_enum)]
    direction: DirectionArg,
}

#[derive(Args)]
struct GuardArgs {
    /// Guard band around e = 0.
    #[arg(long, default_value_t = 1e-3)]
    guard_zero: f64,
    /// Guard band around the cusp threshold.
    #[arg(long, default_value_t = 1e-3)]
    guard_threshold: f64,
    /// Guard band around e = 1.
    #[arg(long, default_value_t = 1e-3)]
    guard_one: f64,
}

impl GuardArgs {
    fn guards(&self) -> Guards {
        Guards {
            near_zero: self.guard_zero,
            near_threshold: self.guard_threshold,
            near_one: self.guard_one,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute (J+, J1, J2) of one orbit and compare with the closed forms.
    Invariants {
        #[command(flatten)]
        spec: SpecArgs,
        /// Sampling density override (also via KJPLUS_SAMPLES).
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        guards: GuardArgs,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit orbit geometry as CSV (t,x,y) or SVG.
    Orbit {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_enum, default_value_t = OrbitFormat::Csv)]
        format: OrbitFormat,
        /// SVG only: draw Hill circles, symmetry rays, the tangency circle
        /// and the double points.
        #[arg(long)]
        overlays: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Scan the e-homotopy of a family and report its disaster events.
    Scan {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 200)]
        grid_points: usize,
        #[arg(long, default_value_t = 0.01)]
        e_min: f64,
        #[arg(long, default_value_t = 0.99)]
        e_max: f64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the closed-form validation grid over all coprime (k, l).
    Validate {
        #[arg(long, default_value_t = 6)]
        k_max: u32,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        guards: GuardArgs,
        /// Also write the full JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::InvalidSpec(_) | Error::GuardBand { .. } => ExitCode::from(2),
                Error::Numerical { .. } | Error::Constancy(_) => ExitCode::from(3),
            }
        }
    }
}

fn env_samples() -> Option<usize> {
    std::env::var("KJPLUS_SAMPLES")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Invariants {
            spec,
            samples,
            guards,
            output,
        } => {
            let spec = TorusOrbitSpec::new(spec.k, spec.l, spec.e, spec.direction.into())?;
            let report = invariant_report(&spec, samples.or_else(env_samples), &guards.guards())?;
            let doc = InvariantsDoc {
                schema_version: SCHEMA_VERSION,
                report: &report,
            };
            emit(&doc, output.as_deref())?;
            Ok(if report.matches {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Orbit {
            spec,
            samples,
            format,
            overlays,
            output,
        } => {
            let spec = TorusOrbitSpec::new(spec.k, spec.l, spec.e, spec.direction.into())?;
            let n = samples.or_else(env_samples).unwrap_or_else(|| {
                kjplus::default_samples(spec.k(), spec.l()).min(16384)
            });
            let text = match format {
                OrbitFormat::Csv => orbit_csv(&spec, n)?,
                OrbitFormat::Svg => orbit_svg(&spec, n, overlays)?,
            };
            write_text(&text, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            k,
            l,
            grid_points,
            e_min,
            e_max,
            samples,
            output,
        } => {
            let config = ScanConfig {
                grid_points,
                e_min,
                e_max,
                n_samples: samples.or_else(env_samples),
                ..ScanConfig::default()
            };
            let report = scan_family_default(k, l, &config)?;
            let doc = ScanDoc {
                schema_version: SCHEMA_VERSION,
                report: &report,
            };
            emit(&doc, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            k_max,
            samples,
            guards,
            output,
        } => {
            let report = run_grid(k_max, samples.or_else(env_samples), &guards.guards())?;
            print_validate_table(&report);
            if let Some(path) = output {
                let doc = ValidateDoc {
                    schema_version: SCHEMA_VERSION,
                    report: &report,
                };
                let json = serde_json::to_string_pretty(&doc).expect("serializable report");
                std::fs::write(&path, json).map_err(io_error)?;
            }
            Ok(if report.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

#[derive(Serialize)]
struct InvariantsDoc<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a InvariantReport,
}

#[derive(Serialize)]
struct ScanDoc<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a kjplus::ScanReport,
}

#[derive(Serialize)]
struct ValidateDoc<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a kjplus::ValidateReport,
}

fn io_error(err: std::io::Error) -> Error {
    Error::Numerical {
        stage: "io",
        message: err.to_string(),
    }
}

fn emit<T: Serialize>(doc: &T, path: Option<&std::path::Path>) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(doc).expect("serializable document");
    write_text(&json, path)
}

fn write_text(text: &str, path: Option<&std::path::Path>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_error),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(io_error)?;
            if !text.ends_with('\n') {
                out.write_all(b"\n").map_err(io_error)?;
            }
            Ok(())
        }
    }
}

fn orbit_csv(spec: &TorusOrbitSpec, n: usize) -> Result<String, Error> {
    let params = orbit_params(spec);
    let mut out = String::from("t,x,y\n");
    // n sample rows plus the closure row at t = period
    for i in 0..=n {
        let t = params.period * i as f64 / n as f64;
        let p = rotating_position(t, &params)?;
        out.push_str(&format!("{t},{x},{y}\n", x = p.x, y = p.y));
    }
    Ok(out)
}

fn orbit_svg(spec: &TorusOrbitSpec, n: usize, overlays: bool) -> Result<String, Error> {
    let params = orbit_params(spec);
    let curve = sample_orbit(spec, n)?;
    let pad = 1.1;
    let scale = 400.0;
    let r = curve.max_radius() * pad;
    let map = |p: kjplus::Point2| -> (f64, f64) {
        (scale * (p.x / r + 1.0), scale * (1.0 - p.y / r))
    };
    let size = 2.0 * scale;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size} {size}\" \
         width=\"{size}\" height=\"{size}\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n"
    ));
    if overlays {
        let (cx, cy) = map(kjplus::Point2::origin());
        // symmetry rays j*pi/k
        for j in 0..(2 * spec.k()) {
            let theta = j as f64 * PI / spec.k() as f64;
            let tip = map(kjplus::Point2::from_polar(r, theta));
            svg.push_str(&format!(
                "<line x1=\"{cx:.2}\" y1=\"{cy:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
                tip.0, tip.1
            ));
        }
        // Hill boundary exists only below the critical Jacobi energy
        if let Ok((r1, r2)) = hill_radii(params.jacobi) {
            for radius in [r1, r2] {
                svg.push_str(&format!(
                    "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{:.2}\" fill=\"none\" \
                     stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n",
                    scale * radius / r
                ));
            }
        }
        if let Some(r_inv) = tangency_radius(&params) {
            svg.push_str(&format!(
                "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{:.2}\" fill=\"none\" \
                 stroke=\"#88aaff\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n",
                scale * r_inv / r
            ));
        }
    }
    svg.push_str("<path d=\"");
    for (i, v) in curve.vertices().iter().enumerate() {
        let (x, y) = map(*v);
        svg.push_str(if i == 0 { "M" } else { "L" });
        svg.push_str(&format!("{x:.3} {y:.3} "));
    }
    svg.push_str("Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n");
    if overlays {
        if let Ok(doubles) =
            kjplus::find_double_points(&curve, &kjplus::Tolerances::default())
        {
            for d in doubles {
                let (x, y) = map(d.location);
                svg.push_str(&format!(
                    "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#cc3333\"/>\n"
                ));
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn print_validate_table(report: &kjplus::ValidateReport) {
    println!(
        "{:>3} {:>3} {:>10} {:>6} {:>23} {:>8} {:>8} {:>8} {:>9} {:>10} {:>6}",
        "k", "l", "direction", "e", "regime", "J+", "J1", "J2", "doubles", "preimage", "status"
    );
    for c in &report.cells {
        let counts = match c.expected_double_points {
            Some(exp) => format!("{}/{}", c.double_points, exp),
            None => format!("{}/-", c.double_points),
        };
        let pre = match c.expected_preimage_double_points {
            Some(exp) => format!("{}/{}", c.preimage_double_points, exp),
            None => format!("{}/-", c.preimage_double_points),
        };
        println!(
            "{:>3} {:>3} {:>10} {:>6.3} {:>23} {:>8} {:>8} {:>8} {:>9} {:>10} {:>6}",
            c.k,
            c.l,
            c.direction.to_string(),
            c.e,
            format!("{:?}", c.regime),
            c.numeric_j_plus,
            c.numeric_j1.to_string(),
            c.numeric_j2,
            counts,
            pre,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "{} cells, {}",
        report.cells.len(),
        if report.all_pass {
            "all pass"
        } else {
            "FAILURES PRESENT"
        }
    );
}
