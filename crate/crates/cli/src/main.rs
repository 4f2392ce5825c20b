use circle_angles::angles::Space;
use circle_angles::complex::Support;
use circle_angles::obstruction::{ClassId, Obstruction};
use circle_angles::shapes::{check_shapes, find_flattening, log_branches, obstruction_from_shapes, parse_shapes, verify_strong};
use circle_angles::triangulation::{parse_triangulation, IdealTriangulation};
use circle_angles::{Error, Exec, Tolerances};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "circle-angles", version, about = "Circle-valued angle structures and Z2 obstruction classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Tolerance for equation residuals, unit moduli and holonomies.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of a triangulation: sizes, edge valences, space dimensions, H^2 dimensions.
    Info {
        triangulation: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Connected components of SA (or SA0 with --relative) with their obstruction classes.
    Components {
        triangulation: PathBuf,
        #[arg(long)]
        relative: bool,
        /// Enumerate components on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Obstruction class of a shape solution, with the labelling audit.
    Obstruct {
        triangulation: PathBuf,
        #[arg(long)]
        shapes: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Log-parameters and a strong combinatorial flattening of a shape solution.
    Flatten {
        triangulation: PathBuf,
        #[arg(long)]
        shapes: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Serialize)]
struct ClassJson {
    support: &'static str,
    class: Vec<u8>,
    zero: bool,
}

fn class_json(c: &ClassId) -> ClassJson {
    let support = match c.support {
        Support::Relative => "relative",
        Support::Absolute => "absolute",
        Support::Boundary => "boundary",
    };
    ClassJson { support, class: c.bits(), zero: c.is_zero() }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn load_triangulation(path: &Path) -> Result<IdealTriangulation, Error> {
    parse_triangulation(&read(path)?)
}

fn load_shapes(path: &Path, t: &IdealTriangulation) -> Result<Vec<num_complex::Complex64>, Error> {
    let (name, z) = parse_shapes(&read(path)?)?;
    if let Some(name) = name {
        if name != t.name {
            return Err(Error::InvalidArgument(format!("shapes are for {name}, triangulation is {}", t.name)));
        }
    }
    Ok(z)
}

fn tolerances(common: &Common) -> Result<Tolerances, Error> {
    match common.tol {
        None => Ok(Tolerances::default()),
        Some(x) if x > 0.0 && x.is_finite() => Ok(Tolerances::default().with_eq(x)),
        Some(x) => Err(Error::InvalidArgument(format!("tolerance must be positive, got {x}"))),
    }
}

fn run(cmd: &Command) -> Result<serde_json::Value, Error> {
    match cmd {
        Command::Info { triangulation, .. } => {
            let t = load_triangulation(triangulation)?;
            let ob = Obstruction::new(&t)?;
            let (sa, sa0) = ob.angles().space_dimensions()?;
            let valences: Vec<usize> = t.edge_classes().iter().map(|e| e.valence()).collect();
            Ok(json!({
                "name": t.name,
                "tetrahedra": t.num_tetrahedra(),
                "cusps": t.num_cusps(),
                "edges": valences.len(),
                "edge_valences": valences,
                "dims": { "SA": sa, "SA0": sa0 },
                "h2_rel": ob.relative().dim(),
                "h2_abs": ob.absolute().dim(),
                "h2_restriction_kernel": ob.restriction_kernel_dim()?,
            }))
        }
        Command::Components { triangulation, relative, sequential, .. } => {
            let t = load_triangulation(triangulation)?;
            let ob = Obstruction::new(&t)?;
            let space = if *relative { Space::Sa0 } else { Space::Sa };
            let exec = if *sequential { Exec::Sequential } else { Exec::default() };
            Ok(serde_json::to_value(ob.enumerate_components(space, exec)?).expect("report serializes"))
        }
        Command::Obstruct { triangulation, shapes, common } => {
            let tol = tolerances(common)?;
            let t = load_triangulation(triangulation)?;
            let z = load_shapes(shapes, &t)?;
            let ob = Obstruction::new(&t)?;
            let res = obstruction_from_shapes(&ob, &z, &tol)?;
            let negative: Vec<usize> = res.report.sign_cochain.ones().collect();
            Ok(json!({
                "name": t.name,
                "solution": res.solution,
                "flattening": res.flattening,
                "labelling": {
                    "max_distance": res.report.max_distance,
                    "non_rectangle_identity": res.report.non_rectangle_identity,
                    "max_determinant_error": res.report.max_determinant_error,
                    "peripheral_diagonal_error": res.report.peripheral_diagonal_error,
                    "unipotent": res.report.unipotent,
                    "negative_cells": negative,
                },
                "class": class_json(&res.class),
                "angle_class": class_json(&res.angle_class),
                "same_component": res.same_component,
            }))
        }
        Command::Flatten { triangulation, shapes, common } => {
            let tol = tolerances(common)?;
            let t = load_triangulation(triangulation)?;
            let z = load_shapes(shapes, &t)?;
            let ob = Obstruction::new(&t)?;
            let ctx = ob.angles();
            let sol = check_shapes(ctx.gluing(), &z, &tol)?;
            let logs = log_branches(ctx.gluing(), &sol, &tol)?;
            let fl = find_flattening(ctx, &logs)?;
            let strong = verify_strong(ctx, &logs, &fl.f);
            Ok(json!({ "name": t.name, "solution": sol, "logs": logs, "flattening": fl, "verified_strong": strong }))
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Info { common, .. }
        | Command::Components { common, .. }
        | Command::Obstruct { common, .. }
        | Command::Flatten { common, .. } => common,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|v| {
        let text = serde_json::to_string_pretty(&v).expect("json") + "\n";
        match &common(&cli.command).out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
