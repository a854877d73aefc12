//! Command-line front end for the dimpoly library.
//!
//! Every computation is exposed with both a human-readable text form and a
//! JSON form (`--json`). Exit status 0 means success, 1 a parse or
//! validation error, and 2 a tripped resource guard such as the enumeration
//! cap.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dimpoly::{
    characteristic_set, count_polytope, count_simplex, count_va, count_va_recursive,
    dimension_quasipoly, dimension_quasipoly_system, ehrhart_polytope, lambda_w, sigma_trdeg,
    vertices, volume, Error, HPolytope, PointSet, SystemInput, SystemSpec, WeightVector,
    DEFAULT_ENUMERATION_CAP,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dimpoly", version, about = "Exact dimension quasi-polynomial calculator")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Abort any brute-force enumeration that would visit more than this
    /// many lattice points.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP,
          value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ehrhart quasi-polynomial of the weighted standard simplex.
    EhrhartSimplex {
        /// Positive integer weights, comma separated (e.g. "2,1").
        #[arg(long, value_parser = parse_weights)]
        weights: WeightList,
    },
    /// Ehrhart quasi-polynomial, vertices, and denominator of a rational
    /// polytope given by Ax <= b.
    EhrhartPolytope {
        /// JSON file with fields "A" (integer matrix) and "b" (integer vector).
        #[arg(long)]
        file: PathBuf,
    },
    /// Dimension quasi-polynomial of the points outside the shifted cones
    /// of a finite set in N^m.
    Dimset {
        /// Positive integer weights, comma separated (e.g. "2,1").
        #[arg(long, value_parser = parse_weights)]
        weights: WeightList,
        /// Lattice points as semicolon-separated comma tuples (e.g. "2,1;0,3").
        #[arg(long, value_parser = parse_points)]
        points: PointList,
    },
    /// Dimension quasi-polynomial and sigma-transcendence degree of a
    /// system of linear difference equations.
    System {
        /// JSON file with fields m, n, weights, and polynomials or leaders.
        #[arg(long)]
        file: PathBuf,
    },
    /// Brute-force lattice counts for spot checks.
    Count {
        #[command(subcommand)]
        what: CountCommand,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// Lattice points x >= 0 with w.x <= t.
    Simplex {
        #[arg(long, value_parser = parse_weights)]
        weights: WeightList,
        #[arg(short = 'r', long, allow_hyphen_values = true)]
        order: i64,
    },
    /// Lattice points in the r-th dilate of a polytope.
    Polytope {
        #[arg(long)]
        file: PathBuf,
        #[arg(short = 'r', long)]
        order: u64,
    },
    /// Lattice points of weighted order at most r that are not above any
    /// point of the given set.
    Va {
        #[arg(long, value_parser = parse_weights)]
        weights: WeightList,
        #[arg(long, value_parser = parse_points)]
        points: PointList,
        #[arg(short = 'r', long, allow_hyphen_values = true)]
        order: i64,
        /// Use the recursive counter instead of direct enumeration.
        #[arg(long)]
        recursive: bool,
    },
}

/// Wrapper so clap treats a full comma-separated weight list as one value.
#[derive(Clone)]
struct WeightList(Vec<u64>);

/// Wrapper so clap treats a full semicolon-separated point list as one value.
#[derive(Clone)]
struct PointList(Vec<Vec<u64>>);

fn parse_weights(raw: &str) -> Result<WeightList, String> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| format!("invalid weight {:?}", part.trim()))
        })
        .collect::<Result<Vec<u64>, String>>()
        .map(WeightList)
}

fn parse_points(raw: &str) -> Result<PointList, String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(PointList(Vec::new()));
    }
    trimmed
        .split(';')
        .map(|tuple| {
            tuple
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u64>()
                        .map_err(|_| format!("invalid coordinate {:?}", part.trim()))
                })
                .collect::<Result<Vec<u64>, String>>()
        })
        .collect::<Result<Vec<Vec<u64>>, String>>()
        .map(PointList)
}

enum CliError {
    Core(Error),
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_resource_guard() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("invalid JSON in {}: {e}", path.display())))
}

fn format_vertex(vertex: &[dimpoly::Rational]) -> String {
    let coords: Vec<String> = vertex.iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(", "))
}

fn run(cli: &Cli) -> Result<(Vec<String>, Value), CliError> {
    match &cli.command {
        Command::EhrhartSimplex { weights } => {
            let w = WeightVector::new(weights.0.clone())?;
            let lambda = lambda_w(&w)?;
            let lines = vec![lambda.format_with("t")];
            let value = json!({ "weights": w.weights(), "lambda": lambda });
            Ok((lines, value))
        }
        Command::EhrhartPolytope { file } => {
            let p: HPolytope = load_json(file)?;
            let vs = vertices(&p)?;
            let qp = ehrhart_polytope(&p, cli.cap)?;
            let vol = volume(&p)?;
            let vertex_lines: Vec<String> =
                vs.vertices().iter().map(|v| format_vertex(v)).collect();
            let lines = vec![
                qp.format_with("t"),
                format!("vertices: {}", vertex_lines.join("; ")),
                format!("denominator: {}", vs.denominator_lcm()),
                format!("volume: {vol}"),
            ];
            let vertex_json: Vec<Vec<String>> = vs
                .vertices()
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect())
                .collect();
            let value = json!({
                "ehrhart": qp,
                "vertices": vertex_json,
                "denominator": vs.denominator_lcm().to_string(),
                "volume": vol.to_string(),
            });
            Ok((lines, value))
        }
        Command::Dimset { weights, points } => {
            let w = WeightVector::new(weights.0.clone())?;
            let a = PointSet::new(w.dimension(), points.0.clone())?;
            let result = dimension_quasipoly(&a, &w)?;
            let lines = vec![
                format!(
                    "{} (valid for t >= {})",
                    result.chi.format_with("t"),
                    result.threshold
                ),
                format!("antichain: {}", result.antichain),
            ];
            let value = serde_json::to_value(&result)
                .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
            Ok((lines, value))
        }
        Command::System { file } => {
            let input: SystemInput = load_json(file)?;
            let (rk, spec) = input.validate()?;
            let mut lines = Vec::new();
            let mut elements_json: Option<Vec<String>> = None;
            let leader_sets: Vec<PointSet> = match spec {
                SystemSpec::Polynomials(polys) => {
                    let cs = characteristic_set(&polys, &rk)?;
                    let rendered: Vec<String> =
                        cs.elements().iter().map(|g| g.format(&rk)).collect();
                    for (j, text) in rendered.iter().enumerate() {
                        lines.push(format!("E_{}: {}", j + 1, text));
                    }
                    elements_json = Some(rendered);
                    cs.leader_sets().to_vec()
                }
                SystemSpec::Leaders(sets) => sets,
            };
            for (j, set) in leader_sets.iter().enumerate() {
                lines.push(format!("leaders y{}: {}", j + 1, set));
            }
            let dim = dimension_quasipoly_system(&leader_sets, rk.weights())?;
            let trdeg = sigma_trdeg(&dim.phi, rk.weights())?;
            lines.push(format!(
                "Phi: {} (valid for t >= {})",
                dim.phi.format_with("t"),
                dim.threshold
            ));
            lines.push(format!("degree: {}", dim.phi.degree()));
            lines.push(format!(
                "leading coefficient: {}",
                dim.phi.leading_coefficient()
            ));
            lines.push(format!("sigma-trdeg: {trdeg}"));
            let mut value = serde_json::to_value(&dim)
                .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
            let object = value
                .as_object_mut()
                .expect("dimension result serializes to an object");
            if let Some(elements) = elements_json {
                object.insert("characteristic_set".into(), json!(elements));
            }
            object.insert("leader_sets".into(), json!(leader_sets));
            object.insert("sigma_trdeg".into(), json!(trdeg));
            Ok((lines, value))
        }
        Command::Count { what } => {
            let count = match what {
                CountCommand::Simplex { weights, order } => {
                    let w = WeightVector::new(weights.0.clone())?;
                    count_simplex(&w, *order)
                }
                CountCommand::Polytope { file, order } => {
                    let p: HPolytope = load_json(file)?;
                    count_polytope(&p, *order, cli.cap)?
                }
                CountCommand::Va {
                    weights,
                    points,
                    order,
                    recursive,
                } => {
                    let w = WeightVector::new(weights.0.clone())?;
                    let a = PointSet::new(w.dimension(), points.0.clone())?;
                    if *recursive {
                        count_va_recursive(&a, &w, *order)?
                    } else {
                        count_va(&a, &w, *order)?
                    }
                }
            };
            Ok((vec![count.to_string()], json!({ "count": count })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((lines, mut value)) => {
            if cli.json {
                let pretty = lines.join("\n");
                if let Some(object) = value.as_object_mut() {
                    object.insert("pretty".into(), json!(pretty));
                }
                match serde_json::to_string_pretty(&value) {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("error: failed to serialize output: {e}");
                        return ExitCode::from(1);
                    }
                }
            } else {
                for line in lines {
                    println!("{line}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
