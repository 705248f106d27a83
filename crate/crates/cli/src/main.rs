//! `gyrokit`: command-line front end.
//!
//! Exit codes: 0 success, 1 negative verdict (not an endomorphism, not
//! collinear, a failed property, ...), 2 usage or domain error.

mod format;
mod input;

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gyrokit_core::geometry::{
    collinear_direct, collinear_gyro, commutes, klein_distance, linearly_dependent,
};
use gyrokit_core::matrix_models::{
    bloch_to_density, boxdot, density_to_bloch, normalize_det, odot, sqrt_posdef2, DensityMatrix2,
    Hermitian2, PosDef2Det1,
};
use gyrokit_core::morphisms::{classify_endomorphism, MapClassification, ZeroMap};
use gyrokit_core::verifier::{property_names, run_suite_with};
use gyrokit_core::{einstein_add, gamma, gyration, line_param, Error, ToleranceConfig};

use input::MapSource;

#[derive(Parser)]
#[command(name = "gyrokit", version, about = "Einstein gyrogroup numerics")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Absolute tolerance for approximate comparisons
    #[arg(long, global = true, default_value_t = 1e-9)]
    abs_tol: f64,
    /// Relative tolerance for approximate comparisons
    #[arg(long, global = true, default_value_t = 1e-9)]
    rel_tol: f64,
    /// Inputs with norm >= 1 - margin are rejected
    #[arg(long, global = true, default_value_t = 1e-9)]
    boundary_margin: f64,
    /// Radius of the ball random samples are drawn from
    #[arg(long, global = true, default_value_t = 0.999)]
    sample_rmax: f64,
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig> {
        let tol = ToleranceConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            boundary_margin: self.boundary_margin,
            sample_rmax: self.sample_rmax,
        };
        tol.validate()?;
        Ok(tol)
    }
}

#[derive(Args)]
struct Sampling {
    /// Number of random samples
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Master seed
    #[arg(long, env = "GYROKIT_SEED", default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// u ⊕ v
    Add {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Lorentz factor 1/√(1 − |u|²)
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// gyr[u,v]w
    Gyr {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Point of the diameter through x at parameter t
    Line {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
    /// Klein-model hyperbolic distance
    Dist {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Whether u ⊕ v = v ⊕ u (exit 1 if not)
    Commutes {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Whether x, y, z lie on a hyperbolic line (exit 1 if not)
    Collinear {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Bloch vector to density matrix, or back with --density
    Bloch {
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "density",
            required_unless_present = "density"
        )]
        v: Option<String>,
        /// Density matrix JSON file (or inline JSON) to map back to a vector
        #[arg(long)]
        density: Option<String>,
    },
    /// A ⊙ B on regular density matrices
    Odot {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// A ⊡ B on determinant-one positive definite matrices
    Boxdot {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// A / √det A for a regular density matrix
    Normdet {
        #[arg(long)]
        a: String,
    },
    /// Positive definite square root
    Sqrt {
        #[arg(long)]
        a: String,
    },
    /// Classify a map as orthogonal, zero or not an endomorphism
    Classify {
        /// Row-major JSON matrix file, or `zero`
        #[arg(long)]
        map: String,
        /// Dimension of the zero map
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the registered property suite
    Verify {
        /// Run every registered property
        #[arg(long, conflicts_with_all = ["only", "list"])]
        all: bool,
        /// Comma-separated property names
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Print registered property names
        #[arg(long)]
        list: bool,
        /// Threshold override, `name=value`
        #[arg(long = "threshold")]
        thresholds: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
    },
}

enum Outcome {
    Success,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn hermitian_json(h: &Hermitian2) -> Value {
    json!({
        "a": format::json_number(h.a),
        "d": format::json_number(h.d),
        "re_b": format::json_number(h.re_b),
        "im_b": format::json_number(h.im_b),
    })
}

fn print_line(line: impl AsRef<str>) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", line.as_ref())?;
    Ok(())
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Success
    } else {
        Outcome::Negative
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let tol = cli.tol.config()?;
    let margin = tol.boundary_margin;
    let vec = |s: &str| input::vector(s, margin);

    match cli.command {
        Command::Add { u, v } => {
            let r = einstein_add(&vec(&u)?, &vec(&v)?)?;
            print_line(format::vector(r.coords()))?;
        }
        Command::Gamma { u } => print_line(format::fmt_sig(gamma(&vec(&u)?)))?,
        Command::Gyr { u, v, w } => {
            let r = gyration(&vec(&u)?, &vec(&v)?, &vec(&w)?)?;
            print_line(format::vector(r.coords()))?;
        }
        Command::Line { x, t } => {
            let r = line_param(&vec(&x)?, t)?;
            print_line(format::vector(r.coords()))?;
        }
        Command::Dist { x, y } => {
            print_line(format::fmt_sig(klein_distance(&vec(&x)?, &vec(&y)?)?))?;
        }
        Command::Commutes { u, v } => {
            let (u, v) = (vec(&u)?, vec(&v)?);
            let c = commutes(&u, &v, &tol)?;
            let out =
                json!({ "commutes": c, "linearly_dependent": linearly_dependent(&u, &v, &tol) });
            print_line(out.to_string())?;
            return Ok(verdict(c));
        }
        Command::Collinear { x, y, z } => {
            let (x, y, z) = (vec(&x)?, vec(&y)?, vec(&z)?);
            let gyro = collinear_gyro(&x, &y, &z, &tol)?;
            let direct = collinear_direct(&x, &y, &z, &tol)?;
            print_line(json!({ "collinear_gyro": gyro, "collinear_direct": direct }).to_string())?;
            return Ok(verdict(gyro));
        }
        Command::Bloch { v, density } => match (v, density) {
            (Some(v), _) => {
                let m = bloch_to_density(&vec(&v)?)?;
                print_line(hermitian_json(m.matrix()).to_string())?;
            }
            (None, Some(d)) => {
                let m = DensityMatrix2::new(input::hermitian(&d)?, &tol)?;
                print_line(format::vector(density_to_bloch(&m)?.coords()))?;
            }
            (None, None) => unreachable!("clap requires one of --v, --density"),
        },
        Command::Odot { a, b } => {
            let a = DensityMatrix2::new(input::hermitian(&a)?, &tol)?;
            let b = DensityMatrix2::new(input::hermitian(&b)?, &tol)?;
            print_line(hermitian_json(odot(&a, &b)?.matrix()).to_string())?;
        }
        Command::Boxdot { a, b } => {
            let a = PosDef2Det1::new(input::hermitian(&a)?, &tol)?;
            let b = PosDef2Det1::new(input::hermitian(&b)?, &tol)?;
            print_line(hermitian_json(boxdot(&a, &b)?.matrix()).to_string())?;
        }
        Command::Normdet { a } => {
            let a = DensityMatrix2::new(input::hermitian(&a)?, &tol)?;
            print_line(hermitian_json(normalize_det(&a)?.matrix()).to_string())?;
        }
        Command::Sqrt { a } => {
            print_line(hermitian_json(&sqrt_posdef2(&input::hermitian(&a)?)?).to_string())?;
        }
        Command::Classify { map, dim, sampling } => {
            let result = match input::map_source(&map)? {
                MapSource::Zero => {
                    classify_endomorphism(&ZeroMap { dim }, sampling.samples, sampling.seed, &tol)
                }
                MapSource::Matrix(m) => {
                    classify_endomorphism(&m, sampling.samples, sampling.seed, &tol)
                }
            };
            let (out, outcome) = match result {
                Ok(MapClassification::Orthogonal { matrix }) => {
                    let rows: Vec<Value> = matrix
                        .rows()
                        .iter()
                        .map(|r| format::json_vector(r))
                        .collect();
                    (
                        json!({ "verdict": "orthogonal", "matrix": rows }),
                        Outcome::Success,
                    )
                }
                Ok(MapClassification::Zero) => (json!({ "verdict": "zero" }), Outcome::Success),
                Ok(MapClassification::NotEndomorphism { witness }) => (
                    json!({
                        "verdict": "not_endomorphism",
                        "witness": {
                            "u": format::json_vector(witness.u.coords()),
                            "v": format::json_vector(witness.v.coords()),
                        },
                        "residual": format::json_number(witness.residual),
                    }),
                    Outcome::Negative,
                ),
                Err(Error::Inconclusive(reason)) => (
                    json!({ "verdict": "inconclusive", "reason": reason }),
                    Outcome::Negative,
                ),
                Err(e) => return Err(e.into()),
            };
            print_line(out.to_string())?;
            return Ok(outcome);
        }
        Command::Verify {
            all,
            only,
            list,
            thresholds,
            sampling,
        } => {
            if list {
                for name in property_names() {
                    print_line(name)?;
                }
                return Ok(Outcome::Success);
            }
            let names: Vec<&str> = if all || only.is_empty() {
                property_names().to_vec()
            } else {
                only.iter().map(String::as_str).collect()
            };
            let overrides = thresholds
                .iter()
                .map(|t| input::threshold(t))
                .collect::<Result<BTreeMap<_, _>>>()?;
            let reports =
                run_suite_with(&names, sampling.samples, sampling.seed, &tol, &overrides)?;
            for r in &reports {
                print_line(r.to_json_line())?;
            }
            return Ok(verdict(reports.iter().all(|r| r.passed)));
        }
    }
    Ok(Outcome::Success)
}
