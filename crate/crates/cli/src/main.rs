//! `dualquat`: batch front end for the dual-quaternion kinematics library.
//!
//! Exit codes: 0 success, 2 input error, 3 numeric failure, 4 no convergence.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualquat::interp::{interpolate, InterpOptions, NEAR_ZERO_QUATERNION};
use dualquat::solver::IkOptions;
use dualquat::{screw_exp, screw_log, Error, Pose, SerialChain, Slerp, Vector3, VectorDualQuaternion};
use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use input::{json_arg, one_or_many, read_knots, read_text};
use output::{emit, samples_csv, to_json};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Convergence(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Numeric(_) => "numeric",
            CliError::Convergence(_) => "convergence",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) | CliError::Convergence(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Input(_) => CliError::Input(e.to_string()),
            Error::Numeric(_) => CliError::Numeric(e.to_string()),
            Error::Convergence(f) => CliError::Convergence(format!(
                "no convergence after {} iterations; best joints {:?} with residual {:e}",
                f.iterations, f.best, f.residual
            )),
        }
    }
}

#[derive(Parser)]
#[command(name = "dualquat", version, about = "Dual-quaternion rigid-body kinematics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Sampling {
    /// Number of evenly spaced samples (at least 2).
    #[arg(long, conflicts_with = "dt")]
    samples: Option<usize>,
    /// Sample spacing in seconds; the last sample lands on the end time.
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a spline trajectory through timed pose knots as CSV.
    Interp {
        /// Knot file: JSON, or CSV when the name ends in .csv.
        knots: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
        /// Spline rotations and translations separately.
        #[arg(long)]
        split: bool,
        /// Ramp up from rest at the first knot and down to rest at the last.
        #[arg(long)]
        ramped: bool,
        /// First sample time (default: first knot time).
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        /// Last sample time (default: last knot time).
        #[arg(long, allow_negative_numbers = true)]
        end: Option<f64>,
        /// Reject samples whose rotation quaternion norm falls below this.
        #[arg(long, default_value_t = NEAR_ZERO_QUATERNION)]
        tol: f64,
    },
    /// Sample the screw-linear interpolation between two poses as CSV.
    Slerp {
        /// JSON file {"from": pose, "to": pose}.
        input: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Screw exponential: {"real":[3],"dual":[3]} (or an array) to poses.
    Exp { input: PathBuf },
    /// Principal screw logarithm: pose (or an array) to {"real","dual"}.
    Log { input: PathBuf },
    /// Forward kinematics of a serial chain.
    Fk {
        /// Chain file.
        chain: PathBuf,
        /// Joint values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        joints: Vec<f64>,
    },
    /// Inverse kinematics by damped least squares.
    Ik {
        /// Chain file.
        chain: PathBuf,
        /// Target pose: a file or a JSON literal.
        #[arg(long)]
        target: String,
        /// Initial joint values, comma separated (default: all zero).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        initial: Option<Vec<f64>>,
        /// Residual norm at which to stop.
        #[arg(long, default_value_t = IkOptions::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = IkOptions::default().max_iter)]
        max_iter: usize,
        /// Initial damping λ.
        #[arg(long, default_value_t = IkOptions::default().damping)]
        damping: f64,
    },
    /// Convert a pose between {"dq"}, {"q","t"} and 4×4 matrix forms.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PoseForm::Dq)]
        to: PoseForm,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PoseForm {
    Dq,
    Qt,
    Matrix,
}

fn sample_times(start: f64, end: f64, s: &Sampling) -> Result<Vec<f64>, CliError> {
    if !start.is_finite() || !end.is_finite() || end < start {
        return Err(CliError::Input(format!("invalid sample range [{start}, {end}]")));
    }
    if let Some(dt) = s.dt {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(CliError::Input(format!("--dt must be positive, got {dt}")));
        }
        let steps = ((end - start) / dt * (1.0 - 1e-12)).ceil() as usize;
        let mut ts: Vec<f64> = (0..steps).map(|k| start + k as f64 * dt).collect();
        ts.push(end);
        return Ok(ts);
    }
    let n = s.samples.unwrap_or(101);
    if n < 2 {
        return Err(CliError::Input(format!("--samples must be at least 2, got {n}")));
    }
    Ok((0..n)
        .map(|k| {
            if k + 1 == n {
                end
            } else {
                start + (end - start) * k as f64 / (n - 1) as f64
            }
        })
        .collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SlerpInput {
    from: Pose,
    to: Pose,
}

#[derive(Serialize)]
struct FkOutput {
    pose: Pose,
    translation: Vector3,
}

#[derive(Serialize)]
struct IkOutput {
    joints: Vec<f64>,
    iterations: usize,
    residual: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QtForm {
    q: dualquat::Quaternion,
    t: Vector3,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixForm {
    matrix: [[f64; 4]; 4],
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Interp {
            knots,
            sampling,
            split,
            ramped,
            start,
            end,
            tol,
        } => {
            if !(tol >= 0.0) {
                return Err(CliError::Input(format!("--tol must be non-negative, got {tol}")));
            }
            let knots = read_knots(&knots)?;
            let traj = interpolate(&knots, InterpOptions { split, ramped })?.with_min_norm(tol);
            let (t0, t1) = traj.domain();
            let times = sample_times(start.unwrap_or(t0), end.unwrap_or(t1), &sampling)?;
            let samples = times
                .into_iter()
                .map(|t| traj.eval(t).map(|p| (t, p)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(samples_csv(&samples))
        }
        Command::Slerp { input, sampling } => {
            let SlerpInput { from, to } = input::parse_json(&read_text(&input)?, "slerp input")?;
            let path = Slerp::new(&from, &to)?;
            let samples: Vec<(f64, Pose)> = sample_times(0.0, 1.0, &sampling)?
                .into_iter()
                .map(|t| (t, path.at(t)))
                .collect();
            Ok(samples_csv(&samples))
        }
        Command::Exp { input } => {
            let (items, many) = one_or_many::<VectorDualQuaternion>(&read_text(&input)?, "screw")?;
            if items.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Numeric("screw components must be finite".into()));
            }
            let poses: Vec<Pose> = items.iter().map(screw_exp).collect();
            Ok(if many { to_json(&poses) } else { to_json(&poses[0]) })
        }
        Command::Log { input } => {
            let (items, many) = one_or_many::<Pose>(&read_text(&input)?, "pose")?;
            let logs = items.iter().map(screw_log).collect::<Result<Vec<_>, _>>()?;
            Ok(if many { to_json(&logs) } else { to_json(&logs[0]) })
        }
        Command::Fk { chain, joints } => {
            let chain: SerialChain = input::parse_json(&read_text(&chain)?, "chain")?;
            let pose = chain.forward(&joints)?;
            Ok(to_json(&FkOutput {
                pose,
                translation: pose.translation(),
            }))
        }
        Command::Ik {
            chain,
            target,
            initial,
            tol,
            max_iter,
            damping,
        } => {
            let chain: SerialChain = input::parse_json(&read_text(&chain)?, "chain")?;
            let target: Pose = json_arg(&target, "target pose")?;
            let q0 = initial.unwrap_or_else(|| vec![0.0; chain.dof()]);
            let opts = IkOptions {
                tol,
                max_iter,
                damping,
            };
            let sol = chain.solve_ik(&target, &q0, &opts)?;
            eprintln!("iterations: {}, residual: {:e}", sol.iterations, sol.residual);
            Ok(to_json(&IkOutput {
                joints: sol.joints,
                iterations: sol.iterations,
                residual: sol.residual,
            }))
        }
        Command::Convert { input, to } => {
            let value: serde_json::Value = input::parse_json(&read_text(&input)?, "pose")?;
            let pose = if value.get("matrix").is_some() {
                let m: MatrixForm = serde_json::from_value(value)
                    .map_err(|e| CliError::Input(format!("invalid matrix: {e}")))?;
                Pose::from_matrix(&Matrix4::from_fn(|r, c| m.matrix[r][c]))?
            } else {
                serde_json::from_value(value).map_err(|e| CliError::Input(format!("invalid pose: {e}")))?
            };
            Ok(match to {
                PoseForm::Dq => to_json(&pose),
                PoseForm::Qt => to_json(&QtForm {
                    q: pose.rotation(),
                    t: pose.translation(),
                }),
                PoseForm::Matrix => {
                    let m = pose.to_matrix();
                    to_json(&MatrixForm {
                        matrix: std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)])),
                    })
                }
            })
        }
    }
}

fn report(e: &CliError) {
    let line = serde_json::json!({ "error": e.kind(), "message": e.message() });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.output.clone();
    let result = run(cli).and_then(|text| {
        emit(&text, out.as_deref())
            .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(e.code())
        }
    }
}
