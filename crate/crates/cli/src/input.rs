//! Reading knot files, poses and chains.

use std::fs;
use std::path::Path;

use dualquat::{DualQuaternion, KnotSequence, Pose};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid {what}: {e}")))
}

/// A JSON literal when `arg` starts with `{` or `[`, otherwise a file path.
pub fn json_arg<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        parse_json(trimmed, what)
    } else {
        parse_json(&read_text(Path::new(arg))?, what)
    }
}

/// A single value or a JSON array of them.
pub fn one_or_many<T: DeserializeOwned>(text: &str, what: &str) -> Result<(Vec<T>, bool), CliError> {
    let value: serde_json::Value = parse_json(text, what)?;
    let many = value.is_array();
    let items = if many {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|v| vec![v])
    };
    items
        .map(|v| (v, many))
        .map_err(|e| CliError::Input(format!("invalid {what}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotFile {
    knots: Vec<Knot>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Knot {
    t: f64,
    pose: Pose,
}

#[derive(Deserialize)]
struct KnotRow {
    t: f64,
    qw: f64,
    qx: f64,
    qy: f64,
    qz: f64,
    bw: f64,
    bx: f64,
    by: f64,
    bz: f64,
}

/// JSON `{"knots": [{"t": s, "pose": {...}}, ...]}`, or CSV with columns
/// `t,qw,qx,qy,qz,bw,bx,by,bz` when the file name ends in `.csv`.
pub fn read_knots(path: &Path) -> Result<KnotSequence, CliError> {
    let text = read_text(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let (times, poses) = if is_csv {
        knots_from_csv(&text)?
    } else {
        let file: KnotFile = parse_json(&text, "knot file")?;
        file.knots.into_iter().map(|k| (k.t, k.pose)).unzip()
    };
    Ok(KnotSequence::new(times, poses)?)
}

fn knots_from_csv(text: &str) -> Result<(Vec<f64>, Vec<Pose>), CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut times = Vec::new();
    let mut poses = Vec::new();
    for (i, row) in reader.deserialize::<KnotRow>().enumerate() {
        let r = row.map_err(|e| CliError::Input(format!("invalid knot CSV: {e}")))?;
        let dq = DualQuaternion::from([r.qw, r.qx, r.qy, r.qz, r.bw, r.bx, r.by, r.bz]);
        let pose = Pose::from_dual_quaternion(dq)
            .map_err(|e| CliError::Input(format!("knot row {}: {e}", i + 1)))?;
        times.push(r.t);
        poses.push(pose);
    }
    Ok((times, poses))
}
