//! Config file loading and flag overlay.
//!
//! A config file is a flat JSON object: the potential fields at top level,
//! plus optional `grid`, `tolerances`, `output_dir`, `backend` and
//! `convention`. Flags win over file values; the output directory falls
//! back to `MORSE_DK_OUTPUT_DIR`, then to the working directory.

use std::fs;
use std::path::{Path, PathBuf};

use morse_dk_core::model::{PotentialSpec, Variant};
use morse_dk_core::oracle::Grid;
use morse_dk_core::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{config, CliError};

pub const OUTPUT_DIR_ENV: &str = "MORSE_DK_OUTPUT_DIR";

const SPEC_KEYS: [&str; 9] = ["variant", "V1", "V2", "alpha", "mass", "A", "B", "C", "origin_shift"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub abs_gap: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs_gap: 1e-6,
            residual: 1e-6,
        }
    }
}

/// Everything read from a config file, before flags are applied.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub spec: Map<String, Value>,
    pub grid: GridConfig,
    pub tolerances: Option<Tolerances>,
    pub output_dir: Option<PathBuf>,
    pub backend: Option<String>,
    pub convention: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| config(format!("invalid JSON: {e}")))?;
        let Value::Object(mut obj) = value else {
            return Err(config("config must be a JSON object"));
        };
        let mut out = ConfigFile::default();
        if let Some(g) = obj.remove("grid") {
            out.grid = serde_json::from_value(g).map_err(|e| config(format!("field `grid`: {e}")))?;
        }
        if let Some(t) = obj.remove("tolerances") {
            out.tolerances = Some(serde_json::from_value(t).map_err(|e| config(format!("field `tolerances`: {e}")))?);
        }
        out.output_dir = take_string(&mut obj, "output_dir")?.map(PathBuf::from);
        out.backend = take_string(&mut obj, "backend")?;
        out.convention = take_string(&mut obj, "convention")?;
        for (key, value) in obj {
            if !SPEC_KEYS.contains(&key.as_str()) {
                return Err(config(format!("unknown field `{key}`")));
            }
            let value = match key.as_str() {
                "V1" | "V2" => normalize_complex(&key, value)?,
                _ => value,
            };
            out.spec.insert(key, value);
        }
        Ok(out)
    }
}

fn take_string(obj: &mut Map<String, Value>, key: &str) -> Result<Option<String>, CliError> {
    match obj.remove(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s)),
        Some(_) => Err(config(format!("field `{key}`: expected a string"))),
    }
}

// number or [re, im]
fn normalize_complex(key: &str, value: Value) -> Result<Value, CliError> {
    match &value {
        Value::Number(n) => Ok(Value::from(vec![n.as_f64().unwrap_or(f64::NAN), 0.0])),
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => Ok(value),
        _ => Err(config(format!("field `{key}`: expected a number or [re, im]"))),
    }
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

/// Potential fields given on the command line.
#[derive(Debug, Clone, Default)]
pub struct SpecOverrides {
    pub variant: Option<String>,
    pub mass: Option<f64>,
    pub alpha: Option<f64>,
    pub v1: Option<Complex>,
    pub v2: Option<Complex>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub origin_shift: Option<f64>,
}

/// Builds the potential from file fields with flags layered on top.
pub fn resolve_spec(file: &Map<String, Value>, flags: &SpecOverrides) -> Result<PotentialSpec, CliError> {
    let mut m = file.clone();
    let mut set = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.to_owned(), v);
        }
    };
    set("variant", flags.variant.clone().map(Value::from));
    set("mass", flags.mass.map(Value::from));
    set("alpha", flags.alpha.map(Value::from));
    set("V1", flags.v1.map(|z| Value::from(vec![z.re, z.im])));
    set("V2", flags.v2.map(|z| Value::from(vec![z.re, z.im])));
    set("A", flags.a.map(Value::from));
    set("B", flags.b.map(Value::from));
    set("C", flags.c.map(Value::from));
    set("origin_shift", flags.origin_shift.map(Value::from));

    let variant = match m.get("variant") {
        None => return Err(config("field `variant`: is required")),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(config("field `variant`: expected a string")),
    };
    variant
        .parse::<Variant>()
        .map_err(|e| config(format!("field `variant`: {e}")))?;
    if !m.contains_key("mass") {
        return Err(config("field `mass`: is required"));
    }
    serde_json::from_value(Value::Object(m)).map_err(|e| config(strip_position(&e.to_string())))
}

// serde_json appends " at line 0 column 0" for value-level errors
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_owned(),
        None => msg.to_owned(),
    }
}

/// The oracle grid: the spec default with any configured bounds applied.
pub fn resolve_grid(spec: &PotentialSpec, g: GridConfig) -> Result<Grid, CliError> {
    let base = match g.n_points {
        Some(n) => Grid::default_with_points(spec, n),
        None => Grid::default_for(spec),
    };
    Grid::new(
        g.x_min.unwrap_or(base.x_min()),
        g.x_max.unwrap_or(base.x_max()),
        g.n_points.unwrap_or(base.n_points()),
    )
    .map_err(|e| config(format!("field `grid`: {e}")))
}

/// Flag, then file, then environment, then `.`.
pub fn resolve_output_dir(flag: Option<&Path>, file: Option<&Path>) -> PathBuf {
    if let Some(p) = flag.or(file) {
        return p.to_owned();
    }
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from("."),
    }
}
