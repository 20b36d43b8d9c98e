//! Instance files.
//!
//! A file holds one instance or `{"instances": [...]}`. Each instance is
//! tagged by `model`:
//!
//! ```json
//! {"model": "curve", "f": {"constant": "1", "factors": [["0", 1]]},
//!  "g": {"constant": "1", "factors": [["1", 1]]}}
//! {"model": "surface",
//!  "functions": [{"constant": "1", "xfactors": [["0", 1]], "yfactors": []}, ...],
//!  "curve": {"orientation": "horizontal", "position": "0"}}
//! ```

use std::path::Path;

use parshin_core::curve::TateInstance;
use parshin_core::surface::{SurfaceComponent, SurfaceFunction, SurfaceInstance};
use parshin_core::{FactoredFunction1D, Rat};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Instance {
    Curve(TateInstance),
    Surface(SurfaceInstance),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    constant: Rat,
    #[serde(default)]
    factors: Vec<(Rat, i64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    #[allow(dead_code)]
    model: String,
    f: RawFunction,
    g: RawFunction,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurfaceFunction {
    constant: Rat,
    #[serde(default)]
    xfactors: Vec<(Rat, i64)>,
    #[serde(default)]
    yfactors: Vec<(Rat, i64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    #[allow(dead_code)]
    model: String,
    functions: [RawSurfaceFunction; 3],
    curve: SurfaceComponent,
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value, at: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let field = match (at.is_empty(), path.as_str()) {
            (true, _) => path.clone(),
            (false, ".") => at.to_string(),
            (false, p) => format!("{at}.{p}"),
        };
        CliError::Input(format!("{field}: {}", e.into_inner()))
    })
}

fn invalid(at: String, e: parshin_core::Error) -> CliError {
    CliError::Input(format!("{at}: {e}"))
}

fn one(v: Value, at: &str) -> Result<Instance, CliError> {
    let model = v.get("model").and_then(Value::as_str).map(str::to_owned);
    let at_field = |f: &str| if at.is_empty() { f.to_string() } else { format!("{at}.{f}") };
    match model.as_deref() {
        Some("curve") => {
            let raw: RawCurve = typed(v, at)?;
            let f = FactoredFunction1D::new(raw.f.constant, raw.f.factors).map_err(|e| invalid(at_field("f"), e))?;
            let g = FactoredFunction1D::new(raw.g.constant, raw.g.factors).map_err(|e| invalid(at_field("g"), e))?;
            Ok(Instance::Curve(TateInstance::new(f, g)))
        }
        Some("surface") => {
            let raw: RawSurface = typed(v, at)?;
            let mut fs = Vec::new();
            for (i, f) in raw.functions.into_iter().enumerate() {
                fs.push(
                    SurfaceFunction::new(f.constant, f.xfactors, f.yfactors)
                        .map_err(|e| invalid(at_field(&format!("functions[{i}]")), e))?,
                );
            }
            let functions: [SurfaceFunction; 3] = fs.try_into().expect("three functions");
            Ok(Instance::Surface(SurfaceInstance::new(functions, raw.curve)))
        }
        Some(m) => Err(CliError::Input(format!("{}: unknown model {m:?}", at_field("model")))),
        None => Err(CliError::Input(format!("{}: missing", at_field("model")))),
    }
}

pub fn parse_instances(text: &str) -> Result<Vec<Instance>, CliError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("line {} column {}: {e}", e.line(), e.column())))?;
    match v {
        Value::Object(mut m) if m.contains_key("instances") => match m.remove("instances") {
            Some(Value::Array(items)) => items
                .into_iter()
                .enumerate()
                .map(|(i, item)| one(item, &format!("instances[{i}]")))
                .collect(),
            _ => Err(CliError::Input("instances: expected an array".into())),
        },
        v => Ok(vec![one(v, "")?]),
    }
}

pub fn read_instances(path: &Path) -> Result<Vec<Instance>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_instances(&text)
}

/// A file holding `instances` in the format above.
pub fn instances_document(instances: &[Instance]) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        instances: &'a [Instance],
    }
    serde_json::to_string_pretty(&Doc { instances }).expect("serializable") + "\n"
}
