//! φ mini-language: `power:<p>[:scale]`, `expm1`, `powerlog:<p>`, `tab:<path>`,
//! or an inline JSON record such as `{"kind":"power","p":2.0}`.
//!
//! A `tab:` file holds either a JSON array of `[u, φ(u)]` pairs or CSV lines `u,φ(u)`.

use std::path::Path;

use super::SchemaError;
use crate::orlicz::OrliczFunction;

fn err(spec: &str, message: impl Into<String>) -> SchemaError {
    SchemaError { path: format!("phi `{spec}`"), message: message.into() }
}

fn parse_number(spec: &str, field: &str, s: &str) -> Result<f64, SchemaError> {
    s.trim().parse::<f64>().map_err(|_| err(spec, format!("{field} `{s}` is not a number")))
}

pub fn parse_phi(spec: &str) -> Result<OrliczFunction, SchemaError> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return serde_json::from_str(spec).map_err(|e| err(spec, e.to_string()));
    }
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let built = match head {
        "expm1" if rest.is_empty() => Ok(OrliczFunction::exp_minus_one()),
        "power" => {
            let mut parts = rest.split(':');
            let p = parse_number(spec, "exponent", parts.next().unwrap_or(""))?;
            let scale = parts.next().map(|s| parse_number(spec, "scale", s)).transpose()?.unwrap_or(1.0);
            if parts.next().is_some() {
                return Err(err(spec, "expected power:<p>[:scale]"));
            }
            OrliczFunction::scaled_power(p, scale)
        }
        "powerlog" => OrliczFunction::power_log(parse_number(spec, "exponent", rest)?),
        "tab" if !rest.is_empty() => return load_table(spec, Path::new(rest)),
        _ => return Err(err(spec, "unknown φ; use power:<p>[:scale], expm1, powerlog:<p>, tab:<path> or inline JSON")),
    };
    built.map_err(|e| err(spec, e.to_string()))
}

fn load_table(spec: &str, path: &Path) -> Result<OrliczFunction, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| err(spec, format!("cannot read {}: {e}", path.display())))?;
    let knots: Vec<[f64; 2]> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| err(spec, e.to_string()))?
    } else {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
        reader
            .records()
            .enumerate()
            // an optional header row such as `u,phi`
            .filter(|(i, rec)| {
                *i > 0 || rec.as_ref().map_or(true, |r| r.iter().all(|f| f.parse::<f64>().is_ok()))
            })
            .map(|(i, rec)| {
                let rec = rec.map_err(|e| err(spec, e.to_string()))?;
                match (rec.get(0), rec.get(1), rec.len()) {
                    (Some(u), Some(v), 2) => Ok([parse_number(spec, "u", u)?, parse_number(spec, "φ(u)", v)?]),
                    _ => Err(err(spec, format!("line {} must hold two values", i + 1))),
                }
            })
            .collect::<Result<_, _>>()?
    };
    OrliczFunction::tabulated(knots).map_err(|e| err(spec, e.to_string()))
}
