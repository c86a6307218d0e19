//! Operator documents: `{"blocks":[{"weight":c,"matrix":[[[re,im],…],…]},…]}`,
//! row-major, complex entries as `[re, im]`.

use serde_json::{json, Value};

use super::SchemaError;
use crate::operator::{AlgebraShape, Block, BlockOperator, BlockSpec, C64};

fn err(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.into(), message: message.into() }
}

fn number(v: &Value, path: &str) -> Result<f64, SchemaError> {
    let x = v.as_f64().ok_or_else(|| err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(err(path, "must be finite"));
    }
    Ok(x)
}

pub fn parse_operator(document: &str) -> Result<BlockOperator, SchemaError> {
    let value: Value = serde_json::from_str(document).map_err(|e| err("$", format!("invalid JSON: {e}")))?;
    operator_from_value(&value)
}

pub fn operator_from_value(value: &Value) -> Result<BlockOperator, SchemaError> {
    let blocks = value
        .get("blocks")
        .ok_or_else(|| err("$", "missing field `blocks`"))?
        .as_array()
        .ok_or_else(|| err("$.blocks", "expected an array"))?;
    if blocks.is_empty() {
        return Err(err("$.blocks", "at least one block is required"));
    }
    let mut specs = Vec::with_capacity(blocks.len());
    let mut matrices = Vec::with_capacity(blocks.len());
    for (k, block) in blocks.iter().enumerate() {
        let bp = format!("$.blocks[{k}]");
        let weight = number(block.get("weight").ok_or_else(|| err(&bp, "missing field `weight`"))?, &format!("{bp}.weight"))?;
        if weight <= 0.0 {
            return Err(err(format!("{bp}.weight"), format!("weight {weight} must be positive")));
        }
        let mp = format!("{bp}.matrix");
        let rows = block
            .get("matrix")
            .ok_or_else(|| err(&bp, "missing field `matrix`"))?
            .as_array()
            .ok_or_else(|| err(&mp, "expected an array of rows"))?;
        let dim = rows.len();
        if dim == 0 {
            return Err(err(&mp, "matrix must have at least one row"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            let rp = format!("{mp}[{i}]");
            let row = row.as_array().ok_or_else(|| err(&rp, "expected an array of entries"))?;
            if row.len() != dim {
                return Err(err(&rp, format!("row has {} entries, expected {dim} (square matrix)", row.len())));
            }
            for (j, z) in row.iter().enumerate() {
                let zp = format!("{rp}[{j}]");
                match z.as_array().map(Vec::as_slice) {
                    Some([re, im]) => entries.push(C64::new(number(re, &format!("{zp}[0]"))?, number(im, &format!("{zp}[1]"))?)),
                    _ => return Err(err(&zp, "expected a [re, im] pair")),
                }
            }
        }
        specs.push(BlockSpec { dim, weight });
        matrices.push(Block::from_row_slice(dim, dim, &entries));
    }
    let shape = AlgebraShape::new(specs).map_err(|e| err("$.blocks", e.to_string()))?;
    BlockOperator::new(shape, matrices).map_err(|e| err("$.blocks", e.to_string()))
}

pub fn operator_to_value(x: &BlockOperator) -> Value {
    let blocks: Vec<Value> = x
        .shape()
        .blocks()
        .iter()
        .zip(x.blocks())
        .map(|(spec, m)| {
            let rows: Vec<Value> =
                (0..spec.dim).map(|i| Value::Array((0..spec.dim).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect())).collect();
            json!({ "weight": spec.weight, "matrix": rows })
        })
        .collect();
    json!({ "blocks": blocks })
}

/// Compact JSON; floats use shortest round-trip formatting, so parsing is exact.
pub fn serialize_operator(x: &BlockOperator) -> String {
    operator_to_value(x).to_string()
}
