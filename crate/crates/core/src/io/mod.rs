//! File formats: operator JSON, the φ mini-language, TOML run configs and CSV records.

mod config;
mod operator_json;
mod phi_spec;
mod records;

pub use config::{BaseSpec, RunConfig};
pub use operator_json::{operator_from_value, operator_to_value, parse_operator, serialize_operator};
pub use phi_spec::parse_phi;
pub use records::{format_float, record_header, record_rows, write_records, write_table, write_table_to};

use thiserror::Error;

/// Malformed input, located by a JSON-path-like `path`.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
}
