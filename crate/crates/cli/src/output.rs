use std::fs;
use std::io::Write;
use std::path::Path;

use cfml_core::{Float, Rational};
use serde::Serialize;

use crate::config::CliError;

pub enum Body {
    Csv(Vec<u8>),
    Json(String),
}

pub struct Outcome {
    pub body: Body,
    pub summary: String,
}

/// CSV writer over an in-memory buffer.
pub struct Table(csv::Writer<Vec<u8>>);

impl Table {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(csv_err)?;
        Ok(Table(w))
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.0.write_record(fields).map_err(csv_err)
    }

    pub fn finish(self) -> Result<Body, CliError> {
        let bytes = self.0.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        Ok(Body::Csv(bytes))
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

pub fn json<T: Serialize>(v: &T) -> Result<Body, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(Body::Json(s))
}

/// Shortest decimal that parses back to the same `f64`.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

/// All significant digits of a high-precision value.
pub fn big(x: &Float) -> String {
    x.to_string_radix(10, None)
}

pub fn ratio(x: &Rational) -> String {
    x.to_string()
}

pub fn emit(body: &Body, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = match body {
        Body::Csv(b) => b.as_slice(),
        Body::Json(s) => s.as_bytes(),
    };
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Output(e.to_string())),
    }
}
