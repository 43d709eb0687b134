//! Field files and the output directory.
//!
//! A field file holds one record per point: three real coordinates followed
//! by the real and imaginary parts of the three components. The binary
//! variant stores little-endian f64 values back to back (72 bytes per
//! record); the text variant writes one record per line with 17 significant
//! digits.

use crate::error::CliError;
use clap::ValueEnum;
use halfspace::linalg::Vec3;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Binary,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Binary => "binary",
            Format::Text => "text",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Binary => "bin",
            Format::Text => "txt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Record {
    pub point: [f64; 3],
    pub value: Vec3,
}

impl Record {
    fn reals(&self) -> [f64; 9] {
        let [p0, p1, p2] = self.point;
        let [a, b, c] = self.value;
        [p0, p1, p2, a.re, a.im, b.re, b.im, c.re, c.im]
    }
}

pub fn encode(records: &[Record], format: Format) -> Vec<u8> {
    match format {
        Format::Binary => {
            let mut out = Vec::with_capacity(records.len() * 72);
            for r in records {
                for v in r.reals() {
                    out.extend_from_slice(&v.to_le_bytes());
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in records {
                let line: Vec<String> = r.reals().iter().map(|v| format!("{v:.16e}")).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// Inverse of [`encode`].
#[cfg(test)]
pub fn decode(bytes: &[u8], format: Format) -> Result<Vec<[f64; 9]>, CliError> {
    let bad = |what: &str| CliError::Parse(format!("malformed field file: {what}"));
    match format {
        Format::Binary => {
            if bytes.len() % 72 != 0 {
                return Err(bad("length is not a multiple of 72 bytes"));
            }
            Ok(bytes
                .chunks_exact(72)
                .map(|rec| std::array::from_fn(|k| f64::from_le_bytes(rec[8 * k..8 * k + 8].try_into().expect("8 bytes"))))
                .collect())
        }
        Format::Text => {
            let text = std::str::from_utf8(bytes).map_err(|_| bad("not UTF-8"))?;
            text.lines()
                .map(|line| {
                    let v: Vec<f64> = line.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| bad("bad number"))?;
                    v.try_into().map_err(|_| bad("record without 9 values"))
                })
                .collect()
        }
    }
}

/// Creates `dir` and writes every file. Nothing is written before this
/// point, so failed runs leave no output behind.
pub fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for (name, bytes) in files {
        std::fs::write(dir.join(name), bytes)?;
    }
    Ok(())
}
