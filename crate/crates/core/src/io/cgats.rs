//! Measurement files in a CGATS-style subset.
//!
//! ```text
//! file        = *( line-end / comment / keyword / format-block / data-block )
//! comment     = *WSP "#" *VCHAR line-end
//! keyword     = name [ 1*WSP value ] line-end       ; stored as metadata
//! format-block= "BEGIN_DATA_FORMAT" line-end *( field-names line-end ) "END_DATA_FORMAT" line-end
//! field-names = name *( 1*WSP name )
//! data-block  = "BEGIN_DATA" line-end *( row line-end ) "END_DATA" line-end
//! row         = token *( 1*WSP token )             ; one token per declared field
//! token       = 1*( VCHAR except DQUOTE ) / DQUOTE *( VCHAR / WSP except DQUOTE ) DQUOTE
//! line-end    = LF / CRLF
//! ```
//!
//! The format must declare `RGB_R RGB_G RGB_B` (0-255) and `LAB_L LAB_A
//! LAB_B`. Any other column is kept per entry as text.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::colorspace::{LabColor, RgbColor};
use crate::testchart::{Measurement, MeasurementSet};

pub const REQUIRED_COLUMNS: [&str; 6] = ["RGB_R", "RGB_G", "RGB_B", "LAB_L", "LAB_A", "LAB_B"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CgatsError {
    #[error("line {line}: data format is missing required column {column}")]
    MissingColumn { line: usize, column: &'static str },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: field {column} is not a number: {value:?}")]
    NotNumeric {
        line: usize,
        column: String,
        value: String,
    },
    #[error("line {line}: field {column} value {value} is outside 0-255")]
    RgbOutOfRange {
        line: usize,
        column: &'static str,
        value: f64,
    },
    #[error("line {line}: {block} block is never closed")]
    Unterminated { line: usize, block: &'static str },
    #[error("line {line}: BEGIN_DATA appears before BEGIN_DATA_FORMAT")]
    DataBeforeFormat { line: usize },
    #[error("line {line}: duplicate column {column}")]
    DuplicateColumn { line: usize, column: String },
    #[error("line {line}: unterminated quoted string")]
    UnterminatedQuote { line: usize },
    #[error("line {line}: file contains no data rows")]
    NoData { line: usize },
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<String>, CgatsError> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let Some(&first) = chars.peek() else {
            return Ok(tokens);
        };
        let mut token = String::new();
        if first == '"' {
            chars.next();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(c) => token.push(c),
                    None => return Err(CgatsError::UnterminatedQuote { line: line_no }),
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                token.push(c);
                chars.next();
            }
        }
        tokens.push(token);
    }
}

enum Section {
    Header,
    Format { start: usize },
    Data { start: usize },
}

pub fn parse_cgats(text: &str) -> Result<MeasurementSet, CgatsError> {
    let mut metadata = BTreeMap::new();
    let mut columns: Vec<String> = Vec::new();
    let mut format_line = 0;
    let mut indices: Option<[usize; 6]> = None;
    let mut entries = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;

    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match section {
            Section::Header => {
                let tokens = tokenize(line, line_no)?;
                match tokens[0].as_str() {
                    "BEGIN_DATA_FORMAT" => {
                        columns.clear();
                        format_line = line_no;
                        section = Section::Format { start: line_no };
                    }
                    "BEGIN_DATA" => {
                        if indices.is_none() {
                            return Err(CgatsError::DataBeforeFormat { line: line_no });
                        }
                        section = Section::Data { start: line_no };
                    }
                    key => {
                        metadata.insert(key.to_string(), tokens[1..].join(" "));
                    }
                }
            }
            Section::Format { .. } => {
                if line == "END_DATA_FORMAT" {
                    indices = Some(resolve_columns(&columns, format_line)?);
                    section = Section::Header;
                } else {
                    for name in tokenize(line, line_no)? {
                        if columns.contains(&name) {
                            return Err(CgatsError::DuplicateColumn {
                                line: line_no,
                                column: name,
                            });
                        }
                        columns.push(name);
                    }
                }
            }
            Section::Data { .. } => {
                if line == "END_DATA" {
                    section = Section::Header;
                    continue;
                }
                let idx = indices.expect("data section requires a resolved format");
                let tokens = tokenize(line, line_no)?;
                entries.push(parse_row(&tokens, &columns, &idx, line_no)?);
            }
        }
    }

    match section {
        Section::Format { start } => Err(CgatsError::Unterminated {
            line: start,
            block: "BEGIN_DATA_FORMAT",
        }),
        Section::Data { start } => Err(CgatsError::Unterminated {
            line: start,
            block: "BEGIN_DATA",
        }),
        Section::Header if entries.is_empty() => Err(CgatsError::NoData { line: last_line }),
        Section::Header => Ok(MeasurementSet::from_parts(entries, metadata)),
    }
}

fn resolve_columns(columns: &[String], line: usize) -> Result<[usize; 6], CgatsError> {
    let mut idx = [0; 6];
    for (slot, column) in idx.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = columns
            .iter()
            .position(|c| c == column)
            .ok_or(CgatsError::MissingColumn { line, column })?;
    }
    Ok(idx)
}

fn parse_row(
    tokens: &[String],
    columns: &[String],
    idx: &[usize; 6],
    line: usize,
) -> Result<Measurement, CgatsError> {
    if tokens.len() != columns.len() {
        return Err(CgatsError::Arity {
            line,
            expected: columns.len(),
            found: tokens.len(),
        });
    }
    let mut values = [0.0; 6];
    for (v, &i) in values.iter_mut().zip(idx) {
        *v = tokens[i]
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CgatsError::NotNumeric {
                line,
                column: columns[i].clone(),
                value: tokens[i].clone(),
            })?;
    }
    for (k, column) in REQUIRED_COLUMNS[..3].iter().enumerate() {
        if !(0.0..=255.0).contains(&values[k]) {
            return Err(CgatsError::RgbOutOfRange {
                line,
                column,
                value: values[k],
            });
        }
    }
    let extras = columns
        .iter()
        .zip(tokens)
        .enumerate()
        .filter(|(i, _)| !idx.contains(i))
        .map(|(_, (c, t))| (c.clone(), t.clone()))
        .collect();
    Ok(Measurement {
        device: RgbColor {
            r: values[0] / 255.0,
            g: values[1] / 255.0,
            b: values[2] / 255.0,
        },
        measured: LabColor::new(values[3], values[4], values[5]),
        extras,
    })
}
