use std::io::Read;

use crate::error::{Error, Result};

/// Numeric columns pulled out of a headed CSV stream, with the source line
/// of every row kept for error reporting.
pub(crate) struct NumericTable {
    pub columns: Vec<Vec<f64>>,
    pub lines: Vec<u64>,
}

pub(crate) fn read_columns<R: Read>(source: R, names: &[&str]) -> Result<NumericTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader.headers().map_err(|e| parse_error(&e, 1))?.clone();
    let indices = names
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h.trim_start_matches('\u{feff}') == *name)
                .ok_or_else(|| Error::Validation(format!("missing column `{name}`")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut columns = vec![Vec::new(); names.len()];
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        for (column, (&idx, name)) in columns.iter_mut().zip(indices.iter().zip(names)) {
            let field = record.get(idx).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing field `{name}`"),
            })?;
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{field}` is not a number (column `{name}`)"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite value in column `{name}`"),
                });
            }
            column.push(value);
        }
        lines.push(line);
    }
    Ok(NumericTable { columns, lines })
}

fn parse_error(err: &csv::Error, fallback_line: u64) -> Error {
    let line = err.position().map_or(fallback_line, |p| p.line());
    Error::Parse {
        line,
        message: err.to_string(),
    }
}
