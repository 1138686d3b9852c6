//! CSV emission with round-trip-stable number formatting.
//!
//! Every table this tool writes parses back through its documented schema
//! and re-emits byte for byte: floats are printed with 17 significant
//! digits, which pins down the exact `f64`, and the fixed scientific layout
//! makes the formatting itself deterministic.

use lamperti_stable::simulate::SamplePath;

use crate::config::CliError;

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_float(cell: &str, line: usize) -> Result<f64, CliError> {
    cell.parse().map_err(|_| {
        CliError::Config(format!("line {line}: not a number: {cell:?}"))
    })
}

fn parse_id(cell: &str, line: usize) -> Result<u64, CliError> {
    cell.parse().map_err(|_| {
        CliError::Config(format!("line {line}: not a path id: {cell:?}"))
    })
}

fn split_line(text: &str, line: usize, want: usize) -> Result<Vec<&str>, CliError> {
    let cells: Vec<&str> = text.split(',').collect();
    if cells.len() != want {
        return Err(CliError::Config(format!(
            "line {line}: expected {want} fields, got {}",
            cells.len()
        )));
    }
    Ok(cells)
}

/// A numeric table under a one-line header, the shape shared by the
/// exponent, density, and scale-function outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub header: String,
    pub rows: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn to_csv(&self) -> String {
        let width = self.header.split(',').count();
        let mut out = String::with_capacity(32 * (self.rows.len() + 1));
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            debug_assert_eq!(row.len(), width, "row width must match the header");
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_float(*x));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| CliError::Config("empty table".into()))?
            .to_string();
        let width = header.split(',').count();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let cells = split_line(line, k + 2, width)?;
            let mut row = Vec::with_capacity(width);
            for cell in cells {
                row.push(parse_float(cell, k + 2)?);
            }
            rows.push(row);
        }
        Ok(NumericTable { header, rows })
    }
}

/// Emits sampled paths in long format, one `path_id,t,x` row per grid time.
pub fn paths_to_long_csv(paths: &[SamplePath]) -> String {
    let mut records = Vec::new();
    for (id, path) in paths.iter().enumerate() {
        for (t, x) in path.times.iter().zip(&path.values) {
            records.push((id as u64, *t, *x));
        }
    }
    long_records_to_csv(&records)
}

/// Emits long-format records; `parse_long_csv` followed by this function is
/// the identity on anything this tool wrote.
pub fn long_records_to_csv(records: &[(u64, f64, f64)]) -> String {
    let mut out = String::with_capacity(48 * (records.len() + 1));
    out.push_str("path_id,t,x\n");
    for (id, t, x) in records {
        out.push_str(&format!("{id},{},{}\n", fmt_float(*t), fmt_float(*x)));
    }
    out
}

/// Parses the long path format back into `(path_id, t, x)` records.
pub fn parse_long_csv(text: &str) -> Result<Vec<(u64, f64, f64)>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some("path_id,t,x") => {}
        other => {
            return Err(CliError::Config(format!(
                "expected header path_id,t,x, got {other:?}"
            )))
        }
    }
    let mut records = Vec::new();
    for (k, line) in lines.enumerate() {
        let cells = split_line(line, k + 2, 3)?;
        records.push((
            parse_id(cells[0], k + 2)?,
            parse_float(cells[1], k + 2)?,
            parse_float(cells[2], k + 2)?,
        ));
    }
    Ok(records)
}

/// Emits sampled paths in wide format: header `t,x1[,x2…]`, one column per
/// path. All paths must share one time grid.
pub fn paths_to_wide_csv(paths: &[SamplePath]) -> Result<String, CliError> {
    let first = paths
        .first()
        .ok_or_else(|| CliError::Config("no paths to write".into()))?;
    for path in paths {
        if path.times != first.times {
            return Err(CliError::Config(
                "wide layout needs a shared time grid across paths".into(),
            ));
        }
    }
    let times = &first.times;
    let columns: Vec<&[f64]> = paths.iter().map(|p| p.values.as_slice()).collect();
    Ok(wide_to_csv(times, &columns))
}

/// Emits a shared time grid and one value column per path.
pub fn wide_to_csv(times: &[f64], columns: &[&[f64]]) -> String {
    let mut out = String::with_capacity(32 * (times.len() + 1) * (columns.len() + 1));
    out.push('t');
    for k in 1..=columns.len() {
        out.push_str(&format!(",x{k}"));
    }
    out.push('\n');
    for (i, t) in times.iter().enumerate() {
        out.push_str(&fmt_float(*t));
        for column in columns {
            out.push(',');
            out.push_str(&fmt_float(column[i]));
        }
        out.push('\n');
    }
    out
}

/// Parses the wide path format back into the time grid and value columns.
pub fn parse_wide_csv(text: &str) -> Result<(Vec<f64>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config("empty table".into()))?;
    let names: Vec<&str> = header.split(',').collect();
    if names.first() != Some(&"t")
        || names.len() < 2
        || names[1..]
            .iter()
            .enumerate()
            .any(|(k, name)| *name != format!("x{}", k + 1))
    {
        return Err(CliError::Config(format!(
            "expected header t,x1[,x2…], got {header:?}"
        )));
    }
    let n_cols = names.len() - 1;
    let mut times = Vec::new();
    let mut columns = vec![Vec::new(); n_cols];
    for (k, line) in lines.enumerate() {
        let cells = split_line(line, k + 2, n_cols + 1)?;
        times.push(parse_float(cells[0], k + 2)?);
        for (column, cell) in columns.iter_mut().zip(&cells[1..]) {
            column.push(parse_float(cell, k + 2)?);
        }
    }
    Ok((times, columns))
}
