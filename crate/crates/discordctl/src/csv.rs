//! Sweep table output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CtlError, Result};

pub const HEADER: &str = "param,entropic_discord,geometric_discord,concurrence,success_prob,theta_opt,phi_opt";

const COLUMNS: usize = 7;

/// One sweep point. `None` fields are written as empty cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub entropic_discord: Option<f64>,
    pub geometric_discord: Option<f64>,
    pub concurrence: Option<f64>,
    pub success_prob: Option<f64>,
    pub theta_opt: Option<f64>,
    pub phi_opt: Option<f64>,
}

/// Nine significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.8e}")
}

fn cell(out: &mut String, x: Option<f64>) {
    out.push(',');
    if let Some(x) = x {
        out.push_str(&format_number(x));
    }
}

pub fn format_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity((rows.len() + 1) * 120);
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{}", format_number(r.param));
        cell(&mut out, r.entropic_discord);
        cell(&mut out, r.geometric_discord);
        cell(&mut out, r.concurrence);
        cell(&mut out, r.success_prob);
        cell(&mut out, r.theta_opt);
        cell(&mut out, r.phi_opt);
        out.push('\n');
    }
    out
}

pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    std::fs::write(path, format_csv(rows)).map_err(|source| CtlError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_cell(tok: &str, line: usize, column: &str) -> Result<Option<f64>> {
    if tok.is_empty() {
        return Ok(None);
    }
    tok.parse::<f64>()
        .map(Some)
        .map_err(|_| CtlError::parse(line, format!("invalid {column} '{tok}'")))
}

/// Reads a table produced by [`format_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(CtlError::parse(1, "missing or unexpected header")),
    }
    let names: Vec<&str> = HEADER.split(',').collect();
    let mut rows = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != COLUMNS {
            return Err(CtlError::parse(
                line,
                format!("expected {COLUMNS} fields, got {}", fields.len()),
            ));
        }
        let mut vals = [None; COLUMNS];
        for (k, tok) in fields.iter().enumerate() {
            vals[k] = parse_cell(tok, line, names[k])?;
        }
        let param = vals[0].ok_or_else(|| CtlError::parse(line, "empty param"))?;
        rows.push(SweepRow {
            param,
            entropic_discord: vals[1],
            geometric_discord: vals[2],
            concurrence: vals[3],
            success_prob: vals[4],
            theta_opt: vals[5],
            phi_opt: vals[6],
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path).map_err(|source| CtlError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text)
}
