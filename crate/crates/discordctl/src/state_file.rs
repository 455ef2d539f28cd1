//! Plain-text sparse density-matrix format.
//!
//! ```text
//! # Bell state
//! dims 2 2
//! 0 0 0.5 0
//! 0 3 0.5 0
//! 3 3 0.5 0
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. The first remaining
//! line declares the subsystem dimensions; every following line is
//! `row col re im` with 0-based joint indices. Missing entries are zero, and
//! an off-diagonal entry whose transpose is absent gets its conjugate there.
//! Repeating a `(row, col)` pair is an error.

use std::collections::BTreeMap;
use std::path::Path;

use qdiscord::densmat::{as_density, c, ComplexMatrix, DensityMatrix, C64};

use crate::error::{CtlError, Result};

/// Largest joint dimension accepted (two subsystems of dimension 8).
pub const MAX_JOINT_DIM: usize = 64;

/// Raw contents of a state file before validation.
#[derive(Clone, Debug, PartialEq)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: ComplexMatrix,
}

fn parse_number<T: std::str::FromStr>(tok: &str, what: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| CtlError::parse(line, format!("invalid {what} '{tok}'")))
}

/// Parses the text format without checking density-matrix invariants.
pub fn parse_state_text(text: &str) -> Result<StateFile> {
    let mut dims: Option<Vec<usize>> = None;
    let mut entries: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let Some(dims) = dims.as_ref() else {
            if tokens[0] != "dims" {
                return Err(CtlError::parse(line, "expected 'dims d1 d2' before any entry"));
            }
            if tokens.len() < 2 {
                return Err(CtlError::parse(line, "'dims' needs at least one dimension"));
            }
            let parsed = tokens[1..]
                .iter()
                .map(|t| parse_number::<usize>(t, "dimension", line))
                .collect::<Result<Vec<_>>>()?;
            let mut joint: usize = 1;
            for &d in &parsed {
                if d == 0 {
                    return Err(CtlError::parse(line, "dimensions must be positive"));
                }
                joint = joint.saturating_mul(d);
            }
            if joint > MAX_JOINT_DIM {
                return Err(CtlError::parse(
                    line,
                    format!("joint dimension {joint} exceeds {MAX_JOINT_DIM}"),
                ));
            }
            dims = Some(parsed);
            continue;
        };
        if tokens.len() != 4 {
            return Err(CtlError::parse(
                line,
                format!("expected 'row col re im', got {} fields", tokens.len()),
            ));
        }
        let n: usize = dims.iter().product();
        let row: usize = parse_number(tokens[0], "row index", line)?;
        let col: usize = parse_number(tokens[1], "column index", line)?;
        let re: f64 = parse_number(tokens[2], "real part", line)?;
        let im: f64 = parse_number(tokens[3], "imaginary part", line)?;
        if row >= n || col >= n {
            return Err(CtlError::parse(
                line,
                format!("index ({row}, {col}) out of range for dimension {n}"),
            ));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(CtlError::parse(line, "entries must be finite"));
        }
        if entries.insert((row, col), c(re, im)).is_some() {
            return Err(CtlError::parse(line, format!("duplicate entry ({row}, {col})")));
        }
    }
    let dims = dims.ok_or_else(|| CtlError::parse(last_line.max(1), "missing 'dims' line"))?;
    let n: usize = dims.iter().product();
    let mut matrix = ComplexMatrix::zeros(n);
    for (&(row, col), &z) in &entries {
        matrix.set(row, col, z);
        if row != col && !entries.contains_key(&(col, row)) {
            matrix.set(col, row, z.conj());
        }
    }
    Ok(StateFile { dims, matrix })
}

/// Parses and validates a state at tolerance `tol`.
pub fn parse_state_str(text: &str, tol: f64) -> Result<DensityMatrix> {
    let file = parse_state_text(text)?;
    Ok(as_density(&file.matrix, &file.dims, tol)?)
}

pub fn parse_state_file(path: &Path, tol: f64) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| CtlError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state_str(&text, tol)
}

/// Serializes a state in the same format, listing the upper triangle only.
pub fn format_state(rho: &DensityMatrix) -> String {
    let mut out = String::from("dims");
    for d in rho.dims() {
        out.push_str(&format!(" {d}"));
    }
    out.push('\n');
    let m = rho.matrix();
    for i in 0..m.dim() {
        for j in i..m.dim() {
            let z = m.get(i, j);
            if z.re != 0.0 || z.im != 0.0 {
                out.push_str(&format!("{i} {j} {:e} {:e}\n", z.re, z.im));
            }
        }
    }
    out
}
