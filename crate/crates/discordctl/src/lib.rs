//! Driver for the `discordctl` binary: state-file parsing, discord reports,
//! protocol sweeps written as CSV, and qudit sampler diagnostics.

pub mod commands;
pub mod csv;
pub mod error;
pub mod state_file;

pub use commands::{cmd_discord, cmd_sample_qudit, run_sweep, Measures, QuditReport, Range, SweepSpec, SweepTarget};
pub use csv::{format_csv, parse_csv, read_csv, write_csv, SweepRow, HEADER};
pub use error::{CtlError, Result};
pub use state_file::{format_state, parse_state_file, parse_state_str, parse_state_text, StateFile};
