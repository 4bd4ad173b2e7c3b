//! State documents and the Werner witness sweep behind the `polwit` binary.

pub mod document;
pub mod sweep;

pub use document::{parse_state, serialize_state, DocumentError};
pub use sweep::{format_sig, grid, run_sweep, to_csv, SweepConfig, SweepError, SweepRow};
