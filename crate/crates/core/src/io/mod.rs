//! File formats: `.sfld` field snapshots (JSON header + little-endian
//! coefficient pairs), energy-series CSV, event logs (CSV and JSONL),
//! control files, and atomic writes.

mod atomic;
mod sfld;
mod series;

pub use atomic::write_atomic;
pub use series::{
    read_control_file, write_control_file, write_energy_csv, write_event_csv, write_event_jsonl,
};
pub use sfld::{read_sfld, write_sfld, SfldHeader};
