//! Energy-series CSV, event logs, and the control-file JSON format.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::atomic::write_atomic;
use crate::noise::{Control, ControlFile, PoissonSample};
use crate::solver::{EnergySample, JumpEvent};

/// Columns: `t, h1_sq, cum_h2_sq, jump`.
pub fn write_energy_csv(path: &Path, energy: &[EnergySample]) -> Result<()> {
    let mut out = String::from("t,h1_sq,cum_h2_sq,jump\n");
    for row in energy {
        writeln!(
            out,
            "{},{},{},{}",
            row.t,
            row.h1_sq,
            row.cum_h2_sq,
            u8::from(row.jumped)
        )
        .unwrap();
    }
    write_atomic(path, out.as_bytes())
}

/// Raw sampled point measure, columns `t, mark_index`.
pub fn write_event_csv(path: &Path, sample: &PoissonSample) -> Result<()> {
    let mut out = String::from("t,mark_index\n");
    for ev in &sample.events {
        writeln!(out, "{},{}", ev.time, ev.mark).unwrap();
    }
    write_atomic(path, out.as_bytes())
}

/// Applied jumps with pre/post energies, one JSON object per line.
pub fn write_event_jsonl(path: &Path, events: &[JumpEvent]) -> Result<()> {
    let mut out = String::new();
    for ev in events {
        out.push_str(&serde_json::to_string(ev).expect("event serializes"));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_control_file(path: &Path, control: &Control) -> Result<()> {
    let file = control.to_file_format();
    let mut bytes = serde_json::to_vec_pretty(&file).expect("control serializes");
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn read_control_file(path: &Path) -> Result<Control> {
    let display = path.display().to_string();
    let bytes = fs::read(path).map_err(|e| Error::io(&display, e))?;
    let file: ControlFile = serde_json::from_slice(&bytes)
        .map_err(|e| Error::format(&display, format!("bad control file: {e}")))?;
    Control::from_file_format(&file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_file_round_trip() {
        let g = Control::new(vec![0.0, 0.5, 1.0], vec![vec![2.0, 0.0], vec![1.0, 3.0]])
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        write_control_file(&path, &g).unwrap();
        let back = read_control_file(&path).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn negative_control_entry_is_rejected_with_cell() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        fs::write(
            &path,
            r#"{"time_grid":[0.0,1.0],"marks":2,"values":[[1.0,-0.25]]}"#,
        )
        .unwrap();
        let err = read_control_file(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("interval 0"), "{msg}");
        assert!(msg.contains("mark 1"), "{msg}");
    }

    #[test]
    fn energy_csv_is_written_deterministically() {
        let rows = vec![
            EnergySample {
                t: 0.0,
                h1_sq: 1.5,
                h2_sq: 2.0,
                cum_h2_sq: 0.0,
                jumped: false,
            },
            EnergySample {
                t: 0.1,
                h1_sq: 1.25,
                h2_sq: 1.5,
                cum_h2_sq: 0.175,
                jumped: true,
            },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("energy.csv");
        write_energy_csv(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "t,h1_sq,cum_h2_sq,jump\n0,1.5,0,0\n0.1,1.25,0.175,1\n");
    }
}
