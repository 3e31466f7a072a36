//! Run orchestration on disk: configuration files, manifests, diagnostics
//! streams, snapshots, resume and plot-data export.

mod config;
mod export;
mod format;
mod manifest;
mod rundir;
mod sweep;

pub use config::{config_to_string, parse_config, parse_config_str};
pub use export::{export_plotdata, render_export, ExportKind};
pub use format::{
    flux_row_to_csv, fmt17, frame_to_json, parse_flux_row, parse_frame, DIAGNOSTICS_SCHEMA_VERSION,
    FLUX_HEADER, FLUX_SCHEMA_VERSION,
};
pub use manifest::{
    content_checksum, verify_run, RunManifest, SnapshotEntry, StreamEntry, VerifyReport,
    MANIFEST_FILE, MANIFEST_SCHEMA_VERSION,
};
pub use rundir::{
    load_snapshot, load_trajectory, read_flux_rows, read_frames, recompute_diagnostics, resume_dir,
    run_to_dir, DirSink, ResumeOutcome, SNAPSHOT_DIR,
};
pub use sweep::{sweep_to_dir, SweepOutcome};
