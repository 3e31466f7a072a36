//! A run directory holds `manifest.json`, `config.txt`, the diagnostics
//! stream `diagnostics.jsonl`, the flux table `flux.csv` and binary
//! snapshots under `snapshots/`.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::config_to_string;
use super::format::{flux_row_to_csv, frame_to_json, parse_flux_row, parse_frame, FLUX_HEADER};
use super::manifest::{content_checksum, now_unix, RunManifest, SnapshotEntry};
use crate::error::{Result, SqgError};
use crate::flux::FluxRow;
use crate::frame::{DiagnosticsFrame, FrameBuilder};
use crate::solver::{
    make_initial, resume_from, run_with, ResumePoint, RunOptions, RunSink, RunStatus, Sample,
    SolverConfig, Trajectory,
};
use crate::spectral::{snapshot, ScalarField};

pub const SNAPSHOT_DIR: &str = "snapshots";

fn snapshot_name(step: u64) -> String {
    format!("{SNAPSHOT_DIR}/snap_{step:08}.sqgf")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| SqgError::io(path, e))
}

fn append(path: &Path) -> Result<BufWriter<File>> {
    OpenOptions::new()
        .append(true)
        .open(path)
        .map(BufWriter::new)
        .map_err(|e| SqgError::io(path, e))
}

/// Streams a run into its directory. The manifest is rewritten after every
/// snapshot, so an interrupted run leaves a resumable record.
pub struct DirSink {
    dir: PathBuf,
    manifest: RunManifest,
    diag: BufWriter<File>,
    flux: Option<BufWriter<File>>,
}

impl DirSink {
    fn write_line(w: &mut BufWriter<File>, path: &Path, line: &str) -> Result<()> {
        writeln!(w, "{line}").map_err(|e| SqgError::io(path, e))
    }

    fn flush(&mut self) -> Result<()> {
        let p = self.dir.join(&self.manifest.diagnostics.path);
        self.diag.flush().map_err(|e| SqgError::io(&p, e))?;
        if let (Some(w), Some(entry)) = (self.flux.as_mut(), self.manifest.flux.as_ref()) {
            let p = self.dir.join(&entry.path);
            w.flush().map_err(|e| SqgError::io(&p, e))?;
        }
        Ok(())
    }

    fn finish(mut self, traj: &Trajectory) -> Result<RunManifest> {
        self.flush()?;
        let m = &mut self.manifest;
        m.status = traj.status;
        m.blow_up = traj.blow_up.clone();
        for w in &traj.warnings {
            if !m.warnings.contains(w) {
                m.warnings.push(w.clone());
            }
        }
        m.finished_unix = Some(now_unix());
        let hash = |rel: &str| -> Result<String> {
            let p = self.dir.join(rel);
            Ok(content_checksum(
                &fs::read(&p).map_err(|e| SqgError::io(&p, e))?,
            ))
        };
        m.diagnostics.checksum = Some(hash(&m.diagnostics.path)?);
        if let Some(f) = m.flux.as_mut() {
            f.checksum = Some(hash(&f.path)?);
        }
        m.store(&self.dir)?;
        Ok(self.manifest)
    }
}

impl RunSink for DirSink {
    fn on_frame(&mut self, frame: &DiagnosticsFrame, flux: &[FluxRow]) -> Result<()> {
        let p = self.dir.join(&self.manifest.diagnostics.path);
        Self::write_line(&mut self.diag, &p, &frame_to_json(frame))?;
        if let (Some(w), Some(entry)) = (self.flux.as_mut(), self.manifest.flux.as_ref()) {
            let p = self.dir.join(&entry.path);
            for r in flux {
                Self::write_line(w, &p, &flux_row_to_csv(r))?;
            }
        }
        Ok(())
    }

    fn on_snapshot(&mut self, sample: &Sample) -> Result<()> {
        let rel = snapshot_name(sample.step);
        let bytes = snapshot::write(&self.dir.join(&rel), &sample.field)?;
        self.manifest.snapshots.retain(|s| s.step != sample.step);
        self.manifest.snapshots.push(SnapshotEntry {
            step: sample.step,
            t: sample.t,
            path: rel,
            checksum: content_checksum(&bytes),
        });
        self.flush()?;
        self.manifest.store(&self.dir)
    }
}

/// Run `cfg` and persist every output under `dir`.
pub fn run_to_dir(
    cfg: &SolverConfig,
    dir: &Path,
    opts: &RunOptions,
) -> Result<(Trajectory, RunManifest)> {
    cfg.validate()?;
    fs::create_dir_all(dir.join(SNAPSHOT_DIR)).map_err(|e| SqgError::io(dir, e))?;
    let theta0 = make_initial(&cfg.ic, cfg.grid)?;
    let schedule = cfg.schedule(&theta0);
    let manifest = RunManifest::new(
        cfg.clone(),
        schedule,
        FrameBuilder::new(cfg).besov_parameters(),
    );
    let cfg_path = dir.join("config.txt");
    fs::write(&cfg_path, config_to_string(cfg)).map_err(|e| SqgError::io(&cfg_path, e))?;
    let diag = create(&dir.join(&manifest.diagnostics.path))?;
    let flux = match &manifest.flux {
        Some(entry) => {
            let p = dir.join(&entry.path);
            let mut w = create(&p)?;
            DirSink::write_line(&mut w, &p, FLUX_HEADER)?;
            Some(w)
        }
        None => None,
    };
    let mut sink = DirSink {
        dir: dir.to_path_buf(),
        manifest,
        diag,
        flux,
    };
    sink.manifest.store(dir)?;
    let traj = run_with(cfg, opts, &mut [&mut sink])?;
    let manifest = sink.finish(&traj)?;
    Ok((traj, manifest))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let f = File::open(path).map_err(|e| SqgError::io(path, e))?;
    BufReader::new(f)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| SqgError::io(path, e))
}

fn check_snapshot(dir: &Path, s: &SnapshotEntry) -> Result<Vec<u8>> {
    let path = dir.join(&s.path);
    let bytes = fs::read(&path).map_err(|_| SqgError::Corruption {
        path: path.clone(),
        reason: "snapshot is missing".into(),
    })?;
    let got = content_checksum(&bytes);
    if got != s.checksum {
        return Err(SqgError::Corruption {
            path,
            reason: format!("checksum {got} does not match recorded {}", s.checksum),
        });
    }
    Ok(bytes)
}

/// Read and checksum-verify one snapshot, returning it in canonical form.
pub fn load_snapshot(dir: &Path, m: &RunManifest, s: &SnapshotEntry) -> Result<Sample> {
    let bytes = check_snapshot(dir, s)?;
    let field = snapshot::decode(&bytes, m.config.grid.dealias_fraction())?;
    Ok(Sample {
        step: s.step,
        t: s.t,
        field: ScalarField::from_band_values(m.config.grid, field.into_values())?,
    })
}

pub fn read_frames(dir: &Path, m: &RunManifest) -> Result<Vec<DiagnosticsFrame>> {
    read_lines(&dir.join(&m.diagnostics.path))?
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_frame(l))
        .collect()
}

pub fn read_flux_rows(dir: &Path, m: &RunManifest) -> Result<Vec<FluxRow>> {
    let Some(entry) = &m.flux else {
        return Ok(Vec::new());
    };
    let lines = read_lines(&dir.join(&entry.path))?;
    match lines.first() {
        Some(h) if h == FLUX_HEADER => {}
        _ => {
            return Err(SqgError::Schema(format!(
                "{} lacks the flux header",
                entry.path
            )))
        }
    }
    lines[1..]
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_flux_row(l))
        .collect()
}

/// Rebuild a trajectory from disk; `with_samples` also loads every snapshot.
pub fn load_trajectory(dir: &Path, with_samples: bool) -> Result<Trajectory> {
    let m = RunManifest::load(dir)?;
    let samples = if with_samples {
        m.snapshots
            .iter()
            .map(|s| load_snapshot(dir, &m, s))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(Trajectory {
        frames: read_frames(dir, &m)?,
        flux_rows: read_flux_rows(dir, &m)?,
        samples,
        config: m.config.clone(),
        schedule: m.schedule,
        status: m.status,
        blow_up: m.blow_up.clone(),
        warnings: m.warnings.clone(),
    })
}

#[derive(Debug)]
pub enum ResumeOutcome {
    /// The run had already completed; nothing was done.
    AlreadyComplete(RunManifest),
    Resumed(Box<Trajectory>, RunManifest),
}

/// Continue an interrupted run from its last checksummed snapshot. Streams are
/// cut back to that snapshot first, so the result matches an uninterrupted
/// run byte for byte apart from wall-clock fields.
pub fn resume_dir(dir: &Path, opts: &RunOptions) -> Result<ResumeOutcome> {
    let mut m = RunManifest::load(dir)?;
    match m.status {
        RunStatus::Completed => return Ok(ResumeOutcome::AlreadyComplete(m)),
        RunStatus::Aborted => {}
        other => {
            return Err(SqgError::Schema(format!(
                "a run with status `{}` cannot be resumed",
                other.as_str()
            )))
        }
    }
    for s in &m.snapshots {
        check_snapshot(dir, s)?;
    }
    let last = m
        .snapshots
        .iter()
        .max_by_key(|s| s.step)
        .cloned()
        .ok_or_else(|| SqgError::Schema("no snapshot to resume from".into()))?;
    let start = load_snapshot(dir, &m, &last)?;

    let diag_path = dir.join(&m.diagnostics.path);
    let kept_lines: Vec<String> = read_lines(&diag_path)?
        .into_iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_frame(&l).map(|f| (f.step <= last.step, l)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(keep, l)| keep.then_some(l))
        .collect();
    let kept: Vec<DiagnosticsFrame> = kept_lines
        .iter()
        .map(|l| parse_frame(l))
        .collect::<Result<_>>()?;
    let (Some(first), Some(last_frame)) = (kept.first(), kept.last()) else {
        return Err(SqgError::Schema("diagnostics stream is empty".into()));
    };
    if last_frame.step != last.step {
        return Err(SqgError::Schema(format!(
            "no diagnostics frame at snapshot step {}",
            last.step
        )));
    }
    let mut text = kept_lines.join("\n");
    text.push('\n');
    fs::write(&diag_path, text).map_err(|e| SqgError::io(&diag_path, e))?;

    let mut kept_rows = Vec::new();
    if let Some(entry) = &m.flux {
        let p = dir.join(&entry.path);
        let mut out = format!("{FLUX_HEADER}\n");
        for l in read_lines(&p)?
            .iter()
            .skip(1)
            .filter(|l| !l.trim().is_empty())
        {
            let row = parse_flux_row(l)?;
            if row.t <= last.t {
                out.push_str(l);
                out.push('\n');
                kept_rows.push(row);
            }
        }
        fs::write(&p, out).map_err(|e| SqgError::io(&p, e))?;
    }

    m.snapshots.retain(|s| s.step <= last.step);
    m.diagnostics.checksum = None;
    if let Some(f) = m.flux.as_mut() {
        f.checksum = None;
    }
    m.finished_unix = None;
    let cfg = m.config.clone();
    let point = ResumePoint {
        step: last.step,
        field: start.field,
        builder: FrameBuilder::resume(&cfg, first, last_frame),
    };
    let mut sink = DirSink {
        diag: append(&diag_path)?,
        flux: match &m.flux {
            Some(entry) => Some(append(&dir.join(&entry.path))?),
            None => None,
        },
        dir: dir.to_path_buf(),
        manifest: m,
    };
    let mut rest = resume_from(&cfg, opts, point, &mut [&mut sink])?;
    let manifest = sink.finish(&rest)?;
    let mut frames = kept;
    frames.append(&mut rest.frames);
    rest.frames = frames;
    kept_rows.append(&mut rest.flux_rows);
    rest.flux_rows = kept_rows;
    Ok(ResumeOutcome::Resumed(Box::new(rest), manifest))
}

/// Recompute diagnostics from the stored snapshots alone and write them to
/// `diag/diagnostics.jsonl` and `diag/flux.csv`. The time integral of f uses
/// the snapshot cadence.
pub fn recompute_diagnostics(dir: &Path) -> Result<Trajectory> {
    let mut traj = load_trajectory(dir, true)?;
    let out = dir.join("diag");
    fs::create_dir_all(&out).map_err(|e| SqgError::io(&out, e))?;
    let mut builder = FrameBuilder::new(&traj.config);
    let mut frames = Vec::new();
    let mut rows = Vec::new();
    for s in &traj.samples {
        let (f, r) = builder.frame(s.step, s.t, &s.field)?;
        frames.push(f);
        rows.extend(r);
    }
    let mut jsonl = String::new();
    for f in &frames {
        jsonl.push_str(&frame_to_json(f));
        jsonl.push('\n');
    }
    let p = out.join("diagnostics.jsonl");
    fs::write(&p, jsonl).map_err(|e| SqgError::io(&p, e))?;
    let mut csv = format!("{FLUX_HEADER}\n");
    for r in &rows {
        csv.push_str(&flux_row_to_csv(r));
        csv.push('\n');
    }
    let p = out.join("flux.csv");
    fs::write(&p, csv).map_err(|e| SqgError::io(&p, e))?;
    traj.frames = frames;
    traj.flux_rows = rows;
    Ok(traj)
}
