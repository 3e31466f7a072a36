use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::format::{flux_row_to_csv, fmt17, FLUX_HEADER};
use super::manifest::RunManifest;
use super::rundir::{read_flux_rows, read_frames};
use crate::error::{Result, SqgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    Energy,
    Flux,
    Criterion,
    Spectrum,
}

impl ExportKind {
    pub const ALL: [ExportKind; 4] = [
        ExportKind::Energy,
        ExportKind::Flux,
        ExportKind::Criterion,
        ExportKind::Spectrum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExportKind::Energy => "energy",
            ExportKind::Flux => "flux",
            ExportKind::Criterion => "criterion",
            ExportKind::Spectrum => "spectrum",
        }
    }
}

impl FromStr for ExportKind {
    type Err = SqgError;
    fn from_str(s: &str) -> Result<Self> {
        ExportKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                SqgError::ConfigValue(format!(
                    "unknown export kind `{s}` (expected energy, flux, criterion or spectrum)"
                ))
            })
    }
}

/// Render the CSV for one export kind. Columns:
///
/// * energy: `t,energy,dissipation_kappa,dissipation_eps,linf`
/// * flux: `t,Q,Pi_Q,term_rQ,term_high,bound,ratio`
/// * criterion: `t,Q,Lambda,resolved,f,f_integral,besov_sll,gronwall_ratio`
/// * spectrum: `t` followed by ‖θ_q‖₂ for q = −1..=q_max
pub fn render_export(dir: &Path, manifest: &RunManifest, kind: ExportKind) -> Result<String> {
    let mut s = String::new();
    match kind {
        ExportKind::Flux => {
            if manifest.flux.is_none() {
                return Err(SqgError::Schema("run has no flux table".into()));
            }
            s.push_str(FLUX_HEADER);
            s.push('\n');
            for r in read_flux_rows(dir, manifest)? {
                s.push_str(&flux_row_to_csv(&r));
                s.push('\n');
            }
        }
        ExportKind::Energy => {
            s.push_str("t,energy,dissipation_kappa,dissipation_eps,linf\n");
            for f in read_frames(dir, manifest)? {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    fmt17(f.t),
                    fmt17(f.energy),
                    fmt17(f.dissipation_kappa),
                    fmt17(f.dissipation_eps),
                    fmt17(f.linf)
                );
            }
        }
        ExportKind::Criterion => {
            s.push_str("t,Q,Lambda,resolved,f,f_integral,besov_sll,gronwall_ratio\n");
            let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
            for f in read_frames(dir, manifest)? {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    fmt17(f.t),
                    f.q,
                    fmt17(f.lambda),
                    f.resolved,
                    fmt17(f.f),
                    fmt17(f.f_integral),
                    opt(f.besov_sll),
                    opt(f.gronwall_ratio)
                );
            }
        }
        ExportKind::Spectrum => {
            let q_max = manifest.config.grid.q_max();
            s.push('t');
            for q in -1..=q_max {
                let _ = write!(s, ",q{q}");
            }
            s.push('\n');
            for f in read_frames(dir, manifest)? {
                s.push_str(&fmt17(f.t));
                for v in &f.shell_l2 {
                    s.push(',');
                    s.push_str(&fmt17(*v));
                }
                s.push('\n');
            }
        }
    }
    Ok(s)
}

/// Write `exports/<kind>.csv` inside the run directory.
pub fn export_plotdata(dir: &Path, kind: ExportKind) -> Result<PathBuf> {
    let manifest = RunManifest::load(dir)?;
    let text = render_export(dir, &manifest, kind)?;
    let out = dir.join("exports");
    fs::create_dir_all(&out).map_err(|e| SqgError::io(&out, e))?;
    let path = out.join(format!("{}.csv", kind.name()));
    fs::write(&path, text).map_err(|e| SqgError::io(&path, e))?;
    Ok(path)
}
