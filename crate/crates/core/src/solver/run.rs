use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{Schedule, SolverConfig};
use super::initial::make_initial;
use super::stepper::{BlowUpReport, Stepper, RESOLUTION_LOSS_FRACTION};
use crate::error::Result;
use crate::flux::FluxRow;
use crate::frame::{DiagnosticsFrame, FrameBuilder};
use crate::spectral::{lp_norm, ScalarField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BlownUp,
    Unresolved,
    Aborted,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::BlownUp => "blown_up",
            RunStatus::Unresolved => "unresolved",
            RunStatus::Aborted => "aborted",
        }
    }
}

/// A stored state. `field` carries the exact values written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub step: u64,
    pub t: f64,
    pub field: ScalarField,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: SolverConfig,
    pub schedule: Schedule,
    pub frames: Vec<DiagnosticsFrame>,
    /// Snapshots held in memory (empty unless requested).
    pub samples: Vec<Sample>,
    pub flux_rows: Vec<FluxRow>,
    pub status: RunStatus,
    pub blow_up: Option<BlowUpReport>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).collect()
    }

    pub fn last_sample(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn sample_at_step(&self, step: u64) -> Option<&Sample> {
        self.samples.iter().find(|s| s.step == step)
    }
}

/// Receivers of the output streams of a run.
pub trait RunSink {
    fn on_frame(&mut self, _frame: &DiagnosticsFrame, _flux: &[FluxRow]) -> Result<()> {
        Ok(())
    }
    fn on_snapshot(&mut self, _sample: &Sample) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Keep snapshot fields in `Trajectory::samples`.
    pub keep_samples: bool,
    /// Stop after this step as if interrupted; the run is marked aborted.
    pub stop_after: Option<u64>,
}

/// Where a resumed run picks up: the canonical state at a snapshot step and
/// a frame builder positioned after the frame at that step.
pub struct ResumePoint {
    pub step: u64,
    pub field: ScalarField,
    pub builder: FrameBuilder,
}

pub fn run(cfg: &SolverConfig, sinks: &mut [&mut dyn RunSink]) -> Result<Trajectory> {
    run_with(cfg, &RunOptions::default(), sinks)
}

pub fn run_with(
    cfg: &SolverConfig,
    opts: &RunOptions,
    sinks: &mut [&mut dyn RunSink],
) -> Result<Trajectory> {
    cfg.validate()?;
    let theta0 = make_initial(&cfg.ic, cfg.grid)?;
    let schedule = cfg.schedule(&theta0);
    drive(cfg, schedule, opts, Start::Fresh(theta0), sinks)
}

/// Continue a run from a stored snapshot.
pub fn resume_from(
    cfg: &SolverConfig,
    opts: &RunOptions,
    point: ResumePoint,
    sinks: &mut [&mut dyn RunSink],
) -> Result<Trajectory> {
    cfg.validate()?;
    let theta0 = make_initial(&cfg.ic, cfg.grid)?;
    let schedule = cfg.schedule(&theta0);
    drive(cfg, schedule, opts, Start::Resume(point), sinks)
}

enum Start {
    Fresh(ScalarField),
    Resume(ResumePoint),
}

struct Driver<'a, 'b> {
    cfg: &'a SolverConfig,
    schedule: Schedule,
    opts: &'a RunOptions,
    builder: FrameBuilder,
    traj: Trajectory,
    sinks: &'a mut [&'b mut dyn RunSink],
}

impl Driver<'_, '_> {
    fn is_snapshot(&self, step: u64) -> bool {
        step.is_multiple_of(self.cfg.snapshot_every) || step == self.schedule.steps
    }

    fn is_frame(&self, step: u64) -> bool {
        step.is_multiple_of(self.cfg.diagnostics_every) || self.is_snapshot(step)
    }

    /// Emit outputs due at `step`. At snapshot steps the state is replaced by
    /// its canonical form.
    fn emit(&mut self, step: u64, coeffs: &mut Vec<Complex64>, force: bool) -> Result<()> {
        let snap = force || self.is_snapshot(step);
        if !snap && !self.is_frame(step) {
            return Ok(());
        }
        let g = self.cfg.grid;
        let t = self.schedule.time(step);
        let field = if snap {
            let values = ScalarField::from_coeffs(g, std::mem::take(coeffs))?.into_values();
            let canonical = ScalarField::from_band_values(g, values)?;
            *coeffs = canonical.coeffs().to_vec();
            canonical
        } else {
            ScalarField::from_coeffs(g, coeffs.clone())?
        };
        let (frame, rows) = self.builder.frame(step, t, &field)?;
        for s in self.sinks.iter_mut() {
            s.on_frame(&frame, &rows)?;
        }
        self.traj.frames.push(frame);
        self.traj.flux_rows.extend(rows);
        if snap {
            let sample = Sample { step, t, field };
            for s in self.sinks.iter_mut() {
                s.on_snapshot(&sample)?;
            }
            if self.opts.keep_samples {
                self.traj.samples.push(sample);
            }
        }
        Ok(())
    }
}

fn drive(
    cfg: &SolverConfig,
    schedule: Schedule,
    opts: &RunOptions,
    start: Start,
    sinks: &mut [&mut dyn RunSink],
) -> Result<Trajectory> {
    let (first_step, mut coeffs, builder, fresh) = match start {
        Start::Fresh(theta0) => (0, theta0.coeffs().to_vec(), FrameBuilder::new(cfg), true),
        Start::Resume(p) => {
            p.field.grid().same_as(&cfg.grid)?;
            (p.step, p.field.coeffs().to_vec(), p.builder, false)
        }
    };
    let mut d = Driver {
        cfg,
        schedule,
        opts,
        builder,
        traj: Trajectory {
            config: cfg.clone(),
            schedule,
            frames: Vec::new(),
            samples: Vec::new(),
            flux_rows: Vec::new(),
            status: RunStatus::Completed,
            blow_up: None,
            warnings: cfg.warnings(),
        },
        sinks,
    };
    if fresh {
        d.emit(0, &mut coeffs, true)?;
    }
    let stepper = Stepper::new(cfg, schedule.dt);
    let mut step = first_step;
    while step < schedule.steps {
        if opts.stop_after.is_some_and(|k| step >= k) {
            d.traj.status = RunStatus::Aborted;
            break;
        }
        let next = stepper.step_coeffs(&coeffs);
        step += 1;
        let t = schedule.time(step);
        if next.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            let linf = ScalarField::from_coeffs(cfg.grid, coeffs.clone())
                .ok()
                .and_then(|f| lp_norm(&f, f64::INFINITY).ok())
                .unwrap_or(f64::NAN);
            d.traj.status = RunStatus::BlownUp;
            d.traj.blow_up = Some(BlowUpReport {
                time: t,
                step,
                linf,
                top_shell_fraction: stepper.top_shell_fraction(&coeffs),
                reason: "non-finite state".into(),
            });
            break;
        }
        coeffs = next;
        let top = stepper.top_shell_fraction(&coeffs);
        if top > RESOLUTION_LOSS_FRACTION {
            d.emit(step, &mut coeffs, true)?;
            d.traj.status = RunStatus::Unresolved;
            d.traj.blow_up = Some(BlowUpReport {
                time: t,
                step,
                linf: d.traj.frames.last().map(|f| f.linf).unwrap_or(f64::NAN),
                top_shell_fraction: top,
                reason: format!(
                    "top shell holds {top:.3e} of the L2 norm squared (limit {RESOLUTION_LOSS_FRACTION})"
                ),
            });
            break;
        }
        d.emit(step, &mut coeffs, false)?;
    }
    Ok(d.traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::config::{InitialCondition, TimeStep};
    use crate::spectral::GridSpec;

    fn cfg() -> SolverConfig {
        let mut c = SolverConfig::new(
            GridSpec::new(32).unwrap(),
            InitialCondition::RandomSpectrum {
                beta: 3.0,
                k_min: 1.0,
                k_max: 4.0,
                amplitude: 0.5,
                seed: 11,
            },
        );
        c.dt = TimeStep::Fixed(0.01);
        c.t_end = 0.2;
        c.diagnostics_every = 2;
        c.snapshot_every = 5;
        c
    }

    struct Count(usize, usize);
    impl RunSink for Count {
        fn on_frame(&mut self, _: &DiagnosticsFrame, _: &[FluxRow]) -> Result<()> {
            self.0 += 1;
            Ok(())
        }
        fn on_snapshot(&mut self, _: &Sample) -> Result<()> {
            self.1 += 1;
            Ok(())
        }
    }

    #[test]
    fn zero_horizon_gives_initial_frame() {
        let mut c = cfg();
        c.t_end = 0.0;
        let t = run(&c, &mut []).unwrap();
        assert_eq!(t.frames.len(), 1);
        assert_eq!(t.frames[0].t, 0.0);
        assert_eq!(t.status, RunStatus::Completed);
    }

    #[test]
    fn cadence_and_sinks() {
        let c = cfg();
        let mut count = Count(0, 0);
        let opts = RunOptions {
            keep_samples: true,
            stop_after: None,
        };
        let t = run_with(&c, &opts, &mut [&mut count]).unwrap();
        // frames at 0,2,4,5,6,8,10,...,20 and snapshots at 0,5,10,15,20
        let steps: Vec<u64> = t.frames.iter().map(|f| f.step).collect();
        assert_eq!(steps, vec![0, 2, 4, 5, 6, 8, 10, 12, 14, 15, 16, 18, 20]);
        assert_eq!((count.0, count.1), (13, 5));
        assert_eq!(t.samples.len(), 5);
        assert!(t.frames.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn stop_then_resume_is_bitwise() {
        let c = cfg();
        let full = run_with(
            &c,
            &RunOptions {
                keep_samples: true,
                stop_after: None,
            },
            &mut [],
        )
        .unwrap();
        let part = run_with(
            &c,
            &RunOptions {
                keep_samples: true,
                stop_after: Some(10),
            },
            &mut [],
        )
        .unwrap();
        assert_eq!(part.status, RunStatus::Aborted);
        let last = part.samples.last().unwrap();
        assert_eq!(last.step, 10);
        let kept: Vec<_> = part
            .frames
            .iter()
            .filter(|f| f.step <= 10)
            .cloned()
            .collect();
        let field = ScalarField::from_band_values(c.grid, last.field.values().to_vec()).unwrap();
        let point = ResumePoint {
            step: 10,
            field,
            builder: FrameBuilder::resume(&c, &kept[0], kept.last().unwrap()),
        };
        let rest = resume_from(
            &c,
            &RunOptions {
                keep_samples: true,
                stop_after: None,
            },
            point,
            &mut [],
        )
        .unwrap();
        let mut joined = kept;
        joined.extend(rest.frames);
        assert_eq!(joined, full.frames);
        assert_eq!(
            rest.samples.last().unwrap().field.values(),
            full.samples.last().unwrap().field.values()
        );
    }
}
