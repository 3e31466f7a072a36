//! Flat `key = value` run configuration with `#` comments.
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `alpha` | dissipation power α | required |
//! | `kappa` | dissipation coefficient κ | required |
//! | `epsilon` | regularizing viscosity ε | 0 |
//! | `n` | grid size N | required |
//! | `dealias_fraction` | dealiased radius as a fraction of N/2 | 2/3 |
//! | `dt` | step size or `auto` | `auto` |
//! | `t_end` | horizon T | required |
//! | `c0` | dissipation wavenumber constant | 0.01 |
//! | `ic` | `single_mode`, `random_spectrum` or `gaussian_blobs` | required |
//! | `ic_mode` | `k1,k2` for a single mode | `1,0` |
//! | `ic_amplitude` | amplitude (single mode, random spectrum) | 1 |
//! | `ic_beta`, `ic_k_min`, `ic_k_max` | random spectrum shape | 3, 1, k_cut/2 |
//! | `seed` | random spectrum seed | 0 |
//! | `ic_centers` | blob centres `x y; x y; …` | required for blobs |
//! | `ic_widths`, `ic_amplitudes` | comma lists, one per blob | required for blobs |
//! | `snapshot_every`, `diagnostics_every` | cadences in steps | 50, 10 |
//! | `advection`, `flux_table` | `true` / `false` | true, true |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Result, SqgError};
use crate::solver::{Blob, InitialCondition, SolverConfig, TimeStep};
use crate::spectral::{GridSpec, DEFAULT_DEALIAS_FRACTION};

const KEYS: &[&str] = &[
    "alpha",
    "kappa",
    "epsilon",
    "n",
    "dealias_fraction",
    "dt",
    "t_end",
    "c0",
    "ic",
    "ic_mode",
    "ic_amplitude",
    "ic_beta",
    "ic_k_min",
    "ic_k_max",
    "seed",
    "ic_centers",
    "ic_widths",
    "ic_amplitudes",
    "snapshot_every",
    "diagnostics_every",
    "advection",
    "flux_table",
];

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.raw(key)
            .ok_or_else(|| SqgError::ConfigValue(format!("missing required key `{key}`")))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, line: usize, v: &str) -> Result<T> {
        v.parse().map_err(|_| SqgError::Config {
            line,
            message: format!("cannot parse `{key}` value `{v}`"),
        })
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            Some((line, v)) => self.parse(key, line, v).map(Some),
            None => Ok(None),
        }
    }

    fn req<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let (line, v) = self.required(key)?;
        self.parse(key, line, v)
    }

    fn list(&self, key: &str, sep: char) -> Result<Vec<f64>> {
        let (line, v) = self.required(key)?;
        v.split(sep)
            .map(|s| self.parse(key, line, s.trim()))
            .collect()
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(SqgError::Config {
                line,
                message: format!("expected `key = value`, found `{body}`"),
            });
        };
        let key = k.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(SqgError::Config {
                line,
                message: format!("unknown key `{}`", k.trim()),
            });
        }
        if map
            .insert(key.clone(), (line, v.trim().to_string()))
            .is_some()
        {
            return Err(SqgError::Config {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(Entries { map })
}

pub fn parse_config_str(text: &str) -> Result<SolverConfig> {
    let e = tokenize(text)?;
    let n: usize = e.req("n")?;
    let frac = e
        .get("dealias_fraction")?
        .unwrap_or(DEFAULT_DEALIAS_FRACTION);
    let grid = GridSpec::with_dealias(n, frac)?;

    let (ic_line, ic_kind) = e.required("ic")?;
    let ic = match ic_kind {
        "single_mode" => {
            let (k1, k2) = match e.raw("ic_mode") {
                Some((line, v)) => {
                    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(SqgError::Config {
                            line,
                            message: format!("ic_mode must be `k1,k2`, found `{v}`"),
                        });
                    }
                    (
                        e.parse::<i64>("ic_mode", line, parts[0])?,
                        e.parse::<i64>("ic_mode", line, parts[1])?,
                    )
                }
                None => (1, 0),
            };
            InitialCondition::SingleMode {
                k1,
                k2,
                amplitude: e.get("ic_amplitude")?.unwrap_or(1.0),
            }
        }
        "random_spectrum" => InitialCondition::RandomSpectrum {
            beta: e.get("ic_beta")?.unwrap_or(3.0),
            k_min: e.get("ic_k_min")?.unwrap_or(1.0),
            k_max: e.get("ic_k_max")?.unwrap_or((grid.k_cut() / 2) as f64),
            amplitude: e.get("ic_amplitude")?.unwrap_or(1.0),
            seed: e.get("seed")?.unwrap_or(0),
        },
        "gaussian_blobs" => {
            let (line, centers) = e.required("ic_centers")?;
            let centers: Vec<(f64, f64)> = centers
                .split(';')
                .map(|c| {
                    let xy: Vec<&str> = c.split_whitespace().collect();
                    if xy.len() != 2 {
                        return Err(SqgError::Config {
                            line,
                            message: format!("blob centre must be `x y`, found `{}`", c.trim()),
                        });
                    }
                    Ok((
                        e.parse("ic_centers", line, xy[0])?,
                        e.parse("ic_centers", line, xy[1])?,
                    ))
                })
                .collect::<Result<_>>()?;
            let widths = e.list("ic_widths", ',')?;
            let amps = e.list("ic_amplitudes", ',')?;
            if widths.len() != centers.len() || amps.len() != centers.len() {
                return Err(SqgError::ConfigValue(format!(
                    "{} blob centres but {} widths and {} amplitudes",
                    centers.len(),
                    widths.len(),
                    amps.len()
                )));
            }
            InitialCondition::GaussianBlobs {
                blobs: centers
                    .iter()
                    .zip(widths.iter().zip(&amps))
                    .map(|(&(x, y), (&width, &amplitude))| Blob {
                        x,
                        y,
                        width,
                        amplitude,
                    })
                    .collect(),
            }
        }
        other => {
            return Err(SqgError::Config {
                line: ic_line,
                message: format!("unknown initial condition `{other}`"),
            })
        }
    };

    let mut cfg = SolverConfig::new(grid, ic);
    cfg.alpha = e.req("alpha")?;
    cfg.kappa = e.req("kappa")?;
    cfg.t_end = e.req("t_end")?;
    if let Some(v) = e.get("epsilon")? {
        cfg.epsilon = v;
    }
    if let Some((line, v)) = e.raw("dt") {
        cfg.dt = if v.eq_ignore_ascii_case("auto") {
            TimeStep::Auto
        } else {
            TimeStep::Fixed(e.parse("dt", line, v)?)
        };
    }
    if let Some(v) = e.get("c0")? {
        cfg.c0 = v;
    }
    if let Some(v) = e.get("snapshot_every")? {
        cfg.snapshot_every = v;
    }
    if let Some(v) = e.get("diagnostics_every")? {
        cfg.diagnostics_every = v;
    }
    if let Some(v) = e.get("advection")? {
        cfg.advection = v;
    }
    if let Some(v) = e.get("flux_table")? {
        cfg.flux_table = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<SolverConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| SqgError::io(path, e))?;
    parse_config_str(&text)
}

/// Serialize in the format read by [`parse_config_str`]; parsing the output
/// gives back an equal configuration.
pub fn config_to_string(cfg: &SolverConfig) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("alpha", cfg.alpha.to_string());
    kv("kappa", cfg.kappa.to_string());
    kv("epsilon", cfg.epsilon.to_string());
    kv("n", cfg.grid.n().to_string());
    kv("dealias_fraction", cfg.grid.dealias_fraction().to_string());
    kv(
        "dt",
        match cfg.dt {
            TimeStep::Auto => "auto".into(),
            TimeStep::Fixed(v) => v.to_string(),
        },
    );
    kv("t_end", cfg.t_end.to_string());
    kv("c0", cfg.c0.to_string());
    match &cfg.ic {
        InitialCondition::SingleMode { k1, k2, amplitude } => {
            kv("ic", "single_mode".into());
            kv("ic_mode", format!("{k1},{k2}"));
            kv("ic_amplitude", amplitude.to_string());
        }
        InitialCondition::RandomSpectrum {
            beta,
            k_min,
            k_max,
            amplitude,
            seed,
        } => {
            kv("ic", "random_spectrum".into());
            kv("ic_beta", beta.to_string());
            kv("ic_k_min", k_min.to_string());
            kv("ic_k_max", k_max.to_string());
            kv("ic_amplitude", amplitude.to_string());
            kv("seed", seed.to_string());
        }
        InitialCondition::GaussianBlobs { blobs } => {
            kv("ic", "gaussian_blobs".into());
            let join = |f: &dyn Fn(&Blob) -> String, sep: &str| {
                blobs.iter().map(f).collect::<Vec<_>>().join(sep)
            };
            kv("ic_centers", join(&|b| format!("{} {}", b.x, b.y), "; "));
            kv("ic_widths", join(&|b| b.width.to_string(), ", "));
            kv("ic_amplitudes", join(&|b| b.amplitude.to_string(), ", "));
        }
    }
    kv("snapshot_every", cfg.snapshot_every.to_string());
    kv("diagnostics_every", cfg.diagnostics_every.to_string());
    kv("advection", cfg.advection.to_string());
    kv("flux_table", cfg.flux_table.to_string());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "# smallest useful run\nalpha = 0.5\nkappa = 1\nn = 128\ndt = auto\nt_end = 1\nic = single_mode\n";

    #[test]
    fn minimal_round_trip() {
        let cfg = parse_config_str(MINIMAL).unwrap();
        assert_eq!(cfg.grid.n(), 128);
        assert_eq!(cfg.dt, TimeStep::Auto);
        let again = parse_config_str(&config_to_string(&cfg)).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn every_ic_round_trips() {
        for extra in [
            "ic = random_spectrum\nic_beta = 2.5\nic_k_max = 7.5\nseed = 99\n",
            "ic = gaussian_blobs\nic_centers = 1 2; 3.5 4\nic_widths = 0.5, 0.25\nic_amplitudes = 1, -0.3\n",
            "ic = single_mode\nic_mode = -2, 3\nic_amplitude = 0.1\ndt = 0.001\nepsilon = 1e-3\nadvection = false\n",
        ] {
            let text = format!("alpha = 0.3\nkappa = 0.5\nn = 64\nt_end = 0.5\n{extra}");
            let cfg = parse_config_str(&text).unwrap();
            assert_eq!(parse_config_str(&config_to_string(&cfg)).unwrap(), cfg);
        }
    }

    #[test]
    fn subcritical_accepted_with_warning() {
        let cfg = parse_config_str(&MINIMAL.replace("alpha = 0.5", "alpha = 1.5")).unwrap();
        assert!(cfg.warnings().iter().any(|w| w.contains("subcritical")));
    }

    #[test]
    fn rejections() {
        assert!(parse_config_str(&MINIMAL.replace("alpha = 0.5", "alpha = 0")).is_err());
        match parse_config_str(&format!("{MINIMAL}colour = blue\n")) {
            Err(SqgError::Config { line, message }) => {
                assert_eq!(line, 8);
                assert!(message.contains("colour"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config_str(&MINIMAL.replace("kappa = 1\n", "")),
            Err(SqgError::ConfigValue(_))
        ));
        assert!(parse_config_str(&MINIMAL.replace("n = 128", "n = 100")).is_err());
        assert!(parse_config_str(&format!("{MINIMAL}alpha = 0.4\n")).is_err());
    }
}
