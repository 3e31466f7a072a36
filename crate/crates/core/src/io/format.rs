//! Text encodings of the diagnostics and flux streams. Every float is written
//! with 17 significant digits so that it parses back to the same f64.

use std::fmt::Write as _;

use crate::error::{Result, SqgError};
use crate::flux::FluxRow;
use crate::frame::DiagnosticsFrame;

pub const DIAGNOSTICS_SCHEMA_VERSION: u32 = 1;
pub const FLUX_SCHEMA_VERSION: u32 = 1;
pub const FLUX_HEADER: &str = "t,Q,Pi_Q,term_rQ,term_high,bound,ratio";

/// 17 significant digits, or `null` for values JSON cannot carry.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_else(|| "null".into())
}

fn array(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| fmt17(*x)).collect();
    format!("[{}]", items.join(","))
}

pub fn frame_to_json(f: &DiagnosticsFrame) -> String {
    let mut s = String::with_capacity(1024);
    let _ = write!(
        s,
        "{{\"t\":{},\"energy\":{},\"linf\":{},\"Q\":{},\"Lambda\":{},\"resolved\":{},\"f\":{},\"f_integral\":{},\"besov_sll\":{},\"gronwall_ratio\":{}",
        fmt17(f.t),
        fmt17(f.energy),
        fmt17(f.linf),
        f.q,
        fmt17(f.lambda),
        f.resolved,
        fmt17(f.f),
        fmt17(f.f_integral),
        opt(f.besov_sll),
        opt(f.gronwall_ratio),
    );
    let _ = write!(
        s,
        ",\"step\":{},\"mean\":{},\"dissipation_kappa\":{},\"dissipation_eps\":{},\"tail\":{},\"shell_l2\":{},\"pi_q\":{},\"flux_bound\":{}}}",
        f.step,
        fmt17(f.mean),
        fmt17(f.dissipation_kappa),
        fmt17(f.dissipation_eps),
        fmt17(f.tail),
        array(&f.shell_l2),
        array(&f.pi_q),
        array(&f.flux_bound),
    );
    s
}

pub fn parse_frame(line: &str) -> Result<DiagnosticsFrame> {
    serde_json::from_str(line).map_err(|e| SqgError::Schema(format!("bad diagnostics line: {e}")))
}

pub fn flux_row_to_csv(r: &FluxRow) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt17(r.t),
        r.q,
        fmt17(r.pi_q),
        fmt17(r.term_rq),
        fmt17(r.term_high),
        fmt17(r.bound),
        fmt17(r.ratio)
    )
}

pub fn parse_flux_row(line: &str) -> Result<FluxRow> {
    let bad = || SqgError::Schema(format!("bad flux row `{line}`"));
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != 7 {
        return Err(bad());
    }
    let f = |i: usize| cols[i].parse::<f64>().map_err(|_| bad());
    Ok(FluxRow {
        t: f(0)?,
        q: cols[1].parse().map_err(|_| bad())?,
        pi_q: f(2)?,
        term_rq: f(3)?,
        term_high: f(4)?,
        bound: f(5)?,
        ratio: f(6)?,
    })
}
