//! CSV form of per-subspace reports.

use super::SubspaceReport;
use crate::generators::GeneratorPair;
use crate::qstate::Dims;
use crate::{Error, Result};

pub const SUBSPACE_CSV_HEADER: &str =
    "alpha_j,alpha_k,beta_l,beta_m,c,lambda_min,bell_max,nonlinear_max,d,x";

/// Significant digits for per-subspace floats. Enough to round-trip an f64,
/// so a bound rebuilt from the CSV matches the in-memory one.
const REPORT_DIGITS: usize = 17;

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus one LF-terminated row per report.
pub fn reports_to_csv(reports: &[SubspaceReport]) -> String {
    let mut out = String::from(SUBSPACE_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let floats = [r.c, r.lambda_min, r.bell_max, r.nonlinear_max, r.d, r.x]
            .map(|v| format_sig(v, REPORT_DIGITS))
            .join(",");
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.alpha.j(),
            r.alpha.k(),
            r.beta.j(),
            r.beta.k(),
            floats
        ));
    }
    out
}

pub fn reports_from_csv(text: &str, dims: Dims) -> Result<Vec<SubspaceReport>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SUBSPACE_CSV_HEADER => {}
        other => {
            return Err(Error::Malformed(format!(
                "expected subspace CSV header, got {other:?}"
            )))
        }
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |what: &str| Error::Malformed(format!("row {}: {what}", lineno + 1));
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 10 {
            return Err(bad("expected 10 columns"));
        }
        let idx: Vec<usize> = cells[..4]
            .iter()
            .map(|c| c.parse().map_err(|_| bad("bad index")))
            .collect::<Result<_>>()?;
        let f: Vec<f64> = cells[4..]
            .iter()
            .map(|c| c.parse().map_err(|_| bad("bad float")))
            .collect::<Result<_>>()?;
        out.push(SubspaceReport {
            alpha: GeneratorPair::new(idx[0], idx[1], dims.m())?,
            beta: GeneratorPair::new(idx[2], idx[3], dims.n())?,
            c: f[0],
            lambda_min: f[1],
            bell_max: f[2],
            nonlinear_max: f[3],
            d: f[4],
            x: f[5],
        });
    }
    Ok(out)
}
