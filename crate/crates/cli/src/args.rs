//! Value parsers for list- and range-valued flags.

use ililpa::Beta;

/// `7`, `0..99` (inclusive), `0..=99`, or `1,5,9`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.trim().parse().map_err(|e| format!("bad range start `{lo}`: {e}"))?;
        let hi: u64 = hi.trim().parse().map_err(|e| format!("bad range end `{hi}`: {e}"))?;
        if hi < lo {
            return Err(format!("empty seed range {lo}..{hi}"));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("bad seed `{t}`: {e}")))
        .collect()
}

/// `0.1,0.2,0.3` or `start..end:step` with both ends included.
pub fn parse_mus(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mus: Vec<f64> = if let Some((range, step)) = s.split_once(':') {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| format!("expected start..end:step, got `{s}`"))?;
        let lo: f64 = lo.parse().map_err(|e| format!("bad start `{lo}`: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("bad end `{hi}`: {e}"))?;
        let step: f64 = step.parse().map_err(|e| format!("bad step `{step}`: {e}"))?;
        if step.is_nan() || step <= 0.0 {
            return Err("step must be positive".into());
        }
        let count = ((hi - lo) / step + 1e-9).floor() as i64;
        // rounding keeps 0.1 + 3·0.05 printing as 0.25
        (0..=count.max(-1))
            .map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9)
            .collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad mu `{t}`: {e}")))
            .collect::<Result<_, _>>()?
    };
    if let Some(bad) = mus.iter().find(|m| !(0.0..1.0).contains(*m)) {
        return Err(format!("mu must lie in [0, 1), got {bad}"));
    }
    Ok(mus)
}

pub fn parse_beta(s: &str) -> Result<Beta, String> {
    let value: f64 = s.parse().map_err(|e| format!("{e}"))?;
    Beta::new(value).map_err(|e| e.to_string())
}
