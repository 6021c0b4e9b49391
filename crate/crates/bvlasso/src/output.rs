//! CSV layouts.
//!
//! * select summary: `n, x1m, x1l, x1h, x2m, …`: mean score and 95% interval
//!   per variable. With several (σ, c_λ) combinations every column after `n`
//!   is prefixed by the 1-based combination number (`2x1m`), combinations
//!   ordered σ-major.
//! * select trials: `trial_id, n, sigma, c_lambda, scheme, score_x1, …, selected_bitmask`.
//! * regret summary: `T, UAm, UAl, UAh, BVm, BVl, BVh, STm, STl, STh, 34, 56, 11`;
//!   the last three are `c·T^{3/4}`, `c·T^{5/6}` and `c·T`, each scaled to
//!   equal `BVm` at the first `T`.
//! * regret trials: `T, variant, trial, cumulative_regret`.
//! * diagnose / chernoff: `key, value`.

use std::io::Write;

use anyhow::Result;

use crate::experiments::{fmt_num, RegretReport, Report, SelectReport, REGRET_VARIANTS};

pub fn write_select<W: Write>(report: &SelectReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let multi = report.combos.len() > 1;
    let mut header = vec!["n".to_string()];
    for c in 0..report.combos.len() {
        let prefix = if multi { (c + 1).to_string() } else { String::new() };
        for v in 1..=report.d_x {
            for s in ["m", "l", "h"] {
                header.push(format!("{prefix}x{v}{s}"));
            }
        }
    }
    w.write_record(&header)?;
    for (k, n) in report.n.iter().enumerate() {
        let mut row = vec![n.to_string()];
        for combo in &report.summary {
            for iv in &combo[k] {
                row.extend([fmt_num(iv.mean), fmt_num(iv.low), fmt_num(iv.high)]);
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_select_trials<W: Write>(report: &SelectReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["trial_id", "n", "sigma", "c_lambda", "scheme"].map(String::from).to_vec();
    header.extend((1..=report.d_x).map(|v| format!("score_x{v}")));
    header.push("selected_bitmask".into());
    w.write_record(&header)?;
    for t in &report.trials {
        let mut row = vec![t.trial.to_string(), t.n.to_string(), fmt_num(t.sigma), fmt_num(t.c_lambda), t.scheme.into()];
        row.extend(t.scores.iter().map(|s| fmt_num(*s)));
        row.push(t.bitmask.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_regret<W: Write>(report: &RegretReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["T".to_string()];
    for v in REGRET_VARIANTS {
        for s in ["m", "l", "h"] {
            header.push(format!("{}{s}", v.label()));
        }
    }
    header.extend(["34", "56", "11"].map(String::from));
    w.write_record(&header)?;
    let t0 = report.horizons[0] as f64;
    let bv = REGRET_VARIANTS.iter().position(|v| v.label() == "BV").expect("BV is reported");
    let anchor = report.summary[bv][0].mean;
    for (k, &t) in report.horizons.iter().enumerate() {
        let mut row = vec![t.to_string()];
        for per_variant in &report.summary {
            let iv = per_variant[k];
            row.extend([fmt_num(iv.mean), fmt_num(iv.low), fmt_num(iv.high)]);
        }
        let ratio = t as f64 / t0;
        for a in [0.75, 5.0 / 6.0, 1.0] {
            row.push(fmt_num(anchor * ratio.powf(a)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_regret_trials<W: Write>(report: &RegretReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["T", "variant", "trial", "cumulative_regret"])?;
    for r in &report.trials {
        w.write_record([r.horizon.to_string(), r.variant.label().to_string(), r.trial.to_string(), fmt_num(r.cumulative)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(report: &Report, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["key", "value"])?;
    for (k, v) in report {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(())
}
