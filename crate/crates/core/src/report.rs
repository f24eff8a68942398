//! CSV tables with fixed headers. Numbers use Rust's shortest round-trip
//! formatting, so identical results give identical bytes.

use std::io::Write;

use crate::error::{Error, Result};
use crate::harq::HarqOutcome;
use crate::hybrid::{HybridConfig, HybridOutcome};
use crate::noma::NomaEstimate;
use crate::stats::{Ccdf, ConfInterval, PlrCurve};

pub const HARQ_HISTOGRAM_HEADER: [&str; 3] = ["scheme", "latency_ms", "count"];
pub const HARQ_OUTAGE_HEADER: [&str; 5] = ["scheme", "deadline_ms", "outage", "ci_lo", "ci_hi"];
pub const HYBRID_HEADER: [&str; 10] = [
    "N",
    "R",
    "d",
    "eps1",
    "plr",
    "ci_lo",
    "ci_hi",
    "mean_latency_ms",
    "p99999_latency_ms",
    "bits_per_re",
];
pub const NOMA_HEADER: [&str; 10] = [
    "strategy",
    "d",
    "load_g",
    "frames",
    "packets",
    "losses",
    "plr",
    "ci_lo",
    "ci_hi",
    "mean_sic_iters",
];
pub const CCDF_HEADER: [&str; 2] = ["latency_ms", "survival"];
pub const PLR_CURVE_HEADER: [&str; 5] = ["load_g", "plr", "ci_lo", "ci_hi", "trials"];

fn io_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// A CSV table, optionally with extra leading columns (used by sweeps).
pub struct Table<W: Write> {
    writer: csv::Writer<W>,
    prefix_len: usize,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, prefix: &[&str], header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(out);
        writer
            .write_record(prefix.iter().chain(header.iter()))
            .map_err(io_err)?;
        Ok(Self {
            writer,
            prefix_len: prefix.len(),
        })
    }

    pub fn row(&mut self, prefix: &[String], fields: &[String]) -> Result<()> {
        debug_assert_eq!(prefix.len(), self.prefix_len);
        self.writer
            .write_record(prefix.iter().chain(fields.iter()))
            .map_err(io_err)
    }

    pub fn finish(mut self) -> Result<W> {
        self.writer.flush().map_err(|e| Error::Io(e.to_string()))?;
        self.writer.into_inner().map_err(|e| Error::Io(e.to_string()))
    }
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

pub fn harq_histogram_rows(outcome: &HarqOutcome) -> Vec<Vec<String>> {
    outcome
        .histogram
        .iter()
        .map(|(&symbols, &count)| vec![outcome.label.clone(), s(outcome.latency_ms(symbols)), s(count)])
        .collect()
}

pub fn harq_outage_row(outcome: &HarqOutcome, deadline_ms: f64) -> Vec<String> {
    let (outage, ci) = outcome.outage(deadline_ms);
    vec![
        outcome.label.clone(),
        s(deadline_ms),
        s(outage),
        s(ci.lower),
        s(ci.upper),
    ]
}

/// `bits_per_re` is empty when the scenario cannot be sized.
pub fn hybrid_row(cfg: &HybridConfig, outcome: &HybridOutcome, bits_per_re: Option<f64>) -> Vec<String> {
    let ci = outcome.ci();
    vec![
        s(cfg.n_users),
        s(cfg.pool_size),
        s(cfg.attempts),
        s(cfg.initial_bler),
        s(outcome.plr()),
        s(ci.lower),
        s(ci.upper),
        s(outcome.mean_latency_ms()),
        s(outcome.latency_quantile_ms(0.99999)),
        bits_per_re.map(s).unwrap_or_default(),
    ]
}

pub fn noma_row(est: &NomaEstimate) -> Vec<String> {
    let p = &est.point;
    vec![
        est.strategy.label().to_string(),
        s(est.d),
        s(p.load_g),
        s(est.frames),
        s(p.trials),
        s(p.losses),
        s(p.plr),
        s(p.ci.lower),
        s(p.ci.upper),
        s(est.mean_sic_iters()),
    ]
}

pub fn ccdf_rows(ccdf: &Ccdf) -> Vec<Vec<String>> {
    ccdf.points().into_iter().map(|(t, p)| vec![s(t), s(p)]).collect()
}

pub fn plr_curve_rows(curve: &PlrCurve) -> Vec<Vec<String>> {
    curve
        .points
        .iter()
        .map(|p| vec![s(p.load_g), s(p.plr), s(p.ci.lower), s(p.ci.upper), s(p.trials)])
        .collect()
}

/// Writes a whole table to a byte buffer.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut t = Table::new(Vec::new(), &[], header)?;
    for r in rows {
        t.row(&[], r)?;
    }
    t.finish()
}

/// Formats an interval as `[lo, hi]` for log lines.
pub fn fmt_ci(ci: &ConfInterval) -> String {
    format!("[{:.3e}, {:.3e}]", ci.lower, ci.upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::PlrPoint;

    #[test]
    fn ccdf_table() {
        let c = Ccdf::from_samples(&[1.0, 2.0, 3.0], 0).unwrap();
        let bytes = to_csv(&CCDF_HEADER, &ccdf_rows(&c)).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("latency_ms,survival\n"));
        assert_eq!(text.lines().count(), 1 + c.points().len());
    }

    #[test]
    fn plr_curve_table() {
        let curve = PlrCurve {
            points: vec![PlrPoint::from_counts(0.5, 3, 1_000_000)],
        };
        let text = String::from_utf8(to_csv(&PLR_CURVE_HEADER, &plr_curve_rows(&curve)).unwrap()).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "0.5");
        assert_eq!(row[1], "0.000003");
        assert_eq!(row[4], "1000000");
    }

    #[test]
    fn prefixed_columns() {
        let mut t = Table::new(Vec::new(), &["param", "value"], &["x"]).unwrap();
        t.row(&["load".into(), "2".into()], &["1".into()]).unwrap();
        let text = String::from_utf8(t.finish().unwrap()).unwrap();
        assert_eq!(text, "param,value,x\nload,2,1\n");
    }
}
