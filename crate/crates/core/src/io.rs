//! CSV artifacts.
//!
//! | file          | columns                           |
//! |---------------|-----------------------------------|
//! | events.csv    | `index,time,component`            |
//! | rates.csv     | `bin_start,bin_end,count,rate`    |
//! | residuals.csv | `index,value`                     |
//! | bounds.csv    | `t,lower,upper[,true]`            |
//!
//! Indices and component labels are 1-based; the component cell is empty
//! for masked logs. Times use 17 significant digits so a log read back
//! reproduces the simulated values bit for bit.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::sgrp::{FullHistory, MaskedHistory};
use crate::stats::RateCurve;

pub const EVENTS_HEADER: [&str; 3] = ["index", "time", "component"];
pub const RATES_HEADER: [&str; 4] = ["bin_start", "bin_end", "count", "rate"];
pub const RESIDUALS_HEADER: [&str; 2] = ["index", "value"];

/// A row of an event log; `component` is 0-based in memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub component: Option<usize>,
}

/// One row of a bounds table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub truth: Option<f64>,
}

/// 17 significant digits.
pub fn fmt_time(t: f64) -> String {
    format!("{t:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

pub fn write_full_events<W: Write>(w: W, full: &FullHistory) -> Result<()> {
    let mut out = writer(w);
    out.write_record(EVENTS_HEADER)?;
    for (i, e) in full.events().iter().enumerate() {
        out.write_record([(i + 1).to_string(), fmt_time(e.time), (e.component + 1).to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_masked_events<W: Write>(w: W, mh: &MaskedHistory) -> Result<()> {
    let mut out = writer(w);
    out.write_record(EVENTS_HEADER)?;
    for (i, &t) in mh.times().iter().enumerate() {
        out.write_record([(i + 1).to_string(), fmt_time(t), String::new()])?;
    }
    out.flush()?;
    Ok(())
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let found = rdr.headers()?;
    if found.iter().ne(expected.iter().copied()) {
        return Err(Error::InvalidHistory(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, line: usize) -> Result<T> {
    let raw = rec.get(i).unwrap_or("");
    raw.trim()
        .parse()
        .map_err(|_| Error::InvalidHistory(format!("row {line}: cannot parse `{raw}`")))
}

/// Reads an event log, labeled or masked.
pub fn read_events<R: Read>(r: R) -> Result<Vec<EventRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    check_header(&mut rdr, &EVENTS_HEADER)?;
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let index: usize = field(&rec, 0, line)?;
        if index != row + 1 {
            return Err(Error::InvalidHistory(format!("row {line}: index {index} out of sequence")));
        }
        let time: f64 = field(&rec, 1, line)?;
        let component = match rec.get(2).map(str::trim) {
            None | Some("") => None,
            Some(_) => {
                let label: usize = field(&rec, 2, line)?;
                if label == 0 {
                    return Err(Error::InvalidHistory(format!("row {line}: component labels start at 1")));
                }
                Some(label - 1)
            }
        };
        out.push(EventRecord { time, component });
    }
    Ok(out)
}

/// Event times of a log, checked to be a valid masked history.
pub fn read_masked<R: Read>(r: R, n: usize, horizon: Option<f64>) -> Result<MaskedHistory> {
    let times: Vec<f64> = read_events(r)?.into_iter().map(|e| e.time).collect();
    match horizon {
        Some(h) => MaskedHistory::new(n, times, h),
        None => MaskedHistory::until_last(n, times),
    }
}

pub fn write_rates<W: Write>(w: W, curve: &RateCurve) -> Result<()> {
    let mut out = writer(w);
    out.write_record(RATES_HEADER)?;
    for b in &curve.bins {
        out.write_record([
            b.start.to_string(),
            (b.start + curve.bin_width).to_string(),
            b.count.to_string(),
            b.rate.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_residuals<W: Write>(w: W, residuals: &[f64]) -> Result<()> {
    let mut out = writer(w);
    out.write_record(RESIDUALS_HEADER)?;
    for (i, v) in residuals.iter().enumerate() {
        out.write_record([(i + 1).to_string(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_bounds<W: Write>(w: W, rows: &[BoundsRow]) -> Result<()> {
    let with_truth = rows.iter().any(|r| r.truth.is_some());
    let mut out = writer(w);
    if with_truth {
        out.write_record(["t", "lower", "upper", "true"])?;
    } else {
        out.write_record(["t", "lower", "upper"])?;
    }
    for r in rows {
        let mut rec = vec![fmt_time(r.t), r.lower.to_string(), r.upper.to_string()];
        if with_truth {
            rec.push(r.truth.map(|v| v.to_string()).unwrap_or_default());
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
