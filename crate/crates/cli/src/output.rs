//! CSV and JSON serialization of sweep data.
//!
//! Numbers are written as the shortest round-trip representation of the value
//! rounded to 12 significant digits, so outputs are stable across platforms.

use std::io::{self, Write};

use decolab_core::{CriticalPoints, Interval, SweepRecord};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Formats a number for CSV output. Negative zero prints as `0`.
pub fn fmt_num(x: f64) -> String {
    let y = round_sig(x);
    if y == 0.0 {
        "0".to_string()
    } else {
        format!("{y}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMeta {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub channel: String,
    pub r_values: Vec<f64>,
    /// True when `r_values` are the built-in defaults rather than user input.
    pub r_values_default: bool,
    pub both_qubits: bool,
    pub grid: GridMeta,
    pub eps_zero: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl RunMetadata {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let r_list = self
            .r_values
            .iter()
            .map(|&r| fmt_num(r))
            .collect::<Vec<_>>()
            .join(";");
        let mut out = vec![
            ("tool_version", self.tool_version.clone()),
            ("channel", self.channel.clone()),
            ("r_values", r_list),
            ("r_values_default", self.r_values_default.to_string()),
            ("both_qubits", self.both_qubits.to_string()),
            ("grid_start", fmt_num(self.grid.start)),
            ("grid_stop", fmt_num(self.grid.stop)),
            ("grid_count", self.grid.count.to_string()),
            ("eps_zero", fmt_num(self.eps_zero)),
        ];
        if let Some(ts) = &self.timestamp {
            out.push(("timestamp", ts.clone()));
        }
        out
    }

    pub fn write_csv_header(&self, w: &mut dyn Write) -> io::Result<()> {
        for (k, v) in self.pairs() {
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("metadata serializes");
        if let Value::Object(m) = &mut v {
            for key in ["eps_zero"] {
                if let Some(x) = m.get(key).and_then(Value::as_f64) {
                    m.insert(key.into(), json!(round_sig(x)));
                }
            }
        }
        v
    }
}

/// Which columns a record table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    /// `r,reqc,concurrence`
    RSweep,
    /// `channel,r,p,reqc,concurrence`
    PSweep,
}

impl Schema {
    pub fn header(self) -> &'static str {
        match self {
            Schema::RSweep => "r,reqc,concurrence",
            Schema::PSweep => "channel,r,p,reqc,concurrence",
        }
    }
}

pub fn write_records_csv(
    w: &mut dyn Write,
    meta: &RunMetadata,
    schema: Schema,
    records: &[SweepRecord],
) -> io::Result<()> {
    meta.write_csv_header(w)?;
    writeln!(w, "{}", schema.header())?;
    for rec in records {
        match schema {
            Schema::RSweep => writeln!(
                w,
                "{},{},{}",
                fmt_num(rec.r),
                fmt_num(rec.reqc),
                fmt_num(rec.concurrence)
            )?,
            Schema::PSweep => writeln!(
                w,
                "{},{},{},{},{}",
                meta.channel,
                fmt_num(rec.r),
                fmt_num(rec.p),
                fmt_num(rec.reqc),
                fmt_num(rec.concurrence)
            )?,
        }
    }
    Ok(())
}

fn record_json(schema: Schema, channel: &str, rec: &SweepRecord) -> Value {
    match schema {
        Schema::RSweep => json!({
            "r": round_sig(rec.r),
            "reqc": round_sig(rec.reqc),
            "concurrence": round_sig(rec.concurrence),
        }),
        Schema::PSweep => json!({
            "channel": channel,
            "r": round_sig(rec.r),
            "p": round_sig(rec.p),
            "reqc": round_sig(rec.reqc),
            "concurrence": round_sig(rec.concurrence),
        }),
    }
}

fn interval_json(iv: &Interval<f64>) -> Value {
    json!({
        "start": round_sig(iv.start),
        "end": round_sig(iv.end),
        "center": round_sig(iv.midpoint()),
    })
}

pub fn critical_json(cp: &CriticalPoints) -> Value {
    json!({
        "crossovers": cp.crossovers.iter().map(|&x| round_sig(x)).collect::<Vec<_>>(),
        "death_intervals": cp.death_intervals.iter().map(interval_json).collect::<Vec<_>>(),
        "reqc_zeros": cp.reqc_zeros.iter().map(interval_json).collect::<Vec<_>>(),
        "reqc_plateaus": cp.reqc_plateaus.iter().map(interval_json).collect::<Vec<_>>(),
    })
}

/// `{ "metadata": …, "records": […], "critical_points": … }`.
///
/// `critical` is either a single critical-point object or, for multi-`r`
/// sweeps, an object keyed by the formatted `r` value.
pub fn write_json(
    w: &mut dyn Write,
    meta: &RunMetadata,
    schema: Schema,
    records: &[SweepRecord],
    critical: Value,
) -> io::Result<()> {
    let doc = json!({
        "metadata": meta.to_json(),
        "records": records.iter().map(|r| record_json(schema, &meta.channel, r)).collect::<Vec<_>>(),
        "critical_points": critical,
    });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    w.write_all(b"\n")
}

pub fn critical_by_r(entries: &[(f64, CriticalPoints)]) -> Value {
    let mut m = Map::new();
    for (r, cp) in entries {
        m.insert(fmt_num(*r), critical_json(cp));
    }
    Value::Object(m)
}

/// `kind,start,end` rows for the critical-point CSV form.
pub fn write_critical_csv(w: &mut dyn Write, meta: &RunMetadata, cp: &CriticalPoints) -> io::Result<()> {
    meta.write_csv_header(w)?;
    writeln!(w, "kind,start,end")?;
    for &x in &cp.crossovers {
        writeln!(w, "crossover,{},{}", fmt_num(x), fmt_num(x))?;
    }
    for (kind, list) in [
        ("death_interval", &cp.death_intervals),
        ("reqc_zero", &cp.reqc_zeros),
        ("reqc_plateau", &cp.reqc_plateaus),
    ] {
        for iv in list {
            writeln!(w, "{kind},{},{}", fmt_num(iv.start), fmt_num(iv.end))?;
        }
    }
    Ok(())
}
