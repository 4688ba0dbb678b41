//! Versioned JSON envelope and CSV histogram output.
//!
//! Floating-point numbers are written with 17 significant digits
//! (`{:.16e}`), which is enough for every `f64` to round-trip exactly.

use std::io;

use serde::{Deserialize, Serialize};

use crate::experiments::HistogramBin;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope<T> {
    pub schema_version: String,
    pub command: String,
    pub timestamp_utc: String,
    /// `"nats"` unless entropies were converted for display.
    pub units: String,
    pub payload: T,
}

impl<T> ReportEnvelope<T> {
    pub fn new(command: &str, units: &str, payload: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            timestamp_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            units: units.to_string(),
            payload,
        }
    }
}

/// `x` with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats. Non-finite floats become `null`.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Histogram rows `bin_low,bin_high,count` under a header row.
pub fn write_histogram_csv<W: io::Write>(writer: W, bins: &[HistogramBin]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["bin_low", "bin_high", "count"])?;
    for b in bins {
        w.write_record([format_f64(b.bin_low), format_f64(b.bin_high), b.count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses rows written by [`write_histogram_csv`].
pub fn read_histogram_csv<R: io::Read>(reader: R) -> csv::Result<Vec<HistogramBin>> {
    let mut r = csv::Reader::from_reader(reader);
    r.deserialize().collect()
}
