//! Report metrics: compression percentage in exact rational arithmetic,
//! its redundancy framing, and the analytic transmission-time model.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("compression percentage is undefined when the original is empty")]
    UndefinedForEmptyInput,
}

/// A percentage held in hundredths so two-decimal reporting is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Percent(i64);

impl Percent {
    pub fn from_centi(centi: i64) -> Percent {
        Percent(centi)
    }

    pub fn centi(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

/// CP = (LO - LC) / LO x 100 rounded half away from zero to two decimals,
/// computed in integers. LC > LO is legal and yields a negative value.
pub fn compression_percentage(lo: u64, lc: u64) -> Result<Percent, MetricsError> {
    if lo == 0 {
        return Err(MetricsError::UndefinedForEmptyInput);
    }
    let num = (lo as i128 - lc as i128) * 10_000;
    let den = lo as i128;
    let q = (num.abs() * 2 + den) / (den * 2);
    Ok(Percent(if num < 0 { -q as i64 } else { q as i64 }))
}

/// The redundancy removed equals CP under this report's reading of
/// "100 minus the compressed ratio"; it keeps its own name because the
/// published tables report it as a separate figure.
pub fn redundancy_rate(cp: Percent) -> Percent {
    cp
}

/// Modeled milliseconds to move `size` bytes over a link. An analytic
/// figure, not a measured transfer.
pub fn transmit_time_ms(size: u64, bytes_per_ms: f64) -> f64 {
    assert!(bytes_per_ms > 0.0, "link speed must be positive");
    size as f64 / bytes_per_ms
}

/// The published throughput table divides to ~10236 bytes/ms even though
/// its prose says "10 MBps"; both readings are provided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkSpeed {
    Paper,
    TenMBps,
    Custom(f64),
}

impl LinkSpeed {
    pub fn bytes_per_ms(self) -> f64 {
        match self {
            LinkSpeed::Paper => 10_236.0,
            LinkSpeed::TenMBps => 10_000.0,
            LinkSpeed::Custom(v) => v,
        }
    }
}

impl Default for LinkSpeed {
    fn default() -> Self {
        LinkSpeed::Paper
    }
}

/// One published measurement row: recorded compressed size in bytes and
/// recorded transmission milliseconds for a corpus/codec cell.
#[derive(Debug, Clone, Copy)]
pub struct RecordedCell {
    pub corpus: &'static str,
    pub original: u64,
    pub codec: &'static str,
    pub compressed: u64,
    pub transmit_ms: f64,
}

/// The recorded comparison table. These are embedded constants; the
/// harness never invokes the third-party compressors themselves.
pub const RECORDED: [RecordedCell; 12] = [
    RecordedCell { corpus: "calgary", original: 3_141_622, codec: "gzip-9", compressed: 1_017_624, transmit_ms: 99.4 },
    RecordedCell { corpus: "calgary", original: 3_141_622, codec: "7zip", compressed: 980_674, transmit_ms: 95.8 },
    RecordedCell { corpus: "calgary", original: 3_141_622, codec: "kzip", compressed: 978_993, transmit_ms: 95.6 },
    RecordedCell { corpus: "calgary", original: 3_141_622, codec: "geflochtener", compressed: 974_067, transmit_ms: 95.2 },
    RecordedCell { corpus: "canterbury", original: 2_818_976, codec: "gzip-9", compressed: 730_732, transmit_ms: 71.4 },
    RecordedCell { corpus: "canterbury", original: 2_818_976, codec: "7zip", compressed: 675_163, transmit_ms: 65.9 },
    RecordedCell { corpus: "canterbury", original: 2_818_976, codec: "kzip", compressed: 674_321, transmit_ms: 65.9 },
    RecordedCell { corpus: "canterbury", original: 2_818_976, codec: "geflochtener", compressed: 668_456, transmit_ms: 65.3 },
    RecordedCell { corpus: "enwik8", original: 100_000_000, codec: "gzip-9", compressed: 36_445_248, transmit_ms: 3559.1 },
    RecordedCell { corpus: "enwik8", original: 100_000_000, codec: "7zip", compressed: 35_102_976, transmit_ms: 3428.0 },
    RecordedCell { corpus: "enwik8", original: 100_000_000, codec: "kzip", compressed: 35_025_767, transmit_ms: 3420.5 },
    RecordedCell { corpus: "enwik8", original: 100_000_000, codec: "geflochtener", compressed: 34_986_660, transmit_ms: 3417.6 },
];
