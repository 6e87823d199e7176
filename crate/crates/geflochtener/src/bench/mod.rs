//! Corpus benchmark harness: runs the configured codecs over corpus files,
//! computes the report metrics, and renders CSV plus a comparison against
//! the recorded measurement tables.

pub mod archive;
pub mod corpus;
pub mod metrics;

pub use corpus::{CorpusError, CorpusFile, CorpusSpec};
pub use metrics::{
    compression_percentage, redundancy_rate, transmit_time_ms, LinkSpeed, MetricsError, Percent,
    RecordedCell, RECORDED,
};

use crate::baselines::{lz77_compress, lzss_compress};
use crate::entropy_coder::Format;
use crate::pipeline::{compress, CompressConfig, Mode};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

/// Window bounds for the reference codecs when benchmarked; the toy LZ77
/// scan is quadratic, so corpus runs with it are opt-in and slow.
const LZ77_SEARCH: usize = 32_768;
const LZ77_LOOKAHEAD: usize = 255;
const LZSS_MIN_MATCH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codec {
    Lz77,
    Lzss,
    GeflochtenerGreedy,
    GeflochtenerOptimal,
}

impl Codec {
    pub const ALL: [Codec; 4] =
        [Codec::Lz77, Codec::Lzss, Codec::GeflochtenerGreedy, Codec::GeflochtenerOptimal];

    pub fn parse(name: &str) -> Option<Codec> {
        match name {
            "lz77" => Some(Codec::Lz77),
            "lzss" => Some(Codec::Lzss),
            "geflochtener-greedy" => Some(Codec::GeflochtenerGreedy),
            "geflochtener-optimal" => Some(Codec::GeflochtenerOptimal),
            _ => None,
        }
    }

    /// Row label; a non-default refinement budget is part of the label so
    /// every row records the preset that produced it.
    fn label(self, iterations: usize) -> String {
        match self {
            Codec::Lz77 => "lz77".into(),
            Codec::Lzss => "lzss".into(),
            Codec::GeflochtenerGreedy => "geflochtener-greedy".into(),
            Codec::GeflochtenerOptimal if iterations == 100 => "geflochtener-optimal".into(),
            Codec::GeflochtenerOptimal => format!("geflochtener-optimal@i{iterations}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub codecs: Vec<Codec>,
    pub link: LinkSpeed,
    /// Refinement rounds for the optimal codec (100 reproduces the
    /// published setup; 15 is the fast preset).
    pub iterations: usize,
    /// Concurrent file compressions; effective with the parallel feature.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            codecs: vec![Codec::GeflochtenerGreedy, Codec::GeflochtenerOptimal],
            link: LinkSpeed::default(),
            iterations: 100,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub corpus: String,
    pub file: String,
    pub codec: String,
    pub lo: u64,
    pub lc: u64,
    /// None only for an empty input, where the ratio is undefined.
    pub cp: Option<Percent>,
    pub transmit_ms: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    /// Per-file rows ordered by (corpus, file, codec) as configured.
    pub rows: Vec<BenchRow>,
    /// One TOTAL row per codec.
    pub totals: Vec<BenchRow>,
    /// Per-file diagnostics for members that were skipped.
    pub missing: Vec<String>,
}

fn compress_with(codec: Codec, data: &[u8], iterations: usize) -> u64 {
    match codec {
        Codec::Lz77 => lz77_compress(data, LZ77_SEARCH, LZ77_LOOKAHEAD).len() as u64,
        Codec::Lzss => lzss_compress(data, LZSS_MIN_MATCH).len() as u64,
        Codec::GeflochtenerGreedy => {
            let config =
                CompressConfig { mode: Mode::Greedy, format: Format::Gzip, ..Default::default() };
            compress(data, &config).0.len() as u64
        }
        Codec::GeflochtenerOptimal => {
            let config = CompressConfig {
                mode: Mode::Optimal,
                format: Format::Gzip,
                iterations,
                ..Default::default()
            };
            compress(data, &config).0.len() as u64
        }
    }
}

fn bench_file(
    label: &str,
    name: &str,
    data: &[u8],
    config: &BenchConfig,
) -> Vec<BenchRow> {
    config
        .codecs
        .iter()
        .map(|&codec| {
            let started = Instant::now();
            let lc = compress_with(codec, data, config.iterations);
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;
            let lo = data.len() as u64;
            BenchRow {
                corpus: label.to_string(),
                file: name.to_string(),
                codec: codec.label(config.iterations),
                lo,
                lc,
                cp: compression_percentage(lo, lc).ok(),
                transmit_ms: transmit_time_ms(lc, config.link.bytes_per_ms()),
                wall_ms,
            }
        })
        .collect()
}

/// Loads one member, enforcing the manifest size. With a prefix limit the
/// on-disk file may be any length at or above the limit (a partial
/// download of a large corpus is fine at desk scale).
fn load_member(
    dir: &Path,
    file: &CorpusFile,
    prefix: Option<u64>,
) -> Result<Vec<u8>, String> {
    let path = dir.join(&file.name);
    let data = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let actual = data.len() as u64;
    let ok = match prefix {
        Some(limit) => actual == file.size || (actual >= limit && actual <= file.size),
        None => actual == file.size,
    };
    if !ok {
        return Err(format!(
            "{}: expected {} bytes, found {actual}",
            path.display(),
            file.size
        ));
    }
    let mut data = data;
    if let Some(limit) = prefix {
        data.truncate(limit as usize);
    }
    Ok(data)
}

/// Runs every configured codec over every present corpus member. Missing
/// or size-mismatched members produce a diagnostic and skipped rows; the
/// caller decides the exit status from `missing`.
pub fn run_corpus(spec: &CorpusSpec, dir: &Path, config: &BenchConfig) -> BenchReport {
    let label = spec.label();
    let jobs: Vec<(usize, Result<Vec<u8>, String>)> = spec
        .files
        .iter()
        .enumerate()
        .map(|(i, f)| (i, load_member(dir, f, spec.prefix_limit)))
        .collect();

    let run = |(i, loaded): &(usize, Result<Vec<u8>, String>)| match loaded {
        Ok(data) => Ok(bench_file(&label, &spec.files[*i].name, data, config)),
        Err(diag) => Err(diag.clone()),
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Result<Vec<BenchRow>, String>> = if config.jobs > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
            Ok(pool) => pool.install(|| {
                use rayon::prelude::*;
                jobs.par_iter().map(run).collect()
            }),
            Err(_) => jobs.iter().map(run).collect(),
        }
    } else {
        jobs.iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<Vec<BenchRow>, String>> = jobs.iter().map(run).collect();

    let mut report = BenchReport::default();
    for result in results {
        match result {
            Ok(rows) => report.rows.extend(rows),
            Err(diag) => report.missing.push(diag),
        }
    }

    for &codec in &config.codecs {
        let codec_label = codec.label(config.iterations);
        let picked: Vec<&BenchRow> =
            report.rows.iter().filter(|r| r.codec == codec_label).collect();
        if picked.is_empty() {
            continue;
        }
        let lo: u64 = picked.iter().map(|r| r.lo).sum();
        let lc: u64 = picked.iter().map(|r| r.lc).sum();
        report.totals.push(BenchRow {
            corpus: label.clone(),
            file: "TOTAL".to_string(),
            codec: codec_label,
            lo,
            lc,
            cp: compression_percentage(lo, lc).ok(),
            transmit_ms: transmit_time_ms(lc, config.link.bytes_per_ms()),
            wall_ms: picked.iter().map(|r| r.wall_ms).sum(),
        });
    }
    report
}

fn csv_row(out: &mut String, row: &BenchRow) {
    let cp = row.cp.map_or("NA".to_string(), |p| p.to_string());
    let _ = writeln!(
        out,
        "{},{},{},{},{},{cp},{:.1},{:.1}",
        row.corpus, row.file, row.codec, row.lo, row.lc, row.transmit_ms, row.wall_ms
    );
}

impl BenchReport {
    /// Fixed column order; everything in the human summary is here too.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("corpus,file,codec,LO,LC,CP,transmit_ms,wall_ms\n");
        for row in self.rows.iter().chain(&self.totals) {
            csv_row(&mut out, row);
        }
        out
    }

    /// Human-readable totals plus the recorded-table comparison when the
    /// corpus matches one of the embedded rows.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for t in &self.totals {
            let cp = t.cp.map_or("NA".to_string(), |p| p.to_string());
            let _ = writeln!(
                out,
                "{} {} LO={} LC={} CP={cp}% transmit={:.1}ms wall={:.1}ms",
                t.corpus, t.codec, t.lo, t.lc, t.transmit_ms, t.wall_ms
            );
            for cell in RECORDED.iter().filter(|c| c.corpus == t.corpus) {
                let against = compression_percentage(cell.original, cell.compressed)
                    .map(|p| p.to_string())
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "  recorded {}: LC={} CP={against}% transmit={:.1}ms",
                    cell.codec, cell.compressed, cell.transmit_ms
                );
            }
        }
        for diag in &self.missing {
            let _ = writeln!(out, "SKIPPED {diag}");
        }
        out
    }
}
