//! Command-line surface: compress, decompress, bench, and fetch.
//!
//! Exit codes are stable: 0 success, 2 I/O or usage problems, 3 corrupt
//! stream, 4 corpus errors.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use geflochtener::bench::{
    self, compression_percentage, BenchConfig, Codec, CorpusSpec, LinkSpeed,
};
use geflochtener::bench::archive::read_archive;
use geflochtener::entropy_coder::Format;
use geflochtener::inflate::decode_any;
use geflochtener::match_finder::{ScorePolicy, TieBreak};
use geflochtener::pipeline::{compress, CompressConfig, Mode};

const EXIT_IO: i32 = 2;
const EXIT_CORRUPT: i32 = 3;
const EXIT_CORPUS: i32 = 4;

#[derive(Parser)]
#[command(name = "geflochtener", version, about = "Lossless gzip-compatible compression toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Greedy,
    Optimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Gzip,
    Zlib,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    LargestDistance,
    SmallestDistance,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreArg {
    Identity,
    DistancePenalty,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodecArg {
    Lz77,
    Lzss,
    GeflochtenerGreedy,
    GeflochtenerOptimal,
}

impl CodecArg {
    fn codec(self) -> Codec {
        match self {
            CodecArg::Lz77 => Codec::Lz77,
            CodecArg::Lzss => Codec::Lzss,
            CodecArg::GeflochtenerGreedy => Codec::GeflochtenerGreedy,
            CodecArg::GeflochtenerOptimal => Codec::GeflochtenerOptimal,
        }
    }
}

fn parse_link_speed(s: &str) -> Result<LinkSpeed, String> {
    match s {
        "paper" => Ok(LinkSpeed::Paper),
        "10MBps" => Ok(LinkSpeed::TenMBps),
        other => {
            let v: f64 = other
                .parse()
                .map_err(|_| "expected `paper`, `10MBps`, or bytes per millisecond".to_string())?;
            if v > 0.0 {
                Ok(LinkSpeed::Custom(v))
            } else {
                Err("link speed must be positive".to_string())
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compress a file into a gzip, zlib, or raw DEFLATE container.
    Compress {
        #[arg(long, value_enum, default_value = "optimal")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "gzip")]
        format: FormatArg,
        /// Cost-model refinement rounds per block in optimal mode.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        iterations: u32,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..=100))]
        max_blocks: u32,
        /// Which distance wins among equal-length matches.
        #[arg(long, value_enum, default_value = "largest-distance")]
        tie_break: TieArg,
        /// Match scoring: plain length, or penalize far distances.
        #[arg(long, value_enum, default_value = "identity")]
        score: ScoreArg,
        /// Preset: 15 refinement rounds instead of 100.
        #[arg(long, conflicts_with = "iterations")]
        fast: bool,
        /// Compress blocks one at a time even when built with rayon.
        #[arg(long)]
        sequential: bool,
        #[arg(short, long, value_name = "OUT")]
        output: PathBuf,
        input: PathBuf,
    },
    /// Decompress a gzip, zlib, or raw DEFLATE file (format is sniffed).
    Decompress {
        #[arg(short, long, value_name = "OUT")]
        output: PathBuf,
        input: PathBuf,
    },
    /// Run codecs over a corpus and write a CSV report.
    Bench {
        /// Built-in corpus name: calgary, canterbury, or enwik8.
        #[arg(long, conflicts_with = "manifest")]
        corpus: Option<String>,
        /// Manifest file describing a custom corpus.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',',
              default_values = ["geflochtener-greedy", "geflochtener-optimal"])]
        codec: Vec<CodecArg>,
        /// `paper` (10236 bytes/ms), `10MBps` (10000), or a number.
        #[arg(long, value_parser = parse_link_speed, default_value = "paper")]
        link_speed: LinkSpeed,
        /// Compress only the first N bytes of each member.
        #[arg(long, value_name = "BYTES")]
        prefix: Option<u64>,
        /// Concurrent file compressions.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        jobs: u32,
        /// Directory holding the corpus files.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Preset: 15 refinement rounds instead of 100.
        #[arg(long, conflicts_with = "iterations")]
        fast: bool,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        iterations: Option<u32>,
        /// Where to write the CSV report.
        #[arg(long, value_name = "OUT")]
        csv: PathBuf,
    },
    /// Download (or unpack a local archive of) a corpus into a directory.
    Fetch {
        /// Built-in corpus name: calgary, canterbury, or enwik8.
        #[arg(long, conflicts_with = "manifest")]
        corpus: Option<String>,
        /// Manifest file describing a custom corpus.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Override the manifest's source URL.
        #[arg(long, conflicts_with = "archive")]
        url: Option<String>,
        /// Unpack an already-downloaded archive instead of fetching.
        #[arg(long, value_name = "PATH")]
        archive: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_IO, message: message.into() }
    }

    fn corrupt(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_CORRUPT, message: message.into() }
    }

    fn corpus(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_CORPUS, message: message.into() }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn cmd_compress(
    input: &Path,
    output: &Path,
    config: &CompressConfig,
    mode_name: &str,
    format_name: &str,
) -> Result<(), Failure> {
    let data = read_file(input)?;
    let (bytes, report) = compress(&data, config);
    write_file(output, &bytes)?;
    let cp = match compression_percentage(report.input_len as u64, report.output_len as u64) {
        Ok(p) => format!("{p}%"),
        Err(_) => "undefined (LO=0, empty input)".to_string(),
    };
    println!(
        "LO={} LC={} CP={cp} blocks={} iterations={} mode={mode_name} format={format_name}",
        report.input_len, report.output_len, report.blocks, report.iterations_run
    );
    Ok(())
}

fn cmd_decompress(input: &Path, output: &Path) -> Result<(), Failure> {
    let data = read_file(input)?;
    let (result, format) = decode_any(&data).map_err(|e| Failure::corrupt(e.to_string()))?;
    write_file(output, &result.output)?;
    let checked = if result.checksum_verified { "checksum verified" } else { "no checksum (raw)" };
    let format_name = match format {
        Format::Gzip => "gzip",
        Format::Zlib => "zlib",
        Format::Raw => "raw",
    };
    println!("wrote {} ({} bytes, format={format_name}, {checked})", output.display(), result.output.len());
    Ok(())
}

fn resolve_spec(
    corpus: &Option<String>,
    manifest: &Option<PathBuf>,
    prefix: Option<u64>,
) -> Result<CorpusSpec, Failure> {
    let mut spec = match (corpus, manifest) {
        (Some(name), None) => CorpusSpec::builtin(name).ok_or_else(|| {
            Failure::corpus(format!(
                "unknown corpus {name:?}; built-ins are calgary, canterbury, enwik8"
            ))
        })?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
            CorpusSpec::parse_manifest(&text).map_err(|e| Failure::corpus(e.to_string()))?
        }
        _ => return Err(Failure::corpus("pass exactly one of --corpus or --manifest")),
    };
    if prefix.is_some() {
        spec.prefix_limit = prefix;
    }
    Ok(spec)
}

fn cmd_bench(
    spec: &CorpusSpec,
    dir: &Path,
    config: &BenchConfig,
    csv_path: &Path,
) -> Result<(), Failure> {
    let report = bench::run_corpus(spec, dir, config);
    write_file(csv_path, report.to_csv().as_bytes())?;
    print!("{}", report.summary());
    println!("csv written to {}", csv_path.display());
    if report.missing.is_empty() {
        Ok(())
    } else {
        Err(Failure::corpus(format!("{} corpus member(s) skipped", report.missing.len())))
    }
}

fn fetch_bytes(url: &str) -> Result<Vec<u8>, Failure> {
    let agent = ureq::AgentBuilder::new()
        .timeout_connect(Duration::from_secs(20))
        .timeout(Duration::from_secs(600))
        .build();
    let response = agent
        .get(url)
        .call()
        .map_err(|e| Failure::io(format!("fetch {url} failed: {e}; download the archive manually and pass --archive")))?;
    let mut bytes = Vec::new();
    use std::io::Read;
    response
        .into_reader()
        .read_to_end(&mut bytes)
        .map_err(|e| Failure::io(format!("fetch {url} failed mid-body: {e}")))?;
    Ok(bytes)
}

fn cmd_fetch(
    spec: &CorpusSpec,
    url: &Option<String>,
    archive: &Option<PathBuf>,
    dir: &Path,
) -> Result<(), Failure> {
    let bytes = match (archive, url.as_ref().or(spec.source_url.as_ref())) {
        (Some(path), _) => read_file(path)?,
        (None, Some(url)) => fetch_bytes(url)?,
        (None, None) => {
            return Err(Failure::corpus("no source URL known; pass --url or --archive"))
        }
    };
    let entries = read_archive(&bytes).map_err(|e| Failure::corrupt(e.to_string()))?;
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::io(format!("cannot create {}: {e}", dir.display())))?;

    let mut written = 0usize;
    for member in &spec.files {
        let found = entries.iter().find(|e| {
            e.name == member.name || e.name.rsplit('/').next() == Some(member.name.as_str())
        });
        match found {
            Some(entry) => {
                if entry.data.len() as u64 != member.size {
                    eprintln!(
                        "warning: {} is {} bytes in the archive, manifest says {}",
                        member.name,
                        entry.data.len(),
                        member.size
                    );
                }
                write_file(&dir.join(&member.name), &entry.data)?;
                written += 1;
            }
            None => eprintln!("warning: archive has no member named {:?}", member.name),
        }
    }
    println!("unpacked {written}/{} members into {}", spec.files.len(), dir.display());
    if written == spec.files.len() {
        Ok(())
    } else {
        Err(Failure::corpus("some manifest members were missing from the archive"))
    }
}

fn run() -> Result<(), Failure> {
    match Cli::parse().command {
        Command::Compress {
            mode,
            format,
            iterations,
            max_blocks,
            tie_break,
            score,
            fast,
            sequential,
            output,
            input,
        } => {
            let config = CompressConfig {
                mode: match mode {
                    ModeArg::Greedy => Mode::Greedy,
                    ModeArg::Optimal => Mode::Optimal,
                },
                format: match format {
                    FormatArg::Gzip => Format::Gzip,
                    FormatArg::Zlib => Format::Zlib,
                    FormatArg::Raw => Format::Raw,
                },
                iterations: if fast { 15 } else { iterations as usize },
                max_blocks: max_blocks as usize,
                tie: match tie_break {
                    TieArg::LargestDistance => TieBreak::LargestDistance,
                    TieArg::SmallestDistance => TieBreak::SmallestDistance,
                },
                score: match score {
                    ScoreArg::Identity => ScorePolicy::Identity,
                    ScoreArg::DistancePenalty => ScorePolicy::DistancePenalty,
                },
                parallel: !sequential,
            };
            let mode_name = match config.mode {
                Mode::Greedy => "greedy",
                Mode::Optimal => "optimal",
            };
            let format_name = match config.format {
                Format::Gzip => "gzip",
                Format::Zlib => "zlib",
                Format::Raw => "raw",
            };
            cmd_compress(&input, &output, &config, mode_name, format_name)
        }
        Command::Decompress { output, input } => cmd_decompress(&input, &output),
        Command::Bench {
            corpus,
            manifest,
            codec,
            link_speed,
            prefix,
            jobs,
            dir,
            fast,
            iterations,
            csv,
        } => {
            let spec = resolve_spec(&corpus, &manifest, prefix)?;
            let config = BenchConfig {
                codecs: codec.into_iter().map(CodecArg::codec).collect(),
                link: link_speed,
                iterations: if fast { 15 } else { iterations.unwrap_or(100) as usize },
                jobs: jobs as usize,
            };
            cmd_bench(&spec, &dir, &config, &csv)
        }
        Command::Fetch { corpus, manifest, url, archive, dir } => {
            let spec = resolve_spec(&corpus, &manifest, None)?;
            cmd_fetch(&spec, &url, &archive, &dir)
        }
    }
}

fn main() {
    if let Err(failure) = run() {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}
