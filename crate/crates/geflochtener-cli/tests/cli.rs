//! Drives the installed binary end to end: round trips, exit codes, bench
//! reports, and archive unpacking.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_geflochtener"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn sample_bytes() -> Vec<u8> {
    let mut data = b"a sample of compressible text. ".repeat(300);
    data.extend((0..4000u64).map(|i| (i.wrapping_mul(0x2545F4914F6CDD1D) >> 40) as u8));
    data
}

#[test]
fn compress_then_decompress_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    let packed = dir.path().join("out.gz");
    let unpacked = dir.path().join("back.bin");
    std::fs::write(&input, sample_bytes()).unwrap();

    let out = run(&[
        "compress",
        "--fast",
        "-o",
        packed.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stats = stdout(&out);
    for needle in ["LO=", "LC=", "CP=", "blocks=", "iterations=", "mode=optimal", "format=gzip"] {
        assert!(stats.contains(needle), "missing {needle} in {stats:?}");
    }

    let out = run(&[
        "decompress",
        "-o",
        unpacked.to_str().unwrap(),
        packed.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("checksum verified"));
    assert_eq!(std::fs::read(&unpacked).unwrap(), sample_bytes());
}

#[test]
fn empty_input_notes_the_undefined_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty");
    let packed = dir.path().join("empty.gz");
    std::fs::write(&input, b"").unwrap();
    let out = run(&["compress", "-o", packed.to_str().unwrap(), input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("undefined"));
    assert_eq!(std::fs::read(&packed).unwrap().len(), 20);
}

#[test]
fn identical_invocations_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    std::fs::write(&input, sample_bytes()).unwrap();
    let a = dir.path().join("a.gz");
    let b = dir.path().join("b.gz");
    for target in [&a, &b] {
        let out = run(&[
            "compress",
            "--fast",
            "-o",
            target.to_str().unwrap(),
            input.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn optimal_beats_or_ties_greedy_and_zlib_raw_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    std::fs::write(&input, sample_bytes()).unwrap();

    let mut sizes = Vec::new();
    for (mode, name) in [("greedy", "g"), ("optimal", "o")] {
        let packed = dir.path().join(format!("{name}.gz"));
        let out = run(&[
            "compress",
            "--mode",
            mode,
            "--fast",
            "-o",
            packed.to_str().unwrap(),
            input.to_str().unwrap(),
        ]);
        assert!(out.status.success() || mode == "greedy", "{}", stderr(&out));
        sizes.push(std::fs::metadata(&packed).unwrap().len());
    }
    assert!(sizes[1] <= sizes[0], "optimal {} vs greedy {}", sizes[1], sizes[0]);

    for format in ["zlib", "raw"] {
        let packed = dir.path().join(format!("x.{format}"));
        let unpacked = dir.path().join(format!("x.{format}.out"));
        let out = run(&[
            "compress",
            "--mode",
            "greedy",
            "--format",
            format,
            "-o",
            packed.to_str().unwrap(),
            input.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let out = run(&[
            "decompress",
            "-o",
            unpacked.to_str().unwrap(),
            packed.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert_eq!(std::fs::read(&unpacked).unwrap(), sample_bytes());
    }
}

#[test]
fn io_problems_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "compress",
        "-o",
        dir.path().join("x.gz").to_str().unwrap(),
        dir.path().join("no-such-file").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn corrupt_streams_exit_three_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    let packed = dir.path().join("out.gz");
    std::fs::write(&input, sample_bytes()).unwrap();
    let out = run(&[
        "compress",
        "--fast",
        "-o",
        packed.to_str().unwrap(),
        input.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let mut bytes = std::fs::read(&packed).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x10;
    let corrupt = dir.path().join("corrupt.gz");
    std::fs::write(&corrupt, &bytes).unwrap();
    let out = run(&[
        "decompress",
        "-o",
        dir.path().join("never").to_str().unwrap(),
        corrupt.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    assert!(!stderr(&out).is_empty());
}

#[test]
fn unknown_corpus_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "bench",
        "--corpus",
        "nonexistent",
        "--csv",
        dir.path().join("r.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("unknown corpus"));
}

fn write_demo_corpus(dir: &Path) -> (String, Vec<u8>, Vec<u8>) {
    let text = b"bench me, bench me, bench me again and again. ".repeat(40);
    let noise: Vec<u8> =
        (0..1200u64).map(|i| (i.wrapping_mul(0x9E3779B97F4A7C15) >> 55) as u8).collect();
    std::fs::write(dir.join("text.txt"), &text).unwrap();
    std::fs::write(dir.join("noise.bin"), &noise).unwrap();
    let manifest = format!(
        "name demo\nfile text.txt {}\nfile noise.bin {}\n",
        text.len(),
        noise.len()
    );
    (manifest, text, noise)
}

#[test]
fn bench_writes_the_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, ..) = write_demo_corpus(dir.path());
    let manifest_path = dir.path().join("demo.manifest");
    std::fs::write(&manifest_path, manifest).unwrap();
    let csv_path = dir.path().join("report.csv");

    let out = run(&[
        "bench",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--dir",
        dir.path().to_str().unwrap(),
        "--codec",
        "lz77,lzss,geflochtener-greedy,geflochtener-optimal",
        "--fast",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summary = stdout(&out);
    assert!(summary.contains("TOTAL") || summary.contains("demo"), "{summary}");

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "corpus,file,codec,LO,LC,CP,transmit_ms,wall_ms");
    // 2 files x 4 codecs + 4 totals.
    assert_eq!(csv.lines().count(), 1 + 8 + 4);
    assert!(csv.contains("geflochtener-optimal@i15"));
}

#[test]
fn bench_missing_members_exit_four_but_still_report() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, ..) = write_demo_corpus(dir.path());
    let manifest_path = dir.path().join("demo.manifest");
    std::fs::write(&manifest_path, format!("{manifest}file gone.dat 5\n")).unwrap();
    let csv_path = dir.path().join("report.csv");

    let out = run(&[
        "bench",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--dir",
        dir.path().to_str().unwrap(),
        "--fast",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("SKIPPED"));
    // Rows for the present members were still written.
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.contains("text.txt"));
}

#[test]
fn bad_link_speed_is_a_usage_error() {
    let out = run(&["bench", "--corpus", "canterbury", "--link-speed", "warp9", "--csv", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

/// Minimal tar builder so fetch can be exercised without a network.
fn build_tar(members: &[(&str, &[u8])]) -> Vec<u8> {
    let mut out = Vec::new();
    for &(name, data) in members {
        let mut header = [0u8; 512];
        header[..name.len()].copy_from_slice(name.as_bytes());
        let size = format!("{:011o}\0", data.len());
        header[124..124 + size.len()].copy_from_slice(size.as_bytes());
        header[156] = b'0';
        header[257..262].copy_from_slice(b"ustar");
        header[148..156].copy_from_slice(b"        ");
        let sum: u64 = header.iter().map(|&b| b as u64).sum();
        let check = format!("{sum:06o}\0 ");
        header[148..156].copy_from_slice(check.as_bytes());
        out.extend_from_slice(&header);
        out.extend_from_slice(data);
        out.resize(out.len().div_ceil(512) * 512, 0);
    }
    out.extend_from_slice(&[0u8; 1024]);
    out
}

#[test]
fn fetch_unpacks_a_local_archive_and_bench_runs_on_it() {
    let dir = tempfile::tempdir().unwrap();
    let text = b"corpus member payload with repetition repetition".repeat(10);
    let tar = build_tar(&[("demo/member.txt", &text)]);
    let archive_path = dir.path().join("demo.tar");
    std::fs::write(&archive_path, tar).unwrap();

    let manifest_path = dir.path().join("demo.manifest");
    std::fs::write(&manifest_path, format!("name demo\nfile member.txt {}\n", text.len()))
        .unwrap();

    let corpus_dir = dir.path().join("corpus");
    let out = run(&[
        "fetch",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--archive",
        archive_path.to_str().unwrap(),
        "--dir",
        corpus_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("unpacked 1/1"));
    assert_eq!(std::fs::read(corpus_dir.join("member.txt")).unwrap(), text);

    let csv_path = dir.path().join("report.csv");
    let out = run(&[
        "bench",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--dir",
        corpus_dir.to_str().unwrap(),
        "--fast",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn fetch_reports_archive_members_missing_from_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let tar = build_tar(&[("other.txt", b"not the member you want")]);
    let archive_path = dir.path().join("demo.tar");
    std::fs::write(&archive_path, tar).unwrap();
    let manifest_path = dir.path().join("demo.manifest");
    std::fs::write(&manifest_path, "name demo\nfile wanted.txt 5\n").unwrap();

    let out = run(&[
        "fetch",
        "--manifest",
        manifest_path.to_str().unwrap(),
        "--archive",
        archive_path.to_str().unwrap(),
        "--dir",
        dir.path().join("c").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("no member named"));
}
