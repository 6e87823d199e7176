use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use geflochtener::entropy_coder::crc32;
use geflochtener::pipeline::{compress, CompressConfig, Mode};

/// Half boilerplate-ish text, half pseudo-random noise: enough structure to
/// exercise the match finder and enough entropy to exercise block decisions.
fn mixed_input(len: usize) -> Vec<u8> {
    let mut data = Vec::with_capacity(len);
    let mut state = 0x243F_6A88_85A3_08D3u64;
    while data.len() < len {
        data.extend_from_slice(b"a measured sample of compressible benchmark text, ");
        for _ in 0..48 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            data.push((state >> 32) as u8);
        }
    }
    data.truncate(len);
    data
}

fn checksum_throughput(c: &mut Criterion) {
    let data: Vec<u8> = (0..1 << 20).map(|i| (i * 2654435761u64 >> 24) as u8).collect();
    c.bench_function("crc32_1mib", |b| {
        b.iter(|| crc32(std::hint::black_box(&data)))
    });
}

/// The optimal mode parses blocks independently, so the parallel and
/// sequential code paths produce identical bytes; this measures what the
/// runtime toggle costs or buys on the current machine.
fn compression_throughput(c: &mut Criterion) {
    let data = mixed_input(512 * 1024);
    let mut group = c.benchmark_group("compress_512kib");
    group.throughput(Throughput::Bytes(data.len() as u64));
    group.sample_size(10);

    for (label, parallel) in [("parallel", true), ("sequential", false)] {
        let config = CompressConfig { iterations: 5, parallel, ..CompressConfig::default() };
        group.bench_function(BenchmarkId::new("optimal_i5", label), |b| {
            b.iter(|| compress(std::hint::black_box(&data), &config))
        });
    }
    let greedy = CompressConfig { mode: Mode::Greedy, ..CompressConfig::default() };
    group.bench_function(BenchmarkId::new("greedy", "sequential"), |b| {
        b.iter(|| compress(std::hint::black_box(&data), &greedy))
    });
    group.finish();
}

criterion_group!(benches, checksum_throughput, compression_throughput);
criterion_main!(benches);
