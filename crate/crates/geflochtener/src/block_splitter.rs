//! Partitions a token stream into DEFLATE blocks by minimizing an estimated
//! entropy-coded size: repeatedly splits whichever current block's best
//! interior split point reduces the estimate the most, capped at 100 blocks.

use crate::entropy_coder::Histogram;
use crate::lz_store::TokenStore;
use crate::symbols::{dist_extra_bits, length_extra_bits};

pub const DEFAULT_MAX_BLOCKS: usize = 100;

/// Ranges below this are scanned exhaustively; larger ones are probed at
/// nine evenly spaced points and narrowed around the best.
const EXHAUSTIVE_BELOW: usize = 1024;
const PROBES: usize = 9;

/// Interior token-index boundaries, strictly increasing. An empty list is a
/// single block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockPlan {
    pub split_points: Vec<usize>,
}

impl BlockPlan {
    pub fn block_count(&self) -> usize {
        self.split_points.len() + 1
    }

    /// (from, to) token ranges covering 0..len in order.
    pub fn ranges(&self, len: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.block_count());
        let mut from = 0;
        for &p in &self.split_points {
            out.push((from, p));
            from = p;
        }
        out.push((from, len));
        out
    }
}

fn entropy_bits(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let log2_total = (total as f64).log2();
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (log2_total - (c as f64).log2()))
        .sum()
}

/// Estimated encoded size of store[from..to) as one dynamic block: symbol
/// entropy plus extra bits plus a tree-description overhead estimate. An
/// empty range costs the overhead alone. Used only to compare candidate
/// splits; emission later picks real block types with exact sizes.
pub fn estimate_block_cost(store: &TokenStore, from: usize, to: usize) -> f64 {
    let h = Histogram::from_range(store, from, to).with_end_of_block();
    let mut bits = entropy_bits(&h.litlen) + entropy_bits(&h.dist);
    for (sym, &count) in h.litlen.iter().enumerate().skip(257) {
        if count > 0 {
            bits += count as f64 * length_extra_bits(sym as u16) as f64;
        }
    }
    for (sym, &count) in h.dist.iter().enumerate() {
        if count > 0 {
            bits += count as f64 * dist_extra_bits(sym as u16) as f64;
        }
    }
    // Header fields plus roughly four bits of code-length description per
    // used symbol; zero runs compress to almost nothing.
    let used =
        h.litlen.iter().filter(|&&c| c > 0).count() + h.dist.iter().filter(|&&c| c > 0).count();
    bits + 74.0 + 4.0 * used as f64
}

/// Minimizes f over [start, end): exhaustive when small, otherwise probe
/// nine evenly spaced points and narrow around the best until the span is
/// small or the best stops improving.
fn find_minimum(mut f: impl FnMut(usize) -> f64, mut start: usize, mut end: usize) -> (usize, f64) {
    debug_assert!(start < end);
    if end - start < EXHAUSTIVE_BELOW {
        let mut best = (start, f64::INFINITY);
        for i in start..end {
            let v = f(i);
            if v < best.1 {
                best = (i, v);
            }
        }
        return best;
    }
    let mut best = (start, f64::INFINITY);
    while end - start > PROBES {
        let step = (end - start) / (PROBES + 1);
        let points: Vec<usize> = (1..=PROBES).map(|i| start + i * step).collect();
        let mut round_best = (points[0], f(points[0]));
        let mut round_idx = 0;
        for (idx, &p) in points.iter().enumerate().skip(1) {
            let v = f(p);
            if v < round_best.1 {
                round_best = (p, v);
                round_idx = idx;
            }
        }
        if round_best.1 > best.1 {
            break;
        }
        best = round_best;
        start = if round_idx == 0 { start } else { points[round_idx - 1] };
        end = if round_idx == PROBES - 1 { end } else { points[round_idx + 1] };
    }
    best
}

struct Candidate {
    from: usize,
    to: usize,
    cost: f64,
    best_point: usize,
    split_cost: f64,
}

impl Candidate {
    fn new(store: &TokenStore, from: usize, to: usize) -> Self {
        let cost = estimate_block_cost(store, from, to);
        if to - from < 2 {
            return Candidate { from, to, cost, best_point: from, split_cost: f64::INFINITY };
        }
        let (best_point, split_cost) = find_minimum(
            |i| estimate_block_cost(store, from, i) + estimate_block_cost(store, i, to),
            from + 1,
            to,
        );
        Candidate { from, to, cost, best_point, split_cost }
    }

    fn gain(&self) -> f64 {
        self.cost - self.split_cost
    }
}

/// Greedy recursive bisection: each round splits the block whose best
/// interior point most reduces the total estimate, until nothing helps or
/// the cap is reached. Block contents are independent, so each block's best
/// split is computed once, when the block appears.
pub fn split_blocks(store: &TokenStore, max_blocks: usize) -> BlockPlan {
    assert!(max_blocks >= 1);
    let n = store.len();
    if n < 2 || max_blocks == 1 {
        return BlockPlan::default();
    }
    let mut blocks = vec![Candidate::new(store, 0, n)];
    while blocks.len() < max_blocks {
        let best = blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.gain() > 0.0)
            .max_by(|(_, a), (_, b)| a.gain().total_cmp(&b.gain()))
            .map(|(i, _)| i);
        let Some(i) = best else { break };
        let Candidate { from, to, best_point, .. } = blocks[i];
        blocks[i] = Candidate::new(store, from, best_point);
        blocks.insert(i + 1, Candidate::new(store, best_point, to));
    }
    let mut split_points: Vec<usize> = blocks.iter().skip(1).map(|b| b.from).collect();
    split_points.sort_unstable();
    BlockPlan { split_points }
}
