//! Length-limited canonical Huffman code construction via package-merge.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HuffmanError {
    #[error("no symbol has a nonzero frequency")]
    NoSymbols,
    #[error("{symbols} used symbols cannot fit in {max_bits}-bit codes")]
    CapTooTight { symbols: usize, max_bits: u32 },
}

/// Code lengths plus the canonical codewords derived from them.
///
/// Canonical ordering: shorter codes numerically precede longer (compared as
/// left-aligned prefixes); equal lengths are ordered by symbol index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanCode {
    pub lengths: Vec<u32>,
    pub codes: Vec<u32>,
}

impl HuffmanCode {
    pub fn from_lengths(lengths: Vec<u32>) -> Self {
        let codes = canonical_codes(&lengths);
        HuffmanCode { lengths, codes }
    }

    pub fn from_freqs(freqs: &[usize], max_bits: u32) -> Result<Self, HuffmanError> {
        Ok(Self::from_lengths(build_length_limited_huffman(freqs, max_bits)?))
    }
}

/// Optimal code lengths subject to a `max_bits` cap (package-merge).
///
/// Zero-frequency symbols get length 0; a single used symbol gets length 1
/// (DEFLATE forbids length 0 for a used symbol). Errors when nothing is used.
pub fn build_length_limited_huffman(
    freqs: &[usize],
    max_bits: u32,
) -> Result<Vec<u32>, HuffmanError> {
    let mut lengths = vec![0u32; freqs.len()];
    let mut leaves: Vec<(usize, usize)> = freqs
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f > 0)
        .map(|(sym, &f)| (f, sym))
        .collect();
    let m = leaves.len();
    if m == 0 {
        return Err(HuffmanError::NoSymbols);
    }
    if m == 1 {
        lengths[leaves[0].1] = 1;
        return Ok(lengths);
    }
    if max_bits >= 64 || m > (1usize << max_bits.min(63)) {
        return Err(HuffmanError::CapTooTight { symbols: m, max_bits });
    }
    leaves.sort_unstable();

    // Coin-collector lists, deepest level first. Each level's list merges the
    // sorted leaves with pairwise packages of the level below; every item is
    // tagged leaf or package. Equal weights order leaves before packages.
    // The leaves consumed at any level form a prefix of the sorted leaf array,
    // so per-level leaf counts fully determine the code lengths.
    let levels = max_bits as usize;
    let mut lists: Vec<Vec<(u64, bool)>> = Vec::with_capacity(levels);
    let leaf_items: Vec<(u64, bool)> = leaves.iter().map(|&(f, _)| (f as u64, false)).collect();
    lists.push(leaf_items.clone());
    for _ in 1..levels {
        let below = lists.last().unwrap();
        let mut merged = Vec::with_capacity(leaf_items.len() + below.len() / 2);
        let mut li = 0;
        for pair in below.chunks_exact(2) {
            let w = pair[0].0 + pair[1].0;
            while li < leaf_items.len() && leaf_items[li].0 <= w {
                merged.push(leaf_items[li]);
                li += 1;
            }
            merged.push((w, true));
        }
        merged.extend_from_slice(&leaf_items[li..]);
        lists.push(merged);
    }

    // Select the cheapest 2(m-1) items at the top level; packages recursively
    // consume twice their count one level down. Count leaves taken per level.
    let mut take = 2 * (m - 1);
    for list in lists.iter().rev() {
        debug_assert!(take <= list.len());
        let packages = list[..take].iter().filter(|&&(_, p)| p).count();
        let leaves_taken = take - packages;
        for &(_, sym) in &leaves[..leaves_taken] {
            lengths[sym] += 1;
        }
        take = 2 * packages;
    }
    debug_assert_eq!(take, 0);
    Ok(lengths)
}

/// Canonical codewords for the given lengths (RFC 1951 §3.2.2).
/// Symbols with length 0 get code 0 and are never emitted.
pub fn canonical_codes(lengths: &[u32]) -> Vec<u32> {
    let max_len = lengths.iter().copied().max().unwrap_or(0) as usize;
    let mut bl_count = vec![0u32; max_len + 1];
    for &len in lengths {
        if len > 0 {
            bl_count[len as usize] += 1;
        }
    }
    let mut next_code = vec![0u32; max_len + 2];
    let mut code = 0u32;
    for bits in 1..=max_len {
        code = (code + bl_count[bits - 1]) << 1;
        next_code[bits] = code;
    }
    lengths
        .iter()
        .map(|&len| {
            if len == 0 {
                0
            } else {
                let c = next_code[len as usize];
                next_code[len as usize] += 1;
                c
            }
        })
        .collect()
}

/// Kraft sum numerator over 2^15: sum of 2^(15 - len) across used symbols.
pub fn kraft_numerator(lengths: &[u32]) -> u64 {
    lengths
        .iter()
        .filter(|&&l| l > 0)
        .map(|&l| 1u64 << (15 - l.min(15)))
        .sum()
}
