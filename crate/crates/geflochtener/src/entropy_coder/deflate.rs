//! DEFLATE block encoding: exact bit-size accounting for stored, fixed and
//! dynamic blocks, dynamic tree construction with RLE-coded code lengths, and
//! bit-level block emission. Sizes returned by the calculators are exact; the
//! emitters assert they wrote precisely the predicted number of bits.

use super::bitwriter::BitWriter;
use super::huffman::{build_length_limited_huffman, canonical_codes};
use crate::lz_store::TokenStore;
use crate::symbols::{
    dist_extra_bits, dist_extra_value, dist_symbol, fixed_dist_lengths, fixed_litlen_lengths,
    length_extra_bits, length_extra_value, length_symbol, END_OF_BLOCK, NUM_D, NUM_LL,
};

/// Code-length alphabet size and the order its lengths appear in the header.
pub const NUM_CL: usize = 19;
pub const CL_ORDER: [usize; NUM_CL] = [
    16, 17, 18, 0, 8, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15,
];

const MAX_STORED_CHUNK: usize = 65535;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockType {
    Stored,
    Fixed,
    Dynamic,
}

impl BlockType {
    fn btype_bits(self) -> u32 {
        match self {
            BlockType::Stored => 0,
            BlockType::Fixed => 1,
            BlockType::Dynamic => 2,
        }
    }
}

/// Literal/length and distance symbol counts for a token range.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub litlen: [usize; NUM_LL],
    pub dist: [usize; NUM_D],
}

impl Histogram {
    pub fn new() -> Self {
        Histogram { litlen: [0; NUM_LL], dist: [0; NUM_D] }
    }

    /// Counts token symbols in store[from..to). Does not count the end code.
    pub fn from_range(store: &TokenStore, from: usize, to: usize) -> Self {
        let mut h = Histogram::new();
        for token in &store.tokens()[from..to] {
            if token.is_literal() {
                h.litlen[token.litlen as usize] += 1;
            } else {
                h.litlen[length_symbol(token.litlen) as usize] += 1;
                h.dist[dist_symbol(token.dist) as usize] += 1;
            }
        }
        h
    }

    pub fn with_end_of_block(mut self) -> Self {
        self.litlen[END_OF_BLOCK] += 1;
        self
    }
}

impl Default for Histogram {
    fn default() -> Self {
        Histogram::new()
    }
}

/// Bit lengths for the counts, or all zeros when nothing is used.
fn lengths_or_zero<const N: usize>(counts: &[usize; N], max_bits: u32) -> [u32; N] {
    let mut out = [0u32; N];
    if counts.iter().any(|&c| c > 0) {
        let v = build_length_limited_huffman(counts, max_bits).unwrap();
        out.copy_from_slice(&v);
    }
    out
}

/// Ensures at least two distance codes exist; several widespread decoders
/// reject a dynamic header whose distance tree has fewer. Cheap: a dummy
/// length-1 code costs header bits only, since its symbol never occurs.
fn patch_distance_codes(d_lengths: &mut [u32; NUM_D]) {
    let used = d_lengths.iter().filter(|&&l| l > 0).count();
    match used {
        0 => {
            d_lengths[0] = 1;
            d_lengths[1] = 1;
        }
        1 => {
            let dummy = if d_lengths[0] == 0 { 0 } else { 1 };
            d_lengths[dummy] = 1;
        }
        _ => {}
    }
}

/// Exact payload bits for the range under the given code lengths, including
/// the end-of-block code. The histogram must already include the end code.
fn symbol_data_bits(
    h: &Histogram,
    ll_lengths: &[u32; NUM_LL],
    d_lengths: &[u32; NUM_D],
) -> u64 {
    let mut bits = 0u64;
    for (sym, &count) in h.litlen.iter().enumerate() {
        if count == 0 {
            continue;
        }
        debug_assert!(ll_lengths[sym] > 0, "used litlen symbol {sym} has no code");
        bits += count as u64 * ll_lengths[sym] as u64;
        if sym > END_OF_BLOCK {
            bits += count as u64 * length_extra_bits(sym as u16) as u64;
        }
    }
    for (sym, &count) in h.dist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        debug_assert!(d_lengths[sym] > 0, "used dist symbol {sym} has no code");
        bits += count as u64 * (d_lengths[sym] + dist_extra_bits(sym as u16)) as u64;
    }
    bits
}

/// Reshapes a histogram so its Huffman code lengths form longer runs, making
/// the RLE-coded tree cheaper. Counts are only ever averaged within a stride,
/// never zeroed unless the whole stride was zero, so every used symbol keeps
/// a code. The caller decides by measuring; this is purely a candidate.
fn optimize_histogram_for_rle(counts: &mut [usize]) {
    let mut length = counts.len();
    while length > 0 && counts[length - 1] == 0 {
        length -= 1;
    }
    if length == 0 {
        return;
    }
    let counts = &mut counts[..length];

    // Mark runs already cheap to RLE-encode so they stay untouched.
    let mut good_for_rle = vec![false; length];
    let mut symbol = counts[0];
    let mut stride = 0usize;
    for i in 0..=length {
        if i == length || counts[i] != symbol {
            if (symbol == 0 && stride >= 5) || (symbol != 0 && stride >= 7) {
                for k in 0..stride {
                    good_for_rle[i - k - 1] = true;
                }
            }
            stride = 1;
            if i != length {
                symbol = counts[i];
            }
        } else {
            stride += 1;
        }
    }

    // Replace remaining stretches of near-equal counts by their average.
    let mut stride = 0usize;
    let mut limit = counts[0];
    let mut sum = 0usize;
    for i in 0..=length {
        if i == length || good_for_rle[i] || counts[i].abs_diff(limit) >= 4 {
            if stride >= 4 || (stride >= 3 && sum == 0) {
                let mut count = (sum + stride / 2) / stride;
                if count < 1 {
                    count = 1;
                }
                if sum == 0 {
                    count = 0;
                }
                for k in 0..stride {
                    counts[i - k - 1] = count;
                }
            }
            stride = 0;
            sum = 0;
            if i + 4 < length {
                limit = (counts[i] + counts[i + 1] + counts[i + 2] + counts[i + 3]) / 4;
            } else if i < length {
                limit = counts[i];
            } else {
                limit = 0;
            }
        }
        stride += 1;
        if i != length {
            sum += counts[i];
        }
    }
}

/// RLE-encodes the two code-length arrays and either measures or writes the
/// dynamic header. Returns the exact header size in bits.
fn encode_tree(
    ll_lengths: &[u32; NUM_LL],
    d_lengths: &[u32; NUM_D],
    use_16: bool,
    use_17: bool,
    use_18: bool,
    mut out: Option<&mut BitWriter>,
) -> u64 {
    let mut hlit = 29usize;
    while hlit > 0 && ll_lengths[257 + hlit - 1] == 0 {
        hlit -= 1;
    }
    let mut hdist = 29usize;
    while hdist > 0 && d_lengths[1 + hdist - 1] == 0 {
        hdist -= 1;
    }
    let lld: Vec<u32> = ll_lengths[..hlit + 257]
        .iter()
        .chain(d_lengths[..hdist + 1].iter())
        .copied()
        .collect();

    // (symbol, extra value) pairs; symbols 16/17/18 carry 2/3/7 extra bits.
    let mut rle: Vec<(u32, u32)> = Vec::new();
    let mut i = 0usize;
    while i < lld.len() {
        let symbol = lld[i];
        let mut count = 1usize;
        if use_16 || (symbol == 0 && (use_17 || use_18)) {
            while i + count < lld.len() && lld[i + count] == symbol {
                count += 1;
            }
        }
        i += count;
        if symbol == 0 && count >= 3 {
            if use_18 {
                while count >= 11 {
                    let run = count.min(138);
                    rle.push((18, run as u32 - 11));
                    count -= run;
                }
            }
            if use_17 {
                while count >= 3 {
                    let run = count.min(10);
                    rle.push((17, run as u32 - 3));
                    count -= run;
                }
            }
        }
        if use_16 && count >= 4 {
            count -= 1;
            rle.push((symbol, 0));
            while count >= 3 {
                let run = count.min(6);
                rle.push((16, run as u32 - 3));
                count -= run;
            }
        }
        for _ in 0..count {
            rle.push((symbol, 0));
        }
    }

    let mut cl_counts = [0usize; NUM_CL];
    for &(sym, _) in &rle {
        cl_counts[sym as usize] += 1;
    }
    let cl_lengths = lengths_or_zero(&cl_counts, 7);
    let mut hclen = 15usize;
    while hclen > 0 && cl_lengths[CL_ORDER[hclen + 4 - 1]] == 0 {
        hclen -= 1;
    }

    let mut size = 5 + 5 + 4 + (hclen as u64 + 4) * 3;
    for &(sym, _) in &rle {
        size += cl_lengths[sym as usize] as u64;
        size += match sym {
            16 => 2,
            17 => 3,
            18 => 7,
            _ => 0,
        };
    }

    if let Some(out) = out.as_deref_mut() {
        let before = out.bits_written();
        let cl_codes = canonical_codes(&cl_lengths);
        out.add_bits(hlit as u32, 5);
        out.add_bits(hdist as u32, 5);
        out.add_bits(hclen as u32, 4);
        for &slot in &CL_ORDER[..hclen + 4] {
            out.add_bits(cl_lengths[slot], 3);
        }
        for &(sym, extra) in &rle {
            out.add_huffman_bits(cl_codes[sym as usize], cl_lengths[sym as usize]);
            match sym {
                16 => out.add_bits(extra, 2),
                17 => out.add_bits(extra, 3),
                18 => out.add_bits(extra, 7),
                _ => {}
            }
        }
        debug_assert_eq!(out.bits_written() - before, size);
    }
    size
}

/// Smallest dynamic header over the eight RLE feature combinations.
fn best_tree_combo(ll_lengths: &[u32; NUM_LL], d_lengths: &[u32; NUM_D]) -> (u8, u64) {
    let mut best = (0u8, u64::MAX);
    for combo in 0u8..8 {
        let size = encode_tree(
            ll_lengths,
            d_lengths,
            combo & 1 != 0,
            combo & 2 != 0,
            combo & 4 != 0,
            None,
        );
        if size < best.1 {
            best = (combo, size);
        }
    }
    best
}

/// Dynamic code lengths for the range plus the exact cost (tree + payload) of
/// using them. Tries the raw histogram and an RLE-friendly reshaped variant,
/// keeping whichever encodes the block smaller. Payload cost always uses the
/// true counts; the reshaped histogram only shapes the tree.
pub fn get_dynamic_lengths(
    store: &TokenStore,
    from: usize,
    to: usize,
) -> (u64, [u32; NUM_LL], [u32; NUM_D]) {
    let h = Histogram::from_range(store, from, to).with_end_of_block();

    let ll_lengths = lengths_or_zero(&h.litlen, 15);
    let mut d_lengths = lengths_or_zero(&h.dist, 15);
    patch_distance_codes(&mut d_lengths);
    let cost = best_tree_combo(&ll_lengths, &d_lengths).1
        + symbol_data_bits(&h, &ll_lengths, &d_lengths);

    let mut ll2 = h.litlen;
    let mut d2 = h.dist;
    optimize_histogram_for_rle(&mut ll2);
    optimize_histogram_for_rle(&mut d2);
    ll2[END_OF_BLOCK] = ll2[END_OF_BLOCK].max(1);
    let ll_lengths2 = lengths_or_zero(&ll2, 15);
    let mut d_lengths2 = lengths_or_zero(&d2, 15);
    patch_distance_codes(&mut d_lengths2);
    let cost2 = best_tree_combo(&ll_lengths2, &d_lengths2).1
        + symbol_data_bits(&h, &ll_lengths2, &d_lengths2);

    if cost2 < cost {
        (cost2, ll_lengths2, d_lengths2)
    } else {
        (cost, ll_lengths, d_lengths)
    }
}

/// Exact encoded size in bits of store[from..to) as a single block of the
/// given type, including the 3 header bits. Stored blocks larger than the
/// chunk limit count one header per chunk; the first chunk's byte padding is
/// position-dependent, so the stored figure assumes an aligned start.
pub fn calculate_block_size(store: &TokenStore, from: usize, to: usize, btype: BlockType) -> u64 {
    match btype {
        BlockType::Stored => {
            let length = store.byte_range(from, to) as u64;
            let chunks = length.div_ceil(MAX_STORED_CHUNK as u64).max(1);
            chunks * 40 + length * 8
        }
        BlockType::Fixed => {
            let h = Histogram::from_range(store, from, to).with_end_of_block();
            3 + symbol_data_bits(&h, &fixed_litlen_lengths(), &fixed_dist_lengths())
        }
        BlockType::Dynamic => 3 + get_dynamic_lengths(store, from, to).0,
    }
}

/// Size of the cheapest block type for the range, with its type.
/// Stored wins only when strictly smallest; fixed wins ties with dynamic.
pub fn best_block_type(store: &TokenStore, from: usize, to: usize) -> (BlockType, u64) {
    let stored = calculate_block_size(store, from, to, BlockType::Stored);
    let fixed = calculate_block_size(store, from, to, BlockType::Fixed);
    let dynamic = calculate_block_size(store, from, to, BlockType::Dynamic);
    if stored < fixed && stored < dynamic {
        (BlockType::Stored, stored)
    } else if fixed <= dynamic {
        (BlockType::Fixed, fixed)
    } else {
        (BlockType::Dynamic, dynamic)
    }
}

pub fn calculate_block_size_auto_type(store: &TokenStore, from: usize, to: usize) -> u64 {
    best_block_type(store, from, to).1
}

fn add_tokens(
    store: &TokenStore,
    from: usize,
    to: usize,
    ll_lengths: &[u32; NUM_LL],
    d_lengths: &[u32; NUM_D],
    out: &mut BitWriter,
) {
    let ll_codes = canonical_codes(ll_lengths.as_slice());
    let d_codes = canonical_codes(d_lengths.as_slice());
    for token in &store.tokens()[from..to] {
        if token.is_literal() {
            let sym = token.litlen as usize;
            debug_assert!(ll_lengths[sym] > 0);
            out.add_huffman_bits(ll_codes[sym], ll_lengths[sym]);
        } else {
            let lsym = length_symbol(token.litlen) as usize;
            let dsym = dist_symbol(token.dist) as usize;
            debug_assert!(ll_lengths[lsym] > 0 && d_lengths[dsym] > 0);
            out.add_huffman_bits(ll_codes[lsym], ll_lengths[lsym]);
            out.add_bits(length_extra_value(token.litlen), length_extra_bits(lsym as u16));
            out.add_huffman_bits(d_codes[dsym], d_lengths[dsym]);
            out.add_bits(dist_extra_value(token.dist), dist_extra_bits(dsym as u16));
        }
    }
    out.add_huffman_bits(ll_codes[END_OF_BLOCK], ll_lengths[END_OF_BLOCK]);
}

/// Writes the range as stored blocks, one per 65535-byte chunk.
/// `bytes` must be the original input; the range addresses it directly.
fn add_stored_block(
    bytes: &[u8],
    store: &TokenStore,
    from: usize,
    to: usize,
    final_block: bool,
    out: &mut BitWriter,
) {
    let start = if from < store.len() {
        store.source_positions()[from]
    } else {
        bytes.len()
    };
    let payload = &bytes[start..start + store.byte_range(from, to)];
    let chunk_count = payload.len().div_ceil(MAX_STORED_CHUNK).max(1);
    let mut chunks = payload.chunks(MAX_STORED_CHUNK);
    for i in 0..chunk_count {
        let chunk = chunks.next().unwrap_or(&[]);
        let last = i + 1 == chunk_count;
        out.add_bit(u32::from(final_block && last));
        out.add_bits(BlockType::Stored.btype_bits(), 2);
        out.align_byte();
        let len = chunk.len() as u32;
        out.add_bits(len & 0xFF, 8);
        out.add_bits(len >> 8, 8);
        out.add_bits(!len & 0xFF, 8);
        out.add_bits((!len >> 8) & 0xFF, 8);
        out.write_bytes(chunk);
    }
}

/// Writes store[from..to) as one block of the cheapest type and returns that
/// type. Asserts the written bit count matches the calculated size exactly,
/// except for stored blocks whose first-chunk padding depends on position.
pub fn add_block(
    bytes: &[u8],
    store: &TokenStore,
    from: usize,
    to: usize,
    final_block: bool,
    out: &mut BitWriter,
) -> BlockType {
    let (btype, predicted) = best_block_type(store, from, to);
    let before = out.bits_written();
    match btype {
        BlockType::Stored => add_stored_block(bytes, store, from, to, final_block, out),
        BlockType::Fixed => {
            out.add_bit(u32::from(final_block));
            out.add_bits(BlockType::Fixed.btype_bits(), 2);
            add_tokens(store, from, to, &fixed_litlen_lengths(), &fixed_dist_lengths(), out);
        }
        BlockType::Dynamic => {
            let (_, ll_lengths, d_lengths) = get_dynamic_lengths(store, from, to);
            out.add_bit(u32::from(final_block));
            out.add_bits(BlockType::Dynamic.btype_bits(), 2);
            let combo = best_tree_combo(&ll_lengths, &d_lengths).0;
            encode_tree(
                &ll_lengths,
                &d_lengths,
                combo & 1 != 0,
                combo & 2 != 0,
                combo & 4 != 0,
                Some(out),
            );
            add_tokens(store, from, to, &ll_lengths, &d_lengths, out);
        }
    }
    let written = out.bits_written() - before;
    match btype {
        BlockType::Stored => debug_assert!(written.abs_diff(predicted) <= 7),
        _ => debug_assert_eq!(written, predicted, "size calculator and emitter disagree"),
    }
    btype
}
