//! DEFLATE symbol alphabets: length/distance symbol mapping and extra-bit tables (RFC 1951 §3.2.5).

/// Shortest representable match length.
pub const MIN_MATCH: usize = 3;
/// Longest representable match length.
pub const MAX_MATCH: usize = 258;
/// Sliding window size in bytes; no backward reference may reach further.
pub const WINDOW_SIZE: usize = 32 * 1024;
pub const WINDOW_MASK: usize = WINDOW_SIZE - 1;

/// Literal/length alphabet size (0..=255 literals, 256 end-of-block, 257..=285 lengths, 286/287 reserved).
pub const NUM_LL: usize = 288;
/// Distance alphabet size (0..=29 used, 30/31 reserved).
pub const NUM_D: usize = 32;
/// End-of-block symbol.
pub const END_OF_BLOCK: usize = 256;

/// First match length covered by each length symbol 257..=285.
pub const LENGTH_BASE: [u16; 29] = [
    3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 15, 17, 19, 23, 27, 31, 35, 43, 51, 59, 67, 83, 99, 115, 131,
    163, 195, 227, 258,
];

/// Extra bits carried by each length symbol 257..=285.
pub const LENGTH_EXTRA: [u8; 29] = [
    0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 0,
];

/// First distance covered by each distance symbol 0..=29.
pub const DIST_BASE: [u16; 30] = [
    1, 2, 3, 4, 5, 7, 9, 13, 17, 25, 33, 49, 65, 97, 129, 193, 257, 385, 513, 769, 1025, 1537,
    2049, 3073, 4097, 6145, 8193, 12289, 16385, 24577,
];

/// Extra bits carried by each distance symbol 0..=29.
pub const DIST_EXTRA: [u8; 30] = [
    0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 11, 12, 12, 13,
    13,
];

const LENGTH_SYMBOL_OF: [u16; MAX_MATCH + 1] = build_length_symbols();

const fn build_length_symbols() -> [u16; MAX_MATCH + 1] {
    let mut table = [0u16; MAX_MATCH + 1];
    let mut sym = 0;
    while sym < 29 {
        let base = LENGTH_BASE[sym] as usize;
        let count = 1usize << LENGTH_EXTRA[sym];
        let mut k = 0;
        while k < count {
            let len = base + k;
            if len <= MAX_MATCH {
                table[len] = 257 + sym as u16;
            }
            k += 1;
        }
        sym += 1;
    }
    // Length 258 has its own zero-extra symbol, overriding symbol 284's top slot.
    table[MAX_MATCH] = 285;
    table
}

/// Literal/length symbol for a match length in [3, 258].
#[inline]
pub fn length_symbol(length: u16) -> u16 {
    debug_assert!((MIN_MATCH..=MAX_MATCH).contains(&(length as usize)));
    LENGTH_SYMBOL_OF[length as usize]
}

/// Extra bits count for a length symbol (257..=285).
#[inline]
pub fn length_extra_bits(symbol: u16) -> u32 {
    LENGTH_EXTRA[(symbol - 257) as usize] as u32
}

/// Extra bits value for a match length.
#[inline]
pub fn length_extra_value(length: u16) -> u32 {
    let sym = length_symbol(length);
    (length - LENGTH_BASE[(sym - 257) as usize]) as u32
}

/// Distance symbol for a distance in [1, 32768].
#[inline]
pub fn dist_symbol(dist: u16) -> u16 {
    let d = dist as u32;
    debug_assert!(d >= 1);
    if d < 5 {
        return (d - 1) as u16;
    }
    let d = d - 1; // 4..=32767
    let log = 31 - d.leading_zeros();
    (2 * log + ((d >> (log - 1)) & 1)) as u16
}

/// Extra bits count for a distance symbol (0..=29).
#[inline]
pub fn dist_extra_bits(symbol: u16) -> u32 {
    DIST_EXTRA[symbol as usize] as u32
}

/// Extra bits value for a distance.
#[inline]
pub fn dist_extra_value(dist: u16) -> u32 {
    let sym = dist_symbol(dist);
    dist as u32 - DIST_BASE[sym as usize] as u32
}

/// Code lengths of the fixed literal/length tree (RFC 1951 §3.2.6).
pub fn fixed_litlen_lengths() -> [u32; NUM_LL] {
    let mut lengths = [0u32; NUM_LL];
    for (sym, len) in lengths.iter_mut().enumerate() {
        *len = match sym {
            0..=143 => 8,
            144..=255 => 9,
            256..=279 => 7,
            _ => 8,
        };
    }
    lengths
}

/// Code lengths of the fixed distance tree (all 5 bits).
pub fn fixed_dist_lengths() -> [u32; NUM_D] {
    [5u32; NUM_D]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_symbol_boundaries() {
        assert_eq!(length_symbol(3), 257);
        assert_eq!(length_symbol(4), 258);
        assert_eq!(length_symbol(10), 264);
        assert_eq!(length_symbol(11), 265);
        assert_eq!(length_symbol(12), 265);
        assert_eq!(length_symbol(13), 266);
        assert_eq!(length_symbol(257), 284);
        assert_eq!(length_symbol(258), 285);
    }

    #[test]
    fn length_extra_boundaries() {
        assert_eq!(length_extra_bits(257), 0);
        assert_eq!(length_extra_bits(265), 1);
        assert_eq!(length_extra_bits(284), 5);
        assert_eq!(length_extra_bits(285), 0);
        assert_eq!(length_extra_value(11), 0);
        assert_eq!(length_extra_value(12), 1);
        assert_eq!(length_extra_value(257), 30);
        assert_eq!(length_extra_value(258), 0);
    }

    #[test]
    fn dist_symbol_boundaries() {
        assert_eq!(dist_symbol(1), 0);
        assert_eq!(dist_symbol(4), 3);
        assert_eq!(dist_symbol(5), 4);
        assert_eq!(dist_symbol(6), 4);
        assert_eq!(dist_symbol(7), 5);
        assert_eq!(dist_symbol(8), 5);
        assert_eq!(dist_symbol(9), 6);
        assert_eq!(dist_symbol(24576), 28);
        assert_eq!(dist_symbol(24577), 29);
        assert_eq!(dist_symbol(32768), 29);
    }

    #[test]
    fn dist_symbol_matches_table_scan() {
        for dist in 1u32..=32768 {
            let sym = dist_symbol(dist as u16) as usize;
            let base = DIST_BASE[sym] as u32;
            let span = 1u32 << DIST_EXTRA[sym];
            assert!(
                base <= dist && dist < base + span,
                "dist {dist} mapped to symbol {sym} covering [{base}, {})",
                base + span
            );
        }
    }

    #[test]
    fn length_symbol_matches_table_scan() {
        for len in 3u16..=258 {
            let sym = length_symbol(len) as usize - 257;
            let base = LENGTH_BASE[sym] as u16;
            let span = 1u16 << LENGTH_EXTRA[sym];
            assert!(base <= len && len < base + span || len == 258 && sym == 28);
        }
    }

    #[test]
    fn dist_extra_values() {
        assert_eq!(dist_extra_value(1), 0);
        assert_eq!(dist_extra_value(5), 0);
        assert_eq!(dist_extra_value(6), 1);
        assert_eq!(dist_extra_value(32768), 8191);
    }

    #[test]
    fn fixed_tree_shapes() {
        let ll = fixed_litlen_lengths();
        assert_eq!(ll[0], 8);
        assert_eq!(ll[143], 8);
        assert_eq!(ll[144], 9);
        assert_eq!(ll[255], 9);
        assert_eq!(ll[256], 7);
        assert_eq!(ll[279], 7);
        assert_eq!(ll[280], 8);
        assert_eq!(ll[287], 8);
        assert!(fixed_dist_lengths().iter().all(|&l| l == 5));
    }
}
