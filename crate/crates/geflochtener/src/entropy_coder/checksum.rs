//! CRC-32 (gzip trailer) and Adler-32 (zlib trailer) checksums.

/// Reflected CRC-32, polynomial 0xEDB88320, init and final xor 0xFFFFFFFF.
pub fn crc32(data: &[u8]) -> u32 {
    crc32_update(0xFFFF_FFFF, data) ^ 0xFFFF_FFFF
}

/// Streaming form: feed `state` from a previous call (start from 0xFFFFFFFF),
/// xor with 0xFFFFFFFF when done.
pub fn crc32_update(mut state: u32, data: &[u8]) -> u32 {
    for &byte in data {
        let idx = (state ^ byte as u32) & 0xFF;
        state = CRC_TABLE[idx as usize] ^ (state >> 8);
    }
    state
}

const CRC_TABLE: [u32; 256] = build_crc_table();

const fn build_crc_table() -> [u32; 256] {
    let mut table = [0u32; 256];
    let mut n = 0;
    while n < 256 {
        let mut c = n as u32;
        let mut k = 0;
        while k < 8 {
            c = if c & 1 != 0 { 0xEDB8_8320 ^ (c >> 1) } else { c >> 1 };
            k += 1;
        }
        table[n] = c;
        n += 1;
    }
    table
}

/// Adler-32 over `data` (RFC 1950 §8.2).
pub fn adler32(data: &[u8]) -> u32 {
    const MOD: u32 = 65521;
    // Largest n with 255n(n+1)/2 + (n+1)(MOD-1) < 2^32, per zlib.
    const NMAX: usize = 5552;
    let mut a: u32 = 1;
    let mut b: u32 = 0;
    for chunk in data.chunks(NMAX) {
        for &byte in chunk {
            a += byte as u32;
            b += a;
        }
        a %= MOD;
        b %= MOD;
    }
    (b << 16) | a
}
