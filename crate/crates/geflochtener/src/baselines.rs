//! Reference sliding-window codecs kept for benchmark context: a
//! tuple-emitting LZ77 and a flag-bit LZSS, each with a fixed big-endian
//! wire format. Neither is gzip-compatible and neither tries to be fast.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineError {
    #[error("input ended inside a token")]
    Truncated,
    #[error("magic bytes missing")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("offset {offset} exceeds the {available} bytes produced so far")]
    OffsetOutOfRange { offset: usize, available: usize },
}

/// (offset, length, next symbol). offset == 0 and length == 0 carry an
/// unmatched literal in `symbol`; otherwise the match is `length` bytes
/// starting `offset` back, and `symbol` is the byte that follows it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lz77Tuple {
    pub offset: u16,
    pub length: u8,
    pub symbol: u8,
}

/// One flag bit per item: a back-reference or a literal byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LzssItem {
    Pointer { position: u16, length: u8 },
    Symbol(u8),
}

/// Longest match ending rule shared by both codecs: scan the window most
/// recent first, so equal-length ties keep the smallest offset.
fn longest_match(input: &[u8], pos: usize, search: usize, max_len: usize) -> (usize, usize) {
    let lo = pos.saturating_sub(search);
    let mut best = (0usize, 0usize);
    for start in (lo..pos).rev() {
        if input[start] != input[pos] {
            continue;
        }
        // Self-overlapping matches are allowed: the copy source may run
        // into bytes the match itself produces.
        let mut len = 1;
        while len < max_len && input[start + len] == input[pos + len] {
            len += 1;
        }
        if len > best.1 {
            best = (pos - start, len);
            if len == max_len {
                break;
            }
        }
    }
    best
}

/// Emits (offset, length, next symbol) tuples and advances length + 1, or a
/// (0, 0, symbol) literal advancing 1. Every tuple carries a real trailing
/// symbol, so a match at the end of the input is shortened by one byte.
/// Matches never start before the search buffer, so repeats further back
/// than `search_size` go unreferenced.
pub fn lz77_encode(input: &[u8], search_size: usize, lookahead_size: usize) -> Vec<Lz77Tuple> {
    assert!(search_size >= 1 && lookahead_size >= 1);
    let search = search_size.min(u16::MAX as usize);
    let lookahead = lookahead_size.min(u8::MAX as usize);
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < input.len() {
        let max_len = lookahead.min(input.len() - pos - 1);
        let (offset, length) = if max_len > 0 {
            longest_match(input, pos, search, max_len)
        } else {
            (0, 0)
        };
        if length > 0 {
            out.push(Lz77Tuple {
                offset: offset as u16,
                length: length as u8,
                symbol: input[pos + length],
            });
            pos += length + 1;
        } else {
            out.push(Lz77Tuple { offset: 0, length: 0, symbol: input[pos] });
            pos += 1;
        }
    }
    out
}

pub fn lz77_decode(tuples: &[Lz77Tuple]) -> Result<Vec<u8>, BaselineError> {
    let mut out = Vec::new();
    for t in tuples {
        let (offset, length) = (t.offset as usize, t.length as usize);
        if offset > out.len() {
            return Err(BaselineError::OffsetOutOfRange { offset, available: out.len() });
        }
        if offset > 0 {
            let start = out.len() - offset;
            for k in 0..length {
                let byte = out[start + k];
                out.push(byte);
            }
        }
        out.push(t.symbol);
    }
    Ok(out)
}

const LZSS_SEARCH: usize = u16::MAX as usize;
const LZSS_LOOKAHEAD: usize = u8::MAX as usize;

/// Emits a pointer only for matches strictly longer than `min_match` and a
/// flagged literal otherwise. Pointers carry no trailing symbol and advance
/// exactly their length.
pub fn lzss_encode(input: &[u8], min_match: usize) -> Vec<LzssItem> {
    assert!(min_match >= 1);
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < input.len() {
        let max_len = LZSS_LOOKAHEAD.min(input.len() - pos);
        let (position, length) = longest_match(input, pos, LZSS_SEARCH, max_len);
        if length > min_match {
            out.push(LzssItem::Pointer { position: position as u16, length: length as u8 });
            pos += length;
        } else {
            out.push(LzssItem::Symbol(input[pos]));
            pos += 1;
        }
    }
    out
}

pub fn lzss_decode(items: &[LzssItem]) -> Result<Vec<u8>, BaselineError> {
    let mut out = Vec::new();
    for item in items {
        match *item {
            LzssItem::Symbol(b) => out.push(b),
            LzssItem::Pointer { position, length } => {
                let offset = position as usize;
                if offset == 0 || offset > out.len() {
                    return Err(BaselineError::OffsetOutOfRange { offset, available: out.len() });
                }
                let start = out.len() - offset;
                for k in 0..length as usize {
                    let byte = out[start + k];
                    out.push(byte);
                }
            }
        }
    }
    Ok(out)
}

/// Fixed-width big-endian token stream: offset u16, length u8, symbol u8.
pub fn serialize_tokens(tuples: &[Lz77Tuple]) -> Vec<u8> {
    let mut out = Vec::with_capacity(tuples.len() * 4);
    for t in tuples {
        out.extend_from_slice(&t.offset.to_be_bytes());
        out.push(t.length);
        out.push(t.symbol);
    }
    out
}

pub fn parse_tokens(bytes: &[u8]) -> Result<Vec<Lz77Tuple>, BaselineError> {
    if bytes.len() % 4 != 0 {
        return Err(BaselineError::Truncated);
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| Lz77Tuple {
            offset: u16::from_be_bytes([c[0], c[1]]),
            length: c[2],
            symbol: c[3],
        })
        .collect())
}

/// Item count (u32 big-endian), a flag bitmap with one bit per item packed
/// most-significant bit first (1 = pointer), then the item payloads in
/// order: pointers as position u16 big-endian + length u8, literals as one
/// byte.
pub fn serialize_items(items: &[LzssItem]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(items.len() as u32).to_be_bytes());
    let mut flags = vec![0u8; items.len().div_ceil(8)];
    for (i, item) in items.iter().enumerate() {
        if matches!(item, LzssItem::Pointer { .. }) {
            flags[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out.extend_from_slice(&flags);
    for item in items {
        match *item {
            LzssItem::Pointer { position, length } => {
                out.extend_from_slice(&position.to_be_bytes());
                out.push(length);
            }
            LzssItem::Symbol(b) => out.push(b),
        }
    }
    out
}

pub fn parse_items(bytes: &[u8]) -> Result<Vec<LzssItem>, BaselineError> {
    let count_bytes = bytes.get(..4).ok_or(BaselineError::Truncated)?;
    let count = u32::from_be_bytes(count_bytes.try_into().unwrap()) as usize;
    let flag_len = count.div_ceil(8);
    let flags = bytes.get(4..4 + flag_len).ok_or(BaselineError::Truncated)?;
    let mut pos = 4 + flag_len;
    let mut items = Vec::with_capacity(count);
    for i in 0..count {
        if flags[i / 8] & (0x80 >> (i % 8)) != 0 {
            let payload = bytes.get(pos..pos + 3).ok_or(BaselineError::Truncated)?;
            items.push(LzssItem::Pointer {
                position: u16::from_be_bytes([payload[0], payload[1]]),
                length: payload[2],
            });
            pos += 3;
        } else {
            items.push(LzssItem::Symbol(*bytes.get(pos).ok_or(BaselineError::Truncated)?));
            pos += 1;
        }
    }
    if pos != bytes.len() {
        return Err(BaselineError::Truncated);
    }
    Ok(items)
}

pub const LZ77_MAGIC: [u8; 4] = *b"TL77";
pub const LZSS_MAGIC: [u8; 4] = *b"TLSS";
pub const BASELINE_VERSION: u8 = 1;

fn wrap_container(magic: [u8; 4], payload: Vec<u8>) -> Vec<u8> {
    let mut out = Vec::with_capacity(payload.len() + 5);
    out.extend_from_slice(&magic);
    out.push(BASELINE_VERSION);
    out.extend_from_slice(&payload);
    out
}

fn unwrap_container(magic: [u8; 4], bytes: &[u8]) -> Result<&[u8], BaselineError> {
    if bytes.len() < 5 {
        return Err(BaselineError::Truncated);
    }
    if bytes[..4] != magic {
        return Err(BaselineError::BadMagic);
    }
    if bytes[4] != BASELINE_VERSION {
        return Err(BaselineError::UnsupportedVersion(bytes[4]));
    }
    Ok(&bytes[5..])
}

/// The .lz77 file format: magic, version byte, serialized tuples.
pub fn lz77_compress(input: &[u8], search_size: usize, lookahead_size: usize) -> Vec<u8> {
    wrap_container(LZ77_MAGIC, serialize_tokens(&lz77_encode(input, search_size, lookahead_size)))
}

pub fn lz77_decompress(bytes: &[u8]) -> Result<Vec<u8>, BaselineError> {
    lz77_decode(&parse_tokens(unwrap_container(LZ77_MAGIC, bytes)?)?)
}

/// The .lzss file format: magic, version byte, serialized items.
pub fn lzss_compress(input: &[u8], min_match: usize) -> Vec<u8> {
    wrap_container(LZSS_MAGIC, serialize_items(&lzss_encode(input, min_match)))
}

pub fn lzss_decompress(bytes: &[u8]) -> Result<Vec<u8>, BaselineError> {
    lzss_decode(&parse_items(unwrap_container(LZSS_MAGIC, bytes)?)?)
}
