//! Strict decoder for the three containers the encoder writes. Used as the
//! round-trip oracle in tests and by the decompression command; it rejects
//! malformed trees outright so encoder bugs surface instead of being masked.

use crate::entropy_coder::{adler32, crc32, Format};
use crate::symbols::{
    fixed_dist_lengths, fixed_litlen_lengths, DIST_BASE, DIST_EXTRA, LENGTH_BASE, LENGTH_EXTRA,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InflateError {
    #[error("input ended before the stream completed")]
    Truncated,
    #[error("reserved block type 3")]
    ReservedBlockType,
    #[error("stored block length check mismatch")]
    StoredLengthMismatch,
    #[error("huffman tree is oversubscribed")]
    Oversubscribed,
    #[error("huffman tree is incomplete")]
    IncompleteTree,
    #[error("more code lengths than declared symbols")]
    TooManyCodeLengths,
    #[error("repeat code with no previous length")]
    RepeatWithoutPrevious,
    #[error("litlen tree has no end-of-block code")]
    MissingEndOfBlock,
    #[error("symbol outside the valid alphabet")]
    InvalidSymbol,
    #[error("distance {dist} exceeds the {available} bytes produced so far")]
    DistanceTooFar { dist: usize, available: usize },
    #[error("gzip magic bytes missing")]
    BadGzipMagic,
    #[error("unsupported compression method {0}")]
    UnsupportedMethod(u8),
    #[error("reserved gzip flag bits set: {0:#04x}")]
    UnsupportedGzipFlags(u8),
    #[error("zlib header invalid")]
    BadZlibHeader,
    #[error("preset dictionaries are not supported")]
    DictionaryUnsupported,
    #[error("crc32 mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Crc32Mismatch { stored: u32, computed: u32 },
    #[error("length trailer mismatch: stored {stored}, actual {actual}")]
    SizeMismatch { stored: u32, actual: u32 },
    #[error("adler32 mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Adler32Mismatch { stored: u32, computed: u32 },
    #[error("{0} trailing bytes after the stream")]
    TrailingData(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflateResult {
    pub output: Vec<u8>,
    /// Input bytes consumed, including any container framing.
    pub consumed: usize,
    /// True iff a container trailer checksum was present and matched.
    pub checksum_verified: bool,
}

struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    bit: u32,
}

impl<'a> BitReader<'a> {
    fn new(data: &'a [u8], start: usize) -> Self {
        BitReader { data, pos: start, bit: 0 }
    }

    fn bit(&mut self) -> Result<u32, InflateError> {
        let byte = *self.data.get(self.pos).ok_or(InflateError::Truncated)?;
        let b = (byte >> self.bit) & 1;
        self.bit += 1;
        if self.bit == 8 {
            self.bit = 0;
            self.pos += 1;
        }
        Ok(b as u32)
    }

    fn bits(&mut self, n: u32) -> Result<u32, InflateError> {
        let mut v = 0;
        for i in 0..n {
            v |= self.bit()? << i;
        }
        Ok(v)
    }

    fn align_byte(&mut self) {
        if self.bit != 0 {
            self.bit = 0;
            self.pos += 1;
        }
    }

    /// Position of the first unconsumed byte (the current byte counts once
    /// any of its bits are consumed).
    fn bytes_consumed(&self) -> usize {
        self.pos + usize::from(self.bit != 0)
    }
}

const MAX_BITS: usize = 15;

/// Canonical Huffman decoder: per-length code counts plus symbols sorted by
/// (length, symbol), walked one bit at a time.
#[derive(Debug)]
struct Decoder {
    counts: [u16; MAX_BITS + 1],
    symbols: Vec<u16>,
}

impl Decoder {
    /// Builds from code lengths, verifying the Kraft sum exactly. A tree
    /// with a single 1-bit code is incomplete by construction; it is only
    /// tolerated where the format allows it (the distance tree).
    fn build(lengths: &[u32], allow_single_incomplete: bool) -> Result<Decoder, InflateError> {
        let mut counts = [0u16; MAX_BITS + 1];
        for &len in lengths {
            debug_assert!(len as usize <= MAX_BITS);
            counts[len as usize] += 1;
        }
        counts[0] = 0;
        let used: usize = counts.iter().map(|&c| c as usize).sum();

        let mut left: i32 = 1;
        for &count in &counts[1..] {
            left <<= 1;
            left -= count as i32;
            if left < 0 {
                return Err(InflateError::Oversubscribed);
            }
        }
        if left > 0 && used > 0 && !(allow_single_incomplete && used == 1) {
            return Err(InflateError::IncompleteTree);
        }

        let mut offsets = [0usize; MAX_BITS + 1];
        for len in 1..MAX_BITS {
            offsets[len + 1] = offsets[len] + counts[len] as usize;
        }
        let mut symbols = vec![0u16; used];
        for (sym, &len) in lengths.iter().enumerate() {
            if len != 0 {
                symbols[offsets[len as usize]] = sym as u16;
                offsets[len as usize] += 1;
            }
        }
        Ok(Decoder { counts, symbols })
    }

    fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    fn decode(&self, br: &mut BitReader) -> Result<u16, InflateError> {
        let mut code: u32 = 0;
        let mut first: u32 = 0;
        let mut index: usize = 0;
        for len in 1..=MAX_BITS {
            code |= br.bit()?;
            let count = self.counts[len] as u32;
            if code < first + count {
                return Ok(self.symbols[index + (code - first) as usize]);
            }
            index += count as usize;
            first = (first + count) << 1;
            code <<= 1;
        }
        Err(InflateError::InvalidSymbol)
    }
}

/// Order in which code-length code lengths are transmitted.
const CL_ORDER: [usize; 19] = [16, 17, 18, 0, 8, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15];

fn read_dynamic_trees(br: &mut BitReader) -> Result<(Decoder, Decoder), InflateError> {
    let nlen = br.bits(5)? as usize + 257;
    let ndist = br.bits(5)? as usize + 1;
    let ncl = br.bits(4)? as usize + 4;
    if nlen > 286 || ndist > 30 {
        return Err(InflateError::TooManyCodeLengths);
    }

    let mut cl_lengths = [0u32; 19];
    for &sym in CL_ORDER.iter().take(ncl) {
        cl_lengths[sym] = br.bits(3)?;
    }
    let cl = Decoder::build(&cl_lengths, false)?;
    if cl.is_empty() {
        return Err(InflateError::IncompleteTree);
    }

    let mut lengths = vec![0u32; nlen + ndist];
    let mut i = 0;
    while i < lengths.len() {
        let sym = cl.decode(br)?;
        match sym {
            0..=15 => {
                lengths[i] = sym as u32;
                i += 1;
            }
            16 => {
                if i == 0 {
                    return Err(InflateError::RepeatWithoutPrevious);
                }
                let prev = lengths[i - 1];
                let n = 3 + br.bits(2)? as usize;
                if i + n > lengths.len() {
                    return Err(InflateError::TooManyCodeLengths);
                }
                lengths[i..i + n].fill(prev);
                i += n;
            }
            17 | 18 => {
                let n = if sym == 17 {
                    3 + br.bits(3)? as usize
                } else {
                    11 + br.bits(7)? as usize
                };
                if i + n > lengths.len() {
                    return Err(InflateError::TooManyCodeLengths);
                }
                i += n;
            }
            _ => return Err(InflateError::InvalidSymbol),
        }
    }

    if lengths[256] == 0 {
        return Err(InflateError::MissingEndOfBlock);
    }
    let litlen = Decoder::build(&lengths[..nlen], false)?;
    let dist = Decoder::build(&lengths[nlen..], true)?;
    Ok((litlen, dist))
}

fn decode_symbols(
    br: &mut BitReader,
    litlen: &Decoder,
    dist: &Decoder,
    out: &mut Vec<u8>,
) -> Result<(), InflateError> {
    loop {
        let sym = litlen.decode(br)?;
        match sym {
            0..=255 => out.push(sym as u8),
            256 => return Ok(()),
            257..=285 => {
                let idx = sym as usize - 257;
                let length =
                    LENGTH_BASE[idx] as usize + br.bits(LENGTH_EXTRA[idx] as u32)? as usize;
                if dist.is_empty() {
                    return Err(InflateError::InvalidSymbol);
                }
                let dsym = dist.decode(br)?;
                if dsym > 29 {
                    return Err(InflateError::InvalidSymbol);
                }
                let d =
                    DIST_BASE[dsym as usize] as usize + br.bits(DIST_EXTRA[dsym as usize] as u32)? as usize;
                if d > out.len() {
                    return Err(InflateError::DistanceTooFar { dist: d, available: out.len() });
                }
                let start = out.len() - d;
                for k in 0..length {
                    let byte = out[start + k];
                    out.push(byte);
                }
            }
            _ => return Err(InflateError::InvalidSymbol),
        }
    }
}

fn inflate_blocks(br: &mut BitReader, out: &mut Vec<u8>) -> Result<(), InflateError> {
    loop {
        let bfinal = br.bits(1)?;
        let btype = br.bits(2)?;
        match btype {
            0 => {
                br.align_byte();
                let lo = *br.data.get(br.pos).ok_or(InflateError::Truncated)? as u16;
                let hi = *br.data.get(br.pos + 1).ok_or(InflateError::Truncated)? as u16;
                let nlo = *br.data.get(br.pos + 2).ok_or(InflateError::Truncated)? as u16;
                let nhi = *br.data.get(br.pos + 3).ok_or(InflateError::Truncated)? as u16;
                let len = (lo | hi << 8) as usize;
                let nlen = nlo | nhi << 8;
                if len as u16 != !nlen {
                    return Err(InflateError::StoredLengthMismatch);
                }
                br.pos += 4;
                let chunk =
                    br.data.get(br.pos..br.pos + len).ok_or(InflateError::Truncated)?;
                out.extend_from_slice(chunk);
                br.pos += len;
            }
            1 => {
                let litlen = Decoder::build(&fixed_litlen_lengths(), false)?;
                let dist = Decoder::build(&fixed_dist_lengths(), false)?;
                decode_symbols(br, &litlen, &dist, out)?;
            }
            2 => {
                let (litlen, dist) = read_dynamic_trees(br)?;
                decode_symbols(br, &litlen, &dist, out)?;
            }
            _ => return Err(InflateError::ReservedBlockType),
        }
        if bfinal == 1 {
            return Ok(());
        }
    }
}

/// Decodes a raw DEFLATE stream starting at data[0]. Trailing bytes after
/// the final block are not an error; `consumed` reports the stream length.
pub fn inflate(data: &[u8]) -> Result<InflateResult, InflateError> {
    let mut br = BitReader::new(data, 0);
    let mut output = Vec::new();
    inflate_blocks(&mut br, &mut output)?;
    let consumed = br.bytes_consumed();
    Ok(InflateResult { output, consumed, checksum_verified: false })
}

const FHCRC: u8 = 1 << 1;
const FEXTRA: u8 = 1 << 2;
const FNAME: u8 = 1 << 3;
const FCOMMENT: u8 = 1 << 4;

/// Decodes one RFC 1952 member occupying the whole input; the CRC-32 and
/// ISIZE trailer fields must match.
pub fn gunzip(data: &[u8]) -> Result<InflateResult, InflateError> {
    if data.len() < 2 {
        return Err(InflateError::Truncated);
    }
    if data[0] != 0x1F || data[1] != 0x8B {
        return Err(InflateError::BadGzipMagic);
    }
    if data.len() < 10 {
        return Err(InflateError::Truncated);
    }
    if data[2] != 8 {
        return Err(InflateError::UnsupportedMethod(data[2]));
    }
    let flags = data[3];
    if flags & 0xE0 != 0 {
        return Err(InflateError::UnsupportedGzipFlags(flags));
    }
    let mut pos = 10;
    if flags & FEXTRA != 0 {
        let xlen = data.get(pos..pos + 2).ok_or(InflateError::Truncated)?;
        let xlen = u16::from_le_bytes([xlen[0], xlen[1]]) as usize;
        pos += 2 + xlen;
    }
    if flags & FNAME != 0 {
        pos += 1 + zero_terminated_len(data, pos)?;
    }
    if flags & FCOMMENT != 0 {
        pos += 1 + zero_terminated_len(data, pos)?;
    }
    if flags & FHCRC != 0 {
        pos += 2;
    }
    if pos > data.len() {
        return Err(InflateError::Truncated);
    }

    let mut br = BitReader::new(data, pos);
    let mut output = Vec::new();
    inflate_blocks(&mut br, &mut output)?;
    let stream_end = br.bytes_consumed();

    let trailer = data.get(stream_end..stream_end + 8).ok_or(InflateError::Truncated)?;
    let stored_crc = u32::from_le_bytes(trailer[0..4].try_into().unwrap());
    let stored_size = u32::from_le_bytes(trailer[4..8].try_into().unwrap());
    let computed = crc32(&output);
    if stored_crc != computed {
        return Err(InflateError::Crc32Mismatch { stored: stored_crc, computed });
    }
    let actual = output.len() as u32;
    if stored_size != actual {
        return Err(InflateError::SizeMismatch { stored: stored_size, actual });
    }
    let consumed = stream_end + 8;
    if consumed < data.len() {
        return Err(InflateError::TrailingData(data.len() - consumed));
    }
    Ok(InflateResult { output, consumed, checksum_verified: true })
}

fn zero_terminated_len(data: &[u8], from: usize) -> Result<usize, InflateError> {
    data.get(from..)
        .and_then(|tail| tail.iter().position(|&b| b == 0))
        .ok_or(InflateError::Truncated)
}

/// Decodes an RFC 1950 stream occupying the whole input; the Adler-32
/// trailer must match.
pub fn unzlib(data: &[u8]) -> Result<InflateResult, InflateError> {
    if data.len() < 2 {
        return Err(InflateError::Truncated);
    }
    let cmf = data[0];
    let flg = data[1];
    if (cmf as u32 * 256 + flg as u32) % 31 != 0 {
        return Err(InflateError::BadZlibHeader);
    }
    if cmf & 0x0F != 8 {
        return Err(InflateError::UnsupportedMethod(cmf & 0x0F));
    }
    if cmf >> 4 > 7 {
        return Err(InflateError::BadZlibHeader);
    }
    if flg & 0x20 != 0 {
        return Err(InflateError::DictionaryUnsupported);
    }

    let mut br = BitReader::new(data, 2);
    let mut output = Vec::new();
    inflate_blocks(&mut br, &mut output)?;
    let stream_end = br.bytes_consumed();

    let trailer = data.get(stream_end..stream_end + 4).ok_or(InflateError::Truncated)?;
    let stored = u32::from_be_bytes(trailer.try_into().unwrap());
    let computed = adler32(&output);
    if stored != computed {
        return Err(InflateError::Adler32Mismatch { stored, computed });
    }
    let consumed = stream_end + 4;
    if consumed < data.len() {
        return Err(InflateError::TrailingData(data.len() - consumed));
    }
    Ok(InflateResult { output, consumed, checksum_verified: true })
}

/// Sniffs the container and decodes: the gzip magic commits to gzip; a
/// plausible zlib header tries zlib but falls back to a raw stream (raw
/// bytes may collide with the two header bytes); anything else is raw.
pub fn decode_any(data: &[u8]) -> Result<(InflateResult, Format), InflateError> {
    if data.len() >= 2 && data[0] == 0x1F && data[1] == 0x8B {
        return gunzip(data).map(|r| (r, Format::Gzip));
    }
    let zlib_plausible = data.len() >= 2
        && data[0] & 0x0F == 8
        && data[0] >> 4 <= 7
        && (data[0] as u32 * 256 + data[1] as u32) % 31 == 0
        && data[1] & 0x20 == 0;
    if zlib_plausible {
        if let Ok(r) = unzlib(data) {
            return Ok((r, Format::Zlib));
        }
    }
    let r = inflate(data)?;
    if r.consumed < data.len() {
        return Err(InflateError::TrailingData(data.len() - r.consumed));
    }
    Ok((r, Format::Raw))
}
