//! Container framing around a raw DEFLATE stream: gzip (RFC 1952), zlib
//! (RFC 1950), or nothing. Headers are fully deterministic: gzip writes a
//! zero mtime, XFL 2 (slowest compression) and OS 255 (unknown).

use super::checksum::{adler32, crc32};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Gzip,
    Zlib,
    Raw,
}

pub const GZIP_HEADER: [u8; 10] = [0x1F, 0x8B, 8, 0, 0, 0, 0, 0, 2, 255];
pub const ZLIB_HEADER: [u8; 2] = [0x78, 0xDA];

/// Wraps an already-encoded DEFLATE stream in the chosen container,
/// computing the trailer checksums from the original uncompressed bytes.
pub fn wrap(format: Format, deflate_stream: Vec<u8>, original: &[u8]) -> Vec<u8> {
    match format {
        Format::Raw => deflate_stream,
        Format::Gzip => {
            let mut out = Vec::with_capacity(deflate_stream.len() + 18);
            out.extend_from_slice(&GZIP_HEADER);
            out.extend_from_slice(&deflate_stream);
            out.extend_from_slice(&crc32(original).to_le_bytes());
            out.extend_from_slice(&(original.len() as u32).to_le_bytes());
            out
        }
        Format::Zlib => {
            let mut out = Vec::with_capacity(deflate_stream.len() + 6);
            out.extend_from_slice(&ZLIB_HEADER);
            out.extend_from_slice(&deflate_stream);
            out.extend_from_slice(&adler32(original).to_be_bytes());
            out
        }
    }
}
