//! Just enough archive reading to unpack the public corpus bundles: ZIP
//! central-directory walking with stored and deflated members, and POSIX
//! tar, optionally gzip-wrapped. Member checksums are verified.

use crate::entropy_coder::crc32;
use crate::inflate::{gunzip, inflate, InflateError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArchiveError {
    #[error("archive ended inside a structure")]
    Truncated,
    #[error("not a supported archive format")]
    BadSignature,
    #[error("zip member {0:?} uses unsupported compression method {1}")]
    UnsupportedCompression(String, u16),
    #[error("zip member {0:?} is encrypted")]
    Encrypted(String),
    #[error("member {0:?} failed its checksum")]
    MemberChecksum(String),
    #[error("member {0:?} decompressed to {1} bytes, expected {2}")]
    MemberSize(String, u64, u64),
    #[error("tar header checksum mismatch at block {0}")]
    TarChecksum(usize),
    #[error(transparent)]
    Inflate(#[from] InflateError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveEntry {
    pub name: String,
    pub data: Vec<u8>,
}

fn le16(bytes: &[u8], at: usize) -> Result<u16, ArchiveError> {
    let b = bytes.get(at..at + 2).ok_or(ArchiveError::Truncated)?;
    Ok(u16::from_le_bytes([b[0], b[1]]))
}

fn le32(bytes: &[u8], at: usize) -> Result<u32, ArchiveError> {
    let b = bytes.get(at..at + 4).ok_or(ArchiveError::Truncated)?;
    Ok(u32::from_le_bytes(b.try_into().unwrap()))
}

const EOCD_SIG: u32 = 0x0605_4B50;
const CENTRAL_SIG: u32 = 0x0201_4B50;
const LOCAL_SIG: u32 = 0x0403_4B50;

/// Reads every regular-file member of a ZIP archive. Sizes and CRCs come
/// from the central directory, so data-descriptor members work too.
pub fn read_zip(bytes: &[u8]) -> Result<Vec<ArchiveEntry>, ArchiveError> {
    // The end-of-central-directory record sits within the trailing 64 KB
    // (its comment is at most 65535 bytes).
    let scan_from = bytes.len().saturating_sub(65_557);
    let mut eocd = None;
    for at in (scan_from..bytes.len().saturating_sub(21)).rev() {
        if le32(bytes, at)? == EOCD_SIG {
            eocd = Some(at);
            break;
        }
    }
    let eocd = eocd.ok_or(ArchiveError::BadSignature)?;
    let entries = le16(bytes, eocd + 10)? as usize;
    let mut at = le32(bytes, eocd + 16)? as usize;

    let mut out = Vec::new();
    for _ in 0..entries {
        if le32(bytes, at)? != CENTRAL_SIG {
            return Err(ArchiveError::BadSignature);
        }
        let flags = le16(bytes, at + 8)?;
        let method = le16(bytes, at + 10)?;
        let crc = le32(bytes, at + 16)?;
        let csize = le32(bytes, at + 20)? as usize;
        let usize_ = le32(bytes, at + 24)? as u64;
        let name_len = le16(bytes, at + 28)? as usize;
        let extra_len = le16(bytes, at + 30)? as usize;
        let comment_len = le16(bytes, at + 32)? as usize;
        let local_at = le32(bytes, at + 42)? as usize;
        let name_bytes = bytes.get(at + 46..at + 46 + name_len).ok_or(ArchiveError::Truncated)?;
        let name = String::from_utf8_lossy(name_bytes).into_owned();
        at += 46 + name_len + extra_len + comment_len;

        if name.ends_with('/') {
            continue;
        }
        if flags & 1 != 0 {
            return Err(ArchiveError::Encrypted(name));
        }

        if le32(bytes, local_at)? != LOCAL_SIG {
            return Err(ArchiveError::BadSignature);
        }
        let local_name = le16(bytes, local_at + 26)? as usize;
        let local_extra = le16(bytes, local_at + 28)? as usize;
        let data_at = local_at + 30 + local_name + local_extra;
        let raw = bytes.get(data_at..data_at + csize).ok_or(ArchiveError::Truncated)?;

        let data = match method {
            0 => raw.to_vec(),
            8 => inflate(raw)?.output,
            m => return Err(ArchiveError::UnsupportedCompression(name, m)),
        };
        if data.len() as u64 != usize_ {
            return Err(ArchiveError::MemberSize(name, data.len() as u64, usize_));
        }
        if crc32(&data) != crc {
            return Err(ArchiveError::MemberChecksum(name));
        }
        out.push(ArchiveEntry { name, data });
    }
    Ok(out)
}

fn parse_octal(field: &[u8]) -> Option<u64> {
    let text = field.iter().take_while(|&&b| b != 0).copied().collect::<Vec<u8>>();
    let text = String::from_utf8(text).ok()?;
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Some(0);
    }
    u64::from_str_radix(trimmed, 8).ok()
}

/// Reads every regular-file member of a POSIX tar stream.
pub fn read_tar(bytes: &[u8]) -> Result<Vec<ArchiveEntry>, ArchiveError> {
    let mut out = Vec::new();
    let mut block = 0usize;
    loop {
        let at = block * 512;
        let header = match bytes.get(at..at + 512) {
            None if at >= bytes.len() => break,
            None => return Err(ArchiveError::Truncated),
            Some(h) => h,
        };
        if header.iter().all(|&b| b == 0) {
            break;
        }
        // The checksum covers the header with its own field spaced out.
        let recorded = parse_octal(&header[148..156]).ok_or(ArchiveError::TarChecksum(block))?;
        let sum: u64 = header
            .iter()
            .enumerate()
            .map(|(i, &b)| if (148..156).contains(&i) { b' ' as u64 } else { b as u64 })
            .sum();
        if sum != recorded {
            return Err(ArchiveError::TarChecksum(block));
        }
        let name: String = String::from_utf8_lossy(
            &header[..100].iter().take_while(|&&b| b != 0).copied().collect::<Vec<u8>>(),
        )
        .into_owned();
        let size = parse_octal(&header[124..136]).ok_or(ArchiveError::TarChecksum(block))? as usize;
        let typeflag = header[156];
        let data_at = at + 512;
        let data_blocks = size.div_ceil(512);
        if typeflag == b'0' || typeflag == 0 {
            let data = bytes.get(data_at..data_at + size).ok_or(ArchiveError::Truncated)?;
            out.push(ArchiveEntry { name, data: data.to_vec() });
        }
        block += 1 + data_blocks;
    }
    Ok(out)
}

/// Dispatches on the archive's own magic: ZIP, tar, or gzip-wrapped tar.
pub fn read_archive(bytes: &[u8]) -> Result<Vec<ArchiveEntry>, ArchiveError> {
    if bytes.starts_with(b"PK") {
        return read_zip(bytes);
    }
    if bytes.starts_with(&[0x1F, 0x8B]) {
        let tar = gunzip(bytes)?.output;
        return read_tar(&tar);
    }
    if bytes.len() >= 263 && &bytes[257..262] == b"ustar" {
        return read_tar(bytes);
    }
    Err(ArchiveError::BadSignature)
}
