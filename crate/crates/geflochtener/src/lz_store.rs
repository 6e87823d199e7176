//! Token representation shared by the parsers and the entropy coder, with
//! append and expand (decode-to-bytes) operations.

use crate::symbols::{MAX_MATCH, MIN_MATCH, WINDOW_SIZE};
use thiserror::Error;

/// One parsed item: a literal byte or a backward reference.
///
/// `dist == 0` marks a literal whose byte value lives in `litlen`;
/// `dist > 0` marks a match of `litlen` bytes starting `dist` bytes back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub litlen: u16,
    pub dist: u16,
}

impl Token {
    #[inline]
    pub fn literal(byte: u8) -> Self {
        Token { litlen: byte as u16, dist: 0 }
    }

    #[inline]
    pub fn reference(length: u16, dist: u16) -> Self {
        debug_assert!((MIN_MATCH..=MAX_MATCH).contains(&(length as usize)));
        debug_assert!((1..=WINDOW_SIZE).contains(&(dist as usize)));
        Token { litlen: length, dist }
    }

    #[inline]
    pub fn is_literal(&self) -> bool {
        self.dist == 0
    }

    /// Bytes of input this token covers.
    #[inline]
    pub fn advance(&self) -> usize {
        if self.is_literal() {
            1
        } else {
            self.litlen as usize
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("literal byte {0} out of range 0..=255")]
    LiteralOutOfRange(u16),
    #[error("match length {0} outside [{MIN_MATCH}, {MAX_MATCH}]")]
    LengthOutOfRange(u16),
    #[error("match distance {0} outside [1, {WINDOW_SIZE}]")]
    DistOutOfRange(u16),
    #[error("match at output position {pos} reaches {dist} bytes back, before output start")]
    ReferenceBeforeStart { pos: usize, dist: usize },
}

/// Ordered token sequence plus each token's offset into the original input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStore {
    tokens: Vec<Token>,
    source_positions: Vec<usize>,
}

impl TokenStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        TokenStore {
            tokens: Vec::with_capacity(n),
            source_positions: Vec::with_capacity(n),
        }
    }

    /// Appends a literal (`dist == 0`, `symbol` is the byte) or a match
    /// (`length` in [3, 258], `dist` in [1, 32768]) observed at input offset `pos`.
    pub fn append_lit_len_dist(
        &mut self,
        length: u16,
        dist: u16,
        pos: usize,
    ) -> Result<(), StoreError> {
        if dist == 0 {
            if length > 255 {
                return Err(StoreError::LiteralOutOfRange(length));
            }
        } else {
            if !(MIN_MATCH..=MAX_MATCH).contains(&(length as usize)) {
                return Err(StoreError::LengthOutOfRange(length));
            }
            if dist as usize > WINDOW_SIZE {
                return Err(StoreError::DistOutOfRange(dist));
            }
        }
        debug_assert!(
            self.source_positions.last().is_none_or(|&last| last < pos),
            "source positions must be strictly increasing"
        );
        self.tokens.push(Token { litlen: length, dist });
        self.source_positions.push(pos);
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    #[inline]
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    #[inline]
    pub fn source_positions(&self) -> &[usize] {
        &self.source_positions
    }

    /// Input bytes covered by the token range `from..to`.
    pub fn byte_range(&self, from: usize, to: usize) -> usize {
        self.tokens[from..to].iter().map(Token::advance).sum()
    }

    /// Decodes the store back to bytes. Matches copy byte-by-byte so
    /// overlapping references (`dist < length`) self-extend, as in DEFLATE.
    /// The result reproduces the input slice the store was parsed from.
    pub fn expand(&self) -> Result<Vec<u8>, StoreError> {
        let total: usize = self.tokens.iter().map(Token::advance).sum();
        let mut out = Vec::with_capacity(total);
        for token in &self.tokens {
            if token.is_literal() {
                out.push(token.litlen as u8);
            } else {
                let dist = token.dist as usize;
                if dist > out.len() {
                    return Err(StoreError::ReferenceBeforeStart { pos: out.len(), dist });
                }
                let start = out.len() - dist;
                for k in 0..token.litlen as usize {
                    let byte = out[start + k];
                    out.push(byte);
                }
            }
        }
        Ok(out)
    }
}
