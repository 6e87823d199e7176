//! Gzip-compatible DEFLATE compression built on iterative shortest-path
//! parsing, plus classic LZ77/LZSS reference codecs and corpus benchmarks.

pub mod baselines;
pub mod bench;
pub mod block_splitter;
pub mod entropy_coder;
pub mod inflate;
pub mod lz_store;
pub mod match_finder;
pub mod parsers;
pub mod pipeline;
pub mod symbols;

pub use entropy_coder::Format;
pub use lz_store::{StoreError, Token, TokenStore};
