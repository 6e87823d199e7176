//! Entropy coding layer: checksums, bit-level output, length-limited Huffman
//! codes, DEFLATE block encoding and container framing.

pub mod bitwriter;
pub mod checksum;
pub mod container;
pub mod deflate;
pub mod huffman;

pub use bitwriter::BitWriter;
pub use checksum::{adler32, crc32, crc32_update};
pub use container::{wrap, Format};
pub use deflate::{
    add_block, best_block_type, calculate_block_size, calculate_block_size_auto_type, BlockType,
    Histogram,
};
pub use huffman::{build_length_limited_huffman, canonical_codes, HuffmanCode, HuffmanError};
