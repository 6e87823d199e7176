//! LSB-first bit packing for DEFLATE output.

/// Accumulates bits least-significant-first into bytes, as RFC 1951 requires
/// for everything except Huffman codewords (which enter MSB-first via
/// [`BitWriter::add_huffman_bits`]).
#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    /// Bits used in the final byte (0 means byte-aligned).
    bit: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add_bit(&mut self, bit: u32) {
        if self.bit == 0 {
            self.bytes.push(0);
        }
        let last = self.bytes.last_mut().unwrap();
        *last |= ((bit & 1) as u8) << self.bit;
        self.bit = (self.bit + 1) & 7;
    }

    /// Writes the low `count` bits of `value`, LSB first.
    #[inline]
    pub fn add_bits(&mut self, value: u32, count: u32) {
        for i in 0..count {
            self.add_bit(value >> i);
        }
    }

    /// Writes a Huffman codeword: `count` bits of `code`, MSB first.
    #[inline]
    pub fn add_huffman_bits(&mut self, code: u32, count: u32) {
        for i in (0..count).rev() {
            self.add_bit(code >> i);
        }
    }

    /// Pads with zero bits to the next byte boundary.
    pub fn align_byte(&mut self) {
        self.bit = 0;
    }

    /// Appends raw bytes; caller must be byte-aligned (stored blocks).
    pub fn write_bytes(&mut self, data: &[u8]) {
        assert_eq!(self.bit, 0, "stored data requires byte alignment");
        self.bytes.extend_from_slice(data);
    }

    /// Total bits written so far (padding from `align_byte` included).
    pub fn bits_written(&self) -> u64 {
        self.bytes.len() as u64 * 8 - if self.bit == 0 { 0 } else { (8 - self.bit) as u64 }
    }

    pub fn is_byte_aligned(&self) -> bool {
        self.bit == 0
    }

    /// Final byte padded with zeros by construction.
    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}
