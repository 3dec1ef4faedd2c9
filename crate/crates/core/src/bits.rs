//! Append-only bit vectors and a sampled `select1` index.

/// A growable vector of bits packed into little-endian 64-bit words.
///
/// Bit `i` lives in word `i / 64` at bit offset `i % 64`. Bits past `len`
/// are always zero so that serialized payloads are canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    /// A vector of `len` zero bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.truncate(len.div_ceil(64));
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= mask(len % 64);
        }
        Self { words, len }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Appends the low `width` bits of `value`.
    pub fn push_bits(&mut self, value: u64, width: usize) {
        debug_assert!(width <= 64);
        if width == 0 {
            return;
        }
        let value = value & mask(width);
        let offset = self.len % 64;
        if offset == 0 {
            self.words.push(value);
        } else {
            let last = self.words.len() - 1;
            self.words[last] |= value << offset;
            if offset + width > 64 {
                self.words.push(value >> (64 - offset));
            }
        }
        self.len += width;
    }

    pub fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    /// Appends all bits of `other`.
    pub fn extend_from(&mut self, other: &BitVec) {
        let mut remaining = other.len;
        for &w in &other.words {
            let width = remaining.min(64);
            self.push_bits(w, width);
            remaining -= width;
        }
    }

    /// Copies `len` bits starting at `start` into a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len);
        let mut out = BitVec::with_capacity(len);
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let width = (end - pos).min(64);
            out.push_bits(self.get_bits(pos, width), width);
            pos += width;
        }
        out
    }

    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        debug_assert!(pos < self.len);
        (self.words[pos / 64] >> (pos % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, pos: usize) {
        debug_assert!(pos < self.len);
        self.words[pos / 64] |= 1 << (pos % 64);
    }

    /// Reads `width` bits starting at `pos`.
    #[inline]
    pub fn get_bits(&self, pos: usize, width: usize) -> u64 {
        debug_assert!(width <= 64);
        debug_assert!(pos + width <= self.len);
        if width == 0 {
            return 0;
        }
        let word = pos / 64;
        let offset = pos % 64;
        let mut value = self.words[word] >> offset;
        if offset + width > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        value & mask(width)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Position of the `rank`-th (0-based) set bit of `word`.
#[inline]
pub(crate) fn select_in_word(mut word: u64, rank: u32) -> u32 {
    debug_assert!(rank < word.count_ones());
    for _ in 0..rank {
        word &= word - 1;
    }
    word.trailing_zeros()
}

const SELECT_SAMPLE: usize = 256;

/// Sampled positions of every 256th set bit; `select1` scans forward from
/// the nearest sample.
#[derive(Debug, Clone, Default)]
pub struct SelectIndex {
    samples: Vec<usize>,
}

impl SelectIndex {
    pub fn build(bits: &BitVec) -> Self {
        let mut samples = Vec::new();
        let mut seen = 0usize;
        for (i, &w) in bits.words().iter().enumerate() {
            let ones = w.count_ones() as usize;
            while samples.len() * SELECT_SAMPLE < seen + ones {
                let rank = samples.len() * SELECT_SAMPLE - seen;
                samples.push(i * 64 + select_in_word(w, rank as u32) as usize);
            }
            seen += ones;
        }
        Self { samples }
    }

    /// Position of the `rank`-th set bit. The caller guarantees it exists.
    #[inline]
    pub fn select1(&self, bits: &BitVec, rank: usize) -> usize {
        let sample = rank / SELECT_SAMPLE;
        let start = self.samples[sample];
        let mut remaining = rank - sample * SELECT_SAMPLE;
        let words = bits.words();
        let mut idx = start / 64;
        let mut w = words[idx] & (u64::MAX << (start % 64));
        loop {
            let ones = w.count_ones() as usize;
            if remaining < ones {
                return idx * 64 + select_in_word(w, remaining as u32) as usize;
            }
            remaining -= ones;
            idx += 1;
            w = words[idx];
        }
    }
}
