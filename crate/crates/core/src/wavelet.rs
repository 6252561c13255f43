//! Balanced wavelet tree over a byte sequence.
//!
//! The alphabet is remapped to dense codes `0..sigma` before construction so
//! the depth is `ceil(log2 sigma)`. Levels are stored pointerless: level `l`
//! holds one bit per position, with the nodes of that level laid out left to
//! right in code order.

const WORDS_PER_BLOCK: usize = 8;

/// Plain bit vector with a rank directory sampled every 512 bits.
#[derive(Clone, Debug)]
pub struct RankBitVec {
    words: Vec<u64>,
    blocks: Vec<u64>,
    len: usize,
}

impl RankBitVec {
    pub fn from_bits(bits: impl ExactSizeIterator<Item = bool>) -> RankBitVec {
        let len = bits.len();
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, b) in bits.enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let mut blocks = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 1);
        let mut acc = 0u64;
        for chunk in words.chunks(WORDS_PER_BLOCK) {
            blocks.push(acc);
            acc += chunk.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        }
        blocks.push(acc);
        RankBitVec { words, blocks, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Number of ones in positions `0..i`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let word = i / 64;
        let block = word / WORDS_PER_BLOCK;
        let mut r = self.blocks[block];
        for w in &self.words[block * WORDS_PER_BLOCK..word] {
            r += w.count_ones() as u64;
        }
        let bit = i % 64;
        if bit != 0 {
            r += (self.words[word] & ((1u64 << bit) - 1)).count_ones() as u64;
        }
        r as usize
    }

    pub fn size_in_bytes(&self) -> usize {
        8 * (self.words.len() + self.blocks.len())
    }
}

#[derive(Clone, Debug)]
pub struct WaveletTree {
    levels: Vec<RankBitVec>,
    /// Dense code of each byte; `NONE` when the byte does not occur.
    code_of: [u16; 256],
    /// Byte of each dense code.
    symbol_of: Vec<u8>,
    n: usize,
}

const NONE: u16 = u16::MAX;

impl WaveletTree {
    /// Builds the tree in `O(n log sigma)` time.
    pub fn new(seq: &[u8]) -> WaveletTree {
        let n = seq.len();
        let mut present = [false; 256];
        for &c in seq {
            present[c as usize] = true;
        }
        let mut code_of = [NONE; 256];
        let mut symbol_of = Vec::new();
        for c in 0..256 {
            if present[c] {
                code_of[c] = symbol_of.len() as u16;
                symbol_of.push(c as u8);
            }
        }
        let sigma = symbol_of.len();
        let depth = if sigma <= 1 {
            0
        } else {
            (usize::BITS - (sigma - 1).leading_zeros()) as usize
        };

        let mut cur: Vec<u8> = seq.iter().map(|&c| code_of[c as usize] as u8).collect();
        let mut next = vec![0u8; n];
        let mut levels = Vec::with_capacity(depth);
        for level in 0..depth {
            let shift = depth - 1 - level;
            levels.push(RankBitVec::from_bits(
                cur.iter().map(|&code| (code >> shift) & 1 == 1),
            ));
            if level + 1 == depth {
                break;
            }
            // Stable counting sort on the top `level + 1` bits lays out the
            // nodes of the next level.
            let buckets = 1usize << (level + 1);
            let mut start = vec![0usize; buckets + 1];
            for &code in &cur {
                start[(code >> shift) as usize + 1] += 1;
            }
            for b in 0..buckets {
                start[b + 1] += start[b];
            }
            for &code in &cur {
                let b = (code >> shift) as usize;
                next[start[b]] = code;
                start[b] += 1;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        WaveletTree {
            levels,
            code_of,
            symbol_of,
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Number of distinct symbols.
    pub fn sigma(&self) -> usize {
        self.symbol_of.len()
    }

    pub fn access(&self, i: usize) -> u8 {
        assert!(i < self.n, "position {i} out of range {}", self.n);
        let (mut start, mut end, mut pos) = (0usize, self.n, i);
        let mut code = 0usize;
        for lv in &self.levels {
            let ones_start = lv.rank1(start);
            let ones_end = lv.rank1(end);
            let zeros = (end - start) - (ones_end - ones_start);
            let ones_before = lv.rank1(pos) - ones_start;
            code <<= 1;
            if lv.get(pos) {
                code |= 1;
                pos = start + zeros + ones_before;
                start += zeros;
            } else {
                pos = start + (pos - start - ones_before);
                end = start + zeros;
            }
        }
        self.symbol_of[code]
    }

    /// Occurrences of `c` in the prefix of length `i`. Absent symbols count 0.
    pub fn rank(&self, c: u8, i: usize) -> usize {
        assert!(i <= self.n, "prefix length {i} exceeds {}", self.n);
        let code = self.code_of[c as usize];
        if code == NONE {
            return 0;
        }
        let depth = self.levels.len();
        let (mut start, mut end, mut count) = (0usize, self.n, i);
        for (level, lv) in self.levels.iter().enumerate() {
            let ones_start = lv.rank1(start);
            let ones_end = lv.rank1(end);
            let zeros = (end - start) - (ones_end - ones_start);
            let ones_before = lv.rank1(start + count) - ones_start;
            if (code >> (depth - 1 - level)) & 1 == 1 {
                count = ones_before;
                start += zeros;
            } else {
                count -= ones_before;
                end = start + zeros;
            }
        }
        count
    }

    pub fn size_in_bytes(&self) -> usize {
        self.levels
            .iter()
            .map(RankBitVec::size_in_bytes)
            .sum::<usize>()
            + self.symbol_of.len()
            + std::mem::size_of::<Self>()
    }
}

impl From<&crate::text::BwtString> for WaveletTree {
    fn from(b: &crate::text::BwtString) -> Self {
        WaveletTree::new(b.symbols())
    }
}
