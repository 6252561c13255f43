//! The basic Holt-McMillan merge: repeated stable passes over an
//! interleaving bit vector until it stops changing.
//!
//! After phase `h` the bit vector orders the entries of the two BWTs by the
//! first `h` symbols of their contexts. Bit `0` stands for an entry of the
//! first BWT, bit `1` for the second; the `i`-th zero is identified with the
//! `i`-th entry of the first BWT.
//!
//! Inputs may be multi-string BWTs. All sentinels of the first input sort
//! before all sentinels of the second, so each input's sentinels share one
//! bucket of the F table (see [`merge_symbol`]).

use std::fmt;

use crate::error::{Error, Result};
use crate::text::{is_sentinel, BwtString, LcpArray};

/// Interleaving bit vector.
#[derive(Clone, PartialEq, Eq)]
pub struct MergeBitVector {
    words: Vec<u64>,
    len: usize,
}

impl MergeBitVector {
    pub fn zeros(len: usize) -> MergeBitVector {
        MergeBitVector {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> MergeBitVector {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0);
            }
            if b {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        MergeBitVector { words, len }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> MergeBitVector {
        MergeBitVector::from_bits(
            s.bytes()
                .filter(|b| !b.is_ascii_whitespace())
                .map(|b| b == b'1'),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Sets positions `start..end` to `b`.
    pub fn fill(&mut self, start: usize, end: usize, b: bool) {
        debug_assert!(start <= end && end <= self.len);
        let mut i = start;
        while i < end && !i.is_multiple_of(64) {
            self.set(i, b);
            i += 1;
        }
        while i + 64 <= end {
            self.words[i / 64] = if b { u64::MAX } else { 0 };
            i += 64;
        }
        while i < end {
            self.set(i, b);
            i += 1;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn size_in_bytes(&self) -> usize {
        self.words.len() * 8
    }
}

impl fmt::Display for MergeBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for MergeBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MergeBitVector({self})")
    }
}

/// `Z^(0)`: `n0` zeros followed by `n1` ones.
pub fn init_z(n0: usize, n1: usize) -> MergeBitVector {
    let mut z = MergeBitVector::zeros(n0 + n1);
    z.fill(n0, n0 + n1, true);
    z
}

/// Bucket of a symbol read from input `side` (0 or 1).
///
/// Payload symbols keep their code. Any sentinel of the first input maps to
/// bucket 0 and any sentinel of the second to bucket 1: sentinels of one
/// input are contiguous in the merged order and their relative order never
/// affects the bit vector, since they all carry the same bit.
#[inline]
pub fn merge_symbol(c: u8, side: usize) -> u8 {
    if is_sentinel(c) {
        side as u8
    } else {
        c
    }
}

/// Per-bucket symbol totals over both inputs.
#[derive(Clone, Debug)]
pub struct SymbolCounts {
    counts: [usize; 256],
}

impl SymbolCounts {
    pub fn new(bwt0: &[u8], bwt1: &[u8]) -> SymbolCounts {
        let mut counts = [0usize; 256];
        for &c in bwt0 {
            counts[merge_symbol(c, 0) as usize] += 1;
        }
        for &c in bwt1 {
            counts[merge_symbol(c, 1) as usize] += 1;
        }
        SymbolCounts { counts }
    }

    pub fn get(&self, bucket: u8) -> usize {
        self.counts[bucket as usize]
    }

    /// Buckets that occur at least once, in increasing order.
    pub fn present(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=255u8).filter(|&c| self.counts[c as usize] > 0)
    }
}

/// Destination counters of a pass. `f[c]` starts at the number of symbols
/// smaller than `c` (0-based positions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTable {
    f: [usize; 256],
}

impl FTable {
    pub fn new(counts: &SymbolCounts) -> FTable {
        let mut f = [0usize; 256];
        let mut acc = 0;
        for (slot, &count) in f.iter_mut().zip(&counts.counts) {
            *slot = acc;
            acc += count;
        }
        FTable { f }
    }

    #[inline]
    pub fn get(&self, c: u8) -> usize {
        self.f[c as usize]
    }

    #[inline]
    pub fn add(&mut self, c: u8, delta: usize) {
        self.f[c as usize] += delta;
    }

    /// Returns the current destination for `c` and advances it.
    #[inline]
    pub fn next(&mut self, c: u8) -> usize {
        let j = self.f[c as usize];
        self.f[c as usize] = j + 1;
        j
    }
}

/// Counters collected by every merge algorithm.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeStats {
    pub phases: usize,
    /// Positions scanned in each phase.
    pub active_work: Vec<usize>,
    /// Irrelevant ranges skipped (gap only).
    pub skips: usize,
    /// F entries touched while skipping in counts mode.
    pub occ_updates: usize,
    /// Wavelet rank queries issued by lazy F synchronization.
    pub rank_queries: usize,
    /// Lazy F synchronizations (first occurrences of a symbol in a block).
    pub syncs: usize,
}

impl MergeStats {
    pub fn total_work(&self) -> usize {
        self.active_work.iter().sum()
    }
}

/// Output of a merge.
#[derive(Clone, Debug)]
pub struct MergeOutput {
    pub bwt: BwtString,
    /// Absent for the plain H&M merge.
    pub lcp: Option<LcpArray>,
    pub z: MergeBitVector,
    pub stats: MergeStats,
}

pub(crate) fn check_inputs(bwt0: &BwtString, bwt1: &BwtString) -> Result<()> {
    for (i, b) in [bwt0, bwt1].into_iter().enumerate() {
        if b.string_count() == 0 {
            return Err(Error::InvalidInput(format!(
                "input {i} has no sentinel (length {})",
                b.len()
            )));
        }
    }
    let n = bwt0.len() + bwt1.len();
    if n >= u32::MAX as usize {
        return Err(Error::InvalidInput(format!("merged length {n} too large")));
    }
    Ok(())
}

fn check_counts(z: &MergeBitVector, n0: usize, n1: usize) -> Result<()> {
    let ones = z.count_ones();
    let zeros = z.len() - ones;
    if zeros != n0 || ones != n1 {
        return Err(Error::CountMismatch {
            zeros,
            ones,
            n0,
            n1,
        });
    }
    Ok(())
}

/// One stable counting pass, `Z^(h-1) -> Z^(h)`, into `znext`.
pub(crate) fn hm_pass(
    zprev: &MergeBitVector,
    znext: &mut MergeBitVector,
    bwt0: &[u8],
    bwt1: &[u8],
    counts: &SymbolCounts,
) {
    let mut f = FTable::new(counts);
    let (mut k0, mut k1) = (0usize, 0usize);
    for k in 0..zprev.len() {
        let b = zprev.get(k);
        let c = if b {
            k1 += 1;
            merge_symbol(bwt1[k1 - 1], 1)
        } else {
            k0 += 1;
            merge_symbol(bwt0[k0 - 1], 0)
        };
        znext.set(f.next(c), b);
    }
}

/// Computes `Z^(h)` from `Z^(h-1)`.
pub fn hm_phase(
    zprev: &MergeBitVector,
    bwt0: &BwtString,
    bwt1: &BwtString,
) -> Result<MergeBitVector> {
    check_counts(zprev, bwt0.len(), bwt1.len())?;
    let counts = SymbolCounts::new(bwt0.symbols(), bwt1.symbols());
    let mut znext = MergeBitVector::zeros(zprev.len());
    hm_pass(zprev, &mut znext, bwt0.symbols(), bwt1.symbols(), &counts);
    Ok(znext)
}

/// Merges two BWTs, iterating passes until the bit vector is a fixed point.
pub fn hm_merge(bwt0: &BwtString, bwt1: &BwtString) -> Result<MergeOutput> {
    check_inputs(bwt0, bwt1)?;
    let (n0, n1) = (bwt0.len(), bwt1.len());
    let n = n0 + n1;
    let counts = SymbolCounts::new(bwt0.symbols(), bwt1.symbols());
    let mut cur = init_z(n0, n1);
    let mut next = MergeBitVector::zeros(n);
    let mut stats = MergeStats::default();
    loop {
        if stats.phases > n + 1 {
            return Err(Error::NonConvergence {
                phases: stats.phases,
            });
        }
        hm_pass(&cur, &mut next, bwt0.symbols(), bwt1.symbols(), &counts);
        stats.phases += 1;
        stats.active_work.push(n);
        std::mem::swap(&mut cur, &mut next);
        if cur == next {
            break;
        }
    }
    let bwt = apply_merge(&cur, bwt0, bwt1)?;
    Ok(MergeOutput {
        bwt,
        lcp: None,
        z: cur,
        stats,
    })
}

/// Interleaves the two BWTs as directed by `z`.
pub fn apply_merge(z: &MergeBitVector, bwt0: &BwtString, bwt1: &BwtString) -> Result<BwtString> {
    check_counts(z, bwt0.len(), bwt1.len())?;
    let (s0, s1) = (bwt0.symbols(), bwt1.symbols());
    let (mut k0, mut k1) = (0usize, 0usize);
    let mut out = Vec::with_capacity(z.len());
    for b in z.iter() {
        if b {
            out.push(s1[k1]);
            k1 += 1;
        } else {
            out.push(s0[k0]);
            k0 += 1;
        }
    }
    Ok(BwtString::new(out))
}
