//! H&M extended with block tracking, which yields the merged LCP array.
//!
//! `B[r] != 0` marks that a block of the current bit vector starts at row
//! `r`; the value is the phase in which that boundary was discovered. A
//! boundary found in phase `h` separates rows whose contexts first differ at
//! offset `h - 1`, so once every entry is set, `lcp[r] = B[r] - 1`.

use crate::error::{Error, Result};
use crate::hm::apply_merge;
use crate::hm::{
    check_inputs, init_z, merge_symbol, FTable, MergeBitVector, MergeOutput, MergeStats,
    SymbolCounts,
};
use crate::text::{is_sentinel, BwtString, LcpArray};

/// Block boundaries, indexed `0..=n`. Zero means unset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockArray {
    b: Vec<u32>,
    unset: usize,
}

/// `B = 1 0^(n-1) 1` for `n = n0 + n1`.
pub fn init_b(n0: usize, n1: usize) -> BlockArray {
    let n = n0 + n1;
    assert!(n >= 2, "a merge has at least two rows");
    let mut b = vec![0u32; n + 1];
    b[0] = 1;
    b[n] = 1;
    BlockArray { b, unset: n - 1 }
}

impl BlockArray {
    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.b[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.b
    }

    /// Number of rows `n`; the array holds `n + 1` entries.
    pub fn rows(&self) -> usize {
        self.b.len() - 1
    }

    /// Entries still zero.
    pub fn unset(&self) -> usize {
        self.unset
    }

    /// Does a block of the previous phase start at `k`? Values written in
    /// the running phase `h` do not count. Row 0 always starts a block.
    #[inline]
    pub fn starts_block(&self, k: usize, h: u32) -> bool {
        k == 0 || (self.b[k] != 0 && self.b[k] != h)
    }

    /// Writes `h` at `j` if unset. Set entries never change.
    #[inline]
    pub fn mark(&mut self, j: usize, h: u32) {
        if self.b[j] == 0 {
            self.b[j] = h;
            self.unset -= 1;
        }
    }

    pub fn size_in_bytes(&self) -> usize {
        self.b.len() * 4
    }
}

/// For each bucket, the id of the last block in which it occurred.
#[derive(Clone, Debug)]
pub struct BidTable {
    bid_of: [usize; 256],
}

impl Default for BidTable {
    fn default() -> Self {
        BidTable {
            bid_of: [usize::MAX; 256],
        }
    }
}

impl BidTable {
    /// True the first time `c` is seen in block `bid`, recording it.
    /// Sentinel buckets hold one distinct symbol per occurrence, so every
    /// occurrence counts as first.
    #[inline]
    pub fn first_in_block(&mut self, c: u8, bid: usize) -> bool {
        if is_sentinel(c) {
            return true;
        }
        let slot = &mut self.bid_of[c as usize];
        if *slot == bid {
            false
        } else {
            *slot = bid;
            true
        }
    }
}

fn lcp_pass(
    h: u32,
    zprev: &MergeBitVector,
    znext: &mut MergeBitVector,
    b: &mut BlockArray,
    bwt0: &[u8],
    bwt1: &[u8],
    counts: &SymbolCounts,
) {
    let mut f = FTable::new(counts);
    let mut bids = BidTable::default();
    let (mut k0, mut k1) = (0usize, 0usize);
    let mut bid = 0usize;
    for k in 0..zprev.len() {
        if b.starts_block(k, h) {
            bid = k;
        }
        let bit = zprev.get(k);
        let c = if bit {
            k1 += 1;
            merge_symbol(bwt1[k1 - 1], 1)
        } else {
            k0 += 1;
            merge_symbol(bwt0[k0 - 1], 0)
        };
        let j = f.next(c);
        znext.set(j, bit);
        if bids.first_in_block(c, bid) {
            b.mark(j, h);
        }
    }
}

/// Phase `h` (starting at 1): computes `Z^(h)` from `Z^(h-1)` and records
/// new block boundaries in `b`.
pub fn hmlcp_phase(
    h: u32,
    zprev: &MergeBitVector,
    b: &mut BlockArray,
    bwt0: &BwtString,
    bwt1: &BwtString,
) -> Result<MergeBitVector> {
    if h == 0 {
        return Err(Error::InvalidInput("phases are numbered from 1".into()));
    }
    let n = bwt0.len() + bwt1.len();
    if zprev.len() != n || b.rows() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: zprev.len().min(b.rows()),
        });
    }
    let counts = SymbolCounts::new(bwt0.symbols(), bwt1.symbols());
    let mut znext = MergeBitVector::zeros(n);
    lcp_pass(
        h,
        zprev,
        &mut znext,
        b,
        bwt0.symbols(),
        bwt1.symbols(),
        &counts,
    );
    Ok(znext)
}

/// Phase-by-phase driver, exposing the state between phases.
pub struct HmLcpMerger<'a> {
    bwt0: &'a BwtString,
    bwt1: &'a BwtString,
    counts: SymbolCounts,
    cur: MergeBitVector,
    next: MergeBitVector,
    b: BlockArray,
    stats: MergeStats,
}

impl<'a> HmLcpMerger<'a> {
    pub fn new(bwt0: &'a BwtString, bwt1: &'a BwtString) -> Result<Self> {
        check_inputs(bwt0, bwt1)?;
        let (n0, n1) = (bwt0.len(), bwt1.len());
        Ok(HmLcpMerger {
            bwt0,
            bwt1,
            counts: SymbolCounts::new(bwt0.symbols(), bwt1.symbols()),
            cur: init_z(n0, n1),
            next: MergeBitVector::zeros(n0 + n1),
            b: init_b(n0, n1),
            stats: MergeStats::default(),
        })
    }

    /// Every boundary has been found.
    pub fn is_done(&self) -> bool {
        self.b.unset() == 0
    }

    /// Runs the next phase; returns the number of positions scanned.
    pub fn step(&mut self) -> usize {
        let h = self.stats.phases as u32 + 1;
        lcp_pass(
            h,
            &self.cur,
            &mut self.next,
            &mut self.b,
            self.bwt0.symbols(),
            self.bwt1.symbols(),
            &self.counts,
        );
        std::mem::swap(&mut self.cur, &mut self.next);
        let n = self.cur.len();
        self.stats.phases += 1;
        self.stats.active_work.push(n);
        n
    }

    pub fn phase(&self) -> usize {
        self.stats.phases
    }

    /// Bit vector after the last completed phase.
    pub fn z(&self) -> &MergeBitVector {
        &self.cur
    }

    pub fn blocks(&self) -> &BlockArray {
        &self.b
    }

    pub fn run(mut self) -> Result<MergeOutput> {
        let limit = self.cur.len() + 1;
        while !self.is_done() {
            if self.stats.phases >= limit {
                return Err(Error::NonConvergence {
                    phases: self.stats.phases,
                });
            }
            self.step();
        }
        self.finish()
    }

    pub fn finish(self) -> Result<MergeOutput> {
        if !self.is_done() {
            return Err(Error::NotConverged);
        }
        let n = self.cur.len();
        let interior: Vec<i64> = (1..n).map(|r| self.b.get(r) as i64 - 1).collect();
        let bwt = apply_merge(&self.cur, self.bwt0, self.bwt1)?;
        Ok(MergeOutput {
            bwt,
            lcp: Some(LcpArray::from_interior(&interior)),
            z: self.cur,
            stats: self.stats,
        })
    }
}

/// Merges two BWTs and computes the merged LCP array from block boundaries
/// alone; the input LCP arrays are not needed.
pub fn hmlcp_merge(bwt0: &BwtString, bwt1: &BwtString) -> Result<MergeOutput> {
    HmLcpMerger::new(bwt0, bwt1)?.run()
}
