//! The Gap merge: H&M with block tracking that stops scanning settled
//! regions.
//!
//! A block containing entries of only one input is monochrome; its bits can
//! no longer change. After a monochrome block has been processed once it is
//! marked irrelevant and later phases skip it, only advancing the read
//! cursors `k0`/`k1` by the record `(r0, r1)`. Adjacent irrelevant ranges are
//! coalesced, so between two active blocks there is at most one of them.
//!
//! Skipping leaves the F table behind. Two ways to catch up:
//!
//! - [`SkipMode::Counts`]: each range stores per-symbol occurrence counts
//!   that are added to F when it is skipped (`O(sigma)` per skip).
//! - [`SkipMode::Wavelet`]: F is synchronized lazily. `l0[c]`/`l1[c]` hold the
//!   cursors at the last update of `f[c]`; at the first occurrence of `c` in
//!   an active block the missed occurrences are counted with wavelet tree
//!   rank queries over both inputs (`O(log sigma)` per symbol per block).
//!
//! The Z buffers alternate between phases. A range is filled with its color
//! in the write buffer when it is marked, so both buffers hold its final bits
//! from then on.

use crate::error::{Error, Result};
use crate::hm::{
    apply_merge, check_inputs, init_z, merge_symbol, FTable, MergeBitVector, MergeOutput,
    MergeStats, SymbolCounts,
};
use crate::hm_lcp::{init_b, BidTable, BlockArray};
use crate::text::{BwtString, LcpArray};
use crate::wavelet::WaveletTree;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SkipMode {
    /// Per-range symbol counts, bulk-added to F on skip.
    Counts,
    /// Lazy F updates through wavelet tree ranks.
    #[default]
    Wavelet,
}

impl std::str::FromStr for SkipMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "counts" => Ok(SkipMode::Counts),
            "wavelet" => Ok(SkipMode::Wavelet),
            _ => Err(format!(
                "unknown skip mode `{s}` (expected counts or wavelet)"
            )),
        }
    }
}

/// A maximal irrelevant range `start..end` with its bit counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IrrelevantRange {
    pub start: u32,
    pub end: u32,
    /// Zeros in the range.
    pub r0: u32,
    /// Ones in the range.
    pub r1: u32,
}

impl IrrelevantRange {
    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GapConfig {
    pub skip_mode: SkipMode,
    /// Check bit stability of irrelevant ranges and the shape of the
    /// destinations of monochrome blocks after every phase.
    pub instrument: bool,
}

/// Violation counters of an instrumented run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstrumentReport {
    /// Bits of irrelevant ranges that changed after marking.
    pub stability_violations: usize,
    /// Destinations of a monochrome block that did not form whole blocks.
    pub destination_violations: usize,
    /// Destination runs checked.
    pub runs_checked: usize,
}

struct Instrument {
    shadow: MergeBitVector,
    marked: MergeBitVector,
    runs: Vec<(usize, usize)>,
    report: InstrumentReport,
}

/// Per-range symbol counts, `sigma` entries per range.
struct OccTable {
    buckets: Vec<u8>,
    dense: [usize; 256],
}

pub struct GapMerger<'a> {
    bwt0: &'a BwtString,
    bwt1: &'a BwtString,
    counts: SymbolCounts,
    zbuf: [MergeBitVector; 2],
    /// Buffer holding the bit vector of the last completed phase.
    cur: usize,
    b: BlockArray,
    gaps: Vec<IrrelevantRange>,
    occ: Vec<u32>,
    occ_table: Option<OccTable>,
    trees: Option<(WaveletTree, WaveletTree)>,
    instrument: Option<Instrument>,
    stats: MergeStats,
}

impl<'a> GapMerger<'a> {
    pub fn new(bwt0: &'a BwtString, bwt1: &'a BwtString, config: GapConfig) -> Result<Self> {
        check_inputs(bwt0, bwt1)?;
        let (n0, n1) = (bwt0.len(), bwt1.len());
        let n = n0 + n1;
        let counts = SymbolCounts::new(bwt0.symbols(), bwt1.symbols());
        let (occ_table, trees) = match config.skip_mode {
            SkipMode::Counts => {
                let buckets: Vec<u8> = counts.present().collect();
                let mut dense = [usize::MAX; 256];
                for (d, &c) in buckets.iter().enumerate() {
                    dense[c as usize] = d;
                }
                (Some(OccTable { buckets, dense }), None)
            }
            SkipMode::Wavelet => (
                None,
                Some((
                    WaveletTree::new(bwt0.symbols()),
                    WaveletTree::new(bwt1.symbols()),
                )),
            ),
        };
        let instrument = config.instrument.then(|| Instrument {
            shadow: MergeBitVector::zeros(n),
            marked: MergeBitVector::zeros(n),
            runs: Vec::new(),
            report: InstrumentReport::default(),
        });
        Ok(GapMerger {
            bwt0,
            bwt1,
            counts,
            zbuf: [init_z(n0, n1), MergeBitVector::zeros(n)],
            cur: 0,
            b: init_b(n0, n1),
            gaps: Vec::new(),
            occ: Vec::new(),
            occ_table,
            trees,
            instrument,
            stats: MergeStats::default(),
        })
    }

    fn rows(&self) -> usize {
        self.bwt0.len() + self.bwt1.len()
    }

    /// No active block remains.
    pub fn is_done(&self) -> bool {
        let n = self.rows();
        self.gaps.len() == 1 && self.gaps[0].start == 0 && self.gaps[0].end as usize == n
    }

    pub fn phase(&self) -> usize {
        self.stats.phases
    }

    pub fn stats(&self) -> &MergeStats {
        &self.stats
    }

    /// Bit vector after the last completed phase.
    pub fn z(&self) -> &MergeBitVector {
        &self.zbuf[self.cur]
    }

    pub fn blocks(&self) -> &BlockArray {
        &self.b
    }

    pub fn irrelevant(&self) -> &[IrrelevantRange] {
        &self.gaps
    }

    /// Symbol counts of the `i`-th irrelevant range (counts mode only), as
    /// `(bucket, count)` pairs.
    pub fn occurrences(&self, i: usize) -> Option<Vec<(u8, u32)>> {
        let t = self.occ_table.as_ref()?;
        let sigma = t.buckets.len();
        let row = &self.occ[i * sigma..(i + 1) * sigma];
        Some(t.buckets.iter().copied().zip(row.iter().copied()).collect())
    }

    pub fn instrument_report(&self) -> Option<&InstrumentReport> {
        self.instrument.as_ref().map(|i| &i.report)
    }

    /// Is row `i` inside an irrelevant range?
    pub fn is_irrelevant(&self, i: usize) -> bool {
        let idx = self.gaps.partition_point(|g| (g.end as usize) <= i);
        idx < self.gaps.len() && (self.gaps[idx].start as usize) <= i
    }

    /// Runs the next phase and returns the number of positions scanned.
    /// A no-op once no active block remains.
    pub fn step(&mut self) -> usize {
        if self.is_done() {
            return 0;
        }
        let h = self.stats.phases as u32 + 1;
        let n = self.rows();
        let sigma = self.occ_table.as_ref().map_or(0, |t| t.buckets.len());
        let s0 = self.bwt0.symbols();
        let s1 = self.bwt1.symbols();

        let [buf0, buf1] = &mut self.zbuf;
        let (zr, zw) = if self.cur == 0 {
            (&*buf0, buf1)
        } else {
            (&*buf1, buf0)
        };

        let mut f = FTable::new(&self.counts);
        let mut bids = BidTable::default();
        let mut last0 = [0usize; 256];
        let mut last1 = [0usize; 256];
        let (mut k0, mut k1) = (0usize, 0usize);

        let mut new_gaps: Vec<IrrelevantRange> = Vec::with_capacity(self.gaps.len() + 16);
        let mut new_occ: Vec<u32> = Vec::new();
        let mut dest_first = [usize::MAX; 256];
        let mut dest_last = [0usize; 256];
        let mut touched: Vec<u8> = Vec::new();

        let mut gi = 0;
        let mut pos = 0;
        let mut work = 0;
        while pos < n {
            if gi < self.gaps.len() && self.gaps[gi].start as usize == pos {
                let g = self.gaps[gi];
                k0 += g.r0 as usize;
                k1 += g.r1 as usize;
                let occ = if let Some(t) = &self.occ_table {
                    let row = &self.occ[gi * sigma..(gi + 1) * sigma];
                    for (d, &c) in t.buckets.iter().enumerate() {
                        f.add(c, row[d] as usize);
                    }
                    self.stats.occ_updates += sigma;
                    Some(row)
                } else {
                    None
                };
                self.stats.skips += 1;
                push_range(&mut new_gaps, &mut new_occ, g, occ);
                pos = g.end as usize;
                gi += 1;
                continue;
            }

            // Active block: from `pos` to the next boundary of the previous phase.
            let start = pos;
            let (start0, start1) = (k0, k1);
            let bid = start;
            let mut seen = [false; 2];
            loop {
                let bit = zr.get(pos);
                let c = if bit {
                    merge_symbol(s1[k1], 1)
                } else {
                    merge_symbol(s0[k0], 0)
                };
                let first = bids.first_in_block(c, bid);
                if first {
                    if let Some((wt0, wt1)) = &self.trees {
                        let ci = c as usize;
                        if last0[ci] != k0 || last1[ci] != k1 {
                            let missed =
                                missed_occurrences(c, wt0, wt1, last0[ci], k0, last1[ci], k1);
                            self.stats.rank_queries += 4;
                            self.stats.syncs += 1;
                            f.add(c, missed);
                        }
                    }
                }
                if bit {
                    k1 += 1;
                } else {
                    k0 += 1;
                }
                let j = f.next(c);
                last0[c as usize] = k0;
                last1[c as usize] = k1;
                zw.set(j, bit);
                if first {
                    self.b.mark(j, h);
                }
                if self.instrument.is_some() {
                    let ci = c as usize;
                    if dest_first[ci] == usize::MAX {
                        dest_first[ci] = j;
                        touched.push(c);
                    }
                    dest_last[ci] = j;
                }
                seen[bit as usize] = true;
                pos += 1;
                if pos == n || self.b.starts_block(pos, h) {
                    break;
                }
            }
            work += pos - start;

            let monochrome = !(seen[0] && seen[1]);
            if monochrome {
                let color = seen[1];
                zw.fill(start, pos, color);
                let len = (pos - start) as u32;
                let range = IrrelevantRange {
                    start: start as u32,
                    end: pos as u32,
                    r0: if color { 0 } else { len },
                    r1: if color { len } else { 0 },
                };
                let occ = self.occ_table.as_ref().map(|t| {
                    let mut row = vec![0u32; sigma];
                    let (side, from, to) = if color {
                        (s1, start1, k1)
                    } else {
                        (s0, start0, k0)
                    };
                    for &raw in &side[from..to] {
                        row[t.dense[merge_symbol(raw, color as usize) as usize]] += 1;
                    }
                    row
                });
                push_range(&mut new_gaps, &mut new_occ, range, occ.as_deref());
                if let Some(ins) = &mut self.instrument {
                    ins.shadow.fill(start, pos, color);
                    ins.marked.fill(start, pos, true);
                    for &c in &touched {
                        ins.runs
                            .push((dest_first[c as usize], dest_last[c as usize]));
                    }
                }
            }
            for c in touched.drain(..) {
                dest_first[c as usize] = usize::MAX;
            }
        }

        self.gaps = new_gaps;
        self.occ = new_occ;
        self.cur ^= 1;
        self.stats.phases += 1;
        self.stats.active_work.push(work);
        self.check_instrumented();
        work
    }

    fn check_instrumented(&mut self) {
        let Some(ins) = &mut self.instrument else {
            return;
        };
        let n = self.zbuf[0].len();
        for i in 0..n {
            if ins.marked.get(i) {
                let want = ins.shadow.get(i);
                if self.zbuf[0].get(i) != want || self.zbuf[1].get(i) != want {
                    ins.report.stability_violations += 1;
                }
            }
        }
        for (first, last) in ins.runs.drain(..) {
            ins.report.runs_checked += 1;
            let opens = self.b.get(first) != 0;
            let closes = self.b.get(last + 1) != 0;
            let inner_clear = (first + 1..=last).all(|i| self.b.get(i) == 0);
            if !(opens && closes && inner_clear) {
                ins.report.destination_violations += 1;
            }
        }
    }

    pub fn run(&mut self) -> Result<()> {
        let limit = self.rows() + 2;
        while !self.is_done() {
            if self.stats.phases >= limit {
                return Err(Error::NonConvergence {
                    phases: self.stats.phases,
                });
            }
            self.step();
        }
        Ok(())
    }

    /// Assembles the merged BWT and LCP once every block is irrelevant.
    ///
    /// Where a boundary was recorded, `lcp = B - 1`. Elsewhere both rows
    /// belong to the same monochrome block, hence to the same input, and are
    /// adjacent in that input: the value is copied from its LCP array.
    pub fn finalize(self, lcp0: &LcpArray, lcp1: &LcpArray) -> Result<MergeOutput> {
        if !self.is_done() {
            return Err(Error::NotConverged);
        }
        for (bwt, lcp) in [(self.bwt0, lcp0), (self.bwt1, lcp1)] {
            if lcp.rows() != bwt.len() {
                return Err(Error::LengthMismatch {
                    expected: bwt.len() + 1,
                    found: lcp.values().len(),
                });
            }
        }
        let z = self.zbuf[self.cur].clone();
        let n = z.len();
        let lcps = [lcp0.values(), lcp1.values()];
        let mut values = Vec::with_capacity(n + 1);
        values.push(-1);
        let mut k = [0usize; 2];
        let mut prev_side = usize::MAX;
        for r in 0..n {
            let side = z.get(r) as usize;
            if r > 0 {
                let v = self.b.get(r);
                if v != 0 {
                    values.push(v as i64 - 1);
                } else {
                    if side != prev_side {
                        return Err(Error::MalformedBwt(format!(
                            "row {r} has no boundary but changes input"
                        )));
                    }
                    values.push(lcps[side][k[side]]);
                }
            }
            k[side] += 1;
            prev_side = side;
        }
        values.push(-1);
        let bwt = apply_merge(&z, self.bwt0, self.bwt1)?;
        Ok(MergeOutput {
            bwt,
            lcp: Some(LcpArray::from_values(values)?),
            z,
            stats: self.stats,
        })
    }
}

/// Occurrences of bucket `c` in `bwt0[from0..to0]` and `bwt1[from1..to1]`.
fn missed_occurrences(
    c: u8,
    wt0: &WaveletTree,
    wt1: &WaveletTree,
    from0: usize,
    to0: usize,
    from1: usize,
    to1: usize,
) -> usize {
    let count =
        |wt: &WaveletTree, sym: u8, from: usize, to: usize| wt.rank(sym, to) - wt.rank(sym, from);
    match c {
        // Sentinel buckets: any sentinel code, from one side only.
        0 => count(wt0, 0, from0, to0) + count(wt0, 1, from0, to0),
        1 => count(wt1, 0, from1, to1) + count(wt1, 1, from1, to1),
        _ => count(wt0, c, from0, to0) + count(wt1, c, from1, to1),
    }
}

fn push_range(
    gaps: &mut Vec<IrrelevantRange>,
    occ: &mut Vec<u32>,
    range: IrrelevantRange,
    range_occ: Option<&[u32]>,
) {
    if let Some(last) = gaps.last_mut() {
        if last.end == range.start {
            last.end = range.end;
            last.r0 += range.r0;
            last.r1 += range.r1;
            if let Some(row) = range_occ {
                let base = occ.len() - row.len();
                for (a, &b) in occ[base..].iter_mut().zip(row) {
                    *a += b;
                }
            }
            return;
        }
    }
    gaps.push(range);
    if let Some(row) = range_occ {
        occ.extend_from_slice(row);
    }
}

/// Merges two BWT+LCP pairs with the Gap algorithm.
pub fn gap_merge(
    bwt0: &BwtString,
    lcp0: &LcpArray,
    bwt1: &BwtString,
    lcp1: &LcpArray,
    skip_mode: SkipMode,
) -> Result<MergeOutput> {
    let mut m = GapMerger::new(
        bwt0,
        bwt1,
        GapConfig {
            skip_mode,
            instrument: false,
        },
    )?;
    m.run()?;
    m.finalize(lcp0, lcp1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hm_lcp::HmLcpMerger;
    use crate::text::{bwt_and_lcp, parse_symbols, Text};

    fn inputs(a: &[u8], b: &[u8]) -> (BwtString, LcpArray, BwtString, LcpArray) {
        let (b0, l0) = bwt_and_lcp(&Text::from_raw(a, 0).unwrap());
        let (b1, l1) = bwt_and_lcp(&Text::from_raw(b, 1).unwrap());
        (b0, l0, b1, l1)
    }

    fn config(skip_mode: SkipMode) -> GapConfig {
        GapConfig {
            skip_mode,
            instrument: true,
        }
    }

    #[test]
    fn example_merge_both_modes() {
        let (b0, l0, b1, l1) = inputs(b"abcab", b"aabcabc");
        for mode in [SkipMode::Counts, SkipMode::Wavelet] {
            let out = gap_merge(&b0, &l0, &b1, &l1, mode).unwrap();
            assert_eq!(out.z.to_string(), "01101010101101");
            assert_eq!(out.bwt.symbols(), &parse_symbols("bc#1cc#0aaaaabbb")[..]);
            assert_eq!(
                out.lcp.unwrap().values(),
                &[-1, 0, 0, 1, 2, 3, 5, 0, 1, 2, 4, 0, 1, 3, -1]
            );
        }
    }

    #[test]
    fn sentinel_block_becomes_irrelevant() {
        let (b0, _, b1, _) = inputs(b"abcab", b"aabcabc");
        let mut m = GapMerger::new(&b0, &b1, config(SkipMode::Counts)).unwrap();
        m.step();
        assert!(m.irrelevant().is_empty());
        // Rows 0 and 1 are the singleton sentinel blocks of Z^(1).
        assert_ne!(m.blocks().get(1), 0);
        assert_ne!(m.blocks().get(2), 0);
        m.step();
        let first = m.irrelevant()[0];
        assert_eq!((first.start, first.r0, first.r1), (0, 1, 1));
        assert!(first.end >= 2);
        let skips_before = m.stats().skips;
        m.step();
        assert!(m.stats().skips > skips_before);
    }

    #[test]
    fn merged_record_sums_counts() {
        let mut gaps = Vec::new();
        let mut occ = Vec::new();
        let a = IrrelevantRange {
            start: 0,
            end: 1,
            r0: 1,
            r1: 0,
        };
        let b = IrrelevantRange {
            start: 1,
            end: 2,
            r0: 0,
            r1: 1,
        };
        push_range(&mut gaps, &mut occ, a, Some(&[1, 0]));
        push_range(&mut gaps, &mut occ, b, Some(&[0, 1]));
        assert_eq!(
            gaps,
            vec![IrrelevantRange {
                start: 0,
                end: 2,
                r0: 1,
                r1: 1
            }]
        );
        assert_eq!(gaps[0].r0 + gaps[0].r1, 2);
        assert_eq!(occ, vec![1, 1]);
    }

    #[test]
    fn lockstep_with_hm_lcp_on_example() {
        let (b0, _, b1, _) = inputs(b"abcab", b"aabcabc");
        let mut gap = GapMerger::new(&b0, &b1, config(SkipMode::Wavelet)).unwrap();
        let mut hm = HmLcpMerger::new(&b0, &b1).unwrap();
        while !gap.is_done() {
            gap.step();
            hm.step();
            assert_eq!(gap.z(), hm.z());
            for i in 0..=14 {
                if !gap.is_irrelevant(i.min(13)) {
                    assert_eq!(
                        gap.blocks().get(i),
                        hm.blocks().get(i),
                        "phase {} row {i}",
                        gap.phase()
                    );
                }
            }
        }
        let report = gap.instrument_report().unwrap();
        assert_eq!(report.stability_violations, 0);
        assert_eq!(report.destination_violations, 0);
    }

    #[test]
    fn sentinel_only_pair_converges_quickly() {
        let (b0, l0, b1, l1) = inputs(b"", b"");
        let out = gap_merge(&b0, &l0, &b1, &l1, SkipMode::Wavelet).unwrap();
        assert!(out.stats.phases <= 2);
        assert_eq!(out.lcp.unwrap().values(), &[-1, 0, -1]);
    }

    #[test]
    fn step_after_convergence_is_noop() {
        let (b0, _, b1, _) = inputs(b"ab", b"ba");
        let mut m = GapMerger::new(&b0, &b1, config(SkipMode::Wavelet)).unwrap();
        m.run().unwrap();
        let phases = m.phase();
        assert_eq!(m.step(), 0);
        assert_eq!(m.phase(), phases);
    }

    #[test]
    fn adversarial_runs_match_oracle() {
        let t0 = Text::from_raw(b"aaaa", 0).unwrap();
        let t1 = Text::from_raw(b"aaa", 1).unwrap();
        let (b0, l0) = bwt_and_lcp(&t0);
        let (b1, l1) = bwt_and_lcp(&t1);
        let want = crate::oracle::oracle_merge(&t0, &t1);
        for mode in [SkipMode::Counts, SkipMode::Wavelet] {
            let out = gap_merge(&b0, &l0, &b1, &l1, mode).unwrap();
            assert_eq!(out.bwt, want.bwt);
            assert_eq!(out.lcp.unwrap(), want.lcp);
            assert_eq!(out.z, want.z);
        }
    }

    #[test]
    fn finalize_requires_convergence() {
        let (b0, l0, b1, l1) = inputs(b"abcab", b"aabcabc");
        let mut m = GapMerger::new(&b0, &b1, config(SkipMode::Wavelet)).unwrap();
        m.step();
        assert!(matches!(m.finalize(&l0, &l1), Err(Error::NotConverged)));
    }

    #[test]
    fn wavelet_mode_never_sweeps_counts() {
        let (b0, l0, b1, l1) = inputs(b"abracadabraabracadabra", b"cadabracadabra");
        let out = gap_merge(&b0, &l0, &b1, &l1, SkipMode::Wavelet).unwrap();
        assert_eq!(out.stats.occ_updates, 0);
        assert!(out.stats.skips > 0);
        let out = gap_merge(&b0, &l0, &b1, &l1, SkipMode::Counts).unwrap();
        assert_eq!(out.stats.rank_queries, 0);
        // sigma buckets: #0, #1, a, b, c, d, r
        assert_eq!(out.stats.occ_updates, 7 * out.stats.skips);
    }

    #[test]
    fn skip_mode_parses() {
        assert_eq!("counts".parse::<SkipMode>(), Ok(SkipMode::Counts));
        assert_eq!("wavelet".parse::<SkipMode>(), Ok(SkipMode::Wavelet));
        assert!("x".parse::<SkipMode>().is_err());
    }
}
