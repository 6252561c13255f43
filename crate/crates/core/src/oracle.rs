//! Brute-force ground truth for merges.
//!
//! Everything here sorts suffixes of the concatenated strings by direct
//! comparison. It is quadratic in the worst case and only meant for tests
//! and verification of small to medium inputs.

use crate::hm::MergeBitVector;
use crate::text::{BwtString, LcpArray, Text};

/// Result of merging a pair by brute force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleMerge {
    pub bwt: BwtString,
    pub lcp: LcpArray,
    pub z: MergeBitVector,
}

/// Multi-string BWT of a collection: sentinels in external form (`0x00`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCollection {
    pub bwt: Vec<u8>,
    pub lcp: LcpArray,
    /// Index of the string owning each row.
    pub owner: Vec<usize>,
}

/// Sort key of every position of the concatenation: the sentinel of string `i`
/// maps to `i`, payload byte `b` to `k + b`.
fn concatenation_keys(strings: &[&[u8]]) -> (Vec<u32>, Vec<(usize, usize)>) {
    let k = strings.len() as u32;
    let total: usize = strings.iter().map(|s| s.len() + 1).sum();
    let mut keys = Vec::with_capacity(total);
    let mut origin = Vec::with_capacity(total);
    for (i, s) in strings.iter().enumerate() {
        for (o, &b) in s.iter().enumerate() {
            keys.push(k + b as u32);
            origin.push((i, o));
        }
        keys.push(i as u32);
        origin.push((i, s.len()));
    }
    (keys, origin)
}

fn brute_force_sa(keys: &[u32]) -> Vec<usize> {
    let mut sa: Vec<usize> = (0..keys.len()).collect();
    sa.sort_by(|&a, &b| keys[a..].cmp(&keys[b..]));
    sa
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn collection(strings: &[&[u8]]) -> (Vec<usize>, Vec<(usize, usize)>, LcpArray) {
    let (keys, origin) = concatenation_keys(strings);
    let sa = brute_force_sa(&keys);
    let interior: Vec<i64> = sa
        .windows(2)
        .map(|w| common_prefix(&keys[w[0]..], &keys[w[1]..]) as i64)
        .collect();
    (sa, origin, LcpArray::from_interior(&interior))
}

/// Multi-string BWT, LCP and source bit vector of `t0` and `t1`.
///
/// Row `r` holds the symbol preceding the `r`-th smallest suffix of `t0 t1`,
/// except that the first symbol of either string is preceded by that
/// string's own sentinel.
pub fn oracle_merge(t0: &Text, t1: &Text) -> OracleMerge {
    let strings = [t0.payload(), t1.payload()];
    let (sa, origin, lcp) = collection(&strings);
    let texts = [t0, t1];
    let mut bwt = Vec::with_capacity(sa.len());
    let mut z = MergeBitVector::zeros(sa.len());
    for (row, &p) in sa.iter().enumerate() {
        let (s, o) = origin[p];
        let sym = texts[s].symbols();
        bwt.push(if o == 0 {
            sym[sym.len() - 1]
        } else {
            sym[o - 1]
        });
        if s == 1 {
            z.set(row, true);
        }
    }
    OracleMerge {
        bwt: BwtString::new(bwt),
        lcp,
        z,
    }
}

/// Multi-string BWT of any number of strings with distinct sentinels ordered
/// by position in `strings`.
pub fn oracle_collection(strings: &[&[u8]]) -> OracleCollection {
    let (sa, origin, lcp) = collection(strings);
    let mut bwt = Vec::with_capacity(sa.len());
    let mut owner = Vec::with_capacity(sa.len());
    for &p in &sa {
        let (s, o) = origin[p];
        bwt.push(if o == 0 { 0 } else { strings[s][o - 1] });
        owner.push(s);
    }
    OracleCollection { bwt, lcp, owner }
}

/// Rows of the single-string suffix array of `t`, by brute force.
pub fn oracle_suffix_array(t: &Text) -> Vec<usize> {
    let keys: Vec<u32> = t.symbols().iter().map(|&c| c as u32).collect();
    brute_force_sa(&keys)
}
