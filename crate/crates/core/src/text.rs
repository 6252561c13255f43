//! Strings, suffix arrays, single-string BWT and LCP construction.
//!
//! Symbols are bytes. Codes `0` and `1` are reserved for the end-of-string
//! sentinels of the first and second string of a pair; payload bytes are
//! stored unchanged and must therefore be `>= 2`. Under plain integer
//! comparison this gives `#0 < #1 < every payload symbol`.
//!
//! All arrays are 0-based. Row `r` of a suffix array, BWT or LCP array
//! corresponds to row `r + 1` in the usual 1-based notation.

use std::fmt;

use crate::error::{Error, Result};

/// Sentinel code of the first string of a pair.
pub const SENTINEL_0: u8 = 0;
/// Sentinel code of the second string of a pair.
pub const SENTINEL_1: u8 = 1;
/// Smallest symbol allowed in a payload.
pub const MIN_PAYLOAD: u8 = 2;

#[inline]
pub fn is_sentinel(c: u8) -> bool {
    c < MIN_PAYLOAD
}

/// A string terminated by a single sentinel.
#[derive(Clone, PartialEq, Eq)]
pub struct Text {
    symbols: Vec<u8>,
}

impl Text {
    /// Wraps raw bytes, appending the sentinel for `sentinel_rank` (0 or 1).
    ///
    /// Bytes are kept as-is; `0x00` and `0x01` collide with sentinel codes
    /// and are rejected.
    pub fn from_raw(raw: &[u8], sentinel_rank: u8) -> Result<Text> {
        if sentinel_rank > SENTINEL_1 {
            return Err(Error::InvalidInput(format!(
                "sentinel rank must be 0 or 1, got {sentinel_rank}"
            )));
        }
        if let Some(offset) = raw.iter().position(|&b| is_sentinel(b)) {
            return Err(Error::ReservedByte {
                offset,
                byte: raw[offset],
            });
        }
        let mut symbols = Vec::with_capacity(raw.len() + 1);
        symbols.extend_from_slice(raw);
        symbols.push(sentinel_rank);
        Ok(Text { symbols })
    }

    /// Length including the sentinel.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// The original bytes, without the sentinel.
    pub fn payload(&self) -> &[u8] {
        &self.symbols[..self.symbols.len() - 1]
    }

    pub fn sentinel_rank(&self) -> u8 {
        self.symbols[self.symbols.len() - 1]
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Text({})", display_symbols(&self.symbols))
    }
}

/// Same as [`Text::from_raw`].
pub fn remap_alphabet(raw: &[u8], sentinel_rank: u8) -> Result<Text> {
    Text::from_raw(raw, sentinel_rank)
}

/// Renders symbols with sentinels spelled `#0` / `#1`.
pub fn display_symbols(symbols: &[u8]) -> String {
    let mut out = String::with_capacity(symbols.len());
    for &c in symbols {
        if is_sentinel(c) {
            out.push('#');
            out.push((b'0' + c) as char);
        } else if c.is_ascii_graphic() {
            out.push(c as char);
        } else {
            out.push_str(&format!("\\x{c:02x}"));
        }
    }
    out
}

/// Parses the `#0`/`#1` notation produced by [`display_symbols`].
pub fn parse_symbols(s: &str) -> Vec<u8> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' => i += 1,
            b'#' if i + 1 < bytes.len() && (bytes[i + 1] == b'0' || bytes[i + 1] == b'1') => {
                out.push(bytes[i + 1] - b'0');
                i += 2;
            }
            b => {
                out.push(b);
                i += 1;
            }
        }
    }
    out
}

/// Lexicographic order of the suffixes of a text, as 0-based start positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixArray {
    sa: Vec<u32>,
}

impl SuffixArray {
    pub fn as_slice(&self) -> &[u32] {
        &self.sa
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    /// Inverse permutation: `rank[p]` is the row of the suffix starting at `p`.
    pub fn inverse(&self) -> Vec<u32> {
        let mut rank = vec![0u32; self.sa.len()];
        for (row, &p) in self.sa.iter().enumerate() {
            rank[p as usize] = row as u32;
        }
        rank
    }
}

/// Suffix array by prefix doubling.
///
/// Works for any text whose last symbol is unique and smallest, which every
/// [`Text`] guarantees.
pub fn build_suffix_array(t: &Text) -> SuffixArray {
    SuffixArray {
        sa: suffix_array_of(t.symbols()),
    }
}

/// Prefix doubling over an arbitrary byte sequence terminated by a unique
/// smallest symbol.
pub(crate) fn suffix_array_of(s: &[u8]) -> Vec<u32> {
    let n = s.len();
    assert!(n < u32::MAX as usize, "text too long");
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = s.iter().map(|&c| c as u32).collect();
    let mut next = vec![0u32; n];
    let mut step = 1usize;
    loop {
        let key = |p: u32| -> u64 {
            let p = p as usize;
            let second = if p + step < n {
                rank[p + step] as u64 + 1
            } else {
                0
            };
            ((rank[p] as u64) << 32) | second
        };
        sa.sort_unstable_by_key(|&p| key(p));
        next[sa[0] as usize] = 0;
        for i in 1..n {
            let bump = (key(sa[i - 1]) != key(sa[i])) as u32;
            next[sa[i] as usize] = next[sa[i - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut next);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        step *= 2;
    }
    sa
}

/// Symbol sequence of a (multi-string) BWT.
#[derive(Clone, PartialEq, Eq)]
pub struct BwtString {
    symbols: Vec<u8>,
    string_count: usize,
}

impl BwtString {
    /// Wraps a symbol sequence, counting its sentinels.
    pub fn new(symbols: Vec<u8>) -> BwtString {
        let string_count = symbols.iter().filter(|&&c| is_sentinel(c)).count();
        BwtString {
            symbols,
            string_count,
        }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn string_count(&self) -> usize {
        self.string_count
    }

    /// External byte form: every sentinel becomes `0x00`.
    pub fn to_external(&self) -> Vec<u8> {
        self.symbols
            .iter()
            .map(|&c| if is_sentinel(c) { 0 } else { c })
            .collect()
    }
}

impl fmt::Debug for BwtString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BwtString({})", display_symbols(&self.symbols))
    }
}

impl fmt::Display for BwtString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_symbols(&self.symbols))
    }
}

pub fn bwt_from_sa(t: &Text, sa: &SuffixArray) -> Result<BwtString> {
    let n = t.len();
    if sa.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: sa.len(),
        });
    }
    let s = t.symbols();
    let symbols = sa
        .as_slice()
        .iter()
        .map(|&p| if p == 0 { s[n - 1] } else { s[p as usize - 1] })
        .collect();
    Ok(BwtString {
        symbols,
        string_count: 1,
    })
}

/// LCP array with `-1` bookends: `values[0] = values[n] = -1`, and for
/// `1 <= r < n`, `values[r]` is the LCP of the suffixes in rows `r - 1` and `r`.
#[derive(Clone, PartialEq, Eq)]
pub struct LcpArray {
    values: Vec<i64>,
}

impl LcpArray {
    /// Wraps interior values `lcp(row r-1, row r)` for `r = 1..n`, adding bookends.
    pub fn from_interior(interior: &[i64]) -> LcpArray {
        let mut values = Vec::with_capacity(interior.len() + 2);
        values.push(-1);
        values.extend_from_slice(interior);
        values.push(-1);
        LcpArray { values }
    }

    /// Takes a full array including both bookends.
    pub fn from_values(values: Vec<i64>) -> Result<LcpArray> {
        if values.len() < 2 || values[0] != -1 || values[values.len() - 1] != -1 {
            return Err(Error::InvalidInput(
                "LCP array needs -1 bookends at both ends".into(),
            ));
        }
        if values[1..values.len() - 1].iter().any(|&v| v < 0) {
            return Err(Error::InvalidInput("negative interior LCP value".into()));
        }
        Ok(LcpArray { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Number of rows `n` (the array itself holds `n + 1` entries).
    pub fn rows(&self) -> usize {
        self.values.len() - 1
    }

    pub fn interior(&self) -> &[i64] {
        &self.values[1..self.values.len() - 1]
    }

    pub fn max(&self) -> i64 {
        self.interior().iter().copied().max().unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.interior().iter().map(|&v| v as u64).sum()
    }
}

impl fmt::Debug for LcpArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LcpArray({:?})", self.values)
    }
}

/// Kasai et al. linear-time LCP construction.
pub fn lcp_from_sa(t: &Text, sa: &SuffixArray) -> LcpArray {
    let s = t.symbols();
    let n = s.len();
    let rank = sa.inverse();
    let sa = sa.as_slice();
    let mut interior = vec![0i64; n - 1];
    let mut h = 0usize;
    for p in 0..n {
        let r = rank[p] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let q = sa[r - 1] as usize;
        while p + h < n && q + h < n && s[p + h] == s[q + h] {
            h += 1;
        }
        interior[r - 1] = h as i64;
        h = h.saturating_sub(1);
    }
    LcpArray::from_interior(&interior)
}

/// BWT and LCP array of a single text.
pub fn bwt_and_lcp(t: &Text) -> (BwtString, LcpArray) {
    let sa = build_suffix_array(t);
    let bwt = bwt_from_sa(t, &sa).expect("suffix array matches text");
    let lcp = lcp_from_sa(t, &sa);
    (bwt, lcp)
}

/// Merged BWT and LCP array of two texts, computed directly from the suffix
/// array of their concatenation. The sentinels are unique, so no comparison
/// crosses a string boundary.
pub fn pair_bwt_and_lcp(t0: &Text, t1: &Text) -> (BwtString, LcpArray) {
    let n0 = t0.len();
    let cat = Text {
        symbols: [t0.symbols(), t1.symbols()].concat(),
    };
    let n = cat.len();
    let sa = SuffixArray {
        sa: suffix_array_of(&cat.symbols),
    };
    let s = cat.symbols();
    let symbols = sa
        .as_slice()
        .iter()
        .map(|&p| match p as usize {
            0 => s[n0 - 1],
            p if p == n0 => s[n - 1],
            p => s[p - 1],
        })
        .collect();
    let lcp = lcp_from_sa(&cat, &sa);
    (BwtString::new(symbols), lcp)
}

/// Recovers the text from a single-string BWT via LF mapping.
pub fn invert_bwt(b: &BwtString) -> Result<Text> {
    let bwt = b.symbols();
    let n = bwt.len();
    let sentinels: Vec<usize> = (0..n).filter(|&i| is_sentinel(bwt[i])).collect();
    if sentinels.len() != 1 {
        return Err(Error::MalformedBwt(format!(
            "expected exactly one sentinel, found {}",
            sentinels.len()
        )));
    }
    let sentinel = bwt[sentinels[0]];

    let mut counts = [0usize; 256];
    for &c in bwt {
        counts[c as usize] += 1;
    }
    let mut first = [0usize; 256];
    let mut acc = 0;
    for c in 0..256 {
        first[c] = acc;
        acc += counts[c];
    }
    let mut seen = [0usize; 256];
    let lf: Vec<usize> = bwt
        .iter()
        .map(|&c| {
            let j = first[c as usize] + seen[c as usize];
            seen[c as usize] += 1;
            j
        })
        .collect();

    // Row 0 holds the suffix made of the sentinel alone; walking LF from it
    // yields the payload right to left.
    let mut out = vec![0u8; n];
    out[n - 1] = sentinel;
    let mut row = 0usize;
    for p in (0..n - 1).rev() {
        let c = bwt[row];
        if is_sentinel(c) {
            return Err(Error::MalformedBwt(
                "LF mapping does not form a single cycle".into(),
            ));
        }
        out[p] = c;
        row = lf[row];
    }
    if !is_sentinel(bwt[row]) || lf[row] != 0 {
        return Err(Error::MalformedBwt(
            "LF mapping does not form a single cycle".into(),
        ));
    }
    Ok(Text { symbols: out })
}
