//! Merging of Burrows-Wheeler transforms and LCP arrays.
//!
//! Given the BWT (and LCP array) of two strings or string collections, the
//! merge algorithms compute the multi-string BWT and LCP array of their
//! union without access to the underlying texts:
//!
//! - [`hm::hm_merge`]: plain Holt-McMillan passes, BWT only.
//! - [`hm_lcp::hmlcp_merge`]: the same passes with block tracking, giving the LCP array.
//! - [`gap::gap_merge`]: block tracking that skips settled regions.
//!
//! [`oracle`] provides brute-force references; [`collection`] merges many
//! strings in mergesort-style rounds.

pub mod bench;
pub mod collection;
pub mod error;
pub mod format;
pub mod gap;
pub mod hm;
pub mod hm_lcp;
pub mod oracle;
pub mod text;
pub mod wavelet;

pub use error::{Error, Result};

pub use gap::{gap_merge, SkipMode};
pub use hm::{apply_merge, hm_merge, MergeBitVector, MergeOutput, MergeStats};
pub use hm_lcp::hmlcp_merge;
pub use oracle::{oracle_collection, oracle_merge};
pub use text::{BwtString, LcpArray, SuffixArray, Text};
