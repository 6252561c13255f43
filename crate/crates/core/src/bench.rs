//! Synthetic benchmark: merge random string pairs and tabulate phases and
//! work per algorithm.
//!
//! Strings come from a SplitMix64 stream seeded with `seed`. Each symbol is
//! `next_u64() % sigma` mapped to `'a'..` (or to bytes `2..` when sigma
//! exceeds 26); string 0 of pair `p` is drawn before string 1, and pairs are
//! drawn in order, so a table is fully determined by its parameters.

use std::fmt::Write as _;
use std::time::Instant;

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::collection::{merge_parts, Algorithm, Part};
use crate::error::{Error, Result};
use crate::gap::SkipMode;
use crate::text::{bwt_and_lcp, Text};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub len: usize,
    pub sigma: usize,
    pub pairs: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub skip_mode: SkipMode,
    /// Include wall-clock times; off for reproducible output.
    pub timings: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            len: 1000,
            sigma: 4,
            pairs: 10,
            seed: 1,
            algorithms: vec![Algorithm::Hm, Algorithm::HmLcp, Algorithm::Gap],
            skip_mode: SkipMode::default(),
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgoResult {
    pub algorithm: Algorithm,
    pub phases: usize,
    pub work: usize,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub pair: usize,
    pub n: usize,
    pub maxlcp: i64,
    pub avelcp: f64,
    pub results: Vec<AlgoResult>,
}

impl BenchRow {
    pub fn work(&self, algorithm: Algorithm) -> Option<usize> {
        self.results
            .iter()
            .find(|r| r.algorithm == algorithm)
            .map(|r| r.work)
    }
}

/// Random string of `len` symbols over an alphabet of size `sigma`.
pub fn random_string(rng: &mut SplitMix64, len: usize, sigma: usize) -> Vec<u8> {
    let base = if sigma <= 26 { b'a' } else { 2 };
    (0..len)
        .map(|_| base + (rng.next_u64() % sigma as u64) as u8)
        .collect()
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if !(1..=254).contains(&cfg.sigma) {
        return Err(Error::InvalidInput(format!(
            "sigma must be in 1..=254, got {}",
            cfg.sigma
        )));
    }
    let mut rng = SplitMix64::seed_from_u64(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.pairs);
    for pair in 0..cfg.pairs {
        let a = random_string(&mut rng, cfg.len, cfg.sigma);
        let b = random_string(&mut rng, cfg.len, cfg.sigma);
        let (b0, l0) = bwt_and_lcp(&Text::from_raw(&a, 0)?);
        let (b1, l1) = bwt_and_lcp(&Text::from_raw(&b, 1)?);
        let p0 = Part {
            bwt: b0,
            lcp: Some(l0),
        };
        let p1 = Part {
            bwt: b1,
            lcp: Some(l1),
        };

        let mut results = Vec::new();
        let mut merged_lcp = None;
        for &algorithm in &cfg.algorithms {
            let start = Instant::now();
            let (part, stats) = merge_parts(&p0, &p1, algorithm, cfg.skip_mode)?;
            let seconds = start.elapsed().as_secs_f64();
            if merged_lcp.is_none() {
                merged_lcp = part.lcp;
            }
            results.push(AlgoResult {
                algorithm,
                phases: stats.phases,
                work: stats.total_work(),
                seconds,
            });
        }
        let lcp = match merged_lcp {
            Some(l) => l,
            None => merge_parts(&p0, &p1, Algorithm::Gap, cfg.skip_mode)?
                .0
                .lcp
                .expect("gap computes the LCP array"),
        };
        let n = lcp.rows();
        rows.push(BenchRow {
            pair,
            n,
            maxlcp: lcp.max(),
            avelcp: lcp.sum() as f64 / n as f64,
            results,
        });
    }
    Ok(rows)
}

/// Renders rows as a whitespace-aligned table.
pub fn format_table(cfg: &BenchConfig, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{:>5} {:>9} {:>7} {:>8}",
        "pair", "n", "maxlcp", "avelcp"
    );
    for a in &cfg.algorithms {
        let _ = write!(
            out,
            " {:>14} {:>14}",
            format!("{a}.phases"),
            format!("{a}.work")
        );
        if cfg.timings {
            let _ = write!(out, " {:>10}", format!("{a}.ms"));
        }
    }
    out.push('\n');
    for row in rows {
        let _ = write!(
            out,
            "{:>5} {:>9} {:>7} {:>8.3}",
            row.pair, row.n, row.maxlcp, row.avelcp
        );
        for r in &row.results {
            let _ = write!(out, " {:>14} {:>14}", r.phases, r.work);
            if cfg.timings {
                let _ = write!(out, " {:>10.3}", r.seconds * 1e3);
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_table() {
        let cfg = BenchConfig {
            len: 200,
            pairs: 3,
            seed: 42,
            ..BenchConfig::default()
        };
        let a = format_table(&cfg, &run_bench(&cfg).unwrap());
        let b = format_table(&cfg, &run_bench(&cfg).unwrap());
        assert_eq!(a, b);
        let other = BenchConfig {
            seed: 43,
            ..cfg.clone()
        };
        assert_ne!(a, format_table(&other, &run_bench(&other).unwrap()));
    }

    #[test]
    fn zero_pairs_gives_header_only() {
        let cfg = BenchConfig {
            pairs: 0,
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert!(rows.is_empty());
        assert_eq!(format_table(&cfg, &rows).lines().count(), 1);
    }

    #[test]
    fn gap_does_less_work_than_hm_lcp() {
        let cfg = BenchConfig {
            len: 1000,
            sigma: 4,
            pairs: 5,
            seed: 7,
            ..BenchConfig::default()
        };
        for row in run_bench(&cfg).unwrap() {
            assert_eq!(row.n, 2002);
            let hl = row
                .results
                .iter()
                .find(|r| r.algorithm == Algorithm::HmLcp)
                .unwrap();
            assert_eq!(hl.phases as i64, row.maxlcp + 1);
            assert!(row.work(Algorithm::Gap).unwrap() < hl.work, "{row:?}");
        }
    }

    #[test]
    fn stats_without_lcp_algorithms() {
        let cfg = BenchConfig {
            len: 50,
            pairs: 1,
            algorithms: vec![Algorithm::Hm],
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert!(rows[0].maxlcp > 0);
    }

    #[test]
    fn bad_sigma() {
        let cfg = BenchConfig {
            sigma: 0,
            ..BenchConfig::default()
        };
        assert!(run_bench(&cfg).is_err());
    }
}
