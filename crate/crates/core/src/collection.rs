//! Merging whole collections in mergesort-style rounds.
//!
//! Live parts are paired left to right each round; with an odd count the
//! last part passes through untouched. The left part of each pair plays the
//! role of the first input, so earlier strings keep the smaller sentinels.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gap::{gap_merge, SkipMode};
use crate::hm::{hm_merge, MergeStats};
use crate::hm_lcp::hmlcp_merge;
use crate::text::{bwt_and_lcp, BwtString, LcpArray, Text};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Hm,
    HmLcp,
    #[default]
    Gap,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hm => "hm",
            Algorithm::HmLcp => "hm-lcp",
            Algorithm::Gap => "gap",
        }
    }

    pub fn computes_lcp(self) -> bool {
        self != Algorithm::Hm
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "hm" => Ok(Algorithm::Hm),
            "hm-lcp" => Ok(Algorithm::HmLcp),
            "gap" => Ok(Algorithm::Gap),
            _ => Err(format!(
                "unknown algorithm `{s}` (expected hm, hm-lcp or gap)"
            )),
        }
    }
}

/// A BWT with its LCP array when the algorithm produces one.
#[derive(Clone, Debug)]
pub struct Part {
    pub bwt: BwtString,
    pub lcp: Option<LcpArray>,
}

/// Merges two parts with the chosen algorithm.
pub fn merge_parts(
    a: &Part,
    b: &Part,
    algorithm: Algorithm,
    skip_mode: SkipMode,
) -> Result<(Part, MergeStats)> {
    let out = match algorithm {
        Algorithm::Hm => hm_merge(&a.bwt, &b.bwt)?,
        Algorithm::HmLcp => hmlcp_merge(&a.bwt, &b.bwt)?,
        Algorithm::Gap => {
            let (Some(la), Some(lb)) = (&a.lcp, &b.lcp) else {
                return Err(Error::InvalidInput(
                    "gap merge needs both LCP arrays".into(),
                ));
            };
            gap_merge(&a.bwt, la, &b.bwt, lb, skip_mode)?
        }
    };
    Ok((
        Part {
            bwt: out.bwt,
            lcp: out.lcp,
        },
        out.stats,
    ))
}

/// One round of the schedule: pairs of live indices, plus an optional
/// pass-through.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub pairs: Vec<(usize, usize)>,
    pub carried: Option<usize>,
}

/// Balanced pairwise schedule for `count` leaves. Indices refer to the live
/// parts at the start of each round.
pub fn schedule(count: usize) -> Vec<Round> {
    let mut rounds = Vec::new();
    let mut live = count;
    while live > 1 {
        rounds.push(Round {
            pairs: (0..live / 2).map(|i| (2 * i, 2 * i + 1)).collect(),
            carried: (live % 2 == 1).then_some(live - 1),
        });
        live = live.div_ceil(2);
    }
    rounds
}

#[derive(Clone, Debug, Default)]
pub struct CollectionJob {
    pub algorithm: Algorithm,
    pub skip_mode: SkipMode,
    /// Merge the pairs of a round on the rayon thread pool.
    pub parallel: bool,
}

#[derive(Clone, Debug)]
pub struct CollectionOutput {
    pub merged: Part,
    /// Stats of every pairwise merge, round by round.
    pub rounds: Vec<Vec<MergeStats>>,
}

impl CollectionJob {
    /// Builds the leaves from raw strings and merges them.
    pub fn run(&self, inputs: &[Vec<u8>]) -> Result<CollectionOutput> {
        if inputs.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a collection needs at least 2 strings, got {}",
                inputs.len()
            )));
        }
        let leaves = inputs
            .iter()
            .enumerate()
            .map(|(i, raw)| {
                let (bwt, lcp) = bwt_and_lcp(&Text::from_raw(raw, (i % 2) as u8)?);
                Ok(Part {
                    bwt,
                    lcp: self.algorithm.computes_lcp().then_some(lcp),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.merge(leaves)
    }

    /// Merges already built parts, in order.
    pub fn merge(&self, mut live: Vec<Part>) -> Result<CollectionOutput> {
        if live.is_empty() {
            return Err(Error::InvalidInput("nothing to merge".into()));
        }
        let mut rounds = Vec::new();
        while live.len() > 1 {
            let merge_chunk = |chunk: &[Part]| -> Result<(Part, Option<MergeStats>)> {
                match chunk {
                    [a, b] => {
                        let (p, s) = merge_parts(a, b, self.algorithm, self.skip_mode)?;
                        Ok((p, Some(s)))
                    }
                    [a] => Ok((a.clone(), None)),
                    _ => unreachable!("chunks of two"),
                }
            };
            let results: Vec<(Part, Option<MergeStats>)> = if self.parallel {
                live.par_chunks(2).map(merge_chunk).collect::<Result<_>>()?
            } else {
                live.chunks(2).map(merge_chunk).collect::<Result<_>>()?
            };
            let mut stats = Vec::new();
            live = results
                .into_iter()
                .map(|(p, s)| {
                    stats.extend(s);
                    p
                })
                .collect();
            rounds.push(stats);
        }
        Ok(CollectionOutput {
            merged: live.pop().expect("one part left"),
            rounds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_collection;

    #[test]
    fn schedule_shapes() {
        assert_eq!(
            schedule(2),
            vec![Round {
                pairs: vec![(0, 1)],
                carried: None
            }]
        );
        let three = schedule(3);
        assert_eq!(three.len(), 2);
        assert_eq!(
            three[0],
            Round {
                pairs: vec![(0, 1)],
                carried: Some(2)
            }
        );
        assert_eq!(
            three[1],
            Round {
                pairs: vec![(0, 1)],
                carried: None
            }
        );
        assert_eq!(schedule(8).len(), 3);
        assert_eq!(
            schedule(5)
                .iter()
                .map(|r| r.pairs.len())
                .collect::<Vec<_>>(),
            vec![2, 1, 1]
        );
        assert!(schedule(1).is_empty());
    }

    #[test]
    fn odd_collection_carries_last_part() {
        let inputs = vec![b"banana".to_vec(), b"bandana".to_vec(), b"cabana".to_vec()];
        let out = CollectionJob::default().run(&inputs).unwrap();
        assert_eq!(out.rounds.len(), 2);
        assert_eq!(out.rounds[0].len(), 1);
        assert_eq!(out.rounds[1].len(), 1);
        let refs: Vec<&[u8]> = inputs.iter().map(|v| v.as_slice()).collect();
        let want = oracle_collection(&refs);
        assert_eq!(out.merged.bwt.to_external(), want.bwt);
        assert_eq!(out.merged.lcp.unwrap(), want.lcp);
    }

    #[test]
    fn two_inputs_equal_pair_merge() {
        let inputs = vec![b"abcab".to_vec(), b"aabcabc".to_vec()];
        let out = CollectionJob::default().run(&inputs).unwrap();
        let t0 = Text::from_raw(b"abcab", 0).unwrap();
        let t1 = Text::from_raw(b"aabcabc", 1).unwrap();
        let want = crate::oracle::oracle_merge(&t0, &t1);
        assert_eq!(out.merged.bwt, want.bwt);
        assert_eq!(out.merged.lcp.unwrap(), want.lcp);
    }

    #[test]
    fn every_algorithm_agrees() {
        let inputs: Vec<Vec<u8>> = ["gattaca", "tacata", "", "gatt", "acacac"]
            .iter()
            .map(|s| s.as_bytes().to_vec())
            .collect();
        let refs: Vec<&[u8]> = inputs.iter().map(|v| v.as_slice()).collect();
        let want = oracle_collection(&refs);
        for algorithm in [Algorithm::Hm, Algorithm::HmLcp, Algorithm::Gap] {
            for parallel in [false, true] {
                let job = CollectionJob {
                    algorithm,
                    skip_mode: SkipMode::Counts,
                    parallel,
                };
                let out = job.run(&inputs).unwrap();
                assert_eq!(out.merged.bwt.to_external(), want.bwt, "{algorithm}");
                if algorithm.computes_lcp() {
                    assert_eq!(out.merged.lcp.as_ref().unwrap(), &want.lcp);
                } else {
                    assert!(out.merged.lcp.is_none());
                }
            }
        }
    }

    #[test]
    fn too_few_inputs() {
        assert!(CollectionJob::default().run(&[b"a".to_vec()]).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Hm, Algorithm::HmLcp, Algorithm::Gap] {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("fast".parse::<Algorithm>().is_err());
    }
}
