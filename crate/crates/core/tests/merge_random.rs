use gapmerge::gap::{GapConfig, GapMerger};
use gapmerge::hm_lcp::HmLcpMerger;
use gapmerge::text::{bwt_and_lcp, pair_bwt_and_lcp, Text};
use gapmerge::{gap_merge, hm_merge, hmlcp_merge, oracle_merge, SkipMode};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_text(rng: &mut StdRng, len: usize, sigma: u8) -> Vec<u8> {
    (0..len)
        .map(|_| b'a' + rng.random_range(0..sigma))
        .collect()
}

fn pair(a: &[u8], b: &[u8]) -> (Text, Text) {
    (Text::from_raw(a, 0).unwrap(), Text::from_raw(b, 1).unwrap())
}

fn check_all_algorithms(t0: &Text, t1: &Text) {
    let want = oracle_merge(t0, t1);
    let (rb, rl) = pair_bwt_and_lcp(t0, t1);
    assert_eq!(rb, want.bwt);
    assert_eq!(rl, want.lcp);
    let (b0, l0) = bwt_and_lcp(t0);
    let (b1, l1) = bwt_and_lcp(t1);

    let hm = hm_merge(&b0, &b1).unwrap();
    assert_eq!(hm.z, want.z, "hm z for {t0:?} {t1:?}");
    assert_eq!(hm.bwt, want.bwt);

    let hl = hmlcp_merge(&b0, &b1).unwrap();
    assert_eq!(hl.z, want.z, "hm-lcp z for {t0:?} {t1:?}");
    assert_eq!(hl.bwt, want.bwt);
    assert_eq!(hl.lcp.as_ref().unwrap(), &want.lcp);
    assert_eq!(hl.stats.phases as i64, want.lcp.max() + 1);

    for mode in [SkipMode::Counts, SkipMode::Wavelet] {
        let g = gap_merge(&b0, &l0, &b1, &l1, mode).unwrap();
        assert_eq!(g.z, want.z, "gap z for {t0:?} {t1:?}");
        assert_eq!(g.bwt, want.bwt);
        assert_eq!(
            g.lcp.as_ref().unwrap(),
            &want.lcp,
            "gap lcp for {t0:?} {t1:?}"
        );
    }
}

#[test]
fn random_pairs_match_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    for i in 0..500 {
        let sigma = [1u8, 2, 3, 4, 26][i % 5];
        let len0 = rng.random_range(0..64);
        let len1 = rng.random_range(0..64);
        let a = random_text(&mut rng, len0, sigma);
        let b = random_text(&mut rng, len1, sigma);
        let (t0, t1) = pair(&a, &b);
        check_all_algorithms(&t0, &t1);
    }
}

#[test]
fn adversarial_pairs_match_oracle() {
    let cases: Vec<(Vec<u8>, Vec<u8>)> = vec![
        (b"aaaa".to_vec(), b"aaa".to_vec()),
        (b"aaa".to_vec(), b"aaaa".to_vec()),
        (b"abab".to_vec(), b"abab".to_vec()),
        (b"".to_vec(), b"abc".to_vec()),
        (b"abc".to_vec(), b"".to_vec()),
        (vec![b'a'; 100], vec![b'a'; 100]),
        ([b"xy".repeat(40), b"z".to_vec()].concat(), b"xy".repeat(41)),
        (b"mississippi".to_vec(), b"missouri".to_vec()),
    ];
    for (a, b) in cases {
        let (t0, t1) = pair(&a, &b);
        check_all_algorithms(&t0, &t1);
    }
}

#[test]
fn gap_tracks_hm_lcp_phase_by_phase() {
    let mut rng = StdRng::seed_from_u64(5);
    for i in 0..200 {
        let sigma = [2u8, 4, 26][i % 3];
        let len0 = rng.random_range(0..100);
        let len1 = rng.random_range(0..100);
        let a = random_text(&mut rng, len0, sigma);
        let b = random_text(&mut rng, len1, sigma);
        let (t0, t1) = pair(&a, &b);
        let (b0, _) = bwt_and_lcp(&t0);
        let (b1, _) = bwt_and_lcp(&t1);
        for mode in [SkipMode::Counts, SkipMode::Wavelet] {
            let mut gap = GapMerger::new(
                &b0,
                &b1,
                GapConfig {
                    skip_mode: mode,
                    instrument: true,
                },
            )
            .unwrap();
            let mut hm = HmLcpMerger::new(&b0, &b1).unwrap();
            let n = b0.len() + b1.len();
            while !gap.is_done() {
                gap.step();
                if !hm.is_done() {
                    hm.step();
                }
                assert_eq!(gap.z(), hm.z(), "phase {}", gap.phase());
                for r in 0..n {
                    if !gap.is_irrelevant(r) {
                        assert_eq!(
                            gap.blocks().get(r),
                            hm.blocks().get(r),
                            "phase {} row {r}",
                            gap.phase()
                        );
                    }
                }
            }
            let report = gap.instrument_report().unwrap();
            assert_eq!(report.stability_violations, 0);
            assert_eq!(report.destination_violations, 0);
        }
    }
}

#[test]
fn phase_count_tracks_max_lcp() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..100 {
        let a = random_text(&mut rng, 80, 2);
        let b = random_text(&mut rng, 80, 2);
        let (t0, t1) = pair(&a, &b);
        let (b0, _) = bwt_and_lcp(&t0);
        let (b1, _) = bwt_and_lcp(&t1);
        let maxlcp = oracle_merge(&t0, &t1).lcp.max() as usize;
        let hm = hm_merge(&b0, &b1).unwrap();
        assert!(hm.stats.phases <= maxlcp + 2);
        assert_eq!(hmlcp_merge(&b0, &b1).unwrap().stats.phases, maxlcp + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn merged_bwt_is_permutation_of_inputs(
        a in proptest::collection::vec(b'a'..=b'd', 0..40),
        b in proptest::collection::vec(b'a'..=b'd', 0..40),
    ) {
        let (t0, t1) = pair(&a, &b);
        let (b0, l0) = bwt_and_lcp(&t0);
        let (b1, l1) = bwt_and_lcp(&t1);
        let out = gap_merge(&b0, &l0, &b1, &l1, SkipMode::Wavelet).unwrap();
        let mut got = out.bwt.into_symbols();
        let mut want = [b0.symbols(), b1.symbols()].concat();
        got.sort_unstable();
        want.sort_unstable();
        prop_assert_eq!(got, want);
        prop_assert_eq!(out.z.count_zeros(), b0.len());
    }
}
