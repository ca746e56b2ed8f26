mod common;

use codecid::corpus::{ChunkParams, RepSample, RepresentativeSet};
use codecid::features::lcs::{
    lcs_features_full, lcs_features_overlapped, lcs_subsequence_len, lcs_subsequence_len_dp, lcs_substring_len,
    SeqAggregate, SubsequenceMatcher,
};
use common::{subsequence_exhaustive, subsequence_oracle, substring_oracle};
use proptest::prelude::*;

fn bytes_over(alphabet: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..alphabet, 0..=max_len)
}

fn pair(max_len: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    prop_oneof![Just(2u8), Just(4u8), Just(255u8)]
        .prop_flat_map(move |k| (bytes_over(k, max_len), bytes_over(k, max_len)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn substring_matches_oracle((a, b) in pair(64)) {
        prop_assert_eq!(lcs_substring_len(&a, &b), substring_oracle(&a, &b));
    }

    #[test]
    fn subsequence_matches_recursive_oracle((a, b) in pair(64)) {
        let want = subsequence_oracle(&a, &b);
        prop_assert_eq!(lcs_subsequence_len_dp(&a, &b), want);
        prop_assert_eq!(lcs_subsequence_len(&a, &b), want);
    }

    #[test]
    fn subsequence_matches_exhaustive_enumeration((a, b) in pair(12)) {
        prop_assert_eq!(lcs_subsequence_len(&a, &b), subsequence_exhaustive(&a, &b));
    }

    #[test]
    fn symmetric_and_ordered((a, b) in pair(64)) {
        let sub = lcs_substring_len(&a, &b);
        let seq = lcs_subsequence_len(&a, &b);
        prop_assert_eq!(sub, lcs_substring_len(&b, &a));
        prop_assert_eq!(seq, lcs_subsequence_len(&b, &a));
        prop_assert!(sub <= seq);
        prop_assert!(seq <= a.len().min(b.len()));
    }

    #[test]
    fn monotone_under_append((a, b) in pair(48), extra in prop::collection::vec(any::<u8>(), 0..16)) {
        let mut longer = a.clone();
        longer.extend_from_slice(&extra);
        prop_assert!(lcs_substring_len(&longer, &b) >= lcs_substring_len(&a, &b));
        prop_assert!(lcs_subsequence_len(&longer, &b) >= lcs_subsequence_len(&a, &b));
    }

    #[test]
    fn self_comparison_is_full_length(a in bytes_over(255, 300)) {
        prop_assert_eq!(lcs_substring_len(&a, &a), a.len());
        prop_assert_eq!(lcs_subsequence_len(&a, &a), a.len());
    }

    #[test]
    fn bit_parallel_matches_dp_on_long_inputs(
        a in prop::collection::vec(0..4u8, 0..400),
        b in prop::collection::vec(0..4u8, 0..400),
    ) {
        let m = SubsequenceMatcher::new(&a);
        prop_assert_eq!(m.lcs_len(&b), lcs_subsequence_len_dp(&a, &b));
    }
}

#[test]
fn worked_example() {
    assert_eq!(lcs_substring_len(b"ABCBDCB", b"BDCABA"), 3);
    assert_eq!(lcs_subsequence_len(b"ABCBDCB", b"BDCABA"), 4);
    assert_eq!(lcs_substring_len(b"", b"ABC"), 0);
    assert_eq!(lcs_subsequence_len(b"ABC", b""), 0);
}

#[test]
fn single_chunk_overlapped_equals_full() {
    let packet: Vec<u8> = (0..512u32).map(|i| (i * 31 % 7) as u8).collect();
    let reps = vec![RepresentativeSet {
        class_label: "k".into(),
        samples: (0..3u32)
            .map(|s| RepSample {
                source_id: format!("k/{s}"),
                offset: 0,
                bytes: (0..512u32).map(|i| ((i + s) * 17 % 5) as u8).collect(),
            })
            .collect(),
    }];
    let full = lcs_features_full(&packet, &reps).unwrap();
    let one = lcs_features_overlapped(&packet, &reps, ChunkParams::new(512, 0.5).unwrap(), SeqAggregate::Sum, false).unwrap();
    assert_eq!(full, one);
}
