use proptest::prelude::*;

use palinruler::bitseq::{from_binary, run_encode, to_binary, BinaryWord};
use palinruler::levelang::Dfa;
use palinruler::maskcalc::{apply_mask, compose_b_as_three_a, MaskOp};

fn mask_strategy(len: u32) -> impl Strategy<Value = MaskOp> {
    prop_oneof![
        (0..=len).prop_map(move |t| MaskOp::a(len, t).unwrap()),
        (1..len.max(2), 2..len.max(3))
            .prop_filter("t + s <= len", move |&(t, s)| t + s <= len)
            .prop_map(move |(t, s)| MaskOp::b(len, t, s).unwrap()),
    ]
}

fn dfa_strategy() -> impl Strategy<Value = Dfa> {
    (1usize..12).prop_flat_map(|k| {
        (
            0..k,
            prop::collection::vec([0..k, 0..k], k),
            prop::collection::vec(any::<bool>(), k),
        )
            .prop_map(|(initial, delta, acc)| {
                let accepting: Vec<usize> = acc
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a)
                    .map(|(q, _)| q)
                    .collect();
                Dfa::new(initial, delta, &accepting).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn binary_round_trip(n in 1u64..) {
        let w = to_binary(n).unwrap();
        prop_assert_eq!(from_binary(&w), n);
        prop_assert!(w.is_canonical());
        let enc = run_encode(&w).unwrap();
        prop_assert_eq!(enc.total_len(), w.len());
        prop_assert!(enc.run_lengths.iter().all(|&r| r >= 1));
        prop_assert_eq!(enc.run_count() as u32, w.value_run_count());
    }

    #[test]
    fn masks_are_involutions(
        (len, op, v) in (3u32..=40).prop_flat_map(|len| {
            (Just(len), mask_strategy(len), 0u64..(1u64 << len))
        })
    ) {
        let w = BinaryWord::from_raw(v, len).unwrap();
        let once = apply_mask(&op, &w).unwrap();
        prop_assert_eq!(apply_mask(&op, &once).unwrap(), w);
        if op.kind() == palinruler::MaskKind::B {
            prop_assert_eq!(compose_b_as_three_a(&op).unwrap().apply(&w).unwrap(), once);
        }
    }

    #[test]
    fn dfa_text_round_trip(dfa in dfa_strategy()) {
        let text = dfa.to_text();
        let back = Dfa::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, dfa);
    }

    #[test]
    fn minimize_is_idempotent_and_equivalent(dfa in dfa_strategy()) {
        let min = dfa.minimize();
        prop_assert_eq!(min.minimize().state_count(), min.state_count());
        prop_assert!(min.state_count() <= dfa.reachable_count());
        for len in 0..=10u32 {
            for v in 0..(1u64 << len) {
                let w = BinaryWord::from_raw(v, len).unwrap();
                prop_assert_eq!(dfa.accepts_word(&w), min.accepts_word(&w));
            }
        }
    }
}
