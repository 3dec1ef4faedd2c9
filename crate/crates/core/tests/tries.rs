mod common;

use common::{brute, triple_sets};
use permtrie::{CodecPlan, Codec, Permutation, PermutedTrie, Shape, TripleId, TriplePattern, WILDCARD};
use proptest::prelude::*;

fn permuted(spo: &[TripleId], perm: Permutation) -> Vec<TripleId> {
    let mut v: Vec<_> = spo.iter().map(|&t| perm.permute(t)).collect();
    v.sort_unstable();
    v
}

fn plan() -> impl Strategy<Value = Option<Codec>> {
    prop_oneof![
        Just(None),
        Just(Some(Codec::Compact)),
        Just(Some(Codec::EliasFano)),
        Just(Some(Codec::PartitionedEliasFano)),
        Just(Some(Codec::VByte)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traversal_select_and_serialization(spo in triple_sets(3000), codec in plan()) {
        for perm in Permutation::ALL {
            let input = permuted(&spo, perm);
            let plan = codec.map_or(CodecPlan::default_for(perm), CodecPlan::uniform);
            let trie = PermutedTrie::build(&input, perm, plan).unwrap();
            prop_assert_eq!(trie.iter().collect::<Vec<_>>(), input.clone());

            let arrays = trie.arrays();
            for ptrs in [&arrays.level0_pointers, &arrays.level1_pointers] {
                prop_assert_eq!(ptrs[0], 0);
                prop_assert!(ptrs.windows(2).all(|w| w[0] < w[1]));
            }
            prop_assert_eq!(*arrays.level0_pointers.last().unwrap(), arrays.level1_nodes.len() as u64);
            prop_assert_eq!(*arrays.level1_pointers.last().unwrap(), arrays.level2_nodes.len() as u64);

            for t in input.iter().step_by(7) {
                for shape in [Shape::Spo, Shape::Sp, Shape::S] {
                    let p = TriplePattern::from_triple(*t, shape);
                    prop_assert_eq!(trie.select(p).unwrap().collect::<Vec<_>>(), brute(&input, p));
                }
            }

            let mut bytes = Vec::new();
            trie.write_to(&mut bytes).unwrap();
            let back = PermutedTrie::read_from(&mut bytes.as_slice()).unwrap();
            prop_assert_eq!(back.iter().collect::<Vec<_>>(), input);
        }
    }

    #[test]
    fn enumerate_matches_filter(spo in triple_sets(2000), probes in prop::collection::vec((0u64..200, 0u64..600), 1..40)) {
        let trie = PermutedTrie::build(&spo, Permutation::Spo, CodecPlan::default_for(Permutation::Spo)).unwrap();
        for (s, o) in probes.into_iter().chain(spo.iter().take(20).map(|t| (t.first, t.third))) {
            let expect = brute(&spo, TriplePattern::new(s, WILDCARD, o));
            prop_assert_eq!(trie.enumerate(s, o).collect::<Vec<_>>(), expect);
        }
    }

    #[test]
    fn map_unmap_inverse(spo in triple_sets(2000)) {
        let input = permuted(&spo, Permutation::Osp);
        let trie = PermutedTrie::build(&input, Permutation::Osp, CodecPlan::default_for(Permutation::Osp)).unwrap();
        for t in &input {
            let local = trie.map(t.first, t.second).unwrap();
            prop_assert!(local < trie.fan_out(t.first).unwrap());
            prop_assert_eq!(trie.unmap(t.first, local).unwrap(), t.second);
        }
    }
}
