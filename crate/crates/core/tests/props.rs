//! Property tests for the structural invariants: partition totality, RNG
//! reproducibility, and block-aggregation consistency against the
//! independent dense oracle.

mod common;

use common::{default_kinds, make_instance, random_vector, rel_inf_err};
use proptest::prelude::*;
use rcs_core::{aggregate_blocks, BlockPartition, RngState, Vector};

proptest! {
    #[test]
    fn partition_covers_all_coordinates(d in 1usize..300, raw_n in 1usize..300) {
        let blocks = raw_n.min(d);
        let p = BlockPartition::new(d, blocks).unwrap();
        prop_assert_eq!(p.num_blocks(), blocks);
        prop_assert_eq!(p.sizes().iter().sum::<usize>(), d);
        // Contiguous, disjoint, ordered, every block nonempty.
        let mut next = 0usize;
        for i in 0..blocks {
            let r = p.range(i);
            prop_assert_eq!(r.start, next);
            prop_assert!(r.end > r.start);
            next = r.end;
        }
        prop_assert_eq!(next, d);
        // Sizes differ by at most one, larger ones first.
        let sizes = p.sizes();
        for w in sizes.windows(2) {
            prop_assert!(w[0] >= w[1] && w[0] - w[1] <= 1);
        }
    }

    #[test]
    fn rng_streams_are_reproducible(seed in any::<u64>(), len in 1usize..2000) {
        let mut a = RngState::new(seed);
        let mut b = RngState::new(seed);
        for _ in 0..len {
            prop_assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn uniform_indices_stay_in_range(seed in any::<u64>(), n in 1usize..64) {
        let mut rng = RngState::new(seed);
        for _ in 0..256 {
            prop_assert!(rng.uniform_index(n) < n);
        }
    }

    #[test]
    fn aggregation_matches_dense_oracle(
        seed in any::<u64>(),
        n in 2usize..24,
        d in 2usize..24,
        kind_idx in 0usize..4,
    ) {
        let mut rng = RngState::new(seed);
        let kind = default_kinds()[kind_idx];
        let instance = make_instance(kind, &mut rng, n, d);
        let blocks = 1 + rng.uniform_index(d);
        let partition = BlockPartition::new(d, blocks).unwrap();
        let x = random_vector(&mut rng, d, 2.0);
        let state = instance.problem.init_state(x.clone());
        let per_block: Vec<Vec<f64>> = (0..blocks)
            .map(|i| instance.problem.block_subgradient(&state, i, &partition))
            .collect();
        let aggregated = aggregate_blocks(&per_block, &partition).unwrap();
        let dense = instance.raw.dense_subgradient(x.as_slice());
        prop_assert!(
            rel_inf_err(aggregated.as_slice(), &dense) <= 1e-10,
            "family {} deviates: {:?}",
            instance.name,
            rel_inf_err(aggregated.as_slice(), &dense)
        );
    }

    #[test]
    fn aggregate_rejects_wrong_lengths(d in 2usize..30) {
        let p = BlockPartition::new(d, 2).unwrap();
        let blocks = vec![vec![0.0; p.block_len(0) + 1], vec![0.0; p.block_len(1)]];
        prop_assert!(aggregate_blocks(&blocks, &p).is_err());
    }
}

#[test]
fn index_streams_agree_for_any_length() {
    let mut long = RngState::new(99);
    let first: Vec<usize> = (0..10_000).map(|_| long.uniform_index(7)).collect();
    let mut again = RngState::new(99);
    let second: Vec<usize> = (0..10_000).map(|_| again.uniform_index(7)).collect();
    assert_eq!(first, second);
}

#[test]
fn vector_invariant_guards_solver_inputs() {
    assert!(Vector::new(vec![0.0, f64::NAN]).is_err());
}
