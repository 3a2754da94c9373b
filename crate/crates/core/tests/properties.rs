//! Property tests for the arithmetic and the data formats.

use num_bigint::BigUint;
use proptest::prelude::*;

use gdd5_core::construct::td;
use gdd5_core::design::{admissible, BlockSizeSet, Design};
use gdd5_core::format::{parse_design, write_file, DesignFile};
use gdd5_core::search::{evaluate_cost, search, SearchProblem, SearchStatus};
use gdd5_core::signature::GroupSignature;
use gdd5_core::verify::verify_gdd;

/// Big-integer re-statement of the admissibility arithmetic, sharing no
/// code with the production path.
fn admissible_bigint(k: u32, g: u32, u: u32) -> bool {
    let (kb, gb, ub) = (BigUint::from(k), BigUint::from(g), BigUint::from(u));
    let one = BigUint::from(1u32);
    u >= k
        && ((&gb * (&ub - &one)) % (&kb - &one)) == BigUint::ZERO
        && ((&gb * &gb * &ub * (&ub - &one)) % (&kb * (&kb - &one))) == BigUint::ZERO
}

#[test]
fn admissibility_matches_bigint_oracle_exhaustively() {
    for g in 1..=100u32 {
        for u in 5..=200u32 {
            assert_eq!(
                admissible(5, g, u),
                admissible_bigint(5, g, u),
                "(5,{g},{u})"
            );
        }
    }
}

proptest! {
    #[test]
    fn admissibility_matches_bigint_oracle_random(
        k in 2u32..=9,
        g in 1u32..=100_000,
        u in 2u32..=100_000,
    ) {
        prop_assert_eq!(admissible(k, g, u), admissible_bigint(k, g, u));
    }

    #[test]
    fn signature_parse_display_roundtrip(parts in proptest::collection::vec((1u32..400, 1u32..200), 1..6)) {
        let sig = GroupSignature::new(parts).unwrap();
        let text = sig.to_string();
        let back: GroupSignature = text.parse().unwrap();
        prop_assert_eq!(back, sig);
    }

    #[test]
    fn design_file_roundtrip(seed in 0u64..5000) {
        // random partition and random blocks over up to 40 points
        let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let mut next = move |m: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        let n = 5 + next(36) as u32;
        let mut groups: Vec<Vec<u32>> = Vec::new();
        let mut p = 0;
        while p < n {
            let size = (1 + next(6) as u32).min(n - p);
            groups.push((p..p + size).collect());
            p += size;
        }
        let mut blocks = Vec::new();
        for _ in 0..next(20) {
            let mut block: Vec<u32> = (0..2 + next(4)).map(|_| next(u64::from(n)) as u32).collect();
            block.sort_unstable();
            block.dedup();
            if block.len() >= 2 {
                blocks.push(block);
            }
        }
        let design = Design::new(n, groups, blocks).unwrap();
        let file = DesignFile::Plain(design);
        let text = write_file(&file);
        let reparsed = parse_design(&text).unwrap();
        prop_assert_eq!(&reparsed, &file);
        // serialization is idempotent
        prop_assert_eq!(write_file(&reparsed), text);
    }
}

#[test]
fn search_cost_zero_iff_verified() {
    // a found solution has cost zero and verifies; perturbing any block
    // breaks both at once
    let problem = SearchProblem::plain("4^5".parse().unwrap(), 5, 1_000_000, 5, 1000);
    let out = search(&problem).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    let system = out.system.unwrap();
    assert_eq!(evaluate_cost(&problem, &system.base_blocks).unwrap(), 0);
    assert!(verify_gdd(&system.expand().unwrap(), &BlockSizeSet::single(5)).verdict);

    let mut flips = 0;
    for target in 0..system.base_blocks.len() {
        for variant in 0..6u32 {
            // replace one block by a different transversal
            let mut blocks = system.base_blocks.clone();
            let mut candidate: Vec<u32> = (0..5u32).map(|g| g * 4 + (variant + g) % 4).collect();
            candidate.sort_unstable();
            if blocks[target] == candidate {
                continue;
            }
            blocks[target] = candidate;
            let cost = evaluate_cost(&problem, &blocks).unwrap();
            let mut sys = system.clone();
            sys.base_blocks = blocks;
            let verified = match sys.expand() {
                Ok(d) => verify_gdd(&d, &BlockSizeSet::single(5)).verdict,
                Err(_) => false, // duplicate blocks cannot verify
            };
            assert_eq!(cost == 0, verified);
            assert!(cost > 0, "a different block multiset cannot stay perfect");
            flips += 1;
            if flips >= 100 {
                return;
            }
        }
    }
    assert!(flips >= 90, "exercised {flips} perturbations");
}

#[test]
fn td_block_count_identity() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13] {
        for k in 2..=(q as usize + 1) {
            let d = td(k, q).unwrap();
            assert_eq!(d.blocks().len() as u64, u64::from(q) * u64::from(q));
            assert_eq!(d.n_points(), k as u32 * q);
        }
    }
}
