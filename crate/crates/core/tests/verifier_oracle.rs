//! The verifier against an independent oracle.
//!
//! The production verifier counts pairs through a flat counter table. The
//! oracle here recomputes every pair's coverage by scanning all blocks
//! for membership, an O(N^2 B) scan sharing no code with the fast path,
//! and the two must agree verdict-for-verdict and pair-for-pair.

use gdd5_core::catalog::entries;
use gdd5_core::construct::td;
use gdd5_core::design::{BlockSizeSet, Design};
use gdd5_core::verify::verify_gdd;

/// Membership-scan coverage of one pair.
fn brute_pair(d: &Design, a: u32, b: u32) -> usize {
    d.blocks()
        .iter()
        .filter(|blk| blk.binary_search(&a).is_ok() && blk.binary_search(&b).is_ok())
        .count()
}

/// Full brute-force GDD decision: sizes, forbidden pairs, exact coverage.
fn brute_verdict(d: &Design, k: &BlockSizeSet) -> bool {
    if d.blocks().iter().any(|b| !k.contains(b.len())) {
        return false;
    }
    let group_of = d.group_of_points();
    for a in 0..d.n_points() {
        for b in a + 1..d.n_points() {
            let same = group_of[a as usize] == group_of[b as usize];
            let cov = brute_pair(d, a, b);
            if same && cov != 0 {
                return false;
            }
            if !same && cov != 1 {
                return false;
            }
        }
    }
    true
}

fn small_catalog_designs() -> Vec<(String, Design)> {
    entries()
        .iter()
        .filter(|e| e.system.n_points() <= 150)
        .map(|e| (e.name.clone(), e.system.expand().unwrap()))
        .collect()
}

#[test]
fn agrees_with_brute_force_on_catalog() {
    let k = BlockSizeSet::single(5);
    for (name, design) in small_catalog_designs() {
        assert!(design.n_points() <= 150);
        assert_eq!(
            verify_gdd(&design, &k).verdict,
            brute_verdict(&design, &k),
            "{name}"
        );
        assert!(verify_gdd(&design, &k).verdict, "{name}");
    }
}

#[test]
fn agrees_with_brute_force_on_mutants() {
    let k = BlockSizeSet::single(5);
    for (name, design) in small_catalog_designs().into_iter().take(3) {
        // deletion mutant
        let deleted = Design::new(
            design.n_points(),
            design.groups().to_vec(),
            design.blocks()[1..].to_vec(),
        )
        .unwrap();
        // duplication mutant
        let mut doubled_blocks = design.blocks().to_vec();
        doubled_blocks.push(design.blocks()[0].clone());
        let doubled =
            Design::new(design.n_points(), design.groups().to_vec(), doubled_blocks).unwrap();
        for (tag, mutant) in [("deleted", deleted), ("doubled", doubled)] {
            let fast = verify_gdd(&mutant, &k);
            assert_eq!(fast.verdict, brute_verdict(&mutant, &k), "{name} {tag}");
            assert!(!fast.verdict, "{name} {tag}");
            // the flagged pairs match the oracle's pair-by-pair account
            for &(a, b) in &fast.uncovered {
                assert_eq!(brute_pair(&mutant, a, b), 0, "{name} {tag} ({a},{b})");
            }
            for &((a, b), _) in &fast.overcovered {
                assert!(brute_pair(&mutant, a, b) > 1, "{name} {tag} ({a},{b})");
            }
        }
    }
}

#[test]
fn relabeling_preserves_verdicts() {
    // a metamorphic check: renaming points renames the design, nothing else
    let k = BlockSizeSet::single(5);
    let seeds = [3u64, 17, 59];
    for (name, design) in small_catalog_designs().into_iter().take(4) {
        for seed in seeds {
            let perm = pseudo_permutation(design.n_points(), seed);
            let groups = design
                .groups()
                .iter()
                .map(|g| g.iter().map(|&p| perm[p as usize]).collect())
                .collect();
            let blocks = design
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&p| perm[p as usize]).collect())
                .collect();
            let relabeled = Design::new(design.n_points(), groups, blocks).unwrap();
            assert!(verify_gdd(&relabeled, &k).verdict, "{name} seed {seed}");
            assert_eq!(relabeled.signature(), design.signature());

            // a broken design stays broken under relabeling, with the
            // same violation totals
            let broken = Design::new(
                relabeled.n_points(),
                relabeled.groups().to_vec(),
                relabeled.blocks()[1..].to_vec(),
            )
            .unwrap();
            let report = verify_gdd(&broken, &k);
            assert!(!report.verdict);
            assert_eq!(report.uncovered_total, 10, "{name} seed {seed}");
        }
    }
}

/// Deterministic pseudo-random permutation by repeated mixing.
fn pseudo_permutation(n: u32, seed: u64) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n).collect();
    let mut state = seed;
    for i in (1..n as usize).rev() {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        perm.swap(i, j);
    }
    perm
}

#[test]
fn mutation_sensitivity_block_removal() {
    let k = BlockSizeSet::single(5);
    let (name, design) = small_catalog_designs().swap_remove(0);
    // removing each of several single blocks flips the verdict with
    // exactly 10 uncovered pairs
    for bi in [0usize, 7, 100].into_iter().filter(|&i| i < design.blocks().len()) {
        let mut blocks = design.blocks().to_vec();
        blocks.remove(bi);
        let mutant = Design::new(design.n_points(), design.groups().to_vec(), blocks).unwrap();
        let report = verify_gdd(&mutant, &k);
        assert!(!report.verdict, "{name} block {bi}");
        assert_eq!(report.uncovered_total, 10, "{name} block {bi}");
        assert_eq!(report.overcovered_total, 0);
        assert_eq!(report.forbidden_total, 0);
    }
}

#[test]
fn mutation_sensitivity_same_group_swap() {
    let k = BlockSizeSet::single(5);
    let (name, design) = small_catalog_designs().swap_remove(0);
    let group_of = design.group_of_points();
    // swap one point of one block for a same-group outsider
    let block = design.blocks()[0].clone();
    let victim = block[0];
    let replacement = (0..design.n_points())
        .find(|&p| group_of[p as usize] == group_of[victim as usize] && p != victim)
        .expect("groups have size >= 2 here");
    let mut blocks = design.blocks().to_vec();
    blocks[0] = block
        .iter()
        .map(|&p| if p == victim { replacement } else { p })
        .collect();
    let mutant = Design::new(design.n_points(), design.groups().to_vec(), blocks).unwrap();
    let report = verify_gdd(&mutant, &k);
    assert!(!report.verdict, "{name}");
    // the victim's four pairs go missing, the replacement's double up
    assert_eq!(report.uncovered_total, 4, "{name}");
    assert_eq!(report.overcovered_total, 4, "{name}");
}

#[test]
fn largest_catalog_entry_and_td_grid() {
    let big = entries()
        .iter()
        .find(|e| e.name == "10^33")
        .unwrap()
        .system
        .expand()
        .unwrap();
    let k = BlockSizeSet::single(5);
    assert!(verify_gdd(&big, &k).verdict);
    for q in [7u32, 9, 11] {
        let d = td(5, q).unwrap();
        assert!(verify_gdd(&d, &BlockSizeSet::single(5)).verdict, "td(5,{q})");
    }
}
