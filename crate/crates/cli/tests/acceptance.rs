//! Acceptance suite.
//!
//! One test per criterion, each printing a `criterion N: PASS` line
//! (visible with `--nocapture`). Expected values are pinned here, never
//! computed from the code under test: block counts come from pair
//! counting done by hand, spectrum statuses from the published theorem
//! statements, and mutation deltas from the arithmetic of a size-5 block.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use gdd5_core::catalog::{entries, get_entry};
use gdd5_core::construct::{
    add_groups_as_blocks, delete_point, fill_groups, find_parallel_class, inflate, mgdd_from_td,
    projective_plane_pbd, td, wilson_compose, wilson_intermediate, FillSet, MgddSet,
};
use gdd5_core::design::{BlockSizeSet, Design};
use gdd5_core::error::OrbitError;
use gdd5_core::format::{parse_design, DesignFile};
use gdd5_core::search::{search, SearchProblem, SearchStatus};
use gdd5_core::spectrum::{improvements, spectrum_status, SpectrumStatus, Theorem};
use gdd5_core::verify::{is_mgdd, verify_dgdd, verify_gdd};

fn pass(n: u32, detail: &str) {
    println!("criterion {n}: PASS ({detail})");
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gdd5"))
}

fn scripts_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

/// Deterministic mixer for mutation sampling.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[test]
fn criterion_01_catalog_fidelity() {
    let start = Instant::now();
    let k5 = BlockSizeSet::single(5);
    for entry in entries() {
        let design = entry
            .system
            .expand()
            .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        let report = verify_gdd(&design, &k5);
        assert!(report.verdict, "{}:\n{}", entry.name, report.to_text());
        assert_eq!(
            design.blocks().len() as u64,
            entry.system.signature.cross_pairs() / 10,
            "{}",
            entry.name
        );
    }
    // spot values pinned from pair counting by hand
    let expect = [
        ("2^111", 2442u64),
        ("6^15", 378),
        ("10^15", 1050),
        ("10^33", 5280),
        ("7^20 19^1", 1197),
        ("8^20 24^1", 1600),
    ];
    for (name, blocks) in expect {
        let d = get_entry(name).unwrap().expand().unwrap();
        assert_eq!(d.blocks().len() as u64, blocks, "{name}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    pass(1, &format!("26 entries expand and verify in {elapsed:.2?}"));
}

#[test]
fn criterion_02_orbit_semantics() {
    let mut forced = get_entry("6^15").unwrap().clone();
    forced.overrides.clear(); // all ten blocks now run 45 shifts
    assert!(matches!(
        forced.expand(),
        Err(OrbitError::DuplicateBlock { .. })
    ));
    let with_limits = get_entry("6^15").unwrap().expand().unwrap();
    assert_eq!(with_limits.blocks().len(), 378);
    pass(2, "full orbits on the short-orbit blocks raise DuplicateBlock");
}

#[test]
fn criterion_03_td_field_suite() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13] {
        for k in 2..=(q as usize + 1) {
            let d = td(k, q).unwrap_or_else(|e| panic!("td({k},{q}): {e}"));
            assert_eq!(d.blocks().len() as u64, u64::from(q) * u64::from(q));
            let report = verify_gdd(&d, &BlockSizeSet::single(k));
            assert!(report.verdict, "td({k},{q})");
        }
    }
    // named cases: the completion column and the extension fields
    assert_eq!(td(5, 4).unwrap().n_points(), 20);
    assert!(verify_gdd(&td(5, 8).unwrap(), &BlockSizeSet::single(5)).verdict);
    assert!(verify_gdd(&td(5, 9).unwrap(), &BlockSizeSet::single(5)).verdict);
    pass(3, "td(k,q) verifies for all prime powers q <= 13, k <= q+1");
}

#[test]
fn criterion_04_mgdd_extraction() {
    let master = td(5, 5).unwrap();
    let pc = find_parallel_class(&master).unwrap().expect("td(5,5) resolves");
    let mg = mgdd_from_td(&master, &pc).unwrap();
    assert_eq!(mg.base().blocks().len(), 20);
    assert_eq!(mg.base().signature().to_string(), "5^5");
    assert!(is_mgdd(&mg));
    assert!(verify_dgdd(&mg, &BlockSizeSet::single(5)).verdict);

    // exhaustive: the completed td(5,4) has no parallel class
    assert_eq!(find_parallel_class(&td(5, 4).unwrap()).unwrap(), None);
    pass(4, "5-MGDD of type 5^5 with 20 blocks; td(5,4) exhaustively none");
}

#[test]
fn criterion_05_inflation_at_scale() {
    let start = Instant::now();
    let big = inflate(
        &get_entry("2^111").unwrap().expand().unwrap(),
        7,
        &td(5, 7).unwrap(),
    )
    .unwrap();
    assert_eq!(big.signature().to_string(), "14^111");
    assert_eq!(big.blocks().len(), 119_658);
    assert!(verify_gdd(&big, &BlockSizeSet::single(5)).verdict);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");

    let mid = inflate(
        &get_entry("6^15").unwrap().expand().unwrap(),
        5,
        &td(5, 5).unwrap(),
    )
    .unwrap();
    assert_eq!(mid.signature().to_string(), "30^15");
    assert_eq!(mid.blocks().len(), 9450);
    assert!(verify_gdd(&mid, &BlockSizeSet::single(5)).verdict);
    pass(5, &format!("14^111 with 119658 blocks verified in {elapsed:.2?}"));
}

#[test]
fn criterion_06_overlay_composition() {
    let master = td(5, 5).unwrap();
    let pc = find_parallel_class(&master).unwrap().unwrap();
    let mut mgdds = MgddSet::new();
    mgdds.insert(5, mgdd_from_td(&master, &pc).unwrap());

    let intermediate = wilson_intermediate(&master, 5, &mgdds).unwrap();
    assert_eq!(intermediate.base().blocks().len(), 500);
    assert_eq!(intermediate.base().signature().to_string(), "25^5");
    assert_eq!(intermediate.holes().len(), 5);
    // type (25, 5^5)^5: every hole meets every group in 5 points
    assert!(intermediate
        .incidence()
        .iter()
        .all(|row| row.iter().all(|&c| c == 5)));
    assert!(verify_dgdd(&intermediate, &BlockSizeSet::single(5)).verdict);

    let mut fills = FillSet::new();
    fills.insert(5, td(5, 5).unwrap());
    let d = wilson_compose(&master, 5, &mgdds, &fills).unwrap();
    assert_eq!(d.signature().to_string(), "25^5");
    assert_eq!(d.blocks().len(), 625);
    assert!(verify_gdd(&d, &BlockSizeSet::single(5)).verdict);
    pass(6, "25^5 with 625 blocks; intermediate double design verified");
}

#[test]
fn criterion_07_fill_chain() {
    // the shipped script, through the binary
    let out_dir = tempfile::tempdir().unwrap();
    let status = bin()
        .arg("build")
        .arg(scripts_dir().join("5_21.gds"))
        .arg("--out-dir")
        .arg(out_dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let emitted = std::fs::read_to_string(out_dir.path().join("filled.gdd")).unwrap();
    let DesignFile::Plain(filled) = parse_design(&emitted).unwrap() else {
        panic!("expected a plain design")
    };
    assert_eq!(filled.signature().to_string(), "5^21");
    assert_eq!(filled.blocks().len(), 525);
    assert!(verify_gdd(&filled, &BlockSizeSet::single(5)).verdict);

    // 25^5 -> 5^25 by filling every group
    let master = td(5, 5).unwrap();
    let pc = find_parallel_class(&master).unwrap().unwrap();
    let mut mgdds = MgddSet::new();
    mgdds.insert(5, mgdd_from_td(&master, &pc).unwrap());
    let mut fills = FillSet::new();
    fills.insert(5, td(5, 5).unwrap());
    let big = wilson_compose(&master, 5, &mgdds, &fills).unwrap();
    let per_group: std::collections::BTreeMap<usize, Design> =
        (0..5).map(|gi| (gi, td(5, 5).unwrap())).collect();
    let fine = fill_groups(&big, 0, &per_group).unwrap();
    assert_eq!(fine.signature().to_string(), "5^25");
    assert_eq!(fine.blocks().len(), 750);
    assert!(verify_gdd(&fine, &BlockSizeSet::single(5)).verdict);
    pass(7, "script 5_21 emits 525 blocks; 5^25 fill yields 750");
}

#[test]
fn criterion_08_proof_step_reproduction() {
    let t = td(9, 11).unwrap();
    let pbd = add_groups_as_blocks(&t).unwrap();
    assert_eq!(pbd.blocks().len(), 130);
    let master = delete_point(&pbd, 0).unwrap();
    assert_eq!(master.signature().to_string(), "8^11 10^1");
    // the deleted point lay in 11 size-9 blocks and 1 size-11 block,
    // leaving 110 + 8 = 118; pair counting agrees:
    // 110 * 36 + 8 * 55 = 4400 = cross_pairs(8^11 10^1)
    assert_eq!(master.blocks().len(), 118);
    assert_eq!(master.blocks().iter().filter(|b| b.len() == 9).count(), 110);
    assert_eq!(master.blocks().iter().filter(|b| b.len() == 11).count(), 8);
    let report = verify_gdd(&master, &BlockSizeSet::new([9, 11]).unwrap());
    assert!(report.verdict);

    let plane = projective_plane_pbd(4).unwrap();
    let small = delete_point(&plane, 0).unwrap();
    assert_eq!(small.signature().to_string(), "4^5");
    assert_eq!(small.blocks().len(), 16);
    assert!(verify_gdd(&small, &BlockSizeSet::single(5)).verdict);
    pass(8, "{9,11}-GDD of type 8^11 10^1 (118 blocks) and 4^5 (16 blocks)");
}

#[test]
fn criterion_09_spectrum_oracle() {
    use SpectrumStatus::*;
    // golden cases: (g, u, prior status, new status)
    let golden: [(u32, u32, SpectrumStatus, SpectrumStatus); 42] = [
        (2, 5, NotExist, NotExist),
        (2, 11, NotExist, NotExist),
        (3, 5, NotExist, NotExist),
        (6, 5, NotExist, NotExist),
        (2, 35, Open, Exists),
        (2, 71, Open, Exists),
        (2, 111, Open, Exists),
        (2, 195, Open, Exists),
        (2, 215, Open, Exists),
        (2, 15, Open, Open),
        (2, 75, Open, Open),
        (2, 95, Open, Open),
        (2, 115, Open, Open),
        (3, 45, Open, Open),
        (3, 65, Open, Open),
        (6, 15, Open, Exists),
        (6, 75, Open, Exists),
        (6, 35, Open, Open),
        (6, 95, Open, Open),
        (10, 15, Open, Exists),
        (10, 23, Open, Exists),
        (10, 33, Open, Exists),
        (10, 35, Open, Exists),
        (10, 27, Open, Open),
        (10, 5, Open, Open),
        (14, 71, Open, Exists),
        (14, 115, Open, Exists),
        (14, 11, Open, Open),
        (22, 15, Open, Open),
        (34, 11, Open, Exists),
        (38, 71, Open, Exists),
        (38, 15, Open, Open),
        (30, 15, Open, Exists),
        (50, 15, Open, Exists),
        (50, 23, Open, Exists),
        (50, 27, Open, Open),
        (74, 15, Open, Open),
        (90, 23, Open, Exists),
        (70, 23, Open, Exists),
        (98, 15, Open, Exists),
        (2, 12, Inadmissible, Inadmissible),
        (12, 10, Exists, Exists),
    ];
    for (g, u, prior, new) in golden {
        assert_eq!(spectrum_status(g, u, Theorem::Prior), prior, "({g},{u}) prior");
        assert_eq!(spectrum_status(g, u, Theorem::New), new, "({g},{u}) new");
    }

    // finite exception lists of both snapshots, transcribed independently
    let mut prior_finite: BTreeSet<(u32, u32)> = BTreeSet::new();
    for u in [45, 65] {
        prior_finite.insert((3, u));
    }
    for u in [15, 35, 71, 75, 95, 111, 115, 195, 215] {
        prior_finite.insert((2, u));
    }
    for u in [15, 35, 75, 95] {
        prior_finite.insert((6, u));
    }
    for g in [14, 18, 22, 26] {
        for u in [11, 15, 71, 111, 115] {
            prior_finite.insert((g, u));
        }
    }
    for g in [34, 46, 62] {
        for u in [11, 15] {
            prior_finite.insert((g, u));
        }
    }
    for g in [38, 58] {
        for u in [11, 15, 71, 111] {
            prior_finite.insert((g, u));
        }
    }
    for u in [5, 7, 15, 23, 27, 33, 35, 39, 47] {
        prior_finite.insert((10, u));
    }
    prior_finite.insert((30, 15));
    for u in [15, 23, 27] {
        prior_finite.insert((50, u));
    }
    prior_finite.insert((90, 23));
    for a in [7, 11, 13, 17, 35, 55, 77, 85, 91, 119, 143, 187, 221] {
        prior_finite.insert((10 * a, 23));
    }

    let mut new_all: BTreeSet<(u32, u32)> = BTreeSet::new();
    for u in [45, 65] {
        new_all.insert((3, u));
    }
    for u in [15, 75, 95, 115] {
        new_all.insert((2, u));
    }
    for u in [35, 95] {
        new_all.insert((6, u));
    }
    for g in [14, 18, 22, 26, 38, 58] {
        for u in [11, 15] {
            new_all.insert((g, u));
        }
    }
    for g in [74, 82, 86, 94] {
        new_all.insert((g, 15));
    }
    for u in [5, 7, 27, 39, 47] {
        new_all.insert((10, u));
    }
    new_all.insert((50, 27));

    let imp: BTreeSet<(u32, u32)> = improvements().into_iter().collect();
    let restricted: BTreeSet<(u32, u32)> =
        imp.intersection(&prior_finite).copied().collect();
    let difference: BTreeSet<(u32, u32)> =
        prior_finite.difference(&new_all).copied().collect();
    assert_eq!(restricted, difference);

    // the new snapshot never reopens anything
    for &(g, u) in &imp {
        assert_eq!(spectrum_status(g, u, Theorem::Prior), Open);
        assert_eq!(spectrum_status(g, u, Theorem::New), Exists);
    }
    pass(9, &format!(
        "42 golden cases; finite-list improvements = set difference ({} pairs)",
        restricted.len()
    ));
}

#[test]
fn criterion_10_mutation_suite() {
    let k5 = BlockSizeSet::single(5);
    let sampled = ["6^15", "2^36 10^1", "8^10 4^1", "7^20 19^1", "24^7 8^1"];
    let mut state = 0xd1ce_5eed_u64;
    let mut rand_below = |m: usize| -> usize {
        state = mix(state);
        (state % m as u64) as usize
    };
    for name in sampled {
        let design = get_entry(name).unwrap().expand().unwrap();
        let group_of = design.group_of_points();
        for _ in 0..20 {
            let bi = rand_below(design.blocks().len());

            // deletion: a size-5 block leaves exactly its 10 pairs uncovered
            let mut blocks = design.blocks().to_vec();
            blocks.remove(bi);
            let mutant =
                Design::new(design.n_points(), design.groups().to_vec(), blocks).unwrap();
            let report = verify_gdd(&mutant, &k5);
            assert!(!report.verdict, "{name} deletion {bi}");
            assert_eq!(report.uncovered_total, 10, "{name} deletion {bi}");
            assert_eq!(report.overcovered_total, 0);
            assert_eq!(report.forbidden_total, 0);

            // duplication: the same 10 pairs get covered twice
            let mut blocks = design.blocks().to_vec();
            blocks.push(design.blocks()[bi].clone());
            let mutant =
                Design::new(design.n_points(), design.groups().to_vec(), blocks).unwrap();
            let report = verify_gdd(&mutant, &k5);
            assert!(!report.verdict, "{name} duplication {bi}");
            assert_eq!(report.overcovered_total, 10, "{name} duplication {bi}");
            assert_eq!(report.uncovered_total, 0);

            // same-group swap: the victim's 4 pairs vanish, the
            // replacement's 4 double up
            let block = design.blocks()[bi].clone();
            let victim = block[rand_below(block.len())];
            let candidates: Vec<u32> = (0..design.n_points())
                .filter(|&p| p != victim && group_of[p as usize] == group_of[victim as usize])
                .collect();
            let replacement = candidates[rand_below(candidates.len())];
            let mut blocks = design.blocks().to_vec();
            blocks[bi] = block
                .iter()
                .map(|&p| if p == victim { replacement } else { p })
                .collect();
            let mutant =
                Design::new(design.n_points(), design.groups().to_vec(), blocks).unwrap();
            let report = verify_gdd(&mutant, &k5);
            assert!(!report.verdict, "{name} swap {bi}");
            assert_eq!(report.uncovered_total, 4, "{name} swap {bi}");
            assert_eq!(report.overcovered_total, 4, "{name} swap {bi}");
            assert_eq!(report.forbidden_total, 0);
        }
    }
    pass(10, "5 designs x 20 mutations x 3 kinds all flip the verdict");
}

#[test]
fn criterion_11_search() {
    let mut found = 0;
    for seed in 0..10u64 {
        let problem = SearchProblem::plain("4^5".parse().unwrap(), 5, 1_000_000, seed, 1000);
        let out = search(&problem).unwrap();
        if out.status == SearchStatus::Found {
            let system = out.system.unwrap();
            let design = system.expand().unwrap();
            assert!(verify_gdd(&design, &BlockSizeSet::single(5)).verdict);
            assert!(out.trace.moves_used <= 1_000_000);
            found += 1;
        }
    }
    assert!(found >= 9, "found only {found}/10");

    let out = search(&SearchProblem::plain(
        "2^5".parse().unwrap(),
        5,
        100_000,
        0,
        1000,
    ))
    .unwrap();
    assert_eq!(out.status, SearchStatus::Exhausted);
    assert!(out.trace.final_cost > 0);
    pass(11, &format!("4^5 found on {found}/10 seeds; 2^5 exhausted"));
}

#[test]
fn shipped_scripts_exit_zero() {
    // every internal script runs clean through the binary
    let dir = scripts_dir();
    let mut ran = 0;
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gds"))
        .collect();
    paths.sort();
    for path in paths {
        let out_dir = tempfile::tempdir().unwrap();
        let status = bin()
            .arg("--quiet")
            .arg("build")
            .arg(&path)
            .arg("--out-dir")
            .arg(out_dir.path())
            .status()
            .unwrap();
        assert!(status.success(), "{}", path.display());
        ran += 1;
    }
    assert_eq!(ran, 8);

    // registry-dependent scripts fail cleanly with exit 3 when their
    // external ingredients are absent
    for name in ["external/6_75.gds", "external/98_15.gds"] {
        let out = bin()
            .arg("build")
            .arg(dir.join(name))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(3), "{name}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("no registered"), "{name}: {stderr}");
    }
}
