//! Pair-coverage verification for GDDs, DGDDs and MGDDs.
//!
//! The verifier decides membership by exhaustive counting: a flat
//! triangular array holds one saturating 8-bit counter per unordered
//! point pair, blocks bump the counters, and a final sweep compares each
//! counter against its target (1 for pairs that must be covered, 0 for
//! pairs inside a group or hole). Violations are data, not errors: the
//! report lists them, capped per category, alongside exact totals.

use rayon::prelude::*;

use crate::design::{BlockSizeSet, Design, DoubleDesign};

/// Counters saturate here; any pair at the cap is reported as overflowed.
const SATURATION: u8 = u8::MAX;

/// Blocks per work unit when counting in parallel.
const PAR_CHUNK: usize = 8192;

/// Rank of the unordered pair `{a, b}`, `a < b`, in the triangular layout.
#[inline]
pub(crate) fn pair_rank(a: u32, b: u32) -> usize {
    debug_assert!(a < b);
    (b as usize * (b as usize - 1)) / 2 + a as usize
}

/// Reporting knobs.
#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    /// Per-category cap on listed violations; totals stay exact.
    pub cap: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { cap: 100 }
    }
}

/// A hole/group intersection of unexpected size in a double design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureViolation {
    pub group: usize,
    pub hole: usize,
    pub got: u32,
    pub want: u32,
}

/// Outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub verdict: bool,
    /// Pairs requiring coverage that no block covers.
    pub uncovered: Vec<(u32, u32)>,
    pub uncovered_total: u64,
    /// Multiply covered pairs with the first two covering block indices.
    pub overcovered: Vec<((u32, u32), (usize, usize))>,
    pub overcovered_total: u64,
    /// Same-group or same-hole pairs inside a block, with the block index.
    pub forbidden: Vec<((u32, u32), usize)>,
    pub forbidden_total: u64,
    /// Blocks whose size is outside the permitted set.
    pub size_violations: Vec<(usize, usize)>,
    pub size_total: u64,
    /// Hole/group intersections breaking the declared double-design shape.
    pub structure: Vec<StructureViolation>,
    pub structure_total: u64,
    /// True when some pair counter saturated.
    pub overflow: bool,
    pub cap: usize,
}

impl VerificationReport {
    fn new(cap: usize) -> Self {
        Self {
            verdict: false,
            uncovered: Vec::new(),
            uncovered_total: 0,
            overcovered: Vec::new(),
            overcovered_total: 0,
            forbidden: Vec::new(),
            forbidden_total: 0,
            size_violations: Vec::new(),
            size_total: 0,
            structure: Vec::new(),
            structure_total: 0,
            overflow: false,
            cap,
        }
    }

    fn settle(&mut self) {
        self.verdict = self.uncovered_total == 0
            && self.overcovered_total == 0
            && self.forbidden_total == 0
            && self.size_total == 0
            && self.structure_total == 0
            && !self.overflow;
    }

    /// Canonical text form: `verdict PASS|FAIL` then one line per listed
    /// violation; `#` lines flag truncation and overflow.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(if self.verdict { "verdict PASS\n" } else { "verdict FAIL\n" });
        for &(a, b) in &self.uncovered {
            out.push_str(&format!("uncovered {a} {b}\n"));
        }
        for &((a, b), (b1, b2)) in &self.overcovered {
            out.push_str(&format!("overcovered {a} {b} {b1} {b2}\n"));
        }
        for &((a, b), blk) in &self.forbidden {
            out.push_str(&format!("forbidden {a} {b} {blk}\n"));
        }
        for &(blk, size) in &self.size_violations {
            out.push_str(&format!("badsize {blk} {size}\n"));
        }
        for v in &self.structure {
            out.push_str(&format!(
                "badstructure {} {} got {} want {}\n",
                v.group, v.hole, v.got, v.want
            ));
        }
        for (name, total, listed) in [
            ("uncovered", self.uncovered_total, self.uncovered.len()),
            ("overcovered", self.overcovered_total, self.overcovered.len()),
            ("forbidden", self.forbidden_total, self.forbidden.len()),
            ("badsize", self.size_total, self.size_violations.len()),
            ("badstructure", self.structure_total, self.structure.len()),
        ] {
            if total > listed as u64 {
                out.push_str(&format!("# {name} total {total} (showing first {listed})\n"));
            }
        }
        if self.overflow {
            out.push_str("# pair counters saturated\n");
        }
        out
    }
}

/// Saturating pair-coverage table for `blocks` on `n` points.
///
/// Splits the block list across workers when it is long; saturating
/// addition is associative and commutative, so the merged table is
/// identical to a single-threaded count.
pub(crate) fn count_coverage(n: u32, blocks: &[Vec<u32>]) -> (Vec<u8>, bool) {
    let len = pair_rank(0, n.max(1)) .max(1);
    let count_into = |table: &mut Vec<u8>, chunk: &[Vec<u32>]| {
        for block in chunk {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let r = pair_rank(a.min(b), a.max(b));
                    table[r] = table[r].saturating_add(1);
                }
            }
        }
    };
    let table = if blocks.len() > PAR_CHUNK {
        blocks
            .par_chunks(PAR_CHUNK)
            .fold(
                || vec![0u8; len],
                |mut table, chunk| {
                    count_into(&mut table, chunk);
                    table
                },
            )
            .reduce(
                || vec![0u8; len],
                |mut left, right| {
                    for (l, r) in left.iter_mut().zip(right) {
                        *l = l.saturating_add(r);
                    }
                    left
                },
            )
    } else {
        let mut table = vec![0u8; len];
        count_into(&mut table, blocks);
        table
    };
    let overflow = table.contains(&SATURATION);
    (table, overflow)
}

/// Pushes onto `list` respecting the cap, always counting the total.
fn record<T>(list: &mut Vec<T>, total: &mut u64, cap: usize, item: T) {
    *total += 1;
    if list.len() < cap {
        list.push(item);
    }
}

/// Shared verification core. `same_cell(a, b)` marks exempt pairs.
fn verify_inner(
    n: u32,
    blocks: &[Vec<u32>],
    k: &BlockSizeSet,
    same_cell: impl Fn(u32, u32) -> bool,
    opts: &ReportOptions,
) -> VerificationReport {
    let mut report = VerificationReport::new(opts.cap);

    for (index, block) in blocks.iter().enumerate() {
        if !k.contains(block.len()) {
            record(
                &mut report.size_violations,
                &mut report.size_total,
                opts.cap,
                (index, block.len()),
            );
        }
    }

    let (table, overflow) = count_coverage(n, blocks);
    report.overflow = overflow;

    // Forbidden pairs carry their covering block, so scan blocks directly.
    for (index, block) in blocks.iter().enumerate() {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                if same_cell(a, b) {
                    record(
                        &mut report.forbidden,
                        &mut report.forbidden_total,
                        opts.cap,
                        ((a, b), index),
                    );
                }
            }
        }
    }

    // Sweep the pair space for coverage defects.
    let mut over_ranks: Vec<usize> = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if same_cell(a, b) {
                continue;
            }
            match table[pair_rank(a, b)] {
                0 => record(
                    &mut report.uncovered,
                    &mut report.uncovered_total,
                    opts.cap,
                    (a, b),
                ),
                1 => {}
                _ => {
                    report.overcovered_total += 1;
                    if over_ranks.len() < opts.cap {
                        over_ranks.push(pair_rank(a, b));
                    }
                }
            }
        }
    }

    // Locate the first two covering blocks for each listed overcovered pair.
    if !over_ranks.is_empty() {
        over_ranks.sort_unstable();
        type Hit = (Option<usize>, Option<usize>, (u32, u32));
        let mut hits: Vec<Hit> = vec![(None, None, (0, 0)); over_ranks.len()];
        for (index, block) in blocks.iter().enumerate() {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let r = pair_rank(a.min(b), a.max(b));
                    if let Ok(slot) = over_ranks.binary_search(&r) {
                        let entry = &mut hits[slot];
                        entry.2 = (a.min(b), a.max(b));
                        if entry.0.is_none() {
                            entry.0 = Some(index);
                        } else if entry.1.is_none() {
                            entry.1 = Some(index);
                        }
                    }
                }
            }
        }
        report.overcovered = hits
            .into_iter()
            .map(|(b1, b2, pair)| (pair, (b1.unwrap_or(0), b2.unwrap_or(0))))
            .collect();
    }

    report.uncovered.sort_unstable();
    report.overcovered.sort_unstable();
    report.forbidden.sort_unstable();
    report.size_violations.sort_unstable();
    report.settle();
    report
}

/// Checks whether `d` is a `K`-GDD: block sizes in `K`, every cross-group
/// pair covered exactly once, no same-group pair in any block.
pub fn verify_gdd(d: &Design, k: &BlockSizeSet) -> VerificationReport {
    verify_gdd_with(d, k, &ReportOptions::default())
}

pub fn verify_gdd_with(d: &Design, k: &BlockSizeSet, opts: &ReportOptions) -> VerificationReport {
    let group_of = d.group_of_points();
    verify_inner(
        d.n_points(),
        d.blocks(),
        k,
        |a, b| group_of[a as usize] == group_of[b as usize],
        opts,
    )
}

/// Checks whether `dd` is a `K`-DGDD of well-formed type: block sizes in
/// `K`, no block meets a group or hole twice, every pair in distinct
/// groups and distinct holes covered exactly once, and every group of
/// size `g` meets every one of the `w` holes in exactly `g/w` points.
pub fn verify_dgdd(dd: &DoubleDesign, k: &BlockSizeSet) -> VerificationReport {
    verify_dgdd_with(dd, k, &ReportOptions::default())
}

pub fn verify_dgdd_with(
    dd: &DoubleDesign,
    k: &BlockSizeSet,
    opts: &ReportOptions,
) -> VerificationReport {
    let d = dd.base();
    let group_of = d.group_of_points();
    let hole_of = dd.hole_of_points();
    let mut report = verify_inner(
        d.n_points(),
        d.blocks(),
        k,
        |a, b| {
            group_of[a as usize] == group_of[b as usize]
                || hole_of[a as usize] == hole_of[b as usize]
        },
        opts,
    );

    let w = dd.holes().len() as u32;
    for (gi, row) in dd.incidence().iter().enumerate() {
        let want = d.groups()[gi].len() as u32 / w;
        for (hi, &got) in row.iter().enumerate() {
            if got != want || want * w != d.groups()[gi].len() as u32 {
                record(
                    &mut report.structure,
                    &mut report.structure_total,
                    opts.cap,
                    StructureViolation {
                        group: gi,
                        hole: hi,
                        got,
                        want,
                    },
                );
            }
        }
    }
    report.settle();
    report
}

/// True when every hole meets every group in exactly one point, i.e. the
/// double design has modified-GDD shape `(g, 1^g)^u`.
pub fn is_mgdd(dd: &DoubleDesign) -> bool {
    dd.incidence()
        .iter()
        .all(|row| row.iter().all(|&c| c == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Design;

    fn tiny_gdd() -> Design {
        // 2x2 grid: groups rows, blocks columns
        Design::new(4, vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]])
            .unwrap()
    }

    #[test]
    fn accepts_grid() {
        let d = tiny_gdd();
        let rep = verify_gdd(&d, &BlockSizeSet::single(2));
        assert!(rep.verdict, "{}", rep.to_text());
    }

    #[test]
    fn flags_missing_block() {
        let d = tiny_gdd();
        let trimmed = Design::new(4, d.groups().to_vec(), d.blocks()[1..].to_vec()).unwrap();
        let rep = verify_gdd(&trimmed, &BlockSizeSet::single(2));
        assert!(!rep.verdict);
        assert_eq!(rep.uncovered_total, 1);
        assert_eq!(rep.uncovered, vec![(0, 2)]);
    }

    #[test]
    fn flags_duplicate_block() {
        let d = tiny_gdd();
        let mut blocks = d.blocks().to_vec();
        blocks.push(blocks[0].clone());
        let doubled = Design::new(4, d.groups().to_vec(), blocks).unwrap();
        let rep = verify_gdd(&doubled, &BlockSizeSet::single(2));
        assert!(!rep.verdict);
        assert_eq!(rep.overcovered_total, 1);
        assert_eq!(rep.overcovered, vec![((0, 2), (0, 1))]);
    }

    #[test]
    fn flags_forbidden_and_size() {
        let d = Design::new(
            4,
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 1, 2], vec![0, 3], vec![1, 3], vec![1, 2]],
        )
        .unwrap();
        let rep = verify_gdd(&d, &BlockSizeSet::single(2));
        assert!(!rep.verdict);
        assert_eq!(rep.size_violations, vec![(0, 3)]);
        assert_eq!(rep.forbidden, vec![((0, 1), 0)]);
    }

    #[test]
    fn report_text_shape() {
        let d = tiny_gdd();
        let rep = verify_gdd(&d, &BlockSizeSet::single(2));
        assert_eq!(rep.to_text(), "verdict PASS\n");
        let trimmed = Design::new(4, d.groups().to_vec(), d.blocks()[..3].to_vec()).unwrap();
        let rep = verify_gdd(&trimmed, &BlockSizeSet::single(2));
        assert_eq!(rep.to_text(), "verdict FAIL\nuncovered 1 3\n");
    }

    #[test]
    fn cap_keeps_totals_exact() {
        // no blocks at all: every cross pair of 1^20 is uncovered
        let d = Design::new(20, (0..20).map(|p| vec![p]).collect(), vec![vec![0, 1]]).unwrap();
        let rep = verify_gdd_with(&d, &BlockSizeSet::single(2), &ReportOptions { cap: 5 });
        assert_eq!(rep.uncovered.len(), 5);
        assert_eq!(rep.uncovered_total, 190 - 1);
        assert!(rep.to_text().contains("# uncovered total 189 (showing first 5)"));
    }

    #[test]
    fn dgdd_structure_check() {
        // groups == holes: coverage is fine but the shape is degenerate
        let d = tiny_gdd();
        let dd = DoubleDesign::new(d.clone(), d.groups().to_vec()).unwrap();
        let rep = verify_dgdd(&dd, &BlockSizeSet::single(2));
        assert!(!rep.verdict);
        assert!(rep.structure_total > 0);
        assert_eq!(rep.uncovered_total, 0);
        assert!(!is_mgdd(&dd));
    }

    #[test]
    fn parallel_count_matches_sequential() {
        // enough synthetic blocks to engage the chunked path, including
        // saturating counters; the tables must agree bit for bit
        let n = 20u32;
        let mut blocks = Vec::new();
        let mut state = 11u64;
        for _ in 0..3 * PAR_CHUNK {
            let mut block: Vec<u32> = (0..4)
                .map(|_| {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    ((state >> 33) % u64::from(n)) as u32
                })
                .collect();
            block.sort_unstable();
            block.dedup();
            if block.len() >= 2 {
                blocks.push(block);
            }
        }
        let (par_table, par_overflow) = count_coverage(n, &blocks);
        // independent sequential count
        let mut seq = vec![0u8; pair_rank(0, n)];
        for block in &blocks {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let r = pair_rank(a.min(b), a.max(b));
                    seq[r] = seq[r].saturating_add(1);
                }
            }
        }
        assert_eq!(par_table, seq);
        assert!(par_overflow, "3 * PAR_CHUNK blocks on 20 points saturate");
    }

    #[test]
    fn mgdd_grid_detection() {
        let d = tiny_gdd();
        // holes = columns meet each row-group once
        let dd = DoubleDesign::new(d, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(is_mgdd(&dd));
    }
}
