//! Construction operators.
//!
//! Each operator takes verified designs in and produces a design out;
//! the verifier is the contract. Operators re-verify their inputs (cheap
//! next to the outputs they build) and return typed errors instead of
//! trusting the caller, because a composition chain is only as good as
//! its weakest ingredient.

use std::collections::BTreeMap;

use crate::design::{BlockSizeSet, Design, DoubleDesign};
use crate::error::ConstructError;
use crate::gf::{gf, FiniteField};
use crate::signature::GroupSignature;
use crate::verify::{is_mgdd, verify_dgdd, verify_gdd};

/// Default node budget for the exhaustive parallel-class search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

fn ensure_gdd(d: &Design, k: &BlockSizeSet, kind: &'static str) -> Result<(), ConstructError> {
    let report = verify_gdd(d, k);
    if !report.verdict {
        return Err(ConstructError::NotVerified {
            kind,
            detail: report.to_text().lines().skip(1).take(1).collect::<String>(),
        });
    }
    Ok(())
}

fn ensure_any_gdd(d: &Design, kind: &'static str) -> Result<BlockSizeSet, ConstructError> {
    let k = BlockSizeSet::of_design(d).ok_or(ConstructError::NotVerified {
        kind,
        detail: "design has no blocks".into(),
    })?;
    ensure_gdd(d, &k, kind)?;
    Ok(k)
}

/// Transversal design TD(k, q): a `k`-GDD of type `q^k`.
///
/// Points are `(column i, field value x) -> i*q + x` with columns as
/// groups. For `k <= q` the block through `(a, b)` holds `a + m_i * b` in
/// column `i`, where `m_0, m_1, ...` are the field elements in encoding
/// order; `k = q + 1` appends the completion column holding `b` itself.
/// Always `q^2` blocks.
pub fn td(k: usize, q: u32) -> Result<Design, ConstructError> {
    let field = gf(q)?;
    if k > q as usize + 1 {
        return Err(ConstructError::KTooLarge { k, q, max: q + 1 });
    }
    if k < 2 {
        return Err(ConstructError::NotVerified {
            kind: "transversal design",
            detail: format!("k = {k} is below 2"),
        });
    }
    let cols = k.min(q as usize);
    let mut blocks = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            let mut block: Vec<u32> = (0..cols as u32)
                .map(|i| i * q + field.add(a, field.mul(i, b)))
                .collect();
            if k == q as usize + 1 {
                block.push(q * q + b);
            }
            blocks.push(block);
        }
    }
    let groups = (0..k as u32)
        .map(|i| (i * q..(i + 1) * q).collect())
        .collect();
    Ok(Design::new(k as u32 * q, groups, blocks)?)
}

/// The projective plane of order `q` as a `(q^2+q+1, {q+1}, 1)`-PBD.
///
/// Points are the 1-dimensional subspaces of GF(q)^3, blocks the
/// 2-dimensional ones, met by the usual dot-product incidence.
pub fn projective_plane_pbd(q: u32) -> Result<Design, ConstructError> {
    let field = gf(q)?;
    let reps = normalized_triples(&field);
    let n = reps.len() as u32;
    debug_assert_eq!(n, q * q + q + 1);
    let dot = |u: &[u32; 3], v: &[u32; 3]| -> u32 {
        let mut acc = 0;
        for i in 0..3 {
            acc = field.add(acc, field.mul(u[i], v[i]));
        }
        acc
    };
    let blocks: Vec<Vec<u32>> = reps
        .iter()
        .map(|line| {
            reps.iter()
                .enumerate()
                .filter(|(_, point)| dot(line, point) == 0)
                .map(|(i, _)| i as u32)
                .collect()
        })
        .collect();
    let groups = (0..n).map(|p| vec![p]).collect();
    Ok(Design::new(n, groups, blocks)?)
}

/// Canonical representatives of the projective points: leftmost nonzero
/// coordinate is 1, enumerated in lexicographic order.
fn normalized_triples(field: &FiniteField) -> Vec<[u32; 3]> {
    let q = field.order();
    let mut reps = vec![[0, 0, 1]];
    for z in 0..q {
        reps.push([0, 1, z]);
    }
    for y in 0..q {
        for z in 0..q {
            reps.push([1, y, z]);
        }
    }
    reps
}

/// Exhaustive search for a parallel class, with the default node budget.
pub fn find_parallel_class(d: &Design) -> Result<Option<Vec<usize>>, ConstructError> {
    find_parallel_class_with(d, DEFAULT_NODE_BUDGET)
}

/// Exhaustive backtracking for a set of pairwise-disjoint blocks covering
/// every point. Branches on the smallest uncovered point, trying blocks
/// in index order, so the first class found is deterministic. Returns
/// `None` only after exhausting the space; a `SearchCap` error means the
/// node budget ran out first.
pub fn find_parallel_class_with(
    d: &Design,
    node_budget: u64,
) -> Result<Option<Vec<usize>>, ConstructError> {
    let n = d.n_points() as usize;
    let mut point_blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (bi, block) in d.blocks().iter().enumerate() {
        for &p in block {
            point_blocks[p as usize].push(bi);
        }
    }
    let mut covered = vec![false; n];
    let mut chosen: Vec<usize> = Vec::new();
    let mut nodes = 0u64;

    fn recurse(
        d: &Design,
        point_blocks: &[Vec<usize>],
        covered: &mut [bool],
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<Option<Vec<usize>>, ConstructError> {
        let Some(p) = covered.iter().position(|&c| !c) else {
            return Ok(Some(chosen.clone()));
        };
        for &bi in &point_blocks[p] {
            let block = &d.blocks()[bi];
            if block.iter().any(|&x| covered[x as usize]) {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(ConstructError::SearchCap(budget));
            }
            for &x in block {
                covered[x as usize] = true;
            }
            chosen.push(bi);
            let found = recurse(d, point_blocks, covered, chosen, nodes, budget)?;
            if found.is_some() {
                return Ok(found);
            }
            chosen.pop();
            for &x in block {
                covered[x as usize] = false;
            }
        }
        Ok(None)
    }

    recurse(d, &point_blocks, &mut covered, &mut chosen, &mut nodes, node_budget)
}

/// Turn a transversal design minus a parallel class into a modified GDD.
///
/// The removed blocks become the holes; since each was a transversal, the
/// result is a `k`-DGDD of type `(q, 1^q)^k`, i.e. a `k`-MGDD of type
/// `q^k`. Holes are labelled by their point in the first group.
pub fn mgdd_from_td(d: &Design, pc: &[usize]) -> Result<DoubleDesign, ConstructError> {
    let k = d.groups().len();
    ensure_gdd(d, &BlockSizeSet::single(k), "transversal design")?;
    let mut sorted = pc.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let valid = sorted.len() == pc.len() && sorted.iter().all(|&bi| bi < d.blocks().len());
    if !valid {
        return Err(ConstructError::NotParallelClass(pc.to_vec()));
    }
    let mut covered = vec![false; d.n_points() as usize];
    for &bi in &sorted {
        for &p in &d.blocks()[bi] {
            if covered[p as usize] {
                return Err(ConstructError::NotParallelClass(pc.to_vec()));
            }
            covered[p as usize] = true;
        }
    }
    if !covered.iter().all(|&c| c) {
        return Err(ConstructError::NotParallelClass(pc.to_vec()));
    }

    let mut holes: Vec<Vec<u32>> = sorted.iter().map(|&bi| d.blocks()[bi].clone()).collect();
    let group0 = &d.groups()[0];
    holes.sort_by_key(|hole| {
        hole.iter()
            .find(|p| group0.binary_search(p).is_ok())
            .copied()
    });
    let remaining: Vec<Vec<u32>> = d
        .blocks()
        .iter()
        .enumerate()
        .filter(|(bi, _)| sorted.binary_search(bi).is_err())
        .map(|(_, b)| b.clone())
        .collect();
    let base = Design::new(d.n_points(), d.groups().to_vec(), remaining)?;
    Ok(DoubleDesign::new(base, holes)?)
}

/// Inflate a 5-GDD by a factor of `h`, replacing every block with a copy
/// of a 5-GDD of type `h^5`.
///
/// Point `p` becomes `p*h .. p*h + h`; the ingredient's five groups land
/// on the five inflated points of each block in block order. The type
/// gains a factor of `h` throughout.
pub fn inflate(d: &Design, h: u32, ingredient: &Design) -> Result<Design, ConstructError> {
    ensure_gdd(d, &BlockSizeSet::single(5), "5-GDD")?;
    let want = GroupSignature::uniform(h, 5)?;
    if ingredient.signature() != &want {
        return Err(ConstructError::IngredientMismatch {
            want,
            got: ingredient.signature().clone(),
        });
    }
    ensure_gdd(ingredient, &BlockSizeSet::single(5), "5-GDD ingredient")?;

    // ingredient point -> (group position, rank inside the group)
    let mut slot = vec![(0u32, 0u32); ingredient.n_points() as usize];
    for (gj, cell) in ingredient.groups().iter().enumerate() {
        for (s, &y) in cell.iter().enumerate() {
            slot[y as usize] = (gj as u32, s as u32);
        }
    }

    let mut blocks = Vec::with_capacity(d.blocks().len() * ingredient.blocks().len());
    for block in d.blocks() {
        for ing_block in ingredient.blocks() {
            blocks.push(
                ing_block
                    .iter()
                    .map(|&y| {
                        let (gj, s) = slot[y as usize];
                        block[gj as usize] * h + s
                    })
                    .collect::<Vec<u32>>(),
            );
        }
    }
    let groups = d
        .groups()
        .iter()
        .map(|cell| {
            cell.iter()
                .flat_map(|&p| p * h..(p + 1) * h)
                .collect::<Vec<u32>>()
        })
        .collect();
    Ok(Design::new(d.n_points() * h, groups, blocks)?)
}

/// Modified designs keyed by block size, for the overlay composition.
pub type MgddSet = BTreeMap<usize, DoubleDesign>;
/// Fill designs keyed by group size.
pub type FillSet = BTreeMap<u32, Design>;

fn checked_mgdd(
    mgdds: &MgddSet,
    k: usize,
    w: u32,
) -> Result<&DoubleDesign, ConstructError> {
    let mg = mgdds.get(&k).ok_or(ConstructError::MissingMgdd(k))?;
    let d = mg.base();
    let shape_ok = d.groups().len() == k
        && d.groups().iter().all(|g| g.len() == w as usize)
        && mg.holes().len() == w as usize;
    if !shape_ok || !is_mgdd(mg) {
        return Err(ConstructError::AlignmentError);
    }
    let report = verify_dgdd(mg, &BlockSizeSet::single(5));
    if !report.verdict {
        return Err(ConstructError::NotVerified {
            kind: "5-MGDD",
            detail: report.to_text().lines().skip(1).take(1).collect::<String>(),
        });
    }
    Ok(mg)
}

/// Inflate a `K`-GDD by `w` and overlay every block with a 5-MGDD of type
/// `w^k`, yielding the double design whose holes are the `w` copy slices.
///
/// Point `p` of the master becomes the `w` points `p*w + t`; the MGDD for
/// a block lands so that its group for position `j` and hole `t` covers
/// `(B[j], t)`, which is well defined exactly because every hole meets
/// every group once.
pub fn wilson_intermediate(
    master: &Design,
    w: u32,
    mgdds: &MgddSet,
) -> Result<DoubleDesign, ConstructError> {
    ensure_any_gdd(master, "master K-GDD")?;
    let n = master.n_points();

    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for k in master.block_sizes() {
        let _ = checked_mgdd(mgdds, k, w)?;
    }
    for block in master.blocks() {
        let mg = checked_mgdd(mgdds, block.len(), w)?;
        let group_of = mg.base().group_of_points();
        let hole_of = mg.hole_of_points();
        for mg_block in mg.base().blocks() {
            blocks.push(
                mg_block
                    .iter()
                    .map(|&y| {
                        let j = group_of[y as usize] as usize;
                        let t = hole_of[y as usize];
                        block[j] * w + t
                    })
                    .collect(),
            );
        }
    }

    let groups = master
        .groups()
        .iter()
        .map(|cell| {
            cell.iter()
                .flat_map(|&p| p * w..(p + 1) * w)
                .collect::<Vec<u32>>()
        })
        .collect();
    let holes = (0..w)
        .map(|t| (0..n).map(|p| p * w + t).collect())
        .collect();
    let base = Design::new(n * w, groups, blocks)?;
    Ok(DoubleDesign::new(base, holes)?)
}

/// The overlay composition: inflate a `K`-GDD by `w`, replace blocks with
/// 5-MGDDs of type `w^k`, then fill each inflated group with a 5-GDD of
/// type `g_i^w` aligned with the copy slices. The slices become the
/// groups of the result, a 5-GDD of type `(sum u_i g_i)^w`.
pub fn wilson_compose(
    master: &Design,
    w: u32,
    mgdds: &MgddSet,
    fills: &FillSet,
) -> Result<Design, ConstructError> {
    let intermediate = wilson_intermediate(master, w, mgdds)?;
    let n = master.n_points();
    let mut blocks = intermediate.base().blocks().to_vec();

    for cell in master.groups() {
        let g = cell.len() as u32;
        let fill = fills.get(&g).ok_or(ConstructError::MissingFill(g as usize))?;
        let want = GroupSignature::uniform(g, w)?;
        if fill.signature() != &want {
            return Err(ConstructError::IngredientMismatch {
                want,
                got: fill.signature().clone(),
            });
        }
        ensure_gdd(fill, &BlockSizeSet::single(5), "5-GDD fill")?;
        // fill group t lies on slice t of this master group
        let mut target = vec![0u32; fill.n_points() as usize];
        for (t, fill_group) in fill.groups().iter().enumerate() {
            for (s, &y) in fill_group.iter().enumerate() {
                target[y as usize] = cell[s] * w + t as u32;
            }
        }
        for fill_block in fill.blocks() {
            blocks.push(fill_block.iter().map(|&y| target[y as usize]).collect());
        }
    }

    let groups = (0..w)
        .map(|t| (0..n).map(|p| p * w + t).collect())
        .collect();
    Ok(Design::new(n * w, groups, blocks)?)
}

/// Overlay every group of a 5-GDD (plus `extras` adjoined points) with a
/// fill design, keyed by group index.
///
/// The adjoined points take the top indices and must appear as a literal
/// group of every fill; they form one group of the result, the other
/// result groups are the fills' remaining groups.
pub fn fill_groups(
    master: &Design,
    extras: u32,
    fills: &BTreeMap<usize, Design>,
) -> Result<Design, ConstructError> {
    ensure_any_gdd(master, "master 5-GDD")?;
    let n = master.n_points();
    let mut blocks = master.blocks().to_vec();
    let mut groups: Vec<Vec<u32>> = Vec::new();

    for (gi, cell) in master.groups().iter().enumerate() {
        let g = cell.len() as u32;
        let fill = fills.get(&gi).ok_or(ConstructError::MissingFill(gi))?;
        if fill.n_points() != g + extras {
            return Err(ConstructError::FillSizeMismatch {
                group: gi,
                got: fill.n_points(),
                want: g + extras,
            });
        }
        ensure_gdd(fill, &BlockSizeSet::single(5), "5-GDD fill")?;
        let map = |y: u32| -> u32 {
            if y < g {
                cell[y as usize]
            } else {
                n + (y - g)
            }
        };
        if extras > 0 {
            let extras_cell: Vec<u32> = (g..g + extras).collect();
            if !fill.groups().contains(&extras_cell) {
                return Err(ConstructError::ExtrasNotAGroup { group: gi });
            }
        }
        for fg in fill.groups() {
            if extras > 0 && fg[0] >= g {
                continue; // the extras group is shared, added once below
            }
            groups.push(fg.iter().map(|&y| map(y)).collect());
        }
        for fb in fill.blocks() {
            blocks.push(fb.iter().map(|&y| map(y)).collect());
        }
    }
    if extras > 0 {
        groups.push((n..n + extras).collect());
    }
    Ok(Design::new(n + extras, groups, blocks)?)
}

/// Append every group as a block, turning a GDD into PBD form `1^N`.
pub fn add_groups_as_blocks(d: &Design) -> Result<Design, ConstructError> {
    ensure_any_gdd(d, "GDD")?;
    if let Some(gi) = d.groups().iter().position(|g| g.len() < 2) {
        return Err(ConstructError::GroupTooSmall(gi));
    }
    let mut blocks = d.blocks().to_vec();
    blocks.extend(d.groups().iter().cloned());
    let groups = (0..d.n_points()).map(|p| vec![p]).collect();
    Ok(Design::new(d.n_points(), groups, blocks)?)
}

/// Remove a point from a PBD; the blocks through it become the groups.
pub fn delete_point(d: &Design, p: u32) -> Result<Design, ConstructError> {
    if !d.is_pbd_form() {
        return Err(ConstructError::NotVerified {
            kind: "pairwise balanced design",
            detail: format!("groups are not singletons ({})", d.signature()),
        });
    }
    ensure_any_gdd(d, "pairwise balanced design")?;
    if p >= d.n_points() {
        return Err(ConstructError::PointOutOfRange {
            point: p,
            n: d.n_points(),
        });
    }
    let renumber = |x: u32| if x < p { x } else { x - 1 };
    let mut groups = Vec::new();
    let mut blocks = Vec::new();
    for block in d.blocks() {
        if block.binary_search(&p).is_ok() {
            groups.push(
                block
                    .iter()
                    .filter(|&&x| x != p)
                    .map(|&x| renumber(x))
                    .collect::<Vec<u32>>(),
            );
        } else {
            blocks.push(block.iter().map(|&x| renumber(x)).collect::<Vec<u32>>());
        }
    }
    Ok(Design::new(d.n_points() - 1, groups, blocks)?)
}
