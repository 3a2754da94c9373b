//! The design data model.
//!
//! A group divisible design lives on points `0..n`, carries a group
//! partition, and a list of blocks. Every constructor and verifier in
//! this crate produces or consumes [`Design`]; [`DoubleDesign`] adds a
//! second partition (the holes) for DGDD / MGDD structure.
//!
//! Values are immutable once built and canonically ordered: groups by
//! (size descending, smallest element), blocks sorted pointwise and the
//! block list lexicographically. Point order inside cells is ascending.
//! This makes equal designs byte-equal when serialized.

use crate::error::DesignError;
use crate::signature::GroupSignature;

/// Validates that `cells` exactly partition `0..n` and sorts each cell.
fn check_partition(n: u32, cells: &mut [Vec<u32>]) -> Result<(), DesignError> {
    let mut seen = vec![0usize; n as usize];
    for cell in cells.iter_mut() {
        if cell.is_empty() {
            return Err(DesignError::EmptyCell);
        }
        cell.sort_unstable();
        for &p in cell.iter() {
            if p >= n {
                return Err(DesignError::PointOutOfRange { point: p, n });
            }
            seen[p as usize] += 1;
        }
    }
    if let Some(p) = seen.iter().position(|&c| c != 1) {
        return Err(DesignError::NotAPartition {
            point: p as u32,
            count: seen[p],
        });
    }
    Ok(())
}

/// A block design on points `0..n_points` with a group partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    n_points: u32,
    groups: Vec<Vec<u32>>,
    blocks: Vec<Vec<u32>>,
    signature: GroupSignature,
}

impl Design {
    /// Build and canonicalize a design.
    ///
    /// Groups must partition `0..n_points` exactly; every block must hold
    /// at least two distinct in-range points. Group and block order carry
    /// no meaning and are normalized here.
    pub fn new(
        n_points: u32,
        mut groups: Vec<Vec<u32>>,
        mut blocks: Vec<Vec<u32>>,
    ) -> Result<Self, DesignError> {
        check_partition(n_points, &mut groups)?;
        groups.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        for (index, block) in blocks.iter_mut().enumerate() {
            if block.len() < 2 {
                return Err(DesignError::BlockTooSmall {
                    index,
                    size: block.len(),
                });
            }
            block.sort_unstable();
            for w in block.windows(2) {
                if w[0] == w[1] {
                    return Err(DesignError::RepeatedPoint {
                        index,
                        point: w[0],
                    });
                }
            }
            if let Some(&p) = block.last() {
                if p >= n_points {
                    return Err(DesignError::PointOutOfRange { point: p, n: n_points });
                }
            }
        }
        blocks.sort();
        let signature = GroupSignature::of_groups(&groups)?;
        Ok(Self {
            n_points,
            groups,
            blocks,
            signature,
        })
    }

    /// The design with a single block over all `k` points, type `1^k`.
    pub fn single_block(k: u32) -> Result<Self, DesignError> {
        let groups = (0..k).map(|p| vec![p]).collect();
        Design::new(k, groups, vec![(0..k).collect()])
    }

    pub fn n_points(&self) -> u32 {
        self.n_points
    }

    pub fn groups(&self) -> &[Vec<u32>] {
        &self.groups
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Canonical multiset of group sizes.
    pub fn signature(&self) -> &GroupSignature {
        &self.signature
    }

    /// Distinct block sizes present, ascending.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    /// Group index of every point, as a flat lookup table.
    pub fn group_of_points(&self) -> Vec<u32> {
        cell_index(self.n_points, &self.groups)
    }

    /// True when every group is a single point (the design is a PBD).
    pub fn is_pbd_form(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }
}

/// Flat cell-index table for a partition.
pub(crate) fn cell_index(n: u32, cells: &[Vec<u32>]) -> Vec<u32> {
    let mut index = vec![0u32; n as usize];
    for (ci, cell) in cells.iter().enumerate() {
        for &p in cell {
            index[p as usize] = ci as u32;
        }
    }
    index
}

/// A design together with a second partition into holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleDesign {
    base: Design,
    holes: Vec<Vec<u32>>,
}

impl DoubleDesign {
    /// Attach a hole partition to a design.
    ///
    /// Holes must partition the same point set. Hole order is kept as
    /// given: constructors label holes meaningfully (see
    /// [`crate::construct::mgdd_from_td`]).
    pub fn new(base: Design, mut holes: Vec<Vec<u32>>) -> Result<Self, DesignError> {
        check_partition(base.n_points(), &mut holes)?;
        Ok(Self { base, holes })
    }

    pub fn base(&self) -> &Design {
        &self.base
    }

    pub fn holes(&self) -> &[Vec<u32>] {
        &self.holes
    }

    pub fn hole_of_points(&self) -> Vec<u32> {
        cell_index(self.base.n_points(), &self.holes)
    }

    /// Hole-slice sizes per group: `intersections[g][h]`.
    pub fn incidence(&self) -> Vec<Vec<u32>> {
        let hole_of = self.hole_of_points();
        let mut table = vec![vec![0u32; self.holes.len()]; self.base.groups().len()];
        for (gi, cell) in self.base.groups().iter().enumerate() {
            for &p in cell {
                table[gi][hole_of[p as usize] as usize] += 1;
            }
        }
        table
    }
}

/// A non-empty set of permitted block sizes, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSizeSet(Vec<usize>);

impl BlockSizeSet {
    pub fn new(sizes: impl IntoIterator<Item = usize>) -> Option<Self> {
        let mut v: Vec<usize> = sizes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() || v[0] < 2 {
            return None;
        }
        Some(Self(v))
    }

    /// Just `{k}`.
    pub fn single(k: usize) -> Self {
        Self::new([k]).expect("k >= 2")
    }

    /// The block sizes present in a design.
    pub fn of_design(d: &Design) -> Option<Self> {
        Self::new(d.block_sizes())
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for BlockSizeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.0
                .iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Necessary arithmetic conditions for a `k`-GDD of type `g^u`.
///
/// `u >= k`, `g(u-1) = 0 (mod k-1)` and `g^2 u(u-1) = 0 (mod k(k-1))`.
pub fn admissible(k: u32, g: u32, u: u32) -> bool {
    debug_assert!(k >= 2);
    let (k, g, u) = (u128::from(k), u128::from(g), u128::from(u));
    u >= k && (g * (u - 1)) % (k - 1) == 0 && (g * g * u * (u - 1)) % (k * (k - 1)) == 0
}

/// Canonical multiset of group sizes of a design.
pub fn signature_of(d: &Design) -> GroupSignature {
    d.signature().clone()
}
