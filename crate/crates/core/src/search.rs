//! Stochastic discovery of base block systems.
//!
//! Hill climbing over multisets of transversal base blocks. The cost of a
//! state is the total deviation of pair coverage from the GDD target,
//! summed over pair orbits of the prescribed additive action; zero cost
//! is exactly a verified design. Moves replace one random base block with
//! a fresh random transversal, so a same-group pair can never enter a
//! block and the `forbidden` violation class is structurally impossible.
//!
//! Randomness is a counter-based generator keyed by `(seed, restart,
//! move)`: every move's draws are a pure function of those three numbers,
//! so outcomes are reproducible no matter how restarts are scheduled.

use crate::design::BlockSizeSet;
use crate::error::SearchError;
use crate::orbit::{BaseBlockSystem, GroupRule, Region};
use crate::signature::GroupSignature;
use crate::verify::verify_gdd;

/// Moves without strict improvement before a restart, per state block.
const PLATEAU_FACTOR: u64 = 50;

/// A search target plus the knobs of the climb.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub signature: GroupSignature,
    /// Block size.
    pub k: usize,
    /// Point regions carrying the additive action; `None` lays groups out
    /// consecutively with a trivial action.
    pub regions: Option<Vec<Region>>,
    /// Orbit count per base block; 1 means no action.
    pub j_max: u32,
    /// Total move budget across all restarts.
    pub budget: u64,
    pub seed: u64,
    /// Maximum number of restarts.
    pub restarts: u32,
}

impl SearchProblem {
    /// A problem over the trivial action: every block is its own orbit.
    pub fn plain(signature: GroupSignature, k: usize, budget: u64, seed: u64, restarts: u32) -> Self {
        Self {
            signature,
            k,
            regions: None,
            j_max: 1,
            budget,
            seed,
            restarts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Exhausted,
}

/// Where the climb ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchTrace {
    /// Cost of the best state seen.
    pub final_cost: u64,
    pub moves_used: u64,
    /// Restart in which the search stopped.
    pub restart_index: u32,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// Present exactly when `status == Found`; its expansion verifies.
    pub system: Option<BaseBlockSystem>,
    pub trace: SearchTrace,
}

// ---------------------------------------------------------------------------
// Counter-based RNG
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-move stream: a pure function of (seed, restart, move index).
struct MoveRng(u64);

impl MoveRng {
    fn new(seed: u64, restart: u64, mv: u64) -> Self {
        MoveRng(mix(mix(mix(seed) ^ restart) ^ mv))
    }

    fn next(&mut self) -> u64 {
        self.0 = mix(self.0);
        self.0
    }

    fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next() % n
    }
}

// ---------------------------------------------------------------------------
// Problem setup
// ---------------------------------------------------------------------------

struct Setup {
    system: BaseBlockSystem,
    groups: Vec<Vec<u32>>,
    group_of: Vec<u32>,
    /// Orbit id per pair rank; same-group pairs hold `NONE`.
    orbit_of: Vec<u32>,
    orbit_size: Vec<u32>,
    /// One representative pair per orbit.
    orbit_rep: Vec<(u32, u32)>,
    n_base: usize,
}

const NONE: u32 = u32::MAX;

fn pair_rank(a: u32, b: u32) -> usize {
    (b as usize * (b as usize - 1)) / 2 + a as usize
}

fn build_setup(problem: &SearchProblem) -> Result<Setup, SearchError> {
    let regions = problem.regions.clone().unwrap_or_else(|| {
        // consecutive groups, largest first, trivial action
        let mut regions = Vec::new();
        let mut offset = 0;
        for &(size, count) in problem.signature.parts() {
            for _ in 0..count {
                regions.push(Region {
                    offset,
                    length: size,
                    step: 1,
                    rule: GroupRule::Whole,
                });
                offset += size;
            }
        }
        regions
    });
    let system = BaseBlockSystem {
        name: problem.signature.to_string(),
        signature: problem.signature.clone(),
        regions,
        j_max: problem.j_max,
        overrides: Vec::new(),
        base_blocks: Vec::new(),
    };
    system.validate()?;

    let n = system.n_points();
    let groups = system.derive_groups();
    if (groups.len() as u64) < problem.k as u64 {
        return Err(SearchError::TooFewGroups {
            k: problem.k,
            groups: groups.len() as u64,
        });
    }
    let group_of = crate::design::cell_index(n, &groups);

    // pair orbits under the action generated by shift 1; with a single
    // orbit per block (j_max = 1) the action is the identity and every
    // cross pair is its own orbit
    let mut orbit_of = vec![NONE; pair_rank(0, n.max(1)).max(1)];
    let mut orbit_size = Vec::new();
    let mut orbit_rep = Vec::new();
    for b in 1..n {
        for a in 0..b {
            if group_of[a as usize] == group_of[b as usize] {
                continue;
            }
            let rank = pair_rank(a, b);
            if orbit_of[rank] != NONE {
                continue;
            }
            let id = orbit_size.len() as u32;
            orbit_rep.push((a, b));
            if problem.j_max == 1 {
                orbit_of[rank] = id;
                orbit_size.push(1);
                continue;
            }
            let (mut x, mut y) = (a, b);
            let mut size = 0u32;
            loop {
                orbit_of[pair_rank(x.min(y), x.max(y))] = id;
                size += 1;
                x = system.map_point(1, x).expect("in range");
                y = system.map_point(1, y).expect("in range");
                if (x.min(y), x.max(y)) == (a, b) {
                    break;
                }
            }
            if !problem.j_max.is_multiple_of(size) {
                return Err(SearchError::IndivisibleOrbit {
                    orbit: size,
                    j_max: problem.j_max,
                });
            }
            orbit_size.push(size);
        }
    }

    let pairs_per_block = (problem.k * (problem.k - 1) / 2) as u64;
    let target_blocks = problem.signature.cross_pairs() / pairs_per_block;
    let exact = problem.signature.cross_pairs().is_multiple_of(pairs_per_block)
        && target_blocks.is_multiple_of(u64::from(problem.j_max));
    if !exact {
        return Err(SearchError::InfeasibleOrbit {
            blocks: target_blocks,
            j_max: problem.j_max,
        });
    }

    Ok(Setup {
        system,
        groups,
        group_of,
        orbit_of,
        orbit_size,
        orbit_rep,
        n_base: (target_blocks / u64::from(problem.j_max)) as usize,
    })
}

// ---------------------------------------------------------------------------
// The climb
// ---------------------------------------------------------------------------

struct State<'s> {
    setup: &'s Setup,
    j_max: u32,
    blocks: Vec<Vec<u32>>,
    /// Per-element coverage of each pair orbit.
    coverage: Vec<u64>,
    /// Orbits at coverage zero, with their positions, for repair moves.
    uncovered: Vec<u32>,
    uncovered_pos: Vec<u32>,
    cost: u64,
}

impl<'s> State<'s> {
    fn new(setup: &'s Setup, j_max: u32) -> Self {
        let coverage = vec![0u64; setup.orbit_size.len()];
        let cost = setup
            .orbit_size
            .iter()
            .map(|&s| u64::from(s)) // every orbit starts uncovered
            .sum();
        let uncovered: Vec<u32> = (0..setup.orbit_size.len() as u32).collect();
        let uncovered_pos = uncovered.clone();
        Self {
            setup,
            j_max,
            blocks: Vec::new(),
            coverage,
            uncovered,
            uncovered_pos,
            cost,
        }
    }

    /// Apply `delta` (+1 on insert, -1 on removal) for one block's pairs.
    fn bump(&mut self, block: &[u32], delta: i64) {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                let rank = pair_rank(a.min(b), a.max(b));
                let orbit = self.setup.orbit_of[rank];
                debug_assert_ne!(orbit, NONE, "move produced a same-group pair");
                let o = orbit as usize;
                let weight = u64::from(self.j_max / self.setup.orbit_size[o]);
                let size = u64::from(self.setup.orbit_size[o]);
                let old = self.coverage[o];
                let new = old.checked_add_signed(delta * weight as i64).expect("coverage");
                self.coverage[o] = new;
                self.cost -= size * old.abs_diff(1);
                self.cost += size * new.abs_diff(1);
                if old == 0 && new != 0 {
                    // swap-remove from the uncovered set
                    let pos = self.uncovered_pos[o] as usize;
                    let last = *self.uncovered.last().expect("o is present");
                    self.uncovered.swap_remove(pos);
                    if pos < self.uncovered.len() {
                        self.uncovered[pos] = last;
                        self.uncovered_pos[last as usize] = pos as u32;
                    }
                    self.uncovered_pos[o] = NONE;
                } else if old != 0 && new == 0 {
                    self.uncovered_pos[o] = self.uncovered.len() as u32;
                    self.uncovered.push(o as u32);
                }
            }
        }
    }

    /// A random transversal block. While orbits remain uncovered, the
    /// block is seeded with representative pairs of random uncovered
    /// orbits (group-disjoint ones, as many as fit), which steers the
    /// walk toward missing coverage.
    fn random_block(&self, rng: &mut MoveRng, k: usize) -> Vec<u32> {
        let mut block: Vec<u32> = Vec::with_capacity(k);
        let mut used: Vec<usize> = Vec::with_capacity(k);
        if !self.uncovered.is_empty() {
            let tries = (k / 2).min(self.uncovered.len());
            for _ in 0..tries {
                if block.len() + 2 > k {
                    break;
                }
                let o = self.uncovered[rng.below(self.uncovered.len() as u64) as usize];
                let (a, b) = self.setup.orbit_rep[o as usize];
                let (ga, gb) = (
                    self.setup.group_of[a as usize] as usize,
                    self.setup.group_of[b as usize] as usize,
                );
                if used.contains(&ga) || used.contains(&gb) {
                    continue;
                }
                block.extend([a, b]);
                used.extend([ga, gb]);
            }
        }
        // partial Fisher-Yates over the remaining group indices; each
        // filler slot takes the better of two random candidates, judged
        // by how much fresh overcoverage it would create
        let mut ids: Vec<usize> = (0..self.setup.groups.len())
            .filter(|gi| !used.contains(gi))
            .collect();
        for _ in block.len()..k {
            let j = rng.below(ids.len() as u64) as usize;
            let gi = ids.swap_remove(j);
            let cell = &self.setup.groups[gi];
            let first = cell[rng.below(cell.len() as u64) as usize];
            let second = cell[rng.below(cell.len() as u64) as usize];
            let collisions = |p: u32| -> u64 {
                block
                    .iter()
                    .map(|&q| {
                        let o = self.setup.orbit_of[pair_rank(p.min(q), p.max(q))] as usize;
                        self.coverage[o]
                    })
                    .sum()
            };
            block.push(if collisions(second) < collisions(first) {
                second
            } else {
                first
            });
        }
        block.sort_unstable();
        block
    }
}

/// Cost of a given base-block multiset under a problem's action: total
/// deviation of pair coverage from the GDD target. Zero exactly when the
/// expansion verifies. Blocks must be transversal to the groups.
pub fn evaluate_cost(problem: &SearchProblem, blocks: &[Vec<u32>]) -> Result<u64, SearchError> {
    let setup = build_setup(problem)?;
    for (i, block) in blocks.iter().enumerate() {
        for (j, &a) in block.iter().enumerate() {
            for &b in &block[j + 1..] {
                if setup.group_of[a as usize] == setup.group_of[b as usize] {
                    return Err(SearchError::NotTransversal(i));
                }
            }
        }
    }
    let mut state = State::new(&setup, problem.j_max);
    for block in blocks {
        state.bump(block, 1);
    }
    Ok(state.cost)
}

/// Run the climb. See the module docs for the move and restart rules.
pub fn search(problem: &SearchProblem) -> Result<SearchOutcome, SearchError> {
    let setup = build_setup(problem)?;
    let k = problem.k;
    let plateau_limit = PLATEAU_FACTOR * setup.n_base as u64;

    let mut moves_used = 0u64;
    let mut best_cost = u64::MAX;
    let mut outcome: Option<(u32, Vec<Vec<u32>>)> = None;
    let mut last_restart = 0;

    'restarts: for restart in 0..problem.restarts {
        last_restart = restart;
        let mut state = State::new(&setup, problem.j_max);
        let mut rng = MoveRng::new(problem.seed, u64::from(restart), 0);
        for _ in 0..setup.n_base {
            let block = state.random_block(&mut rng, k);
            state.bump(&block, 1);
            state.blocks.push(block);
        }
        best_cost = best_cost.min(state.cost);
        let mut since_improvement = 0u64;
        let mut mv = 0u64;
        while state.cost != 0 {
            if moves_used == problem.budget {
                break 'restarts;
            }
            mv += 1;
            moves_used += 1;
            let mut rng = MoveRng::new(problem.seed, u64::from(restart), mv);
            let index = rng.below(state.blocks.len() as u64) as usize;
            let candidate = state.random_block(&mut rng, k);
            let old_cost = state.cost;
            let previous = std::mem::replace(&mut state.blocks[index], candidate.clone());
            state.bump(&previous, -1);
            state.bump(&candidate, 1);
            let accept = state.cost < old_cost || (state.cost == old_cost && rng.next() & 1 == 0);
            if !accept {
                state.bump(&candidate, -1);
                state.bump(&previous, 1);
                state.blocks[index] = previous;
            }
            if state.cost < best_cost {
                best_cost = state.cost;
            }
            if state.cost < old_cost {
                since_improvement = 0;
            } else {
                since_improvement += 1;
                if since_improvement >= plateau_limit {
                    continue 'restarts;
                }
            }
        }
        if state.cost == 0 {
            outcome = Some((restart, state.blocks));
            break;
        }
    }

    match outcome {
        Some((restart, blocks)) => {
            let mut system = setup.system.clone();
            system.base_blocks = blocks;
            let design = system.expand()?;
            let report = verify_gdd(&design, &BlockSizeSet::single(k));
            if !report.verdict {
                return Err(SearchError::VerificationMismatch);
            }
            Ok(SearchOutcome {
                status: SearchStatus::Found,
                system: Some(system),
                trace: SearchTrace {
                    final_cost: 0,
                    moves_used,
                    restart_index: restart,
                },
            })
        }
        None => Ok(SearchOutcome {
            status: SearchStatus::Exhausted,
            system: None,
            trace: SearchTrace {
                final_cost: best_cost,
                moves_used,
                restart_index: last_restart,
            },
        }),
    }
}
