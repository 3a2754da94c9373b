//! Base block systems and orbit expansion.
//!
//! A base block system compresses a design to a handful of blocks plus an
//! additive mapping. The point set splits into contiguous regions; shift
//! `j` moves a point `x` of a region to
//!
//! ```text
//! phi_j(x) = offset + ((x - offset + step * j) mod length)
//! ```
//!
//! so regions with different lengths and steps advance together under one
//! counter. Expanding a system applies `phi_j` for `j = 0 .. J` to every
//! base block, where `J` is the system-wide orbit count unless a per-block
//! override says otherwise (short orbits). Emitting the same block twice
//! is a hard error rather than a dedup: a wrong orbit limit means the
//! system was transcribed wrongly, and silence would hide that.

use std::fmt::Write as _;

use crate::design::Design;
use crate::error::OrbitError;
use crate::signature::GroupSignature;

/// How a region's points split into groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupRule {
    /// Residue classes of `x - offset` modulo `u`; `u` divides the length.
    Mod(u32),
    /// The whole region is one group.
    Whole,
}

/// A contiguous run of points sharing one additive step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub offset: u32,
    pub length: u32,
    pub step: u32,
    pub rule: GroupRule,
}

impl Region {
    fn contains(&self, x: u32) -> bool {
        x >= self.offset && x < self.offset + self.length
    }

    fn map(&self, j: u32, x: u32) -> u32 {
        let rel = u64::from(x - self.offset);
        let shift = u64::from(self.step) * u64::from(j);
        self.offset + ((rel + shift) % u64::from(self.length)) as u32
    }
}

/// Base blocks plus the additive mapping that generates a full design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBlockSystem {
    pub name: String,
    pub signature: GroupSignature,
    pub regions: Vec<Region>,
    /// Default orbit count per base block.
    pub j_max: u32,
    /// `(first, last, j_max)` with 1-based inclusive block positions.
    pub overrides: Vec<(usize, usize, u32)>,
    pub base_blocks: Vec<Vec<u32>>,
}

impl BaseBlockSystem {
    /// Validate the region layout, block ranges and override ranges.
    pub fn validate(&self) -> Result<(), OrbitError> {
        if self.regions.is_empty() {
            return Err(OrbitError::Constraint("no regions".into()));
        }
        let mut expected = 0u32;
        for r in &self.regions {
            if r.offset != expected {
                return Err(OrbitError::Constraint(format!(
                    "region at offset {} breaks contiguity (expected {})",
                    r.offset, expected
                )));
            }
            if r.length == 0 {
                return Err(OrbitError::Constraint("zero-length region".into()));
            }
            if let GroupRule::Mod(u) = r.rule {
                if u == 0 || r.length % u != 0 {
                    return Err(OrbitError::Constraint(format!(
                        "group rule mod {} does not divide region length {}",
                        u, r.length
                    )));
                }
            }
            expected += r.length;
        }
        let n = expected;
        if self.j_max == 0 {
            return Err(OrbitError::Constraint("orbit count must be positive".into()));
        }
        for (block, points) in self.base_blocks.iter().enumerate() {
            if points.len() < 2 {
                return Err(OrbitError::Constraint(format!(
                    "base block {block} has fewer than 2 points"
                )));
            }
            let mut sorted = points.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != points.len() {
                return Err(OrbitError::Constraint(format!(
                    "base block {block} repeats a point"
                )));
            }
            for &p in points {
                if p >= n {
                    return Err(OrbitError::PointOutOfRegion { block, point: p, n });
                }
            }
        }
        for &(first, last, j) in &self.overrides {
            if first == 0 || last < first || last > self.base_blocks.len() {
                return Err(OrbitError::Constraint(format!(
                    "override range {first}..{last} outside 1..{}",
                    self.base_blocks.len()
                )));
            }
            if j == 0 || j > self.j_max {
                return Err(OrbitError::Constraint(format!(
                    "override orbit count {j} outside 1..{}",
                    self.j_max
                )));
            }
        }
        let derived = GroupSignature::of_groups(&self.derive_groups())?;
        if derived != self.signature {
            return Err(OrbitError::SignatureMismatch {
                declared: self.signature.clone(),
                derived,
            });
        }
        Ok(())
    }

    /// Total points covered by the regions.
    pub fn n_points(&self) -> u32 {
        self.regions.iter().map(|r| r.length).sum()
    }

    /// The image of point `x` under shift `j`.
    pub fn map_point(&self, j: u32, x: u32) -> Result<u32, OrbitError> {
        self.regions
            .iter()
            .find(|r| r.contains(x))
            .map(|r| r.map(j, x))
            .ok_or(OrbitError::PointOutOfRegion {
                block: usize::MAX,
                point: x,
                n: self.n_points(),
            })
    }

    /// Group cells induced by the region rules.
    pub fn derive_groups(&self) -> Vec<Vec<u32>> {
        let mut groups = Vec::new();
        for r in &self.regions {
            match r.rule {
                GroupRule::Whole => {
                    groups.push((r.offset..r.offset + r.length).collect());
                }
                GroupRule::Mod(u) => {
                    for residue in 0..u {
                        groups.push(
                            (0..r.length / u)
                                .map(|i| r.offset + residue + i * u)
                                .collect(),
                        );
                    }
                }
            }
        }
        groups
    }

    /// Orbit limit for the base block at 0-based position `index`.
    pub fn orbit_limit(&self, index: usize) -> u32 {
        for &(first, last, j) in &self.overrides {
            if index + 1 >= first && index < last {
                return j;
            }
        }
        self.j_max
    }

    /// Expand the system into a full design.
    ///
    /// Emits `orbit_limit(b)` images of every base block `b`, derives the
    /// groups from the region rules, and fails on any duplicate emitted
    /// block or a signature mismatch.
    pub fn expand(&self) -> Result<Design, OrbitError> {
        self.validate()?;
        let n = self.n_points();
        let mut emitted: Vec<(Vec<u32>, usize, u32)> = Vec::new();
        for (bi, base) in self.base_blocks.iter().enumerate() {
            let region_of: Vec<&Region> = base
                .iter()
                .map(|&p| self.regions.iter().find(|r| r.contains(p)).expect("validated"))
                .collect();
            for j in 0..self.orbit_limit(bi) {
                let mut block: Vec<u32> = base
                    .iter()
                    .zip(&region_of)
                    .map(|(&p, r)| r.map(j, p))
                    .collect();
                block.sort_unstable();
                emitted.push((block, bi, j));
            }
        }
        emitted.sort();
        for pair in emitted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(OrbitError::DuplicateBlock {
                    block: pair[0].0.clone(),
                    first_base: pair[0].1,
                    first_shift: pair[0].2,
                    second_base: pair[1].1,
                    second_shift: pair[1].2,
                });
            }
        }
        let blocks: Vec<Vec<u32>> = emitted.into_iter().map(|(b, _, _)| b).collect();
        let design = Design::new(n, self.derive_groups(), blocks)?;
        if design.signature() != &self.signature {
            return Err(OrbitError::SignatureMismatch {
                declared: self.signature.clone(),
                derived: design.signature().clone(),
            });
        }
        Ok(design)
    }
}

/// Expand a base block system into a full design.
pub fn expand(system: &BaseBlockSystem) -> Result<Design, OrbitError> {
    system.expand()
}

fn parse_err(line: usize, column: usize, msg: impl Into<String>) -> OrbitError {
    OrbitError::Parse {
        line,
        column,
        msg: msg.into(),
    }
}

/// Parse catalog text into base block systems.
///
/// Grammar, one statement per line, `#` starts a comment:
///
/// ```text
/// entry "<name>" type <signature>
/// region <offset> <length> step <m> groups mod <u>|whole
/// orbits <J>
/// orbit <J> blocks <a>..<b>     (optional overrides, 1-based inclusive)
/// block <p1> <p2> ...
/// end
/// ```
pub fn parse_catalog(text: &str) -> Result<Vec<BaseBlockSystem>, OrbitError> {
    let mut systems = Vec::new();
    let mut current: Option<BaseBlockSystem> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let column = content.len() - trimmed.len() + 1;
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let int = |field: &str, what: &str| -> Result<u32, OrbitError> {
            field
                .parse::<u32>()
                .map_err(|_| parse_err(line, column, format!("bad {what} `{field}`")))
        };
        match fields[0] {
            "entry" => {
                if current.is_some() {
                    return Err(parse_err(line, column, "entry before previous `end`"));
                }
                let rest = trimmed.strip_prefix("entry").unwrap().trim_start();
                let name = rest
                    .strip_prefix('"')
                    .and_then(|r| r.split_once('"'))
                    .ok_or_else(|| parse_err(line, column, "expected quoted entry name"))?;
                let after = name.1.trim_start();
                let sig_text = after
                    .strip_prefix("type")
                    .ok_or_else(|| parse_err(line, column, "expected `type <signature>`"))?
                    .trim();
                let signature: GroupSignature = sig_text
                    .parse()
                    .map_err(|e| parse_err(line, column, format!("{e}")))?;
                current = Some(BaseBlockSystem {
                    name: name.0.to_string(),
                    signature,
                    regions: Vec::new(),
                    j_max: 0,
                    overrides: Vec::new(),
                    base_blocks: Vec::new(),
                });
            }
            "region" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| parse_err(line, column, "region outside entry"))?;
                if fields.len() < 6 || fields[3] != "step" || fields[5] != "groups" {
                    return Err(parse_err(
                        line,
                        column,
                        "expected `region <offset> <length> step <m> groups mod <u>|whole`",
                    ));
                }
                let rule = match fields.get(6) {
                    Some(&"whole") => GroupRule::Whole,
                    Some(&"mod") => GroupRule::Mod(int(
                        fields
                            .get(7)
                            .ok_or_else(|| parse_err(line, column, "missing modulus"))?,
                        "modulus",
                    )?),
                    _ => return Err(parse_err(line, column, "expected `mod <u>` or `whole`")),
                };
                sys.regions.push(Region {
                    offset: int(fields[1], "offset")?,
                    length: int(fields[2], "length")?,
                    step: int(fields[4], "step")?,
                    rule,
                });
            }
            "orbits" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| parse_err(line, column, "orbits outside entry"))?;
                sys.j_max = int(
                    fields
                        .get(1)
                        .ok_or_else(|| parse_err(line, column, "missing orbit count"))?,
                    "orbit count",
                )?;
            }
            "orbit" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| parse_err(line, column, "orbit outside entry"))?;
                if fields.len() != 4 || fields[2] != "blocks" {
                    return Err(parse_err(line, column, "expected `orbit <J> blocks <a>..<b>`"));
                }
                let j = int(fields[1], "orbit count")?;
                let (a, b) = fields[3]
                    .split_once("..")
                    .ok_or_else(|| parse_err(line, column, "expected range `<a>..<b>`"))?;
                sys.overrides.push((
                    int(a, "range start")? as usize,
                    int(b, "range end")? as usize,
                    j,
                ));
            }
            "block" => {
                let sys = current
                    .as_mut()
                    .ok_or_else(|| parse_err(line, column, "block outside entry"))?;
                let points = fields[1..]
                    .iter()
                    .map(|f| int(f, "point"))
                    .collect::<Result<Vec<u32>, _>>()?;
                sys.base_blocks.push(points);
            }
            "end" => {
                let sys = current
                    .take()
                    .ok_or_else(|| parse_err(line, column, "end outside entry"))?;
                sys.validate()?;
                systems.push(sys);
            }
            other => return Err(parse_err(line, column, format!("unknown keyword `{other}`"))),
        }
    }
    if current.is_some() {
        return Err(parse_err(text.lines().count(), 1, "missing final `end`"));
    }
    Ok(systems)
}

/// Serialize systems in the catalog grammar.
pub fn write_catalog(systems: &[BaseBlockSystem]) -> String {
    let mut out = String::new();
    for sys in systems {
        let _ = writeln!(out, "entry \"{}\" type {}", sys.name, sys.signature);
        for r in &sys.regions {
            let rule = match r.rule {
                GroupRule::Mod(u) => format!("mod {u}"),
                GroupRule::Whole => "whole".to_string(),
            };
            let _ = writeln!(
                out,
                "region {} {} step {} groups {}",
                r.offset, r.length, r.step, rule
            );
        }
        let _ = writeln!(out, "orbits {}", sys.j_max);
        for &(a, b, j) in &sys.overrides {
            let _ = writeln!(out, "orbit {j} blocks {a}..{b}");
        }
        for block in &sys.base_blocks {
            let points: Vec<String> = block.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "block {}", points.join(" "));
        }
        out.push_str("end\n\n");
    }
    out
}
