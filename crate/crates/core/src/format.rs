//! Canonical design file format.
//!
//! Text, UTF-8, LF. A file holds one design:
//!
//! ```text
//! design 8^11 10^1
//! points 98
//! group 0 11 22 ...
//! block 0 1 2 3 4
//! hole 0 12 24 ...      (optional, double designs only)
//! # comment
//! ```
//!
//! Serialization is canonical: groups sorted by (size descending,
//! smallest element), blocks lexicographically, holes in stored order.

use std::str::FromStr;

use crate::design::{Design, DoubleDesign};
use crate::error::{DesignError, FormatError};
use crate::signature::GroupSignature;

/// A parsed design file: plain design or double design.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignFile {
    Plain(Design),
    Double(DoubleDesign),
}

impl DesignFile {
    pub fn design(&self) -> &Design {
        match self {
            DesignFile::Plain(d) => d,
            DesignFile::Double(dd) => dd.base(),
        }
    }

    pub fn double(&self) -> Option<&DoubleDesign> {
        match self {
            DesignFile::Plain(_) => None,
            DesignFile::Double(dd) => Some(dd),
        }
    }
}

fn parse_points(line: usize, fields: &[&str]) -> Result<Vec<u32>, FormatError> {
    fields
        .iter()
        .map(|f| {
            f.parse::<u32>().map_err(|_| FormatError::Parse {
                line,
                msg: format!("bad point `{f}`"),
            })
        })
        .collect()
}

/// Parse one canonical design file.
pub fn parse_design(text: &str) -> Result<DesignFile, FormatError> {
    let mut signature: Option<GroupSignature> = None;
    let mut n_points: Option<u32> = None;
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut holes: Vec<Vec<u32>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let keyword = fields.next().expect("non-empty line");
        let rest: Vec<&str> = fields.collect();
        match keyword {
            "design" => {
                let sig = GroupSignature::from_str(&rest.join(" ")).map_err(|e| {
                    FormatError::Parse {
                        line,
                        msg: e.to_string(),
                    }
                })?;
                signature = Some(sig);
            }
            "points" => {
                let n = rest
                    .first()
                    .and_then(|f| f.parse::<u32>().ok())
                    .ok_or_else(|| FormatError::Parse {
                        line,
                        msg: "expected `points <N>`".into(),
                    })?;
                n_points = Some(n);
            }
            "group" => groups.push(parse_points(line, &rest)?),
            "block" => blocks.push(parse_points(line, &rest)?),
            "hole" => holes.push(parse_points(line, &rest)?),
            other => {
                return Err(FormatError::Parse {
                    line,
                    msg: format!("unknown keyword `{other}`"),
                })
            }
        }
    }

    let n = n_points.ok_or(FormatError::Parse {
        line: 0,
        msg: "missing `points` line".into(),
    })?;
    let design = Design::new(n, groups, blocks).map_err(|source| map_design_err(source, n))?;
    if let Some(declared) = signature {
        if &declared != design.signature() {
            return Err(FormatError::SignatureMismatch {
                declared,
                derived: design.signature().clone(),
            });
        }
    }
    if holes.is_empty() {
        Ok(DesignFile::Plain(design))
    } else {
        let dd = DoubleDesign::new(design, holes).map_err(|source| map_design_err(source, n))?;
        Ok(DesignFile::Double(dd))
    }
}

fn map_design_err(source: DesignError, _n: u32) -> FormatError {
    FormatError::Design { line: 0, source }
}

/// Serialize a design in canonical form.
pub fn write_design(d: &Design) -> String {
    let mut out = String::new();
    out.push_str(&format!("design {}\n", d.signature()));
    out.push_str(&format!("points {}\n", d.n_points()));
    for group in d.groups() {
        out.push_str("group");
        for p in group {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
    for block in d.blocks() {
        out.push_str("block");
        for p in block {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
    out
}

/// Serialize a double design: the base design plus `hole` lines.
pub fn write_double_design(dd: &DoubleDesign) -> String {
    let mut out = write_design(dd.base());
    for hole in dd.holes() {
        out.push_str("hole");
        for p in hole {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
    out
}

pub fn write_file(file: &DesignFile) -> String {
    match file {
        DesignFile::Plain(d) => write_design(d),
        DesignFile::Double(dd) => write_double_design(dd),
    }
}
