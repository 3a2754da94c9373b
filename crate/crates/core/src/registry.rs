//! Registry of externally supplied ingredient designs.
//!
//! Some construction chains need designs whose base blocks are not
//! embedded here (they live in other catalogs). Those arrive as canonical
//! design files in a registry directory, are verified at load, and are
//! looked up by kind and type. Nothing is ever fabricated: a missing
//! ingredient surfaces as an unresolved lookup.

use std::collections::BTreeMap;
use std::path::Path;

use crate::design::{BlockSizeSet, Design, DoubleDesign};
use crate::format::{parse_design, DesignFile};
use crate::signature::GroupSignature;
use crate::verify::{is_mgdd, verify_dgdd, verify_gdd};

/// What a registered design claims to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Gdd,
    Dgdd,
    Mgdd,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Gdd => "gdd",
            Kind::Dgdd => "dgdd",
            Kind::Mgdd => "mgdd",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "gdd" => Some(Kind::Gdd),
            "dgdd" => Some(Kind::Dgdd),
            "mgdd" => Some(Kind::Mgdd),
            _ => None,
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verified design under a kind tag.
#[derive(Debug, Clone)]
pub enum Registered {
    Plain(Design),
    Double(DoubleDesign),
}

/// Map from `(kind, signature)` to verified designs.
#[derive(Debug, Default, Clone)]
pub struct DesignRegistry {
    entries: BTreeMap<(Kind, GroupSignature), Registered>,
}

impl DesignRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Verify a design for `kind` and file it under its signature.
    ///
    /// Plain designs verify with their own block sizes as `K`; double
    /// designs verify the DGDD conditions, and the mgdd kind additionally
    /// requires the 1-per-cell hole/group grid.
    pub fn register(&mut self, kind: Kind, file: DesignFile) -> Result<(), String> {
        let signature = file.design().signature().clone();
        let entry = match (kind, file) {
            (Kind::Gdd, DesignFile::Plain(d)) => {
                let k = BlockSizeSet::of_design(&d).ok_or("design has no blocks")?;
                let report = verify_gdd(&d, &k);
                if !report.verdict {
                    return Err(format!("GDD verification failed:\n{}", report.to_text()));
                }
                Registered::Plain(d)
            }
            (Kind::Dgdd | Kind::Mgdd, DesignFile::Double(dd)) => {
                let k = BlockSizeSet::of_design(dd.base()).ok_or("design has no blocks")?;
                let report = verify_dgdd(&dd, &k);
                if !report.verdict {
                    return Err(format!("DGDD verification failed:\n{}", report.to_text()));
                }
                if kind == Kind::Mgdd && !is_mgdd(&dd) {
                    return Err("holes do not meet every group exactly once".into());
                }
                Registered::Double(dd)
            }
            (Kind::Gdd, DesignFile::Double(_)) => {
                return Err("file has holes; register it as dgdd or mgdd".into())
            }
            (_, DesignFile::Plain(_)) => {
                return Err("file has no holes; register it as gdd".into())
            }
        };
        self.entries.insert((kind, signature), entry);
        Ok(())
    }

    /// Look up by kind and signature. A `dgdd` query is satisfied by an
    /// `mgdd` entry of the same type, since every MGDD is a DGDD.
    pub fn lookup(&self, kind: Kind, signature: &GroupSignature) -> Option<&Registered> {
        self.entries.get(&(kind, signature.clone())).or_else(|| {
            (kind == Kind::Dgdd)
                .then(|| self.entries.get(&(Kind::Mgdd, signature.clone())))
                .flatten()
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Load every `*.gdd` file in a directory.
    ///
    /// The kind is inferred from content: holes present means dgdd, and
    /// mgdd when the hole/group grid holds; files register under every
    /// kind they satisfy.
    pub fn load_dir(&mut self, dir: &Path) -> Result<usize, String> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(|e| format!("cannot read {}: {e}", dir.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "gdd"))
            .collect();
        paths.sort();
        let mut loaded = 0;
        for path in paths {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let file =
                parse_design(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let kind = match &file {
                DesignFile::Plain(_) => Kind::Gdd,
                DesignFile::Double(dd) => {
                    if is_mgdd(dd) {
                        Kind::Mgdd
                    } else {
                        Kind::Dgdd
                    }
                }
            };
            self.register(kind, file)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            loaded += 1;
        }
        Ok(loaded)
    }
}
