//! The embedded catalog of directly constructed designs.
//!
//! Twenty-six base block systems ship with the crate as a text asset in
//! the catalog grammar: four plain types (`2^111`, `6^15`, `10^15`,
//! `10^33`) and twenty-two mixed types `g^u m^1`. The asset is checked
//! against a content hash at load so an accidental edit fails loudly
//! instead of producing a subtly different design; the data itself stays
//! human-diffable text.

use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::CatalogError;
use crate::orbit::{parse_catalog, BaseBlockSystem};

/// The catalog asset, verbatim.
pub const CATALOG_TEXT: &str = include_str!("../assets/catalog.txt");

/// SHA-256 of [`CATALOG_TEXT`].
const CATALOG_SHA256: &str = "de8c45df7cf123a4b3b820e9b47e294a492c832a31e484139e66593438a61cd8";

/// Whether an entry has all groups of one size or a single odd group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryClass {
    /// Plain type `g^u`.
    Uniform,
    /// Mixed type `g^u m^1`.
    Mixed,
}

/// One embedded base block system.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub system: BaseBlockSystem,
    pub class: EntryClass,
}

fn load() -> Result<Vec<CatalogEntry>, CatalogError> {
    let digest = Sha256::digest(CATALOG_TEXT.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != CATALOG_SHA256 {
        return Err(CatalogError::HashMismatch);
    }
    let systems = parse_catalog(CATALOG_TEXT)?;
    Ok(systems
        .into_iter()
        .map(|system| CatalogEntry {
            name: system.name.clone(),
            class: if system.signature.is_uniform() {
                EntryClass::Uniform
            } else {
                EntryClass::Mixed
            },
            system,
        })
        .collect())
}

/// All embedded entries, in catalog order.
pub fn entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| load().expect("embedded catalog must load"))
}

/// Entry names, in catalog order.
pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name.as_str()).collect()
}

/// Look up an embedded base block system by name, e.g. `"6^15"`.
pub fn get_entry(name: &str) -> Result<&'static BaseBlockSystem, CatalogError> {
    entries()
        .iter()
        .find(|e| e.name == name)
        .map(|e| &e.system)
        .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_26_entries() {
        assert_eq!(entries().len(), 26);
        assert_eq!(
            entries().iter().filter(|e| e.class == EntryClass::Uniform).count(),
            4
        );
    }

    #[test]
    fn lookup() {
        let sys = get_entry("10^33").unwrap();
        assert_eq!(sys.base_blocks.len(), 16);
        assert_eq!(sys.j_max, 330);
        assert_eq!(sys.regions.len(), 1);

        let sys = get_entry("8^10 4^1").unwrap();
        assert_eq!(sys.base_blocks.len(), 4);
        assert_eq!(sys.j_max, 80);
        assert_eq!(sys.regions.len(), 2);

        // present in the literature but not embedded here
        assert!(matches!(
            get_entry("2^35"),
            Err(CatalogError::UnknownEntry(_))
        ));
    }

    #[test]
    fn six_fifteen_has_short_orbits() {
        let sys = get_entry("6^15").unwrap();
        assert_eq!(sys.base_blocks.len(), 10);
        assert_eq!(sys.j_max, 45);
        assert_eq!(sys.overrides, vec![(9, 10, 9)]);
    }
}
