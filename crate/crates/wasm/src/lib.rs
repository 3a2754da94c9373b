//! Browser demo bindings.
//!
//! Three interactive views over the core library, exported through
//! wasm-bindgen with plain strings and pixel buffers so the page stays
//! framework-free: an existence-spectrum explorer, an orbit-expansion
//! explorer over the embedded catalog, and preset construction chains
//! run live with their verification reports.

use wasm_bindgen::prelude::wasm_bindgen;

use gdd5_core::catalog;
use gdd5_core::construct::{
    add_groups_as_blocks, delete_point, fill_groups, find_parallel_class, inflate, mgdd_from_td,
    projective_plane_pbd, td, wilson_compose, FillSet, MgddSet,
};
use gdd5_core::design::{BlockSizeSet, Design};
use gdd5_core::orbit::BaseBlockSystem;
use gdd5_core::spectrum::{spectrum_status, SpectrumStatus, Theorem};
use gdd5_core::verify::verify_gdd;

fn theorem_of(name: &str) -> Theorem {
    if name == "prior" {
        Theorem::Prior
    } else {
        Theorem::New
    }
}

fn status_code(s: SpectrumStatus) -> u8 {
    match s {
        SpectrumStatus::Inadmissible => 0,
        SpectrumStatus::Exists => 1,
        SpectrumStatus::NotExist => 2,
        SpectrumStatus::Open => 3,
    }
}

/// Status codes for the grid `g = 1..=g_max`, `u = 5..=u_max`, row-major
/// by `g`: 0 inadmissible, 1 exists, 2 does not exist, 3 open.
#[wasm_bindgen]
pub fn spectrum_grid(g_max: u32, u_max: u32, theorem: &str) -> Vec<u8> {
    let theorem = theorem_of(theorem);
    let mut out = Vec::with_capacity((g_max * (u_max.saturating_sub(4))) as usize);
    for g in 1..=g_max {
        for u in 5..=u_max {
            out.push(status_code(spectrum_status(g, u, theorem)));
        }
    }
    out
}

/// Human-readable detail for one spectrum cell.
#[wasm_bindgen]
pub fn spectrum_cell(g: u32, u: u32) -> String {
    let prior = spectrum_status(g, u, Theorem::Prior);
    let new = spectrum_status(g, u, Theorem::New);
    let note = match (prior, new) {
        (SpectrumStatus::Open, SpectrumStatus::Exists) => "  (settled by this catalog's designs)",
        _ => "",
    };
    format!("type {g}^{u}\nprior: {prior}\nnew: {new}{note}")
}

/// Embedded catalog entry names, one per line.
#[wasm_bindgen]
pub fn catalog_names() -> String {
    catalog::names().join("\n")
}

/// Summary of one catalog entry, one `key: value` per line.
#[wasm_bindgen]
pub fn entry_info(name: &str) -> String {
    let Ok(system) = catalog::get_entry(name) else {
        return format!("unknown entry {name}");
    };
    let mut out = format!(
        "type: {}\npoints: {}\nbase blocks: {}\norbits: {}\n",
        system.signature,
        system.n_points(),
        system.base_blocks.len(),
        system.j_max
    );
    for &(first, last, j) in &system.overrides {
        out.push_str(&format!("orbit override: blocks {first}..{last} run {j}\n"));
    }
    match system.expand() {
        Ok(design) => {
            let report = verify_gdd(&design, &BlockSizeSet::single(5));
            out.push_str(&format!(
                "expanded blocks: {}\ncross pairs: {}\nverdict: {}\n",
                design.blocks().len(),
                system.signature.cross_pairs(),
                if report.verdict { "PASS" } else { "FAIL" }
            ));
        }
        Err(e) => out.push_str(&format!("expansion error: {e}\n")),
    }
    out
}

#[wasm_bindgen]
pub fn entry_points(name: &str) -> u32 {
    catalog::get_entry(name).map(|s| s.n_points()).unwrap_or(0)
}

#[wasm_bindgen]
pub fn entry_orbits(name: &str) -> u32 {
    catalog::get_entry(name).map(|s| s.j_max).unwrap_or(0)
}

/// Pair-coverage counts for a partial expansion (shifts `0..j_limit`).
fn partial_coverage(system: &BaseBlockSystem, j_limit: u32) -> (u32, Vec<u8>) {
    let n = system.n_points();
    let mut counts = vec![0u8; (n as usize) * (n as usize)];
    for (bi, base) in system.base_blocks.iter().enumerate() {
        for j in 0..system.orbit_limit(bi).min(j_limit) {
            let block: Vec<u32> = base
                .iter()
                .map(|&p| system.map_point(j, p).expect("catalog data is in range"))
                .collect();
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let (a, b) = (a as usize, b as usize);
                    counts[a * n as usize + b] = counts[a * n as usize + b].saturating_add(1);
                    counts[b * n as usize + a] = counts[b * n as usize + a].saturating_add(1);
                }
            }
        }
    }
    (n, counts)
}

fn paint(n: usize, group_of: &[u32], counts: &[u8]) -> Vec<u8> {
    let mut pixels = Vec::with_capacity(n * n * 4);
    for a in 0..n {
        for b in 0..n {
            let rgba: [u8; 4] = if a == b {
                [230, 232, 236, 255]
            } else if group_of[a] == group_of[b] {
                if counts[a * n + b] > 0 {
                    [255, 140, 0, 255] // forbidden coverage
                } else {
                    [52, 58, 70, 255]
                }
            } else {
                match counts[a * n + b] {
                    0 => [18, 18, 22, 255],
                    1 => [46, 160, 67, 255],
                    _ => [218, 54, 51, 255],
                }
            };
            pixels.extend_from_slice(&rgba);
        }
    }
    pixels
}

/// RGBA image (n x n) of the pair coverage after `j_limit` shifts: gray
/// for same-group pairs, dark for uncovered, green for exactly once, red
/// for more than once, orange for coverage inside a group.
#[wasm_bindgen]
pub fn coverage_image(name: &str, j_limit: u32) -> Vec<u8> {
    let Ok(system) = catalog::get_entry(name) else {
        return Vec::new();
    };
    let (n, counts) = partial_coverage(system, j_limit);
    let groups = system.derive_groups();
    let mut group_of = vec![0u32; n as usize];
    for (gi, cell) in groups.iter().enumerate() {
        for &p in cell {
            group_of[p as usize] = gi as u32;
        }
    }
    paint(n as usize, &group_of, &counts)
}

/// Preset construction chains for the demo page.
const DEMOS: &[&str] = &["25^5", "5^25", "5^21", "8^11 10^1", "4^5"];

#[wasm_bindgen]
pub fn demo_names() -> String {
    DEMOS.join("\n")
}

fn build_demo(which: &str) -> Result<(Design, String), String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match which {
        "25^5" | "5^25" => {
            let master = td(5, 5).map_err(|e| err(&e))?;
            let pc = find_parallel_class(&master)
                .map_err(|e| err(&e))?
                .ok_or("no parallel class")?;
            let mg = mgdd_from_td(&master, &pc).map_err(|e| err(&e))?;
            let mut mgdds = MgddSet::new();
            mgdds.insert(5, mg);
            let mut fills = FillSet::new();
            fills.insert(5, td(5, 5).map_err(|e| err(&e))?);
            let big = wilson_compose(&master, 5, &mgdds, &fills).map_err(|e| err(&e))?;
            if which == "25^5" {
                let log = "td(5,5) -> parallel class -> modified design 5^5\n\
                           overlay composition with w = 5 -> 25^5"
                    .to_string();
                return Ok((big, log));
            }
            let fills: std::collections::BTreeMap<usize, Design> = (0..5)
                .map(|gi| Ok((gi, td(5, 5).map_err(|e| err(&e))?)))
                .collect::<Result<_, String>>()?;
            let fine = fill_groups(&big, 0, &fills).map_err(|e| err(&e))?;
            Ok((
                fine,
                "overlay composition to 25^5, then td(5,5) fills -> 5^25".to_string(),
            ))
        }
        "5^21" => {
            let master =
                inflate(&td(5, 5).map_err(|e| err(&e))?, 4, &td(5, 4).map_err(|e| err(&e))?)
                    .map_err(|e| err(&e))?;
            let fills: std::collections::BTreeMap<usize, Design> = (0..5)
                .map(|gi| Ok((gi, td(5, 5).map_err(|e| err(&e))?)))
                .collect::<Result<_, String>>()?;
            let fine = fill_groups(&master, 5, &fills).map_err(|e| err(&e))?;
            Ok((
                fine,
                "inflate td(5,5) by 4 -> 20^5, adjoin 5 points, td(5,5) fills -> 5^21".to_string(),
            ))
        }
        "8^11 10^1" => {
            let t = td(9, 11).map_err(|e| err(&e))?;
            let pbd = add_groups_as_blocks(&t).map_err(|e| err(&e))?;
            let master = delete_point(&pbd, 0).map_err(|e| err(&e))?;
            Ok((
                master,
                "td(9,11) -> groups as blocks -> delete a point -> {9,11}-GDD 8^11 10^1"
                    .to_string(),
            ))
        }
        "4^5" => {
            let plane = projective_plane_pbd(4).map_err(|e| err(&e))?;
            let small = delete_point(&plane, 0).map_err(|e| err(&e))?;
            Ok((
                small,
                "projective plane of order 4 -> delete a point -> 4^5".to_string(),
            ))
        }
        other => Err(format!("unknown demo {other}")),
    }
}

/// Run a preset chain; the last line is `verdict: PASS|FAIL`.
#[wasm_bindgen]
pub fn run_demo(which: &str) -> String {
    match build_demo(which) {
        Ok((design, log)) => {
            let sizes = BlockSizeSet::of_design(&design).expect("demo designs have blocks");
            let report = verify_gdd(&design, &sizes);
            format!(
                "{log}\ntype: {}\npoints: {}\nblocks: {}\nblock sizes: {}\nverdict: {}",
                design.signature(),
                design.n_points(),
                design.blocks().len(),
                sizes,
                if report.verdict { "PASS" } else { "FAIL" }
            )
        }
        Err(e) => format!("error: {e}"),
    }
}

#[wasm_bindgen]
pub fn demo_points(which: &str) -> u32 {
    build_demo(which).map(|(d, _)| d.n_points()).unwrap_or(0)
}

/// RGBA coverage matrix of a preset chain's result.
#[wasm_bindgen]
pub fn demo_image(which: &str) -> Vec<u8> {
    let Ok((design, _)) = build_demo(which) else {
        return Vec::new();
    };
    let n = design.n_points() as usize;
    let group_of = design.group_of_points();
    let mut counts = vec![0u8; n * n];
    for block in design.blocks() {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                let (a, b) = (a as usize, b as usize);
                counts[a * n + b] = counts[a * n + b].saturating_add(1);
                counts[b * n + a] = counts[b * n + a].saturating_add(1);
            }
        }
    }
    paint(n, &group_of, &counts)
}
