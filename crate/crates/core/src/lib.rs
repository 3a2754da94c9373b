//! Group divisible designs with block size five.
//!
//! This crate materializes, composes, and machine-verifies group
//! divisible designs. It ships a catalog of base block systems that
//! expand into 5-GDDs, recursive construction operators (transversal
//! designs from finite fields, inflation, modified-GDD overlay
//! composition, group filling, point deletion), an exhaustive
//! pair-coverage verifier, an existence oracle for types `g^u`, and a
//! seeded stochastic search for small base block systems.
//!
//! Everything funnels through two value types: [`design::Design`] (points,
//! group partition, blocks) and [`design::DoubleDesign`] (a design plus a
//! hole partition). All values are immutable after construction and all
//! operations are pure, so anything here may be shared across threads.

pub mod catalog;
pub mod construct;
pub mod design;
pub mod error;
pub mod format;
pub mod gf;
pub mod orbit;
pub mod registry;
pub mod script;
pub mod search;
pub mod signature;
pub mod spectrum;
pub mod verify;

pub use design::{admissible, signature_of, BlockSizeSet, Design, DoubleDesign};
pub use signature::{cross_pairs, GroupSignature};
pub use verify::{is_mgdd, verify_dgdd, verify_gdd, VerificationReport};

/// Cap the global worker pool used for internal parallelism.
///
/// Must run before the first parallel operation; later calls fail.
pub fn configure_threads(threads: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot set thread count: {e}"))
}
