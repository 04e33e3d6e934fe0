//! Executable unit-disk reduction from monotone Max-XOR(3) to minimum
//! bisection.
//!
//! The pipeline compiles a monotone XOR formula into an exact integer-grid
//! unit-disk representation built from crowd gadgets laid along L-shaped
//! tracks, extracts the intersection graph, contracts it to a quotient over
//! crowds, and checks the counting arguments (set sizes, clique cover, cut
//! accounting, optimum bisection value) against brute-force oracles.
//!
//! Module map:
//!
//! - [`formula`]: monotone XOR formulas, brute-force Max-XOR / Max-Cut and the
//!   cubic Max-Cut reduction.
//! - [`construction`]: track layout, gadget placement, clause shifts, constant
//!   audit and the representation document.
//! - [`blueprint`]: the intended quotient graph derived from the placement
//!   rules alone.
//! - [`extraction`]: exact unit-disk graph extraction and quotienting.
//! - [`analysis`]: set sizes, clique cover, cut matrices and cut-value
//!   accounting.
//! - [`solve`]: bisection solvers and the end-to-end verification harness.
//! - [`render`]: SVG output.

pub mod analysis;
pub mod blueprint;
pub mod construction;
pub mod extraction;
pub mod formula;
pub mod graph;
pub mod quotient;
pub mod render;
pub mod solve;

pub use analysis::{Color, CutMatrix, SetColoring};
pub use blueprint::{blueprint_quotient, expected_cut_matrix};
pub use construction::{
    apply_clause_shifts, audit_constants, build_representation, ConstructionParams, DiskLabel,
    Representation, ScaledPoint, SetId,
};
pub use extraction::{extract_graph, extract_quotient, quotient_of, UdgGraph};
pub use formula::{Assignment, CubicGraph, Formula};
pub use graph::Graph;
pub use quotient::{AtomKey, QuotientGraph};
pub use solve::{verify_theorem, VerificationReport};
