//! Combinatorial drawings of graphs on the sphere and in the plane.
//!
//! A drawing is stored purely combinatorially: a graph together with, for
//! every edge, the ordered list of crossings along it, and for every vertex
//! and crossing, the counterclockwise cyclic order of the edge ends leaving
//! it.  That data determines the planarization (vertices plus crossings,
//! joined by edge segments) as an embedded graph, and therefore determines
//! the cells — the connected regions the drawing cuts the surface into —
//! without any coordinates.
//!
//! The crate is organised around that pipeline:
//!
//! * [`drawing`] — the core model: validation, face tracing, cells, the
//!   small-cell taxonomy, and census statistics.
//! * [`link`] — vertex links: the removal surgery and the identity tying a
//!   link's size to the sizes of the removed vertex's corner cells.
//! * [`properties`] — structural predicates on drawings: simplicity, empty
//!   lenses, homotopy of parallel edges, filledness, bipartitions.
//! * [`classes`] — beyond-planar drawing classes (quasiplanar, fan-crossing,
//!   k-planar, bounded real-face level).
//! * [`density`] — the exact cell-counting identity tying edges, crossings
//!   and cell sizes together, plus a catalog of edge-density inequalities
//!   with exact rational arithmetic and tightness diagnostics.
//! * [`geometry`] — exact straight-line/polyline drawings over the
//!   rationals: crossing detection, conversion to the combinatorial model,
//!   an independent geometric face walker, and right-angle checks.
//! * [`generators`] — constructions that realise the extremal bounds of the
//!   drawing classes, and surgeries (`fill`, `fill_simple`,
//!   `eliminate_t_cells`) that make drawings denser or remove specific
//!   cells.
//!
//! Everything is deterministic: iteration happens over ordered maps, and
//! the only randomness (fuzz-style generators) is seeded explicitly.
//!
//! The crate is `no_std` (with `alloc`) so the model can be embedded in
//! other tools; the companion `drawdensity` crate adds file formats and a
//! command line interface.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod classes;
pub mod density;
pub mod drawing;
pub mod generators;
pub mod geometry;
pub mod link;
pub mod properties;
pub(crate) mod util;

pub use drawing::{
    build_drawing, enumerate_cells, planarize, BuildError, Cell, CellClass, CrossingId,
    CrossingSpec, Dart, Dir, Drawing, DrawingSpec, DrawingStats, EdgeEnd, EdgeId, EdgeSpec, Node,
    Planarization, SegEnd, Surface, VertexId,
};
pub use density::{
    density_formula, max_edges, standard_catalog, verify_inequality, BoundError, CatalogEntry,
    Clause, DensityError, DensityEvaluation, DrawingClass, InequalityReport, PreconditionCheck,
    RacFacts, Relation, SlackTerm,
};
pub use geometry::{
    compute_arrangement, convex_bend_corners, geometric_cells, is_rac, pt, rac_report,
    random_geom_drawing, to_combinatorial, Arrangement, CrossingEvent, GeomDrawing, GeomEdge,
    GeomError, Point, RacReport,
};
pub use link::{link_of_vertex, LinkError, VertexLink};

// Re-export the arithmetic crates used in public signatures so downstream
// crates agree on versions without naming them separately.
pub use num_bigint;
pub use num_rational;
pub use num_traits;

/// Exact rational number used throughout for densities and inequality sides.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for an exact rational from a machine integer pair.
///
/// Panics if `den` is zero; callers only pass literal denominators.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(
        num_bigint::BigInt::from(num),
        num_bigint::BigInt::from(den),
    )
}

#[cfg(test)]
pub(crate) mod testutil;
