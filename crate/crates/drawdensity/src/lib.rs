//! File formats, reports, SVG export, and the command line around
//! `drawdensity-core`.

pub use drawdensity_core as core;
