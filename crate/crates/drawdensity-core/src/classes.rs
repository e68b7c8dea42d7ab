//! Beyond-planar drawing classes.
//!
//! Each predicate follows the class definition literally:
//!
//! * *quasiplanar* — no three edges pairwise cross.  Equivalently the
//!   crossing graph (edges as nodes, adjacency = "cross at least once") is
//!   triangle-free; several crossings between the same pair still give one
//!   adjacency.
//! * *fan-crossing* — for every edge, the edges crossing it form a star of
//!   the underlying graph: they all share a vertex.  The empty set, a
//!   single edge, and parallel edges sharing both endpoints all count as
//!   stars.
//! * *k-planar* — every edge carries at most `k` crossings.
//! * *k⁺-real-face* — every cell has at least `k` vertex incidences,
//!   counted with multiplicity along the boundary walk.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::drawing::{Drawing, EdgeId};
use crate::properties;

/// Three pairwise-crossing edges, if any exist.
///
/// Scans unordered triples of the crossing graph deterministically and
/// returns the lexicographically first violating triple.
pub fn quasiplanar_witness(d: &Drawing) -> Option<(EdgeId, EdgeId, EdgeId)> {
    let mut crossers: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    for (_, cr) in d.crossings() {
        let [e, f] = cr.edges();
        crossers.entry(e.min(f)).or_default().push(e.max(f));
    }
    for list in crossers.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    for (&e, partners) in &crossers {
        for (i, &f) in partners.iter().enumerate() {
            for &g in &partners[i + 1..] {
                // e crosses both f and g (with e < f < g); the triple is
                // pairwise crossing iff f also crosses g.
                if crossers.get(&f).is_some_and(|p| p.binary_search(&g).is_ok()) {
                    return Some((e, f, g));
                }
            }
        }
    }
    None
}

/// True iff no three edges pairwise cross.
pub fn is_quasiplanar(d: &Drawing) -> bool {
    quasiplanar_witness(d).is_none()
}

/// An edge whose crossing edges do not form a star, if any.
pub fn fan_crossing_witness(d: &Drawing) -> Option<EdgeId> {
    for (e, edge) in d.edges() {
        let mut crossers: Vec<EdgeId> = edge
            .crossings
            .iter()
            .map(|&x| d.crossing(x).other_edge(e).expect("crossing lists e"))
            .collect();
        crossers.sort_unstable();
        crossers.dedup();
        if crossers.len() <= 1 {
            continue;
        }
        let first = d.edge(crossers[0]);
        let is_star = [first.source, first.target].iter().any(|&v| {
            crossers
                .iter()
                .all(|&f| d.edge(f).source == v || d.edge(f).target == v)
        });
        if !is_star {
            return Some(e);
        }
    }
    None
}

/// True iff for every edge the edges crossing it share a common vertex.
pub fn is_fan_crossing(d: &Drawing) -> bool {
    fan_crossing_witness(d).is_none()
}

/// Number of crossings on every edge.
pub fn crossings_per_edge(d: &Drawing) -> BTreeMap<EdgeId, u64> {
    d.edges()
        .map(|(e, edge)| (e, edge.crossings.len() as u64))
        .collect()
}

/// True iff every edge has at most `k` crossings.
pub fn is_k_planar(d: &Drawing, k: u64) -> bool {
    d.edges().all(|(_, edge)| edge.crossings.len() as u64 <= k)
}

/// Minimum over all cells of the number of vertex incidences (with
/// multiplicity).
pub fn real_face_level(d: &Drawing) -> u64 {
    d.cells()
        .iter()
        .map(|c| c.vertex_incidences)
        .min()
        .expect("a valid drawing has at least one cell")
}

/// True iff every cell has at least `k` vertex incidences.
pub fn is_k_plus_real_face(d: &Drawing, k: u64) -> bool {
    real_face_level(d) >= k
}

/// Every class predicate of a drawing in one record.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassReport {
    pub simple: bool,
    pub non_homotopic: bool,
    pub filled: bool,
    pub bipartite: bool,
    pub quasiplanar: bool,
    pub fan_crossing: bool,
    /// `d` is k-planar exactly for k at or above this.
    pub max_crossings_per_edge: u64,
    pub real_face_level: u64,
    pub max_distinct_vertices_per_cell: u64,
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "simple:                 {}", yn(self.simple))?;
        writeln!(f, "non-homotopic:          {}", yn(self.non_homotopic))?;
        writeln!(f, "filled:                 {}", yn(self.filled))?;
        writeln!(f, "bipartite:              {}", yn(self.bipartite))?;
        writeln!(f, "quasiplanar:            {}", yn(self.quasiplanar))?;
        writeln!(f, "fan-crossing:           {}", yn(self.fan_crossing))?;
        writeln!(f, "max crossings per edge: {}", self.max_crossings_per_edge)?;
        writeln!(f, "real-face level:        {}", self.real_face_level)?;
        write!(
            f,
            "max distinct vertices per cell: {}",
            self.max_distinct_vertices_per_cell
        )
    }
}

/// Evaluates every predicate of this module and of [`properties`].
pub fn class_report(d: &Drawing) -> ClassReport {
    ClassReport {
        simple: properties::is_simple(d),
        non_homotopic: properties::is_non_homotopic(d),
        filled: properties::is_filled(d),
        bipartite: properties::bipartition(d).is_ok(),
        quasiplanar: is_quasiplanar(d),
        fan_crossing: is_fan_crossing(d),
        max_crossings_per_edge: crossings_per_edge(d).values().copied().max().unwrap_or(0),
        real_face_level: real_face_level(d),
        max_distinct_vertices_per_cell: properties::max_distinct_vertices_per_cell(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::CellClass;
    use crate::testutil::*;

    #[test]
    fn three_pairwise_crossing_edges_are_not_quasiplanar() {
        let d = build(triple_cross());
        assert_eq!(
            quasiplanar_witness(&d),
            Some((EdgeId(0), EdgeId(1), EdgeId(2)))
        );
        assert!(!is_quasiplanar(&d));
    }

    #[test]
    fn triple_cross_center_is_a_tri3_cell() {
        let d = build(triple_cross());
        assert_eq!(d.stats().class_count(CellClass::Tri3), 1);
        assert_eq!(real_face_level(&d), 0);
    }

    #[test]
    fn edge_crossed_by_two_independent_edges_is_not_fan_crossing() {
        let d = build(triple_cross());
        assert_eq!(fan_crossing_witness(&d), Some(EdgeId(0)));
    }

    #[test]
    fn convex_k4_class_profile() {
        let d = build(k4_convex());
        let r = class_report(&d);
        assert!(r.simple);
        assert!(r.non_homotopic);
        assert!(r.quasiplanar);
        assert!(r.fan_crossing);
        assert!(!r.bipartite);
        assert!(!r.filled);
        assert_eq!(r.max_crossings_per_edge, 1);
        assert!(is_k_planar(&d, 1));
        assert!(!is_k_planar(&d, 0));
        assert_eq!(r.real_face_level, 2);
        assert_eq!(r.max_distinct_vertices_per_cell, 4);
    }

    #[test]
    fn planar_drawings_are_trivially_in_every_crossing_class() {
        let d = build(triangle());
        let r = class_report(&d);
        assert!(r.quasiplanar && r.fan_crossing && r.simple && r.filled);
        assert_eq!(r.max_crossings_per_edge, 0);
        assert!(is_k_planar(&d, 0));
        assert_eq!(r.real_face_level, 3);
    }

    #[test]
    fn k_planarity_is_monotone() {
        for spec in [triangle(), k4_convex(), triple_cross(), witnessed_double_crossing()] {
            let d = build(spec);
            for k in 0..5 {
                if is_k_planar(&d, k) {
                    assert!(is_k_planar(&d, k + 1));
                }
            }
        }
    }

    #[test]
    fn real_face_levels_are_monotone() {
        let d = build(k4_convex());
        assert!(is_k_plus_real_face(&d, 1));
        assert!(is_k_plus_real_face(&d, 2));
        assert!(!is_k_plus_real_face(&d, 3));
    }

    #[test]
    fn quasiplanar_drawings_have_no_tri3_cells() {
        for spec in [triangle(), square(), k4_planar(), k4_convex(), x_drawing()] {
            let d = build(spec);
            if is_quasiplanar(&d) {
                assert_eq!(d.stats().class_count(CellClass::Tri3), 0);
            }
        }
    }

    #[test]
    fn simple_one_planar_drawings_are_fan_crossing() {
        for spec in [triangle(), k4_convex(), x_drawing()] {
            let d = build(spec);
            if crate::properties::is_simple(&d) && is_k_planar(&d, 1) {
                assert!(is_fan_crossing(&d));
            }
        }
    }
}
