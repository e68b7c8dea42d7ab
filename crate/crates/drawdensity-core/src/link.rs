//! Removing a vertex and measuring the cell it leaves behind.
//!
//! Deleting a vertex `v` from a drawing frees the region consisting of its
//! corner cells.  To make the freed region a genuine cell of a drawing, each
//! crossed edge at `v` is first cut back: the edge is subdivided just past
//! its first crossing as seen from `v`, so the `v`-side piece carries exactly
//! that one crossing, and then `v` and all the `v`-side pieces are removed.
//! Each cut edge ends at a fresh degree-one vertex, and every crossing on a
//! removed piece disappears, with its partner edge passing straight through
//! where it used to be.  The *link* of `v` is the cell `c₀` of the modified
//! drawing that covers the freed region.
//!
//! The point of the operation is a counting identity: writing `C(v)` for the
//! corner cells of `v`,
//!
//! ```text
//!     ‖c₀‖ = Σ_{c ∈ C(v)} (‖c‖ − 5) + |C(v)|.
//! ```
//!
//! [`link_of_vertex`] performs the surgery, measures `‖c₀‖` on the modified
//! drawing, and reports it next to the value predicted by the identity, so
//! the identity can be checked numerically on any input.
//!
//! The identity needs more than the drawing being non-homotopic and
//! connected.  Removing `v` must free *exactly* the corner cells of `v`:
//! when a cut-back edge's sliver (the piece between the dying crossing and
//! the new vertex) borders a cell that is not a corner of `v`, that cell is
//! swallowed into the freed region and the count goes wrong.  A three-edge
//! example — a pendant edge `va` crossed once, plus an edge closing a cycle
//! through the crossing's partner — makes the identity fail (the freed
//! region has size 12 where the formula says 7) while still being connected
//! and non-homotopic.  [`link_of_vertex`] therefore checks, and reports as
//! precondition failures, that
//!
//! * the corners of `v` lie in pairwise distinct cells,
//! * the freed region merges exactly the corner cells of `v`, and
//! * no neighbour of `v` is left isolated.
//!
//! The freed-region check works on the original drawing: cells are merged
//! across every segment that the surgery erases (whole uncrossed edges at
//! `v`, the `v`-side stub segments, and the segments carrying a sliver), and
//! the resulting class must contain exactly the corners of `v`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::drawing::{
    BuildError, Cell, CrossingId, CrossingSpec, Dart, Drawing, DrawingSpec, EdgeEnd, EdgeId,
    EdgeSpec, Node, SegEnd, Surface, VertexId,
};
use crate::properties::is_non_homotopic;
use crate::util::UnionFind;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A precondition of [`link_of_vertex`] does not hold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinkError {
    /// The vertex is not part of the drawing.
    UnknownVertex(VertexId),
    /// The drawing has fewer than three vertices.
    TooFewVertices { vertices: u64 },
    /// The drawing has an empty lens, so cells need not assemble into a
    /// single region around the removed vertex.
    NotNonHomotopic,
    /// Two corners of the vertex lie in the same cell, so the freed region
    /// covers a cell more than once and the size identity double-counts it.
    CornersShareCell { vertex: VertexId, cell: usize },
    /// The freed region does not coincide with the corner cells of the
    /// vertex: the named cell is merged in without being a corner (or a
    /// corner fails to merge), so the size identity does not apply.
    FreedRegionMismatch { vertex: VertexId, cell: usize },
    /// Removing the vertex would leave the named neighbour with no edges at
    /// all, and an isolated vertex has no boundary walk to measure.
    IsolatesNeighbour(VertexId),
}

impl fmt::Display for LinkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkError::UnknownVertex(v) => {
                write!(f, "precondition failed: vertex {v} is not in the drawing")
            }
            LinkError::TooFewVertices { vertices } => write!(
                f,
                "precondition failed: drawing has {vertices} vertices, need at least 3"
            ),
            LinkError::NotNonHomotopic => {
                write!(f, "precondition failed: drawing has an empty lens")
            }
            LinkError::CornersShareCell { vertex, cell } => write!(
                f,
                "precondition failed: two corners of {vertex} lie in the same cell c{cell}"
            ),
            LinkError::FreedRegionMismatch { vertex, cell } => write!(
                f,
                "precondition failed: removing {vertex} frees a region that disagrees \
                 with its corner cells at cell c{cell}"
            ),
            LinkError::IsolatesNeighbour(w) => write!(
                f,
                "precondition failed: removing the vertex would isolate its neighbour {w}"
            ),
        }
    }
}

impl core::error::Error for LinkError {}

// ---------------------------------------------------------------------------
// Result
// ---------------------------------------------------------------------------

/// The outcome of removing one vertex: the measured link cell next to the
/// size the counting identity predicts for it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexLink {
    /// The removed vertex.
    pub vertex: VertexId,
    /// Ids (in the input drawing) of the corner cells of the vertex, one per
    /// incident edge end in rotation order.  The preconditions force them to
    /// be pairwise distinct.
    pub corner_cells: Vec<usize>,
    /// `Σ_{c ∈ C(v)} (‖c‖ − 5) + |C(v)|`, the predicted size of the link.
    pub predicted_size: i64,
    /// `‖c₀‖` measured on the modified drawing.
    pub link_size: u64,
    /// Sizes of the individual boundary walks of the link cell.  More than
    /// one walk appears exactly when removing the vertex disconnects the
    /// drawing, in which case the link is bounded by several components.
    pub walk_sizes: Vec<u64>,
    /// `predicted_size == link_size`.
    pub matches: bool,
    /// The modified drawing, rebuilt and fully re-validated.  `None` when
    /// the surgery disconnects the planarization, which a [`Drawing`]
    /// cannot represent; the link sizes above are still exact.
    pub residual: Option<Drawing>,
    /// The cell of `residual` that is the link, when `residual` exists.
    pub link_cell: Option<Cell>,
}

// ---------------------------------------------------------------------------
// The operation
// ---------------------------------------------------------------------------

/// Removes `v` from the drawing and measures the cell it leaves behind.
///
/// See the module documentation for the construction and the preconditions.
/// The returned [`VertexLink`] carries both sides of the size identity; the
/// caller decides whether a mismatch is an error.
pub fn link_of_vertex(d: &Drawing, v: VertexId) -> Result<VertexLink, LinkError> {
    if !d.has_vertex(v) {
        return Err(LinkError::UnknownVertex(v));
    }
    let vertex_count = d.stats().vertices;
    if vertex_count < 3 {
        return Err(LinkError::TooFewVertices {
            vertices: vertex_count,
        });
    }
    if !is_non_homotopic(d) {
        return Err(LinkError::NotNonHomotopic);
    }

    // Corners of v: every outgoing dart at v has one corner of v to its
    // left, so the corner cells are the cells left of the out-darts.
    let corner_cells: Vec<usize> = d
        .out_darts(Node::V(v))
        .iter()
        .map(|&a| d.cell_left_of(a))
        .collect();
    let mut corner_set: BTreeSet<usize> = BTreeSet::new();
    for &c in &corner_cells {
        if !corner_set.insert(c) {
            return Err(LinkError::CornersShareCell { vertex: v, cell: c });
        }
    }

    // ---- removal plan -----------------------------------------------------
    // For every incident edge end, record which segment is the v-side stub,
    // which crossing dies, and where the fresh degree-one vertex goes.
    let mut removed_darts: BTreeSet<Dart> = BTreeSet::new();
    let mut erased_segments: Vec<Dart> = Vec::new(); // one fwd-side dart per erased segment
    let mut dying: BTreeSet<CrossingId> = BTreeSet::new();
    // first-from-v crossing -> the v-edges it dies for
    let mut dies_for: BTreeMap<CrossingId, BTreeSet<EdgeId>> = BTreeMap::new();
    // kept-side dart heading into a dying crossing -> the fresh vertex there
    let mut rehead: BTreeMap<Dart, VertexId> = BTreeMap::new();
    // kept-side dart leaving a dying crossing -> the fresh vertex there
    let mut retail: BTreeMap<Dart, VertexId> = BTreeMap::new();
    let mut removed_whole: BTreeSet<EdgeId> = BTreeSet::new();
    let mut fresh_vertices: Vec<(VertexId, EdgeId, EdgeEnd)> = Vec::new();

    let mut next_fresh = d.vertices().map(|w| w.0).max().unwrap_or(0) + 1;
    for &(eid, end) in d.vertex_rotation(v) {
        let edge = d.edge(eid);
        let seg_count = edge.seg_count();
        if edge.crossings.is_empty() {
            removed_whole.insert(eid);
            removed_darts.insert(Dart::fwd(eid, 0));
            removed_darts.insert(Dart::bwd(eid, 0));
            erased_segments.push(Dart::fwd(eid, 0));
            continue;
        }
        let z = VertexId(next_fresh);
        next_fresh += 1;
        match end {
            EdgeEnd::Source => {
                // Stub = segment 0, dying crossing = first in the list, the
                // sliver sits at the start of segment 1.
                let x = edge.crossings[0];
                dying.insert(x);
                dies_for.entry(x).or_default().insert(eid);
                removed_darts.insert(Dart::fwd(eid, 0));
                removed_darts.insert(Dart::bwd(eid, 0));
                erased_segments.push(Dart::fwd(eid, 0));
                erased_segments.push(Dart::fwd(eid, 1));
                rehead.insert(Dart::bwd(eid, 1), z);
                retail.insert(Dart::fwd(eid, 1), z);
                fresh_vertices.push((z, eid, EdgeEnd::Source));
            }
            EdgeEnd::Target => {
                // Stub = the last segment, dying crossing = last in the
                // list, the sliver sits at the end of the segment before.
                let x = edge.crossings[edge.crossings.len() - 1];
                dying.insert(x);
                dies_for.entry(x).or_default().insert(eid);
                let stub = seg_count - 1;
                removed_darts.insert(Dart::fwd(eid, stub));
                removed_darts.insert(Dart::bwd(eid, stub));
                erased_segments.push(Dart::fwd(eid, stub));
                erased_segments.push(Dart::fwd(eid, stub - 1));
                rehead.insert(Dart::fwd(eid, stub - 1), z);
                retail.insert(Dart::bwd(eid, stub - 1), z);
                fresh_vertices.push((z, eid, EdgeEnd::Target));
            }
        }
    }

    // No surviving vertex may end up with an empty rotation.
    for (w, rot) in d
        .vertices()
        .filter(|&w| w != v)
        .map(|w| (w, d.vertex_rotation(w)))
    {
        if rot.iter().all(|&(e, _)| removed_whole.contains(&e)) {
            return Err(LinkError::IsolatesNeighbour(w));
        }
    }

    // ---- freed region = corner cells, checked on the original drawing ----
    let mut uf = UnionFind::new(d.cells().len());
    for &a in &erased_segments {
        uf.union(d.cell_left_of(a), d.cell_left_of(a.rev()));
    }
    let root = uf.find(corner_cells[0]);
    for c in 0..d.cells().len() {
        if (uf.find(c) == root) != corner_set.contains(&c) {
            return Err(LinkError::FreedRegionMismatch { vertex: v, cell: c });
        }
    }

    let predicted_size = corner_cells
        .iter()
        .map(|&c| d.cell(c).size as i64 - 5)
        .sum::<i64>()
        + corner_cells.len() as i64;

    // ---- glue partner edges straight through the dying crossings ---------
    let mut glue: BTreeMap<Dart, Dart> = BTreeMap::new();
    for &x in &dying {
        let first_for = &dies_for[&x];
        for f in d.crossing(x).edges() {
            if first_for.contains(&f) {
                continue; // cut back to the fresh vertex instead
            }
            let pos = d
                .crossing(x)
                .position_on(f)
                .expect("a dying crossing lies on both of its edges");
            glue.insert(Dart::fwd(f, pos), Dart::fwd(f, pos + 1));
            glue.insert(Dart::bwd(f, pos + 1), Dart::bwd(f, pos));
        }
    }

    // ---- trace the faces of the modified planarization -------------------
    // Orbit elements are surviving darts whose tail is a live node: a vertex
    // other than v, a surviving crossing, or a fresh vertex.  Following a
    // dart first resolves the glue chain (crossings its edge now passes
    // straight through), then turns at the live node reached.
    let live_tail = |a: Dart| -> bool {
        if retail.contains_key(&a) {
            return true;
        }
        match d.dart_start(a) {
            Node::V(w) => w != v,
            Node::X(x) => !dying.contains(&x),
        }
    };
    let next2 = |start: Dart| -> Dart {
        let mut a = start;
        while let Some(&b) = glue.get(&a) {
            a = b;
        }
        if rehead.contains_key(&a) {
            // Degree-one fresh vertex: the walk turns around.
            return a.rev();
        }
        let h = d.dart_end(a);
        let rot: Vec<Dart> = d
            .out_darts(h)
            .iter()
            .copied()
            .filter(|b| !removed_darts.contains(b))
            .collect();
        let i = rot
            .iter()
            .position(|&b| b == a.rev())
            .expect("the reverse of a surviving dart survives at its head");
        rot[(i + rot.len() - 1) % rot.len()]
    };

    let mut visited: BTreeSet<Dart> = BTreeSet::new();
    let mut walk_sizes: Vec<u64> = Vec::new();
    let mut link_dart: Option<Dart> = None;
    let mut outer_dart: Option<Dart> = None;
    let old_outer_root = d.outer_cell().map(|o| uf.find(o));
    for (eid, edge) in d.edges() {
        for s in 0..edge.seg_count() {
            for a in [Dart::fwd(eid, s), Dart::bwd(eid, s)] {
                if removed_darts.contains(&a) || !live_tail(a) || visited.contains(&a) {
                    continue;
                }
                let in_link = corner_set.contains(&d.cell_left_of(a));
                let mut segment_incidences = 0u64;
                let mut vertex_incidences = 0u64;
                let mut b = a;
                loop {
                    if !visited.insert(b) {
                        break;
                    }
                    debug_assert_eq!(
                        uf.find(d.cell_left_of(b)) == root,
                        in_link,
                        "a face walk stays within one merged region"
                    );
                    segment_incidences += 1;
                    let tail_is_vertex = retail.contains_key(&b)
                        || matches!(d.dart_start(b), Node::V(_));
                    if tail_is_vertex {
                        vertex_incidences += 1;
                    }
                    b = next2(b);
                    if b == a {
                        break;
                    }
                }
                if in_link {
                    walk_sizes.push(segment_incidences + vertex_incidences);
                    link_dart.get_or_insert(a);
                }
                if old_outer_root == Some(uf.find(d.cell_left_of(a))) {
                    outer_dart.get_or_insert(a);
                }
            }
        }
    }
    walk_sizes.sort_unstable();
    walk_sizes.reverse();
    let link_size: u64 = walk_sizes.iter().sum();
    let matches = predicted_size >= 0 && predicted_size as u64 == link_size;

    // ---- rebuild the modified drawing as a first-class Drawing -----------
    // Every edge keeps its id; its new crossing list is the old one minus
    // the dying crossings, and cut edges move the v end to the fresh vertex.
    // Segment indices shift accordingly.
    let new_seg = |f: EdgeId, s: u32| -> u32 {
        d.edge(f).crossings[..s as usize]
            .iter()
            .filter(|x| !dying.contains(x))
            .count() as u32
    };
    let remap = |a: Dart| -> Dart {
        Dart {
            edge: a.edge,
            seg: new_seg(a.edge, a.seg),
            dir: a.dir,
        }
    };

    let mut spec = DrawingSpec::new();
    spec.surface = match d.surface() {
        Surface::Sphere => Surface::Sphere,
        Surface::Plane { .. } => Surface::Plane {
            outer: remap(outer_dart.expect("some face inherits the unbounded cell")),
        },
    };
    spec.vertices = d.vertices().filter(|&w| w != v).collect();
    spec.vertices.extend(fresh_vertices.iter().map(|&(z, _, _)| z));
    let moved_end: BTreeMap<EdgeId, (VertexId, EdgeEnd)> = fresh_vertices
        .iter()
        .map(|&(z, e, end)| (e, (z, end)))
        .collect();
    for (eid, edge) in d.edges() {
        if removed_whole.contains(&eid) {
            continue;
        }
        let (mut source, mut target) = (edge.source, edge.target);
        match moved_end.get(&eid) {
            Some(&(z, EdgeEnd::Source)) => source = z,
            Some(&(z, EdgeEnd::Target)) => target = z,
            None => {}
        }
        spec.edges.push(EdgeSpec {
            id: eid,
            source,
            target,
            crossings: edge
                .crossings
                .iter()
                .copied()
                .filter(|x| !dying.contains(x))
                .collect(),
        });
    }
    for (xid, x) in d.crossings() {
        if dying.contains(&xid) {
            continue;
        }
        spec.crossings.push(CrossingSpec {
            id: xid,
            edges: (x.edges()[0], x.edges()[1]),
        });
    }
    for w in d.vertices().filter(|&w| w != v) {
        let rot: Vec<(EdgeId, EdgeEnd)> = d
            .vertex_rotation(w)
            .iter()
            .copied()
            .filter(|(e, _)| !removed_whole.contains(e))
            .collect();
        spec.vertex_rotations.push((w, rot));
    }
    for &(z, e, end) in &fresh_vertices {
        spec.vertex_rotations.push((z, alloc::vec![(e, end)]));
    }
    for (xid, _) in d.crossings() {
        if dying.contains(&xid) {
            continue;
        }
        let ends = d.crossing_rotation(xid).map(|se| SegEnd {
            edge: se.edge,
            seg: new_seg(se.edge, se.seg),
        });
        spec.crossing_rotations.push((xid, ends));
    }

    let (residual, link_cell) = match Drawing::build(spec) {
        Ok(r) => {
            let cell = link_dart.map(|a| r.cell(r.cell_left_of(remap(a))).clone());
            if let Some(c) = &cell {
                debug_assert_eq!(c.size, link_size, "rebuilt link cell has the traced size");
            }
            (Some(r), cell)
        }
        Err(BuildError::DisconnectedPlanarization) => (None, None),
        Err(other) => panic!("residual drawing failed to rebuild: {other}"),
    };

    Ok(VertexLink {
        vertex: v,
        corner_cells,
        predicted_size,
        link_size,
        walk_sizes,
        matches,
        residual,
        link_cell,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
