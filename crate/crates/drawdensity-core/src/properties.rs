//! Structural drawing properties: simplicity, lenses and homotopy,
//! filledness, bipartitions.
//!
//! # Lenses
//!
//! A *lens* of two edges `e`, `f` is a region bounded by a closed curve
//! made of exactly two contiguous arcs, one along each edge.  Its two
//! delimiting points are common points of the edges — shared endpoints or
//! crossings — that are consecutive among the common points along *both*
//! edges (a pair not consecutive on one of them does not bound a
//! two-arc curve).
//!
//! On the sphere neither side of the curve is canonically the "inside",
//! so a lens is *empty* when either side contains no vertex and no
//! crossing strictly off the curve.  A drawing is *non-homotopic* when it
//! has no empty lens.  Sides are computed combinatorially: cells are
//! merged across every segment that is not part of the curve, which — the
//! curve being a simple closed curve on the sphere — leaves exactly two
//! classes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::drawing::{Dart, Drawing, EdgeId, Node, VertexId};
use crate::util::UnionFind;

// ---------------------------------------------------------------------------
// Simplicity
// ---------------------------------------------------------------------------

/// How a pair of edges violates simplicity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SimplicityDefect {
    /// The edges share both endpoints.
    ParallelEdges,
    /// The edges share an endpoint and also cross.
    AdjacentCrossing,
    /// The edges cross more than once.
    DoubleCrossing,
}

/// A pair of edges with two or more common points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicityViolation {
    pub edges: (EdgeId, EdgeId),
    pub defect: SimplicityDefect,
    /// All common points of the pair (shared endpoints and crossings).
    pub common_points: Vec<Node>,
}

impl fmt::Display for SimplicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.defect {
            SimplicityDefect::ParallelEdges => "parallel edges",
            SimplicityDefect::AdjacentCrossing => "crossing adjacent edges",
            SimplicityDefect::DoubleCrossing => "edges crossing twice",
        };
        write!(
            f,
            "{kind}: {} and {} share {} points",
            self.edges.0,
            self.edges.1,
            self.common_points.len()
        )
    }
}

/// All common points of two distinct edges: shared endpoints first, then
/// crossings of the pair, each as a planarization node.
fn common_points(d: &Drawing, e: EdgeId, f: EdgeId) -> Vec<Node> {
    let ee = d.edge(e);
    let fe = d.edge(f);
    let mut pts = Vec::new();
    for v in [ee.source, ee.target] {
        if v == fe.source || v == fe.target {
            pts.push(Node::V(v));
        }
    }
    for &x in &ee.crossings {
        if d.crossing(x).other_edge(e) == Some(f) {
            pts.push(Node::X(x));
        }
    }
    pts
}

/// Every edge pair sharing at least two points, with the defect kind.
pub fn simplicity_violations(d: &Drawing) -> Vec<SimplicityViolation> {
    let ids: Vec<EdgeId> = d.edges().map(|(e, _)| e).collect();
    let mut out = Vec::new();
    for (i, &e) in ids.iter().enumerate() {
        for &f in &ids[i + 1..] {
            let pts = common_points(d, e, f);
            if pts.len() < 2 {
                continue;
            }
            let shared_vertices = pts.iter().filter(|n| matches!(n, Node::V(_))).count();
            let crossings = pts.len() - shared_vertices;
            let defect = if shared_vertices == 2 {
                SimplicityDefect::ParallelEdges
            } else if shared_vertices == 1 && crossings >= 1 {
                SimplicityDefect::AdjacentCrossing
            } else {
                SimplicityDefect::DoubleCrossing
            };
            out.push(SimplicityViolation {
                edges: (e, f),
                defect,
                common_points: pts,
            });
        }
    }
    out
}

/// True iff any two edges share at most one point (no parallel edges, no
/// crossing adjacent edges, no pair crossing twice).
pub fn is_simple(d: &Drawing) -> bool {
    simplicity_violations(d).is_empty()
}

// ---------------------------------------------------------------------------
// Lenses and homotopy
// ---------------------------------------------------------------------------

/// A two-arc region bounded by parts of two edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lens {
    pub edges: (EdgeId, EdgeId),
    /// The two delimiting common points.
    pub delimiters: (Node, Node),
    /// Inclusive segment ranges of each edge forming the boundary arcs.
    pub arcs: ((u32, u32), (u32, u32)),
    /// One vertex or crossing strictly off the boundary curve on each of
    /// the two sides, when one exists.
    pub side_witnesses: (Option<Node>, Option<Node>),
}

impl Lens {
    /// Empty lenses witness homotopic edge parts: some side of the curve
    /// holds no vertex and no crossing.
    pub fn is_empty(&self) -> bool {
        self.side_witnesses.0.is_none() || self.side_witnesses.1.is_none()
    }
}

impl fmt::Display for Lens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lens of {} and {} between {} and {}",
            self.edges.0, self.edges.1, self.delimiters.0, self.delimiters.1
        )?;
        match (&self.side_witnesses.0, &self.side_witnesses.1) {
            (Some(a), Some(b)) => write!(f, " (witnesses {a} | {b})"),
            _ => write!(f, " (empty)"),
        }
    }
}

/// Position of a common point along an edge, as a slot in `0..=k+1`:
/// source 0, the `i`-th crossing `i+1`, target `k+1`.
fn slot_on(d: &Drawing, e: EdgeId, p: Node) -> u32 {
    let edge = d.edge(e);
    match p {
        Node::V(v) if v == edge.source => 0,
        Node::V(v) => {
            debug_assert_eq!(v, edge.target);
            edge.crossings.len() as u32 + 1
        }
        Node::X(x) => {
            let pos = d
                .crossing(x)
                .position_on(e)
                .expect("common point must lie on the edge");
            pos + 1
        }
    }
}

/// All lenses of the drawing, witnessed or not, in deterministic order.
pub fn find_lenses(d: &Drawing) -> Vec<Lens> {
    let ids: Vec<EdgeId> = d.edges().map(|(e, _)| e).collect();
    let mut out = Vec::new();
    for (i, &e) in ids.iter().enumerate() {
        for &f in &ids[i + 1..] {
            let pts = common_points(d, e, f);
            if pts.len() < 2 {
                continue;
            }
            // Order the common points along each edge.
            let mut along_e: Vec<(u32, Node)> =
                pts.iter().map(|&p| (slot_on(d, e, p), p)).collect();
            along_e.sort_unstable();
            let order_f: BTreeMap<Node, u32> =
                pts.iter().map(|&p| (p, slot_on(d, f, p))).collect();
            for w in along_e.windows(2) {
                let (p, q) = (w[0].1, w[1].1);
                // Consecutive along e by construction; require the same
                // along f.
                let (fp, fq) = (order_f[&p], order_f[&q]);
                let between = pts
                    .iter()
                    .any(|&r| order_f[&r] > fp.min(fq) && order_f[&r] < fp.max(fq));
                if between {
                    continue;
                }
                out.push(build_lens(d, e, f, p, q));
            }
        }
    }
    out
}

fn build_lens(d: &Drawing, e: EdgeId, f: EdgeId, p: Node, q: Node) -> Lens {
    // Inclusive segment ranges of the two arcs: between slots a < b the
    // covered segments are a..=b−1.
    let range = |edge: EdgeId| -> (u32, u32) {
        let (a, b) = (slot_on(d, edge, p), slot_on(d, edge, q));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (lo, hi - 1)
    };
    let arc_e = range(e);
    let arc_f = range(f);

    // Nodes on the boundary curve: the delimiters plus every node interior
    // to either arc.
    let mut curve_nodes = BTreeSet::new();
    curve_nodes.insert(p);
    curve_nodes.insert(q);
    let mut curve_segs = BTreeSet::new();
    for (edge, (lo, hi)) in [(e, arc_e), (f, arc_f)] {
        for s in lo..=hi {
            curve_segs.insert((edge, s));
            let (tail, head) = d.seg_ends(edge, s);
            curve_nodes.insert(tail);
            curve_nodes.insert(head);
        }
    }

    // Merge cells across every segment not on the curve; the simple closed
    // curve leaves exactly two classes.
    let mut uf = UnionFind::new(d.cells().len());
    for (eid, edge) in d.edges() {
        for s in 0..edge.seg_count() {
            if curve_segs.contains(&(eid, s)) {
                continue;
            }
            let dart = Dart::fwd(eid, s);
            uf.union(d.cell_left_of(dart), d.cell_left_of(dart.rev()));
        }
    }
    let probe = Dart::fwd(e, arc_e.0);
    let side_a = uf.find(d.cell_left_of(probe));
    let side_b = uf.find(d.cell_left_of(probe.rev()));
    debug_assert_ne!(side_a, side_b, "a lens curve must have two sides");
    debug_assert_eq!(uf.roots().len(), 2, "a lens curve separates the sphere");

    // First witness per side: any node off the curve, assigned to the side
    // of its incident cells (all of them lie on one side).
    let mut witness_a = None;
    let mut witness_b = None;
    let mut all_nodes: Vec<Node> = d.vertices().map(Node::V).collect();
    all_nodes.extend(d.crossings().map(|(x, _)| Node::X(x)));
    for n in all_nodes {
        if curve_nodes.contains(&n) {
            continue;
        }
        let out_darts = d.out_darts(n);
        debug_assert!(!out_darts.is_empty(), "connected drawing with edges");
        let side = uf.find(d.cell_left_of(out_darts[0]));
        if side == side_a {
            witness_a.get_or_insert(n);
        } else {
            witness_b.get_or_insert(n);
        }
        if witness_a.is_some() && witness_b.is_some() {
            break;
        }
    }

    Lens {
        edges: (e, f),
        delimiters: (p, q),
        arcs: (arc_e, arc_f),
        side_witnesses: (witness_a, witness_b),
    }
}

/// The lenses with an unwitnessed side, in deterministic order.
pub fn find_empty_lenses(d: &Drawing) -> Vec<Lens> {
    find_lenses(d).into_iter().filter(Lens::is_empty).collect()
}

/// True iff every lens contains a vertex or crossing on both sides of its
/// curve — the weak homotopy condition all counting lemmas assume.
pub fn is_non_homotopic(d: &Drawing) -> bool {
    find_empty_lenses(d).is_empty()
}

// ---------------------------------------------------------------------------
// Filledness
// ---------------------------------------------------------------------------

/// Pairs of distinct vertices sharing a cell without an uncrossed edge
/// between them on that cell's boundary, as `(cell id, u, v)`.
pub fn unfilled_pairs(d: &Drawing) -> Vec<(usize, VertexId, VertexId)> {
    let mut out = Vec::new();
    for c in d.cells() {
        // Endpoint pairs of uncrossed boundary edges.
        let mut joined: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for &(_, dart) in &c.walk {
            let edge = d.edge(dart.edge);
            if edge.crossings.is_empty() {
                let (u, v) = (edge.source, edge.target);
                joined.insert((u.min(v), u.max(v)));
            }
        }
        let vs: Vec<VertexId> = c.distinct_vertices.iter().copied().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !joined.contains(&(u, v)) {
                    out.push((c.id, u, v));
                }
            }
        }
    }
    out
}

/// True iff any two distinct vertices sharing a cell are joined by an
/// uncrossed edge on that cell's boundary.
pub fn is_filled(d: &Drawing) -> bool {
    unfilled_pairs(d).is_empty()
}

/// Largest number of distinct vertices incident to a single cell.
pub fn max_distinct_vertices_per_cell(d: &Drawing) -> u64 {
    d.cells()
        .iter()
        .map(|c| c.distinct_vertices.len() as u64)
        .max()
        .unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Bipartitions
// ---------------------------------------------------------------------------

/// A proper 2-coloring of the vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bipartition {
    pub white: BTreeSet<VertexId>,
    pub black: BTreeSet<VertexId>,
}

/// Witness that the graph is not bipartite: a closed walk of odd length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NotBipartite {
    pub odd_cycle: Vec<VertexId>,
}

impl fmt::Display for NotBipartite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "odd cycle:")?;
        for v in &self.odd_cycle {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for NotBipartite {}

/// 2-colors the underlying graph, or returns an odd cycle.  The smallest
/// vertex of each component is colored white, so the result is
/// deterministic.
pub fn bipartition(d: &Drawing) -> Result<Bipartition, NotBipartite> {
    let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> =
        d.vertices().map(|v| (v, Vec::new())).collect();
    for (_, edge) in d.edges() {
        adjacency.get_mut(&edge.source).unwrap().push(edge.target);
        adjacency.get_mut(&edge.target).unwrap().push(edge.source);
    }

    let mut color: BTreeMap<VertexId, bool> = BTreeMap::new();
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for root in d.vertices() {
        if color.contains_key(&root) {
            continue;
        }
        color.insert(root, true);
        let mut queue = alloc::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = color[&u];
            for &w in &adjacency[&u] {
                match color.get(&w) {
                    None => {
                        color.insert(w, !cu);
                        parent.insert(w, u);
                        queue.push_back(w);
                    }
                    Some(&cw) if cw == cu => {
                        return Err(NotBipartite {
                            odd_cycle: odd_cycle_through(&parent, u, w),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }

    let mut white = BTreeSet::new();
    let mut black = BTreeSet::new();
    for (v, c) in color {
        if c {
            white.insert(v);
        } else {
            black.insert(v);
        }
    }
    Ok(Bipartition { white, black })
}

/// Closed odd walk through the conflict edge `u`–`w`: walk both vertices
/// up the BFS forest until the paths meet.
fn odd_cycle_through(
    parent: &BTreeMap<VertexId, VertexId>,
    u: VertexId,
    w: VertexId,
) -> Vec<VertexId> {
    let ancestors = |mut v: VertexId| {
        let mut path = alloc::vec![v];
        while let Some(&p) = parent.get(&v) {
            path.push(p);
            v = p;
        }
        path
    };
    let pu = ancestors(u);
    let pw = ancestors(w);
    let in_pu: BTreeSet<VertexId> = pu.iter().copied().collect();
    let meet = *pw.iter().find(|v| in_pu.contains(v)).expect("same tree");
    let mut cycle: Vec<VertexId> = pu.iter().copied().take_while(|&v| v != meet).collect();
    cycle.push(meet);
    let tail: Vec<VertexId> = pw.iter().copied().take_while(|&v| v != meet).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
