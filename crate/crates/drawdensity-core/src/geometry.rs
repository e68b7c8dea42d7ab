//! Exact-rational polyline drawings in the plane.
//!
//! A [`GeomDrawing`] places vertices at rational points and routes each
//! edge as a polyline (straight pieces joined at bend points).  Everything
//! derived from it — crossings, angular orders, right angles, face
//! structure — is decided by exact integer sign computations on rational
//! coordinates.  There is no epsilon anywhere: a drawing either is in
//! general position or the offending contact is reported.
//!
//! The module provides four independent views of the same picture:
//!
//! * [`compute_arrangement`] finds all proper crossings and their order
//!   along each edge, rejecting every degenerate contact (touching
//!   curves, collinear overlaps, triple points, vertices on edges,
//!   self-intersecting edges).
//! * [`to_combinatorial`] converts the arrangement into a validated
//!   [`Drawing`] on the plane: rotations are read off the exact angular
//!   order of directions, and the unbounded cell is identified from the
//!   lowest point of the figure.
//! * [`geometric_cells`] walks the faces of the arrangement directly on
//!   coordinates, without touching the combinatorial pipeline, and
//!   returns each face's (vertex-incidence, segment-incidence) count.
//!   Agreement between this census and the converted drawing's cells is
//!   the strongest cross-check the test-suite has: the two computations
//!   share no code past the crossing finder.
//! * [`rac_report`] measures what only geometry can see — bend counts and
//!   crossing angles — and packages them as [`RacFacts`] for the
//!   inequality catalog's right-angle entries.
//!
//! [`random_geom_drawing`] produces seeded random drawings in general
//! position for fuzzing; degenerate attempts are discarded and redrawn
//! rather than perturbed, so accepted outputs satisfy the same exact
//! invariants as hand-made ones.
//!
//! Conventions: rotations are counterclockwise, a cell lies to the left
//! of its boundary darts, and `y` grows upwards.  The unbounded cell is
//! found at the lexicographically lowest (by `y`, then `x`) polyline
//! breakpoint: every edge direction there points weakly upwards, so the
//! region straight below that point is unbounded, and the dart having it
//! on the left is read off the local angular order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::RacFacts;
use crate::drawing::{
    BuildError, Cell, CrossingId, Dart, Drawing, DrawingSpec, EdgeEnd, EdgeId, SegEnd, Surface,
    VertexId,
};
use crate::{rat, Rat};

// ---------------------------------------------------------------------------
// Points and exact predicates
// ---------------------------------------------------------------------------

/// A point (or direction vector) with exact rational coordinates.
///
/// The derived ordering is lexicographic by `x`, then `y`; it exists so
/// points can key ordered maps, and carries no geometric meaning.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point with integer coordinates; the common case in fixtures.
pub fn pt(x: i64, y: i64) -> Point {
    Point {
        x: Rat::from_integer(BigInt::from(x)),
        y: Rat::from_integer(BigInt::from(y)),
    }
}

fn sub(a: &Point, b: &Point) -> Point {
    Point {
        x: a.x.clone() - b.x.clone(),
        y: a.y.clone() - b.y.clone(),
    }
}

/// The cross product of two direction vectors; its sign is the turn sense.
fn cross(a: &Point, b: &Point) -> Rat {
    a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone()
}

fn dot(a: &Point, b: &Point) -> Rat {
    a.x.clone() * b.x.clone() + a.y.clone() * b.y.clone()
}

fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of the turn `a → b → c`: +1 left (counterclockwise), −1 right.
fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    sign(&cross(&sub(b, a), &sub(c, a)))
}

/// Whether `p` lies on the closed segment `a`–`b`.
fn on_closed_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Which half of the circle a direction points into: `0` for angles in
/// `[0°, 180°)` (up, including due right), `1` for the rest.  Within one
/// half, `cross` alone orders directions counterclockwise.
fn half(v: &Point) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Counterclockwise order of direction vectors, starting just above the
/// positive `x`-axis.  Total on pairwise non-parallel directions (plus
/// exact opposites), which is all the callers ever compare.
fn cmp_ccw(a: &Point, b: &Point) -> core::cmp::Ordering {
    half(a).cmp(&half(b)).then_with(|| match sign(&cross(a, b)) {
        1 => core::cmp::Ordering::Less,
        -1 => core::cmp::Ordering::Greater,
        _ => core::cmp::Ordering::Equal,
    })
}

/// Whether direction `c` lies strictly inside the counterclockwise wedge
/// from `a` to `b`.  Callers guarantee `c` is parallel to neither bound.
fn in_ccw_wedge(a: &Point, b: &Point, c: &Point) -> bool {
    match sign(&cross(a, b)) {
        1 => sign(&cross(a, c)) == 1 && sign(&cross(c, b)) == 1,
        -1 => sign(&cross(a, c)) == 1 || sign(&cross(c, b)) == 1,
        // a and b are opposite: the wedge is the open half-plane left of a.
        _ => sign(&cross(a, c)) == 1,
    }
}

/// How two closed segments meet.
enum Meeting {
    Disjoint,
    /// A single point interior to both segments.
    Proper(Point),
    /// A single point that is an endpoint of at least one segment.
    Touch(Point),
    /// A common sub-segment of positive length.
    Overlap,
}

fn meet(a: &Point, b: &Point, c: &Point, d: &Point) -> Meeting {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);

    if o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0 {
        // All four points on one line: compare 1-dimensional intervals
        // along whichever axis the line is not perpendicular to.
        let key = |p: &Point| {
            if a.x != b.x {
                p.x.clone()
            } else {
                p.y.clone()
            }
        };
        let (ka, kb) = (key(a).min(key(b)), key(a).max(key(b)));
        let (kc, kd) = (key(c).min(key(d)), key(c).max(key(d)));
        let lo = ka.max(kc);
        let hi = kb.min(kd);
        return if lo > hi {
            Meeting::Disjoint
        } else if lo == hi {
            let at = [a, b, c, d]
                .into_iter()
                .find(|p| key(p) == lo)
                .expect("the shared coordinate comes from an endpoint");
            Meeting::Touch(at.clone())
        } else {
            Meeting::Overlap
        };
    }

    if o1 * o2 < 0 && o3 * o4 < 0 {
        // The supporting lines cross strictly inside both segments; solve
        // a + t(b−a) with t = ((c−a) × (d−c)) / ((b−a) × (d−c)).
        let r = sub(b, a);
        let s = sub(d, c);
        let t = cross(&sub(c, a), &s) / cross(&r, &s);
        return Meeting::Proper(Point {
            x: a.x.clone() + t.clone() * r.x,
            y: a.y.clone() + t * r.y,
        });
    }

    for (p, (s, t)) in [(c, (a, b)), (d, (a, b)), (a, (c, d)), (b, (c, d))] {
        if on_closed_segment(s, t, p) {
            return Meeting::Touch(p.clone());
        }
    }
    Meeting::Disjoint
}

// ---------------------------------------------------------------------------
// Input model
// ---------------------------------------------------------------------------

/// An edge routed as a polyline: straight from the source vertex through
/// the bend points to the target vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeomEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub bends: Vec<Point>,
}

/// A drawing given by coordinates: vertex points plus polyline edges.
///
/// Validity (distinct vertex points, simple polylines, only transversal
/// pairwise crossings) is not checked on construction; every operation
/// that interprets the geometry checks it and reports the first offending
/// contact as a [`GeomError`].
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct GeomDrawing {
    pub vertices: BTreeMap<VertexId, Point>,
    pub edges: BTreeMap<EdgeId, GeomEdge>,
}

impl GeomDrawing {
    pub fn new() -> GeomDrawing {
        GeomDrawing::default()
    }

    pub fn add_vertex(&mut self, v: u32, at: Point) -> VertexId {
        let id = VertexId(v);
        self.vertices.insert(id, at);
        id
    }

    pub fn add_edge(&mut self, id: u32, source: u32, target: u32, bends: Vec<Point>) -> EdgeId {
        let eid = EdgeId(id);
        self.edges.insert(
            eid,
            GeomEdge {
                source: VertexId(source),
                target: VertexId(target),
                bends,
            },
        );
        eid
    }

    /// The full point sequence of an edge: source, bends, target.
    /// `None` when the edge or either endpoint is missing.
    pub fn polyline(&self, e: EdgeId) -> Option<Vec<Point>> {
        let edge = self.edges.get(&e)?;
        let mut points = Vec::with_capacity(edge.bends.len() + 2);
        points.push(self.vertices.get(&edge.source)?.clone());
        points.extend(edge.bends.iter().cloned());
        points.push(self.vertices.get(&edge.target)?.clone());
        Some(points)
    }
}

/// Why a [`GeomDrawing`] cannot be interpreted, converted or generated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeomError {
    /// Two vertices share one point.
    CoincidentVertices(VertexId, VertexId),
    /// An edge names a vertex that has no point.
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    /// An edge joins a vertex to itself.
    LoopEdge(EdgeId),
    /// Two consecutive polyline points of the edge coincide.
    ZeroLengthPiece(EdgeId),
    /// Two pieces of the same edge meet outside their shared bend.
    EdgeCrossesItself(EdgeId),
    /// A vertex point lies on an edge curve it is not an endpoint of.
    VertexOnEdge { vertex: VertexId, edge: EdgeId },
    /// Two edge curves meet non-transversally (at a bend or tangentially).
    TouchingContact(EdgeId, EdgeId),
    /// Two edge curves share a sub-segment of positive length.
    OverlappingContact(EdgeId, EdgeId),
    /// Three edge curves pass through one point.
    TriplePoint(EdgeId, EdgeId, EdgeId),
    /// The arrangement is sound but the combinatorial drawing built from
    /// it fails validation (for instance a disconnected planarization).
    Combinatorial(BuildError),
    /// Convex-bend corners are only counted on bounded cells.
    UnboundedCell,
    /// The cell does not come from a drawing converted from this geometry.
    ForeignCell,
    /// An edge probability outside `[0, 1]`.
    BadProbability,
    /// No random drawing in general position emerged within the retry
    /// budget.
    GenerationFailed { attempts: u32 },
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::CoincidentVertices(v, w) => {
                write!(f, "vertices {v} and {w} are placed at the same point")
            }
            GeomError::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} ends at vertex {vertex}, which has no point")
            }
            GeomError::LoopEdge(e) => write!(f, "edge {e} joins a vertex to itself"),
            GeomError::ZeroLengthPiece(e) => {
                write!(f, "edge {e} repeats a polyline point, making a zero-length piece")
            }
            GeomError::EdgeCrossesItself(e) => write!(f, "edge {e} intersects itself"),
            GeomError::VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} lies on edge {edge}")
            }
            GeomError::TouchingContact(e, g) => {
                write!(f, "edges {e} and {g} touch without crossing transversally")
            }
            GeomError::OverlappingContact(e, g) => {
                write!(f, "edges {e} and {g} overlap along a segment")
            }
            GeomError::TriplePoint(e, g, h) => {
                write!(f, "edges {e}, {g} and {h} pass through a common point")
            }
            GeomError::Combinatorial(e) => write!(f, "converted drawing is invalid: {e}"),
            GeomError::UnboundedCell => {
                write!(f, "the unbounded cell has no convex-bend count")
            }
            GeomError::ForeignCell => {
                write!(f, "the cell does not belong to a drawing converted from this geometry")
            }
            GeomError::BadProbability => {
                write!(f, "edge probability must lie between 0 and 1")
            }
            GeomError::GenerationFailed { attempts } => {
                write!(f, "no drawing in general position found in {attempts} attempts")
            }
        }
    }
}

impl core::error::Error for GeomError {}

// ---------------------------------------------------------------------------
// Arrangement computation
// ---------------------------------------------------------------------------

/// One proper crossing of two edge curves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossingEvent {
    pub id: CrossingId,
    pub point: Point,
    /// The two crossing edges, smaller id first.
    pub edges: (EdgeId, EdgeId),
}

/// All crossings of a drawing, globally and in order along each edge.
///
/// Crossing ids are assigned in lexicographic point order, so equal
/// inputs always produce equal arrangements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrangement {
    pub crossings: Vec<CrossingEvent>,
    /// For every edge (crossed or not), its crossings ordered from source
    /// to target.
    pub along_edge: BTreeMap<EdgeId, Vec<CrossingId>>,
}

/// Position of a point along an edge: piece index, then exact parameter
/// within the piece.  Bends sit at parameter 0 of the following piece.
type ArcPos = (usize, Rat);

/// A crossing before ids are assigned, with the local data conversion
/// needs: for each of the two edges, the arc position and the exact
/// direction of travel through the point.
struct RawCrossing {
    point: Point,
    e: EdgeId,
    e_pos: ArcPos,
    e_dir: Point,
    f: EdgeId,
    f_pos: ArcPos,
    f_dir: Point,
}

/// Validated polylines plus every raw crossing; shared by all operations.
struct Scan {
    polylines: BTreeMap<EdgeId, Vec<Point>>,
    raw: Vec<RawCrossing>,
}

/// Exact parameter of `p` on the segment `a`–`b` (callers guarantee `p`
/// lies on it and the segment has positive length).
fn param_on(a: &Point, b: &Point, p: &Point) -> Rat {
    if a.x != b.x {
        (p.x.clone() - a.x.clone()) / (b.x.clone() - a.x.clone())
    } else {
        (p.y.clone() - a.y.clone()) / (b.y.clone() - a.y.clone())
    }
}

fn scan(g: &GeomDrawing) -> Result<Scan, GeomError> {
    // Vertex points pairwise distinct.
    let mut seen: BTreeMap<&Point, VertexId> = BTreeMap::new();
    for (&v, p) in &g.vertices {
        if let Some(&w) = seen.get(p) {
            return Err(GeomError::CoincidentVertices(w, v));
        }
        seen.insert(p, v);
    }

    // Assemble polylines, checking endpoints, loops and piece lengths.
    let mut polylines = BTreeMap::new();
    for (&e, edge) in &g.edges {
        for v in [edge.source, edge.target] {
            if !g.vertices.contains_key(&v) {
                return Err(GeomError::UnknownEndpoint { edge: e, vertex: v });
            }
        }
        if edge.source == edge.target {
            return Err(GeomError::LoopEdge(e));
        }
        let pts = g.polyline(e).expect("endpoints checked above");
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::ZeroLengthPiece(e));
        }
        polylines.insert(e, pts);
    }

    // No vertex on any edge curve, except each edge's own endpoints at
    // its ends.
    for (&v, p) in &g.vertices {
        for (&e, pts) in &polylines {
            let edge = &g.edges[&e];
            let last_piece = pts.len() - 2;
            for (i, w) in pts.windows(2).enumerate() {
                if (edge.source == v && i == 0) || (edge.target == v && i == last_piece) {
                    continue;
                }
                if on_closed_segment(&w[0], &w[1], p) {
                    return Err(GeomError::VertexOnEdge { vertex: v, edge: e });
                }
            }
        }
    }

    // Each polyline is simple: non-adjacent pieces are disjoint, adjacent
    // pieces share exactly their bend.
    for (&e, pts) in &polylines {
        let n = pts.len() - 1;
        for i in 0..n {
            for j in (i + 1)..n {
                let m = meet(&pts[i], &pts[i + 1], &pts[j], &pts[j + 1]);
                let fine = match m {
                    Meeting::Disjoint => true,
                    Meeting::Touch(at) => j == i + 1 && at == pts[j],
                    Meeting::Proper(_) | Meeting::Overlap => false,
                };
                if !fine {
                    return Err(GeomError::EdgeCrossesItself(e));
                }
            }
        }
    }

    // Pairwise crossings.  A touch is legal only at a shared endpoint
    // vertex (the vertex scan above already pinned those to the terminal
    // pieces).
    let mut raw: Vec<RawCrossing> = Vec::new();
    let ids: Vec<EdgeId> = polylines.keys().copied().collect();
    for (a, &e) in ids.iter().enumerate() {
        for &f in &ids[a + 1..] {
            let ee = &g.edges[&e];
            let fe = &g.edges[&f];
            let shared: Vec<&Point> = [ee.source, ee.target]
                .iter()
                .filter(|v| fe.source == **v || fe.target == **v)
                .map(|v| &g.vertices[v])
                .collect();
            let (pe, pf) = (&polylines[&e], &polylines[&f]);
            for (i, we) in pe.windows(2).enumerate() {
                for (j, wf) in pf.windows(2).enumerate() {
                    match meet(&we[0], &we[1], &wf[0], &wf[1]) {
                        Meeting::Disjoint => {}
                        Meeting::Overlap => return Err(GeomError::OverlappingContact(e, f)),
                        Meeting::Touch(at) => {
                            if !shared.contains(&&at) {
                                return Err(GeomError::TouchingContact(e, f));
                            }
                        }
                        Meeting::Proper(point) => {
                            let e_pos = (i, param_on(&we[0], &we[1], &point));
                            let f_pos = (j, param_on(&wf[0], &wf[1], &point));
                            raw.push(RawCrossing {
                                point,
                                e,
                                e_pos,
                                e_dir: sub(&we[1], &we[0]),
                                f,
                                f_pos,
                                f_dir: sub(&wf[1], &wf[0]),
                            });
                        }
                    }
                }
            }
        }
    }

    // Triple points: two crossings at one point, or a crossing through a
    // third edge's bend.  (A crossing on a vertex or on a bend of its own
    // two edges is impossible here: those are touches, caught above.)
    let mut bend_owner: BTreeMap<&Point, EdgeId> = BTreeMap::new();
    for (&e, edge) in &g.edges {
        for b in &edge.bends {
            bend_owner.insert(b, e);
        }
    }
    let mut at_point: BTreeMap<&Point, &RawCrossing> = BTreeMap::new();
    for rc in &raw {
        if let Some(other) = at_point.insert(&rc.point, rc) {
            let mut three: Vec<EdgeId> = vec![rc.e, rc.f, other.e, other.f];
            three.sort_unstable();
            three.dedup();
            return Err(GeomError::TriplePoint(three[0], three[1], three[2]));
        }
        if let Some(&third) = bend_owner.get(&rc.point) {
            let mut three = [rc.e, rc.f, third];
            three.sort_unstable();
            return Err(GeomError::TriplePoint(three[0], three[1], three[2]));
        }
    }

    Ok(Scan { polylines, raw })
}

/// Computes all crossings of the drawing, rejecting degenerate contacts.
pub fn compute_arrangement(g: &GeomDrawing) -> Result<Arrangement, GeomError> {
    let scan = scan(g)?;
    Ok(arrangement_of(g, &scan))
}

fn arrangement_of(g: &GeomDrawing, scan: &Scan) -> Arrangement {
    // Ids in point order.
    let mut by_point: BTreeMap<&Point, &RawCrossing> = BTreeMap::new();
    for rc in &scan.raw {
        by_point.insert(&rc.point, rc);
    }
    let mut crossings = Vec::with_capacity(scan.raw.len());
    let mut id_of: BTreeMap<&Point, CrossingId> = BTreeMap::new();
    for (i, (&point, rc)) in by_point.iter().enumerate() {
        let id = CrossingId(i as u32);
        id_of.insert(point, id);
        crossings.push(CrossingEvent {
            id,
            point: point.clone(),
            edges: (rc.e.min(rc.f), rc.e.max(rc.f)),
        });
    }

    // Order along each edge by arc position.
    let mut along_edge: BTreeMap<EdgeId, Vec<CrossingId>> = BTreeMap::new();
    for &e in g.edges.keys() {
        let ids = positions_on(scan, e)
            .into_iter()
            .map(|(_, rc)| id_of[&rc.point])
            .collect();
        along_edge.insert(e, ids);
    }

    Arrangement {
        crossings,
        along_edge,
    }
}

// ---------------------------------------------------------------------------
// Conversion to the combinatorial model
// ---------------------------------------------------------------------------

/// Where the per-edge arc position of a crossing falls, for locating a
/// crossing within the per-edge order.
fn positions_on(scan: &Scan, e: EdgeId) -> Vec<(ArcPos, &RawCrossing)> {
    let mut v: Vec<(ArcPos, &RawCrossing)> = scan
        .raw
        .iter()
        .filter_map(|rc| {
            if rc.e == e {
                Some((rc.e_pos.clone(), rc))
            } else if rc.f == e {
                Some((rc.f_pos.clone(), rc))
            } else {
                None
            }
        })
        .collect();
    v.sort_by(|(p, _), (q, _)| p.cmp(q));
    v
}

/// The planarization segment of edge `e` that contains arc position
/// `pos`, given the edge's sorted crossing positions.
fn segment_containing(sorted: &[(ArcPos, &RawCrossing)], pos: &ArcPos) -> u32 {
    sorted.iter().take_while(|(p, _)| p < pos).count() as u32
}

/// The four outgoing segment ends of one crossing in counterclockwise
/// order.  A crossing that is event number m along an edge separates
/// that edge's segments m and m+1.
fn crossing_rotation(
    rc: &RawCrossing,
    order_on: &BTreeMap<EdgeId, Vec<(ArcPos, &RawCrossing)>>,
) -> [SegEnd; 4] {
    let me = segment_containing(&order_on[&rc.e], &rc.e_pos);
    let mf = segment_containing(&order_on[&rc.f], &rc.f_pos);
    let neg = |d: &Point| Point {
        x: -d.x.clone(),
        y: -d.y.clone(),
    };
    let mut ends = [
        (rc.e_dir.clone(), SegEnd { edge: rc.e, seg: me + 1 }),
        (neg(&rc.e_dir), SegEnd { edge: rc.e, seg: me }),
        (rc.f_dir.clone(), SegEnd { edge: rc.f, seg: mf + 1 }),
        (neg(&rc.f_dir), SegEnd { edge: rc.f, seg: mf }),
    ];
    ends.sort_by(|(a, _), (b, _)| cmp_ccw(a, b));
    [ends[0].1, ends[1].1, ends[2].1, ends[3].1]
}

/// The arrangement together with each crossing's rotation, for callers
/// that assemble one combinatorial drawing from several geometric pieces
/// rather than converting a single whole figure.  `rotations[i]` lists,
/// in counterclockwise order, the four outgoing segment ends of the
/// crossing with id `i`.
pub(crate) fn arrangement_with_rotations(
    g: &GeomDrawing,
) -> Result<(Arrangement, Vec<[SegEnd; 4]>), GeomError> {
    let scan = scan(g)?;
    let arrangement = arrangement_of(g, &scan);
    let mut id_of: BTreeMap<&Point, CrossingId> = BTreeMap::new();
    for ev in &arrangement.crossings {
        id_of.insert(&ev.point, ev.id);
    }
    let mut order_on: BTreeMap<EdgeId, Vec<(ArcPos, &RawCrossing)>> = BTreeMap::new();
    for &e in g.edges.keys() {
        order_on.insert(e, positions_on(&scan, e));
    }
    let mut rotations = vec![[SegEnd { edge: EdgeId(0), seg: 0 }; 4]; arrangement.crossings.len()];
    for rc in &scan.raw {
        rotations[id_of[&rc.point].0 as usize] = crossing_rotation(rc, &order_on);
    }
    Ok((arrangement, rotations))
}

/// Converts the drawing to the combinatorial model: crossings from the
/// arrangement, rotations from exact angular order, and the unbounded
/// cell marked (`surface = Plane`) via the lowest breakpoint of the
/// figure.  A drawing with no edges stays on the sphere, there being no
/// dart to name the outer cell by.
pub fn to_combinatorial(g: &GeomDrawing) -> Result<Drawing, GeomError> {
    let scan = scan(g)?;
    let arrangement = arrangement_of(g, &scan);

    let mut id_of: BTreeMap<&Point, CrossingId> = BTreeMap::new();
    for ev in &arrangement.crossings {
        id_of.insert(&ev.point, ev.id);
    }

    let mut spec = DrawingSpec::new();
    for &v in g.vertices.keys() {
        spec.add_vertex(v.0);
    }
    for (&e, edge) in &g.edges {
        let along: Vec<u32> = arrangement.along_edge[&e].iter().map(|x| x.0).collect();
        spec.add_edge(e.0, edge.source.0, edge.target.0, &along);
    }
    for ev in &arrangement.crossings {
        spec.add_crossing(ev.id.0, ev.edges.0 .0, ev.edges.1 .0);
    }

    // Vertex rotations: outgoing directions in counterclockwise order.
    for (&v, p) in &g.vertices {
        let mut ends: Vec<(Point, (EdgeId, EdgeEnd))> = Vec::new();
        for (&e, pts) in &scan.polylines {
            let edge = &g.edges[&e];
            if edge.source == v {
                ends.push((sub(&pts[1], p), (e, EdgeEnd::Source)));
            }
            if edge.target == v {
                ends.push((sub(&pts[pts.len() - 2], p), (e, EdgeEnd::Target)));
            }
        }
        if ends.is_empty() {
            continue;
        }
        ends.sort_by(|(a, _), (b, _)| cmp_ccw(a, b));
        spec.vertex_rotations
            .push((v, ends.into_iter().map(|(_, end)| end).collect()));
    }

    // Crossing rotations: the four outgoing segment ends in
    // counterclockwise order.  A crossing that is event number m along an
    // edge separates that edge's segments m and m+1.
    let mut order_on: BTreeMap<EdgeId, Vec<(ArcPos, &RawCrossing)>> = BTreeMap::new();
    for &e in g.edges.keys() {
        order_on.insert(e, positions_on(&scan, e));
    }
    for rc in &scan.raw {
        let x = id_of[&rc.point];
        spec.crossing_rotations
            .push((x, crossing_rotation(rc, &order_on)));
    }

    if !g.edges.is_empty() {
        spec.surface = Surface::Plane {
            outer: outer_dart(g, &scan, &order_on),
        };
    }

    Drawing::build(spec).map_err(GeomError::Combinatorial)
}

/// A dart with the unbounded region on its left.
///
/// At the lexicographically lowest (`y`, then `x`) polyline breakpoint
/// every local direction points weakly upward (a lower or left-at-equal-
/// height continuation would end at a lower breakpoint), so straight down
/// lies in the unbounded cell.  The cell to the left of a dart occupies,
/// at each walk corner, the counterclockwise wedge from the dart's
/// outgoing direction to its rotation successor; picking the dart whose
/// wedge contains straight down names the unbounded cell.
fn outer_dart(
    g: &GeomDrawing,
    scan: &Scan,
    order_on: &BTreeMap<EdgeId, Vec<(ArcPos, &RawCrossing)>>,
) -> Dart {
    // The lowest breakpoint, over edge polylines only.
    let (mut best, mut best_edge, mut best_idx): (Option<&Point>, EdgeId, usize) =
        (None, EdgeId(0), 0);
    for (&e, pts) in &scan.polylines {
        for (i, p) in pts.iter().enumerate() {
            let lower = match best {
                None => true,
                Some(b) => (&p.y, &p.x) < (&b.y, &b.x),
            };
            if lower {
                best = Some(p);
                best_edge = e;
                best_idx = i;
            }
        }
    }
    let p = best.expect("at least one edge, hence breakpoints");
    let pts = &scan.polylines[&best_edge];
    let down = pt(0, -1);

    if best_idx > 0 && best_idx < pts.len() - 1 {
        // A bend.  Travelling forward through it, the left side spans the
        // wedge from the outgoing direction to the reversed incoming one.
        let w = sub(&pts[best_idx + 1], p);
        let back = sub(&pts[best_idx - 1], p);
        let seg = segment_containing(&order_on[&best_edge], &(best_idx, Rat::zero()));
        return if in_ccw_wedge(&w, &back, &down) {
            Dart::fwd(best_edge, seg)
        } else {
            Dart::bwd(best_edge, seg)
        };
    }

    // A vertex.  All directions lie in [0°, 180°); the wedge of the dart
    // with the largest direction wraps through straight down.
    let v = if best_idx == 0 {
        g.edges[&best_edge].source
    } else {
        g.edges[&best_edge].target
    };
    let mut steepest: Option<(Point, Dart)> = None;
    for (&e, pts) in &scan.polylines {
        let edge = &g.edges[&e];
        let last_seg = order_on[&e].len() as u32;
        let mut consider = |dir: Point, dart: Dart| {
            let replace = match &steepest {
                None => true,
                Some((best_dir, _)) => cmp_ccw(best_dir, &dir) == core::cmp::Ordering::Less,
            };
            if replace {
                steepest = Some((dir, dart));
            }
        };
        if edge.source == v {
            consider(sub(&pts[1], p), Dart::fwd(e, 0));
        }
        if edge.target == v {
            consider(sub(&pts[pts.len() - 2], p), Dart::bwd(e, last_seg));
        }
    }
    steepest.expect("the lowest breakpoint belongs to an edge").1
}

// ---------------------------------------------------------------------------
// Right angles and bends
// ---------------------------------------------------------------------------

/// What geometry contributes to the right-angle drawing classes: bend
/// counts per edge and exact perpendicularity at every crossing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RacReport {
    pub bends_per_edge: BTreeMap<EdgeId, u32>,
    pub max_bends_any_edge: u32,
    pub max_bends_crossed_edge: u32,
    /// Every crossing's two direction vectors have dot product exactly 0.
    pub right_angle_crossings: bool,
    /// Crossings failing the right-angle test, in id order.
    pub skew_crossings: Vec<CrossingId>,
}

impl RacReport {
    /// Bend budget `k` respected and all crossings perpendicular.
    pub fn is_rac(&self, k: u32) -> bool {
        self.max_bends_any_edge <= k && self.right_angle_crossings
    }

    /// The summary the inequality catalog consumes.
    pub fn facts(&self) -> RacFacts {
        RacFacts {
            max_bends_any_edge: self.max_bends_any_edge,
            max_bends_crossed_edge: self.max_bends_crossed_edge,
            right_angle_crossings: self.right_angle_crossings,
        }
    }
}

/// Measures bend counts and crossing angles, exactly.
pub fn rac_report(g: &GeomDrawing) -> Result<RacReport, GeomError> {
    let scan = scan(g)?;
    let arrangement = arrangement_of(g, &scan);

    let mut crossed: BTreeSet<EdgeId> = BTreeSet::new();
    let mut skew: BTreeSet<CrossingId> = BTreeSet::new();
    let mut id_of: BTreeMap<&Point, CrossingId> = BTreeMap::new();
    for ev in &arrangement.crossings {
        id_of.insert(&ev.point, ev.id);
    }
    for rc in &scan.raw {
        crossed.insert(rc.e);
        crossed.insert(rc.f);
        if !dot(&rc.e_dir, &rc.f_dir).is_zero() {
            skew.insert(id_of[&rc.point]);
        }
    }

    let bends_per_edge: BTreeMap<EdgeId, u32> = g
        .edges
        .iter()
        .map(|(&e, edge)| (e, edge.bends.len() as u32))
        .collect();
    let max_bends_any_edge = bends_per_edge.values().copied().max().unwrap_or(0);
    let max_bends_crossed_edge = bends_per_edge
        .iter()
        .filter(|(e, _)| crossed.contains(e))
        .map(|(_, &b)| b)
        .max()
        .unwrap_or(0);

    Ok(RacReport {
        bends_per_edge,
        max_bends_any_edge,
        max_bends_crossed_edge,
        right_angle_crossings: skew.is_empty(),
        skew_crossings: skew.into_iter().collect(),
    })
}

/// Whether the drawing is a right-angle-crossing drawing with at most `k`
/// bends per edge.
pub fn is_rac(g: &GeomDrawing, k: u32) -> Result<bool, GeomError> {
    Ok(rac_report(g)?.is_rac(k))
}

/// Counts the boundary corners of a bounded cell that are bend points
/// convex toward the cell (interior angle below a half-turn).
///
/// The cell must come from [`to_combinatorial`] of this same geometry;
/// its walk is matched back onto the polylines.  Cells lie to the left of
/// their darts, so a bend is convex toward the cell exactly when the
/// travel direction turns left there.
pub fn convex_bend_corners(g: &GeomDrawing, cell: &Cell) -> Result<u64, GeomError> {
    if cell.is_outer {
        return Err(GeomError::UnboundedCell);
    }
    let scan = scan(g)?;
    let mut count = 0u64;
    for &(_, dart) in &cell.walk {
        let pts = match scan.polylines.get(&dart.edge) {
            Some(pts) => pts,
            None => return Err(GeomError::ForeignCell),
        };
        let order = positions_on(&scan, dart.edge);
        if u64::from(dart.seg) > order.len() as u64 {
            return Err(GeomError::ForeignCell);
        }
        // Bends strictly inside planarization segment `dart.seg`.
        for i in 1..pts.len() - 1 {
            if segment_containing(&order, &(i, Rat::zero())) != dart.seg {
                continue;
            }
            let turn = cross(&sub(&pts[i], &pts[i - 1]), &sub(&pts[i + 1], &pts[i]));
            let left_turn_along_travel = match dart.dir {
                crate::drawing::Dir::Fwd => sign(&turn) == 1,
                crate::drawing::Dir::Bwd => sign(&turn) == -1,
            };
            if left_turn_along_travel {
                count += 1;
            }
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// The independent cell oracle
// ---------------------------------------------------------------------------

/// Face census computed directly from coordinates: for every face of the
/// arrangement, its (vertex-incidence, segment-incidence) pair, as a
/// multiset (pair → multiplicity).
///
/// This walker shares nothing with the combinatorial pipeline beyond the
/// crossing scan: it cuts the polylines into straight arcs at bends and
/// crossings, sorts arcs around each point by exact angle, and traces
/// faces with the rotation rule.  Bend points are degree-2 way stations:
/// walking through one does not end a segment incidence, so each face's
/// segment count is the number of its walk arcs that start at a vertex or
/// crossing.
///
/// Faces of a disconnected arrangement are reported per component (the
/// walk cannot see that two components share a region); the census is
/// meaningful for the connected drawings the rest of the crate accepts.
pub fn geometric_cells(g: &GeomDrawing) -> Result<BTreeMap<(u64, u64), u64>, GeomError> {
    let scan = scan(g)?;

    #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Kind {
        Vertex,
        Crossing,
        Bend,
    }

    // Cut polylines into arcs; collect each point's kind.
    let mut kind_of: BTreeMap<Point, Kind> = BTreeMap::new();
    for p in g.vertices.values() {
        kind_of.insert(p.clone(), Kind::Vertex);
    }
    for rc in &scan.raw {
        kind_of.insert(rc.point.clone(), Kind::Crossing);
    }
    let mut arcs: Vec<(Point, Point)> = Vec::new();
    for (&e, pts) in &scan.polylines {
        for (i, w) in pts.windows(2).enumerate() {
            if i > 0 {
                kind_of.entry(w[0].clone()).or_insert(Kind::Bend);
            }
            let mut cuts: Vec<(Rat, &Point)> = scan
                .raw
                .iter()
                .filter_map(|rc| {
                    if rc.e == e && rc.e_pos.0 == i {
                        Some((rc.e_pos.1.clone(), &rc.point))
                    } else if rc.f == e && rc.f_pos.0 == i {
                        Some((rc.f_pos.1.clone(), &rc.point))
                    } else {
                        None
                    }
                })
                .collect();
            cuts.sort_by(|(s, _), (t, _)| s.cmp(t));
            let mut prev = &w[0];
            for (_, q) in &cuts {
                arcs.push((prev.clone(), (*q).clone()));
                prev = q;
            }
            arcs.push((prev.clone(), w[1].clone()));
        }
    }

    if arcs.is_empty() {
        // No edges: the whole plane is one face, every vertex on it.
        let mut census = BTreeMap::new();
        if !g.vertices.is_empty() {
            census.insert((g.vertices.len() as u64, 0), 1);
        }
        return Ok(census);
    }

    // Darts: 2*arc for forward, 2*arc+1 for backward.
    let dart_ends = |d: usize| -> (&Point, &Point) {
        let (a, b) = (&arcs[d / 2].0, &arcs[d / 2].1);
        if d.is_multiple_of(2) {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut rotations: BTreeMap<&Point, Vec<(Point, usize)>> = BTreeMap::new();
    for d in 0..2 * arcs.len() {
        let (from, to) = dart_ends(d);
        rotations.entry(from).or_default().push((sub(to, from), d));
    }
    for outgoing in rotations.values_mut() {
        outgoing.sort_by(|(a, _), (b, _)| cmp_ccw(a, b));
    }

    // Trace faces: after dart d, continue with the rotation predecessor
    // of its reverse at the head point.
    let next_in_face = |d: usize| -> usize {
        let rev = d ^ 1;
        let (head, _) = dart_ends(rev);
        let rot = &rotations[head];
        let i = rot
            .iter()
            .position(|&(_, r)| r == rev)
            .expect("every dart is registered at its tail");
        rot[(i + rot.len() - 1) % rot.len()].1
    };

    let mut census: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    let mut seen = vec![false; 2 * arcs.len()];
    for start in 0..2 * arcs.len() {
        if seen[start] {
            continue;
        }
        let (mut v_inc, mut s_inc) = (0u64, 0u64);
        let mut d = start;
        loop {
            seen[d] = true;
            let (tail, _) = dart_ends(d);
            match kind_of[tail] {
                Kind::Vertex => {
                    v_inc += 1;
                    s_inc += 1;
                }
                Kind::Crossing => s_inc += 1,
                Kind::Bend => {}
            }
            d = next_in_face(d);
            if d == start {
                break;
            }
        }
        *census.entry((v_inc, s_inc)).or_default() += 1;
    }
    Ok(census)
}

// ---------------------------------------------------------------------------
// Seeded random drawings
// ---------------------------------------------------------------------------

/// Maximum attempts before [`random_geom_drawing`] reports failure.
const GENERATION_ATTEMPTS: u32 = 64;

/// A reproducible random drawing in general position: `n` vertices at
/// random integer points, each pair joined independently with the given
/// probability, each edge routed with up to `bend_budget` random bends.
///
/// Degenerate placements (coincidences, touchings, vertices on edges) and
/// drawings whose planarization is disconnected are discarded and redrawn
/// from the same deterministic stream, so equal parameters always return
/// the identical drawing.  The probability is exact — no floating point
/// is involved — and out-of-range values are rejected.
pub fn random_geom_drawing(
    seed: u64,
    n: u32,
    edge_probability: Rat,
    bend_budget: u32,
) -> Result<GeomDrawing, GeomError> {
    if edge_probability.is_negative() || edge_probability > rat(1, 1) {
        return Err(GeomError::BadProbability);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 4 * i64::from(n.max(2)) * i64::from(n.max(2));

    'attempt: for _ in 0..GENERATION_ATTEMPTS {
        let mut g = GeomDrawing::new();
        for v in 0..n {
            g.add_vertex(v, pt(rng.gen_range(0..span), rng.gen_range(0..span)));
        }
        let mut next_edge = 0u32;
        for u in 0..n {
            for v in (u + 1)..n {
                // u32 draw < p, compared exactly: d·2³² kept in BigInt.
                let draw = BigInt::from(rng.gen::<u32>()) * edge_probability.denom();
                let scale = BigInt::from(1u64 << 32) * edge_probability.numer();
                if draw >= scale {
                    continue;
                }
                let a = g.vertices[&VertexId(u)].clone();
                let b = g.vertices[&VertexId(v)].clone();
                let bends = if bend_budget == 0 {
                    Vec::new()
                } else {
                    let k = rng.gen_range(0..=bend_budget);
                    let d = sub(&b, &a);
                    let perp = Point {
                        x: -d.y.clone(),
                        y: d.x.clone(),
                    };
                    (1..=k)
                        .map(|j| {
                            let along = rat(i64::from(j), i64::from(k) + 1);
                            let r = rng.gen_range(0..6i64);
                            let off = rat(if r < 3 { r - 3 } else { r - 2 }, 8);
                            Point {
                                x: a.x.clone() + along.clone() * d.x.clone() + off.clone() * perp.x.clone(),
                                y: a.y.clone() + along * d.y.clone() + off * perp.y.clone(),
                            }
                        })
                        .collect()
                };
                g.add_edge(next_edge, u, v, bends);
                next_edge += 1;
            }
        }
        if to_combinatorial(&g).is_err() {
            continue 'attempt;
        }
        return Ok(g);
    }
    Err(GeomError::GenerationFailed {
        attempts: GENERATION_ATTEMPTS,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::CellClass;
    use crate::properties;
    use crate::testutil;

    /// The unit square with both diagonals: the plane picture behind the
    /// crossed-quadrilateral fixture.
    fn square_with_diagonals() -> GeomDrawing {
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(1, 0));
        g.add_vertex(2, pt(1, 1));
        g.add_vertex(3, pt(0, 1));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 1, 2, vec![]);
        g.add_edge(2, 2, 3, vec![]);
        g.add_edge(3, 3, 0, vec![]);
        g.add_edge(4, 0, 2, vec![]);
        g.add_edge(5, 1, 3, vec![]);
        g
    }

    fn triangle() -> GeomDrawing {
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(4, 0));
        g.add_vertex(2, pt(2, 3));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 1, 2, vec![]);
        g.add_edge(2, 2, 0, vec![]);
        g
    }

    #[test]
    fn the_square_with_diagonals_converts_to_the_crossed_quadrilateral() {
        let g = square_with_diagonals();
        let arrangement = compute_arrangement(&g).expect("general position");
        assert_eq!(arrangement.crossings.len(), 1);
        assert_eq!(
            arrangement.crossings[0].point,
            Point::new(rat(1, 2), rat(1, 2))
        );
        assert_eq!(arrangement.crossings[0].edges, (EdgeId(4), EdgeId(5)));

        let d = to_combinatorial(&g).expect("valid drawing");
        let s = d.stats();
        assert_eq!(s.crossings, 1);
        assert_eq!(s.segments, 8);
        assert_eq!(s.class_count(CellClass::D5), 4);
        let outer = d.outer_cell().expect("plane drawing");
        assert_eq!(d.cells()[outer].size, 8, "the unbounded cell is the big one");

        // Same census as the rotation-transcribed fixture.
        let fixture = testutil::build(testutil::k4_convex());
        assert_eq!(s.size_histogram, fixture.stats().size_histogram);
    }

    #[test]
    fn two_disjoint_segments_fail_combinatorial_validation() {
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(1, 0));
        g.add_vertex(2, pt(0, 5));
        g.add_vertex(3, pt(1, 5));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        assert!(compute_arrangement(&g).is_ok(), "the geometry itself is fine");
        assert_eq!(
            to_combinatorial(&g),
            Err(GeomError::Combinatorial(BuildError::DisconnectedPlanarization))
        );
    }

    #[test]
    fn a_single_crossing_makes_one_cell_of_size_12() {
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(2, 0));
        g.add_vertex(2, pt(1, -1));
        g.add_vertex(3, pt(1, 1));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        let d = to_combinatorial(&g).expect("one proper crossing");
        // 5 planarization nodes, 4 segments, hence 2 − 5 + 4 = 1 cell.
        assert_eq!(d.stats().cells, 1);
        assert_eq!(d.cells()[0].size, 12);
        assert!(d.cells()[0].is_outer);
    }

    // ----- degeneracy detection ---------------------------------------------

    #[test]
    fn degenerate_contacts_are_named_not_perturbed() {
        // A vertex of one edge in the interior of another.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(2, 0));
        g.add_vertex(2, pt(1, 0));
        g.add_vertex(3, pt(1, 5));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        assert_eq!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::VertexOnEdge {
                vertex: VertexId(2),
                edge: EdgeId(0)
            }
        );

        // A bend of one edge resting on another.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(2, 0));
        g.add_vertex(2, pt(0, 1));
        g.add_vertex(3, pt(2, 1));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![pt(1, 0)]);
        assert_eq!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::TouchingContact(EdgeId(0), EdgeId(1))
        );

        // Collinear overlap.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(3, 0));
        g.add_vertex(2, pt(1, 0));
        g.add_vertex(3, pt(5, 0));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        // The interval overlap also places vertices on edges; both are
        // true, the vertex check fires first.
        assert!(matches!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::VertexOnEdge { .. }
        ));

        // Overlap with no vertex inside the other edge: two first pieces
        // run along y = 0 in opposite directions, sharing the stretch
        // from x = 2 to x = 4.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(5, 5));
        g.add_vertex(2, pt(6, 0));
        g.add_vertex(3, pt(1, 5));
        g.add_edge(0, 0, 1, vec![pt(4, 0)]);
        g.add_edge(1, 2, 3, vec![pt(2, 0)]);
        assert_eq!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::OverlappingContact(EdgeId(0), EdgeId(1))
        );

        // Three segments through the origin.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(-1, 0));
        g.add_vertex(1, pt(1, 0));
        g.add_vertex(2, pt(0, -1));
        g.add_vertex(3, pt(0, 1));
        g.add_vertex(4, pt(-1, -1));
        g.add_vertex(5, pt(1, 1));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        g.add_edge(2, 4, 5, vec![]);
        assert_eq!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::TriplePoint(EdgeId(0), EdgeId(1), EdgeId(2))
        );

        // A polyline crossing itself: the last piece cuts back through
        // the first at (9/2, 0).
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(3, -2));
        g.add_edge(0, 0, 1, vec![pt(6, 0), pt(6, 2)]);
        assert_eq!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::EdgeCrossesItself(EdgeId(0))
        );

        // Two vertices on one point.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(1, 1));
        g.add_vertex(1, pt(1, 1));
        assert_eq!(
            compute_arrangement(&g).unwrap_err(),
            GeomError::CoincidentVertices(VertexId(0), VertexId(1))
        );
    }

    #[test]
    fn adjacent_edges_may_touch_at_their_shared_vertex_and_cross_elsewhere() {
        // Two edges out of one vertex that also cross properly: the
        // shared endpoint is not a contact violation.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(4, 2));
        g.add_vertex(2, pt(4, -2));
        g.add_edge(0, 0, 1, vec![pt(2, -2)]);
        g.add_edge(1, 0, 2, vec![pt(2, 2)]);
        let d = to_combinatorial(&g).expect("an adjacent crossing is proper");
        assert_eq!(d.stats().crossings, 1);
        assert!(!properties::is_non_homotopic(&d), "the lens at the vertex is empty");
    }

    // ----- right angles -----------------------------------------------------

    #[test]
    fn right_angles_are_detected_exactly() {
        // Horizontal against vertical.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(4, 0));
        g.add_vertex(2, pt(1, -1));
        g.add_vertex(3, pt(1, 1));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        let report = rac_report(&g).expect("valid");
        assert!(report.right_angle_crossings);
        assert!(report.is_rac(0));

        // Slope 2 against slope −1/2: dot((2,4),(4,−2)) = 0.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(2, 4));
        g.add_vertex(2, pt(-1, 3));
        g.add_vertex(3, pt(3, 1));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        assert!(is_rac(&g, 0).expect("valid"));

        // Slope 2 against slope −1: skew.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(2, 4));
        g.add_vertex(2, pt(-1, 3));
        g.add_vertex(3, pt(2, 0));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        let report = rac_report(&g).expect("valid");
        assert!(!report.right_angle_crossings);
        assert_eq!(report.skew_crossings.len(), 1);
        assert!(!report.is_rac(2), "no bend budget repairs a skew crossing");
    }

    #[test]
    fn bend_budgets_separate_rac_levels() {
        // The crossing itself is between straight vertical and horizontal
        // pieces; the bend sits after it, costing one bend on a crossed
        // edge.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(4, 0));
        g.add_vertex(2, pt(1, -1));
        g.add_vertex(3, pt(3, 2));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![pt(1, 1)]);
        let report = rac_report(&g).expect("valid");
        assert!(report.right_angle_crossings);
        assert_eq!(report.max_bends_any_edge, 1);
        assert_eq!(report.max_bends_crossed_edge, 1);
        assert!(!report.is_rac(0));
        assert!(report.is_rac(1));
        assert_eq!(
            report.facts(),
            RacFacts {
                max_bends_any_edge: 1,
                max_bends_crossed_edge: 1,
                right_angle_crossings: true
            }
        );
    }

    #[test]
    fn a_right_angle_grid_has_a_quad_cell_and_no_forbidden_small_cells() {
        // Two horizontals crossing two verticals: four right angles and a
        // central cell bounded by four segments and no vertex.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 1));
        g.add_vertex(1, pt(3, 1));
        g.add_vertex(2, pt(0, 2));
        g.add_vertex(3, pt(3, 2));
        g.add_vertex(4, pt(1, 0));
        g.add_vertex(5, pt(1, 3));
        g.add_vertex(6, pt(2, 0));
        g.add_vertex(7, pt(2, 3));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![]);
        g.add_edge(2, 4, 5, vec![]);
        g.add_edge(3, 6, 7, vec![]);
        assert!(is_rac(&g, 0).expect("valid"));
        let d = to_combinatorial(&g).expect("valid");
        let s = d.stats();
        assert_eq!(s.crossings, 4);
        assert_eq!(s.class_count(CellClass::Q4), 1);
        for class in [CellClass::Tri3, CellClass::A4, CellClass::P5] {
            assert_eq!(s.class_count(class), 0, "{class} cannot survive right angles");
        }

        // The quad is bounded by four straight right angles: no bend
        // corners at all.
        let quad = d
            .cells()
            .iter()
            .find(|c| c.class == CellClass::Q4)
            .expect("central cell");
        assert_eq!(convex_bend_corners(&g, quad), Ok(0));
    }

    // ----- convex bend corners ----------------------------------------------

    #[test]
    fn a_bulging_bend_is_convex_toward_the_enclosed_cell() {
        // A triangle whose side from vertex 2 back to vertex 0 bulges
        // outward at (1, 2): seen from the inner cell, that corner is
        // convex; the outer cell has no count at all.
        let mut g = triangle();
        g.edges.get_mut(&EdgeId(2)).expect("edge").bends = vec![pt(1, 2)];
        let d = to_combinatorial(&g).expect("valid");
        let inner = d.cells().iter().find(|c| !c.is_outer).expect("bounded cell");
        let outer = d.cells().iter().find(|c| c.is_outer).expect("unbounded cell");
        assert_eq!(convex_bend_corners(&g, inner), Ok(1));
        assert_eq!(convex_bend_corners(&g, outer), Err(GeomError::UnboundedCell));

        // Denting the same side inward makes the corner reflex instead.
        let mut g = triangle();
        g.edges.get_mut(&EdgeId(2)).expect("edge").bends = vec![pt(1, 1)];
        let d = to_combinatorial(&g).expect("valid");
        let inner = d.cells().iter().find(|c| !c.is_outer).expect("bounded cell");
        assert_eq!(convex_bend_corners(&g, inner), Ok(0));
    }

    #[test]
    fn an_apex_cell_with_one_bulging_bend_counts_it() {
        // Two edges leave the apex (0,2) and cross a horizontal edge,
        // cutting off a cell with one vertex corner and three segments;
        // the left edge bends away from that cell at (−2,1).
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 2));
        g.add_vertex(1, pt(-1, -1));
        g.add_vertex(2, pt(1, -1));
        g.add_vertex(3, pt(-3, 0));
        g.add_vertex(4, pt(2, 0));
        g.add_edge(0, 0, 1, vec![pt(-2, 1)]);
        g.add_edge(1, 0, 2, vec![]);
        g.add_edge(2, 3, 4, vec![]);
        let d = to_combinatorial(&g).expect("valid");
        let apex = d
            .cells()
            .iter()
            .find(|c| c.class == CellClass::A4)
            .expect("the cut-off cell has one vertex and three segments");
        assert_eq!(convex_bend_corners(&g, apex), Ok(1));
    }

    // ----- the independent oracle -------------------------------------------

    #[test]
    fn the_geometric_census_matches_hand_counts() {
        let census = geometric_cells(&square_with_diagonals()).expect("valid");
        let expected: BTreeMap<(u64, u64), u64> =
            [((2, 3), 4), ((4, 4), 1)].into_iter().collect();
        assert_eq!(census, expected);

        let census = geometric_cells(&triangle()).expect("valid");
        assert_eq!(census, [((3, 3), 2)].into_iter().collect());

        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(0, 0));
        g.add_vertex(1, pt(1, 0));
        g.add_edge(0, 0, 1, vec![]);
        let census = geometric_cells(&g).expect("valid");
        assert_eq!(census, [((2, 2), 1)].into_iter().collect());
    }

    #[test]
    fn the_two_cell_walkers_agree_without_sharing_code() {
        for g in [
            square_with_diagonals(),
            triangle(),
            random_geom_drawing(11, 7, rat(1, 2), 0).expect("generable"),
            random_geom_drawing(12, 6, rat(3, 5), 2).expect("generable"),
        ] {
            let d = to_combinatorial(&g).expect("valid");
            let mut combinatorial: BTreeMap<(u64, u64), u64> = BTreeMap::new();
            for c in d.cells() {
                *combinatorial
                    .entry((c.vertex_incidences, c.segment_incidences))
                    .or_default() += 1;
            }
            assert_eq!(geometric_cells(&g).expect("valid"), combinatorial);
        }
    }

    #[test]
    fn bends_are_way_stations_not_segment_boundaries() {
        // A triangle with one bent side still has two cells of size 6:
        // the bend must not add incidences.
        let mut g = triangle();
        g.edges.get_mut(&EdgeId(2)).expect("edge").bends = vec![pt(1, 2)];
        let census = geometric_cells(&g).expect("valid");
        assert_eq!(census, [((3, 3), 2)].into_iter().collect());
    }

    // ----- reconstruction of corpus fixtures --------------------------------

    #[test]
    fn the_witnessed_double_crossing_rebuilds_from_coordinates() {
        // Two edges crossing twice, with a third edge reaching into the
        // lens so every lens is witnessed.
        let mut g = GeomDrawing::new();
        g.add_vertex(0, pt(-2, 0));
        g.add_vertex(1, pt(2, 0));
        g.add_vertex(2, pt(-2, 1));
        g.add_vertex(3, pt(2, 1));
        g.add_vertex(4, pt(0, 2));
        g.add_vertex(5, Point::new(rat(0, 1), rat(-1, 2)));
        g.add_edge(0, 0, 1, vec![]);
        g.add_edge(1, 2, 3, vec![pt(0, -1)]);
        g.add_edge(2, 4, 5, vec![]);
        let d = to_combinatorial(&g).expect("valid");
        assert_eq!(d.stats().crossings, 3);
        assert!(properties::is_non_homotopic(&d), "the lens holds a vertex");
        let fixture = testutil::build(testutil::witnessed_double_crossing());
        assert_eq!(d.stats().size_histogram, fixture.stats().size_histogram);

        // Without the witness the lens cell is empty: size 2.
        let mut bare = g.clone();
        bare.edges.remove(&EdgeId(2));
        bare.vertices.remove(&VertexId(4));
        bare.vertices.remove(&VertexId(5));
        let d = to_combinatorial(&bare).expect("valid");
        assert!(!properties::is_non_homotopic(&d));
        assert_eq!(d.stats().size_histogram.get(&2), Some(&1));
    }

    // ----- random generation --------------------------------------------------

    #[test]
    fn generation_is_deterministic_in_the_seed() {
        let a = random_geom_drawing(1, 6, rat(1, 2), 0).expect("generable");
        let b = random_geom_drawing(1, 6, rat(1, 2), 0).expect("generable");
        assert_eq!(a, b);
        let c = random_geom_drawing(2, 6, rat(1, 2), 0).expect("generable");
        assert_ne!(a, c, "different seeds explore different drawings");
    }

    #[test]
    fn generated_drawings_convert_and_bend_budgets_are_respected() {
        for seed in 0..8u64 {
            let g = random_geom_drawing(seed, 7, rat(2, 5), 2).expect("generable");
            let d = to_combinatorial(&g).expect("accepted drawings are convertible");
            assert!(d.stats().edges >= 1, "connectivity forces edges");
            let report = rac_report(&g).expect("valid");
            assert!(report.max_bends_any_edge <= 2);
        }
    }

    #[test]
    fn a_full_triangle_has_no_crossings() {
        // Straight edges between three vertices can only meet at shared
        // endpoints.
        let g = random_geom_drawing(3, 3, rat(1, 1), 0).expect("generable");
        assert_eq!(g.edges.len(), 3);
        let d = to_combinatorial(&g).expect("valid");
        assert_eq!(d.stats().crossings, 0);
    }

    #[test]
    fn generation_rejects_bad_probabilities_and_impossible_requests() {
        assert_eq!(
            random_geom_drawing(1, 5, rat(3, 2), 0),
            Err(GeomError::BadProbability)
        );
        assert_eq!(
            random_geom_drawing(1, 5, rat(-1, 2), 0),
            Err(GeomError::BadProbability)
        );
        // Probability zero on two or more vertices can never connect.
        assert_eq!(
            random_geom_drawing(1, 2, rat(0, 1), 0),
            Err(GeomError::GenerationFailed { attempts: 64 })
        );
    }
}
