//! The combinatorial drawing model: validation, face tracing, cells.
//!
//! # Model
//!
//! A drawing of a graph on the sphere is captured by three layers of data:
//!
//! 1. the abstract graph (vertices and edges, loops forbidden, parallel
//!    edges allowed),
//! 2. for every edge, the ordered list of crossings met while travelling
//!    from its source to its target (an edge never crosses itself, and two
//!    edges may cross several times — each meeting is its own crossing),
//! 3. for every vertex and every crossing, the counterclockwise cyclic
//!    order in which the incident edge ends leave it.
//!
//! Subdividing every edge at its crossings yields the *planarization*: its
//! nodes are the vertices and crossings, its arcs are the edge *segments*.
//! The rotation data makes the planarization an embedded graph, so the
//! *cells* — connected regions of the complement of the drawing — can be
//! recovered by face tracing, with no coordinates involved.
//!
//! # Conventions
//!
//! * Rotations list *outgoing* directions in counterclockwise order.
//! * A [`Dart`] is a directed segment.  Face tracing follows
//!   `next(d) = σ⁻¹(rev(d))`, where `σ` is the rotation at the head of
//!   `d`; with counterclockwise rotations this walks each cell so that the
//!   cell lies to the **left** of every dart of its boundary walk, and
//!   every dart lies on exactly one cell walk.
//! * Validity on the sphere is gated by the Euler relation
//!   `(|V| + |X|) − |S| + |C| = 2` for a connected planarization.  A
//!   rotation system that fails it (for instance one vertex listed
//!   clockwise) is rejected: it describes a drawing on a higher-genus
//!   surface, not on the sphere.
//! * A drawing in the plane is a drawing on the sphere plus a choice of
//!   the unbounded cell, named by one dart on its boundary walk.
//!
//! # Cell size
//!
//! The *size* `‖c‖` of a cell is the number of vertex incidences plus the
//! number of segment incidences of its boundary walk (crossing incidences
//! are not counted).  Incidences are counted with multiplicity: a segment
//! with the same cell on both sides contributes twice.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

// ---------------------------------------------------------------------------
// Identifiers and elementary positions
// ---------------------------------------------------------------------------

/// Identifier of a vertex of the abstract graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

/// Identifier of an edge of the abstract graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub u32);

/// Identifier of a crossing of the drawing.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CrossingId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// One of the two ends of an edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EdgeEnd {
    Source,
    Target,
}

impl EdgeEnd {
    pub fn opposite(self) -> EdgeEnd {
        match self {
            EdgeEnd::Source => EdgeEnd::Target,
            EdgeEnd::Target => EdgeEnd::Source,
        }
    }
}

/// A node of the planarization: a vertex or a crossing.
///
/// The ordering (vertices before crossings) fixes deterministic iteration
/// orders everywhere cells and rotations are walked.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Node {
    V(VertexId),
    X(CrossingId),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::V(v) => write!(f, "{v}"),
            Node::X(x) => write!(f, "{x}"),
        }
    }
}

/// An end of one *segment* of an edge, used in crossing rotations.
///
/// Edge `e` with `k` crossings has segments `0..=k`; segment `s` runs from
/// the `s−1`-st to the `s`-th crossing (with the edge's source before
/// segment `0` and its target after segment `k`).  At a crossing, each of
/// the four incident segment ends is named by its edge and segment index;
/// which of the two ends of that segment is meant is unambiguous because a
/// segment has distinct endpoints.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SegEnd {
    pub edge: EdgeId,
    pub seg: u32,
}

impl fmt::Display for SegEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.edge, self.seg)
    }
}

/// Direction of travel along a segment.
///
/// `Fwd` runs in the edge's own direction (source towards target).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Dir {
    Fwd,
    Bwd,
}

impl Dir {
    pub fn opposite(self) -> Dir {
        match self {
            Dir::Fwd => Dir::Bwd,
            Dir::Bwd => Dir::Fwd,
        }
    }
}

/// A directed segment of the planarization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart {
    pub edge: EdgeId,
    pub seg: u32,
    pub dir: Dir,
}

impl Dart {
    pub fn fwd(edge: EdgeId, seg: u32) -> Dart {
        Dart {
            edge,
            seg,
            dir: Dir::Fwd,
        }
    }

    pub fn bwd(edge: EdgeId, seg: u32) -> Dart {
        Dart {
            edge,
            seg,
            dir: Dir::Bwd,
        }
    }

    /// The same segment travelled the other way.
    pub fn rev(self) -> Dart {
        Dart {
            dir: self.dir.opposite(),
            ..self
        }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.dir {
            Dir::Fwd => '+',
            Dir::Bwd => '-',
        };
        write!(f, "{}@{}{}", self.edge, self.seg, sign)
    }
}

/// The surface the drawing lives on.
///
/// A plane drawing is a sphere drawing with a distinguished unbounded
/// cell, named by one dart on its boundary walk.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Surface {
    Sphere,
    Plane { outer: Dart },
}

// ---------------------------------------------------------------------------
// Input description
// ---------------------------------------------------------------------------

/// An edge to be built: endpoints plus the ordered crossings along it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeSpec {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    /// Crossings in the order they are met travelling source → target.
    pub crossings: Vec<CrossingId>,
}

/// A crossing to be built: the two edges that meet there.
///
/// The pair is ordered only for bookkeeping; it carries no geometric
/// meaning.  Each of the two edges must list the crossing exactly once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossingSpec {
    pub id: CrossingId,
    pub edges: (EdgeId, EdgeId),
}

/// Everything needed to build a [`Drawing`].
///
/// The `vertex_rotations` and `crossing_rotations` lists give, per node,
/// the counterclockwise cyclic order of outgoing directions; the starting
/// element of each list is irrelevant.  Vertices of degree zero may omit
/// their (empty) rotation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DrawingSpec {
    pub surface: Surface,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeSpec>,
    pub crossings: Vec<CrossingSpec>,
    pub vertex_rotations: Vec<(VertexId, Vec<(EdgeId, EdgeEnd)>)>,
    pub crossing_rotations: Vec<(CrossingId, [SegEnd; 4])>,
}

impl Default for DrawingSpec {
    fn default() -> Self {
        DrawingSpec::new()
    }
}

impl DrawingSpec {
    /// An empty description of a sphere drawing.
    pub fn new() -> DrawingSpec {
        DrawingSpec {
            surface: Surface::Sphere,
            vertices: Vec::new(),
            edges: Vec::new(),
            crossings: Vec::new(),
            vertex_rotations: Vec::new(),
            crossing_rotations: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, v: u32) -> VertexId {
        let id = VertexId(v);
        self.vertices.push(id);
        id
    }

    pub fn add_vertices(&mut self, n: u32) {
        for v in 0..n {
            self.add_vertex(v);
        }
    }

    pub fn add_edge(&mut self, id: u32, source: u32, target: u32, crossings: &[u32]) -> EdgeId {
        let eid = EdgeId(id);
        self.edges.push(EdgeSpec {
            id: eid,
            source: VertexId(source),
            target: VertexId(target),
            crossings: crossings.iter().map(|&x| CrossingId(x)).collect(),
        });
        eid
    }

    pub fn add_crossing(&mut self, id: u32, e: u32, f: u32) -> CrossingId {
        let xid = CrossingId(id);
        self.crossings.push(CrossingSpec {
            id: xid,
            edges: (EdgeId(e), EdgeId(f)),
        });
        xid
    }

    pub fn set_rotation(&mut self, v: u32, entries: &[(u32, EdgeEnd)]) {
        self.vertex_rotations.push((
            VertexId(v),
            entries
                .iter()
                .map(|&(e, end)| (EdgeId(e), end))
                .collect(),
        ));
    }

    pub fn set_crossing_rotation(&mut self, x: u32, entries: [(u32, u32); 4]) {
        let ends = entries.map(|(e, s)| SegEnd {
            edge: EdgeId(e),
            seg: s,
        });
        self.crossing_rotations.push((CrossingId(x), ends));
    }
}

// ---------------------------------------------------------------------------
// Build errors
// ---------------------------------------------------------------------------

/// Why a [`DrawingSpec`] does not describe a drawing on the chosen surface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BuildError {
    /// The drawing has no vertices at all.
    NoVertices,
    DuplicateVertex(VertexId),
    DuplicateEdge(EdgeId),
    DuplicateCrossing(CrossingId),
    /// An edge endpoint is not a declared vertex.
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    /// Both endpoints of the edge coincide.
    LoopEdge(EdgeId),
    /// The crossing's two edges are the same edge.
    SelfCrossingEdge(CrossingId),
    /// A crossing and an edge disagree: the crossing id appears in a
    /// crossing list without being declared for that edge, or a declared
    /// crossing does not appear exactly once on each of its two edges.
    DanglingCrossing { crossing: CrossingId, edge: EdgeId },
    /// A node with incident edge ends has no rotation.
    MissingRotation(Node),
    /// A rotation does not list exactly the incident edge ends, or names a
    /// node that does not exist, or is given twice.
    BadRotation { node: Node },
    /// The four segment ends at the crossing are correct but the two edges
    /// do not alternate around it, which is impossible for a transversal
    /// crossing.
    NonAlternatingCrossing(CrossingId),
    /// The rotation system is consistent but does not describe a sphere
    /// drawing: face tracing violates the Euler relation, typically
    /// because some rotation is listed clockwise.
    NotSphere { euler_characteristic: i64 },
    /// The planarization is not connected, so cells are not determined by
    /// the rotation data.
    DisconnectedPlanarization,
    /// The dart chosen to mark the unbounded cell does not exist.
    BadOuterDart(Dart),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::NoVertices => write!(f, "drawing has no vertices"),
            BuildError::DuplicateVertex(v) => write!(f, "vertex {v} declared twice"),
            BuildError::DuplicateEdge(e) => write!(f, "edge {e} declared twice"),
            BuildError::DuplicateCrossing(x) => write!(f, "crossing {x} declared twice"),
            BuildError::UnknownVertex { edge, vertex } => {
                write!(f, "edge {edge} uses undeclared vertex {vertex}")
            }
            BuildError::LoopEdge(e) => write!(f, "edge {e} is a loop"),
            BuildError::SelfCrossingEdge(x) => {
                write!(f, "crossing {x} lists the same edge twice (edges may not cross themselves)")
            }
            BuildError::DanglingCrossing { crossing, edge } => write!(
                f,
                "crossing {crossing} and edge {edge} disagree: each declared crossing must \
                 appear exactly once in the crossing lists of exactly its two edges"
            ),
            BuildError::MissingRotation(n) => {
                write!(f, "no rotation given for {n}")
            }
            BuildError::BadRotation { node } => write!(
                f,
                "rotation at {node} does not list exactly the incident edge ends"
            ),
            BuildError::NonAlternatingCrossing(x) => write!(
                f,
                "rotation at {x} does not alternate between its two edges"
            ),
            BuildError::NotSphere {
                euler_characteristic,
            } => write!(
                f,
                "rotation system has Euler characteristic {euler_characteristic}, not 2: \
                 it does not describe a drawing on the sphere"
            ),
            BuildError::DisconnectedPlanarization => {
                write!(f, "planarization is not connected")
            }
            BuildError::BadOuterDart(d) => {
                write!(f, "outer-cell dart {d} does not exist in the drawing")
            }
        }
    }
}

impl core::error::Error for BuildError {}

// ---------------------------------------------------------------------------
// Built structure
// ---------------------------------------------------------------------------

/// An edge of a built drawing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    /// Crossings in source → target order; segment `s` ends at `crossings[s]`.
    pub crossings: Vec<CrossingId>,
}

impl Edge {
    pub fn endpoint(&self, end: EdgeEnd) -> VertexId {
        match end {
            EdgeEnd::Source => self.source,
            EdgeEnd::Target => self.target,
        }
    }

    /// Number of segments (crossings + 1).
    pub fn seg_count(&self) -> u32 {
        self.crossings.len() as u32 + 1
    }
}

/// A crossing of a built drawing: its two edges, each with the position
/// (index into that edge's crossing list) at which this crossing occurs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Crossing {
    pub first: (EdgeId, u32),
    pub second: (EdgeId, u32),
}

impl Crossing {
    pub fn edges(&self) -> [EdgeId; 2] {
        [self.first.0, self.second.0]
    }

    /// The position of this crossing on edge `e`, if `e` passes through it.
    pub fn position_on(&self, e: EdgeId) -> Option<u32> {
        if self.first.0 == e {
            Some(self.first.1)
        } else if self.second.0 == e {
            Some(self.second.1)
        } else {
            None
        }
    }

    /// The edge crossing `e` here.
    pub fn other_edge(&self, e: EdgeId) -> Option<EdgeId> {
        if self.first.0 == e {
            Some(self.second.0)
        } else if self.second.0 == e {
            Some(self.first.0)
        } else {
            None
        }
    }
}

/// Classification of a cell by its incidence pattern.
///
/// Writing a cell's boundary walk as an alternating sequence of nodes and
/// segments, the pattern `(v, s)` of vertex incidences and segment
/// incidences determines the class (crossing incidences equal `s − v`).
/// The named classes cover every pattern that can occur in a simple
/// drawing with `‖c‖ ≤ 5`, plus the triangular `‖c‖ = 6` cell bounded by
/// three whole edges:
///
/// * `Tri3` — `(0,3)`: a triangle of three crossings.
/// * `A4` — `(1,3)`: one vertex, two crossings.
/// * `Q4` — `(0,4)`: a quadrilateral of crossings.
/// * `D5` — `(2,3)`: two vertices, one crossing.
/// * `W5` — `(1,4)`: one vertex, three crossings.
/// * `P5` — `(0,5)`: a pentagon of crossings.
/// * `T6` — `(3,3)`: three vertices joined by three whole edges.
///
/// Everything else is `Other` with its size.  Patterns `(1,2)` (adjacent
/// edges crossing) and `(2,2)` (a bigon of parallel edges) fall under
/// `Other`; they cannot occur in simple drawings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CellClass {
    Tri3,
    A4,
    Q4,
    D5,
    W5,
    P5,
    T6,
    Other(u64),
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellClass::Tri3 => write!(f, "TRI3"),
            CellClass::A4 => write!(f, "A4"),
            CellClass::Q4 => write!(f, "Q4"),
            CellClass::D5 => write!(f, "D5"),
            CellClass::W5 => write!(f, "W5"),
            CellClass::P5 => write!(f, "P5"),
            CellClass::T6 => write!(f, "T6"),
            CellClass::Other(size) => write!(f, "OTHER({size})"),
        }
    }
}

/// One cell of the drawing, with its boundary walk and derived counts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cell {
    /// Position in [`Drawing::cells`]; cells are numbered in order of
    /// their smallest boundary dart, so ids are deterministic.
    pub id: usize,
    /// The boundary walk: `(node, dart)` pairs where `dart` leaves `node`
    /// and the cell lies to the left of `dart`.  Empty only for the single
    /// cell of a one-vertex drawing.
    pub walk: Vec<(Node, Dart)>,
    pub vertex_incidences: u64,
    pub crossing_incidences: u64,
    pub segment_incidences: u64,
    /// `‖c‖` = vertex incidences + segment incidences.
    pub size: u64,
    /// Vertices on the boundary, without multiplicity.
    pub distinct_vertices: BTreeSet<VertexId>,
    /// Some node appears more than once on the boundary walk.
    pub degenerate: bool,
    pub class: CellClass,
    /// True for the unbounded cell of a plane drawing; always false on the
    /// sphere.
    pub is_outer: bool,
}

impl Cell {
    fn classify(vertex_incidences: u64, segment_incidences: u64) -> CellClass {
        match (vertex_incidences, segment_incidences) {
            (0, 3) => CellClass::Tri3,
            (1, 3) => CellClass::A4,
            (0, 4) => CellClass::Q4,
            (2, 3) => CellClass::D5,
            (1, 4) => CellClass::W5,
            (0, 5) => CellClass::P5,
            (3, 3) => CellClass::T6,
            (v, s) => CellClass::Other(v + s),
        }
    }
}

/// Aggregate counts of a drawing, all derived at build time.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DrawingStats {
    pub vertices: u64,
    pub edges: u64,
    pub crossings: u64,
    /// Edge segments of the planarization, `|S| = 2|X| + |E|`.
    pub segments: u64,
    /// Segments with both endpoints crossings, `|S_in| = 2|X| − |E_x|`.
    pub inner_segments: u64,
    /// Edges with at least one crossing.
    pub crossed_edges: u64,
    /// Edges with no crossing.
    pub planar_edges: u64,
    pub cells: u64,
    /// Cells per class; absent classes are omitted.
    pub class_counts: BTreeMap<CellClass, u64>,
    /// Cells per size `‖c‖`.
    pub size_histogram: BTreeMap<u64, u64>,
    /// Vertex degrees in ascending order.
    pub degree_sequence: Vec<u64>,
    /// `Σ_c ‖c‖`, which always equals `2|S| + Σ deg(v)`.
    pub sum_cell_sizes: u64,
}

impl DrawingStats {
    pub fn class_count(&self, class: CellClass) -> u64 {
        self.class_counts.get(&class).copied().unwrap_or(0)
    }
}

/// A validated drawing on the sphere or in the plane.
///
/// Construction (via [`build_drawing`] or [`Drawing::build`]) checks the
/// data completely — graph consistency, crossing lists, rotation contents,
/// crossing alternation, connectivity of the planarization, and the Euler
/// relation — and then traces all cells once.  Everything queried later
/// (cells, statistics, navigation) is read off the validated structure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Drawing {
    surface: Surface,
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    crossings: BTreeMap<CrossingId, Crossing>,
    vertex_rotations: BTreeMap<VertexId, Vec<(EdgeId, EdgeEnd)>>,
    crossing_rotations: BTreeMap<CrossingId, [SegEnd; 4]>,
    /// Outgoing darts per node, in rotation order.
    out_rotations: BTreeMap<Node, Vec<Dart>>,
    cells: Vec<Cell>,
    /// Cell id to the left of each dart.
    dart_cells: BTreeMap<Dart, usize>,
    outer_cell: Option<usize>,
    stats: DrawingStats,
}

/// Builds and fully validates a drawing; see [`Drawing::build`].
pub fn build_drawing(spec: DrawingSpec) -> Result<Drawing, BuildError> {
    Drawing::build(spec)
}

impl Drawing {
    /// Builds and fully validates a drawing from its description.
    pub fn build(spec: DrawingSpec) -> Result<Drawing, BuildError> {
        // --- graph layer -----------------------------------------------
        if spec.vertices.is_empty() {
            return Err(BuildError::NoVertices);
        }
        let mut vertices = BTreeSet::new();
        for &v in &spec.vertices {
            if !vertices.insert(v) {
                return Err(BuildError::DuplicateVertex(v));
            }
        }
        let mut edges: BTreeMap<EdgeId, Edge> = BTreeMap::new();
        for e in &spec.edges {
            for &v in &[e.source, e.target] {
                if !vertices.contains(&v) {
                    return Err(BuildError::UnknownVertex {
                        edge: e.id,
                        vertex: v,
                    });
                }
            }
            if e.source == e.target {
                return Err(BuildError::LoopEdge(e.id));
            }
            let edge = Edge {
                source: e.source,
                target: e.target,
                crossings: e.crossings.clone(),
            };
            if edges.insert(e.id, edge).is_some() {
                return Err(BuildError::DuplicateEdge(e.id));
            }
        }

        // --- crossing layer --------------------------------------------
        let mut declared: BTreeMap<CrossingId, (EdgeId, EdgeId)> = BTreeMap::new();
        for x in &spec.crossings {
            if declared.insert(x.id, x.edges).is_some() {
                return Err(BuildError::DuplicateCrossing(x.id));
            }
            if x.edges.0 == x.edges.1 {
                return Err(BuildError::SelfCrossingEdge(x.id));
            }
        }
        // Every crossing in an edge's list must be declared for that edge.
        for (&eid, edge) in &edges {
            for &x in &edge.crossings {
                match declared.get(&x) {
                    Some(&(a, b)) if a == eid || b == eid => {}
                    _ => return Err(BuildError::DanglingCrossing { crossing: x, edge: eid }),
                }
            }
        }
        // Every declared crossing must appear exactly once on each of its
        // two edges; record the positions.
        let mut crossings: BTreeMap<CrossingId, Crossing> = BTreeMap::new();
        for (&xid, &(ea, eb)) in &declared {
            let mut pos = [(ea, 0u32), (eb, 0u32)];
            for (slot, &(eid, _)) in pos.clone().iter().enumerate() {
                let edge = edges
                    .get(&eid)
                    .ok_or(BuildError::DanglingCrossing { crossing: xid, edge: eid })?;
                let hits: Vec<u32> = edge
                    .crossings
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| x == xid)
                    .map(|(i, _)| i as u32)
                    .collect();
                if hits.len() != 1 {
                    return Err(BuildError::DanglingCrossing { crossing: xid, edge: eid });
                }
                pos[slot].1 = hits[0];
            }
            crossings.insert(
                xid,
                Crossing {
                    first: pos[0],
                    second: pos[1],
                },
            );
        }

        // --- rotation layer --------------------------------------------
        let mut vertex_rotations: BTreeMap<VertexId, Vec<(EdgeId, EdgeEnd)>> = BTreeMap::new();
        for (v, rot) in &spec.vertex_rotations {
            if !vertices.contains(v) {
                return Err(BuildError::BadRotation { node: Node::V(*v) });
            }
            if vertex_rotations.insert(*v, rot.clone()).is_some() {
                return Err(BuildError::BadRotation { node: Node::V(*v) });
            }
        }
        // The rotation at a vertex must list exactly the incident ends.
        let mut incident: BTreeMap<VertexId, BTreeSet<(EdgeId, EdgeEnd)>> = BTreeMap::new();
        for (&eid, edge) in &edges {
            incident
                .entry(edge.source)
                .or_default()
                .insert((eid, EdgeEnd::Source));
            incident
                .entry(edge.target)
                .or_default()
                .insert((eid, EdgeEnd::Target));
        }
        for &v in &vertices {
            let expected = incident.remove(&v).unwrap_or_default();
            match vertex_rotations.get(&v) {
                None if expected.is_empty() => {
                    vertex_rotations.insert(v, Vec::new());
                }
                None => return Err(BuildError::MissingRotation(Node::V(v))),
                Some(rot) => {
                    let given: BTreeSet<(EdgeId, EdgeEnd)> = rot.iter().copied().collect();
                    if given != expected || rot.len() != given.len() {
                        return Err(BuildError::BadRotation { node: Node::V(v) });
                    }
                }
            }
        }

        let mut crossing_rotations: BTreeMap<CrossingId, [SegEnd; 4]> = BTreeMap::new();
        for (x, rot) in &spec.crossing_rotations {
            if !crossings.contains_key(x) {
                return Err(BuildError::BadRotation { node: Node::X(*x) });
            }
            if crossing_rotations.insert(*x, *rot).is_some() {
                return Err(BuildError::BadRotation { node: Node::X(*x) });
            }
        }
        for (&xid, cr) in &crossings {
            let rot = crossing_rotations
                .get(&xid)
                .ok_or(BuildError::MissingRotation(Node::X(xid)))?;
            let (ea, pa) = cr.first;
            let (eb, pb) = cr.second;
            let expected: BTreeSet<SegEnd> = [
                SegEnd { edge: ea, seg: pa },
                SegEnd { edge: ea, seg: pa + 1 },
                SegEnd { edge: eb, seg: pb },
                SegEnd { edge: eb, seg: pb + 1 },
            ]
            .into_iter()
            .collect();
            let given: BTreeSet<SegEnd> = rot.iter().copied().collect();
            if given != expected {
                return Err(BuildError::BadRotation { node: Node::X(xid) });
            }
            if rot[0].edge != rot[2].edge || rot[1].edge != rot[3].edge || rot[0].edge == rot[1].edge
            {
                return Err(BuildError::NonAlternatingCrossing(xid));
            }
        }

        // --- outgoing darts --------------------------------------------
        let mut out_rotations: BTreeMap<Node, Vec<Dart>> = BTreeMap::new();
        for (&v, rot) in &vertex_rotations {
            let darts = rot
                .iter()
                .map(|&(e, end)| match end {
                    EdgeEnd::Source => Dart::fwd(e, 0),
                    EdgeEnd::Target => Dart::bwd(e, edges[&e].seg_count() - 1),
                })
                .collect();
            out_rotations.insert(Node::V(v), darts);
        }
        for (&x, rot) in &crossing_rotations {
            let cr = &crossings[&x];
            let mut darts = Vec::with_capacity(4);
            for se in rot {
                // Segment `se.seg` of `se.edge` touches `x` either with its
                // head (position == seg) or its tail (position == seg − 1).
                let pos = cr.position_on(se.edge).expect("validated above");
                let dart = if se.seg == pos {
                    Dart::bwd(se.edge, se.seg)
                } else {
                    debug_assert_eq!(se.seg, pos + 1);
                    Dart::fwd(se.edge, se.seg)
                };
                darts.push(dart);
            }
            out_rotations.insert(Node::X(x), darts);
        }

        let mut drawing = Drawing {
            surface: spec.surface,
            vertices,
            edges,
            crossings,
            vertex_rotations,
            crossing_rotations,
            out_rotations,
            cells: Vec::new(),
            dart_cells: BTreeMap::new(),
            outer_cell: None,
            stats: DrawingStats {
                vertices: 0,
                edges: 0,
                crossings: 0,
                segments: 0,
                inner_segments: 0,
                crossed_edges: 0,
                planar_edges: 0,
                cells: 0,
                class_counts: BTreeMap::new(),
                size_histogram: BTreeMap::new(),
                degree_sequence: Vec::new(),
                sum_cell_sizes: 0,
            },
        };

        // --- connectivity ----------------------------------------------
        drawing.check_connected()?;

        // --- face tracing and the Euler relation ------------------------
        drawing.trace_cells();
        let nodes = drawing.vertices.len() as i64 + drawing.crossings.len() as i64;
        let segments: i64 = drawing.edges.values().map(|e| e.seg_count() as i64).sum();
        let euler = nodes - segments + drawing.cells.len() as i64;
        if euler != 2 {
            return Err(BuildError::NotSphere {
                euler_characteristic: euler,
            });
        }

        // --- outer cell --------------------------------------------------
        if let Surface::Plane { outer } = drawing.surface {
            match drawing.dart_cells.get(&outer) {
                Some(&cid) => {
                    drawing.outer_cell = Some(cid);
                    drawing.cells[cid].is_outer = true;
                }
                None => return Err(BuildError::BadOuterDart(outer)),
            }
        }

        drawing.compute_stats();
        Ok(drawing)
    }

    fn check_connected(&self) -> Result<(), BuildError> {
        let mut all_nodes: BTreeSet<Node> = self.vertices.iter().map(|&v| Node::V(v)).collect();
        all_nodes.extend(self.crossings.keys().map(|&x| Node::X(x)));
        let start = match all_nodes.iter().next() {
            Some(&n) => n,
            None => return Ok(()),
        };
        let mut seen = BTreeSet::new();
        let mut queue = alloc::collections::VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(n) = queue.pop_front() {
            for &d in self.out_rotations.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
                let m = self.dart_end(d);
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        if seen.len() == all_nodes.len() {
            Ok(())
        } else {
            Err(BuildError::DisconnectedPlanarization)
        }
    }

    fn trace_cells(&mut self) {
        let mut all_darts: Vec<Dart> = Vec::new();
        for (&eid, edge) in &self.edges {
            for s in 0..edge.seg_count() {
                all_darts.push(Dart::fwd(eid, s));
                all_darts.push(Dart::bwd(eid, s));
            }
        }
        all_darts.sort();

        let mut cells = Vec::new();
        let mut dart_cells = BTreeMap::new();
        for &start in &all_darts {
            if dart_cells.contains_key(&start) {
                continue;
            }
            let id = cells.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                dart_cells.insert(d, id);
                walk.push((self.dart_start(d), d));
                d = self.next_in_face(d);
                if d == start {
                    break;
                }
            }
            cells.push(Self::finish_cell(id, walk));
        }

        // A drawing of a single vertex and no edges still has one cell:
        // the rest of the sphere, with the vertex on its boundary.
        if all_darts.is_empty() && self.vertices.len() == 1 {
            let &v = self.vertices.iter().next().expect("one vertex");
            cells.push(Cell {
                id: 0,
                walk: Vec::new(),
                vertex_incidences: 1,
                crossing_incidences: 0,
                segment_incidences: 0,
                size: 1,
                distinct_vertices: [v].into_iter().collect(),
                degenerate: false,
                class: CellClass::Other(1),
                is_outer: false,
            });
        }

        self.cells = cells;
        self.dart_cells = dart_cells;
    }

    fn finish_cell(id: usize, walk: Vec<(Node, Dart)>) -> Cell {
        let mut vertex_incidences = 0u64;
        let mut crossing_incidences = 0u64;
        let mut distinct_vertices = BTreeSet::new();
        let mut seen_nodes = BTreeSet::new();
        let mut degenerate = false;
        for &(node, _) in &walk {
            match node {
                Node::V(v) => {
                    vertex_incidences += 1;
                    distinct_vertices.insert(v);
                }
                Node::X(_) => crossing_incidences += 1,
            }
            if !seen_nodes.insert(node) {
                degenerate = true;
            }
        }
        let segment_incidences = walk.len() as u64;
        let size = vertex_incidences + segment_incidences;
        let class = Cell::classify(vertex_incidences, segment_incidences);
        Cell {
            id,
            walk,
            vertex_incidences,
            crossing_incidences,
            segment_incidences,
            size,
            distinct_vertices,
            degenerate,
            class,
            is_outer: false,
        }
    }

    fn compute_stats(&mut self) {
        let crossed_edges = self
            .edges
            .values()
            .filter(|e| !e.crossings.is_empty())
            .count() as u64;
        let segments: u64 = self.edges.values().map(|e| e.seg_count() as u64).sum();
        let inner_segments: u64 = self
            .edges
            .values()
            .map(|e| (e.crossings.len() as u64).saturating_sub(1))
            .sum();
        let mut class_counts: BTreeMap<CellClass, u64> = BTreeMap::new();
        let mut size_histogram: BTreeMap<u64, u64> = BTreeMap::new();
        let mut sum_cell_sizes = 0;
        for c in &self.cells {
            *class_counts.entry(c.class).or_default() += 1;
            *size_histogram.entry(c.size).or_default() += 1;
            sum_cell_sizes += c.size;
        }
        let mut degree_sequence: Vec<u64> = self
            .vertices
            .iter()
            .map(|&v| self.vertex_rotations[&v].len() as u64)
            .collect();
        degree_sequence.sort_unstable();
        self.stats = DrawingStats {
            vertices: self.vertices.len() as u64,
            edges: self.edges.len() as u64,
            crossings: self.crossings.len() as u64,
            segments,
            inner_segments,
            crossed_edges,
            planar_edges: self.edges.len() as u64 - crossed_edges,
            cells: self.cells.len() as u64,
            class_counts,
            size_histogram,
            degree_sequence,
            sum_cell_sizes,
        };
    }

    // --- navigation ------------------------------------------------------

    /// Endpoints of segment `s` of edge `e`, as (tail, head) in the edge's
    /// own direction.
    pub fn seg_ends(&self, e: EdgeId, s: u32) -> (Node, Node) {
        let edge = &self.edges[&e];
        let tail = if s == 0 {
            Node::V(edge.source)
        } else {
            Node::X(edge.crossings[(s - 1) as usize])
        };
        let head = if s as usize == edge.crossings.len() {
            Node::V(edge.target)
        } else {
            Node::X(edge.crossings[s as usize])
        };
        (tail, head)
    }

    /// The node a dart leaves.
    pub fn dart_start(&self, d: Dart) -> Node {
        let (tail, head) = self.seg_ends(d.edge, d.seg);
        match d.dir {
            Dir::Fwd => tail,
            Dir::Bwd => head,
        }
    }

    /// The node a dart arrives at.
    pub fn dart_end(&self, d: Dart) -> Node {
        self.dart_start(d.rev())
    }

    /// The next dart of the cell walk: `σ⁻¹(rev(d))` at the head of `d`.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        let at = self.dart_end(d);
        let rot = &self.out_rotations[&at];
        let i = rot
            .iter()
            .position(|&r| r == d.rev())
            .expect("reverse dart must appear in the rotation at the dart's head");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Outgoing darts at a node, in counterclockwise order.
    pub fn out_darts(&self, n: Node) -> &[Dart] {
        self.out_rotations
            .get(&n)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    // --- read access -------------------------------------------------------

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().map(|(&e, edge)| (e, edge))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[&e]
    }

    pub fn crossings(&self) -> impl Iterator<Item = (CrossingId, &Crossing)> {
        self.crossings.iter().map(|(&x, cr)| (x, cr))
    }

    pub fn crossing(&self, x: CrossingId) -> &Crossing {
        &self.crossings[&x]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertex_rotations.get(&v).map_or(0, Vec::len)
    }

    /// Rotation at a vertex: incident edge ends in counterclockwise order.
    pub fn vertex_rotation(&self, v: VertexId) -> &[(EdgeId, EdgeEnd)] {
        &self.vertex_rotations[&v]
    }

    /// Rotation at a crossing: the four segment ends in counterclockwise
    /// order, alternating between the two edges.
    pub fn crossing_rotation(&self, x: CrossingId) -> &[SegEnd; 4] {
        &self.crossing_rotations[&x]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: usize) -> &Cell {
        &self.cells[id]
    }

    /// The cell lying to the left of a dart.
    pub fn cell_left_of(&self, d: Dart) -> usize {
        self.dart_cells[&d]
    }

    /// The unbounded cell of a plane drawing; `None` on the sphere.
    pub fn outer_cell(&self) -> Option<usize> {
        self.outer_cell
    }

    pub fn stats(&self) -> &DrawingStats {
        &self.stats
    }

    /// Reconstructs a description that rebuilds this drawing exactly.
    pub fn to_spec(&self) -> DrawingSpec {
        DrawingSpec {
            surface: self.surface,
            vertices: self.vertices.iter().copied().collect(),
            edges: self
                .edges
                .iter()
                .map(|(&id, e)| EdgeSpec {
                    id,
                    source: e.source,
                    target: e.target,
                    crossings: e.crossings.clone(),
                })
                .collect(),
            crossings: self
                .crossings
                .iter()
                .map(|(&id, c)| CrossingSpec {
                    id,
                    edges: (c.first.0, c.second.0),
                })
                .collect(),
            vertex_rotations: self
                .vertex_rotations
                .iter()
                .map(|(&v, rot)| (v, rot.clone()))
                .collect(),
            crossing_rotations: self
                .crossing_rotations
                .iter()
                .map(|(&x, rot)| (x, *rot))
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Cells and planarization as free functions
// ---------------------------------------------------------------------------

/// The cells of a drawing, in deterministic order.
pub fn enumerate_cells(drawing: &Drawing) -> &[Cell] {
    drawing.cells()
}

/// The planarization of a drawing as an embedded graph in its own right.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Planarization {
    /// All nodes: vertices first, then crossings.
    pub nodes: Vec<Node>,
    /// One arc per segment, identified by `(edge, seg)` with its endpoints.
    pub arcs: Vec<PlanarArc>,
    /// Counterclockwise rotation of outgoing darts at every node.
    pub rotations: BTreeMap<Node, Vec<Dart>>,
}

/// An arc of the planarization: one segment of one edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PlanarArc {
    pub edge: EdgeId,
    pub seg: u32,
    pub tail: Node,
    pub head: Node,
}

/// Extracts the planarization of a drawing.
pub fn planarize(drawing: &Drawing) -> Planarization {
    let mut nodes: Vec<Node> = drawing.vertices().map(Node::V).collect();
    nodes.extend(drawing.crossings().map(|(x, _)| Node::X(x)));
    let mut arcs = Vec::new();
    for (e, edge) in drawing.edges() {
        for s in 0..edge.seg_count() {
            let (tail, head) = drawing.seg_ends(e, s);
            arcs.push(PlanarArc {
                edge: e,
                seg: s,
                tail,
                head,
            });
        }
    }
    let rotations = nodes
        .iter()
        .map(|&n| (n, drawing.out_darts(n).to_vec()))
        .collect();
    Planarization {
        nodes,
        arcs,
        rotations,
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
