//! The cell-counting identity and the edge-density inequality catalog.
//!
//! For every connected drawing with at least one edge, Euler's formula for
//! the planarization rearranges into a one-parameter family of exact
//! identities: for every rational `t`,
//!
//! ```text
//! |E| = t(|V| − 2) − Σ_c ((t−1)/4 · ‖c‖ − t) − |X|
//! ```
//!
//! where the sum runs over all cells, `‖c‖` is the size of a cell, and
//! `|X|` is the number of crossings.  [`density_formula`] evaluates both
//! sides with exact rational arithmetic and reports the residual, which is
//! zero on every valid input — the identity has no tolerance to tune, so a
//! nonzero residual always means a broken cell enumeration, never noise.
//!
//! Edge-density bounds for restricted drawing classes follow by choosing a
//! `t` and bounding the cell term: the class limits which small cells can
//! occur, so the per-cell summand `((t−1)/4 · ‖c‖ − t)` can be bounded
//! below and the identity turns into an inequality.  Every counting step
//! used in those arguments is catalogued as a [`CatalogEntry`], and
//! [`verify_inequality`] checks any entry against a concrete drawing.  The
//! resulting [`InequalityReport`]s are built for audits: each lists every
//! precondition it checked (failures produce reports, not silent skips),
//! the exact left and right side of each clause, whether the inequality is
//! tight, and — for the class bounds — a decomposition of the slack into
//! `cell term + crossings + additive constant`, which by the identity
//! accounts exactly for the gap between the edge count and the bound.
//!
//! [`max_edges`] tabulates the extremal bounds themselves, each of the
//! form `t(n − 2) + B` with exact rational `t` and `B`.
//!
//! Throughout, "size-k cells" counts cells by `‖c‖` alone, while `TRI3`,
//! `A4`, `Q4`, … count by incidence pattern (see
//! [`CellClass`](crate::drawing::CellClass)), and the *excess* of a
//! drawing is `Σ_{‖c‖ ≥ 5} (‖c‖ − 5)`, the total amount by which cells
//! outgrow size 5.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::classes;
use crate::drawing::{CellClass, Drawing, DrawingStats, VertexId};
use crate::link::{link_of_vertex, LinkError};
use crate::properties;
use crate::{rat, Rat};

fn whole(x: u64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

fn int(x: i64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

/// `Σ_c ((t−1)/4 · ‖c‖ − t)`, the cell term of the identity at `t`.
fn cell_term_at(s: &DrawingStats, t: &Rat) -> Rat {
    let quarter = (t.clone() - Rat::one()) / int(4);
    let mut sum = Rat::zero();
    for (&size, &count) in &s.size_histogram {
        sum += (quarter.clone() * whole(size) - t.clone()) * whole(count);
    }
    sum
}

fn size_count(s: &DrawingStats, size: u64) -> u64 {
    s.size_histogram.get(&size).copied().unwrap_or(0)
}

/// `Σ_{‖c‖ ≥ 5} (‖c‖ − 5)`.
fn excess_of(s: &DrawingStats) -> u64 {
    s.size_histogram
        .iter()
        .filter(|&(&size, _)| size >= 5)
        .map(|(&size, &count)| (size - 5) * count)
        .sum()
}

// ---------------------------------------------------------------------------
// The identity
// ---------------------------------------------------------------------------

/// Why [`density_formula`] refused a drawing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DensityError {
    /// The identity needs at least one edge; a drawing of isolated
    /// vertices has a cell of size 1 that the derivation never produces.
    NoEdges,
}

impl fmt::Display for DensityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityError::NoEdges => {
                write!(f, "precondition failed: the identity needs at least one edge")
            }
        }
    }
}

impl core::error::Error for DensityError {}

/// Both sides of the identity at a chosen parameter `t`, evaluated exactly.
///
/// `rhs = vertex_term − cell_term − crossings` and
/// `residual = rhs − edges`; the residual is zero for every drawing with
/// at least one edge, for every rational `t` (including `t = 1`, where the
/// identity degenerates to Euler's formula `|E| + 2|X| = |V| − 2 + |C| + |X|`
/// and the derived parameter `r = 4t/(t−1)` does not exist).
///
/// The two most useful specialisations are carried along:
///
/// * `bound_at_4` is the `t = 4` right-hand side with every cell of size
///   ≥ 6 dropped: `4(|V|−2) + 7/4·|C₃| + |C₄| + 1/4·|C₅| − |X|`, an upper
///   bound for `|E|` because the dropped summands are nonpositive.
/// * `value_at_5` is the `t = 5` right-hand side grouped by small sizes:
///   `5(|V|−2) + 2|C₃| + |C₄| − |X| − excess`, equal to `|E|` exactly.
///
/// Both groupings assume every cell has size at least 3.  That holds in
/// every non-homotopic drawing, but an empty lens produces a size-2 cell
/// whose dropped contribution is positive; then `value_at_5` undershoots
/// `|E|` by `Σ_{‖c‖<3} (5 − ‖c‖)` and `bound_at_4` need not bound.  The
/// primary `rhs`/`residual` fields are exact regardless.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensityEvaluation {
    /// The chosen parameter.
    pub t: Rat,
    /// `t(|V| − 2)`.
    pub vertex_term: Rat,
    /// `Σ_c ((t−1)/4 · ‖c‖ − t)`.
    pub cell_term: Rat,
    /// `|X|`.
    pub crossings: u64,
    /// `vertex_term − cell_term − crossings`.
    pub rhs: Rat,
    /// `|E|`.
    pub edges: u64,
    /// `rhs − edges`; exactly zero.
    pub residual: Rat,
    /// `4t/(t−1)`, the cell-size scale the derivation pivots on;
    /// `None` at `t = 1`.
    pub r: Option<Rat>,
    /// Cells of size exactly 3.
    pub cells_of_size_3: u64,
    /// Cells of size exactly 4.
    pub cells_of_size_4: u64,
    /// Cells of size exactly 5.
    pub cells_of_size_5: u64,
    /// `Σ_{‖c‖ ≥ 5} (‖c‖ − 5)`.
    pub excess: u64,
    /// `4(|V|−2) + 7/4·|C₃| + |C₄| + 1/4·|C₅| − |X|`.
    pub bound_at_4: Rat,
    /// `5(|V|−2) + 2|C₃| + |C₄| − |X| − excess`.
    pub value_at_5: Rat,
}

/// Evaluates the identity `|E| = t(|V|−2) − Σ_c ((t−1)/4·‖c‖ − t) − |X|`
/// at an arbitrary rational `t`, exactly.
///
/// The drawing is connected by construction; the only checkable
/// precondition is `|E| ≥ 1`.  Negative, fractional and `t = 1` parameters
/// are all legal.  The residual is returned rather than asserted so that
/// corpus sweeps can report a broken invariant instead of aborting on it.
pub fn density_formula(d: &Drawing, t: Rat) -> Result<DensityEvaluation, DensityError> {
    let s = d.stats();
    if s.edges == 0 {
        return Err(DensityError::NoEdges);
    }

    let vertex_term = t.clone() * (whole(s.vertices) - int(2));
    let cell_term = cell_term_at(s, &t);
    let rhs = vertex_term.clone() - cell_term.clone() - whole(s.crossings);
    let residual = rhs.clone() - whole(s.edges);
    let r = if t.is_one() {
        None
    } else {
        Some(int(4) * t.clone() / (t.clone() - Rat::one()))
    };

    let c3 = size_count(s, 3);
    let c4 = size_count(s, 4);
    let c5 = size_count(s, 5);
    let excess = excess_of(s);
    let bound_at_4 = int(4) * (whole(s.vertices) - int(2)) + rat(7, 4) * whole(c3)
        + whole(c4)
        + rat(1, 4) * whole(c5)
        - whole(s.crossings);
    let value_at_5 = int(5) * (whole(s.vertices) - int(2)) + int(2) * whole(c3) + whole(c4)
        - whole(s.crossings)
        - whole(excess);

    Ok(DensityEvaluation {
        t,
        vertex_term,
        cell_term,
        crossings: s.crossings,
        rhs,
        edges: s.edges,
        residual,
        r,
        cells_of_size_3: c3,
        cells_of_size_4: c4,
        cells_of_size_5: c5,
        excess,
        bound_at_4,
        value_at_5,
    })
}

// ---------------------------------------------------------------------------
// Drawing classes and the bound table
// ---------------------------------------------------------------------------

/// Facts about a geometric polyline realisation of a drawing.
///
/// Bend counts and crossing angles are metric, not combinatorial, so the
/// right-angle entries of the catalog cannot derive them from a
/// [`Drawing`]; the geometry layer measures them and passes them in here.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RacFacts {
    /// Largest number of bends on any edge.
    pub max_bends_any_edge: u32,
    /// Largest number of bends on any crossed edge.
    pub max_bends_crossed_edge: u32,
    /// Every crossing is at a right angle.
    pub right_angle_crossings: bool,
}

/// A drawing class with a catalogued extremal edge count.
///
/// Each class's bound has the shape `t(n − 2) + B`; see [`max_edges`].
/// The [`fmt::Display`] names double as the command-line spelling and are
/// parsed back by [`FromStr`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum DrawingClass {
    /// Right-angle-crossing polyline drawings in which every edge has at
    /// most the given number of bends (0, 1 or 2 are catalogued).
    RacBends(u8),
    /// Simple drawings in which the edges crossing any fixed edge form a
    /// star.
    FanCrossing,
    /// [`DrawingClass::FanCrossing`] with a bipartite graph.
    BipartiteFanCrossing,
    /// Simple drawings with no three pairwise crossing edges.
    QuasiplanarSimple,
    /// Non-homotopic (not necessarily simple) drawings with no three
    /// pairwise crossing edges.
    QuasiplanarNonHomotopic,
    /// Drawings in which every cell has at least `k` vertex-incidences.
    /// `k ∈ {1, 2}` additionally assumes non-homotopic; `k ≥ 3` does not.
    KPlusRealFace(u64),
    /// Drawings in which every edge is crossed at most `k` times
    /// (`k ∈ {1, 2}` are catalogued), assumed non-homotopic.
    KPlanar(u64),
}

impl fmt::Display for DrawingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DrawingClass::RacBends(k) => write!(f, "{k}-bend-rac"),
            DrawingClass::FanCrossing => write!(f, "fan-crossing"),
            DrawingClass::BipartiteFanCrossing => write!(f, "bipartite-fan-crossing"),
            DrawingClass::QuasiplanarSimple => write!(f, "simple-quasiplanar"),
            DrawingClass::QuasiplanarNonHomotopic => write!(f, "quasiplanar"),
            DrawingClass::KPlusRealFace(k) => write!(f, "{k}+-real-face"),
            DrawingClass::KPlanar(k) => write!(f, "{k}-planar"),
        }
    }
}

impl FromStr for DrawingClass {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<DrawingClass, BoundError> {
        match s {
            "fan-crossing" => return Ok(DrawingClass::FanCrossing),
            "bipartite-fan-crossing" => return Ok(DrawingClass::BipartiteFanCrossing),
            "simple-quasiplanar" => return Ok(DrawingClass::QuasiplanarSimple),
            "quasiplanar" => return Ok(DrawingClass::QuasiplanarNonHomotopic),
            _ => {}
        }
        if let Some(k) = s.strip_suffix("-bend-rac") {
            return k.parse().map(DrawingClass::RacBends).map_err(|_| BoundError::UnknownClass);
        }
        if let Some(k) = s.strip_suffix("+-real-face") {
            return k.parse().map(DrawingClass::KPlusRealFace).map_err(|_| BoundError::UnknownClass);
        }
        if let Some(k) = s.strip_suffix("-planar") {
            return k.parse().map(DrawingClass::KPlanar).map_err(|_| BoundError::UnknownClass);
        }
        Err(BoundError::UnknownClass)
    }
}

/// Why [`max_edges`] has no answer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundError {
    /// The class parameters fall outside the catalogued range (for
    /// example `3-planar` or a bend budget above 2).
    UnknownClass,
    /// The bound only applies from the stated vertex count upwards.
    NTooSmall {
        minimum: u64,
    },
}

impl fmt::Display for BoundError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundError::UnknownClass => {
                write!(f, "no edge bound is catalogued for this class")
            }
            BoundError::NTooSmall { minimum } => {
                write!(f, "the bound applies only from {minimum} vertices up")
            }
        }
    }
}

impl core::error::Error for BoundError {}

/// The bound `t(n − 2) + B` for a class, as `(t, B, minimum n)`.
///
/// The parameter `t` is the one whose cell term the class argument
/// controls — e.g. `t = 5` wherever only size-3 and size-4 cells had to be
/// charged, `t = k/(k−2)` for `k⁺`-real-face drawings, where every cell
/// has size at least `2k` and the per-cell summand `(‖c‖ − 2k)/(2(k−2))`
/// is nonnegative.
fn bound_parameters(class: DrawingClass) -> Option<(Rat, Rat, u64)> {
    let params = match class {
        DrawingClass::RacBends(0) => (rat(4, 1), rat(0, 1), 3),
        DrawingClass::RacBends(1) => (rat(5, 1), rat(0, 1), 3),
        DrawingClass::RacBends(2) => (rat(10, 1), rat(1, 1), 3),
        DrawingClass::RacBends(_) => return None,
        DrawingClass::FanCrossing => (rat(5, 1), rat(0, 1), 3),
        DrawingClass::BipartiteFanCrossing => (rat(4, 1), rat(-2, 1), 3),
        DrawingClass::QuasiplanarSimple => (rat(13, 2), rat(-7, 1), 4),
        DrawingClass::QuasiplanarNonHomotopic => (rat(8, 1), rat(-4, 1), 3),
        DrawingClass::KPlusRealFace(0) => return None,
        DrawingClass::KPlusRealFace(1) => (rat(5, 1), rat(0, 1), 3),
        DrawingClass::KPlusRealFace(2) => (rat(4, 1), rat(0, 1), 3),
        DrawingClass::KPlusRealFace(k) => (whole(k) / whole(k - 2), rat(0, 1), 3),
        DrawingClass::KPlanar(1) => (rat(4, 1), rat(0, 1), 3),
        DrawingClass::KPlanar(2) => (rat(5, 1), rat(0, 1), 3),
        DrawingClass::KPlanar(_) => return None,
    };
    Some(params)
}

/// The largest edge count an `n`-vertex drawing of the class can have.
///
/// Exact rational; fractional answers (for instance `5⁺`-real-face at
/// `n = 12`, which yields `50/3`) are returned unrounded so callers choose
/// their own floor.
pub fn max_edges(class: DrawingClass, n: u64) -> Result<Rat, BoundError> {
    let (t, add, min_n) = bound_parameters(class).ok_or(BoundError::UnknownClass)?;
    if n < min_n {
        return Err(BoundError::NTooSmall { minimum: min_n });
    }
    Ok(t * (whole(n) - int(2)) + add)
}

// ---------------------------------------------------------------------------
// Inequality reports
// ---------------------------------------------------------------------------

/// One named precondition of a catalog entry and whether the drawing
/// meets it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreconditionCheck {
    pub name: String,
    pub satisfied: bool,
}

/// Whether a clause claims `lhs ≤ rhs` or `lhs = rhs`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Eq,
}

/// One comparison of a catalog entry, with both sides evaluated exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    pub description: String,
    pub lhs: Rat,
    pub rhs: Rat,
    pub relation: Relation,
    pub holds: bool,
}

/// One additive piece of the gap `rhs − lhs` of a class bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SlackTerm {
    pub name: String,
    pub value: Rat,
}

/// The full result of checking one catalog entry against one drawing.
///
/// `applicable` is true when every precondition is satisfied; clauses are
/// evaluated either way so that sweeps remain auditable.  A drawing
/// *violates* an entry only when the entry applies and a clause fails —
/// [`InequalityReport::is_violation`] — which for the catalogued
/// statements never happens and therefore makes a sharp regression test
/// for the cell machinery.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InequalityReport {
    /// Catalog identifier, e.g. `OBS1` or `BOUND(2-planar)`.
    pub id: String,
    pub preconditions: Vec<PreconditionCheck>,
    /// All preconditions satisfied.
    pub applicable: bool,
    pub clauses: Vec<Clause>,
    /// All clauses hold.
    pub holds: bool,
    /// Applicable, holding, and every `≤`-clause is an equality.
    pub tight: bool,
    /// For class bounds with at least one edge: `cell term + crossings +
    /// additive constant`, summing exactly to `rhs − lhs` of the clause.
    pub slack: Vec<SlackTerm>,
    /// Names of the slack terms that are zero, filled in when `tight`;
    /// e.g. a tight `k⁺`-real-face bound forces `crossings = 0` and a
    /// vanishing cell term, i.e. every cell of size exactly `2k`.
    pub vanishing: Vec<String>,
    /// Human-readable failure data: the first failed clause with its
    /// numbers, or the precondition error that stopped a link surgery.
    pub witness: Option<String>,
}

impl InequalityReport {
    /// True when the drawing meets the entry's preconditions and still
    /// fails a clause.
    pub fn is_violation(&self) -> bool {
        self.applicable && !self.holds
    }
}

fn pre(name: impl Into<String>, satisfied: bool) -> PreconditionCheck {
    PreconditionCheck {
        name: name.into(),
        satisfied,
    }
}

fn le(description: impl Into<String>, lhs: Rat, rhs: Rat) -> Clause {
    let holds = lhs <= rhs;
    Clause {
        description: description.into(),
        lhs,
        rhs,
        relation: Relation::Le,
        holds,
    }
}

fn eq(description: impl Into<String>, lhs: Rat, rhs: Rat) -> Clause {
    let holds = lhs == rhs;
    Clause {
        description: description.into(),
        lhs,
        rhs,
        relation: Relation::Eq,
        holds,
    }
}

fn assemble(
    id: String,
    preconditions: Vec<PreconditionCheck>,
    clauses: Vec<Clause>,
    slack: Vec<SlackTerm>,
    witness: Option<String>,
) -> InequalityReport {
    let applicable = preconditions.iter().all(|p| p.satisfied);
    let holds = clauses.iter().all(|c| c.holds);
    let mut le_clauses = clauses.iter().filter(|c| c.relation == Relation::Le).peekable();
    let tight =
        applicable && holds && le_clauses.peek().is_some() && le_clauses.all(|c| c.lhs == c.rhs);
    let vanishing = if tight {
        slack.iter().filter(|s| s.value.is_zero()).map(|s| s.name.clone()).collect()
    } else {
        Vec::new()
    };
    let witness = witness.or_else(|| {
        clauses.iter().find(|c| !c.holds).map(|c| {
            format!(
                "violated: {} with left side {} and right side {}",
                c.description, c.lhs, c.rhs
            )
        })
    });
    InequalityReport {
        id,
        preconditions,
        applicable,
        clauses,
        holds,
        tight,
        slack,
        vanishing,
        witness,
    }
}

// ---------------------------------------------------------------------------
// The catalog
// ---------------------------------------------------------------------------

/// An entry of the inequality catalog.
///
/// Variant names are the entry identifiers used in reports, on the
/// command line and in serialized output.  Every entry is a *proved*
/// statement about all drawings meeting its preconditions, so across any
/// corpus the expected number of violations is zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CatalogEntry {
    /// Segment counts: `|S| = 2|X| + |E|` and `|S_in| = 2|X| − |E_x|`.
    /// Identities of the planarization; no preconditions.
    Obs1,
    /// Non-homotopic connected drawings on ≥ 3 vertices with none of the
    /// five crossing-heavy small cells (`TRI3`, `Q4`, `P5`, `A4`, `W5`)
    /// satisfy `|E| ≤ 4|V| − 8`.
    Lem4n8,
    /// Non-homotopic drawings satisfy `#A4 ≤ |X|`: each `A4` cell can be
    /// charged to one of its crossings injectively.
    ALeX,
    /// Bad-segment counting for connected non-homotopic drawings on ≥ 3
    /// vertices: `#A4 + 2·#Q4 + 3·#TRI3 ≤ |S_in|` and
    /// `3|C₃| + 2|C₄| ≤ |S_in| + #A4`.
    BGen,
    /// The vertex-link identity `‖c₀‖ = Σ_{c ∈ C(v)} (‖c‖ − 5) + |C(v)|`,
    /// checked by actually performing the removal surgery
    /// ([`link_of_vertex`]) and measuring the freed region.
    Link {
        vertex: VertexId,
    },
    /// Right-angle drawings whose crossed edges have at most `k ∈ {1,2}`
    /// bends (connected, non-homotopic) satisfy
    /// `2|C₃| + |C₄| ≤ |X| + (k−1)/2 · (|E_x| + 1)`.
    RacK {
        bends: u8,
        facts: RacFacts,
    },
    /// Simple connected fan-crossing drawings on ≥ 3 vertices satisfy
    /// `|C₄| ≤ |X|`.
    FcC4,
    /// Simple connected fan-crossing drawings on ≥ 3 vertices satisfy
    /// `|E| ≤ 5|V| − 10 − excess`.
    FcThm,
    /// Simple connected bipartite fan-crossing drawings on ≥ 3 vertices
    /// satisfy `|V| ≤ excess` and `|E| ≤ 4|V| − 10`.
    BipFc,
    /// Non-homotopic filled connected drawings on ≥ 3 vertices in which
    /// no cell is incident to more than 2 distinct vertices satisfy
    /// `#A4 ≤ 2|E_x| − 2|V| + 2·excess`.
    QpNohom,
    /// Filled simple quasiplanar connected drawings of minimum degree ≥ 4
    /// satisfy `#A4 − |E_x| ≤ |E| + 2·excess − 3.5|V|`.
    QpSimple,
    /// Connected non-homotopic 2-planar drawings satisfy
    /// `3·#TRI3 + 2·#Q4 + #A4 ≤ |X|`.
    TwoPlanar,
    /// The extremal bound `|E| ≤ t(|V|−2) + B` of a [`DrawingClass`],
    /// with the slack decomposed through the identity at that `t`.
    Bound {
        class: DrawingClass,
        facts: Option<RacFacts>,
    },
}

impl CatalogEntry {
    /// The identifier this entry reports under.
    pub fn id(&self) -> String {
        match self {
            CatalogEntry::Obs1 => String::from("OBS1"),
            CatalogEntry::Lem4n8 => String::from("LEM_4N8"),
            CatalogEntry::ALeX => String::from("A_LE_X"),
            CatalogEntry::BGen => String::from("B_GEN"),
            CatalogEntry::Link { vertex } => format!("LINK({vertex})"),
            CatalogEntry::RacK { bends, .. } => format!("RAC_K(k={bends})"),
            CatalogEntry::FcC4 => String::from("FC_C4"),
            CatalogEntry::FcThm => String::from("FC_THM"),
            CatalogEntry::BipFc => String::from("BIP_FC"),
            CatalogEntry::QpNohom => String::from("QP_NOHOM"),
            CatalogEntry::QpSimple => String::from("QP_SIMPLE"),
            CatalogEntry::TwoPlanar => String::from("TWO_PLANAR"),
            CatalogEntry::Bound { class, .. } => format!("BOUND({class})"),
        }
    }
}

/// Checks one catalog entry against a drawing.  Infallible: precondition
/// failures are part of the report, not errors.
pub fn verify_inequality(d: &Drawing, entry: CatalogEntry) -> InequalityReport {
    match entry {
        CatalogEntry::Obs1 => segment_counts(d),
        CatalogEntry::Lem4n8 => sparse_cells_bound(d),
        CatalogEntry::ALeX => apex_cells_vs_crossings(d),
        CatalogEntry::BGen => bad_segment_counts(d),
        CatalogEntry::Link { vertex } => vertex_link_identity(d, vertex),
        CatalogEntry::RacK { bends, facts } => rac_small_cells(d, bends, facts),
        CatalogEntry::FcC4 => fan_crossing_quads(d),
        CatalogEntry::FcThm => fan_crossing_bound(d),
        CatalogEntry::BipFc => bipartite_fan_crossing_bounds(d),
        CatalogEntry::QpNohom => quasiplanar_two_vertex_cells(d),
        CatalogEntry::QpSimple => quasiplanar_simple_cells(d),
        CatalogEntry::TwoPlanar => two_planar_small_cells(d),
        CatalogEntry::Bound { class, facts } => class_bound(d, class, facts),
    }
}

/// The corpus-wide entries: everything except the per-vertex
/// [`CatalogEntry::Link`] checks, which callers enumerate themselves.
///
/// Right-angle entries are included only when geometric facts are
/// supplied; the class bounds are instantiated for every catalogued
/// class, plus the drawing's own real-face level when it reaches 3.
pub fn standard_catalog(d: &Drawing, facts: Option<RacFacts>) -> Vec<CatalogEntry> {
    let mut entries = vec![
        CatalogEntry::Obs1,
        CatalogEntry::Lem4n8,
        CatalogEntry::ALeX,
        CatalogEntry::BGen,
        CatalogEntry::TwoPlanar,
        CatalogEntry::FcC4,
        CatalogEntry::FcThm,
        CatalogEntry::BipFc,
        CatalogEntry::QpNohom,
        CatalogEntry::QpSimple,
    ];
    if let Some(facts) = facts {
        entries.push(CatalogEntry::RacK { bends: 1, facts });
        entries.push(CatalogEntry::RacK { bends: 2, facts });
    }
    let mut bound_classes = vec![
        DrawingClass::RacBends(0),
        DrawingClass::RacBends(1),
        DrawingClass::RacBends(2),
        DrawingClass::FanCrossing,
        DrawingClass::BipartiteFanCrossing,
        DrawingClass::QuasiplanarSimple,
        DrawingClass::QuasiplanarNonHomotopic,
        DrawingClass::KPlusRealFace(1),
        DrawingClass::KPlusRealFace(2),
        DrawingClass::KPlanar(1),
        DrawingClass::KPlanar(2),
    ];
    let level = classes::real_face_level(d);
    if level >= 3 {
        bound_classes.push(DrawingClass::KPlusRealFace(level));
    }
    for class in bound_classes {
        entries.push(CatalogEntry::Bound { class, facts });
    }
    entries
}

// ---------------------------------------------------------------------------
// Entry implementations
// ---------------------------------------------------------------------------

fn segment_counts(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let clauses = vec![
        eq(
            "segments = 2 crossings + edges",
            whole(s.segments),
            int(2) * whole(s.crossings) + whole(s.edges),
        ),
        eq(
            "inner segments = 2 crossings - crossed edges",
            whole(s.inner_segments),
            int(2) * whole(s.crossings) - whole(s.crossed_edges),
        ),
    ];
    assemble(String::from("OBS1"), Vec::new(), clauses, Vec::new(), None)
}

fn sparse_cells_bound(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let preconditions = vec![
        pre("connected drawing", true),
        pre("non-homotopic", properties::is_non_homotopic(d)),
        pre("at least 3 vertices", s.vertices >= 3),
        pre("no TRI3 cells", s.class_count(CellClass::Tri3) == 0),
        pre("no Q4 cells", s.class_count(CellClass::Q4) == 0),
        pre("no P5 cells", s.class_count(CellClass::P5) == 0),
        pre("no A4 cells", s.class_count(CellClass::A4) == 0),
        pre("no W5 cells", s.class_count(CellClass::W5) == 0),
    ];
    let clause = le(
        "edges <= 4 vertices - 8",
        whole(s.edges),
        int(4) * whole(s.vertices) - int(8),
    );
    assemble(
        String::from("LEM_4N8"),
        preconditions,
        vec![clause],
        Vec::new(),
        None,
    )
}

fn apex_cells_vs_crossings(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let preconditions = vec![pre("non-homotopic", properties::is_non_homotopic(d))];
    let clause = le(
        "A4 cells <= crossings",
        whole(s.class_count(CellClass::A4)),
        whole(s.crossings),
    );
    assemble(
        String::from("A_LE_X"),
        preconditions,
        vec![clause],
        Vec::new(),
        None,
    )
}

fn bad_segment_counts(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let preconditions = vec![
        pre("connected drawing", true),
        pre("non-homotopic", properties::is_non_homotopic(d)),
        pre("at least 3 vertices", s.vertices >= 3),
    ];
    let a4 = s.class_count(CellClass::A4);
    let clauses = vec![
        le(
            "A4 + 2 Q4 + 3 TRI3 cells <= inner segments",
            whole(a4 + 2 * s.class_count(CellClass::Q4) + 3 * s.class_count(CellClass::Tri3)),
            whole(s.inner_segments),
        ),
        le(
            "3 size-3 + 2 size-4 cells <= inner segments + A4 cells",
            whole(3 * size_count(s, 3) + 2 * size_count(s, 4)),
            whole(s.inner_segments + a4),
        ),
    ];
    assemble(String::from("B_GEN"), preconditions, clauses, Vec::new(), None)
}

fn vertex_link_identity(d: &Drawing, vertex: VertexId) -> InequalityReport {
    let id = format!("LINK({vertex})");
    const NAMES: [&str; 6] = [
        "the vertex belongs to the drawing",
        "at least 3 vertices",
        "non-homotopic",
        "the corners of the vertex lie in pairwise distinct cells",
        "removing the vertex frees exactly its corner cells",
        "no neighbour is left isolated",
    ];
    match link_of_vertex(d, vertex) {
        Ok(link) => {
            let preconditions = NAMES.iter().map(|&n| pre(n, true)).collect();
            let clause = eq(
                "link size = sum of (corner cell size - 5) + corner count",
                whole(link.link_size),
                Rat::from_integer(BigInt::from(link.predicted_size)),
            );
            let witness = if link.matches {
                None
            } else {
                Some(format!("freed boundary walk sizes {:?}", link.walk_sizes))
            };
            assemble(id, preconditions, vec![clause], Vec::new(), witness)
        }
        Err(e) => {
            let failed = match e {
                LinkError::UnknownVertex(_) => 0,
                LinkError::TooFewVertices { .. } => 1,
                LinkError::NotNonHomotopic => 2,
                LinkError::CornersShareCell { .. } => 3,
                LinkError::FreedRegionMismatch { .. } => 4,
                LinkError::IsolatesNeighbour(_) => 5,
            };
            // Checks run in order, so everything before the failure passed
            // and everything after it was never evaluated.
            let preconditions = NAMES
                .iter()
                .enumerate()
                .take(failed + 1)
                .map(|(i, &n)| pre(n, i != failed))
                .collect();
            assemble(id, preconditions, Vec::new(), Vec::new(), Some(format!("{e}")))
        }
    }
}

fn rac_small_cells(d: &Drawing, bends: u8, facts: RacFacts) -> InequalityReport {
    let s = d.stats();
    let preconditions = vec![
        pre("bend budget is 1 or 2", bends == 1 || bends == 2),
        pre("connected drawing", true),
        pre("non-homotopic", properties::is_non_homotopic(d)),
        pre(
            format!("crossed edges have at most {bends} bends"),
            facts.max_bends_crossed_edge <= u32::from(bends),
        ),
        pre("all crossings are right angles", facts.right_angle_crossings),
    ];
    let clause = le(
        "2 size-3 + size-4 cells <= crossings + (k-1)/2 (crossed edges + 1)",
        whole(2 * size_count(s, 3) + size_count(s, 4)),
        whole(s.crossings) + rat(i64::from(bends) - 1, 2) * whole(s.crossed_edges + 1),
    );
    assemble(
        format!("RAC_K(k={bends})"),
        preconditions,
        vec![clause],
        Vec::new(),
        None,
    )
}

fn fan_crossing_preconditions(d: &Drawing) -> Vec<PreconditionCheck> {
    vec![
        pre("simple", properties::is_simple(d)),
        pre("connected drawing", true),
        pre("fan-crossing", classes::is_fan_crossing(d)),
        pre("at least 3 vertices", d.stats().vertices >= 3),
    ]
}

fn fan_crossing_quads(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let clause = le(
        "size-4 cells <= crossings",
        whole(size_count(s, 4)),
        whole(s.crossings),
    );
    assemble(
        String::from("FC_C4"),
        fan_crossing_preconditions(d),
        vec![clause],
        Vec::new(),
        None,
    )
}

fn fan_crossing_bound(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let clause = le(
        "edges <= 5 vertices - 10 - excess",
        whole(s.edges),
        int(5) * whole(s.vertices) - int(10) - whole(excess_of(s)),
    );
    assemble(
        String::from("FC_THM"),
        fan_crossing_preconditions(d),
        vec![clause],
        Vec::new(),
        None,
    )
}

fn bipartite_fan_crossing_bounds(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let mut preconditions = fan_crossing_preconditions(d);
    preconditions.insert(2, pre("bipartite", properties::bipartition(d).is_ok()));
    let clauses = vec![
        le("vertices <= excess", whole(s.vertices), whole(excess_of(s))),
        le(
            "edges <= 4 vertices - 10",
            whole(s.edges),
            int(4) * whole(s.vertices) - int(10),
        ),
    ];
    assemble(String::from("BIP_FC"), preconditions, clauses, Vec::new(), None)
}

fn quasiplanar_two_vertex_cells(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let preconditions = vec![
        pre("connected drawing", true),
        pre("non-homotopic", properties::is_non_homotopic(d)),
        pre("filled", properties::is_filled(d)),
        pre("at least 3 vertices", s.vertices >= 3),
        pre(
            "every cell is incident to at most 2 distinct vertices",
            properties::max_distinct_vertices_per_cell(d) <= 2,
        ),
    ];
    let clause = le(
        "A4 cells <= 2 crossed edges - 2 vertices + 2 excess",
        whole(s.class_count(CellClass::A4)),
        int(2) * whole(s.crossed_edges) - int(2) * whole(s.vertices)
            + int(2) * whole(excess_of(s)),
    );
    assemble(
        String::from("QP_NOHOM"),
        preconditions,
        vec![clause],
        Vec::new(),
        None,
    )
}

fn quasiplanar_simple_cells(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let min_degree = s.degree_sequence.first().copied().unwrap_or(0);
    let preconditions = vec![
        pre("simple", properties::is_simple(d)),
        pre("quasiplanar", classes::is_quasiplanar(d)),
        pre("filled", properties::is_filled(d)),
        pre("connected drawing", true),
        pre("minimum degree at least 4", min_degree >= 4),
    ];
    let clause = le(
        "A4 cells - crossed edges <= edges + 2 excess - 3.5 vertices",
        whole(s.class_count(CellClass::A4)) - whole(s.crossed_edges),
        whole(s.edges) + int(2) * whole(excess_of(s)) - rat(7, 2) * whole(s.vertices),
    );
    assemble(
        String::from("QP_SIMPLE"),
        preconditions,
        vec![clause],
        Vec::new(),
        None,
    )
}

fn two_planar_small_cells(d: &Drawing) -> InequalityReport {
    let s = d.stats();
    let preconditions = vec![
        pre("connected drawing", true),
        pre("non-homotopic", properties::is_non_homotopic(d)),
        pre("at most 2 crossings per edge", classes::is_k_planar(d, 2)),
    ];
    let clause = le(
        "3 TRI3 + 2 Q4 + A4 cells <= crossings",
        whole(
            3 * s.class_count(CellClass::Tri3)
                + 2 * s.class_count(CellClass::Q4)
                + s.class_count(CellClass::A4),
        ),
        whole(s.crossings),
    );
    assemble(
        String::from("TWO_PLANAR"),
        preconditions,
        vec![clause],
        Vec::new(),
        None,
    )
}

fn class_preconditions(
    d: &Drawing,
    class: DrawingClass,
    facts: Option<RacFacts>,
) -> Vec<PreconditionCheck> {
    match class {
        DrawingClass::RacBends(k) => {
            let mut v = vec![pre("connected drawing", true)];
            if k >= 1 {
                v.push(pre("non-homotopic", properties::is_non_homotopic(d)));
            }
            match facts {
                Some(f) => {
                    v.push(pre("geometric bend and angle facts supplied", true));
                    v.push(pre(
                        format!("every edge has at most {k} bends"),
                        f.max_bends_any_edge <= u32::from(k),
                    ));
                    v.push(pre("all crossings are right angles", f.right_angle_crossings));
                }
                None => v.push(pre("geometric bend and angle facts supplied", false)),
            }
            v
        }
        DrawingClass::FanCrossing => vec![
            pre("simple", properties::is_simple(d)),
            pre("connected drawing", true),
            pre("fan-crossing", classes::is_fan_crossing(d)),
        ],
        DrawingClass::BipartiteFanCrossing => vec![
            pre("simple", properties::is_simple(d)),
            pre("connected drawing", true),
            pre("bipartite", properties::bipartition(d).is_ok()),
            pre("fan-crossing", classes::is_fan_crossing(d)),
        ],
        // The simple-quasiplanar bound holds with no connectivity
        // hypothesis at all, so none is listed.
        DrawingClass::QuasiplanarSimple => vec![
            pre("simple", properties::is_simple(d)),
            pre("quasiplanar", classes::is_quasiplanar(d)),
        ],
        DrawingClass::QuasiplanarNonHomotopic => vec![
            pre("connected drawing", true),
            pre("non-homotopic", properties::is_non_homotopic(d)),
            pre("quasiplanar", classes::is_quasiplanar(d)),
        ],
        DrawingClass::KPlusRealFace(k) => {
            let mut v = vec![pre("connected drawing", true)];
            // For k >= 3 the bound needs no homotopy assumption.
            if k <= 2 {
                v.push(pre("non-homotopic", properties::is_non_homotopic(d)));
            }
            v.push(pre(
                format!("every cell has at least {k} vertex-incidences"),
                classes::is_k_plus_real_face(d, k),
            ));
            v
        }
        DrawingClass::KPlanar(k) => vec![
            pre("connected drawing", true),
            pre("non-homotopic", properties::is_non_homotopic(d)),
            pre(
                format!("at most {k} crossings per edge"),
                classes::is_k_planar(d, k),
            ),
        ],
    }
}

fn bound_description(t: &Rat, add: &Rat) -> String {
    if add.is_zero() {
        format!("edges <= {t} (vertices - 2)")
    } else if add.is_positive() {
        format!("edges <= {t} (vertices - 2) + {add}")
    } else {
        format!("edges <= {t} (vertices - 2) - {}", -add.clone())
    }
}

fn class_bound(d: &Drawing, class: DrawingClass, facts: Option<RacFacts>) -> InequalityReport {
    let id = format!("BOUND({class})");
    let Some((t, add, min_n)) = bound_parameters(class) else {
        return assemble(
            id,
            vec![pre("a bound is catalogued for the class parameters", false)],
            Vec::new(),
            Vec::new(),
            None,
        );
    };
    let s = d.stats();
    let mut preconditions = vec![pre(format!("at least {min_n} vertices"), s.vertices >= min_n)];
    preconditions.extend(class_preconditions(d, class, facts));

    let rhs = t.clone() * (whole(s.vertices) - int(2)) + add.clone();
    let clause = le(bound_description(&t, &add), whole(s.edges), rhs);

    // The identity at this t turns the gap rhs − lhs into three summands,
    // valid whenever the drawing has an edge (class preconditions are not
    // needed for the decomposition itself).
    let slack = if s.edges >= 1 {
        let terms = vec![
            SlackTerm {
                name: format!("cell term at t = {t}"),
                value: cell_term_at(s, &t),
            },
            SlackTerm {
                name: String::from("crossings"),
                value: whole(s.crossings),
            },
            SlackTerm {
                name: String::from("additive constant"),
                value: add,
            },
        ];
        debug_assert_eq!(
            terms.iter().fold(Rat::zero(), |acc, term| acc + term.value.clone()),
            clause.rhs.clone() - clause.lhs.clone(),
            "the slack terms decompose the gap exactly"
        );
        terms
    } else {
        Vec::new()
    };

    assemble(id, preconditions, vec![clause], slack, None)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::DrawingSpec;
    use crate::testutil;

    fn fixtures() -> Vec<(&'static str, Drawing)> {
        vec![
            ("triangle", testutil::build(testutil::triangle())),
            ("single_edge", testutil::build(testutil::single_edge())),
            ("star3", testutil::build(testutil::star3())),
            ("x_drawing", testutil::build(testutil::x_drawing())),
            ("k4_planar", testutil::build(testutil::k4_planar())),
            ("k4_convex", testutil::build(testutil::k4_convex())),
            ("bigon", testutil::build(testutil::bigon())),
            ("square", testutil::build(testutil::square())),
            ("adjacent_crossing", testutil::build(testutil::adjacent_crossing())),
            ("triple_cross", testutil::build(testutil::triple_cross())),
            (
                "witnessed_double_crossing",
                testutil::build(testutil::witnessed_double_crossing()),
            ),
        ]
    }

    fn straight_right_angle_facts() -> RacFacts {
        RacFacts {
            max_bends_any_edge: 0,
            max_bends_crossed_edge: 0,
            right_angle_crossings: true,
        }
    }

    // ----- the identity ----------------------------------------------------

    #[test]
    fn the_identity_is_exact_on_the_planar_triangle() {
        let d = testutil::build(testutil::triangle());
        let ev = density_formula(&d, rat(5, 1)).expect("the triangle has edges");
        assert_eq!(ev.vertex_term, rat(5, 1));
        assert_eq!(ev.cell_term, rat(2, 1), "two size-6 cells contribute (6-5) each");
        assert_eq!(ev.crossings, 0);
        assert_eq!(ev.rhs, rat(3, 1));
        assert_eq!(ev.edges, 3);
        assert_eq!(ev.residual, rat(0, 1));
        assert_eq!(ev.r, Some(rat(5, 1)), "4t/(t-1) = 20/4 at t = 5");
    }

    #[test]
    fn the_identity_is_exact_on_the_crossed_quadrilateral() {
        let d = testutil::build(testutil::k4_convex());
        let ev = density_formula(&d, rat(5, 1)).expect("edges");
        // 5·(4−2) − [(8−5) + 4·(5−5)] − 1 = 10 − 3 − 1 = 6.
        assert_eq!(ev.vertex_term, rat(10, 1));
        assert_eq!(ev.cell_term, rat(3, 1));
        assert_eq!(ev.rhs, rat(6, 1));
        assert_eq!(ev.edges, 6);
        assert_eq!(ev.residual, rat(0, 1));
        assert_eq!(ev.cells_of_size_5, 4);
        assert_eq!(ev.excess, 3, "only the size-8 outer cell outgrows 5");
        assert_eq!(ev.bound_at_4, rat(8, 1));
        assert_eq!(ev.value_at_5, rat(6, 1));
    }

    #[test]
    fn the_identity_is_exact_on_a_single_edge() {
        let d = testutil::build(testutil::single_edge());
        let ev = density_formula(&d, rat(5, 1)).expect("one edge");
        // 5·(2−2) − (4−5) − 0 = 1.
        assert_eq!(ev.vertex_term, rat(0, 1));
        assert_eq!(ev.cell_term, rat(-1, 1));
        assert_eq!(ev.rhs, rat(1, 1));
        assert_eq!(ev.residual, rat(0, 1));
        assert_eq!(ev.value_at_5, rat(1, 1));
        assert_eq!(ev.bound_at_4, rat(1, 1), "the t = 4 bound is tight here");
    }

    #[test]
    fn the_identity_holds_for_every_rational_parameter_across_the_corpus() {
        let ts = [rat(1, 1), rat(4, 1), rat(5, 1), rat(1, 3), rat(-7, 2), rat(22, 7)];
        for (name, d) in fixtures() {
            for t in &ts {
                let ev = density_formula(&d, t.clone()).expect("every fixture has edges");
                assert_eq!(ev.residual, rat(0, 1), "{name} at t = {t}");
                assert_eq!(
                    ev.r.is_none(),
                    *t == rat(1, 1),
                    "r exists exactly away from t = 1 ({name})"
                );
            }
        }
    }

    /// Two edges crossing twice with nothing inside the lens: the lens
    /// cell has two segments and no vertices, i.e. size 2.
    fn bare_double_crossing() -> Drawing {
        use crate::drawing::EdgeEnd::{Source, Target};
        let mut s = DrawingSpec::new();
        s.add_vertices(4);
        s.add_edge(0, 0, 1, &[0, 1]);
        s.add_edge(1, 2, 3, &[0, 1]);
        s.add_crossing(0, 0, 1);
        s.add_crossing(1, 0, 1);
        s.set_rotation(0, &[(0, Source)]);
        s.set_rotation(1, &[(0, Target)]);
        s.set_rotation(2, &[(1, Source)]);
        s.set_rotation(3, &[(1, Target)]);
        s.set_crossing_rotation(0, [(0, 1), (1, 0), (0, 0), (1, 1)]);
        s.set_crossing_rotation(1, [(0, 2), (1, 2), (0, 1), (1, 1)]);
        testutil::build(s)
    }

    #[test]
    fn small_cell_groupings_match_the_identity_unless_cells_dip_below_size_3() {
        for (name, d) in fixtures() {
            let ev = density_formula(&d, rat(5, 1)).expect("edges");
            assert_eq!(ev.value_at_5, whole(ev.edges), "{name}");
            assert!(ev.bound_at_4 >= whole(ev.edges), "{name}");
        }
        // Every corpus cell has size >= 3 (even a lens pinched at a vertex
        // is a size-3 cell), so the caveat needs an unwitnessed double
        // crossing: its empty lens has size 2 and shifts the grouped t = 5
        // value by exactly 5 - 2 = 3.
        let lens = bare_double_crossing();
        assert_eq!(size_count(lens.stats(), 2), 1);
        let ev = density_formula(&lens, rat(5, 1)).expect("edges");
        assert_eq!(ev.residual, rat(0, 1), "the identity itself is unaffected");
        assert_eq!(ev.value_at_5, whole(ev.edges) - int(3));
    }

    #[test]
    fn edgeless_drawings_are_rejected() {
        let mut spec = DrawingSpec::new();
        spec.add_vertex(0);
        let d = Drawing::build(spec).expect("a lone vertex is a valid drawing");
        assert_eq!(density_formula(&d, rat(5, 1)), Err(DensityError::NoEdges));
    }

    // ----- the bound table --------------------------------------------------

    #[test]
    fn the_bound_table_matches_worked_examples() {
        assert_eq!(max_edges(DrawingClass::KPlanar(1), 10), Ok(rat(32, 1)));
        assert_eq!(max_edges(DrawingClass::KPlanar(2), 10), Ok(rat(40, 1)));
        assert_eq!(max_edges(DrawingClass::RacBends(0), 10), Ok(rat(32, 1)));
        assert_eq!(max_edges(DrawingClass::RacBends(1), 10), Ok(rat(40, 1)));
        assert_eq!(max_edges(DrawingClass::RacBends(2), 10), Ok(rat(81, 1)));
        assert_eq!(max_edges(DrawingClass::FanCrossing, 10), Ok(rat(40, 1)));
        assert_eq!(max_edges(DrawingClass::BipartiteFanCrossing, 10), Ok(rat(30, 1)));
        assert_eq!(max_edges(DrawingClass::QuasiplanarSimple, 10), Ok(rat(45, 1)));
        assert_eq!(max_edges(DrawingClass::QuasiplanarNonHomotopic, 10), Ok(rat(60, 1)));
        assert_eq!(max_edges(DrawingClass::KPlusRealFace(1), 10), Ok(rat(40, 1)));
        assert_eq!(max_edges(DrawingClass::KPlusRealFace(2), 10), Ok(rat(32, 1)));
        assert_eq!(max_edges(DrawingClass::KPlusRealFace(4), 10), Ok(rat(16, 1)));
        assert_eq!(
            max_edges(DrawingClass::KPlusRealFace(5), 12),
            Ok(rat(50, 3)),
            "fractional bounds are returned unrounded"
        );
    }

    #[test]
    fn the_bound_table_rejects_unknown_or_undersized_inputs() {
        assert_eq!(max_edges(DrawingClass::KPlanar(0), 10), Err(BoundError::UnknownClass));
        assert_eq!(max_edges(DrawingClass::KPlanar(3), 10), Err(BoundError::UnknownClass));
        assert_eq!(
            max_edges(DrawingClass::KPlusRealFace(0), 10),
            Err(BoundError::UnknownClass)
        );
        assert_eq!(max_edges(DrawingClass::RacBends(3), 10), Err(BoundError::UnknownClass));
        assert_eq!(
            max_edges(DrawingClass::QuasiplanarSimple, 3),
            Err(BoundError::NTooSmall { minimum: 4 })
        );
        assert_eq!(
            max_edges(DrawingClass::KPlanar(1), 2),
            Err(BoundError::NTooSmall { minimum: 3 })
        );
    }

    #[test]
    fn class_names_round_trip_through_parsing() {
        let classes = [
            DrawingClass::RacBends(0),
            DrawingClass::RacBends(2),
            DrawingClass::FanCrossing,
            DrawingClass::BipartiteFanCrossing,
            DrawingClass::QuasiplanarSimple,
            DrawingClass::QuasiplanarNonHomotopic,
            DrawingClass::KPlusRealFace(4),
            DrawingClass::KPlanar(2),
        ];
        for class in classes {
            let name = format!("{class}");
            assert_eq!(name.parse::<DrawingClass>(), Ok(class), "{name}");
        }
        assert_eq!("1-planar".parse::<DrawingClass>(), Ok(DrawingClass::KPlanar(1)));
        assert_eq!(
            "3+-real-face".parse::<DrawingClass>(),
            Ok(DrawingClass::KPlusRealFace(3))
        );
        assert_eq!("frobnicating".parse::<DrawingClass>(), Err(BoundError::UnknownClass));
        assert_eq!("x-bend-rac".parse::<DrawingClass>(), Err(BoundError::UnknownClass));
    }

    // ----- catalog entries --------------------------------------------------

    #[test]
    fn segment_counts_are_identities_with_no_preconditions() {
        for (name, d) in fixtures() {
            let report = verify_inequality(&d, CatalogEntry::Obs1);
            assert!(report.applicable, "{name}");
            assert!(report.holds, "{name}");
            assert!(report.preconditions.is_empty(), "{name}");
            assert_eq!(report.clauses.len(), 2, "{name}");
            assert!(!report.tight, "equalities carry no Le clause to be tight ({name})");
        }
    }

    #[test]
    fn the_sparse_cell_bound_applies_to_k4_and_gates_on_lenses() {
        let d = testutil::build(testutil::k4_convex());
        let report = verify_inequality(&d, CatalogEntry::Lem4n8);
        assert!(report.applicable, "K4 has only D5 and size-8 cells");
        assert_eq!(report.clauses[0].lhs, rat(6, 1));
        assert_eq!(report.clauses[0].rhs, rat(8, 1));
        assert!(report.holds && !report.is_violation());

        let lens = testutil::build(testutil::adjacent_crossing());
        let report = verify_inequality(&lens, CatalogEntry::Lem4n8);
        assert!(!report.applicable);
        assert!(report
            .preconditions
            .iter()
            .any(|p| p.name == "non-homotopic" && !p.satisfied));
        assert!(!report.is_violation(), "inapplicable reports never count as violations");
    }

    #[test]
    fn apex_cells_never_exceed_crossings() {
        let d = testutil::build(testutil::k4_convex());
        let report = verify_inequality(&d, CatalogEntry::ALeX);
        assert!(report.applicable);
        assert_eq!(report.clauses[0].lhs, rat(0, 1));
        assert_eq!(report.clauses[0].rhs, rat(1, 1));
        assert!(report.holds);
    }

    #[test]
    fn bad_segment_counting_is_tight_on_k4() {
        let d = testutil::build(testutil::k4_convex());
        let report = verify_inequality(&d, CatalogEntry::BGen);
        assert!(report.applicable && report.holds);
        // |S_in| = 2·1 − 2 = 0 and there are no small cells: both clauses
        // read 0 <= 0.
        assert_eq!(report.clauses[0].rhs, rat(0, 1));
        assert!(report.tight);
    }

    #[test]
    fn the_link_entry_mirrors_the_surgery() {
        let d = testutil::build(testutil::k4_convex());
        let report = verify_inequality(&d, CatalogEntry::Link { vertex: VertexId(0) });
        assert!(report.applicable);
        assert_eq!(report.clauses[0].lhs, rat(6, 1));
        assert_eq!(report.clauses[0].rhs, rat(6, 1));
        assert!(report.holds);

        let star = testutil::build(testutil::star3());
        let centre = verify_inequality(&star, CatalogEntry::Link { vertex: VertexId(0) });
        assert!(!centre.applicable);
        assert!(centre.preconditions.iter().any(
            |p| p.name == "the corners of the vertex lie in pairwise distinct cells"
                && !p.satisfied
        ));
        assert!(centre.witness.is_some());
        assert!(!centre.is_violation());
    }

    #[test]
    fn right_angle_small_cell_bounds_use_supplied_facts() {
        // The square-with-perpendicular-diagonals realisation of K4 is a
        // straight-line right-angle drawing, so these facts are truthful.
        let d = testutil::build(testutil::k4_convex());
        let facts = straight_right_angle_facts();

        let one_bend = verify_inequality(&d, CatalogEntry::RacK { bends: 1, facts });
        assert!(one_bend.applicable && one_bend.holds);
        assert_eq!(one_bend.clauses[0].lhs, rat(0, 1));
        assert_eq!(one_bend.clauses[0].rhs, rat(1, 1), "k = 1 adds no slack to |X|");

        let two_bend = verify_inequality(&d, CatalogEntry::RacK { bends: 2, facts });
        assert_eq!(
            two_bend.clauses[0].rhs,
            rat(5, 2),
            "|X| + (1/2)(|E_x| + 1) = 1 + 3/2"
        );

        let slanted = RacFacts {
            right_angle_crossings: false,
            ..facts
        };
        let report = verify_inequality(&d, CatalogEntry::RacK { bends: 1, facts: slanted });
        assert!(!report.applicable && !report.is_violation());

        let zero = verify_inequality(&d, CatalogEntry::RacK { bends: 0, facts });
        assert!(!zero.applicable, "the statement only covers bend budgets 1 and 2");
    }

    #[test]
    fn fan_crossing_inequalities_hold_on_k4() {
        let d = testutil::build(testutil::k4_convex());
        let quads = verify_inequality(&d, CatalogEntry::FcC4);
        assert!(quads.applicable && quads.holds);

        let bound = verify_inequality(&d, CatalogEntry::FcThm);
        assert!(bound.applicable);
        assert_eq!(bound.clauses[0].lhs, rat(6, 1));
        assert_eq!(bound.clauses[0].rhs, rat(7, 1), "5·4 − 10 − excess 3");
        assert!(bound.holds);
    }

    #[test]
    fn bipartite_fan_crossing_needs_a_bipartition() {
        let k4 = testutil::build(testutil::k4_convex());
        let report = verify_inequality(&k4, CatalogEntry::BipFc);
        assert!(!report.applicable);
        assert!(report
            .preconditions
            .iter()
            .any(|p| p.name == "bipartite" && !p.satisfied));

        let square = testutil::build(testutil::square());
        let report = verify_inequality(&square, CatalogEntry::BipFc);
        assert!(report.applicable && report.holds);
        assert_eq!(report.clauses[0].lhs, rat(4, 1), "vertices");
        assert_eq!(report.clauses[0].rhs, rat(6, 1), "two size-8 cells give excess 6");
        assert_eq!(report.clauses[1].rhs, rat(6, 1), "4·4 − 10");
    }

    #[test]
    fn quasiplanar_entries_report_their_gating_preconditions() {
        let d = testutil::build(testutil::k4_convex());

        let nohom = verify_inequality(&d, CatalogEntry::QpNohom);
        assert!(!nohom.applicable, "the outer cell touches all four vertices");
        assert!(nohom.preconditions.iter().any(
            |p| p.name == "every cell is incident to at most 2 distinct vertices"
                && !p.satisfied
        ));

        let simple = verify_inequality(&d, CatalogEntry::QpSimple);
        assert!(!simple.applicable, "K4 has minimum degree 3");
        assert!(simple
            .preconditions
            .iter()
            .any(|p| p.name == "minimum degree at least 4" && !p.satisfied));
        // The clause is still evaluated for the audit trail: −2 <= −2.
        assert_eq!(simple.clauses[0].lhs, rat(-2, 1));
        assert_eq!(simple.clauses[0].rhs, rat(-2, 1));
        assert!(!simple.tight, "tightness is only claimed when applicable");
    }

    #[test]
    fn two_planar_cell_counts_hold_where_applicable() {
        let d = testutil::build(testutil::k4_convex());
        let report = verify_inequality(&d, CatalogEntry::TwoPlanar);
        assert!(report.applicable && report.holds);
        assert_eq!(report.clauses[0].lhs, rat(0, 1));
        assert_eq!(report.clauses[0].rhs, rat(1, 1));

        // Three pairwise crossing edges are exactly 2-planar, and their
        // central TRI3 cell spends the whole crossing budget: 3·1 <= 3.
        let three = testutil::build(testutil::triple_cross());
        let report = verify_inequality(&three, CatalogEntry::TwoPlanar);
        assert!(report.applicable && report.holds && report.tight);
        assert_eq!(report.clauses[0].lhs, rat(3, 1));
        assert_eq!(report.clauses[0].rhs, rat(3, 1));

        let heavy = testutil::build(testutil::witnessed_double_crossing());
        let report = verify_inequality(&heavy, CatalogEntry::TwoPlanar);
        assert!(!report.applicable, "one edge carries three crossings");
        assert!(report
            .preconditions
            .iter()
            .any(|p| p.name == "at most 2 crossings per edge" && !p.satisfied));
    }

    #[test]
    fn class_bounds_decompose_their_slack_exactly() {
        let d = testutil::build(testutil::k4_convex());
        let report = verify_inequality(
            &d,
            CatalogEntry::Bound {
                class: DrawingClass::KPlanar(1),
                facts: None,
            },
        );
        assert!(report.applicable && report.holds && !report.tight);
        assert_eq!(report.clauses[0].lhs, rat(6, 1));
        assert_eq!(report.clauses[0].rhs, rat(8, 1));
        let total = report
            .slack
            .iter()
            .fold(rat(0, 1), |acc, term| acc + term.value.clone());
        assert_eq!(total, rat(2, 1), "slack sums to the gap");
        assert_eq!(report.slack[0].value, rat(1, 1), "cell term at t = 4");
        assert_eq!(report.slack[1].value, rat(1, 1), "crossings");
        assert_eq!(report.slack[2].value, rat(0, 1), "additive constant");
    }

    #[test]
    fn tight_bounds_name_their_vanishing_slack() {
        // A planar triangle meets the 3+-real-face bound with equality;
        // equality forces zero crossings and every cell of size 2k = 6.
        let d = testutil::build(testutil::triangle());
        let report = verify_inequality(
            &d,
            CatalogEntry::Bound {
                class: DrawingClass::KPlusRealFace(3),
                facts: None,
            },
        );
        assert!(report.applicable && report.holds);
        assert_eq!(report.clauses[0].lhs, rat(3, 1));
        assert_eq!(report.clauses[0].rhs, rat(3, 1));
        assert!(report.tight);
        assert_eq!(
            report.vanishing.len(),
            report.slack.len(),
            "every slack term vanishes at a tight k+ bound"
        );
        assert!(report.vanishing.iter().any(|n| n == "crossings"));
    }

    #[test]
    fn unrecognized_bound_parameters_are_reported_not_guessed() {
        let d = testutil::build(testutil::triangle());
        let report = verify_inequality(
            &d,
            CatalogEntry::Bound {
                class: DrawingClass::KPlanar(7),
                facts: None,
            },
        );
        assert!(!report.applicable);
        assert!(report.clauses.is_empty());
        assert!(!report.is_violation());
    }

    // ----- sweeps ------------------------------------------------------------

    #[test]
    fn the_standard_catalog_is_violation_free_on_the_corpus() {
        for (name, d) in fixtures() {
            for entry in standard_catalog(&d, None) {
                let report = verify_inequality(&d, entry);
                assert!(
                    !report.is_violation(),
                    "{name}: {} violated — {:?}",
                    report.id,
                    report.witness
                );
            }
        }
    }

    #[test]
    fn the_standard_catalog_enumerates_the_expected_entries() {
        let d = testutil::build(testutil::k4_convex());
        let with_facts: Vec<String> = standard_catalog(&d, Some(straight_right_angle_facts()))
            .iter()
            .map(CatalogEntry::id)
            .collect();
        for expected in [
            "OBS1",
            "LEM_4N8",
            "A_LE_X",
            "B_GEN",
            "TWO_PLANAR",
            "FC_C4",
            "FC_THM",
            "BIP_FC",
            "QP_NOHOM",
            "QP_SIMPLE",
            "RAC_K(k=1)",
            "RAC_K(k=2)",
            "BOUND(0-bend-rac)",
            "BOUND(2-bend-rac)",
            "BOUND(fan-crossing)",
            "BOUND(bipartite-fan-crossing)",
            "BOUND(simple-quasiplanar)",
            "BOUND(quasiplanar)",
            "BOUND(1-planar)",
            "BOUND(2-planar)",
            "BOUND(1+-real-face)",
            "BOUND(2+-real-face)",
        ] {
            assert!(with_facts.iter().any(|id| id == expected), "{expected} missing");
        }
        assert!(
            with_facts.iter().all(|id| !id.starts_with("LINK")),
            "links are checked per vertex, not in the standard sweep"
        );

        let without: Vec<String> =
            standard_catalog(&d, None).iter().map(CatalogEntry::id).collect();
        assert!(without.iter().all(|id| !id.starts_with("RAC_K")));

        // A drawing whose cells all show three or more vertices also gets
        // its own best k+ bound.
        let tri = testutil::build(testutil::triangle());
        let ids: Vec<String> =
            standard_catalog(&tri, None).iter().map(CatalogEntry::id).collect();
        assert!(ids.iter().any(|id| id == "BOUND(3+-real-face)"));
    }
}
