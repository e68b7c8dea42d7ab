//! Hand-built fixtures shared by the unit tests.
//!
//! Each fixture documents the picture its rotations were read from; the
//! builder's Euler check independently confirms that the rotation system
//! is a sphere drawing, so a mis-transcribed rotation cannot slip through
//! silently.

use crate::drawing::{Drawing, DrawingSpec};
use crate::drawing::EdgeEnd::{Source, Target};

pub fn build(spec: DrawingSpec) -> Drawing {
    Drawing::build(spec).expect("fixture must build")
}

/// Planar triangle: vertices 0,1,2 counterclockwise, edges e0=01, e1=12,
/// e2=20.
pub fn triangle() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(3);
    s.add_edge(0, 0, 1, &[]);
    s.add_edge(1, 1, 2, &[]);
    s.add_edge(2, 2, 0, &[]);
    s.set_rotation(0, &[(0, Source), (2, Target)]);
    s.set_rotation(1, &[(1, Source), (0, Target)]);
    s.set_rotation(2, &[(2, Source), (1, Target)]);
    s
}

/// A single edge between two vertices.
pub fn single_edge() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(2);
    s.add_edge(0, 0, 1, &[]);
    s.set_rotation(0, &[(0, Source)]);
    s.set_rotation(1, &[(0, Target)]);
    s
}

/// Star K₁,₃: center 0, leaves 1,2,3.
pub fn star3() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(4);
    s.add_edge(0, 0, 1, &[]);
    s.add_edge(1, 0, 2, &[]);
    s.add_edge(2, 0, 3, &[]);
    s.set_rotation(0, &[(0, Source), (1, Source), (2, Source)]);
    s.set_rotation(1, &[(0, Target)]);
    s.set_rotation(2, &[(1, Target)]);
    s.set_rotation(3, &[(2, Target)]);
    s
}

/// Two edges crossing once: e0 from 0=(−1,0) to 1=(1,0), e1 from 2=(0,−1)
/// to 3=(0,1), crossing at the origin.
pub fn x_drawing() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(4);
    s.add_edge(0, 0, 1, &[0]);
    s.add_edge(1, 2, 3, &[0]);
    s.add_crossing(0, 0, 1);
    s.set_rotation(0, &[(0, Source)]);
    s.set_rotation(1, &[(0, Target)]);
    s.set_rotation(2, &[(1, Source)]);
    s.set_rotation(3, &[(1, Target)]);
    // Counterclockwise at the origin: towards 1 (0°), 3 (90°), 0 (180°),
    // 2 (270°).
    s.set_crossing_rotation(0, [(0, 1), (1, 1), (0, 0), (1, 0)]);
    s
}

/// Planar K₄: outer triangle 0=(0,0), 1=(4,0), 2=(2,3) and center 3=(2,1).
/// Edges e0=01, e1=12, e2=20, e3=30, e4=31, e5=32.
pub fn k4_planar() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(4);
    s.add_edge(0, 0, 1, &[]);
    s.add_edge(1, 1, 2, &[]);
    s.add_edge(2, 2, 0, &[]);
    s.add_edge(3, 3, 0, &[]);
    s.add_edge(4, 3, 1, &[]);
    s.add_edge(5, 3, 2, &[]);
    // Angles at 0: e0 0°, e3 27°, e2 56°.
    s.set_rotation(0, &[(0, Source), (3, Target), (2, Target)]);
    // At 1: e1 124°, e4 153°, e0 180°.
    s.set_rotation(1, &[(1, Source), (4, Target), (0, Target)]);
    // At 2: e2 236°, e5 270°, e1 304°.
    s.set_rotation(2, &[(2, Source), (5, Target), (1, Target)]);
    // At 3 (center): e5 90°, e3 207°, e4 333°.
    s.set_rotation(3, &[(5, Source), (3, Source), (4, Source)]);
    s
}

/// K₄ drawn on four convex positions 0=(0,0), 1=(1,0), 2=(1,1), 3=(0,1):
/// the square e0=01, e1=12, e2=23, e3=30 plus crossing diagonals e4=02 and
/// e5=13 meeting at x0=(½,½).
pub fn k4_convex() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(4);
    s.add_edge(0, 0, 1, &[]);
    s.add_edge(1, 1, 2, &[]);
    s.add_edge(2, 2, 3, &[]);
    s.add_edge(3, 3, 0, &[]);
    s.add_edge(4, 0, 2, &[0]);
    s.add_edge(5, 1, 3, &[0]);
    s.add_crossing(0, 4, 5);
    // Angles at 0: e0 0°, e4 45°, e3 90°.
    s.set_rotation(0, &[(0, Source), (4, Source), (3, Target)]);
    // At 1: e1 90°, e5 135°, e0 180°.
    s.set_rotation(1, &[(1, Source), (5, Source), (0, Target)]);
    // At 2: e2 180°, e4 225°, e1 270°.
    s.set_rotation(2, &[(2, Source), (4, Target), (1, Target)]);
    // At 3: e2 0°, e3 270°, e5 315°.
    s.set_rotation(3, &[(2, Target), (3, Source), (5, Target)]);
    // At x0: towards 2 (45°), 3 (135°), 0 (225°), 1 (315°).
    s.set_crossing_rotation(0, [(4, 1), (5, 1), (4, 0), (5, 0)]);
    s
}

/// Two parallel (homotopic) edges between vertices 0 and 1, bounding an
/// empty lens.
pub fn bigon() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(2);
    s.add_edge(0, 0, 1, &[]);
    s.add_edge(1, 0, 1, &[]);
    s.set_rotation(0, &[(0, Source), (1, Source)]);
    s.set_rotation(1, &[(0, Target), (1, Target)]);
    s
}

/// Planar 4-cycle 0,1,2,3 counterclockwise.
pub fn square() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(4);
    s.add_edge(0, 0, 1, &[]);
    s.add_edge(1, 1, 2, &[]);
    s.add_edge(2, 2, 3, &[]);
    s.add_edge(3, 3, 0, &[]);
    s.set_rotation(0, &[(0, Source), (3, Target)]);
    s.set_rotation(1, &[(1, Source), (0, Target)]);
    s.set_rotation(2, &[(2, Source), (1, Target)]);
    s.set_rotation(3, &[(3, Source), (2, Target)]);
    s
}

/// Two adjacent edges that cross: e0 from 0=(0,0) to 1=(2,1) dipping
/// south first, e1 from 0 to 2=(2,−1) rising north first, meeting at
/// x0≈(1.2,0).  The region between vertex 0 and the crossing is an empty
/// lens.
pub fn adjacent_crossing() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(3);
    s.add_edge(0, 0, 1, &[0]);
    s.add_edge(1, 0, 2, &[0]);
    s.add_crossing(0, 0, 1);
    s.set_rotation(0, &[(0, Source), (1, Source)]);
    s.set_rotation(1, &[(0, Target)]);
    s.set_rotation(2, &[(1, Target)]);
    // At x0: e0 towards 1 (51°), e1 back towards 0 (129°), e0 back
    // towards 0 (231°), e1 towards 2 (309°).
    s.set_crossing_rotation(0, [(0, 1), (1, 0), (0, 0), (1, 1)]);
    s
}

/// Three pairwise-crossing independent edges bounding a central TRI3
/// cell: e0 from 0=(0,0) to 1=(4,2), e1 from 2=(0,2) to 3=(4,0), e2 from
/// 4=(1.5,3) down to 5=(1.5,−1).  Crossings: x0 = e0×e1 at (2,1),
/// x1 = e0×e2 at (1.5,0.75), x2 = e1×e2 at (1.5,1.25).
pub fn triple_cross() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(6);
    s.add_edge(0, 0, 1, &[1, 0]);
    s.add_edge(1, 2, 3, &[2, 0]);
    s.add_edge(2, 4, 5, &[2, 1]);
    s.add_crossing(0, 0, 1);
    s.add_crossing(1, 0, 2);
    s.add_crossing(2, 1, 2);
    for (v, rot) in [(0, 0), (2, 1), (4, 2)] {
        s.set_rotation(v, &[(rot, Source)]);
    }
    for (v, rot) in [(1, 0), (3, 1), (5, 2)] {
        s.set_rotation(v, &[(rot, Target)]);
    }
    // x0: e0 onward (27°), e1 back (153°), e0 back (207°), e1 onward (333°).
    s.set_crossing_rotation(0, [(0, 2), (1, 1), (0, 1), (1, 2)]);
    // x1: e0 onward (27°), e2 back up (90°), e0 back (207°), e2 down (270°).
    s.set_crossing_rotation(1, [(0, 1), (2, 1), (0, 0), (2, 2)]);
    // x2: e2 back up (90°), e1 back (153°), e2 down (270°), e1 onward (333°).
    s.set_crossing_rotation(2, [(2, 0), (1, 0), (2, 1), (1, 1)]);
    s
}

/// Two edges crossing twice, with a third edge dangling into the lens so
/// the lens is witnessed by a vertex:
/// e0 from 0=(−2,0) straight to 1=(2,0); e1 from 2=(−2,1) to 3=(2,1)
/// dipping below e0 between x0=(−1,0) and x2=(1,0); e2 from 4=(0,2) down
/// through x1=(0,0) ending at 5=(0,−0.3) inside the lens.
pub fn witnessed_double_crossing() -> DrawingSpec {
    let mut s = DrawingSpec::new();
    s.add_vertices(6);
    s.add_edge(0, 0, 1, &[0, 1, 2]);
    s.add_edge(1, 2, 3, &[0, 2]);
    s.add_edge(2, 4, 5, &[1]);
    s.add_crossing(0, 0, 1);
    s.add_crossing(1, 0, 2);
    s.add_crossing(2, 0, 1);
    s.set_rotation(0, &[(0, Source)]);
    s.set_rotation(1, &[(0, Target)]);
    s.set_rotation(2, &[(1, Source)]);
    s.set_rotation(3, &[(1, Target)]);
    s.set_rotation(4, &[(2, Source)]);
    s.set_rotation(5, &[(2, Target)]);
    // x0: e0 onward (0°), e1 back up to 2 (135°), e0 back (180°), e1 into
    // the dip (315°).
    s.set_crossing_rotation(0, [(0, 1), (1, 0), (0, 0), (1, 1)]);
    // x1: e0 onward (0°), e2 back up to 4 (90°), e0 back (180°), e2 down
    // to 5 (270°).
    s.set_crossing_rotation(1, [(0, 2), (2, 0), (0, 1), (2, 1)]);
    // x2: e0 onward (0°), e1 up to 3 (45°), e0 back (180°), e1 into the
    // dip (225°).
    s.set_crossing_rotation(2, [(0, 3), (1, 2), (0, 2), (1, 1)]);
    s
}
