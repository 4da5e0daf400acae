//! Exact verification toolkit for angle-guard formulas on helix polygons.
//!
//! A helix polygon is a spiral n-gon grown from a base triangle; its
//! interior is definable by a monotone Boolean formula over exactly n-2
//! natural vertex guards and by no fewer. This crate constructs the
//! polygons, generates their defining formulas, and certifies both the
//! definability and the lower bound mechanically: the plane is subdivided
//! exactly (rational arithmetic throughout), every arrangement face is
//! sampled once, and guard subsets are searched exhaustively.

pub mod fixtures;
pub mod formula;
pub mod geom;
pub mod guards;
pub mod helix;
pub mod scalar;
pub mod svg;
pub mod verify;

pub use formula::{
    helix_formula, parse as parse_formula, pocket_formula, pocket_guard_set, Formula,
};
pub use geom::{
    convex_hull, intersect_lines, line_through_parallel, orient, Line, LineIntersection, Location,
    Orientation, Point, Polygon,
};
pub use guards::{natural_guard, AngleGuard, GuardSet};
pub use helix::{
    build_helix, classify_vertices, default_base, default_delta_fraction, delta_bound, pocket,
    pocket_angle_check, Helix, HelixBuild, VertexKind,
};
pub use scalar::{format_scalar, parse_scalar, Scalar};
pub use verify::{
    build_arrangement, defines, defines_exterior, extract_monotone_dnf, min_natural_guards,
    monotone_definable, Arrangement, FaceSample, MinGuardsOutcome, VerificationReport,
};
