//! Incremental construction of helix polygons, pocket extraction and
//! vertex classification.
//!
//! A helix polygon is grown from a base triangle one vertex at a time. Each
//! round works inside the triangle spanned by the three most recent
//! vertices (A, B, C with C the newest): two points are marched a fixed
//! fraction of the way from C along the sides CA and CB, lines through them
//! parallel to the opposite sides are intersected, and the intersection
//! becomes the next vertex. Adding edges to the two previous vertices and
//! removing the edge between them extends the boundary, so the polygon
//! winds inward as a spiral corridor. Marching relative to the current
//! triangle keeps every intermediate polygon simple for any step fraction
//! in (0,1), at every n.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    convex_hull, intersect_lines, orient, GeomError, Line, LineIntersection, Orientation, Point,
    Polygon,
};
use crate::guards::{natural_guard, AngleGuard, GuardError, GuardSet};
use crate::scalar::{format_scalar, integer, rational, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HelixError {
    #[error("n must be at least 3, got {0}")]
    TooSmall(usize),
    #[error("invalid base triangle: {0}")]
    InvalidBase(String),
    #[error("delta fraction must lie strictly between 0 and 1, got {0}")]
    InvalidDeltaFraction(String),
    #[error("construction failed at step {step}: {reason}")]
    Construction { step: usize, reason: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PocketError {
    #[error("polygon is convex: the pocket is empty")]
    EmptyPocket,
    #[error("hull difference splits into {0} pockets")]
    MultiplePockets(usize),
    #[error("need at least 5 vertices for the pocket angle relations, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// The default base triangle: counterclockwise, v2v3 horizontal, all
/// coordinates integral so that every derived vertex stays rational.
pub fn default_base() -> [Point; 3] {
    [
        Point::new(integer(3), integer(5)),
        Point::new(integer(0), integer(0)),
        Point::new(integer(6), integer(0)),
    ]
}

pub fn default_delta_fraction() -> Scalar {
    rational(1, 2)
}

/// Step-size cap of the flat marching scheme: |v2v3| / (2 * floor((n-1)/3)).
/// Kept as squared-length-free arithmetic because v2v3 is horizontal.
pub fn delta_bound(n: usize, base: &[Point; 3]) -> Option<Scalar> {
    if n < 4 {
        return None;
    }
    let width = (&base[2].x - &base[1].x).abs();
    let windings = (n - 1) / 3;
    Some(width / integer(2 * windings as i64))
}

/// One construction round, retained for diagnostics and serialized by the
/// CLI. `frame` holds the construction indices of the triangle (A, B, C)
/// the round worked in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildStep {
    pub index: usize,
    pub frame: [usize; 3],
    pub mark_on_ca: Point,
    pub mark_on_cb: Point,
    pub line_parallel_cb: Line,
    pub line_parallel_ca: Line,
    pub vertex: Point,
}

/// Full construction record: inputs plus the per-step trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelixBuild {
    pub base: [Point; 3],
    pub delta_fraction: Scalar,
    pub steps: Vec<BuildStep>,
}

impl HelixBuild {
    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<BuildStepJson> = self
            .steps
            .iter()
            .map(|s| BuildStepJson {
                index: s.index,
                frame: s.frame,
                mark_on_ca: point_json(&s.mark_on_ca),
                mark_on_cb: point_json(&s.mark_on_cb),
                line_parallel_cb: line_json(&s.line_parallel_cb),
                line_parallel_ca: line_json(&s.line_parallel_ca),
                vertex: point_json(&s.vertex),
            })
            .collect();
        serde_json::json!({
            "base": self.base.iter().map(point_json).collect::<Vec<_>>(),
            "delta_fraction": format_scalar(&self.delta_fraction),
            "steps": steps,
        })
    }
}

fn point_json(p: &Point) -> [String; 2] {
    [format_scalar(&p.x), format_scalar(&p.y)]
}

fn line_json(l: &Line) -> [String; 3] {
    [l.a.to_string(), l.b.to_string(), l.c.to_string()]
}

#[derive(Serialize, Deserialize)]
struct BuildStepJson {
    index: usize,
    frame: [usize; 3],
    mark_on_ca: [String; 2],
    mark_on_cb: [String; 2],
    line_parallel_cb: [String; 3],
    line_parallel_ca: [String; 3],
    vertex: [String; 2],
}

/// A helix polygon plus the map between boundary positions and
/// construction indices (v1..vn). Guards and formulas refer to vertices by
/// construction index, while the polygon stores them in boundary order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Helix {
    polygon: Polygon,
    order: Vec<usize>,
}

impl Helix {
    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn n(&self) -> usize {
        self.polygon.len()
    }

    /// Construction indices in boundary order, e.g. [1, 2, 4, 6, 5, 3].
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Boundary position of construction vertex `label` (1-based).
    pub fn position(&self, label: usize) -> Option<usize> {
        self.order.iter().position(|&l| l == label)
    }

    pub fn vertex(&self, label: usize) -> &Point {
        let pos = self.position(label).expect("label in range");
        self.polygon.vertex(pos)
    }

    /// Natural vertex guard at construction vertex `label`.
    pub fn guard(&self, label: usize) -> Result<AngleGuard, GuardError> {
        let pos = self
            .position(label)
            .ok_or(GuardError::IndexOutOfRange(label, self.n()))?;
        natural_guard(&self.polygon, pos)
    }

    /// Guard set over the given construction labels, labeled "g<i>".
    pub fn guard_set(&self, labels: &[usize]) -> Result<GuardSet, GuardError> {
        let mut gs = GuardSet::new();
        for &label in labels {
            gs.push(format!("g{label}"), self.guard(label)?)?;
        }
        Ok(gs)
    }

    /// All n natural guards in construction order.
    pub fn all_guards(&self) -> Result<GuardSet, GuardError> {
        let labels: Vec<usize> = (1..=self.n()).collect();
        self.guard_set(&labels)
    }

    /// The pocket as a helix in its own right: pocket vertex i sits on
    /// construction vertex i+1 of this helix.
    pub fn pocket_helix(&self) -> Result<Helix, PocketError> {
        let poly = pocket(&self.polygon)?;
        let order = poly
            .vertices()
            .iter()
            .map(|p| {
                let label = self
                    .order
                    .iter()
                    .zip(self.polygon.vertices())
                    .find(|(_, v)| *v == p)
                    .map(|(l, _)| *l)
                    .expect("pocket vertices are helix vertices");
                label - 1
            })
            .collect();
        Ok(Helix {
            polygon: poly,
            order,
        })
    }
}

/// Boundary order of construction indices for an n-vertex helix:
/// v1, v2, then even indices ascending, then odd indices descending to v3.
fn boundary_order(n: usize) -> Vec<usize> {
    let mut order = vec![1, 2];
    let mut i = 4;
    while i <= n {
        order.push(i);
        i += 2;
    }
    let mut j = if n % 2 == 1 { n } else { n - 1 };
    while j >= 3 {
        order.push(j);
        j -= 2;
    }
    order
}

/// Build the n-vertex helix polygon over the given base triangle.
///
/// `delta_fraction` controls how far each round marches along the current
/// triangle's sides; any value strictly between 0 and 1 yields a simple
/// polygon, and the construction is incremental: the first i vertices of a
/// build for n equal the build for i.
pub fn build_helix(
    n: usize,
    base: &[Point; 3],
    delta_fraction: &Scalar,
) -> Result<(Helix, HelixBuild), HelixError> {
    if n < 3 {
        return Err(HelixError::TooSmall(n));
    }
    validate_base(base)?;
    if delta_fraction <= &Scalar::zero() || delta_fraction >= &Scalar::one() {
        return Err(HelixError::InvalidDeltaFraction(format_scalar(
            delta_fraction,
        )));
    }

    let mut vertices: Vec<Point> = base.to_vec();
    let mut steps: Vec<BuildStep> = Vec::new();
    let half = delta_fraction / integer(2);

    for i in 4..=n {
        let a = vertices[i - 4].clone();
        let b = vertices[i - 3].clone();
        let c = vertices[i - 2].clone();
        let mark_on_ca = lerp(&c, &a, &half);
        let mark_on_cb = lerp(&c, &b, &half);
        let dir_cb = crate::geom::Dir::between(&c, &b).map_err(|e| HelixError::Construction {
            step: i,
            reason: e.to_string(),
        })?;
        let dir_ca = crate::geom::Dir::between(&c, &a).map_err(|e| HelixError::Construction {
            step: i,
            reason: e.to_string(),
        })?;
        let line_parallel_cb = Line::through_dir(&mark_on_ca, &dir_cb);
        let line_parallel_ca = Line::through_dir(&mark_on_cb, &dir_ca);
        let vertex = match intersect_lines(&line_parallel_cb, &line_parallel_ca) {
            LineIntersection::Point(p) => p,
            other => {
                return Err(HelixError::Construction {
                    step: i,
                    reason: format!("construction lines do not meet in a point: {other:?}"),
                })
            }
        };
        steps.push(BuildStep {
            index: i,
            frame: [i - 3, i - 2, i - 1],
            mark_on_ca,
            mark_on_cb,
            line_parallel_cb,
            line_parallel_ca,
            vertex: vertex.clone(),
        });
        vertices.push(vertex);

        // Every intermediate polygon must already be a valid simple polygon.
        let order = boundary_order(i);
        let cycle: Vec<Point> = order.iter().map(|&l| vertices[l - 1].clone()).collect();
        if let Err(e) = Polygon::new(cycle) {
            return Err(HelixError::Construction {
                step: i,
                reason: e.to_string(),
            });
        }
    }

    let order = boundary_order(n);
    let cycle: Vec<Point> = order.iter().map(|&l| vertices[l - 1].clone()).collect();
    let polygon = Polygon::new(cycle).map_err(|e| HelixError::Construction {
        step: n,
        reason: e.to_string(),
    })?;
    let build = HelixBuild {
        base: base.clone(),
        delta_fraction: delta_fraction.clone(),
        steps,
    };
    Ok((Helix { polygon, order }, build))
}

fn validate_base(base: &[Point; 3]) -> Result<(), HelixError> {
    if orient(&base[0], &base[1], &base[2]) != Orientation::Ccw {
        return Err(HelixError::InvalidBase(
            "base triangle must be counterclockwise".into(),
        ));
    }
    if base[1].y != base[2].y {
        return Err(HelixError::InvalidBase(
            "edge v2v3 must be horizontal".into(),
        ));
    }
    Ok(())
}

fn lerp(from: &Point, to: &Point, t: &Scalar) -> Point {
    Point::new(
        &from.x + t * (&to.x - &from.x),
        &from.y + t * (&to.y - &from.y),
    )
}

/// Vertex classification for a counterclockwise simple polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Convex,
    Reflex,
}

pub fn classify_vertices(poly: &Polygon) -> Vec<VertexKind> {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let prev = poly.vertex((i + n - 1) % n);
            let cur = poly.vertex(i);
            let next = poly.vertex((i + 1) % n);
            match orient(prev, cur, next) {
                Orientation::Ccw => VertexKind::Convex,
                _ => VertexKind::Reflex,
            }
        })
        .collect()
}

/// The pocket of a simple polygon: the single connected component of
/// CH(P) minus P. Fails if the hull difference is empty or disconnected.
pub fn pocket(poly: &Polygon) -> Result<Polygon, PocketError> {
    let hull = convex_hull(poly.vertices())?;
    let n = poly.len();

    let pos_of = |p: &Point| -> usize {
        poly.vertices()
            .iter()
            .position(|v| v == p)
            .expect("hull vertex is a polygon vertex")
    };
    let adjacent = |i: usize, j: usize| -> bool { (i + 1) % n == j || (j + 1) % n == i };

    let h = hull.len();
    let mut bridges: Vec<(usize, usize)> = Vec::new();
    for k in 0..h {
        let u = pos_of(hull.vertex(k));
        let w = pos_of(hull.vertex((k + 1) % h));
        if !adjacent(u, w) {
            bridges.push((u, w));
        }
    }
    match bridges.len() {
        0 => Err(PocketError::EmptyPocket),
        1 => {
            let (u, w) = bridges[0];
            // Boundary path from u to w, the long way around the missing
            // hull edge; together with the bridge w->u it bounds the pocket.
            let mut chain = Vec::new();
            let mut i = u;
            loop {
                chain.push(poly.vertex(i).clone());
                if i == w {
                    break;
                }
                i = (i + 1) % n;
            }
            // The chain runs with the polygon interior on its left, so the
            // pocket lies on its right; reverse for a counterclockwise pocket.
            chain.reverse();
            Polygon::new(chain).map_err(PocketError::from)
        }
        k => Err(PocketError::MultiplePockets(k)),
    }
}

/// Ray-coincidence report for the pocket's vertex angles: the pocket's
/// natural wedge at its vertex i must equal the complement of the host
/// polygon's natural wedge at v_{i+1} for i >= 3, and for i = 1, 2 its rays
/// must run to the stated base vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PocketAngleReport {
    pub results: Vec<(usize, bool)>,
    pub first_failure: Option<usize>,
}

impl PocketAngleReport {
    pub fn all_pass(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn pocket_angle_check(helix: &Helix) -> Result<PocketAngleReport, PocketError> {
    if helix.n() < 5 {
        return Err(PocketError::TooSmall(helix.n()));
    }
    let pocket = helix.pocket_helix()?;
    let m = pocket.n();
    let mut results = Vec::new();
    for i in 1..=m {
        let got = pocket.guard(i).expect("pocket guard exists");
        let ok = match i {
            1 => {
                let v2 = helix.vertex(2);
                let ray1 = crate::geom::Dir::between(v2, helix.vertex(3)).unwrap();
                let ray2 = crate::geom::Dir::between(v2, helix.vertex(4)).unwrap();
                got.apex == *v2 && got.ray1 == ray1 && got.ray2 == ray2
            }
            2 => {
                let v3 = helix.vertex(3);
                let ray1 = crate::geom::Dir::between(v3, helix.vertex(5)).unwrap();
                let ray2 = crate::geom::Dir::between(v3, helix.vertex(2)).unwrap();
                got.apex == *v3 && got.ray1 == ray1 && got.ray2 == ray2
            }
            _ => {
                let host = helix.guard(i + 1).expect("host guard exists");
                got == host.complement()
            }
        };
        results.push((i, ok));
    }
    let first_failure = results.iter().find(|(_, ok)| !ok).map(|(i, _)| *i);
    Ok(PocketAngleReport {
        results,
        first_failure,
    })
}
