//! Exact rational 2-D geometry kernel.
//!
//! All predicates are decided with exact integer/rational arithmetic; there
//! is no floating point anywhere on the trusted path. Lengths are never
//! taken (they are irrational in general): every comparison that would
//! involve a length uses squared lengths instead.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{format_scalar, parse_scalar, sign, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("degenerate direction: the two points coincide")]
    DegenerateDirection,
    #[error("degenerate input: need at least 3 distinct, not all collinear points")]
    DegenerateInput,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has duplicate vertices")]
    DuplicateVertices,
    #[error("polygon is not counterclockwise")]
    NotCounterClockwise,
    #[error("polygon boundary self-intersects")]
    SelfIntersection,
    #[error("polygon has consecutive collinear vertices at index {0}")]
    CollinearVertices(usize),
    #[error("bad polygon JSON: {0}")]
    BadJson(String),
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    /// Squared euclidean distance to `other`; exact.
    pub fn dist2(&self, other: &Point) -> Scalar {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            format_scalar(&self.x),
            format_scalar(&self.y)
        )
    }
}

/// Orientation of an ordered point triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// Sign of the exact cross product (q - p) x (r - p).
pub fn orient(p: &Point, q: &Point, r: &Point) -> Orientation {
    let v = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    match sign(&v) {
        1 => Orientation::Ccw,
        -1 => Orientation::Cw,
        _ => Orientation::Collinear,
    }
}

/// A direction vector reduced to a canonical coprime integer pair.
/// Orientation (sign) is preserved, so `(1,2)` and `(-1,-2)` are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dir {
    pub dx: BigInt,
    pub dy: BigInt,
}

impl Dir {
    /// Canonical direction of the vector `to - from`.
    pub fn between(from: &Point, to: &Point) -> Result<Dir, GeomError> {
        Dir::from_vector(&(&to.x - &from.x), &(&to.y - &from.y))
    }

    /// Reduce a rational vector to a coprime integer direction.
    pub fn from_vector(dx: &Scalar, dy: &Scalar) -> Result<Dir, GeomError> {
        if dx.is_zero() && dy.is_zero() {
            return Err(GeomError::DegenerateDirection);
        }
        // Clear denominators, then divide by the gcd.
        let common = dx.denom() * dy.denom();
        let xi = dx.numer() * (&common / dx.denom());
        let yi = dy.numer() * (&common / dy.denom());
        let g = xi.gcd(&yi);
        Ok(Dir {
            dx: &xi / &g,
            dy: &yi / &g,
        })
    }

    pub fn reversed(&self) -> Dir {
        Dir {
            dx: -&self.dx,
            dy: -&self.dy,
        }
    }

    /// Sign of `self x v` where `v = p - origin`.
    pub fn cross_sign(&self, origin: &Point, p: &Point) -> i8 {
        let vx = &p.x - &origin.x;
        let vy = &p.y - &origin.y;
        let c = Scalar::from(self.dx.clone()) * vy - Scalar::from(self.dy.clone()) * vx;
        sign(&c)
    }
}

/// A line a*x + b*y + c = 0 in canonical form: integer coprime coefficients
/// with the first nonzero of (a, b) positive. Canonical form makes equal
/// lines compare equal, which the arrangement relies on for deduplication.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Line {
    fn normalized(a: Scalar, b: Scalar, c: Scalar) -> Result<Line, GeomError> {
        if a.is_zero() && b.is_zero() {
            return Err(GeomError::DegenerateDirection);
        }
        let common = a.denom() * b.denom() * c.denom();
        let ai = a.numer() * (&common / a.denom());
        let bi = b.numer() * (&common / b.denom());
        let ci = c.numer() * (&common / c.denom());
        let g = ai.gcd(&bi).gcd(&ci);
        let (mut ai, mut bi, mut ci) = (&ai / &g, &bi / &g, &ci / &g);
        let flip = if !ai.is_zero() {
            ai.is_negative()
        } else {
            bi.is_negative()
        };
        if flip {
            ai = -ai;
            bi = -bi;
            ci = -ci;
        }
        Ok(Line {
            a: ai,
            b: bi,
            c: ci,
        })
    }

    /// Line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Result<Line, GeomError> {
        if p == q {
            return Err(GeomError::DegenerateDirection);
        }
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = -(&a * &p.x + &b * &p.y);
        Line::normalized(a, b, c)
    }

    /// Line through `p` with direction `d`.
    pub fn through_dir(p: &Point, d: &Dir) -> Line {
        let a = Scalar::from(d.dy.clone());
        let b = -Scalar::from(d.dx.clone());
        let c = -(&a * &p.x + &b * &p.y);
        Line::normalized(a, b, c).expect("direction is nonzero")
    }

    /// Exact signed side of a point: sign of a*x + b*y + c.
    pub fn side(&self, p: &Point) -> i8 {
        let v = Scalar::from(self.a.clone()) * &p.x
            + Scalar::from(self.b.clone()) * &p.y
            + Scalar::from(self.c.clone());
        sign(&v)
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// y-coordinate of the line at a given x; requires a non-vertical line.
    pub fn y_at(&self, x: &Scalar) -> Scalar {
        debug_assert!(!self.is_vertical());
        -(Scalar::from(self.a.clone()) * x + Scalar::from(self.c.clone()))
            / Scalar::from(self.b.clone())
    }
}

/// Line through `p` parallel to the segment `a -> b`.
pub fn line_through_parallel(p: &Point, a: &Point, b: &Point) -> Result<Line, GeomError> {
    let d = Dir::between(a, b)?;
    Ok(Line::through_dir(p, &d))
}

/// Result of intersecting two lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineIntersection {
    Point(Point),
    Parallel,
    Coincident,
}

pub fn intersect_lines(l1: &Line, l2: &Line) -> LineIntersection {
    let det = &l1.a * &l2.b - &l2.a * &l1.b;
    if det.is_zero() {
        return if l1 == l2 {
            LineIntersection::Coincident
        } else {
            LineIntersection::Parallel
        };
    }
    let det = Scalar::from(det);
    let x = Scalar::from(&l1.b * &l2.c - &l2.b * &l1.c) / det.clone();
    let y = Scalar::from(&l2.a * &l1.c - &l1.a * &l2.c) / det;
    LineIntersection::Point(Point::new(x, y))
}

/// Point-vs-polygon classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// A simple polygon with counterclockwise vertices and no consecutive
/// collinear triple. Construction validates all invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::DuplicateVertices);
        }
        let poly = Polygon { vertices };
        let n = poly.vertices.len();
        for i in 0..n {
            let prev = &poly.vertices[(i + n - 1) % n];
            let cur = &poly.vertices[i];
            let next = &poly.vertices[(i + 1) % n];
            if orient(prev, cur, next) == Orientation::Collinear {
                return Err(GeomError::CollinearVertices(i));
            }
        }
        if !poly.is_simple() {
            return Err(GeomError::SelfIntersection);
        }
        if sign(&poly.signed_area2()) != 1 {
            return Err(GeomError::NotCounterClockwise);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Never true: construction requires at least three vertices.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        (
            &self.vertices[i],
            &self.vertices[(i + 1) % self.vertices.len()],
        )
    }

    /// Supporting lines of all edges, in edge order (may contain duplicates
    /// when two edges are collinear).
    pub fn edge_lines(&self) -> Vec<Line> {
        (0..self.len())
            .map(|i| {
                let (p, q) = self.edge(i);
                Line::through(p, q).expect("polygon vertices are distinct")
            })
            .collect()
    }

    /// Twice the signed area (shoelace); positive for counterclockwise.
    pub fn signed_area2(&self) -> Scalar {
        let n = self.vertices.len();
        let mut acc = Scalar::zero();
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            acc += &p.x * &q.y - &q.x * &p.y;
        }
        acc
    }

    /// Exact area, positive for CCW polygons.
    pub fn area(&self) -> Scalar {
        self.signed_area2() / crate::scalar::integer(2)
    }

    /// Pairwise segment test over all boundary edges.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a0, a1) = self.edge(i);
            for j in (i + 1)..n {
                let (b0, b1) = self.edge(j);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // Adjacent edges share exactly one endpoint; any further
                    // contact means the boundary folds onto itself.
                    let shared = if j == i + 1 { a1 } else { a0 };
                    let (a_far, b_far) = if j == i + 1 { (a0, b1) } else { (a1, b0) };
                    if point_on_segment(a_far, b0, b1) && a_far != shared {
                        return false;
                    }
                    if point_on_segment(b_far, a0, a1) && b_far != shared {
                        return false;
                    }
                } else if segments_intersect(a0, a1, b0, b1) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact classification via crossing parity, boundary checked first.
    pub fn locate(&self, p: &Point) -> Location {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_on_segment(p, a, b) {
                return Location::Boundary;
            }
        }
        let mut crossings = 0u32;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let a_below = a.y <= p.y;
            let b_below = b.y <= p.y;
            if a_below != b_below {
                // x where the edge crosses the horizontal through p, exact.
                let t = (&p.y - &a.y) / (&b.y - &a.y);
                let xc = &a.x + &t * (&b.x - &a.x);
                if xc > p.x {
                    crossings += 1;
                }
            }
        }
        if crossings % 2 == 1 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// Serialize to the interchange JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolygonJson::from(self)).expect("polygon serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Polygon, GeomError> {
        let parsed: PolygonJson =
            serde_json::from_value(value.clone()).map_err(|e| GeomError::BadJson(e.to_string()))?;
        parsed.try_into()
    }
}

/// Interchange form: {"vertices": [["x", "y"], ...]} with "p/q" scalars.
#[derive(Debug, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<[String; 2]>,
}

impl From<&Polygon> for PolygonJson {
    fn from(p: &Polygon) -> Self {
        PolygonJson {
            vertices: p
                .vertices
                .iter()
                .map(|v| [format_scalar(&v.x), format_scalar(&v.y)])
                .collect(),
        }
    }
}

impl TryFrom<PolygonJson> for Polygon {
    type Error = GeomError;

    fn try_from(j: PolygonJson) -> Result<Polygon, GeomError> {
        let vertices = j
            .vertices
            .iter()
            .map(|[x, y]| {
                Ok(Point::new(
                    parse_scalar(x).map_err(|e| GeomError::BadJson(e.to_string()))?,
                    parse_scalar(y).map_err(|e| GeomError::BadJson(e.to_string()))?,
                ))
            })
            .collect::<Result<Vec<_>, GeomError>>()?;
        Polygon::new(vertices)
    }
}

/// Closed-segment membership, exact.
pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != Orientation::Collinear {
        return false;
    }
    let (minx, maxx) = if a.x <= b.x {
        (&a.x, &b.x)
    } else {
        (&b.x, &a.x)
    };
    let (miny, maxy) = if a.y <= b.y {
        (&a.y, &b.y)
    } else {
        (&b.y, &a.y)
    };
    minx <= &p.x && &p.x <= maxx && miny <= &p.y && &p.y <= maxy
}

/// Do the closed segments a0a1 and b0b1 intersect at all?
pub fn segments_intersect(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> bool {
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);
    if ((d1 == Orientation::Ccw && d2 == Orientation::Cw)
        || (d1 == Orientation::Cw && d2 == Orientation::Ccw))
        && ((d3 == Orientation::Ccw && d4 == Orientation::Cw)
            || (d3 == Orientation::Cw && d4 == Orientation::Ccw))
    {
        return true;
    }
    point_on_segment(a0, b0, b1)
        || point_on_segment(a1, b0, b1)
        || point_on_segment(b0, a0, a1)
        || point_on_segment(b1, a0, a1)
}

/// Counterclockwise convex hull with no collinear hull vertices.
pub fn convex_hull(points: &[Point]) -> Result<Polygon, GeomError> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeomError::DegenerateInput);
    }
    let build = |iter: &[Point]| {
        let mut chain: Vec<Point> = Vec::new();
        for p in iter {
            while chain.len() >= 2 {
                let o = orient(&chain[chain.len() - 2], &chain[chain.len() - 1], p);
                if o == Orientation::Ccw {
                    break;
                }
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let mut lower = build(&pts);
    let rev: Vec<Point> = pts.iter().rev().cloned().collect();
    let mut upper = build(&rev);
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    if lower.len() < 3 {
        return Err(GeomError::DegenerateInput);
    }
    Polygon::new(lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational};

    fn pt(x: i64, y: i64) -> Point {
        Point::new(integer(x), integer(y))
    }

    #[test]
    fn orient_unit_axes() {
        assert_eq!(orient(&pt(0, 0), &pt(1, 0), &pt(0, 1)), Orientation::Ccw);
        assert_eq!(
            orient(&pt(0, 0), &pt(1, 0), &pt(2, 0)),
            Orientation::Collinear
        );
        assert_eq!(orient(&pt(0, 0), &pt(0, 1), &pt(1, 0)), Orientation::Cw);
    }

    #[test]
    fn parallel_line_through_point() {
        // horizontal through (0,1)
        let l = line_through_parallel(&pt(0, 1), &pt(0, 0), &pt(1, 0)).unwrap();
        assert_eq!(
            (l.a.to_string(), l.b.to_string(), l.c.to_string()),
            ("0".into(), "1".into(), "-1".into())
        );
        // slope 1 through (2,3): x - y + 1 = 0
        let l = line_through_parallel(&pt(2, 3), &pt(0, 0), &pt(1, 1)).unwrap();
        assert_eq!(
            (l.a.to_string(), l.b.to_string(), l.c.to_string()),
            ("1".into(), "-1".into(), "1".into())
        );
        // line through p with direction b-a contains p even when p = a
        let l = line_through_parallel(&pt(0, 0), &pt(0, 0), &pt(2, 5)).unwrap();
        assert_eq!(l.side(&pt(0, 0)), 0);
        assert_eq!(l.side(&pt(2, 5)), 0);
        assert!(line_through_parallel(&pt(0, 1), &pt(1, 1), &pt(1, 1)).is_err());
    }

    #[test]
    fn line_intersections() {
        let x_axis = Line::through(&pt(0, 0), &pt(1, 0)).unwrap();
        let y_axis = Line::through(&pt(0, 0), &pt(0, 1)).unwrap();
        assert_eq!(
            intersect_lines(&x_axis, &y_axis),
            LineIntersection::Point(pt(0, 0))
        );
        let y1 = Line::through(&pt(0, 1), &pt(1, 1)).unwrap();
        assert_eq!(intersect_lines(&x_axis, &y1), LineIntersection::Parallel);
        // y=0 and 2y=0 normalize to the same canonical line
        let doubled = Line::normalized(integer(0), integer(2), integer(0)).unwrap();
        assert_eq!(
            intersect_lines(&x_axis, &doubled),
            LineIntersection::Coincident
        );
    }

    #[test]
    fn hull_of_square_with_center() {
        let pts = vec![
            pt(0, 0),
            pt(1, 0),
            pt(1, 1),
            pt(0, 1),
            Point::new(rational(1, 2), rational(1, 2)),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        let mut hv: Vec<Point> = hull.vertices().to_vec();
        hv.sort();
        assert_eq!(hv, vec![pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)]);
    }

    #[test]
    fn hull_of_triangle_is_itself() {
        let hull = convex_hull(&[pt(0, 0), pt(4, 0), pt(1, 3)]).unwrap();
        assert_eq!(hull.len(), 3);
    }

    #[test]
    fn point_in_triangle() {
        let tri = Polygon::new(vec![pt(0, 0), pt(3, 0), pt(0, 3)]).unwrap();
        let centroid = Point::new(integer(1), integer(1));
        assert_eq!(tri.locate(&centroid), Location::Interior);
        assert_eq!(tri.locate(&pt(0, 0)), Location::Boundary);
        assert_eq!(tri.locate(&pt(10, 10)), Location::Exterior);
    }

    #[test]
    fn square_is_simple_with_area_one() {
        let sq = Polygon::new(vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap();
        assert!(sq.is_simple());
        assert_eq!(sq.area(), integer(1));
    }

    #[test]
    fn bowtie_is_rejected() {
        let r = Polygon::new(vec![pt(0, 0), pt(1, 1), pt(1, 0), pt(0, 1)]);
        assert_eq!(r.unwrap_err(), GeomError::SelfIntersection);
    }

    #[test]
    fn collinear_vertices_rejected() {
        let r = Polygon::new(vec![pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 2), pt(0, 2)]);
        assert!(matches!(r, Err(GeomError::CollinearVertices(_))));
    }

    #[test]
    fn clockwise_rejected() {
        let r = Polygon::new(vec![pt(0, 0), pt(0, 1), pt(1, 1), pt(1, 0)]);
        assert_eq!(r.unwrap_err(), GeomError::NotCounterClockwise);
    }

    #[test]
    fn polygon_json_round_trip_is_bit_exact() {
        let p = Polygon::new(vec![
            Point::new(rational(1, 3), integer(0)),
            Point::new(integer(2), rational(-5, 7)),
            Point::new(integer(0), integer(4)),
        ])
        .unwrap();
        let j = p.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back = Polygon::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(p, back);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    }
}
