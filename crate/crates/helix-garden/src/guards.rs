//! Angle guards: infinite wedges with a boolean "sees this point" predicate.
//!
//! A wedge is stored by its apex, two boundary ray directions and a reflex
//! flag; coverage is the region swept counterclockwise from ray1 to ray2.
//! Apertures are never represented as angle values, which keeps everything
//! rational: containment is two orientation tests.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Dir, GeomError, Line, Point, Polygon};
use crate::scalar::{format_scalar, parse_scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GuardError {
    #[error("guard labels must be unique, duplicate: {0}")]
    DuplicateLabel(String),
    #[error("vertex index {0} out of range for polygon with {1} vertices")]
    IndexOutOfRange(usize, usize),
    #[error("bad guard JSON: {0}")]
    BadJson(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// An angle guard: apex plus an infinite wedge of the plane.
///
/// Coverage is swept counterclockwise from `ray1` to `ray2`; `reflex`
/// records whether that sweep exceeds a half turn. Containment is closed
/// (apex and boundary rays included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleGuard {
    pub apex: Point,
    pub ray1: Dir,
    pub ray2: Dir,
    pub reflex: bool,
}

impl AngleGuard {
    pub fn new(apex: Point, ray1: Dir, ray2: Dir, reflex: bool) -> AngleGuard {
        AngleGuard {
            apex,
            ray1,
            ray2,
            reflex,
        }
    }

    /// Closed-wedge membership using orientation signs only.
    ///
    /// For a convex wedge the point must be on or left of ray1 and on or
    /// right of ray2; a reflex wedge is the closed complement of the convex
    /// wedge swept the other way, which turns the AND into an OR.
    pub fn contains(&self, p: &Point) -> bool {
        let c1 = self.ray1.cross_sign(&self.apex, p);
        let c2 = self.ray2.cross_sign(&self.apex, p);
        if !self.reflex {
            c1 >= 0 && c2 <= 0
        } else {
            c1 >= 0 || c2 <= 0
        }
    }

    /// Same apex, rays swapped, reflex toggled: covers the complementary
    /// wedge (aperture 2*pi minus the original).
    pub fn complement(&self) -> AngleGuard {
        AngleGuard {
            apex: self.apex.clone(),
            ray1: self.ray2.clone(),
            ray2: self.ray1.clone(),
            reflex: !self.reflex,
        }
    }

    /// Supporting lines of the two boundary rays.
    pub fn boundary_lines(&self) -> [Line; 2] {
        [
            Line::through_dir(&self.apex, &self.ray1),
            Line::through_dir(&self.apex, &self.ray2),
        ]
    }
}

/// Natural vertex guard: apex at vertex `i`, boundary rays along the two
/// incident edges directed away from the vertex, coverage equal to the
/// polygon's interior angle there.
pub fn natural_guard(poly: &Polygon, i: usize) -> Result<AngleGuard, GuardError> {
    let n = poly.len();
    if i >= n {
        return Err(GuardError::IndexOutOfRange(i, n));
    }
    let prev = poly.vertex((i + n - 1) % n);
    let cur = poly.vertex(i);
    let next = poly.vertex((i + 1) % n);
    let ray1 = Dir::between(cur, next)?;
    let ray2 = Dir::between(cur, prev)?;
    let reflex = matches!(
        crate::geom::orient(prev, cur, next),
        crate::geom::Orientation::Cw
    );
    Ok(AngleGuard::new(cur.clone(), ray1, ray2, reflex))
}

/// An ordered set of labeled guards.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GuardSet {
    guards: Vec<AngleGuard>,
    labels: Vec<String>,
}

impl GuardSet {
    pub fn new() -> GuardSet {
        GuardSet::default()
    }

    pub fn push(&mut self, label: impl Into<String>, guard: AngleGuard) -> Result<(), GuardError> {
        let label = label.into();
        if self.labels.contains(&label) {
            return Err(GuardError::DuplicateLabel(label));
        }
        self.labels.push(label);
        self.guards.push(guard);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.guards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn guards(&self) -> &[AngleGuard] {
        &self.guards
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, label: &str) -> Option<&AngleGuard> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.guards[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AngleGuard)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.guards.iter())
    }

    /// Complement every guard; labels gain or lose one trailing prime so a
    /// double complement restores the original labels.
    pub fn complemented(&self) -> GuardSet {
        let mut out = GuardSet::new();
        for (label, g) in self.iter() {
            out.push(toggle_prime(label), g.complement())
                .expect("complemented labels stay unique");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let guards: Vec<GuardJson> = self
            .iter()
            .map(|(label, g)| GuardJson {
                apex: [format_scalar(&g.apex.x), format_scalar(&g.apex.y)],
                ray1: [g.ray1.dx.to_string(), g.ray1.dy.to_string()],
                ray2: [g.ray2.dx.to_string(), g.ray2.dy.to_string()],
                reflex: g.reflex,
                label: label.to_string(),
            })
            .collect();
        serde_json::to_value(GuardSetJson { guards }).expect("guard set serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<GuardSet, GuardError> {
        let parsed: GuardSetJson = serde_json::from_value(value.clone())
            .map_err(|e| GuardError::BadJson(e.to_string()))?;
        let mut out = GuardSet::new();
        for gj in parsed.guards {
            let apex = Point::new(
                parse_scalar(&gj.apex[0]).map_err(|e| GuardError::BadJson(e.to_string()))?,
                parse_scalar(&gj.apex[1]).map_err(|e| GuardError::BadJson(e.to_string()))?,
            );
            let ray = |r: &[String; 2]| -> Result<Dir, GuardError> {
                Dir::from_vector(
                    &parse_scalar(&r[0]).map_err(|e| GuardError::BadJson(e.to_string()))?,
                    &parse_scalar(&r[1]).map_err(|e| GuardError::BadJson(e.to_string()))?,
                )
                .map_err(GuardError::from)
            };
            out.push(
                gj.label,
                AngleGuard::new(apex, ray(&gj.ray1)?, ray(&gj.ray2)?, gj.reflex),
            )?;
        }
        Ok(out)
    }
}

/// "g3" <-> "g3'" — complement labels carry one trailing prime.
pub fn toggle_prime(label: &str) -> String {
    match label.strip_suffix('\'') {
        Some(base) => base.to_string(),
        None => format!("{label}'"),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GuardSetJson {
    guards: Vec<GuardJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GuardJson {
    apex: [String; 2],
    ray1: [String; 2],
    ray2: [String; 2],
    reflex: bool,
    label: String,
}
