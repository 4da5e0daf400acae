//! Exact verification that a formula defines a polygon, plus the
//! monotone-definability oracle and the exhaustive minimal-guard search.
//!
//! The key observation: every wedge predicate and polygon membership are
//! constant on each open face of the arrangement of the polygon's edge
//! lines and the wedge boundary lines. One interior sample per face
//! therefore decides a for-all-points claim exactly, with no tolerance.
//!
//! Faces are enumerated with a vertical slab sweep: between consecutive
//! x-breakpoints (line intersections and vertical lines) the y-order of the
//! lines is constant, so midpoint columns hit every face at least once.
//! Samples are then deduplicated by their full sign vector, which is in
//! bijection with the faces of a line arrangement.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, FormulaError};
use crate::geom::{intersect_lines, Line, LineIntersection, Location, Point, Polygon};
use crate::guards::{GuardError, GuardSet};
use crate::scalar::{integer, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("formula uses label {0} not present in the guard set")]
    UnknownLabel(String),
    #[error("face signatures are not monotonically separable; no formula exists")]
    NotDefinable,
    #[error("k_max {k_max} exceeds the number of candidate guards {n}")]
    BadKMax { k_max: usize, n: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Guard(#[from] GuardError),
}

/// One arrangement face: an interior sample point, the guard signature at
/// it, and whether it lies inside the polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSample {
    pub point: Point,
    pub signature: Vec<bool>,
    pub inside: bool,
}

/// The exact plane subdivision used for verification.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub lines: Vec<Line>,
    pub faces: Vec<FaceSample>,
}

/// Deduplicated lines of the polygon edges and all guard wedge boundaries.
fn arrangement_lines(poly: &Polygon, guards: &GuardSet) -> Vec<Line> {
    let mut set: BTreeSet<Line> = poly.edge_lines().into_iter().collect();
    for g in guards.guards() {
        for l in g.boundary_lines() {
            set.insert(l);
        }
    }
    set.into_iter().collect()
}

/// One interior sample per face of the line arrangement, deterministic.
pub fn face_samples(lines: &[Line]) -> Vec<Point> {
    let verticals: Vec<&Line> = lines.iter().filter(|l| l.is_vertical()).collect();
    let others: Vec<&Line> = lines.iter().filter(|l| !l.is_vertical()).collect();

    // x-breakpoints: all pairwise intersection abscissae plus vertical lines
    let mut xs: BTreeSet<Scalar> = BTreeSet::new();
    for v in &verticals {
        xs.insert(-Scalar::from(v.c.clone()) / Scalar::from(v.a.clone()));
    }
    for pair in lines.iter().combinations(2) {
        if let LineIntersection::Point(p) = intersect_lines(pair[0], pair[1]) {
            xs.insert(p.x);
        }
    }
    let xs: Vec<Scalar> = xs.into_iter().collect();

    // sample columns: one per open slab, plus sentinels on both sides at a
    // margin the size of the breakpoint span (a frame twice the bounding box)
    let mut columns: Vec<Scalar> = Vec::new();
    if xs.is_empty() {
        columns.push(integer(0));
    } else {
        let span = {
            let w = xs.last().unwrap() - xs.first().unwrap();
            if w > integer(0) {
                w
            } else {
                integer(1)
            }
        };
        columns.push(xs.first().unwrap() - &span);
        for w in xs.windows(2) {
            columns.push((&w[0] + &w[1]) / integer(2));
        }
        columns.push(xs.last().unwrap() + &span);
    }

    let mut samples: Vec<Point> = Vec::new();
    for x in &columns {
        let mut ys: BTreeSet<Scalar> = BTreeSet::new();
        for l in &others {
            ys.insert(l.y_at(x));
        }
        let ys: Vec<Scalar> = ys.into_iter().collect();
        if ys.is_empty() {
            samples.push(Point::new(x.clone(), integer(0)));
            continue;
        }
        let span = {
            let h = ys.last().unwrap() - ys.first().unwrap();
            if h > integer(0) {
                h
            } else {
                integer(1)
            }
        };
        samples.push(Point::new(x.clone(), ys.first().unwrap() - &span));
        for w in ys.windows(2) {
            samples.push(Point::new(x.clone(), (&w[0] + &w[1]) / integer(2)));
        }
        samples.push(Point::new(x.clone(), ys.last().unwrap() + &span));
    }

    // deduplicate by full sign vector: faces of a line arrangement are
    // exactly the nonempty sign-vector cells, so this keeps one sample per
    // face; no sample may sit on any line
    let mut seen: HashSet<Vec<i8>> = HashSet::new();
    let mut out: Vec<Point> = Vec::new();
    for p in samples {
        let sv: Vec<i8> = lines.iter().map(|l| l.side(&p)).collect();
        debug_assert!(sv.iter().all(|s| *s != 0), "sample on an arrangement line");
        if seen.insert(sv) {
            out.push(p);
        }
    }
    out
}

/// Build the arrangement of the polygon edges and guard boundaries and
/// evaluate every guard and polygon membership on one sample per face.
pub fn build_arrangement(poly: &Polygon, guards: &GuardSet) -> Arrangement {
    let lines = arrangement_lines(poly, guards);
    let faces = face_samples(&lines)
        .into_iter()
        .map(|p| {
            let signature: Vec<bool> = guards.guards().iter().map(|g| g.contains(&p)).collect();
            let inside = poly.locate(&p) == Location::Interior;
            FaceSample {
                point: p,
                signature,
                inside,
            }
        })
        .collect();
    Arrangement { lines, faces }
}

/// Outcome of a defines() check.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub verdict: bool,
    pub counterexample: Option<FaceSample>,
    pub faces_checked: usize,
}

fn assignment_for(guards: &GuardSet, face: &FaceSample) -> BTreeMap<String, bool> {
    guards
        .labels()
        .iter()
        .cloned()
        .zip(face.signature.iter().copied())
        .collect()
}

fn check_all_faces(
    formula: &Formula,
    guards: &GuardSet,
    poly: &Polygon,
    want_inside: bool,
) -> Result<VerificationReport, VerifyError> {
    let bound: BTreeSet<&String> = guards.labels().iter().collect();
    for label in formula.labels() {
        if !bound.contains(&label) {
            return Err(VerifyError::UnknownLabel(label));
        }
    }
    let arr = build_arrangement(poly, guards);
    let faces_checked = arr.faces.len();
    for face in arr.faces {
        let value = formula.evaluate(&assignment_for(guards, &face))?;
        let expect = if want_inside {
            face.inside
        } else {
            !face.inside
        };
        if value != expect {
            return Ok(VerificationReport {
                verdict: false,
                counterexample: Some(face),
                faces_checked,
            });
        }
    }
    Ok(VerificationReport {
        verdict: true,
        counterexample: None,
        faces_checked,
    })
}

/// Does the formula evaluate to true exactly on the polygon's interior?
/// Face-exact: both sides of the equivalence are constant per face.
pub fn defines(
    formula: &Formula,
    guards: &GuardSet,
    poly: &Polygon,
) -> Result<VerificationReport, VerifyError> {
    check_all_faces(formula, guards, poly, true)
}

/// Does the formula evaluate to true exactly on the polygon's exterior?
pub fn defines_exterior(
    formula: &Formula,
    guards: &GuardSet,
    poly: &Polygon,
) -> Result<VerificationReport, VerifyError> {
    check_all_faces(formula, guards, poly, false)
}

/// Result of the monotone-definability test.
#[derive(Debug, Clone)]
pub struct MonotoneReport {
    pub definable: bool,
    /// An (inside, outside) pair where the outside signature dominates the
    /// inside one pointwise; present exactly when not definable.
    pub witness: Option<(FaceSample, FaceSample)>,
}

fn signature_mask(signature: &[bool]) -> u64 {
    signature
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, b)| if *b { acc | 1 << i } else { acc })
}

/// A monotone formula separating inside from outside faces exists iff no
/// outside signature dominates an inside signature pointwise.
pub fn monotone_definable(faces: &[FaceSample]) -> MonotoneReport {
    for outside in faces.iter().filter(|f| !f.inside) {
        let o = signature_mask(&outside.signature);
        for inside in faces.iter().filter(|f| f.inside) {
            let i = signature_mask(&inside.signature);
            if i & !o == 0 {
                return MonotoneReport {
                    definable: false,
                    witness: Some((inside.clone(), outside.clone())),
                };
            }
        }
    }
    MonotoneReport {
        definable: true,
        witness: None,
    }
}

/// Monotone DNF from labeled faces: OR over the inclusion-minimal inside
/// signatures of the AND of their set guards. Only valid when
/// `monotone_definable` holds.
pub fn extract_monotone_dnf(
    faces: &[FaceSample],
    labels: &[String],
) -> Result<Formula, VerifyError> {
    if !monotone_definable(faces).definable {
        return Err(VerifyError::NotDefinable);
    }
    let inside: BTreeSet<u64> = faces
        .iter()
        .filter(|f| f.inside)
        .map(|f| signature_mask(&f.signature))
        .collect();
    if inside.is_empty() {
        return Err(VerifyError::NotDefinable);
    }
    let minimal: Vec<u64> = inside
        .iter()
        .copied()
        .filter(|&m| !inside.iter().any(|&o| o != m && o & !m == 0))
        .collect();
    if minimal.contains(&0) {
        // a guard-free inside face would force the constant-true formula,
        // which cannot be monotone-exact for a bounded polygon
        return Err(VerifyError::NotDefinable);
    }
    let terms: Vec<Formula> = minimal
        .into_iter()
        .map(|m| {
            Formula::and(
                labels
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, l)| Formula::leaf(l.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(Formula::or(terms))
}

/// Statistics for one subset size during the minimal-guard search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerSizeCount {
    pub k: usize,
    pub tested: usize,
    pub definable: usize,
}

/// Outcome of the exhaustive natural-guard search.
#[derive(Debug, Clone)]
pub enum MinGuardsOutcome {
    Found {
        k_min: usize,
        /// 1-based labels of the lexicographically smallest witness subset.
        subset: Vec<usize>,
        formula: Formula,
        per_k: Vec<PerSizeCount>,
    },
    NotDefinableUpTo {
        k_max: usize,
        per_k: Vec<PerSizeCount>,
    },
}

/// Exhaustive search for the smallest set of natural vertex guards that
/// admits a defining monotone formula.
///
/// `labels` names the polygon's vertices 1:1 (1-based construction indices
/// for helix polygons); subsets are reported and ordered by these labels.
/// Natural guard boundary rays lie along polygon edges, so the arrangement
/// of the full guard set refines every subset's arrangement with identical
/// signatures after masking; the faces are therefore computed once and
/// each subset decision is a pure mask-and-compare, safe to parallelize.
pub fn min_natural_guards(
    poly: &Polygon,
    labels: &[usize],
    k_max: usize,
) -> Result<MinGuardsOutcome, VerifyError> {
    let n = poly.len();
    assert_eq!(labels.len(), n, "one label per vertex");
    if k_max > n {
        return Err(VerifyError::BadKMax { k_max, n });
    }

    // guards ordered by ascending label so subset iteration is label-lex
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| labels[i]);
    let mut guards = GuardSet::new();
    for &i in &order {
        guards.push(
            format!("g{}", labels[i]),
            crate::guards::natural_guard(poly, i)?,
        )?;
    }
    let arr = build_arrangement(poly, &guards);
    let inside_masks: Vec<u64> = arr
        .faces
        .iter()
        .filter(|f| f.inside)
        .map(|f| signature_mask(&f.signature))
        .collect();
    let outside_masks: Vec<u64> = arr
        .faces
        .iter()
        .filter(|f| !f.inside)
        .map(|f| signature_mask(&f.signature))
        .collect();

    let separable = |mask: u64| -> bool {
        let ins: BTreeSet<u64> = inside_masks.iter().map(|m| m & mask).collect();
        let outs: BTreeSet<u64> = outside_masks.iter().map(|m| m & mask).collect();
        !outs.iter().any(|o| ins.iter().any(|i| i & !o == 0))
    };

    let mut per_k: Vec<PerSizeCount> = Vec::new();
    for k in 1..=k_max {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let verdicts: Vec<bool> = subsets
            .par_iter()
            .map(|subset| {
                let mask = subset.iter().fold(0u64, |acc, &i| acc | 1 << i);
                separable(mask)
            })
            .collect();
        let definable = verdicts.iter().filter(|v| **v).count();
        per_k.push(PerSizeCount {
            k,
            tested: subsets.len(),
            definable,
        });
        if definable > 0 {
            // combinations() is lexicographic, so the first hit is the
            // lexicographically smallest witness
            let first = verdicts.iter().position(|v| *v).unwrap();
            let subset_positions = &subsets[first];
            let subset_labels: Vec<usize> =
                subset_positions.iter().map(|&i| labels[order[i]]).collect();

            // masked faces restricted to the witness subset
            let sub_labels: Vec<String> = subset_labels.iter().map(|l| format!("g{l}")).collect();
            let sub_faces: Vec<FaceSample> = arr
                .faces
                .iter()
                .map(|f| FaceSample {
                    point: f.point.clone(),
                    signature: subset_positions.iter().map(|&i| f.signature[i]).collect(),
                    inside: f.inside,
                })
                .collect();
            let formula = extract_monotone_dnf(&sub_faces, &sub_labels)?;
            return Ok(MinGuardsOutcome::Found {
                k_min: k,
                subset: subset_labels,
                formula,
                per_k,
            });
        }
    }
    Ok(MinGuardsOutcome::NotDefinableUpTo { k_max, per_k })
}
