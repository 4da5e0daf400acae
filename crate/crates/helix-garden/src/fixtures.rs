//! Fixed test geometry: a pentagon on which natural vertex guards cannot
//! separate inside from outside, together with three wedges A, B, D whose
//! conjunction defines it exactly.
//!
//! The pentagon spirals through two reflex vertices. B and D are the
//! natural guards at those reflex vertices; A sits on the convex vertex
//! (6,1) but is widened past its natural wedge, sweeping from the edge ray
//! towards (2,6) to the diagonal ray towards (0,0) — the one guard no
//! natural placement provides.

use crate::geom::{Dir, Point, Polygon};
use crate::guards::{AngleGuard, GuardSet};
use crate::scalar::integer;

fn pt(x: i64, y: i64) -> Point {
    Point::new(integer(x), integer(y))
}

fn dir(dx: i64, dy: i64) -> Dir {
    Dir::from_vector(&integer(dx), &integer(dy)).expect("nonzero direction")
}

/// The pentagon itself: counterclockwise, reflex at (4,1) and (2,2).
pub fn indistinguishable_pentagon() -> Polygon {
    Polygon::new(vec![pt(0, 0), pt(4, 1), pt(6, 1), pt(2, 6), pt(2, 2)])
        .expect("fixture pentagon is valid")
}

/// The three wedges; the formula A.B.D defines the pentagon.
pub fn pentagon_abd_guards() -> GuardSet {
    let mut gs = GuardSet::new();
    gs.push(
        "A",
        AngleGuard::new(pt(6, 1), dir(-4, 5), dir(-6, -1), false),
    )
    .expect("fresh label");
    gs.push("B", AngleGuard::new(pt(2, 2), dir(-1, -1), dir(0, 1), true))
        .expect("fresh label");
    gs.push("D", AngleGuard::new(pt(4, 1), dir(1, 0), dir(-4, -1), true))
        .expect("fresh label");
    gs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::guards::natural_guard;
    use crate::verify::{build_arrangement, defines, monotone_definable};

    #[test]
    fn natural_guards_cannot_define_the_pentagon() {
        let p = indistinguishable_pentagon();
        let mut gs = GuardSet::new();
        for i in 0..5 {
            gs.push(format!("g{}", i + 1), natural_guard(&p, i).unwrap())
                .unwrap();
        }
        let arr = build_arrangement(&p, &gs);
        let report = monotone_definable(&arr.faces);
        assert!(!report.definable);
        let (inside, outside) = report.witness.unwrap();
        assert!(inside.inside && !outside.inside);
    }

    #[test]
    fn abd_defines_the_pentagon() {
        let p = indistinguishable_pentagon();
        let gs = pentagon_abd_guards();
        let f = parse("A.B.D").unwrap();
        let report = defines(&f, &gs, &p).unwrap();
        assert!(
            report.verdict,
            "counterexample: {:?}",
            report.counterexample
        );
    }

    #[test]
    fn b_and_d_are_the_natural_reflex_guards() {
        let p = indistinguishable_pentagon();
        let gs = pentagon_abd_guards();
        assert_eq!(gs.get("D").unwrap(), &natural_guard(&p, 1).unwrap());
        assert_eq!(gs.get("B").unwrap(), &natural_guard(&p, 4).unwrap());
        // A is not the natural guard at its vertex
        assert_ne!(gs.get("A").unwrap(), &natural_guard(&p, 2).unwrap());
    }
}
