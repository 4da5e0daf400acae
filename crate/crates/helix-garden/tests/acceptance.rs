//! Acceptance suite: the headline guarantees, checked end to end.
//!
//! Each test prints one pass/fail line. Every check is exact — rational
//! arithmetic, face-exact verification, exhaustive subset search — so there
//! are no tolerances anywhere.

use helix_garden::formula::{helix_formula, pocket_formula, pocket_guard_set};
use helix_garden::guards::natural_guard;
use helix_garden::helix::{build_helix, default_base, pocket, Helix};
use helix_garden::scalar::{rational, Scalar};
use helix_garden::verify::{
    build_arrangement, defines, defines_exterior, min_natural_guards, monotone_definable,
    MinGuardsOutcome,
};
use helix_garden::{fixtures, parse_formula, GuardSet};

fn grid() -> Vec<Scalar> {
    vec![
        rational(1, 8),
        rational(1, 4),
        rational(1, 2),
        rational(7, 8),
    ]
}

fn helix(n: usize, fraction: &Scalar) -> Helix {
    build_helix(n, &default_base(), fraction)
        .unwrap_or_else(|e| panic!("H_{n} must build: {e}"))
        .0
}

/// Guard labels of the defining formula: 1..n-3 and n (1 and 3 for the
/// triangle base case).
fn formula_labels(n: usize) -> Vec<usize> {
    if n == 3 {
        vec![1, 3]
    } else {
        (1..=n - 3).chain([n]).collect()
    }
}

#[test]
fn criterion_1_construction_and_pockets() {
    for fraction in grid() {
        for n in 3..=12 {
            let h = helix(n, &fraction);
            assert_eq!(h.n(), n);
            assert!(h.polygon().is_simple(), "H_{n} must be simple");
            if n >= 4 {
                let p = pocket(h.polygon()).unwrap_or_else(|e| panic!("pocket of H_{n}: {e}"));
                assert_eq!(p.len(), n - 1, "pocket of H_{n} must have n-1 vertices");
            }
        }
    }
    println!(
        "criterion 1 (construction: simple n-gons, pockets of n-1 vertices, all fractions): PASS"
    );
}

#[test]
fn criterion_2_interior_formula_defines_helix() {
    let fraction = rational(1, 2);
    for n in 3..=12 {
        let h = helix(n, &fraction);
        let gs = h.guard_set(&formula_labels(n)).unwrap();
        let f = helix_formula(n).unwrap();
        let report = defines(&f, &gs, h.polygon()).unwrap();
        assert!(
            report.verdict,
            "helix_formula({n}) must define H_{n}; counterexample {:?}",
            report.counterexample
        );
    }
    println!("criterion 2 (interior formula defines H_n, n=3..12, face-exact): PASS");
}

#[test]
fn criterion_3_f8_golden_string() {
    assert_eq!(
        helix_formula(8).unwrap().render(),
        "g1.g2+g1.g3.g4+g1.g3.g5.g8"
    );
    println!("criterion 3 (F_8 golden string): PASS");
}

#[test]
fn criterion_4_lower_bound_small_n() {
    let fraction = rational(1, 2);
    for n in 5..=8 {
        let h = helix(n, &fraction);
        let order = h.order().to_vec();
        match min_natural_guards(h.polygon(), &order, n).unwrap() {
            MinGuardsOutcome::Found {
                k_min,
                subset,
                formula,
                per_k,
            } => {
                assert_eq!(k_min, n - 2, "H_{n} needs exactly n-2 guards");
                assert_eq!(subset, formula_labels(n), "witness subset for H_{n}");
                // every smaller subset is rejected, in particular all
                // (n-3)-subsets
                for p in &per_k[..k_min - 1] {
                    assert_eq!(p.definable, 0, "no {}-subset may define H_{n}", p.k);
                }
                let gs = h.guard_set(&subset).unwrap();
                assert!(defines(&formula, &gs, h.polygon()).unwrap().verdict);
            }
            other => panic!("H_{n}: unexpected outcome {other:?}"),
        }
    }
    println!("criterion 4 (exhaustive search: k_min = n-2 for n=5..8, all smaller subsets rejected): PASS");
}

#[test]
fn criterion_5_dual_defines_exterior() {
    let fraction = rational(1, 2);
    for n in 3..=9 {
        let h = helix(n, &fraction);
        let gs = h.guard_set(&formula_labels(n)).unwrap().complemented();
        let f = helix_formula(n).unwrap().dual();
        let report = defines_exterior(&f, &gs, h.polygon()).unwrap();
        assert!(
            report.verdict,
            "dual formula must define the exterior of H_{n}"
        );
    }
    println!(
        "criterion 5 (dual formula over complement guards defines the exterior, n=3..9): PASS"
    );
}

#[test]
fn criterion_6_pocket_formula() {
    let fraction = rational(1, 2);
    for n in 5..=9 {
        let h = helix(n, &fraction);
        let pk = pocket(h.polygon()).unwrap();
        let pgs = pocket_guard_set(&h).unwrap();
        let pf = pocket_formula(n).unwrap();
        let report = defines(&pf, &pgs, &pk).unwrap();
        assert!(
            report.verdict,
            "pocket formula must define the pocket of H_{n}; counterexample {:?}",
            report.counterexample
        );
    }
    println!("criterion 6 (pocket formula defines the pocket, n=5..9): PASS");
}

#[test]
fn criterion_7_pentagon_fixture() {
    let pentagon = fixtures::indistinguishable_pentagon();
    let mut natural = GuardSet::new();
    for i in 0..5 {
        natural
            .push(format!("g{}", i + 1), natural_guard(&pentagon, i).unwrap())
            .unwrap();
    }
    let arr = build_arrangement(&pentagon, &natural);
    let report = monotone_definable(&arr.faces);
    assert!(
        !report.definable,
        "no monotone formula over the five natural guards may define the pentagon"
    );
    let (inside, outside) = report.witness.unwrap();
    assert!(inside.inside && !outside.inside);

    let abd = defines(
        &parse_formula("A.B.D").unwrap(),
        &fixtures::pentagon_abd_guards(),
        &pentagon,
    )
    .unwrap();
    assert!(abd.verdict, "A.B.D must define the pentagon");
    println!("criterion 7 (pentagon: natural guards fail, A.B.D succeeds): PASS");
}

mod criterion_8 {
    use super::*;
    use helix_garden::formula::Formula;
    use helix_garden::geom::{convex_hull, orient, Orientation, Point};
    use helix_garden::verify::FaceSample;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn scalar_strategy() -> impl Strategy<Value = Scalar> {
        (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rational(n, d))
    }

    fn point_strategy() -> impl Strategy<Value = Point> {
        (scalar_strategy(), scalar_strategy()).prop_map(|(x, y)| Point::new(x, y))
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = (1usize..=6).prop_map(|i| Formula::leaf(format!("g{i}")));
        leaf.prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
                prop::collection::vec(inner, 2..4).prop_map(Formula::or),
            ]
        })
    }

    fn all_labels() -> Vec<String> {
        (1..=6).map(|i| format!("g{i}")).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn orient_antisymmetry(p in point_strategy(), q in point_strategy(), r in point_strategy()) {
            let ab = orient(&p, &q, &r);
            let ba = orient(&p, &r, &q);
            let flipped = match ab {
                Orientation::Ccw => Orientation::Cw,
                Orientation::Cw => Orientation::Ccw,
                Orientation::Collinear => Orientation::Collinear,
            };
            prop_assert_eq!(ba, flipped);
        }

        #[test]
        fn hull_idempotence(pts in prop::collection::vec(point_strategy(), 3..14)) {
            match convex_hull(&pts) {
                Ok(hull) => {
                    let again = convex_hull(hull.vertices()).unwrap();
                    prop_assert_eq!(hull, again);
                }
                Err(_) => {
                    // degenerate inputs (collinear or too few distinct points)
                    // are rejected, which is fine for this property
                }
            }
        }

        #[test]
        fn evaluate_monotonicity(
            f in formula_strategy(),
            bits in 0u32..64,
            flip in 0usize..6,
        ) {
            let labels = all_labels();
            let mut low: BTreeMap<String, bool> = labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), bits >> i & 1 == 1))
                .collect();
            let before = f.evaluate(&low).unwrap();
            low.insert(labels[flip].clone(), true);
            let after = f.evaluate(&low).unwrap();
            prop_assert!(!before || after, "flipping an input to true may not lower the output");
        }

        #[test]
        fn dual_involution(f in formula_strategy()) {
            prop_assert_eq!(f.dual().dual(), f);
        }

        #[test]
        fn dominance_matches_enumeration(labeling in 0u32..256) {
            // all 8 signatures over 3 guards, inside-labeled by the bits of
            // `labeling`; compare the dominance criterion against exhaustive
            // enumeration of all 20 monotone 3-input functions
            let faces: Vec<FaceSample> = (0..8usize)
                .map(|s| FaceSample {
                    point: Point::new(rational(0, 1), rational(0, 1)),
                    signature: vec![s & 1 == 1, s >> 1 & 1 == 1, s >> 2 & 1 == 1],
                    inside: labeling >> s & 1 == 1,
                })
                .collect();
            let by_enumeration = monotone_3_functions()
                .iter()
                .any(|&f| (0..8).all(|s| (f >> s & 1 == 1) == (labeling >> s & 1 == 1)));
            prop_assert_eq!(monotone_definable(&faces).definable, by_enumeration);
        }
    }

    fn monotone_3_functions() -> Vec<u8> {
        let fns: Vec<u8> = (0..=255u8)
            .filter(|&f| {
                (0..8u8).all(|a| (0..8u8).all(|b| a & !b & 7 != 0 || (f >> a & 1) <= (f >> b & 1)))
            })
            .collect();
        assert_eq!(fns.len(), 20);
        fns
    }

    #[test]
    fn banner() {
        println!(
            "criterion 8 (property suites, 1000 cases each): PASS (see proptest results above)"
        );
    }
}
