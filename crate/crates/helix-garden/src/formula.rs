//! Monotone Boolean formulas over guard labels.
//!
//! Grammar: `.` is AND and binds tighter than `+` (OR); parentheses group;
//! identifiers are a letter followed by letters/digits, optionally with
//! trailing primes (complement labels). Trees are flattened n-ary, so
//! parsing a rendered formula gives back a structurally equal tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::guards::{toggle_prime, AngleGuard, GuardError, GuardSet};
use crate::helix::Helix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound guard label: {0}")]
    UnboundLabel(String),
    #[error("n must be at least {min} for this formula, got {n}")]
    Domain { n: usize, min: usize },
    #[error(transparent)]
    Guard(#[from] GuardError),
}

/// Monotone formula tree: no negation, AND/OR only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Leaf(String),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn leaf(label: impl Into<String>) -> Formula {
        Formula::Leaf(label.into())
    }

    /// n-ary AND; nested ANDs are flattened, singletons collapse.
    pub fn and(children: Vec<Formula>) -> Formula {
        let mut flat = Vec::new();
        for c in children {
            match c {
                Formula::And(mut inner) => flat.append(&mut inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Formula::And(flat)
        }
    }

    /// n-ary OR; nested ORs are flattened, singletons collapse.
    pub fn or(children: Vec<Formula>) -> Formula {
        let mut flat = Vec::new();
        for c in children {
            match c {
                Formula::Or(mut inner) => flat.append(&mut inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Formula::Or(flat)
        }
    }

    /// All leaf labels, deduplicated.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Leaf(l) => {
                out.insert(l.clone());
            }
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.collect_labels(out);
                }
            }
        }
    }

    /// Standard monotone evaluation; the assignment must bind every leaf.
    pub fn evaluate(&self, assignment: &BTreeMap<String, bool>) -> Result<bool, FormulaError> {
        match self {
            Formula::Leaf(l) => assignment
                .get(l)
                .copied()
                .ok_or_else(|| FormulaError::UnboundLabel(l.clone())),
            Formula::And(cs) => {
                let mut acc = true;
                for c in cs {
                    // evaluate all children so unbound labels surface even
                    // after the value is decided
                    acc &= c.evaluate(assignment)?;
                }
                Ok(acc)
            }
            Formula::Or(cs) => {
                let mut acc = false;
                for c in cs {
                    acc |= c.evaluate(assignment)?;
                }
                Ok(acc)
            }
        }
    }

    /// De Morgan dual: AND and OR swapped, every leaf relabeled to its
    /// complement label. Applying it twice restores the original tree.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Leaf(l) => Formula::Leaf(toggle_prime(l)),
            Formula::And(cs) => Formula::Or(cs.iter().map(Formula::dual).collect()),
            Formula::Or(cs) => Formula::And(cs.iter().map(Formula::dual).collect()),
        }
    }

    /// Render with minimal parentheses: OR at top level, AND children of an
    /// OR bare, OR children of an AND parenthesized.
    pub fn render(&self) -> String {
        match self {
            Formula::Leaf(l) => l.clone(),
            Formula::Or(cs) => cs.iter().map(|c| c.render()).collect::<Vec<_>>().join("+"),
            Formula::And(cs) => cs
                .iter()
                .map(|c| match c {
                    Formula::Or(_) => format!("({})", c.render()),
                    _ => c.render(),
                })
                .collect::<Vec<_>>()
                .join("."),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Formula::Leaf(l) => serde_json::json!({"op": "leaf", "label": l}),
            Formula::And(cs) => serde_json::json!({
                "op": "and",
                "args": cs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }),
            Formula::Or(cs) => serde_json::json!({
                "op": "or",
                "args": cs.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            }),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Parse the formula grammar. Positions in errors are byte offsets.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    let f = parser.parse_or()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(FormulaError::Syntax {
            position: parser.pos,
            message: format!("unexpected character '{}'", parser.peek_char()),
        });
    }
    Ok(f)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.peek().map(|b| b as char).unwrap_or('\0')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_or(&mut self) -> Result<Formula, FormulaError> {
        let mut terms = vec![self.parse_and()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b'+') {
                self.pos += 1;
                self.skip_ws();
                terms.push(self.parse_and()?);
            } else {
                break;
            }
        }
        Ok(Formula::or(terms))
    }

    fn parse_and(&mut self) -> Result<Formula, FormulaError> {
        let mut factors = vec![self.parse_factor()?];
        loop {
            self.skip_ws();
            if self.peek() == Some(b'.') {
                self.pos += 1;
                self.skip_ws();
                factors.push(self.parse_factor()?);
            } else {
                break;
            }
        }
        Ok(Formula::and(factors))
    }

    fn parse_factor(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_or()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(FormulaError::Syntax {
                        position: self.pos,
                        message: "expected ')'".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                while self.peek() == Some(b'\'') {
                    self.pos += 1;
                }
                let label = std::str::from_utf8(&self.bytes[start..self.pos])
                    .expect("ascii slice")
                    .to_string();
                Ok(Formula::Leaf(label))
            }
            _ => Err(FormulaError::Syntax {
                position: self.pos,
                message: format!("expected identifier or '(', found '{}'", self.peek_char()),
            }),
        }
    }
}

/// The defining formula of the n-vertex helix over guard labels
/// g1..g_{n-3}, g_n.
///
/// For n = 2k+1: sum over i of (g1 g3 ... g_{2i-1}) g_{2i} for
/// i = 1..k-1, plus (g1 g3 ... g_{2k-3}) g_n; for n = 2k+2 the final
/// product extends to g_{2k-1}. The n = 3 and n = 4 base cases are
/// g1.g3 and g1.g4.
pub fn helix_formula(n: usize) -> Result<Formula, FormulaError> {
    if n < 3 {
        return Err(FormulaError::Domain { n, min: 3 });
    }
    let g = |i: usize| Formula::leaf(format!("g{i}"));
    match n {
        3 => return Ok(Formula::and(vec![g(1), g(3)])),
        4 => return Ok(Formula::and(vec![g(1), g(4)])),
        _ => {}
    }
    let (k, last_odd) = if n % 2 == 1 {
        let k = (n - 1) / 2;
        (k, 2 * k - 3)
    } else {
        let k = (n - 2) / 2;
        (k, 2 * k - 1)
    };
    let mut terms = Vec::new();
    for i in 1..k {
        let mut factors: Vec<Formula> = (0..i).map(|j| g(2 * j + 1)).collect();
        factors.push(g(2 * i));
        terms.push(Formula::and(factors));
    }
    let mut factors: Vec<Formula> = (1..=last_odd).step_by(2).map(g).collect();
    factors.push(g(n));
    terms.push(Formula::and(factors));
    Ok(Formula::or(terms))
}

/// Wedges backing the pocket formula of an n-vertex helix, per the
/// correspondence between pocket vertices and host vertices: the pocket
/// guard on v'_i is the complement of the host guard on v_{i+1}, except
/// that for i = 1, 2 it is the conjunction of a base-angle guard (G2 at v2
/// spanning the angle v1-v2-v3, G3 at v3 spanning v1-v3-v2) with that
/// complement. Only wedges referenced by `pocket_formula(n)` are emitted.
pub fn pocket_guard_set(helix: &Helix) -> Result<GuardSet, FormulaError> {
    let n = helix.n();
    if n < 5 {
        return Err(FormulaError::Domain { n, min: 5 });
    }
    let inner = helix_formula(n - 1)?;
    let mut out = GuardSet::new();
    for label in inner.labels() {
        let i: usize = label[1..]
            .parse()
            .expect("helix formula labels are g<digits>");
        match i {
            1 => {
                out.push("G2", base_angle_guard(helix, 2, 3, 1)?)?;
                out.push("g2'", helix.guard(2)?.complement())?;
            }
            2 => {
                out.push("G3", base_angle_guard(helix, 3, 1, 2)?)?;
                out.push("g3'", helix.guard(3)?.complement())?;
            }
            _ => {
                out.push(format!("g{}'", i + 1), helix.guard(i + 1)?.complement())?;
            }
        }
    }
    Ok(out)
}

/// Guard at base vertex `apex` whose wedge is the base triangle's interior
/// angle there: rays towards the two other base vertices, counterclockwise
/// from `toward1` to `toward2`.
fn base_angle_guard(
    helix: &Helix,
    apex: usize,
    toward1: usize,
    toward2: usize,
) -> Result<AngleGuard, FormulaError> {
    let a = helix.vertex(apex);
    let r1 = crate::geom::Dir::between(a, helix.vertex(toward1)).map_err(GuardError::from)?;
    let r2 = crate::geom::Dir::between(a, helix.vertex(toward2)).map_err(GuardError::from)?;
    Ok(AngleGuard::new(a.clone(), r1, r2, false))
}

/// The pocket's defining formula: the (n-1)-helix formula with each guard
/// replaced by its pocket counterpart; structurally the substitution
/// g_i -> G_{i+1}.g_{i+1}' for i = 1, 2 and g_i -> g_{i+1}' otherwise.
pub fn pocket_formula(n: usize) -> Result<Formula, FormulaError> {
    if n < 5 {
        return Err(FormulaError::Domain { n, min: 5 });
    }
    let inner = helix_formula(n - 1)?;
    Ok(substitute_pocket_labels(&inner))
}

fn substitute_pocket_labels(f: &Formula) -> Formula {
    match f {
        Formula::Leaf(l) => {
            let i: usize = l[1..].parse().expect("helix formula labels are g<digits>");
            match i {
                1 => Formula::and(vec![Formula::leaf("G2"), Formula::leaf("g2'")]),
                2 => Formula::and(vec![Formula::leaf("G3"), Formula::leaf("g3'")]),
                _ => Formula::leaf(format!("g{}'", i + 1)),
            }
        }
        Formula::And(cs) => Formula::and(cs.iter().map(substitute_pocket_labels).collect()),
        Formula::Or(cs) => Formula::or(cs.iter().map(substitute_pocket_labels).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn parse_basic_precedence() {
        let f = parse("g1.g2+g3").unwrap();
        assert_eq!(
            f,
            Formula::Or(vec![
                Formula::And(vec![Formula::leaf("g1"), Formula::leaf("g2")]),
                Formula::leaf("g3"),
            ])
        );
    }

    #[test]
    fn parse_nested() {
        let f = parse("g1.(g2+g3.g6)").unwrap();
        assert_eq!(
            f,
            Formula::And(vec![
                Formula::leaf("g1"),
                Formula::Or(vec![
                    Formula::leaf("g2"),
                    Formula::And(vec![Formula::leaf("g3"), Formula::leaf("g6")]),
                ]),
            ])
        );
        assert_eq!(f.render(), "g1.(g2+g3.g6)");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse("g1.(g2+") {
            Err(FormulaError::Syntax { position, .. }) => assert_eq!(position, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse("").is_err());
        assert!(parse("g1 + + g2").is_err());
        assert!(parse("(g1").is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        for text in [
            "g1",
            "g1.g2+g3",
            "g1.(g2+g3.g6)",
            "g1'+g2'.g3'",
            "(g1+g2).(g3+g4)",
        ] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&f.render()).unwrap(), f);
        }
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse(" g1 . g2 + g3 ").unwrap(), parse("g1.g2+g3").unwrap());
    }

    #[test]
    fn evaluate_basics() {
        let f = parse("g1.g2").unwrap();
        assert!(f.evaluate(&assign(&[("g1", true), ("g2", true)])).unwrap());
        let g = parse("g1+g2").unwrap();
        assert!(!g
            .evaluate(&assign(&[("g1", false), ("g2", false)]))
            .unwrap());
        assert_eq!(
            g.evaluate(&assign(&[("g1", false)])),
            Err(FormulaError::UnboundLabel("g2".into()))
        );
    }

    #[test]
    fn dual_swaps_and_relabels() {
        let f = parse("g1.g2+g3").unwrap();
        assert_eq!(f.dual().render(), "(g1'+g2').g3'");
        assert_eq!(parse("g1").unwrap().dual().render(), "g1'");
        assert_eq!(f.dual().dual(), f);
    }

    #[test]
    fn helix_formula_small_cases() {
        assert_eq!(helix_formula(3).unwrap().render(), "g1.g3");
        assert_eq!(helix_formula(4).unwrap().render(), "g1.g4");
        assert_eq!(helix_formula(5).unwrap().render(), "g1.g2+g1.g5");
        assert_eq!(helix_formula(6).unwrap().render(), "g1.g2+g1.g3.g6");
        assert_eq!(
            helix_formula(7).unwrap().render(),
            "g1.g2+g1.g3.g4+g1.g3.g7"
        );
        assert!(helix_formula(2).is_err());
    }

    #[test]
    fn helix_formula_eight_matches_expansion() {
        assert_eq!(
            helix_formula(8).unwrap().render(),
            "g1.g2+g1.g3.g4+g1.g3.g5.g8"
        );
    }

    #[test]
    fn helix_formula_label_count_is_n_minus_2() {
        for n in 4..=16 {
            let f = helix_formula(n).unwrap();
            let labels = f.labels();
            assert_eq!(labels.len(), n - 2, "n={n}");
            let mut expected: BTreeSet<String> = (1..=n - 3).map(|i| format!("g{i}")).collect();
            expected.insert(format!("g{n}"));
            assert_eq!(labels, expected, "n={n}");
        }
    }

    #[test]
    fn pocket_formula_is_substituted_inner_formula() {
        assert_eq!(pocket_formula(5).unwrap().render(), "G2.g2'.g5'");
        assert_eq!(
            pocket_formula(6).unwrap().render(),
            "G2.g2'.G3.g3'+G2.g2'.g6'"
        );
        assert!(pocket_formula(4).is_err());
    }

    #[test]
    fn pocket_formula_12_label_set() {
        let f = pocket_formula(12).unwrap();
        let labels = f.labels();
        let expected: BTreeSet<String> = [
            "G2", "G3", "g2'", "g3'", "g4'", "g5'", "g6'", "g7'", "g8'", "g9'", "g12'",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(labels, expected);
        assert_eq!(labels.iter().filter(|l| l.ends_with('\'')).count(), 9);
    }

    #[test]
    fn pocket_guard_set_counts() {
        let (helix, _) = crate::helix::build_helix(
            12,
            &crate::helix::default_base(),
            &crate::scalar::rational(1, 2),
        )
        .unwrap();
        let gs = pocket_guard_set(&helix).unwrap();
        assert_eq!(gs.len(), 11);
        assert!(gs.get("G2").is_some());
        assert!(gs.get("G3").is_some());
        // pocket guard on v'_3 is the complement of the host guard at v_4
        let g = gs.get("g4'").unwrap();
        assert_eq!(&g.apex, helix.vertex(4));
    }

    #[test]
    fn monotone_evaluation_never_decreases() {
        // flipping any input false -> true never turns the output true -> false
        let f = parse("g1.(g2+g3.g6)+g4").unwrap();
        let labels: Vec<String> = f.labels().into_iter().collect();
        let m = labels.len();
        for bits in 0..(1u32 << m) {
            let a: BTreeMap<String, bool> = labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), bits >> i & 1 == 1))
                .collect();
            let base = f.evaluate(&a).unwrap();
            for (i, label) in labels.iter().enumerate() {
                if bits >> i & 1 == 0 {
                    let mut b = a.clone();
                    b.insert(label.clone(), true);
                    let up = f.evaluate(&b).unwrap();
                    assert!(!base || up, "monotonicity violated");
                }
            }
        }
    }
}
