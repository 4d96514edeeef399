//! The seven structural properties of the essential closure, checked exactly on
//! concrete sets, plus a seeded generator of random test sets.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::{closure_of_interior, empty_closure_criterion, essential_closure_exact, topological_closure};
use crate::error::{input, Error, Result};
use crate::scalar::{rat, Rational, Scalar};
use crate::setmodel::{AffinePiece, Tag, TaggedPieceSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Closed,
    Nested,
    ContainsClosedInterior,
    Monotone,
    UnionMorphism,
    EmptinessCriterion,
    Idempotent,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Closed,
        Property::Nested,
        Property::ContainsClosedInterior,
        Property::Monotone,
        Property::UnionMorphism,
        Property::EmptinessCriterion,
        Property::Idempotent,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::Closed => "closure is closed",
            Property::Nested => "order d inside order e inside closure",
            Property::ContainsClosedInterior => "contains closure of interior",
            Property::Monotone => "monotone under inclusion",
            Property::UnionMorphism => "commutes with union",
            Property::EmptinessCriterion => "empty iff all projections null",
            Property::Idempotent => "idempotent",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness<T> {
    /// Pieces that should have been covered but were not.
    Pieces(TaggedPieceSet<T>),
    /// Projection measures that contradict the closure.
    Measures(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<T> {
    pub property: Property,
    pub pass: bool,
    pub witness: Option<Witness<T>>,
}

impl<T: Scalar> Verdict<T> {
    fn from_uncovered(property: Property, k: usize, uncovered: Vec<AffinePiece<T>>) -> Self {
        if uncovered.is_empty() {
            Verdict { property, pass: true, witness: None }
        } else {
            let set = TaggedPieceSet::new(k, uncovered).expect("pieces of a valid set");
            Verdict { property, pass: false, witness: Some(Witness::Pieces(set)) }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport<T> {
    pub d: usize,
    pub e: usize,
    pub verdicts: Vec<Verdict<T>>,
}

impl<T: Scalar> PropertyReport<T> {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, p: Property) -> &Verdict<T> {
        self.verdicts.iter().find(|v| v.property == p).expect("every property is reported")
    }
}

/// Evaluates all seven properties for `a`, `b` (which must contain `a`) and
/// orders `0 <= e < d <= k`.
pub fn check_properties<T: Scalar>(
    a: &TaggedPieceSet<T>,
    b: &TaggedPieceSet<T>,
    d: usize,
    e: usize,
) -> Result<PropertyReport<T>> {
    let k = a.k();
    if b.k() != k {
        return input(format!("sets live in R^{k} and R^{}", b.k()));
    }
    if e >= d {
        return input(format!("need e < d, got e = {e}, d = {d}"));
    }
    if d > k {
        return input(format!("closure order d = {d} exceeds the ambient dimension {k}"));
    }
    if !b.contains(a) {
        return input("monotonicity check needs A to be a subset of B");
    }
    let ad = essential_closure_exact(a, d)?;
    let ae = essential_closure_exact(a, e)?;
    let abar = topological_closure(a);
    let mut verdicts = Vec::with_capacity(7);

    // (1) the closure is a closed set: no dense-but-not-full pieces remain.
    let open_parts: Vec<_> = ad.pieces().iter().filter(|p| p.tag() == Tag::Null).cloned().collect();
    verdicts.push(Verdict::from_uncovered(Property::Closed, k, open_parts));

    // (2) nesting
    let mut missing = ae.uncovered_pieces(&ad);
    missing.extend(abar.uncovered_pieces(&ae));
    verdicts.push(Verdict::from_uncovered(Property::Nested, k, missing));

    // (3) closure of the interior
    let int = closure_of_interior(a);
    verdicts.push(Verdict::from_uncovered(Property::ContainsClosedInterior, k, ad.uncovered_pieces(&int)));

    // (4) monotone
    let bd = essential_closure_exact(b, d)?;
    verdicts.push(Verdict::from_uncovered(Property::Monotone, k, bd.uncovered_pieces(&ad)));

    // (5) union
    let lhs = essential_closure_exact(&a.union(b)?, d)?;
    let rhs = ad.union(&bd)?;
    let mut diff = rhs.uncovered_pieces(&lhs);
    diff.extend(lhs.uncovered_pieces(&rhs));
    verdicts.push(Verdict::from_uncovered(Property::UnionMorphism, k, diff));

    // (6) emptiness criterion, both routes
    verdicts.push(match (empty_closure_criterion(a, d), empty_closure_criterion(b, d)) {
        (Ok(_), Ok(_)) => Verdict { property: Property::EmptinessCriterion, pass: true, witness: None },
        (Err(Error::Invariant(msg)), _) | (_, Err(Error::Invariant(msg))) => Verdict {
            property: Property::EmptinessCriterion,
            pass: false,
            witness: Some(Witness::Measures(msg)),
        },
        (Err(e), _) | (_, Err(e)) => return Err(e),
    });

    // (7) idempotent
    let add = essential_closure_exact(&ad, d)?;
    let mut diff = add.uncovered_pieces(&ad);
    diff.extend(ad.uncovered_pieces(&add));
    verdicts.push(Verdict::from_uncovered(Property::Idempotent, k, diff));

    Ok(PropertyReport { d, e, verdicts })
}

/// One randomly generated test case.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub a: TaggedPieceSet<Rational>,
    pub b: TaggedPieceSet<Rational>,
    pub d: usize,
    pub e: usize,
}

const LATTICE: i64 = 8;

fn lattice_point(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(0..=LATTICE)).collect()
}

fn to_rat(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, LATTICE)).collect()
}

fn random_piece(rng: &mut ChaCha8Rng, k: usize, previous: &[AffinePiece<Rational>]) -> AffinePiece<Rational> {
    let tag = if rng.gen_bool(0.3) { Tag::Null } else { Tag::Full };
    // Reuse earlier geometry now and then so merges, overlaps and tag clashes occur.
    if !previous.is_empty() && rng.gen_bool(0.3) {
        let base = &previous[rng.gen_range(0..previous.len())];
        if base.p() == 1 && rng.gen_bool(0.5) {
            let (a, b) = (base.anchor().to_vec(), base.point_at(&[Rational::half()]));
            return AffinePiece::segment(a, b, tag).expect("sub-segment of a valid segment");
        }
        return base.with_tag(tag);
    }
    let p = rng.gen_range(0..=k.min(2));
    match p {
        0 => AffinePiece::point(to_rat(&lattice_point(rng, k))).expect("lattice point"),
        1 => loop {
            let (a, b) = (lattice_point(rng, k), lattice_point(rng, k));
            if a != b {
                break AffinePiece::segment(to_rat(&a), to_rat(&b), tag).expect("lattice segment");
            }
        },
        _ => {
            if k == 2 && rng.gen_bool(0.5) {
                let (x0, x1) = ordered_pair(rng);
                let (y0, y1) = ordered_pair(rng);
                return AffinePiece::rect(rat(x0, LATTICE), rat(x1, LATTICE), rat(y0, LATTICE), rat(y1, LATTICE), tag)
                    .expect("lattice rectangle");
            }
            for _ in 0..64 {
                let a = lattice_point(rng, k);
                let b = lattice_point(rng, k);
                let c = lattice_point(rng, k);
                let far: Vec<i64> = (0..k).map(|i| b[i] + c[i] - a[i]).collect();
                if far.iter().any(|&x| !(0..=LATTICE).contains(&x)) {
                    continue;
                }
                let e1: Vec<i64> = (0..k).map(|i| b[i] - a[i]).collect();
                let e2: Vec<i64> = (0..k).map(|i| c[i] - a[i]).collect();
                if let Ok(piece) = AffinePiece::parallelogram(to_rat(&a), to_rat(&e1), to_rat(&e2), tag) {
                    return piece;
                }
            }
            AffinePiece::point(to_rat(&lattice_point(rng, k))).expect("lattice point")
        }
    }
}

fn ordered_pair(rng: &mut ChaCha8Rng) -> (i64, i64) {
    loop {
        let (a, b) = (rng.gen_range(0..=LATTICE), rng.gen_range(0..=LATTICE));
        if a != b {
            return (a.min(b), a.max(b));
        }
    }
}

/// `count` random cases: `k` in 1..=3, at most 6 pieces in `A`, mixed tags,
/// coordinates on the 1/8 lattice, `B = A` plus up to three extra pieces.
pub fn random_corpus(count: usize, seed: u64) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let n = rng.gen_range(0..=6);
            let mut pieces = Vec::with_capacity(n);
            for _ in 0..n {
                let p = random_piece(&mut rng, k, &pieces);
                pieces.push(p);
            }
            let a = TaggedPieceSet::new(k, pieces.clone()).expect("pieces share k");
            for _ in 0..rng.gen_range(0..=3) {
                let p = random_piece(&mut rng, k, &pieces);
                pieces.push(p);
            }
            let b = TaggedPieceSet::new(k, pieces).expect("pieces share k");
            let d = rng.gen_range(1..=k);
            let e = rng.gen_range(0..d);
            CorpusCase { a, b, d, e }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct CorpusSummary {
    pub cases: usize,
    /// Passing cases per property, in [`Property::ALL`] order.
    pub passed: [usize; 7],
    /// `(case index, property)` for every failure.
    pub counterexamples: Vec<(usize, Property)>,
}

impl CorpusSummary {
    pub fn all_pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn run_corpus(count: usize, seed: u64) -> Result<CorpusSummary> {
    let mut passed = [0usize; 7];
    let mut counterexamples = Vec::new();
    let corpus = random_corpus(count, seed);
    for (i, case) in corpus.iter().enumerate() {
        let report = check_properties(&case.a, &case.b, case.d, case.e)?;
        for (slot, v) in report.verdicts.iter().enumerate() {
            if v.pass {
                passed[slot] += 1;
            } else {
                counterexamples.push((i, v.property));
            }
        }
    }
    Ok(CorpusSummary { cases: corpus.len(), passed, counterexamples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    type P = AffinePiece<Rational>;
    type S = TaggedPieceSet<Rational>;

    fn fig1() -> S {
        S::new(
            2,
            vec![
                P::segment(vec![int(0), int(0)], vec![int(1), int(1)], Tag::Full).unwrap(),
                P::segment(vec![int(0), int(1)], vec![int(1), int(0)], Tag::Null).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn crossing_diagonals_with_small_box() {
        let a = fig1();
        let bx = P::rect(int(0), rat(1, 10), int(0), rat(1, 10), Tag::Full).unwrap();
        let b = a.union(&S::new(2, vec![bx]).unwrap()).unwrap();
        let r = check_properties(&a, &b, 1, 0).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn empty_set_passes_vacuously() {
        let a = S::empty(2);
        let r = check_properties(&a, &a, 2, 1).unwrap();
        assert!(r.all_pass());
        assert!(empty_closure_criterion(&a, 2).unwrap().empty);
    }

    #[test]
    fn full_box_interior() {
        let a = S::new(2, vec![P::rect(int(0), int(1), int(0), int(1), Tag::Full).unwrap()]).unwrap();
        let r = check_properties(&a, &a, 2, 1).unwrap();
        assert!(r.all_pass());
        assert_eq!(closure_of_interior(&a), a);
    }

    #[test]
    fn preconditions() {
        let a = fig1();
        assert!(check_properties(&a, &a, 1, 1).is_err());
        assert!(check_properties(&a, &a, 3, 0).is_err());
        assert!(check_properties(&a, &S::empty(2), 1, 0).is_err());
    }

    #[test]
    fn corpus_is_deterministic_and_passes() {
        let s1 = run_corpus(40, 11).unwrap();
        let s2 = run_corpus(40, 11).unwrap();
        assert_eq!(s1.passed, s2.passed);
        assert!(s1.all_pass(), "{:?}", s1.counterexamples);
        assert!(random_corpus(40, 11).iter().any(|c| c.a.k() == 3));
    }
}
