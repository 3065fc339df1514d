//! Element arithmetic against a map-based reference implementation of the
//! wreath law, plus algebraic properties on generated elements.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use wreathwalk::group::{Ball, Element, GroupSpec, Point, DEFAULT_BALL_CAP};

/// Reference element: lamps as an ordinary map, identities pruned.
#[derive(Debug, Clone, PartialEq)]
enum Ref {
    Leaf(i64),
    Node((i32, i32), BTreeMap<(i32, i32), Ref>),
}

#[derive(Clone, Copy)]
struct Shape {
    planar: &'static [bool],
    modulus: Option<i64>,
}

const Z2_C2: Shape = Shape {
    planar: &[true],
    modulus: Some(2),
};
const Z_Z: Shape = Shape {
    planar: &[false],
    modulus: None,
};
const Z2_Z2_C2: Shape = Shape {
    planar: &[true, true],
    modulus: Some(2),
};
const Z_C3: Shape = Shape {
    planar: &[false],
    modulus: Some(3),
};

impl Shape {
    fn spec(self) -> GroupSpec {
        let mut text: Vec<&str> = self.planar.iter().map(|&p| if p { "Z2" } else { "Z" }).collect();
        let leaf = match self.modulus {
            Some(m) => format!("C{m}"),
            None => "Z".into(),
        };
        text.push(&leaf);
        text.join(" wr ").parse().unwrap()
    }

    fn inner(self) -> Shape {
        Shape {
            planar: &self.planar[1..],
            modulus: self.modulus,
        }
    }
}

fn identity(shape: Shape) -> Ref {
    if shape.planar.is_empty() {
        Ref::Leaf(0)
    } else {
        Ref::Node((0, 0), BTreeMap::new())
    }
}

fn leaf_reduce(v: i64, modulus: Option<i64>) -> i64 {
    modulus.map_or(v, |m| v.rem_euclid(m))
}

/// `(t1,f1)(t2,f2) = (t1+t2, x ↦ f1(x) f2(x−t1))`, evaluated pointwise.
fn ref_mul(a: &Ref, b: &Ref, shape: Shape) -> Ref {
    match (a, b) {
        (Ref::Leaf(x), Ref::Leaf(y)) => Ref::Leaf(leaf_reduce(x + y, shape.modulus)),
        (Ref::Node(ta, fa), Ref::Node(tb, fb)) => {
            let shift = |p: (i32, i32)| (p.0 + ta.0, p.1 + ta.1);
            let sites: BTreeSet<(i32, i32)> = fa.keys().copied().chain(fb.keys().map(|&k| shift(k))).collect();
            let e = identity(shape.inner());
            let mut lamps = BTreeMap::new();
            for x in sites {
                let left = fa.get(&x).unwrap_or(&e);
                let right = fb.get(&(x.0 - ta.0, x.1 - ta.1)).unwrap_or(&e);
                let v = ref_mul(left, right, shape.inner());
                if v != e {
                    lamps.insert(x, v);
                }
            }
            Ref::Node((ta.0 + tb.0, ta.1 + tb.1), lamps)
        }
        _ => panic!("depth mismatch"),
    }
}

/// `(t,f)^{-1} = (−t, x ↦ f(x+t)^{-1})`.
fn ref_inv(a: &Ref, shape: Shape) -> Ref {
    match a {
        Ref::Leaf(x) => Ref::Leaf(leaf_reduce(-x, shape.modulus)),
        Ref::Node(t, f) => Ref::Node(
            (-t.0, -t.1),
            f.iter()
                .map(|(&(x, y), v)| ((x - t.0, y - t.1), ref_inv(v, shape.inner())))
                .collect(),
        ),
    }
}

fn to_ref(g: &Element) -> Ref {
    match g {
        Element::Leaf(v) => Ref::Leaf(*v),
        Element::Node(n) => Ref::Node(
            (n.base().x, n.base().y),
            n.lamps().iter().map(|(p, v)| ((p.x, p.y), to_ref(v))).collect(),
        ),
    }
}

fn element(shape: Shape) -> BoxedStrategy<Element> {
    let Some((&planar, _)) = shape.planar.split_first() else {
        return match shape.modulus {
            Some(m) => (0..m).prop_map(Element::Leaf).boxed(),
            None => (-5i64..=5).prop_map(Element::Leaf).boxed(),
        };
    };
    let span = if planar { 3 } else { 0 };
    let point = move || (-3i32..=3, -span..=span).prop_map(|(x, y)| Point::new(x, y));
    let lamps = prop::collection::btree_map(point().prop_map(|p| (p.x, p.y)), element(shape.inner()), 0..5);
    (point(), lamps)
        .prop_map(|(base, lamps)| {
            Element::from_parts(
                base,
                lamps.into_iter().map(|((x, y), v)| (Point::new(x, y), v)).collect(),
            )
            .unwrap()
        })
        .boxed()
}

fn triple(shape: Shape) -> impl Strategy<Value = (Element, Element, Element)> {
    (element(shape), element(shape), element(shape))
}

fn check_against_reference(shape: Shape, a: &Element, b: &Element) -> Result<(), TestCaseError> {
    let spec = shape.spec();
    let ab = spec.multiply(a, b).unwrap();
    prop_assert_eq!(to_ref(&ab), ref_mul(&to_ref(a), &to_ref(b), shape));
    prop_assert_eq!(to_ref(&spec.invert(a).unwrap()), ref_inv(&to_ref(a), shape));
    Ok(())
}

fn check_axioms(shape: Shape, a: &Element, b: &Element, c: &Element) -> Result<(), TestCaseError> {
    let spec = shape.spec();
    let m = |x: &Element, y: &Element| spec.multiply(x, y).unwrap();
    prop_assert_eq!(m(&m(a, b), c), m(a, &m(b, c)));
    let e = spec.identity();
    prop_assert_eq!(&m(a, &e), a);
    prop_assert_eq!(&m(&e, a), a);
    let inv = spec.invert(a).unwrap();
    prop_assert!(m(a, &inv).is_identity());
    prop_assert!(m(&inv, a).is_identity());
    prop_assert_eq!(spec.invert(&m(a, b)).unwrap(), m(&spec.invert(b).unwrap(), &inv));
    // projection to the base is a homomorphism
    prop_assert_eq!(m(a, b).base(), a.base() + b.base());
    let text = spec.encode(&m(a, b));
    prop_assert_eq!(spec.decode(&text).unwrap(), m(a, b));
    Ok(())
}

proptest! {
    #[test]
    fn planar_lamplighter_matches_reference((a, b, _) in triple(Z2_C2)) {
        check_against_reference(Z2_C2, &a, &b)?;
    }

    #[test]
    fn integer_lamps_match_reference((a, b, _) in triple(Z_Z)) {
        check_against_reference(Z_Z, &a, &b)?;
    }

    #[test]
    fn cyclic_three_lamps_match_reference((a, b, _) in triple(Z_C3)) {
        check_against_reference(Z_C3, &a, &b)?;
    }

    #[test]
    fn nested_tower_matches_reference((a, b, _) in triple(Z2_Z2_C2)) {
        check_against_reference(Z2_Z2_C2, &a, &b)?;
    }

    #[test]
    fn axioms_planar((a, b, c) in triple(Z2_C2)) {
        check_axioms(Z2_C2, &a, &b, &c)?;
    }

    #[test]
    fn axioms_integer_lamps((a, b, c) in triple(Z_Z)) {
        check_axioms(Z_Z, &a, &b, &c)?;
    }

    #[test]
    fn axioms_nested((a, b, c) in triple(Z2_Z2_C2)) {
        check_axioms(Z2_Z2_C2, &a, &b, &c)?;
    }
}

#[test]
fn translation_then_lamp() {
    let spec = Z2_C2.spec();
    let t = Element::translation(Point::new(1, 0));
    let lamp = Element::lamp_at_origin(Element::Leaf(1));
    let expected = Element::from_parts(Point::new(1, 0), vec![(Point::new(1, 0), Element::Leaf(1))]).unwrap();
    assert_eq!(spec.multiply(&t, &lamp).unwrap(), expected);
}

#[test]
fn inverse_of_lit_translation() {
    let spec = Z_C3.spec();
    let g = Element::from_parts(Point::new(1, 0), vec![(Point::ORIGIN, Element::Leaf(1))]).unwrap();
    let expected = Element::from_parts(Point::new(-1, 0), vec![(Point::new(-1, 0), Element::Leaf(2))]).unwrap();
    assert_eq!(spec.invert(&g).unwrap(), expected);
}

#[test]
fn encodings_are_distinct_on_a_ball() {
    let spec = Z2_C2.spec();
    let ball = Ball::enumerate(&spec, &spec.generators().unwrap(), 3, DEFAULT_BALL_CAP).unwrap();
    let texts: BTreeSet<String> = ball.iter().map(|(g, _)| spec.encode(g)).collect();
    assert_eq!(texts.len(), ball.len());
}

#[test]
fn ball_lengths_are_one_lipschitz_under_generators() {
    // |l(gs) − l(g)| ≤ 1 for every generator s, an independent check of the BFS
    let spec = Z2_C2.spec();
    let gens = spec.generators().unwrap();
    let ball = Ball::enumerate(&spec, &gens, 4, DEFAULT_BALL_CAP).unwrap();
    for (g, l) in ball.iter().filter(|(_, l)| *l < 4) {
        for s in gens.elements() {
            let next = ball
                .length(&spec.multiply(g, s).unwrap())
                .expect("neighbour inside the ball");
            assert!(next.abs_diff(l) <= 1);
        }
    }
}
