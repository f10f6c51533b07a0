//! Worked examples shipped as data: input cycles, fans and polynomials
//! together with the numbers they are expected to produce.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::cycle::TropicalCycle;
use crate::fan::Fan;
use crate::hypersurface::{tropical_hypersurface, TropicalPolynomial};
use crate::json::{format_rational, to_canonical_string, CycleDoc, FanDoc, PolynomialDoc};
use crate::linalg::{rat, rats, Rat};
use crate::polyhedron::Polyhedron;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?}; available: {names}", names = FIXTURE_NAMES.join(", "))]
    UnknownFixture(String),
    #[error("selfintersection-n needs n >= 1")]
    BadParameter,
}

pub const FIXTURE_NAMES: [&str; 4] = ["selfintersection-n", "selfinter-ex", "tp3", "bezout-2-2"];

fn polynomial(n: usize, terms: &[(&[i64], i64)]) -> TropicalPolynomial {
    TropicalPolynomial::new(n, terms.iter().map(|(e, v)| (e.to_vec(), rat(*v)))).expect("fixture polynomial")
}

fn curve(f: &TropicalPolynomial) -> TropicalCycle {
    tropical_hypersurface(f).expect("fixture polynomial has several terms")
}

/// The curve of `x^n + y + 1` with its Hirzebruch compactification.
#[derive(Debug, Clone)]
pub struct SelfIntersection {
    pub n: i64,
    pub polynomial: TropicalPolynomial,
    pub curve: TropicalCycle,
    pub fan: Fan,
    /// Local multiplicity of the self-intersection at the origin.
    pub expected_multiplicity: i64,
}

pub fn selfintersection(n: i64) -> SelfIntersection {
    let polynomial = polynomial(2, &[(&[n, 0], 0), (&[0, 1], 0), (&[0, 0], 0)]);
    SelfIntersection { n, curve: curve(&polynomial), polynomial, fan: Fan::hirzebruch(n), expected_multiplicity: n }
}

/// A conic and a line in the plane with valuation-one constants.
///
/// `curve` is cut out by `a x^2 + xy + a y^2 + x + y + a` and `line` by
/// `x + y + a` with `val(a) = 1`. Their intersection has a component through
/// `witness` carrying stable degree 2, while the closures in P^1 x P^1
/// intersect in degree 4.
#[derive(Debug, Clone)]
pub struct SelfInterEx {
    pub curve_polynomial: TropicalPolynomial,
    pub line_polynomial: TropicalPolynomial,
    pub curve: TropicalCycle,
    pub line: TropicalCycle,
    pub fan: Fan,
    pub witness: Vec<Rat>,
    pub expected_stable_degree: i64,
    pub expected_mw_degree: i64,
}

pub fn selfinter_ex() -> SelfInterEx {
    let curve_polynomial =
        polynomial(2, &[(&[2, 0], 1), (&[1, 1], 0), (&[0, 2], 1), (&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 1)]);
    let line_polynomial = polynomial(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[0, 0], 1)]);
    SelfInterEx {
        curve: curve(&curve_polynomial),
        line: curve(&line_polynomial),
        curve_polynomial,
        line_polynomial,
        fan: Fan::product_of_lines(2),
        witness: rats(&[1, 1]),
        expected_stable_degree: 2,
        expected_mw_degree: 4,
    }
}

/// A line inside the coordinate plane `{x = 0}` of R^3, tested against that
/// plane and against the tropical plane `min(x, y, z, 0)` on the fan of P^3.
#[derive(Debug, Clone)]
pub struct Tp3 {
    pub fan: Fan,
    pub plane: TropicalCycle,
    pub line: TropicalCycle,
    pub coordinate_plane: TropicalCycle,
    pub expected_coordinate_plane: i64,
    pub expected_plane: i64,
}

pub fn tp3() -> Tp3 {
    let plane = curve(&polynomial(3, &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0), (&[0, 0, 0], 0)]));
    let line = TropicalCycle::star_of_rays(
        &rats(&[0, 0, 0]),
        &[(vec![0, 1, 0], 1), (vec![0, 0, 1], 1), (vec![0, -1, -1], 1)],
    );
    let coordinate_plane = TropicalCycle::new(
        3,
        2,
        vec![crate::cycle::Cell::new(Polyhedron::from_rows(3, &[], &[vec![1, 0, 0, 0]]), 1)],
    )
    .expect("plane is a 2-cycle");
    Tp3 {
        fan: Fan::projective_space(3),
        plane,
        line,
        coordinate_plane,
        expected_coordinate_plane: 0,
        expected_plane: 1,
    }
}

/// Two plane conics with unrelated valuations on the fan of P^2.
#[derive(Debug, Clone)]
pub struct Bezout22 {
    pub first_polynomial: TropicalPolynomial,
    pub second_polynomial: TropicalPolynomial,
    pub first: TropicalCycle,
    pub second: TropicalCycle,
    pub fan: Fan,
    pub expected_degree: i64,
}

pub fn bezout_2_2() -> Bezout22 {
    let first_polynomial =
        polynomial(2, &[(&[2, 0], 3), (&[1, 1], 1), (&[0, 2], 2), (&[1, 0], 0), (&[0, 1], 1), (&[0, 0], 0)]);
    let second_polynomial =
        polynomial(2, &[(&[2, 0], 0), (&[1, 1], 2), (&[0, 2], 1), (&[1, 0], 1), (&[0, 1], 0), (&[0, 0], 2)]);
    Bezout22 {
        first: curve(&first_polynomial),
        second: curve(&second_polynomial),
        first_polynomial,
        second_polynomial,
        fan: Fan::projective_space(2),
        expected_degree: 4,
    }
}

/// A fixture rendered as JSON documents plus a manifest of expected values.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub documents: BTreeMap<String, Value>,
    pub expected: Value,
    pub notes: Vec<String>,
}

impl Fixture {
    /// Canonical text of every document keyed by file name, including
    /// `expected.json`.
    pub fn files(&self) -> BTreeMap<String, String> {
        let mut out: BTreeMap<String, String> =
            self.documents.iter().map(|(k, v)| (format!("{k}.json"), to_canonical_string(v))).collect();
        let manifest = json!({
            "fixture": self.name,
            "documents": self.documents.keys().map(|k| format!("{k}.json")).collect::<Vec<_>>(),
            "expected": self.expected,
            "notes": self.notes,
        });
        out.insert("expected.json".into(), to_canonical_string(&manifest));
        out
    }
}

fn doc<T: serde::Serialize>(t: T) -> Value {
    serde_json::to_value(t).expect("documents serialize")
}

fn point(p: &[Rat]) -> Value {
    Value::Array(p.iter().map(|x| Value::String(format_rational(x))).collect())
}

/// Build a fixture by name. `n` is used by `selfintersection-n` only.
pub fn fixture(name: &str, n: i64) -> Result<Fixture, FixtureError> {
    let f = match name {
        "selfintersection-n" => {
            if n < 1 {
                return Err(FixtureError::BadParameter);
            }
            let s = selfintersection(n);
            Fixture {
                name: name.into(),
                documents: BTreeMap::from([
                    ("polynomial".into(), doc(PolynomialDoc::from(&s.polynomial))),
                    ("curve".into(), doc(CycleDoc::from(&s.curve))),
                    ("fan".into(), doc(FanDoc::from(&s.fan))),
                ]),
                expected: json!({
                    "n": n,
                    "witness": point(&rats(&[0, 0])),
                    "self_intersection_multiplicity": s.expected_multiplicity,
                }),
                notes: vec![
                    format!("curve of x^{n} + y + 1: rays (1,0), (0,1), (-1,-{n}) with weights 1, {n}, 1"),
                    "stable self-intersection of the curve has multiplicity n at the origin".into(),
                ],
            }
        }
        "selfinter-ex" => {
            let s = selfinter_ex();
            Fixture {
                name: name.into(),
                documents: BTreeMap::from([
                    ("curve_polynomial".into(), doc(PolynomialDoc::from(&s.curve_polynomial))),
                    ("line_polynomial".into(), doc(PolynomialDoc::from(&s.line_polynomial))),
                    ("curve".into(), doc(CycleDoc::from(&s.curve))),
                    ("line".into(), doc(CycleDoc::from(&s.line))),
                    ("fan".into(), doc(FanDoc::from(&s.fan))),
                ]),
                expected: json!({
                    "witness": point(&s.witness),
                    "stable": s.expected_stable_degree,
                    "mw": s.expected_mw_degree,
                }),
                notes: vec![
                    "curve: a x^2 + xy + a y^2 + x + y + a, line: x + y + a, val(a) = 1".into(),
                    "stable: degree of the stable intersection on the component through the witness".into(),
                    "mw: degree of the product of the Minkowski-weight classes on the fan of P^1 x P^1".into(),
                ],
            }
        }
        "tp3" => {
            let t = tp3();
            Fixture {
                name: name.into(),
                documents: BTreeMap::from([
                    ("fan".into(), doc(FanDoc::from(&t.fan))),
                    ("plane".into(), doc(CycleDoc::from(&t.plane))),
                    ("line".into(), doc(CycleDoc::from(&t.line))),
                    ("coordinate_plane".into(), doc(CycleDoc::from(&t.coordinate_plane))),
                ]),
                expected: json!({
                    "tau": [],
                    "F=x-plane": t.expected_coordinate_plane,
                    "F=P": t.expected_plane,
                }),
                notes: vec![
                    "plane: x + y + z + 1; line: x = a, y + z + 1 - a = 0 with val(a) = 0".into(),
                    "degree of line ·_c F on the open stratum for F the plane {x = 0} and for F = plane".into(),
                ],
            }
        }
        "bezout-2-2" => {
            let b = bezout_2_2();
            Fixture {
                name: name.into(),
                documents: BTreeMap::from([
                    ("first_polynomial".into(), doc(PolynomialDoc::from(&b.first_polynomial))),
                    ("second_polynomial".into(), doc(PolynomialDoc::from(&b.second_polynomial))),
                    ("first".into(), doc(CycleDoc::from(&b.first))),
                    ("second".into(), doc(CycleDoc::from(&b.second))),
                    ("fan".into(), doc(FanDoc::from(&b.fan))),
                ]),
                expected: json!({ "stable": b.expected_degree, "mw": b.expected_degree }),
                notes: vec!["two conics meet in 2 * 2 points counted stably and in the Chow ring of P^2".into()],
            }
        }
        other => return Err(FixtureError::UnknownFixture(other.into())),
    };
    Ok(f)
}
