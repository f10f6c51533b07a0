//! JSON documents for the library's objects.
//!
//! Coordinates, valuations and ray entries are exact strings (`"3"`, `"-2/5"`,
//! `"0.25"`); JSON numbers are rejected for them. Dimensions, weights and
//! indices are JSON integers (integer strings are accepted too). Output is
//! canonical: sorted keys and reduced fractions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::de::{self, DeserializeOwned, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cycle::{Cell, CycleError, TropicalCycle};
use crate::fan::{Fan, FanError, StratifiedCycle};
use crate::hypersurface::{HypersurfaceError, TropicalPolynomial};
use crate::linalg::{Int, Rat};
use crate::lp::Constraint;
use crate::minkowski::{MinkowskiError, MinkowskiWeight};
use crate::polyhedron::Polyhedron;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Hypersurface(#[from] HypersurfaceError),
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        let message = match text.rsplit_once(" at line ") {
            Some((m, _)) => m.to_string(),
            None => text,
        };
        JsonError::Parse { line: e.line(), column: e.column(), message }
    }
}

/// Parse an exact rational from `"p"`, `"p/q"` or a finite decimal `"1.25"`.
pub fn parse_rational(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let bad = || format!("not an exact rational: {s:?}");
    if let Some((p, q)) = s.split_once('/') {
        let p = Int::from_str(p.trim()).map_err(|_| bad())?;
        let q = Int::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let num = Int::from_str(&digits).map_err(|_| bad())?;
        let den = num_traits::pow(Int::from(10), frac.len());
        let r = Rat::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    Int::from_str(s).map(Rat::from_integer).map_err(|_| bad())
}

/// `"p"` for integers, otherwise the reduced `"p/q"`.
pub fn format_rational(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An exact rational written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rat);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string holding an exact rational such as \"-3/4\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

/// An integer coordinate, written as a string. JSON integers are also
/// accepted on input since they are exact; floats are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactInt(pub Int);

impl Serialize for ExactInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExactInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string holding one")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactInt, E> {
                Ok(ExactInt(Int::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactInt, E> {
                Ok(ExactInt(Int::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactInt, E> {
                let r = parse_rational(v).map_err(E::custom)?;
                if !r.is_integer() {
                    return Err(E::custom(format!("expected an integer, found {}", format_rational(&r))));
                }
                Ok(ExactInt(r.to_integer()))
            }
        }
        d.deserialize_any(V)
    }
}

/// A structural integer: a JSON integer, or an integer string on input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Count(pub i64);

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.0)
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Count;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Count, E> {
                Ok(Count(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Count, E> {
                i64::try_from(v).map(Count).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Count, E> {
                v.trim().parse().map(Count).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Count {
    fn index(self, what: &str) -> Result<usize, JsonError> {
        usize::try_from(self.0).map_err(|_| JsonError::Invalid(format!("{what} must be nonnegative, found {}", self.0)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronDoc {
    pub dim: Count,
    #[serde(default)]
    pub ineqs: Vec<Vec<Exact>>,
    #[serde(default)]
    pub eqs: Vec<Vec<Exact>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub poly: PolyhedronDoc,
    pub weight: Count,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleDoc {
    pub ambient: Count,
    pub dim: Count,
    pub cells: Vec<CellDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDoc {
    pub ambient: Count,
    pub rays: Vec<Vec<ExactInt>>,
    pub cones: Vec<Vec<Count>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDoc {
    pub tau: Vec<Count>,
    pub cycle: CycleDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratifiedDoc {
    pub components: Vec<StratumDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exp: Vec<ExactInt>,
    pub val: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialDoc {
    pub ambient: Count,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightValueDoc {
    pub cone: Vec<Count>,
    pub w: Count,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinkowskiDoc {
    pub fan: FanDoc,
    pub codim: Count,
    pub values: Vec<WeightValueDoc>,
}

fn row(c: &Constraint) -> Vec<Exact> {
    c.normal.iter().cloned().chain(std::iter::once(c.rhs.clone())).map(Exact).collect()
}

fn constraint(r: &[Exact], n: usize) -> Result<Constraint, JsonError> {
    if r.len() != n + 1 {
        return Err(JsonError::Invalid(format!("constraint row has {} entries, expected {}", r.len(), n + 1)));
    }
    let mut v: Vec<Rat> = r.iter().map(|e| e.0.clone()).collect();
    let b = v.pop().expect("nonempty row");
    Ok(Constraint::new(v, b))
}

impl From<&Polyhedron> for PolyhedronDoc {
    fn from(p: &Polyhedron) -> Self {
        let n = p.ambient_dim();
        let ineqs = if p.is_empty() {
            // 0 >= 1
            let mut r = vec![Exact(Rat::zero()); n];
            r.push(Exact(Rat::one()));
            vec![r]
        } else {
            p.ineqs().iter().map(row).collect()
        };
        let eqs = if p.is_empty() { Vec::new() } else { p.eqs().iter().map(row).collect() };
        PolyhedronDoc { dim: Count(n as i64), ineqs, eqs }
    }
}

impl TryFrom<&PolyhedronDoc> for Polyhedron {
    type Error = JsonError;
    fn try_from(d: &PolyhedronDoc) -> Result<Self, JsonError> {
        let n = d.dim.index("dim")?;
        let ineqs = d.ineqs.iter().map(|r| constraint(r, n)).collect::<Result<_, _>>()?;
        let eqs = d.eqs.iter().map(|r| constraint(r, n)).collect::<Result<_, _>>()?;
        Ok(Polyhedron::new(n, ineqs, eqs))
    }
}

impl From<&TropicalCycle> for CycleDoc {
    fn from(c: &TropicalCycle) -> Self {
        CycleDoc {
            ambient: Count(c.ambient_dim() as i64),
            dim: Count(c.dim() as i64),
            cells: c.cells().iter().map(|cell| CellDoc { poly: (&cell.poly).into(), weight: Count(cell.weight) }).collect(),
        }
    }
}

impl TryFrom<&CycleDoc> for TropicalCycle {
    type Error = JsonError;
    fn try_from(d: &CycleDoc) -> Result<Self, JsonError> {
        let cells = d
            .cells
            .iter()
            .map(|c| Ok(Cell::new(Polyhedron::try_from(&c.poly)?, c.weight.0)))
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(TropicalCycle::new(d.ambient.index("ambient")?, d.dim.index("dim")?, cells)?)
    }
}

impl From<&Fan> for FanDoc {
    fn from(f: &Fan) -> Self {
        FanDoc {
            ambient: Count(f.ambient_dim() as i64),
            rays: f.rays().iter().map(|r| r.iter().cloned().map(ExactInt).collect()).collect(),
            cones: f.cones().iter().map(|c| c.iter().map(|&i| Count(i as i64)).collect()).collect(),
        }
    }
}

fn indices(v: &[Count], what: &str) -> Result<Vec<usize>, JsonError> {
    v.iter().map(|c| c.index(what)).collect()
}

impl FanDoc {
    /// Build the fan without validating it, so that problems can be reported.
    pub fn to_unchecked(&self) -> Result<Fan, JsonError> {
        let n = self.ambient.index("ambient")?;
        let rays: Vec<Vec<Int>> = self.rays.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
        if let Some(r) = rays.iter().find(|r| r.len() != n) {
            return Err(JsonError::Invalid(format!("ray of length {} in ambient dimension {n}", r.len())));
        }
        let cones = self.cones.iter().map(|c| indices(c, "ray index")).collect::<Result<_, _>>()?;
        Ok(Fan::unchecked(n, rays, cones)?)
    }
}

impl TryFrom<&FanDoc> for Fan {
    type Error = JsonError;
    fn try_from(d: &FanDoc) -> Result<Self, JsonError> {
        let f = d.to_unchecked()?;
        match f.issues().into_iter().next() {
            Some(e) => Err(e.into()),
            None => Ok(f),
        }
    }
}

impl From<&StratifiedCycle> for StratifiedDoc {
    fn from(s: &StratifiedCycle) -> Self {
        StratifiedDoc {
            components: s
                .components
                .iter()
                .map(|(tau, c)| StratumDoc { tau: tau.iter().map(|&i| Count(i as i64)).collect(), cycle: c.into() })
                .collect(),
        }
    }
}

impl TryFrom<&StratifiedDoc> for StratifiedCycle {
    type Error = JsonError;
    fn try_from(d: &StratifiedDoc) -> Result<Self, JsonError> {
        let mut out = StratifiedCycle::default();
        for c in &d.components {
            let mut tau = indices(&c.tau, "ray index")?;
            tau.sort_unstable();
            out.add(tau, TropicalCycle::try_from(&c.cycle)?)?;
        }
        Ok(out)
    }
}

impl From<&TropicalPolynomial> for PolynomialDoc {
    fn from(f: &TropicalPolynomial) -> Self {
        PolynomialDoc {
            ambient: Count(f.ambient_dim() as i64),
            terms: f
                .terms()
                .iter()
                .map(|(e, v)| TermDoc { exp: e.iter().map(|&x| ExactInt(Int::from(x))).collect(), val: Exact(v.clone()) })
                .collect(),
        }
    }
}

impl TryFrom<&PolynomialDoc> for TropicalPolynomial {
    type Error = JsonError;
    fn try_from(d: &PolynomialDoc) -> Result<Self, JsonError> {
        let terms = d
            .terms
            .iter()
            .map(|t| {
                let exp = t
                    .exp
                    .iter()
                    .map(|x| i64::try_from(&x.0).map_err(|_| JsonError::Invalid("exponent out of range".into())))
                    .collect::<Result<Vec<i64>, _>>()?;
                Ok((exp, t.val.0.clone()))
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(TropicalPolynomial::new(d.ambient.index("ambient")?, terms)?)
    }
}

impl From<&MinkowskiWeight> for MinkowskiDoc {
    fn from(w: &MinkowskiWeight) -> Self {
        MinkowskiDoc {
            fan: w.fan().into(),
            codim: Count(w.codim() as i64),
            values: w
                .values()
                .iter()
                .map(|(c, v)| WeightValueDoc { cone: c.iter().map(|&i| Count(i as i64)).collect(), w: Count(*v) })
                .collect(),
        }
    }
}

impl TryFrom<&MinkowskiDoc> for MinkowskiWeight {
    type Error = JsonError;
    fn try_from(d: &MinkowskiDoc) -> Result<Self, JsonError> {
        let fan = Fan::try_from(&d.fan)?;
        let mut values = BTreeMap::new();
        for v in &d.values {
            *values.entry(indices(&v.cone, "ray index")?).or_insert(0) += v.w.0;
        }
        Ok(MinkowskiWeight::new(fan, d.codim.index("codim")?, values)?)
    }
}

/// Canonical pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("values serialize");
    s.push('\n');
    s
}

fn sort_keys(v: serde_json::Value) -> serde_json::Value {
    use serde_json::Value;
    match v {
        Value::Object(m) => {
            let sorted: BTreeMap<String, Value> = m.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

pub fn parse_doc<T: DeserializeOwned>(text: &str) -> Result<T, JsonError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_cycle(text: &str) -> Result<TropicalCycle, JsonError> {
    TropicalCycle::try_from(&parse_doc::<CycleDoc>(text)?)
}

pub fn parse_fan(text: &str) -> Result<Fan, JsonError> {
    Fan::try_from(&parse_doc::<FanDoc>(text)?)
}

pub fn parse_polyhedron(text: &str) -> Result<Polyhedron, JsonError> {
    Polyhedron::try_from(&parse_doc::<PolyhedronDoc>(text)?)
}

pub fn parse_polynomial(text: &str) -> Result<TropicalPolynomial, JsonError> {
    TropicalPolynomial::try_from(&parse_doc::<PolynomialDoc>(text)?)
}

pub fn parse_minkowski(text: &str) -> Result<MinkowskiWeight, JsonError> {
    MinkowskiWeight::try_from(&parse_doc::<MinkowskiDoc>(text)?)
}

pub fn parse_stratified(text: &str) -> Result<StratifiedCycle, JsonError> {
    StratifiedCycle::try_from(&parse_doc::<StratifiedDoc>(text)?)
}

pub fn cycle_to_string(c: &TropicalCycle) -> String {
    to_canonical_string(&CycleDoc::from(c))
}

pub fn fan_to_string(f: &Fan) -> String {
    to_canonical_string(&FanDoc::from(f))
}
