//! JSON import and export.
//!
//! Vector files carry the rank `d`, the ground set as `"n"` or `"labels"`,
//! and one payload: `"support"` (bases as label lists), `"values"`
//! (tropical, `"p/q"` or `"inf"`), `"signs"` or `"coords"` (signed entries,
//! `{"sign": 1, "val": "3/2"}` or `{"q": "-7/4"}`). Payload arrays follow the
//! lexicographic basis order.

use std::collections::BTreeMap;

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complexes::{f_vector, FinitePoset, SimplicialComplex};
use crate::error::{Error, Result};
use crate::ground::{BasisId, GroundSet, PluckerMap, Sign};
use crate::matroid::{MatroidVector, RawMatroid};
use crate::operad::{Affine, ConvexCombination, InjectionVertex};
use crate::oriented::SignVector;
use crate::orval::{OrientedTropicalVector, RationalVector, SignedTropical};
use crate::sums_sliding::{Injection, InjectionFamily};
use crate::valuated::{
    format_rational, parse_rational, DressianCell, InitialDatum, TropicalValue, TropicalVector,
};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u128>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<u128>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Coord>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
}

/// A parsed vector file.
#[derive(Clone, Debug, PartialEq)]
pub enum Vector {
    Matroid(RawMatroid),
    Tropical(TropicalVector),
    Signs(SignVector),
    Rational(RationalVector),
    SignedTropical(OrientedTropicalVector),
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

impl VectorFile {
    fn ground(&self) -> Result<GroundSet> {
        match (&self.n, &self.labels) {
            (Some(n), None) => GroundSet::range(*n),
            (None, Some(l)) => GroundSet::from_labels(l.clone()),
            (Some(n), Some(l)) if *n == l.len() => GroundSet::from_labels(l.clone()),
            (Some(_), Some(_)) => Err(parse_err("\"n\" disagrees with \"labels\"")),
            (None, None) => Err(parse_err("missing ground set: give \"n\" or \"labels\"")),
        }
    }

    fn header(ground: &GroundSet, d: usize) -> Self {
        let mut f = VectorFile {
            d,
            ..Default::default()
        };
        if ground.is_canonical() {
            f.n = Some(ground.len());
        } else {
            f.labels = Some(ground.labels().to_vec());
        }
        f
    }

    pub fn parse(&self) -> Result<Vector> {
        let g = self.ground()?;
        let payloads = [
            self.support.is_some(),
            self.values.is_some(),
            self.signs.is_some(),
            self.coords.is_some(),
        ];
        if payloads.iter().filter(|&&p| p).count() != 1 {
            return Err(parse_err(
                "exactly one of \"support\", \"values\", \"signs\", \"coords\" is required",
            ));
        }
        if let Some(support) = &self.support {
            let mut bases = Vec::with_capacity(support.len());
            for b in support {
                let idx = b
                    .iter()
                    .map(|&l| {
                        g.index_of(l)
                            .ok_or_else(|| parse_err(format!("label {l} is not in the ground set")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if idx.len() != self.d {
                    return Err(parse_err(format!(
                        "basis {b:?} does not have {} elements",
                        self.d
                    )));
                }
                bases.push(BasisId::new(idx)?);
            }
            return Ok(Vector::Matroid(PluckerMap::from_fn(g, self.d, |b| {
                bases.contains(b)
            })?));
        }
        if let Some(values) = &self.values {
            let vals = values
                .iter()
                .map(|s| s.parse::<TropicalValue>())
                .collect::<Result<Vec<_>>>()?;
            return Ok(Vector::Tropical(PluckerMap::new(g, self.d, vals)?));
        }
        if let Some(signs) = &self.signs {
            let s = signs
                .iter()
                .map(|&x| match x {
                    -1 | 0 | 1 => Ok(x as Sign),
                    _ => Err(parse_err(format!("sign {x} is not in {{-1, 0, 1}}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Vector::Signs(PluckerMap::new(g, self.d, s)?));
        }
        let coords = self.coords.as_ref().expect("one payload");
        let rational = coords.iter().all(|c| c.q.is_some());
        if rational {
            let qs = coords
                .iter()
                .map(|c| {
                    let q = parse_rational(c.q.as_deref().expect("checked"))?;
                    if c.val.is_some() {
                        return Err(parse_err("a coordinate has both \"q\" and \"val\""));
                    }
                    match c.sign {
                        Some(s) if s != sign_of(&q) => Err(parse_err(format!(
                            "sign {s} disagrees with q = {}",
                            format_rational(&q)
                        ))),
                        _ => Ok(q),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Vector::Rational(PluckerMap::new(g, self.d, qs)?));
        }
        let entries = coords
            .iter()
            .map(|c| {
                if c.q.is_some() {
                    return Err(parse_err("\"q\" and \"val\" coordinates cannot be mixed"));
                }
                let sign = c
                    .sign
                    .ok_or_else(|| parse_err("coordinate without \"sign\""))?;
                let sign: Sign = match sign {
                    -1 | 0 | 1 => sign as Sign,
                    _ => return Err(parse_err(format!("sign {sign} is not in {{-1, 0, 1}}"))),
                };
                let val = match &c.val {
                    Some(v) => v.parse::<TropicalValue>()?,
                    None if sign == 0 => TropicalValue::Infinite,
                    None => return Err(parse_err("nonzero coordinate without \"val\"")),
                };
                SignedTropical::new(sign, val)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Vector::SignedTropical(PluckerMap::new(g, self.d, entries)?))
    }
}

fn sign_of(q: &BigRational) -> i64 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub fn parse_vector(text: &str) -> Result<Vector> {
    from_json::<VectorFile>(text)?.parse()
}

pub fn matroid_file(m: &MatroidVector) -> VectorFile {
    let mut f = VectorFile::header(m.ground(), m.rank());
    f.support = Some(
        m.support()
            .iter()
            .map(|b| b.members().iter().map(|&e| m.ground().label(e)).collect())
            .collect(),
    );
    f
}

pub fn tropical_file(phi: &TropicalVector) -> VectorFile {
    let mut f = VectorFile::header(phi.ground(), phi.rank());
    f.values = Some(phi.values().iter().map(|v| v.to_string()).collect());
    f
}

pub fn signs_file(chi: &SignVector) -> VectorFile {
    let mut f = VectorFile::header(chi.ground(), chi.rank());
    f.signs = Some(chi.values().iter().map(|&s| s as i64).collect());
    f
}

pub fn rational_file(phi: &RationalVector) -> VectorFile {
    let mut f = VectorFile::header(phi.ground(), phi.rank());
    f.coords = Some(
        phi.values()
            .iter()
            .map(|q| Coord {
                sign: None,
                val: None,
                q: Some(format_rational(q)),
            })
            .collect(),
    );
    f
}

pub fn signed_tropical_file(phi: &OrientedTropicalVector) -> VectorFile {
    let mut f = VectorFile::header(phi.ground(), phi.rank());
    f.coords = Some(
        phi.values()
            .iter()
            .map(|c| Coord {
                sign: Some(c.sign() as i64),
                val: (c.sign() != 0).then(|| c.val().to_string()),
                q: None,
            })
            .collect(),
    );
    f
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumEntry {
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
    #[serde(rename = "I")]
    pub i: Vec<usize>,
}

pub fn datum_entries(datum: &InitialDatum) -> Vec<DatumEntry> {
    datum
        .entries()
        .map(|(pair, i)| DatumEntry {
            x: pair.x.members().to_vec(),
            y: pair.y.members().to_vec(),
            i,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CellFile {
    pub matroid: VectorFile,
    pub initial_datum: Vec<DatumEntry>,
    pub witness: VectorFile,
}

pub fn cell_file(cell: &DressianCell) -> CellFile {
    CellFile {
        matroid: matroid_file(&cell.id.matroid),
        initial_datum: datum_entries(&cell.id.datum),
        witness: tropical_file(&cell.witness),
    }
}

/// Elements and the pairs `a ≤ b` (any generating set; the reflexive
/// transitive closure is taken on import).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub relations: Vec<(usize, usize)>,
}

pub fn poset_file(p: &FinitePoset) -> PosetFile {
    PosetFile {
        elements: p.names().to_vec(),
        relations: p.strict_relations(),
    }
}

impl PosetFile {
    pub fn parse(&self) -> Result<FinitePoset> {
        let n = self.elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in &self.relations {
            if a >= n || b >= n {
                return Err(Error::OutsideGround {
                    element: a.max(b),
                    size: n,
                });
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if leq[a][k] {
                    for b in 0..n {
                        if leq[k][b] {
                            leq[a][b] = true;
                        }
                    }
                }
            }
        }
        FinitePoset::new(self.elements.clone(), leq)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub num_vertices: usize,
    pub facets: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_vector: Option<Vec<usize>>,
}

pub fn complex_file(k: &SimplicialComplex) -> ComplexFile {
    ComplexFile {
        num_vertices: k.num_vertices,
        facets: k.facets(),
        f_vector: Some(f_vector(k)),
    }
}

impl ComplexFile {
    pub fn parse(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets(self.num_vertices, &self.facets)
    }
}

/// Injection families: `[{"map": {"0": 5, "1": 7}}, ...]`, validated.
pub fn parse_family(text: &str) -> Result<InjectionFamily> {
    let raw: Vec<Injection> = from_json(text)?;
    let maps = raw
        .into_iter()
        .map(|m| Injection::new(m.map))
        .collect::<Result<Vec<_>>>()?;
    InjectionFamily::new(maps)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub weight: String,
    pub vertex: Vec<Affine>,
}

/// `{"arity": 2, "terms": [{"weight": "1/2", "vertex": [{"scale": 4, "offset": 1}, ...]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    pub arity: usize,
    pub terms: Vec<TermFile>,
}

pub fn point_file(p: &ConvexCombination) -> PointFile {
    PointFile {
        arity: p.arity(),
        terms: p
            .terms()
            .iter()
            .map(|(w, v)| TermFile {
                weight: format_rational(w),
                vertex: v.components().to_vec(),
            })
            .collect(),
    }
}

impl PointFile {
    pub fn parse(&self) -> Result<ConvexCombination> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let comps = t
                    .vertex
                    .iter()
                    .map(|a| Affine::new(a.scale, a.offset))
                    .collect::<Result<Vec<_>>>()?;
                Ok((parse_rational(&t.weight)?, InjectionVertex::new(comps)?))
            })
            .collect::<Result<Vec<_>>>()?;
        ConvexCombination::new(self.arity, terms)
    }
}

/// Parses `"1/3,2/3"`.
pub fn parse_weights(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(|w| parse_rational(w.trim())).collect()
}

/// Parses `"0,0,1"`.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|w| {
            w.trim()
                .parse::<usize>()
                .map_err(|e| parse_err(format!("bad index {w:?}: {e}")))
        })
        .collect()
}

/// Rational form of a signed vector file, for the commands that need it.
pub fn as_rational(v: Vector) -> Result<RationalVector> {
    match v {
        Vector::Rational(r) => Ok(r),
        Vector::Signs(s) => Ok(s.map(|&x| BigRational::from_integer((x as i64).into()))),
        _ => Err(parse_err(
            "expected rational coordinates (\"coords\" with \"q\") or \"signs\"",
        )),
    }
}

/// Map from labels to values, for tests and diagnostics.
pub fn sparse_labels<V: Clone>(
    phi: &PluckerMap<V>,
    keep: impl Fn(&V) -> bool,
) -> BTreeMap<Vec<u128>, V> {
    phi.iter()
        .filter(|(_, v)| keep(v))
        .map(|(b, v)| {
            (
                b.members().iter().map(|&e| phi.ground().label(e)).collect(),
                v.clone(),
            )
        })
        .collect()
}
