//! Nonsingular simplicial fans, standard blow-ups, and the resolution of a
//! matrix into one that is good on every cone.

mod blowup;
mod check;
mod resolve;
mod workspace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::{from_json_vec, to_json_vec, write_vec, JsonInt};
use crate::lp::{feasible_point, Constraint, Relation};
use crate::matrix::{unimodular_inverse, IntMatrix};

pub use check::CompleteFanCheck;
pub use blowup::{replay_blowups, standard_blowup, BlowupRecord};
pub use resolve::{
    b_good_blowup_step, b_good_blowup_step_with, edge_pairing, is_sigma_good, mu_nu, resolve,
    resolve_with, sigma_bad, MuNu, Resolution, StepLog, TieBreak,
};

/// A primitive nonzero integer vector spanning a ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(Vec<BigInt>);

impl Edge {
    pub fn new(v: Vec<BigInt>) -> Result<Edge> {
        if v.is_empty() {
            return Err(Error::InvalidEdge("empty vector".into()));
        }
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(Error::InvalidEdge("zero vector".into()));
        }
        if !g.is_one() {
            return Err(Error::InvalidEdge(format!("{} is not primitive", Edge(v))));
        }
        Ok(Edge(v))
    }

    pub fn from_ints<T: Into<BigInt>>(v: impl IntoIterator<Item = T>) -> Result<Edge> {
        Edge::new(v.into_iter().map(Into::into).collect())
    }

    pub fn v(&self) -> &[BigInt] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, u: &[BigInt]) -> BigInt {
        self.0.iter().zip(u).map(|(a, b)| a * b).sum()
    }

    /// `self + other`; primitive whenever both lie in one nonsingular cone.
    pub fn sum(&self, other: &Edge) -> Result<Edge> {
        Edge::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write_vec(f, &self.0)
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json_vec(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Edge::new(from_json_vec(Vec::<JsonInt>::deserialize(d)?)).map_err(serde::de::Error::custom)
    }
}

/// A `d`-dimensional nonsingular simplicial cone. Edges are kept sorted, so
/// two cones are equal exactly when they have the same edge set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    edges: Vec<Edge>,
}

impl Cone {
    pub fn new(mut edges: Vec<Edge>) -> Result<Cone> {
        let d = edges.first().map(Edge::dim).ok_or_else(|| Error::InvalidCone("no edges".into()))?;
        if edges.len() != d || edges.iter().any(|e| e.dim() != d) {
            return Err(Error::InvalidCone(format!("need {d} edges of dimension {d}")));
        }
        edges.sort();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCone("repeated edge".into()));
        }
        let cone = Cone { edges };
        let det = cone.matrix().det()?;
        if !det.abs().is_one() {
            return Err(Error::InvalidCone(format!("{cone} has |det| = {}", det.abs())));
        }
        Ok(cone)
    }

    pub fn from_ints<T: Into<BigInt>>(edges: impl IntoIterator<Item = impl IntoIterator<Item = T>>) -> Result<Cone> {
        Cone::new(edges.into_iter().map(Edge::from_ints).collect::<Result<_>>()?)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Edge vectors stacked as rows.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.edges.iter().map(|e| e.v().to_vec())).expect("nonempty")
    }

    /// `u_ε` for each edge in order: the rows of `(V⁻¹)ᵀ`, so `⟨v_ε', u_ε⟩ = δ`.
    pub fn dual_basis(&self) -> Vec<Vec<BigInt>> {
        let inv = unimodular_inverse(&self.matrix()).expect("nonsingular cone");
        inv.transpose().to_rows()
    }

    /// The cone with `old` swapped for `new`.
    pub fn replace(&self, old: &Edge, new: &Edge) -> Result<Cone> {
        Cone::new(self.edges.iter().map(|e| if e == old { new.clone() } else { e.clone() }).collect())
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "cone(")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.edges.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Cone::new(Vec::<Edge>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A finite set of nonsingular `d`-cones, sorted and duplicate free.
///
/// Construction checks dimensions only; [`GenerableSet::is_generable`]
/// checks that the faces form a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenerableSet {
    d: usize,
    cones: Vec<Cone>,
}

impl GenerableSet {
    pub fn new(d: usize, mut cones: Vec<Cone>) -> Result<GenerableSet> {
        if d == 0 {
            return Err(Error::InvalidFan("dimension must be positive".into()));
        }
        if let Some(c) = cones.iter().find(|c| c.dim() != d) {
            return Err(Error::InvalidFan(format!("{c} is not {d}-dimensional")));
        }
        cones.sort();
        cones.dedup();
        Ok(GenerableSet { d, cones })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// `E(Σ)`.
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.cones.iter().flat_map(|c| c.edges.iter().cloned()).collect()
    }

    /// `Σ(ε)`: the cones having `e` as an edge.
    pub fn star<'a>(&'a self, e: &'a Edge) -> impl Iterator<Item = &'a Cone> + 'a {
        self.cones.iter().filter(move |c| c.contains(e))
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.cones.binary_search(c).is_ok()
    }

    pub fn is_generable(&self) -> bool {
        CompleteFanCheck::new(self).is_some() || is_generable(&self.cones)
    }

    /// Every facet lies in exactly two cones.
    pub fn is_complete(&self) -> bool {
        if self.cones.is_empty() {
            return false;
        }
        let mut count: BTreeMap<Vec<&Edge>, usize> = BTreeMap::new();
        for c in &self.cones {
            for skip in 0..c.dim() {
                let facet: Vec<&Edge> =
                    c.edges.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, e)| e).collect();
                *count.entry(facet).or_default() += 1;
            }
        }
        count.values().all(|&k| k == 2)
    }
}

impl Serialize for GenerableSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            d: usize,
            cones: &'a [Cone],
        }
        Raw { d: self.d, cones: &self.cones }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenerableSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            d: usize,
            cones: Vec<Cone>,
        }
        let raw = Raw::deserialize(d)?;
        GenerableSet::new(raw.d, raw.cones).map_err(serde::de::Error::custom)
    }
}

/// The `2^d` coordinate orthants.
pub fn default_complete_fan(d: usize) -> GenerableSet {
    assert!(d >= 1, "dimension must be positive");
    let cones = (0..1u64 << d)
        .map(|signs| {
            let edges = (0..d)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); d];
                    v[i] = if signs >> i & 1 == 0 { BigInt::one() } else { -BigInt::one() };
                    Edge(v)
                })
                .collect();
            Cone::new(edges).expect("orthant is nonsingular")
        })
        .collect();
    GenerableSet::new(d, cones).expect("orthants share a dimension")
}

/// True when every pairwise intersection is a common face.
pub fn is_generable(cones: &[Cone]) -> bool {
    let prepared: Vec<Prepared> = cones.iter().map(Prepared::new).collect();
    (0..prepared.len()).all(|i| (i + 1..prepared.len()).all(|j| prepared[i].meets(&prepared[j])))
}

/// True when every cone of `new` meets every other cone of `new ∪ others`
/// properly; pairs within `others` are not checked.
pub fn meets_all_properly(new: &[Cone], others: &[Cone]) -> bool {
    let fresh: Vec<Prepared> = new.iter().map(Prepared::new).collect();
    let old: Vec<Prepared> = others.iter().map(Prepared::new).collect();
    (0..fresh.len()).all(|i| {
        (i + 1..fresh.len()).all(|j| fresh[i].meets(&fresh[j])) && old.iter().all(|o| fresh[i].meets(o))
    })
}

/// Edges and duals as machine integers.
type SmallCone = (Vec<Vec<i64>>, Vec<Vec<i64>>);

struct Prepared<'a> {
    cone: &'a Cone,
    duals: Vec<Vec<BigInt>>,
    /// Present when every entry is small.
    small: Option<SmallCone>,
}

impl<'a> Prepared<'a> {
    fn new(cone: &'a Cone) -> Self {
        let duals = cone.dual_basis();
        let bound = BigInt::from(1i64 << 40);
        let fit = |v: &[BigInt]| -> Option<Vec<i64>> {
            v.iter().map(|x| if x.abs() < bound { x.to_i64() } else { None }).collect()
        };
        let small = cone
            .edges
            .iter()
            .map(|e| fit(e.v()))
            .collect::<Option<Vec<_>>>()
            .zip(duals.iter().map(|u| fit(u)).collect::<Option<Vec<_>>>());
        Prepared { cone, duals, small }
    }

    fn meets(&self, other: &Prepared) -> bool {
        if self.cone == other.cone {
            return true;
        }
        if let (Some((se, sd)), Some((oe, od))) = (&self.small, &other.small) {
            if certified(se, od) || certified(oe, sd) {
                return true;
            }
        }
        meet_properly(self.cone, other.cone, &other.duals)
    }
}

/// The certificate of `meet_properly` on machine integers: coordinates of
/// `σ`'s edges in `τ`'s basis are `⟨u_f, v⟩`; unit coordinates mark shared edges.
fn certified(sigma_edges: &[Vec<i64>], tau_duals: &[Vec<i64>]) -> bool {
    let coords: Vec<Vec<i128>> = sigma_edges
        .iter()
        .map(|e| tau_duals.iter().map(|u| u.iter().zip(e).map(|(&a, &b)| i128::from(a) * i128::from(b)).sum()).collect())
        .collect();
    let shared: Vec<bool> = coords
        .iter()
        .map(|c| c.iter().filter(|&&x| x == 1).count() == 1 && c.iter().filter(|&&x| x == 0).count() == c.len() - 1)
        .collect();
    (0..tau_duals.len()).any(|f| coords.iter().zip(&shared).all(|(c, &sh)| if sh { c[f] <= 0 } else { c[f] < 0 }))
}

/// True when `σ ∩ τ` is the cone over the shared edges.
///
/// A point of `σ` has coordinates `λ ≥ 0` in `σ`'s edges; it lies in `τ`
/// when its `τ`-coordinates are nonnegative. The intersection is too large
/// exactly when such a point has positive weight off the shared edges.
pub fn meet_properly(sigma: &Cone, tau: &Cone, tau_duals: &[Vec<BigInt>]) -> bool {
    if sigma == tau {
        return true;
    }
    let outside: Vec<usize> = (0..sigma.dim()).filter(|&i| !tau.contains(&sigma.edges[i])).collect();
    // Cheap certificate: a facet normal of τ that is nonpositive on σ and
    // negative on every edge of σ outside τ.
    for u in tau_duals {
        let vals: Vec<BigInt> = sigma.edges.iter().map(|e| e.dot(u)).collect();
        if vals.iter().all(|x| !x.is_positive()) && outside.iter().all(|&i| vals[i].is_negative()) {
            return true;
        }
    }
    let d = sigma.dim();
    let q = |x: BigInt| BigRational::from_integer(x);
    let mut cs: Vec<Constraint> = tau_duals
        .iter()
        .map(|u| Constraint::new(sigma.edges.iter().map(|e| q(e.dot(u))).collect(), Relation::Ge, BigRational::zero()))
        .collect();
    let weight = (0..d).map(|i| q(BigInt::from(u8::from(outside.contains(&i))))).collect();
    cs.push(Constraint::new(weight, Relation::Eq, BigRational::one()));
    feasible_point(d, &cs).is_none()
}
