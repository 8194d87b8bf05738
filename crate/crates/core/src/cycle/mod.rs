//! Characteristic cycles: the umbrella index set, assembly of the cycle from
//! it, the support-level route through a resolution, and specialization.

mod cc;
mod umbrella;

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, Prime, ThetaSubset};

pub use cc::{cc_gkz, cc_via_resolution, dimension_excess, CcReport, Reduction, ResolutionCycle};
pub use umbrella::{is_umbrella_member, umbrella};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    ZeroSection,
    InfinityConormal,
    UmbrellaStratum,
    ResolvedSupport,
    ResolvedSupportInfinity,
}

impl ComponentKind {
    fn has_theta(self) -> bool {
        !matches!(self, ComponentKind::ZeroSection | ComponentKind::InfinityConormal)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    #[serde(rename = "char0")]
    Char0,
    #[serde(rename = "charp")]
    CharP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Integer(u64),
    /// `m(θ)`, left unevaluated.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleComponent {
    pub kind: ComponentKind,
    pub theta: Option<ThetaSubset>,
    pub mult: Multiplicity,
    pub field: FieldTag,
}

impl CycleComponent {
    pub fn new(kind: ComponentKind, theta: Option<ThetaSubset>, mult: Multiplicity, field: FieldTag) -> Result<Self> {
        if kind.has_theta() != theta.is_some() {
            return Err(Error::InvalidMultiplicities(format!("{kind:?} with theta {theta:?}")));
        }
        Ok(CycleComponent { kind, theta, mult, field })
    }

    /// `m({1,2})`; `m` alone when there is no `θ`.
    pub fn symbol(&self) -> String {
        match &self.theta {
            Some(t) => format!("m({t})"),
            None => "m".into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    kind: ComponentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<ThetaSubset>,
    mult: RawMult,
    field: FieldTag,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawMult {
    Integer(u64),
    Symbol(String),
}

impl Serialize for CycleComponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mult = match self.mult {
            Multiplicity::Integer(m) => RawMult::Integer(m),
            Multiplicity::Symbolic => RawMult::Symbol(self.symbol()),
        };
        RawComponent { kind: self.kind, theta: self.theta.clone(), mult, field: self.field }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycleComponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawComponent::deserialize(d)?;
        let mut c = CycleComponent::new(raw.kind, raw.theta, Multiplicity::Symbolic, raw.field).map_err(D::Error::custom)?;
        match raw.mult {
            RawMult::Integer(m) => c.mult = Multiplicity::Integer(m),
            RawMult::Symbol(s) if s == c.symbol() => {}
            RawMult::Symbol(s) => return Err(D::Error::custom(format!("symbol {s} does not match {}", c.symbol()))),
        }
        Ok(c)
    }
}

impl fmt::Display for CycleComponent {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let mult = match self.mult {
            Multiplicity::Integer(m) => m.to_string(),
            Multiplicity::Symbolic => self.symbol(),
        };
        let name = match (self.kind, &self.theta) {
            (ComponentKind::ZeroSection, _) => "zero-section".to_string(),
            (ComponentKind::InfinityConormal, _) => "infinity-conormal".to_string(),
            (ComponentKind::UmbrellaStratum, Some(t)) => format!("C^{t}"),
            (ComponentKind::ResolvedSupport, Some(t)) => format!("S̄{t}"),
            (ComponentKind::ResolvedSupportInfinity, Some(t)) => format!("S^∞{t}"),
            _ => unreachable!("validated on construction"),
        };
        let tag = match self.field {
            FieldTag::Char0 => "char0",
            FieldTag::CharP => "charp",
        };
        write!(f, "{mult} [{name}] ({tag})")
    }
}

/// Canonical: sorted by kind then `θ`, one entry per `(kind, θ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub sign_exp: usize,
    components: Vec<CycleComponent>,
}

impl Cycle {
    /// Merges repeated `(kind, θ)`: integers add, anything symbolic stays
    /// symbolic.
    pub fn new(sign_exp: usize, components: Vec<CycleComponent>) -> Self {
        let mut merged: BTreeMap<(ComponentKind, Option<ThetaSubset>), CycleComponent> = BTreeMap::new();
        for c in components {
            match merged.get_mut(&(c.kind, c.theta.clone())) {
                None => {
                    merged.insert((c.kind, c.theta.clone()), c);
                }
                Some(old) => {
                    old.mult = match (old.mult, c.mult) {
                        (Multiplicity::Integer(a), Multiplicity::Integer(b)) => Multiplicity::Integer(a + b),
                        _ => Multiplicity::Symbolic,
                    };
                }
            }
        }
        Cycle { sign_exp, components: merged.into_values().collect() }
    }

    pub fn components(&self) -> &[CycleComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn thetas(&self) -> Vec<ThetaSubset> {
        let mut v: Vec<ThetaSubset> = self.components.iter().filter_map(|c| c.theta.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            sign_exp: usize,
            components: Vec<CycleComponent>,
        }
        let raw = Raw::deserialize(d)?;
        Ok(Cycle::new(raw.sign_exp, raw.components))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(f, "(-1)^{} * (", self.sign_exp)?;
        for c in &self.components {
            writeln!(f, "  + {c}")?;
        }
        write!(f, ")")
    }
}

/// Integer multiplicities for some `θ`; the rest stay symbolic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityTable(BTreeMap<ThetaSubset, u64>);

impl MultiplicityTable {
    pub fn new(entries: impl IntoIterator<Item = (ThetaSubset, u64)>) -> Self {
        MultiplicityTable(entries.into_iter().collect())
    }

    pub fn get(&self, theta: &ThetaSubset) -> Option<u64> {
        self.0.get(theta).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ThetaSubset, u64)> {
        self.0.iter().map(|(t, &m)| (t, m))
    }

    /// Every key must be a member of `allowed`.
    pub fn validate(&self, allowed: &[ThetaSubset]) -> Result<()> {
        match self.0.keys().find(|t| !allowed.contains(t)) {
            Some(t) => Err(Error::InvalidMultiplicities(format!("{t} is not an umbrella member"))),
            None => Ok(()),
        }
    }
}

/// JSON: `[{"theta": [1,2], "mult": 3}, …]`.
impl Serialize for MultiplicityTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|(theta, &mult)| RawEntry { theta: theta.clone(), mult }).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiplicityTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<RawEntry>::deserialize(d)?;
        let mut table = BTreeMap::new();
        for e in entries {
            if table.insert(e.theta.clone(), e.mult).is_some() {
                return Err(D::Error::custom(format!("{} listed twice", e.theta)));
            }
        }
        Ok(MultiplicityTable(table))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    theta: ThetaSubset,
    mult: u64,
}

/// Relabels a characteristic-zero cycle as its special fiber.
pub fn specialize(c: &Cycle) -> Result<Cycle> {
    let p = c.components.iter().filter(|x| x.field == FieldTag::CharP).count();
    if p > 0 && p < c.components.len() {
        return Err(Error::MixedFieldTags);
    }
    if p > 0 {
        return Err(Error::AlreadySpecialized);
    }
    let components = c.components.iter().map(|x| CycleComponent { field: FieldTag::CharP, ..x.clone() }).collect();
    Ok(Cycle { sign_exp: c.sign_exp, components })
}

/// A column subset whose local piece is too large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionExcess {
    pub theta: ThetaSubset,
    pub chart: usize,
    pub dim: usize,
    pub bound: usize,
}

/// `A` fails `p`-nondegeneracy and no reduction applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NondegeneracyFailure {
    pub matrix: IntMatrix,
    pub prime: Prime,
    pub failing: Vec<ThetaSubset>,
    pub excess: Vec<DimensionExcess>,
}

impl fmt::Display for NondegeneracyFailure {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{} is not {}-nondegenerate; failing column subsets:", self.matrix, self.prime.get())?;
        for (i, t) in self.failing.iter().enumerate() {
            write!(f, "{}{t}", if i == 0 { " " } else { ", " })?;
        }
        for e in &self.excess {
            write!(f, "; dim S_{}(A,{}) = {} > {}", e.chart, e.theta, e.dim, e.bound)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(v: &[usize]) -> ThetaSubset {
        ThetaSubset::new(v.iter().copied(), 3).unwrap()
    }

    fn stratum(t: &[usize], mult: Multiplicity) -> CycleComponent {
        CycleComponent::new(ComponentKind::UmbrellaStratum, Some(th(t)), mult, FieldTag::Char0).unwrap()
    }

    #[test]
    fn canonical_merge() {
        let c = Cycle::new(
            4,
            vec![
                stratum(&[3], Multiplicity::Integer(2)),
                stratum(&[1, 2], Multiplicity::Symbolic),
                stratum(&[3], Multiplicity::Integer(5)),
            ],
        );
        assert_eq!(c.len(), 2);
        assert_eq!(c.components()[0].mult, Multiplicity::Integer(7));
        assert_eq!(c.thetas(), vec![th(&[3]), th(&[1, 2])]);
    }

    #[test]
    fn json_round_trip() {
        let c = Cycle::new(
            0,
            vec![
                stratum(&[], Multiplicity::Symbolic),
                stratum(&[1, 2], Multiplicity::Integer(3)),
                CycleComponent::new(ComponentKind::ZeroSection, None, Multiplicity::Symbolic, FieldTag::Char0).unwrap(),
            ],
        );
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains(r#""mult":"m(∅)""#), "{s}");
        assert!(s.contains(r#""mult":3"#));
        let back: Cycle = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        let wrong = s.replace("m(∅)", "m({1})");
        assert!(serde_json::from_str::<Cycle>(&wrong).is_err());
    }

    #[test]
    fn specialization() {
        let empty = Cycle::new(0, vec![]);
        assert_eq!(specialize(&empty).unwrap(), empty);
        let c = Cycle::new(0, vec![stratum(&[1], Multiplicity::Symbolic)]);
        let s = specialize(&c).unwrap();
        assert_eq!(s.components()[0].field, FieldTag::CharP);
        assert_eq!(specialize(&s), Err(Error::AlreadySpecialized));
        let mixed = Cycle::new(0, vec![s.components()[0].clone(), stratum(&[2], Multiplicity::Symbolic)]);
        assert_eq!(specialize(&mixed), Err(Error::MixedFieldTags));
    }

    #[test]
    fn multiplicity_table() {
        let t: MultiplicityTable = serde_json::from_str(r#"[{"theta":[1,2],"mult":2}]"#).unwrap();
        assert_eq!(t.get(&th(&[1, 2])), Some(2));
        assert!(t.validate(&[th(&[1, 2])]).is_ok());
        assert!(t.validate(&[th(&[3])]).is_err());
        assert!(serde_json::from_str::<MultiplicityTable>(r#"[{"theta":[1],"mult":1},{"theta":[1],"mult":2}]"#).is_err());
    }
}
