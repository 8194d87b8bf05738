//! Divisor combinatorics on a fan: shifted exponents, the polynomial
//! `G_B(σ)`, normal-crossings witnesses, the strata `θ_B(ε)`, and the
//! conormal component labels with their direct-image support bound.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{ser_big_rows, ser_big_vec, to_json_vec};
use crate::fan::{edge_pairing, is_sigma_good, Cone, Edge, GenerableSet};
use crate::matrix::{IntMatrix, ThetaSubset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentTable {
    pub cone: Cone,
    /// `b⁺_{εi}`, one row per edge of the cone in order.
    #[serde(serialize_with = "ser_big_rows")]
    pub entries: Vec<Vec<BigInt>>,
}

fn t_name(d: usize, k: usize) -> String {
    if d == 1 {
        "t".into()
    } else {
        format!("t{}", k + 1)
    }
}

fn push_power(s: &mut String, var: &str, e: &BigInt) {
    if e.is_zero() {
        return;
    }
    s.push('*');
    s.push_str(var);
    if !e.is_one() {
        s.push('^');
        s.push_str(&e.to_string());
    }
}

impl ExponentTable {
    /// `G_B(σ) = Σ_i X_i Π_ε t_ε^{b⁺_{εi}}`, terms by column index, `t`
    /// factors by edge order (`t` alone when `d = 1`).
    pub fn render_g(&self) -> String {
        let d = self.entries.len();
        let n = self.entries.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| {
                let mut term = format!("X{}", i + 1);
                for (k, row) in self.entries.iter().enumerate() {
                    push_power(&mut term, &t_name(d, k), &row[i]);
                }
                term
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn shifted(p: Vec<BigInt>) -> Vec<BigInt> {
    let min = p.iter().min().cloned().unwrap_or_else(BigInt::zero);
    p.into_iter().map(|x| x - &min).collect()
}

/// `b⁺_{εi} = b_{εi} − min_j b_{εj}` for every edge of `σ`.
pub fn exponent_table(b: &IntMatrix, sigma: &Cone) -> Result<ExponentTable> {
    let entries = sigma.edges().iter().map(|e| edge_pairing(b, e).map(shifted)).collect::<Result<_>>()?;
    Ok(ExponentTable { cone: sigma.clone(), entries })
}

/// The coordinate change showing `D_B(σ)` has simple normal crossings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SncWitness {
    /// 1-based columns in the simultaneous sort order.
    pub gamma: Vec<usize>,
    /// Exponent of each `t_ε` in the common factor; always `b⁺_{εγ(1)} = 0`.
    #[serde(serialize_with = "ser_big_vec")]
    pub factor_exponents: Vec<BigInt>,
    /// For `i ≥ 2`: column `γ(i)` with exponents `b⁺_{εγ(i)} − b⁺_{εγ(1)}`.
    #[serde(serialize_with = "ser_reduced")]
    pub reduced_terms: Vec<(usize, Vec<BigInt>)>,
    /// The new coordinate replacing `X_{γ(1)}`.
    pub substituted: String,
    /// Components of the total divisor in the new chart.
    pub divisors: Vec<String>,
}

impl SncWitness {
    /// Every exponent is nonnegative and the leading term has none, so the
    /// factor is a coordinate and the divisor a union of coordinate planes.
    pub fn is_coordinate_normal_crossing(&self) -> bool {
        use num_traits::Signed;
        self.factor_exponents.iter().all(Zero::is_zero)
            && self.reduced_terms.iter().all(|(_, ex)| ex.iter().all(|x| !x.is_negative()))
            && self.divisors.len() == 2 + self.factor_exponents.len()
            && self.divisors[1] == self.substituted
    }
}

fn ser_reduced<S: serde::Serializer>(terms: &[(usize, Vec<BigInt>)], s: S) -> std::result::Result<S::Ok, S::Error> {
    terms.iter().map(|(c, ex)| (c, to_json_vec(ex))).collect::<Vec<_>>().serialize(s)
}

pub fn snc_witness(b: &IntMatrix, sigma: &Cone) -> Result<SncWitness> {
    let gamma = is_sigma_good(b, sigma)?.ok_or_else(|| Error::NotGood(sigma.to_string()))?;
    let table = exponent_table(b, sigma)?;
    let lead = gamma[0] - 1;
    let factor_exponents: Vec<BigInt> = table.entries.iter().map(|row| row[lead].clone()).collect();
    let reduced_terms = gamma[1..]
        .iter()
        .map(|&c| (c, table.entries.iter().map(|row| &row[c - 1] - &row[lead]).collect()))
        .collect();
    let d = sigma.dim();
    let substituted = format!("X{}'", gamma[0]);
    let mut divisors = vec!["X0".to_string(), substituted.clone()];
    divisors.extend((0..d).map(|k| t_name(d, k)));
    Ok(SncWitness { gamma, factor_exponents, reduced_terms, substituted, divisors })
}

/// A set of edges lying in a common cone. Ordered by size, then
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EpsilonSet(Vec<Edge>);

impl EpsilonSet {
    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort();
        edges.dedup();
        EpsilonSet(edges)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn restrict(&self, sigma: &Cone) -> EpsilonSet {
        EpsilonSet(self.0.iter().filter(|e| sigma.contains(e)).cloned().collect())
    }

    pub fn is_subset_of(&self, sigma: &Cone) -> bool {
        self.0.iter().all(|e| sigma.contains(e))
    }
}

impl Ord for EpsilonSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for EpsilonSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EpsilonSet {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Columns attaining the minimal pairing on every edge of `ε`; all columns
/// when `ε` is empty.
pub fn theta_of(b: &IntMatrix, eps: &EpsilonSet) -> Result<ThetaSubset> {
    let mut theta = ThetaSubset::full(b.ncols());
    for e in eps.edges() {
        let p = edge_pairing(b, e)?;
        let min = p.iter().min().expect("n ≥ 1");
        let argmin = (1..=b.ncols()).filter(|&j| &p[j - 1] == min);
        theta = theta.intersection(&ThetaSubset::new(argmin, b.ncols())?);
    }
    Ok(theta)
}

/// `𝓔(Σ)`: every subset of some cone's edge set, including `∅`.
pub fn enumerate_epsilon(fan: &GenerableSet) -> Vec<EpsilonSet> {
    let mut all = BTreeSet::new();
    for c in fan.cones() {
        let d = c.dim();
        for mask in 0..1u64 << d {
            let edges = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| c.edges()[i].clone()).collect();
            all.insert(EpsilonSet(edges));
        }
    }
    all.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelKind {
    StratumPlane,
    StratumInfinity,
    Divisor,
    DivisorInfinity,
}

impl LabelKind {
    pub const ALL: [LabelKind; 4] =
        [LabelKind::StratumPlane, LabelKind::StratumInfinity, LabelKind::Divisor, LabelKind::DivisorInfinity];
}

/// One component family of `N_B(Σ)`. `provenance` lists the cones
/// containing `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConormalLabel {
    pub kind: LabelKind,
    pub epsilon: EpsilonSet,
    pub theta: ThetaSubset,
    pub provenance: Vec<Cone>,
}

fn require_good(b: &IntMatrix, fan: &GenerableSet) -> Result<()> {
    for c in fan.cones() {
        if is_sigma_good(b, c)?.is_none() {
            return Err(Error::NotGood(c.to_string()));
        }
    }
    Ok(())
}

/// The four label families for each `ε ∈ 𝓔(Σ)`; `B` must be `Σ`-good.
pub fn n_components(b: &IntMatrix, fan: &GenerableSet) -> Result<Vec<ConormalLabel>> {
    require_good(b, fan)?;
    let mut out = Vec::new();
    for eps in enumerate_epsilon(fan) {
        let theta = theta_of(b, &eps)?;
        let provenance: Vec<Cone> = fan.cones().iter().filter(|c| eps.is_subset_of(c)).cloned().collect();
        for kind in LabelKind::ALL {
            out.push(ConormalLabel { kind, epsilon: eps.clone(), theta: theta.clone(), provenance: provenance.clone() });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportKind {
    ZeroSection,
    InfinityConormal,
    ResolvedSupport,
    ResolvedSupportInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Provenance {
    pub epsilon: EpsilonSet,
    pub cone: Cone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportLabel {
    pub kind: SupportKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaSubset>,
    pub provenance: Vec<Provenance>,
}

/// The support bound for the pushforward of `N_B(Σ)`: the zero section, the
/// conormal of infinity, and `S̄`, `S^∞` for each `θ_B(ε ∩ E(σ))` with
/// `σ` meeting `ε`. The empty `ε` is paired with every cone.
pub fn direct_image_support(b: &IntMatrix, fan: &GenerableSet) -> Result<Vec<SupportLabel>> {
    require_good(b, fan)?;
    let mut strata: BTreeMap<ThetaSubset, Vec<Provenance>> = BTreeMap::new();
    for eps in enumerate_epsilon(fan) {
        for c in fan.cones() {
            let local = eps.restrict(c);
            if !eps.is_empty() && local.is_empty() {
                continue;
            }
            let theta = theta_of(b, &local)?;
            strata.entry(theta).or_default().push(Provenance { epsilon: eps.clone(), cone: c.clone() });
        }
    }
    let mut out = vec![
        SupportLabel { kind: SupportKind::ZeroSection, theta: None, provenance: Vec::new() },
        SupportLabel { kind: SupportKind::InfinityConormal, theta: None, provenance: Vec::new() },
    ];
    for (theta, prov) in strata {
        for kind in [SupportKind::ResolvedSupport, SupportKind::ResolvedSupportInfinity] {
            out.push(SupportLabel { kind, theta: Some(theta.clone()), provenance: prov.clone() });
        }
    }
    out.sort_by(|x, y| x.kind.cmp(&y.kind).then_with(|| x.theta.cmp(&y.theta)));
    Ok(out)
}
