use serde::Serialize;

use super::{
    specialize, umbrella, ComponentKind, Cycle, CycleComponent, DimensionExcess, FieldTag, Multiplicity,
    MultiplicityTable, NondegeneracyFailure,
};
use crate::conormal::dim_report;
use crate::divisor::{direct_image_support, SupportKind, SupportLabel};
use crate::error::{Error, Result};
use crate::fan::{default_complete_fan, resolve, GenerableSet, Resolution};
use crate::matrix::{
    character_transform, hat, is_non_confluent, is_p_nondegenerate, is_sub_non_confluent, p_divide_row,
    square_reduce, CharacterVector, IntMatrix, PNondegeneracy, Prime, ReductionTranscript, ThetaSubset,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Reduction {
    /// `square_reduce`, then a unimodular `standardizer` restoring the
    /// all-ones first row; `character` is the transformed character.
    Square { transcript: ReductionTranscript, standardizer: IntMatrix, character: CharacterVector },
    /// Row `row` (0-based, of the hatted matrix) divided by `p` `times` times.
    RowDivision { row: usize, times: u32, result: IntMatrix },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CcReport {
    pub cycle: Cycle,
    pub input: IntMatrix,
    pub prime: Prime,
    pub character: CharacterVector,
    /// One audit per matrix tested, the last one passing.
    pub audits: Vec<PNondegeneracy>,
    pub reductions: Vec<Reduction>,
    /// The hatted matrix the cycle was assembled from.
    pub final_matrix: IntMatrix,
    pub final_character: CharacterVector,
    pub umbrella: Vec<ThetaSubset>,
    /// Umbrella members whose local dimension exceeds `n` over `𝔽_p`.
    pub diagnostics: Vec<DimensionExcess>,
    pub twist: String,
    pub shift: usize,
    pub z: String,
}

impl CcReport {
    /// The unhatted matrix after reduction.
    pub fn reduced_b(&self) -> Option<IntMatrix> {
        self.final_matrix.rows_from(1).ok()
    }
}

/// Charts where `dim S_k(A,θ)` over `𝔽_p` exceeds `n`.
pub fn dimension_excess(a: &IntMatrix, theta: &ThetaSubset, p: Prime) -> Result<Vec<DimensionExcess>> {
    let n = a.ncols();
    let mut out = Vec::new();
    for k in 0..=n {
        let r = dim_report(a, theta, k, Some(p))?;
        let dim = r.dim_exact.unwrap_or(r.dim_upper);
        if dim > n {
            out.push(DimensionExcess { theta: theta.clone(), chart: k, dim, bound: n });
        }
    }
    Ok(out)
}

fn failure(a: &IntMatrix, audit: &PNondegeneracy) -> Result<Error> {
    let mut all = Vec::new();
    for t in &audit.failing {
        all.extend(dimension_excess(a, t, audit.prime)?);
    }
    Ok(Error::Nondegeneracy(Box::new(NondegeneracyFailure {
        matrix: a.clone(),
        prime: audit.prime,
        failing: audit.failing.clone(),
        excess: all,
    })))
}

/// Divides every nonzero row below the first by `p` as often as possible.
fn divide_rows(a: &IntMatrix, p: Prime) -> Result<(IntMatrix, Vec<Reduction>)> {
    let mut cur = a.clone();
    let mut out = Vec::new();
    for i in 1..cur.nrows() {
        if cur.is_zero_row(i) {
            continue;
        }
        let mut times = 0;
        while let Ok(next) = p_divide_row(&cur, i, p) {
            cur = next;
            times += 1;
        }
        if times > 0 {
            out.push(Reduction::RowDivision { row: i, times, result: cur.clone() });
        }
    }
    Ok((cur, out))
}

/// The characteristic cycle of the hypergeometric sheaf of `(B, χ)` over
/// `𝔽_p`, one stratum per umbrella member.
///
/// A `p`-degenerate square `B̂` is reduced and re-standardized with the
/// character carried along; a non-square one gets a single pass of row
/// division. Anything still degenerate fails with the offending subsets.
pub fn cc_gkz(b: &IntMatrix, p: Prime, chi: &CharacterVector, mult: Option<&MultiplicityTable>) -> Result<CcReport> {
    if !chi.nontrivial0() {
        return Err(Error::TrivialCharacter0);
    }
    if !is_sub_non_confluent(b) {
        return Err(Error::NotSubNonConfluent);
    }
    let mut a = hat(b);
    if chi.exponents().len() != a.nrows() {
        return Err(Error::Dimension(format!(
            "character has {} exponents, the hatted matrix {} rows",
            chi.exponents().len(),
            a.nrows()
        )));
    }
    let mut chi_cur = chi.clone();
    let mut audits = vec![is_p_nondegenerate(&a, p)];
    let mut reductions = Vec::new();
    if !audits[0].nondegenerate {
        if a.is_square() {
            let (reduced, transcript) = square_reduce(&a, p)?;
            for s in &transcript.steps {
                chi_cur = character_transform(&chi_cur, &s.p_matrix)?;
            }
            let standardizer = is_non_confluent(&reduced).ok_or(Error::ReductionLostNonConfluence)?;
            chi_cur = character_transform(&chi_cur, &standardizer)?;
            if !chi_cur.nontrivial0() {
                return Err(Error::TrivialCharacter0);
            }
            a = standardizer.mul(&reduced)?;
            reductions.push(Reduction::Square { transcript, standardizer, character: chi_cur.clone() });
        } else {
            let (divided, steps) = divide_rows(&a, p)?;
            if steps.is_empty() {
                return Err(failure(&a, &audits[0])?);
            }
            a = divided;
            reductions.extend(steps);
        }
        let audit = is_p_nondegenerate(&a, p);
        let ok = audit.nondegenerate;
        audits.push(audit);
        if !ok {
            return Err(failure(&a, audits.last().expect("pushed"))?);
        }
    }

    let members = umbrella(&a)?;
    if let Some(t) = mult {
        t.validate(&members)?;
    }
    let mut diagnostics = Vec::new();
    for t in &members {
        diagnostics.extend(dimension_excess(&a, t, p)?);
    }
    let components = members
        .iter()
        .map(|t| {
            let m = mult.and_then(|tab| tab.get(t)).map_or(Multiplicity::Symbolic, Multiplicity::Integer);
            CycleComponent::new(ComponentKind::UmbrellaStratum, Some(t.clone()), m, FieldTag::Char0)
        })
        .collect::<Result<Vec<_>>>()?;
    let cycle = specialize(&Cycle::new(0, components))?;
    Ok(CcReport {
        cycle,
        input: b.clone(),
        prime: p,
        character: chi.clone(),
        audits,
        reductions,
        final_character: chi_cur,
        umbrella: members,
        diagnostics,
        twist: "G(chi_0, psi)".into(),
        shift: b.nrows() + b.ncols(),
        z: format!("z_i = iota chi_i(zeta_{})", chi.order()),
        final_matrix: a,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionCycle {
    pub cycle: Cycle,
    pub start: GenerableSet,
    pub resolution: Resolution,
    pub support: Vec<SupportLabel>,
}

/// The support of the characteristic cycle read off a resolution of `B`,
/// signed by `(−1)^{d+n}`; multiplicities stay symbolic.
pub fn cc_via_resolution(b: &IntMatrix, start: Option<&GenerableSet>) -> Result<ResolutionCycle> {
    if !is_sub_non_confluent(b) {
        return Err(Error::NotSubNonConfluent);
    }
    let start = start.cloned().unwrap_or_else(|| default_complete_fan(b.nrows()));
    let resolution = resolve(b, &start)?;
    let support = direct_image_support(b, &resolution.fan)?;
    let components = support
        .iter()
        .map(|l| {
            let kind = match l.kind {
                SupportKind::ZeroSection => ComponentKind::ZeroSection,
                SupportKind::InfinityConormal => ComponentKind::InfinityConormal,
                SupportKind::ResolvedSupport => ComponentKind::ResolvedSupport,
                SupportKind::ResolvedSupportInfinity => ComponentKind::ResolvedSupportInfinity,
            };
            CycleComponent::new(kind, l.theta.clone(), Multiplicity::Symbolic, FieldTag::Char0)
        })
        .collect::<Result<Vec<_>>>()?;
    let cycle = Cycle::new(b.nrows() + b.ncols(), components);
    Ok(ResolutionCycle { cycle, start, resolution, support })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(row: &[i64]) -> IntMatrix {
        IntMatrix::from_rows(vec![row.to_vec()]).unwrap()
    }

    fn th(v: &[usize], n: usize) -> ThetaSubset {
        ThetaSubset::new(v.iter().copied(), n).unwrap()
    }

    fn p(x: u64) -> Prime {
        Prime::new(x).unwrap()
    }

    fn chi(e: &[u64]) -> CharacterVector {
        CharacterVector::new(6, e.to_vec()).unwrap()
    }

    #[test]
    fn nondegenerate_segment() {
        let r = cc_gkz(&b(&[0, 0, 1]), p(7), &chi(&[1, 1]), None).unwrap();
        assert!(r.reductions.is_empty());
        assert_eq!(r.cycle.thetas(), umbrella(&hat(&b(&[0, 0, 1]))).unwrap());
        assert!(r.cycle.components().iter().all(|c| c.field == FieldTag::CharP && c.mult == Multiplicity::Symbolic));
        assert!(r.diagnostics.is_empty());
        assert_eq!(r.shift, 4);
    }

    #[test]
    fn row_division_reduces() {
        let r = cc_gkz(&b(&[0, 5, 10]), p(5), &chi(&[1, 0]), None).unwrap();
        assert_eq!(r.reduced_b().unwrap(), b(&[0, 1, 2]));
        assert_eq!(r.audits.len(), 2);
        assert!(r.audits[0].failing.contains(&th(&[1, 2], 3)));
        assert!(r.audits[1].nondegenerate);
        assert_eq!(r.reductions, vec![Reduction::RowDivision { row: 1, times: 1, result: hat(&b(&[0, 1, 2])) }]);
    }

    #[test]
    fn degenerate_without_escape() {
        let err = cc_gkz(&b(&[0, 1, 5]), p(5), &chi(&[1, 0]), None).unwrap_err();
        let Error::Nondegeneracy(f) = err else { panic!("{err:?}") };
        assert_eq!(f.failing, vec![th(&[1, 3], 3)]);
        assert!(f.excess.contains(&DimensionExcess { theta: th(&[1, 3], 3), chart: 0, dim: 4, bound: 3 }));
        assert!(f.to_string().contains("dim S_0(A,{1,3}) = 4 > 3"), "{f}");
    }

    #[test]
    fn square_reduction_carries_character() {
        let m = b(&[0, 3]);
        let r = cc_gkz(&m, p(3), &chi(&[1, 2]), None).unwrap();
        let Reduction::Square { transcript, standardizer, .. } = &r.reductions[0] else { panic!() };
        assert_eq!(transcript.replay().unwrap(), transcript.final_matrix);
        assert_eq!(standardizer.mul(&transcript.final_matrix).unwrap(), r.final_matrix);
        assert!(r.final_matrix.row(0).iter().all(|x| *x == 1.into()));
        assert!(r.audits.last().unwrap().nondegenerate);
        assert!(r.final_character.nontrivial0());
    }

    #[test]
    fn preconditions() {
        assert_eq!(cc_gkz(&b(&[0, 0, 1]), p(7), &chi(&[0, 1]), None), Err(Error::TrivialCharacter0));
        assert_eq!(cc_gkz(&b(&[3, 3]), p(7), &chi(&[1, 1]), None), Err(Error::NotSubNonConfluent));
        assert!(matches!(cc_gkz(&b(&[0, 0, 1]), p(7), &chi(&[1, 1, 1]), None), Err(Error::Dimension(_))));
        let bad = MultiplicityTable::new([(th(&[1], 3), 2)]);
        assert!(matches!(cc_gkz(&b(&[0, 0, 1]), p(7), &chi(&[1, 1]), Some(&bad)), Err(Error::InvalidMultiplicities(_))));
        let good = MultiplicityTable::new([(th(&[3], 3), 2)]);
        let r = cc_gkz(&b(&[0, 0, 1]), p(7), &chi(&[1, 1]), Some(&good)).unwrap();
        let c = r.cycle.components().iter().find(|c| c.theta == Some(th(&[3], 3))).unwrap();
        assert_eq!(c.mult, Multiplicity::Integer(2));
    }

    #[test]
    fn resolution_route() {
        let r = cc_via_resolution(&b(&[0, 0, 1]), None).unwrap();
        assert_eq!(r.cycle.sign_exp, 4);
        let kinds: Vec<ComponentKind> = r.cycle.components().iter().map(|c| c.kind).collect();
        assert!(kinds.contains(&ComponentKind::ZeroSection) && kinds.contains(&ComponentKind::InfinityConormal));
        assert!(r.resolution.records.is_empty());
        let u = umbrella(&hat(&b(&[0, 0, 1]))).unwrap();
        let support = r.cycle.thetas();
        assert!(!support.is_empty());
        assert!(support.iter().all(|t| u.contains(t)));
    }
}
