use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::workspace::{DiffCache, Measure, PairState, Workspace};
use super::{BlowupRecord, Cone, Edge, GenerableSet};
use crate::error::{Error, Result};
use crate::json::{de_big, ser_big};
use crate::matrix::IntMatrix;

/// `b_ε = (⟨v_ε, column i of B⟩)_i`.
pub fn edge_pairing(b: &IntMatrix, e: &Edge) -> Result<Vec<BigInt>> {
    if b.nrows() != e.dim() {
        return Err(Error::Dimension(format!("{}-row matrix against edge {e}", b.nrows())));
    }
    Ok((0..b.ncols()).map(|j| (0..b.nrows()).map(|i| &e.v()[i] * b.get(i, j)).sum()).collect())
}

/// The columns (1-based) sorted so every edge of `σ` pairs with them in
/// weakly increasing order, ties by column index; `None` if no such order.
pub fn is_sigma_good(b: &IntMatrix, sigma: &Cone) -> Result<Option<Vec<usize>>> {
    let pairings: Vec<Vec<BigInt>> = sigma.edges().iter().map(|e| edge_pairing(b, e)).collect::<Result<_>>()?;
    let total = |j: usize| pairings.iter().map(|p| &p[j]).sum::<BigInt>();
    let mut order: Vec<usize> = (0..b.ncols()).collect();
    // Any simultaneous order refines the order by total pairing.
    order.sort_by(|&x, &y| total(x).cmp(&total(y)).then(x.cmp(&y)));
    let sorted = order.windows(2).all(|w| pairings.iter().all(|p| p[w[0]] <= p[w[1]]));
    Ok(sorted.then(|| order.into_iter().map(|j| j + 1).collect()))
}

fn check_dims(b: &IntMatrix, fan: &GenerableSet) -> Result<()> {
    if b.nrows() != fan.d() {
        return Err(Error::Dimension(format!("{}-row matrix against a {}-dimensional fan", b.nrows(), fan.d())));
    }
    Ok(())
}

/// `Σ_bad(B)`.
pub fn sigma_bad(b: &IntMatrix, fan: &GenerableSet) -> Result<GenerableSet> {
    check_dims(b, fan)?;
    let mut bad = Vec::new();
    for c in fan.cones() {
        if is_sigma_good(b, c)?.is_none() {
            bad.push(c.clone());
        }
    }
    GenerableSet::new(fan.d(), bad)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuNu {
    pub mu: BigInt,
    pub nu: usize,
    /// Bad edges attaining `μ`.
    pub e_b: BTreeSet<Edge>,
    /// For each edge of `e_b`, the bad neighbours of opposite sign.
    pub e_b_of: BTreeMap<Edge, BTreeSet<Edge>>,
    diff: BTreeMap<Edge, BigInt>,
}

impl MuNu {
    /// `b_ε1 − b_ε2` for every edge of the fan.
    pub fn diff(&self, e: &Edge) -> Option<&BigInt> {
        self.diff.get(e)
    }
}

fn column_difference(b: &IntMatrix) -> Vec<BigInt> {
    (0..b.nrows()).map(|i| b.get(i, 0) - b.get(i, 1)).collect()
}

fn check_two_columns(b: &IntMatrix) -> Result<()> {
    if b.ncols() != 2 {
        return Err(Error::Dimension(format!("mu_nu needs 2 columns, got {}", b.ncols())));
    }
    Ok(())
}

/// The singularity measures of a two-column matrix on a fan.
pub fn mu_nu(b: &IntMatrix, fan: &GenerableSet) -> Result<MuNu> {
    check_dims(b, fan)?;
    check_two_columns(b)?;
    let ws = Workspace::new(fan);
    let st = PairState::new(&ws, DiffCache::new(column_difference(b)));
    let m = st.measure(&ws);
    let dc = &st.dc;
    let edge = |i: usize| ws.edges[i].clone();
    let e_b = m.e_b.iter().map(|&i| edge(i)).collect();
    let e_b_of = m
        .e_b
        .iter()
        .zip(&m.e_b_of)
        .map(|(&i, ns)| (edge(i), ns.iter().map(|&x| edge(x)).collect()))
        .collect();
    let diff = dc.diff.iter().enumerate().map(|(i, v)| (edge(i), v.clone())).collect();
    Ok(MuNu { mu: m.mu, nu: m.nu, e_b, e_b_of, diff })
}

/// How a B-good blow-up picks among equally valid edge pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest edge vectors, `ε1` first.
    #[default]
    Lexicographic,
    /// Uniformly among valid candidates, from a seeded generator.
    Seeded(u64),
}

struct Chooser(Option<StdRng>);

impl Chooser {
    fn new(t: TieBreak) -> Self {
        match t {
            TieBreak::Lexicographic => Chooser(None),
            TieBreak::Seeded(s) => Chooser(Some(StdRng::seed_from_u64(s))),
        }
    }

    fn pick<'a, T>(&mut self, sorted: &[&'a T]) -> &'a T {
        match &mut self.0 {
            None => sorted[0],
            Some(rng) => sorted[rng.gen_range(0..sorted.len())],
        }
    }
}

fn choose(ws: &Workspace, dc: &DiffCache, m: &Measure, chooser: &mut Chooser) -> (usize, usize) {
    let firsts: Vec<&usize> = m.e_b.iter().collect();
    let e1 = *chooser.pick(&firsts);
    let at = m.e_b.iter().position(|&x| x == e1).expect("picked from e_b");
    let neighbours = &m.e_b_of[at];
    let best = neighbours.iter().map(|&e| dc.diff[e].abs()).max().expect("a bad edge has an opposite neighbour");
    let seconds: Vec<&usize> = neighbours.iter().filter(|&&e| dc.diff[e].abs() == best).collect();
    debug_assert!(seconds.windows(2).all(|w| ws.edges[*w[0]] < ws.edges[*w[1]]));
    (e1, *chooser.pick(&seconds))
}

fn step(b: &IntMatrix, fan: &GenerableSet, chooser: &mut Chooser) -> Result<(GenerableSet, BlowupRecord)> {
    check_dims(b, fan)?;
    check_two_columns(b)?;
    let mut ws = Workspace::new(fan);
    let st = PairState::new(&ws, DiffCache::new(column_difference(b)));
    let m = st.measure(&ws);
    if m.e_b.is_empty() {
        return Err(Error::AlreadyGood);
    }
    let (e1, e2) = choose(&ws, &st.dc, &m, chooser);
    let rec = ws.blowup(e1, e2)?;
    Ok((ws.to_fan(), rec))
}

/// One B-good blow-up of a two-column matrix, ties broken lexicographically.
pub fn b_good_blowup_step(b: &IntMatrix, fan: &GenerableSet) -> Result<(GenerableSet, BlowupRecord)> {
    b_good_blowup_step_with(b, fan, TieBreak::Lexicographic)
}

pub fn b_good_blowup_step_with(b: &IntMatrix, fan: &GenerableSet, tie: TieBreak) -> Result<(GenerableSet, BlowupRecord)> {
    step(b, fan, &mut Chooser::new(tie))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepLog {
    /// 1-based column pair.
    pub pair: (usize, usize),
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub mu_before: BigInt,
    pub nu_before: usize,
    #[serde(serialize_with = "ser_big", deserialize_with = "de_big")]
    pub mu_after: BigInt,
    pub nu_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub fan: GenerableSet,
    pub records: Vec<BlowupRecord>,
    pub log: Vec<StepLog>,
}

/// Blows up until every column pair is good on every cone.
pub fn resolve(b: &IntMatrix, start: &GenerableSet) -> Result<Resolution> {
    resolve_with(b, start, TieBreak::Lexicographic)
}

pub fn resolve_with(b: &IntMatrix, start: &GenerableSet, tie: TieBreak) -> Result<Resolution> {
    check_dims(b, start)?;
    if !start.is_complete() {
        return Err(Error::InvalidFan("starting fan is not complete".into()));
    }
    let n = b.ncols();
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    let mut ws = Workspace::new(start);
    let columns: Vec<Vec<BigInt>> =
        pairs.iter().map(|&(i, j)| column_difference(&b.select_columns(&[i - 1, j - 1]))).collect();
    let mut mu_sum = BigInt::zero();
    for col in &columns {
        mu_sum += PairState::new(&ws, DiffCache::new(col.clone())).measure(&ws).mu;
    }
    let edges = BigInt::from(ws.edges.len());
    let cap_big = BigInt::from(10) * mu_sum * &edges * &edges;
    let cap = usize::try_from(cap_big).unwrap_or(usize::MAX);

    let mut chooser = Chooser::new(tie);
    let mut records = Vec::new();
    let mut log = Vec::new();
    loop {
        let mut next_bad = None;
        for (k, col) in columns.iter().enumerate() {
            let st = PairState::new(&ws, DiffCache::new(col.clone()));
            let m = st.measure(&ws);
            if !m.e_b.is_empty() {
                next_bad = Some((k, st, m));
                break;
            }
        }
        let Some((k, mut st, mut before)) = next_bad else {
            break;
        };
        let pair = pairs[k];
        while !before.e_b.is_empty() {
            if records.len() >= cap {
                return Err(Error::ResolutionDiverged { cap, pair });
            }
            let (e1, e2) = choose(&ws, &st.dc, &before, &mut chooser);
            let change = ws.blowup_ids(e1, e2)?;
            st.apply(&ws, &change);
            records.push(change.record);
            let after = st.measure(&ws);
            log.push(StepLog {
                pair,
                mu_before: before.mu.clone(),
                nu_before: before.nu,
                mu_after: after.mu.clone(),
                nu_after: after.nu,
            });
            before = after;
        }
    }
    Ok(Resolution { fan: ws.to_fan(), records, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::default_complete_fan;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn e(v: &[i64]) -> Edge {
        Edge::from_ints(v.iter().copied()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn pairing_examples() {
        let b = m(vec![vec![0, 1, 2]]);
        assert_eq!(edge_pairing(&b, &e(&[1])).unwrap(), ints(&[0, 1, 2]));
        assert_eq!(edge_pairing(&b, &e(&[-1])).unwrap(), ints(&[0, -1, -2]));
        let b2 = m(vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(edge_pairing(&b2, &e(&[1, 1])).unwrap(), ints(&[2, 1]));
        assert!(edge_pairing(&b2, &e(&[1])).is_err());
    }

    #[test]
    fn goodness_examples() {
        let b = m(vec![vec![3, -1, 2]]);
        assert_eq!(is_sigma_good(&b, &Cone::from_ints([[1]]).unwrap()).unwrap(), Some(vec![2, 3, 1]));
        let q1 = Cone::from_ints([[1, 0], [0, 1]]).unwrap();
        assert_eq!(is_sigma_good(&IntMatrix::identity(2), &q1).unwrap(), None);
        assert_eq!(is_sigma_good(&m(vec![vec![0, 1], vec![0, 2]]), &q1).unwrap(), Some(vec![1, 2]));
        // Equal columns tie by index.
        assert_eq!(is_sigma_good(&m(vec![vec![1, 1], vec![1, 1]]), &q1).unwrap(), Some(vec![1, 2]));
    }

    #[test]
    fn identity_on_orthants() {
        let fan = default_complete_fan(2);
        let b = IntMatrix::identity(2);
        let bad = sigma_bad(&b, &fan).unwrap();
        assert_eq!(bad.len(), 2);
        assert!(bad.contains(&Cone::from_ints([[1, 0], [0, 1]]).unwrap()));
        let mn = mu_nu(&b, &fan).unwrap();
        assert_eq!(mn.mu, BigInt::from(1));
        assert_eq!(mn.e_b.len(), 4);
        assert_eq!(mn.nu, 4);
        let (_, rec) = b_good_blowup_step(&b, &fan).unwrap();
        assert_eq!((rec.e1.clone(), rec.e2.clone()), (e(&[-1, 0]), e(&[0, -1])));
        assert_eq!(rec.ex, e(&[-1, -1]));
    }

    #[test]
    fn good_configurations() {
        let fan = default_complete_fan(2);
        let b = m(vec![vec![0, 1], vec![0, 0]]);
        assert!(sigma_bad(&b, &fan).unwrap().is_empty());
        let mn = mu_nu(&b, &fan).unwrap();
        assert_eq!((mn.mu.clone(), mn.nu), (BigInt::zero(), 0));
        assert_eq!(b_good_blowup_step(&b, &fan), Err(Error::AlreadyGood));
        let r = resolve(&b, &fan).unwrap();
        assert_eq!(r.fan, fan);
        assert!(r.records.is_empty());
        let r1 = resolve(&m(vec![vec![0, 1, 2]]), &default_complete_fan(1)).unwrap();
        assert!(r1.records.is_empty());
        assert!(mu_nu(&m(vec![vec![0, 1, 2], vec![1, 1, 1]]), &fan).is_err());
    }

    #[test]
    fn identity_resolves() {
        let fan = default_complete_fan(2);
        let r = resolve(&IntMatrix::identity(2), &fan).unwrap();
        assert!(!r.records.is_empty());
        assert!(sigma_bad(&IntMatrix::identity(2), &r.fan).unwrap().is_empty());
        assert!(r.fan.is_generable() && r.fan.is_complete());
        assert_eq!(crate::fan::replay_blowups(&fan, &r.records).unwrap(), r.fan);
    }

    #[test]
    fn incomplete_start_rejected() {
        let single = GenerableSet::new(2, vec![Cone::from_ints([[1, 0], [0, 1]]).unwrap()]).unwrap();
        assert!(matches!(resolve(&IntMatrix::identity(2), &single), Err(Error::InvalidFan(_))));
    }
}
