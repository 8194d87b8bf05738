//! Indexed fan used while resolving: edges are interned to ids and every
//! edge keeps the list of live cones containing it.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{BlowupRecord, Cone, Edge, GenerableSet};
use crate::error::{Error, Result};

pub(crate) struct Workspace {
    d: usize,
    pub(crate) edges: Vec<Edge>,
    ids: HashMap<Edge, usize>,
    /// Edge ids, ascending; `None` once replaced.
    cones: Vec<Option<Vec<usize>>>,
    star: Vec<Vec<usize>>,
}

impl Workspace {
    pub(crate) fn new(fan: &GenerableSet) -> Workspace {
        let mut ws = Workspace { d: fan.d(), edges: Vec::new(), ids: HashMap::new(), cones: Vec::new(), star: Vec::new() };
        for c in fan.cones() {
            let ids = c.edges().iter().map(|e| ws.intern(e)).collect();
            ws.push_cone(ids);
        }
        ws
    }

    fn intern(&mut self, e: &Edge) -> usize {
        if let Some(&i) = self.ids.get(e) {
            return i;
        }
        self.edges.push(e.clone());
        self.star.push(Vec::new());
        self.ids.insert(e.clone(), self.edges.len() - 1);
        self.edges.len() - 1
    }

    fn push_cone(&mut self, mut ids: Vec<usize>) {
        ids.sort_unstable();
        let slot = self.cones.len();
        for &e in &ids {
            self.star[e].push(slot);
        }
        self.cones.push(Some(ids));
    }

    pub(crate) fn id(&self, e: &Edge) -> Option<usize> {
        self.ids.get(e).copied()
    }

    pub(crate) fn live_cones(&self) -> impl Iterator<Item = &[usize]> {
        self.cones.iter().flatten().map(Vec::as_slice)
    }

    pub(crate) fn star(&self, e: usize) -> impl Iterator<Item = &[usize]> {
        self.star[e].iter().map(|&s| self.cones[s].as_deref().expect("stars hold live cones"))
    }

    fn cone(&self, ids: &[usize]) -> Cone {
        Cone::new(ids.iter().map(|&i| self.edges[i].clone()).collect()).expect("workspace cones are nonsingular")
    }

    pub(crate) fn blowup(&mut self, e1: usize, e2: usize) -> Result<BlowupRecord> {
        self.blowup_ids(e1, e2).map(|c| c.record)
    }

    pub(crate) fn blowup_ids(&mut self, e1: usize, e2: usize) -> Result<Change> {
        let common: Vec<usize> = self.star[e1].iter().copied().filter(|s| self.star[e2].contains(s)).collect();
        if e1 == e2 || common.is_empty() {
            return Err(Error::NotAdjacent(self.edges[e1].to_string(), self.edges[e2].to_string()));
        }
        let ex_edge = self.edges[e1].sum(&self.edges[e2])?;
        let ex = self.intern(&ex_edge);
        let mut common: Vec<(Cone, usize)> =
            common.into_iter().map(|s| (self.cone(self.cones[s].as_deref().expect("live")), s)).collect();
        common.sort();
        let mut replaced = Vec::new();
        let mut created = Vec::new();
        let mut removed_ids = Vec::new();
        let mut created_ids = Vec::new();
        for (cone, slot) in common {
            let ids = self.cones[slot].take().expect("live");
            for &e in &ids {
                self.star[e].retain(|&s| s != slot);
            }
            replaced.push(cone);
            removed_ids.push(ids.clone());
            for (keep, drop) in [(e1, e2), (e2, e1)] {
                debug_assert!(ids.contains(&keep));
                let new: Vec<usize> = ids.iter().map(|&e| if e == drop { ex } else { e }).collect();
                created.push(self.cone(&new));
                created_ids.push(new.clone());
                self.push_cone(new);
            }
        }
        let record = BlowupRecord { e1: self.edges[e1].clone(), e2: self.edges[e2].clone(), ex: ex_edge, replaced, created };
        Ok(Change { record, removed: removed_ids, created: created_ids })
    }

    pub(crate) fn to_fan(&self) -> GenerableSet {
        let cones = self.live_cones().map(|ids| self.cone(ids)).collect();
        GenerableSet::new(self.d, cones).expect("consistent dimension")
    }
}

pub(crate) struct Change {
    pub(crate) record: BlowupRecord,
    pub(crate) removed: Vec<Vec<usize>>,
    pub(crate) created: Vec<Vec<usize>>,
}

/// `b_ε1 − b_ε2` per edge id for one column pair, extended as edges appear.
pub(crate) struct DiffCache {
    col: Vec<BigInt>,
    pub(crate) diff: Vec<BigInt>,
}

impl DiffCache {
    pub(crate) fn new(col_difference: Vec<BigInt>) -> Self {
        DiffCache { col: col_difference, diff: Vec::new() }
    }

    pub(crate) fn update(&mut self, ws: &Workspace) {
        while self.diff.len() < ws.edges.len() {
            let e = &ws.edges[self.diff.len()];
            self.diff.push(e.dot(&self.col));
        }
    }
}

/// Measures in id form; `e_b` is sorted by edge vector.
pub(crate) struct Measure {
    pub(crate) mu: BigInt,
    pub(crate) nu: usize,
    pub(crate) e_b: Vec<usize>,
    pub(crate) e_b_of: Vec<Vec<usize>>,
}

/// Bad-edge bookkeeping for one column pair, maintained across blow-ups.
pub(crate) struct PairState {
    pub(crate) dc: DiffCache,
    bad_uses: Vec<u32>,
    /// Bad edges keyed by `|diff|`.
    bad: BTreeSet<(BigInt, usize)>,
}

impl PairState {
    pub(crate) fn new(ws: &Workspace, mut dc: DiffCache) -> Self {
        dc.update(ws);
        let mut st = PairState { dc, bad_uses: Vec::new(), bad: BTreeSet::new() };
        st.bad_uses.resize(ws.edges.len(), 0);
        for c in ws.live_cones() {
            st.add(c);
        }
        st
    }

    fn is_bad(&self, c: &[usize]) -> bool {
        let diff = &self.dc.diff;
        c.iter().any(|&e| diff[e].is_positive()) && c.iter().any(|&e| diff[e].is_negative())
    }

    fn add(&mut self, c: &[usize]) {
        if self.is_bad(c) {
            for &e in c {
                self.bad_uses[e] += 1;
                if self.bad_uses[e] == 1 {
                    self.bad.insert((self.dc.diff[e].abs(), e));
                }
            }
        }
    }

    fn remove(&mut self, c: &[usize]) {
        if self.is_bad(c) {
            for &e in c {
                self.bad_uses[e] -= 1;
                if self.bad_uses[e] == 0 {
                    self.bad.remove(&(self.dc.diff[e].abs(), e));
                }
            }
        }
    }

    pub(crate) fn apply(&mut self, ws: &Workspace, change: &Change) {
        self.dc.update(ws);
        self.bad_uses.resize(ws.edges.len(), 0);
        for c in &change.removed {
            self.remove(c);
        }
        for c in &change.created {
            self.add(c);
        }
    }

    pub(crate) fn measure(&self, ws: &Workspace) -> Measure {
        let diff = &self.dc.diff;
        let Some((mu, _)) = self.bad.last() else {
            return Measure { mu: BigInt::zero(), nu: 0, e_b: Vec::new(), e_b_of: Vec::new() };
        };
        let mut e_b: Vec<usize> = self.bad.range((mu.clone(), 0)..).map(|&(_, e)| e).collect();
        e_b.sort_by(|&x, &y| ws.edges[x].cmp(&ws.edges[y]));
        let e_b_of: Vec<Vec<usize>> = e_b
            .iter()
            .map(|&e| {
                let sign = diff[e].signum();
                let mut v: Vec<usize> = ws
                    .star(e)
                    .flatten()
                    .copied()
                    .filter(|&x| self.bad_uses[x] > 0 && diff[x].signum() == -&sign)
                    .collect();
                v.sort_by(|&x, &y| ws.edges[x].cmp(&ws.edges[y]));
                v.dedup();
                v
            })
            .collect();
        let nu = e_b_of.iter().map(Vec::len).sum();
        Measure { mu: mu.clone(), nu, e_b, e_b_of }
    }
}
