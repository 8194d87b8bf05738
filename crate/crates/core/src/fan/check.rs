//! Local verification of complete fans.
//!
//! Let every facet lie in exactly two cones, on opposite sides of its
//! hyperplane. Then the number of cones containing a point off all cone
//! boundaries is constant, and it is 1 exactly when the cones form a fan.
//! The check therefore needs only facet data and one probe point, and it
//! updates locally under blow-ups.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Cone, Edge, GenerableSet};
use crate::matrix::IntMatrix;

/// Incremental certificate that a set of cones is a complete nonsingular fan.
#[derive(Clone, Debug)]
pub struct CompleteFanCheck {
    d: usize,
    ids: HashMap<Edge, usize>,
    edges: Vec<Edge>,
    /// Live cones containing each edge.
    edge_uses: Vec<usize>,
    cones: HashSet<Vec<usize>>,
    /// Facet ↦ (sorted facet ids, outside edge id) per cone containing it.
    facets: HashMap<Vec<usize>, Vec<usize>>,
    probe: Vec<BigInt>,
    probe_step: u64,
    covering: i64,
}

enum Membership {
    Inside,
    Outside,
    Boundary,
}

impl CompleteFanCheck {
    /// `None` unless `fan` is a complete fan.
    pub fn new(fan: &GenerableSet) -> Option<Self> {
        let mut c = CompleteFanCheck {
            d: fan.d(),
            ids: HashMap::new(),
            edges: Vec::new(),
            edge_uses: Vec::new(),
            cones: HashSet::new(),
            facets: HashMap::new(),
            probe: Vec::new(),
            probe_step: 1,
            covering: 0,
        };
        let mut touched = HashSet::new();
        for cone in fan.cones() {
            let ids = c.intern_cone(cone);
            c.insert(ids, &mut touched);
        }
        (c.facets_valid(&touched) && c.reprobe()).then_some(c)
    }

    /// Distinct edges of the live cones.
    pub fn edge_count(&self) -> usize {
        self.edge_uses.iter().filter(|&&u| u > 0).count()
    }

    pub fn cone_count(&self) -> usize {
        self.cones.len()
    }

    /// Replaces `removed` by `added` and reports whether the result is still
    /// a complete fan. `removed` must be present and `added` absent.
    pub fn apply(&mut self, removed: &[Cone], added: &[Cone]) -> bool {
        let mut touched = HashSet::new();
        let mut delta = 0i64;
        let mut generic = true;
        for cone in removed {
            let Some(ids) = self.lookup(cone) else {
                return false;
            };
            if !self.cones.contains(&ids) {
                return false;
            }
            match self.membership(&ids) {
                Membership::Inside => delta -= 1,
                Membership::Outside => {}
                Membership::Boundary => generic = false,
            }
            self.remove(&ids, &mut touched);
        }
        for cone in added {
            let ids = self.intern_cone(cone);
            if self.cones.contains(&ids) {
                return false;
            }
            match self.membership(&ids) {
                Membership::Inside => delta += 1,
                Membership::Outside => {}
                Membership::Boundary => generic = false,
            }
            self.insert(ids, &mut touched);
        }
        if !self.facets_valid(&touched) {
            return false;
        }
        if generic {
            self.covering += delta;
            self.covering == 1
        } else {
            self.reprobe()
        }
    }

    fn lookup(&self, cone: &Cone) -> Option<Vec<usize>> {
        let mut ids: Vec<usize> = cone.edges().iter().map(|e| self.ids.get(e).copied()).collect::<Option<_>>()?;
        ids.sort_unstable();
        Some(ids)
    }

    fn intern_cone(&mut self, cone: &Cone) -> Vec<usize> {
        let mut ids: Vec<usize> = cone
            .edges()
            .iter()
            .map(|e| match self.ids.get(e) {
                Some(&i) => i,
                None => {
                    self.edges.push(e.clone());
                    self.edge_uses.push(0);
                    self.ids.insert(e.clone(), self.edges.len() - 1);
                    self.edges.len() - 1
                }
            })
            .collect();
        ids.sort_unstable();
        ids
    }

    fn facets_of(ids: &[usize]) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        (0..ids.len()).map(move |i| {
            let mut f = ids.to_vec();
            let out = f.remove(i);
            (f, out)
        })
    }

    fn insert(&mut self, ids: Vec<usize>, touched: &mut HashSet<Vec<usize>>) {
        for (f, out) in Self::facets_of(&ids) {
            self.facets.entry(f.clone()).or_default().push(out);
            touched.insert(f);
        }
        for &e in &ids {
            self.edge_uses[e] += 1;
        }
        self.cones.insert(ids);
    }

    fn remove(&mut self, ids: &[usize], touched: &mut HashSet<Vec<usize>>) {
        for (f, out) in Self::facets_of(ids) {
            let outs = self.facets.get_mut(&f).expect("facet of a live cone");
            outs.retain(|&o| o != out);
            if outs.is_empty() {
                self.facets.remove(&f);
            }
            touched.insert(f);
        }
        for &e in ids {
            self.edge_uses[e] -= 1;
        }
        self.cones.remove(ids);
    }

    fn det_with(&self, facet: &[usize], extra: &[BigInt]) -> BigInt {
        let rows: Vec<Vec<BigInt>> =
            facet.iter().map(|&e| self.edges[e].v().to_vec()).chain(std::iter::once(extra.to_vec())).collect();
        IntMatrix::from_rows(rows).expect("square").det().expect("square")
    }

    fn facets_valid(&self, touched: &HashSet<Vec<usize>>) -> bool {
        touched.iter().all(|f| match self.facets.get(f) {
            None => true,
            Some(outs) => {
                outs.len() == 2 && {
                    let a = self.det_with(f, self.edges[outs[0]].v());
                    let b = self.det_with(f, self.edges[outs[1]].v());
                    a.signum() == -b.signum() && !a.is_zero()
                }
            }
        })
    }

    /// Signs of the probe's coordinates in the cone's basis, by Cramer's rule.
    fn membership(&self, ids: &[usize]) -> Membership {
        let base = self.det_with(&ids[..ids.len() - 1], self.edges[ids[ids.len() - 1]].v());
        let mut inside = true;
        let mut zero = false;
        for i in 0..ids.len() {
            let rows: Vec<Vec<BigInt>> = ids
                .iter()
                .enumerate()
                .map(|(j, &e)| if i == j { self.probe.clone() } else { self.edges[e].v().to_vec() })
                .collect();
            let di = IntMatrix::from_rows(rows).expect("square").det().expect("square");
            if di.is_zero() {
                zero = true;
            } else if di.signum() != base.signum() {
                inside = false;
            }
        }
        match (inside, zero) {
            (false, _) => Membership::Outside,
            (true, false) => Membership::Inside,
            (true, true) => Membership::Boundary,
        }
    }

    /// Moves the probe along a moment curve until it avoids every cone
    /// boundary, then counts the cones containing it.
    fn reprobe(&mut self) -> bool {
        loop {
            self.probe_step += 1;
            let m = BigInt::from(self.probe_step) * 7 + 3;
            let mut x = BigInt::from(1);
            self.probe = (0..self.d)
                .map(|_| {
                    let v = x.clone();
                    x *= &m;
                    v
                })
                .collect();
            let mut count = 0i64;
            let mut generic = true;
            for ids in &self.cones {
                match self.membership(ids) {
                    Membership::Inside => count += 1,
                    Membership::Outside => {}
                    Membership::Boundary => {
                        generic = false;
                        break;
                    }
                }
            }
            if generic {
                self.covering = count;
                return count == 1;
            }
        }
    }
}
