use serde::{Deserialize, Serialize};

use super::workspace::Workspace;
use super::{Edge, GenerableSet};
use crate::error::{Error, Result};
use crate::fan::Cone;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub e1: Edge,
    pub e2: Edge,
    pub ex: Edge,
    pub replaced: Vec<Cone>,
    /// `σ(ε1), σ(ε2)` for each replaced `σ`, in that order.
    pub created: Vec<Cone>,
}

/// Star subdivision at `v_ε1 + v_ε2`: each cone containing both edges is
/// replaced by `σ(ε1)` (keeps ε1, ε2 ↦ ε_ex) and `σ(ε2)` (keeps ε2,
/// ε1 ↦ ε_ex). All other cones are kept.
pub fn standard_blowup(fan: &GenerableSet, e1: &Edge, e2: &Edge) -> Result<(GenerableSet, BlowupRecord)> {
    if e1 == e2 {
        return Err(Error::NotAdjacent(e1.to_string(), e2.to_string()));
    }
    let replaced: Vec<Cone> = fan.cones().iter().filter(|c| c.contains(e1) && c.contains(e2)).cloned().collect();
    if replaced.is_empty() {
        return Err(Error::NotAdjacent(e1.to_string(), e2.to_string()));
    }
    let ex = e1.sum(e2)?;
    let mut created = Vec::with_capacity(2 * replaced.len());
    for c in &replaced {
        created.push(c.replace(e2, &ex)?);
        created.push(c.replace(e1, &ex)?);
    }
    let cones = fan
        .cones()
        .iter()
        .filter(|c| !(c.contains(e1) && c.contains(e2)))
        .cloned()
        .chain(created.iter().cloned())
        .collect();
    let out = GenerableSet::new(fan.d(), cones)?;
    Ok((out, BlowupRecord { e1: e1.clone(), e2: e2.clone(), ex, replaced, created }))
}

/// Applies each record's blow-up in turn, checking it reproduces the record.
pub fn replay_blowups(start: &GenerableSet, records: &[BlowupRecord]) -> Result<GenerableSet> {
    let mut ws = Workspace::new(start);
    for (i, r) in records.iter().enumerate() {
        let not_adjacent = || Error::NotAdjacent(r.e1.to_string(), r.e2.to_string());
        let e1 = ws.id(&r.e1).ok_or_else(not_adjacent)?;
        let e2 = ws.id(&r.e2).ok_or_else(not_adjacent)?;
        if &ws.blowup(e1, e2)? != r {
            return Err(Error::InvalidFan(format!("record {i} does not replay")));
        }
    }
    Ok(ws.to_fan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::default_complete_fan;

    fn e(v: &[i64]) -> Edge {
        Edge::from_ints(v.iter().copied()).unwrap()
    }

    #[test]
    fn first_quadrant_split() {
        let fan = default_complete_fan(2);
        let (out, rec) = standard_blowup(&fan, &e(&[1, 0]), &e(&[0, 1])).unwrap();
        assert_eq!(out.len(), 5);
        assert_eq!(rec.ex, e(&[1, 1]));
        assert!(out.contains(&Cone::from_ints([[1, 0], [1, 1]]).unwrap()));
        assert!(out.contains(&Cone::from_ints([[1, 1], [0, 1]]).unwrap()));
        let mut edges = fan.edges();
        edges.insert(e(&[1, 1]));
        assert_eq!(out.edges(), edges);
        assert!(out.is_generable() && out.is_complete());
        assert_eq!(replay_blowups(&fan, &[rec]).unwrap(), out);
    }

    #[test]
    fn three_dimensional_split_touches_every_cone_on_the_face() {
        let fan = default_complete_fan(3);
        let (out, rec) = standard_blowup(&fan, &e(&[1, 0, 0]), &e(&[0, 1, 0])).unwrap();
        assert_eq!(rec.replaced.len(), 2);
        assert_eq!(out.len(), 10);
        assert!(out.is_generable() && out.is_complete());
    }

    #[test]
    fn non_adjacent_pairs_are_rejected() {
        let fan = default_complete_fan(2);
        assert!(matches!(standard_blowup(&fan, &e(&[1, 0]), &e(&[-1, 0])), Err(Error::NotAdjacent(..))));
        assert!(standard_blowup(&fan, &e(&[1, 0]), &e(&[1, 0])).is_err());
    }
}
