//! Exact feasibility for small linear systems over the rationals.
//!
//! Phase-one simplex on a dense tableau with Bland's rule, so it always
//! terminates. All variables are nonnegative; callers split free variables.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, rel: Relation, rhs: BigRational) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// A point `x ≥ 0` satisfying every constraint, or `None` if none exists.
pub fn feasible_point(nvars: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let m = constraints.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); nvars]);
    }
    let nslack = constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let ncols = nvars + nslack + m;
    let rhs = ncols;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut slack = nvars;
    for (i, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), nvars, "constraint width");
        let mut row = vec![BigRational::zero(); ncols + 1];
        row[..nvars].clone_from_slice(&c.coeffs);
        match c.rel {
            Relation::Le => {
                row[slack] = BigRational::from_integer(1.into());
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = BigRational::from_integer((-1).into());
                slack += 1;
            }
            Relation::Eq => {}
        }
        row[rhs] = c.rhs.clone();
        if row[rhs].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        let art = nvars + nslack + i;
        row[art] = BigRational::from_integer(1.into());
        basis.push(art);
        t.push(row);
    }
    let first_art = nvars + nslack;
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); ncols + 1];
    for row in &t {
        for j in (0..first_art).chain(std::iter::once(rhs)) {
            cost[j] -= &row[j];
        }
    }
    while let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][rhs] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        let Some(l) = leave else {
            // Unbounded is impossible: the phase-one objective is bounded below.
            unreachable!("phase-one objective unbounded");
        };
        pivot(&mut t, &mut cost, l, enter);
        basis[l] = enter;
    }
    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (i, &b) in basis.iter().enumerate() {
        if b < nvars {
            x[b] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], l: usize, e: usize) {
    let inv = t[l][e].recip();
    for x in t[l].iter_mut() {
        *x *= &inv;
    }
    let prow = t[l].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == l || row[e].is_zero() {
            continue;
        }
        let f = row[e].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    if !cost[e].is_zero() {
        let f = cost[e].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn c(coeffs: &[i64], rel: Relation, rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&x| q(x)).collect(), rel, q(rhs))
    }

    fn satisfies(x: &[BigRational], cs: &[Constraint]) -> bool {
        x.iter().all(|v| !v.is_negative())
            && cs.iter().all(|c| {
                let lhs: BigRational = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                match c.rel {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    #[test]
    fn feasible_systems_return_witnesses() {
        let cs = vec![c(&[1, 1], Relation::Eq, 3), c(&[1, -1], Relation::Ge, 1)];
        let x = feasible_point(2, &cs).unwrap();
        assert!(satisfies(&x, &cs));
        let cs = vec![c(&[2, 3], Relation::Le, 6), c(&[-1, 1], Relation::Ge, -1), c(&[3, 1], Relation::Eq, 2)];
        let x = feasible_point(2, &cs).unwrap();
        assert!(satisfies(&x, &cs));
    }

    #[test]
    fn infeasible_systems() {
        assert!(feasible_point(1, &[c(&[1], Relation::Le, -1)]).is_none());
        let cs = vec![c(&[1, 1], Relation::Le, 1), c(&[1, 1], Relation::Ge, 2)];
        assert!(feasible_point(2, &cs).is_none());
        let cs = vec![c(&[1, -1], Relation::Eq, 0), c(&[1, -1], Relation::Ge, 1)];
        assert!(feasible_point(2, &cs).is_none());
    }

    #[test]
    fn degenerate_system_terminates() {
        let cs = vec![
            c(&[1, 1, 0], Relation::Le, 0),
            c(&[0, 1, 1], Relation::Le, 0),
            c(&[1, 0, 1], Relation::Ge, 0),
            c(&[1, 1, 1], Relation::Eq, 0),
        ];
        let x = feasible_point(3, &cs).unwrap();
        assert!(x.iter().all(Zero::is_zero));
    }
}
