use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{mul_mod, pow_mod};
use super::{IntMatrix, Prime, ThetaSubset};
use crate::error::{Error, Result};

/// Rank over the rationals by Bareiss fraction-free elimination.
pub fn rank_rational(m: &IntMatrix) -> usize {
    let (r, c) = (m.nrows(), m.ncols());
    let mut a = m.to_rows();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..c {
        if rank == r {
            break;
        }
        let Some(piv) = (rank..r).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        for i in rank + 1..r {
            for j in col + 1..c {
                // Exact: every entry is a minor of the input.
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

pub(crate) fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduced row echelon form mod `p`. Returns the pivot columns.
pub fn rref_mod_p(rows: &mut [Vec<u64>], p: Prime) -> Vec<usize> {
    let p = p.get();
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][col], p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub(crate) fn residues(m: &IntMatrix, p: Prime) -> Vec<Vec<u64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| residue(x, p.get())).collect())
        .collect()
}

/// Rank of `m` reduced mod `p`.
pub fn rank_mod_p(m: &IntMatrix, p: Prime) -> usize {
    rref_mod_p(&mut residues(m, p), p).len()
}

/// Leftmost pivot columns (0-based) of the mod-`p` echelon form.
pub fn mod_p_pivots(m: &IntMatrix, p: Prime) -> Vec<usize> {
    rref_mod_p(&mut residues(m, p), p)
}

/// Columns (0-based, ascending) added greedily from the left to `base`
/// whenever they raise the rational rank.
pub fn rational_pivots(m: &IntMatrix, base: &[usize]) -> Vec<usize> {
    let mut chosen: Vec<usize> = base.to_vec();
    let mut rank = if chosen.is_empty() { 0 } else { rank_rational(&m.select_columns(&chosen)) };
    let mut ext = Vec::new();
    for j in 0..m.ncols() {
        if chosen.contains(&j) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(j);
        let r = rank_rational(&m.select_columns(&trial));
        if r > rank {
            rank = r;
            chosen = trial;
            ext.push(j);
        }
    }
    ext
}

/// The columns of `m` indexed by `theta`, in order.
pub fn column_submatrix(m: &IntMatrix, theta: &ThetaSubset) -> Result<IntMatrix> {
    if theta.is_empty() {
        return Err(Error::InvalidTheta("column subset must be nonempty".into()));
    }
    if theta.max_index().unwrap() > m.ncols() {
        return Err(Error::InvalidTheta(format!("{theta} exceeds {} columns", m.ncols())));
    }
    Ok(m.select_columns(&theta.zero_based()))
}

fn rref_rational(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..rows[i].len() {
                let sub = &f * &rows[r][j];
                rows[i][j] -= sub;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

/// A basis of the rational right kernel of `m`, one vector per free column.
pub fn kernel_rational(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    let n = m.ncols();
    let mut rows = to_rational_rows(m);
    let pivots = rref_rational(&mut rows, n);
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some rational `y` with `y·m = target`, or `None` if there is none.
pub fn solve_left_rational(m: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigRational>> {
    assert_eq!(target.len(), m.ncols());
    let unknowns = m.nrows();
    let mut rows: Vec<Vec<BigRational>> = (0..m.ncols())
        .map(|j| {
            let mut row: Vec<BigRational> =
                m.column(j).into_iter().map(BigRational::from_integer).collect();
            row.push(BigRational::from_integer(target[j].clone()));
            row
        })
        .collect();
    let pivots = rref_rational(&mut rows, unknowns + 1);
    if pivots.last() == Some(&unknowns) {
        return None;
    }
    let mut y = vec![BigRational::zero(); unknowns];
    for (r, &pc) in pivots.iter().enumerate() {
        y[pc] = rows[r][unknowns].clone();
    }
    Some(y)
}
