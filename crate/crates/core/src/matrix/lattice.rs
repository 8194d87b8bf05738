use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// A unimodular matrix whose first row is the primitive vector `y`.
///
/// Column operations reduce `y` to `e_1` while tracking the inverse of the
/// accumulated transform; that inverse is the result.
pub fn complete_to_unimodular(y: &[BigInt]) -> Result<IntMatrix> {
    let n = y.len();
    if n == 0 {
        return Err(Error::NotPrimitive);
    }
    let mut y = y.to_vec();
    // Rows of `inv` track U^{-1} where y_original · U = y.
    let mut inv = IntMatrix::identity(n).to_rows();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| !y[i].is_zero()).collect();
        let Some(&piv) = nonzero.iter().min_by(|&&a, &&b| y[a].abs().cmp(&y[b].abs()).then(a.cmp(&b)))
        else {
            return Err(Error::NotPrimitive);
        };
        if nonzero.len() == 1 {
            if !y[piv].abs().is_one() {
                return Err(Error::NotPrimitive);
            }
            if piv != 0 {
                y.swap(0, piv);
                inv.swap(0, piv);
            }
            if y[0].is_negative() {
                y[0] = -&y[0];
                for x in inv[0].iter_mut() {
                    *x = -&*x;
                }
            }
            return IntMatrix::from_rows(inv);
        }
        for &j in &nonzero {
            if j == piv {
                continue;
            }
            // col_j -= q col_piv, hence row_piv(inv) += q row_j(inv).
            let q = y[j].div_floor(&y[piv]);
            let step = &q * &y[piv];
            y[j] -= step;
            let rj = inv[j].clone();
            for (x, r) in inv[piv].iter_mut().zip(&rj) {
                *x += &q * r;
            }
        }
    }
}

/// Inverse of a matrix with determinant ±1.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("inverse of a {}x{} matrix", m.nrows(), m.ncols())));
    }
    if !m.det()?.abs().is_one() {
        return Err(Error::Singular);
    }
    let n = m.nrows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = m.row(i).iter().cloned().map(BigRational::from_integer).collect();
            row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from(u8::from(i == j)))));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("nonsingular");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let prow = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
    }
    IntMatrix::from_rows(a.into_iter().map(|row| row[n..].iter().map(|x| x.to_integer()).collect::<Vec<_>>()))
}

/// Row Hermite normal form with zero rows dropped: positive pivots, echelon
/// shape, and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut a = rows;
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..nrows).filter(|&i| !a[i][col].is_zero()).collect();
            let Some(&piv) = nz.iter().min_by(|&&x, &&y| a[x][col].abs().cmp(&a[y][col].abs()).then(x.cmp(&y)))
            else {
                break;
            };
            a.swap(r, piv);
            if nz.len() == 1 {
                break;
            }
            for i in r + 1..nrows {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let pr = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pr) {
                    *x -= &q * p;
                }
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            let pr = a[r].clone();
            for (x, p) in a[i].iter_mut().zip(&pr) {
                *x -= &q * p;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// A basis of the integer right kernel of `m`, in Hermite normal form.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (r, c) = (m.nrows(), m.ncols());
    let aug: Vec<Vec<BigInt>> = (0..c)
        .map(|j| {
            let mut row = m.column(j);
            row.extend((0..c).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    hermite_rows(aug)
        .into_iter()
        .filter(|row| row[..r].iter().all(Zero::is_zero))
        .map(|row| row[r..].to_vec())
        .collect()
}
