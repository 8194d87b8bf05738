use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lp::{feasible_point, Constraint, Relation};
use crate::matrix::{is_non_confluent, IntMatrix, ThetaSubset};

/// A first row of ones is accepted as standard even without full rank.
fn standardize(a: &IntMatrix) -> Result<IntMatrix> {
    if a.row(0).iter().all(One::is_one) {
        return Ok(a.clone());
    }
    let p = is_non_confluent(a).ok_or(Error::Confluent)?;
    p.mul(a)
}

/// `θ` is the zero set of a functional that is positive on every other column.
fn supported(a: &IntMatrix, theta: &ThetaSubset) -> bool {
    let n = a.ncols();
    if theta.len() == n {
        return true;
    }
    let m = a.nrows();
    let constraints: Vec<Constraint> = (0..n)
        .map(|j| {
            let col = a.column(j);
            let coeffs = col
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .chain(col.iter().map(|x| BigRational::from_integer(-x)))
                .collect();
            if theta.members().contains(&(j + 1)) {
                Constraint::new(coeffs, Relation::Eq, BigRational::from_integer(0.into()))
            } else {
                Constraint::new(coeffs, Relation::Ge, BigRational::one())
            }
        })
        .collect();
    feasible_point(2 * m, &constraints).is_some()
}

pub fn is_umbrella_member(a: &IntMatrix, theta: &ThetaSubset) -> Result<bool> {
    ThetaSubset::new(theta.members().iter().copied(), a.ncols())?;
    Ok(supported(&standardize(a)?, theta))
}

/// Zero sets of supporting functionals of the column cone, in canonical
/// order. Always contains `∅` and the full set.
pub fn umbrella(a: &IntMatrix) -> Result<Vec<ThetaSubset>> {
    let a = standardize(a)?;
    Ok(ThetaSubset::all(a.ncols()).into_iter().filter(|t| supported(&a, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hat;

    fn hb(row: &[i64]) -> IntMatrix {
        hat(&IntMatrix::from_rows(vec![row.to_vec()]).unwrap())
    }

    fn th(v: &[usize], n: usize) -> ThetaSubset {
        ThetaSubset::new(v.iter().copied(), n).unwrap()
    }

    #[test]
    fn faces_of_a_segment() {
        assert_eq!(umbrella(&hb(&[0, 0, 1])).unwrap(), vec![th(&[], 3), th(&[3], 3), th(&[1, 2], 3), th(&[1, 2, 3], 3)]);
        assert_eq!(umbrella(&hb(&[0, 1, 2])).unwrap(), vec![th(&[], 3), th(&[1], 3), th(&[3], 3), th(&[1, 2, 3], 3)]);
    }

    #[test]
    fn identical_columns() {
        assert_eq!(umbrella(&hb(&[0, 0, 0, 0])).unwrap(), vec![th(&[], 4), th(&[1, 2, 3, 4], 4)]);
    }

    #[test]
    fn square_cone() {
        let a = IntMatrix::from_rows(vec![vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        let u = umbrella(&a).unwrap();
        assert_eq!(u.len(), 10);
        assert!(u.contains(&th(&[1, 2], 4)) && !u.contains(&th(&[1, 4], 4)));
        assert!(is_umbrella_member(&a, &th(&[3, 4], 4)).unwrap());
        assert!(is_umbrella_member(&a, &th(&[5], 5)).is_err());
    }

    #[test]
    fn confluent_rejected() {
        let a = IntMatrix::from_rows(vec![vec![2, 2, 2], vec![0, 1, 0]]).unwrap();
        assert_eq!(umbrella(&a), Err(Error::Confluent));
    }
}
