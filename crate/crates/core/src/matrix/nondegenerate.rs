use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::lattice::complete_to_unimodular;
use super::rank::{rank_mod_p, rank_rational, residues, rref_mod_p, solve_left_rational};
use super::{column_submatrix, IntMatrix, Prime, ThetaSubset};
use crate::error::{Error, Result};

/// `B` with an all-ones row prepended.
pub fn hat(b: &IntMatrix) -> IntMatrix {
    let mut rows = vec![vec![BigInt::one(); b.ncols()]];
    rows.extend(b.to_rows());
    IntMatrix::from_rows(rows).expect("nonempty")
}

pub fn is_sub_non_confluent(b: &IntMatrix) -> bool {
    rank_rational(&hat(b)) == b.nrows() + 1
}

/// Decides non-confluence by the lattice criterion: full row rank, and the
/// all-ones vector is a primitive element of the row lattice. On success
/// returns a unimodular `P` such that `P·A` has an all-ones first row.
pub fn is_non_confluent(a: &IntMatrix) -> Option<IntMatrix> {
    if rank_rational(a) != a.nrows() {
        return None;
    }
    let ones = vec![BigInt::one(); a.ncols()];
    let c = solve_left_rational(a, &ones)?;
    if c.iter().any(|x| !x.is_integer()) {
        return None;
    }
    let c: Vec<BigInt> = c.into_iter().map(|x| x.to_integer()).collect();
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_one() {
        return None;
    }
    let p = complete_to_unimodular(&c).ok()?;
    debug_assert!(p.mul(a).unwrap().row(0).iter().all(One::is_one));
    Some(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PNondegeneracy {
    pub prime: Prime,
    pub nondegenerate: bool,
    /// Violating column subsets in canonical order.
    pub failing: Vec<ThetaSubset>,
}

/// Compares rational and mod-`p` ranks of every nonempty column subset.
pub fn is_p_nondegenerate(a: &IntMatrix, p: Prime) -> PNondegeneracy {
    let failing: Vec<ThetaSubset> = ThetaSubset::all_nonempty(a.ncols())
        .into_iter()
        .filter(|t| {
            let sub = column_submatrix(a, t).expect("valid subset");
            rank_rational(&sub) != rank_mod_p(&sub, p)
        })
        .collect();
    PNondegeneracy { prime: p, nondegenerate: failing.is_empty(), failing }
}

/// Divides row `i` (0-based) by `p`; every entry must be divisible.
pub fn p_divide_row(a: &IntMatrix, i: usize, p: Prime) -> Result<IntMatrix> {
    if i >= a.nrows() {
        return Err(Error::Dimension(format!("row {i} of a {}-row matrix", a.nrows())));
    }
    let pb = BigInt::from(p.get());
    if a.row(i).iter().any(|x| !x.is_multiple_of(&pb)) {
        return Err(Error::NotDivisible { row: i, p: p.get() });
    }
    let mut out = a.clone();
    for x in out.row_mut(i) {
        *x = &*x / &pb;
    }
    Ok(out)
}

/// Exponent of `p` in a nonzero integer.
pub fn p_valuation(x: &BigInt, p: Prime) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let pb = BigInt::from(p.get());
    let mut x = x.clone();
    let mut v = 0;
    while x.is_multiple_of(&pb) {
        x /= &pb;
        v += 1;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub p_matrix: IntMatrix,
    pub divided_row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTranscript {
    pub prime: Prime,
    pub initial: IntMatrix,
    pub steps: Vec<ReductionStep>,
    #[serde(rename = "final")]
    pub final_matrix: IntMatrix,
}

impl ReductionTranscript {
    /// Re-executes every step from `initial`.
    pub fn replay(&self) -> Result<IntMatrix> {
        let mut a = self.initial.clone();
        for s in &self.steps {
            a = p_divide_row(&s.p_matrix.mul(&a)?, s.divided_row, self.prime)?;
        }
        Ok(a)
    }
}

/// Lexicographically smallest nonzero `y` in `[0,p)^m` with `y·A ≡ 0 mod p`.
fn smallest_left_kernel_vector(a: &IntMatrix, p: Prime) -> Option<Vec<u64>> {
    let pv = p.get();
    let m = a.nrows();
    let mut t = residues(&a.transpose(), p);
    let pivots = rref_mod_p(&mut t, p);
    let mut basis: Vec<Vec<u64>> = (0..m)
        .filter(|j| !pivots.contains(j))
        .map(|f| {
            let mut v = vec![0u64; m];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (pv - t[r][f]) % pv;
            }
            v
        })
        .collect();
    if basis.is_empty() {
        return None;
    }
    // The last row of the reduced kernel basis has the latest leading
    // position; its multiples are the only vectors starting there.
    let piv = rref_mod_p(&mut basis, p);
    basis.truncate(piv.len());
    basis.pop()
}

/// Repeatedly makes the first row divisible by `p` with a unimodular
/// transform and divides it, until `p` no longer divides the determinant.
pub fn square_reduce(a: &IntMatrix, p: Prime) -> Result<(IntMatrix, ReductionTranscript)> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("square_reduce needs a square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    if a.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let mut cur = a.clone();
    let mut steps = Vec::new();
    while cur.det()?.is_multiple_of(&BigInt::from(p.get())) {
        let y = smallest_left_kernel_vector(&cur, p).expect("singular mod p");
        let y: Vec<BigInt> = y.into_iter().map(BigInt::from).collect();
        let pm = complete_to_unimodular(&y)?;
        cur = p_divide_row(&pm.mul(&cur)?, 0, p)?;
        steps.push(ReductionStep { p_matrix: pm, divided_row: 0 });
    }
    let transcript = ReductionTranscript { prime: p, initial: a.clone(), steps, final_matrix: cur.clone() };
    Ok((cur, transcript))
}
