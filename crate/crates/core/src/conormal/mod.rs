//! Generator families of the local pieces `S_k(A,θ)` and `S_k^∞(A,θ)` of
//! the conormal supports, and their dimensions.
//!
//! In chart `k` the coordinates are `x_j = X_j/X_k` and `ξ_j = ξ(X_j/X_k)`
//! for `j ≠ k`. The symbol `ξ_k` stands for `−Σ_{j≠k} x_j ξ_j` and `x_k`
//! for 1.

mod poly;
mod sample;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{
    column_submatrix, integer_kernel_basis, mod_p_pivots, rank_mod_p, rank_rational, rational_pivots, IntMatrix,
    Prime, ThetaSubset,
};

pub use poly::{Monomial, Poly, Var};
pub use sample::{membership_sample, membership_sample_infinity, SamplePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Xi,
    L,
    Box,
    XiInf,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Family::Xi => "Xi",
            Family::L => "L",
            Family::Box => "Box",
            Family::XiInf => "XiInf",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub chart: usize,
    pub family: Family,
    pub theta: ThetaSubset,
    #[serde(serialize_with = "ser_polys")]
    pub generators: Vec<Poly>,
}

fn ser_polys<S: Serializer>(g: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    g.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn render(&self, unicode: bool) -> Vec<String> {
        self.generators.iter().map(|g| g.render(unicode)).collect()
    }
}

/// `[k=0] Box: xi1*xi3 - xi2^2`; an empty family renders as `{}`.
impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let body = if self.is_empty() { "{}".to_string() } else { self.render(false).join(", ") };
        write!(f, "[k={}] {}: {body}", self.chart, self.family)
    }
}

fn check(a: &IntMatrix, theta: &ThetaSubset, k: usize) -> Result<()> {
    if theta.max_index().is_some_and(|m| m > a.ncols()) {
        return Err(Error::InvalidTheta(format!("{theta} exceeds {} columns", a.ncols())));
    }
    if k > a.ncols() {
        return Err(Error::InvalidChart(format!("chart {k} of a {}-column matrix", a.ncols())));
    }
    Ok(())
}

/// `ξ_k = −Σ_{j≠k} x_j ξ_j`.
fn formal_xi(n: usize, k: usize) -> Poly {
    (0..=n)
        .filter(|&j| j != k)
        .fold(Poly::zero(), |acc, j| acc.sub(&Poly::var(Var::X(j)).mul(&Poly::var(Var::Xi(j)))))
}

/// Rewrites `x_k` and `ξ_k` in chart coordinates.
fn in_chart(p: &Poly, n: usize, k: usize) -> Poly {
    p.substitute(Var::X(k), &Poly::constant(1)).substitute(Var::Xi(k), &formal_xi(n, k))
}

/// `Ξ_k(A,θ)`: `ξ_j` for `j ∉ θ ∪ {k}`; with `infinity`, `ξ_0` becomes `x_0`.
pub fn xi_generators(a: &IntMatrix, theta: &ThetaSubset, k: usize, infinity: bool) -> Result<GeneratorSet> {
    check(a, theta, k)?;
    if infinity && k == 0 {
        return Err(Error::InvalidChart("the infinity family has no chart 0".into()));
    }
    let generators = (0..=a.ncols())
        .filter(|&j| j != k && !theta.contains(j))
        .map(|j| Poly::var(if infinity && j == 0 { Var::X(0) } else { Var::Xi(j) }))
        .collect();
    let family = if infinity { Family::XiInf } else { Family::Xi };
    Ok(GeneratorSet { chart: k, family, theta: theta.clone(), generators })
}

/// `Σ_{j∈θ} a_rj x_j ξ_j` for each row `r` of `A`, in row order, zeros kept.
pub fn l_rows(a: &IntMatrix, theta: &ThetaSubset, k: usize) -> Result<Vec<Poly>> {
    check(a, theta, k)?;
    let n = a.ncols();
    Ok((0..a.nrows())
        .map(|r| {
            let raw = theta.members().iter().fold(Poly::zero(), |acc, &j| {
                acc.add(&Poly::var(Var::X(j)).mul(&Poly::var(Var::Xi(j))).scale(a.get(r, j - 1)))
            });
            in_chart(&raw, n, k)
        })
        .collect())
}

/// `L_k(A,θ)` with zeros dropped, each generator normalized, and repeats
/// removed.
pub fn l_generators(a: &IntMatrix, theta: &ThetaSubset, k: usize) -> Result<GeneratorSet> {
    let mut generators: Vec<Poly> = Vec::new();
    for p in l_rows(a, theta, k)? {
        let p = p.normalized();
        if !p.is_zero() && !generators.contains(&p) {
            generators.push(p);
        }
    }
    Ok(GeneratorSet { chart: k, family: Family::L, theta: theta.clone(), generators })
}

/// `□_k(A,θ)`: the binomial `ξ^{w⁺} − ξ^{w⁻}` for each vector of the
/// Hermite basis of the integer kernel of `A[θ]`.
pub fn box_generators(a: &IntMatrix, theta: &ThetaSubset, k: usize) -> Result<GeneratorSet> {
    check(a, theta, k)?;
    let mut generators = Vec::new();
    if !theta.is_empty() {
        let sub = column_submatrix(a, theta)?;
        for w in integer_kernel_basis(&sub) {
            let side = |positive: bool| {
                Monomial::from_powers(theta.members().iter().zip(&w).filter_map(|(&j, wj)| {
                    let e = if positive { wj.clone() } else { -wj };
                    u32::try_from(e).ok().filter(|&e| e > 0).map(|e| (Var::Xi(j), e))
                }))
            };
            let b = Poly::term(1, side(true)).sub(&Poly::term(1, side(false)));
            generators.push(in_chart(&b, a.ncols(), k).normalized());
        }
    }
    Ok(GeneratorSet { chart: k, family: Family::Box, theta: theta.clone(), generators })
}

/// The families cutting out `S_k(A,θ)`, or `S_k^∞(A,θ)` with `infinity`.
pub fn all_generators(a: &IntMatrix, theta: &ThetaSubset, k: usize, infinity: bool) -> Result<[GeneratorSet; 3]> {
    Ok([xi_generators(a, theta, k, infinity)?, l_generators(a, theta, k)?, box_generators(a, theta, k)?])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub theta: ThetaSubset,
    pub k: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_p: Option<usize>,
    pub dim_lower: usize,
    pub dim_upper: usize,
    pub dim_exact: Option<usize>,
    /// Mod-`p` pivot columns `n_1, …, n_{r_p}`, 1-based.
    pub pivots_p: Vec<usize>,
    /// Columns `n_{r_p+1}, …, n_r` completing them to a rational basis.
    pub pivots_extension: Vec<usize>,
}

/// `dim S_k(A,θ)`: `n` over a field of characteristic zero; over `𝔽_p`,
/// `n + r − r_p`, less one when `k` is an extension pivot.
pub fn dim_report(a: &IntMatrix, theta: &ThetaSubset, k: usize, p: Option<Prime>) -> Result<DimReport> {
    check(a, theta, k)?;
    let n = a.ncols();
    if theta.is_empty() {
        return Ok(DimReport {
            theta: theta.clone(),
            k,
            r: 0,
            r_p: p.map(|_| 0),
            dim_lower: n,
            dim_upper: n,
            dim_exact: Some(n),
            pivots_p: Vec::new(),
            pivots_extension: Vec::new(),
        });
    }
    let sub = column_submatrix(a, theta)?;
    let r = rank_rational(&sub);
    let label = |cols: Vec<usize>| -> Vec<usize> { cols.into_iter().map(|c| theta.members()[c]).collect() };
    let Some(p) = p else {
        return Ok(DimReport {
            theta: theta.clone(),
            k,
            r,
            r_p: None,
            dim_lower: n,
            dim_upper: n,
            dim_exact: Some(n),
            pivots_p: Vec::new(),
            pivots_extension: Vec::new(),
        });
    };
    let r_p = rank_mod_p(&sub, p);
    let base = mod_p_pivots(&sub, p);
    let ext = rational_pivots(&sub, &base);
    let (pivots_p, pivots_extension) = (label(base), label(ext));
    debug_assert_eq!(pivots_p.len() + pivots_extension.len(), r);
    let upper = n + r - r_p;
    let exact = if pivots_extension.contains(&k) { upper - 1 } else { upper };
    Ok(DimReport {
        theta: theta.clone(),
        k,
        r,
        r_p: Some(r_p),
        dim_lower: n,
        dim_upper: upper,
        dim_exact: Some(exact),
        pivots_p,
        pivots_extension,
    })
}
