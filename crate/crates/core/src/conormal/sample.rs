//! Rational points on `S_k(A,θ)` and `S_k^∞(A,θ)`.
//!
//! Torus values `t` give `ξ_j = t^{a_j}` on `θ`, which kills every binomial.
//! The products `y_j = x_j ξ_j` range over the kernel of `A[θ]`, which kills
//! every linear generator. When `k ∈ θ` the formal `ξ_k` equals `y_k`, so
//! `y_k` is pinned to `t^{a_k}` whenever the kernel allows it; otherwise no
//! kernel vector involves `k` and `y_k = 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use super::poly::{Poly, Var};
use crate::error::{Error, Result};
use crate::matrix::{kernel_rational, IntMatrix, ThetaSubset};

const RETRIES: usize = 100;

/// Coordinates in chart `k`; `x[k] = 1` and `xi[k]` holds the value of the
/// formal `ξ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplePoint {
    pub chart: usize,
    #[serde(serialize_with = "ser_q")]
    pub x: Vec<BigRational>,
    #[serde(serialize_with = "ser_q")]
    pub xi: Vec<BigRational>,
}

fn ser_q<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
}

impl SamplePoint {
    pub fn value(&self, v: Var) -> BigRational {
        match v {
            Var::X(j) => self.x[j].clone(),
            Var::Xi(j) => self.xi[j].clone(),
        }
    }

    pub fn eval(&self, p: &Poly) -> BigRational {
        p.eval(|v| self.value(v))
    }
}

fn rational(rng: &mut impl Rng, nonzero: bool) -> BigRational {
    loop {
        let num: i64 = rng.gen_range(-6..=6);
        if num != 0 || !nonzero {
            return BigRational::new(num.into(), rng.gen_range(1i64..=5).into());
        }
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

pub fn membership_sample(
    a: &IntMatrix,
    theta: &ThetaSubset,
    k: usize,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<SamplePoint>> {
    sample(a, theta, k, count, false, rng)
}

/// Points of `S_k^∞(A,θ)`: as above but with `x_0 = 0` and `ξ_0` free.
pub fn membership_sample_infinity(
    a: &IntMatrix,
    theta: &ThetaSubset,
    k: usize,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<SamplePoint>> {
    if k == 0 {
        return Err(Error::InvalidChart("the infinity family has no chart 0".into()));
    }
    sample(a, theta, k, count, true, rng)
}

fn sample(
    a: &IntMatrix,
    theta: &ThetaSubset,
    k: usize,
    count: usize,
    infinity: bool,
    rng: &mut impl Rng,
) -> Result<Vec<SamplePoint>> {
    check(a, theta, k)?;
    let n = a.ncols();
    let members = theta.members();
    let pinned = members.iter().position(|&j| j == k);
    let kernel = if members.is_empty() {
        Vec::new()
    } else {
        let mut rows: Vec<Vec<BigInt>> = (0..a.nrows()).map(|r| members.iter().map(|&j| a.get(r, j - 1).clone()).collect()).collect();
        if pinned.is_some() {
            rows.push(vec![BigInt::one(); members.len()]);
        }
        kernel_rational(&IntMatrix::from_rows(rows)?)
    };
    let movable = pinned.is_some_and(|i| kernel.iter().any(|v| !v[i].is_zero()));
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let point = (0..RETRIES)
            .find_map(|_| draw(a, members, k, infinity, &kernel, pinned.filter(|_| movable), rng))
            .ok_or_else(|| Error::SamplingFailed(format!("{RETRIES} degenerate draws for {theta}, chart {k}")))?;
        debug_assert_eq!(point.xi[k], formal_value(&point, n, k));
        out.push(point);
    }
    Ok(out)
}

fn formal_value(p: &SamplePoint, n: usize, k: usize) -> BigRational {
    -(0..=n).filter(|&j| j != k).map(|j| &p.x[j] * &p.xi[j]).sum::<BigRational>()
}

fn draw(
    a: &IntMatrix,
    members: &[usize],
    k: usize,
    infinity: bool,
    kernel: &[Vec<BigRational>],
    pin: Option<usize>,
    rng: &mut impl Rng,
) -> Option<SamplePoint> {
    let n = a.ncols();
    let t: Vec<BigRational> = (0..a.nrows()).map(|_| rational(rng, true)).collect();
    let mono = |j: usize| -> BigRational {
        (0..a.nrows()).fold(BigRational::one(), |acc, r| {
            let e = i32::try_from(a.get(r, j - 1)).expect("small exponent");
            acc * t[r].pow(e)
        })
    };
    let mut x: Vec<BigRational> = (0..=n).map(|_| rational(rng, false)).collect();
    let mut xi = vec![BigRational::zero(); n + 1];
    for &j in members {
        xi[j] = mono(j);
    }
    if infinity {
        x[0] = BigRational::zero();
        xi[0] = rational(rng, false);
    }
    let mut y = vec![BigRational::zero(); members.len()];
    for v in kernel {
        let c = rational(rng, false);
        for (yi, vi) in y.iter_mut().zip(v) {
            *yi += &c * vi;
        }
    }
    if let Some(i) = pin {
        if y[i].is_zero() {
            return None;
        }
        let s = mono(k) / &y[i];
        for yi in &mut y {
            *yi *= &s;
        }
    }
    for (&j, yj) in members.iter().zip(&y) {
        if j != k {
            x[j] = yj / &xi[j];
        }
    }
    x[k] = BigRational::one();
    xi[k] = BigRational::zero();
    let mut p = SamplePoint { chart: k, x, xi };
    p.xi[k] = formal_value(&p, n, k);
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conormal::all_generators;
    use crate::matrix::hat;
    use rand::SeedableRng;

    #[test]
    fn points_satisfy_generators() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let a = hat(&IntMatrix::from_rows(vec![vec![0, 1, 2]]).unwrap());
        for theta in ThetaSubset::all(3) {
            for k in 0..=3 {
                for infinity in [false, true] {
                    if infinity && k == 0 {
                        continue;
                    }
                    let pts = if infinity {
                        membership_sample_infinity(&a, &theta, k, 10, &mut rng).unwrap()
                    } else {
                        membership_sample(&a, &theta, k, 10, &mut rng).unwrap()
                    };
                    for g in all_generators(&a, &theta, k, infinity).unwrap().iter().flat_map(|s| &s.generators) {
                        for p in &pts {
                            assert!(p.eval(g).is_zero(), "{g} at {p:?} for {theta} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_theta_parametrization() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let a = hat(&IntMatrix::from_rows(vec![vec![0, 1, 2]]).unwrap());
        for p in membership_sample(&a, &ThetaSubset::full(3), 0, 20, &mut rng).unwrap() {
            assert_eq!(&p.xi[1] * &p.xi[3], &p.xi[2] * &p.xi[2]);
        }
        for p in membership_sample(&a, &ThetaSubset::empty(), 0, 5, &mut rng).unwrap() {
            assert!(p.xi[1..].iter().all(Zero::is_zero));
        }
    }
}
