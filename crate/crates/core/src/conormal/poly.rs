//! Sparse polynomials with integer coefficients in chart coordinates
//! `x_j = X_j/X_k` and `ξ_j = ξ(X_j/X_k)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Variables order as `x0 < x1 < … < ξ0 < ξ1 < …`; earlier variables are
/// more significant in the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    Xi(usize),
}

impl Var {
    fn name(self, unicode: bool) -> String {
        match (self, unicode) {
            (Var::X(j), _) => format!("x{j}"),
            (Var::Xi(j), false) => format!("xi{j}"),
            (Var::Xi(j), true) => format!("ξ{j}"),
        }
    }
}

/// A power product; factors sorted by variable, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *m.entry(v).or_insert(0) += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(&other.0).copied())
    }

    fn render(&self, unicode: bool) -> String {
        let sep = if unicode { "·" } else { "*" };
        self.0
            .iter()
            .map(|&(v, e)| match e {
                1 => v.name(unicode),
                _ if unicode => format!("{}{}", v.name(true), superscript(e)),
                _ => format!("{}^{e}", v.name(false)),
            })
            .collect::<Vec<_>>()
            .join(sep)
    }
}

fn superscript(e: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    e.to_string().chars().map(|c| DIGITS[c.to_digit(10).expect("digit") as usize]).collect()
}

/// Lexicographic: the first variable where exponents differ decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        for i in 0..a.len().min(b.len()) {
            let ((va, ea), (vb, eb)) = (a[i], b[i]);
            if va != vb {
                return vb.cmp(&va);
            }
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms keyed by monomial; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(BTreeMap<Monomial, BigInt>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Poly::term(1, Monomial::from_powers([(v, 1)]))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c.into());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        let e = self.0.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Terms from the leading monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.0.iter().rev()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, x)| (m.clone(), x * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(1), |acc, _| acc.mul(self))
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, v: Var, by: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let e = m.exponent(v);
            let rest = Poly::term(c.clone(), Monomial(m.0.iter().copied().filter(|&(w, _)| w != v).collect()));
            out = out.add(&rest.mul(&by.pow(e)));
        }
        out
    }

    pub fn eval(&self, value: impl Fn(Var) -> BigRational) -> BigRational {
        self.0
            .iter()
            .map(|(m, c)| {
                m.0.iter().fold(BigRational::from_integer(c.clone()), |acc, &(v, e)| acc * value(v).pow(e as i32))
            })
            .sum()
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn normalized(&self) -> Poly {
        let g = self.0.values().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Poly::zero();
        }
        let lead_negative = self.terms().next().is_some_and(|(_, c)| c.is_negative());
        let g = if lead_negative { -g } else { g };
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c / &g)).collect())
    }

    pub fn render(&self, unicode: bool) -> String {
        let (plus, minus, lead_minus) = if unicode { (" + ", " − ", "−") } else { (" + ", " - ", "-") };
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let sign = if c.is_negative() {
                if i == 0 {
                    lead_minus
                } else {
                    minus
                }
            } else if i == 0 {
                ""
            } else {
                plus
            };
            s.push_str(sign);
            let a = c.abs();
            let mono = m.render(unicode);
            match (a.is_one(), mono.is_empty()) {
                (_, true) => s.push_str(&a.to_string()),
                (true, false) => s.push_str(&mono),
                (false, false) => {
                    s.push_str(&a.to_string());
                    s.push_str(if unicode { "·" } else { "*" });
                    s.push_str(&mono);
                }
            }
        }
        s
    }
}

/// ASCII form, e.g. `xi1*xi3 - xi2^2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}
