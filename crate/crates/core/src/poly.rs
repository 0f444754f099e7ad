//! Sparse polynomials in `x, y, z` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, format_q, parse_q, to_f64, Q};

/// Exponents of `x, y, z`.
pub type Monomial = [u32; 3];

const VARS: [char; 3] = ['x', 'y', 'z'];

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(exps: Monomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    /// The coordinate `x` (0), `y` (1) or `z` (2).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    fn add_term(&mut self, exps: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (e, a) in &self.terms {
            out.add_term(*e, a * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Q::one()), |acc, _| &acc * self)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, a) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.add_term(d, a * Q::from_integer(e[var].into()));
        }
        out
    }

    /// Exact value at `p`, computed over the integers after clearing
    /// denominators so that only the final result is reduced.
    pub fn eval(&self, p: &[Q; 3]) -> Q {
        if self.terms.is_empty() {
            return Q::zero();
        }
        let d = common_denominator(p.iter());
        let ints: Vec<BigInt> = p
            .iter()
            .map(|x| (x * Q::from_integer(d.clone())).to_integer())
            .collect();
        let max = self.max_exponents();
        let deg = self.degree();
        let powers = |base: &BigInt, top: u32| {
            let mut v = vec![BigInt::one()];
            for k in 1..=top as usize {
                let next = &v[k - 1] * base;
                v.push(next);
            }
            v
        };
        let xyz: Vec<Vec<BigInt>> = (0..3).map(|i| powers(&ints[i], max[i])).collect();
        let dpow = powers(&d, deg);
        let l = common_denominator(self.terms.values());
        let mut acc = BigInt::zero();
        for (e, a) in &self.terms {
            let c = (a * Q::from_integer(l.clone())).to_integer();
            let rest = deg - e.iter().sum::<u32>();
            acc += c
                * &xyz[0][e[0] as usize]
                * &xyz[1][e[1] as usize]
                * &xyz[2][e[2] as usize]
                * &dpow[rest as usize];
        }
        Q::new(acc, l * &dpow[deg as usize])
    }

    pub fn eval_f64(&self, p: &[f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, a)| {
                to_f64(a) * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32)
            })
            .sum()
    }

    pub fn gradient(&self) -> [Polynomial; 3] {
        [self.derivative(0), self.derivative(1), self.derivative(2)]
    }

    fn max_exponents(&self) -> [u32; 3] {
        let mut m = [0; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                m[i] = m[i].max(e[i]);
            }
        }
        m
    }

    /// Parses a monomial key such as `"x^2*y"`, `"x^2 y z^3"` or `"1"`.
    pub fn parse_monomial(key: &str) -> Result<Monomial> {
        let bad = || Error::Parse(format!("invalid monomial '{key}'"));
        let key = key.trim();
        let mut e = [0u32; 3];
        if key == "1" || key.is_empty() {
            return Ok(e);
        }
        for factor in key.split(|c: char| c == '*' || c.is_whitespace()) {
            if factor.is_empty() {
                continue;
            }
            let (var, exp) = match factor.split_once('^') {
                Some((v, k)) => (v.trim(), k.trim().parse::<u32>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            let idx = match var {
                "x" => 0,
                "y" => 1,
                "z" => 2,
                _ => return Err(bad()),
            };
            e[idx] += exp;
        }
        Ok(e)
    }

    /// Builds a polynomial from a monomial → coefficient map with rational
    /// coefficients in `"p/q"` form.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut p = Self::zero();
        for (k, c) in map {
            p.add_term(Self::parse_monomial(k)?, parse_q(c)?);
        }
        Ok(p)
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| (monomial_key(e), format_q(c)))
            .collect()
    }
}

fn monomial_key(e: &Monomial) -> String {
    let parts: Vec<String> = (0..3)
        .filter(|&i| e[i] > 0)
        .map(|i| match e[i] {
            1 => VARS[i].to_string(),
            k => format!("{}^{k}", VARS[i]),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| std::cmp::Reverse((e.iter().sum::<u32>(), **e)));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}){}", format_q(c), {
                let k = monomial_key(e);
                if k == "1" {
                    String::new()
                } else {
                    format!("*{k}")
                }
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Q::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);
