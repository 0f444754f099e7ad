//! Algebraic surfaces `m(x, y, z) = 0` with exact rational points.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{random_q, to_f64, Q};

/// A point of `Q^3`, serialized as `["p/q", "p/q", "p/q"]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Point3(pub [Q; 3]);

impl Point3 {
    pub fn new(x: Q, y: Q, z: Q) -> Self {
        Self([x, y, z])
    }

    pub fn coords(&self) -> &[Q; 3] {
        &self.0
    }

    pub fn sub(&self, other: &Point3) -> [Q; 3] {
        std::array::from_fn(|i| &self.0[i] - &other.0[i])
    }

    pub fn to_f64(&self) -> [f64; 3] {
        std::array::from_fn(|i| to_f64(&self.0[i]))
    }
}

impl Serialize for Point3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(crate::rational::format_q).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts: [String; 3] = Deserialize::deserialize(d)?;
        let mut out: [Q; 3] = Default::default();
        for (o, s) in out.iter_mut().zip(&parts) {
            *o = crate::rational::parse_q(s).map_err(serde::de::Error::custom)?;
        }
        Ok(Point3(out))
    }
}

pub fn dot(a: &[Q; 3], b: &[Q; 3]) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// A rational value together with its partial derivatives in the two
/// parametrization variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual {
    pub val: Q,
    pub du: Q,
    pub dv: Q,
}

impl Dual {
    pub fn constant(val: Q) -> Self {
        Self {
            val,
            du: Q::zero(),
            dv: Q::zero(),
        }
    }

    pub fn u(val: Q) -> Self {
        Self {
            val,
            du: Q::one(),
            dv: Q::zero(),
        }
    }

    pub fn v(val: Q) -> Self {
        Self {
            val,
            du: Q::zero(),
            dv: Q::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self {
            val: &self.val * c,
            du: &self.du * c,
            dv: &self.dv * c,
        }
    }
}

impl Add for &Dual {
    type Output = Dual;
    fn add(self, r: &Dual) -> Dual {
        Dual {
            val: &self.val + &r.val,
            du: &self.du + &r.du,
            dv: &self.dv + &r.dv,
        }
    }
}

impl Sub for &Dual {
    type Output = Dual;
    fn sub(self, r: &Dual) -> Dual {
        Dual {
            val: &self.val - &r.val,
            du: &self.du - &r.du,
            dv: &self.dv - &r.dv,
        }
    }
}

impl Mul for &Dual {
    type Output = Dual;
    fn mul(self, r: &Dual) -> Dual {
        Dual {
            val: &self.val * &r.val,
            du: &self.du * &r.val + &self.val * &r.du,
            dv: &self.dv * &r.val + &self.val * &r.dv,
        }
    }
}

impl Div for &Dual {
    type Output = Dual;
    fn div(self, r: &Dual) -> Dual {
        let denom = &r.val * &r.val;
        Dual {
            val: &self.val / &r.val,
            du: (&self.du * &r.val - &self.val * &r.du) / &denom,
            dv: (&self.dv * &r.val - &self.val * &r.dv) / &denom,
        }
    }
}

impl Neg for &Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            val: -&self.val,
            du: -&self.du,
            dv: -&self.dv,
        }
    }
}

/// Tangent half-angle map `t -> ((1-t^2)/(1+t^2), 2t/(1+t^2))` onto the unit circle.
pub fn unit_circle(t: &Dual) -> (Dual, Dual) {
    let t2 = t.square();
    let denom = &Dual::one() + &t2;
    let c = &(&Dual::one() - &t2) / &denom;
    let s = &t.scale(&Q::from_integer(2.into())) / &denom;
    (c, s)
}

/// A rational map `(u, v) -> M`, evaluated on dual numbers so that the two
/// tangent directions come out alongside the point.
pub trait Parametrization: Send + Sync {
    fn eval(&self, u: &Dual, v: &Dual) -> [Dual; 3];

    /// Parameters that must be rejected before evaluation.
    fn accepts(&self, _u: &Q, _v: &Q) -> bool {
        true
    }
}

/// An algebraic surface with an optional exact sampler.
#[derive(Clone)]
pub struct Surface {
    pub name: String,
    pub poly: Polynomial,
    /// Declared freedom number, when known.
    pub declared_type: Option<u8>,
    pub params: Vec<(String, Q)>,
    gradient: [Polynomial; 3],
    sampler: Option<Arc<dyn Parametrization>>,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface")
            .field("name", &self.name)
            .field("poly", &self.poly)
            .field("declared_type", &self.declared_type)
            .field("params", &self.params)
            .field("sampler", &self.sampler.is_some())
            .finish()
    }
}

impl Surface {
    pub fn new(
        name: impl Into<String>,
        poly: Polynomial,
        declared_type: Option<u8>,
        params: Vec<(String, Q)>,
        sampler: Option<Arc<dyn Parametrization>>,
    ) -> Result<Self> {
        let name = name.into();
        if poly.is_zero() {
            return Err(Error::InvalidSurfaceParams(format!(
                "{name}: zero polynomial"
            )));
        }
        if let Some(k) = declared_type {
            if k > 3 {
                return Err(Error::InvalidK(k));
            }
        }
        let gradient = poly.gradient();
        Ok(Self {
            name,
            poly,
            declared_type,
            params,
            gradient,
            sampler,
        })
    }

    pub fn has_sampler(&self) -> bool {
        self.sampler.is_some()
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.poly.eval(p.coords()).is_zero()
    }

    /// Unnormalized normal `grad m(p)`; fails off the surface or at singular points.
    pub fn normal(&self, p: &Point3) -> Result<[Q; 3]> {
        self.normal_indexed(p, 0)
    }

    pub(crate) fn normal_indexed(&self, p: &Point3, index: usize) -> Result<[Q; 3]> {
        if !self.contains(p) {
            return Err(Error::OffSurface { index });
        }
        let n: [Q; 3] = std::array::from_fn(|i| self.gradient[i].eval(p.coords()));
        if n.iter().all(Zero::is_zero) {
            return Err(Error::SingularPoint { index });
        }
        Ok(n)
    }

    pub fn normal_f64(&self, p: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.gradient[i].eval_f64(p))
    }

    fn parametrization(&self) -> Result<&dyn Parametrization> {
        self.sampler
            .as_deref()
            .ok_or_else(|| Error::NoSampler(self.name.clone()))
    }

    /// Point with parameters `(u, v)`, or `None` if the parameters are rejected.
    pub fn point_at(&self, u: &Q, v: &Q) -> Result<Option<Point3>> {
        Ok(self.point_and_tangents(u, v)?.map(|(p, _)| p))
    }

    /// Point plus the partial derivatives of the parametrization in `u` and `v`.
    pub fn point_and_tangents(&self, u: &Q, v: &Q) -> Result<Option<(Point3, [[Q; 3]; 2])>> {
        let param = self.parametrization()?;
        if !param.accepts(u, v) {
            return Ok(None);
        }
        let [x, y, z] = param.eval(&Dual::u(u.clone()), &Dual::v(v.clone()));
        let point = Point3::new(x.val, y.val, z.val);
        Ok(Some((point, [[x.du, y.du, z.du], [x.dv, y.dv, z.dv]])))
    }

    /// Random exact point with nonzero normal.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point3> {
        self.parametrization()?;
        loop {
            let (u, v) = (random_q(rng), random_q(rng));
            if let Some(p) = self.point_at(&u, &v)? {
                if self.normal(&p).is_ok() {
                    return Ok(p);
                }
            }
        }
    }

    /// `n` pairwise distinct random points.
    pub fn sample_placement<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<Point3>> {
        let mut seen = HashSet::with_capacity(n);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let p = self.sample_point(rng)?;
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(out)
    }
}
