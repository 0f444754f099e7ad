//! Named surfaces and the registry that resolves surface spec strings such as
//! `"torus:R=2,r=1"` or `"sphere:r=1"`.
//!
//! Every preset carries an exact rational parametrization built from the
//! tangent half-angle map, so sampled points satisfy the defining polynomial
//! exactly. Custom surfaces are accepted as a JSON monomial map and have no
//! sampler.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{parse_q, q, Q};
use crate::surface::{unit_circle, Dual, Parametrization, Surface};

/// A family of surfaces, instantiated from named rational parameters.
pub trait SurfacePreset: Send + Sync {
    fn name(&self) -> &'static str;
    fn declared_type(&self) -> u8;
    /// Parameter names with default values.
    fn defaults(&self) -> Vec<(&'static str, Q)>;
    /// Builds the surface from a complete, validated-by-name parameter list
    /// (in the order of [`SurfacePreset::defaults`]).
    fn build(&self, params: &[Q]) -> Result<Surface>;
}

pub struct SurfaceRegistry {
    presets: BTreeMap<&'static str, Box<dyn SurfacePreset>>,
}

impl Default for SurfaceRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl SurfaceRegistry {
    pub fn empty() -> Self {
        Self {
            presets: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Plane));
        r.register(Box::new(Sphere));
        r.register(Box::new(Cylinder));
        r.register(Box::new(EllipticalCylinder));
        r.register(Box::new(Cone));
        r.register(Box::new(Torus));
        r.register(Box::new(Ellipsoid));
        r
    }

    pub fn register(&mut self, preset: Box<dyn SurfacePreset>) {
        self.presets.insert(preset.name(), preset);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.presets.keys().copied()
    }

    pub fn get(&self, name: &str) -> Option<&dyn SurfacePreset> {
        self.presets.get(name).map(|b| b.as_ref())
    }

    /// Instantiates `name`, overriding defaults with `params`.
    pub fn preset(&self, name: &str, params: &[(&str, Q)]) -> Result<Surface> {
        let preset = self
            .get(name)
            .ok_or_else(|| Error::UnknownSurface(name.to_string()))?;
        let defaults = preset.defaults();
        let mut values: Vec<Q> = defaults.iter().map(|(_, v)| v.clone()).collect();
        for (key, value) in params {
            let idx = defaults.iter().position(|(n, _)| n == key).ok_or_else(|| {
                Error::InvalidSurfaceParams(format!("{name} has no parameter '{key}'"))
            })?;
            values[idx] = value.clone();
        }
        preset.build(&values)
    }

    /// Parses `name[:key=value,...]`, or a custom surface given as JSON
    /// (inline, starting with `{`).
    pub fn parse_spec(&self, spec: &str) -> Result<Surface> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            return parse_custom(spec);
        }
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params = Vec::new();
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
            params.push((k.trim(), parse_q(v)?));
        }
        self.preset(name.trim(), &params)
    }
}

/// Convenience wrapper over the builtin registry.
pub fn preset(name: &str, params: &[(&str, Q)]) -> Result<Surface> {
    SurfaceRegistry::builtin().preset(name, params)
}

pub fn parse_surface(spec: &str) -> Result<Surface> {
    SurfaceRegistry::builtin().parse_spec(spec)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CustomJson {
    Full {
        poly: BTreeMap<String, String>,
        #[serde(default, rename = "type")]
        declared_type: Option<u8>,
        #[serde(default)]
        name: Option<String>,
    },
    Map(BTreeMap<String, String>),
}

/// Custom surface: either a bare monomial → coefficient map, or
/// `{"poly": {...}, "type": k, "name": "..."}`.
pub fn parse_custom(json: &str) -> Result<Surface> {
    let parsed: CustomJson =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("custom surface: {e}")))?;
    let (map, declared_type, name) = match parsed {
        CustomJson::Full {
            poly,
            declared_type,
            name,
        } => (poly, declared_type, name),
        CustomJson::Map(map) => (map, None, None),
    };
    let poly = Polynomial::from_map(&map)?;
    Surface::new(
        name.unwrap_or_else(|| "custom".into()),
        poly,
        declared_type,
        Vec::new(),
        None,
    )
}

fn xyz() -> [Polynomial; 3] {
    [Polynomial::var(0), Polynomial::var(1), Polynomial::var(2)]
}

fn positive(name: &str, key: &str, v: &Q) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidSurfaceParams(format!(
            "{name}: {key} must be positive"
        )))
    }
}

fn named(defaults: &[(&'static str, Q)], values: &[Q]) -> Vec<(String, Q)> {
    defaults
        .iter()
        .zip(values)
        .map(|((n, _), v)| (n.to_string(), v.clone()))
        .collect()
}

struct Plane;
struct PlaneMap;

impl Parametrization for PlaneMap {
    fn eval(&self, u: &Dual, v: &Dual) -> [Dual; 3] {
        [u.clone(), v.clone(), Dual::constant(Q::zero())]
    }
}

impl SurfacePreset for Plane {
    fn name(&self) -> &'static str {
        "plane"
    }
    fn declared_type(&self) -> u8 {
        3
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        Vec::new()
    }
    fn build(&self, _: &[Q]) -> Result<Surface> {
        let [_, _, z] = xyz();
        Surface::new("plane", z, Some(3), Vec::new(), Some(Arc::new(PlaneMap)))
    }
}

/// Lines through a fixed rational point `(r, 0, 0)` of the quadric
/// `x^2 + b y^2 + c z^2 = r^2` meet it once more at
/// `(r(1 - l), r l u, r l v)` with `l = 2 / (1 + b u^2 + c v^2)`.
struct QuadricMap {
    r: Q,
    b: Q,
    c: Q,
}

impl Parametrization for QuadricMap {
    fn eval(&self, u: &Dual, v: &Dual) -> [Dual; 3] {
        let denom = &(&Dual::one() + &u.square().scale(&self.b)) + &v.square().scale(&self.c);
        let l = &Dual::constant(q(2)) / &denom;
        [
            (&Dual::one() - &l).scale(&self.r),
            (&l * u).scale(&self.r),
            (&l * v).scale(&self.r),
        ]
    }
}

struct Sphere;

impl SurfacePreset for Sphere {
    fn name(&self) -> &'static str {
        "sphere"
    }
    fn declared_type(&self) -> u8 {
        3
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        vec![("r", q(1))]
    }
    fn build(&self, p: &[Q]) -> Result<Surface> {
        let r = &p[0];
        positive("sphere", "r", r)?;
        let [x, y, z] = xyz();
        let poly = x.pow(2) + y.pow(2) + z.pow(2) - Polynomial::constant(r * r);
        let map = QuadricMap {
            r: r.clone(),
            b: Q::one(),
            c: Q::one(),
        };
        Surface::new(
            "sphere",
            poly,
            Some(3),
            named(&self.defaults(), p),
            Some(Arc::new(map)),
        )
    }
}

struct Ellipsoid;

impl SurfacePreset for Ellipsoid {
    fn name(&self) -> &'static str {
        "ellipsoid"
    }
    fn declared_type(&self) -> u8 {
        0
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        Vec::new()
    }
    fn build(&self, _: &[Q]) -> Result<Surface> {
        let [x, y, z] = xyz();
        let poly =
            x.pow(2) + y.pow(2).scale(&q(2)) + z.pow(2).scale(&q(3)) - Polynomial::constant(q(1));
        let map = QuadricMap {
            r: q(1),
            b: q(2),
            c: q(3),
        };
        Surface::new("ellipsoid", poly, Some(0), Vec::new(), Some(Arc::new(map)))
    }
}

/// `(a c(u), b s(u), v)`.
struct CylinderMap {
    a: Q,
    b: Q,
}

impl Parametrization for CylinderMap {
    fn eval(&self, u: &Dual, v: &Dual) -> [Dual; 3] {
        let (c, s) = unit_circle(u);
        [c.scale(&self.a), s.scale(&self.b), v.clone()]
    }
}

struct Cylinder;

impl SurfacePreset for Cylinder {
    fn name(&self) -> &'static str {
        "cylinder"
    }
    fn declared_type(&self) -> u8 {
        2
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        vec![("r", q(1))]
    }
    fn build(&self, p: &[Q]) -> Result<Surface> {
        let r = &p[0];
        positive("cylinder", "r", r)?;
        let [x, y, _] = xyz();
        let poly = x.pow(2) + y.pow(2) - Polynomial::constant(r * r);
        let map = CylinderMap {
            a: r.clone(),
            b: r.clone(),
        };
        Surface::new(
            "cylinder",
            poly,
            Some(2),
            named(&self.defaults(), p),
            Some(Arc::new(map)),
        )
    }
}

struct EllipticalCylinder;

impl SurfacePreset for EllipticalCylinder {
    fn name(&self) -> &'static str {
        "elliptical_cylinder"
    }
    fn declared_type(&self) -> u8 {
        1
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        vec![("a", q(2)), ("b", q(1))]
    }
    fn build(&self, p: &[Q]) -> Result<Surface> {
        let (a, b) = (&p[0], &p[1]);
        positive("elliptical_cylinder", "a", a)?;
        positive("elliptical_cylinder", "b", b)?;
        if a == b {
            return Err(Error::InvalidSurfaceParams(
                "elliptical_cylinder: a = b is a circular cylinder".into(),
            ));
        }
        let [x, y, _] = xyz();
        let poly = x.pow(2).scale(&(Q::one() / (a * a))) + y.pow(2).scale(&(Q::one() / (b * b)))
            - Polynomial::constant(Q::one());
        let map = CylinderMap {
            a: a.clone(),
            b: b.clone(),
        };
        Surface::new(
            "elliptical_cylinder",
            poly,
            Some(1),
            named(&self.defaults(), p),
            Some(Arc::new(map)),
        )
    }
}

/// `(v c(u), v s(u), v)`, apex `v = 0` excluded.
struct ConeMap;

impl Parametrization for ConeMap {
    fn eval(&self, u: &Dual, v: &Dual) -> [Dual; 3] {
        let (c, s) = unit_circle(u);
        [&c * v, &s * v, v.clone()]
    }

    fn accepts(&self, _u: &Q, v: &Q) -> bool {
        !v.is_zero()
    }
}

struct Cone;

impl SurfacePreset for Cone {
    fn name(&self) -> &'static str {
        "cone"
    }
    fn declared_type(&self) -> u8 {
        1
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        Vec::new()
    }
    fn build(&self, _: &[Q]) -> Result<Surface> {
        let [x, y, z] = xyz();
        let poly = x.pow(2) + y.pow(2) - z.pow(2);
        Surface::new("cone", poly, Some(1), Vec::new(), Some(Arc::new(ConeMap)))
    }
}

/// Circle of radius `r` in the meridian half-plane at angle `v`, centred at
/// distance `R` from the axis.
struct TorusMap {
    big: Q,
    small: Q,
}

impl Parametrization for TorusMap {
    fn eval(&self, u: &Dual, v: &Dual) -> [Dual; 3] {
        let (cu, su) = unit_circle(u);
        let (cv, sv) = unit_circle(v);
        let radial = &Dual::constant(self.big.clone()) + &cu.scale(&self.small);
        [&radial * &cv, &radial * &sv, su.scale(&self.small)]
    }
}

struct Torus;

impl SurfacePreset for Torus {
    fn name(&self) -> &'static str {
        "torus"
    }
    fn declared_type(&self) -> u8 {
        1
    }
    fn defaults(&self) -> Vec<(&'static str, Q)> {
        vec![("R", q(2)), ("r", q(1))]
    }
    fn build(&self, p: &[Q]) -> Result<Surface> {
        let (big, small) = (&p[0], &p[1]);
        positive("torus", "r", small)?;
        if small >= big {
            return Err(Error::InvalidSurfaceParams("torus: need 0 < r < R".into()));
        }
        let [x, y, z] = xyz();
        let rho2 = x.pow(2) + y.pow(2);
        let inner = &(&rho2 + &z.pow(2)) + &Polynomial::constant(big * big - small * small);
        let poly = inner.pow(2) - rho2.scale(&(q(4) * big * big));
        let map = TorusMap {
            big: big.clone(),
            small: small.clone(),
        };
        Surface::new(
            "torus",
            poly,
            Some(1),
            named(&self.defaults(), p),
            Some(Arc::new(map)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use crate::surface::{dot, Point3};
    use rand::SeedableRng;

    fn all_presets() -> Vec<Surface> {
        let reg = SurfaceRegistry::builtin();
        reg.names().map(|n| reg.preset(n, &[]).unwrap()).collect()
    }

    #[test]
    fn declared_types() {
        let expect = [
            ("plane", 3),
            ("sphere", 3),
            ("cylinder", 2),
            ("elliptical_cylinder", 1),
            ("cone", 1),
            ("torus", 1),
            ("ellipsoid", 0),
        ];
        for (name, k) in expect {
            assert_eq!(preset(name, &[]).unwrap().declared_type, Some(k), "{name}");
        }
    }

    #[test]
    fn torus_polynomial() {
        let s = parse_surface("torus:R=2,r=1").unwrap();
        // (x^2+y^2+z^2+3)^2 - 16(x^2+y^2), checked at a few points by direct evaluation
        for p in [
            [q(3), q(0), q(0)],
            [q(1), q(2), q_frac(1, 2)],
            [q(0), q(0), q(0)],
        ] {
            let s2 = &p[0] * &p[0] + &p[1] * &p[1] + &p[2] * &p[2];
            let rho2 = &p[0] * &p[0] + &p[1] * &p[1];
            let direct = (&s2 + q(3)) * (&s2 + q(3)) - q(16) * rho2;
            assert_eq!(s.poly.eval(&p), direct);
        }
    }

    #[test]
    fn invalid_params() {
        assert!(matches!(
            parse_surface("torus:R=1,r=2"),
            Err(Error::InvalidSurfaceParams(_))
        ));
        assert!(matches!(
            parse_surface("elliptical_cylinder:a=1,b=1"),
            Err(Error::InvalidSurfaceParams(_))
        ));
        assert!(matches!(
            parse_surface("sphere:r=0"),
            Err(Error::InvalidSurfaceParams(_))
        ));
        assert!(matches!(
            parse_surface("sphere:q=1"),
            Err(Error::InvalidSurfaceParams(_))
        ));
        assert!(matches!(
            parse_surface("helicoid"),
            Err(Error::UnknownSurface(_))
        ));
    }

    #[test]
    fn parametrization_fixed_points() {
        let torus = preset("torus", &[]).unwrap();
        assert_eq!(
            torus.point_at(&q(0), &q(0)).unwrap().unwrap(),
            Point3::new(q(3), q(0), q(0))
        );
        let cone = preset("cone", &[]).unwrap();
        assert_eq!(
            cone.point_at(&q(0), &q(1)).unwrap().unwrap(),
            Point3::new(q(1), q(0), q(1))
        );
        assert_eq!(cone.point_at(&q(0), &q(0)).unwrap(), None);
        let cyl = preset("cylinder", &[]).unwrap();
        assert_eq!(
            cyl.point_at(&q(0), &q(0)).unwrap().unwrap(),
            Point3::new(q(1), q(0), q(0))
        );
    }

    #[test]
    fn normals() {
        let sphere = preset("sphere", &[]).unwrap();
        assert_eq!(
            sphere.normal(&Point3::new(q(1), q(0), q(0))).unwrap(),
            [q(2), q(0), q(0)]
        );
        let cone = preset("cone", &[]).unwrap();
        assert_eq!(
            cone.normal(&Point3::new(q(0), q(0), q(0))),
            Err(Error::SingularPoint { index: 0 })
        );
        assert_eq!(
            cone.normal(&Point3::new(q(1), q(0), q(0))),
            Err(Error::OffSurface { index: 0 })
        );
        // d/dx [(S+3)^2 - 16(x^2+y^2)] = 4x(S+3) - 32x = 144 - 96 at (3,0,0)
        let torus = preset("torus", &[]).unwrap();
        assert_eq!(
            torus.normal(&Point3::new(q(3), q(0), q(0))).unwrap(),
            [q(48), q(0), q(0)]
        );
    }

    #[test]
    fn samples_lie_on_surface_and_normals_are_orthogonal_to_tangents() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for s in all_presets() {
            for _ in 0..200 {
                let (u, v) = (
                    crate::rational::random_q(&mut rng),
                    crate::rational::random_q(&mut rng),
                );
                let Some((p, [tu, tv])) = s.point_and_tangents(&u, &v).unwrap() else {
                    continue;
                };
                assert!(s.contains(&p), "{}", s.name);
                let n = s.normal(&p).unwrap();
                assert!(dot(&n, &tu).is_zero(), "{}", s.name);
                assert!(dot(&n, &tv).is_zero(), "{}", s.name);
            }
        }
    }

    #[test]
    fn custom_surface_json() {
        let s = SurfaceRegistry::builtin()
            .parse_spec(r#"{"x^2":"1","y^2":"1","1":"-1"}"#)
            .unwrap();
        assert!(!s.has_sampler());
        assert_eq!(s.declared_type, None);
        assert!(s.contains(&Point3::new(q_frac(3, 5), q_frac(4, 5), q(17))));
        let s = parse_custom(r#"{"poly":{"x^2":"1/4","y^2":"1","1":"-1"},"type":1}"#).unwrap();
        assert_eq!(s.declared_type, Some(1));
        assert!(parse_custom(r#"{"w":"1"}"#).is_err());
        assert!(parse_custom(r#"{}"#).is_err());
    }
}
