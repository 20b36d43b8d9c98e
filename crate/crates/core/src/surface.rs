//! `P1 x P1` with divisors supported on axis-parallel lines.
//!
//! A vertical component `V_a` is the line `x = a`, a horizontal one `H_b` is
//! `y = b`; either position may be infinity.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{FactoredFunction1D, P1Point, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `x = const`
    Vertical,
    /// `y = const`
    Horizontal,
}

impl Orientation {
    pub fn transverse(self) -> Self {
        match self {
            Orientation::Vertical => Orientation::Horizontal,
            Orientation::Horizontal => Orientation::Vertical,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub orientation: Orientation,
    pub position: P1Point,
}

impl SurfaceComponent {
    pub fn vertical(a: P1Point) -> Self {
        SurfaceComponent { orientation: Orientation::Vertical, position: a }
    }

    pub fn horizontal(b: P1Point) -> Self {
        SurfaceComponent { orientation: Orientation::Horizontal, position: b }
    }

    /// The unique common point with a transverse component.
    pub fn meet(&self, other: &SurfaceComponent) -> Option<(P1Point, P1Point)> {
        match (self.orientation, other.orientation) {
            (Orientation::Vertical, Orientation::Horizontal) => {
                Some((self.position.clone(), other.position.clone()))
            }
            (Orientation::Horizontal, Orientation::Vertical) => {
                Some((other.position.clone(), self.position.clone()))
            }
            _ => None,
        }
    }

    pub fn contains(&self, p: &(P1Point, P1Point)) -> bool {
        match self.orientation {
            Orientation::Vertical => p.0 == self.position,
            Orientation::Horizontal => p.1 == self.position,
        }
    }
}

impl fmt::Display for SurfaceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.orientation {
            Orientation::Vertical => write!(f, "V[{}]", self.position),
            Orientation::Horizontal => write!(f, "H[{}]", self.position),
        }
    }
}

/// `constant * prod (x - a_i)^p_i * prod (y - b_j)^q_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFunction {
    pub constant: Rat,
    pub xfactors: Vec<(Rat, i64)>,
    pub yfactors: Vec<(Rat, i64)>,
}

impl SurfaceFunction {
    pub fn new(constant: Rat, xfactors: Vec<(Rat, i64)>, yfactors: Vec<(Rat, i64)>) -> Result<Self> {
        let f = SurfaceFunction { constant, xfactors, yfactors };
        f.validate()?;
        Ok(f.normalized())
    }

    pub fn constant_fn(c: Rat) -> Result<Self> {
        Self::new(c, vec![], vec![])
    }

    /// Small-integer convenience constructor used heavily in tests.
    pub fn from_ints(c: i64, xs: &[(i64, i64)], ys: &[(i64, i64)]) -> Result<Self> {
        let conv = |v: &[(i64, i64)]| v.iter().map(|&(r, e)| (Rat::from_int(r), e)).collect();
        Self::new(Rat::from_int(c), conv(xs), conv(ys))
    }

    pub fn validate(&self) -> Result<()> {
        FactoredFunction1D::new(self.constant.clone(), self.xfactors.clone())
            .map_err(|e| Error::Invalid(format!("x factors: {}", inner(&e))))?;
        FactoredFunction1D::new(Rat::one(), self.yfactors.clone())
            .map_err(|e| Error::Invalid(format!("y factors: {}", inner(&e))))?;
        Ok(())
    }

    fn normalized(mut self) -> Self {
        self.xfactors.sort_by(|a, b| a.0.cmp(&b.0));
        self.yfactors.sort_by(|a, b| a.0.cmp(&b.0));
        self
    }

    /// Monic x-part as a one-variable function.
    pub fn x_part(&self) -> FactoredFunction1D {
        FactoredFunction1D::new(Rat::one(), self.xfactors.clone()).expect("validated")
    }

    pub fn y_part(&self) -> FactoredFunction1D {
        FactoredFunction1D::new(Rat::one(), self.yfactors.clone()).expect("validated")
    }

    pub fn part(&self, o: Orientation) -> FactoredFunction1D {
        match o {
            Orientation::Vertical => self.x_part(),
            Orientation::Horizontal => self.y_part(),
        }
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Result<Rat> {
        Ok(&self.constant * &self.x_part().eval(x)? * self.y_part().eval(y)?)
    }

    pub fn mul(&self, o: &SurfaceFunction) -> SurfaceFunction {
        let x = self.x_part().mul(&o.x_part());
        let y = self.y_part().mul(&o.y_part());
        SurfaceFunction {
            constant: &self.constant * &o.constant,
            xfactors: x.factors().to_vec(),
            yfactors: y.factors().to_vec(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.xfactors.is_empty() && self.yfactors.is_empty()
    }
}

fn inner(e: &Error) -> String {
    match e {
        Error::Invalid(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Order of `f` along a component; lines at infinity get minus the degree.
pub fn order_along(f: &SurfaceFunction, c: &SurfaceComponent) -> i64 {
    f.part(c.orientation).order_at(&c.position)
}

/// Three functions and the distinguished curve `C0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceInstance {
    pub functions: [SurfaceFunction; 3],
    pub curve: SurfaceComponent,
}

impl SurfaceInstance {
    pub fn new(functions: [SurfaceFunction; 3], curve: SurfaceComponent) -> Self {
        SurfaceInstance { functions, curve }
    }

    /// `(f2, f3, f1)` on the same curve.
    pub fn cycled(&self) -> Self {
        let [a, b, c] = self.functions.clone();
        SurfaceInstance { functions: [b, c, a], curve: self.curve.clone() }
    }

    /// Components carrying nonzero order for some function, sorted.
    pub fn divisor_components(&self) -> Vec<SurfaceComponent> {
        let mut out = Vec::new();
        for o in [Orientation::Vertical, Orientation::Horizontal] {
            for p in self.axis_support(o) {
                out.push(SurfaceComponent { orientation: o, position: p });
            }
        }
        out
    }

    fn axis_support(&self, o: Orientation) -> Vec<P1Point> {
        let mut pts: Vec<P1Point> = self
            .functions
            .iter()
            .flat_map(|f| f.part(o).divisor_support())
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

/// A point of `C0` together with the transverse component through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub point: (P1Point, P1Point),
    pub transverse: SurfaceComponent,
}

/// Points where `C0` meets transverse divisor components, ordered by the
/// position of the transverse line (infinity last).
pub fn intersection_points(inst: &SurfaceInstance) -> Vec<IntersectionPoint> {
    let o = inst.curve.orientation.transverse();
    inst.axis_support(o)
        .into_iter()
        .map(|p| {
            let transverse = SurfaceComponent { orientation: o, position: p };
            IntersectionPoint {
                point: inst.curve.meet(&transverse).expect("transverse"),
                transverse,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolLocalData {
    pub point: (P1Point, P1Point),
    pub transverse: SurfaceComponent,
    pub m: [i64; 3],
    pub n: [i64; 3],
    pub g: [Rat; 3],
}

impl SymbolLocalData {
    /// Data of `(f2, f3, f1)`.
    pub fn cycled(&self) -> Self {
        let rot = |v: [i64; 3]| [v[1], v[2], v[0]];
        SymbolLocalData {
            point: self.point.clone(),
            transverse: self.transverse.clone(),
            m: rot(self.m),
            n: rot(self.n),
            g: [self.g[1].clone(), self.g[2].clone(), self.g[0].clone()],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.m.iter().chain(self.n.iter()).all(|&e| e == 0)
    }
}

/// Value at `P` of `f / (x0^m xj^n)`: the product of the one-variable unit
/// parts, since each local coordinate involves a single axis.
pub fn unit_value(f: &SurfaceFunction, point: &(P1Point, P1Point)) -> Rat {
    &f.constant * &f.x_part().unit_part_at(&point.0) * f.y_part().unit_part_at(&point.1)
}

pub fn local_data(
    inst: &SurfaceInstance,
    point: &(P1Point, P1Point),
    transverse: &SurfaceComponent,
) -> Result<SymbolLocalData> {
    if !inst.curve.contains(point) {
        return Err(Error::Invalid(format!("point ({}, {}) is not on {}", point.0, point.1, inst.curve)));
    }
    if transverse.orientation == inst.curve.orientation || !transverse.contains(point) {
        return Err(Error::Invalid(format!(
            "{transverse} is not transverse to {} through ({}, {})",
            inst.curve, point.0, point.1
        )));
    }
    let fs = &inst.functions;
    Ok(SymbolLocalData {
        point: point.clone(),
        transverse: transverse.clone(),
        m: [0, 1, 2].map(|k| order_along(&fs[k], &inst.curve)),
        n: [0, 1, 2].map(|k| order_along(&fs[k], transverse)),
        g: [0, 1, 2].map(|k| unit_value(&fs[k], point)),
    })
}

/// Local data at every intersection point, in `intersection_points` order.
pub fn all_local_data(inst: &SurfaceInstance) -> Vec<SymbolLocalData> {
    intersection_points(inst)
        .iter()
        .map(|ip| local_data(inst, &ip.point, &ip.transverse).expect("generated point"))
        .collect()
}

/// The cofactor `g` with `f = x0^m xj^n g` near the given point, as a
/// surface function; `x0`, `xj` are `t - c` or `1/t` for the two lines.
pub fn local_cofactor(f: &SurfaceFunction, c0: &SurfaceComponent, cj: &SurfaceComponent) -> SurfaceFunction {
    let mut g = f.clone();
    for c in [c0, cj] {
        let e = order_along(f, c);
        if e == 0 {
            continue;
        }
        // x0^e as a function: (t - a)^e, or (1/t)^e = t^-e
        let coord = match &c.position {
            P1Point::Finite(a) => vec![(a.clone(), e)],
            P1Point::Infinity => vec![(Rat::zero(), -e)],
        };
        let zero = || Vec::new();
        let divisor = match c.orientation {
            Orientation::Vertical => SurfaceFunction { constant: Rat::one(), xfactors: coord, yfactors: zero() },
            Orientation::Horizontal => SurfaceFunction { constant: Rat::one(), xfactors: zero(), yfactors: coord },
        };
        let inv = SurfaceFunction {
            constant: Rat::one(),
            xfactors: divisor.xfactors.iter().map(|(r, e)| (r.clone(), -e)).collect(),
            yfactors: divisor.yfactors.iter().map(|(r, e)| (r.clone(), -e)).collect(),
        };
        g = g.mul(&inv);
    }
    g
}

/// Always succeeds: distinct axis-parallel lines meet transversally in at
/// most one point and never three at a time.
pub fn validate_normal_crossings(inst: &SurfaceInstance) -> Result<()> {
    for f in &inst.functions {
        f.validate()?;
    }
    Ok(())
}

fn random_surface_function(rng: &mut ChaCha8Rng) -> SurfaceFunction {
    let pick = |max: usize, rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(0..=max);
        let mut fs: Vec<(Rat, i64)> = Vec::new();
        while fs.len() < k {
            let r = Rat::from_int(rng.gen_range(-5..=5));
            if fs.iter().any(|(s, _)| *s == r) {
                continue;
            }
            let e = loop {
                let e = rng.gen_range(-4..=4i64);
                if e != 0 {
                    break e;
                }
            };
            fs.push((r, e));
        }
        fs
    };
    let xs = pick(4, rng);
    let ys = pick(3, rng);
    let c = loop {
        let p = rng.gen_range(-6..=6i64);
        if p != 0 {
            break Rat::frac(p, rng.gen_range(1..=4));
        }
    };
    SurfaceFunction::new(c, xs, ys).expect("generator keeps roots distinct")
}

/// Deterministic random instance: up to four x-roots and three y-roots per
/// function from the integers `-5..=5`, exponents in `[-4, 4]`.  The curve
/// is usually one of the divisor components, sometimes a line at infinity.
pub fn random_surface_instance(seed: u64) -> SurfaceInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let functions = [0, 1, 2].map(|_| random_surface_function(&mut rng));
    let orientation = if rng.gen_bool(0.5) { Orientation::Horizontal } else { Orientation::Vertical };
    let mut candidates: Vec<P1Point> = Vec::new();
    for f in &functions {
        candidates.extend(f.part(orientation).divisor_support());
    }
    candidates.sort();
    candidates.dedup();
    let position = if candidates.is_empty() || rng.gen_bool(0.1) {
        if rng.gen_bool(0.5) {
            P1Point::Infinity
        } else {
            P1Point::finite(rng.gen_range(-5..=5))
        }
    } else {
        candidates[rng.gen_range(0..candidates.len())].clone()
    };
    SurfaceInstance { functions, curve: SurfaceComponent { orientation, position } }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SurfaceInstance {
        SurfaceInstance::new(
            [
                SurfaceFunction::from_ints(1, &[(0, 1), (1, -1)], &[]).unwrap(),
                SurfaceFunction::from_ints(1, &[], &[(0, 1)]).unwrap(),
                SurfaceFunction::from_ints(1, &[(1, 1), (3, -1)], &[]).unwrap(),
            ],
            SurfaceComponent::horizontal(P1Point::finite(0)),
        )
    }

    #[test]
    fn orders() {
        let f = SurfaceFunction::from_ints(1, &[(0, 1), (1, -1)], &[(0, 1)]).unwrap();
        assert_eq!(order_along(&f, &SurfaceComponent::vertical(P1Point::finite(0))), 1);
        assert_eq!(order_along(&f, &SurfaceComponent::horizontal(P1Point::Infinity)), -1);
        assert_eq!(order_along(&f, &SurfaceComponent::vertical(P1Point::Infinity)), 0);
    }

    #[test]
    fn points_of_example() {
        let pts: Vec<_> = intersection_points(&example()).into_iter().map(|p| p.point.0).collect();
        assert_eq!(pts, vec![P1Point::finite(0), P1Point::finite(1), P1Point::finite(3)]);
        let xy = SurfaceInstance::new(
            [
                SurfaceFunction::from_ints(1, &[(0, 1)], &[(0, 1)]).unwrap(),
                SurfaceFunction::constant_fn(Rat::one()).unwrap(),
                SurfaceFunction::constant_fn(Rat::one()).unwrap(),
            ],
            SurfaceComponent::horizontal(P1Point::finite(0)),
        );
        let pts: Vec<_> = intersection_points(&xy).into_iter().map(|p| p.transverse).collect();
        assert_eq!(
            pts,
            vec![SurfaceComponent::vertical(P1Point::finite(0)), SurfaceComponent::vertical(P1Point::Infinity)]
        );
    }

    #[test]
    fn rejects_point_off_curve() {
        let inst = example();
        let v = SurfaceComponent::vertical(P1Point::finite(0));
        assert!(local_data(&inst, &(P1Point::finite(0), P1Point::finite(1)), &v).is_err());
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_surface_instance(3), random_surface_instance(3));
    }
}
