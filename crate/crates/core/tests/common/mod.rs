#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parshin_core::surface::{SurfaceComponent, SurfaceFunction, SurfaceInstance};
use parshin_core::{FactoredFunction1D, P1Point, Rat};
use proptest::prelude::*;

pub fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=6).prop_map(|(p, q)| Rat::frac(p, q))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat_strategy().prop_filter("nonzero", |r| !r.is_zero())
}

fn exponent() -> impl Strategy<Value = i64> {
    prop_oneof![-4i64..=-1, 1i64..=4]
}

fn dedup_factors(v: Vec<(Rat, i64)>) -> Vec<(Rat, i64)> {
    let mut out: Vec<(Rat, i64)> = Vec::new();
    for (r, e) in v {
        if !out.iter().any(|(s, _)| *s == r) {
            out.push((r, e));
        }
    }
    out
}

pub fn function_strategy() -> impl Strategy<Value = FactoredFunction1D> {
    (nonzero_rat(), prop::collection::vec((rat_strategy(), exponent()), 0..5))
        .prop_map(|(c, fs)| FactoredFunction1D::new(c, dedup_factors(fs)).unwrap())
}

pub fn surface_function_strategy() -> impl Strategy<Value = SurfaceFunction> {
    let axis = || prop::collection::vec(((-5i64..=5).prop_map(Rat::from_int), exponent()), 0..4);
    (nonzero_rat(), axis(), axis())
        .prop_map(|(c, xs, ys)| SurfaceFunction::new(c, dedup_factors(xs), dedup_factors(ys)).unwrap())
}

pub fn surface_instance_strategy() -> impl Strategy<Value = SurfaceInstance> {
    (
        surface_function_strategy(),
        surface_function_strategy(),
        surface_function_strategy(),
        any::<bool>(),
        prop_oneof![(-5i64..=5).prop_map(P1Point::finite), Just(P1Point::Infinity)],
    )
        .prop_map(|(a, b, c, h, pos)| {
            let curve = if h { SurfaceComponent::horizontal(pos) } else { SurfaceComponent::vertical(pos) };
            SurfaceInstance::new([a, b, c], curve)
        })
}

/// Dense polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn constant(c: BigRational) -> Self {
        Poly(vec![c])
    }

    pub fn linear(root: &BigRational) -> Self {
        Poly(vec![-root.clone(), BigRational::one()])
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Quotient by `x - r`, assuming `r` is a root.
    pub fn deflate(&self, r: &BigRational) -> Poly {
        let n = self.0.len();
        let mut q = vec![BigRational::zero(); n - 1];
        let mut carry = BigRational::zero();
        for i in (1..n).rev() {
            carry = &self.0[i] + carry * r;
            q[i - 1] = carry.clone();
        }
        Poly(q)
    }

    pub fn leading(&self) -> &BigRational {
        self.0.last().unwrap()
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }
}

/// Numerator and denominator polynomials of `f^e`.
pub fn expand(f: &FactoredFunction1D, e: i64) -> (Poly, Poly) {
    let mut num = Poly::constant(BigRational::one());
    let mut den = Poly::constant(BigRational::one());
    let c = f.constant().pow(e).unwrap();
    num = num.mul(&Poly::constant(c.as_big().clone()));
    for (r, k) in f.factors() {
        let lin = Poly::linear(r.as_big());
        for _ in 0..(k * e).abs() {
            if k * e > 0 {
                num = num.mul(&lin);
            } else {
                den = den.mul(&lin);
            }
        }
    }
    (num, den)
}

/// Value at `p` of a rational function known to be a unit there: strips
/// common `(x - p)` factors by synthetic division, or compares leading
/// coefficients at infinity.
pub fn unit_value(num: Poly, den: Poly, p: &P1Point) -> BigRational {
    match p {
        P1Point::Infinity => {
            assert_eq!(num.degree(), den.degree());
            num.leading() / den.leading()
        }
        P1Point::Finite(r) => {
            let r = r.as_big();
            let (mut n, mut d) = (num, den);
            while n.eval(r).is_zero() && d.eval(r).is_zero() {
                n = n.deflate(r);
                d = d.deflate(r);
            }
            n.eval(r) / d.eval(r)
        }
    }
}

/// Tame symbol by polynomial expansion of `(-1)^(mn) f^n / g^m`.
pub fn tate_oracle(f: &FactoredFunction1D, g: &FactoredFunction1D, p: &P1Point) -> Rat {
    let m = f.order_at(p);
    let n = g.order_at(p);
    let (fa, fb) = expand(f, n);
    let (ga, gb) = expand(g, -m);
    let v = unit_value(fa.mul(&ga), fb.mul(&gb), p);
    let sign = if (m * n) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Rat::from_big(v * BigRational::from_integer(sign))
}
