//! Tame symbols on the projective line and the product formula.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::{FactoredFunction1D, P1Point, Rat};

/// A pair of rational functions on the projective line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TateInstance {
    pub f: FactoredFunction1D,
    pub g: FactoredFunction1D,
}

impl TateInstance {
    pub fn new(f: FactoredFunction1D, g: FactoredFunction1D) -> Self {
        TateInstance { f, g }
    }

    /// Union of both supports, finite points ascending, infinity last.
    pub fn support(&self) -> Vec<P1Point> {
        let mut pts = self.f.divisor_support();
        pts.extend(self.g.divisor_support());
        pts.sort();
        pts.dedup();
        pts
    }
}

/// `(-1)^(n1 n2) g1^n2 / g2^n1` with `n` the orders and `g` the unit parts at `p`.
pub fn tate_symbol(f: &FactoredFunction1D, g: &FactoredFunction1D, p: &P1Point) -> Rat {
    let n1 = f.order_at(p);
    let n2 = g.order_at(p);
    let g1 = f.unit_part_at(p);
    let g2 = g.unit_part_at(p);
    Rat::sign_pow(n1 * n2) * g1.pow(n2).unwrap() * g2.pow(-n1).unwrap()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSymbol {
    pub point: P1Point,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilReport {
    pub symbols: Vec<PointSymbol>,
    pub product: Rat,
    pub holds: bool,
}

/// Symbols over the joint support and their product.
pub fn weil_verify(inst: &TateInstance) -> WeilReport {
    let symbols: Vec<PointSymbol> = inst
        .support()
        .into_iter()
        .map(|p| PointSymbol {
            value: tate_symbol(&inst.f, &inst.g, &p),
            point: p,
        })
        .collect();
    let product = symbols.iter().fold(Rat::one(), |acc, s| acc * &s.value);
    WeilReport {
        holds: product.is_one(),
        symbols,
        product,
    }
}

/// Random root: `p/q` with `q` in `1..=3` and `|p/q| <= 20`.
fn random_root(rng: &mut ChaCha8Rng) -> Rat {
    let q = rng.gen_range(1..=3i64);
    let p = rng.gen_range(-20 * q..=20 * q);
    Rat::frac(p, q)
}

fn random_constant(rng: &mut ChaCha8Rng) -> Rat {
    let p = loop {
        let p = rng.gen_range(-9..=9i64);
        if p != 0 {
            break p;
        }
    };
    Rat::frac(p, rng.gen_range(1..=5))
}

fn random_function(rng: &mut ChaCha8Rng) -> Result<FactoredFunction1D> {
    let k = rng.gen_range(0..=6usize);
    let mut factors: Vec<(Rat, i64)> = Vec::new();
    while factors.len() < k {
        let r = random_root(rng);
        if factors.iter().any(|(s, _)| *s == r) {
            continue;
        }
        let e = loop {
            let e = rng.gen_range(-5..=5i64);
            if e != 0 {
                break e;
            }
        };
        factors.push((r, e));
    }
    FactoredFunction1D::new(random_constant(rng), factors)
}

/// Deterministic random pair: at most six roots each, exponents in
/// `[-5, 5]`, roots of absolute value at most 20.
pub fn random_tate_instance(seed: u64) -> TateInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_function(&mut rng).expect("generator keeps roots distinct");
    let g = random_function(&mut rng).expect("generator keeps roots distinct");
    TateInstance { f, g }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn func(c: i64, fs: &[(i64, i64)]) -> FactoredFunction1D {
        FactoredFunction1D::new(
            Rat::from_int(c),
            fs.iter().map(|&(r, e)| (Rat::from_int(r), e)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn x_against_x_minus_one() {
        let f = func(1, &[(0, 1)]);
        let g = func(1, &[(1, 1)]);
        assert_eq!(tate_symbol(&f, &g, &P1Point::finite(0)), Rat::from_int(-1));
        assert_eq!(tate_symbol(&f, &g, &P1Point::finite(1)), Rat::from_int(1));
        assert_eq!(tate_symbol(&f, &g, &P1Point::Infinity), Rat::from_int(-1));
        assert!(weil_verify(&TateInstance::new(f, g)).holds);
    }

    #[test]
    fn self_symbol_is_sign() {
        let f = func(3, &[(2, 3)]);
        // <f, f>_P = (-1)^(n^2)
        assert_eq!(tate_symbol(&f, &f, &P1Point::finite(2)), Rat::from_int(-1));
    }

    #[test]
    fn generator_is_deterministic() {
        assert_eq!(random_tate_instance(7), random_tate_instance(7));
        assert_ne!(random_tate_instance(7), random_tate_instance(8));
    }
}
