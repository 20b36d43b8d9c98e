//! Multiplicative Parshin symbols, the refined symbol and exact reciprocity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{P1Point, Rat};
use crate::surface::{
    all_local_data, SurfaceComponent, SurfaceFunction, SurfaceInstance, SymbolLocalData,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetConstants {
    pub d: [i64; 3],
    pub k: i64,
}

pub fn det_constants(d: &SymbolLocalData) -> DetConstants {
    let [m1, m2, m3] = d.m;
    let [n1, n2, n3] = d.n;
    DetConstants {
        d: [m2 * n3 - m3 * n2, m3 * n1 - m1 * n3, m1 * n2 - m2 * n1],
        k: n1 * n2 * m3 + n2 * n3 * m1 + n3 * n1 * m2 - m1 * m2 * n3 - m2 * m3 * n1 - m3 * m1 * n2,
    }
}

/// `(-1)^K g1^D1 g2^D2 g3^D3`.
pub fn parshin_symbol(d: &SymbolLocalData) -> Rat {
    let c = det_constants(d);
    let mut v = Rat::sign_pow(c.k);
    for k in 0..3 {
        v = v * d.g[k].pow(c.d[k]).expect("unit parts are nonzero");
    }
    v
}

/// Sign exponent of the refined symbol: `n1 n3 m2 - m1 m3 n2`.
pub fn refined_sign_exponent(d: &SymbolLocalData) -> i64 {
    let [m1, m2, m3] = d.m;
    let [n1, n2, n3] = d.n;
    n1 * n3 * m2 - m1 * m3 * n2
}

/// `(-1)^(n1 n3 m2 - m1 m3 n2) (g1^n3 / g3^n1)^m2`.
pub fn refined_symbol(d: &SymbolLocalData) -> Rat {
    let [_, m2, _] = d.m;
    let [n1, _, n3] = d.n;
    Rat::sign_pow(refined_sign_exponent(d))
        * d.g[0].pow(n3 * m2).expect("nonzero")
        * d.g[2].pow(-n1 * m2).expect("nonzero")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicCheck {
    pub parshin: Rat,
    pub refined: [Rat; 3],
    pub holds: bool,
}

/// Parshin symbol against the product of the three cyclic refined symbols.
pub fn cyclic_identity_check(d: &SymbolLocalData) -> CyclicCheck {
    let d2 = d.cycled();
    let d3 = d2.cycled();
    let refined = [refined_symbol(d), refined_symbol(&d2), refined_symbol(&d3)];
    let parshin = parshin_symbol(d);
    let prod = refined.iter().fold(Rat::one(), |a, r| a * r);
    CyclicCheck { holds: prod == parshin, parshin, refined }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub point: (P1Point, P1Point),
    pub transverse: SurfaceComponent,
    pub m: [i64; 3],
    pub n: [i64; 3],
    pub g: [Rat; 3],
    pub d: [i64; 3],
    pub k: i64,
    pub parshin: Rat,
    pub refined: Rat,
    pub cyclic_ok: bool,
}

pub fn point_row(d: &SymbolLocalData) -> PointRow {
    let c = det_constants(d);
    PointRow {
        point: d.point.clone(),
        transverse: d.transverse.clone(),
        m: d.m,
        n: d.n,
        g: d.g.clone(),
        d: c.d,
        k: c.k,
        parshin: parshin_symbol(d),
        refined: refined_symbol(d),
        cyclic_ok: cyclic_identity_check(d).holds,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub rows: Vec<PointRow>,
    pub parshin_product: Rat,
    pub refined_product: Rat,
    pub parshin_ok: bool,
    pub refined_ok: bool,
    pub cyclic_ok: bool,
}

impl SurfaceReport {
    pub fn all_ok(&self) -> bool {
        self.parshin_ok && self.refined_ok && self.cyclic_ok
    }
}

/// Full exact table over the points of `C0`; points with all orders zero
/// have symbol 1 and are left out.
pub fn surface_report(inst: &SurfaceInstance) -> SurfaceReport {
    let rows: Vec<PointRow> = all_local_data(inst)
        .iter()
        .filter(|d| !d.is_trivial())
        .map(point_row)
        .collect();
    let parshin_product = rows.iter().fold(Rat::one(), |a, r| a * &r.parshin);
    let refined_product = rows.iter().fold(Rat::one(), |a, r| a * &r.refined);
    SurfaceReport {
        parshin_ok: parshin_product.is_one(),
        refined_ok: refined_product.is_one(),
        cyclic_ok: rows.iter().all(|r| r.cyclic_ok),
        rows,
        parshin_product,
        refined_product,
    }
}

/// Product of Parshin symbols over `C0`.
pub fn parshin_reciprocity_verify(inst: &SurfaceInstance) -> (Rat, bool) {
    let p = all_local_data(inst).iter().fold(Rat::one(), |a, d| a * parshin_symbol(d));
    let ok = p.is_one();
    (p, ok)
}

/// Product of refined symbols over `C0` with the fixed coherent coordinate.
pub fn refined_reciprocity_verify(inst: &SurfaceInstance) -> (Rat, bool) {
    let p = all_local_data(inst).iter().fold(Rat::one(), |a, d| a * refined_symbol(d));
    let ok = p.is_one();
    (p, ok)
}

/// Exponents `(i, j, k, l)` of `(x-a)^i (x-b)^j (x-c)^k y^l`.
pub type RootExps = [i64; 4];

fn check_roots(a: &Rat, b: &Rat, c: &Rat, e: &[RootExps; 3]) -> Result<()> {
    if a == b || b == c || a == c {
        return Err(Error::Invalid("a, b, c must be distinct".into()));
    }
    if let Some(n) = e.iter().position(|x| x[0] + x[1] + x[2] != 0) {
        return Err(Error::Invalid(format!("exponents of f{} do not sum to zero in x", n + 1)));
    }
    Ok(())
}

/// Closed-form refined symbols at `(a,0)`, `(b,0)`, `(c,0)` for functions
/// `(x-a)^i (x-b)^j (x-c)^k y^l` with `i + j + k = 0` and `C0 = {y = 0}`.
pub fn three_root_closed_form(a: &Rat, b: &Rat, c: &Rat, e: &[RootExps; 3]) -> Result<[Rat; 3]> {
    check_roots(a, b, c, e)?;
    let [i1, j1, k1, l1] = e[0];
    let [i2, j2, k2, l2] = e[1];
    let [i3, j3, k3, l3] = e[2];
    let pa = Rat::sign_pow(i1 * i3 * l2 - l1 * l3 * i2)
        * ((a - b) / (a - c)).pow(l2 * (i1 * k3 - k1 * i3))?;
    let pb = Rat::sign_pow(j1 * j3 * l2 - l1 * l3 * j2)
        * ((b - c) / (b - a)).pow(l2 * (j1 * i3 - i1 * j3))?;
    let pc = Rat::sign_pow(k1 * k3 * l2 - l1 * l3 * k2)
        * ((c - a) / (c - b)).pow(l2 * (k1 * j3 - j1 * k3))?;
    Ok([pa, pb, pc])
}

/// The surface instance the closed form describes.
pub fn three_root_instance(a: &Rat, b: &Rat, c: &Rat, e: &[RootExps; 3]) -> Result<SurfaceInstance> {
    check_roots(a, b, c, e)?;
    let f = |x: &RootExps| {
        let xs: Vec<(Rat, i64)> = [(a, x[0]), (b, x[1]), (c, x[2])]
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|(r, e)| (r.clone(), e))
            .collect();
        let ys = if x[3] != 0 { vec![(Rat::zero(), x[3])] } else { vec![] };
        SurfaceFunction::new(Rat::one(), xs, ys)
    };
    Ok(SurfaceInstance::new(
        [f(&e[0])?, f(&e[1])?, f(&e[2])?],
        SurfaceComponent::horizontal(P1Point::finite(0)),
    ))
}

/// Exponent rows with `i + j + k = 0`, entries in `[-3, 3]`.
pub fn random_root_exps(rng: &mut ChaCha8Rng) -> [RootExps; 3] {
    [0, 1, 2].map(|_| loop {
        let i = rng.gen_range(-3..=3i64);
        let j = rng.gen_range(-3..=3i64);
        let k = -i - j;
        if k.abs() <= 3 {
            break [i, j, k, rng.gen_range(-3..=3)];
        }
    })
}

pub fn random_root_exps_seeded(seed: u64) -> [RootExps; 3] {
    random_root_exps(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// The exponents of the hand-worked case at `(0, 1, 3)`.
pub const WORKED_ROOTS: [RootExps; 3] = [[1, -1, 0, 0], [0, 0, 0, 1], [0, 1, -1, 0]];
