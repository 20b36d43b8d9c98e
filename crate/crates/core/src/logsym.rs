//! Logarithmic symbols, their exponential relations to the exact symbols,
//! and reciprocity modulo the period lattice.
//!
//! Every logarithmic symbol is built from integrals `int_Q^P dg/g` along the
//! curve carrying the symbol. Those integrals run along the real coordinate
//! of that curve, placed on the numeric x-axis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{tate_symbol, TateInstance};
use crate::error::{Error, Result};
use crate::iterated::{project_b, transport_with, Alphabet, Letter, TransportOptions};
use crate::parshin::{det_constants, parshin_symbol, refined_symbol};
use crate::paths::{
    log_integral_with, segment_avoiding, torus_boundary, Axis, CPoint2, Elementary, LogForm, PathItem,
    PathWord, StepOptions, TorusSpec, C64, TWO_PI_I,
};
use crate::rational::{smallest_rational_avoiding, substitute_point, FactoredFunction1D, P1Point, Rat};
use crate::surface::{
    all_local_data, intersection_points, IntersectionPoint, Orientation, SurfaceComponent, SurfaceFunction,
    SurfaceInstance, SymbolLocalData,
};

const PI_I: C64 = C64::new(0.0, PI);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Tate,
    Parshin,
    Refined,
    New,
}

impl SymbolKind {
    /// Power of `2 pi i` carried by the symbol.
    pub fn degree(self) -> i32 {
        match self {
            SymbolKind::Tate => 2,
            _ => 3,
        }
    }
}

/// How the path from the base point reaches the symbol point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PathChoice {
    Straight,
    /// One extra positive loop around the given point first.
    Detour(Rat),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSymbolValue {
    pub value: C64,
    pub base: String,
    pub pieces: usize,
    pub epsilon: f64,
}

/// Path on the numeric x-axis from `q` to `p` avoiding `poles`.
pub fn line_path(q: C64, p: C64, poles: &[C64], choice: &PathChoice, clearance: f64) -> Result<PathWord> {
    let pl: Vec<(Axis, C64)> = poles.iter().map(|&a| (Axis::X, a)).collect();
    let pt = |z: C64| CPoint2::new(z, C64::new(0.0, 0.0));
    let main = segment_avoiding(pt(q), pt(p), &pl, clearance)?;
    match choice {
        PathChoice::Straight => Ok(main),
        PathChoice::Detour(a) => {
            let a = C64::new(a.to_f64(), 0.0);
            let sep = poles
                .iter()
                .chain(std::iter::once(&q))
                .map(|z| (z - a).norm())
                .filter(|&d| d > 1e-12)
                .fold(f64::INFINITY, f64::min);
            let r = 0.25 * sep.min(1.0);
            let start = a + r;
            let leg = segment_avoiding(pt(q), pt(start), &pl, clearance)?;
            let circle = PathWord::elem(Elementary::circle(Axis::X, a, r, 1, C64::new(0.0, 0.0), 0.0)?);
            leg.then(&circle)?.then(&leg.inverse())?.then(&main)
        }
    }
}

/// `d log` of `f / (x - p)^ord` as a form on the numeric x-axis.
fn unit_form(factors: &[(Rat, i64)], p: &Rat) -> LogForm {
    LogForm::on_axis(
        Axis::X,
        factors.iter().filter(|(r, _)| r != p).map(|(r, e)| (C64::new(r.to_f64(), 0.0), *e)).collect(),
    )
}

/// `f(q) / (q - p)^ord`, exact.
fn unit_at(constant: &Rat, factors: &[(Rat, i64)], p: &Rat, q: &Rat) -> Result<Rat> {
    let mut v = constant.clone();
    for (r, e) in factors {
        if r != p {
            let d = q - r;
            if d.is_zero() {
                return Err(Error::PoleOrZero(q.to_string()));
            }
            v = v * d.pow(*e)?;
        }
    }
    Ok(v)
}

fn cfin(r: &Rat) -> C64 {
    C64::new(r.to_f64(), 0.0)
}

fn finite<'a>(p: &'a P1Point, what: &str) -> Result<&'a Rat> {
    p.as_finite()
        .ok_or_else(|| Error::Invalid(format!("{what} at infinity; normalize the instance first")))
}

/// Base point off every root: the smallest-height rational not in `roots`.
pub fn default_base(roots: &[Rat]) -> Rat {
    smallest_rational_avoiding(roots)
}

// ---------------------------------------------------------------- Tate

fn tate_roots(inst: &TateInstance) -> Vec<Rat> {
    let mut v: Vec<Rat> = inst.f.factors().iter().chain(inst.g.factors()).map(|(r, _)| r.clone()).collect();
    v.sort();
    v.dedup();
    v
}

/// `2 pi i (pi i m n + n int dg1/g1 - m int dg2/g2)`, `m`, `n` the orders of
/// `f`, `g` at `p` and `g1`, `g2` their unit cofactors.
pub fn log_tate(inst: &TateInstance, p: &P1Point, q: &Rat, choice: &PathChoice, o: &StepOptions) -> Result<LogSymbolValue> {
    let pr = finite(p, "symbol point")?;
    let roots = tate_roots(inst);
    if roots.contains(q) {
        return Err(Error::Invalid(format!("base point {q} lies in the support")));
    }
    let m = inst.f.order_at(p);
    let n = inst.g.order_at(p);
    let poles: Vec<C64> = roots.iter().filter(|r| *r != pr).map(cfin).collect();
    let path = line_path(cfin(q), cfin(pr), &poles, choice, o.clearance)?;
    let l1 = log_integral_with(&unit_form(inst.f.factors(), pr), &path, o)?;
    let l2 = log_integral_with(&unit_form(inst.g.factors(), pr), &path, o)?;
    let value = TWO_PI_I * (PI_I * (m * n) as f64 + l1 * n as f64 - l2 * m as f64);
    Ok(LogSymbolValue { value, base: q.to_string(), pieces: path.piece_count(), epsilon: 0.0 })
}

/// `g1(Q)^n g2(Q)^-m`.
pub fn tate_q_factor(inst: &TateInstance, p: &P1Point, q: &Rat) -> Result<Rat> {
    let pr = finite(p, "symbol point")?;
    let m = inst.f.order_at(p);
    let n = inst.g.order_at(p);
    let g1 = unit_at(inst.f.constant(), inst.f.factors(), pr, q)?;
    let g2 = unit_at(inst.g.constant(), inst.g.factors(), pr, q)?;
    Ok(g1.pow(n)? * g2.pow(-m)?)
}

// ---------------------------------------------------------------- surface

/// Factors of `f` in the coordinate running along `C0`.
fn along_factors<'a>(f: &'a SurfaceFunction, c0: &SurfaceComponent) -> &'a [(Rat, i64)] {
    match c0.orientation {
        Orientation::Horizontal => &f.xfactors,
        Orientation::Vertical => &f.yfactors,
    }
}

/// Constant of `g_k` restricted to `C0`: the constant of `f` times the unit
/// part of the normal factors at the position of `C0`.
fn along_constant(f: &SurfaceFunction, c0: &SurfaceComponent) -> Rat {
    let normal = match c0.orientation {
        Orientation::Horizontal => f.y_part(),
        Orientation::Vertical => f.x_part(),
    };
    &f.constant * &normal.unit_part_at(&c0.position)
}

fn along_coordinate(ip: &IntersectionPoint, c0: &SurfaceComponent) -> P1Point {
    match c0.orientation {
        Orientation::Horizontal => ip.point.0.clone(),
        Orientation::Vertical => ip.point.1.clone(),
    }
}

fn surface_roots(inst: &SurfaceInstance) -> Vec<Rat> {
    let mut v: Vec<Rat> = inst
        .functions
        .iter()
        .flat_map(|f| along_factors(f, &inst.curve).iter().map(|(r, _)| r.clone()))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Default base point on `C0`.
pub fn surface_default_base(inst: &SurfaceInstance) -> Rat {
    default_base(&surface_roots(inst))
}

fn find_point<'a>(inst: &SurfaceInstance, pts: &'a [IntersectionPoint], p: &(P1Point, P1Point)) -> Result<&'a IntersectionPoint> {
    pts.iter().find(|ip| ip.point == *p).ok_or_else(|| {
        Error::NotInSupport(format!("({}, {}) on {}", p.0, p.1, inst.curve))
    })
}

/// The three integrals `int_Q^P dg_k/g_k` along `C0` from a numeric base.
fn surface_integrals(inst: &SurfaceInstance, pa: &Rat, q: C64, choice: &PathChoice, o: &StepOptions) -> Result<([C64; 3], usize)> {
    let poles: Vec<C64> = surface_roots(inst).iter().filter(|r| *r != pa).map(cfin).collect();
    let path = line_path(q, cfin(pa), &poles, choice, o.clearance)?;
    let mut l = [C64::new(0.0, 0.0); 3];
    for k in 0..3 {
        l[k] = log_integral_with(&unit_form(along_factors(&inst.functions[k], &inst.curve), pa), &path, o)?;
    }
    Ok((l, path.piece_count()))
}

/// Closed form of a surface log symbol from local data and the integrals.
pub fn surface_log_value(kind: SymbolKind, d: &SymbolLocalData, l: &[C64; 3]) -> C64 {
    let t = TWO_PI_I;
    let c = det_constants(d);
    let [m1, m2, m3] = d.m;
    let [n1, n2, n3] = d.n;
    let [d1, d2, d3] = c.d;
    let f = |v: i64| v as f64;
    match kind {
        SymbolKind::Parshin => t * t * (PI_I * f(c.k) + l[0] * f(d1) + l[1] * f(d2) + l[2] * f(d3)),
        SymbolKind::Refined => {
            t * t * (PI_I * f(m2 * n1 * n3 - n2 * m1 * m3) + l[0] * f(m2 * n3) - l[2] * f(m2 * n1))
        }
        SymbolKind::New => {
            t * t * t * 0.5 * f((m1 + n1) * d1 - (m3 + n3) * d3)
                + t * t * (l[0] * f(d1 + m2 * n3) + l[1] * f(d2) + l[2] * f(d3 - m2 * n1))
        }
        SymbolKind::Tate => panic!("tate symbols live on curves"),
    }
}

/// Log symbol of `kind` at an intersection point, base point given as a
/// complex number on `C0`.
pub fn log_surface_numeric(
    inst: &SurfaceInstance,
    kind: SymbolKind,
    p: &(P1Point, P1Point),
    q: C64,
    choice: &PathChoice,
    o: &StepOptions,
) -> Result<C64> {
    let pts = intersection_points(inst);
    let ip = find_point(inst, &pts, p)?;
    let along = along_coordinate(ip, &inst.curve);
    let pa = finite(&along, "symbol point")?;
    let d = crate::surface::local_data(inst, &ip.point, &ip.transverse)?;
    let (l, _) = surface_integrals(inst, pa, q, choice, o)?;
    Ok(surface_log_value(kind, &d, &l))
}

pub fn log_surface(
    inst: &SurfaceInstance,
    kind: SymbolKind,
    p: &(P1Point, P1Point),
    q: &Rat,
    choice: &PathChoice,
    o: &StepOptions,
) -> Result<LogSymbolValue> {
    if surface_roots(inst).contains(q) {
        return Err(Error::Invalid(format!("base point {q} lies on a divisor component")));
    }
    let pts = intersection_points(inst);
    let ip = find_point(inst, &pts, p)?;
    let along = along_coordinate(ip, &inst.curve);
    let pa = finite(&along, "symbol point")?;
    let d = crate::surface::local_data(inst, &ip.point, &ip.transverse)?;
    let (l, pieces) = surface_integrals(inst, pa, cfin(q), choice, o)?;
    Ok(LogSymbolValue { value: surface_log_value(kind, &d, &l), base: q.to_string(), pieces, epsilon: 0.0 })
}

pub fn log_parshin(inst: &SurfaceInstance, p: &(P1Point, P1Point), q: &Rat) -> Result<LogSymbolValue> {
    log_surface(inst, SymbolKind::Parshin, p, q, &PathChoice::Straight, &StepOptions::default())
}

pub fn log_refined(inst: &SurfaceInstance, p: &(P1Point, P1Point), q: &Rat) -> Result<LogSymbolValue> {
    log_surface(inst, SymbolKind::Refined, p, q, &PathChoice::Straight, &StepOptions::default())
}

pub fn log_new_bracket(inst: &SurfaceInstance, p: &(P1Point, P1Point), q: &Rat) -> Result<LogSymbolValue> {
    log_surface(inst, SymbolKind::New, p, q, &PathChoice::Straight, &StepOptions::default())
}

/// Exact `g_k(Q)` on `C0` for the cofactors at `p`.
fn surface_g_at(inst: &SurfaceInstance, pa: &Rat, q: &Rat) -> Result<[Rat; 3]> {
    let g = |k: usize| {
        let f = &inst.functions[k];
        unit_at(&along_constant(f, &inst.curve), along_factors(f, &inst.curve), pa, q)
    };
    Ok([g(0)?, g(1)?, g(2)?])
}

/// The factor multiplying `exp(Log / (2 pi i)^2)` in the exponential relation.
pub fn surface_q_factor(inst: &SurfaceInstance, kind: SymbolKind, p: &(P1Point, P1Point), q: &Rat) -> Result<Rat> {
    let pts = intersection_points(inst);
    let ip = find_point(inst, &pts, p)?;
    let along = along_coordinate(ip, &inst.curve);
    let pa = finite(&along, "symbol point")?;
    let d = crate::surface::local_data(inst, &ip.point, &ip.transverse)?;
    let g = surface_g_at(inst, pa, q)?;
    let [_, m2, _] = d.m;
    let [n1, _, n3] = d.n;
    match kind {
        SymbolKind::Parshin => {
            let c = det_constants(&d);
            Ok(g[0].pow(c.d[0])? * g[1].pow(c.d[1])? * g[2].pow(c.d[2])?)
        }
        SymbolKind::Refined => Ok(g[0].pow(m2 * n3)? * g[2].pow(-m2 * n1)?),
        _ => Err(Error::Invalid(format!("no exponential relation for {kind:?}"))),
    }
}

/// `|exp(z) - 1|` for the representative of `z` modulo `2 pi i` nearest 0.
pub fn log_residual(z: C64) -> f64 {
    let k = (z.im / (2.0 * PI)).round();
    let r = z - C64::new(0.0, 2.0 * PI * k);
    (r.exp() - 1.0).norm()
}

fn rat_ln(r: &Rat) -> C64 {
    let (re, im) = r.ln_complex();
    C64::new(re, im)
}

/// Relative error of `exp(Log / (2 pi i)^(d-1)) * qfactor` against the exact
/// symbol, computed in log space to survive huge exponents.
pub fn exp_relation_residual(log_value: C64, degree: i32, qfactor: &Rat, exact: &Rat) -> f64 {
    log_residual(exp_relation_log(log_value, degree, qfactor) - rat_ln(exact))
}

/// `log` of the predicted symbol, `Log / (2 pi i)^(d-1) + log qfactor`.
pub fn exp_relation_log(log_value: C64, degree: i32, qfactor: &Rat) -> C64 {
    log_value / TWO_PI_I.powi(degree - 1) + rat_ln(qfactor)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpRelationRow {
    pub point: String,
    pub log_value: C64,
    pub exact: Rat,
    pub residual: f64,
}

/// Exponential relation at every symbol point of a curve instance.
pub fn tate_exp_relations(inst: &TateInstance, q: &Rat, choice: &PathChoice, o: &StepOptions) -> Result<Vec<ExpRelationRow>> {
    inst.support()
        .iter()
        .map(|p| {
            let v = log_tate(inst, p, q, choice, o)?;
            let exact = tate_symbol(&inst.f, &inst.g, p);
            let qf = tate_q_factor(inst, p, q)?;
            Ok(ExpRelationRow {
                point: p.to_string(),
                residual: exp_relation_residual(v.value, 2, &qf, &exact),
                log_value: v.value,
                exact,
            })
        })
        .collect()
}

/// Exponential relation for Parshin or refined symbols at every point of `C0`.
pub fn surface_exp_relations(
    inst: &SurfaceInstance,
    kind: SymbolKind,
    q: &Rat,
    choice: &PathChoice,
    o: &StepOptions,
) -> Result<Vec<ExpRelationRow>> {
    all_local_data(inst)
        .iter()
        .filter(|d| !d.is_trivial())
        .map(|d| {
            let v = log_surface(inst, kind, &d.point, q, choice, o)?;
            let exact = match kind {
                SymbolKind::Parshin => parshin_symbol(d),
                SymbolKind::Refined => refined_symbol(d),
                _ => return Err(Error::Invalid(format!("no exponential relation for {kind:?}"))),
            };
            let qf = surface_q_factor(inst, kind, &d.point, q)?;
            Ok(ExpRelationRow {
                point: format!("({}, {})", d.point.0, d.point.1),
                residual: exp_relation_residual(v.value, 3, &qf, &exact),
                log_value: v.value,
                exact,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureRow {
    pub point: String,
    pub cyclic_residual: f64,
    pub additivity_residual: f64,
}

/// Cyclic sum of refined logs against Log Parshin, and the bracket symbol
/// against refined plus Parshin, at every point with one shared base point.
pub fn closure_checks(inst: &SurfaceInstance, q: &Rat, o: &StepOptions) -> Result<Vec<ClosureRow>> {
    let pts = intersection_points(inst);
    all_local_data(inst)
        .iter()
        .zip(&pts)
        .filter(|(d, _)| !d.is_trivial())
        .map(|(d, ip)| {
            let along = along_coordinate(ip, &inst.curve);
            let pa = finite(&along, "symbol point")?;
            let (l, _) = surface_integrals(inst, pa, cfin(q), &PathChoice::Straight, o)?;
            let d2 = d.cycled();
            let d3 = d2.cycled();
            let parshin = surface_log_value(SymbolKind::Parshin, d, &l);
            let refined = surface_log_value(SymbolKind::Refined, d, &l);
            let cyc = refined
                + surface_log_value(SymbolKind::Refined, &d2, &[l[1], l[2], l[0]])
                + surface_log_value(SymbolKind::Refined, &d3, &[l[2], l[0], l[1]]);
            let new = surface_log_value(SymbolKind::New, d, &l);
            Ok(ClosureRow {
                point: format!("({}, {})", d.point.0, d.point.1),
                cyclic_residual: (cyc - parshin).norm(),
                additivity_residual: (new - refined - parshin).norm(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------- budgets

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityBudget {
    pub m: i64,
    pub n: i64,
    /// Intersection counts with `C0`, per transverse component.
    pub l: Vec<(SurfaceComponent, i64)>,
    pub dk: Vec<[i64; 3]>,
    pub nkj: Vec<[i64; 3]>,
}

/// `M = sum_i m_i n_i` over the support.
pub fn tate_budget(inst: &TateInstance) -> i64 {
    inst.support().iter().map(|p| inst.f.order_at(p) * inst.g.order_at(p)).sum()
}

/// Budget for the refined and bracket symbols; Parshin symbols get `M = 0`.
///
/// Components are taken in the order `intersection_points` produces; on
/// `P1 x P1` every transverse line meets `C0` once, so the `L(L-1)/2` terms
/// vanish.
pub fn reciprocity_budget(inst: &SurfaceInstance, kind: SymbolKind) -> ReciprocityBudget {
    let data = all_local_data(inst);
    let dk: Vec<[i64; 3]> = data.iter().map(|d| det_constants(d).d).collect();
    let nkj: Vec<[i64; 3]> = data.iter().map(|d| d.n).collect();
    let l: Vec<(SurfaceComponent, i64)> = data.iter().map(|d| (d.transverse.clone(), 1)).collect();
    let m = match kind {
        SymbolKind::Parshin | SymbolKind::Tate => 0,
        SymbolKind::Refined | SymbolKind::New => {
            let mut m = 0;
            for j1 in 0..data.len() {
                for j2 in j1 + 1..data.len() {
                    m += (nkj[j1][0] * dk[j2][0] - nkj[j1][2] * dk[j2][2]) * l[j1].1 * l[j2].1;
                }
                let lj = l[j1].1;
                m += (nkj[j1][0] * dk[j1][0] - nkj[j1][2] * dk[j1][2]) * (lj * (lj - 1) / 2);
            }
            m
        }
    };
    ReciprocityBudget { m, n: 0, l, dk, nkj }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub kind: SymbolKind,
    pub base: String,
    pub values: Vec<(String, C64)>,
    pub sum: C64,
    pub m: i64,
    /// `sum / (2 pi i)^d - M`.
    pub scaled: C64,
    pub residual: f64,
    pub holds: bool,
}

fn lattice_from(kind: SymbolKind, base: String, values: Vec<(String, C64)>, m: i64, tol: f64) -> LatticeReport {
    let sum = values.iter().fold(C64::new(0.0, 0.0), |a, (_, v)| a + v);
    let scaled = sum / TWO_PI_I.powi(kind.degree()) - m as f64;
    let residual = (scaled - C64::new(scaled.re.round(), 0.0)).norm();
    LatticeReport { kind, base, values, sum, m, scaled, holds: residual <= tol, residual }
}

pub fn tate_lattice_check(inst: &TateInstance, tol: f64) -> Result<LatticeReport> {
    let (inst, _) = normalize_tate(inst);
    let q = default_base(&tate_roots(&inst));
    let o = StepOptions::default();
    let values = inst
        .support()
        .iter()
        .map(|p| Ok((p.to_string(), log_tate(&inst, p, &q, &PathChoice::Straight, &o)?.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(lattice_from(SymbolKind::Tate, q.to_string(), values, tate_budget(&inst), tol))
}

pub fn lattice_reciprocity_check(inst: &SurfaceInstance, kind: SymbolKind, tol: f64) -> Result<LatticeReport> {
    let (inst, _) = normalize_surface(inst);
    let q = surface_default_base(&inst);
    let o = StepOptions::default();
    let values = all_local_data(&inst)
        .iter()
        .filter(|d| !d.is_trivial())
        .map(|d| {
            let v = log_surface(&inst, kind, &d.point, &q, &PathChoice::Straight, &o)?;
            Ok((format!("({}, {})", d.point.0, d.point.1), v.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = reciprocity_budget(&inst, kind).m;
    Ok(lattice_from(kind, q.to_string(), values, m, tol))
}

// ---------------------------------------------------------------- normalization

/// Shifts applied as `t = c + 1/s`, per axis.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Normalization {
    pub x: Option<Rat>,
    pub y: Option<Rat>,
}

fn substitute_factors(constant: &Rat, factors: &[(Rat, i64)], c: &Rat) -> (Rat, Vec<(Rat, i64)>) {
    let f = FactoredFunction1D::new(constant.clone(), factors.to_vec()).expect("valid factors");
    let g = f.substitute_inverse(c);
    (g.constant().clone(), g.factors().to_vec())
}

/// Moves infinity off the support of both functions when it carries a symbol.
pub fn normalize_tate(inst: &TateInstance) -> (TateInstance, Option<Rat>) {
    if !inst.support().contains(&P1Point::Infinity) {
        return (inst.clone(), None);
    }
    let c = default_base(&tate_roots(inst));
    (
        TateInstance::new(inst.f.substitute_inverse(&c), inst.g.substitute_inverse(&c)),
        Some(c),
    )
}

fn surface_substitute(inst: &SurfaceInstance, axis: Orientation, c: &Rat) -> SurfaceInstance {
    let functions = inst.functions.clone().map(|f| match axis {
        Orientation::Vertical => {
            let (k, xs) = substitute_factors(&f.constant, &f.xfactors, c);
            SurfaceFunction::new(k, xs, f.yfactors.clone()).expect("valid")
        }
        Orientation::Horizontal => {
            let (k, ys) = substitute_factors(&f.constant, &f.yfactors, c);
            SurfaceFunction::new(k, f.xfactors.clone(), ys).expect("valid")
        }
    });
    let mut curve = inst.curve.clone();
    // `axis` names the family of lines whose positions move
    if curve.orientation == axis {
        curve.position = substitute_point(&curve.position, c);
    }
    SurfaceInstance::new(functions, curve)
}

fn axis_roots(inst: &SurfaceInstance, axis: Orientation) -> Vec<Rat> {
    let mut v: Vec<Rat> = inst
        .functions
        .iter()
        .flat_map(|f| f.part(axis).factors().iter().map(|(r, _)| r.clone()).collect::<Vec<_>>())
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Makes every symbol point and the curve itself finite.
pub fn normalize_surface(inst: &SurfaceInstance) -> (SurfaceInstance, Normalization) {
    let mut out = inst.clone();
    let mut norm = Normalization::default();
    let transverse = out.curve.orientation.transverse();
    let needs_along = intersection_points(&out)
        .iter()
        .zip(all_local_data(&out))
        .any(|(ip, d)| ip.transverse.position.is_infinite() && !d.is_trivial());
    let mut record = |o: Orientation, c: Rat| match o {
        Orientation::Vertical => norm.x = Some(c),
        Orientation::Horizontal => norm.y = Some(c),
    };
    if needs_along {
        let mut avoid = axis_roots(&out, transverse);
        if let P1Point::Finite(p) = &out.curve.position {
            if transverse == out.curve.orientation {
                avoid.push(p.clone());
            }
        }
        let c = default_base(&avoid);
        out = surface_substitute(&out, transverse, &c);
        record(transverse, c);
    }
    if out.curve.position.is_infinite() {
        let o = out.curve.orientation;
        let c = default_base(&axis_roots(&out, o));
        out = surface_substitute(&out, o, &c);
        record(o, c);
    }
    (out, norm)
}

// ---------------------------------------------------------------- tori

/// Numeric point of a finite intersection point.
fn numeric_point(p: &(P1Point, P1Point)) -> Result<CPoint2> {
    let x = finite(&p.0, "x coordinate")?;
    let y = finite(&p.1, "y coordinate")?;
    Ok(CPoint2::new(cfin(x), cfin(y)))
}

fn normal_axis(c0: &SurfaceComponent) -> Axis {
    match c0.orientation {
        Orientation::Horizontal => Axis::Y,
        Orientation::Vertical => Axis::X,
    }
}

/// One letter `df_k/f_k` per function.
pub fn coarse_alphabet(inst: &SurfaceInstance) -> Alphabet {
    Alphabet::of_forms(&inst.functions.clone().map(|f| LogForm::of_surface(&f)))
}

/// One letter per function and divisor component, tagged `(k, label)` with
/// label 0 for `C0` and `1 + index` among the other components.
pub fn tagged_alphabet(inst: &SurfaceInstance) -> Alphabet {
    let comps: Vec<SurfaceComponent> =
        inst.divisor_components().into_iter().filter(|c| *c != inst.curve).collect();
    let mut letters = Vec::new();
    for (k, f) in inst.functions.iter().enumerate() {
        for (o, axis, fs) in [
            (Orientation::Vertical, Axis::X, &f.xfactors),
            (Orientation::Horizontal, Axis::Y, &f.yfactors),
        ] {
            for (r, e) in fs {
                let c = SurfaceComponent { orientation: o, position: P1Point::Finite(r.clone()) };
                let label = if c == inst.curve {
                    0
                } else {
                    1 + comps.iter().position(|d| *d == c).expect("component of the divisor") as u32
                };
                letters.push(Letter {
                    name: format!("f{}:{}", k + 1, c),
                    form: LogForm::single(axis, cfin(r), *e),
                    tag: Some((k as u8 + 1, label)),
                });
            }
        }
    }
    Alphabet::new(letters).expect("distinct tags")
}

/// Local torus `[sigma, tau]` with equal radii around a finite point.
pub fn local_torus(inst: &SurfaceInstance, p: &(P1Point, P1Point), eps: f64) -> Result<(PathWord, TorusSpec)> {
    let spec = TorusSpec::new(numeric_point(p)?, normal_axis(&inst.curve), eps, eps);
    let forms: Vec<LogForm> = inst.functions.iter().map(LogForm::of_surface).collect();
    let refs: Vec<&LogForm> = forms.iter().collect();
    Ok((torus_boundary(&spec, &refs, None)?, spec))
}

/// `int df1/f1 o df2/f2` over the local torus.
pub fn torus_residue(inst: &SurfaceInstance, p: &(P1Point, P1Point), eps: f64, o: &TransportOptions) -> Result<C64> {
    let (g, _) = local_torus(inst, p, eps)?;
    Ok(transport_with(&coarse_alphabet(inst), &g, o)?.coeff(&[0, 1]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewLimitReport {
    pub eps: Vec<f64>,
    pub triple: Vec<C64>,
    pub closed: Vec<C64>,
    pub errors: Vec<f64>,
    /// Ratios of successive errors.
    pub ratios: Vec<f64>,
}

/// The ordered triple coefficient over local tori of shrinking size against
/// the bracket closed form with the base point below the torus base point.
pub fn new_symbol_limit(
    inst: &SurfaceInstance,
    p: &(P1Point, P1Point),
    eps: &[f64],
    o: &TransportOptions,
) -> Result<NewLimitReport> {
    let alpha = coarse_alphabet(inst);
    let mut triple = Vec::new();
    let mut closed = Vec::new();
    for &e in eps {
        let (g, spec) = local_torus(inst, p, e)?;
        triple.push(transport_with(&alpha, &g, o)?.coeff(&[0, 1, 2]));
        let q = spec.base_point().coord(spec.normal.other());
        closed.push(log_surface_numeric(inst, SymbolKind::New, p, q, &PathChoice::Straight, &o.steps)?);
    }
    let errors: Vec<f64> = triple.iter().zip(&closed).map(|(a, b)| (a - b).norm()).collect();
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(NewLimitReport { eps: eps.to_vec(), triple, closed, errors, ratios })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BProjectionReport {
    pub eps: Vec<f64>,
    pub quarter_b: Vec<C64>,
    pub log_parshin: Vec<C64>,
    /// Both sequences extrapolated to zero radius.
    pub quarter_b_limit: C64,
    pub log_parshin_limit: C64,
    pub relative_error: f64,
}

/// Richardson extrapolation to zero for samples at radii `e, e/2, e/4`.
pub fn richardson3(v: &[C64]) -> C64 {
    match v {
        [a, b, c] => (*c * 8.0 - *b * 6.0 + *a) / 3.0,
        [a, b] => *b * 2.0 - *a,
        [a] => *a,
        _ => panic!("need one to three samples"),
    }
}

/// `-B/4` over local tori against Log Parshin with the base point below the
/// torus base point; both extrapolated to zero radius.
pub fn b_projection_check(
    inst: &SurfaceInstance,
    p: &(P1Point, P1Point),
    eps: &[f64],
    o: &TransportOptions,
) -> Result<BProjectionReport> {
    let alpha = tagged_alphabet(inst);
    let mut qb = Vec::new();
    let mut lp = Vec::new();
    for &e in eps {
        let (g, spec) = local_torus(inst, p, e)?;
        qb.push(-project_b(&transport_with(&alpha, &g, o)?, &alpha)? / 4.0);
        let q = spec.base_point().coord(spec.normal.other());
        lp.push(log_surface_numeric(inst, SymbolKind::Parshin, p, q, &PathChoice::Straight, &o.steps)?);
    }
    let (a, b) = (richardson3(&qb), richardson3(&lp));
    let scale = b.norm().max(TWO_PI_I.norm().powi(3));
    Ok(BProjectionReport {
        eps: eps.to_vec(),
        quarter_b: qb,
        log_parshin: lp,
        quarter_b_limit: a,
        log_parshin_limit: b,
        relative_error: (a - b).norm() / scale,
    })
}

/// Path items for reports.
pub fn describe_path(g: &PathWord) -> Vec<String> {
    g.items()
        .iter()
        .map(|it| match it {
            PathItem::Elem(Elementary::Segment { .. }) => "segment".to_string(),
            PathItem::Elem(Elementary::CoordCircle { .. }) => "circle".to_string(),
            PathItem::Inverse(_) => "inverse".to_string(),
            PathItem::Commutator(..) => "commutator".to_string(),
        })
        .collect()
}
