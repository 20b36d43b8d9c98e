//! Piecewise paths in `C^2`, logarithmic one-forms and their branch-continuous
//! integrals.
//!
//! Integrals of `m dz/(z - a)` are accumulated as sums of principal logs of
//! `(z1 - a)/(z0 - a)` over steps short enough that no step turns more than
//! half a radian around any pole. The result is exact up to rounding; no
//! quadrature rule is involved.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{FactoredFunction1D, Rat};
use crate::surface::SurfaceFunction;

pub type C64 = Complex64;

pub const TWO_PI_I: C64 = C64::new(0.0, 2.0 * PI);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CPoint2 {
    pub x: C64,
    pub y: C64,
}

impl CPoint2 {
    pub fn new(x: C64, y: C64) -> Self {
        CPoint2 { x, y }
    }

    pub fn real(x: f64, y: f64) -> Self {
        CPoint2 { x: C64::new(x, 0.0), y: C64::new(y, 0.0) }
    }

    pub fn coord(&self, a: Axis) -> C64 {
        match a {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }

    /// Point with the `a` coordinate replaced.
    pub fn with(&self, a: Axis, v: C64) -> Self {
        match a {
            Axis::X => CPoint2 { x: v, y: self.y },
            Axis::Y => CPoint2 { x: self.x, y: v },
        }
    }

    pub fn dist(&self, o: &CPoint2) -> f64 {
        ((self.x - o.x).norm_sqr() + (self.y - o.y).norm_sqr()).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Elementary {
    Segment {
        from: CPoint2,
        to: CPoint2,
    },
    /// `axis = center + radius e^(i(start + 2 pi turns t))`, the other
    /// coordinate fixed.
    CoordCircle {
        axis: Axis,
        center: C64,
        radius: f64,
        turns: i32,
        other: C64,
        start_angle: f64,
    },
}

impl Elementary {
    pub fn segment(from: CPoint2, to: CPoint2) -> Result<Self> {
        if from.dist(&to) == 0.0 {
            return Err(Error::Invalid("segment endpoints coincide".into()));
        }
        Ok(Elementary::Segment { from, to })
    }

    pub fn circle(axis: Axis, center: C64, radius: f64, turns: i32, other: C64, start_angle: f64) -> Result<Self> {
        if !(radius > 0.0) || turns == 0 {
            return Err(Error::Invalid("circle needs positive radius and nonzero turns".into()));
        }
        Ok(Elementary::CoordCircle { axis, center, radius, turns, other, start_angle })
    }

    pub fn point(&self, t: f64) -> CPoint2 {
        match *self {
            Elementary::Segment { from, to } => CPoint2 {
                x: from.x + (to.x - from.x) * t,
                y: from.y + (to.y - from.y) * t,
            },
            Elementary::CoordCircle { axis, center, radius, turns, other, start_angle } => {
                let th = start_angle + 2.0 * PI * turns as f64 * t;
                let z = center + C64::from_polar(radius, th);
                CPoint2::new(z, other).swap_if(axis == Axis::Y)
            }
        }
    }

    pub fn start(&self) -> CPoint2 {
        self.point(0.0)
    }

    pub fn end(&self) -> CPoint2 {
        match *self {
            Elementary::Segment { to, .. } => to,
            // exact closure, independent of the rounding of 2 pi turns
            Elementary::CoordCircle { .. } => self.point(0.0),
        }
    }

    /// Length of the track in one coordinate over `[t0, t1]`.
    fn axis_length(&self, a: Axis, t0: f64, t1: f64) -> f64 {
        let dt = (t1 - t0).abs();
        match *self {
            Elementary::Segment { from, to } => (to.coord(a) - from.coord(a)).norm() * dt,
            Elementary::CoordCircle { axis, radius, turns, .. } => {
                if axis == a {
                    2.0 * PI * radius * (turns.abs() as f64) * dt
                } else {
                    0.0
                }
            }
        }
    }

    /// Distance from `p` to the track in one coordinate.
    pub fn distance_to(&self, a: Axis, p: C64) -> f64 {
        match *self {
            Elementary::Segment { from, to } => seg_dist(from.coord(a), to.coord(a), p),
            Elementary::CoordCircle { axis, center, radius, other, .. } => {
                if axis == a {
                    ((p - center).norm() - radius).abs()
                } else {
                    (p - other).norm()
                }
            }
        }
    }
}

impl CPoint2 {
    fn swap_if(self, b: bool) -> CPoint2 {
        if b {
            CPoint2 { x: self.y, y: self.x }
        } else {
            self
        }
    }
}

fn seg_dist(u0: C64, u1: C64, p: C64) -> f64 {
    let d = u1 - u0;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (p - u0).norm();
    }
    let s = ((p - u0) * d.conj()).re / l2;
    let s = s.clamp(0.0, 1.0);
    (u0 + d * s - p).norm()
}

/// An elementary piece traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oriented {
    pub elem: Elementary,
    pub reversed: bool,
}

impl Oriented {
    pub fn point(&self, t: f64) -> CPoint2 {
        if self.reversed {
            if t == 0.0 {
                return self.elem.end();
            }
            self.elem.point(1.0 - t)
        } else {
            if t == 1.0 {
                return self.elem.end();
            }
            self.elem.point(t)
        }
    }

    pub fn start(&self) -> CPoint2 {
        self.point(0.0)
    }

    pub fn end(&self) -> CPoint2 {
        self.point(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathItem {
    Elem(Elementary),
    Inverse(Elementary),
    Commutator(Box<PathWord>, Box<PathWord>),
}

/// A concatenation of pieces; commutators expand to `A B A^-1 B^-1`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PathWord {
    items: Vec<PathItem>,
}

const JOIN_TOL: f64 = 1e-12;

impl PathWord {
    /// The constant path.
    pub fn empty() -> Self {
        PathWord { items: Vec::new() }
    }

    pub fn new(items: Vec<PathItem>) -> Result<Self> {
        let w = PathWord { items };
        w.check_continuity()?;
        Ok(w)
    }

    pub fn elem(e: Elementary) -> Self {
        PathWord { items: vec![PathItem::Elem(e)] }
    }

    pub fn segment(from: CPoint2, to: CPoint2) -> Result<Self> {
        Ok(Self::elem(Elementary::segment(from, to)?))
    }

    /// Polyline through the given points.
    pub fn polyline(pts: &[CPoint2]) -> Result<Self> {
        let items = pts
            .windows(2)
            .map(|w| Elementary::segment(w[0], w[1]).map(PathItem::Elem))
            .collect::<Result<Vec<_>>>()?;
        Self::new(items)
    }

    /// `a b a^-1 b^-1`; both loops must share their base point.
    pub fn commutator(a: PathWord, b: PathWord) -> Result<Self> {
        Self::new(vec![PathItem::Commutator(Box::new(a), Box::new(b))])
    }

    pub fn items(&self) -> &[PathItem] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Expanded pieces in traversal order.
    pub fn flatten(&self) -> Vec<Oriented> {
        let mut out = Vec::new();
        self.push_flat(false, &mut out);
        out
    }

    fn push_flat(&self, inverse: bool, out: &mut Vec<Oriented>) {
        let push_item = |it: &PathItem, inv: bool, out: &mut Vec<Oriented>| match it {
            PathItem::Elem(e) => out.push(Oriented { elem: *e, reversed: inv }),
            PathItem::Inverse(e) => out.push(Oriented { elem: *e, reversed: !inv }),
            PathItem::Commutator(a, b) => {
                let seq: [(&PathWord, bool); 4] = [(a, false), (b, false), (a, true), (b, true)];
                if inv {
                    for (w, i) in seq.iter().rev() {
                        w.push_flat(!*i, out);
                    }
                } else {
                    for (w, i) in seq.iter() {
                        w.push_flat(*i, out);
                    }
                }
            }
        };
        if inverse {
            for it in self.items.iter().rev() {
                push_item(it, true, out);
            }
        } else {
            for it in &self.items {
                push_item(it, false, out);
            }
        }
    }

    pub fn start(&self) -> Option<CPoint2> {
        self.flatten().first().map(|p| p.start())
    }

    pub fn end(&self) -> Option<CPoint2> {
        self.flatten().last().map(|p| p.end())
    }

    pub fn is_closed(&self) -> bool {
        match (self.start(), self.end()) {
            (Some(a), Some(b)) => a.dist(&b) <= JOIN_TOL * (1.0 + a.x.norm() + a.y.norm()),
            _ => true,
        }
    }

    fn check_continuity(&self) -> Result<()> {
        for it in &self.items {
            if let PathItem::Commutator(a, b) = it {
                if !a.is_closed() || !b.is_closed() {
                    return Err(Error::NotClosed);
                }
            }
        }
        let flat = self.flatten();
        for (i, w) in flat.windows(2).enumerate() {
            let (e, s) = (w[0].end(), w[1].start());
            if e.dist(&s) > JOIN_TOL * (1.0 + e.x.norm() + e.y.norm()) {
                return Err(Error::Discontinuous(i + 1));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> PathWord {
        let items = self
            .items
            .iter()
            .rev()
            .map(|it| match it {
                PathItem::Elem(e) => PathItem::Inverse(*e),
                PathItem::Inverse(e) => PathItem::Elem(*e),
                // (a b a^-1 b^-1)^-1 = b a b^-1 a^-1
                PathItem::Commutator(a, b) => PathItem::Commutator(b.clone(), a.clone()),
            })
            .collect();
        PathWord { items }
    }

    /// `self` followed by `o`.
    pub fn then(&self, o: &PathWord) -> Result<PathWord> {
        let mut items = self.items.clone();
        items.extend(o.items.iter().cloned());
        PathWord::new(items)
    }

    /// Number of expanded pieces.
    pub fn piece_count(&self) -> usize {
        self.flatten().len()
    }
}

/// `sum m dx/(x - a) + sum q dy/(y - b)`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct LogForm {
    pub x_poles: Vec<(C64, i64)>,
    pub y_poles: Vec<(C64, i64)>,
}

impl LogForm {
    pub fn zero() -> Self {
        LogForm::default()
    }

    /// `m dz/(z - a)` in one coordinate.
    pub fn single(axis: Axis, a: C64, m: i64) -> Self {
        Self::on_axis(axis, vec![(a, m)])
    }

    pub fn on_axis(axis: Axis, poles: Vec<(C64, i64)>) -> Self {
        match axis {
            Axis::X => LogForm { x_poles: poles, y_poles: vec![] },
            Axis::Y => LogForm { x_poles: vec![], y_poles: poles },
        }
    }

    /// `df/f` of a one-variable function placed on an axis.
    pub fn of_function(axis: Axis, f: &FactoredFunction1D) -> Self {
        Self::on_axis(axis, rat_poles(f.factors()))
    }

    /// `df/f` of a surface function.
    pub fn of_surface(f: &SurfaceFunction) -> Self {
        LogForm { x_poles: rat_poles(&f.xfactors), y_poles: rat_poles(&f.yfactors) }
    }

    pub fn poles(&self) -> impl Iterator<Item = (Axis, C64, i64)> + '_ {
        self.x_poles
            .iter()
            .map(|&(a, m)| (Axis::X, a, m))
            .chain(self.y_poles.iter().map(|&(a, m)| (Axis::Y, a, m)))
    }

    pub fn add(&self, o: &LogForm) -> LogForm {
        let mut r = self.clone();
        r.x_poles.extend(o.x_poles.iter().cloned());
        r.y_poles.extend(o.y_poles.iter().cloned());
        r
    }

    /// Increment between two nearby points, principal branch per pole.
    pub fn increment(&self, p0: &CPoint2, p1: &CPoint2) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (ax, a, m) in self.poles() {
            let r = (p1.coord(ax) - a) / (p0.coord(ax) - a);
            s += r.ln() * m as f64;
        }
        s
    }
}

fn rat_poles(fs: &[(Rat, i64)]) -> Vec<(C64, i64)> {
    fs.iter().map(|(r, e)| (C64::new(r.to_f64(), 0.0), *e)).collect()
}

/// Controls for the adaptive step subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepOptions {
    /// Largest per-step argument change around a pole.
    pub max_arg: f64,
    /// Largest per-step `|delta log|` for a pole.
    pub max_dlog: f64,
    /// Largest ratio of per-step track length to the distance from a pole.
    pub ratio: f64,
    /// Largest step in the piece parameter `t` in `[0, 1]`.
    pub max_step: f64,
    pub clearance: f64,
    pub max_depth: u32,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions { max_arg: 0.5, max_dlog: 0.5, ratio: 0.5, max_step: 1.0, clearance: 1e-6, max_depth: 60 }
    }
}

/// Rejects a path passing within `clearance` of any pole.
pub fn check_clearance(pieces: &[Oriented], poles: &[(Axis, C64)], clearance: f64) -> Result<()> {
    for p in pieces {
        for &(ax, a) in poles {
            let d = p.elem.distance_to(ax, a);
            if d < clearance {
                return Err(Error::PoleTooClose(d));
            }
        }
    }
    Ok(())
}

fn needs_split(p: &Oriented, poles: &[(Axis, C64)], t0: f64, t1: f64, o: &StepOptions) -> bool {
    if t1 - t0 > o.max_step {
        return true;
    }
    let (p0, p1) = (p.point(t0), p.point(t1));
    for &(ax, a) in poles {
        let len = p.elem.axis_length(ax, t0, t1);
        if len == 0.0 {
            continue;
        }
        let (z0, z1) = (p0.coord(ax) - a, p1.coord(ax) - a);
        let near = z0.norm().min(z1.norm());
        if len > o.ratio * near {
            return true;
        }
        let l = (z1 / z0).ln();
        if l.im.abs() > o.max_arg || l.norm() > o.max_dlog {
            return true;
        }
    }
    false
}

/// Parameter steps of one piece, in order.
pub fn piece_steps(p: &Oriented, poles: &[(Axis, C64)], o: &StepOptions) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let mut stack = vec![(0.0f64, 1.0f64, 0u32)];
    while let Some((t0, t1, depth)) = stack.pop() {
        if needs_split(p, poles, t0, t1, o) {
            if depth >= o.max_depth {
                return Err(Error::NoConvergence);
            }
            let tm = 0.5 * (t0 + t1);
            stack.push((tm, t1, depth + 1));
            stack.push((t0, tm, depth + 1));
        } else {
            out.push((t0, t1));
        }
    }
    Ok(out)
}

fn form_poles(forms: &[&LogForm]) -> Vec<(Axis, C64)> {
    let mut v: Vec<(Axis, C64)> = Vec::new();
    for f in forms {
        for (ax, a, _) in f.poles() {
            if !v.iter().any(|&(b, c)| b == ax && c == a) {
                v.push((ax, a));
            }
        }
    }
    v
}

/// Branch-continuous `int_gamma omega`.
pub fn log_integral(w: &LogForm, g: &PathWord) -> Result<C64> {
    log_integral_with(w, g, &StepOptions::default())
}

pub fn log_integral_with(w: &LogForm, g: &PathWord, o: &StepOptions) -> Result<C64> {
    let poles = form_poles(&[w]);
    let pieces = g.flatten();
    check_clearance(&pieces, &poles, o.clearance)?;
    let mut s = C64::new(0.0, 0.0);
    for p in &pieces {
        for (t0, t1) in piece_steps(p, &poles, o)? {
            s += w.increment(&p.point(t0), &p.point(t1));
        }
    }
    Ok(s)
}

/// Winding of a closed path around the single pole of `w`.
pub fn winding_number(w: &LogForm, g: &PathWord) -> Result<i64> {
    if !g.is_closed() {
        return Err(Error::NotClosed);
    }
    let v = log_integral(w, g)? / TWO_PI_I;
    let k = v.re.round();
    let res = (v - C64::new(k, 0.0)).norm();
    if res > 1e-6 {
        return Err(Error::NonIntegerWinding(res));
    }
    Ok(k as i64)
}

/// Lateral offsets tried, as fractions of the segment length, when a pole
/// sits on a straight segment.
pub const DETOUR_OFFSETS: [f64; 3] = [1e-3, 1e-2, 1e-1];

/// Straight segment, or a two-segment path bent sideways around poles that
/// come within `clearance` of it.
pub fn segment_avoiding(from: CPoint2, to: CPoint2, poles: &[(Axis, C64)], clearance: f64) -> Result<PathWord> {
    let straight = Elementary::segment(from, to)?;
    let clear = |e: &Elementary| poles.iter().map(|&(ax, a)| e.distance_to(ax, a)).fold(f64::INFINITY, f64::min);
    let d0 = clear(&straight);
    if d0 >= clearance {
        return Ok(PathWord::elem(straight));
    }
    for off in DETOUR_OFFSETS {
        // the bend point moves each coordinate perpendicular to its own
        // displacement, always to the left
        let i = C64::new(0.0, off);
        let mid = CPoint2 {
            x: (from.x + to.x) * 0.5 + i * (to.x - from.x),
            y: (from.y + to.y) * 0.5 + i * (to.y - from.y),
        };
        let a = Elementary::segment(from, mid)?;
        let b = Elementary::segment(mid, to)?;
        if clear(&a) >= clearance && clear(&b) >= clearance {
            return PathWord::new(vec![PathItem::Elem(a), PathItem::Elem(b)]);
        }
    }
    Err(Error::PoleTooClose(d0))
}

/// Shape of a local torus around a point where `C0` (the zero set of the
/// `normal` coordinate) meets a transverse line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusSpec {
    pub center: CPoint2,
    pub normal: Axis,
    pub eps_normal: f64,
    pub eps_along: f64,
    /// Start angles of the along circle and the normal circle.
    pub angles: (f64, f64),
    /// Turns of both circles; `-1` is the default orientation.
    pub turns: i32,
}

impl TorusSpec {
    pub fn new(center: CPoint2, normal: Axis, eps_normal: f64, eps_along: f64) -> Self {
        TorusSpec { center, normal, eps_normal, eps_along, angles: (0.0, 0.0), turns: -1 }
    }

    /// Common base point of both circles.
    pub fn base_point(&self) -> CPoint2 {
        let along = self.normal.other();
        let pa = self.center.coord(along) + C64::from_polar(self.eps_along, self.angles.0);
        let pn = self.center.coord(self.normal) + C64::from_polar(self.eps_normal, self.angles.1);
        self.center.with(along, pa).with(self.normal, pn)
    }

    /// Circle in the along coordinate at the offset normal position.
    pub fn sigma(&self) -> Elementary {
        let along = self.normal.other();
        let b = self.base_point();
        Elementary::CoordCircle {
            axis: along,
            center: self.center.coord(along),
            radius: self.eps_along,
            turns: self.turns,
            other: b.coord(self.normal),
            start_angle: self.angles.0,
        }
    }

    /// Circle in the normal coordinate at the offset along position.
    pub fn tau(&self) -> Elementary {
        let along = self.normal.other();
        let b = self.base_point();
        Elementary::CoordCircle {
            axis: self.normal,
            center: self.center.coord(self.normal),
            radius: self.eps_normal,
            turns: self.turns,
            other: b.coord(along),
            start_angle: self.angles.1,
        }
    }
}

/// `[sigma, tau]`, optionally conjugated as `access [sigma, tau] access^-1`
/// where `access` runs from an outside base point to the torus base point.
///
/// Fails when a radius reaches half the distance to a pole of `forms` that
/// does not pass through the center.
pub fn torus_boundary(spec: &TorusSpec, forms: &[&LogForm], access: Option<&PathWord>) -> Result<PathWord> {
    if turns_bad(spec) {
        return Err(Error::Invalid("torus needs positive radii and nonzero turns".into()));
    }
    for (ax, a) in form_poles(forms) {
        let d = (a - spec.center.coord(ax)).norm();
        if d < 1e-12 {
            continue;
        }
        let eps = if ax == spec.normal { spec.eps_normal } else { spec.eps_along };
        if eps >= 0.5 * d {
            return Err(Error::EpsilonTooLarge(eps, d));
        }
    }
    let sigma = PathWord::elem(spec.sigma());
    let tau = PathWord::elem(spec.tau());
    let core = PathWord::commutator(sigma, tau)?;
    match access {
        None => Ok(core),
        Some(g) => g.then(&core)?.then(&g.inverse()),
    }
}

fn turns_bad(s: &TorusSpec) -> bool {
    !(s.eps_normal > 0.0 && s.eps_along > 0.0) || s.turns == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn unit_circle(center: f64, turns: i32) -> PathWord {
        PathWord::elem(Elementary::circle(Axis::X, c(center, 0.0), 1.0, turns, c(0.0, 0.0), 0.0).unwrap())
    }

    #[test]
    fn residue_of_dz_over_z() {
        let w = LogForm::single(Axis::X, c(0.0, 0.0), 1);
        let v = log_integral(&w, &unit_circle(0.0, 1)).unwrap();
        assert!((v - TWO_PI_I).norm() < 1e-12);
        let v = log_integral(&w, &unit_circle(3.0, 1)).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn quarter_arc() {
        let w = LogForm::single(Axis::X, c(0.0, 0.0), 1);
        let arc = Elementary::CoordCircle {
            axis: Axis::X,
            center: c(0.0, 0.0),
            radius: 1.0,
            turns: 1,
            other: c(0.0, 0.0),
            start_angle: 0.0,
        };
        // a quarter turn is a quarter of the parameter range
        let pts: Vec<CPoint2> = (0..=8).map(|k| arc.point(0.25 * k as f64 / 8.0)).collect();
        let g = PathWord::polyline(&pts).unwrap();
        let v = log_integral(&w, &g).unwrap();
        assert!((v - c(0.0, PI / 2.0)).norm() < 1e-10);
    }

    #[test]
    fn windings() {
        let w = LogForm::single(Axis::X, c(0.0, 0.0), 1);
        assert_eq!(winding_number(&w, &unit_circle(0.0, 1)).unwrap(), 1);
        assert_eq!(winding_number(&w, &unit_circle(0.0, 1).inverse()).unwrap(), -1);
        let a = PathWord::elem(Elementary::circle(Axis::X, c(0.0, 0.0), 0.5, 1, c(0.0, 0.0), PI).unwrap());
        let base = a.start().unwrap();
        let b = PathWord::elem(Elementary::circle(Axis::X, base.x + 0.5, 0.5, 1, c(0.0, 0.0), PI).unwrap());
        let comm = PathWord::commutator(a, b).unwrap();
        assert_eq!(winding_number(&w, &comm).unwrap(), 0);
    }

    #[test]
    fn clearance_is_enforced() {
        let w = LogForm::single(Axis::X, c(0.5, 0.0), 1);
        let g = PathWord::segment(CPoint2::real(0.0, 0.0), CPoint2::real(1.0, 0.0)).unwrap();
        assert!(matches!(log_integral(&w, &g), Err(Error::PoleTooClose(_))));
        let bent = segment_avoiding(CPoint2::real(0.0, 0.0), CPoint2::real(1.0, 0.0), &[(Axis::X, c(0.5, 0.0))], 1e-6)
            .unwrap();
        assert_eq!(bent.piece_count(), 2);
        assert!(log_integral(&w, &bent).is_ok());
    }

    #[test]
    fn discontinuity_is_rejected() {
        let a = Elementary::segment(CPoint2::real(0.0, 0.0), CPoint2::real(1.0, 0.0)).unwrap();
        let b = Elementary::segment(CPoint2::real(2.0, 0.0), CPoint2::real(3.0, 0.0)).unwrap();
        assert_eq!(
            PathWord::new(vec![PathItem::Elem(a), PathItem::Elem(b)]),
            Err(Error::Discontinuous(1))
        );
    }

    #[test]
    fn torus_shapes() {
        let spec = TorusSpec::new(CPoint2::real(0.0, 0.0), Axis::Y, 1e-2, 1e-2);
        let w = LogForm::single(Axis::X, c(1.0, 0.0), 1);
        let t = torus_boundary(&spec, &[&w], None).unwrap();
        assert_eq!(t.piece_count(), 4);
        assert!(t.is_closed());
        let q = CPoint2::real(-1.0, 0.5);
        let mid = CPoint2::real(-0.5, 0.3);
        let access = PathWord::polyline(&[q, mid, spec.base_point()]).unwrap();
        let t = torus_boundary(&spec, &[&w], Some(&access)).unwrap();
        assert_eq!(t.piece_count(), 8);
        assert!(t.is_closed());
        let big = TorusSpec::new(CPoint2::real(0.0, 0.0), Axis::Y, 1e-2, 0.6);
        assert!(matches!(torus_boundary(&big, &[&w], None), Err(Error::EpsilonTooLarge(..))));
    }
}
