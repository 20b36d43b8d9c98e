//! Iterated integrals of length at most three via transport of a truncated
//! noncommutative series along a path.
//!
//! Word coefficients are read with the first letter earliest along the path,
//! so `F(a b) = F(a) F(b)` for concatenated paths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{check_clearance, piece_steps, Axis, LogForm, PathWord, StepOptions, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// A letter: a one-form plus an optional `(k, i)` tag, `k` the function
/// index in `1..=3` and `i` a component label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Letter {
    pub name: String,
    pub form: LogForm,
    pub tag: Option<(u8, u32)>,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        for (i, a) in letters.iter().enumerate() {
            for b in &letters[..i] {
                if a.name == b.name {
                    return Err(Error::Alphabet(format!("duplicate letter {}", a.name)));
                }
                if a.tag.is_some() && a.tag == b.tag {
                    return Err(Error::Alphabet(format!("duplicate tag {:?}", a.tag.unwrap())));
                }
            }
        }
        Ok(Alphabet { letters })
    }

    /// One untagged letter per form, named `w0, w1, ...`.
    pub fn of_forms(forms: &[LogForm]) -> Self {
        let letters = forms
            .iter()
            .enumerate()
            .map(|(i, f)| Letter { name: format!("w{i}"), form: f.clone(), tag: None })
            .collect();
        Alphabet { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn tags(&self) -> Result<Vec<(u8, u32)>> {
        self.letters
            .iter()
            .map(|l| l.tag.ok_or_else(|| Error::Alphabet(format!("letter {} is untagged", l.name))))
            .collect()
    }

    fn poles(&self) -> Vec<(Axis, C64)> {
        let mut v: Vec<(Axis, C64)> = Vec::new();
        for l in &self.letters {
            for (ax, a, _) in l.form.poles() {
                if !v.contains(&(ax, a)) {
                    v.push((ax, a));
                }
            }
        }
        v
    }
}

/// Group-like series truncated after words of length three, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct NCSeries3 {
    d: usize,
    l1: Vec<C64>,
    l2: Vec<C64>,
    l3: Vec<C64>,
}

impl NCSeries3 {
    pub fn identity(d: usize) -> Self {
        NCSeries3 { d, l1: vec![ZERO; d], l2: vec![ZERO; d * d], l3: vec![ZERO; d * d * d] }
    }

    pub fn letters(&self) -> usize {
        self.d
    }

    /// Coefficient of a word; the empty word has coefficient 1.
    pub fn coeff(&self, w: &[usize]) -> C64 {
        let d = self.d;
        match *w {
            [] => C64::new(1.0, 0.0),
            [i] => self.l1[i],
            [i, j] => self.l2[i * d + j],
            [i, j, k] => self.l3[(i * d + j) * d + k],
            _ => ZERO,
        }
    }

    pub fn set(&mut self, w: &[usize], v: C64) -> Result<()> {
        let d = self.d;
        match *w {
            [i] => self.l1[i] = v,
            [i, j] => self.l2[i * d + j] = v,
            [i, j, k] => self.l3[(i * d + j) * d + k] = v,
            _ => return Err(Error::TooDeep),
        }
        Ok(())
    }

    /// All nonempty words with their coefficients, shortest first.
    pub fn words(&self) -> Vec<(Vec<usize>, C64)> {
        let d = self.d;
        let mut out = Vec::with_capacity(d + d * d + d * d * d);
        for i in 0..d {
            out.push((vec![i], self.l1[i]));
        }
        for i in 0..d {
            for j in 0..d {
                out.push((vec![i, j], self.l2[i * d + j]));
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    out.push((vec![i, j, k], self.l3[(i * d + j) * d + k]));
                }
            }
        }
        out
    }

    /// Truncated product `self * b`.
    pub fn mul(&self, b: &NCSeries3) -> NCSeries3 {
        let mut r = self.clone();
        r.mul_assign(b);
        r
    }

    pub fn mul_assign(&mut self, b: &NCSeries3) {
        let d = self.d;
        assert_eq!(d, b.d, "series over different alphabets");
        for i in 0..d {
            for j in 0..d {
                let a2 = self.l2[i * d + j];
                let a1 = self.l1[i];
                let base = (i * d + j) * d;
                for k in 0..d {
                    self.l3[base + k] += b.l3[base + k] + a2 * b.l1[k] + a1 * b.l2[j * d + k];
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                self.l2[i * d + j] += b.l2[i * d + j] + self.l1[i] * b.l1[j];
            }
        }
        for i in 0..d {
            self.l1[i] += b.l1[i];
        }
    }

    /// Inverse of a series with unit constant term.
    pub fn inverse(&self) -> NCSeries3 {
        // (1 + a)^-1 = 1 - a + a^2 - a^3
        let d = self.d;
        let mut a = self.clone();
        a.l1.iter_mut().for_each(|z| *z = -*z);
        a.l2.iter_mut().for_each(|z| *z = -*z);
        a.l3.iter_mut().for_each(|z| *z = -*z);
        // a' = -a; inverse = 1 + a' + a'^2 + a'^3 truncated
        let mut r = NCSeries3::identity(d);
        r.l1.clone_from(&a.l1);
        for i in 0..d {
            for j in 0..d {
                r.l2[i * d + j] = a.l2[i * d + j] + a.l1[i] * a.l1[j];
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let idx = (i * d + j) * d + k;
                    r.l3[idx] = a.l3[idx]
                        + a.l1[i] * a.l2[j * d + k]
                        + a.l2[i * d + j] * a.l1[k]
                        + a.l1[i] * a.l1[j] * a.l1[k];
                }
            }
        }
        r
    }

    /// Largest coefficient difference over all words.
    pub fn max_diff(&self, o: &NCSeries3) -> f64 {
        self.l1
            .iter()
            .zip(&o.l1)
            .chain(self.l2.iter().zip(&o.l2))
            .chain(self.l3.iter().zip(&o.l3))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Signature of a polynomial path `p(s) = sum_r a_r s^r`, `r = 1..=3`.
    fn of_cubic(a: &[Vec<C64>; 3]) -> NCSeries3 {
        let d = a[0].len();
        let mut s = NCSeries3::identity(d);
        let linear = a[1].iter().chain(a[2].iter()).all(|z| *z == ZERO);
        for i in 0..d {
            s.l1[i] = a[0][i] + a[1][i] + a[2][i];
        }
        if linear {
            let c = &a[0];
            for i in 0..d {
                for j in 0..d {
                    let cij = c[i] * c[j];
                    s.l2[i * d + j] = cij * 0.5;
                    let base = (i * d + j) * d;
                    for k in 0..d {
                        s.l3[base + k] = cij * c[k] / 6.0;
                    }
                }
            }
            return s;
        }
        for r in 0..3 {
            for q in 0..3 {
                let (rr, qq) = ((r + 1) as f64, (q + 1) as f64);
                let w2 = qq / (rr + qq);
                let v: Vec<C64> = (0..d)
                    .map(|k| (0..3).map(|p| a[p][k] * ((p + 1) as f64 / (rr + qq + (p + 1) as f64))).sum())
                    .collect();
                for i in 0..d {
                    for j in 0..d {
                        let c = a[r][i] * a[q][j] * w2;
                        s.l2[i * d + j] += c;
                        let base = (i * d + j) * d;
                        for k in 0..d {
                            s.l3[base + k] += c * v[k];
                        }
                    }
                }
            }
        }
        s
    }
}

/// Per-step model of the path in log coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// One exponential of the step increments; second order globally.
    Exponential,
    /// Exact signature of the cubic through four step nodes.
    Cubic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportOptions {
    pub steps: StepOptions,
    pub scheme: Scheme,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            steps: StepOptions { ratio: 0.05, max_step: 1.0 / 8.0, ..StepOptions::default() },
            scheme: Scheme::Cubic,
        }
    }
}

/// Solves `dF = F sum X_l w_l` along the path starting from `F = 1`.
pub fn transport(alpha: &Alphabet, g: &PathWord) -> Result<NCSeries3> {
    transport_with(alpha, g, &TransportOptions::default())
}

pub fn transport_with(alpha: &Alphabet, g: &PathWord, o: &TransportOptions) -> Result<NCSeries3> {
    let d = alpha.len();
    let poles = alpha.poles();
    let pieces = g.flatten();
    check_clearance(&pieces, &poles, o.steps.clearance)?;
    let mut f = NCSeries3::identity(d);
    let nodes: &[f64] = match o.scheme {
        Scheme::Exponential => &[1.0],
        Scheme::Cubic => &[1.0 / 3.0, 2.0 / 3.0, 1.0],
    };
    for p in &pieces {
        for (t0, t1) in piece_steps(p, &poles, &o.steps)? {
            // cumulative increments at the nodes
            let mut u: Vec<Vec<C64>> = Vec::with_capacity(nodes.len());
            let mut prev = p.point(t0);
            let mut acc = vec![ZERO; d];
            for &s in nodes {
                let pt = if s == 1.0 { p.point(t1) } else { p.point(t0 + (t1 - t0) * s) };
                for (l, letter) in alpha.letters.iter().enumerate() {
                    acc[l] += letter.form.increment(&prev, &pt);
                }
                u.push(acc.clone());
                prev = pt;
            }
            let coeffs = match o.scheme {
                Scheme::Exponential => [u[0].clone(), vec![ZERO; d], vec![ZERO; d]],
                Scheme::Cubic => {
                    let (u1, u2, u3) = (&u[0], &u[1], &u[2]);
                    let mix = |c1: f64, c2: f64, c3: f64| -> Vec<C64> {
                        (0..d).map(|l| u1[l] * c1 + u2[l] * c2 + u3[l] * c3).collect()
                    };
                    [mix(9.0, -4.5, 1.0), mix(-22.5, 18.0, -4.5), mix(13.5, -13.5, 4.5)]
                }
            };
            f.mul_assign(&NCSeries3::of_cubic(&coeffs));
        }
    }
    Ok(f)
}

/// `int_g w_1 o ... o w_n` for `n <= 3`.
pub fn iterated_integral(forms: &[LogForm], g: &PathWord) -> Result<C64> {
    iterated_integral_with(forms, g, &TransportOptions::default())
}

pub fn iterated_integral_with(forms: &[LogForm], g: &PathWord, o: &TransportOptions) -> Result<C64> {
    if forms.len() > 3 {
        return Err(Error::TooDeep);
    }
    let f = transport_with(&Alphabet::of_forms(forms), g, o)?;
    let w: Vec<usize> = (0..forms.len()).collect();
    Ok(f.coeff(&w))
}

/// Largest deviation of `F(g1 g2)` from `F(g1) F(g2)` over all words.
pub fn check_composition(forms: &[LogForm], g1: &PathWord, g2: &PathWord) -> Result<f64> {
    check_composition_with(forms, g1, g2, &TransportOptions::default())
}

pub fn check_composition_with(
    forms: &[LogForm],
    g1: &PathWord,
    g2: &PathWord,
    o: &TransportOptions,
) -> Result<f64> {
    let g = g1.then(g2)?;
    let a = Alphabet::of_forms(forms);
    let whole = transport_with(&a, &g, o)?;
    let split = transport_with(&a, g1, o)?.mul(&transport_with(&a, g2, o)?);
    Ok(whole.max_diff(&split))
}

/// Largest shuffle defect at degrees two and three.
pub fn shuffle_residual(f: &NCSeries3) -> f64 {
    let d = f.letters();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let r = f.coeff(&[i]) * f.coeff(&[j]) - f.coeff(&[i, j]) - f.coeff(&[j, i]);
            worst = worst.max(r.norm());
            for k in 0..d {
                // (i) sh (j k) = ijk + jik + jki
                let r = f.coeff(&[i]) * f.coeff(&[j, k])
                    - f.coeff(&[i, j, k])
                    - f.coeff(&[j, i, k])
                    - f.coeff(&[j, k, i]);
                worst = worst.max(r.norm());
            }
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorResiduals {
    pub single: f64,
    pub double: f64,
    pub triple: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.single.max(self.double).max(self.triple)
    }
}

/// Residuals of the commutator formulas for `[a, b]` at lengths one to three.
pub fn check_commutator(
    w: [&LogForm; 3],
    a: &PathWord,
    b: &PathWord,
    o: &TransportOptions,
) -> Result<CommutatorResiduals> {
    let alpha = Alphabet::of_forms(&[w[0].clone(), w[1].clone(), w[2].clone()]);
    let fa = transport_with(&alpha, a, o)?;
    let fb = transport_with(&alpha, b, o)?;
    let fc = transport_with(&alpha, &PathWord::commutator(a.clone(), b.clone())?, o)?;
    let single = (0..3).map(|i| fc.coeff(&[i]).norm()).fold(0.0, f64::max);
    let a1 = |i: usize| fa.coeff(&[i]);
    let b1 = |i: usize| fb.coeff(&[i]);
    let double = (fc.coeff(&[0, 1]) - (a1(0) * b1(1) - b1(0) * a1(1))).norm();
    let rhs = fa.coeff(&[0, 1]) * b1(2) - fb.coeff(&[0, 1]) * a1(2) + fa.coeff(&[2, 1]) * b1(0)
        - fb.coeff(&[2, 1]) * a1(0)
        - a1(0) * b1(1) * a1(2)
        + b1(0) * a1(1) * b1(2);
    let triple = (fc.coeff(&[0, 1, 2]) - rhs).norm();
    Ok(CommutatorResiduals { single, double, triple })
}

/// Sum of the coefficients of words `A(1,i) A(2,j) A(3,k)` over all labels.
pub fn project_a(f: &NCSeries3, alpha: &Alphabet) -> Result<C64> {
    let tags = alpha.tags()?;
    let mut s = ZERO;
    for (w, c) in f.words() {
        if w.len() == 3 && w.iter().enumerate().all(|(p, &l)| tags[l].0 as usize == p + 1) {
            s += c;
        }
    }
    Ok(s)
}

/// Weight of a three-letter word in the `B` projection, or zero.
///
/// Each function index must occur once. With three distinct labels the word
/// weighs the sign of its function-index permutation. With a repeated label
/// the order of function indices is ignored: label patterns `(a, a, b)` and
/// `(b, a, a)` weigh `+1`, while `(a, b, a)` and `(a, a, a)` weigh `0`.
pub fn b_weight(tags: [(u8, u32); 3]) -> i32 {
    let ks = [tags[0].0, tags[1].0, tags[2].0];
    let mut sorted = ks;
    sorted.sort_unstable();
    if sorted != [1, 2, 3] {
        return 0;
    }
    let [a, b, c] = [tags[0].1, tags[1].1, tags[2].1];
    if a == b && b == c {
        0
    } else if a == b || b == c {
        1
    } else if a == c {
        0
    } else {
        let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| ks[i] > ks[j]).count();
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Weighted sum of three-letter coefficients per [`b_weight`].
pub fn project_b(f: &NCSeries3, alpha: &Alphabet) -> Result<C64> {
    let tags = alpha.tags()?;
    let mut s = ZERO;
    for (w, c) in f.words() {
        if w.len() == 3 {
            let wt = b_weight([tags[w[0]], tags[w[1]], tags[w[2]]]);
            if wt != 0 {
                s += c * wt as f64;
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{Elementary, TWO_PI_I};

    fn circle() -> PathWord {
        PathWord::elem(Elementary::circle(Axis::X, ZERO, 1.0, 1, ZERO, 0.0).unwrap())
    }

    #[test]
    fn powers_of_one_form() {
        let w = LogForm::single(Axis::X, ZERO, 1);
        let f = transport(&Alphabet::of_forms(&[w]), &circle()).unwrap();
        let t = TWO_PI_I;
        assert!((f.coeff(&[0]) - t).norm() < 1e-8 * t.norm());
        assert!((f.coeff(&[0, 0]) - t * t / 2.0).norm() < 1e-8 * t.norm().powi(2));
        assert!((f.coeff(&[0, 0, 0]) - t * t * t / 6.0).norm() < 1e-8 * t.norm().powi(3));
    }

    #[test]
    fn empty_path_is_identity() {
        let w = LogForm::single(Axis::X, ZERO, 1);
        let f = transport(&Alphabet::of_forms(&[w]), &PathWord::empty()).unwrap();
        assert_eq!(f, NCSeries3::identity(1));
    }

    #[test]
    fn inverse_series() {
        let mut f = NCSeries3::identity(2);
        f.set(&[0], C64::new(1.0, 2.0)).unwrap();
        f.set(&[0, 1], C64::new(-0.5, 0.0)).unwrap();
        f.set(&[1, 0, 1], C64::new(0.25, 1.0)).unwrap();
        let e = f.mul(&f.inverse());
        assert!(e.max_diff(&NCSeries3::identity(2)) < 1e-15);
    }

    #[test]
    fn projections() {
        let tagged = |tags: &[(u8, u32)]| {
            Alphabet::new(
                tags.iter()
                    .map(|&t| Letter { name: format!("{t:?}"), form: LogForm::zero(), tag: Some(t) })
                    .collect(),
            )
            .unwrap()
        };
        let a = tagged(&[(1, 0), (2, 0), (3, 1), (3, 2)]);
        let mut f = NCSeries3::identity(4);
        f.set(&[0, 1, 2], C64::new(2.0, 0.0)).unwrap();
        f.set(&[0, 1, 3], C64::new(3.0, 0.0)).unwrap();
        f.set(&[1, 0, 2], C64::new(7.0, 0.0)).unwrap();
        assert_eq!(project_a(&f, &a).unwrap(), C64::new(5.0, 0.0));
        assert!(project_a(&f, &Alphabet::of_forms(&[LogForm::zero()])).is_err());
        assert_eq!(b_weight([(1, 0), (2, 1), (3, 2)]), 1);
        assert_eq!(b_weight([(2, 0), (1, 1), (3, 2)]), -1);
        assert_eq!(b_weight([(1, 0), (2, 0), (3, 1)]), 1);
        assert_eq!(b_weight([(1, 0), (2, 1), (3, 0)]), 0);
        assert_eq!(b_weight([(1, 0), (1, 1), (3, 0)]), 0);
    }
}
