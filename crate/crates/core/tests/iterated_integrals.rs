use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use parshin_core::iterated::{
    b_weight, check_commutator, check_composition, iterated_integral, project_a, project_b, shuffle_residual,
    transport, transport_with, Alphabet, Letter, NCSeries3, Scheme, TransportOptions,
};
use parshin_core::paths::{torus_boundary, Axis, CPoint2, Elementary, LogForm, PathWord, StepOptions, TorusSpec, TWO_PI_I};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn circle(center: f64, r: f64, start: f64) -> PathWord {
    PathWord::elem(Elementary::circle(Axis::X, c(center, 0.0), r, 1, c(0.0, 0.0), start).unwrap())
}

/// Nested trapezoid sums along a polyline in the x coordinate.
fn nested_oracle(forms: &[&[(C64, i64)]], pts: &[C64], n: usize) -> C64 {
    let w = |f: &[(C64, i64)], z: C64| f.iter().fold(c(0.0, 0.0), |a, &(p, m)| a + m as f64 / (z - p));
    let mut acc = vec![c(0.0, 0.0); forms.len()];
    for s in pts.windows(2) {
        let dz = (s[1] - s[0]) / n as f64;
        for i in 0..n {
            let z0 = s[0] + dz * i as f64;
            let z1 = z0 + dz;
            let prev = acc.clone();
            for (l, f) in forms.iter().enumerate() {
                let lo = if l == 0 { c(1.0, 0.0) } else { prev[l - 1] };
                let hi = if l == 0 { c(1.0, 0.0) } else { acc[l - 1] };
                acc[l] += (lo * w(f, z0) + hi * w(f, z1)) * dz * 0.5;
            }
        }
    }
    *acc.last().unwrap()
}

fn polyline(pts: &[C64]) -> PathWord {
    let ps: Vec<CPoint2> = pts.iter().map(|&z| CPoint2::new(z, c(0.0, 0.0))).collect();
    PathWord::polyline(&ps).unwrap()
}

#[test]
fn single_letter_powers() {
    let w = LogForm::single(Axis::X, c(0.0, 0.0), 1);
    let f = transport(&Alphabet::of_forms(&[w]), &circle(0.0, 1.0, 0.0)).unwrap();
    let t = TWO_PI_I;
    assert!((f.coeff(&[0]) - t).norm() < 1e-8 * t.norm());
    assert!((f.coeff(&[0, 0]) - t * t / 2.0).norm() < 1e-8 * t.norm().powi(2));
    assert!((f.coeff(&[0, 0, 0]) - t * t * t / 6.0).norm() < 1e-8 * t.norm().powi(3));
    assert_eq!(f.coeff(&[]), c(1.0, 0.0));
}

#[test]
fn empty_path_is_identity() {
    let w = LogForm::single(Axis::X, c(0.0, 0.0), 1);
    let f = transport(&Alphabet::of_forms(&[w.clone(), w]), &PathWord::empty()).unwrap();
    assert_eq!(f.max_diff(&NCSeries3::identity(2)), 0.0);
}

#[test]
fn away_from_pole_vanishes() {
    let w = LogForm::single(Axis::X, c(3.0, 0.0), 1);
    assert!(iterated_integral(&[w], &circle(0.0, 1.0, 0.0)).unwrap().norm() < 1e-10);
}

#[test]
fn words_match_nested_quadrature() {
    let fa: &[(C64, i64)] = &[(c(0.0, 1.0), 1), (c(2.0, -0.5), -2)];
    let fb: &[(C64, i64)] = &[(c(-1.0, 0.8), 3)];
    let fc: &[(C64, i64)] = &[(c(1.0, 1.5), -1), (c(0.0, -1.0), 1)];
    let pts = [c(-2.0, 0.0), c(0.5, 0.2), c(2.5, 0.3)];
    let g = polyline(&pts);
    let forms = [LogForm::on_axis(Axis::X, fa.to_vec()), LogForm::on_axis(Axis::X, fb.to_vec()), LogForm::on_axis(Axis::X, fc.to_vec())];
    let f = transport(&Alphabet::of_forms(&forms), &g).unwrap();
    let all = [fa, fb, fc];
    for w in [vec![0, 1], vec![1, 0], vec![0, 1, 2], vec![2, 2, 1], vec![1, 0, 1]] {
        let picked: Vec<&[(C64, i64)]> = w.iter().map(|&i| all[i]).collect();
        let want = nested_oracle(&picked, &pts, 40000);
        assert!((f.coeff(&w) - want).norm() < 1e-6 * want.norm().max(1.0), "{w:?}: {} vs {want}", f.coeff(&w));
    }
}

#[test]
fn torus_pair_residue() {
    // C0 = {x = 0}: sigma runs in y, tau in x
    let wx = LogForm::single(Axis::X, c(0.0, 0.0), 1);
    let wy = LogForm::single(Axis::Y, c(0.0, 0.0), 1);
    let spec = TorusSpec::new(CPoint2::real(0.0, 0.0), Axis::X, 0.1, 0.1);
    let g = torus_boundary(&spec, &[&wx, &wy], None).unwrap();
    let v = iterated_integral(&[wx, wy], &g).unwrap();
    let want = -TWO_PI_I * TWO_PI_I;
    assert!((v - want).norm() < 1e-6 * want.norm(), "{v}");
}

#[test]
fn commutator_of_circles() {
    let (w0, w1) = (LogForm::single(Axis::X, c(0.0, 0.0), 1), LogForm::single(Axis::X, c(1.0, 0.0), 1));
    let a = circle(0.0, 0.5, 0.0);
    let b = circle(1.0, 0.5, PI);
    let o = TransportOptions::default();
    let r = check_commutator([&w0, &w1, &w0], &a, &b, &o).unwrap();
    assert!(r.max() < 1e-6, "{r:?}");
    let f = transport(&Alphabet::of_forms(&[w0.clone(), w1.clone()]), &PathWord::commutator(a.clone(), b.clone()).unwrap()).unwrap();
    let want = TWO_PI_I * TWO_PI_I;
    assert!((f.coeff(&[0, 1]) - want).norm() < 1e-6 * want.norm());
    let same = check_commutator([&w0, &w0, &w1], &a, &a, &o).unwrap();
    assert!(same.max() < 1e-8);
    let f = transport(&Alphabet::of_forms(&[w0.clone(), w0.clone()]), &PathWord::commutator(a.clone(), b).unwrap()).unwrap();
    assert!(f.coeff(&[0, 1]).norm() < 1e-8);
}

#[test]
fn torus_triple_formula() {
    let wx = LogForm::single(Axis::X, c(0.0, 0.0), 1);
    let wy = LogForm::single(Axis::Y, c(0.0, 0.0), 1);
    let wz = LogForm::single(Axis::X, c(2.0, 0.0), -1).add(&LogForm::single(Axis::Y, c(-3.0, 0.0), 2));
    let spec = TorusSpec::new(CPoint2::real(0.0, 0.0), Axis::Y, 0.1, 0.1);
    let r = check_commutator(
        [&wx, &wy, &wz],
        &PathWord::elem(spec.sigma()),
        &PathWord::elem(spec.tau()),
        &TransportOptions::default(),
    )
    .unwrap();
    assert!(r.max() < 1e-6, "{r:?}");
}

#[test]
fn exponential_scheme_is_second_order() {
    let forms = [LogForm::single(Axis::X, c(0.0, 1.0), 1), LogForm::single(Axis::X, c(1.0, -1.0), 2)];
    let pts = [c(-2.0, 0.0), c(2.0, 0.0)];
    let want = nested_oracle(&[&[(c(0.0, 1.0), 1)], &[(c(1.0, -1.0), 2)], &[(c(0.0, 1.0), 1)]], &pts, 100000);
    let err = |h: f64| {
        let o = TransportOptions {
            steps: StepOptions { ratio: 100.0, max_step: h, ..StepOptions::default() },
            scheme: Scheme::Exponential,
        };
        let f = transport_with(&Alphabet::of_forms(&forms), &polyline(&pts), &o).unwrap();
        (f.coeff(&[0, 1, 0]) - want).norm()
    };
    let (e1, e2) = (err(1.0 / 16.0), err(1.0 / 32.0));
    assert!(e1 / e2 >= 3.0, "{e1} {e2}");
}

#[test]
fn schemes_agree() {
    let forms = [LogForm::single(Axis::X, c(0.0, 0.0), 1), LogForm::single(Axis::Y, c(0.0, 0.0), -1)];
    let spec = TorusSpec::new(CPoint2::real(0.0, 0.0), Axis::Y, 0.2, 0.3);
    let g = torus_boundary(&spec, &[&forms[0], &forms[1]], None).unwrap();
    let a = Alphabet::of_forms(&forms);
    let cubic = transport(&a, &g).unwrap();
    let fine = TransportOptions {
        steps: StepOptions { ratio: 0.002, ..StepOptions::default() },
        scheme: Scheme::Exponential,
    };
    let exp = transport_with(&a, &g, &fine).unwrap();
    assert!(cubic.max_diff(&exp) < 1e-4, "{}", cubic.max_diff(&exp));
}

fn tagged(tags: &[(u8, u32)]) -> Alphabet {
    Alphabet::new(
        tags.iter()
            .map(|&t| Letter { name: format!("{t:?}"), form: LogForm::zero(), tag: Some(t) })
            .collect(),
    )
    .unwrap()
}

#[test]
fn projections_on_handmade_series() {
    let alpha = tagged(&[(1, 0), (2, 0), (3, 1), (2, 1), (3, 2)]);
    let mut s = NCSeries3::identity(alpha.len());
    s.set(&[0, 1, 2], c(2.0, 0.0)).unwrap();
    assert_eq!(project_a(&s, &alpha).unwrap(), c(2.0, 0.0));
    s.set(&[0, 3, 4], c(3.0, 0.0)).unwrap();
    assert_eq!(project_a(&s, &alpha).unwrap(), c(5.0, 0.0));
    let mut t = NCSeries3::identity(alpha.len());
    t.set(&[1, 0, 2], c(7.0, 0.0)).unwrap();
    assert_eq!(project_a(&t, &alpha).unwrap(), c(0.0, 0.0));
    // distinct labels: sign of the function-index order
    assert_eq!(b_weight([(1, 0), (2, 1), (3, 2)]), 1);
    assert_eq!(b_weight([(2, 1), (1, 0), (3, 2)]), -1);
    assert_eq!(b_weight([(1, 0), (1, 1), (3, 2)]), 0);
    let mut u = NCSeries3::identity(alpha.len());
    u.set(&[0, 3, 4], c(4.0, 0.0)).unwrap();
    u.set(&[3, 0, 4], c(1.0, 0.0)).unwrap();
    assert_eq!(project_b(&u, &alpha).unwrap(), c(3.0, 0.0));
    assert!(project_a(&u, &Alphabet::of_forms(&[LogForm::zero()])).is_err());
}

fn pole() -> impl Strategy<Value = (C64, i64)> {
    (-3.0..3.0f64, 0.4..2.0f64, prop_oneof![-2i64..=-1, 1i64..=2]).prop_map(|(a, b, m)| (c(a, b), m))
}

fn forms() -> impl Strategy<Value = Vec<LogForm>> {
    prop::collection::vec(prop::collection::vec(pole(), 1..3).prop_map(|p| LogForm::on_axis(Axis::X, p)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shuffle_holds(fs in forms(), pts in prop::collection::vec(-3.0..3.0f64, 2..5)) {
        let pts: Vec<C64> = pts.into_iter().map(|x| c(x, 0.0)).collect();
        prop_assume!(pts.windows(2).all(|w| (w[1] - w[0]).norm() > 1e-3));
        let f = transport(&Alphabet::of_forms(&fs), &polyline(&pts)).unwrap();
        prop_assert!(shuffle_residual(&f) < 1e-8);
    }

    #[test]
    fn composition_holds(fs in forms(), pts in prop::collection::vec(-3.0..3.0f64, 3..6), split in 1usize..4) {
        let pts: Vec<C64> = pts.into_iter().map(|x| c(x, 0.0)).collect();
        prop_assume!(pts.windows(2).all(|w| (w[1] - w[0]).norm() > 1e-3));
        let k = split.min(pts.len() - 2);
        let r = check_composition(&fs, &polyline(&pts[..=k]), &polyline(&pts[k..])).unwrap();
        prop_assert!(r < 1e-8, "{}", r);
        let r = check_composition(&fs, &polyline(&pts), &PathWord::empty()).unwrap();
        prop_assert!(r < 1e-12);
    }

    #[test]
    fn first_order_is_log_integral(fs in forms(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        prop_assume!((a - b).abs() > 1e-3);
        let g = polyline(&[c(a, 0.0), c(b, 0.0)]);
        let f = transport(&Alphabet::of_forms(&fs), &g).unwrap();
        for (i, w) in fs.iter().enumerate() {
            let l = parshin_core::paths::log_integral(w, &g).unwrap();
            prop_assert!((f.coeff(&[i]) - l).norm() < 1e-10);
        }
    }
}
