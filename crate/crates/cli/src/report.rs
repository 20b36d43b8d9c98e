//! Report documents for every command.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64 as C64;
use parshin_core::curve::{random_tate_instance, tate_symbol, weil_verify, TateInstance};
use parshin_core::exec::Exec;
use parshin_core::fuzz::{check_surface, check_tate};
use parshin_core::iterated::TransportOptions;
use parshin_core::logsym::{
    b_projection_check, closure_checks, default_base, lattice_reciprocity_check, log_surface, log_tate,
    new_symbol_limit, normalize_surface, normalize_tate, surface_default_base, surface_q_factor, exp_relation_residual,
    tate_lattice_check, tate_q_factor, LatticeReport, Normalization, PathChoice, SymbolKind,
};
use parshin_core::parshin::{
    parshin_symbol, random_root_exps_seeded, refined_symbol, three_root_closed_form, three_root_instance, surface_report,
    RootExps, PointRow, WORKED_ROOTS,
};
use parshin_core::paths::StepOptions;
use parshin_core::surface::{all_local_data, intersection_points, random_surface_instance, SurfaceInstance};
use parshin_core::{P1Point, Rat};
use serde::Serialize;

use crate::input::{instances_document, Instance};
use crate::{CliError, Command, RunConfig};

/// Error ratios accepted for the first-order torus limit.
const RATIO_RANGE: (f64, f64) = (1.5, 3.0);
const B_TOLERANCE: f64 = 1e-5;
const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

fn check(name: &str, pass: bool) -> Check {
    Check { name: name.to_string(), pass }
}

#[derive(Clone, Debug, Serialize)]
pub struct TateRow {
    pub point: P1Point,
    pub n1: i64,
    pub n2: i64,
    pub symbol: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilSection {
    pub rows: Vec<TateRow>,
    pub product: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSection {
    pub rows: Vec<PointRow>,
    pub parshin_product: Rat,
    pub refined_product: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogRow {
    pub point: String,
    pub value: C64,
    pub exp_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lattice {
    pub kind: SymbolKind,
    pub sum: C64,
    pub m: i64,
    pub n: i64,
    pub scaled: C64,
    pub residual: f64,
    pub pass: bool,
}

impl From<LatticeReport> for Lattice {
    fn from(r: LatticeReport) -> Self {
        Lattice { kind: r.kind, sum: r.sum, m: r.m, n: 0, scaled: r.scaled, residual: r.residual, pass: r.holds }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusRow {
    pub point: String,
    pub epsilon: Vec<f64>,
    pub errors: Vec<f64>,
    pub ratios: Vec<f64>,
    pub quarter_b_relative_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureSection {
    pub point: String,
    pub cyclic_residual: f64,
    pub additivity_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogSection {
    pub normalization: Normalization,
    pub base: Rat,
    pub symbols: Vec<(SymbolKind, Vec<LogRow>)>,
    pub lattice: Vec<Lattice>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub closures: Vec<ClosureSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub torus: Vec<TorusRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub torus_errors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub model: &'static str,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weil: Option<WeilSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<LogSection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzFailure {
    pub seed: u64,
    pub model: &'static str,
    pub failures: Vec<String>,
    pub dump: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzSection {
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<FuzzFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Example54Row {
    pub exponents: [RootExps; 3],
    pub closed_form: [Rat; 3],
    pub refined: [Rat; 3],
    pub product: Rat,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub instances: Vec<InstanceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub example54: Vec<Example54Row>,
}

fn fmt_c(z: C64) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

impl Report {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", serde_json::to_value(self.config.command).unwrap().as_str().unwrap());
        for r in &self.instances {
            let _ = writeln!(s, "instance {} ({})", r.index, r.model);
            if let Some(w) = &r.weil {
                for row in &w.rows {
                    let _ = writeln!(s, "  {}: ord {} {}, symbol {}", row.point, row.n1, row.n2, row.symbol);
                }
                let _ = writeln!(s, "  product {}", w.product);
            }
            if let Some(t) = &r.surface {
                for row in &t.rows {
                    let _ = writeln!(
                        s,
                        "  ({}, {}): m {:?} n {:?} D {:?} K {} parshin {} refined {}",
                        row.point.0, row.point.1, row.m, row.n, row.d, row.k, row.parshin, row.refined
                    );
                }
                let _ = writeln!(s, "  parshin product {}, refined product {}", t.parshin_product, t.refined_product);
            }
            if let Some(l) = &r.log {
                let _ = writeln!(s, "  base point {}", l.base);
                for (kind, rows) in &l.symbols {
                    for row in rows {
                        let res = row.exp_residual.map(|x| format!(", exp residual {x:.2e}")).unwrap_or_default();
                        let _ = writeln!(s, "  {kind:?} {}: {}{res}", row.point, fmt_c(row.value));
                    }
                }
                for lat in &l.lattice {
                    let _ = writeln!(s, "  {:?} sum/(2 pi i)^d = {} (M {}), residual {:.2e}", lat.kind, fmt_c(lat.scaled), lat.m, lat.residual);
                }
                for c in &l.closures {
                    let _ = writeln!(s, "  {}: cyclic {:.2e}, additivity {:.2e}", c.point, c.cyclic_residual, c.additivity_residual);
                }
                for t in &l.torus {
                    let _ = writeln!(s, "  torus {}: ratios {:?}, -B/4 error {:.2e}", t.point, t.ratios, t.quarter_b_relative_error);
                }
                for e in &l.torus_errors {
                    let _ = writeln!(s, "  torus: {e}");
                }
            }
            for c in &r.checks {
                let _ = writeln!(s, "  {} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
            }
        }
        if let Some(f) = &self.fuzz {
            let _ = writeln!(s, "{}/{} pass", f.passed, f.instances);
            for x in &f.failures {
                let _ = writeln!(s, "  seed {} {}: {} -> {}", x.seed, x.model, x.failures.join(", "), x.dump);
            }
        }
        for (i, r) in self.example54.iter().enumerate() {
            let vals: Vec<String> = r.refined.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{i:2} {:?}: ({}) product {} {}", r.exponents, vals.join(", "), r.product, if r.pass { "ok" } else { "FAIL" });
        }
        let _ = writeln!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

fn finish(index: usize, model: &'static str, checks: Vec<Check>) -> InstanceReport {
    InstanceReport { index, model, pass: checks.iter().all(|c| c.pass), checks, weil: None, surface: None, log: None }
}

fn weil_section(inst: &TateInstance) -> (WeilSection, bool) {
    let r = weil_verify(inst);
    let rows = inst
        .support()
        .into_iter()
        .map(|p| TateRow { n1: inst.f.order_at(&p), n2: inst.g.order_at(&p), symbol: tate_symbol(&inst.f, &inst.g, &p), point: p })
        .collect();
    (WeilSection { rows, product: r.product }, r.holds)
}

fn surface_section(inst: &SurfaceInstance) -> (SurfaceSection, [bool; 3]) {
    let r = surface_report(inst);
    let flags = [r.parshin_ok, r.refined_ok, r.cyclic_ok];
    (SurfaceSection { rows: r.rows, parshin_product: r.parshin_product, refined_product: r.refined_product }, flags)
}

fn tate_log(inst: &TateInstance, tol: f64) -> Result<(LogSection, Vec<Check>), CliError> {
    let (n, shift) = normalize_tate(inst);
    let roots: Vec<Rat> = n.support().iter().filter_map(|p| p.as_finite().cloned()).collect();
    let q = default_base(&roots);
    let o = StepOptions::default();
    let mut rows = Vec::new();
    for p in n.support() {
        let v = log_tate(&n, &p, &q, &PathChoice::Straight, &o)?;
        let qf = tate_q_factor(&n, &p, &q)?;
        let exact = tate_symbol(&n.f, &n.g, &p);
        rows.push(LogRow { point: p.to_string(), value: v.value, exp_residual: Some(exp_relation_residual(v.value, 2, &qf, &exact)) });
    }
    let lattice: Lattice = tate_lattice_check(inst, tol)?.into();
    let checks = vec![
        check("tate exponential relation", rows.iter().all(|r| r.exp_residual.unwrap() <= tol)),
        check("tate lattice reciprocity", lattice.pass),
    ];
    let section = LogSection {
        normalization: Normalization { x: shift, y: None },
        base: q,
        symbols: vec![(SymbolKind::Tate, rows)],
        lattice: vec![lattice],
        closures: vec![],
        torus: vec![],
        torus_errors: vec![],
    };
    Ok((section, checks))
}

fn point_label(p: &(P1Point, P1Point)) -> String {
    format!("({}, {})", p.0, p.1)
}

fn surface_log(inst: &SurfaceInstance, cfg: &RunConfig) -> Result<(LogSection, Vec<Check>), CliError> {
    let tol = cfg.tolerance;
    let (n, normalization) = normalize_surface(inst);
    let q = surface_default_base(&n);
    let o = StepOptions::default();
    let data: Vec<_> = all_local_data(&n).into_iter().filter(|d| !d.is_trivial()).collect();
    let mut symbols = Vec::new();
    let mut exp_ok = true;
    for kind in [SymbolKind::Parshin, SymbolKind::Refined, SymbolKind::New] {
        let mut rows = Vec::new();
        for d in &data {
            let v = log_surface(&n, kind, &d.point, &q, &PathChoice::Straight, &o)?;
            let exp_residual = match kind {
                SymbolKind::Parshin | SymbolKind::Refined => {
                    let exact = if kind == SymbolKind::Parshin { parshin_symbol(d) } else { refined_symbol(d) };
                    let qf = surface_q_factor(&n, kind, &d.point, &q)?;
                    let r = exp_relation_residual(v.value, 3, &qf, &exact);
                    exp_ok &= r <= tol;
                    Some(r)
                }
                _ => None,
            };
            rows.push(LogRow { point: point_label(&d.point), value: v.value, exp_residual });
        }
        symbols.push((kind, rows));
    }
    let lattice: Vec<Lattice> = [SymbolKind::Parshin, SymbolKind::Refined, SymbolKind::New]
        .into_iter()
        .map(|k| lattice_reciprocity_check(&n, k, tol).map(Lattice::from))
        .collect::<Result<_, _>>()?;
    let closures: Vec<ClosureSection> = closure_checks(&n, &q, &o)?
        .into_iter()
        .map(|r| ClosureSection { point: r.point, cyclic_residual: r.cyclic_residual, additivity_residual: r.additivity_residual })
        .collect();

    let eps = [cfg.epsilon, cfg.epsilon / 2.0, cfg.epsilon / 4.0];
    let topts = TransportOptions::default();
    let mut torus = Vec::new();
    let mut torus_errors = Vec::new();
    for d in &data {
        let limit = new_symbol_limit(&n, &d.point, &eps, &topts);
        let b = b_projection_check(&n, &d.point, &eps, &topts);
        match (limit, b) {
            (Ok(l), Ok(b)) => torus.push(TorusRow {
                point: point_label(&d.point),
                epsilon: l.eps,
                errors: l.errors,
                ratios: l.ratios,
                quarter_b_relative_error: b.relative_error,
            }),
            (Err(e), _) | (_, Err(e)) => torus_errors.push(format!("{}: {e}", point_label(&d.point))),
        }
    }
    // ratios only mean something when there is a first-order error to measure
    let ratio_ok = |t: &TorusRow| {
        t.errors[0] < 1e-9 || t.ratios.iter().all(|&r| r >= RATIO_RANGE.0 && r <= RATIO_RANGE.1)
    };
    let checks = vec![
        check("exponential relations", exp_ok),
        check("parshin lattice reciprocity", lattice[0].pass),
        check("refined lattice reciprocity", lattice[1].pass),
        check("bracket lattice reciprocity", lattice[2].pass),
        check("cyclic sum", closures.iter().all(|c| c.cyclic_residual <= CLOSURE_TOLERANCE)),
        check("additivity", closures.iter().all(|c| c.additivity_residual <= CLOSURE_TOLERANCE)),
        check("torus limit", torus_errors.is_empty() && torus.iter().all(ratio_ok)),
        check("torus B projection", torus_errors.is_empty() && torus.iter().all(|t| t.quarter_b_relative_error <= B_TOLERANCE)),
    ];
    Ok((LogSection { normalization, base: q, symbols, lattice, closures, torus, torus_errors }, checks))
}

fn wrong_model(cmd: Command, index: usize, want: &str) -> CliError {
    CliError::Input(format!("instances[{index}]: {} needs a {want} instance", serde_json::to_value(cmd).unwrap().as_str().unwrap()))
}

pub fn for_instances(config: RunConfig, cmd: Command, instances: &[Instance]) -> Result<Report, CliError> {
    let mut out = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let r = match (cmd, inst) {
            (Command::Tate | Command::Verify, Instance::Curve(t)) => {
                let (w, ok) = weil_section(t);
                let mut r = finish(i, "curve", vec![check("weil reciprocity", ok)]);
                r.weil = Some(w);
                r
            }
            (Command::Tate, Instance::Surface(_)) => return Err(wrong_model(cmd, i, "curve")),
            (Command::Parshin | Command::Refined | Command::Verify, Instance::Surface(s)) => {
                let (sec, [p, r, c]) = surface_section(s);
                let checks = match cmd {
                    Command::Parshin => vec![check("parshin reciprocity", p), check("cyclic product", c)],
                    Command::Refined => vec![check("refined reciprocity", r)],
                    _ => vec![check("parshin reciprocity", p), check("refined reciprocity", r), check("cyclic product", c)],
                };
                let mut rep = finish(i, "surface", checks);
                rep.surface = Some(sec);
                rep
            }
            (Command::Parshin | Command::Refined, Instance::Curve(_)) => return Err(wrong_model(cmd, i, "surface")),
            (Command::Log, Instance::Curve(t)) => {
                let (sec, checks) = tate_log(t, config.tolerance)?;
                let mut r = finish(i, "curve", checks);
                r.log = Some(sec);
                r
            }
            (Command::Log, Instance::Surface(s)) => {
                let (sec, checks) = surface_log(s, &config)?;
                let mut r = finish(i, "surface", checks);
                r.log = Some(sec);
                r
            }
            (Command::Fuzz | Command::Example54, _) => unreachable!("handled without input"),
        };
        out.push(r);
    }
    Ok(Report { pass: out.iter().all(|r| r.pass), config, instances: out, fuzz: None, example54: vec![] })
}

pub fn fuzz(config: RunConfig, exec: Exec, dump_dir: &Path) -> Result<Report, CliError> {
    let tol = config.tolerance;
    let seeds: Vec<u64> = (0..config.count as u64).map(|i| config.seed.wrapping_add(i)).collect();
    let results = exec.map(seeds.len(), |i| {
        let s = seeds[i];
        let t = random_tate_instance(s);
        let u = random_surface_instance(s);
        (check_tate(&t, tol, true), check_surface(&u, tol, true), t, u)
    });
    let mut failures = Vec::new();
    let mut passed = 0;
    for (s, (ft, fs, t, u)) in seeds.iter().zip(results) {
        if ft.is_empty() && fs.is_empty() {
            passed += 1;
        }
        for (model, f, inst) in [("curve", ft, Instance::Curve(t)), ("surface", fs, Instance::Surface(u))] {
            if f.is_empty() {
                continue;
            }
            std::fs::create_dir_all(dump_dir)?;
            let path = dump_dir.join(format!("seed-{s}-{model}.json"));
            std::fs::write(&path, instances_document(&[inst]))?;
            failures.push(FuzzFailure { seed: *s, model, failures: f, dump: path.display().to_string() });
        }
    }
    Ok(Report {
        pass: failures.is_empty(),
        fuzz: Some(FuzzSection { instances: seeds.len(), passed, failures }),
        config,
        instances: vec![],
        example54: vec![],
    })
}

fn corpus_exponents() -> Vec<[RootExps; 3]> {
    std::iter::once(WORKED_ROOTS).chain((0..20).map(random_root_exps_seeded)).collect()
}

fn abc() -> (Rat, Rat, Rat) {
    (Rat::zero(), Rat::one(), Rat::from_int(3))
}

/// The worked instance at `(a, b, c) = (0, 1, 3)` and 20 seeded draws.
pub fn example54_corpus() -> Vec<Instance> {
    let (a, b, c) = abc();
    corpus_exponents()
        .iter()
        .map(|e| Instance::Surface(three_root_instance(&a, &b, &c, e).expect("valid exponents")))
        .collect()
}

pub fn example54(config: RunConfig) -> Result<Report, CliError> {
    let (a, b, c) = abc();
    let mut rows = Vec::new();
    for e in corpus_exponents() {
        let inst = three_root_instance(&a, &b, &c, &e)?;
        let closed = three_root_closed_form(&a, &b, &c, &e)?;
        let pts = intersection_points(&inst);
        let data = all_local_data(&inst);
        let refined = [&a, &b, &c].map(|x| {
            pts.iter()
                .position(|p| p.point.0 == P1Point::Finite(x.clone()))
                .map(|j| refined_symbol(&data[j]))
                .unwrap_or_else(Rat::one)
        });
        let product = refined.iter().fold(Rat::one(), |acc, v| acc * v);
        let pass = refined == closed && product.is_one();
        rows.push(Example54Row { exponents: e, closed_form: closed, refined, product, pass });
    }
    Ok(Report { pass: rows.iter().all(|r| r.pass), config, instances: vec![], fuzz: None, example54: rows })
}
