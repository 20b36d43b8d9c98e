//! Seeded fuzz batches over random curve and surface instances.

use serde::{Deserialize, Serialize};

use crate::curve::{random_tate_instance, weil_verify, TateInstance};
use crate::exec::Exec;
use crate::logsym::{
    closure_checks, lattice_reciprocity_check, normalize_surface, normalize_tate, surface_default_base,
    surface_exp_relations, tate_exp_relations, tate_lattice_check, default_base, PathChoice, SymbolKind,
};
use crate::parshin::surface_report;
use crate::paths::StepOptions;
use crate::surface::{random_surface_instance, SurfaceInstance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    /// Run the numeric logarithmic checks, not only the exact ones.
    pub logs: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { seed: 0, count: 100, tol: 1e-6, logs: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzOutcome {
    pub seed: u64,
    pub passed: bool,
    /// Names of the failed checks, or the error that stopped the run.
    pub failures: Vec<String>,
}

fn outcome(seed: u64, failures: Vec<String>) -> FuzzOutcome {
    FuzzOutcome { seed, passed: failures.is_empty(), failures }
}

pub fn check_tate(inst: &TateInstance, tol: f64, logs: bool) -> Vec<String> {
    let mut bad = Vec::new();
    if !weil_verify(inst).holds {
        bad.push("weil".into());
    }
    if !logs {
        return bad;
    }
    match tate_lattice_check(inst, tol) {
        Ok(r) if r.holds => {}
        Ok(_) => bad.push("tate-lattice".into()),
        Err(e) => bad.push(format!("tate-lattice: {e}")),
    }
    let (n, _) = normalize_tate(inst);
    let roots: Vec<_> = n.support().iter().filter_map(|p| p.as_finite().cloned()).collect();
    match tate_exp_relations(&n, &default_base(&roots), &PathChoice::Straight, &StepOptions::default()) {
        Ok(rows) if rows.iter().all(|r| r.residual <= tol) => {}
        Ok(_) => bad.push("tate-exp".into()),
        Err(e) => bad.push(format!("tate-exp: {e}")),
    }
    bad
}

pub fn check_surface(inst: &SurfaceInstance, tol: f64, logs: bool) -> Vec<String> {
    let mut bad = Vec::new();
    let r = surface_report(inst);
    for (ok, name) in [(r.parshin_ok, "parshin"), (r.refined_ok, "refined"), (r.cyclic_ok, "cyclic-product")] {
        if !ok {
            bad.push(name.into());
        }
    }
    if !logs {
        return bad;
    }
    for kind in [SymbolKind::Parshin, SymbolKind::Refined] {
        match lattice_reciprocity_check(inst, kind, tol) {
            Ok(r) if r.holds => {}
            Ok(_) => bad.push(format!("{kind:?}-lattice").to_lowercase()),
            Err(e) => bad.push(format!("{kind:?}-lattice: {e}").to_lowercase()),
        }
    }
    let (n, _) = normalize_surface(inst);
    let q = surface_default_base(&n);
    let o = StepOptions::default();
    for kind in [SymbolKind::Parshin, SymbolKind::Refined] {
        match surface_exp_relations(&n, kind, &q, &PathChoice::Straight, &o) {
            Ok(rows) if rows.iter().all(|r| r.residual <= tol) => {}
            Ok(_) => bad.push(format!("{kind:?}-exp").to_lowercase()),
            Err(e) => bad.push(format!("{kind:?}-exp: {e}").to_lowercase()),
        }
    }
    match closure_checks(&n, &q, &o) {
        Ok(rows) if rows.iter().all(|r| r.cyclic_residual <= 1e-9) => {}
        Ok(_) => bad.push("cyclic-sum".into()),
        Err(e) => bad.push(format!("cyclic-sum: {e}")),
    }
    bad
}

/// Instance `i` of a batch uses seed `seed + i`.
pub fn fuzz_tate(cfg: &FuzzConfig, exec: Exec) -> Vec<FuzzOutcome> {
    exec.map(cfg.count, |i| {
        let s = cfg.seed.wrapping_add(i as u64);
        outcome(s, check_tate(&random_tate_instance(s), cfg.tol, cfg.logs))
    })
}

pub fn fuzz_surface(cfg: &FuzzConfig, exec: Exec) -> Vec<FuzzOutcome> {
    exec.map(cfg.count, |i| {
        let s = cfg.seed.wrapping_add(i as u64);
        outcome(s, check_surface(&random_surface_instance(s), cfg.tol, cfg.logs))
    })
}
