//! Randomized differential suites comparing each translation with an
//! independent semantics:
//!
//! * `aja`: `vldl_to_aja` + the acceptance game against the evaluator;
//! * `stair`: `dpsa_to_vldl` + the evaluator against running the DPSA;
//! * `ltl`: `ltl_to_vldl` + the evaluator against direct LTL semantics.
//!
//! Failing instances are packaged as projects so they can be reloaded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{random_alphabet, random_dpsa, random_instance, random_lasso, random_ltl};
use crate::error::Result;
use crate::logic::{ltl_to_vldl, AutomatonTable, Formula};
use crate::project::Project;
use crate::semantics::{aja_accepts, dpsa_accepts, evaluate, ltl_eval};
use crate::translate::{dpsa_to_vldl, vldl_to_aja};
use crate::word::LassoWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffConfig {
    pub seed: u64,
    pub count: usize,
    pub max_size: usize,
}

#[derive(Debug, Clone)]
pub struct Failure {
    /// Instance size used to pick the minimal failure.
    pub size: usize,
    pub detail: String,
    /// Formula `phi`, word `w` and any automaton under test.
    pub project: Project,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub minimal: Option<Failure>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            cases: 0,
            failures: 0,
            minimal: None,
        }
    }

    fn record(&mut self, failure: Option<Failure>) {
        self.cases += 1;
        if let Some(f) = failure {
            self.failures += 1;
            if self.minimal.as_ref().map_or(true, |m| f.size < m.size) {
                self.minimal = Some(f);
            }
        }
    }
}

fn package(table: &AutomatonTable, f: &Formula, w: &LassoWord) -> Project {
    let mut p = Project::new(table.alphabet().clone());
    p.table = table.clone();
    p.formulas.insert("phi".into(), f.clone());
    p.words.insert("w".into(), w.clone());
    p
}

fn suite_rng(cfg: &DiffConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt))
}

pub fn aja_suite(cfg: &DiffConfig) -> Result<SuiteReport> {
    let mut rng = suite_rng(cfg, 1);
    let mut report = SuiteReport::new("aja");
    for _ in 0..cfg.count {
        let inst = random_instance(&mut rng, cfg.max_size);
        let w = random_lasso(&mut rng, inst.table.alphabet(), 4, 3);
        let expected = evaluate(&inst.formula, &inst.table, &w)?.class(0);
        let got = aja_accepts(&vldl_to_aja(&inst.formula, &inst.table)?, &w)?;
        report.record((got != expected).then(|| Failure {
            size: inst.table.formula_size(&inst.formula).unwrap_or(usize::MAX),
            detail: format!("automaton says {got}, evaluator says {expected}"),
            project: package(&inst.table, &inst.formula, &w),
        }));
    }
    Ok(report)
}

pub fn stair_suite(cfg: &DiffConfig) -> Result<SuiteReport> {
    let mut rng = suite_rng(cfg, 2);
    let mut report = SuiteReport::new("stair");
    for _ in 0..cfg.count {
        let alphabet = random_alphabet(&mut rng, 3);
        let states = rng.gen_range(1..=3);
        let colors = rng.gen_range(1..=2);
        let stack = rng.gen_range(1..=2);
        let d = random_dpsa(&mut rng, &alphabet, states, colors, stack);
        let w = random_lasso(&mut rng, &alphabet, 4, 3);
        let (f, table) = dpsa_to_vldl(&d)?;
        let expected = dpsa_accepts(&d, &w)?;
        let got = evaluate(&f, &table, &w)?.class(0);
        report.record((got != expected).then(|| {
            let mut project = package(&table, &f, &w);
            project.dpsas.insert("d".into(), d.clone());
            Failure {
                size: states,
                detail: format!("formula says {got}, automaton says {expected}"),
                project,
            }
        }));
    }
    Ok(report)
}

pub fn ltl_suite(cfg: &DiffConfig) -> Result<SuiteReport> {
    let mut rng = suite_rng(cfg, 3);
    let mut report = SuiteReport::new("ltl");
    for _ in 0..cfg.count {
        let alphabet = random_alphabet(&mut rng, 3);
        let depth = rng.gen_range(0..=4);
        let g = random_ltl(&mut rng, depth);
        let w = random_lasso(&mut rng, &alphabet, 4, 3);
        let (f, table) = ltl_to_vldl(&g, alphabet.clone())?;
        let expected = ltl_eval(&g, &alphabet, &w)?;
        let got = evaluate(&f, &table, &w)?;
        report.record((got != expected).then(|| Failure {
            size: g.size(),
            detail: format!("LTL formula {g:?}: tables differ"),
            project: package(&table, &f, &w),
        }));
    }
    Ok(report)
}

pub fn run_all(cfg: &DiffConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![aja_suite(cfg)?, stair_suite(cfg)?, ltl_suite(cfg)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let cfg = DiffConfig {
            seed: 7,
            count: 25,
            max_size: 10,
        };
        let a = run_all(&cfg).unwrap();
        let b = run_all(&cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.cases, 25);
            assert_eq!(x.failures, 0, "{}", x.name);
            assert_eq!((x.name, x.cases, x.failures), (y.name, y.cases, y.failures));
        }
    }
}
