//! LTL and its embedding into VLDL.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{stack_agnostic_guard, AutomatonTable, Formula};
use crate::error::Result;
use crate::word::PushdownAlphabet;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LtlFormula {
    True,
    False,
    Atom(String),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Always(Box<LtlFormula>),
    Release(Box<LtlFormula>, Box<LtlFormula>),
}

impl LtlFormula {
    pub fn atom(p: &str) -> Self {
        LtlFormula::Atom(p.into())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        LtlFormula::Not(Box::new(f))
    }
    pub fn and(a: Self, b: Self) -> Self {
        LtlFormula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Self, b: Self) -> Self {
        LtlFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn next(f: Self) -> Self {
        LtlFormula::Next(Box::new(f))
    }
    pub fn until(a: Self, b: Self) -> Self {
        LtlFormula::Until(Box::new(a), Box::new(b))
    }
    pub fn eventually(f: Self) -> Self {
        LtlFormula::Eventually(Box::new(f))
    }
    pub fn always(f: Self) -> Self {
        LtlFormula::Always(Box::new(f))
    }
    pub fn release(a: Self, b: Self) -> Self {
        LtlFormula::Release(Box::new(a), Box::new(b))
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        use LtlFormula::*;
        match self {
            True | False | Atom(_) => 1,
            Not(f) | Next(f) | Eventually(f) | Always(f) => 1 + f.size(),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        use LtlFormula::*;
        match self {
            True | False | Atom(_) => 0,
            Not(f) | Next(f) | Eventually(f) | Always(f) => 1 + f.depth(),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LtlFormula::*;
        match self {
            True => f.write_str("true"),
            False => f.write_str("false"),
            Atom(p) => f.write_str(p),
            Not(g) => write!(f, "!{g}"),
            And(a, b) => write!(f, "({a} & {b})"),
            Or(a, b) => write!(f, "({a} | {b})"),
            Next(g) => write!(f, "X {g}"),
            Until(a, b) => write!(f, "({a} U {b})"),
            Eventually(g) => write!(f, "F {g}"),
            Always(g) => write!(f, "G {g}"),
            Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

pub const STEP_GUARD: &str = "ltl_step";
pub const ANY_GUARD: &str = "ltl_any";

struct Embedder {
    table: AutomatonTable,
    /// Until-gadgets keyed by their loop obligation.
    until: BTreeMap<Formula, String>,
}

impl Embedder {
    fn alphabet(&self) -> Arc<PushdownAlphabet> {
        self.table.alphabet().clone()
    }

    fn ensure(&mut self, name: &str, looping: bool) -> Result<()> {
        if !self.table.contains(name) {
            let guard = stack_agnostic_guard(&self.alphabet(), looping, looping);
            self.table.insert(name, guard)?;
        }
        Ok(())
    }

    fn until_guard(&mut self, obligation: Formula) -> Result<String> {
        if let Some(name) = self.until.get(&obligation) {
            return Ok(name.clone());
        }
        let name = format!("ltl_until{}", self.until.len());
        let guard =
            stack_agnostic_guard(&self.alphabet(), true, true).with_test(0, obligation.clone());
        self.table.insert(&name, guard)?;
        self.until.insert(obligation, name.clone());
        Ok(name)
    }

    fn embed(&mut self, f: &LtlFormula) -> Result<Formula> {
        use LtlFormula::*;
        let alphabet = self.alphabet();
        Ok(match f {
            True => Formula::tt(&alphabet),
            False => Formula::ff(&alphabet),
            Atom(p) => Formula::atom(p),
            Not(g) => Formula::not(self.embed(g)?),
            And(a, b) => Formula::and(self.embed(a)?, self.embed(b)?),
            Or(a, b) => Formula::or(self.embed(a)?, self.embed(b)?),
            Next(g) => {
                self.ensure(STEP_GUARD, false)?;
                Formula::diamond(STEP_GUARD, self.embed(g)?)
            }
            Eventually(g) => {
                self.ensure(ANY_GUARD, true)?;
                Formula::diamond(ANY_GUARD, self.embed(g)?)
            }
            Always(g) => {
                self.ensure(ANY_GUARD, true)?;
                Formula::boxed(ANY_GUARD, self.embed(g)?)
            }
            Until(a, b) => {
                let a = self.embed(a)?;
                let guard = self.until_guard(a)?;
                Formula::diamond(&guard, self.embed(b)?)
            }
            Release(a, b) => {
                let a = Formula::not(self.embed(a)?);
                let guard = self.until_guard(a)?;
                Formula::boxed(&guard, self.embed(b)?)
            }
        })
    }
}

/// Embeds `f` into VLDL over `alphabet`. The guards read letters of every
/// class (calls push a dummy symbol, returns pop it or ⊥), so the result is
/// equivalent to `f` over mixed pushdown alphabets too.
pub fn ltl_to_vldl(
    f: &LtlFormula,
    alphabet: Arc<PushdownAlphabet>,
) -> Result<(Formula, AutomatonTable)> {
    let mut e = Embedder {
        table: AutomatonTable::new(alphabet),
        until: BTreeMap::new(),
    };
    let out = e.embed(f)?;
    Ok((out, e.table))
}
