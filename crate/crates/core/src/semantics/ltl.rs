use super::SatTable;
use crate::error::Result;
use crate::logic::LtlFormula;
use crate::word::{LassoWord, PushdownAlphabet};

/// Direct LTL evaluation over the suffix classes of a lasso; the classes
/// form a lollipop, so `U` is a least fixpoint over it.
pub fn ltl_eval(f: &LtlFormula, alphabet: &PushdownAlphabet, word: &LassoWord) -> Result<SatTable> {
    word.check_alphabet(alphabet)?;
    Ok(eval(f, alphabet, word))
}

fn until(word: &LassoWord, hold: &SatTable, goal: &SatTable) -> SatTable {
    let n = word.class_count();
    let mut t = goal.clone();
    loop {
        let next: Vec<bool> = (0..n)
            .map(|c| goal.0[c] || (hold.0[c] && t.0[word.next_class(c)]))
            .collect();
        if next == t.0 {
            return t;
        }
        t = SatTable(next);
    }
}

fn eval(f: &LtlFormula, alphabet: &PushdownAlphabet, word: &LassoWord) -> SatTable {
    let n = word.class_count();
    let rec = |g: &LtlFormula| eval(g, alphabet, word);
    match f {
        LtlFormula::True => SatTable::constant(n, true),
        LtlFormula::False => SatTable::constant(n, false),
        LtlFormula::Atom(p) => SatTable(
            (0..n)
                .map(|c| alphabet.holds(word.letter_at(c), p))
                .collect(),
        ),
        LtlFormula::Not(g) => rec(g).negate(),
        LtlFormula::And(a, b) => rec(a).zip(&rec(b), |x, y| x && y),
        LtlFormula::Or(a, b) => rec(a).zip(&rec(b), |x, y| x || y),
        LtlFormula::Next(g) => {
            let t = rec(g);
            SatTable((0..n).map(|c| t.0[word.next_class(c)]).collect())
        }
        LtlFormula::Until(a, b) => until(word, &rec(a), &rec(b)),
        LtlFormula::Eventually(g) => until(word, &SatTable::constant(n, true), &rec(g)),
        LtlFormula::Always(g) => {
            until(word, &SatTable::constant(n, true), &rec(g).negate()).negate()
        }
        LtlFormula::Release(a, b) => until(word, &rec(a).negate(), &rec(b).negate()).negate(),
    }
}
